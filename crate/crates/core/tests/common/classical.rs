//! Plain-arithmetic reference for the clustering procedure. No simulator
//! code is used here; distances come straight from coordinates.

#![allow(dead_code)]

/// Classical ties: values within this band resolve to the lowest index.
pub const TIE: f64 = 1e-9;

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn mean(points: &[Vec<f64>]) -> Vec<f64> {
    let mut out = vec![0.0; points[0].len()];
    for p in points {
        for (o, x) in out.iter_mut().zip(p) {
            *o += x;
        }
    }
    out.iter().map(|x| x / points.len() as f64).collect()
}

pub fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..values.len() {
        if values[i] < values[best] - TIE {
            best = i;
        }
    }
    best
}

/// Member nearest the mean of `points`.
pub fn median_index(points: &[Vec<f64>]) -> usize {
    let m = mean(points);
    argmin(&points.iter().map(|p| dist(p, &m)).collect::<Vec<_>>())
}

pub fn assign(points: &[Vec<f64>], medians: &[usize]) -> Vec<usize> {
    points
        .iter()
        .map(|p| argmin(&medians.iter().map(|&j| dist(p, &points[j])).collect::<Vec<_>>()))
        .collect()
}

pub struct Round {
    pub medians: Vec<usize>,
    pub assignment: Vec<usize>,
    pub new_medians: Vec<usize>,
}

/// Returns the rounds and whether the loop converged.
pub fn k_medians(points: &[Vec<f64>], init: &[usize], max_rounds: usize) -> (Vec<Round>, bool) {
    let mut medians = init.to_vec();
    let mut rounds = Vec::new();
    for _ in 0..max_rounds {
        let assignment = assign(points, &medians);
        let mut new_medians = medians.clone();
        for (c, median) in new_medians.iter_mut().enumerate() {
            let members: Vec<usize> = (0..points.len()).filter(|&i| assignment[i] == c).collect();
            if members.is_empty() {
                continue;
            }
            let sub: Vec<Vec<f64>> = members.iter().map(|&i| points[i].clone()).collect();
            *median = members[median_index(&sub)];
        }
        let mut a = medians.clone();
        let mut b = new_medians.clone();
        a.sort_unstable();
        b.sort_unstable();
        rounds.push(Round {
            medians: medians.clone(),
            assignment,
            new_medians: new_medians.clone(),
        });
        if a == b {
            return (rounds, true);
        }
        medians = new_medians;
    }
    (rounds, false)
}
