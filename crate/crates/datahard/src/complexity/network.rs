use crate::data::{distance_matrix, Dataset};
use crate::error::{Error, Result};

/// Measures on the ε-NN graph: vertices are instances, edges join
/// same-class pairs closer than 15% of the largest pairwise distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkMeasures {
    /// 1 − |E| / (n(n−1)/2).
    pub density: f64,
    /// 1 − mean local clustering coefficient.
    pub cls_coef: f64,
    /// 1 − mean degree-weighted hub score.
    pub hubs: f64,
}

pub fn network_measures(data: &Dataset) -> Result<NetworkMeasures> {
    let n = data.n_instances();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "network measures need n ≥ 3, got {n}"
        )));
    }
    let dist = distance_matrix(data);
    let eps = 0.15 * dist.max();

    let mut adj = vec![vec![false; n]; n];
    let mut edges = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if data.label(i) == data.label(j) && dist.get(i, j) < eps {
                adj[i][j] = true;
                adj[j][i] = true;
                edges += 1;
            }
        }
    }
    let degree: Vec<usize> = adj.iter().map(|row| row.iter().filter(|&&e| e).count()).collect();

    let density = 1.0 - edges as f64 / (n * (n - 1) / 2) as f64;

    let mean_cc = (0..n)
        .map(|v| {
            // With no pair of neighbors to disconnect, the neighborhood
            // is vacuously a clique.
            if degree[v] < 2 {
                return 1.0;
            }
            let nbrs: Vec<usize> = (0..n).filter(|&u| adj[v][u]).collect();
            let mut linked = 0usize;
            for (a, &p) in nbrs.iter().enumerate() {
                for &q in &nbrs[a + 1..] {
                    if adj[p][q] {
                        linked += 1;
                    }
                }
            }
            2.0 * linked as f64 / (degree[v] * (degree[v] - 1)) as f64
        })
        .sum::<f64>()
        / n as f64;
    let cls_coef = 1.0 - mean_cc;

    // Hub score: total degree of a vertex's neighbors, scaled by the
    // largest such total. An edgeless graph scores everyone zero.
    let raw: Vec<f64> = (0..n)
        .map(|v| (0..n).filter(|&u| adj[v][u]).map(|u| degree[u] as f64).sum())
        .collect();
    let top = raw.iter().fold(0.0f64, |a, &b| a.max(b));
    let mean_hub = if top == 0.0 {
        0.0
    } else {
        raw.iter().map(|&h| h / top).sum::<f64>() / n as f64
    };
    let hubs = 1.0 - mean_hub;

    Ok(NetworkMeasures { density, cls_coef, hubs })
}
