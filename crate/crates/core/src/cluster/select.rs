use crate::error::{check_param, Error, Result};
use crate::linalg::CorrelationEstimate;

use super::ClusterPartition;

/// Greedy seed-and-grow search for a set whose pairwise correlations are all
/// at least `rho_u`.
///
/// Seeds are the qualifying pairs in decreasing order of correlation. From a
/// seed, the set grows by the outside asset whose smallest correlation to the
/// set is largest, while that value stays at or above `rho_u` and the size is
/// below `max_size`. The first grown set reaching `min_size` is returned,
/// sorted. Ties go to the lowest index.
pub fn find_cluster(
    c: &CorrelationEstimate,
    rho_u: f64,
    min_size: usize,
    max_size: usize,
) -> Result<Option<Vec<usize>>> {
    check_param("rho_u", rho_u, rho_u > 0.0 && rho_u < 1.0 + 1e-12, "must lie in (0, 1]")?;
    check_param("min_size", min_size as f64, min_size >= 2, "must be at least 2")?;
    check_param("max_size", max_size as f64, max_size >= min_size, "must be at least min_size")?;
    let n = c.dim();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if c.get(i, j) >= rho_u {
                pairs.push((i, j));
            }
        }
    }
    // stable sort keeps (i, j) order among equal correlations
    pairs.sort_by(|a, b| c.get(b.0, b.1).total_cmp(&c.get(a.0, a.1)));

    let mut min_to_set = vec![0.0; n];
    for &(a, b) in &pairs {
        let mut members = vec![a, b];
        let mut inside = vec![false; n];
        inside[a] = true;
        inside[b] = true;
        for v in 0..n {
            min_to_set[v] = c.get(v, a).min(c.get(v, b));
        }
        while members.len() < max_size {
            let mut best: Option<usize> = None;
            for v in 0..n {
                if inside[v] || min_to_set[v] < rho_u {
                    continue;
                }
                if best.is_none_or(|w| min_to_set[v] > min_to_set[w]) {
                    best = Some(v);
                }
            }
            let Some(v) = best else { break };
            inside[v] = true;
            members.push(v);
            for w in 0..n {
                min_to_set[w] = min_to_set[w].min(c.get(w, v));
            }
        }
        if members.len() >= min_size {
            members.sort_unstable();
            return Ok(Some(members));
        }
    }
    Ok(None)
}

/// Assets weakly correlated with the cluster and with each other.
///
/// Candidates are the assets outside `cluster` with `|c_ij| ≤ rho_d1` for all
/// cluster members. Among them, pairs with `|c_kl| > rho_d2` conflict; a
/// conflict-free set is built by repeatedly taking the candidate with the
/// fewest remaining conflicts (lowest index on ties) and discarding its
/// neighbours. The result is sorted and may be empty.
pub fn find_background(
    c: &CorrelationEstimate,
    cluster: &[usize],
    rho_d1: f64,
    rho_d2: f64,
) -> Result<Vec<usize>> {
    check_param("rho_d1", rho_d1, rho_d1 >= 0.0, "must be non-negative")?;
    check_param("rho_d2", rho_d2, rho_d2 >= rho_d1, "must be at least rho_d1")?;
    let n = c.dim();
    let mut in_cluster = vec![false; n];
    for &i in cluster {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, dim: n });
        }
        in_cluster[i] = true;
    }
    let cand: Vec<usize> = (0..n)
        .filter(|&j| !in_cluster[j] && cluster.iter().all(|&i| c.get(i, j).abs() <= rho_d1))
        .collect();
    let m = cand.len();
    let conflict = |a: usize, b: usize| c.get(cand[a], cand[b]).abs() > rho_d2;
    let mut alive = vec![true; m];
    let mut degree: Vec<usize> = (0..m)
        .map(|a| (0..m).filter(|&b| b != a && conflict(a, b)).count())
        .collect();
    let mut out = Vec::new();
    loop {
        let pick = (0..m).filter(|&a| alive[a]).min_by_key(|&a| (degree[a], a));
        let Some(a) = pick else { break };
        out.push(cand[a]);
        alive[a] = false;
        let removed: Vec<usize> = (0..m).filter(|&b| alive[b] && conflict(a, b)).collect();
        for &b in &removed {
            alive[b] = false;
        }
        for &b in &removed {
            for x in 0..m {
                if alive[x] && conflict(b, x) {
                    degree[x] -= 1;
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Average off-diagonal correlation inside `cluster`.
pub fn mean_rho(c: &CorrelationEstimate, cluster: &[usize]) -> Result<f64> {
    let k = cluster.len();
    if k < 2 {
        return Err(Error::TooShort {
            what: "cluster",
            len: k,
            min: 2,
        });
    }
    let n = c.dim();
    let mut sum = 0.0;
    for &i in cluster {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, dim: n });
        }
        for &j in cluster {
            if i != j {
                sum += c.get(i, j);
            }
        }
    }
    Ok(sum / (k * (k - 1)) as f64)
}

/// The submatrix on cluster indices followed by background indices.
/// Its rectangularity ratio is rescaled to the new dimension.
pub fn assemble(c: &CorrelationEstimate, p: &ClusterPartition) -> Result<CorrelationEstimate> {
    let n = c.dim();
    if p.source_dim != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.source_dim,
        });
    }
    let idx = p.ordered();
    if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: bad, dim: n });
    }
    let q = c.rect_ratio() * idx.len() as f64 / n as f64;
    CorrelationEstimate::new(c.matrix().principal_submatrix(&idx), q)
}
