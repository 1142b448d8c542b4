use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{SpectralEmbedding, SpectralError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KMeansInit {
    /// D²-weighted seeding.
    PlusPlus,
    /// Rows `floor(j * n / k)` for `j = 0..k`.
    EvenRows,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansConfig {
    pub init: KMeansInit,
    /// Standard deviation of the Gaussian jitter added to every coordinate
    /// before clustering. Zero disables it.
    pub jitter_sd: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        KMeansConfig {
            init: KMeansInit::PlusPlus,
            jitter_sd: 0.001,
            max_iter: 100,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabels {
    pub labels: Vec<usize>,
    pub k: usize,
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

struct Points {
    n: usize,
    dim: usize,
    data: Vec<f64>,
}

impl Points {
    fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }
}

/// Lloyd's algorithm on the embedding rows.
///
/// Stops when an assignment pass changes no label, or after `max_iter`
/// passes. Every cluster in the result is nonempty.
pub fn kmeans_cluster(
    u: &SpectralEmbedding,
    k: usize,
    cfg: &KMeansConfig,
) -> Result<ClusterLabels, SpectralError> {
    let n = u.rows();
    if k == 0 || k > n {
        return Err(SpectralError::BadK { k, n });
    }
    if k == 1 {
        return Ok(ClusterLabels { labels: vec![0; n], k });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let dim = u.dim();
    let mut data: Vec<f64> = (0..n).flat_map(|i| u.row(i).to_vec()).collect();
    if cfg.jitter_sd > 0.0 {
        let noise = Normal::new(0.0, cfg.jitter_sd).expect("finite positive sd");
        data.iter_mut().for_each(|x| *x += noise.sample(&mut rng));
    }
    let pts = Points { n, dim, data };

    let mut centers = match cfg.init {
        KMeansInit::PlusPlus => plus_plus(&pts, k, &mut rng),
        KMeansInit::EvenRows => (0..k).map(|j| pts.row(j * n / k).to_vec()).collect(),
    };

    let mut labels = assign(&pts, &centers);
    repair_empty(&pts, &mut labels, &mut centers);
    for _ in 0..cfg.max_iter {
        centers = means(&pts, &labels, k);
        let mut next = assign(&pts, &centers);
        repair_empty(&pts, &mut next, &mut centers);
        if next == labels {
            break;
        }
        labels = next;
    }
    Ok(ClusterLabels { labels, k })
}

fn plus_plus(pts: &Points, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut chosen = vec![rng.random_range(0..pts.n)];
    let mut best: Vec<f64> = (0..pts.n).map(|i| dist2(pts.row(i), pts.row(chosen[0]))).collect();
    while chosen.len() < k {
        let total: f64 = best.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut pick = None;
            for (i, &w) in best.iter().enumerate() {
                if w > 0.0 {
                    pick = Some(i);
                    if target < w {
                        break;
                    }
                    target -= w;
                }
            }
            pick.expect("positive total implies a positive weight")
        } else {
            // all remaining points coincide with a center
            (0..pts.n).find(|i| !chosen.contains(i)).expect("k <= n")
        };
        chosen.push(next);
        for (i, b) in best.iter_mut().enumerate() {
            *b = b.min(dist2(pts.row(i), pts.row(next)));
        }
    }
    chosen.into_iter().map(|i| pts.row(i).to_vec()).collect()
}

fn assign(pts: &Points, centers: &[Vec<f64>]) -> Vec<usize> {
    (0..pts.n)
        .map(|i| {
            let row = pts.row(i);
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (c, center) in centers.iter().enumerate() {
                let d = dist2(row, center);
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            best
        })
        .collect()
}

fn means(pts: &Points, labels: &[usize], k: usize) -> Vec<Vec<f64>> {
    let mut sums = vec![vec![0.0; pts.dim]; k];
    let mut counts = vec![0usize; k];
    for (i, &l) in labels.iter().enumerate() {
        counts[l] += 1;
        for (s, x) in sums[l].iter_mut().zip(pts.row(i)) {
            *s += x;
        }
    }
    for (s, &c) in sums.iter_mut().zip(&counts) {
        if c > 0 {
            s.iter_mut().for_each(|x| *x /= c as f64);
        }
    }
    sums
}

/// Gives each empty cluster the point farthest from its current center,
/// taken from a cluster that can spare it.
fn repair_empty(pts: &Points, labels: &mut [usize], centers: &mut [Vec<f64>]) {
    let k = centers.len();
    let mut counts = vec![0usize; k];
    labels.iter().for_each(|&l| counts[l] += 1);
    while let Some(empty) = counts.iter().position(|&c| c == 0) {
        let donor = (0..pts.n)
            .filter(|&i| counts[labels[i]] >= 2)
            .map(|i| (i, dist2(pts.row(i), &centers[labels[i]])))
            .fold(None, |acc: Option<(usize, f64)>, (i, d)| match acc {
                Some((_, bd)) if bd >= d => acc,
                _ => Some((i, d)),
            })
            .map(|(i, _)| i)
            .expect("k <= n guarantees a cluster with two or more points");
        counts[labels[donor]] -= 1;
        labels[donor] = empty;
        counts[empty] += 1;
        centers[empty] = pts.row(donor).to_vec();
    }
}
