#![allow(dead_code)]

use rand::Rng;
use segspectral::ConnectionMatrix;

/// Band matrix whose connected components are the contiguous blocks given
/// by `sizes`, with in-block weights drawn from `[0.1, 1]` and every
/// cross-block entry drawn from `[0, coupling * min in-block weight]`.
pub struct BlockInstance {
    pub w: ConnectionMatrix,
    pub components: Vec<Vec<usize>>,
}

pub fn random_sizes<R: Rng>(rng: &mut R, n: usize, c: usize) -> Vec<usize> {
    assert!(c >= 1 && c <= n);
    // choose c - 1 distinct cut points in 1..n
    let mut cuts: Vec<usize> = Vec::new();
    while cuts.len() < c - 1 {
        let x = rng.random_range(1..n);
        if !cuts.contains(&x) {
            cuts.push(x);
        }
    }
    cuts.sort_unstable();
    let mut sizes = Vec::with_capacity(c);
    let mut prev = 0;
    for &x in cuts.iter().chain(std::iter::once(&n)) {
        sizes.push(x - prev);
        prev = x;
    }
    sizes
}

pub fn block_instance<R: Rng>(rng: &mut R, sizes: &[usize], coupling: f64) -> BlockInstance {
    let n: usize = sizes.iter().sum();
    let mut owner = Vec::with_capacity(n);
    let mut components = Vec::new();
    let mut start = 0;
    for (b, &s) in sizes.iter().enumerate() {
        owner.extend(std::iter::repeat_n(b, s));
        components.push((start..start + s).collect());
        start += s;
    }
    let mut off1 = vec![0.0; n - 1];
    let mut off2 = vec![0.0; n.saturating_sub(2)];
    let mut min_in = f64::INFINITY;
    for i in 0..n - 1 {
        if owner[i] == owner[i + 1] {
            off1[i] = rng.random_range(0.1..=1.0);
            min_in = min_in.min(off1[i]);
        }
    }
    for i in 0..n.saturating_sub(2) {
        if owner[i] == owner[i + 2] && rng.random_bool(0.5) {
            off2[i] = rng.random_range(0.1..=1.0);
            min_in = min_in.min(off2[i]);
        }
    }
    if coupling > 0.0 && min_in.is_finite() {
        let cap = coupling * min_in;
        for i in 0..n - 1 {
            if owner[i] != owner[i + 1] {
                off1[i] = rng.random_range(0.0..=cap);
            }
        }
        for i in 0..n.saturating_sub(2) {
            if owner[i] != owner[i + 2] {
                off2[i] = rng.random_range(0.0..=cap);
            }
        }
    }
    BlockInstance {
        w: ConnectionMatrix::from_bands(vec![1.0; n], off1, off2).unwrap(),
        components,
    }
}

/// True when `labels` induce exactly the partition `components`.
pub fn labels_match(labels: &[usize], components: &[Vec<usize>]) -> bool {
    let mut used = Vec::new();
    for comp in components {
        let l = labels[comp[0]];
        if comp.iter().any(|&i| labels[i] != l) || used.contains(&l) {
            return false;
        }
        used.push(l);
    }
    true
}

/// Contiguous runs of equal labels, as index sets.
pub fn runs(labels: &[usize]) -> Vec<Vec<usize>> {
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for (i, &l) in labels.iter().enumerate() {
        match parts.last_mut() {
            Some(p) if labels[p[0]] == l => p.push(i),
            _ => parts.push(vec![i]),
        }
    }
    parts
}
