use serde::{Deserialize, Serialize};

use super::SpectralError;
use crate::graph::ConnectionMatrix;

/// Enumeration guard for [`brute_force_best_contiguous`].
pub const MAX_BRUTE_FORCE_N: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutKind {
    /// `sum_i W(A_i, A_i^c) / |A_i|`
    RatioCut,
    /// `sum_i W(A_i, A_i^c) / vol(A_i)`
    NormalizedCut,
}

/// Checks that `parts` are nonempty, disjoint and cover `0..n`.
pub fn validate_partition(parts: &[Vec<usize>], n: usize) -> Result<(), SpectralError> {
    let mut owner = vec![false; n];
    for (p, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(SpectralError::BadPartition(format!("part {p} is empty")));
        }
        for &i in part {
            if i >= n {
                return Err(SpectralError::BadPartition(format!("index {i} out of range 0..{n}")));
            }
            if std::mem::replace(&mut owner[i], true) {
                return Err(SpectralError::BadPartition(format!("index {i} appears twice")));
            }
        }
    }
    if let Some(i) = owner.iter().position(|&o| !o) {
        return Err(SpectralError::BadPartition(format!("index {i} not covered")));
    }
    Ok(())
}

/// Exact objective of `partition` on `w`. Volumes use degrees that include
/// the self-loop; a zero-volume part contributes zero.
pub fn cut_objective(w: &ConnectionMatrix, partition: &[Vec<usize>], kind: CutKind) -> Result<f64, SpectralError> {
    let n = w.n();
    validate_partition(partition, n)?;
    let mut owner = vec![0usize; n];
    for (p, part) in partition.iter().enumerate() {
        for &i in part {
            owner[i] = p;
        }
    }
    let degrees = w.degrees();
    let mut total = 0.0;
    for (p, part) in partition.iter().enumerate() {
        let mut cut = 0.0;
        for &i in part {
            for j in i.saturating_sub(2)..=(i + 2).min(n - 1) {
                if owner[j] != p {
                    cut += w.get(i, j);
                }
            }
        }
        let size = match kind {
            CutKind::RatioCut => part.len() as f64,
            CutKind::NormalizedCut => part.iter().map(|&i| degrees[i]).sum(),
        };
        if size > 0.0 {
            total += cut / size;
        }
    }
    Ok(total)
}

/// Best contiguous segmentation found by [`brute_force_best_contiguous`].
#[derive(Debug, Clone, PartialEq)]
pub struct ContiguousOptimum {
    /// Start index of every part after the first, ascending.
    pub boundaries: Vec<usize>,
    pub parts: Vec<Vec<usize>>,
    pub objective: f64,
}

pub(crate) fn parts_from_boundaries(n: usize, boundaries: &[usize]) -> Vec<Vec<usize>> {
    let mut starts = vec![0];
    starts.extend_from_slice(boundaries);
    starts.push(n);
    starts.windows(2).map(|w| (w[0]..w[1]).collect()).collect()
}

/// Exhaustive search over all `C(n-1, k-1)` ways to cut `0..n` into `k`
/// contiguous parts. Ties go to the lexicographically smallest boundary set.
pub fn brute_force_best_contiguous(
    w: &ConnectionMatrix,
    k: usize,
    kind: CutKind,
) -> Result<ContiguousOptimum, SpectralError> {
    let n = w.n();
    if n > MAX_BRUTE_FORCE_N {
        return Err(SpectralError::TooLarge { n, max: MAX_BRUTE_FORCE_N });
    }
    if k == 0 || k > n {
        return Err(SpectralError::BadK { k, n });
    }
    let mut best: Option<ContiguousOptimum> = None;
    // boundaries drawn from 1..n, enumerated in lexicographic order
    let mut b: Vec<usize> = (1..k).collect();
    loop {
        let parts = parts_from_boundaries(n, &b);
        let obj = cut_objective(w, &parts, kind)?;
        if best.as_ref().is_none_or(|cur| obj < cur.objective) {
            best = Some(ContiguousOptimum {
                boundaries: b.clone(),
                parts,
                objective: obj,
            });
        }
        if !next_boundaries(&mut b, n) {
            break;
        }
    }
    Ok(best.expect("at least one combination"))
}

/// Advances `b` (strictly increasing values in `1..n`) to the next
/// combination in lexicographic order. Returns false after the last one.
fn next_boundaries(b: &mut [usize], n: usize) -> bool {
    let m = b.len();
    let Some(pos) = (0..m).rev().find(|&i| b[i] < n - m + i) else {
        return false;
    };
    b[pos] += 1;
    for i in pos + 1..m {
        b[i] = b[i - 1] + 1;
    }
    true
}
