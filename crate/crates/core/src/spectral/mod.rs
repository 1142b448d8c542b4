//! Spectral partitioning of sentence graphs.
//!
//! Laplacian construction, a dense symmetric eigensolver, eigenvalue-count
//! model selection, row embeddings, k-means, and the ratio/normalized cut
//! objectives together with an exhaustive contiguous-partition oracle.

mod cut;
mod eigen;
mod kmeans;
mod laplacian;

pub use cut::{brute_force_best_contiguous, cut_objective, validate_partition, ContiguousOptimum, CutKind};
pub use eigen::{eigh_symmetric, EigenDecomposition, EPS_ORTH, EPS_RESID, EPS_SYM, MAX_SWEEPS};
pub use kmeans::{kmeans_cluster, ClusterLabels, KMeansConfig, KMeansInit};
pub use laplacian::{build_laplacian, LaplacianForm};

use thiserror::Error;

use crate::graph::ConnectionMatrix;

/// Threshold under which an eigenvalue counts as zero.
pub const EPS_ZERO: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("node {index} has nonpositive degree {degree}; normalized Laplacian undefined")]
    NonPositiveDegree { index: usize, degree: f64 },
    #[error("matrix is not symmetric: |a[{i},{j}] - a[{j},{i}]| = {diff:e}")]
    NotSymmetric { i: usize, j: usize, diff: f64 },
    #[error("eigensolver did not converge within {cap} sweeps")]
    NoConvergence { cap: usize },
    #[error("embedding dimension k = {k} out of range for n = {n}")]
    BadK { k: usize, n: usize },
    #[error("invalid partition: {0}")]
    BadPartition(String),
    #[error("brute-force search limited to n <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("matrix size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
}

/// Square row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Panics if `data.len() != n * n`.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n, "row-major data must hold n*n entries");
        DenseMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Number of eigenvalues at or below `eig_cut`, never less than one.
pub fn choose_k(values: &[f64], eig_cut: f64) -> usize {
    values.iter().filter(|&&v| v <= eig_cut).count().max(1)
}

/// Number of eigenvalues with `|lambda| <= eps0`.
pub fn zero_eig_multiplicity(dec: &EigenDecomposition, eps0: f64) -> usize {
    dec.values().iter().filter(|v| v.abs() <= eps0).count()
}

/// Rows of the first `k` eigenvectors, one row per node.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralEmbedding {
    rows: usize,
    k: usize,
    data: Vec<f64>,
    form: LaplacianForm,
    row_normalized: bool,
}

impl SpectralEmbedding {
    /// Wraps arbitrary row data, for clustering points that did not come
    /// from an eigendecomposition.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let k = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == k), "ragged rows");
        SpectralEmbedding {
            rows: rows.len(),
            k,
            data: rows.iter().flatten().copied().collect(),
            form: LaplacianForm::Unnormalized,
            row_normalized: false,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.k..(i + 1) * self.k]
    }

    pub fn form(&self) -> LaplacianForm {
        self.form
    }

    pub fn row_normalized(&self) -> bool {
        self.row_normalized
    }
}

/// Takes the first `k` eigenvector columns; under the normalized form every
/// nonzero row is rescaled to unit length.
pub fn spectral_embed(
    dec: &EigenDecomposition,
    k: usize,
    form: LaplacianForm,
) -> Result<SpectralEmbedding, SpectralError> {
    let n = dec.n();
    if k == 0 || k > n {
        return Err(SpectralError::BadK { k, n });
    }
    let mut data = Vec::with_capacity(n * k);
    for i in 0..n {
        let start = data.len();
        data.extend((0..k).map(|j| dec.vector_entry(i, j)));
        if form == LaplacianForm::SymmetricNormalized {
            let row = &mut data[start..];
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                row.iter_mut().for_each(|x| *x /= norm);
            }
        }
    }
    Ok(SpectralEmbedding {
        rows: n,
        k,
        data,
        form,
        row_normalized: form == LaplacianForm::SymmetricNormalized,
    })
}

/// Frobenius distance between the projector onto the span of the component
/// indicator vectors (scaled by `D^{1/2}` under the normalized form) and the
/// projector onto the numerically-zero eigenspace.
pub fn indicator_span_residual(
    dec: &EigenDecomposition,
    w: &ConnectionMatrix,
    components: &[Vec<usize>],
    form: LaplacianForm,
    eps0: f64,
) -> Result<f64, SpectralError> {
    let n = w.n();
    if dec.n() != n {
        return Err(SpectralError::SizeMismatch { expected: n, got: dec.n() });
    }
    validate_partition(components, n)?;
    let degrees = w.degrees();
    let mut diff = DenseMatrix::zeros(n);

    // Indicators of disjoint sets are orthogonal; normalizing each is enough.
    for comp in components {
        let mut v = vec![0.0; n];
        for &i in comp {
            v[i] = match form {
                LaplacianForm::Unnormalized => 1.0,
                LaplacianForm::SymmetricNormalized => degrees[i].sqrt(),
            };
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(SpectralError::BadPartition("component with zero degree mass".into()));
        }
        for &i in comp {
            for &j in comp {
                diff[(i, j)] += v[i] * v[j] / (norm * norm);
            }
        }
    }
    for (j, &lambda) in dec.values().iter().enumerate() {
        if lambda.abs() <= eps0 {
            for a in 0..n {
                let va = dec.vector_entry(a, j);
                for b in 0..n {
                    diff[(a, b)] -= va * dec.vector_entry(b, j);
                }
            }
        }
    }
    Ok(diff.frobenius())
}
