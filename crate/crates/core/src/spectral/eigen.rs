//! Dense symmetric eigensolver.
//!
//! Householder reduction to tridiagonal form followed by the implicit-shift
//! QL iteration on the tridiagonal matrix, accumulating the orthogonal
//! transformations. This is the classic EISPACK `tred2`/`tql2` pair.

use super::{DenseMatrix, SpectralError};

/// Relative symmetry tolerance on the input.
pub const EPS_SYM: f64 = 1e-12;
/// `||A v - lambda v|| <= EPS_RESID * ||A||_F`
pub const EPS_RESID: f64 = 1e-9;
/// `|v_i . v_j - delta_ij| <= EPS_ORTH`
pub const EPS_ORTH: f64 = 1e-8;
/// QL sweeps allowed per eigenvalue.
pub const MAX_SWEEPS: usize = 50;

/// Eigenvalues in ascending order with orthonormal eigenvectors stored as
/// the columns of `vectors`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    values: Vec<f64>,
    vectors: DenseMatrix,
}

impl EigenDecomposition {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Component `i` of eigenvector `j`.
    pub fn vector_entry(&self, i: usize, j: usize) -> f64 {
        self.vectors[(i, j)]
    }

    pub fn vector(&self, j: usize) -> Vec<f64> {
        (0..self.n()).map(|i| self.vectors[(i, j)]).collect()
    }

    pub fn vectors(&self) -> &DenseMatrix {
        &self.vectors
    }
}

pub fn eigh_symmetric(a: &DenseMatrix) -> Result<EigenDecomposition, SpectralError> {
    let n = a.n();
    check_symmetric(a)?;
    if n == 0 {
        return Ok(EigenDecomposition {
            values: Vec::new(),
            vectors: DenseMatrix::zeros(0),
        });
    }
    let mut v = a.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut v, &mut d, &mut e);
    tql2(&mut v, &mut d, &mut e)?;

    // ascending, ties kept in solver order
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| d[x].total_cmp(&d[y]));
    let values: Vec<f64> = order.iter().map(|&j| d[j]).collect();
    let mut vectors = DenseMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        // Sign convention: the largest-magnitude entry is positive. Near-ties
        // resolve to the lowest index so the choice is stable under rounding.
        let col: Vec<f64> = (0..n).map(|i| v[(i, src)]).collect();
        let max = col.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let pivot = col.iter().position(|x| x.abs() >= max * (1.0 - 1e-9)).unwrap_or(0);
        let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        for (i, x) in col.into_iter().enumerate() {
            vectors[(i, dst)] = sign * x;
        }
    }
    Ok(EigenDecomposition { values, vectors })
}

fn check_symmetric(a: &DenseMatrix) -> Result<(), SpectralError> {
    let n = a.n();
    let scale = a.as_slice().iter().fold(1.0f64, |m, x| m.max(x.abs()));
    for i in 0..n {
        for j in i + 1..n {
            let diff = (a[(i, j)] - a[(j, i)]).abs();
            if diff > EPS_SYM * scale || diff.is_nan() {
                return Err(SpectralError::NotSymmetric { i, j, diff });
            }
        }
    }
    Ok(())
}

/// Householder tridiagonalization. On return `d` holds the diagonal, `e`
/// the subdiagonal in `e[1..]`, and `v` the accumulated transform.
fn tred2(v: &mut DenseMatrix, d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
                v[(j, i)] = 0.0;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }

            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in j + 1..i {
                    g += v[(k, j)] * d[k];
                    e[k] += v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n - 1 {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    v[(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = 0.0;
    }
    v[(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit-shift QL on the tridiagonal form produced by [`tred2`].
fn tql2(v: &mut DenseMatrix, d: &mut [f64], e: &mut [f64]) -> Result<(), SpectralError> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }

        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_SWEEPS {
                    return Err(SpectralError::NoConvergence { cap: MAX_SWEEPS });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        h = v[(k, i + 1)];
                        v[(k, i + 1)] = s * v[(k, i)] + c * h;
                        v[(k, i)] = c * v[(k, i)] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
