use serde::{Deserialize, Serialize};

use super::{DenseMatrix, SpectralError};
use crate::graph::ConnectionMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LaplacianForm {
    /// `L = D - W`
    Unnormalized,
    /// `L_sym = I - D^{-1/2} W D^{-1/2}`
    SymmetricNormalized,
}

/// Dense Laplacian of `w`. Degrees include the diagonal of `w`.
pub fn build_laplacian(w: &ConnectionMatrix, form: LaplacianForm) -> Result<DenseMatrix, SpectralError> {
    let n = w.n();
    let d = w.degrees();
    let mut l = DenseMatrix::zeros(n);
    match form {
        LaplacianForm::Unnormalized => {
            for i in 0..n {
                for j in i.saturating_sub(2)..=(i + 2).min(n - 1) {
                    l[(i, j)] = if i == j { d[i] - w.get(i, i) } else { -w.get(i, j) };
                }
            }
        }
        LaplacianForm::SymmetricNormalized => {
            if let Some((index, &degree)) = d.iter().enumerate().find(|(_, &x)| x <= 0.0) {
                return Err(SpectralError::NonPositiveDegree { index, degree });
            }
            let s: Vec<f64> = d.iter().map(|x| x.sqrt()).collect();
            for i in 0..n {
                for j in i.saturating_sub(2)..=(i + 2).min(n - 1) {
                    let a = w.get(i, j) / (s[i] * s[j]);
                    l[(i, j)] = if i == j { 1.0 - a } else { -a };
                }
            }
        }
    }
    Ok(l)
}
