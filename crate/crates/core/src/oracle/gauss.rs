use std::cell::Cell;
use std::path::Path;

use nalgebra::DMatrix;
use statrs::distribution::{ContinuousCDF, Normal};

use super::{CiTest, CountingOracle};
use crate::error::{Error, Result};
use crate::graph::{VarId, VarSet};

pub const DEFAULT_ALPHA: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TestError {
    #[error("covariance submatrix is singular")]
    Singular,
    #[error("{n} samples are too few for a conditioning set of size {cond}")]
    TooFewSamples { n: usize, cond: usize },
}

/// Partial correlation of `x` and `y` given `z` from the inverse of the
/// covariance submatrix over `{x, y} ∪ z`.
pub fn partial_correlation(cov: &DMatrix<f64>, x: VarId, y: VarId, z: &VarSet) -> std::result::Result<f64, TestError> {
    let idx: Vec<usize> = [x.0, y.0].into_iter().chain(z.iter().map(|v| v.0)).collect();
    let k = idx.len();
    let sub = DMatrix::from_fn(k, k, |i, j| cov[(idx[i], idx[j])]);
    let prec = sub.cholesky().ok_or(TestError::Singular)?.inverse();
    let denom = (prec[(0, 0)] * prec[(1, 1)]).sqrt();
    if !denom.is_finite() || denom <= 0.0 {
        return Err(TestError::Singular);
    }
    let rho = -prec[(0, 1)] / denom;
    if !rho.is_finite() {
        return Err(TestError::Singular);
    }
    Ok(rho.clamp(-1.0, 1.0))
}

/// Fisher z test: independent iff
/// `sqrt(n - |z| - 3) * |atanh(rho)| <= Φ⁻¹(1 - α/2)`.
pub fn fisher_z_test(
    cov: &DMatrix<f64>,
    n: usize,
    x: VarId,
    y: VarId,
    z: &VarSet,
    alpha: f64,
) -> std::result::Result<bool, TestError> {
    if n <= z.len() + 3 {
        return Err(TestError::TooFewSamples { n, cond: z.len() });
    }
    let rho = partial_correlation(cov, x, y, z)?;
    let rho = rho.clamp(-1.0 + 1e-15, 1.0 - 1e-15);
    let stat = ((n - z.len() - 3) as f64).sqrt() * (0.5 * ((1.0 + rho) / (1.0 - rho)).ln()).abs();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let critical = normal.inverse_cdf(1.0 - alpha / 2.0);
    Ok(stat <= critical)
}

/// Sample covariance backend for Gaussian data.
#[derive(Debug, Clone)]
pub struct GaussTest {
    names: Vec<String>,
    cov: DMatrix<f64>,
    samples: usize,
    alpha: f64,
    failures: Cell<u64>,
}

impl GaussTest {
    /// `rows` holds one sample per row. Constant columns are rejected.
    pub fn from_samples(names: Vec<String>, rows: &[Vec<f64>], alpha: f64) -> Result<Self> {
        let p = names.len();
        let n = rows.len();
        if !(0.0..1.0).contains(&alpha) || alpha == 0.0 {
            return Err(Error::Input(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        if n < 4 {
            return Err(Error::Input(format!("need at least 4 samples, got {n}")));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != p) {
            return Err(Error::Input(format!(
                "row {} has {} values, expected {p}",
                i + 1,
                r.len()
            )));
        }
        let mut mean = vec![0.0; p];
        for r in rows {
            for (m, v) in mean.iter_mut().zip(r) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= n as f64;
        }
        let mut cov = DMatrix::<f64>::zeros(p, p);
        for r in rows {
            for i in 0..p {
                let di = r[i] - mean[i];
                for j in i..p {
                    cov[(i, j)] += di * (r[j] - mean[j]);
                }
            }
        }
        for i in 0..p {
            for j in i..p {
                let v = cov[(i, j)] / (n as f64 - 1.0);
                cov[(i, j)] = v;
                cov[(j, i)] = v;
            }
            if cov[(i, i)].is_nan() || cov[(i, i)] <= 0.0 {
                return Err(Error::Input(format!("column `{}` is constant", names[i])));
            }
        }
        Ok(GaussTest {
            names,
            cov,
            samples: n,
            alpha,
            failures: Cell::new(0),
        })
    }

    /// CSV with a header row of variable names followed by numeric rows.
    pub fn from_csv(path: &Path, alpha: f64) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path)?;
        let names: Vec<String> = rdr.headers()?.iter().map(|s| s.trim().to_owned()).collect();
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Input(format!("row {}: `{s}` is not a number", i + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_samples(names, &rows, alpha)
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Tests that could not be evaluated and were answered "dependent".
    pub fn failures(&self) -> u64 {
        self.failures.get()
    }
}

impl CiTest for GaussTest {
    fn num_vars(&self) -> usize {
        self.names.len()
    }

    fn names(&self) -> Vec<String> {
        self.names.clone()
    }

    fn independent(&self, x: VarId, y: VarId, z: &VarSet) -> Result<bool> {
        match fisher_z_test(&self.cov, self.samples, x, y, z, self.alpha) {
            Ok(b) => Ok(b),
            Err(_) => {
                self.failures.set(self.failures.get() + 1);
                Ok(false)
            }
        }
    }
}

pub type GaussOracle = CountingOracle<GaussTest>;
