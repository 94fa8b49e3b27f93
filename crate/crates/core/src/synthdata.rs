//! Random real Fourier-series targets, regression grids and min-max scaling.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::FreqSet;

pub const DEFAULT_POINTS: usize = 4000;

/// g(x) = c₀ + Σ_{k=1}^{K} 2·Re(c_k e^{ikx}); negative frequencies are the
/// conjugates of the stored ones.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetFunction {
    pub k_max: usize,
    /// c₀ … c_K.
    pub coefficients: Vec<Complex64>,
    pub seed: u64,
}

impl TargetFunction {
    /// Builds a target from explicit coefficients c₀ … c_K. The imaginary
    /// part of c₀ is dropped.
    pub fn from_coefficients(coefficients: Vec<Complex64>, seed: u64) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::contract("need at least c0 and c1"));
        }
        let mut coefficients = coefficients;
        coefficients[0].im = 0.0;
        Ok(Self {
            k_max: coefficients.len() - 1,
            coefficients,
            seed,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| 2.0 * (c * Complex64::from_polar(1.0, k as f64 * x)).re)
            .sum::<f64>()
            + self.coefficients[0].re
    }

    /// Σ_{k=-K}^{K} c_k e^{ikx} evaluated term by term in complex arithmetic.
    pub fn eval_complex(&self, x: f64) -> Complex64 {
        let mut acc = self.coefficients[0];
        for (k, c) in self.coefficients.iter().enumerate().skip(1) {
            let w = k as f64 * x;
            acc += c * Complex64::from_polar(1.0, w) + c.conj() * Complex64::from_polar(1.0, -w);
        }
        acc
    }
}

/// c₀ ~ U(−0.7, 0.7); Re c_k, Im c_k ~ N(0, 1) for k = 1..K, drawn in that
/// order from a ChaCha8 stream.
pub fn sample_target(k_max: usize, seed: u64) -> Result<TargetFunction> {
    if k_max < 1 {
        return Err(Error::contract("K must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coefficients = Vec::with_capacity(k_max + 1);
    coefficients.push(Complex64::new(rng.random_range(-0.7..0.7), 0.0));
    for _ in 0..k_max {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        coefficients.push(Complex64::new(re, im));
    }
    Ok(TargetFunction {
        k_max,
        coefficients,
        seed,
    })
}

/// Affine map fitted on observed min/max.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinMaxTransform {
    pub data_min: f64,
    pub data_max: f64,
    pub lo: f64,
    pub hi: f64,
    /// Fitted range was empty; every value maps to the target midpoint.
    pub degenerate: bool,
}

impl MinMaxTransform {
    pub fn fit(values: &[f64], lo: f64, hi: f64) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::contract(format!("scaling range [{lo}, {hi}] is empty")));
        }
        if values.is_empty() {
            return Err(Error::contract("cannot fit a scaler on no values"));
        }
        let data_min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let data_max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            data_min,
            data_max,
            lo,
            hi,
            degenerate: data_max <= data_min,
        })
    }

    pub fn apply(&self, v: f64) -> f64 {
        if self.degenerate {
            return 0.5 * (self.lo + self.hi);
        }
        self.lo + (v - self.data_min) * (self.hi - self.lo) / (self.data_max - self.data_min)
    }

    pub fn apply_all(&self, values: &[f64]) -> Vec<f64> {
        values.iter().map(|&v| self.apply(v)).collect()
    }
}

/// Scales `values` onto [lo, hi]; the transform is fitted on `fit_on` when
/// given, otherwise on `values` itself.
pub fn minmax(
    values: &[f64],
    lo: f64,
    hi: f64,
    fit_on: Option<&[f64]>,
) -> Result<(Vec<f64>, MinMaxTransform)> {
    let t = MinMaxTransform::fit(fit_on.unwrap_or(values), lo, hi)?;
    Ok((t.apply_all(values), t))
}

/// Per-column min-max scaler for row-major feature tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureScaler {
    pub columns: Vec<MinMaxTransform>,
}

impl FeatureScaler {
    pub fn fit(rows: &[Vec<f64>], lo: f64, hi: f64) -> Result<Self> {
        let width = rows
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::contract("cannot fit a scaler on no rows"))?;
        let columns = (0..width)
            .map(|c| {
                let col: Vec<f64> = rows.iter().map(|r| r[c]).collect();
                MinMaxTransform::fit(&col, lo, hi)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { columns })
    }

    pub fn transform(&self, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
        rows.iter()
            .map(|r| r.iter().zip(&self.columns).map(|(&v, t)| t.apply(v)).collect())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionDataset {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub k_max: usize,
    pub seed: u64,
    pub raw_min: f64,
    pub raw_max: f64,
}

/// Grid x_j = 2πj/(points−1) (both endpoints), targets scaled onto [−½, ½].
pub fn build_dataset(g: &TargetFunction, points: usize) -> Result<RegressionDataset> {
    if points < 2 * g.k_max + 1 {
        return Err(Error::Aliasing(format!(
            "{points} points cannot resolve frequency {}",
            g.k_max
        )));
    }
    let x: Vec<f64> = (0..points)
        .map(|j| 2.0 * PI * j as f64 / (points - 1) as f64)
        .collect();
    let raw: Vec<f64> = x.iter().map(|&v| g.eval(v)).collect();
    let (y, t) = minmax(&raw, -0.5, 0.5, None)?;
    Ok(RegressionDataset {
        x,
        y,
        k_max: g.k_max,
        seed: g.seed,
        raw_min: t.data_min,
        raw_max: t.data_max,
    })
}

/// Mean squared residual of the least-squares fit of `y` by real
/// trigonometric polynomials with frequencies in `omega`. Any model whose
/// spectrum is contained in `omega` has training MSE at least this value.
pub fn projection_residual(x: &[f64], y: &[f64], omega: &FreqSet) -> Result<f64> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::contract("grid and targets must be equal, nonzero length"));
    }
    let freqs: Vec<f64> = omega
        .to_f64()
        .into_iter()
        .filter(|&w| w >= 0.0)
        .collect();
    let mut columns: Vec<Box<dyn Fn(f64) -> f64>> = Vec::new();
    for &w in &freqs {
        if w == 0.0 {
            columns.push(Box::new(|_| 1.0));
        } else {
            columns.push(Box::new(move |t: f64| (w * t).cos()));
            columns.push(Box::new(move |t: f64| (w * t).sin()));
        }
    }
    let a = DMatrix::from_fn(x.len(), columns.len(), |i, j| columns[j](x[i]));
    let b = DVector::from_column_slice(y);
    let svd = a.clone().svd(true, true);
    let coef = svd
        .solve(&b, 1e-12)
        .map_err(|e| Error::Degenerate(e.to_string()))?;
    let r = a * coef - b;
    Ok(r.norm_squared() / x.len() as f64)
}
