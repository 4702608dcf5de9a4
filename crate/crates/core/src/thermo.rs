//! Partition function, free energy density and derived observables.
//!
//! With `T_a = tanh(βa)` and `T_b = tanh(βb)` the partition function of a
//! CSS model factorizes as
//!
//! ```text
//! ln Z = N ln 2 + R ln cosh(βa) + S ln cosh(βb) + ln 𝒯_a(T_a) + ln 𝒯_b(T_b)
//! ```
//!
//! where `𝒯` is the weight enumerator of the constraint kernel on each side.
//! Everything is computed in log space: the exponents grow like `L^D`.

use alloc::string::String;
use core::cmp::Ordering;
use alloc::vec::Vec;

use crate::enumerate::{SeriesValue, WeightEnumerator};
use crate::error::{Error, Result};
use crate::math::{ln_biguint, ln_cosh, ln_sum_exp, LN_2};
use crate::models::CssModel;

/// Largest accepted bound on `ln 𝒯` error from a truncated enumerator.
pub const DEFAULT_TRUNCATION_TOLERANCE: f64 = 1e-12;

/// Default relative finite-difference step, `h = 1e-3 · β`.
pub const DEFAULT_RELATIVE_STEP: f64 = 1e-3;

/// `ln tanh x` for `x > 0`, without rounding `tanh x` to one.
pub fn ln_tanh(x: f64) -> f64 {
    let e = libm::exp(-2.0 * x);
    libm::log1p(-e) - libm::log1p(e)
}

/// `ln Σ c_n T^n` from `ln T`, so that `T` is never rounded up to 1.
fn series_at_ln_t(w: &WeightEnumerator, ln_t: f64) -> SeriesValue {
    let terms: Vec<f64> = w
        .nonzero()
        .map(|(n, c)| {
            if n == 0 {
                ln_biguint(c)
            } else {
                ln_biguint(c) + n as f64 * ln_t
            }
        })
        .collect();
    let ln_value = ln_sum_exp(terms.iter().copied());
    let ln_tail = w.ln_tail_bound(libm::exp(ln_t));
    let ln_error_bound = if ln_tail == f64::NEG_INFINITY {
        0.0
    } else {
        libm::log1p(libm::exp(ln_tail - ln_value))
    };
    SeriesValue {
        ln_value,
        ln_error_bound,
    }
}

/// Both sides of the factorized partition function, checked against the
/// model they came from.
#[derive(Clone, Debug)]
pub struct PartitionFunction<'a> {
    model: &'a CssModel,
    wa: &'a WeightEnumerator,
    wb: &'a WeightEnumerator,
    tolerance: f64,
}

impl<'a> PartitionFunction<'a> {
    pub fn new(model: &'a CssModel, wa: &'a WeightEnumerator, wb: &'a WeightEnumerator) -> Result<Self> {
        if wa.len() != model.a_gens().rows() || wb.len() != model.b_gens().rows() {
            return Err(Error::invalid(alloc::format!(
                "enumerators cover {} and {} generators, model has {} and {}",
                wa.len(),
                wb.len(),
                model.a_gens().rows(),
                model.b_gens().rows()
            )));
        }
        Ok(PartitionFunction {
            model,
            wa,
            wb,
            tolerance: DEFAULT_TRUNCATION_TOLERANCE,
        })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn model(&self) -> &CssModel {
        self.model
    }

    /// True when either enumerator was truncated.
    pub fn is_truncated(&self) -> bool {
        !self.wa.is_complete() || !self.wb.is_complete()
    }

    /// `ln Z(β)` and the combined truncation error bound on it.
    pub fn evaluate(&self, beta: f64) -> Result<(f64, f64)> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::invalid(alloc::format!("beta must be positive, got {beta}")));
        }
        let m = self.model;
        let (xa, xb) = (beta * m.coupling_a(), beta * m.coupling_b());
        let ta = series_at_ln_t(self.wa, ln_tanh(xa));
        let tb = series_at_ln_t(self.wb, ln_tanh(xb));
        let bound = ta.ln_error_bound + tb.ln_error_bound;
        if bound > self.tolerance {
            return Err(Error::TruncationTooLarge {
                bound,
                tolerance: self.tolerance,
            });
        }
        let ln_z = m.n_qubits() as f64 * LN_2
            + m.a_gens().rows() as f64 * ln_cosh(xa)
            + m.b_gens().rows() as f64 * ln_cosh(xb)
            + ta.ln_value
            + tb.ln_value;
        Ok((ln_z, bound))
    }

    pub fn log_z(&self, beta: f64) -> Result<f64> {
        self.evaluate(beta).map(|(v, _)| v)
    }
}

/// `ln Z` of `m` at inverse temperature `beta`, from the enumerators of its
/// A- and B-side constraint kernels.
pub fn log_partition(m: &CssModel, wa: &WeightEnumerator, wb: &WeightEnumerator, beta: f64) -> Result<f64> {
    PartitionFunction::new(m, wa, wb)?.log_z(beta)
}

/// `−ln Z / (β · volume)`.
pub fn free_energy_density(log_z: f64, beta: f64, volume: f64) -> f64 {
    -log_z / (beta * volume)
}

/// How derivatives of `ln Z` are taken in a sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Derivatives {
    /// Central differences at `β(1 ± h)` around every grid point.
    Stencil { relative_step: f64 },
    /// Differences between neighbouring grid points; the two endpoints use
    /// one-sided formulas and are flagged.
    Grid,
}

impl Default for Derivatives {
    fn default() -> Self {
        Derivatives::Stencil {
            relative_step: DEFAULT_RELATIVE_STEP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepOptions {
    /// Number of sites the densities are normalized by (`L^D` by default).
    pub volume: f64,
    pub derivatives: Derivatives,
}

impl SweepOptions {
    pub fn per_volume(volume: f64) -> Self {
        SweepOptions {
            volume,
            derivatives: Derivatives::default(),
        }
    }
}

/// Per-point markers carried into the CSV `flags` column.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PointFlags {
    pub one_sided: bool,
    pub truncated: bool,
}

impl PointFlags {
    pub fn render(&self) -> String {
        let mut parts: Vec<&str> = Vec::new();
        if self.one_sided {
            parts.push("one-sided");
        }
        if self.truncated {
            parts.push("truncated");
        }
        if parts.is_empty() {
            String::from("-")
        } else {
            parts.join(";")
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThermoPoint {
    pub beta: f64,
    pub log_z: f64,
    pub f_density: f64,
    pub u_density: Option<f64>,
    pub c_density: Option<f64>,
    pub flags: PointFlags,
}

/// Evaluates `ln Z`, `f`, `u = −∂_β ln Z / V` and `c = β² ∂²_β ln Z / V` on a
/// strictly increasing grid (at least three points for [`Derivatives::Grid`]).
pub fn sweep(z: &PartitionFunction<'_>, betas: &[f64], opts: &SweepOptions) -> Result<Vec<ThermoPoint>> {
    sweep_with(|b| z.log_z(b), z.is_truncated(), betas, opts)
}

/// [`sweep`] for any `ln Z(β)`; `truncated` marks every point.
pub fn sweep_with<F>(eval: F, truncated: bool, betas: &[f64], opts: &SweepOptions) -> Result<Vec<ThermoPoint>>
where
    F: Fn(f64) -> Result<f64>,
{
    let needed = match opts.derivatives {
        Derivatives::Stencil { .. } => 1,
        Derivatives::Grid => 3,
    };
    if betas.len() < needed {
        return Err(Error::invalid(alloc::format!(
            "this sweep needs at least {needed} beta values, got {}",
            betas.len()
        )));
    }
    let increasing = |lo: f64, hi: f64| lo.partial_cmp(&hi) == Some(Ordering::Less);
    if !betas.windows(2).all(|w| increasing(w[0], w[1])) || !increasing(0.0, betas[0]) {
        return Err(Error::invalid("beta grid must be positive and strictly increasing"));
    }
    if !increasing(0.0, opts.volume) {
        return Err(Error::invalid("volume must be positive"));
    }
    let values: Vec<f64> = betas.iter().map(|&b| eval(b)).collect::<Result<_>>()?;
    let v = opts.volume;
    let mut out = Vec::with_capacity(betas.len());
    for (i, (&beta, &log_z)) in betas.iter().zip(&values).enumerate() {
        let mut flags = PointFlags {
            truncated,
            ..PointFlags::default()
        };
        let (d1, d2) = match opts.derivatives {
            Derivatives::Stencil { relative_step } => {
                let h = relative_step * beta;
                let up = eval(beta + h)?;
                let down = eval(beta - h)?;
                ((up - down) / (2.0 * h), (up - 2.0 * log_z + down) / (h * h))
            }
            Derivatives::Grid => {
                let n = betas.len();
                let (j0, j1, j2) = if i == 0 {
                    flags.one_sided = true;
                    (0, 1, 2)
                } else if i == n - 1 {
                    flags.one_sided = true;
                    (n - 3, n - 2, n - 1)
                } else {
                    (i - 1, i, i + 1)
                };
                three_point_derivatives(
                    [betas[j0], betas[j1], betas[j2]],
                    [values[j0], values[j1], values[j2]],
                    beta,
                )
            }
        };
        out.push(ThermoPoint {
            beta,
            log_z,
            f_density: free_energy_density(log_z, beta, v),
            u_density: Some(-d1 / v),
            c_density: Some(beta * beta * d2 / v),
            flags,
        });
    }
    Ok(out)
}

/// First and second derivative at `x` of the parabola through three points.
fn three_point_derivatives(xs: [f64; 3], ys: [f64; 3], x: f64) -> (f64, f64) {
    let [x0, x1, x2] = xs;
    let [y0, y1, y2] = ys;
    let d0 = (x0 - x1) * (x0 - x2);
    let d1 = (x1 - x0) * (x1 - x2);
    let d2 = (x2 - x0) * (x2 - x1);
    let first = y0 * ((x - x1) + (x - x2)) / d0 + y1 * ((x - x0) + (x - x2)) / d1 + y2 * ((x - x0) + (x - x1)) / d2;
    let second = 2.0 * (y0 / d0 + y1 / d1 + y2 / d2);
    (first, second)
}

/// Evenly spaced grid from `min` to `max` inclusive.
pub fn linear_grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => alloc::vec![min],
        _ => (0..count)
            .map(|i| min + (max - min) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// Geometrically spaced grid from `min` to `max` inclusive.
pub fn log_grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    let (lo, hi) = (libm::log(min), libm::log(max));
    linear_grid(lo, hi, count).into_iter().map(libm::exp).collect()
}
