//! Depolarization model, error-rate presets, scaling laws and log-domain fits.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bell::Family;
use crate::circuit::{prep_ghz_line, prep_lc_path, GateCounts};
use crate::error::{Error, Result};
use crate::estimation::{required_l_from_alpha, Confidence};
use crate::tableau::check_probability;

/// Average gate and readout error rates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub p1: f64,
    pub p2: f64,
    pub pr: f64,
}

impl NoiseParams {
    pub const IBM_EAGLE: Self = Self {
        p1: 4.322e-4,
        p2: 1.019e-2,
        pr: 2.434e-2,
    };
    pub const SYCAMORE_ISOLATED: Self = Self {
        p1: 1.5e-3,
        p2: 3.6e-3,
        pr: 3.1e-2,
    };
    pub const SYCAMORE_SIMULTANEOUS: Self = Self {
        p1: 1.6e-3,
        p2: 6.2e-3,
        pr: 3.8e-2,
    };
    pub const NOISELESS: Self = Self {
        p1: 0.0,
        p2: 0.0,
        pr: 0.0,
    };

    pub fn validate(&self) -> Result<()> {
        check_probability(self.p1)?;
        check_probability(self.p2)?;
        check_probability(self.pr)
    }

    /// All three rates multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let s = Self {
            p1: self.p1 * factor,
            p2: self.p2 * factor,
            pr: self.pr * factor,
        };
        s.validate()?;
        Ok(s)
    }

    /// Named preset: `eagle`, `sycamore-isolated` or `sycamore-simultaneous`.
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "eagle" | "ibm-eagle" => Ok(Self::IBM_EAGLE),
            "sycamore-isolated" => Ok(Self::SYCAMORE_ISOLATED),
            "sycamore" | "sycamore-simultaneous" => Ok(Self::SYCAMORE_SIMULTANEOUS),
            "off" | "none" => Ok(Self::NOISELESS),
            other => Err(Error::InvalidArgument(format!(
                "unknown rate preset `{other}`"
            ))),
        }
    }
}

/// Probability that no error occurs: `(1-p1)^N1 (1-p2)^N2 (1-pr)^n`.
pub fn alpha_depolarization(counts: &GateCounts, n: usize, p: &NoiseParams) -> Result<f64> {
    p.validate()?;
    Ok((1.0 - p.p1).powf(counts.n1 as f64)
        * (1.0 - p.p2).powf(counts.n2 as f64)
        * (1.0 - p.pr).powf(n as f64))
}

/// Gate counts of the reference circuits: depth-3 path for LC, sequential
/// CZs from the center for GHZ.
pub fn reference_counts(family: Family, n: usize) -> Result<GateCounts> {
    family.check_size(n)?;
    Ok(match family {
        Family::Lc => prep_lc_path(n)?.circuit.gate_counts(),
        Family::Ghz => prep_ghz_line(n)?.circuit.gate_counts(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub family: Family,
    pub n: usize,
    pub counts: GateCounts,
    pub alpha: f64,
    /// Predicted `⟨B⟩/Q`, equal to `alpha`.
    pub violation_fraction: f64,
    pub q: f64,
    pub c: f64,
    pub d: f64,
    pub l: u128,
}

/// Gate counts, then `α`, then the number of terms for confidence `conf`.
pub fn predict_required_l(
    family: Family,
    n: usize,
    p: &NoiseParams,
    conf: Confidence,
) -> Result<Prediction> {
    let counts = reference_counts(family, n)?;
    let alpha = alpha_depolarization(&counts, n, p)?;
    let b = family.bounds(n)?;
    let l = required_l_from_alpha(alpha, b.d, conf).map_err(|e| match e {
        Error::NoMargin(_) => Error::NoMargin(format!(
            "predicted alpha = {alpha:.6} does not exceed 1/D = {:.6}",
            1.0 / b.d
        )),
        other => other,
    })?;
    Ok(Prediction {
        family,
        n,
        counts,
        alpha,
        violation_fraction: alpha,
        q: b.q,
        c: b.c,
        d: b.d,
        l,
    })
}

/// Range of GHZ sizes that still violate under `α = exp(-a n²)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "n_max", rename_all = "snake_case")]
pub enum ViolationWindow {
    Unbounded,
    Empty,
    /// Largest integer strictly below the upper root.
    UpTo(u64),
}

/// Upper end of the GHZ violation window,
/// `n < ln2/(4a) + sqrt((ln2/(4a))² - ln2/a)`.
pub fn violation_window_ghz(a: f64) -> Result<ViolationWindow> {
    if !(a >= 0.0) || a.is_infinite() {
        return Err(Error::InvalidArgument(format!(
            "a must be nonnegative, got {a}"
        )));
    }
    if a == 0.0 {
        return Ok(ViolationWindow::Unbounded);
    }
    let ln2 = std::f64::consts::LN_2;
    let h = ln2 / (4.0 * a);
    let disc = h * h - ln2 / a;
    if disc < 0.0 {
        return Ok(ViolationWindow::Empty);
    }
    let bound = h + disc.sqrt();
    if !bound.is_finite() || bound >= u64::MAX as f64 {
        return Ok(ViolationWindow::Unbounded);
    }
    let mut n = bound.floor() as u64;
    if n as f64 == bound {
        n -= 1;
    }
    Ok(ViolationWindow::UpTo(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingForm {
    /// `α = exp(-b n + c)`.
    LogLinear,
    /// `α = exp(-a n² - b n + c)`.
    LogQuadratic,
}

impl ScalingForm {
    pub fn for_family(family: Family) -> Self {
        match family {
            Family::Lc => ScalingForm::LogLinear,
            Family::Ghz => ScalingForm::LogQuadratic,
        }
    }

    fn n_params(self) -> usize {
        match self {
            ScalingForm::LogLinear => 2,
            ScalingForm::LogQuadratic => 3,
        }
    }
}

/// `α(n) = exp(-a n² - b n + c)`; `a = 0` for the log-linear form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingModel {
    pub form: ScalingForm,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl ScalingModel {
    pub fn log_linear(b: f64, c: f64) -> Self {
        Self {
            form: ScalingForm::LogLinear,
            a: 0.0,
            b,
            c,
        }
    }

    pub fn log_quadratic(a: f64, b: f64, c: f64) -> Self {
        Self {
            form: ScalingForm::LogQuadratic,
            a,
            b,
            c,
        }
    }

    pub fn ln_alpha(&self, n: f64) -> f64 {
        -self.a * n * n - self.b * n + self.c
    }

    /// Model value clamped to `(0, 1]`.
    pub fn alpha(&self, n: f64) -> f64 {
        self.ln_alpha(n).exp().clamp(f64::MIN_POSITIVE, 1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub model: ScalingModel,
    /// `ln α_i - model.ln_alpha(n_i)` per point.
    pub residuals: Vec<f64>,
    pub rss: f64,
}

/// Ordinary least squares on `ln α` against the chosen polynomial in `n`.
pub fn fit_scaling(points: &[(f64, f64)], form: ScalingForm) -> Result<Fit> {
    let k = form.n_params();
    if points.len() < k {
        return Err(Error::InvalidArgument(format!(
            "{form:?} fit needs at least {k} points, got {}",
            points.len()
        )));
    }
    if let Some(&(n, a)) = points
        .iter()
        .find(|&&(n, a)| !(a > 0.0 && a.is_finite() && n.is_finite()))
    {
        return Err(Error::InvalidArgument(format!(
            "cannot fit point ({n}, {a}): need alpha > 0"
        )));
    }
    let mut distinct: Vec<f64> = points.iter().map(|p| p.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < k {
        return Err(Error::InvalidArgument(format!(
            "{form:?} fit needs at least {k} distinct n values"
        )));
    }
    // scale n to keep the normal matrix well conditioned
    let scale = points.iter().map(|p| p.0.abs()).fold(1.0, f64::max);
    let x = DMatrix::from_fn(points.len(), k, |i, j| {
        let u = points[i].0 / scale;
        u.powi((k - 1 - j) as i32)
    });
    let y = DVector::from_iterator(points.len(), points.iter().map(|p| p.1.ln()));
    let qr = x.qr();
    let rhs = qr.q().transpose() * &y;
    let coef = qr
        .r()
        .solve_upper_triangular(&rhs)
        .filter(|c| c.iter().all(|v| v.is_finite()))
        .ok_or_else(|| {
            Error::InvalidArgument("fit is rank deficient (repeated n values?)".into())
        })?;
    let model = match form {
        ScalingForm::LogLinear => ScalingModel::log_linear(-coef[0] / scale, coef[1]),
        ScalingForm::LogQuadratic => {
            ScalingModel::log_quadratic(-coef[0] / (scale * scale), -coef[1] / scale, coef[2])
        }
    };
    let residuals: Vec<f64> = points
        .iter()
        .map(|&(n, a)| a.ln() - model.ln_alpha(n))
        .collect();
    let rss = residuals.iter().map(|r| r * r).sum();
    Ok(Fit {
        model,
        residuals,
        rss,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    pub n: usize,
    pub alpha: f64,
    pub d: f64,
    pub l: u128,
}

/// Terms needed at size `n` when `α` follows `model`.
pub fn extrapolate_l(
    model: &ScalingModel,
    n: usize,
    d: f64,
    conf: Confidence,
) -> Result<Extrapolation> {
    let alpha = model.alpha(n as f64);
    let l = required_l_from_alpha(alpha, d, conf)?;
    Ok(Extrapolation { n, alpha, d, l })
}
