//! Sampling plans, the sampled estimator and its Hoeffding-type tail bound.
//!
//! With `L` terms drawn uniformly (with replacement) from `M` and `K` shots
//! each, the estimate `M/(LK) Σ x` of `⟨B⟩` deviates by more than `t` with
//! probability at most `exp(-t²KL / (2M²))`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::erf::{erfc, erfc_inv};

use crate::error::{Error, Result};

/// Confidence level, stored as its tail `1 - γ` so that deep tails keep
/// full precision.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Confidence {
    tail: f64,
}

impl Confidence {
    /// Two-sided Gaussian equivalent: `γ = erf(k/√2)`.
    pub fn from_sigma(k: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "sigma must be positive, got {k}"
            )));
        }
        Self::from_tail(erfc(k / std::f64::consts::SQRT_2))
    }

    pub fn from_gamma(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "confidence must lie in (0, 1), got {gamma}"
            )));
        }
        Self::from_tail(1.0 - gamma)
    }

    /// From `1 - γ` directly.
    pub fn from_tail(tail: f64) -> Result<Self> {
        if !(tail > 0.0 && tail < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "confidence tail must lie in (0, 1), got {tail}"
            )));
        }
        Ok(Self { tail })
    }

    pub fn gamma(&self) -> f64 {
        1.0 - self.tail
    }

    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub fn sigma(&self) -> f64 {
        tail_to_sigma(self.tail)
    }
}

/// `γ` for a `k`-sigma two-sided Gaussian deviation.
pub fn sigma_to_confidence(k: f64) -> Result<f64> {
    Confidence::from_sigma(k).map(|c| c.gamma())
}

/// Two-sided Gaussian sigma equivalent of a tail probability.
pub fn tail_to_sigma(tail: f64) -> f64 {
    if tail >= 1.0 {
        0.0
    } else if tail <= 0.0 {
        f64::INFINITY
    } else {
        std::f64::consts::SQRT_2 * erfc_inv(tail)
    }
}

fn ceil_count(x: f64) -> Result<u128> {
    if !x.is_finite() || x >= u128::MAX as f64 {
        return Err(Error::TooLarge(format!("sample count {x:e}")));
    }
    Ok((x.ceil() as u128).max(1))
}

fn check_scale(m: f64, t: f64) -> Result<()> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "M must be positive, got {m}"
        )));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::NoMargin(format!("margin t = {t} is not positive")));
    }
    Ok(())
}

/// Minimal number of sampled terms with one shot each:
/// `L = max(1, ⌈-2 (M/t)² ln(1-γ)⌉)`.
pub fn required_l(m: f64, t: f64, conf: Confidence) -> Result<u128> {
    check_scale(m, t)?;
    ceil_count(-2.0 * (m / t).powi(2) * conf.tail().ln())
}

/// Shots per term needed once `L` terms are fixed: `K = ⌈-2 (M/t)² ln(1-γ) / L⌉`.
pub fn required_k(l: u128, m: f64, t: f64, conf: Confidence) -> Result<u128> {
    check_scale(m, t)?;
    if l == 0 {
        return Err(Error::InvalidArgument("L must be positive".into()));
    }
    ceil_count(-2.0 * (m / t).powi(2) * conf.tail().ln() / l as f64)
}

/// `L` for a white-noise-weighted state `αρ + (1-α)I/2ⁿ` with violation
/// ratio `D`: the margin is `t = M(α - 1/D)`.
pub fn required_l_from_alpha(alpha: f64, d: f64, conf: Confidence) -> Result<u128> {
    if !(alpha.is_finite() && (0.0..=1.0).contains(&alpha)) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in [0, 1], got {alpha}"
        )));
    }
    if !(d.is_finite() && d >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "D must be at least 1, got {d}"
        )));
    }
    let margin = alpha - 1.0 / d;
    if margin <= 0.0 {
        return Err(Error::NoMargin(format!(
            "alpha = {alpha} does not exceed 1/D = {}",
            1.0 / d
        )));
    }
    required_l(1.0, margin, conf)
}

/// `L` term indices drawn uniformly from `0..m`, with replacement.
pub fn sample_indices<R: Rng + ?Sized>(m: u128, l: usize, rng: &mut R) -> Result<Vec<u128>> {
    if m == 0 {
        return Err(Error::InvalidArgument("M must be positive".into()));
    }
    Ok((0..l).map(|_| rng.random_range(0..m)).collect())
}

/// Sampled estimate `M/(LK) Σ x` from `±1` outcomes, `K` per sampled term.
pub fn estimate(m: f64, k: usize, outcomes: &[i8]) -> Result<f64> {
    if k == 0 || outcomes.is_empty() || outcomes.len() % k != 0 {
        return Err(Error::InvalidArgument(format!(
            "{} outcomes do not split into groups of K = {k}",
            outcomes.len()
        )));
    }
    let mut sum = 0i64;
    for &x in outcomes {
        if x != 1 && x != -1 {
            return Err(Error::InvalidArgument(format!("outcome {x} is not ±1")));
        }
        sum += x as i64;
    }
    Ok(m * sum as f64 / outcomes.len() as f64)
}

/// Sample-mean estimate from exact per-term expectations (the `K → ∞` limit).
pub fn estimate_from_expectations(m: f64, expectations: &[f64]) -> Result<f64> {
    if expectations.is_empty() {
        return Err(Error::InvalidArgument("no expectations".into()));
    }
    Ok(m * expectations.iter().sum::<f64>() / expectations.len() as f64)
}

/// Upper bound on the probability that a local-hidden-variable model
/// reaches `estimate` or more.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PValue {
    /// `exp(-t²KL/(2M²))` with `t = estimate - C`, or 1 when `t ≤ 0`.
    pub p: f64,
    /// Natural log of `p`, finite even when `p` underflows.
    pub ln_p: f64,
    pub sigma_equivalent: f64,
}

pub fn p_value_bound(estimate: f64, c: f64, m: f64, k: u128, l: u128) -> Result<PValue> {
    if !(m > 0.0 && c >= 0.0) || k == 0 || l == 0 {
        return Err(Error::InvalidArgument(
            "need M > 0, C ≥ 0 and K, L ≥ 1".into(),
        ));
    }
    let t = estimate - c;
    if !(t > 0.0) {
        return Ok(PValue {
            p: 1.0,
            ln_p: 0.0,
            sigma_equivalent: 0.0,
        });
    }
    let ln_p = -(t / m).powi(2) * (k as f64) * (l as f64) / 2.0;
    let p = ln_p.exp();
    let sigma_equivalent = if p > 0.0 {
        tail_to_sigma(p)
    } else {
        // Gaussian tail asymptotics: ln erfc(x) ≈ -x² - ln(x√π).
        let mut x = (-ln_p).sqrt();
        for _ in 0..8 {
            x = (-ln_p - (x * std::f64::consts::PI.sqrt()).ln()).sqrt();
        }
        std::f64::consts::SQRT_2 * x
    };
    Ok(PValue {
        p,
        ln_p,
        sigma_equivalent,
    })
}

/// A complete sampling plan for one confidence target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub m: f64,
    pub margin: f64,
    pub gamma: f64,
    pub sigma: f64,
    pub l: u128,
    pub k: u128,
    /// Total number of single-shot circuit executions, `L·K`.
    pub shots: u128,
}

impl SamplingPlan {
    /// Single-shot plan (`K = 1`) for margin `t` over the classical bound.
    pub fn single_shot(m: f64, t: f64, conf: Confidence) -> Result<Self> {
        let l = required_l(m, t, conf)?;
        Ok(Self {
            m,
            margin: t,
            gamma: conf.gamma(),
            sigma: conf.sigma(),
            l,
            k: 1,
            shots: l,
        })
    }

    /// Plan with `L` fixed and `K` chosen to reach the target.
    pub fn with_terms(l: u128, m: f64, t: f64, conf: Confidence) -> Result<Self> {
        let k = required_k(l, m, t, conf)?;
        Ok(Self {
            m,
            margin: t,
            gamma: conf.gamma(),
            sigma: conf.sigma(),
            l,
            k,
            shots: l.saturating_mul(k),
        })
    }
}
