//! Generalized factorials `x_n! = x_1 x_2 ⋯ x_n`, the generalized exponential
//! `𝒩(t) = Σ tⁿ/x_n!`, the sums `𝒮_k(t)` and the half-index factorial bound.

use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::specfun::{ln_gamma_pos, log_add, SeriesTolerance};

type SeqFn = dyn Fn(u64) -> f64 + Send + Sync;
type HalfFn = dyn Fn(f64) -> f64 + Send + Sync;

/// Relative slack granted to `ln x_{(n₁+n₂)/2}! ≤ ½(ln x_{n₁}! + ln x_{n₂}!)`,
/// which holds with equality for `n₁ = n₂`.
pub const BOUND_SLACK: f64 = 1e-13;

/// A strictly increasing sequence `0 = x_0 < x_1 < …` with memoized
/// `ln x_n!` and an optional interpolation `ν ↦ ln x_ν!` for non-integer `ν`.
pub struct FactorialSequence {
    x: Arc<SeqFn>,
    half_index: Option<Arc<HalfFn>>,
    radius: f64,
    memo: Mutex<Vec<f64>>,
}

impl std::fmt::Debug for FactorialSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FactorialSequence")
            .field("radius", &self.radius)
            .field("interpolated", &self.half_index.is_some())
            .finish()
    }
}

impl Clone for FactorialSequence {
    fn clone(&self) -> Self {
        Self {
            x: Arc::clone(&self.x),
            half_index: self.half_index.clone(),
            radius: self.radius,
            memo: Mutex::new(self.memo.lock().map(|m| m.clone()).unwrap_or_else(|_| vec![0.0])),
        }
    }
}

impl FactorialSequence {
    /// `x_n = n`: ordinary factorials, interpolated by `Γ(ν + 1)`.
    pub fn integers() -> Self {
        Self {
            x: Arc::new(|n| n as f64),
            half_index: Some(Arc::new(|nu| ln_gamma_pos(nu + 1.0))),
            radius: f64::INFINITY,
            memo: Mutex::new(vec![0.0]),
        }
    }

    /// `radius` is `lim x_n`, possibly infinite.
    pub fn custom(
        x: impl Fn(u64) -> f64 + Send + Sync + 'static,
        radius: f64,
        half_index: Option<Arc<HalfFn>>,
    ) -> Result<Self> {
        if x(0) != 0.0 {
            return Err(Error::invalid("factorial sequences start at x_0 = 0"));
        }
        if !(radius > 0.0) {
            return Err(Error::invalid(format!("radius {radius} must be positive")));
        }
        Ok(Self {
            x: Arc::new(x),
            half_index,
            radius,
            memo: Mutex::new(vec![0.0]),
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn x(&self, n: u64) -> f64 {
        (self.x)(n)
    }

    /// `ln x_n!`.
    pub fn ln_factorial(&self, n: u64) -> Result<f64> {
        let mut memo = self.memo.lock().unwrap_or_else(|e| e.into_inner());
        while memo.len() <= n as usize {
            let k = memo.len() as u64;
            let (prev, cur) = (self.x(k - 1), self.x(k));
            if !(cur > prev) || !cur.is_finite() {
                return Err(Error::invalid(format!(
                    "sequence is not strictly increasing at n = {k} ({prev} then {cur})"
                )));
            }
            let last = memo[memo.len() - 1];
            memo.push(last + cur.ln());
        }
        Ok(memo[n as usize])
    }

    /// `ln x_ν!` for real `ν ≥ 0`, through the interpolation when `ν` is not
    /// an integer.
    pub fn ln_factorial_real(&self, nu: f64) -> Result<f64> {
        if !(nu >= 0.0) {
            return Err(Error::domain("ln_factorial_real", format!("index {nu} is negative")));
        }
        if nu.fract() == 0.0 {
            return self.ln_factorial(nu as u64);
        }
        match &self.half_index {
            Some(h) => Ok(h(nu)),
            None => Err(Error::MissingInterpolation(nu)),
        }
    }

    fn check_radius(&self, t: f64) -> Result<()> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::domain("generalized series", format!("t = {t}")));
        }
        if t >= self.radius {
            return Err(Error::Divergence { t, radius: self.radius });
        }
        Ok(())
    }
}

/// Sums `exp(ln_term(n))` for `n = 0, 1, …` in log space until the terms
/// decrease and drop below `tol` relative to the running sum.
fn log_series(ln_term: impl Fn(u64) -> Result<f64>, tol: SeriesTolerance, what: &'static str) -> Result<f64> {
    let mut acc = f64::NEG_INFINITY;
    let mut prev = f64::NEG_INFINITY;
    let ln_tol = tol.abs_tol.ln();
    for n in 0..tol.max_terms as u64 {
        let lt = ln_term(n)?;
        acc = log_add(acc, lt);
        if n > 0 && lt < prev && lt - acc < ln_tol {
            return Ok(acc.exp());
        }
        prev = lt;
    }
    Err(Error::NonConvergence {
        what,
        budget: tol.max_terms,
    })
}

/// `𝒩(t) = Σ_n tⁿ/x_n!` for `0 ≤ t < R`.
pub fn generalized_exp(seq: &FactorialSequence, t: f64) -> Result<f64> {
    seq.check_radius(t)?;
    if t == 0.0 {
        return Ok(1.0);
    }
    let lt = t.ln();
    log_series(
        |n| Ok(n as f64 * lt - seq.ln_factorial(n)?),
        SeriesTolerance::default(),
        "generalized exponential",
    )
}

/// `𝒮_k(t) = Σ_n x_{k/2+n}!/(x_n! x_{n+k}!) t^{n+k/2}`.
pub fn s_k(seq: &FactorialSequence, k: u64, t: f64) -> Result<f64> {
    seq.check_radius(t)?;
    let half = k as f64 / 2.0;
    if t == 0.0 {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    let lt = t.ln();
    log_series(
        |n| {
            let nf = n as f64;
            Ok(seq.ln_factorial_real(half + nf)? - seq.ln_factorial(n)? - seq.ln_factorial(n + k)? + (nf + half) * lt)
        },
        SeriesTolerance::default(),
        "S_k series",
    )
}

/// `x_{(n₁+n₂)/2}! ≤ √(x_{n₁}! x_{n₂}!)`, compared in log space.
pub fn half_factorial_bound_check(seq: &FactorialSequence, n1: u64, n2: u64) -> Result<bool> {
    let lhs = seq.ln_factorial_real((n1 + n2) as f64 / 2.0)?;
    let rhs = 0.5 * (seq.ln_factorial(n1)? + seq.ln_factorial(n2)?);
    Ok(lhs <= rhs + BOUND_SLACK * rhs.abs().max(1.0))
}
