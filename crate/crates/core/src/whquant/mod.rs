//! Weyl–Heisenberg integral quantization on the one-sided Fock basis:
//! displacement operators, thermal density weights, the quantization map and
//! lower symbols, the angle operator `A_a` and its coefficients, and the
//! canonical circulant angle operator.

mod angle;
mod quantize;

pub use angle::{
    action_angle_commutator, action_operator, angle_matrix, arcsin_cos_partial_sum, canonical_angle_b,
    commutator_symbol, d_q_cs, d_q_direct, d_q_general, f_coefficient, f_coefficient_exact, f_coefficient_ordered,
    gamma_ratio, sawtooth, sawtooth_fourier,
};
pub use quantize::{
    lower_symbol, quantize, LowerSymbol, PhaseSpaceFunction, QuadratureScheme, Quantization, RadialKind,
};

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{op_norm_max, BasisSpec, TruncatedOperator, ONE, ZERO};
use crate::specfun::ln_gamma_pos;

/// Thermal weights below this are dropped from `ρ = Σ w_m |m⟩⟨m|`.
pub const LEVEL_CUTOFF: f64 = 1e-18;
const MAX_LEVELS: usize = 5000;

/// Leakage of `ρ(z)` out of the truncated space above which lower symbols are
/// flagged.
pub const LEAKAGE_WARNING: f64 = 1e-10;

/// The density operator `ρ` that generates the quantization.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    /// `ρ_t = (1 − t) Σ tᵐ |m⟩⟨m|`, `t ∈ [0, 1)`
    Thermal { t: f64 },
    /// explicit nonnegative diagonal summing to one
    DensityDiagonal(Vec<f64>),
}

impl WeightSpec {
    pub fn thermal(t: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&t) {
            return Err(Error::invalid(format!("t = {t} must lie in [0, 1)")));
        }
        Ok(WeightSpec::Thermal { t })
    }

    /// Cahill–Glauber parameter `s ≤ −1`, mapped to `t = (s + 1)/(s − 1)`.
    pub fn from_cahill_glauber(s: f64) -> Result<Self> {
        if !(s <= -1.0) || !s.is_finite() {
            return Err(Error::invalid(format!("s = {s} must be finite and at most -1")));
        }
        Self::thermal((s + 1.0) / (s - 1.0))
    }

    pub fn density_diagonal(diag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::invalid("density diagonal is empty"));
        }
        if diag.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(Error::invalid(
                "density diagonal entries must be finite and nonnegative",
            ));
        }
        let total: f64 = diag.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("density diagonal sums to {total}, not 1")));
        }
        Ok(WeightSpec::DensityDiagonal(diag))
    }

    pub fn t(&self) -> Option<f64> {
        match self {
            WeightSpec::Thermal { t } => Some(*t),
            WeightSpec::DensityDiagonal(_) => None,
        }
    }

    /// Nonnegligible diagonal weights `w_0, w_1, …`.
    pub fn levels(&self) -> Result<Vec<f64>> {
        match self {
            WeightSpec::Thermal { t } => {
                if *t == 0.0 {
                    return Ok(vec![1.0]);
                }
                let count = (LEVEL_CUTOFF.ln() / t.ln()).ceil() as usize + 1;
                if count > MAX_LEVELS {
                    return Err(Error::invalid(format!(
                        "t = {t} needs {count} thermal levels (limit {MAX_LEVELS})"
                    )));
                }
                Ok((0..count).map(|m| (1.0 - t) * t.powi(m as i32)).collect())
            }
            WeightSpec::DensityDiagonal(d) => Ok(d.clone()),
        }
    }
}

/// A point `z = √J e^{iγ}` of the plane in action-angle form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpacePoint {
    j: f64,
    gamma: f64,
}

impl PhaseSpacePoint {
    /// `gamma` is reduced to `[0, 2π)`.
    pub fn new(j: f64, gamma: f64) -> Result<Self> {
        if !(j >= 0.0) || !j.is_finite() || !gamma.is_finite() {
            return Err(Error::invalid(format!(
                "phase-space point needs finite J ≥ 0 (J = {j})"
            )));
        }
        Ok(Self {
            j,
            gamma: gamma.rem_euclid(2.0 * PI),
        })
    }

    pub fn from_z(z: C64) -> Self {
        Self {
            j: z.norm_sqr(),
            gamma: z.arg().rem_euclid(2.0 * PI),
        }
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn z(&self) -> C64 {
        C64::from_polar(self.j.sqrt(), self.gamma)
    }
}

fn ln_factorials(n: usize) -> Vec<f64> {
    (0..n).map(|k| ln_gamma_pos(k as f64 + 1.0)).collect()
}

/// `L_d^{(k)}(x)` for `d = 0 … len−1`, each returned as `(value, ln scale)`
/// so that the true value is `value · e^{scale}`.
fn laguerre_run(len: usize, k: f64, x: f64, out: &mut Vec<(f64, f64)>) {
    const BIG: f64 = 1e200;
    out.clear();
    if len == 0 {
        return;
    }
    let mut scale = 0.0;
    let mut prev = 1.0;
    out.push((prev, scale));
    if len == 1 {
        return;
    }
    let mut cur = 1.0 + k - x;
    out.push((cur, scale));
    for d in 1..len - 1 {
        let df = d as f64;
        let next = ((2.0 * df + 1.0 + k - x) * cur - (df + k) * prev) / (df + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > BIG {
            cur /= BIG;
            prev /= BIG;
            scale += BIG.ln();
        }
        out.push((cur, scale));
    }
}

/// Matrix elements `⟨n|D(z)|m⟩` for `n < rows`, `m < cols` of the untruncated
/// displacement operator, built from associated Laguerre polynomials with
/// log-space prefactors.
pub fn displacement_block(z: C64, rows: usize, cols: usize) -> Array2<C64> {
    let mut out = Array2::zeros((rows, cols));
    let j = z.norm_sqr();
    if j == 0.0 {
        for i in 0..rows.min(cols) {
            out[[i, i]] = ONE;
        }
        return out;
    }
    let lf = ln_factorials(rows + cols);
    let ln_r = 0.5 * j.ln();
    let gamma = z.arg();
    let mut run = Vec::new();
    // on and below the diagonal: ⟨c+k|D|c⟩ = √(c!/(c+k)!) e^{−J/2} z^k L_c^{(k)}(J)
    for k in 0..rows {
        let len = (rows - k).min(cols);
        if len == 0 {
            continue;
        }
        laguerre_run(len, k as f64, j, &mut run);
        let phase = C64::from_polar(1.0, k as f64 * gamma);
        for (c, &(val, scale)) in run.iter().enumerate() {
            let ln_pref = 0.5 * (lf[c] - lf[c + k]) - 0.5 * j + k as f64 * ln_r + scale;
            out[[c + k, c]] = phase * (val * ln_pref.exp());
        }
    }
    // above: ⟨r|D|r+k⟩ = √(r!/(r+k)!) e^{−J/2} (−z̄)^k L_r^{(k)}(J)
    for k in 1..cols {
        let len = (cols - k).min(rows);
        if len == 0 {
            continue;
        }
        laguerre_run(len, k as f64, j, &mut run);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let phase = C64::from_polar(sign, -(k as f64) * gamma);
        for (r, &(val, scale)) in run.iter().enumerate() {
            let ln_pref = 0.5 * (lf[r] - lf[r + k]) - 0.5 * j + k as f64 * ln_r + scale;
            out[[r, r + k]] = phase * (val * ln_pref.exp());
        }
    }
    out
}

/// Truncation of `D(z)` to the first `dim` Fock states.
pub fn displacement_laguerre(z: C64, dim: usize) -> Result<TruncatedOperator> {
    if dim < 2 {
        return Err(Error::invalid("displacement needs dimension at least 2"));
    }
    TruncatedOperator::new(BasisSpec::one_sided(dim)?, displacement_block(z, dim, dim))
}

/// `|z⟩ = D(z)|0⟩`: components `e^{−|z|²/2} zⁿ/√n!`.
pub fn coherent_state(z: C64, dim: usize) -> Result<Vec<C64>> {
    if dim < 2 {
        return Err(Error::invalid("coherent state needs dimension at least 2"));
    }
    let j = z.norm_sqr();
    if j == 0.0 {
        let mut v = vec![ZERO; dim];
        v[0] = ONE;
        return Ok(v);
    }
    let ln_r = 0.5 * j.ln();
    let gamma = z.arg();
    Ok((0..dim)
        .map(|n| {
            let nf = n as f64;
            let ln_mag = -0.5 * j + nf * ln_r - 0.5 * ln_gamma_pos(nf + 1.0);
            C64::from_polar(ln_mag.exp(), nf * gamma)
        })
        .collect())
}

/// `ρ_t = (1 − t) Σ_{n<D} tⁿ |n⟩⟨n|`; its trace is `1 − t^D`.
pub fn m_s_diagonal(t: f64, dim: usize) -> Result<TruncatedOperator> {
    WeightSpec::thermal(t)?;
    let diag: Vec<f64> = (0..dim).map(|n| (1.0 - t) * t.powi(n as i32)).collect();
    TruncatedOperator::from_diagonal(BasisSpec::one_sided(dim)?, &diag)
}

/// `a₊` and `a₋` on the first `dim` Fock states.
pub fn ladder_operators(dim: usize) -> Result<(TruncatedOperator, TruncatedOperator)> {
    let b = BasisSpec::one_sided(dim)?;
    let a_plus = TruncatedOperator::from_fn(b, |r, c| {
        if r == c + 1 {
            C64::new((r as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    });
    let a_minus = a_plus.adjoint();
    Ok((a_plus, a_minus))
}

/// `U(θ) = diag(e^{inθ})` on the first `dim` Fock states.
pub fn rotation(theta: f64, dim: usize) -> Result<TruncatedOperator> {
    let b = BasisSpec::one_sided(dim)?;
    Ok(TruncatedOperator::from_fn(b, |r, c| {
        if r == c {
            C64::from_polar(1.0, r as f64 * theta)
        } else {
            ZERO
        }
    }))
}

/// Parity `P = diag((−1)ⁿ)`.
pub fn parity(dim: usize) -> Result<TruncatedOperator> {
    let d: Vec<f64> = (0..dim).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }).collect();
    TruncatedOperator::from_diagonal(BasisSpec::one_sided(dim)?, &d)
}

/// Largest defects of the displacement-operator identities, measured on the
/// top-left `D/2` block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceReport {
    /// `D(z)D(z')` against `e^{(z z̄' − z̄ z')/2} D(z + z')`
    pub addition: f64,
    /// `U(θ)D(z)U(θ)†` against `D(e^{iθ}z)`
    pub rotation: f64,
    /// `P D(z) P` against `D(−z)`
    pub parity: f64,
    /// `A_{f(· − z')}` against `D(z') A_f D(z')†` for `f(z) = |z|² + 2 Re z`
    pub translation: f64,
}

impl CovarianceReport {
    pub fn worst(&self) -> f64 {
        self.addition.max(self.rotation).max(self.parity).max(self.translation)
    }
}

fn block_defect(a: &TruncatedOperator, b: &TruncatedOperator, size: usize) -> Result<f64> {
    Ok(op_norm_max(&a.leading_block(size)?.minus(&b.leading_block(size)?)?))
}

pub fn covariance_checks(z: C64, z2: C64, theta: f64, dim: usize) -> Result<CovarianceReport> {
    if dim < 8 {
        return Err(Error::invalid("covariance checks need dimension at least 8"));
    }
    let half = dim / 2;
    let dz = displacement_laguerre(z, dim)?;
    let dz2 = displacement_laguerre(z2, dim)?;
    let phase = C64::from_polar(1.0, (z * z2.conj()).im);
    let sum = displacement_laguerre(z + z2, dim)?.scaled(phase);
    let addition = block_defect(&dz.matmul(&dz2)?, &sum, half)?;

    let u = rotation(theta, dim)?;
    let rotated = u.matmul(&dz)?.matmul(&u.adjoint())?;
    let rotation = block_defect(
        &rotated,
        &displacement_laguerre(z * C64::from_polar(1.0, theta), dim)?,
        half,
    )?;

    let p = parity(dim)?;
    let reflected = p.matmul(&dz)?.matmul(&p)?;
    let parity = block_defect(&reflected, &displacement_laguerre(-z, dim)?, half)?;

    let weight = WeightSpec::thermal(0.0)?;
    let quad = QuadratureScheme::new(dim.max(64) + 16, 32)?;
    let f = PhaseSpaceFunction::from_fourier(RadialKind::SmoothInZ, |q, j| match q {
        0 => C64::new(j, 0.0),
        1 | -1 => C64::new(j.sqrt(), 0.0),
        _ => ZERO,
    });
    let z0 = z2;
    let shifted = PhaseSpaceFunction::from_fourier(RadialKind::SmoothInZ, move |q, j| match q {
        0 => C64::new(j + z0.norm_sqr() - 2.0 * z0.re, 0.0),
        1 => (ONE - z0.conj()) * j.sqrt(),
        -1 => (ONE - z0) * j.sqrt(),
        _ => ZERO,
    });
    let a_f = quantize(&f, &weight, &quad, dim)?.operator;
    let a_shift = quantize(&shifted, &weight, &quad, dim)?.operator;
    let conj = dz2.matmul(&a_f)?.matmul(&dz2.adjoint())?;
    let translation = block_defect(&a_shift, &conj, half)?;

    Ok(CovarianceReport {
        addition,
        rotation,
        parity,
        translation,
    })
}
