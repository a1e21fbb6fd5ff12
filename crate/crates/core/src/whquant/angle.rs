use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::quantize::radial_density;
use super::{lower_symbol, PhaseSpacePoint, WeightSpec};
use crate::error::{Error, Result};
use crate::linalg::{commutator, BasisMode, BasisSpec, TruncatedOperator, ZERO};
use crate::specfun::{
    assoc_laguerre, gauss_2f1_terminating, gauss_2f1_terminating_exact, ln_gamma_pos, ln_kummer_1f1, SeriesTolerance,
};

/// Domain on which the closed triple-Laguerre form of `d_q` is accepted.
pub const GENERAL_MAX_J: f64 = 20.0;
pub const GENERAL_MAX_Q: u32 = 12;
pub const GENERAL_MAX_T: f64 = 0.5;
const MAX_DIRECT_LEVELS: usize = 1500;

/// `Γ((n+n')/2 + 1)/√(n! n'!)`.
pub fn gamma_ratio(n: u64, np: u64) -> f64 {
    let (a, b) = (n as f64, np as f64);
    (ln_gamma_pos(0.5 * (a + b) + 1.0) - 0.5 * (ln_gamma_pos(a + 1.0) + ln_gamma_pos(b + 1.0))).exp()
}

/// The closed form of `F_{nn'}(t) = ∫ g_{nn'}(J) dJ`, evaluated with its
/// indices in the given order.
///
/// For `n > n'` the ₂F₁ sum alternates with terms far larger than its value
/// and loses digits as `n` grows; with `n + n'` even its second and third
/// parameters are both nonpositive integers and the sum is the equal-shift
/// limit described at [`gauss_2f1_terminating`].
pub fn f_coefficient_ordered(n: u64, np: u64, t: f64) -> Result<f64> {
    f_closed_form(n, np, t, gauss_2f1_terminating)
}

/// [`f_coefficient_ordered`] with the ₂F₁ summed in exact rational
/// arithmetic, a reference for either index order.
pub fn f_coefficient_exact(n: u64, np: u64, t: f64) -> Result<f64> {
    f_closed_form(n, np, t, gauss_2f1_terminating_exact)
}

fn f_closed_form(n: u64, np: u64, t: f64, hyp: fn(i64, f64, f64, f64) -> Result<f64>) -> Result<f64> {
    WeightSpec::thermal(t)?;
    let (a, b) = (n as f64, np as f64);
    let half_gap = 0.5 * (b - a);
    let h = hyp(-(n as i64), half_gap, -0.5 * (a + b), t)?;
    Ok(gamma_ratio(n, np) * (1.0 - t).powf(half_gap) * h)
}

/// `F_{nn'}(t)`, symmetric in its indices; always evaluated with the smaller
/// index first.
pub fn f_coefficient(n: u64, np: u64, t: f64) -> Result<f64> {
    f_coefficient_ordered(n.min(np), n.max(np), t)
}

/// The angle operator `A_a` on the first `dim` Fock states:
/// `π` on the diagonal and `i F_{nn'}(t)/(n' − n)` off it.
pub fn angle_matrix(t: f64, dim: usize) -> Result<TruncatedOperator> {
    let basis = BasisSpec::one_sided(dim)?;
    let mut f = vec![0.0; dim * dim];
    for n in 0..dim {
        for np in n + 1..dim {
            let v = f_coefficient(n as u64, np as u64, t)?;
            f[n * dim + np] = v;
            f[np * dim + n] = v;
        }
    }
    Ok(TruncatedOperator::from_fn(basis, |r, c| {
        if r == c {
            C64::new(PI, 0.0)
        } else {
            C64::new(0.0, f[r * dim + c] / (c as f64 - r as f64))
        }
    }))
}

/// `A_J = N + 1`.
pub fn action_operator(dim: usize) -> Result<TruncatedOperator> {
    let d: Vec<f64> = (0..dim).map(|n| n as f64 + 1.0).collect();
    TruncatedOperator::from_diagonal(BasisSpec::one_sided(dim)?, &d)
}

/// `[A_a, A_J]`, with entries `i F_{nn'}` off the diagonal.
pub fn action_angle_commutator(t: f64, dim: usize) -> Result<TruncatedOperator> {
    commutator(&angle_matrix(t, dim)?, &action_operator(dim)?)
}

/// Lower symbol of `[A_a, A_J]` at `point`.
pub fn commutator_symbol(point: PhaseSpacePoint, t: f64, dim: usize) -> Result<C64> {
    let k = action_angle_commutator(t, dim)?;
    Ok(lower_symbol(&k, &WeightSpec::thermal(t)?, point)?.value)
}

/// `d_q(J)` for the vacuum weight:
/// `e^{−J} J^{q/2} Γ(q/2+1)/q! ₁F₁(q/2+1; q+1; J)`.
pub fn d_q_cs(q: u32, j: f64) -> Result<f64> {
    if !(j >= 0.0) || !j.is_finite() {
        return Err(Error::domain("d_q_cs", format!("J = {j}")));
    }
    let qf = q as f64;
    if j == 0.0 {
        return Ok(if q == 0 { 1.0 } else { 0.0 });
    }
    let ln_k = ln_kummer_1f1(0.5 * qf + 1.0, qf + 1.0, j, SeriesTolerance::default())?;
    Ok((-j + 0.5 * qf * j.ln() + ln_gamma_pos(0.5 * qf + 1.0) - ln_gamma_pos(qf + 1.0) + ln_k).exp())
}

fn direct_cutoff(j: f64, t: f64) -> usize {
    let nbar = t / (1.0 - t);
    let var = j * (2.0 * nbar + 1.0) + nbar * nbar + nbar + 1.0;
    (j + nbar + 12.0 * var.sqrt() + 40.0).ceil() as usize
}

/// `d_q(J) = Σ_n F_{n,n+q}(t) g_{n,n+q}(J)`, summed over all Fock levels
/// the displaced thermal state reaches.
pub fn d_q_direct(q: u32, j: f64, t: f64) -> Result<f64> {
    let weight = WeightSpec::thermal(t)?;
    if !(j >= 0.0) || !j.is_finite() {
        return Err(Error::domain("d_q_direct", format!("J = {j}")));
    }
    let levels = weight.levels()?;
    let n_max = direct_cutoff(j, t);
    let dim = n_max + q as usize;
    if dim > MAX_DIRECT_LEVELS {
        return Err(Error::invalid(format!(
            "d_q at J = {j}, t = {t} needs {dim} Fock levels (limit {MAX_DIRECT_LEVELS})"
        )));
    }
    let g = radial_density(j, &levels, dim);
    let qs = q as usize;
    let mut s = 0.0;
    for n in 0..n_max {
        s += f_coefficient(n as u64, (n + qs) as u64, t)? * g[[n, n + qs]];
    }
    Ok(s)
}

/// `d_q(J)` from the closed triple-Laguerre form,
/// `(1−t)^{q/2+1} e^{−J} Σ_n Γ(q/2+n+1) ₂F₁(−n, q/2; −q/2−n; t) Σ_m tᵐ T_{nm}`.
///
/// Accepted for `J ≤ 20`, `1 ≤ q ≤ 12`, `t ≤ 0.5`, where the alternating
/// sum keeps enough digits.
pub fn d_q_general(q: u32, j: f64, t: f64) -> Result<f64> {
    WeightSpec::thermal(t)?;
    if !(0.0..=GENERAL_MAX_J).contains(&j) || q == 0 || q > GENERAL_MAX_Q || t > GENERAL_MAX_T {
        return Err(Error::domain(
            "d_q_general",
            format!(
                "(q, J, t) = ({q}, {j}, {t}) outside q ≤ {GENERAL_MAX_Q}, J ≤ {GENERAL_MAX_J}, t ≤ {GENERAL_MAX_T}"
            ),
        ));
    }
    if j == 0.0 {
        return Ok(0.0);
    }
    let qf = q as f64;
    let hq = 0.5 * qf;
    let lj = j.ln();
    let n_max = direct_cutoff(j, t);
    let lf = |k: usize| ln_gamma_pos(k as f64 + 1.0);
    let signed_ln = |x: f64| (x.signum(), x.abs().ln());
    let mut outer = Neumaier::default();
    for n in 0..n_max {
        let nf = n as f64;
        let hyp = gauss_2f1_terminating(-(n as i64), hq, -hq - nf, t)?;
        let ln_pre = ln_gamma_pos(hq + nf + 1.0);
        let qn = q as usize + n;
        let m_max = if t == 0.0 { 1 } else { qn + 80 };
        let mut inner = Neumaier::default();
        for m in 0..m_max {
            let mf = m as f64;
            let ln_t = if m == 0 { 0.0 } else { mf * t.ln() };
            let (sign, ln_mag) = if m <= n {
                let (s1, l1) = signed_ln(assoc_laguerre(m as u32, (n - m) as f64, j));
                let (s2, l2) = signed_ln(assoc_laguerre(m as u32, (qn - m) as f64, j));
                (s1 * s2, lf(m) - lf(qn) - lf(n) + (hq + nf - mf) * lj + l1 + l2)
            } else if m <= qn {
                let (s1, l1) = signed_ln(assoc_laguerre(n as u32, (m - n) as f64, j));
                let (s2, l2) = signed_ln(assoc_laguerre(m as u32, (qn - m) as f64, j));
                let parity = if (m + n) % 2 == 0 { 1.0 } else { -1.0 };
                (parity * s1 * s2, -lf(qn) + hq * lj + l1 + l2)
            } else {
                let (s1, l1) = signed_ln(assoc_laguerre(n as u32, (m - n) as f64, j));
                let (s2, l2) = signed_ln(assoc_laguerre(qn as u32, (m - qn) as f64, j));
                let parity = if q % 2 == 0 { 1.0 } else { -1.0 };
                (parity * s1 * s2, -lf(m) + (mf - hq - nf) * lj + l1 + l2)
            };
            if sign != 0.0 {
                inner.add(sign * (ln_t + ln_mag + ln_pre - j).exp());
            }
        }
        outer.add(hyp * inner.total());
    }
    Ok((1.0 - t).powf(hq + 1.0) * outer.total())
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `γ` reduced to `[0, 2π)`.
pub fn sawtooth(gamma: f64) -> f64 {
    gamma.rem_euclid(2.0 * PI)
}

/// `π − 2 Σ_{q=1}^{Q} sin(qγ)/q`, the Fourier partial sum of the sawtooth.
pub fn sawtooth_fourier(gamma: f64, q_max: u32) -> f64 {
    PI - 2.0 * (1..=q_max).map(|q| (q as f64 * gamma).sin() / q as f64).sum::<f64>()
}

/// `(2/π) Σ_{s=0}^{S} (u^{2s+1} + ū^{2s+1})/(2s+1)²` at `u = e^{iθ}`,
/// whose limit is `arcsin(cos θ)`.
pub fn arcsin_cos_partial_sum(theta: f64, s_max: u32) -> f64 {
    let s: f64 = (0..=s_max)
        .map(|s| {
            let k = (2 * s + 1) as f64;
            2.0 * (k * theta).cos() / (k * k)
        })
        .sum();
    2.0 / PI * s
}

/// `B = π I + i Σ_{1≤|n|≤Q} Uⁿ/n` for the shift `U|n⟩ = |n+1⟩` on a cyclic or
/// two-sided basis.
pub fn canonical_angle_b(basis: BasisSpec, q_cutoff: usize) -> Result<TruncatedOperator> {
    let dim = basis.dim();
    let entry = |n: i64| {
        if n == 0 {
            C64::new(PI, 0.0)
        } else if n.unsigned_abs() as usize <= q_cutoff {
            C64::new(0.0, 1.0 / n as f64)
        } else {
            ZERO
        }
    };
    match basis.mode() {
        BasisMode::Cyclic => {
            if 2 * q_cutoff >= dim {
                return Err(Error::invalid(format!(
                    "cutoff {q_cutoff} aliases on a cyclic basis of dimension {dim}"
                )));
            }
            let d = dim as i64;
            Ok(TruncatedOperator::from_fn(basis, |r, c| {
                // the representative of r − c in (−D/2, D/2]
                let mut n = (r as i64 - c as i64).rem_euclid(d);
                if n > d / 2 {
                    n -= d;
                }
                entry(n)
            }))
        }
        BasisMode::TwoSided => Ok(TruncatedOperator::from_fn(basis, |r, c| entry(r as i64 - c as i64))),
        BasisMode::OneSided => Err(Error::BasisMismatch(
            "the canonical angle is built on a cyclic or two-sided basis".into(),
        )),
    }
}
