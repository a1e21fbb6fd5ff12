//! Coherent states on the cylinder built from an even probability density
//! `p^σ`, their overlap matrix, quantization of functions of `(J, φ)` on the
//! two-sided basis, and the resulting angle operator and commutators.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{commutator, BasisMode, BasisSpec, TruncatedOperator, ZERO};
use crate::quadrature::{adaptive_gk, GaussLegendre};
use crate::specfun::{theta3_normalizer, ThetaForm};

/// Mass of the density allowed outside its declared support radius; its
/// square root bounds what overlap integrals lose to the cut.
pub const SUPPORT_EPS: f64 = 1e-30;
const QUAD_ABS: f64 = 1e-15;
const QUAD_REL: f64 = 1e-13;
const EVEN_TOL: f64 = 1e-10;
const MASS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionKind {
    Gaussian,
    Custom,
}

type RealFn = dyn Fn(f64) -> f64 + Send + Sync;

/// An even, normalized, nonnegative density on the line together with the
/// radius `R` outside of which it carries less than `SUPPORT_EPS` mass.
#[derive(Clone)]
pub struct DistributionSpec {
    kind: DistributionKind,
    sigma: f64,
    support: f64,
    pdf: Arc<RealFn>,
    ft: Option<Arc<RealFn>>,
}

impl std::fmt::Debug for DistributionSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DistributionSpec")
            .field("kind", &self.kind)
            .field("sigma", &self.sigma)
            .field("support", &self.support)
            .finish()
    }
}

impl DistributionSpec {
    /// `p^σ(J) = e^{−J²/2σ²}/(σ√2π)`, with transform `e^{−σ²k²/2}`.
    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::invalid(format!("sigma = {sigma} must be positive")));
        }
        let norm = 1.0 / (sigma * (2.0 * PI).sqrt());
        let inv = 1.0 / (2.0 * sigma * sigma);
        Ok(Self {
            kind: DistributionKind::Gaussian,
            sigma,
            support: sigma * (-2.0 * SUPPORT_EPS.ln()).sqrt(),
            pdf: Arc::new(move |j| norm * (-j * j * inv).exp()),
            ft: Some(Arc::new(move |k| (-0.5 * sigma * sigma * k * k).exp())),
        })
    }

    /// A user density; evenness, positivity and unit mass are checked on
    /// `[−support, support]`. `ft(k) = ∫ pdf(J) e^{−ikJ} dJ` enables the
    /// Poisson form of the normalizer.
    pub fn custom(
        sigma: f64,
        support: f64,
        pdf: impl Fn(f64) -> f64 + Send + Sync + 'static,
        ft: Option<Arc<RealFn>>,
    ) -> Result<Self> {
        if !(sigma > 0.0) || !(support > 0.0) || !support.is_finite() {
            return Err(Error::invalid(
                "custom density needs positive sigma and finite support radius",
            ));
        }
        for i in 0..=200 {
            let x = support * i as f64 / 200.0;
            let (a, b) = (pdf(x), pdf(-x));
            if !(a >= 0.0) || !(b >= 0.0) || !a.is_finite() {
                return Err(Error::invalid(format!("density is negative or not finite at ±{x}")));
            }
            if (a - b).abs() > EVEN_TOL * a.abs().max(1.0) {
                return Err(Error::invalid(format!("density is not even at ±{x}")));
            }
        }
        let mass = adaptive_gk(&pdf, -support, support, 1e-14, 1e-12)?;
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::invalid(format!("density integrates to {mass}, not 1")));
        }
        Ok(Self {
            kind: DistributionKind::Custom,
            sigma,
            support,
            pdf: Arc::new(pdf),
            ft,
        })
    }

    pub fn kind(&self) -> DistributionKind {
        self.kind
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn support(&self) -> f64 {
        self.support
    }

    pub fn pdf(&self, j: f64) -> f64 {
        (self.pdf)(j)
    }

    /// `p_n(J) = p(J − n)`
    pub fn p_n(&self, n: i64, j: f64) -> f64 {
        self.pdf(j - n as f64)
    }

    /// `𝒩(J) = Σ_n p(J − n)` over all integers.
    pub fn normalizer(&self, j: f64, form: ThetaForm) -> Result<f64> {
        if self.kind == DistributionKind::Gaussian {
            return theta3_normalizer(j, self.sigma, form);
        }
        match form {
            ThetaForm::Direct => {
                let lo = (j - self.support).floor() as i64;
                let hi = (j + self.support).ceil() as i64;
                Ok((lo..=hi).map(|n| self.p_n(n, j)).sum())
            }
            ThetaForm::Poisson => {
                let ft = self
                    .ft
                    .as_ref()
                    .ok_or_else(|| Error::invalid("Poisson form needs the density's Fourier transform"))?;
                let mut s = ft(0.0);
                for k in 1..100_000 {
                    let w = ft(2.0 * PI * k as f64);
                    s += 2.0 * w * (2.0 * PI * k as f64 * j).cos();
                    if w.abs() < 1e-18 {
                        break;
                    }
                }
                Ok(s)
            }
        }
    }

    /// `∫ p(J) f(J) dJ`, the density smeared against a test function.
    pub fn smeared(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        adaptive_gk(|j| self.pdf(j) * f(j), -self.support, self.support, QUAD_ABS, QUAD_REL)
    }
}

/// A point `(J, φ)` of the cylinder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderPoint {
    j: f64,
    phi: f64,
}

impl CylinderPoint {
    /// `phi` is reduced to `[0, 2π)`.
    pub fn new(j: f64, phi: f64) -> Result<Self> {
        if !j.is_finite() || !phi.is_finite() {
            return Err(Error::invalid("cylinder point needs finite coordinates"));
        }
        Ok(Self {
            j,
            phi: phi.rem_euclid(2.0 * PI),
        })
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// `p_{n,n'} = ∫ √(p_n(J) p_{n'}(J)) dJ`, which depends only on `|n − n'|`.
pub fn overlap(dist: &DistributionSpec, m: u64) -> Result<f64> {
    if m == 0 {
        return Ok(1.0);
    }
    let mf = m as f64;
    let r = dist.support;
    if mf >= 2.0 * r {
        return Ok(0.0);
    }
    let v = adaptive_gk(
        |j| (dist.pdf(j) * dist.pdf(j - mf)).sqrt(),
        mf - r,
        r,
        QUAD_ABS,
        QUAD_REL,
    )?;
    Ok(v.clamp(0.0, 1.0))
}

/// `e^{−m²/8σ²}`, the Gaussian overlap in closed form.
pub fn gaussian_overlap(sigma: f64, m: u64) -> f64 {
    let mf = m as f64;
    (-mf * mf / (8.0 * sigma * sigma)).exp()
}

/// `p_{0,m}` for `0 ≤ m ≤ half_bandwidth`.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapMatrix {
    values: Vec<f64>,
}

impl OverlapMatrix {
    pub fn new(dist: &DistributionSpec, half_bandwidth: usize) -> Result<Self> {
        if half_bandwidth == 0 {
            return Err(Error::invalid("overlap matrix needs a positive half-bandwidth"));
        }
        let values = (0..=half_bandwidth as u64)
            .map(|m| overlap(dist, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { values })
    }

    pub fn half_bandwidth(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `p_{n,n'}`; zero outside the band.
    pub fn get(&self, n: i64, np: i64) -> f64 {
        self.values
            .get((n - np).unsigned_abs() as usize)
            .copied()
            .unwrap_or(0.0)
    }

    pub fn is_non_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
    }
}

fn require_two_sided(basis: BasisSpec) -> Result<()> {
    if basis.mode() != BasisMode::TwoSided {
        return Err(Error::BasisMismatch(format!(
            "circle coherent states live on a two-sided basis, got {}",
            basis.mode()
        )));
    }
    Ok(())
}

/// `|J, φ⟩ = 𝒩(J)^{−1/2} Σ_n √(p(J − n)) e^{−inφ} |e_n⟩`, restricted to the
/// basis labels.
pub fn cs_vector(dist: &DistributionSpec, point: CylinderPoint, basis: BasisSpec) -> Result<Vec<C64>> {
    require_two_sided(basis)?;
    let norm = dist.normalizer(point.j, ThetaForm::Direct)?;
    let v: Vec<C64> = basis
        .labels()
        .map(|n| {
            let amp = (dist.p_n(n, point.j) / norm).sqrt();
            C64::from_polar(amp, -(n as f64) * point.phi)
        })
        .collect();
    let kept: f64 = v.iter().map(|c| c.norm_sqr()).sum();
    if !(norm > 0.0) || !(kept >= 0.5) {
        return Err(Error::NormalizerUnderflow(point.j));
    }
    Ok(v)
}

/// Quantization `A_f = ∫ f(J, φ) |J,φ⟩⟨J,φ| 𝒩(J) dJ dφ/2π` of
/// `f = f_J(J)` (diagonal), of `f = Σ c_q e^{iqφ}` (band), or of their
/// product (entrywise quadrature).
pub fn quantize_cyl(
    f_j: Option<&(dyn Fn(f64) -> f64 + Sync)>,
    fourier_phi: Option<&(dyn Fn(i64) -> C64 + Sync)>,
    dist: &DistributionSpec,
    basis: BasisSpec,
) -> Result<TruncatedOperator> {
    require_two_sided(basis)?;
    let dim = basis.dim();
    let r = dist.support;
    match (f_j, fourier_phi) {
        (None, None) => Err(Error::invalid(
            "quantize_cyl needs an action part, an angle part, or both",
        )),
        (Some(f), None) => {
            let mut diag = Vec::with_capacity(dim);
            for n in basis.labels() {
                let nf = n as f64;
                diag.push(adaptive_gk(
                    |j| dist.p_n(n, j) * f(j),
                    nf - r,
                    nf + r,
                    QUAD_ABS,
                    QUAD_REL,
                )?);
            }
            TruncatedOperator::from_diagonal(basis, &diag)
        }
        (None, Some(c)) => {
            let p = OverlapMatrix::new(dist, dim - 1)?;
            Ok(TruncatedOperator::from_fn(basis, |i, k| {
                let m = basis.label(i) - basis.label(k);
                let pm = p.get(m, 0);
                if pm == 0.0 {
                    ZERO
                } else {
                    c(m) * pm
                }
            }))
        }
        (Some(f), Some(c)) => {
            let labels: Vec<i64> = basis.labels().collect();
            let mut entries = vec![ZERO; dim * dim];
            for i in 0..dim {
                for k in 0..dim {
                    let (n, np) = (labels[i] as f64, labels[k] as f64);
                    let (lo, hi) = (n.max(np) - r, n.min(np) + r);
                    if lo >= hi {
                        continue;
                    }
                    let cm = c(labels[i] - labels[k]);
                    if cm == ZERO {
                        continue;
                    }
                    let v = adaptive_gk(
                        |j| (dist.p_n(labels[i], j) * dist.p_n(labels[k], j)).sqrt() * f(j),
                        lo,
                        hi,
                        QUAD_ABS,
                        QUAD_REL,
                    )?;
                    entries[i * dim + k] = cm * v;
                }
            }
            Ok(TruncatedOperator::from_fn(basis, |i, k| entries[i * dim + k]))
        }
    }
}

/// Fourier coefficients of the sawtooth `a(φ) = φ mod 2π`.
pub fn sawtooth_coefficient(q: i64) -> C64 {
    if q == 0 {
        C64::new(PI, 0.0)
    } else {
        C64::new(0.0, 1.0 / q as f64)
    }
}

/// `A_J`, the quantized action.
pub fn action_operator_cyl(dist: &DistributionSpec, basis: BasisSpec) -> Result<TruncatedOperator> {
    quantize_cyl(Some(&|j| j), None, dist, basis)
}

/// `A_a = π I + i Σ_{n≠n'} p_{n,n'}/(n − n') |e_n⟩⟨e_{n'}|`.
pub fn angle_operator_cyl(dist: &DistributionSpec, basis: BasisSpec) -> Result<TruncatedOperator> {
    quantize_cyl(None, Some(&sawtooth_coefficient), dist, basis)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicReport {
    /// `max_n |⟨e_n|A A†|e_n⟩ − p_{1,0}²|` over rows away from the edge
    pub defect: f64,
    pub p10_squared: f64,
}

/// How far `A_{e^{iφ}}` is from being a multiple of a unitary.
pub fn fourier_harmonic_defect(dist: &DistributionSpec, basis: BasisSpec) -> Result<HarmonicReport> {
    let c = |q: i64| if q == 1 { C64::new(1.0, 0.0) } else { ZERO };
    let a = quantize_cyl(None, Some(&c), dist, basis)?;
    let aa = a.matmul(&a.adjoint())?;
    let p10 = overlap(dist, 1)?;
    let p2 = p10 * p10;
    let dim = basis.dim();
    let mut defect: f64 = 0.0;
    for i in 1..dim - 1 {
        defect = defect.max((aa.get(i, i) - C64::new(p2, 0.0)).norm());
        for k in 1..dim - 1 {
            if k != i {
                defect = defect.max(aa.get(i, k).norm());
            }
        }
    }
    Ok(HarmonicReport {
        defect,
        p10_squared: p2,
    })
}

#[derive(Debug, Clone)]
pub struct CircleCommutator {
    /// `[A_J, A_a]` from the two quantized operators
    pub from_operators: TruncatedOperator,
    /// `i Σ_{n≠n'} p_{n,n'} |e_n⟩⟨e_{n'}|`
    pub direct: TruncatedOperator,
    /// largest difference between the two on the interior window
    pub agreement: f64,
}

/// `[A_J, A_a]` two ways; the window excludes `margin` labels at each edge.
pub fn commutator_number_angle(dist: &DistributionSpec, basis: BasisSpec, margin: usize) -> Result<CircleCommutator> {
    let aj = action_operator_cyl(dist, basis)?;
    let aa = angle_operator_cyl(dist, basis)?;
    let from_operators = commutator(&aj, &aa)?;
    let p = OverlapMatrix::new(dist, basis.dim() - 1)?;
    let direct = TruncatedOperator::from_fn(basis, |i, k| {
        if i == k {
            ZERO
        } else {
            C64::new(0.0, p.get(basis.label(i), basis.label(k)))
        }
    });
    let dim = basis.dim();
    if 2 * margin >= dim {
        return Err(Error::EmptyWindow {
            lo: basis.first_label() + margin as i64,
            hi: basis.last_label() - margin as i64,
        });
    }
    let mut agreement: f64 = 0.0;
    for i in margin..dim - margin {
        for k in margin..dim - margin {
            agreement = agreement.max((from_operators.get(i, k) - direct.get(i, k)).norm());
        }
    }
    Ok(CircleCommutator {
        from_operators,
        direct,
        agreement,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylSymbol {
    pub value: C64,
    /// `1 − ‖|J,φ⟩‖²` on the truncated basis
    pub leakage: f64,
    pub leakage_warning: bool,
}

/// `⟨J,φ|A|J,φ⟩`.
pub fn lower_symbol_cyl(a: &TruncatedOperator, dist: &DistributionSpec, point: CylinderPoint) -> Result<CylSymbol> {
    let v = cs_vector(dist, point, a.basis())?;
    let av = a.apply(&v)?;
    let value = v.iter().zip(&av).map(|(x, y)| x.conj() * y).sum();
    let leakage = (1.0 - v.iter().map(|c| c.norm_sqr()).sum::<f64>()).max(0.0);
    Ok(CylSymbol {
        value,
        leakage,
        leakage_warning: leakage > crate::whquant::LEAKAGE_WARNING,
    })
}

/// `d_m^σ(J) = 𝒩(J)^{−1} Σ_r √(p_r(J) p_{m+r}(J))`.
pub fn d_m_sigma(dist: &DistributionSpec, m: i64, j: f64) -> Result<f64> {
    let norm = dist.normalizer(j, ThetaForm::Direct)?;
    let lo = (j - dist.support).floor() as i64 - m.abs();
    let hi = (j + dist.support).ceil() as i64 + m.abs();
    let s: f64 = (lo..=hi).map(|r| (dist.p_n(r, j) * dist.p_n(r + m, j)).sqrt()).sum();
    Ok(s / norm)
}

/// `c_0 + Σ_{0<|m|≤Q} d_m(J) p_{0,m} c_m e^{imφ}`, the lower symbol of a band
/// quantization computed from its Fourier data.
pub fn fourier_symbol_cyl(
    dist: &DistributionSpec,
    c: impl Fn(i64) -> C64,
    q_max: usize,
    point: CylinderPoint,
) -> Result<C64> {
    let p = OverlapMatrix::new(dist, q_max.max(1))?;
    let mut s = c(0);
    for m in 1..=q_max as i64 {
        for mm in [m, -m] {
            let pm = p.get(mm, 0);
            if pm == 0.0 {
                continue;
            }
            let d = d_m_sigma(dist, mm, point.j)?;
            s += c(mm) * (d * pm) * C64::from_polar(1.0, mm as f64 * point.phi);
        }
    }
    Ok(s)
}

/// `⟨J,φ|J',φ'⟩` for a Gaussian density, in the direct and the
/// Poisson-summed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapKernel {
    pub direct: C64,
    pub poisson: C64,
}

impl OverlapKernel {
    pub fn deviation(&self) -> f64 {
        (self.direct - self.poisson).norm()
    }
}

pub fn overlap_kernel(dist: &DistributionSpec, p1: CylinderPoint, p2: CylinderPoint) -> Result<OverlapKernel> {
    if dist.kind != DistributionKind::Gaussian {
        return Err(Error::invalid("the closed overlap kernel needs a Gaussian density"));
    }
    let s = dist.sigma;
    let mean = 0.5 * (p1.j + p2.j);
    let dj = p1.j - p2.j;
    let delta = p1.phi - p2.phi;
    let envelope = (-dj * dj / (8.0 * s * s)).exp();

    let half = 10.0 * s + 2.0;
    let lo = (mean - half).floor() as i64;
    let hi = (mean + half).ceil() as i64;
    let mut direct_sum = ZERO;
    for n in lo..=hi {
        let x = n as f64 - mean;
        direct_sum += C64::from_polar((-x * x / (2.0 * s * s)).exp(), n as f64 * delta);
    }
    let n_direct = (dist.normalizer(p1.j, ThetaForm::Direct)? * dist.normalizer(p2.j, ThetaForm::Direct)?).sqrt();
    let direct = direct_sum * (envelope / (s * (2.0 * PI).sqrt() * n_direct));

    let k_reach = ((10.0 / s + delta.abs()) / (2.0 * PI)).ceil() as i64 + 2;
    let mut poisson_sum = ZERO;
    for k in -k_reach..=k_reach {
        let w = 2.0 * PI * k as f64 - delta;
        poisson_sum += C64::from_polar((-0.5 * s * s * w * w).exp(), -w * mean);
    }
    let n_poisson = (dist.normalizer(p1.j, ThetaForm::Poisson)? * dist.normalizer(p2.j, ThetaForm::Poisson)?).sqrt();
    let poisson = poisson_sum * (envelope / n_poisson);
    Ok(OverlapKernel { direct, poisson })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitCase {
    /// `σ → 0`: distinct integer actions become orthogonal, equal ones keep
    /// unit modulus
    Small,
    /// `σ → ∞`: the angle becomes sharp
    Large,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitRow {
    pub sigma: f64,
    pub case: LimitCase,
    pub description: &'static str,
    pub modulus: f64,
    /// `true` when the limit predicts a vanishing modulus, `false` for one
    pub predicts_zero: bool,
    pub threshold: f64,
    pub pass: bool,
}

pub const LIMIT_THRESHOLD: f64 = 0.05;

/// `|⟨J,φ|J',φ'⟩|` at configurations whose `σ → 0` or `σ → ∞` limits are
/// known, compared with the limit at `LIMIT_THRESHOLD`.
pub fn limit_study(sigmas: &[f64], case: LimitCase) -> Result<Vec<LimitRow>> {
    let configs: [(&'static str, f64, f64, f64, bool); 2] = match case {
        LimitCase::Small => [
            ("J=2, J'=3, equal angles", 2.0, 3.0, 0.0, true),
            ("J=J'=2, angles 1 apart", 2.0, 2.0, 1.0, false),
        ],
        LimitCase::Large => [
            ("J=2, J'=3, angles pi apart", 2.0, 3.0, PI, true),
            ("J=2, J'=3, equal angles", 2.0, 3.0, 0.0, false),
        ],
    };
    let mut rows = Vec::new();
    for &sigma in sigmas {
        let dist = DistributionSpec::gaussian(sigma)?;
        for &(description, j1, j2, dphi, predicts_zero) in &configs {
            let k = overlap_kernel(&dist, CylinderPoint::new(j1, dphi)?, CylinderPoint::new(j2, 0.0)?)?;
            let modulus = k.direct.norm();
            let pass = if predicts_zero {
                modulus <= LIMIT_THRESHOLD
            } else {
                modulus >= 1.0 - LIMIT_THRESHOLD
            };
            rows.push(LimitRow {
                sigma,
                case,
                description,
                modulus,
                predicts_zero,
                threshold: LIMIT_THRESHOLD,
                pass,
            });
        }
    }
    Ok(rows)
}

/// `∫∫ 𝒩(J) |J,φ⟩⟨J,φ| dJ dφ/2π` over `J ∈ [−D/3, D/3]` by composite
/// Gauss–Legendre in `J` and the trapezoid rule in `φ`.
pub fn resolution_of_identity_cyl(
    dist: &DistributionSpec,
    basis: BasisSpec,
    panels: usize,
    n_phi: usize,
) -> Result<TruncatedOperator> {
    require_two_sided(basis)?;
    if n_phi < basis.dim() {
        return Err(Error::invalid("angular nodes must exceed the basis dimension"));
    }
    let half = basis.dim() as f64 / 3.0;
    let (nodes, weights) = GaussLegendre::new(8)?.composite(-half, half, panels.max(1));
    let dim = basis.dim();
    let mut acc = vec![ZERO; dim * dim];
    for (&j, &w) in nodes.iter().zip(&weights) {
        let norm = dist.normalizer(j, ThetaForm::Direct)?;
        for k in 0..n_phi {
            let phi = 2.0 * PI * k as f64 / n_phi as f64;
            let v = cs_vector(dist, CylinderPoint::new(j, phi)?, basis)?;
            let scale = w * norm / n_phi as f64;
            for a in 0..dim {
                let va = v[a] * scale;
                for b in 0..dim {
                    acc[a * dim + b] += va * v[b].conj();
                }
            }
        }
    }
    Ok(TruncatedOperator::from_fn(basis, |a, b| acc[a * dim + b]))
}
