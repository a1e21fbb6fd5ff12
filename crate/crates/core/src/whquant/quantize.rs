use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::{Array2, Axis};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::{displacement_block, PhaseSpacePoint, WeightSpec, LEAKAGE_WARNING};
use crate::error::{Error, Result};
use crate::linalg::{BasisMode, BasisSpec, TruncatedOperator, ZERO};
use crate::quadrature::GaussLaguerre;

/// Entries of two quantizations at the base and refined resolutions that
/// differ by more than this mark the result as under-resolved.
pub const REFINEMENT_TOL: f64 = 1e-6;
const NODE_CHUNK: usize = 8;

/// How the angular Fourier coefficients `c_q(J)` behave near `J = 0`, which
/// picks the radial Gauss–Laguerre rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialKind {
    /// `c_q(J)` smooth in `J`: odd `|n − n'|` matrix elements carry a `√J`
    /// and are integrated with the `α = ½` rule
    SmoothInAction,
    /// `c_q(J) ∝ J^{|q|/2}` times a smooth function, as for polynomials in
    /// `z` and `z̄`
    SmoothInZ,
}

type FourierFn = dyn Fn(i64, f64) -> C64 + Send + Sync;
type PointFn = dyn Fn(f64, f64) -> C64 + Send + Sync;

#[derive(Clone)]
enum Repr {
    Fourier(Arc<FourierFn>),
    Pointwise(Arc<PointFn>),
}

/// A function on the plane, given either pointwise in `(J, γ)` or through its
/// angular Fourier coefficients `c_q(J) = ∫ f e^{−iqγ} dγ/2π`.
#[derive(Clone)]
pub struct PhaseSpaceFunction {
    kind: RadialKind,
    repr: Repr,
}

impl std::fmt::Debug for PhaseSpaceFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let repr = match self.repr {
            Repr::Fourier(_) => "fourier",
            Repr::Pointwise(_) => "pointwise",
        };
        f.debug_struct("PhaseSpaceFunction")
            .field("kind", &self.kind)
            .field("repr", &repr)
            .finish()
    }
}

impl PhaseSpaceFunction {
    pub fn from_fourier(kind: RadialKind, c: impl Fn(i64, f64) -> C64 + Send + Sync + 'static) -> Self {
        Self {
            kind,
            repr: Repr::Fourier(Arc::new(c)),
        }
    }

    /// `f(J, γ)`; coefficients come from an `n_γ`-point DFT.
    pub fn from_pointwise(kind: RadialKind, f: impl Fn(f64, f64) -> C64 + Send + Sync + 'static) -> Self {
        Self {
            kind,
            repr: Repr::Pointwise(Arc::new(f)),
        }
    }

    pub fn constant(value: f64) -> Self {
        Self::from_fourier(RadialKind::SmoothInAction, move |q, _| {
            if q == 0 {
                C64::new(value, 0.0)
            } else {
                ZERO
            }
        })
    }

    /// The angle `γ ∈ [0, 2π)`: `c_0 = π`, `c_q = i/q`.
    pub fn angle() -> Self {
        Self::from_fourier(RadialKind::SmoothInAction, |q, _| {
            if q == 0 {
                C64::new(PI, 0.0)
            } else {
                C64::new(0.0, 1.0 / q as f64)
            }
        })
    }

    /// The action `J = |z|²`.
    pub fn action() -> Self {
        Self::from_fourier(
            RadialKind::SmoothInAction,
            |q, j| {
                if q == 0 {
                    C64::new(j, 0.0)
                } else {
                    ZERO
                }
            },
        )
    }

    pub fn z() -> Self {
        Self::from_fourier(RadialKind::SmoothInZ, |q, j| {
            if q == 1 {
                C64::new(j.sqrt(), 0.0)
            } else {
                ZERO
            }
        })
    }

    pub fn z_bar() -> Self {
        Self::from_fourier(RadialKind::SmoothInZ, |q, j| {
            if q == -1 {
                C64::new(j.sqrt(), 0.0)
            } else {
                ZERO
            }
        })
    }

    pub fn kind(&self) -> RadialKind {
        self.kind
    }

    /// `c_q(J)` for `q = −q_max … q_max`, index `q + q_max`.
    fn coefficients(&self, j: f64, q_max: usize, n_gamma: usize) -> Vec<C64> {
        let qm = q_max as i64;
        match &self.repr {
            Repr::Fourier(c) => (-qm..=qm).map(|q| c(q, j)).collect(),
            Repr::Pointwise(f) => {
                let samples: Vec<C64> = (0..n_gamma)
                    .map(|k| f(j, 2.0 * PI * k as f64 / n_gamma as f64))
                    .collect();
                (-qm..=qm)
                    .map(|q| {
                        let mut s = ZERO;
                        for (k, &v) in samples.iter().enumerate() {
                            let phase = -2.0 * PI * ((q * k as i64).rem_euclid(n_gamma as i64)) as f64 / n_gamma as f64;
                            s += v * C64::from_polar(1.0, phase);
                        }
                        s / n_gamma as f64
                    })
                    .collect()
            }
        }
    }
}

/// Radial and angular resolution of the quantization integral.
#[derive(Debug, Clone)]
pub struct QuadratureScheme {
    n_gamma: usize,
    even: GaussLaguerre,
    odd: GaussLaguerre,
}

impl QuadratureScheme {
    pub fn new(n_j: usize, n_gamma: usize) -> Result<Self> {
        if n_j < 8 || n_gamma < 8 {
            return Err(Error::invalid(format!(
                "quadrature needs at least 8 radial and 8 angular nodes (got {n_j}, {n_gamma})"
            )));
        }
        Ok(Self {
            n_gamma,
            even: GaussLaguerre::new(n_j, 0.0)?,
            odd: GaussLaguerre::new(n_j, 0.5)?,
        })
    }

    pub fn n_j(&self) -> usize {
        self.even.len()
    }

    pub fn n_gamma(&self) -> usize {
        self.n_gamma
    }

    /// Both resolutions scaled by 1.5, rounded up.
    pub fn refined(&self) -> Result<Self> {
        let up = |n: usize| (3 * n + 1) / 2;
        Self::new(up(self.n_j()), up(self.n_gamma))
    }
}

#[derive(Debug, Clone)]
pub struct Quantization {
    pub operator: TruncatedOperator,
    /// largest entry change under 1.5× refinement of both resolutions
    pub refinement_change: f64,
    pub under_resolved: bool,
}

/// `g_{nn'}(J) = Σ_m w_m ⟨n|D(√J)|m⟩⟨n'|D(√J)|m⟩`, real since the
/// displacement is along the real axis.
pub(crate) fn radial_density(j: f64, levels: &[f64], dim: usize) -> Array2<f64> {
    let d = displacement_block(C64::new(j.sqrt(), 0.0), dim, levels.len());
    let mut dw = Array2::<f64>::zeros((dim, levels.len()));
    for ((r, m), v) in dw.indexed_iter_mut() {
        *v = d[[r, m]].re * levels[m].sqrt();
    }
    dw.dot(&dw.t())
}

#[derive(Clone, Copy, PartialEq)]
enum Parity {
    Any,
    Even,
    Odd,
}

fn accumulate(
    f: &PhaseSpaceFunction,
    levels: &[f64],
    rule: &GaussLaguerre,
    parity: Parity,
    n_gamma: usize,
    dim: usize,
) -> Array2<C64> {
    let alpha = rule.alpha;
    let chunks: Vec<Array2<C64>> = (0..rule.len())
        .collect::<Vec<_>>()
        .par_chunks(NODE_CHUNK)
        .map(|nodes| {
            let mut acc = Array2::<C64>::zeros((dim, dim));
            for &i in nodes {
                let j = rule.nodes[i];
                // ∫ e^{−J} J^α h(J) dJ with h = e^{J} J^{−α} c g
                let w = rule.scaled_weight(i) * j.powf(-alpha);
                if !(w.is_finite()) || w == 0.0 {
                    continue;
                }
                let g = radial_density(j, levels, dim);
                let c = f.coefficients(j, dim - 1, n_gamma);
                let off = dim as i64 - 1;
                for n in 0..dim {
                    for np in 0..dim {
                        let q = np as i64 - n as i64;
                        let take = match parity {
                            Parity::Any => true,
                            Parity::Even => q % 2 == 0,
                            Parity::Odd => q % 2 != 0,
                        };
                        if take {
                            acc[[n, np]] += c[(q + off) as usize] * (w * g[[n, np]]);
                        }
                    }
                }
            }
            acc
        })
        .collect();
    // ordered reduction keeps results independent of the thread count
    let mut total = Array2::<C64>::zeros((dim, dim));
    for c in chunks {
        total += &c;
    }
    total
}

fn quantize_once(f: &PhaseSpaceFunction, levels: &[f64], quad: &QuadratureScheme, dim: usize) -> Array2<C64> {
    match f.kind {
        RadialKind::SmoothInZ => accumulate(f, levels, &quad.even, Parity::Any, quad.n_gamma, dim),
        RadialKind::SmoothInAction => {
            let mut a = accumulate(f, levels, &quad.even, Parity::Even, quad.n_gamma, dim);
            a += &accumulate(f, levels, &quad.odd, Parity::Odd, quad.n_gamma, dim);
            a
        }
    }
}

/// `A_f = ∫ f(z) D(z) ρ D(z)† d²z/π`, truncated to the first `dim` Fock
/// states: `(A_f)_{nn'} = ∫ c_{n'−n}(J) g_{nn'}(J) dJ`.
pub fn quantize(
    f: &PhaseSpaceFunction,
    weight: &WeightSpec,
    quad: &QuadratureScheme,
    dim: usize,
) -> Result<Quantization> {
    if dim < 2 {
        return Err(Error::invalid("quantization needs dimension at least 2"));
    }
    let levels = weight.levels()?;
    let base = quantize_once(f, &levels, quad, dim);
    let fine = quantize_once(f, &levels, &quad.refined()?, dim);
    let change = base
        .iter()
        .zip(fine.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if base.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Quadrature("quantization produced a non-finite entry".into()));
    }
    Ok(Quantization {
        operator: TruncatedOperator::new(BasisSpec::one_sided(dim)?, base)?,
        refinement_change: change,
        under_resolved: change > REFINEMENT_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerSymbol {
    pub value: C64,
    /// `1 − tr ρ(z)` restricted to the truncated space
    pub leakage: f64,
    pub leakage_warning: bool,
}

/// `Ǎ(z) = tr(ρ(z) A)` with `ρ(z) = D(z) ρ D(z)†`, evaluated on the
/// truncated space.
pub fn lower_symbol(a: &TruncatedOperator, weight: &WeightSpec, point: PhaseSpacePoint) -> Result<LowerSymbol> {
    let basis = a.basis();
    if basis.mode() != BasisMode::OneSided {
        return Err(Error::BasisMismatch(format!(
            "lower symbols need a one-sided basis, got {}",
            basis.mode()
        )));
    }
    let levels = weight.levels()?;
    let dim = a.dim();
    let d = displacement_block(point.z(), dim, levels.len());
    let ad = a.entries().dot(&d);
    let mut value = ZERO;
    let mut kept = 0.0;
    for (m, &w) in levels.iter().enumerate() {
        let col = d.index_axis(Axis(1), m);
        let acol = ad.index_axis(Axis(1), m);
        let mut s = ZERO;
        let mut nrm = 0.0;
        for k in 0..dim {
            s += col[k].conj() * acol[k];
            nrm += col[k].norm_sqr();
        }
        value += s * w;
        kept += w * nrm;
    }
    let leakage = (1.0 - kept).max(0.0);
    Ok(LowerSymbol {
        value,
        leakage,
        leakage_warning: leakage > LEAKAGE_WARNING,
    })
}
