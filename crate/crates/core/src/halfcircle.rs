//! Shift operators, the cosine/sine pair, the upper and lower half-circle
//! angle operators `ArcCos C` and `ArcCos C + π`, the partial isometry `Σ`
//! of `S = Σ|S|`, and the full angle operator on the doubled space.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{
    self, hermitian_eig, op_norm_max, window_restrict, BasisMode, BasisSpec, TruncatedOperator, I, ONE, ZERO,
};
use crate::specfun::{ArcCosCoefficients, SeriesTolerance};

/// Eigenvalues of `C` within this distance of −1 are treated as the atom
/// `E_C({−1})`.
pub const MINUS_ONE_TOL: f64 = 1e-8;

/// Tolerance used when verifying that the spectrum of `C` lies in `[−1, 1]`.
pub const SPECTRUM_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct ShiftFamily {
    pub u: TruncatedOperator,
    pub n: TruncatedOperator,
    basis: BasisSpec,
}

#[derive(Debug, Clone)]
pub struct CosSinPair {
    pub c: TruncatedOperator,
    pub s: TruncatedOperator,
}

/// `U e_n = e_{n+1}` (wrapping in cyclic mode) and `N e_n = n e_n`.
pub fn build_shift_family(basis: BasisSpec) -> Result<ShiftFamily> {
    if basis.dim() < 4 {
        return Err(Error::invalid(format!(
            "shift family needs dimension at least 4, got {}",
            basis.dim()
        )));
    }
    let u = TruncatedOperator::from_fn(basis, |r, c| {
        let hit = match basis.mode() {
            BasisMode::Cyclic => r == (c + 1) % basis.dim(),
            _ => r == c + 1,
        };
        if hit {
            ONE
        } else {
            ZERO
        }
    });
    let n = TruncatedOperator::number(basis);
    Ok(ShiftFamily { u, n, basis })
}

impl ShiftFamily {
    pub fn basis(&self) -> BasisSpec {
        self.basis
    }

    /// `C = (U + U†)/2`, `S = (U − U†)/2i`.
    pub fn cos_sin(&self) -> CosSinPair {
        let ud = self.u.adjoint();
        let c = self.u.plus(&ud).expect("same basis").scaled(C64::new(0.5, 0.0));
        let s = self.u.minus(&ud).expect("same basis").scaled(C64::new(0.0, -0.5));
        CosSinPair { c, s }
    }
}

/// `a₊ = V N^{1/2}`, `a₋ = a₊†` on a one-sided basis.
pub fn ladder_from_shift(fam: &ShiftFamily) -> Result<(TruncatedOperator, TruncatedOperator)> {
    if fam.basis.mode() != BasisMode::OneSided {
        return Err(Error::invalid("ladder operators need a one-sided basis"));
    }
    let b = fam.basis;
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

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleMethod {
    /// `π/2 − Σ c_n C^{2n+1}`
    Series,
    /// `ArcCos` applied to the eigenvalues of `C`
    Spectral,
}

fn checked_spectrum(c: &TruncatedOperator) -> Result<linalg::EigenSystem> {
    let es = hermitian_eig(c)?;
    let lo = es.eigenvalues.first().copied().unwrap_or(0.0);
    let hi = es.eigenvalues.last().copied().unwrap_or(0.0);
    if lo < -1.0 - SPECTRUM_TOL {
        return Err(Error::SpectrumOutOfRange { extreme: lo });
    }
    if hi > 1.0 + SPECTRUM_TOL {
        return Err(Error::SpectrumOutOfRange { extreme: hi });
    }
    Ok(es)
}

fn acos_clamped(x: f64) -> f64 {
    x.clamp(-1.0, 1.0).acos()
}

/// Upper half-circle angle operator `Ǎ = ArcCos C`.
pub fn angle_upper(c: &TruncatedOperator, method: AngleMethod, tol: SeriesTolerance) -> Result<TruncatedOperator> {
    let es = checked_spectrum(c)?;
    match method {
        AngleMethod::Spectral => Ok(es.map(acos_clamped)),
        AngleMethod::Series => angle_series(c, tol),
    }
}

fn angle_series(c: &TruncatedOperator, tol: SeriesTolerance) -> Result<TruncatedOperator> {
    let b = c.basis();
    let c2 = c.matmul(c)?;
    let mut power = c.clone();
    let mut acc = TruncatedOperator::identity(b).scaled(C64::new(PI / 2.0, 0.0));
    for (n, coef) in ArcCosCoefficients::new().enumerate() {
        let term = power.scaled(C64::new(coef, 0.0));
        let size = op_norm_max(&term);
        acc = acc.minus(&term)?;
        if size < tol.abs_tol {
            return Ok(acc.hermitian_part());
        }
        if n + 1 >= tol.max_terms {
            return Err(Error::NonConvergence {
                what: "ArcCos power series",
                budget: tol.max_terms,
            });
        }
        power = power.matmul(&c2)?;
    }
    unreachable!("coefficient iterator is infinite")
}

/// Lower half-circle angle operator `Ă = ArcCos C + π`.
pub fn angle_lower(c: &TruncatedOperator) -> Result<TruncatedOperator> {
    let es = checked_spectrum(c)?;
    Ok(es.map(|x| acos_clamped(x) + PI))
}

/// `A = Ǎ ⊕ (Ă − π E_C({−1}))` on the doubled space.
pub fn full_angle(fam: &ShiftFamily) -> Result<TruncatedOperator> {
    let cs = fam.cos_sin();
    let es = checked_spectrum(&cs.c)?;
    let upper = es.map(acos_clamped);
    let lower = es.map(|x| {
        let atom = if (x + 1.0).abs() <= MINUS_ONE_TOL { PI } else { 0.0 };
        acos_clamped(x) + PI - atom
    });
    upper.direct_sum(&lower)
}

/// `Σ` with `S = Σ|S|`.
pub fn sigma_isometry(s: &TruncatedOperator) -> Result<TruncatedOperator> {
    linalg::sign_part(s, linalg::default_zero_tol(s))
}

/// Which side the angle operator sits on in the commutator with `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommutatorOrder {
    /// `[Ǎ, N] − iΣ`
    AngleFirst,
    /// `[N, Ǎ] − iΣ`
    NumberFirst,
}

/// `‖[Ǎ, N] − iΣ‖_max` on the labels left after removing `window_margin` rows
/// from each edge.
pub fn commutator_defect(
    fam: &ShiftFamily,
    angle: &TruncatedOperator,
    sigma: &TruncatedOperator,
    window_margin: usize,
) -> Result<f64> {
    if window_margin >= fam.basis.dim() / 2 {
        return Err(Error::invalid(format!(
            "window margin {window_margin} must be below D/2 = {}",
            fam.basis.dim() / 2
        )));
    }
    let (lo, hi) = fam.basis.interior(window_margin)?;
    commutator_defect_window(fam, angle, sigma, lo, hi, CommutatorOrder::AngleFirst)
}

/// Same measurement on an explicit label window and ordering.
pub fn commutator_defect_window(
    fam: &ShiftFamily,
    angle: &TruncatedOperator,
    sigma: &TruncatedOperator,
    lo: i64,
    hi: i64,
    order: CommutatorOrder,
) -> Result<f64> {
    if fam.basis.mode() == BasisMode::OneSided {
        return Err(Error::invalid("commutator defect needs a two-sided or cyclic basis"));
    }
    let k = match order {
        CommutatorOrder::AngleFirst => linalg::commutator(angle, &fam.n)?,
        CommutatorOrder::NumberFirst => linalg::commutator(&fam.n, angle)?,
    };
    let d = k.minus(&sigma.scaled(I))?;
    Ok(op_norm_max(&window_restrict(&d, lo, hi)?))
}

#[derive(Debug, Clone)]
pub struct CovarianceFlow {
    /// `cos θ C − sin θ S`
    pub c_theta: TruncatedOperator,
    /// `cos θ S + sin θ C`
    pub s_theta: TruncatedOperator,
    /// `ArcCos C(θ)`
    pub angle_theta: TruncatedOperator,
    /// largest interior deviation between phase conjugation and the closed forms
    pub conjugation_defect: f64,
}

/// `e^{iθN} X e^{−iθN}`, entrywise.
pub fn phase_conjugate(x: &TruncatedOperator, theta: f64) -> TruncatedOperator {
    let b = x.basis();
    TruncatedOperator::from_fn(b, |r, c| {
        let shift = (b.label(r) - b.label(c)) as f64;
        x.get(r, c) * C64::from_polar(1.0, theta * shift)
    })
}

pub fn covariance_flow(fam: &ShiftFamily, theta: f64) -> Result<CovarianceFlow> {
    if fam.basis.mode() == BasisMode::OneSided {
        return Err(Error::invalid("covariance flow needs a two-sided or cyclic basis"));
    }
    let CosSinPair { c, s } = fam.cos_sin();
    let (sn, cs) = theta.sin_cos();
    let c_theta = c.scaled(C64::new(cs, 0.0)).minus(&s.scaled(C64::new(sn, 0.0)))?;
    let s_theta = s.scaled(C64::new(cs, 0.0)).plus(&c.scaled(C64::new(sn, 0.0)))?;
    let margin = fam.basis.dim() / 4;
    let (lo, hi) = fam.basis.interior(margin)?;
    let dc = phase_conjugate(&c, theta).minus(&c_theta)?;
    let ds = phase_conjugate(&s, theta).minus(&s_theta)?;
    let conjugation_defect =
        op_norm_max(&window_restrict(&dc, lo, hi)?).max(op_norm_max(&window_restrict(&ds, lo, hi)?));
    let angle_theta = angle_upper(&c_theta, AngleMethod::Spectral, SeriesTolerance::default())?;
    Ok(CovarianceFlow {
        c_theta,
        s_theta,
        angle_theta,
        conjugation_defect,
    })
}

/// Central difference `(Ǎ(h) − Ǎ(−h)) / 2h` along the covariance flow.
pub fn angle_flow_derivative(fam: &ShiftFamily, h: f64) -> Result<TruncatedOperator> {
    let plus = covariance_flow(fam, h)?.angle_theta;
    let minus = covariance_flow(fam, -h)?.angle_theta;
    Ok(plus.minus(&minus)?.scaled(C64::new(0.5 / h, 0.0)))
}

/// Eigenvalue counts in `bins` equal cells over `[lo, hi]`.
pub fn spectral_histogram(values: &[f64], bins: usize, lo: f64, hi: f64) -> Vec<usize> {
    let mut h = vec![0usize; bins];
    if bins == 0 || !(hi > lo) {
        return h;
    }
    let w = (hi - lo) / bins as f64;
    for &v in values {
        let k = ((v - lo) / w).floor();
        if k >= 0.0 {
            let k = (k as usize).min(bins - 1);
            if v <= hi {
                h[k] += 1;
            }
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigenvalues;

    fn close(a: &TruncatedOperator, b: &TruncatedOperator) -> f64 {
        op_norm_max(&a.minus(b).unwrap())
    }

    #[test]
    fn shift_family_definitions() {
        let f = build_shift_family(BasisSpec::one_sided(3).unwrap_or_else(|_| unreachable!()));
        assert!(f.is_err());
        let f = build_shift_family(BasisSpec::one_sided(4).unwrap()).unwrap();
        assert_eq!(f.u.get(1, 0), ONE);
        assert_eq!(f.u.get(3, 2), ONE);
        assert_eq!(f.u.get(0, 3), ZERO);
        let c = build_shift_family(BasisSpec::cyclic(4).unwrap()).unwrap();
        assert_eq!(c.u.get(0, 3), ONE);
        let uu = c.u.adjoint().matmul(&c.u).unwrap();
        assert_eq!(close(&uu, &TruncatedOperator::identity(c.basis())), 0.0);
        let t = build_shift_family(BasisSpec::two_sided(4).unwrap()).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| t.n.get(i, i).re).collect();
        assert_eq!(diag, vec![-2.0, -1.0, 0.0, 1.0]);
    }

    #[test]
    fn cyclic_cos_sin_commute() {
        let f = build_shift_family(BasisSpec::cyclic(16).unwrap()).unwrap();
        let cs = f.cos_sin();
        let k = linalg::commutator(&cs.c, &cs.s).unwrap();
        assert!(op_norm_max(&k) < 1e-12);
        let sum = cs.c.matmul(&cs.c).unwrap().plus(&cs.s.matmul(&cs.s).unwrap()).unwrap();
        assert!(close(&sum, &TruncatedOperator::identity(f.basis())) < 1e-12);
    }

    #[test]
    fn ladders() {
        let f = build_shift_family(BasisSpec::one_sided(10).unwrap()).unwrap();
        let (ap, am) = ladder_from_shift(&f).unwrap();
        assert_eq!(ap.get(1, 0), ONE);
        assert!((ap.get(5, 4).re - 5f64.sqrt()).abs() < 1e-15);
        assert_eq!(am, ap.adjoint());
        let k = linalg::commutator(&am, &ap).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((k.get(i, j).re - want).abs() < 1e-14);
            }
        }
        let c = build_shift_family(BasisSpec::cyclic(8).unwrap()).unwrap();
        assert!(ladder_from_shift(&c).is_err());
    }

    #[test]
    fn angle_examples() {
        let b = BasisSpec::one_sided(2).unwrap();
        let tol = SeriesTolerance::default();
        let z = TruncatedOperator::zeros(b);
        for m in [AngleMethod::Series, AngleMethod::Spectral] {
            let a = angle_upper(&z, m, tol).unwrap();
            let want = TruncatedOperator::identity(b).scaled(C64::new(PI / 2.0, 0.0));
            assert!(close(&a, &want) < 1e-15);
        }
        let d = TruncatedOperator::from_diagonal(b, &[1.0, -1.0]).unwrap();
        let a = angle_upper(&d, AngleMethod::Spectral, tol).unwrap();
        let want = TruncatedOperator::from_diagonal(b, &[0.0, PI]).unwrap();
        assert!(close(&a, &want) < 1e-15);
        let lower = angle_lower(&z).unwrap();
        assert!((lower.get(0, 0).re - 1.5 * PI).abs() < 1e-15);
        let one = TruncatedOperator::from_diagonal(BasisSpec::one_sided(1).unwrap(), &[1.0]).unwrap();
        assert!((angle_lower(&one).unwrap().get(0, 0).re - PI).abs() < 1e-15);
        let big = TruncatedOperator::from_diagonal(b, &[1.5, 0.0]).unwrap();
        assert!(matches!(
            angle_upper(&big, AngleMethod::Spectral, tol),
            Err(Error::SpectrumOutOfRange { .. })
        ));
    }

    #[test]
    fn cyclic_four_spectra() {
        let f = build_shift_family(BasisSpec::cyclic(4).unwrap()).unwrap();
        let cs = f.cos_sin();
        let up = eigenvalues(&angle_upper(&cs.c, AngleMethod::Spectral, Default::default()).unwrap()).unwrap();
        for (g, w) in up.iter().zip([0.0, PI / 2.0, PI / 2.0, PI]) {
            assert!((g - w).abs() < 1e-12);
        }
        let lo = eigenvalues(&angle_lower(&cs.c).unwrap()).unwrap();
        for (g, w) in lo.iter().zip([PI, 1.5 * PI, 1.5 * PI, 2.0 * PI]) {
            assert!((g - w).abs() < 1e-12);
        }
        let full = eigenvalues(&full_angle(&f).unwrap()).unwrap();
        let want = [0.0, PI / 2.0, PI / 2.0, PI, PI, PI, 1.5 * PI, 1.5 * PI];
        for (g, w) in full.iter().zip(want) {
            assert!((g - w).abs() < 1e-12, "{full:?}");
        }
    }

    #[test]
    fn full_angle_without_minus_one() {
        // odd cyclic dimension: −1 is not an eigenvalue of C
        let f = build_shift_family(BasisSpec::cyclic(7).unwrap()).unwrap();
        let cs = f.cos_sin();
        let mut want = eigenvalues(&angle_upper(&cs.c, AngleMethod::Spectral, Default::default()).unwrap()).unwrap();
        want.extend(eigenvalues(&angle_lower(&cs.c).unwrap()).unwrap());
        want.sort_by(f64::total_cmp);
        let a = full_angle(&f).unwrap();
        assert!(a.hermiticity_defect() < 1e-10);
        for (g, w) in eigenvalues(&a).unwrap().iter().zip(&want) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn sigma_cyclic_eight() {
        let f = build_shift_family(BasisSpec::cyclic(8).unwrap()).unwrap();
        let cs = f.cos_sin();
        let sig = sigma_isometry(&cs.s).unwrap();
        let cube = sig.matmul(&sig).unwrap().matmul(&sig).unwrap();
        assert!(close(&cube, &sig) < 1e-10);
        let sq = sig.matmul(&sig).unwrap();
        let rank = sq.trace().re.round() as i64;
        assert_eq!(rank, 6);
        let abs_s = linalg::spectral_function(&cs.s, f64::abs).unwrap();
        assert!(close(&sig.matmul(&abs_s).unwrap(), &cs.s) < 1e-10);
    }

    #[test]
    fn series_matches_spectral_off_the_endpoints() {
        let f = build_shift_family(BasisSpec::cyclic(16).unwrap()).unwrap();
        let c = f.cos_sin().c;
        let tol = SeriesTolerance::new(1e-7, 200_000).unwrap();
        let ser = angle_upper(&c, AngleMethod::Series, tol).unwrap();
        let spe = angle_upper(&c, AngleMethod::Spectral, tol).unwrap();
        let es = hermitian_eig(&c).unwrap();
        let p = es.projector(|l| (l.abs() - 1.0).abs() > 1e-8);
        let d = p.matmul(&ser.minus(&spe).unwrap()).unwrap().matmul(&p).unwrap();
        assert!(op_norm_max(&d) < 50.0 * 1e-7, "{}", op_norm_max(&d));
    }

    #[test]
    fn commutator_defect_is_small_inside() {
        let f = build_shift_family(BasisSpec::two_sided(64).unwrap()).unwrap();
        let cs = f.cos_sin();
        let a = angle_upper(&cs.c, AngleMethod::Spectral, Default::default()).unwrap();
        let sig = sigma_isometry(&cs.s).unwrap();
        let k = linalg::commutator(&f.n, &a).unwrap();
        assert!(op_norm_max(&k.adjoint().plus(&k).unwrap()) < 1e-10);
        let inner = commutator_defect(&f, &a, &sig, 24).unwrap();
        let outer = commutator_defect(&f, &a, &sig, 4).unwrap();
        assert!(inner < outer);
        assert!(commutator_defect(&f, &a, &sig, 32).is_err());
    }

    #[test]
    fn covariance_flow_closed_forms() {
        let f = build_shift_family(BasisSpec::two_sided(32).unwrap()).unwrap();
        let cs = f.cos_sin();
        let z = covariance_flow(&f, 0.0).unwrap();
        assert!(close(&z.c_theta, &cs.c) < 1e-15);
        assert!(close(&z.s_theta, &cs.s) < 1e-15);
        let q = covariance_flow(&f, PI / 2.0).unwrap();
        assert!(close(&q.c_theta, &cs.s.scaled(C64::new(-1.0, 0.0))) < 1e-15);
        assert!(q.conjugation_defect < 1e-10);
        let c = build_shift_family(BasisSpec::cyclic(32).unwrap()).unwrap();
        assert!(covariance_flow(&c, 0.3).unwrap().conjugation_defect < 1e-10);
    }

    #[test]
    fn histogram_counts() {
        let h = spectral_histogram(&[0.0, 0.5, 1.0, 3.0, PI], 4, 0.0, PI);
        assert_eq!(h.iter().sum::<usize>(), 5);
        assert_eq!(h[3], 2);
    }
}
