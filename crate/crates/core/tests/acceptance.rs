//! Acceptance run: every criterion at its stated tolerance, one line each.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use anglekit::circlecs::{
    action_operator_cyl, commutator_number_angle, fourier_harmonic_defect, limit_study, lower_symbol_cyl,
    resolution_of_identity_cyl, CylinderPoint, DistributionSpec, LimitCase,
};
use anglekit::halfcircle::{
    angle_flow_derivative, angle_upper, build_shift_family, commutator_defect_window, full_angle, sigma_isometry,
    AngleMethod, CommutatorOrder,
};
use anglekit::linalg::{
    anti_hermitian_exp, eigenvalues, hermitian_eig, op_norm_max, spectral_function, window_restrict, BasisSpec,
    TruncatedOperator,
};
use anglekit::moments::{generalized_exp, half_factorial_bound_check, s_k, FactorialSequence};
use anglekit::specfun::{theta3_normalizer, SeriesTolerance, ThetaForm};
use anglekit::whquant::{
    action_angle_commutator, angle_matrix, commutator_symbol, covariance_checks, displacement_laguerre, f_coefficient,
    f_coefficient_exact, gamma_ratio, ladder_operators, lower_symbol, quantize, PhaseSpaceFunction, PhaseSpacePoint,
    QuadratureScheme, WeightSpec,
};
use anglekit::{Result, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn within(what: &str, measured: f64, tol: f64) -> (bool, String) {
    (measured <= tol, format!("{what} {measured:.3e} (tol {tol:.1e})"))
}

fn all(parts: Vec<(bool, String)>) -> Outcome {
    Outcome {
        pass: parts.iter().all(|p| p.0),
        detail: parts.into_iter().map(|p| p.1).collect::<Vec<_>>().join("; "),
    }
}

fn two_sided(d: usize) -> BasisSpec {
    BasisSpec::two_sided(d).unwrap()
}

fn spectral_support() -> Result<Outcome> {
    let fam = build_shift_family(BasisSpec::cyclic(64)?)?;
    let up = eigenvalues(&angle_upper(
        &fam.cos_sin().c,
        AngleMethod::Spectral,
        SeriesTolerance::default(),
    )?)?;
    let full = eigenvalues(&full_angle(&fam)?)?;
    let out_up = (-up[0]).max(up[up.len() - 1] - PI).max(0.0);
    let out_full = (-full[0]).max(full[full.len() - 1] - 2.0 * PI).max(0.0);
    Ok(all(vec![
        within("upper angle outside [0, pi] by", out_up, 1e-9),
        within("full angle outside [0, 2pi] by", out_full, 1e-9),
    ]))
}

fn series_vs_spectral() -> Result<Outcome> {
    let c = build_shift_family(BasisSpec::cyclic(32)?)?.cos_sin().c;
    let tol = SeriesTolerance::new(1e-6, 500_000)?;
    let ser = angle_upper(&c, AngleMethod::Series, tol)?;
    let spe = angle_upper(&c, AngleMethod::Spectral, tol)?;
    let p = hermitian_eig(&c)?.projector(|l| (l.abs() - 1.0).abs() > 1e-8);
    let d = p.matmul(&ser.minus(&spe)?)?.matmul(&p)?;
    Ok(all(vec![within(
        "series minus spectral off +-1",
        op_norm_max(&d),
        50.0 * 1e-6,
    )]))
}

/// `‖[Ǎ, N] − iΣ‖` on `|n| ≤ 32` for a centred two-sided basis of size `d`.
fn window_defect(d: usize) -> Result<f64> {
    let fam = build_shift_family(two_sided(d))?;
    let cs = fam.cos_sin();
    let a = angle_upper(&cs.c, AngleMethod::Spectral, SeriesTolerance::default())?;
    let sig = sigma_isometry(&cs.s)?;
    commutator_defect_window(&fam, &a, &sig, -32, 32, CommutatorOrder::AngleFirst)
}

fn sigma_contract() -> Result<Outcome> {
    let s = build_shift_family(two_sided(64))?.cos_sin().s;
    let sig = sigma_isometry(&s)?;
    let cube = sig.matmul(&sig)?.matmul(&sig)?;
    let polar = sig.matmul(&spectral_function(&s, f64::abs)?)?;
    let defects: Vec<f64> = [128, 256, 512]
        .iter()
        .map(|&d| window_defect(d))
        .collect::<Result<_>>()?;
    let steps_ok = defects.windows(2).all(|w| w[1] <= 1.5 * w[0]) && defects[2] < defects[0];
    let mut parts = vec![
        within("|Sigma^3 - Sigma|", op_norm_max(&cube.minus(&sig)?), 1e-10),
        within("|Sigma|S| - S|", op_norm_max(&polar.minus(&s)?), 1e-10),
    ];
    parts.push((
        steps_ok,
        format!(
            "window defect D=128,256,512: {:.3e}, {:.3e}, {:.3e}",
            defects[0], defects[1], defects[2]
        ),
    ));
    Ok(all(parts))
}

fn covariance_derivative() -> Result<Outcome> {
    let fam = build_shift_family(two_sided(128))?;
    let deriv = angle_flow_derivative(&fam, 1e-4)?;
    let sig = sigma_isometry(&fam.cos_sin().s)?;
    let against_minus = op_norm_max(&window_restrict(&deriv.plus(&sig)?, -32, 32)?);
    let against_plus = op_norm_max(&window_restrict(&deriv.minus(&sig)?, -32, 32)?);
    let tol = 1e-5 + window_defect(128)?;
    let (pass, detail) = within("derivative vs -Sigma on |n|<=32", against_minus, tol);
    Ok(Outcome {
        pass,
        detail: format!("{detail}; vs +Sigma {against_plus:.3e}"),
    })
}

fn displacement() -> Result<Outcome> {
    let (_, am) = ladder_operators(64)?;
    let ap = am.adjoint();
    let mut worst: f64 = 0.0;
    for k in 0..8 {
        let z = C64::from_polar(2.0 * (k + 1) as f64 / 8.0, 0.9 * k as f64);
        let via_exp = anti_hermitian_exp(&ap.scaled(z).minus(&am.scaled(z.conj()))?)?.leading_block(32)?;
        let via_laguerre = displacement_laguerre(z, 64)?.leading_block(32)?;
        worst = worst.max(op_norm_max(&via_exp.minus(&via_laguerre)?));
    }
    let cov = covariance_checks(C64::new(0.8, -0.6), C64::new(-0.4, 1.1), 1.3, 64)?;
    Ok(all(vec![
        within("Laguerre vs exponential", worst, 1e-8),
        within("addition formula", cov.addition, 1e-7),
        within("rotation covariance", cov.rotation, 1e-7),
    ]))
}

fn resolution_of_identity() -> Result<Outcome> {
    let w = WeightSpec::thermal(0.0)?;
    let base = QuadratureScheme::new(80, 128)?;
    let mut wh: f64 = 0.0;
    for scheme in [base.clone(), base.refined()?] {
        let one = quantize(&PhaseSpaceFunction::constant(1.0), &w, &scheme, 64)?.operator;
        wh = wh.max(op_norm_max(
            &one.minus(&TruncatedOperator::identity(one.basis()))?
                .leading_block(16)?,
        ));
    }
    let g = DistributionSpec::gaussian(1.0)?;
    let b = two_sided(64);
    let mut circle: f64 = 0.0;
    for (panels, n_phi) in [(64, 128), (96, 192)] {
        let roi = resolution_of_identity_cyl(&g, b, panels, n_phi)?;
        let d = roi.minus(&TruncatedOperator::identity(b))?;
        circle = circle.max(op_norm_max(&window_restrict(&d, -8, 7)?));
    }
    Ok(all(vec![
        within("Weyl-Heisenberg block 16", wh, 1e-6),
        within("circle block 16", circle, 1e-6),
    ]))
}

fn wh_angle_operator() -> Result<Outcome> {
    let a = angle_matrix(0.3, 41)?;
    let diagonal_exact = (0..41).all(|n| a.get(n, n) == C64::new(PI, 0.0));
    let mut sym: f64 = 0.0;
    for &t in &[0.0, 0.25, 0.5, 0.75] {
        for n in 0..=40u64 {
            for np in n + 1..=40 {
                sym = sym.max((f_coefficient(n, np, t)? - f_coefficient_exact(np, n, t)?).abs());
            }
        }
    }
    let mut ratio: f64 = 0.0;
    for n in 0..=200 {
        for np in 0..=200 {
            ratio = ratio.max(gamma_ratio(n, np));
        }
    }
    let entry = action_angle_commutator(0.0, 4)?.get(0, 1);
    let want = C64::new(0.0, PI.sqrt() / 2.0);
    Ok(all(vec![
        (diagonal_exact, format!("diagonal exactly pi: {diagonal_exact}")),
        within("F symmetry", sym, 1e-10),
        (ratio <= 1.0, format!("max gamma ratio {ratio}")),
        within("entry (0,1) vs i Gamma(3/2)", (entry - want).norm(), 1e-10),
    ]))
}

fn sawtooth_error(a: &TruncatedOperator, j: f64) -> Result<f64> {
    let w = WeightSpec::thermal(0.0)?;
    let mut worst: f64 = 0.0;
    for k in 0..=200 {
        let g = 0.5 + (2.0 * PI - 1.0) * k as f64 / 200.0;
        let s = lower_symbol(a, &w, PhaseSpacePoint::new(j, g)?)?.value.re;
        worst = worst.max((s - g).abs());
    }
    Ok(worst)
}

fn semiclassical_sawtooth() -> Result<Outcome> {
    let a = angle_matrix(0.0, 160)?;
    let e100 = sawtooth_error(&a, 100.0)?;
    let e25 = sawtooth_error(&a, 25.0)?;
    Ok(all(vec![
        within("|symbol - a(gamma)| at J=100", e100, 0.05),
        (e25 > e100, format!("error at J=25 {e25:.3e} above J=100")),
    ]))
}

fn canonical_commutator() -> Result<Outcome> {
    let mut wh: f64 = 0.0;
    let mut phase = None;
    for k in 0..=20 {
        let g = 0.5 + (2.0 * PI - 1.0) * k as f64 / 20.0;
        let s = commutator_symbol(PhaseSpacePoint::new(100.0, g)?, 0.0, 160)?;
        let target = *phase.get_or_insert(C64::new(0.0, s.im.signum()));
        wh = wh.max((s - target).norm());
    }
    let g = DistributionSpec::gaussian(20.0)?;
    let k = commutator_number_angle(&g, two_sided(512), 0)?.from_operators;
    let s = lower_symbol_cyl(&k, &g, CylinderPoint::new(0.0, PI)?)?.value;
    let sign = if phase.map_or(0.0, |p| p.im) > 0.0 { "+i" } else { "-i" };
    Ok(all(vec![
        within(&format!("WH symbol vs constant {sign}"), wh, 0.05),
        within("circle symbol vs -i", (s - C64::new(0.0, -1.0)).norm(), 0.02),
    ]))
}

fn circle_suite() -> Result<Outcome> {
    let g = DistributionSpec::gaussian(1.0)?;
    let b = two_sided(32);
    let aj = action_operator_cyl(&g, b)?;
    let n = TruncatedOperator::number(b);
    let h = fourier_harmonic_defect(&g, b)?;
    let k = commutator_number_angle(&g, b, 0)?.from_operators;
    let mut ccr: f64 = 0.0;
    for (i, ni) in b.labels().enumerate() {
        for (c, nc) in b.labels().enumerate() {
            if i != c {
                let m = (ni - nc) as f64;
                let want = C64::new(0.0, (-m * m / 8.0).exp());
                ccr = ccr.max((k.get(i, c) - want).norm());
            }
        }
    }
    let mut theta: f64 = 0.0;
    for &sigma in &[0.2, 0.5, 1.0, 3.0, 10.0] {
        for q in 0..=24 {
            let j = -3.0 + 0.25 * q as f64;
            let d = theta3_normalizer(j, sigma, ThetaForm::Direct)?;
            let p = theta3_normalizer(j, sigma, ThetaForm::Poisson)?;
            theta = theta.max((d - p).abs());
        }
    }
    let mut rows = limit_study(&[0.05, 0.02], LimitCase::Small)?;
    rows.extend(limit_study(&[50.0, 100.0], LimitCase::Large)?);
    let limits_ok = rows.iter().all(|r| r.pass);
    Ok(all(vec![
        within("A_J - N", op_norm_max(&aj.minus(&n)?), 1e-9),
        within("A_e A_e^dagger - p10^2 I", h.defect, 1e-10),
        within("p10^2 - exp(-1/4)", (h.p10_squared - (-0.25f64).exp()).abs(), 1e-10),
        within("[A_J, A_a] - i p", ccr, 1e-10),
        within("theta forms", theta, 1e-11),
        (limits_ok, format!("sigma-limit table: {} rows within 0.05", rows.len())),
    ]))
}

fn moments() -> Result<Outcome> {
    let seq = FactorialSequence::integers();
    let mut worst = f64::NEG_INFINITY;
    for k in 0..=10 {
        for &t in &[0.1, 0.5, 1.0, 2.5, 5.0, 7.5, 10.0] {
            worst = worst.max(s_k(&seq, k, t)? - generalized_exp(&seq, t)?);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut failures = 0;
    for _ in 0..10_000 {
        let (n1, n2) = (rng.gen_range(0..=300u64), rng.gen_range(0..=300u64));
        if !half_factorial_bound_check(&seq, n1, n2)? {
            failures += 1;
        }
    }
    Ok(all(vec![
        (worst <= 0.0, format!("max S_k - N {worst:.3e}")),
        (failures == 0, format!("factorial bound failures {failures}/10000")),
    ]))
}

fn determinism() -> Result<Outcome> {
    let dir = std::env::temp_dir().join(format!("anglekit-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("scratch directory");
    let mut reports = Vec::new();
    let mut codes = Vec::new();
    for run in 0..2 {
        let path = dir.join(format!("check-{run}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_anglekit"))
            .args(["check", "all", "--output"])
            .arg(&path)
            .output()
            .expect("binary runs")
            .status;
        codes.push(status.code());
        reports.push(std::fs::read(&path).unwrap_or_default());
    }
    let identical = !reports[0].is_empty() && reports[0] == reports[1];
    let exit_ok = codes.iter().all(|&c| c == Some(0));
    Ok(all(vec![
        (identical, format!("reports identical: {identical}")),
        (exit_ok, format!("exit codes {codes:?}")),
    ]))
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn main() {
    let criteria: [Criterion; 12] = [
        ("half-circle spectral support", spectral_support),
        ("series/spectral agreement", series_vs_spectral),
        ("Sigma contract and commutator defect", sigma_contract),
        ("covariance derivative", covariance_derivative),
        ("displacement cross-check", displacement),
        ("resolution of identity", resolution_of_identity),
        ("WH angle operator", wh_angle_operator),
        ("semiclassical sawtooth", semiclassical_sawtooth),
        ("canonical-commutator recovery", canonical_commutator),
        ("circle CS suite", circle_suite),
        ("generalized factorial bounds", moments),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let secs = start.elapsed().as_secs_f64();
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name} [{secs:.1}s]: {detail}", i + 1);
        if !pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 12 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
