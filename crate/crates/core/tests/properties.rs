use anglekit::circlecs::{d_m_sigma, DistributionSpec, OverlapMatrix};
use anglekit::cli::RawConfig;
use anglekit::linalg::{
    anti_hermitian_exp, default_zero_tol, hermitian_eig, op_norm_max, sign_part, spectral_function, BasisSpec,
    TruncatedOperator,
};
use anglekit::moments::{generalized_exp, half_factorial_bound_check, s_k, FactorialSequence};
use anglekit::specfun::{
    assoc_laguerre, gauss_2f1_terminating, gauss_2f1_terminating_exact, ln_factorial, ln_gamma, theta3_normalizer,
    ThetaForm,
};
use anglekit::whquant::{d_q_cs, f_coefficient, f_coefficient_exact, gamma_ratio, sawtooth};
use anglekit::C64;
use proptest::prelude::*;

fn hermitian(dim: usize, raw: &[(f64, f64)]) -> TruncatedOperator {
    let b = BasisSpec::one_sided(dim).unwrap();
    TruncatedOperator::from_fn(b, |r, c| C64::new(raw[r * dim + c].0, raw[r * dim + c].1)).hermitian_part()
}

fn hermitian_strategy(max_dim: usize) -> impl Strategy<Value = TruncatedOperator> {
    (2..=max_dim).prop_flat_map(|d| {
        proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), d * d).prop_map(move |raw| hermitian(d, &raw))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_ratio_never_exceeds_one(n in 0u64..=200, np in 0u64..=200) {
        prop_assert!(gamma_ratio(n, np) <= 1.0 + 1e-12);
    }

    #[test]
    fn laguerre_reflection(m in 0u32..=30, n in 0u32..=30, t in prop::sample::select(vec![0.1, 1.0, 5.0])) {
        let lhs = ln_factorial(n as u64).exp() * assoc_laguerre(n, m as f64 - n as f64, t);
        let rhs = ln_factorial(m as u64).exp() * (-t).powi(n as i32 - m as i32) * assoc_laguerre(m, n as f64 - m as f64, t);
        let scale = lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * scale);
    }

    #[test]
    fn theta_forms_agree(j in -3.0..3.0f64, sigma in 0.2..10.0f64) {
        let d = theta3_normalizer(j, sigma, ThetaForm::Direct).unwrap();
        let p = theta3_normalizer(j, sigma, ThetaForm::Poisson).unwrap();
        prop_assert!((d - p).abs() <= 1e-11);
    }

    #[test]
    fn gauss_summation(n in 0i64..25, b in -2.0..3.0f64, gap in 0.5..6.0f64) {
        // c − a − b = gap + n > 0
        let c = b + gap;
        prop_assume!(c > 0.05);
        let a = -n as f64;
        let want = (ln_gamma(c).unwrap() + ln_gamma(c - a - b).unwrap()
            - ln_gamma(c - a).unwrap() - ln_gamma(c - b).unwrap()).exp();
        let exact = gauss_2f1_terminating_exact(-n, b, c, 1.0).unwrap();
        prop_assert!((exact - want).abs() <= 1e-10 * want.max(1.0), "{exact} vs {want}");
        // the f64 sum alternates; its error scales with Σ|term|, not the result
        let mut term: f64 = 1.0;
        let mut mass = 1.0;
        for k in 0..n {
            let kf = k as f64;
            term *= (kf - n as f64) * (b + kf) / ((c + kf) * (kf + 1.0));
            mass += term.abs();
        }
        let got = gauss_2f1_terminating(-n, b, c, 1.0).unwrap();
        prop_assert!((got - exact).abs() <= 1e-13 * mass + 1e-15, "{got} vs {exact} (mass {mass})");
    }

    #[test]
    fn eig_reconstruction(m in hermitian_strategy(24)) {
        let es = hermitian_eig(&m).unwrap();
        let back = es.map(|x| x);
        prop_assert!(op_norm_max(&back.minus(&m).unwrap()) <= 1e-10 * op_norm_max(&m).max(f64::MIN_POSITIVE));
    }

    #[test]
    fn spectral_composition(m in hermitian_strategy(16)) {
        let once = spectral_function(&m, |x| (3.0 * x.tanh()).cos()).unwrap();
        let inner = spectral_function(&m, f64::tanh).unwrap();
        let twice = spectral_function(&inner, |x| (3.0 * x).cos()).unwrap();
        prop_assert!(op_norm_max(&once.minus(&twice).unwrap()) <= 1e-9);
    }

    #[test]
    fn sign_part_is_partial_isometry(m in hermitian_strategy(16)) {
        let s = sign_part(&m, default_zero_tol(&m)).unwrap();
        let cube = s.matmul(&s).unwrap().matmul(&s).unwrap();
        prop_assert!(s.hermiticity_defect() <= 1e-10);
        prop_assert!(op_norm_max(&cube.minus(&s).unwrap()) <= 1e-10);
    }

    #[test]
    fn exponential_inverse(m in hermitian_strategy(16)) {
        let g = m.scaled(C64::new(0.0, 1.0));
        let u = anti_hermitian_exp(&g).unwrap();
        let v = anti_hermitian_exp(&g.scaled(C64::new(-1.0, 0.0))).unwrap();
        let id = TruncatedOperator::identity(u.basis());
        prop_assert!(op_norm_max(&u.matmul(&v).unwrap().minus(&id).unwrap()) <= 1e-10);
    }

    #[test]
    fn f_symmetric(n in 0u64..=40, np in 0u64..=40, t in prop::sample::select(vec![0.0, 0.25, 0.5, 0.75])) {
        prop_assume!(n != np);
        let fwd = f_coefficient(n, np, t).unwrap();
        let rev = f_coefficient_exact(np, n, t).unwrap();
        prop_assert!((fwd - rev).abs() <= 1e-10);
        prop_assert_eq!(fwd, f_coefficient(np, n, t).unwrap());
    }

    #[test]
    fn d_q_in_unit_interval(q in 0u32..=50, j in 0.01..200.0f64) {
        let d = d_q_cs(q, j).unwrap();
        prop_assert!(d > 0.0 && d <= 1.0 + 1e-12, "d = {d}");
    }

    #[test]
    fn sawtooth_range(g in -100.0..100.0f64) {
        let s = sawtooth(g);
        prop_assert!((0.0..2.0 * std::f64::consts::PI).contains(&s));
    }

    #[test]
    fn probabilities_normalize(j in -20.0..20.0f64, sigma in 0.3..5.0f64) {
        let dist = DistributionSpec::gaussian(sigma).unwrap();
        let r = dist.support();
        let total: f64 = ((j - r).floor() as i64..=(j + r).ceil() as i64).map(|n| dist.p_n(n, j)).sum();
        let norm = dist.normalizer(j, ThetaForm::Poisson).unwrap();
        prop_assert!((total / norm - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn d_m_at_most_one(m in -30i64..=30, j in -5.0..5.0f64, sigma in 0.2..5.0f64) {
        let dist = DistributionSpec::gaussian(sigma).unwrap();
        prop_assert!(d_m_sigma(&dist, m, j).unwrap() <= 1.0 + 1e-12);
    }

    #[test]
    fn overlap_depends_on_distance(n in -15i64..=15, np in -15i64..=15, sigma in 0.3..3.0f64) {
        let om = OverlapMatrix::new(&DistributionSpec::gaussian(sigma).unwrap(), 30).unwrap();
        prop_assert_eq!(om.get(n, np), om.get(np, n));
        prop_assert_eq!(om.get(n, np), om.get(0, (n - np).abs()));
    }

    #[test]
    fn s_k_below_generalized_exp(k in 0u64..=10, t in 0.01..10.0f64) {
        let seq = FactorialSequence::integers();
        prop_assert!(s_k(&seq, k, t).unwrap() <= generalized_exp(&seq, t).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn half_factorial_bound(n1 in 0u64..=300, n2 in 0u64..=300) {
        prop_assert!(half_factorial_bound_check(&FactorialSequence::integers(), n1, n2).unwrap());
    }

    #[test]
    fn unknown_config_keys_rejected(key in "[a-z]{3,10}") {
        prop_assume!(!["construction", "dim", "mode", "sigma", "dims", "windows", "order", "output", "format"]
            .contains(&key.as_str()));
        let path = std::env::temp_dir().join(format!("anglekit-prop-{}-{key}.cfg", std::process::id()));
        std::fs::write(&path, format!("{key} = 1\n")).unwrap();
        let raw = RawConfig { config: Some(path.clone()), ..Default::default() };
        let err = raw.resolve().unwrap_err();
        let _ = std::fs::remove_file(&path);
        prop_assert!(err.0.contains(&key));
    }
}
