use proptest::prelude::*;
use sgn_core::phaseplane::{self, PhaseParams, Regime};
use sgn_core::{ClosureData, State};

fn params_from(zeta: f64, w: f64, margin: f64, eps: f64, delta: f64) -> PhaseParams<f64> {
    let left = State::new(zeta, w).unwrap();
    let s = sgn_core::closure::lax_speed_bound(&left) + margin;
    PhaseParams::new(ClosureData::new(left, s, eps, delta).unwrap()).unwrap()
}

fn closures() -> impl Strategy<Value = PhaseParams<f64>> {
    (0.2f64..5.0, -2.0f64..2.0, 0.05f64..3.0, 0.0f64..0.9, 1e-3f64..1.0)
        .prop_map(|(z, w, m, e, d)| params_from(z, w, m, e, d))
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn factored_and_unfactored_agree(p in closures(), t in 0.0f64..1.0) {
        let zeta = p.zeta_l() * 0.5 + t * (p.zeta_bar * 1.5 - p.zeta_l() * 0.5);
        let a = phaseplane::f_eval(zeta, &p).unwrap();
        let b = phaseplane::f_unfactored(zeta, &p).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "{a} vs {b}");
    }

    #[test]
    fn derivatives_match_finite_differences(p in closures(), t in 0.05f64..0.95) {
        let zeta = p.zeta_l() + t * (p.zeta_bar - p.zeta_l());
        let h = 1e-5 * zeta;
        let f = |x: f64| phaseplane::f_eval(x, &p).unwrap();
        let fp = |x: f64| phaseplane::f_prime(x, &p).unwrap();
        let fd1 = (f(zeta + h) - f(zeta - h)) / (2.0 * h);
        let fd2 = (fp(zeta + h) - fp(zeta - h)) / (2.0 * h);
        prop_assert!(rel_err(fd1, fp(zeta)) < 1e-6);
        prop_assert!(rel_err(fd2, phaseplane::f_second(zeta, &p).unwrap()) < 1e-6);

        let z = zeta.ln();
        let hz = 1e-5;
        let phi = |x: f64| phaseplane::potential(x, &p);
        let dphi = (phi(z + hz) - phi(z - hz)) / (2.0 * hz);
        prop_assert!(rel_err(dphi, p.stiffness() * f(zeta)) < 1e-6);
    }

    #[test]
    fn sign_structure(p in closures(), t in 0.01f64..0.99) {
        let inside = p.zeta_l() + t * (p.zeta_r() - p.zeta_l());
        prop_assert!(phaseplane::f_eval(inside, &p).unwrap() < 0.0);
        prop_assert!(phaseplane::f_eval(p.zeta_r() * (1.0 + t), &p).unwrap() > 0.0);
        prop_assert!(phaseplane::f_prime(p.zeta_l(), &p).unwrap() < 0.0);
        prop_assert!(phaseplane::f_prime(p.zeta_r(), &p).unwrap() > 0.0);
        prop_assert!(p.zeta_l() < p.zeta_c && p.zeta_c < p.zeta_r());
        prop_assert!(p.zeta_r() < p.zeta_bar);
        // potential well: zero at both ends of the orbit's range, negative between
        prop_assert!(phaseplane::potential(inside.ln(), &p) < 0.0);
        prop_assert!(phaseplane::potential(p.zeta_bar.ln(), &p).abs() < 1e-9 * (1.0 + p.stiffness()));
    }

    #[test]
    fn vieta_and_classification(p in closures()) {
        let pair = phaseplane::eigenvalues_at(p.zeta_r(), &p).unwrap();
        let trace = -p.stiffness() * p.c();
        let det = p.stiffness() * phaseplane::f_prime(p.zeta_r(), &p).unwrap() * p.zeta_r();
        prop_assert!((pair.plus.re + pair.minus.re - trace).abs() < 1e-9 * (1.0 + trace.abs()));
        let prod_re = pair.plus.re * pair.minus.re - pair.plus.im * pair.minus.im;
        prop_assert!((prod_re - det).abs() < 1e-9 * (1.0 + det.abs()));
        let complex = !pair.plus.is_real();
        prop_assert_eq!(complex, phaseplane::classify(&p) == Regime::Oscillatory);

        let saddle = phaseplane::eigenvalues_at(p.zeta_l(), &p).unwrap();
        prop_assert!(saddle.minus.re > 0.0 && saddle.plus.re < 0.0);
    }

    #[test]
    fn damping_depends_on_eps_over_sqrt_delta(p in closures(), lam in 0.1f64..10.0) {
        let cl = p.closure;
        prop_assume!(cl.eps * lam < 1.0);
        let scaled = PhaseParams::new(
            ClosureData::new(cl.left, cl.s, cl.eps * lam, cl.delta * lam * lam).unwrap(),
        )
        .unwrap();
        prop_assert!((scaled.c() - p.c()).abs() <= 1e-12 * (1.0 + p.c().abs()));
        prop_assert_eq!(phaseplane::classify(&scaled), phaseplane::classify(&p));
        let (a, b) = (
            phaseplane::eigenvalues_at(p.zeta_r(), &p).unwrap(),
            phaseplane::eigenvalues_at(p.zeta_r(), &scaled).unwrap(),
        );
        prop_assert!((a.plus.re - b.plus.re).abs() < 1e-9 * (1.0 + a.plus.re.abs()));
    }
}

#[test]
fn regime_examples() {
    let base = |eps: f64, delta: f64| params_from(1.0, 0.0, 1.0, eps, delta);
    assert!((base(0.3, 0.02).threshold_c2 - 8.861_406_616_345_07).abs() < 1e-10);
    assert_eq!(phaseplane::classify(&base(0.3, 0.02)), Regime::Regularized);
    assert_eq!(phaseplane::classify(&base(0.05, 0.02)), Regime::Oscillatory);
    assert_eq!(phaseplane::classify_damping(2.0, 2.0), Regime::Regularized);
}

#[test]
fn eigenvalues_at_base_point() {
    let p = params_from(1.0, 0.0, 1.0, 0.3, 0.02);
    let at_r = phaseplane::eigenvalues_at(p.zeta_r(), &p).unwrap();
    assert!((at_r.plus.re + 2.724_62).abs() < 1e-4);
    assert!((at_r.minus.re + 0.457_36).abs() < 1e-4);
    let at_l = phaseplane::eigenvalues_at(p.zeta_l(), &p).unwrap();
    assert!((at_l.plus.re + 3.777_60).abs() < 1e-4);
    assert!((at_l.minus.re - 0.595_62).abs() < 1e-4);

    let undamped = p.with_damping(0.0);
    let r0 = phaseplane::eigenvalues_at(p.zeta_r(), &undamped).unwrap();
    assert_eq!(r0.plus.re, 0.0);
    assert!((r0.minus.im - 1.116_304).abs() < 1e-6);
    let l0 = phaseplane::eigenvalues_at(p.zeta_l(), &undamped).unwrap();
    assert!((l0.minus.re - 1.5).abs() < 1e-12 && (l0.plus.re + 1.5).abs() < 1e-12);
}

#[test]
fn single_precision_landmarks() {
    let closure = ClosureData::<f32>::new(State::new(1.0, 0.0).unwrap(), 2.0, 0.3, 0.02).unwrap();
    let p = PhaseParams::new(closure).unwrap();
    assert!((p.zeta_c - 1.443_545).abs() < 1e-4);
    assert!((p.threshold_c2 - 8.8614).abs() < 1e-3);
}
