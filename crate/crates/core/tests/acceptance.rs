//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{rngs::StdRng, Rng, SeedableRng};
use sgn_core::pde::{
    dam_break_ic, dam_break_mass, error_norm, oscillation_region_width, rhs_eval, simulate, step_deviation,
    step_with, traveling_wave_at, traveling_wave_ic, FieldPair, Grid, SimConfig, Trajectory,
};
use sgn_core::phaseplane::{self, PhaseParams, Regime};
use sgn_core::twsolve::{self, integrate_profile, ProfileOptions};
use sgn_core::{closure, ClosureData, State};

mod common;
use common::{max_abs_diff, smooth_state, spectral_rhs};

type Verdict = (bool, String);

fn base(eps: f64, delta: f64) -> PhaseParams<f64> {
    let cl = ClosureData::new(State::<f64>::new(1.0, 0.0).unwrap(), 2.0, eps, delta).unwrap();
    PhaseParams::new(cl).unwrap()
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn closure_correctness() -> Verdict {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for _ in 0..1000 {
        let left = State::<f64>::new(rng.gen_range(0.05..10.0), rng.gen_range(-5.0..5.0)).unwrap();
        let s = closure::lax_speed_bound(&left) + rng.gen_range(1e-3..5.0);
        let data = ClosureData::new(left, s, 0.1, 0.01).unwrap();
        let (r1, r2) = data.rh_residual().unwrap();
        worst = worst.max(r1.abs()).max(r2.abs());
        let k1sq = data.k1 * data.k1;
        ok &= closure::lax_check(&data) && left.zeta.powi(3) < k1sq && k1sq < data.right.zeta.powi(3);
    }
    let elapsed = start.elapsed();
    (
        ok && worst < 1e-10 && within(elapsed, 1.0),
        format!("max |residual| {worst:.2e}, ordering and Lax held: {ok}, {elapsed:.2?}"),
    )
}

fn regime_threshold() -> Verdict {
    let start = Instant::now();
    let p = base(0.3, 0.02);
    // re-derivation: right depth by bisection on the energy invariant, then
    // F'(z) = 1/2 - 2 K1^2 / z^3 + E / z^2 with E = zeta_l^2 / 2 + K1^2 / zeta_l
    let k1: f64 = -2.0;
    let energy = 0.5 + k1 * k1;
    let g = |z: f64| k1 * k1 / z + z * z / 2.0 - energy;
    let (mut lo, mut hi) = (1.0 + 1e-9, 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid
        } else {
            hi = mid
        }
    }
    let zr = 0.5 * (lo + hi);
    let fp = 0.5 - 2.0 * k1 * k1 / zr.powi(3) + energy / (zr * zr);
    let oracle = 4.0 / 3.0 * k1 * k1 * fp * zr;
    let regularized = phaseplane::classify(&p) == Regime::Regularized;
    let oscillatory = phaseplane::classify(&base(0.05, 0.02)) == Regime::Oscillatory;
    let elapsed = start.elapsed();
    let pass = (p.threshold_c2 - 8.8613).abs() <= 1e-3
        && (p.threshold_c2 - oracle).abs() < 1e-9
        && (zr.powi(3) - 13.3505).abs() < 1e-4
        && regularized
        && oscillatory
        && within(elapsed, 1.0);
    (
        pass,
        format!(
            "threshold {:.6} (re-derived {oracle:.6}), zeta_r^3 {:.4}, (0.3,0.02) regularized: {regularized}, (0.05,0.02) oscillatory: {oscillatory}, {elapsed:.2?}",
            p.threshold_c2,
            zr.powi(3)
        ),
    )
}

fn regularized_structure() -> Verdict {
    let start = Instant::now();
    let p = base(0.3, 0.02);
    let prof = integrate_profile(&p, &ProfileOptions::default()).unwrap();
    let monotone = prof.zeta.windows(2).all(|w| w[1] >= w[0]);
    let terminal = (prof.zeta.last().unwrap() - 2.372_281_323_269_014).abs();
    let inflection = twsolve::check_inflection(&prof);
    let zeta0 = match &inflection {
        Ok(Some(xi0)) => Some(prof.sample(*xi0).zeta()),
        _ => None,
    };
    let inside = zeta0.is_some_and(|z| p.zeta_c < z && z < p.zeta_r());
    let trapped = twsolve::trapping_check(&prof, &p, 1e-9);
    let elapsed = start.elapsed();
    (
        monotone && terminal < 1e-6 && inside && trapped && within(elapsed, 5.0),
        format!(
            "monotone {monotone}, |zeta_end - zeta_r| {terminal:.2e}, inflection depth {zeta0:.6?} in ({:.6}, {:.6}), trapped {trapped}, {elapsed:.2?}",
            p.zeta_c,
            p.zeta_r()
        ),
    )
}

fn oscillatory_structure() -> Verdict {
    let start = Instant::now();
    let p = base(0.05, 0.02);
    let prof = integrate_profile(&p, &ProfileOptions::default()).unwrap();
    let zr = p.zeta_r();
    let n_max = prof.maxima.len();
    let max_dec = prof.maxima.windows(2).all(|w| w[1].zeta < w[0].zeta) && prof.maxima.iter().all(|m| m.zeta > zr);
    let min_inc = prof.minima.windows(2).all(|w| w[1].zeta > w[0].zeta) && prof.minima.iter().all(|m| m.zeta < zr);
    let bounded = prof.zeta.iter().all(|&z| z > 1.0 && z < 4.0);
    let liapunov = prof.liapunov.windows(2).all(|w| w[1] <= w[0] + 1e-10);

    let expected = -phaseplane::eigenvalues_at(zr, &p).unwrap().plus.re;
    let late: Vec<_> = prof
        .maxima
        .iter()
        .filter(|m| m.zeta - zr < 1e-3 && m.zeta - zr > 1e-6)
        .collect();
    let rate = match (late.first(), late.last()) {
        (Some(a), Some(b)) if late.len() >= 2 => ((a.zeta - zr) / (b.zeta - zr)).ln() / (b.xi - a.xi),
        _ => f64::NAN,
    };
    let rate_ok = (rate - expected).abs() < 0.1 * expected;
    let elapsed = start.elapsed();
    (
        n_max >= 5 && max_dec && min_inc && bounded && liapunov && rate_ok && within(elapsed, 10.0),
        format!(
            "{n_max} maxima decreasing {max_dec}, minima increasing {min_inc}, samples in (1, 4) {bounded}, V non-increasing {liapunov}, tail rate {rate:.5} vs {expected:.5}, {elapsed:.2?}"
        ),
    )
}

fn phase_identities() -> Verdict {
    let p = base(0.3, 0.02);
    let (mut f_gap, mut d_gap): (f64, f64) = (0.0, 0.0);
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-3);
    for k in 1..200 {
        let zeta = 0.5 + 4.0 * k as f64 / 200.0;
        let a = phaseplane::f_eval(zeta, &p).unwrap();
        let b = phaseplane::f_unfactored(zeta, &p).unwrap();
        f_gap = f_gap.max((a - b).abs());
        let h = 1e-5 * zeta;
        let f = |x: f64| phaseplane::f_eval(x, &p).unwrap();
        let fp = |x: f64| phaseplane::f_prime(x, &p).unwrap();
        d_gap = d_gap.max(rel((f(zeta + h) - f(zeta - h)) / (2.0 * h), fp(zeta)));
        d_gap = d_gap.max(rel(
            (fp(zeta + h) - fp(zeta - h)) / (2.0 * h),
            phaseplane::f_second(zeta, &p).unwrap(),
        ));
        let z = zeta.ln();
        let dphi = (phaseplane::potential(z + 1e-5, &p) - phaseplane::potential(z - 1e-5, &p)) / 2e-5;
        d_gap = d_gap.max(rel(dphi, p.stiffness() * f(zeta)));
    }
    let zc = p.zeta_c;
    let k1sq = p.k1_sq();
    let residual = zc.powi(3) + (2.0 * k1sq + 1.0) * zc - 4.0 * k1sq;
    (
        f_gap <= 1e-12 && d_gap <= 1e-6 && residual.abs() < 1e-10 && (zc - 1.44355).abs() < 5e-6,
        format!("F forms differ by {f_gap:.2e}, worst FD mismatch {d_gap:.2e}, zeta_c {zc:.8} with |P| {:.2e}", residual.abs()),
    )
}

fn pde_sanity() -> Verdict {
    let g = Grid::<f64>::new(128, 30.0).unwrap();
    let init = FieldPair::constant(g, 1.3, 0.4);
    let config = SimConfig::new(0.1, 0.2, 1.0).unwrap();
    let dt = config.stable_dt(&init);
    let mut state = init.clone();
    for _ in 0..1000 {
        state = step_with(&state, &config, dt).unwrap();
    }
    let drift = max_abs_diff(&state.h, &init.h).max(max_abs_diff(&state.u, &init.u));

    let g = Grid::<f64>::new(512, 100.0).unwrap();
    let dam = dam_break_ic(&g, 1.5, 1.0, 1.0).unwrap();
    let exact: f64 = dam_break_mass(100.0, 1.5, 1.0, 1.0);
    let run = simulate(&dam, &SimConfig::new(1.0 / 3.0, 0.1, 5.0).unwrap(), &[1.0, 2.5]).unwrap();
    let mass = run.mass_drift().max(((dam.mass() - exact) / exact).abs());

    let config = SimConfig::new(0.3, 0.1, 1.0).unwrap();
    let errors: Vec<f64> = [32, 64, 128, 256]
        .iter()
        .map(|&n| {
            let g = Grid::<f64>::new(n, 2.0 * std::f64::consts::PI).unwrap();
            let s = smooth_state(&g);
            let (fh, fu) = rhs_eval(&s, &config).unwrap();
            let (sh, su) = spectral_rhs(&s.h, &s.u, 0.3, 0.1);
            max_abs_diff(&fh, &sh).max(max_abs_diff(&fu, &su))
        })
        .collect();
    let orders: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let order_ok = orders.iter().all(|o| (1.8..=2.2).contains(o));
    (
        drift <= 1e-12 && mass <= 1e-10 && order_ok,
        format!("constant state moved {drift:.2e}, relative mass drift {mass:.2e}, observed orders {orders:.3?}"),
    )
}

fn eps_scaling() -> Verdict {
    let start = Instant::now();
    let g = Grid::<f64>::new(2048, 200.0).unwrap();
    let init = dam_break_ic(&g, 1.5, 1.0, 0.6).unwrap();
    let times = [2.5, 5.0, 10.0, 20.0];
    let runs: Vec<Trajectory<f64>> = std::thread::scope(|scope| {
        let handles: Vec<_> = [0.0, 0.05, 0.1, 0.2]
            .iter()
            .map(|&eps| {
                let init = &init;
                scope.spawn(move || {
                    let config = SimConfig::new(1.0 / 3.0, eps, 20.0).unwrap();
                    simulate(init, &config, &times).unwrap()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let e = |k: usize, t: f64| error_norm(runs[k].at(t), runs[0].at(t)).unwrap();
    let halving = [e(1, 10.0) / e(2, 10.0), e(2, 10.0) / e(3, 10.0)];
    let doubling = [e(2, 5.0) / e(2, 2.5), e(2, 10.0) / e(2, 5.0), e(2, 20.0) / e(2, 10.0)];
    let mass = runs.iter().map(|r| r.mass_drift()).fold(0.0, f64::max);
    let pass = halving.iter().all(|r| (0.35..=0.65).contains(r)) && doubling.iter().all(|r| (1.5..=2.5).contains(r));
    (
        pass,
        format!(
            "E(eps/2)/E(eps) at t=10 for eps 0.1, 0.2: {halving:.3?}; E(2t)/E(t) at eps 0.1 for t 2.5, 5, 10: {doubling:.3?}; mass drift {mass:.1e}, {:.1?}",
            start.elapsed()
        ),
    )
}

fn moderate_dispersion() -> Verdict {
    let eps = 0.1;
    let mut widths = Vec::new();
    let mut devs = Vec::new();
    let mut dev_ok = true;
    for delta in [4e-3, 2e-3] {
        let cl = ClosureData::new(State::<f64>::new(4.0, 0.0).unwrap(), 4.0, eps, delta).unwrap();
        let prof = integrate_profile(&PhaseParams::new(cl).unwrap(), &ProfileOptions::default()).unwrap();
        let w = oscillation_region_width(&prof).unwrap();
        let dev = step_deviation(&prof, 10.0 * w).unwrap();
        dev_ok &= dev <= 3.0 * delta / eps;
        widths.push(w);
        devs.push(dev);
    }
    let ratio = widths[1] / widths[0];
    (
        (ratio - 0.5).abs() <= 0.2 && dev_ok,
        format!("widths {widths:.5?} ratio {ratio:.4}; step deviation beyond 10 widths [{:.2e}, {:.2e}] vs bounds [0.12, 0.06]", devs[0], devs[1]),
    )
}

fn cross_module() -> Verdict {
    let start = Instant::now();
    let (s, eps, delta) = (2.0, 0.6, 0.1);
    let cl = ClosureData::new(State::<f64>::new(1.0, 0.0).unwrap(), s, eps, delta).unwrap();
    let prof = integrate_profile(&PhaseParams::new(cl).unwrap(), &ProfileOptions::default()).unwrap();
    let length = 100.0;
    let g = Grid::<f64>::new(4096, length).unwrap();
    let xf = 0.2 * length;
    let init = traveling_wave_ic(&g, &prof, xf, 0.6 * length, 2.0).unwrap();
    let t_end = 2.0;
    let run = simulate(&init, &SimConfig::new(delta, eps, t_end).unwrap(), &[]).unwrap();
    let fin = run.last();
    let centre = xf + s * t_end;
    let (mut err, mut norm) = (0.0f64, 0.0f64);
    for j in 0..g.n {
        let x = g.x(j);
        if (x - centre).abs() <= 10.0 {
            let (zeta, _) = traveling_wave_at(&prof, x - centre);
            err += (fin.h[j] - zeta).powi(2);
            norm += zeta * zeta;
        }
    }
    let rel = (err / norm).sqrt();
    (
        rel <= 1e-3,
        format!("relative L2 misfit {rel:.2e} over |x - (x_f + sT)| <= 10 after T = {t_end}, {:.1?}", start.elapsed()),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("closure correctness", closure_correctness),
        ("regime threshold", regime_threshold),
        ("regularized profile structure", regularized_structure),
        ("oscillatory profile structure", oscillatory_structure),
        ("phase-function identities", phase_identities),
        ("PDE sanity", pde_sanity),
        ("eps-comparison scaling", eps_scaling),
        ("moderate-dispersion limit", moderate_dispersion),
        ("cross-module consistency", cross_module),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let (pass, detail) = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        });
        if !pass {
            failed += 1;
        }
        println!("[{}] {} {name}: {detail}", if pass { "PASS" } else { "FAIL" }, k + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
