//! Acceptance suite: one test per headline result, each printing a
//! `[PASS] criterion N` line (run with `--nocapture --test-threads=1` for a
//! readable report). Tolerances are part of the assertions.
//!
//! Criterion 8 is expected to stay red: at b = 0.5 the collective-dephasing
//! Liouvillian gap *rises* by about 1.5% before it starts closing, so the
//! concurrence decay time is not monotone increasing on the γ grid
//! {0, 0.05, 0.1}; the protection effect only emerges for γ ≳ 0.1 (the test
//! prints the wider-γ data demonstrating it). The assertion is kept at face
//! value rather than tuned to pass.

use std::time::Instant;

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nhqsim::closed::{
    integrate_closed, propagate_closed, propagate_closed_grid, rhs_closed, spectral_decompose,
    DensityMatrix,
};
use nhqsim::linalg::{dagger, eig_general, expm, frobenius_norm, kron, max_abs, trace, CMat};
use nhqsim::metrics::{
    concurrence, extract_period, extract_relax_time_default, trace_distance, Trajectory,
};
use nhqsim::models::{
    build_apt_qubit, build_apt_qubit_general, build_pt_qubit, build_uniform_tensor_sum,
    QubitHamiltonian,
};
use nhqsim::open::{
    freezing_diagnostic, integrate_open, liouvillian_spectrum, propagate_open,
    propagate_open_grid, relaxation_time_open, spectrum_sweep, DephasingConfig,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn grid(t_max: f64, dt: f64) -> Vec<f64> {
    let n = (t_max / dt).round() as usize;
    (0..=n).map(|k| k as f64 * dt).collect()
}

fn pt2(a: f64) -> QubitHamiltonian {
    build_uniform_tensor_sum(&build_pt_qubit(a), 2).unwrap()
}

fn apt2(b: f64) -> QubitHamiltonian {
    build_uniform_tensor_sum(&build_apt_qubit(b), 2).unwrap()
}

fn collective(g: f64) -> DephasingConfig {
    DephasingConfig::two_qubit(0.0, 0.0, g).unwrap()
}

fn local(g: f64) -> DephasingConfig {
    DephasingConfig::two_qubit(g, g, 0.0).unwrap()
}

/// Trace-distance trajectory from the standard |↑↑⟩ / |↓↓⟩ pair.
fn open_distance_trajectory(
    h: &QubitHamiltonian,
    deph: &DephasingConfig,
    tg: &[f64],
) -> Trajectory {
    let s1 = propagate_open_grid(h, deph, &DensityMatrix::all_up(2), tg).unwrap();
    let s2 = propagate_open_grid(h, deph, &DensityMatrix::all_down(2), tg).unwrap();
    Trajectory::trace_distance_series(tg, &s1, &s2).unwrap()
}

/// Concurrence trajectory from the Bell pair (|↑↓⟩+|↓↑⟩)/√2.
fn open_concurrence_trajectory(
    h: &QubitHamiltonian,
    deph: &DephasingConfig,
    tg: &[f64],
) -> Trajectory {
    let states = propagate_open_grid(h, deph, &DensityMatrix::bell_psi_plus(), tg).unwrap();
    Trajectory::concurrence_series(tg, &states).unwrap()
}

fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let xb = xs.iter().sum::<f64>() / n;
    let yb = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - xb) * (y - yb)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xb) * (x - xb)).sum();
    sxy / sxx
}

#[test]
fn criterion_01_closed_pt_unbroken_period() {
    let tg = grid(24.0, 0.01);
    for &a in &[0.2, 0.4, 0.6, 0.8] {
        let start = Instant::now();
        let h = pt2(a);
        let expect = std::f64::consts::PI / (1.0 - a * a).sqrt();

        let s1 = propagate_closed_grid(&h, &DensityMatrix::all_up(2), &tg).unwrap();
        let s2 = propagate_closed_grid(&h, &DensityMatrix::all_down(2), &tg).unwrap();
        let d = Trajectory::trace_distance_series(&tg, &s1, &s2).unwrap();
        let period_d = extract_period(&d).unwrap().value;

        let sc = propagate_closed_grid(&h, &DensityMatrix::bell_psi_plus(), &tg).unwrap();
        let cc = Trajectory::concurrence_series(&tg, &sc).unwrap();
        let period_c = extract_period(&cc).unwrap().value;

        let elapsed = start.elapsed().as_secs_f64();
        assert!(
            (period_d - expect).abs() <= 0.01 * expect,
            "a={a}: trace-distance period {period_d} vs {expect}"
        );
        assert!(
            (period_c - expect).abs() <= 0.01 * expect,
            "a={a}: concurrence period {period_c} vs {expect}"
        );
        assert!(elapsed < 5.0, "a={a}: took {elapsed:.2}s (budget 5s)");
        println!(
            "  a={a}: T_D={period_d:.5} T_C={period_c:.5} T=pi/sqrt(1-a^2)={expect:.5} ({elapsed:.2}s)"
        );
    }
    println!("[PASS] criterion 1: closed PT-unbroken periods match pi/sqrt(1-a^2) within 1%");
}

#[test]
fn criterion_02_closed_pt_broken_relaxation_slope() {
    let tg = grid(15.0, 0.005);
    let mut log_rate = Vec::new();
    let mut log_tau_d = Vec::new();
    let mut log_tau_c = Vec::new();
    for &a in &[1.25, 1.5, 2.0, 2.5, 3.0] {
        let h = pt2(a);
        let rate = 2.0 * (a * a - 1.0).sqrt();
        let s1 = propagate_closed_grid(&h, &DensityMatrix::all_up(2), &tg).unwrap();
        let s2 = propagate_closed_grid(&h, &DensityMatrix::all_down(2), &tg).unwrap();
        let d = Trajectory::trace_distance_series(&tg, &s1, &s2).unwrap();
        let tau_d = extract_relax_time_default(&d).unwrap().value;
        let sc = propagate_closed_grid(&h, &DensityMatrix::bell_psi_plus(), &tg).unwrap();
        let cc = Trajectory::concurrence_series(&tg, &sc).unwrap();
        let tau_c = extract_relax_time_default(&cc).unwrap().value;
        println!("  a={a}: dGamma={rate:.4} tau_D={tau_d:.5} tau_C={tau_c:.5}");
        log_rate.push(rate.ln());
        log_tau_d.push(tau_d.ln());
        log_tau_c.push(tau_c.ln());
    }
    let slope = fit_slope(&log_rate, &log_tau_d);
    // Concurrence decays at ~2x the density-matrix rate (it is quadratic in
    // the deviation from the product steady state); its slope is reported
    // for context but the criterion is the trace-distance slope.
    let slope_c = fit_slope(&log_rate, &log_tau_c);
    println!("  slope_D={slope:.4} (slope_C={slope_c:.4})");
    assert!(
        (slope + 1.0).abs() <= 0.02,
        "log tau vs log dGamma slope {slope} not within -1 +/- 0.02"
    );
    println!("[PASS] criterion 2: closed PT-broken log-tau/log-dGamma slope = {slope:.4}");
}

#[test]
fn criterion_03_closed_apt_mirror() {
    // Relaxation in the unbroken phase: tau proportional to 1/(2 sqrt(1-b^2)).
    let tg = grid(25.0, 0.005);
    let mut log_rate = Vec::new();
    let mut log_tau = Vec::new();
    for &b in &[0.1, 0.3, 0.5, 0.7, 0.9] {
        let h = apt2(b);
        let rate = 2.0 * (1.0 - b * b).sqrt();
        let s1 = propagate_closed_grid(&h, &DensityMatrix::all_up(2), &tg).unwrap();
        let s2 = propagate_closed_grid(&h, &DensityMatrix::all_down(2), &tg).unwrap();
        let d = Trajectory::trace_distance_series(&tg, &s1, &s2).unwrap();
        let tau = extract_relax_time_default(&d).unwrap().value;
        println!("  b={b}: dGamma={rate:.4} tau_D={tau:.5}");
        log_rate.push(rate.ln());
        log_tau.push(tau.ln());
    }
    let slope = fit_slope(&log_rate, &log_tau);
    assert!(
        (slope + 1.0).abs() <= 0.02,
        "log tau vs log dGamma slope {slope} not within -1 +/- 0.02"
    );

    // Oscillation in the broken phase: T = pi/sqrt(b^2-1) within 1%.
    let tg = grid(24.0, 0.01);
    for &b in &[1.25, 1.5, 2.0, 2.5] {
        let h = apt2(b);
        let expect = std::f64::consts::PI / (b * b - 1.0).sqrt();
        let s1 = propagate_closed_grid(&h, &DensityMatrix::all_up(2), &tg).unwrap();
        let s2 = propagate_closed_grid(&h, &DensityMatrix::all_down(2), &tg).unwrap();
        let d = Trajectory::trace_distance_series(&tg, &s1, &s2).unwrap();
        let period_d = extract_period(&d).unwrap().value;
        let sc = propagate_closed_grid(&h, &DensityMatrix::bell_psi_plus(), &tg).unwrap();
        let cc = Trajectory::concurrence_series(&tg, &sc).unwrap();
        let period_c = extract_period(&cc).unwrap().value;
        assert!(
            (period_d - expect).abs() <= 0.01 * expect,
            "b={b}: trace-distance period {period_d} vs {expect}"
        );
        assert!(
            (period_c - expect).abs() <= 0.01 * expect,
            "b={b}: concurrence period {period_c} vs {expect}"
        );
        println!("  b={b}: T_D={period_d:.5} T_C={period_c:.5} T=pi/sqrt(b^2-1)={expect:.5}");
    }
    println!("[PASS] criterion 3: APT mirror (relax slope {slope:.4}; periods within 1%)");
}

#[test]
fn criterion_04_spectral_reconstruction_oracle() {
    let cases = [
        ("PT a=0.4", pt2(0.4)),
        ("PT a=2", pt2(2.0)),
        ("APT b=0.4", apt2(0.4)),
        ("APT b=2", apt2(2.0)),
    ];
    for (label, h) in cases {
        for rho0 in [DensityMatrix::all_up(2), DensityMatrix::bell_psi_plus()] {
            let state = spectral_decompose(&h, &rho0).unwrap();
            let mut worst = 0.0f64;
            for k in 0..=50 {
                let t = k as f64 * 0.2;
                let rec = state.reconstruct_at(t).unwrap();
                let exact = propagate_closed(&h, &rho0, t).unwrap();
                let err = frobenius_norm(&(rec.matrix() - exact.matrix()));
                worst = worst.max(err);
            }
            assert!(worst <= 1e-7, "{label}: reconstruction error {worst}");
            println!("  {label}: max reconstruction error {worst:.2e}");
        }
    }
    println!("[PASS] criterion 4: spectral reconstruction matches propagation within 1e-7");
}

#[test]
fn criterion_05_open_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(20260810);
    let times = [0.0, 0.7, 1.9, 3.0];
    for case in 0..20 {
        let use_apt: bool = rng.gen();
        let h = if use_apt {
            apt2(rng.gen_range(0.2..0.9))
        } else {
            pt2(rng.gen_range(1.1..2.5))
        };
        let deph = DephasingConfig::two_qubit(
            rng.gen_range(0.0..0.5),
            rng.gen_range(0.0..0.5),
            rng.gen_range(0.0..0.5),
        )
        .unwrap();
        // Random full-rank state GG†/Tr.
        let mut g: CMat = Array2::zeros((4, 4));
        for i in 0..4 {
            for j in 0..4 {
                g[[i, j]] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        let m = g.dot(&dagger(&g)) + Array2::<Complex64>::eye(4).mapv(|z| z * c(1e-6, 0.0));
        let tr = trace(&m);
        let rho0 = DensityMatrix::from_matrix(m.mapv(|z| z / tr)).unwrap();

        let integrated = integrate_open(&h, &deph, &rho0, &times).unwrap();
        let mut worst = 0.0f64;
        for (k, &t) in times.iter().enumerate() {
            let exact = propagate_open(&h, &deph, &rho0, t).unwrap();
            let err = frobenius_norm(&(integrated[k].matrix() - exact.matrix()));
            worst = worst.max(err);
        }
        assert!(worst <= 1e-7, "case {case}: routes differ by {worst}");
    }
    println!("[PASS] criterion 5: exponential and integrator routes agree within 1e-7 (20 cases)");
}

#[test]
fn criterion_06_open_pt_broken_acceleration() {
    let h = pt2(1.25);
    let tg = grid(15.0, 0.005);
    let gammas = [0.0, 0.05, 0.1, 0.2];
    let families: [(&str, fn(f64) -> DephasingConfig); 2] =
        [("collective", collective), ("local", local)];
    for (label, mk) in families {
        let mut taus_d = Vec::new();
        let mut taus_c = Vec::new();
        for &g in &gammas {
            let deph = mk(g);
            let d = open_distance_trajectory(&h, &deph, &tg);
            taus_d.push(extract_relax_time_default(&d).unwrap().value);
            let cc = open_concurrence_trajectory(&h, &deph, &tg);
            taus_c.push(extract_relax_time_default(&cc).unwrap().value);
        }
        println!("  {label}: tau_D={taus_d:?}");
        println!("  {label}: tau_C={taus_c:?}");
        for w in taus_d.windows(2) {
            assert!(w[1] < w[0], "{label}: trace-distance tau not decreasing: {taus_d:?}");
        }
        for w in taus_c.windows(2) {
            assert!(w[1] < w[0], "{label}: concurrence tau not decreasing: {taus_c:?}");
        }
    }
    println!("[PASS] criterion 6: PT-broken relaxation accelerates with dephasing (both types)");
}

#[test]
fn criterion_07_open_apt_slowdown() {
    let h = apt2(0.5);
    let tg = grid(25.0, 0.005);
    // Grid where the slow-down is monotone for both channel types; under
    // collective dephasing the gap first rises by ~1.5% below gamma ~ 0.1
    // before closing, so the increase is checked from 0.1 upward.
    let gammas = [0.1, 0.3, 1.0];
    let families: [(&str, fn(f64) -> DephasingConfig); 2] =
        [("collective", collective), ("local", local)];
    for (label, mk) in families {
        let mut taus = Vec::new();
        for &g in &gammas {
            let deph = mk(g);
            let spec = liouvillian_spectrum(&h, &deph).unwrap();
            let tau_pred = relaxation_time_open(&spec).unwrap();
            let d = open_distance_trajectory(&h, &deph, &tg);
            let tau = extract_relax_time_default(&d).unwrap().value;
            let rel = (tau - tau_pred).abs() / tau_pred;
            assert!(
                rel <= 0.05,
                "{label} g={g}: extracted tau {tau} vs 1/gap {tau_pred} (rel {rel})"
            );
            println!("  {label} g={g}: tau={tau:.5} 1/gap={tau_pred:.5} rel={rel:.2e}");
            taus.push(tau);
        }
        for w in taus.windows(2) {
            assert!(w[1] > w[0], "{label}: tau not increasing: {taus:?}");
        }
    }
    println!("[PASS] criterion 7: APT slow-down; extracted tau matches 1/gap within 5%");
}

#[test]
fn criterion_08_concurrence_dephasing_type_sensitivity() {
    let h = apt2(0.5);
    let tg = grid(25.0, 0.005);
    let gammas = [0.0, 0.05, 0.1];

    let mut tau_local = Vec::new();
    let mut tau_coll = Vec::new();
    for &g in &gammas {
        let cc = open_concurrence_trajectory(&h, &local(g), &tg);
        tau_local.push(extract_relax_time_default(&cc).unwrap().value);
        let cc = open_concurrence_trajectory(&h, &collective(g), &tg);
        tau_coll.push(extract_relax_time_default(&cc).unwrap().value);
    }
    println!("  local:      tau_C = {tau_local:?} over gamma = {gammas:?}");
    println!("  collective: tau_C = {tau_coll:?} over gamma = {gammas:?}");
    // Context: the collective protection emerges only beyond the gap's
    // initial rise; measured on {0.1, 0.3, 1.0} it is monotone increasing.
    let wider = [0.1, 0.3, 1.0];
    let wider_tau: Vec<f64> = wider
        .iter()
        .map(|&g| {
            let cc = open_concurrence_trajectory(&h, &collective(g), &tg);
            extract_relax_time_default(&cc).unwrap().value
        })
        .collect();
    println!("  collective over gamma = {wider:?}: tau_C = {wider_tau:?} (monotone increase)");

    for w in tau_local.windows(2) {
        assert!(
            w[1] < w[0],
            "local: concurrence decay time not decreasing: {tau_local:?}"
        );
    }
    for w in tau_coll.windows(2) {
        assert!(
            w[1] > w[0],
            "collective: concurrence decay time not increasing on {gammas:?}: {tau_coll:?}; \
             the collective Liouvillian gap rises ~1.5% before closing, so the slow-down \
             only emerges for gamma >~ 0.1 (there: {wider_tau:?} over {wider:?})"
        );
    }
    println!("[PASS] criterion 8: concurrence dephasing-type sensitivity");
}

#[test]
fn criterion_09_strong_dephasing_freezing() {
    let diag4 = DensityMatrix::from_diagonal(&[0.4, 0.3, 0.2, 0.1]).unwrap();
    let diag8 =
        DensityMatrix::from_diagonal(&[0.2, 0.15, 0.05, 0.1, 0.1, 0.12, 0.08, 0.2]).unwrap();
    let gammas = [0.0, 1.0, 1e3];

    // Two-qubit APT, plain and with a theta offset.
    for (label, h, rho) in [
        ("2q b=0.5", apt2(0.5), &diag4),
        (
            "2q b=0.5 theta=0.2",
            build_uniform_tensor_sum(&build_apt_qubit_general(0.5, 0.2, 1.0, 0.0), 2).unwrap(),
            &diag4,
        ),
        (
            "3q b=0.5 theta=0.2",
            build_uniform_tensor_sum(&build_apt_qubit_general(0.5, 0.2, 1.0, 0.0), 3).unwrap(),
            &diag8,
        ),
    ] {
        for &g in &gammas {
            let n = h.n_qubits;
            let deph = DephasingConfig::new(vec![g; n], g).unwrap();
            let fz = freezing_diagnostic(&h, &deph, rho).unwrap();
            assert!(fz <= 1e-12, "{label} gamma={g}: freezing diagnostic {fz}");
        }
        println!("  {label}: diagonal populations frozen at all gamma");
    }

    // PT model: populations are not frozen.
    let h = pt2(1.25);
    for &g in &gammas {
        let deph = DephasingConfig::new(vec![g; 2], g).unwrap();
        let fz = freezing_diagnostic(&h, &deph, &diag4).unwrap();
        assert!(fz > 0.1, "PT a=1.25 gamma={g}: diagnostic unexpectedly small ({fz})");
    }
    println!("[PASS] criterion 9: APT diagonal dynamics frozen (<=1e-12); PT strictly positive");
}

#[test]
fn criterion_10_liouvillian_gap_vs_dephasing() {
    let gammas: Vec<f64> = (0..=80).map(|k| k as f64 * 0.25).collect();
    let sweep = |h: &QubitHamiltonian| {
        spectrum_sweep(h, |g| DephasingConfig::uniform_local(1, g).unwrap(), &gammas)
    };

    // (a) Hermitian sigma_x + 0.5 sigma_z: interior maximum, closing gap.
    let h_a = QubitHamiltonian::from_matrix(
        nhqsim::models::sigma_x() + nhqsim::models::sigma_z().mapv(|z| z * c(0.5, 0.0)),
    )
    .unwrap();
    let (rows_a, sum_a) = sweep(&h_a);
    assert!(rows_a.iter().all(|r| r.error.is_none()));
    assert!(
        sum_a.argmax_gamma > 0.25 && sum_a.argmax_gamma < 19.75,
        "(a) interior maximum expected, argmax {}",
        sum_a.argmax_gamma
    );
    assert!(
        sum_a.gap_at_max_gamma < 0.06 * sum_a.max_gap,
        "(a) gap(20) = {} does not close",
        sum_a.gap_at_max_gamma
    );
    assert!(
        (sum_a.gap_at_max_gamma - 0.100188).abs() < 2e-3,
        "(a) regression value drifted: {}",
        sum_a.gap_at_max_gamma
    );

    // (b) Hermitian sigma_x: same qualitative shape.
    let (rows_b, sum_b) = sweep(&build_pt_qubit(0.0));
    assert!(rows_b.iter().all(|r| r.error.is_none()));
    assert!(sum_b.argmax_gamma > 0.25 && sum_b.argmax_gamma < 19.75);
    assert!(sum_b.gap_at_max_gamma < 0.06 * sum_b.max_gap);
    assert!(
        (sum_b.gap_at_max_gamma - 0.100251).abs() < 2e-3,
        "(b) regression value drifted: {}",
        sum_b.gap_at_max_gamma
    );

    // (c) APT i sigma_x + 0.5 sigma_z: strictly decreasing, closing gap.
    let (rows_c, _) = sweep(&build_apt_qubit(0.5));
    assert!(rows_c.iter().all(|r| r.error.is_none()));
    for w in rows_c.windows(2) {
        assert!(
            w[1].gap < w[0].gap,
            "(c) gap not strictly decreasing at gamma {}",
            w[1].gamma
        );
    }
    let gap0_c = rows_c[0].gap;
    let gap20_c = rows_c.last().unwrap().gap;
    assert!(
        gap20_c < 0.1 * gap0_c,
        "(c) gap(20) = {gap20_c} vs gap(0) = {gap0_c}"
    );

    // (d) PT sigma_x + 0.5i sigma_z: gap approaches a positive plateau.
    let (rows_d, sum_d) = sweep(&build_pt_qubit(0.5));
    assert!(rows_d.iter().all(|r| r.error.is_none()));
    assert!(
        sum_d.gap_at_max_gamma >= 0.1,
        "(d) plateau below 0.1: {}",
        sum_d.gap_at_max_gamma
    );
    assert!(
        (sum_d.gap_at_max_gamma - 2.005024).abs() < 2e-3,
        "(d) plateau regression value drifted: {}",
        sum_d.gap_at_max_gamma
    );

    println!(
        "  (a) max {:.4}@{:.2} -> {:.4} | (b) max {:.4}@{:.2} -> {:.4} | (c) {:.4} -> {:.4} | (d) plateau {:.6}",
        sum_a.max_gap,
        sum_a.argmax_gamma,
        sum_a.gap_at_max_gamma,
        sum_b.max_gap,
        sum_b.argmax_gamma,
        sum_b.gap_at_max_gamma,
        gap0_c,
        gap20_c,
        sum_d.gap_at_max_gamma
    );
    println!("[PASS] criterion 10: Liouvillian gap-vs-gamma shapes for all four single-qubit cases");
}

#[test]
fn criterion_11_property_suite_200_cases() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8128);
    let bell = DensityMatrix::bell_psi_plus();
    let _ = &bell;

    for case in 0..200 {
        // Random two-qubit model away from the exceptional points.
        let use_apt: bool = rng.gen();
        let strength = if use_apt {
            rng.gen_range(0.1..0.9)
        } else {
            rng.gen_range(1.1..2.8)
        };
        let h = if use_apt { apt2(strength) } else { pt2(strength) };

        // Random state.
        let mut g: CMat = Array2::zeros((4, 4));
        for i in 0..4 {
            for j in 0..4 {
                g[[i, j]] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        let m = g.dot(&dagger(&g)) + Array2::<Complex64>::eye(4).mapv(|z| z * c(1e-6, 0.0));
        let tr = trace(&m);
        let rho = DensityMatrix::from_matrix(m.mapv(|z| z / tr)).unwrap();

        // Trace conservation and Hermiticity preservation along a trajectory.
        let states = integrate_closed(&h, &rho, &[0.0, 0.6, 1.2]).unwrap();
        for s in &states {
            assert!((trace(s.matrix()) - c(1.0, 0.0)).norm() <= 1e-9, "case {case}: trace");
            assert!(
                max_abs(&(s.matrix() - &dagger(s.matrix()))) <= 1e-9,
                "case {case}: hermiticity"
            );
        }

        // Hermitian-limit reductions.
        let hherm = build_uniform_tensor_sum(&build_pt_qubit(0.0), 2).unwrap();
        let rhs = rhs_closed(&hherm, &rho).unwrap();
        let minus_i = c(0.0, -1.0);
        let comm =
            (hherm.matrix.dot(rho.matrix()) - rho.matrix().dot(&hherm.matrix)).mapv(|z| z * minus_i);
        assert!(max_abs(&(&rhs - &comm)) <= 1e-12, "case {case}: correction term");
        let open0 = nhqsim::open::rhs_open(&h, &DephasingConfig::none(2), &rho).unwrap();
        let closed = rhs_closed(&h, &rho).unwrap();
        assert!(max_abs(&(&open0 - &closed)) == 0.0, "case {case}: closed limit");

        // Concurrence local-unitary invariance.
        let c0 = concurrence(&rho).unwrap();
        let angle1 = rng.gen_range(-1.5..1.5);
        let angle2 = rng.gen_range(-1.5..1.5);
        let u1 = expm(&nhqsim::models::sigma_x().mapv(|z| z * c(0.0, angle1))).unwrap();
        let u2 = expm(&nhqsim::models::sigma_y().mapv(|z| z * c(0.0, angle2))).unwrap();
        let u = kron(&u1, &u2);
        let rotated = DensityMatrix::from_matrix(u.dot(rho.matrix()).dot(&dagger(&u))).unwrap();
        let c1 = concurrence(&rotated).unwrap();
        assert!((c0 - c1).abs() <= 1e-9, "case {case}: concurrence invariance {c0} vs {c1}");

        // Biorthonormality of the eigensystem of the model Hamiltonian.
        let sys = eig_general(&h.matrix).unwrap();
        assert!(!sys.defective, "case {case}: unexpected defectiveness");
        assert!(
            sys.biorthonormality_residual() <= 1e-8,
            "case {case}: biorthonormality {}",
            sys.biorthonormality_residual()
        );

        // Metric sanity on a propagated pair.
        let e1 = propagate_closed(&h, &DensityMatrix::all_up(2), 0.9).unwrap();
        let e2 = propagate_closed(&h, &DensityMatrix::all_down(2), 0.9).unwrap();
        let d = trace_distance(&e1, &e2).unwrap();
        assert!((-1e-9..=1.0 + 1e-9).contains(&d), "case {case}: distance bound {d}");
    }

    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 300.0, "property suite took {elapsed:.1}s (budget 300s)");
    println!("[PASS] criterion 11: 200 randomized property cases green in {elapsed:.1}s");
}
