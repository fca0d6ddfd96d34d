//! Cross-module consistency: the piecewise discord solution against the
//! general formula at scale, and the full scenario -> trace -> detector
//! pipelines on the reference parameter sets.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use xqcorr::analysis::{
    crossing_time, EventKind, Measure, TimeTrace, DEFAULT_EPS_FLAT_FRACTION, DEFAULT_EPS_ZERO,
    DEFAULT_KINK_WINDOW,
};
use xqcorr::dephasing::{trace_discord_dephasing_cases, DephasingScenario, ReservoirSpec};
use xqcorr::measures::{measure_set, trace_discord};
use xqcorr::radiative;
use xqcorr::states::sampling::random_bell_triple;

#[test]
fn discord_cases_equal_full_formula_on_large_battery() {
    let mut rng = ChaCha8Rng::seed_from_u64(9000);
    let r = ReservoirSpec::new(1.0, 0.1, 1.0, 1.0).unwrap();
    for _ in 0..10_000 {
        let (c1, c2, c3) = random_bell_triple(&mut rng);
        let gamma = rng.random::<f64>() * 4.0;
        let sc = DephasingScenario::new(c1, c2, c3, 1.0, 1.7, r).unwrap();
        let state = sc.evolve_at_gamma(0.3, gamma).unwrap();
        let (branch_value, _) = trace_discord_dephasing_cases(c1, c2, c3, gamma).unwrap();
        let full = trace_discord(&state);
        assert!(
            (branch_value - full).abs() < 1e-12,
            "branch {branch_value} vs formula {full} at ({c1},{c2},{c3}), γ = {gamma}"
        );
    }
}

#[test]
fn dephasing_pipeline_reproduces_frozen_discord_features() {
    // Ohmic reservoir at Ωβ = 1; the frozen interval ends where
    // γ(t) = ln(|c1|/|c3|).
    let r = ReservoirSpec::new(1.0, 0.1, 1.0, 1.0).unwrap();
    let sc = DephasingScenario::new(0.6, -0.3, 0.4, 1.0, 1.0, r).unwrap();
    let t_star = crossing_time(0.6, 0.4, &r).expect("thermal Ohmic γ is unbounded");

    let n = 400;
    let t_max = 10.0;
    let times: Vec<f64> = (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect();
    let mut lqu = Vec::new();
    let mut d_t = Vec::new();
    let mut conc = Vec::new();
    for &t in &times {
        let m = measure_set(&sc.evolve(t).unwrap()).unwrap();
        lqu.push(m.lqu);
        d_t.push(m.trace_discord);
        conc.push(m.concurrence);
    }
    let mut trace = TimeTrace::new(times.clone(), lqu, d_t, conc).unwrap();
    trace.detect_features(DEFAULT_EPS_ZERO, DEFAULT_EPS_FLAT_FRACTION, DEFAULT_KINK_WINDOW);

    let step = times[1] - times[0];
    let freeze_end = trace
        .features
        .iter()
        .find(|e| e.measure == Measure::TraceDiscord && e.kind == EventKind::FreezeEnd)
        .expect("frozen interval detected");
    assert!(
        (freeze_end.time - t_star).abs() <= step + 1e-12,
        "freeze end {} vs crossing {t_star}",
        freeze_end.time
    );
    assert!((freeze_end.value - 0.2).abs() < 1e-9);

    let kink = trace
        .features
        .iter()
        .find(|e| e.measure == Measure::TraceDiscord && e.kind == EventKind::SuddenChange)
        .expect("branch switch shows up as a kink");
    assert!((kink.time - t_star).abs() <= step + 1e-12);

    // LQU is not frozen anywhere: no freeze events on that channel.
    assert!(!trace
        .features
        .iter()
        .any(|e| e.measure == Measure::Lqu && e.kind == EventKind::FreezeStart));
}

#[test]
fn radiative_pipeline_orders_births_and_finds_revivals() {
    let gamma = 0.9;
    let n = 2001;
    let tau_max = 5.0;
    let times: Vec<f64> = (0..n).map(|i| tau_max * i as f64 / (n - 1) as f64).collect();
    let mut lqu = Vec::new();
    let mut d_t = Vec::new();
    let mut conc = Vec::new();
    for &tau in &times {
        let m = measure_set(&radiative::evolve(tau, gamma).unwrap()).unwrap();
        lqu.push(m.lqu);
        d_t.push(m.trace_discord);
        conc.push(m.concurrence);
    }
    let mut trace = TimeTrace::new(times, lqu, d_t, conc).unwrap();
    trace.detect_features(DEFAULT_EPS_ZERO, DEFAULT_EPS_FLAT_FRACTION, DEFAULT_KINK_WINDOW);

    let birth = |m: Measure| {
        trace
            .features
            .iter()
            .find(|e| e.measure == m && e.kind == EventKind::Birth)
            .map(|e| e.time)
    };
    let lqu_birth = birth(Measure::Lqu).expect("LQU born");
    let dt_birth = birth(Measure::TraceDiscord).expect("discord born");
    let conc_birth = birth(Measure::Concurrence).expect("concurrence born for γ = 0.9");
    assert!(conc_birth > lqu_birth && conc_birth > dt_birth);

    for m in [Measure::Lqu, Measure::TraceDiscord] {
        assert!(
            trace
                .features
                .iter()
                .any(|e| e.measure == m && e.kind == EventKind::Revival),
            "{m:?} should revive after the coherence zero"
        );
    }
    // Concurrence never revives: one birth, at most one death.
    assert!(!trace
        .features
        .iter()
        .any(|e| e.measure == Measure::Concurrence && e.kind == EventKind::Revival));
}
