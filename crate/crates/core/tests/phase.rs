use dicke_phase::phase::{Phase, PhaseSettings};
use dicke_phase::{
    classify_transition, find_local_maxima, hysteresis_branches, order_parameter, phase_map, sweep, Axis, ModelParams,
    Parameter, SweepResult, SweepSpec, TransitionOrder, TransitionRecord,
};
use proptest::prelude::*;

fn p(lambda: f64, j: f64, epsilon: f64, beta: f64) -> ModelParams {
    ModelParams::new(lambda, j, epsilon, beta).unwrap()
}

fn lambda_sweep(j: f64, epsilon: f64, beta: f64, start: f64, stop: f64, steps: usize) -> SweepResult {
    sweep(&SweepSpec::new(
        Parameter::Lambda,
        start,
        stop,
        steps,
        p(0.0, j, epsilon, beta),
    ))
    .unwrap()
}

fn check_consistency(records: &[TransitionRecord]) {
    for t in records {
        assert!(
            t.bracket.0 <= t.critical_value && t.critical_value <= t.bracket.1,
            "{t:?}"
        );
        match t.order {
            TransitionOrder::First => {
                assert!(t.jump > 0.0, "{t:?}");
                assert!(t.coexistence_width > 0.0, "{t:?}");
            }
            TransitionOrder::Second => {
                assert_eq!(t.jump, 0.0);
                assert_eq!(t.coexistence_width, 0.0);
            }
        }
    }
}

/// λ at which `4λ² tanh(βε/2) = ε`, by bisection on Ω''(0) at J = 0.
fn zero_coupling_critical_lambda(epsilon: f64, beta: f64) -> f64 {
    let curvature = |l: f64| -2.0 * beta + 8.0 * beta * l * l * (beta * epsilon / 2.0).tanh() / epsilon;
    let (mut lo, mut hi) = (0.0, 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if curvature(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn strong_coupling_transition_is_first_order() {
    let result = lambda_sweep(1.0, 1.1, 100.0, 0.7, 1.1, 41);
    let transitions = classify_transition(&result).unwrap();
    check_consistency(&transitions);
    assert_eq!(transitions.len(), 1, "{transitions:?}");
    let t = transitions[0];
    assert_eq!(t.order, TransitionOrder::First);
    assert!(t.critical_value > 0.85 && t.critical_value < 0.95, "{t:?}");
    assert!(t.jump > 0.3, "{t:?}");

    let below = find_local_maxima(&p(t.bracket.0, 1.0, 1.1, 100.0)).unwrap();
    let above = find_local_maxima(&p(t.bracket.1, 1.0, 1.1, 100.0)).unwrap();
    assert_eq!(below.global().x, 0.0);
    assert!(above.global().x > 0.3);
}

#[test]
fn zero_coupling_transition_is_second_order_at_closed_form_point() {
    let (epsilon, beta) = (0.5, 1.0);
    let expected = zero_coupling_critical_lambda(epsilon, beta);
    let result = lambda_sweep(0.0, epsilon, beta, 0.1, 1.5, 41);
    let transitions = classify_transition(&result).unwrap();
    check_consistency(&transitions);
    assert_eq!(transitions.len(), 1, "{transitions:?}");
    assert_eq!(transitions[0].order, TransitionOrder::Second);
    assert!((transitions[0].critical_value - expected).abs() <= 1e-3);
}

#[test]
fn zero_lambda_beta_sweep_has_no_transition() {
    let result = sweep(&SweepSpec::new(Parameter::Beta, 0.5, 200.0, 21, p(0.0, 1.0, 1.1, 1.0))).unwrap();
    assert!(result.records.iter().all(|r| r.x_star == 0.0));
    assert!(classify_transition(&result).unwrap().is_empty());
}

#[test]
fn critical_lambda_grows_with_spin_coupling() {
    let critical = |j: f64| {
        let transitions = classify_transition(&lambda_sweep(j, 1.1, 100.0, 0.6, 1.1, 41)).unwrap();
        check_consistency(&transitions);
        assert_eq!(transitions.len(), 1, "J={j}: {transitions:?}");
        transitions[0].critical_value
    };
    assert!(critical(1.0) > critical(0.8));
}

#[test]
fn theta_bound_along_a_sweep() {
    let result = lambda_sweep(1.0, 1.1, 100.0, 0.7, 1.1, 21);
    for r in &result.records {
        let floor = 1.0 / (2.0 * 100.0);
        assert!(r.theta >= floor);
        assert_eq!(r.theta == floor, r.x_star == 0.0, "{r:?}");
        assert!((r.theta - (r.x_star * r.x_star + floor)).abs() <= 1e-15);
    }
}

#[test]
fn reversed_sweep_reproduces_records() {
    let spec = SweepSpec::new(Parameter::Lambda, 0.7, 1.1, 21, p(0.0, 1.0, 1.1, 100.0));
    let forward = sweep(&spec).unwrap();
    let backward = sweep(&spec.reversed()).unwrap();
    let mut reversed = backward.records.clone();
    reversed.reverse();
    assert_eq!(forward.records, reversed);
}

#[test]
fn zero_coupling_branches_coincide() {
    let spec = SweepSpec::new(Parameter::Lambda, 0.1, 1.2, 23, p(0.0, 0.0, 1.1, 100.0));
    let branches = hysteresis_branches(&spec).unwrap();
    for (f, b) in branches.forward.records.iter().zip(branches.backward_aligned()) {
        assert_eq!(f.value, b.value);
        assert!((f.x_star - b.x_star).abs() <= 1e-6);
    }
    assert!(branches.disagreement_windows(1e-6).is_empty());
}

#[test]
fn first_order_branches_show_hysteresis() {
    let spec = SweepSpec::new(Parameter::Lambda, 0.7, 1.1, 41, p(0.0, 1.0, 1.1, 100.0));
    let branches = hysteresis_branches(&spec).unwrap();
    let windows = branches.disagreement_windows(1e-6);
    assert_eq!(windows.len(), 1, "{windows:?}");
    let (lo, hi) = windows[0];
    assert!(lo < hi);

    let global = sweep(&spec).unwrap();
    let transition = classify_transition(&global).unwrap()[0];
    assert!(lo <= transition.critical_value && transition.critical_value <= hi + 0.01);

    for ((f, b), g) in branches
        .forward
        .records
        .iter()
        .zip(branches.backward_aligned())
        .zip(&global.records)
    {
        let coexisting = g.n_maxima.unwrap() >= 2;
        if !coexisting {
            assert!(
                (f.x_star - b.x_star).abs() <= 1e-6,
                "λ={}: {} vs {}",
                g.value,
                f.x_star,
                b.x_star
            );
        }
        if f.value >= lo && f.value <= hi {
            assert!(coexisting, "λ={} inside window without coexistence", f.value);
        }
    }
}

#[test]
fn zero_lambda_plane_is_sub_radiant() {
    let a = Axis::new(Parameter::SpinCoupling, 0.1, 2.0, 4);
    let b = Axis::new(Parameter::Epsilon, 0.1, 3.0, 4);
    let map = phase_map(&a, &b, &p(0.0, 1.0, 1.0, 100.0)).unwrap();
    assert_eq!(map.cells.len(), 16);
    assert!(map
        .cells
        .iter()
        .all(|c| c.phase == Phase::SubRadiant && c.boundary.is_none()));
}

#[test]
fn map_boundaries_follow_transition_order() {
    let a = Axis::new(Parameter::SpinCoupling, 0.0, 1.0, 2);
    let b = Axis::new(Parameter::Lambda, 0.3, 1.1, 21);
    let map = phase_map(&a, &b, &p(0.5, 1.0, 1.1, 100.0)).unwrap();
    let boundaries = |i: usize| -> Vec<(f64, TransitionOrder)> {
        map.row(i)
            .iter()
            .filter_map(|c| c.boundary.map(|o| (c.b_value, o)))
            .collect()
    };
    let free = boundaries(0);
    assert!(
        !free.is_empty() && free.iter().all(|(_, o)| *o == TransitionOrder::Second),
        "{free:?}"
    );
    let coupled = boundaries(1);
    assert!(coupled.iter().any(|(_, o)| *o == TransitionOrder::First), "{coupled:?}");
    for i in 0..2 {
        let row = map.row(i);
        assert_eq!(row.first().unwrap().phase, Phase::SubRadiant);
        assert_eq!(row.last().unwrap().phase, Phase::SuperRadiant);
    }
}

#[test]
fn theta_examples() {
    assert_eq!(order_parameter(&p(0.0, 1.0, 1.1, 100.0)).unwrap(), 0.005);
    let x = dicke_phase::global_maximizer(&p(1.2, 0.0, 1.1, 100.0)).unwrap().x;
    let theta = order_parameter(&p(1.2, 0.0, 1.1, 100.0)).unwrap();
    assert_eq!(theta, x * x + 0.005);
    assert!((x - 1.177_92).abs() < 1e-4);
}

#[test]
fn splitting_sweep_shrinks_maximizer_continuously() {
    let spec = SweepSpec::new(Parameter::Epsilon, 0.2, 2.5, 24, p(1.3, 0.4, 1.0, 100.0));
    let result = sweep(&spec).unwrap();
    for w in result.records.windows(2) {
        assert!(w[1].x_star <= w[0].x_star, "{w:?}");
        assert!(w[0].x_star - w[1].x_star < 0.1, "{w:?}");
    }
    assert!(classify_transition(&result).unwrap().is_empty());
}

#[test]
fn temperature_sweep_through_first_order_point_shows_hysteresis() {
    let spec = SweepSpec::new(Parameter::Beta, 0.5, 20.0, 40, p(0.905, 1.0, 1.1, 1.0));
    let global = sweep(&spec).unwrap();
    let transitions = classify_transition(&global).unwrap();
    assert_eq!(transitions.len(), 1, "{transitions:?}");
    assert_eq!(transitions[0].order, TransitionOrder::First);
    let branches = hysteresis_branches(&spec).unwrap();
    assert!(!branches.disagreement_windows(1e-6).is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn theta_lower_bound(
        lambda in 0.0..1.6f64,
        j in 0.0..1.5f64,
        epsilon in 0.05..2.5f64,
        log_beta in -1.0..2.5f64,
    ) {
        let beta = 10f64.powf(log_beta);
        let params = p(lambda, j, epsilon, beta);
        let theta = order_parameter(&params).unwrap();
        let x = dicke_phase::global_maximizer(&params).unwrap().x;
        let floor = 1.0 / (2.0 * beta);
        prop_assert!(theta >= floor);
        prop_assert_eq!(theta == floor, x == 0.0);
        prop_assert_eq!(PhaseSettings::default().is_super_radiant(x), x > 1e-6);
    }
}
