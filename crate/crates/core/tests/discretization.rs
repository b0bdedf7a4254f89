mod common;

use hardy_copson::characterization::{characterize, Exponents};
use hardy_copson::discretization::{
    discrete_characterize, discrete_constant, discretizing_sequence, verify_int_sup_lemma, DiscreteEvaluator,
    DiscreteIndex, DEFAULT_K_CAP, DEFAULT_K_MIN,
};
use hardy_copson::{StepFunction, Weight};
use rand::Rng;

use common::{acceptance_configs, piece};

fn fubini() -> (Exponents<f64>, Weight<f64>, Weight<f64>, Weight<f64>) {
    (
        Exponents::new(1.0, 1.0, 1.0).unwrap(),
        piece(0.0, -2.0),
        Weight::power(1.0, 1.0).unwrap(),
        Weight::constant(1.0).unwrap(),
    )
}

#[test]
fn power_weights_are_inverted_exactly() {
    let lebesgue = discretizing_sequence(&Weight::constant(1.0).unwrap(), -30, 30).unwrap();
    let linear = discretizing_sequence(&Weight::power(2.0, 1.0).unwrap(), -30, 30).unwrap();
    for (k, x, wv) in lebesgue.rows() {
        assert!((x / 2f64.powi(k) - 1.0).abs() < 1e-12);
        assert!((wv / 2f64.powi(k) - 1.0).abs() < 1e-12);
    }
    for (k, x, wv) in linear.rows() {
        assert!((x / 2f64.powf(k as f64 / 2.0) - 1.0).abs() < 1e-12);
        assert!((wv / 2f64.powi(k) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn random_weights_keep_the_doubling_contract() {
    let mut rng = common::rng(21);
    for _ in 0..200 {
        let w = if rng.gen_bool(0.7) {
            let b = rng.gen_range(0.1..10.0);
            let segs = vec![
                (rng.gen_range(0.1..5.0), rng.gen_range(-0.9..2.0)),
                (rng.gen_range(0.1..5.0), rng.gen_range(-3.0..2.0)),
            ];
            Weight::piecewise(vec![b], segs).unwrap()
        } else {
            let grid: Vec<f64> = (0..=60).map(|i| 10f64.powf(-4.0 + i as f64 / 10.0)).collect();
            let mut values: Vec<f64> = grid.iter().map(|_| rng.gen_range(0.1..10.0)).collect();
            // Flat first segment: the extrapolation below the grid stays integrable.
            values[0] = values[1];
            Weight::table(grid, values).unwrap()
        };
        let s = discretizing_sequence(&w, -30, 30).unwrap();
        let finite: Vec<f64> = s.points().iter().copied().filter(|x| x.is_finite()).collect();
        assert!(finite.windows(2).all(|p| p[0] < p[1]), "{w}");
        for (k, x, _) in s.rows() {
            if x.is_infinite() {
                assert_eq!(Some(k), s.m());
                continue;
            }
            // Recompute W(x_k) independently of the recorded value.
            let ratio = w.primitive(x) / 2f64.powi(k);
            assert!((0.5..=2.0).contains(&ratio), "{w}: k {k} ratio {ratio}");
        }
        if w.total().is_finite() {
            let m = s.m().unwrap();
            assert!(2f64.powi(m) <= w.total() * (1.0 + 1e-3) && w.total() < 2f64.powi(m + 1));
        }
    }
}

#[test]
fn non_integrable_weights_are_degenerate() {
    let steep = Weight::table(vec![1.0, 2.0, 4.0], vec![8.0, 2.0, 1.0]).unwrap();
    assert!(discretizing_sequence(&steep, -10, 10).is_err());
    assert!(discretizing_sequence(&Weight::power(1.0, -1.5).unwrap(), -10, 10).is_err());
}

#[test]
fn a1_on_fubini_sequence_approaches_two() {
    let (e, u, v, w) = fubini();
    let seq = discretizing_sequence(&w, DEFAULT_K_MIN, DEFAULT_K_CAP).unwrap();
    let a1 = discrete_constant(DiscreteIndex::A1, &e, &u, &v, &seq).unwrap();
    assert!((a1.value.value() - 2.0).abs() < 1e-9);
}

#[test]
fn b1_on_fubini_sequence_matches_cellwise_maximization() {
    let (e, u, v, w) = fubini();
    let seq = discretizing_sequence(&w, DEFAULT_K_MIN, DEFAULT_K_CAP).unwrap();
    let b1 = discrete_constant(DiscreteIndex::B1, &e, &u, &v, &seq).unwrap().value.value();

    // ∫_t^b u in closed form, and V_1(a, t) = t since v is increasing.
    let tail = |t: f64, b: f64| {
        let prim = |s: f64| if s <= 1.0 { s } else { 2.0 - 1.0 / s };
        prim(b) - prim(t)
    };
    let mut best = 0.0f64;
    for k in DEFAULT_K_MIN + 1..DEFAULT_K_CAP {
        let (a, b) = (2f64.powi(k), 2f64.powi(k + 1));
        let cell = (0..=4000)
            .map(|i| a + (b - a) * i as f64 / 4000.0)
            .map(|t| tail(t, b) * t)
            .fold(0.0, f64::max);
        best = best.max(cell / a);
    }
    assert!((best - 0.5).abs() < 1e-9);
    assert!((b1 - best).abs() < 1e-6 * best, "{b1} vs {best}");
}

#[test]
fn discrete_constants_scale_with_u() {
    let mut rng = common::rng(5);
    for cfg in acceptance_configs(11).iter().step_by(3) {
        let seq = discretizing_sequence(&cfg.w, DEFAULT_K_MIN, DEFAULT_K_CAP).unwrap();
        let lambda = rng.gen_range(0.1..10.0);
        let scaled = cfg.u.scale(lambda);
        for index in DiscreteIndex::ALL {
            let Ok(a) = discrete_constant(index, &cfg.e, &cfg.u, &cfg.v, &seq) else { continue };
            let b = discrete_constant(index, &cfg.e, &scaled, &cfg.v, &seq).unwrap();
            let expected = a.value.value() * lambda.powf(1.0 / cfg.e.q);
            let got = b.value.value();
            assert!((got - expected).abs() <= 1e-9 * expected, "{index} {}: {got} vs {expected}", cfg.label);
        }
    }
}

#[test]
fn int_sup_with_boxes_and_random_steps() {
    let one = Weight::constant(1.0).unwrap();
    let seq = discretizing_sequence(&one, -40, 40).unwrap();
    for t in [0.3f64, 1.0, 5.0, 77.0] {
        let h = StepFunction::indicator(0.0, t).unwrap();
        let ratio = verify_int_sup_lemma(&one, 0.0, &h, &seq).unwrap();
        // Σ_{2^k < T} 2^k is a geometric sum.
        let k = (t.log2().ceil()) as i32;
        let geometric = 2f64.powi(k) - 2f64.powi(-40);
        assert!((ratio - t / geometric).abs() < 1e-12);
        assert!((0.5..=2.0).contains(&ratio));
    }

    let mut rng = common::rng(3);
    let weights = [one.clone(), Weight::power(2.0, 1.0).unwrap(), piece(0.5, -0.5)];
    for w in &weights {
        let seq = discretizing_sequence(w, -40, 40).unwrap();
        for _ in 0..200 {
            let alpha = rng.gen_range(0.0..3.0);
            let n = rng.gen_range(1..8);
            let mut b = vec![0.0];
            let mut values = Vec::new();
            let mut level = rng.gen_range(1.0..100.0);
            for _ in 0..n {
                let last = *b.last().unwrap();
                b.push(last + rng.gen_range(0.01..20.0));
                values.push(level);
                level *= rng.gen_range(0.0..1.0);
            }
            let h = StepFunction::new(b, values).unwrap();
            let ratio = verify_int_sup_lemma(w, alpha, &h, &seq).unwrap();
            assert!((1.0 / 8.0..=8.0).contains(&ratio), "{w} alpha {alpha} ratio {ratio} h {h:?}");
        }
    }
}

#[test]
fn a1_and_its_origin_form_are_equivalent() {
    for cfg in acceptance_configs(11) {
        let seq = discretizing_sequence(&cfg.w, DEFAULT_K_MIN, DEFAULT_K_CAP).unwrap();
        let ev = DiscreteEvaluator::new(cfg.e, &cfg.u, &cfg.v, &seq);
        let a1 = ev.constant(DiscreteIndex::A1).unwrap().value.value();
        let origin = ev.a1_from_origin();
        let ratio = origin / a1;
        assert!((1.0 / 16.0..=16.0).contains(&ratio), "{}: {origin} vs {a1}", cfg.label);
    }
}

#[test]
fn discrete_and_continuous_estimates_agree() {
    for cfg in acceptance_configs(11) {
        let seq = discretizing_sequence(&cfg.w, DEFAULT_K_MIN, DEFAULT_K_CAP).unwrap();
        let disc = discrete_characterize(&cfg.e, &cfg.u, &cfg.v, &seq).unwrap();
        let cont = characterize(&cfg.e, &cfg.u, &cfg.v, &cfg.w).unwrap();
        assert_eq!(disc.case, cont.case);
        let ratio = disc.estimate.value() / cont.estimate.value();
        assert!((1.0 / 32.0..=32.0).contains(&ratio), "{}: ratio {ratio}", cfg.label);
    }
}
