mod common;

use hardy_copson::oracle::{estimate_best_constant, fubini_exact_constant, main_ratio, main_sides_weighted, OracleOptions};
use hardy_copson::spaces::{
    embedding_witness_check, four_weight_sides, invert_variable, level_measure, norm, rearrange, reduce_four_weight,
    FourWeightConfig, Norm,
};
use hardy_copson::{StepFunction, Weight};
use proptest::prelude::*;
use rand::Rng;

fn piece(b0: f64, b1: f64) -> Weight<f64> {
    Weight::piecewise(vec![1.0], vec![(1.0, b0), (1.0, b1)]).unwrap()
}

fn random_step(rng: &mut impl Rng) -> StepFunction<f64> {
    let n = rng.gen_range(1..6);
    let mut b = vec![rng.gen_range(0.05..0.5)];
    for _ in 0..n {
        let last = *b.last().unwrap();
        b.push(last * rng.gen_range(1.3..4.0));
    }
    let values = (0..n).map(|_| if rng.gen_bool(0.15) { 0.0 } else { rng.gen_range(0.1..5.0) }).collect();
    StepFunction::new(b, values).unwrap()
}

/// Four-weight problem whose norms are finite for steps supported away from 0.
fn random_four_weight(rng: &mut impl Rng) -> FourWeightConfig<f64> {
    let p1 = rng.gen_range(0.5..3.0);
    let p2 = p1 * rng.gen_range(0.3..1.0);
    let q1 = rng.gen_range(0.5..3.0);
    let q2 = rng.gen_range(0.5..3.0);
    FourWeightConfig {
        p1,
        q1,
        p2,
        q2,
        u1: piece(rng.gen_range(0.0..1.0), rng.gen_range(-1.0..1.0)),
        v1: piece(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        u2: piece(rng.gen_range(-0.5..0.5), -(1.0 + rng.gen_range(0.2..1.0)) / q2),
        v2: piece(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
    }
}

#[test]
fn four_weight_reduction_round_trip() {
    let mut rng = common::rng(7);
    let mut checked = 0;
    while checked < 50 {
        let cfg = random_four_weight(&mut rng);
        let red = reduce_four_weight(&cfg).unwrap();
        let s = random_step(&mut rng);
        if s.is_zero() {
            continue;
        }
        let (ces, cop) = four_weight_sides(&cfg, &s);
        // Reduced route: g = (s v1)^{p1}, a step function times v1^{p1}.
        let g = StepFunction::new(s.breakpoints().to_vec(), s.values().iter().map(|x| x.powf(cfg.p1)).collect()).unwrap();
        let m = cfg.v1.powf(cfg.p1);
        let (lhs, rhs) = main_sides_weighted(&g, Some(&m), &red.exponents, &red.u, &red.v, &red.w);
        let direct = (ces / cop).powf(cfg.p1);
        let reduced = lhs / rhs;
        assert!(direct.is_finite() && direct > 0.0, "{direct}");
        let rel = (direct - reduced).abs() / direct;
        assert!(rel < 1e-9, "direct {direct} reduced {reduced} rel {rel:e} cfg {cfg:?} s {s:?}");
        checked += 1;
    }
}

#[test]
fn best_constant_relation_on_fubini_configuration() {
    // p1 = 2 and p2 = q1 = q2 = 2 reduce to r = p = q = 1 with
    // u = u2² = min(1, t⁻²), v = v2² = t, w = u1² = 1.
    let cfg = FourWeightConfig {
        p1: 2.0,
        q1: 2.0,
        p2: 2.0,
        q2: 2.0,
        u1: Weight::constant(1.0).unwrap(),
        v1: Weight::constant(1.0).unwrap(),
        u2: piece(0.0, -1.0),
        v2: Weight::power(1.0, 0.5).unwrap(),
    };
    let red = reduce_four_weight(&cfg).unwrap();
    assert_eq!((red.exponents.r, red.exponents.p, red.exponents.q), (1.0, 1.0, 1.0));
    let big_c = fubini_exact_constant(&red.exponents, &red.u, &red.v, &red.w).unwrap().value();
    assert!((big_c - 2.0).abs() < 1e-9);
    let c = red.four_weight_constant(big_c);
    assert!((c - 2f64.sqrt()).abs() < 1e-9);

    // The oracle witness of the reduced problem, pulled back by s = g^{1/p1},
    // attains the four-weight ratio (main ratio)^{1/p1}.
    let est = estimate_best_constant(&red.exponents, &red.u, &red.v, &red.w, &OracleOptions::default());
    let g = &est.witness;
    let s = StepFunction::new(g.breakpoints().to_vec(), g.values().iter().map(|x| x.sqrt()).collect()).unwrap();
    let (ces, cop) = four_weight_sides(&cfg, &s);
    let main = main_ratio(g, &red.exponents, &red.u, &red.v, &red.w).unwrap();
    assert!(((ces / cop) - main.sqrt()).abs() < 1e-9 * main.sqrt());
    assert!(ces / cop <= c * (1.0 + 1e-9) && ces / cop > 0.95 * c, "{} vs {c}", ces / cop);
}

#[test]
fn lorentz_and_oscillation_norms_of_unit_box() {
    // f = χ_(0,1), u = w = 1 restricted to (0, 8) via steep tails.
    let f = StepFunction::indicator(0.0, 1.0).unwrap();
    let u = piece(0.0, -4.0);
    let w = piece(0.0, -4.0);
    let (lhs, rhs) = embedding_witness_check(1.0, 0.5, &u, &w, &f).unwrap();
    // ‖f‖_Λ = ∫_0^1 w = 1; f** − f* = 1/t past 1, so ‖f‖_S = (∫_1^∞ t^{-1/2} t^{-4})².
    assert!((rhs - 1.0).abs() < 1e-12);
    let exact = (1.0f64 / 3.5).powi(2);
    assert!((lhs - exact).abs() < 1e-12 * exact, "{lhs} vs {exact}");
}

#[test]
fn inversion_round_trip() {
    let w = Weight::<f64>::piecewise(vec![0.5, 3.0], vec![(2.0, 0.3), (1.0, -1.2), (0.7, 2.0)]).unwrap();
    for s in [0.0, 0.7, -1.5] {
        let back = invert_variable(&invert_variable(&w, s), s);
        for t in [0.01, 0.4, 0.5, 1.0, 2.9, 3.0, 40.0] {
            let rel = (back.eval(t) - w.eval(t)).abs() / w.eval(t);
            assert!(rel < 1e-13, "shift {s} t {t}: {} vs {}", back.eval(t), w.eval(t));
        }
    }
    let table = Weight::<f64>::table(vec![0.5, 1.0, 2.0, 4.0], vec![1.0, 3.0, 2.0, 5.0]).unwrap();
    let back = invert_variable(&invert_variable(&table, 1.0), 1.0);
    for t in [0.5, 0.8, 1.5, 3.0, 4.0] {
        assert!((back.eval(t) - table.eval(t)).abs() < 1e-12 * table.eval(t));
    }
}

fn step_strategy() -> impl Strategy<Value = StepFunction<f64>> {
    (1usize..7, any::<u64>()).prop_map(|(n, seed)| {
        let mut rng = common::rng(seed);
        let mut b = vec![rng.gen_range(0.0..2.0)];
        for _ in 0..n {
            let last = *b.last().unwrap();
            b.push(last + rng.gen_range(0.1..3.0));
        }
        let values = (0..n).map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..10.0) }).collect();
        StepFunction::new(b, values).unwrap()
    })
}

proptest! {
    #[test]
    fn rearrangement_is_equimeasurable(f in step_strategy(), lambda in 0.0f64..10.0) {
        let r = rearrange(&f);
        prop_assert!(r.star().is_non_increasing());
        let a = level_measure(&f, lambda);
        let b = level_measure(r.star(), lambda);
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        let again = rearrange(r.star());
        prop_assert_eq!(again.star(), r.star());
        prop_assert!(r.in_class_a());
    }

    #[test]
    fn maximal_function_dominates_and_decreases(f in step_strategy(), t1 in 0.01f64..30.0, dt in 0.0f64..30.0) {
        let r = rearrange(&f);
        let t2 = t1 + dt;
        prop_assert!(r.maximal(t1) >= r.star().eval(t1) * (1.0 - 1e-12));
        prop_assert!(r.maximal(t2) <= r.maximal(t1) * (1.0 + 1e-12));
    }

    #[test]
    fn norms_are_homogeneous(f in step_strategy(), c in 0.1f64..10.0) {
        prop_assume!(!f.is_zero());
        let u = piece(0.5, -2.0);
        let v = Weight::power(1.0, 0.5).unwrap();
        for which in [
            Norm::Lambda { p: 1.5, w: &v },
            Norm::S { q: 0.7, u: &u },
            Norm::Ces { p: 0.6, q: 1.3, u: &u, v: &v },
            Norm::Cop { p: 1.4, q: 2.0, u: &v, v: &u },
        ] {
            let a = norm(&f, which).value();
            let b = norm(&f.scale(c), which).value();
            prop_assert!((b - c * a).abs() <= 1e-9 * c * a.max(1e-300), "{:?}: {} {}", which, a, b);
        }
    }
}
