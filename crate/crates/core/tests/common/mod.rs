//! Seeded generator of finite-constant weight configurations.
//!
//! Every weight has one breakpoint at `t = 1` and power behaviour on both
//! sides:
//!
//! ```text
//! u = piece(1; pow(1,0), pow(1,-g))
//! v = piece(1; pow(1,b0), pow(1,b1))
//! w = piece(1; pow(1,d0), pow(1,d1))
//! ```
//!
//! The exponents are drawn so that, with `W ~ x^{a}`, `V_r(0,x) ~ x^{b}` and
//! `∫_x^∞ u ~ x^{1-g}` locally, the balance `b - a/p + (1-g)/q` is at least
//! `0.3` near the origin and at most `-0.3` near infinity. Exponents are
//! kept at distance `0.1` from the region boundaries.

#![allow(dead_code)]

use hardy_copson::characterization::{characterize, CaseRegion, Exponents};
use hardy_copson::Weight;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct Config {
    pub e: Exponents<f64>,
    pub u: Weight<f64>,
    pub v: Weight<f64>,
    pub w: Weight<f64>,
    pub label: String,
}

pub fn piece(b0: f64, b1: f64) -> Weight<f64> {
    Weight::piecewise(vec![1.0], vec![(1.0, b0), (1.0, b1)]).unwrap()
}

/// Random exponents inside `case`.
pub fn exponents_in(case: CaseRegion, rng: &mut ChaCha8Rng) -> Exponents<f64> {
    loop {
        let r: f64 = if rng.gen_bool(0.3) { 1.0 } else { rng.gen_range(0.25..1.0) };
        let p: f64 = rng.gen_range(0.3..3.0);
        let q: f64 = rng.gen_range(0.3..3.0);
        // Stay away from the region boundaries, where exponents such as
        // q/(1-q) or pq/(p-q) blow up.
        if (q - 1.0).abs() < 0.1 || (p - q).abs() < 0.1 || (p < r + 0.1 && p > r - 0.1) {
            continue;
        }
        let e = Exponents::new(r, p, q).unwrap();
        if e.case() == case {
            return e;
        }
    }
}

/// `v` exponent on a side where `V_r(0,x)` must grow like `x^b`.
fn v_exponent(r: f64, b: f64) -> f64 {
    if r == 1.0 {
        b
    } else {
        r * b - 1.0 + r
    }
}

/// Draws weights for `e` satisfying the balance margins, or `None`.
pub fn weights_for(e: &Exponents<f64>, rng: &mut ChaCha8Rng) -> Option<(Weight<f64>, Weight<f64>, Weight<f64>)> {
    let (r, p, q) = (e.r, e.p, e.q);
    let d0 = rng.gen_range(-0.5..1.0);
    let d1 = rng.gen_range(-0.5..1.0);
    let g = rng.gen_range(1.5..3.0);
    let s0 = rng.gen_range(0.3..1.0);
    let s1 = rng.gen_range(-1.0..-0.3);
    let b0 = (d0 + 1.0) / p + s0;
    let b1 = (d1 + 1.0) / p + (g - 1.0) / q + s1;
    if b1 < 0.05 {
        return None;
    }
    Some((piece(0.0, -g), piece(v_exponent(r, b0), v_exponent(r, b1)), piece(d0, d1)))
}

/// One finite-constant configuration in `case`.
pub fn config_in(case: CaseRegion, rng: &mut ChaCha8Rng) -> Config {
    loop {
        let e = exponents_in(case, rng);
        let Some((u, v, w)) = weights_for(&e, rng) else { continue };
        let rep = characterize(&e, &u, &v, &w).unwrap();
        if rep.finite && rep.estimate.value() > 0.0 {
            let label = format!("case {case} r={} p={} q={} u={u} v={v} w={w}", e.r, e.p, e.q);
            return Config { e, u, v, w, label };
        }
    }
}

/// The twenty seeded acceptance configurations: three in each of the first
/// six regions and two in the last.
pub fn acceptance_configs(seed: u64) -> Vec<Config> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (i, case) in CaseRegion::ALL.into_iter().enumerate() {
        let n = if i < 6 { 3 } else { 2 };
        for _ in 0..n {
            out.push(config_in(case, &mut rng));
        }
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A finite-constant configuration with `r ≤ q < p < 1`, where the
/// alternative case VI constants apply.
pub fn alt_vi_config(rng: &mut ChaCha8Rng) -> Config {
    loop {
        let p: f64 = rng.gen_range(0.4..0.95);
        let q: f64 = rng.gen_range(0.25..p - 0.1).max(0.25);
        let r: f64 = rng.gen_range(0.2..=q);
        if !(r <= q && q < p - 0.05) {
            continue;
        }
        let e = Exponents::new(r, p, q).unwrap();
        let Some((u, v, w)) = weights_for(&e, rng) else { continue };
        let rep = characterize(&e, &u, &v, &w).unwrap();
        if rep.finite && rep.estimate.value() > 0.0 {
            let label = format!("alt VI r={r} p={p} q={q} u={u} v={v} w={w}");
            return Config { e, u, v, w, label };
        }
    }
}
