use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::characterization::Exponents;
use crate::discretization::discretizing_sequence;
use crate::ext::{mul_conv, pow_conv};
use crate::quadrature::{gauss_legendre, golden_max};
use crate::scalar::Scalar;
use crate::weights::{merged_breaks, Weight};

use super::{main_ratio, paper_test_functions, StepFunction};

/// Search settings for [`estimate_best_constant`].
#[derive(Clone, Debug)]
pub struct OracleOptions<T> {
    pub cells: usize,
    pub restarts: usize,
    /// Maximal number of coordinate sweeps per start.
    pub budget: usize,
    pub seed: u64,
    /// Range of the step-function grid; derived from the weights when `None`.
    pub grid: Option<(T, T)>,
    /// Start additional runs from the dyadic test functions.
    pub dyadic_seeds: bool,
    /// An extra starting point, projected onto the grid.
    pub warm_start: Option<StepFunction<T>>,
}

impl<T: Scalar> Default for OracleOptions<T> {
    fn default() -> Self {
        OracleOptions { cells: 64, restarts: 8, budget: 200, seed: 0, grid: None, dyadic_seeds: true, warm_start: None }
    }
}

/// Best step function found and its ratio, a lower bound on the best constant.
#[derive(Clone, Debug, Serialize)]
pub struct OracleEstimate<T> {
    pub ratio: T,
    pub witness: StepFunction<T>,
    /// `(sweep, ratio)` of the winning run.
    pub trace: Vec<(usize, T)>,
    pub converged: bool,
}

/// Gauss nodes per cell in the search model.
const NODES: usize = 4;
/// Seeded runs that get a full coordinate ascent.
const SEED_RUNS: usize = 2;
/// Sweep-to-sweep relative gain below which a run counts as converged.
const STALL: f64 = 1e-7;
const GOLDEN_ITERS: usize = 8;

/// Both sides of the inequality for step functions on a fixed grid, with
/// all weight integrals precomputed at Gauss nodes of each cell.
struct Model<T> {
    r: T,
    p: T,
    q: T,
    lw: Vec<T>,
    vc: Vec<T>,
    vcell: Vec<T>,
    rw: Vec<T>,
    dl: Vec<T>,
    len: Vec<T>,
    head_w: T,
    tail_u: T,
}

impl<T: Scalar> Model<T> {
    fn new(e: &Exponents<T>, u: &Weight<T>, v: &Weight<T>, w: &Weight<T>, grid: &[T]) -> Self {
        let (xs, ws) = gauss_legendre::<T>(NODES);
        let n = grid.len() - 1;
        let mut m = Model {
            r: e.r,
            p: e.p,
            q: e.q,
            lw: Vec::with_capacity(n * NODES),
            vc: Vec::with_capacity(n * NODES),
            vcell: Vec::with_capacity(n),
            rw: Vec::with_capacity(n * NODES),
            dl: Vec::with_capacity(n * NODES),
            len: Vec::with_capacity(n),
            head_w: w.primitive(grid[0]),
            tail_u: u.tail(grid[n]),
        };
        for c in grid.windows(2) {
            let (a, b) = (c[0].ln(), c[1].ln());
            let half = T::lit(0.5) * (b - a);
            let mid = T::lit(0.5) * (a + b);
            for (&x, &wt) in xs.iter().zip(&ws) {
                let t = (mid + half * x).exp();
                m.lw.push(wt * half * t * u.eval(t));
                m.vc.push(v.integral(c[0], t));
                m.rw.push(wt * half * t * w.eval(t));
                m.dl.push(c[1] - t);
            }
            m.vcell.push(v.integral(c[0], c[1]));
            m.len.push(c[1] - c[0]);
        }
        m
    }

    fn ratio(&self, x: &[T]) -> T {
        let qr = self.q / self.r;
        let mut lhs = T::zero();
        let mut acc = T::zero();
        for (i, &xi) in x.iter().enumerate() {
            let xr = xi.powf(self.r);
            for j in i * NODES..(i + 1) * NODES {
                lhs = lhs + self.lw[j] * (acc + xr * self.vc[j]).powf(qr);
            }
            acc = acc + xr * self.vcell[i];
        }
        lhs = lhs + mul_conv(pow_conv(acc, qr), self.tail_u);
        let mut rhs = T::zero();
        let mut tail = T::zero();
        for (i, &xi) in x.iter().enumerate().rev() {
            for j in i * NODES..(i + 1) * NODES {
                rhs = rhs + self.rw[j] * (tail + xi * self.dl[j]).powf(self.p);
            }
            tail = tail + xi * self.len[i];
        }
        rhs = rhs + mul_conv(pow_conv(tail, self.p), self.head_w);
        let out = pow_conv(lhs, T::one() / self.q) / pow_conv(rhs, T::one() / self.p);
        if out.is_nan() {
            T::zero()
        } else {
            out
        }
    }
}

struct Run<T> {
    x: Vec<T>,
    trace: Vec<(usize, T)>,
    converged: bool,
}

/// Multiplicative coordinate ascent: each coordinate tries the factors
/// `1/4, 1/2, 2, 4` and zero, then a golden-section polish in `ln λ`
/// around the best factor. A zero coordinate is offered fractions of the
/// current maximum instead, so mass can move back into it.
fn ascend<T: Scalar>(model: &Model<T>, mut x: Vec<T>, budget: usize) -> Run<T> {
    let mut best = model.ratio(&x);
    let mut trace = vec![(0, best)];
    let mut converged = false;
    let factors = [0.0, 0.25, 0.5, 2.0, 4.0].map(T::lit);
    let revive = [1e-4, 1e-2, 1.0].map(T::lit);
    let ln2 = T::LN_2();
    for sweep in 1..=budget {
        let start = best;
        for i in 0..x.len() {
            let orig = x[i];
            let set = |val: T| {
                let mut y = x.clone();
                y[i] = val;
                model.ratio(&y)
            };
            let mut val_best = orig;
            if orig > T::zero() {
                for &f in &factors {
                    let r = set(orig * f);
                    if r > best {
                        best = r;
                        val_best = orig * f;
                    }
                }
            } else {
                let top = x.iter().copied().fold(T::zero(), T::max);
                for &f in &revive {
                    let r = set(top * f);
                    if r > best {
                        best = r;
                        val_best = top * f;
                    }
                }
            }
            if val_best > T::zero() {
                let centre = val_best.ln();
                let (s, r) = golden_max(&|s: T| set(s.exp()), centre - ln2, centre + ln2, GOLDEN_ITERS);
                if r > best {
                    best = r;
                    val_best = s.exp();
                }
            }
            x[i] = val_best;
        }
        trace.push((sweep, best));
        if !(best > start * (T::one() + T::lit(STALL))) {
            converged = true;
            break;
        }
    }
    Run { x, trace, converged }
}

/// Geometric grid of `cells` cells over the range, with weight breakpoints
/// inside the range added as extra nodes.
fn search_grid<T: Scalar>(u: &Weight<T>, v: &Weight<T>, w: &Weight<T>, cells: usize, range: Option<(T, T)>) -> Vec<T> {
    let breaks = merged_breaks(&[u, v, w]);
    let (lo, hi) = range.unwrap_or_else(|| {
        let spread = T::lit(1e6);
        match (breaks.first(), breaks.last()) {
            (Some(&a), Some(&b)) => (a / spread, b * spread),
            _ => (T::one() / spread, spread),
        }
    });
    let (llo, lhi) = (lo.ln(), hi.ln());
    let mut g: Vec<T> =
        (0..=cells).map(|i| (llo + (lhi - llo) * T::lit(i as f64) / T::lit(cells as f64)).exp()).collect();
    g[0] = lo;
    g[cells] = hi;
    let tol = T::lit(1e-9);
    for b in breaks {
        if b > lo && b < hi && g.iter().all(|&x| ((x - b) / b).abs() > tol) {
            g.push(b);
        }
    }
    g.sort_by(|a, b| a.partial_cmp(b).unwrap());
    g
}

/// Cell values of `f` on `grid`, if any are positive.
fn start_from<T: Scalar>(f: &StepFunction<T>, grid: &[T]) -> Option<Vec<T>> {
    let x = f.project(grid).ok()?.values().to_vec();
    x.iter().any(|&v| v > T::zero()).then_some(x)
}

/// Lower bound on the best constant: the largest LHS/RHS ratio found over
/// step functions on a logarithmic grid.
pub fn estimate_best_constant<T: Scalar>(
    e: &Exponents<T>,
    u: &Weight<T>,
    v: &Weight<T>,
    w: &Weight<T>,
    opts: &OracleOptions<T>,
) -> OracleEstimate<T> {
    let cells = opts.cells.max(4);
    let grid = search_grid(u, v, w, cells, opts.grid);
    let model = Model::new(e, u, v, w, &grid);
    let mut starts: Vec<Vec<T>> = Vec::new();

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let spread = T::lit(1e3).ln();
    for _ in 0..opts.restarts {
        starts.push((0..grid.len() - 1).map(|_| (spread * T::lit(rng.gen_range(-1.0..1.0))).exp()).collect());
    }
    if let Some(f) = &opts.warm_start {
        starts.extend(start_from(f, &grid));
    }
    // The unprojected test functions compete with the ascent results.
    let mut raw_best: Option<(T, StepFunction<T>)> = None;
    if opts.dyadic_seeds {
        let raw = dyadic_seeds(e, v, w, &grid);
        for f in &raw {
            let exact = main_ratio(f, e, u, v, w).unwrap_or(T::zero());
            if raw_best.as_ref().is_none_or(|b| exact > b.0) {
                raw_best = Some((exact, f.clone()));
            }
        }
        let mut seeded: Vec<(T, Vec<T>)> =
            raw.iter().filter_map(|f| start_from(f, &grid)).map(|x| (model.ratio(&x), x)).collect();
        seeded.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
        starts.extend(seeded.into_iter().take(SEED_RUNS).map(|(_, x)| x));
    }

    let mut best: Option<(T, Vec<T>, Run<T>)> = None;
    for x0 in starts {
        let run = ascend(&model, x0, opts.budget);
        let f = StepFunction::new(grid.clone(), run.x.clone()).expect("nonnegative cell values");
        let exact = main_ratio(&f, e, u, v, w).unwrap_or(T::zero());
        if best.as_ref().is_none_or(|b| exact > b.0) {
            best = Some((exact, run.x.clone(), run));
        }
    }
    let (ratio, x, run) = best.expect("at least one start");
    let mut witness = StepFunction::new(grid, x).expect("nonnegative cell values");
    let mut ratio = ratio;
    if let Some((r, f)) = raw_best {
        if r > ratio {
            ratio = r;
            witness = f;
        }
    }
    OracleEstimate { ratio, witness, trace: run.trace, converged: run.converged }
}

/// Single-cell test functions on every dyadic cell inside the grid, plus
/// their sum with unit coefficients.
fn dyadic_seeds<T: Scalar>(e: &Exponents<T>, v: &Weight<T>, w: &Weight<T>, grid: &[T]) -> Vec<StepFunction<T>> {
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    let k_lo = w.primitive(lo).log2().ceil().to_i32().unwrap_or(-60).max(-60);
    let k_hi = w.primitive(hi).log2().floor().to_i32().unwrap_or(60).min(60);
    if k_hi <= k_lo {
        return Vec::new();
    }
    let seq = match discretizing_sequence(w, k_lo, k_hi) {
        Ok(s) => s,
        Err(_) => return Vec::new(),
    };
    let ks: Vec<i32> = (seq.k_min() + 1..=seq.k_top()).filter(|&k| seq.x(k).is_finite()).collect();
    let mut out: Vec<StepFunction<T>> =
        ks.iter().filter_map(|&k| paper_test_functions(e, v, &seq, &[(k, T::one())]).ok()).collect();
    let all: Vec<(i32, T)> = ks.iter().map(|&k| (k, T::one())).collect();
    out.extend(paper_test_functions(e, v, &seq, &all).ok());
    out
}
