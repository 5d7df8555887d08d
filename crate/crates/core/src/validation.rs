//! Self-checks that compare each fast path against an independent route.
//!
//! Random scenarios come from a fixed-seed ChaCha stream, so every run
//! checks the same cases. The `validate` command and the acceptance tests
//! both call into here.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::fresnel::{fresnel, fresnel_oracle};
use crate::gain::{
    evaluate, gain_mla_closed, gain_numeric, gain_ula_closed, NumericOptions, PhaseModel, Route,
    Scenario,
};
use crate::geometry::{ArrayLayout, CarrierSpec};

pub const DEFAULT_SEED: u64 = 0x6265_616d_666f_6375;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub max_deviation: f64,
    pub bound: f64,
    /// Description of the case with the largest deviation.
    pub worst_case: String,
    /// Cases that could not be evaluated at all.
    pub errors: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.max_deviation <= self.bound
    }
}

struct Tracker {
    report: SuiteReport,
    start: Instant,
}

impl Tracker {
    fn new(name: &'static str, bound: f64) -> Self {
        Tracker {
            report: SuiteReport {
                name,
                cases: 0,
                max_deviation: 0.0,
                bound,
                worst_case: String::new(),
                errors: Vec::new(),
                elapsed: Duration::ZERO,
            },
            start: Instant::now(),
        }
    }

    fn record(&mut self, deviation: f64, case: impl FnOnce() -> String) {
        self.report.cases += 1;
        // NaN must count as a failure
        if deviation.is_nan() || deviation > self.report.max_deviation {
            self.report.max_deviation = if deviation.is_nan() {
                f64::INFINITY
            } else {
                deviation
            };
            self.report.worst_case = case();
        }
    }

    fn error(&mut self, case: String) {
        self.report.cases += 1;
        self.report.errors.push(case);
    }

    fn finish(mut self) -> SuiteReport {
        self.report.elapsed = self.start.elapsed();
        self.report
    }
}

const LAMBDA: f64 = 0.02;

/// Every route returns 1 with the transmitter on the focal point.
pub fn focus_normalization(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tracker::new("focus normalization", 1e-9);
    for _ in 0..cases {
        let lambda = rng.gen_range(0.005..=0.1);
        let n = rng.gen_range(4..=128);
        let focus = rng.gen_range(5.0..=200.0);
        let layout = if rng.gen_bool(0.5) {
            ArrayLayout::ula(n, lambda / 2.0)
        } else {
            ArrayLayout::mla(n, lambda / 2.0, rng.gen_range(0.01..=5.0))
        }
        .expect("sampled layouts are valid");
        let carrier = CarrierSpec::from_wavelength(lambda).expect("positive wavelength");
        let scenario = Scenario::new(layout, carrier, focus, 0.0, focus).expect("valid scenario");
        let opts = NumericOptions::for_wavelength(lambda);
        for route in Route::ALL {
            let describe = || format!("{route} {layout:?} λ={lambda} F={focus}");
            match evaluate(&scenario, route, &opts) {
                Ok(g) => t.record((g.value - 1.0).abs(), describe),
                Err(e) => t.error(format!("{}: {e}", describe())),
            }
        }
    }
    t.finish()
}

fn closed_vs_quadrature(name: &'static str, seed: u64, cases: usize, modular: bool) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tracker::new(name, 1e-6);
    let carrier = CarrierSpec::from_wavelength(LAMBDA).expect("positive wavelength");
    let opts = NumericOptions::for_wavelength(LAMBDA);
    for _ in 0..cases {
        let n = rng.gen_range(4..=256);
        let focus = rng.gen_range(5.0..=200.0);
        let z = rng.gen_range(5.0..=200.0);
        let (layout, closed) = if modular {
            let separation = rng.gen_range(0.01..=5.0);
            (
                ArrayLayout::mla(n, LAMBDA / 2.0, separation),
                gain_mla_closed(n, LAMBDA, separation, focus, z),
            )
        } else {
            (
                ArrayLayout::ula(n, LAMBDA / 2.0),
                gain_ula_closed(n, LAMBDA, focus, z),
            )
        };
        let layout = layout.expect("sampled layouts are valid");
        let describe = || format!("{layout:?} F={focus} z={z}");
        let numeric = Scenario::new(layout, carrier, focus, 0.0, z)
            .and_then(|s| gain_numeric(&s, PhaseModel::Fresnel, &opts));
        match (closed, numeric) {
            (Ok(c), Ok(q)) => t.record((c - q).abs(), describe),
            (c, q) => t.error(format!("{}: closed {c:?}, quadrature {q:?}", describe())),
        }
    }
    t.finish()
}

/// ULA closed form against quadrature of the quadratic-phase integrand.
pub fn ula_closed_vs_quadrature(seed: u64, cases: usize) -> SuiteReport {
    closed_vs_quadrature("ULA closed form vs quadrature", seed, cases, false)
}

/// MLA closed form against quadrature of the quadratic-phase integrand.
pub fn mla_closed_vs_quadrature(seed: u64, cases: usize) -> SuiteReport {
    closed_vs_quadrature("MLA closed form vs quadrature", seed, cases, true)
}

/// Sub-arrays that touch (`Δ = δ`) form a ULA of `2N` elements.
pub fn ula_recovery(points: usize) -> SuiteReport {
    let mut t = Tracker::new("MLA with Δ = δ vs ULA of 2N", 1e-10);
    let focus = 30.0;
    for n in [8usize, 25, 64] {
        for i in 0..points {
            let z = 5.0 + 195.0 * i as f64 / (points - 1).max(1) as f64;
            let describe = || format!("N={n} z={z}");
            match (
                gain_mla_closed(n, LAMBDA, LAMBDA / 2.0, focus, z),
                gain_ula_closed(2 * n, LAMBDA, focus, z),
            ) {
                (Ok(m), Ok(u)) => t.record((m - u).abs(), describe),
                (m, u) => t.error(format!("{}: {m:?} / {u:?}", describe())),
            }
        }
    }
    t.finish()
}

/// Fast Fresnel integrals against direct quadrature on log-spaced points in
/// `[1e-6, 1e3]`, plus exact odd symmetry.
pub fn fresnel_vs_oracle(points: usize) -> SuiteReport {
    let mut t = Tracker::new("Fresnel fast path vs quadrature", 1e-9);
    let (lo, hi) = (1e-6f64.ln(), 1e3f64.ln());
    let results: Vec<_> = (0..points)
        .into_par_iter()
        .map(|i| {
            let x = (lo + (hi - lo) * i as f64 / (points - 1).max(1) as f64).exp();
            (x, fresnel(x), fresnel(-x), fresnel_oracle(x, 1e-12))
        })
        .collect();
    for (x, fast, neg, oracle) in results {
        match (fast, neg, oracle) {
            (Ok(fast), Ok(neg), Ok(oracle)) => {
                let mut dev = (fast.c - oracle.c).abs().max((fast.s - oracle.s).abs());
                if neg.c != -fast.c || neg.s != -fast.s {
                    dev = f64::INFINITY;
                }
                t.record(dev, || format!("x={x:e}"));
            }
            (f, n, o) => t.error(format!("x={x:e}: {f:?} / {n:?} / {o:?}")),
        }
    }
    t.finish()
}

/// All suites at their standard sizes.
pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    vec![
        fresnel_vs_oracle(10_000),
        focus_normalization(seed, 50),
        ula_closed_vs_quadrature(seed, 100),
        mla_closed_vs_quadrature(seed.wrapping_add(1), 100),
        ula_recovery(200),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for r in [
            fresnel_vs_oracle(50),
            focus_normalization(1, 3),
            ula_closed_vs_quadrature(2, 3),
            mla_closed_vs_quadrature(3, 3),
            ula_recovery(10),
        ] {
            assert!(r.passed(), "{r:?}");
            assert!(r.cases > 0);
        }
    }

    #[test]
    fn nan_counts_as_failure() {
        let mut t = Tracker::new("t", 1.0);
        t.record(0.5, String::new);
        t.record(f64::NAN, || "bad".into());
        let r = t.finish();
        assert!(!r.passed());
        assert_eq!(r.worst_case, "bad");
    }

    #[test]
    fn same_seed_same_cases() {
        let a = ula_closed_vs_quadrature(7, 2);
        let b = ula_closed_vs_quadrature(7, 2);
        assert_eq!(a.worst_case, b.worst_case);
        assert_eq!(a.max_deviation, b.max_deviation);
    }
}
