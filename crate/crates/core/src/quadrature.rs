//! Gauss–Legendre rules and an adaptive panel-halving integrator for
//! complex-valued integrands.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds an `order`-point rule by Newton iteration on `P_order`.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be >= 1");
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..order.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(order, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        if order % 2 == 1 {
            nodes[order / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Applies the rule on `[a, b]`.
    #[inline]
    pub fn integrate<F>(&self, f: &mut F, a: f64, b: f64) -> Complex64
    where
        F: FnMut(f64) -> Complex64,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(mid + half * x) * *w;
        }
        acc * half
    }
}

fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=order {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = order as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared 8-point rule.
pub fn gauss_legendre_8() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(8))
}

/// Shared 24-point rule.
pub fn gauss_legendre_24() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(24))
}

/// Controls for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    /// Absolute error target for the whole interval.
    pub abs_tol: f64,
    /// Initial panels are no wider than this.
    pub max_panel: f64,
    /// Hard cap on live plus accepted subintervals.
    pub max_subintervals: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    /// Sum of per-panel `|fine − coarse|` differences.
    pub error: f64,
    pub subintervals: usize,
}

/// Returned when the subdivision budget runs out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NotConverged {
    pub estimate: Complex64,
    pub error_bound: f64,
    pub subintervals: usize,
}

/// Integrates `f` over `[a, b]` by panel halving.
///
/// Each panel is accepted once the rule on the whole panel and the rule on
/// its two halves agree to within the panel's share of `abs_tol`
/// (proportional to its width). Panels whose width is already at the
/// resolution of `f64` are accepted unconditionally.
pub fn integrate_adaptive<F>(
    rule: &GaussLegendre,
    mut f: F,
    a: f64,
    b: f64,
    opts: &AdaptiveOptions,
) -> Result<Estimate, NotConverged>
where
    F: FnMut(f64) -> Complex64,
{
    if a == b {
        return Ok(Estimate {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            subintervals: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let length = hi - lo;
    let initial = (length / opts.max_panel).ceil().max(1.0);
    if initial > opts.max_subintervals as f64 {
        return Err(NotConverged {
            estimate: Complex64::new(f64::NAN, f64::NAN),
            error_bound: f64::INFINITY,
            subintervals: 0,
        });
    }
    let initial = initial as usize;
    let density = opts.abs_tol / length;
    let step = length / initial as f64;

    let mut stack: Vec<(f64, f64, Complex64)> = Vec::with_capacity(initial + 64);
    for i in (0..initial).rev() {
        let p0 = lo + i as f64 * step;
        let p1 = if i + 1 == initial {
            hi
        } else {
            lo + (i + 1) as f64 * step
        };
        let coarse = rule.integrate(&mut f, p0, p1);
        stack.push((p0, p1, coarse));
    }

    let mut total = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut accepted = 0usize;
    while let Some((p0, p1, coarse)) = stack.pop() {
        let mid = 0.5 * (p0 + p1);
        let left = rule.integrate(&mut f, p0, mid);
        let right = rule.integrate(&mut f, mid, p1);
        let fine = left + right;
        let diff = (fine - coarse).norm();
        let unresolvable = mid <= p0 || mid >= p1;
        if diff <= density * (p1 - p0) || unresolvable {
            total += fine;
            error += diff;
            accepted += 1;
            continue;
        }
        if accepted + stack.len() + 2 > opts.max_subintervals {
            let mut estimate = total + fine;
            let mut bound = error + diff;
            for (_, _, c) in &stack {
                estimate += c;
                bound += c.norm();
            }
            return Err(NotConverged {
                estimate: estimate * sign,
                error_bound: bound,
                subintervals: accepted + stack.len() + 1,
            });
        }
        stack.push((mid, p1, right));
        stack.push((p0, mid, left));
    }
    Ok(Estimate {
        value: total * sign,
        error,
        subintervals: accepted,
    })
}
