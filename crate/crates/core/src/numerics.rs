//! Shared numerical machinery: Gauss-Legendre quadrature (fixed and
//! adaptive), bisection, and golden-section maximization.
//!
//! These are plain, dependency-free routines tuned for the smooth, low-order
//! integrands this crate produces after its endpoint substitutions.

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Compute an n-point rule by Newton iteration on the Legendre
    /// polynomial P_n, seeded with the Chebyshev-based root estimates.
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "need at least a 2-point rule");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Initial guess for the i-th root (descending order).
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // Evaluate P_n(x) and P_n'(x) by upward recurrence.
                let mut p0 = 1.0;
                let mut p1 = x;
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Integrate f over [a, b] with the fixed rule.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    /// Sum of per-interval refinement discrepancies; a conservative
    /// absolute error estimate.
    pub error_estimate: f64,
    pub n_intervals: usize,
}

/// Adaptive Gauss-Legendre integration of f over [a, b] to a relative
/// tolerance. Each interval is accepted when a 15-point estimate agrees
/// with the sum of 15-point estimates over its halves.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error_estimate: 0.0,
            n_intervals: 0,
        });
    }
    let rule = GaussLegendre::new(15);
    let total_scale = rule.integrate(f, a, b).abs().max(1e-300);
    // (lo, hi, coarse estimate, depth)
    let mut stack = vec![(a, b, rule.integrate(f, a, b), 0u32)];
    let mut value = 0.0;
    let mut err = 0.0;
    let mut n_intervals = 0usize;
    const MAX_DEPTH: u32 = 48;
    const MAX_INTERVALS: usize = 200_000;
    while let Some((lo, hi, coarse, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(f, lo, mid);
        let right = rule.integrate(f, mid, hi);
        let fine = left + right;
        let disc = (fine - coarse).abs();
        // Local acceptance against the global scale keeps the criterion
        // relative without dividing by near-zero local values.
        if disc <= rel_tol * total_scale * ((hi - lo) / (b - a)).max(1e-6) || depth >= MAX_DEPTH {
            if depth >= MAX_DEPTH && disc > rel_tol * total_scale {
                return Err(Error::QuadratureFailure(format!(
                    "interval [{lo}, {hi}] still off by {disc:.3e} at depth {depth}"
                )));
            }
            value += fine;
            err += disc;
            n_intervals += 1;
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
        if n_intervals + stack.len() > MAX_INTERVALS {
            return Err(Error::QuadratureFailure(format!(
                "exceeded {MAX_INTERVALS} intervals"
            )));
        }
    }
    Ok(Quadrature {
        value,
        error_estimate: err,
        n_intervals,
    })
}

/// Bisection root finding on [lo, hi]. Requires a sign change. Stops when
/// the bracket is narrower than xtol or |f| < ftol at the midpoint.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, xtol: f64, ftol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::domain(format!(
            "bisection bracket [{lo}, {hi}] has no sign change (f = {flo:.3e}, {fhi:.3e})"
        )));
    }
    let increasing = fhi > 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() < ftol && (hi - lo) < xtol {
            return Ok(mid);
        }
        if (fm > 0.0) == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < xtol * 1e-3 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
/// Returns (argmax, max).
pub fn golden_max<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, xtol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
