//! Shared oracles for the integration suites: adaptive Simpson quadrature
//! over self-contained Gaussian densities, independent of the library's own
//! erfc-based numerics, plus deterministic random instance generators.

#![allow(dead_code)]

use lrb_detect::{HypothesisPair, LrbScheduler, RngStream};

/// Standard-normal density, written out locally so the oracle shares nothing
/// with the implementation under test.
pub fn phi(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Density of `N(theta, sigma^2)` at `y`.
pub fn normal_density(y: f64, theta: f64, sigma: f64) -> f64 {
    phi((y - theta) / sigma) / sigma
}

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Quadrature oracle for the standard-normal cdf: `1/2 + integral of phi
/// from 0 to x`.
pub fn cdf_by_quadrature(x: f64) -> f64 {
    0.5 + adaptive_simpson(&phi, 0.0, x, 1e-15)
}

/// Quadrature oracle for the first moment of `N(theta, sigma^2)` over
/// `(-inf, a] u [b, inf)`. Truncating 14 sigma past the region boundary and
/// the mean leaves less than 1e-40 of weighted mass behind.
pub fn censored_moment_by_quadrature(a: f64, b: f64, theta: f64, sigma: f64) -> f64 {
    let f = |y: f64| y * normal_density(y, theta, sigma);
    let lo = (a.min(theta)) - 14.0 * sigma;
    let hi = (b.max(theta)) + 14.0 * sigma;
    adaptive_simpson(&f, lo, a, 1e-13) + adaptive_simpson(&f, b, hi, 1e-13)
}

/// Quadrature oracle for the LRB-scheduled relative entropy: the continuous
/// part `integral over U of p0 ln(p0/p1)` plus the discrete censoring atom
/// `P0{gamma=0} ln(P0{gamma=0}/P1{gamma=0})`, every piece evaluated by
/// quadrature over locally defined densities.
pub fn lrb_kl_by_quadrature(pair: &HypothesisPair, sched: &LrbScheduler) -> f64 {
    let sigma = pair.sigma();
    let (t0, t1) = (pair.theta0(), pair.theta1());
    let (a, b) = (sched.lower(), sched.upper());
    let integrand = |y: f64| {
        let p0 = normal_density(y, t0, sigma);
        let p1 = normal_density(y, t1, sigma);
        p0 * (p0.ln() - p1.ln())
    };
    let lo = a.min(t0) - 14.0 * sigma;
    let hi = b.max(t0) + 14.0 * sigma;
    let continuous =
        adaptive_simpson(&integrand, lo, a, 1e-13) + adaptive_simpson(&integrand, b, hi, 1e-13);
    continuous + censoring_atom_by_quadrature(pair, sched)
}

/// The censoring atom alone; vanishes for symmetric thresholds.
pub fn censoring_atom_by_quadrature(pair: &HypothesisPair, sched: &LrbScheduler) -> f64 {
    let sigma = pair.sigma();
    let (a, b) = (sched.lower(), sched.upper());
    if a >= b {
        return 0.0;
    }
    let mass0 = adaptive_simpson(&|y| normal_density(y, pair.theta0(), sigma), a, b, 1e-14);
    let mass1 = adaptive_simpson(&|y| normal_density(y, pair.theta1(), sigma), a, b, 1e-14);
    if mass0 <= 0.0 || mass1 <= 0.0 {
        return 0.0;
    }
    mass0 * (mass0.ln() - mass1.ln())
}

/// A hypothesis pair with moderate magnitudes, drawn from `rng`.
pub fn random_pair(rng: &mut RngStream) -> HypothesisPair {
    let theta0 = -3.0 + 5.0 * rng.uniform();
    let gap = 0.2 + 2.8 * rng.uniform();
    let sigma = 0.2 + 2.3 * rng.uniform();
    HypothesisPair::new(theta0, theta0 + gap, sigma * sigma).unwrap()
}

/// A symmetric scheduler for `pair` with half-width up to three sigma.
pub fn random_scheduler(rng: &mut RngStream, pair: &HypothesisPair) -> LrbScheduler {
    let t = 3.0 * pair.sigma() * rng.uniform();
    LrbScheduler::from_half_width(t, pair).unwrap()
}
