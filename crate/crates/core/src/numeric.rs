//! Root finding and adaptive quadrature used by the analytic pipeline.

use crate::error::{Error, Result};

/// Absolute tolerance for bisection roots.
pub const ROOT_TOL: f64 = 1e-9;
/// Relative tolerance for adaptive quadrature.
pub const QUAD_REL_TOL: f64 = 1e-8;

/// Find the root of a monotone increasing function by bisection, expanding the
/// initial bracket geometrically until it straddles zero.
pub fn bisect_increasing<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let mut flo = f(lo);
    let mut fhi = f(hi);
    let mut span = (hi - lo).max(1.0);
    for _ in 0..200 {
        if flo <= 0.0 && fhi >= 0.0 {
            break;
        }
        if flo > 0.0 {
            lo -= span;
            flo = f(lo);
        }
        if fhi < 0.0 {
            hi += span;
            fhi = f(hi);
        }
        span *= 2.0;
    }
    if !(flo <= 0.0 && fhi >= 0.0) {
        return Err(Error::Divergence(format!(
            "bisection bracket not found: f({lo}) = {flo}, f({hi}) = {fhi}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo < ROOT_TOL {
            return Ok(mid);
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (symmetric; only the
// non-negative abscissae are tabulated).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (i, &x) in XGK.iter().enumerate().take(7) {
        let fs = f(c - h * x) + f(c + h * x);
        kronrod += WGK[i] * fs;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fs;
        }
    }
    (kronrod * h, (kronrod - gauss).abs() * h)
}

/// Adaptive Gauss-Kronrod integration of `f` over the finite interval [a, b].
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    // (interval, estimate, error) worklist; split the worst interval until the
    // summed error clears the tolerance. The absolute floor keeps integrals
    // with heavy cancellation (totals near zero) from spinning forever.
    let (est, err) = gk15(&f, a, b);
    let mut segments = vec![(a, b, est, err)];
    let mut total = est;
    let mut total_err = err;
    for _ in 0..4_000 {
        total = segments.iter().map(|s| s.2).sum();
        total_err = segments.iter().map(|s| s.3).sum();
        if total_err <= (QUAD_REL_TOL * total.abs()).max(1e-12) {
            return Ok(total);
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .3.total_cmp(&b.1 .3))
            .map(|(i, _)| i)
            .expect("non-empty");
        let (lo, hi, _, _) = segments.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // Interval at floating-point resolution; accept its estimate.
            let (e, _) = gk15(&f, lo, hi);
            segments.push((lo, hi, e, 0.0));
            continue;
        }
        let (e1, r1) = gk15(&f, lo, mid);
        let (e2, r2) = gk15(&f, mid, hi);
        segments.push((lo, mid, e1, r1));
        segments.push((mid, hi, e2, r2));
    }
    if total_err <= 1e-7 * total.abs().max(1.0) {
        return Ok(total);
    }
    Err(Error::Divergence("adaptive quadrature did not converge".into()))
}

/// Integrate `f(q)` for q in [theta, +inf) via the compactifying substitution
/// q = theta + u / (1 - u).
pub fn integrate_upper_tail<F: Fn(f64) -> f64>(f: F, theta: f64) -> Result<f64> {
    integrate(
        |u| {
            let om = 1.0 - u;
            if om <= 0.0 {
                return 0.0;
            }
            let q = theta + u / om;
            let v = f(q) / (om * om);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
    )
}

/// Integrate `f(q)` for q in (-inf, theta] by mirroring the upper-tail rule.
pub fn integrate_lower_tail<F: Fn(f64) -> f64>(f: F, theta: f64) -> Result<f64> {
    integrate_upper_tail(|q| f(2.0 * theta - q), theta)
}

/// Integrate `f(q)` over the whole line.
pub fn integrate_line<F: Fn(f64) -> f64 + Copy>(f: F, center: f64) -> Result<f64> {
    Ok(integrate_lower_tail(f, center)? + integrate_upper_tail(f, center)?)
}

/// Upper-tail integral against a Cauchy(x0, gamma) weight:
/// integrates w(q) * g(q) for q in [theta, inf), where w is the Cauchy density.
/// The substitution q = x0 + gamma * tan(u) makes the weight constant, which
/// keeps heavy tails well-behaved.
pub fn integrate_cauchy_tail<G: Fn(f64) -> f64>(
    g: G,
    x0: f64,
    gamma: f64,
    theta: f64,
) -> Result<f64> {
    let lo = ((theta - x0) / gamma).atan();
    integrate(
        |u| g(x0 + gamma * u.tan()) / std::f64::consts::PI,
        lo,
        std::f64::consts::FRAC_PI_2,
    )
}
