// SPDX-License-Identifier: Apache-2.0

//! Adaptive Simpson quadrature.

/// Integrate `f` over `[a, b]` with adaptive Simpson refinement until the
/// standard Richardson error estimate `|S_fine - S_coarse| / 15` drops below
/// `rel_tol * |integral|` (with a small absolute floor to terminate on
/// integrals that are themselves zero).
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    // Seed the recursion with a modest uniform split so that oscillatory
    // integrands cannot fool the first error estimate.
    const SEED_PANELS: usize = 16;
    let h = (b - a) / SEED_PANELS as f64;
    let mut total = 0.0;
    // Scale the absolute floor by a crude magnitude estimate of the integral.
    let scale: f64 = (0..=SEED_PANELS)
        .map(|i| f(a + i as f64 * h).abs())
        .fold(0.0, f64::max)
        * (b - a).abs();
    let abs_floor = scale.max(1e-300) * 1e-15;
    for i in 0..SEED_PANELS {
        let x0 = a + i as f64 * h;
        let x1 = x0 + h;
        let xm = 0.5 * (x0 + x1);
        let (f0, fm, f1) = (f(x0), f(xm), f(x1));
        let whole = simpson(f0, fm, f1, h);
        total += adapt(f, x0, x1, f0, fm, f1, whole, rel_tol, abs_floor, 50);
    }
    total
}

fn simpson(f0: f64, fm: f64, f1: f64, h: f64) -> f64 {
    h / 6.0 * (f0 + 4.0 * fm + f1)
}

#[allow(clippy::too_many_arguments)]
fn adapt(
    f: &dyn Fn(f64) -> f64,
    x0: f64,
    x1: f64,
    f0: f64,
    fm: f64,
    f1: f64,
    whole: f64,
    rel_tol: f64,
    abs_floor: f64,
    depth: usize,
) -> f64 {
    let xm = 0.5 * (x0 + x1);
    let xl = 0.5 * (x0 + xm);
    let xr = 0.5 * (xm + x1);
    let (fl, fr) = (f(xl), f(xr));
    let h = xm - x0;
    let left = simpson(f0, fl, fm, h);
    let right = simpson(fm, fr, f1, h);
    let refined = left + right;
    let err = (refined - whole) / 15.0;
    let tol = (rel_tol * refined.abs()).max(abs_floor);
    if depth == 0 || err.abs() <= tol {
        return refined + err; // Richardson extrapolation
    }
    adapt(f, x0, xm, f0, fl, fm, left, rel_tol, abs_floor, depth - 1)
        + adapt(f, xm, x1, fm, fr, f1, right, rel_tol, abs_floor, depth - 1)
}
