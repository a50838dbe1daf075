//! Adaptive Simpson quadrature with tolerance-driven refinement.

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt(
    f: &mut impl FnMut(f64) -> f64,
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
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let err = left + right - whole;
    if depth == 0 || err.abs() <= 15.0 * tol {
        // Richardson extrapolation of the two half-interval estimates.
        left + right + err / 15.0
    } else {
        adapt(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1)
            + adapt(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1)
    }
}

/// ∫_a^b f, refined until the local Simpson error estimate is below `tol`.
pub fn adaptive_simpson(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    adapt(&mut f, a, b, fa, fm, fb, whole, tol.max(1e-15), 48)
}

/// Cumulative integral table of a positive integrand: returns nodes
/// (x_i, ∫_a^{x_i} f) on a partition refined so each cell meets its share
/// of `tol`. At least `min_cells` cells are used.
pub fn cumulative_table(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    min_cells: usize,
) -> Vec<(f64, f64)> {
    let n = min_cells.max(4);
    let h = (b - a) / n as f64;
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push((a, 0.0));
    for i in 0..n {
        let x0 = a + i as f64 * h;
        let x1 = if i == n - 1 { b } else { x0 + h };
        acc += adaptive_simpson(&mut f, x0, x1, tol / n as f64);
        out.push((x1, acc));
    }
    out
}
