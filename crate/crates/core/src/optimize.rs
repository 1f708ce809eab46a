//! Derivative-free minimizers on boxes.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `tol`. The endpoints are also compared so that a
/// minimum sitting on the boundary of the interval is returned exactly.
pub(crate) fn golden_section(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let f_lo = f(lo);
    let f_hi = f(hi);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if f_lo < best.1 {
        best = (a.min(b), f_lo);
    }
    if f_hi < best.1 {
        best = (a.max(b), f_hi);
    }
    best
}

/// Box bounds and tolerances for [`coordinate_descent`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct DescentBox {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
    /// Convergence once every coordinate moves less than this in a sweep.
    pub tol: f64,
    pub max_sweeps: usize,
}

/// Coordinate-wise golden-section descent from `start`.
///
/// Each sweep minimizes along one coordinate at a time inside a window
/// around the current point. A move that lands on the window edge doubles the
/// window; otherwise the window shrinks to a few times the last move. After
/// each sweep an extrapolating line search along the sweep displacement
/// speeds up progress along curved valleys.
pub(crate) fn coordinate_descent(
    f: impl Fn(f64, f64) -> f64,
    bounds: &DescentBox,
    start: [f64; 2],
    width: [f64; 2],
) -> ([f64; 2], f64) {
    let mut x = [
        start[0].clamp(bounds.lo[0], bounds.hi[0]),
        start[1].clamp(bounds.lo[1], bounds.hi[1]),
    ];
    let mut fx = f(x[0], x[1]);
    let mut w = width;
    let min_width = bounds.tol * 4.0;
    let line_tol = bounds.tol * 0.25;

    for _ in 0..bounds.max_sweeps {
        let before = x;
        let mut max_step = 0.0f64;
        let mut edge_limited = false;
        for c in 0..2 {
            let a = (x[c] - w[c]).max(bounds.lo[c]);
            let b = (x[c] + w[c]).min(bounds.hi[c]);
            let (xc, fc) = golden_section(
                |v| {
                    let mut y = x;
                    y[c] = v;
                    f(y[0], y[1])
                },
                a,
                b,
                line_tol,
            );
            let step = if fc < fx { (xc - x[c]).abs() } else { 0.0 };
            if fc < fx {
                x[c] = xc;
                fx = fc;
            }
            let hit_window = (xc - a).abs() <= line_tol && a > bounds.lo[c]
                || (xc - b).abs() <= line_tol && b < bounds.hi[c];
            if hit_window {
                w[c] *= 2.0;
                edge_limited = true;
            } else {
                w[c] = (4.0 * step).max(min_width);
            }
            max_step = max_step.max(step);
        }

        let d = [x[0] - before[0], x[1] - before[1]];
        if d[0] != 0.0 && d[1] != 0.0 {
            // Largest extrapolation factor keeping the point inside the box.
            let mut t_max = 8.0f64;
            for c in 0..2 {
                let limit = if d[c] > 0.0 { (bounds.hi[c] - x[c]) / d[c] } else { (bounds.lo[c] - x[c]) / d[c] };
                t_max = t_max.min(limit);
            }
            if t_max > 0.0 {
                let scale = d[0].abs().max(d[1].abs());
                let (t, ft) = golden_section(|t| f(x[0] + t * d[0], x[1] + t * d[1]), 0.0, t_max, line_tol / scale);
                if ft < fx {
                    x = [
                        (x[0] + t * d[0]).clamp(bounds.lo[0], bounds.hi[0]),
                        (x[1] + t * d[1]).clamp(bounds.lo[1], bounds.hi[1]),
                    ];
                    fx = f(x[0], x[1]);
                    max_step = max_step.max(t * scale);
                }
            }
        }

        if max_step < bounds.tol && !edge_limited {
            break;
        }
    }
    (x, fx)
}
