//! One-dimensional minimisers shared by the exponent and design solvers.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search on `[lo, hi]`; returns the best point seen.
///
/// Stops once the bracket is narrower than `tol`. Ties keep the smaller
/// abscissa.
pub(crate) fn golden_section<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (lo, hi);
    let mut best = pick((lo, f(lo)), (hi, f(hi)));
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    best = pick(best, pick((x1, f1), (x2, f2)));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
            best = pick(best, (x1, f1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
            best = pick(best, (x2, f2));
        }
    }
    best
}

/// Evaluates `f` on `grid` (ascending), then refines the `cells` best grid
/// points by golden-section search over their neighbouring cells.
///
/// Non-finite values count as `+inf`. Ties resolve to the smallest abscissa.
pub(crate) fn grid_then_golden<F: Fn(f64) -> f64>(
    f: &F,
    grid: &[f64],
    cells: usize,
    tol: f64,
) -> (f64, f64) {
    assert!(grid.len() >= 2, "grid needs at least two points");
    let g = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let values: Vec<f64> = grid.iter().map(|&x| g(x)).collect();
    let mut order: Vec<usize> = (0..grid.len()).collect();
    // stable sort keeps ascending index among equal values
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));

    let mut best = (grid[order[0]], values[order[0]]);
    for &k in order.iter().take(cells.max(1)) {
        if !values[k].is_finite() {
            continue;
        }
        let lo = grid[k.saturating_sub(1)];
        let hi = grid[(k + 1).min(grid.len() - 1)];
        best = pick(best, golden_section(&g, lo, hi, tol));
    }
    best
}

fn pick(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    if b.1 < a.1 || (b.1 == a.1 && b.0 < a.0) {
        b
    } else {
        a
    }
}

pub(crate) fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let last = (points - 1) as f64;
    (0..points)
        .map(|k| if k + 1 == points { hi } else { lo + (hi - lo) * k as f64 / last })
        .collect()
}

pub(crate) fn logspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (llo, lhi) = (lo.ln(), hi.ln());
    let last = (points - 1) as f64;
    (0..points)
        .map(|k| if k == 0 { lo } else if k + 1 == points { hi } else { (llo + (lhi - llo) * k as f64 / last).exp() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_section(&|x: f64| (x - 0.3).powi(2), 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-8);
        assert!(fx < 1e-15);
    }

    #[test]
    fn grid_refinement_handles_boundary_minimum() {
        let grid = linspace(0.0, 1.0, 11);
        let (x, _) = grid_then_golden(&|x: f64| x, &grid, 1, 1e-12);
        assert_eq!(x, 0.0);
    }

    #[test]
    fn grid_ignores_nan_and_inf() {
        let grid = linspace(0.0, 1.0, 101);
        let f = |x: f64| if x < 0.5 { f64::NAN } else { (x - 0.7).abs() };
        let (x, _) = grid_then_golden(&f, &grid, 3, 1e-12);
        assert!((x - 0.7).abs() < 1e-9);
    }

    #[test]
    fn spacing_endpoints_are_exact() {
        let l = logspace(1e-4, 1.0 - 1e-4, 1024);
        assert_eq!(l[0], 1e-4);
        assert_eq!(l[1023], 1.0 - 1e-4);
        assert!(l.windows(2).all(|w| w[0] < w[1]));
    }
}
