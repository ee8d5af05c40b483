//! Scalar root bracketing and bounded maximization.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Result of a bounded 1-D maximization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub fx: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `tol`. The best point seen,
/// including the two endpoints, is returned, so boundary maxima are found.
pub fn golden_section_max<F>(mut f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Maximum
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut best = (a, f(a));
    let fb = f(b);
    if fb > best.1 {
        best = (b, fb);
    }
    let mut evaluations = 2;

    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    evaluations += 2;

    let mut converged = false;
    for _ in 0..max_iter {
        if b - a <= tol {
            converged = true;
            break;
        }
        if fc >= fd {
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
        evaluations += 1;
    }
    if !converged && b - a <= tol {
        converged = true;
    }
    for (x, fx) in [(c, fc), (d, fd)] {
        if fx > best.1 {
            best = (x, fx);
        }
    }
    Maximum {
        x: best.0,
        fx: best.1,
        evaluations,
        converged,
    }
}

/// Locates the boundary of a predicate that holds at `lo` and fails at `hi`.
///
/// Returns the final `(inside, outside)` pair, `|inside − outside| ≤ tol`.
/// `lo` may be larger than `hi`.
pub fn bisect_boundary<F>(
    mut holds: F,
    lo: f64,
    hi: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> bool,
{
    let (mut inside, mut outside) = (lo, hi);
    for _ in 0..max_iter {
        if (outside - inside).abs() <= tol {
            return Ok((inside, outside));
        }
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            return Ok((inside, outside));
        }
        if holds(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    if (outside - inside).abs() <= tol {
        Ok((inside, outside))
    } else {
        Err(Error::NoConvergence {
            what: "bisection",
            iterations: max_iter,
        })
    }
}

/// Root of a continuous `f` with a sign change on `[lo, hi]`, to absolute `tol`.
pub fn bisect_root<F>(mut f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::NoBracket {
            what: "root",
            lo,
            hi,
        });
    }
    let positive_at_lo = flo > 0.0;
    let (a, b) = bisect_boundary(|x| (f(x) > 0.0) == positive_at_lo, lo, hi, tol, max_iter)?;
    Ok(0.5 * (a + b))
}

/// `n` equally spaced points on `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| if i + 1 == n && n > 1 { hi } else { lo + step * i as f64 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_interior_max() {
        let m = golden_section_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-10, 200);
        assert!(m.converged);
        assert!((m.x - 0.3).abs() < 1e-9);
    }

    #[test]
    fn golden_finds_boundary_max() {
        let m = golden_section_max(|x| x, 0.0, 1.0, 1e-10, 200);
        assert!(m.x > 1.0 - 1e-9);
        let m = golden_section_max(|x| -x, 0.0, 1.0, 1e-10, 200);
        assert_eq!(m.x, 0.0);
    }

    #[test]
    fn golden_reports_non_convergence() {
        let m = golden_section_max(|x| -x * x, -1.0, 1.0, 1e-12, 5);
        assert!(!m.converged);
    }

    #[test]
    fn bisect_root_sqrt2() {
        let r = bisect_root(|x| x * x - 2.0, 0.0, 2.0, 1e-14, 200).unwrap();
        assert!((r - core::f64::consts::SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn bisect_root_needs_bracket() {
        assert!(matches!(
            bisect_root(|x| x * x + 1.0, -1.0, 1.0, 1e-10, 100),
            Err(Error::NoBracket { .. })
        ));
    }

    #[test]
    fn boundary_descending_bracket() {
        let (inside, outside) = bisect_boundary(|x| x > 0.25, 1.0, 0.0, 1e-12, 100).unwrap();
        assert!(inside >= 0.25 && outside <= 0.25 + 1e-12);
    }

    #[test]
    fn linspace_hits_endpoints() {
        let v: alloc::vec::Vec<f64> = linspace(0.0, 1.0, 5).collect();
        assert_eq!(v, [0.0, 0.25, 0.5, 0.75, 1.0]);
    }
}
