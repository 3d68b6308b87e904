//! Golden-section search for unimodal scalar functions.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ScalarMin {
    pub x: f64,
    pub fx: f64,
    pub evaluations: usize,
}

/// Minimizes `f` on `[lo, hi]` until the bracket is narrower than
/// `tol(x)` (re-evaluated at the current best point). The endpoints are
/// evaluated too, so a minimizer sitting on the boundary is found exactly.
pub(crate) fn golden_section(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: impl Fn(f64) -> f64,
    max_evaluations: usize,
) -> ScalarMin {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let fa = f(a);
    let fb = f(b);
    let mut best = if fa <= fb { (a, fa) } else { (b, fb) };
    let mut evaluations = 2;
    if b - a <= tol(best.0) {
        return ScalarMin { x: best.0, fx: best.1, evaluations };
    }

    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    evaluations += 2;
    while b - a > tol(best.0) && evaluations < max_evaluations {
        if fc <= fd {
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
        for (x, fx) in [(c, fc), (d, fd)] {
            if fx < best.1 {
                best = (x, fx);
            }
        }
    }
    ScalarMin { x: best.0, fx: best.1, evaluations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_vertex() {
        let r = golden_section(|x| (x - 0.3).powi(2) + 1.0, -2.0, 5.0, |_| 1e-12, 10_000);
        assert!((r.x - 0.3).abs() < 1e-6);
        assert!((r.fx - 1.0).abs() < 1e-12);
    }

    #[test]
    fn finds_kink_and_boundary() {
        let r = golden_section(|x| (x - 1.0 / 3.0).abs(), 0.0, 1.0, |_| 1e-13, 10_000);
        assert!((r.x - 1.0 / 3.0).abs() < 1e-12);
        let r = golden_section(|x| x, 0.0, 1.0, |_| 1e-13, 10_000);
        assert_eq!(r.x, 0.0);
    }
}
