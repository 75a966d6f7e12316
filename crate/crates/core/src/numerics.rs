//! Small scalar optimizers shared by the angle and power searches.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the minimum of a unimodal `f` on `[a, b]`.
///
/// Stops once the bracket is narrower than `tol` (absolute, in `x`).
/// Returns `(x_min, f(x_min))`.
pub fn golden_section_min<F>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iters = 0;
    while (b - a) > tol && iters < 500 {
        if fc < fd {
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
        iters += 1;
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // the midpoint can lose to an interior probe on a flat bottom
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .min_by(|l, r| l.1.total_cmp(&r.1))
        .unwrap()
}

/// Dense scan followed by golden-section polishing around the best sample.
pub fn scan_then_refine<F>(mut f: F, a: f64, b: f64, samples: usize, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let n = samples.max(3);
    let step = (b - a) / (n - 1) as f64;
    let mut best = (a, f(a));
    for i in 1..n {
        let x = a + step * i as f64;
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    let lo = (best.0 - step).max(a);
    let hi = (best.0 + step).min(b);
    let refined = golden_section_min(&mut f, lo, hi, tol);
    if refined.1 <= best.1 {
        refined
    } else {
        best
    }
}
