//! Globally adaptive Gauss–Kronrod (7/15) quadrature over a set of breakpoints.

use rayon::prelude::*;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Target relative error of the whole integral.
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            abs_tol: 0.0,
            max_intervals: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Σ|K15 − G7| over the final intervals.
    pub error_estimate: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gauss_kronrod<F>(f: &F, a: f64, b: f64) -> Result<Segment>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &wk)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod += wk * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok(Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    })
}

/// ∫ f over [breakpoints[0], breakpoints[n−1]].
///
/// Each breakpoint interval starts as one GK15 panel; the panels with the
/// largest error are bisected in deterministic batches until the summed
/// error estimate meets the tolerance. The result does not depend on the
/// number of threads.
pub fn integrate_adaptive<F>(f: F, breakpoints: &[f64], opts: &QuadratureOptions) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if breakpoints.len() < 2 {
        return Err(Error::GridRejected("need at least two breakpoints".into()));
    }
    if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::GridRejected("breakpoints must be strictly increasing".into()));
    }
    let mut segments: Vec<Segment> = breakpoints
        .par_windows(2)
        .map(|w| gauss_kronrod(&f, w[0], w[1]))
        .collect::<Result<_>>()?;
    let mut evaluations = 15 * segments.len();
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if error <= (opts.rel_tol * value.abs()).max(opts.abs_tol) {
            segments.sort_by(|l, r| l.a.total_cmp(&r.a));
            return Ok(QuadratureResult {
                value: segments.iter().map(|s| s.value).sum(),
                error_estimate: error,
                intervals: segments.len(),
                evaluations,
            });
        }
        if segments.len() >= opts.max_intervals {
            return Err(Error::NonConvergence {
                estimate: value,
                error,
                tolerance: opts.rel_tol,
                intervals: segments.len(),
            });
        }
        segments.sort_by(|l, r| r.error.total_cmp(&l.error).then(l.a.total_cmp(&r.a)));
        let batch = (segments.len() / 20)
            .clamp(1, 256)
            .min(opts.max_intervals - segments.len());
        let worst: Vec<Segment> = segments.drain(..batch).collect();
        let halves: Vec<Segment> = worst
            .par_iter()
            .flat_map_iter(|s| {
                let mid = 0.5 * (s.a + s.b);
                [gauss_kronrod(&f, s.a, mid), gauss_kronrod(&f, mid, s.b)]
            })
            .collect::<Result<_>>()?;
        evaluations += 15 * halves.len();
        segments.extend(halves);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate_adaptive(|x| Ok(x.powi(9) - 3.0 * x * x), &[0.0, 2.0], &Default::default()).unwrap();
        assert!((r.value - (1024.0 / 10.0 - 8.0)).abs() < 1e-12);
        assert_eq!(r.intervals, 1);
    }

    #[test]
    fn narrow_lorentzian() {
        // ∫ g/((x−1)² + g²) over [0, 2] = 2·atan(1/g)
        let g = 1e-7;
        let f = |x: f64| Ok(g / ((x - 1.0) * (x - 1.0) + g * g));
        let breaks = [0.0, 1.0 - 10.0 * g, 1.0, 1.0 + 10.0 * g, 2.0];
        let r = integrate_adaptive(f, &breaks, &QuadratureOptions { rel_tol: 1e-10, ..Default::default() }).unwrap();
        let exact = 2.0 * (1.0 / g).atan();
        assert!((r.value / exact - 1.0).abs() < 1e-8, "{}", r.value);
    }

    #[test]
    fn reports_non_convergence() {
        let opts = QuadratureOptions {
            rel_tol: 1e-12,
            abs_tol: 0.0,
            max_intervals: 8,
        };
        let err = integrate_adaptive(|x: f64| Ok(x.abs().sqrt().recip()), &[-1.0, 0.3], &opts).unwrap_err();
        assert!(err.is_numerical());
    }

    #[test]
    fn propagates_integrand_errors() {
        let err = integrate_adaptive(
            |x| if x > 0.5 { Err(Error::NonPositiveNoise { omega: x, value: 0.0 }) } else { Ok(1.0) },
            &[0.0, 1.0],
            &Default::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonPositiveNoise { .. }));
    }

    #[test]
    fn rejects_bad_breakpoints() {
        assert!(integrate_adaptive(|_| Ok(1.0), &[0.0, 0.0], &Default::default()).is_err());
        assert!(integrate_adaptive(|_| Ok(1.0), &[1.0], &Default::default()).is_err());
    }
}
