//! Frequency grids that resolve high-Q resonances.

use crate::error::{Error, Result};

/// Points required inside ±`COVERAGE_HALF_WIDTH` linewidths of each resonance.
pub const MIN_POINTS_PER_RESONANCE: usize = 64;
pub const COVERAGE_HALF_WIDTH: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    pub omega: f64,
    /// Damping rate γ (rad/s).
    pub linewidth: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub resonances: Vec<Resonance>,
    /// Cavity linewidth; caps the default span at κ/10.
    pub kappa: Option<f64>,
    /// Explicit (lo, hi); default [Ω_min/10³, min(10³·Ω_max, κ/10)].
    pub span: Option<(f64, f64)>,
    pub points_per_decade: usize,
    /// Uniform spacing near a resonance, in linewidths.
    pub core_spacing: f64,
}

impl GridSpec {
    pub fn new(resonances: Vec<Resonance>, kappa: Option<f64>) -> Self {
        Self {
            resonances,
            kappa,
            span: None,
            points_per_decade: 50,
            core_spacing: 0.125,
        }
    }

    pub fn default_span(&self) -> Result<(f64, f64)> {
        let lo = self.resonances.iter().map(|r| r.omega).fold(f64::INFINITY, f64::min);
        let hi = self.resonances.iter().map(|r| r.omega).fold(0.0, f64::max);
        if !lo.is_finite() {
            return Err(Error::GridRejected("no resonances to derive a default span from".into()));
        }
        let mut top = 1e3 * hi;
        if let Some(k) = self.kappa {
            top = top.min(k / 10.0);
        }
        Ok((lo / 1e3, top))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    points: Vec<f64>,
    resonances: Vec<Resonance>,
}

impl FrequencyGrid {
    /// Grid from arbitrary points; checked against the declared resonances.
    pub fn from_points(points: Vec<f64>, resonances: Vec<Resonance>) -> Result<Self> {
        let grid = Self { points, resonances };
        grid.validate()?;
        Ok(grid)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn resonances(&self) -> &[Resonance] {
        &self.resonances
    }

    pub fn span(&self) -> (f64, f64) {
        (self.points[0], self.points[self.points.len() - 1])
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of grid points within ±10 linewidths of `r`.
    pub fn points_near(&self, r: &Resonance) -> usize {
        let lo = r.omega - COVERAGE_HALF_WIDTH * r.linewidth;
        let hi = r.omega + COVERAGE_HALF_WIDTH * r.linewidth;
        self.points.iter().filter(|&&w| w >= lo && w <= hi).count()
    }

    /// Smallest spacing between neighbours inside ±10 linewidths of `r`.
    pub fn finest_spacing_near(&self, r: &Resonance) -> Option<f64> {
        let lo = r.omega - COVERAGE_HALF_WIDTH * r.linewidth;
        let hi = r.omega + COVERAGE_HALF_WIDTH * r.linewidth;
        self.points
            .windows(2)
            .filter(|w| w[0] >= lo && w[1] <= hi)
            .map(|w| w[1] - w[0])
            .min_by(f64::total_cmp)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.len() < 2 {
            return Err(Error::GridRejected("fewer than two points".into()));
        }
        if self.points.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::GridRejected("points must be finite and ≥ 0".into()));
        }
        if let Some(w) = self.points.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::GridRejected(format!("not strictly increasing at {} → {}", w[0], w[1])));
        }
        let (lo, hi) = self.span();
        for r in &self.resonances {
            if r.omega < lo || r.omega > hi {
                return Err(Error::GridRejected(format!(
                    "resonance {} rad/s lies outside the span [{lo}, {hi}]",
                    r.omega
                )));
            }
            let n = self.points_near(r);
            if n < MIN_POINTS_PER_RESONANCE {
                return Err(Error::GridRejected(format!(
                    "resonance {} rad/s is covered by {n} points within ±{COVERAGE_HALF_WIDTH} linewidths, need {MIN_POINTS_PER_RESONANCE}",
                    r.omega
                )));
            }
        }
        Ok(())
    }
}

/// Log-spaced backbone plus, around each resonance, a uniform core of
/// spacing `core_spacing`·γ over ±10γ and geometric shells doubling in width
/// outward until they merge with the backbone.
pub fn resonance_refined_grid(spec: &GridSpec) -> Result<FrequencyGrid> {
    let (lo, hi) = match spec.span {
        Some(s) => s,
        None => spec.default_span()?,
    };
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::GridRejected(format!("invalid span [{lo}, {hi}]")));
    }
    if spec.points_per_decade < 2 {
        return Err(Error::GridRejected("need at least 2 points per decade".into()));
    }
    if !(spec.core_spacing > 0.0 && spec.core_spacing <= 20.0 / MIN_POINTS_PER_RESONANCE as f64) {
        return Err(Error::GridRejected(format!(
            "core spacing {} linewidths cannot give {MIN_POINTS_PER_RESONANCE} points in ±{COVERAGE_HALF_WIDTH}",
            spec.core_spacing
        )));
    }
    for r in &spec.resonances {
        if !(r.omega > lo && r.omega < hi) {
            return Err(Error::GridRejected(format!(
                "span [{lo}, {hi}] excludes the resonance at {} rad/s",
                r.omega
            )));
        }
        if !(r.linewidth > 0.0) {
            return Err(Error::GridRejected("resonance linewidth must be > 0".into()));
        }
    }

    let decades = (hi / lo).log10();
    let n = (decades * spec.points_per_decade as f64).ceil().max(1.0) as usize;
    let mut points: Vec<f64> = (0..=n).map(|i| lo * (hi / lo).powf(i as f64 / n as f64)).collect();
    points[n] = hi;

    let log_step = (hi / lo).ln() / n as f64;
    for r in &spec.resonances {
        let step = spec.core_spacing * r.linewidth;
        let half = (COVERAGE_HALF_WIDTH / spec.core_spacing).round() as i64;
        for i in -half..=half {
            points.push(r.omega + i as f64 * step);
        }
        // shells [d, 2d] with 8 points each, until the local spacing reaches the backbone's
        let mut d = COVERAGE_HALF_WIDTH * r.linewidth;
        while d / 8.0 < r.omega * log_step && d < r.omega {
            for j in 1..=8 {
                let off = d * (1.0 + j as f64 / 8.0);
                points.push(r.omega + off);
                points.push(r.omega - off);
            }
            d *= 2.0;
        }
    }
    points.retain(|w| *w >= lo && *w <= hi);
    points.sort_by(f64::total_cmp);
    points.dedup_by(|a, b| (*a - *b).abs() <= 4.0 * f64::EPSILON * b.abs());
    FrequencyGrid::from_points(points, spec.resonances.clone())
}
