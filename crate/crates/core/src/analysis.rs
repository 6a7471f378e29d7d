//! Parameter sweeps, branch-crossing detection and the Bell-diagonal
//! boundary classification.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::correlations::{lqfi_thermal, lqu_thermal, thermal_correlations, ActiveBranch, BranchPair, Measure};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::xmodel::XStateParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepVariable {
    T,
    B1,
    B2,
    R1,
    R2,
    Jz,
}

impl SweepVariable {
    pub const ALL: [SweepVariable; 6] =
        [SweepVariable::T, SweepVariable::B1, SweepVariable::B2, SweepVariable::R1, SweepVariable::R2, SweepVariable::Jz];

    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::T => "T",
            SweepVariable::B1 => "B1",
            SweepVariable::B2 => "B2",
            SweepVariable::R1 => "r1",
            SweepVariable::R2 => "r2",
            SweepVariable::Jz => "Jz",
        }
    }

    /// Copy of `base` with this variable set to `value`.
    pub fn apply<T: Real>(self, base: &XStateParams<T>, value: T) -> XStateParams<T> {
        let mut p = *base;
        match self {
            SweepVariable::T => p.t = value,
            SweepVariable::B1 => p.b1 = value,
            SweepVariable::B2 => p.b2 = value,
            SweepVariable::R1 => p.r1 = value,
            SweepVariable::R2 => p.r2 = value,
            SweepVariable::Jz => p.jz = value,
        }
        p
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepVariable::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidSweep(format!("unknown sweep variable `{s}`")))
    }
}

/// A uniform grid over one parameter, all others held at `base`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec<T> {
    pub base: XStateParams<T>,
    pub variable: SweepVariable,
    pub from: T,
    pub to: T,
    pub points: usize,
}

pub const DEFAULT_TRANSITION_POINTS: usize = 1000;

impl<T: Real> SweepSpec<T> {
    pub fn new(base: XStateParams<T>, variable: SweepVariable, from: T, to: T, points: usize) -> Result<Self> {
        let spec = Self { base, variable, from, to, points };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.from.is_finite() && self.to.is_finite()) {
            return Err(Error::InvalidSweep("range endpoints must be finite".into()));
        }
        if !(self.from < self.to) {
            return Err(Error::InvalidSweep(format!("empty range [{}, {}]", self.from, self.to)));
        }
        if self.points < 2 {
            return Err(Error::InvalidSweep(format!("need at least 2 points, got {}", self.points)));
        }
        match self.variable {
            SweepVariable::T if self.from <= T::zero() => {
                Err(Error::InvalidSweep("temperature range must start above zero".into()))
            }
            SweepVariable::R1 | SweepVariable::R2 if self.from < T::zero() => {
                Err(Error::InvalidSweep(format!("{} range must be nonnegative", self.variable)))
            }
            _ => self.variable.apply(&self.base, self.from).validate(),
        }
    }

    pub fn with_points(self, points: usize) -> Self {
        Self { points, ..self }
    }

    /// Grid abscissae; the last point is exactly `to`.
    pub fn grid(&self) -> Vec<T> {
        let n = self.points - 1;
        let step = (self.to - self.from) / T::from_usize(n).expect("grid size fits scalar");
        (0..=n)
            .map(|i| if i == n { self.to } else { self.from + step * T::from_usize(i).expect("index fits scalar") })
            .collect()
    }

    pub fn params_at(&self, x: T) -> XStateParams<T> {
        self.variable.apply(&self.base, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow<T> {
    pub x: T,
    pub lqfi: BranchPair<T>,
    pub lqu: BranchPair<T>,
}

/// Evaluates both measures on every grid point, in grid order.
pub fn sweep<T: Real>(spec: &SweepSpec<T>) -> Result<Vec<SweepRow<T>>> {
    spec.validate()?;
    spec.grid()
        .into_par_iter()
        .map(|x| {
            let (lqfi, lqu) = thermal_correlations(&spec.params_at(x))?;
            Ok(SweepRow { x, lqfi, lqu })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionPoint<T> {
    pub measure: Measure,
    pub location: T,
    pub bracket: (T, T),
    /// `|branch0 - branch1|` at `location`.
    pub residual: T,
}

fn branch_gap<T: Real>(spec: &SweepSpec<T>, measure: Measure, x: T) -> Result<T> {
    let p = spec.params_at(x);
    let pair = match measure {
        Measure::Lqfi => lqfi_thermal(&p)?,
        Measure::Lqu => lqu_thermal(&p)?,
    };
    Ok(pair.gap())
}

fn bisect<T: Real>(spec: &SweepSpec<T>, measure: Measure, mut lo: T, mut hi: T, mut g_lo: T) -> Result<TransitionPoint<T>> {
    let scale = T::one().max(lo.abs()).max(hi.abs());
    let width = T::lit(1e-13) * scale;
    let half = T::lit(0.5);
    for _ in 0..200 {
        if hi - lo <= width {
            break;
        }
        let mid = lo + (hi - lo) * half;
        if mid <= lo || mid >= hi {
            break;
        }
        let g = branch_gap(spec, measure, mid)?;
        if g == T::zero() {
            lo = mid;
            hi = mid;
            break;
        }
        if (g > T::zero()) == (g_lo > T::zero()) {
            lo = mid;
            g_lo = g;
        } else {
            hi = mid;
        }
    }
    let location = lo + (hi - lo) * half;
    let residual = branch_gap(spec, measure, location)?.abs();
    Ok(TransitionPoint { measure, location, bracket: (lo, hi), residual })
}

/// Sign changes of `branch0 - branch1` along the grid, refined by bisection.
///
/// Tangential contacts without a sign change are not reported. Results are
/// ordered by location, then by measure.
pub fn find_transitions<T: Real>(spec: &SweepSpec<T>) -> Result<Vec<TransitionPoint<T>>> {
    let rows = sweep(spec)?;
    let mut brackets = Vec::new();
    for measure in [Measure::Lqfi, Measure::Lqu] {
        let gaps: Vec<(T, T)> = rows
            .iter()
            .map(|r| (r.x, if measure == Measure::Lqfi { r.lqfi.gap() } else { r.lqu.gap() }))
            .collect();
        // Track the last nonzero gap so exact zeros on the grid still bracket.
        let mut last: Option<(T, T)> = None;
        for &(x, g) in &gaps {
            if g == T::zero() {
                continue;
            }
            if let Some((xl, gl)) = last {
                if (gl > T::zero()) != (g > T::zero()) {
                    brackets.push((measure, xl, x, gl));
                }
            }
            last = Some((x, g));
        }
    }
    let mut points: Vec<TransitionPoint<T>> = brackets
        .into_par_iter()
        .map(|(m, lo, hi, g_lo)| bisect(spec, m, lo, hi, g_lo))
        .collect::<Result<_>>()?;
    points.sort_by(|a, b| {
        a.location
            .partial_cmp(&b.location)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.measure.cmp(&b.measure))
    });
    Ok(points)
}

/// Position of `(r1, r2)` relative to the line `r1 + r2 = 2|Jz|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryRegion {
    Above,
    Below,
    OnBoundary,
}

pub const BELL_SAMPLE_TEMPERATURES: [f64; 4] = [0.05, 0.5, 5.0, 50.0];

#[derive(Debug, Clone, PartialEq)]
pub struct BellDiagonalReport {
    pub region: BoundaryRegion,
    /// `(T, LQFI label, LQU label)` at each sampled temperature.
    pub samples: Vec<(f64, ActiveBranch, ActiveBranch)>,
}

impl BellDiagonalReport {
    /// The label shared by every decisive sample of one measure.
    ///
    /// Samples tagged [`ActiveBranch::Boundary`] are skipped: deep in the
    /// low-temperature regime both branches saturate at the same value and
    /// their order is no longer resolvable in floating point.
    pub fn decisive(&self, measure: Measure) -> Option<ActiveBranch> {
        let mut labels = self
            .samples
            .iter()
            .map(|&(_, f, u)| if measure == Measure::Lqfi { f } else { u })
            .filter(|&l| l != ActiveBranch::Boundary);
        let first = labels.next()?;
        labels.all(|l| l == first).then_some(first)
    }

    /// True when no two decisive samples of the same measure disagree.
    pub fn is_temperature_independent(&self) -> bool {
        [Measure::Lqfi, Measure::Lqu].into_iter().all(|m| {
            let mut labels = self
                .samples
                .iter()
                .map(|&(_, f, u)| if m == Measure::Lqfi { f } else { u })
                .filter(|&l| l != ActiveBranch::Boundary);
            match labels.next() {
                None => true,
                Some(first) => labels.all(|l| l == first),
            }
        })
    }

    /// Common decisive label of both measures.
    pub fn active(&self) -> Option<ActiveBranch> {
        let f = self.decisive(Measure::Lqfi)?;
        (self.decisive(Measure::Lqu)? == f).then_some(f)
    }
}

/// Classifies a zero-field state against the line `r1 + r2 = 2|Jz|` and
/// samples the active branches at [`BELL_SAMPLE_TEMPERATURES`].
pub fn bell_diagonal_boundary<T: Real>(p: &XStateParams<T>) -> Result<BellDiagonalReport> {
    if p.b1 != T::zero() || p.b2 != T::zero() {
        return Err(Error::NonzeroField(p.b1.as_f64(), p.b2.as_f64()));
    }
    let offset = p.r1 + p.r2 - (p.jz + p.jz).abs();
    let scale = T::one().max(p.r1 + p.r2).max(p.jz.abs());
    let region = if offset.abs() <= T::lit(1e-12) * scale {
        BoundaryRegion::OnBoundary
    } else if offset > T::zero() {
        BoundaryRegion::Above
    } else {
        BoundaryRegion::Below
    };
    let samples = BELL_SAMPLE_TEMPERATURES
        .iter()
        .map(|&t| {
            let (f, u) = thermal_correlations(&p.with_t(T::lit(t)))?;
            Ok((t, f.active, u.active))
        })
        .collect::<Result<_>>()?;
    Ok(BellDiagonalReport { region, samples })
}

/// Mirror image of `(r1, r2)` across `r1 + r2 = 2|Jz|`, if both stay nonnegative.
pub fn reflect_across_boundary<T: Real>(p: &XStateParams<T>) -> Option<XStateParams<T>> {
    let c = (p.jz + p.jz).abs();
    let (r1, r2) = (c - p.r2, c - p.r1);
    (r1 >= T::zero() && r2 >= T::zero()).then_some(XStateParams { r1, r2, ..*p })
}
