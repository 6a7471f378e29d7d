//! Asymptotic forms of the four branches: truncated high-temperature series
//! and zero-temperature limits.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::xmodel::XStateParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    F0,
    F1,
    U0,
    U1,
}

impl Branch {
    pub const ALL: [Branch; 4] = [Branch::F0, Branch::F1, Branch::U0, Branch::U1];
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::F0 => "F0",
            Branch::F1 => "F1",
            Branch::U0 => "U0",
            Branch::U1 => "U1",
        })
    }
}

/// Truncated expansion in powers of `1/T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue<T> {
    pub value: T,
    /// Highest power of `1/T` included.
    pub order: u32,
}

/// High-temperature series of one branch.
pub fn high_t_series<T: Real>(p: &XStateParams<T>, which: Branch) -> Result<SeriesValue<T>> {
    if !(p.t > T::zero()) {
        return Err(Error::NonPositiveTemperature(p.t.as_f64()));
    }
    let rd = p.radii();
    let (r1s, r2s) = (p.r1 * p.r1, p.r2 * p.r2);
    let (big1, big2) = (rd.big_r1 * rd.big_r1, rd.big_r2 * rd.big_r2);
    let jz = p.jz;
    let inv = T::one() / p.t;
    let (i2, i3) = (inv * inv, inv * inv * inv);
    let i4 = i2 * i2;
    let c = T::lit;

    let series = match which {
        Branch::F0 => SeriesValue {
            value: (r1s + r2s) / c(2.0) * i2 + (r2s - r1s) * jz / c(2.0) * i3
                - ((c(5.0) * r1s + c(3.0) * r2s) * big1 + (c(3.0) * r1s + c(5.0) * r2s) * big2) / c(24.0) * i4,
            order: 4,
        },
        Branch::U0 => SeriesValue {
            value: (r1s + r2s) / c(4.0) * i2 + (r2s - r1s) * jz / c(4.0) * i3
                - ((c(2.0) * r1s + c(3.0) * r2s) * big1 + (c(3.0) * r1s + c(2.0) * r2s) * big2) / c(48.0) * i4,
            order: 4,
        },
        Branch::F1 | Branch::U1 => {
            let dr = p.r1 - p.r2;
            let lead = c(4.0) * p.b1 * p.b1 + c(4.0) * jz * jz + dr * dr;
            let cubic = (big2 - big1) * jz;
            let scale = if which == Branch::F1 { c(1.0) } else { c(0.5) };
            SeriesValue { value: scale * (lead / c(4.0) * i2 + cubic / c(2.0) * i3), order: 3 }
        }
    };
    Ok(series)
}

/// Zero-temperature value of a branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroTemperatureLimit<T> {
    Value(T),
    /// The two lowest levels cross (`R1 = R2 + 2Jz`) and the limit depends
    /// on how the point is approached.
    Indeterminate,
}

impl<T: Copy> ZeroTemperatureLimit<T> {
    pub fn value(&self) -> Option<T> {
        match self {
            ZeroTemperatureLimit::Value(v) => Some(*v),
            ZeroTemperatureLimit::Indeterminate => None,
        }
    }
}

pub const LEVEL_CROSSING_TOLERANCE: f64 = 1e-12;

/// Limit of a branch as `T → 0⁺`; the temperature field of `p` is ignored.
///
/// Only `F0`, `U0` and `U1` have known limits. `F1` is rejected.
pub fn zero_t_limit<T: Real>(p: &XStateParams<T>, which: Branch) -> Result<ZeroTemperatureLimit<T>> {
    if which == Branch::F1 {
        return Err(Error::UnsupportedBranch("F1"));
    }
    let rd = p.radii();
    let split = rd.big_r1 - rd.big_r2 - (p.jz + p.jz);
    if split.abs() < T::lit(LEVEL_CROSSING_TOLERANCE) {
        return Ok(ZeroTemperatureLimit::Indeterminate);
    }
    if which == Branch::U1 {
        return Ok(ZeroTemperatureLimit::Value(T::one()));
    }
    let ratio_sq = |r: T, big: T| if big > T::zero() { (r / big) * (r / big) } else { T::zero() };
    let v = if split > T::zero() { ratio_sq(p.r1, rd.big_r1) } else { ratio_sq(p.r2, rd.big_r2) };
    Ok(ZeroTemperatureLimit::Value(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::{lqfi_thermal, lqu_thermal};

    fn weak_coupling(t: f64) -> XStateParams<f64> {
        XStateParams::<f64>::new(-1.0, 0.5, 1.0, -0.4, 0.7, t).unwrap()
    }

    fn field_split() -> XStateParams<f64> {
        XStateParams::<f64>::new(1.0, 3.4, 3.2, -1.3, 1.7, 1.0).unwrap()
    }

    #[test]
    fn no_coherence_means_zero_f0_series() {
        let p = XStateParams::<f64>::new(0.7, 0.0, 0.0, 0.3, -0.2, 3.0).unwrap();
        assert_eq!(high_t_series(&p, Branch::F0).unwrap().value, 0.0);
        assert_eq!(high_t_series(&p, Branch::U0).unwrap().value, 0.0);
    }

    #[test]
    fn f0_series_against_exact_at_t10() {
        let p = weak_coupling(10.0);
        let s = high_t_series(&p, Branch::F0).unwrap();
        assert_eq!(s.order, 4);
        let exact = lqfi_thermal(&p).unwrap().branch0;
        assert!((s.value - exact).abs() < 1e-5, "{} vs {}", s.value, exact);
        let lead: f64 = (0.25 + 1.0) / (2.0 * 100.0);
        assert!((lead - 0.00625).abs() < 1e-15);
    }

    #[test]
    fn u0_leading_term_is_half_of_f0() {
        let p = field_split().with_t(1e6);
        let f = high_t_series(&p, Branch::F0).unwrap().value;
        let u = high_t_series(&p, Branch::U0).unwrap().value;
        assert!((u / f - 0.5).abs() < 1e-6);
    }

    #[test]
    fn series_orders() {
        let p = field_split();
        let orders: Vec<u32> = Branch::ALL.iter().map(|&b| high_t_series(&p, b).unwrap().order).collect();
        assert_eq!(orders, vec![4, 3, 4, 3]);
    }

    #[test]
    fn all_series_track_exact_at_high_t() {
        let p = field_split().with_t(200.0);
        let f = lqfi_thermal(&p).unwrap();
        let u = lqu_thermal(&p).unwrap();
        let exact = [f.branch0, f.branch1, u.branch0, u.branch1];
        for (b, e) in Branch::ALL.iter().zip(exact) {
            let s = high_t_series(&p, *b).unwrap().value;
            assert!((s - e).abs() < 1e-6, "{b}: {s} vs {e}");
        }
    }

    #[test]
    fn zero_t_limit_reference_values() {
        let v = zero_t_limit(&weak_coupling(1.0), Branch::F0).unwrap().value().unwrap();
        assert!((v - 0.735294).abs() < 1e-6);
        let v = zero_t_limit(&field_split(), Branch::U0).unwrap().value().unwrap();
        assert!((v - 0.5322245).abs() < 1e-7);
        assert_eq!(zero_t_limit(&field_split(), Branch::U1).unwrap(), ZeroTemperatureLimit::Value(1.0));
        assert!(zero_t_limit(&field_split(), Branch::F1).is_err());
    }

    #[test]
    fn symmetric_point_is_continuous() {
        // R1 = R2 + 2Jz exactly: flagged, but both candidate values coincide.
        let p = XStateParams::<f64>::new(0.0, 0.8, 0.8, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(zero_t_limit(&p, Branch::F0).unwrap(), ZeroTemperatureLimit::Indeterminate);
        let nudged = XStateParams { jz: 1e-9, ..p };
        let below = zero_t_limit(&nudged, Branch::F0).unwrap().value().unwrap();
        let nudged = XStateParams { jz: -1e-9, ..p };
        let above = zero_t_limit(&nudged, Branch::F0).unwrap().value().unwrap();
        assert_eq!(below, above);
    }

    #[test]
    fn exact_branches_approach_limits() {
        let p = weak_coupling(1e-3);
        let f0 = lqfi_thermal(&p).unwrap().branch0;
        let u = lqu_thermal(&p).unwrap();
        let lim = zero_t_limit(&p, Branch::F0).unwrap().value().unwrap();
        assert!((f0 - lim).abs() < 1e-3);
        assert!((u.branch0 - lim).abs() < 1e-3);
        assert!((u.branch1 - 1.0).abs() < 1e-3);
    }
}
