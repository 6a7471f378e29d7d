//! Closed-form LQFI and LQU of two-qubit X states.
//!
//! For a dephased X state both the LQFI matrix `M` and the LQU matrix `W` are
//! diagonal, and `Mxx ≥ Myy`, `Wxx ≥ Wyy`, so each measure is the smaller of
//! two branches:
//!
//! * LQFI: `F0 = 1 - Mzz`, `F1 = 1 - Mxx`
//! * LQU:  `U0 = 1 - Wzz`, `U1 = 1 - Wxx`
//!
//! Every branch is available in two independent forms: from the matrix
//! elements and eigenvalues of the state, and directly from the thermal
//! parameters `(Jz, r1, r2, B1, B2, T)`.

use std::fmt;

use crate::error::Result;
use crate::oracle;
use crate::scalar::{ln_cosh, ln_sum_exp, Real};
use crate::xalgebra::{block_rotations, spectrum, XSpectrum};
use crate::xmodel::{one_minus_exp_over_r, radius_vanishes, tanh_over_r, XMatrix, XStateParams};

/// Diagonal of the LQFI matrix `M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MEigenvalues<T> {
    pub mxx: T,
    pub myy: T,
    pub mzz: T,
}

/// Diagonal of the LQU matrix `W`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WEigenvalues<T> {
    pub wxx: T,
    pub wyy: T,
    pub wzz: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActiveBranch {
    Zero,
    One,
    /// Both branches agree to within [`BOUNDARY_TOLERANCE`].
    Boundary,
}

impl fmt::Display for ActiveBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ActiveBranch::Zero => "0",
            ActiveBranch::One => "1",
            ActiveBranch::Boundary => "boundary",
        })
    }
}

pub const BOUNDARY_TOLERANCE: f64 = 1e-10;

/// The two correlation measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Measure {
    Lqfi,
    Lqu,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::Lqfi => "LQFI",
            Measure::Lqu => "LQU",
        })
    }
}

/// Both branches of a measure and the selected minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPair<T> {
    pub branch0: T,
    pub branch1: T,
    pub value: T,
    pub active: ActiveBranch,
}

impl<T: Real> BranchPair<T> {
    pub fn new(branch0: T, branch1: T) -> Self {
        let value = branch0.min(branch1);
        let active = if (branch0 - branch1).abs() < T::lit(BOUNDARY_TOLERANCE) {
            ActiveBranch::Boundary
        } else if branch0 < branch1 {
            ActiveBranch::Zero
        } else {
            ActiveBranch::One
        };
        Self { branch0, branch1, value, active }
    }

    /// `branch0 - branch1`; its sign changes exactly at a sudden transition.
    pub fn gap(&self) -> T {
        self.branch0 - self.branch1
    }
}

/// Cutoff on `p_m + p_n` below which a pair drops out of the spectral sums.
pub const PAIR_CUTOFF: f64 = 1e-14;

/// Smallest pairwise eigenvalue sum for which the simplified `Mxx` quotient
/// is used; below it the quotient loses digits and the spectral-sum form
/// takes over.
pub const SIMPLIFIED_PAIR_FLOOR: f64 = 1e-6;

const RATIO_DENOMINATOR_FLOOR: f64 = 1e-14;
const RATIO_NUMERATOR_FLOOR: f64 = 1e-12;

fn harmonic<T: Real>(x: T, y: T) -> T {
    let s = x + y;
    if s < T::lit(PAIR_CUTOFF) {
        T::zero()
    } else {
        x * y / s
    }
}

fn safe_div<T: Real>(num: T, den: T) -> T {
    if den < T::lit(PAIR_CUTOFF) {
        T::zero()
    } else {
        num / den
    }
}

/// `M` diagonal from the simplified quotient formulas. Ill-conditioned when
/// two eigenvalues from different blocks are both close to zero.
pub fn m_eigenvalues_simplified<T: Real>(x: &XMatrix<T>, s: &XSpectrum<T>) -> MEigenvalues<T> {
    let (u, v) = (x.u.norm(), x.v.norm());
    let four = T::lit(4.0);
    let two = T::lit(2.0);
    let XSpectrum { p1, p2, p3, p4, .. } = *s;

    let base = x.a * x.c + x.b * x.d + p1 * p2 + p3 * p4;
    let weight = (x.a + x.d) * p3 * p4 + (x.b + x.c) * p1 * p2;
    // [1 - (p1-p2)² - (p3-p4)²]² - 4(p1-p2)²(p3-p4)² = 16 (p1+p3)(p2+p4)(p1+p4)(p2+p3)
    let den = (p1 + p3) * (p2 + p4) * (p1 + p4) * (p2 + p3);
    let mxx = four * (base + two * u * v) * weight / den;
    let myy = four * (base - two * u * v) * weight / den;
    let mzz = T::one() - four * (safe_div(u * u, x.a + x.d) + safe_div(v * v, x.b + x.c));
    MEigenvalues { mxx, myy, mzz }
}

/// `M` diagonal from the spectral sums over the eigenbasis.
pub fn m_eigenvalues_raw<T: Real>(x: &XMatrix<T>, s: &XSpectrum<T>) -> MEigenvalues<T> {
    let [r1, r2] = block_rotations(x, s);
    let (c1, s1, c2, s2) = (r1.cos, r1.sin, r2.cos, r2.sin);
    let XSpectrum { p1, p2, p3, p4, .. } = *s;
    let four = T::lit(4.0);
    let direct = harmonic(p1, p3) + harmonic(p2, p4);
    let cross = harmonic(p1, p4) + harmonic(p2, p3);

    let sq = |t: T| t * t;
    let mxx = four * (sq(c1 * c2 + s1 * s2) * direct + sq(c1 * s2 - c2 * s1) * cross);
    let myy = four * (sq(c1 * c2 - s1 * s2) * direct + sq(c1 * s2 + c2 * s1) * cross);
    let sixteen = T::lit(16.0);
    let mzz = (x.a + x.d) * sq(c1 * c1 - s1 * s1)
        + sixteen * harmonic(p1, p2) * sq(c1 * s1)
        + (x.b + x.c) * sq(c2 * c2 - s2 * s2)
        + sixteen * harmonic(p3, p4) * sq(c2 * s2);
    MEigenvalues { mxx, myy, mzz }
}

/// Diagonal entries of `M` for a dephased X state.
pub fn m_eigenvalues<T: Real>(x: &XMatrix<T>, s: &XSpectrum<T>) -> MEigenvalues<T> {
    let XSpectrum { p1, p2, p3, p4, .. } = *s;
    let floor = T::lit(SIMPLIFIED_PAIR_FLOOR);
    let well_conditioned = [p1 + p3, p2 + p4, p1 + p4, p2 + p3].iter().all(|&v| v >= floor);
    if well_conditioned {
        m_eigenvalues_simplified(x, s)
    } else {
        let raw = m_eigenvalues_raw(x, s);
        MEigenvalues { mzz: m_eigenvalues_simplified(x, s).mzz, ..raw }
    }
}

fn guarded_ratio<T: Real>(num: T, den: T) -> Option<T> {
    if den < T::lit(RATIO_DENOMINATOR_FLOOR) {
        (num.abs() < T::lit(RATIO_NUMERATOR_FLOOR)).then(T::zero)
    } else {
        Some(num / den)
    }
}

fn w_simplified_checked<T: Real>(x: &XMatrix<T>, s: &XSpectrum<T>) -> Option<WEigenvalues<T>> {
    let (u, v) = (x.u.norm(), x.v.norm());
    let four = T::lit(4.0);
    let half = T::lit(0.5);
    let g1 = s.p1.sqrt() + s.p2.sqrt();
    let g2 = s.p3.sqrt() + s.p4.sqrt();
    let g = g1 * g2;
    let cross = (x.b - x.c) * (x.d - x.a);
    let wxx = g + guarded_ratio(cross + four * u * v, g)?;
    let wyy = g + guarded_ratio(cross - four * u * v, g)?;
    let da = x.d - x.a;
    let bc = x.b - x.c;
    let wzz = half
        * (g1 * g1
            + g2 * g2
            + guarded_ratio(da * da - four * u * u, g1 * g1)?
            + guarded_ratio(bc * bc - four * v * v, g2 * g2)?);
    Some(WEigenvalues { wxx, wyy, wzz })
}

/// `W` diagonal from the simplified formulas; `None` when a vanishing
/// denominator comes with a non-vanishing numerator (only possible for
/// states violating positivity).
pub fn w_eigenvalues_simplified<T: Real>(x: &XMatrix<T>, s: &XSpectrum<T>) -> Option<WEigenvalues<T>> {
    w_simplified_checked(x, s)
}

/// `W` diagonal from the spectral sums over the eigenbasis.
pub fn w_eigenvalues_raw<T: Real>(x: &XMatrix<T>, s: &XSpectrum<T>) -> WEigenvalues<T> {
    let [r1, r2] = block_rotations(x, s);
    let (c1, s1, c2, s2) = (r1.cos, r1.sin, r2.cos, r2.sin);
    let XSpectrum { p1, p2, p3, p4, .. } = *s;
    let two = T::lit(2.0);
    let eight = T::lit(8.0);
    let direct = (p1 * p3).sqrt() + (p2 * p4).sqrt();
    let cross = (p1 * p4).sqrt() + (p2 * p3).sqrt();
    let sq = |t: T| t * t;
    let wxx = two * (direct * sq(c1 * c2 + s1 * s2) + cross * sq(c1 * s2 - c2 * s1));
    let wyy = two * (direct * sq(c1 * c2 - s1 * s2) + cross * sq(c1 * s2 + c2 * s1));
    let wzz = (p1 + p2) * sq(c1 * c1 - s1 * s1)
        + eight * (p1 * p2).sqrt() * sq(c1 * s1)
        + (p3 + p4) * sq(c2 * c2 - s2 * s2)
        + eight * (p3 * p4).sqrt() * sq(c2 * s2);
    WEigenvalues { wxx, wyy, wzz }
}

/// Diagonal entries of `W` for a dephased X state.
pub fn w_eigenvalues<T: Real>(x: &XMatrix<T>, s: &XSpectrum<T>) -> WEigenvalues<T> {
    w_simplified_checked(x, s).unwrap_or_else(|| {
        let w = oracle::w_matrix_unchecked(&x.to_dense());
        WEigenvalues { wxx: w[0][0], wyy: w[1][1], wzz: w[2][2] }
    })
}

/// LQFI of an X state from its matrix elements.
pub fn lqfi_x<T: Real>(x: &XMatrix<T>) -> BranchPair<T> {
    let m = m_eigenvalues(x, &spectrum(x));
    BranchPair::new(T::one() - m.mzz, T::one() - m.mxx)
}

/// LQU of an X state from its matrix elements.
pub fn lqu_x<T: Real>(x: &XMatrix<T>) -> BranchPair<T> {
    let w = w_eigenvalues(x, &spectrum(x));
    BranchPair::new(T::one() - w.wzz, T::one() - w.wxx)
}

/// Reduced-temperature quantities shared by the thermal closed forms.
struct Thermal<T> {
    t: T,
    /// R1/T, R2/T, Jz/T
    x1: T,
    x2: T,
    j: T,
    big_r1: T,
    big_r2: T,
    r1: T,
    r2: T,
    kappa: T,
    ln_z: T,
}

impl<T: Real> Thermal<T> {
    fn new(p: &XStateParams<T>) -> Result<Self> {
        p.validate()?;
        let r = p.radii();
        let t = p.t;
        let (x1, x2, j) = (r.big_r1 / t, r.big_r2 / t, p.jz / t);
        let one = T::one();
        let ln_z = ln_sum_exp(&[(one, x1 - j), (one, -x1 - j), (one, x2 + j), (one, -x2 + j)]);
        let kappa = if radius_vanishes(r.big_r1, t) || radius_vanishes(r.big_r2, t) {
            T::zero()
        } else {
            ((p.r1 * p.r2 + p.b2 * p.b2 - p.b1 * p.b1) / (r.big_r1 * r.big_r2)).max(-one).min(one)
        };
        Ok(Self { t, x1, x2, j, big_r1: r.big_r1, big_r2: r.big_r2, r1: p.r1, r2: p.r2, kappa, ln_z })
    }

    fn f0(&self) -> T {
        let two = T::lit(2.0);
        let term = |r: T, big_r: T, exponent: T| {
            let pre = r * r * one_minus_exp_over_r(big_r, self.t, two) * tanh_over_r(big_r, self.t);
            if pre > T::zero() {
                (pre.ln() + exponent - self.ln_z).exp()
            } else {
                T::zero()
            }
        };
        term(self.r1, self.big_r1, self.x1 - self.j) + term(self.r2, self.big_r2, self.x2 + self.j)
    }

    fn u0(&self) -> T {
        let term = |r: T, big_r: T, exponent: T| {
            let g = one_minus_exp_over_r(big_r, self.t, T::one());
            let pre = r * r * g * g;
            if pre > T::zero() {
                (pre.ln() + exponent - self.ln_z).exp()
            } else {
                T::zero()
            }
        };
        term(self.r1, self.big_r1, self.x1 - self.j) + term(self.r2, self.big_r2, self.x2 + self.j)
    }

    fn f1(&self) -> T {
        let (x1, x2, j, k) = (self.x1, self.x2, self.j, self.kappa);
        let half = T::lit(0.5);
        let quarter = T::lit(0.25);
        let one = T::one();
        let ln4 = T::lit(4.0).ln();
        let ln_a = ln_sum_exp(&[(half, x1 + j), (half, -x1 + j), (half, x2 - j), (half, -x2 - j)]);
        let ln_n = ln_sum_exp(&[
            (half, j + j),
            (half, -(j + j)),
            ((one + k) * quarter, x1 + x2),
            ((one - k) * quarter, x1 - x2),
            ((one - k) * quarter, x2 - x1),
            ((one + k) * quarter, -x1 - x2),
        ]);
        let dm = (x1 - x2) * half;
        let dp = (x1 + x2) * half;
        let ln_d = ln4 + ln_cosh(j + dm) + ln_cosh(j - dm) + ln_cosh(j + dp) + ln_cosh(j - dp);
        one - (ln4 + ln_a + ln_n - self.ln_z - ln_d).exp()
    }

    fn u1(&self) -> T {
        let (h1, h2, k) = (self.x1 * T::lit(0.5), self.x2 * T::lit(0.5), self.kappa);
        let one = T::one();
        let ln_k4 = ln_sum_exp(&[
            (one + k, h1 + h2),
            (one + k, -h1 - h2),
            (one - k, h1 - h2),
            (one - k, h2 - h1),
        ]);
        one - (ln_k4 - self.ln_z).exp()
    }
}

/// LQFI branches of the thermal state directly from the model parameters.
pub fn lqfi_thermal<T: Real>(p: &XStateParams<T>) -> Result<BranchPair<T>> {
    let th = Thermal::new(p)?;
    Ok(BranchPair::new(th.f0(), th.f1()))
}

/// LQU branches of the thermal state directly from the model parameters.
pub fn lqu_thermal<T: Real>(p: &XStateParams<T>) -> Result<BranchPair<T>> {
    let th = Thermal::new(p)?;
    Ok(BranchPair::new(th.u0(), th.u1()))
}

/// Both measures of the thermal state.
pub fn thermal_correlations<T: Real>(p: &XStateParams<T>) -> Result<(BranchPair<T>, BranchPair<T>)> {
    let th = Thermal::new(p)?;
    Ok((BranchPair::new(th.f0(), th.f1()), BranchPair::new(th.u0(), th.u1())))
}
