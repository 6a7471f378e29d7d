//! Two-spin XYZ Hamiltonian with DM and KSEA couplings in an inhomogeneous
//! longitudinal field, and its thermal (Gibbs) X-form density matrix.
//!
//! The Hamiltonian splits into two 2×2 blocks: {|00⟩, |11⟩} with energies
//! `Jz ± R1` and {|01⟩, |10⟩} with energies `-Jz ± R2`. All thermal quantities
//! are evaluated with the ground-state Boltzmann factor divided out, so very
//! low temperatures do not overflow.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::scalar::{ln_sum_exp, Real};

/// Couplings of the two-spin Hamiltonian (energy units).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HamiltonianParams<T> {
    pub jx: T,
    pub jy: T,
    pub jz: T,
    /// z-component of the Dzyaloshinsky vector.
    pub dz: T,
    /// KSEA coupling strength Γz.
    pub gz: T,
    pub b1: T,
    pub b2: T,
}

/// Internal radii `r1`, `r2` and full radii `R1`, `R2` of the two blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedRadii<T> {
    pub r1: T,
    pub r2: T,
    pub big_r1: T,
    pub big_r2: T,
}

impl<T: Real> DerivedRadii<T> {
    pub fn from_reduced(r1: T, r2: T, b1: T, b2: T) -> Self {
        Self { r1, r2, big_r1: r1.hypot(b1 + b2), big_r2: r2.hypot(b1 - b2) }
    }
}

impl<T: Real> HamiltonianParams<T> {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("Jx", self.jx),
            ("Jy", self.jy),
            ("Jz", self.jz),
            ("Dz", self.dz),
            ("Gz", self.gz),
            ("B1", self.b1),
            ("B2", self.b2),
        ];
        for (name, v) in named {
            if !v.is_finite() {
                return Err(Error::NonFinite(name));
            }
        }
        Ok(())
    }

    pub fn radii(&self) -> DerivedRadii<T> {
        let two = T::lit(2.0);
        let r1 = (self.jx - self.jy).hypot(two * self.gz);
        let r2 = (self.jx + self.jy).hypot(two * self.dz);
        DerivedRadii::from_reduced(r1, r2, self.b1, self.b2)
    }

    /// The reduced parameter set on which every correlation depends.
    pub fn reduce(&self, t: T) -> Result<XStateParams<T>> {
        let r = self.radii();
        XStateParams::new(self.jz, r.r1, r.r2, self.b1, self.b2, t)
    }

    /// Dense Hamiltonian in the basis |00⟩, |01⟩, |10⟩, |11⟩.
    pub fn hamiltonian_matrix(&self) -> CMat<T, 4> {
        let z = T::zero();
        let two = T::lit(2.0);
        let c = |re: T, im: T| Complex::new(re, im);
        let mut h = [[c(z, z); 4]; 4];
        h[0][0] = c(self.jz + self.b1 + self.b2, z);
        h[1][1] = c(-self.jz + self.b1 - self.b2, z);
        h[2][2] = c(-self.jz - self.b1 + self.b2, z);
        h[3][3] = c(self.jz - self.b1 - self.b2, z);
        h[0][3] = c(self.jx - self.jy, -two * self.gz);
        h[3][0] = c(self.jx - self.jy, two * self.gz);
        h[1][2] = c(self.jx + self.jy, two * self.dz);
        h[2][1] = c(self.jx + self.jy, -two * self.dz);
        h
    }
}

/// Reduced description of the thermal state: `(Jz, r1, r2, B1, B2)` plus temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XStateParams<T> {
    pub jz: T,
    pub r1: T,
    pub r2: T,
    pub b1: T,
    pub b2: T,
    pub t: T,
}

impl<T: Real> XStateParams<T> {
    pub fn new(jz: T, r1: T, r2: T, b1: T, b2: T, t: T) -> Result<Self> {
        let p = Self { jz, r1, r2, b1, b2, t };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("Jz", self.jz), ("r1", self.r1), ("r2", self.r2), ("B1", self.b1), ("B2", self.b2), ("T", self.t)] {
            if !v.is_finite() {
                return Err(Error::NonFinite(name));
            }
        }
        if self.r1 < T::zero() {
            return Err(Error::NegativeRadius("r1", self.r1.as_f64()));
        }
        if self.r2 < T::zero() {
            return Err(Error::NegativeRadius("r2", self.r2.as_f64()));
        }
        if self.t <= T::zero() {
            return Err(Error::NonPositiveTemperature(self.t.as_f64()));
        }
        Ok(())
    }

    pub fn with_t(self, t: T) -> Self {
        Self { t, ..self }
    }

    pub fn radii(&self) -> DerivedRadii<T> {
        DerivedRadii::from_reduced(self.r1, self.r2, self.b1, self.b2)
    }

    /// A Hamiltonian realizing these reduced parameters: `Γz = Dz = 0`,
    /// `Jx = (r2 + r1)/2`, `Jy = (r2 - r1)/2`.
    pub fn realize(&self) -> HamiltonianParams<T> {
        let half = T::lit(0.5);
        HamiltonianParams {
            jx: (self.r2 + self.r1) * half,
            jy: (self.r2 - self.r1) * half,
            jz: self.jz,
            dz: T::zero(),
            gz: T::zero(),
            b1: self.b1,
            b2: self.b2,
        }
    }

    pub fn gibbs_xstate(&self) -> Result<XMatrix<T>> {
        gibbs_xstate(&self.realize(), self.t)
    }
}

/// Two-qubit density matrix of X form:
///
/// ```text
/// | a  .  .  u |
/// | .  b  v  . |
/// | .  v* c  . |
/// | u* .  .  d |
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XMatrix<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub u: Complex<T>,
    pub v: Complex<T>,
}

/// Absolute slack used when validating X-state invariants.
pub const XSTATE_TOLERANCE: f64 = 1e-9;

impl<T: Real> XMatrix<T> {
    pub fn new(a: T, b: T, c: T, d: T, u: Complex<T>, v: Complex<T>) -> Result<Self> {
        let x = Self { a, b, c, d, u, v };
        x.validate()?;
        Ok(x)
    }

    /// Real (already dephased) X matrix.
    pub fn real(a: T, b: T, c: T, d: T, u: T, v: T) -> Result<Self> {
        Self::new(a, b, c, d, Complex::new(u, T::zero()), Complex::new(v, T::zero()))
    }

    pub fn validate(&self) -> Result<()> {
        let tol = T::lit(XSTATE_TOLERANCE);
        let all = [self.a, self.b, self.c, self.d, self.u.re, self.u.im, self.v.re, self.v.im];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidXState("non-finite entry".into()));
        }
        for (name, p) in [("a", self.a), ("b", self.b), ("c", self.c), ("d", self.d)] {
            if p < -tol {
                return Err(Error::InvalidXState(format!("population {name} = {p} is negative")));
            }
        }
        let tr = self.a + self.b + self.c + self.d;
        if (tr - T::one()).abs() > tol {
            return Err(Error::InvalidXState(format!("trace is {tr}, expected 1")));
        }
        if self.a * self.d - self.u.norm_sqr() < -tol {
            return Err(Error::InvalidXState("a·d < |u|²".into()));
        }
        if self.b * self.c - self.v.norm_sqr() < -tol {
            return Err(Error::InvalidXState("b·c < |v|²".into()));
        }
        Ok(())
    }

    /// True when `u` and `v` are real and nonnegative.
    pub fn is_dephased(&self) -> bool {
        self.u.im == T::zero() && self.v.im == T::zero() && self.u.re >= T::zero() && self.v.re >= T::zero()
    }

    pub fn trace(&self) -> T {
        self.a + self.b + self.c + self.d
    }

    /// Dense 4×4 representation in the basis |00⟩, |01⟩, |10⟩, |11⟩.
    pub fn to_dense(&self) -> CMat<T, 4> {
        let z = Complex::new(T::zero(), T::zero());
        let r = |x: T| Complex::new(x, T::zero());
        [
            [r(self.a), z, z, self.u],
            [z, r(self.b), self.v, z],
            [z, self.v.conj(), r(self.c), z],
            [self.u.conj(), z, z, r(self.d)],
        ]
    }
}

/// Energies `(Jz + R1, Jz - R1, -Jz + R2, -Jz - R2)`.
pub fn energy_levels<T: Real>(h: &HamiltonianParams<T>) -> [T; 4] {
    let r = h.radii();
    [h.jz + r.big_r1, h.jz - r.big_r1, -h.jz + r.big_r2, -h.jz - r.big_r2]
}

fn check_temperature<T: Real>(t: T) -> Result<()> {
    if !(t > T::zero()) {
        return Err(Error::NonPositiveTemperature(t.as_f64()));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite("T"));
    }
    Ok(())
}

/// `ln Z` evaluated without forming any large exponential.
pub fn ln_partition_function<T: Real>(h: &HamiltonianParams<T>, t: T) -> Result<T> {
    check_temperature(t)?;
    h.validate()?;
    let beta = T::one() / t;
    let terms = energy_levels(h).map(|e| (T::one(), -beta * e));
    Ok(ln_sum_exp(&terms))
}

/// Partition function `Z = 2[e^{-Jz/T} cosh(R1/T) + e^{Jz/T} cosh(R2/T)]`.
pub fn partition_function<T: Real>(h: &HamiltonianParams<T>, t: T) -> Result<T> {
    ln_partition_function(h, t).map(T::exp)
}

/// True when `R` is small enough that `sinh(R/T)/R` must be replaced by its limit.
pub(crate) fn radius_vanishes<T: Real>(r: T, t: T) -> bool {
    r < T::lit(1e-12) * t.max(T::one())
}

/// `(1 - e^{-k R / T}) / R`, tending to `k / T` as `R → 0`.
pub(crate) fn one_minus_exp_over_r<T: Real>(r: T, t: T, k: T) -> T {
    if radius_vanishes(r, t) {
        k / t
    } else {
        -(-k * r / t).exp_m1() / r
    }
}

/// `tanh(R/T) / R`, tending to `1/T` as `R → 0`.
pub(crate) fn tanh_over_r<T: Real>(r: T, t: T) -> T {
    if radius_vanishes(r, t) {
        T::one() / t
    } else {
        (r / t).tanh() / r
    }
}

/// Thermal X state `exp(-H/T)/Z` from the closed-form matrix elements.
pub fn gibbs_xstate<T: Real>(h: &HamiltonianParams<T>, t: T) -> Result<XMatrix<T>> {
    check_temperature(t)?;
    h.validate()?;
    let r = h.radii();
    let beta = T::one() / t;
    let two = T::lit(2.0);

    // Boltzmann weights relative to the ground level.
    let e2 = h.jz - r.big_r1;
    let e4 = -h.jz - r.big_r2;
    let e_min = e2.min(e4);
    let w2 = (-beta * (e2 - e_min)).exp();
    let w1 = w2 * (-two * beta * r.big_r1).exp();
    let w4 = (-beta * (e4 - e_min)).exp();
    let w3 = w4 * (-two * beta * r.big_r2).exp();
    let z = w1 + w2 + w3 + w4;

    // w2·g1 = (w2 - w1)/R1 and w4·g2 = (w4 - w3)/R2 with the R → 0 limits built in.
    let s1 = w2 * one_minus_exp_over_r(r.big_r1, t, two);
    let s2 = w4 * one_minus_exp_over_r(r.big_r2, t, two);
    let denom = two * z;
    let bp = h.b1 + h.b2;
    let bm = h.b1 - h.b2;

    let a = ((w1 + w2 - bp * s1) / denom).max(T::zero());
    let d = ((w1 + w2 + bp * s1) / denom).max(T::zero());
    let b = ((w3 + w4 - bm * s2) / denom).max(T::zero());
    let c = ((w3 + w4 + bm * s2) / denom).max(T::zero());
    let u = Complex::new(h.jx - h.jy, -two * h.gz) * (-s1 / denom);
    let v = Complex::new(h.jx + h.jy, two * h.dz) * (-s2 / denom);
    Ok(XMatrix { a, b, c, d, u, v })
}

/// Removes the phases of the coherences by a local unitary: `u → |u|`, `v → |v|`.
pub fn dephase<T: Real>(x: &XMatrix<T>) -> XMatrix<T> {
    XMatrix {
        u: Complex::new(x.u.norm(), T::zero()),
        v: Complex::new(x.v.norm(), T::zero()),
        ..*x
    }
}
