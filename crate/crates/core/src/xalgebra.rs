//! Diagonalization of a dephased X matrix.
//!
//! Swapping the second and fourth basis states (`P`) makes the X matrix block
//! diagonal with blocks `[[a, |u|], [|u|, d]]` and `[[c, |v|], [|v|, b]]`; a
//! symmetric block reflection `R` then diagonalizes each block. With
//! `R = [[c, s], [s, -c]]` per block the diagonal of `R·P·ϱ·P·R` is
//! `(p1, p2, p3, p4)`.

use num_complex::Complex;

use crate::linalg::{CMat, RMat};
use crate::scalar::Real;
use crate::xmodel::XMatrix;

/// Eigenvalues of a dephased X matrix and the block rotation parameters.
///
/// `p1 ≥ p2` belong to the {a, d, u} block, `p3 ≥ p4` to the {b, c, v} block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XSpectrum<T> {
    pub p1: T,
    pub p2: T,
    pub p3: T,
    pub p4: T,
    pub q1: T,
    pub q2: T,
}

impl<T: Real> XSpectrum<T> {
    pub fn eigenvalues(&self) -> [T; 4] {
        [self.p1, self.p2, self.p3, self.p4]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Squared norm below which a block rotation column is treated as 0/0.
pub const DEGENERATE_BLOCK: f64 = 1e-24;

/// `(cos, sin)` of the reflection diagonalizing one 2×2 block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockRotation<T> {
    pub cos: T,
    pub sin: T,
}

fn block_root<T: Real>(diff: T, coh: T) -> (T, T) {
    // Returns (sqrt(diff² + 4 coh²), ½(diff + sqrt(..))) without cancellation.
    let two = T::lit(2.0);
    let s = diff.hypot(two * coh);
    let q = if diff >= T::zero() {
        (diff + s) / two
    } else if s > T::zero() {
        two * coh * coh / (s - diff)
    } else {
        T::zero()
    };
    (s, q)
}

fn block_eigs<T: Real>(hi_diag: T, lo_diag: T, coh: T, s: T) -> (T, T) {
    let sum = hi_diag + lo_diag;
    let big = (sum + s) / T::lit(2.0);
    let det = hi_diag.mul_add(lo_diag, -(coh * coh));
    let small = if big > T::zero() { (det / big).max(T::zero()) } else { T::zero() };
    (big, small)
}

/// Eigenvalues `p_i` and rotation parameters `q1`, `q2` of a dephased X matrix.
pub fn spectrum<T: Real>(x: &XMatrix<T>) -> XSpectrum<T> {
    let u = x.u.norm();
    let v = x.v.norm();
    let (s1, q1) = block_root(x.a - x.d, u);
    let (s2, q2) = block_root(x.c - x.b, v);
    let (p1, p2) = block_eigs(x.a, x.d, u, s1);
    let (p3, p4) = block_eigs(x.b, x.c, v, s2);
    XSpectrum { p1, p2, p3, p4, q1, q2 }
}

fn block_rotation<T: Real>(q: T, coh: T, first_dominates: bool) -> BlockRotation<T> {
    let n = q * q + coh * coh;
    if n < T::lit(DEGENERATE_BLOCK) {
        // 0/0 column: take the continuous limit, which keeps the larger
        // eigenvalue in the first slot.
        if first_dominates {
            BlockRotation { cos: T::one(), sin: T::zero() }
        } else {
            BlockRotation { cos: T::zero(), sin: T::one() }
        }
    } else {
        let norm = n.sqrt();
        BlockRotation { cos: q / norm, sin: coh / norm }
    }
}

/// Block rotations for the {a, d} and {c, b} blocks.
pub fn block_rotations<T: Real>(x: &XMatrix<T>, s: &XSpectrum<T>) -> [BlockRotation<T>; 2] {
    [
        block_rotation(s.q1, x.u.norm(), x.a >= x.d),
        block_rotation(s.q2, x.v.norm(), x.c >= x.b),
    ]
}

/// The orthogonal transforms that diagonalize a dephased X matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenFrame<T> {
    /// Swap of the 2nd and 4th basis states.
    pub p: RMat<T, 4>,
    /// Block-diagonal symmetric reflection.
    pub r: RMat<T, 4>,
}

pub fn permutation<T: Real>() -> RMat<T, 4> {
    let (o, z) = (T::one(), T::zero());
    [[o, z, z, z], [z, z, z, o], [z, z, o, z], [z, o, z, z]]
}

pub fn eigenframe<T: Real>(x: &XMatrix<T>) -> EigenFrame<T> {
    let s = spectrum(x);
    let [b1, b2] = block_rotations(x, &s);
    let z = T::zero();
    let r = [
        [b1.cos, b1.sin, z, z],
        [b1.sin, -b1.cos, z, z],
        [z, z, b2.cos, b2.sin],
        [z, z, b2.sin, -b2.cos],
    ];
    EigenFrame { p: permutation(), r }
}

/// `R·P·(σ_axis ⊗ I)·P·R` in closed form.
pub fn local_spin_in_eigenbasis<T: Real>(x: &XMatrix<T>, axis: Axis) -> CMat<T, 4> {
    let s = spectrum(x);
    let [b1, b2] = block_rotations(x, &s);
    let (c1, s1, c2, s2) = (b1.cos, b1.sin, b2.cos, b2.sin);
    let z = T::zero();
    let re = |v: T| Complex::new(v, T::zero());
    let im = |v: T| Complex::new(T::zero(), v);
    match axis {
        Axis::X => {
            let a = c1 * c2 + s1 * s2;
            let b = c1 * s2 - c2 * s1;
            [
                [re(z), re(z), re(a), re(b)],
                [re(z), re(z), re(-b), re(a)],
                [re(a), re(-b), re(z), re(z)],
                [re(b), re(a), re(z), re(z)],
            ]
        }
        Axis::Y => {
            let a = c1 * c2 - s1 * s2;
            let b = c1 * s2 + c2 * s1;
            [
                [re(z), re(z), im(-a), im(-b)],
                [re(z), re(z), im(-b), im(a)],
                [im(a), im(b), re(z), re(z)],
                [im(b), im(-a), re(z), re(z)],
            ]
        }
        Axis::Z => {
            let two = T::lit(2.0);
            [
                [re(c1 * c1 - s1 * s1), re(two * c1 * s1), re(z), re(z)],
                [re(two * c1 * s1), re(s1 * s1 - c1 * c1), re(z), re(z)],
                [re(z), re(z), re(s2 * s2 - c2 * c2), re(-two * c2 * s2)],
                [re(z), re(z), re(-two * c2 * s2), re(c2 * c2 - s2 * s2)],
            ]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{local_pauli, matmul, max_abs_diff, off_diagonal_norm, real_matmul, to_complex};

    fn x(a: f64, b: f64, c: f64, d: f64, u: f64, v: f64) -> XMatrix<f64> {
        XMatrix::<f64>::real(a, b, c, d, u, v).unwrap()
    }

    fn conj_explicit(xm: &XMatrix<f64>, axis: Axis) -> CMat<f64, 4> {
        let f = eigenframe(xm);
        let rp = to_complex(&real_matmul(&f.r, &f.p));
        let pr = to_complex(&real_matmul(&f.p, &f.r));
        matmul(&rp, &matmul(&local_pauli(axis.index()), &pr))
    }

    fn samples() -> Vec<XMatrix<f64>> {
        vec![
            x(0.25, 0.25, 0.25, 0.25, 0.0, 0.0),
            x(0.4, 0.1, 0.2, 0.3, 0.2, 0.1),
            x(0.1, 0.35, 0.15, 0.4, 0.15, 0.05),
            x(0.3, 0.3, 0.3, 0.1, 0.0, 0.2),
            x(0.1, 0.2, 0.3, 0.4, 0.0, 0.0),
            x(0.5, 0.0, 0.0, 0.5, 0.5, 0.0),
            x(0.2, 0.3, 0.3, 0.2, 0.2, 0.3),
        ]
    }

    #[test]
    fn maximally_mixed_spectrum() {
        let s = spectrum(&x(0.25, 0.25, 0.25, 0.25, 0.0, 0.0));
        assert_eq!(s.eigenvalues(), [0.25; 4]);
        assert_eq!((s.q1, s.q2), (0.0, 0.0));
    }

    #[test]
    fn bell_state_spectrum() {
        let s = spectrum(&x(0.5, 0.0, 0.0, 0.5, 0.5, 0.0));
        assert_eq!(s.eigenvalues(), [1.0, 0.0, 0.0, 0.0]);
        assert_eq!((s.q1, s.q2), (0.5, 0.0));
    }

    #[test]
    fn q_identities_hold() {
        for xm in samples() {
            let s = spectrum(&xm);
            let (u, v) = (xm.u.re, xm.v.re);
            assert!((s.q1 * s.q1 - ((xm.a - xm.d) * s.q1 + u * u)).abs() < 1e-10);
            assert!((s.q2 * s.q2 - ((xm.c - xm.b) * s.q2 + v * v)).abs() < 1e-10);
            let sum: f64 = s.eigenvalues().iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn frame_is_orthogonal_involution_and_diagonalizes() {
        for xm in samples() {
            let f = eigenframe(&xm);
            let id = crate::linalg::real_identity::<f64, 4>();
            assert_eq!(real_matmul(&f.p, &f.p), id);
            let rr = real_matmul(&f.r, &f.r);
            for i in 0..4 {
                for j in 0..4 {
                    assert!((rr[i][j] - id[i][j]).abs() < 1e-12);
                    assert_eq!(f.r[i][j], f.r[j][i]);
                }
            }
            let rp = to_complex(&real_matmul(&f.r, &f.p));
            let pr = to_complex(&real_matmul(&f.p, &f.r));
            let diag = matmul(&rp, &matmul(&xm.to_dense(), &pr));
            assert!(off_diagonal_norm(&diag) < 1e-12);
            let s = spectrum(&xm);
            for (k, p) in s.eigenvalues().iter().enumerate() {
                assert!((diag[k][k].re - p).abs() < 1e-12, "{xm:?}");
            }
        }
    }

    #[test]
    fn symmetric_block_rotation() {
        let xm = x(0.3, 0.2, 0.2, 0.3, 0.1, 0.0);
        let f = eigenframe(&xm);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((f.r[0][0] - h).abs() < 1e-15 && (f.r[1][0] - h).abs() < 1e-15);
        assert!((f.r[0][1] - h).abs() < 1e-15 && (f.r[1][1] + h).abs() < 1e-15);
    }

    #[test]
    fn diagonal_input_uses_reflection_without_mixing() {
        let f = eigenframe(&x(0.4, 0.1, 0.3, 0.2, 0.0, 0.0));
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(f.r[i][j], 0.0);
                }
            }
        }
    }

    #[test]
    fn closed_form_spin_matrices_match_conjugation() {
        for xm in samples() {
            for axis in Axis::ALL {
                let closed = local_spin_in_eigenbasis(&xm, axis);
                let brute = conj_explicit(&xm, axis);
                assert!(max_abs_diff(&closed, &brute) < 1e-12, "{axis:?} {xm:?}");
            }
        }
    }

    #[test]
    fn z_spin_for_diagonal_state() {
        // a > d, b < c with u = v = 0: q1 = a - d, q2 = c - b.
        let m = local_spin_in_eigenbasis(&x(0.4, 0.1, 0.3, 0.2, 0.0, 0.0), Axis::Z);
        let d: Vec<f64> = (0..4).map(|i| m[i][i].re).collect();
        assert_eq!(d, vec![1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn spin_structure_and_norm() {
        for xm in samples() {
            for axis in Axis::ALL {
                let m = local_spin_in_eigenbasis(&xm, axis);
                let fro: f64 = m.iter().flatten().map(|e| e.norm_sqr()).sum();
                assert!((fro - 4.0).abs() < 1e-12);
                for i in 0..4 {
                    for j in 0..4 {
                        let same_block = (i < 2) == (j < 2);
                        let zero_expected = match axis {
                            Axis::Z => !same_block,
                            _ => same_block,
                        };
                        if zero_expected {
                            assert_eq!(m[i][j].norm(), 0.0);
                        }
                    }
                }
            }
        }
    }
}
