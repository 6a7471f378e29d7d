//! Fixed-size dense matrices and the eigen-solvers used by the verification path.
//!
//! Everything here works on stack arrays; the largest matrix in the crate is 4×4.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::Real;

pub type CMat<T, const N: usize> = [[Complex<T>; N]; N];
pub type RMat<T, const N: usize> = [[T; N]; N];

pub fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

pub fn identity<T: Real, const N: usize>() -> CMat<T, N> {
    let mut m = [[czero(); N]; N];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex::one();
    }
    m
}

pub fn real_identity<T: Real, const N: usize>() -> RMat<T, N> {
    let mut m = [[T::zero(); N]; N];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = T::one();
    }
    m
}

pub fn matmul<T: Real, const N: usize>(a: &CMat<T, N>, b: &CMat<T, N>) -> CMat<T, N> {
    let mut out = [[czero(); N]; N];
    for i in 0..N {
        for k in 0..N {
            let aik = a[i][k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..N {
                out[i][j] = out[i][j] + aik * b[k][j];
            }
        }
    }
    out
}

pub fn real_matmul<T: Real, const N: usize>(a: &RMat<T, N>, b: &RMat<T, N>) -> RMat<T, N> {
    let mut out = [[T::zero(); N]; N];
    for i in 0..N {
        for k in 0..N {
            for j in 0..N {
                out[i][j] = out[i][j] + a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn dagger<T: Real, const N: usize>(a: &CMat<T, N>) -> CMat<T, N> {
    let mut out = [[czero(); N]; N];
    for i in 0..N {
        for j in 0..N {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

pub fn to_complex<T: Real, const N: usize>(a: &RMat<T, N>) -> CMat<T, N> {
    let mut out = [[czero(); N]; N];
    for i in 0..N {
        for j in 0..N {
            out[i][j] = Complex::new(a[i][j], T::zero());
        }
    }
    out
}

pub fn trace<T: Real, const N: usize>(a: &CMat<T, N>) -> Complex<T> {
    (0..N).fold(czero(), |acc, i| acc + a[i][i])
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff<T: Real, const N: usize>(a: &CMat<T, N>, b: &CMat<T, N>) -> T {
    let mut m = T::zero();
    for i in 0..N {
        for j in 0..N {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

/// Frobenius norm of the strictly off-diagonal part.
pub fn off_diagonal_norm<T: Real, const N: usize>(a: &CMat<T, N>) -> T {
    let mut s = T::zero();
    for i in 0..N {
        for j in 0..N {
            if i != j {
                s = s + a[i][j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Pauli matrices in the computational basis with σz|0⟩ = |0⟩.
pub fn pauli<T: Real>(axis: usize) -> CMat<T, 2> {
    let o = T::one();
    let z = T::zero();
    match axis {
        0 => [[Complex::new(z, z), Complex::new(o, z)], [Complex::new(o, z), Complex::new(z, z)]],
        1 => [[Complex::new(z, z), Complex::new(z, -o)], [Complex::new(z, o), Complex::new(z, z)]],
        2 => [[Complex::new(o, z), Complex::new(z, z)], [Complex::new(z, z), Complex::new(-o, z)]],
        _ => panic!("Pauli axis index must be 0, 1 or 2"),
    }
}

/// Kronecker product of two 2×2 matrices, basis order |00⟩, |01⟩, |10⟩, |11⟩.
pub fn kron2<T: Real>(a: &CMat<T, 2>, b: &CMat<T, 2>) -> CMat<T, 4> {
    let mut out = [[czero(); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// `σ_axis ⊗ I`, the local spin operator acting on the first qubit.
pub fn local_pauli<T: Real>(axis: usize) -> CMat<T, 4> {
    kron2(&pauli(axis), &identity())
}

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues ascend; column `k`
/// of `vectors` is the eigenvector belonging to `values[k]`.
#[derive(Debug, Clone, Copy)]
pub struct HermitianEigen<T, const N: usize> {
    pub values: [T; N],
    pub vectors: CMat<T, N>,
}

const MAX_SWEEPS: usize = 100;

/// Cyclic complex Jacobi method. Converges when the off-diagonal Frobenius
/// norm drops below `1e-14 · max(1, ‖A‖_F)` (or the scalar's own precision
/// floor, whichever is larger).
pub fn hermitian_eigen<T: Real, const N: usize>(input: &CMat<T, N>) -> HermitianEigen<T, N> {
    let mut a = *input;
    // Symmetrize so that round-off in the caller cannot leave an anti-Hermitian residue.
    for i in 0..N {
        a[i][i] = Complex::new(a[i][i].re, T::zero());
        for j in (i + 1)..N {
            let avg = (a[i][j] + a[j][i].conj()) * T::lit(0.5);
            a[i][j] = avg;
            a[j][i] = avg.conj();
        }
    }
    let mut v: CMat<T, N> = identity();

    let frob = (0..N)
        .flat_map(|i| (0..N).map(move |j| (i, j)))
        .map(|(i, j)| a[i][j].norm_sqr())
        .sum::<T>()
        .sqrt();
    let tol = T::lit(1e-14).max(T::epsilon() * T::lit(4.0)) * frob.max(T::one());

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= tol {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let b = a[p][q];
                let mag = b.norm();
                if mag <= T::min_positive_value() {
                    continue;
                }
                let phase = b / mag;
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                let theta = (aqq - app) / (mag + mag);
                let t = if theta.abs() > T::lit(1e150) {
                    T::one() / (theta + theta)
                } else {
                    let s = if theta >= T::zero() { T::one() } else { -T::one() };
                    s / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;

                // G = diag(.., e^{-iφ} at q, ..) · rotation(p, q)
                let mut g: CMat<T, N> = identity();
                let conj_phase = phase.conj();
                g[p][p] = Complex::new(c, T::zero());
                g[p][q] = Complex::new(s, T::zero());
                g[q][p] = conj_phase * (-s);
                g[q][q] = conj_phase * c;

                a = matmul(&dagger(&g), &matmul(&a, &g));
                a[p][q] = czero();
                a[q][p] = czero();
                v = matmul(&v, &g);
            }
        }
    }

    let mut order: [usize; N] = [0; N];
    for (i, o) in order.iter_mut().enumerate() {
        *o = i;
    }
    order.sort_by(|&i, &j| a[i][i].re.partial_cmp(&a[j][j].re).unwrap_or(std::cmp::Ordering::Equal));

    let mut values = [T::zero(); N];
    let mut vectors = [[czero(); N]; N];
    for (k, &src) in order.iter().enumerate() {
        values[k] = a[src][src].re;
        for row in 0..N {
            vectors[row][k] = v[row][src];
        }
    }
    HermitianEigen { values, vectors }
}

/// Largest eigenvalue of a real symmetric 3×3 matrix via the trigonometric
/// solution of the characteristic cubic.
pub fn sym3_lambda_max_cubic<T: Real>(a: &RMat<T, 3>) -> T {
    let p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    if p1 == T::zero() {
        return a[0][0].max(a[1][1]).max(a[2][2]);
    }
    let three = T::lit(3.0);
    let q = (a[0][0] + a[1][1] + a[2][2]) / three;
    let d0 = a[0][0] - q;
    let d1 = a[1][1] - q;
    let d2 = a[2][2] - q;
    let p2 = d0 * d0 + d1 * d1 + d2 * d2 + (p1 + p1);
    let p = (p2 / T::lit(6.0)).sqrt();
    let b = [
        [d0 / p, a[0][1] / p, a[0][2] / p],
        [a[1][0] / p, d1 / p, a[1][2] / p],
        [a[2][0] / p, a[2][1] / p, d2 / p],
    ];
    let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let r = (det / T::lit(2.0)).max(-T::one()).min(T::one());
    let phi = r.acos() / three;
    q + (p + p) * phi.cos()
}

/// Largest eigenvalue of a real symmetric 3×3 matrix via Jacobi rotations.
pub fn sym3_lambda_max_jacobi<T: Real>(a: &RMat<T, 3>) -> T {
    hermitian_eigen(&to_complex(a)).values[2]
}
