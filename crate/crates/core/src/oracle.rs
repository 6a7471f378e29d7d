//! Brute-force verification path.
//!
//! Nothing in this module uses the X-state structure: the state is
//! diagonalized as a generic 4×4 Hermitian matrix, `M` and `W` are built from
//! their spectral definitions, and the minimization over local observables is
//! carried out numerically on the Bloch sphere.

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;

use crate::correlations::{Measure, PAIR_CUTOFF};
use crate::error::{Error, Result};
use crate::linalg::{
    czero, dagger, hermitian_eigen, kron2, local_pauli, matmul, pauli, sym3_lambda_max_cubic, trace, CMat,
    RMat,
};
use crate::scalar::Real;
use crate::xmodel::{HamiltonianParams, XMatrix};

const HERMITIAN_TOLERANCE: f64 = 1e-12;
const TRACE_TOLERANCE: f64 = 1e-12;
const NEGATIVE_EIGENVALUE_TOLERANCE: f64 = 1e-12;

/// A validated two-qubit density matrix with no assumed structure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenericDensityMatrix<T> {
    m: CMat<T, 4>,
}

impl<T: Real> GenericDensityMatrix<T> {
    pub fn new(m: CMat<T, 4>) -> Result<Self> {
        let tol = T::lit(HERMITIAN_TOLERANCE);
        for i in 0..4 {
            for j in 0..4 {
                if !(m[i][j].re.is_finite() && m[i][j].im.is_finite()) {
                    return Err(Error::InvalidDensityMatrix("non-finite entry".into()));
                }
                if (m[i][j] - m[j][i].conj()).norm() > tol {
                    return Err(Error::InvalidDensityMatrix(format!("not Hermitian at ({i}, {j})")));
                }
            }
        }
        let tr = trace(&m);
        if (tr.re - T::one()).abs() > T::lit(TRACE_TOLERANCE) || tr.im.abs() > T::lit(TRACE_TOLERANCE) {
            return Err(Error::InvalidDensityMatrix(format!("trace is {tr}")));
        }
        let lowest = hermitian_eigen(&m).values[0];
        if lowest < -T::lit(NEGATIVE_EIGENVALUE_TOLERANCE) {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {lowest}")));
        }
        Ok(Self { m })
    }

    pub fn from_xmatrix(x: &XMatrix<T>) -> Result<Self> {
        Self::new(x.to_dense())
    }

    pub fn matrix(&self) -> &CMat<T, 4> {
        &self.m
    }
}

/// Local observable `n·σ` on the first qubit, `n` a unit vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalObservable<T> {
    pub n: [T; 3],
}

impl<T: Real> LocalObservable<T> {
    pub fn new(n: [T; 3]) -> Result<Self> {
        let norm2 = n[0] * n[0] + n[1] * n[1] + n[2] * n[2];
        if (norm2 - T::one()).abs() > T::lit(1e-12) {
            return Err(Error::InvalidDensityMatrix(format!("Bloch vector has squared norm {norm2}")));
        }
        Ok(Self { n })
    }

    /// Normalizes an arbitrary nonzero direction.
    pub fn from_direction(d: [T; 3]) -> Self {
        let norm = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        Self { n: [d[0] / norm, d[1] / norm, d[2] / norm] }
    }

    /// `1 - nᵀ K n` for a symmetric 3×3 `K`.
    pub fn gap(&self, k: &RMat<T, 3>) -> T {
        let mut q = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                q = q + self.n[i] * k[i][j] * self.n[j];
            }
        }
        T::one() - q
    }
}

fn clamp_spectrum<T: Real>(values: [T; 4]) -> [T; 4] {
    values.map(|p| p.max(T::zero()))
}

/// Matrix elements ⟨m|σ_μ ⊗ I|n⟩ in the eigenbasis given by the columns of `v`.
fn spins_in_basis<T: Real>(v: &CMat<T, 4>) -> [CMat<T, 4>; 3] {
    let vh = dagger(v);
    [0, 1, 2].map(|axis| matmul(&vh, &matmul(&local_pauli(axis), v)))
}

/// `M_μν = Σ 2 p_m p_n / (p_m + p_n) ⟨m|σ_μ⊗I|n⟩⟨n|σ_ν⊗I|m⟩` without validation.
pub fn m_matrix_unchecked<T: Real>(rho: &CMat<T, 4>) -> RMat<T, 3> {
    let eig = hermitian_eigen(rho);
    let p = clamp_spectrum(eig.values);
    let s = spins_in_basis(&eig.vectors);
    let cutoff = T::lit(PAIR_CUTOFF);
    let two = T::lit(2.0);
    let mut out = [[T::zero(); 3]; 3];
    for mu in 0..3 {
        for nu in mu..3 {
            let mut acc = T::zero();
            for m in 0..4 {
                for n in 0..4 {
                    let sum = p[m] + p[n];
                    if sum < cutoff {
                        continue;
                    }
                    let w = two * p[m] * p[n] / sum;
                    acc = acc + w * (s[mu][m][n] * s[nu][n][m]).re;
                }
            }
            out[mu][nu] = acc;
            out[nu][mu] = acc;
        }
    }
    out
}

/// `ρ^{1/2}` by spectral decomposition; eigenvalues below zero are clamped.
pub fn sqrt_psd<T: Real>(rho: &CMat<T, 4>) -> CMat<T, 4> {
    let eig = hermitian_eigen(rho);
    let roots = clamp_spectrum(eig.values).map(T::sqrt);
    let mut scaled = eig.vectors;
    for row in scaled.iter_mut() {
        for (k, e) in row.iter_mut().enumerate() {
            *e = *e * roots[k];
        }
    }
    matmul(&scaled, &dagger(&eig.vectors))
}

/// `W_μν = tr{ρ^{1/2} (σ_μ⊗I) ρ^{1/2} (σ_ν⊗I)}` without validation.
pub fn w_matrix_unchecked<T: Real>(rho: &CMat<T, 4>) -> RMat<T, 3> {
    let root = sqrt_psd(rho);
    let sandwiched = [0, 1, 2].map(|axis| matmul(&root, &local_pauli(axis)));
    let mut out = [[T::zero(); 3]; 3];
    for mu in 0..3 {
        for nu in mu..3 {
            let w = trace(&matmul(&sandwiched[mu], &sandwiched[nu])).re;
            out[mu][nu] = w;
            out[nu][mu] = w;
        }
    }
    out
}

pub fn oracle_m_matrix<T: Real>(rho: &GenericDensityMatrix<T>) -> RMat<T, 3> {
    m_matrix_unchecked(&rho.m)
}

pub fn oracle_w_matrix<T: Real>(rho: &GenericDensityMatrix<T>) -> RMat<T, 3> {
    w_matrix_unchecked(&rho.m)
}

pub fn oracle_matrix<T: Real>(rho: &GenericDensityMatrix<T>, which: Measure) -> RMat<T, 3> {
    match which {
        Measure::Lqfi => oracle_m_matrix(rho),
        Measure::Lqu => oracle_w_matrix(rho),
    }
}

/// `1 - λ_max(K)` with `K = M` (LQFI) or `K = W` (LQU).
pub fn oracle_measure<T: Real>(rho: &GenericDensityMatrix<T>, which: Measure) -> T {
    T::one() - sym3_lambda_max_cubic(&oracle_matrix(rho, which))
}

/// Result of the explicit search over local observables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableMinimum<T> {
    /// Refined minimum of `1 - nᵀ K n`.
    pub value: T,
    /// Best value found on the Fibonacci grid alone.
    pub grid_value: T,
    pub observable: LocalObservable<T>,
}

pub const SPHERE_GRID_POINTS: usize = 2048;

/// Spherical Fibonacci grid of `count` nearly uniform unit vectors.
pub fn fibonacci_sphere<T: Real>(count: usize) -> Vec<[T; 3]> {
    let golden_angle = T::PI() * (T::lit(3.0) - T::lit(5.0).sqrt());
    let nf = T::from_usize(count).expect("grid size fits scalar");
    (0..count)
        .map(|i| {
            let fi = T::from_usize(i).expect("index fits scalar");
            let z = T::one() - (fi + fi + T::one()) / nf;
            let r = (T::one() - z * z).max(T::zero()).sqrt();
            let phi = golden_angle * fi;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

fn orthonormal_tangents<T: Real>(n: [T; 3]) -> ([T; 3], [T; 3]) {
    // Pick the coordinate axis least aligned with n.
    let abs = n.map(T::abs);
    let k = if abs[0] <= abs[1] && abs[0] <= abs[2] {
        0
    } else if abs[1] <= abs[2] {
        1
    } else {
        2
    };
    let mut e = [T::zero(); 3];
    e[k] = T::one();
    let dot = n[k];
    let t1 = [e[0] - dot * n[0], e[1] - dot * n[1], e[2] - dot * n[2]];
    let norm = (t1[0] * t1[0] + t1[1] * t1[1] + t1[2] * t1[2]).sqrt();
    let t1 = t1.map(|c| c / norm);
    let t2 = [
        n[1] * t1[2] - n[2] * t1[1],
        n[2] * t1[0] - n[0] * t1[2],
        n[0] * t1[1] - n[1] * t1[0],
    ];
    (t1, t2)
}

fn nelder_mead_2d<T: Real, F: Fn([T; 2]) -> T>(f: F, step: T, max_iter: usize) -> ([T; 2], T) {
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let mut simplex = [[T::zero(), T::zero()], [step, T::zero()], [T::zero(), step]];
    let mut values = simplex.map(&f);
    for _ in 0..max_iter {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap_or(std::cmp::Ordering::Equal));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);

        let spread = values[2] - values[0];
        let size = (0..2)
            .map(|d| (simplex[1][d] - simplex[0][d]).abs().max((simplex[2][d] - simplex[0][d]).abs()))
            .fold(T::zero(), T::max);
        if spread <= T::epsilon() && size <= T::lit(1e-12) {
            break;
        }

        let centroid = [(simplex[0][0] + simplex[1][0]) * half, (simplex[0][1] + simplex[1][1]) * half];
        let along = |t: T| {
            [
                centroid[0] + t * (simplex[2][0] - centroid[0]),
                centroid[1] + t * (simplex[2][1] - centroid[1]),
            ]
        };
        let reflected = along(-T::one());
        let fr = f(reflected);
        if fr < values[0] {
            let expanded = along(-two);
            let fe = f(expanded);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let contracted = if fr < values[2] { along(-half) } else { along(half) };
            let fc = f(contracted);
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for k in 1..3 {
                    simplex[k] = [
                        simplex[0][0] + (simplex[k][0] - simplex[0][0]) * half,
                        simplex[0][1] + (simplex[k][1] - simplex[0][1]) * half,
                    ];
                    values[k] = f(simplex[k]);
                }
            }
        }
    }
    let best = (0..3)
        .min_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap_or(0);
    (simplex[best], values[best])
}

/// Minimizes `1 - nᵀ K n` over unit vectors `n` by a Fibonacci-grid scan
/// followed by a derivative-free polish in the tangent plane of the best
/// grid point.
pub fn minimize_over_observables<T: Real>(rho: &GenericDensityMatrix<T>, which: Measure) -> ObservableMinimum<T> {
    let k = oracle_matrix(rho, which);
    minimize_quadratic_gap(&k)
}

pub fn minimize_quadratic_gap<T: Real>(k: &RMat<T, 3>) -> ObservableMinimum<T> {
    let grid = fibonacci_sphere::<T>(SPHERE_GRID_POINTS);
    let (best_idx, grid_value) = grid
        .par_iter()
        .enumerate()
        .map(|(i, n)| (i, LocalObservable { n: *n }.gap(k)))
        .reduce(
            || (usize::MAX, T::infinity()),
            |a, b| match a.1.partial_cmp(&b.1) {
                Some(std::cmp::Ordering::Less) => a,
                Some(std::cmp::Ordering::Greater) => b,
                _ => {
                    if a.0 <= b.0 {
                        a
                    } else {
                        b
                    }
                }
            },
        );

    let mut center = grid[best_idx];
    let mut best_value = grid_value;
    let mut step = T::lit(0.1);
    // Two polish rounds, re-centring the tangent plane on the current optimum.
    for _ in 0..2 {
        let (t1, t2) = orthonormal_tangents(center);
        let point = |x: [T; 2]| {
            [
                center[0] + x[0] * t1[0] + x[1] * t2[0],
                center[1] + x[0] * t1[1] + x[1] * t2[1],
                center[2] + x[0] * t1[2] + x[1] * t2[2],
            ]
        };
        let objective = |x: [T; 2]| LocalObservable::from_direction(point(x)).gap(k);
        let (x, v) = nelder_mead_2d(objective, step, 400);
        if v < best_value {
            best_value = v;
            center = LocalObservable::from_direction(point(x)).n;
        }
        step = T::lit(1e-3);
    }

    ObservableMinimum { value: best_value, grid_value, observable: LocalObservable { n: center } }
}

/// Hamiltonian assembled from tensor products of Pauli matrices.
pub fn hamiltonian_from_paulis<T: Real>(h: &HamiltonianParams<T>) -> CMat<T, 4> {
    let sx = pauli::<T>(0);
    let sy = pauli::<T>(1);
    let sz = pauli::<T>(2);
    let id = crate::linalg::identity::<T, 2>();
    let terms: [(T, CMat<T, 4>); 7] = [
        (h.jx, kron2(&sx, &sx)),
        (h.jy, kron2(&sy, &sy)),
        (h.jz, kron2(&sz, &sz)),
        (h.dz, sub(&kron2(&sx, &sy), &kron2(&sy, &sx))),
        (h.gz, add(&kron2(&sx, &sy), &kron2(&sy, &sx))),
        (h.b1, kron2(&sz, &id)),
        (h.b2, kron2(&id, &sz)),
    ];
    let mut out = [[czero(); 4]; 4];
    for (c, m) in terms.iter() {
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = out[i][j] + m[i][j] * *c;
            }
        }
    }
    out
}

fn add<T: Real>(a: &CMat<T, 4>, b: &CMat<T, 4>) -> CMat<T, 4> {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = out[i][j] + b[i][j];
        }
    }
    out
}

fn sub<T: Real>(a: &CMat<T, 4>, b: &CMat<T, 4>) -> CMat<T, 4> {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = out[i][j] - b[i][j];
        }
    }
    out
}

/// `exp(-H/T)/Z` by diagonalizing the Pauli-assembled Hamiltonian.
pub fn gibbs_by_diagonalization<T: Real>(h: &HamiltonianParams<T>, t: T) -> Result<CMat<T, 4>> {
    if !(t > T::zero()) {
        return Err(Error::NonPositiveTemperature(t.as_f64()));
    }
    let eig = hermitian_eigen(&hamiltonian_from_paulis(h));
    let e0 = eig.values[0];
    let weights = eig.values.map(|e| (-(e - e0) / t).exp());
    let z: T = weights.iter().copied().sum();
    let mut scaled = eig.vectors;
    for row in scaled.iter_mut() {
        for (k, e) in row.iter_mut().enumerate() {
            *e = *e * (weights[k] / z);
        }
    }
    Ok(matmul(&scaled, &dagger(&eig.vectors)))
}

/// Local phase unitary `diag(1, e^{iα}) ⊗ diag(1, e^{iβ})`.
pub fn local_phase_unitary<T: Real>(alpha: T, beta: T) -> CMat<T, 4> {
    let one = Complex::new(T::one(), T::zero());
    let z = czero();
    let a: CMat<T, 2> = [[one, z], [z, Complex::from_polar(T::one(), alpha)]];
    let b: CMat<T, 2> = [[one, z], [z, Complex::from_polar(T::one(), beta)]];
    kron2(&a, &b)
}

/// `exp(-i θ n·σ / 2) ⊗ I`: rotation of qubit A by `angle` about `axis`.
pub fn rotation_on_a<T: Real>(axis: [T; 3], angle: T) -> CMat<T, 4> {
    let n = LocalObservable::from_direction(axis).n;
    let half = angle * T::lit(0.5);
    let (c, s) = (half.cos(), half.sin());
    let mut u: CMat<T, 2> = crate::linalg::identity();
    for (k, nk) in n.iter().enumerate() {
        let p = pauli::<T>(k);
        for i in 0..2 {
            for j in 0..2 {
                // -i s n_k σ_k
                u[i][j] = u[i][j] + p[i][j] * Complex::new(T::zero(), -s * *nk);
            }
        }
    }
    for i in 0..2 {
        u[i][i] = u[i][i] - Complex::new(T::one() - c, T::zero());
    }
    kron2(&u, &crate::linalg::identity::<T, 2>())
}

/// `U ρ U†`.
pub fn conjugate<T: Real>(u: &CMat<T, 4>, rho: &CMat<T, 4>) -> CMat<T, 4> {
    matmul(&matmul(u, rho), &dagger(u))
}

/// Random valid X state: Dirichlet(1,1,1,1) populations and coherences with
/// uniformly random modulus fraction of `sqrt(ad)` (resp. `sqrt(bc)`) and phase.
pub fn random_xstate<T: Real, R: Rng + ?Sized>(rng: &mut R) -> XMatrix<T> {
    let e: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.gen::<f64>()).ln());
    let total: f64 = e.iter().sum();
    let [a, b, c, d] = e.map(|v| v / total);
    let u = (a * d).sqrt() * rng.gen::<f64>();
    let v = (b * c).sqrt() * rng.gen::<f64>();
    let tau = std::f64::consts::TAU;
    let (pu, pv) = (rng.gen::<f64>() * tau, rng.gen::<f64>() * tau);
    let cplx = |m: f64, ph: f64| Complex::new(T::lit(m * ph.cos()), T::lit(m * ph.sin()));
    XMatrix { a: T::lit(a), b: T::lit(b), c: T::lit(c), d: T::lit(d), u: cplx(u, pu), v: cplx(v, pv) }
}
