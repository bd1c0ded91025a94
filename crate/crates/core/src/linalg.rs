//! Exact one- and two-qubit linear algebra.
//!
//! Two-qubit objects live in the product space `B ⊗ A`: spin B is the left
//! tensor factor, so the basis state `|b a⟩` sits at index [`basis_index`]`(b, a)`
//! `= 2b + a` and the amplitude order is `|00⟩, |01⟩, |10⟩, |11⟩`.

use std::ops::Mul;

use nalgebra::{DMatrix, SMatrix, SVector};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use num_complex::Complex64 as Complex;

pub type Mat2 = SMatrix<Complex, 2, 2>;
pub type Mat4 = SMatrix<Complex, 4, 4>;
pub type Ket2 = SVector<Complex, 2>;
pub type Ket4 = SVector<Complex, 4>;

pub const NORM_TOL: f64 = 1e-12;
pub const UNITARY_TOL: f64 = 1e-10;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
/// Eigenvalues below this are treated as exactly zero inside the entropy.
pub const ENTROPY_CLAMP: f64 = 1e-12;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);

/// Position of `|b⟩_B |a⟩_A` in a two-qubit amplitude vector.
pub const fn basis_index(b: usize, a: usize) -> usize {
    2 * b + a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

fn all_finite<'a>(it: impl IntoIterator<Item = &'a Complex>) -> bool {
    it.into_iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn max_abs<const R: usize, const C: usize>(m: &SMatrix<Complex, R, C>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff<const R: usize, const C: usize>(
    a: &SMatrix<Complex, R, C>,
    b: &SMatrix<Complex, R, C>,
) -> f64 {
    max_abs(&(a - b))
}

/// Pure two-qubit state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Ket4,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized.
    pub fn new(amps: [Complex; 4]) -> Result<Self> {
        let amps = Ket4::from(amps);
        if !all_finite(amps.iter()) {
            return Err(Error::NonFinite("state amplitudes"));
        }
        let norm_sq = amps.norm_squared();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sq));
        }
        Ok(Self { amps })
    }

    /// Rescales arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(amps: [Complex; 4]) -> Result<Self> {
        let amps = Ket4::from(amps);
        if !all_finite(amps.iter()) {
            return Err(Error::NonFinite("state amplitudes"));
        }
        let norm = amps.norm();
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        Ok(Self {
            amps: amps / Complex::from(norm),
        })
    }

    pub fn basis(b: usize, a: usize) -> Self {
        assert!(b < 2 && a < 2, "qubit labels are 0 or 1");
        let mut amps = Ket4::zeros();
        amps[basis_index(b, a)] = ONE;
        Self { amps }
    }

    /// `|b⟩_B ⊗ |a⟩_A` for normalized single-qubit kets.
    pub fn product(b: &Ket2, a: &Ket2) -> Result<Self> {
        Self::new(b.kronecker(a).into())
    }

    pub fn amplitudes(&self) -> [Complex; 4] {
        self.amps.into()
    }

    pub fn amplitude(&self, b: usize, a: usize) -> Complex {
        self.amps[basis_index(b, a)]
    }

    pub fn as_ket(&self) -> &Ket4 {
        &self.amps
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex {
        self.amps.dotc(&other.amps)
    }

    pub fn scaled_by_phase(&self, alpha: f64) -> Self {
        Self {
            amps: self.amps * Complex::from_polar(1.0, alpha),
        }
    }

    /// Computational-basis populations `|⟨ba|ψ⟩|²`.
    pub fn populations(&self) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (p, z) in out.iter_mut().zip(self.amps.iter()) {
            *p = z.norm_sqr();
        }
        out
    }

    pub fn density(&self) -> DensityMatrix<4> {
        DensityMatrix {
            m: self.amps * self.amps.adjoint(),
        }
    }
}

/// Unitary operator on one (`N = 2`) or two (`N = 4`) qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary<const N: usize> {
    m: SMatrix<Complex, N, N>,
}

pub type Gate = Unitary<2>;

impl<const N: usize> Unitary<N> {
    pub fn new(m: SMatrix<Complex, N, N>) -> Result<Self> {
        if !all_finite(m.iter()) {
            return Err(Error::NonFinite("operator entries"));
        }
        let defect = unitarity_defect(&m);
        if defect >= UNITARY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self { m })
    }

    pub(crate) fn from_matrix_unchecked(m: SMatrix<Complex, N, N>) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        Self {
            m: SMatrix::identity(),
        }
    }

    pub fn matrix(&self) -> &SMatrix<Complex, N, N> {
        &self.m
    }

    pub fn adjoint(&self) -> Self {
        Self {
            m: self.m.adjoint(),
        }
    }

    /// `max |U†U - I|` over entries.
    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.m)
    }

    /// Operator for "apply `self`, then `next`", i.e. `next · self`.
    pub fn then(&self, next: &Self) -> Self {
        Self { m: next.m * self.m }
    }

    pub fn scaled_by_phase(&self, alpha: f64) -> Self {
        Self {
            m: self.m * Complex::from_polar(1.0, alpha),
        }
    }
}

fn unitarity_defect<const N: usize>(m: &SMatrix<Complex, N, N>) -> f64 {
    max_abs(&(m.adjoint() * m - SMatrix::<Complex, N, N>::identity()))
}

impl<const N: usize> Mul for &Unitary<N> {
    type Output = Unitary<N>;

    fn mul(self, rhs: Self) -> Unitary<N> {
        Unitary { m: self.m * rhs.m }
    }
}

impl Gate {
    pub fn pauli_x() -> Self {
        Self {
            m: Mat2::new(ZERO, ONE, ONE, ZERO),
        }
    }

    pub fn pauli_y() -> Self {
        let i = Complex::i();
        Self {
            m: Mat2::new(ZERO, -i, i, ZERO),
        }
    }

    pub fn pauli_z() -> Self {
        Self {
            m: Mat2::new(ONE, ZERO, ZERO, -ONE),
        }
    }

    pub fn hadamard() -> Self {
        let h = Complex::from(std::f64::consts::FRAC_1_SQRT_2);
        Self {
            m: Mat2::new(h, h, h, -h),
        }
    }

    /// Real rotation `[[cos a, -sin a], [sin a, cos a]]`.
    pub fn real_rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            m: Mat2::new(c.into(), (-s).into(), s.into(), c.into()),
        }
    }

    pub fn apply_ket(&self, ket: &Ket2) -> Ket2 {
        self.m * ket
    }
}

/// Two-qubit operator acting as `b_op` on spin B and `a_op` on spin A.
pub fn tensor(b_op: &Gate, a_op: &Gate) -> Unitary<4> {
    Unitary {
        m: b_op.m.kronecker(&a_op.m),
    }
}

/// Lifts a single-spin operator into the joint space.
pub fn on_spin(target: Subsystem, op: &Gate) -> Unitary<4> {
    match target {
        Subsystem::B => tensor(op, &Gate::identity()),
        Subsystem::A => tensor(&Gate::identity(), op),
    }
}

pub fn apply(u: &Unitary<4>, s: &StateVector) -> StateVector {
    StateVector { amps: u.m * s.amps }
}

/// `|⟨a|b⟩|`, insensitive to a global phase on either argument.
pub fn phase_aligned_fidelity(a: &StateVector, b: &StateVector) -> f64 {
    a.inner(b).norm().min(1.0)
}

/// Density operator on one (`N = 2`) or two (`N = 4`) qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<const N: usize> {
    m: SMatrix<Complex, N, N>,
}

impl<const N: usize> DensityMatrix<N> {
    pub fn new(m: SMatrix<Complex, N, N>) -> Result<Self> {
        if !all_finite(m.iter()) {
            return Err(Error::NonFinite("density matrix entries"));
        }
        let asym = max_abs(&(m - m.adjoint()));
        if asym > HERMITIAN_TOL {
            return Err(Error::NotHermitian(asym));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let rho = Self { m };
        let min_eig = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(Error::NotPsd(min_eig));
        }
        Ok(rho)
    }

    /// Hermitian part of `m`, without the trace and positivity checks.
    pub(crate) fn from_matrix_unchecked(m: SMatrix<Complex, N, N>) -> Self {
        let half = Complex::from(0.5);
        Self {
            m: (m + m.adjoint()) * half,
        }
    }

    pub fn maximally_mixed() -> Self {
        Self {
            m: SMatrix::identity() / Complex::from(N as f64),
        }
    }

    pub fn matrix(&self) -> &SMatrix<Complex, N, N> {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn diagonal(&self) -> [f64; N] {
        std::array::from_fn(|i| self.m[(i, i)].re)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let dynamic = DMatrix::from_fn(N, N, |r, c| self.m[(r, c)]);
        let mut eig: Vec<f64> = dynamic.symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        eig
    }

    /// `U ρ U†`.
    pub fn evolve(&self, u: &Unitary<N>) -> Self {
        Self::from_matrix_unchecked(u.m * self.m * u.m.adjoint())
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        (self.m * self.m).trace().re
    }
}

impl DensityMatrix<4> {
    pub fn pure(s: &StateVector) -> Self {
        s.density()
    }

    /// Multiplies every coherence between states whose `spin` label differs by `weight`.
    pub fn damp_coherences(&self, spin: Subsystem, weight: f64) -> Self {
        let mut m = self.m;
        for r in 0..4 {
            for c in 0..4 {
                let (rb, ra) = (r / 2, r % 2);
                let (cb, ca) = (c / 2, c % 2);
                let differs = match spin {
                    Subsystem::A => ra != ca,
                    Subsystem::B => rb != cb,
                };
                if differs {
                    m[(r, c)] *= weight;
                }
            }
        }
        Self { m }
    }
}

/// Reduced state of the `keep` spin.
pub fn partial_trace(rho: &DensityMatrix<4>, keep: Subsystem) -> DensityMatrix<2> {
    let mut out = Mat2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = (0..2)
                .map(|k| match keep {
                    Subsystem::B => rho.m[(basis_index(i, k), basis_index(j, k))],
                    Subsystem::A => rho.m[(basis_index(k, i), basis_index(k, j))],
                })
                .sum();
        }
    }
    DensityMatrix::from_matrix_unchecked(out)
}

/// Closed-form eigenvalues of a 2×2 Hermitian matrix, ascending.
fn qubit_eigenvalues(rho: &DensityMatrix<2>) -> [f64; 2] {
    let a = rho.m[(0, 0)].re;
    let d = rho.m[(1, 1)].re;
    let off = rho.m[(0, 1)].norm();
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + off * off).sqrt();
    [mean - half_gap, mean + half_gap]
}

/// `S(ρ) = -Σ λ log₂ λ` in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix<2>) -> f64 {
    let s: f64 = qubit_eigenvalues(rho)
        .into_iter()
        .filter(|&l| l > ENTROPY_CLAMP)
        .map(|l| -l * l.log2())
        .sum();
    s.max(0.0)
}

/// Orthonormal real basis `|β₊⟩ = cosθ|0⟩ + sinθ|1⟩`, `|β₋⟩ = sinθ|0⟩ − cosθ|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Basis2 {
    pub theta: f64,
}

impl Basis2 {
    pub fn new(theta: f64) -> Self {
        Self { theta }
    }

    pub fn plus(&self) -> [f64; 2] {
        let (s, c) = self.theta.sin_cos();
        [c, s]
    }

    pub fn minus(&self) -> [f64; 2] {
        let (s, c) = self.theta.sin_cos();
        [s, -c]
    }

    pub fn plus_ket(&self) -> Ket2 {
        real_ket(self.plus())
    }

    pub fn minus_ket(&self) -> Ket2 {
        real_ket(self.minus())
    }
}

pub fn real_ket(v: [f64; 2]) -> Ket2 {
    Ket2::new(v[0].into(), v[1].into())
}
