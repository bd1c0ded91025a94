//! Analytic reference path: the marked superposition, the phase-shift /
//! beam-merge operator and the population fringes, built directly from their
//! closed forms without any pulse program.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::linalg::{apply, on_spin, Complex, Gate, Ket2, Mat2, StateVector, Subsystem};

/// The two marker angles. `|m±⟩_A = cos φ± |0⟩ + sin φ± |1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkerPair {
    pub phi_plus: f64,
    pub phi_minus: f64,
}

impl MarkerPair {
    pub fn new(phi_plus: f64, phi_minus: f64) -> Self {
        Self {
            phi_plus,
            phi_minus,
        }
    }

    /// Markers with `φ₊` fixed and marker angle `φ = φ₋ − φ₊`.
    pub fn from_marker_angle(phi_plus: f64, marker_angle: f64) -> Self {
        Self {
            phi_plus,
            phi_minus: phi_plus + marker_angle,
        }
    }

    /// `φ = φ₋ − φ₊`, the angle between the marker states.
    pub fn marker_angle(&self) -> f64 {
        self.phi_minus - self.phi_plus
    }

    pub fn plus(&self) -> [f64; 2] {
        let (s, c) = self.phi_plus.sin_cos();
        [c, s]
    }

    pub fn minus(&self) -> [f64; 2] {
        let (s, c) = self.phi_minus.sin_cos();
        [c, s]
    }

    /// `⟨m₊|m₋⟩ = cos φ`; always real here.
    pub fn overlap(&self) -> f64 {
        let (p, m) = (self.plus(), self.minus());
        p[0] * m[0] + p[1] * m[1]
    }
}

/// Relative phase `ϕ` added between the paths before they are merged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSetting(pub f64);

impl PhaseSetting {
    pub fn radians(self) -> f64 {
        self.0
    }
}

/// Path label of spin B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Path {
    Zero,
    One,
}

impl Path {
    pub fn index(self) -> usize {
        match self {
            Path::Zero => 0,
            Path::One => 1,
        }
    }
}

/// `(|0⟩_B|m₊⟩_A + |1⟩_B|m₋⟩_A)/√2`.
pub fn psi1(markers: &MarkerPair) -> StateVector {
    let (p, m) = (markers.plus(), markers.minus());
    let h = FRAC_1_SQRT_2;
    let amps = [h * p[0], h * p[1], h * m[0], h * m[1]].map(Complex::from);
    StateVector::normalized(amps).expect("marker states are normalized")
}

/// `(1/√2)[[1, e^{iϕ}], [−e^{−iϕ}, 1]]` acting on spin B.
pub fn u2(phase: PhaseSetting) -> Gate {
    let h = Complex::from(FRAC_1_SQRT_2);
    let e = Complex::from_polar(FRAC_1_SQRT_2, phase.0);
    Gate::new(Mat2::new(h, e, -e.conj(), h)).expect("U₂ is unitary")
}

/// Output state `U₂ ⊗ I_A |ψ₁⟩`.
pub fn psi2(markers: &MarkerPair, phase: PhaseSetting) -> StateVector {
    apply(&on_spin(Subsystem::B, &u2(phase)), &psi1(markers))
}

/// `½[|0⟩(|m₊⟩ + e^{iϕ}|m₋⟩) + |1⟩(|m₋⟩ − e^{−iϕ}|m₊⟩)]`, written out directly.
pub fn psi2_closed_form(markers: &MarkerPair, phase: PhaseSetting) -> StateVector {
    let p = Ket2::new(markers.plus()[0].into(), markers.plus()[1].into());
    let m = Ket2::new(markers.minus()[0].into(), markers.minus()[1].into());
    let e = Complex::from_polar(1.0, phase.0);
    let half = Complex::from(0.5);
    let zero_branch = (p + m * e) * half;
    let one_branch = (m - p * e.conj()) * half;
    StateVector::normalized([zero_branch[0], zero_branch[1], one_branch[0], one_branch[1]])
        .expect("output state is normalized")
}

/// Population of spin B on `path`: `(1 ± cos φ · cos ϕ)/2`.
pub fn population(markers: &MarkerPair, phase: PhaseSetting, path: Path) -> f64 {
    let fringe = markers.overlap() * phase.0.cos();
    match path {
        Path::Zero => 0.5 * (1.0 + fringe),
        Path::One => 0.5 * (1.0 - fringe),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::phase_aligned_fidelity;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn assert_amps(s: &StateVector, want: [f64; 4]) {
        for (z, w) in s.amplitudes().iter().zip(want) {
            assert_abs_diff_eq!(z.re, w, epsilon = 1e-15);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-15);
        }
    }

    fn b_population(s: &StateVector, b: usize) -> f64 {
        let p = s.populations();
        p[2 * b] + p[2 * b + 1]
    }

    #[test]
    fn psi1_examples() {
        let h = FRAC_1_SQRT_2;
        assert_amps(&psi1(&MarkerPair::new(0.0, 0.0)), [h, 0.0, h, 0.0]);
        assert_amps(&psi1(&MarkerPair::new(0.0, FRAC_PI_2)), [h, 0.0, 0.0, h]);
        // cos(3π/4) = −1/√2, sin(3π/4) = 1/√2, each scaled by 1/√2.
        assert_amps(
            &psi1(&MarkerPair::new(FRAC_PI_2, 3.0 * PI / 4.0)),
            [0.0, h, -0.5, 0.5],
        );
    }

    #[test]
    fn u2_examples() {
        let h = FRAC_1_SQRT_2;
        let want0 = Mat2::new(h.into(), h.into(), (-h).into(), h.into());
        assert!(crate::linalg::max_abs_diff(u2(PhaseSetting(0.0)).matrix(), &want0) < 1e-16);
        let i = Complex::new(0.0, h);
        let want90 = Mat2::new(h.into(), i, i, h.into());
        assert!(crate::linalg::max_abs_diff(u2(PhaseSetting(FRAC_PI_2)).matrix(), &want90) < 1e-16);
        for k in 0..8 {
            let u = u2(PhaseSetting(0.9 * k as f64));
            let product = &u.adjoint() * &u;
            assert!(
                crate::linalg::max_abs_diff(product.matrix(), Gate::identity().matrix()) < 1e-15
            );
        }
    }

    #[test]
    fn full_interference_at_zero_marker_angle() {
        let markers = MarkerPair::new(0.7, 0.7);
        let out = psi2(&markers, PhaseSetting(0.0));
        assert_abs_diff_eq!(b_population(&out, 0), 1.0, epsilon = 1e-15);
        let want = StateVector::normalized([
            0.7f64.cos().into(),
            0.7f64.sin().into(),
            0.0.into(),
            0.0.into(),
        ])
        .unwrap();
        assert_abs_diff_eq!(phase_aligned_fidelity(&out, &want), 1.0, epsilon = 1e-15);

        let flipped = psi2(&markers, PhaseSetting(PI));
        assert_abs_diff_eq!(b_population(&flipped, 1), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn orthogonal_markers_have_flat_populations() {
        let markers = MarkerPair::new(0.2, 0.2 + FRAC_PI_2);
        for k in 0..10 {
            let out = psi2(&markers, PhaseSetting(0.63 * k as f64));
            assert_abs_diff_eq!(b_population(&out, 0), 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(b_population(&out, 1), 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn population_examples() {
        assert_abs_diff_eq!(
            population(&MarkerPair::new(0.0, 0.0), PhaseSetting(0.0), Path::Zero),
            1.0
        );
        for k in 0..7 {
            let p = population(
                &MarkerPair::new(0.0, FRAC_PI_2),
                PhaseSetting(k as f64),
                Path::Zero,
            );
            assert_abs_diff_eq!(p, 0.5, epsilon = 1e-15);
        }
        let p = population(
            &MarkerPair::new(0.0, FRAC_PI_3),
            PhaseSetting(0.0),
            Path::Zero,
        );
        assert_abs_diff_eq!(p, 0.75, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn paths_sum_to_one(pp in -7.0f64..7.0, pm in -7.0f64..7.0, ph in -7.0f64..7.0) {
            let m = MarkerPair::new(pp, pm);
            let sum = population(&m, PhaseSetting(ph), Path::Zero) + population(&m, PhaseSetting(ph), Path::One);
            prop_assert!((sum - 1.0).abs() < 1e-12);
        }

        #[test]
        fn operator_route_matches_closed_form(pp in -7.0f64..7.0, pm in -7.0f64..7.0, ph in -7.0f64..7.0) {
            let m = MarkerPair::new(pp, pm);
            let a = psi2(&m, PhaseSetting(ph));
            let b = psi2_closed_form(&m, PhaseSetting(ph));
            prop_assert!(crate::linalg::max_abs_diff(a.as_ket(), b.as_ket()) < 1e-12);
            prop_assert!((b_population(&a, 0) - population(&m, PhaseSetting(ph), Path::Zero)).abs() < 1e-12);
        }

        #[test]
        fn population_depends_only_on_marker_angle(
            pp in -7.0f64..7.0, pm in -7.0f64..7.0, ph in -7.0f64..7.0, shift in -7.0f64..7.0, turns in -3i32..3,
        ) {
            let m = MarkerPair::new(pp, pm);
            let shifted = MarkerPair::new(pp + shift, pm + shift);
            let p = population(&m, PhaseSetting(ph), Path::Zero);
            prop_assert!((p - population(&shifted, PhaseSetting(ph), Path::Zero)).abs() < 1e-12);
            let periodic = PhaseSetting(ph + 2.0 * PI * turns as f64);
            prop_assert!((p - population(&m, periodic, Path::Zero)).abs() < 1e-12);
        }
    }
}
