use super::{PulseSequence, SequenceElement, Target};
use crate::error::{Error, Result};
use crate::qcore::RotationAxis;
use crate::scalar::Real;

/// Named circuit components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    /// Pseudo-pure preparation from the thermal state.
    P,
    /// `P` then `X(−π/4)` on the system.
    P1,
    /// `P` then `Y(2π/5)` on the system.
    P2,
    /// CNOT, system control.
    Uc,
    /// `X(π)` on the system around `Uc`.
    Uac,
    /// Refocused delay of `a τ`.
    Dat,
    /// System-detector evolution for one interval.
    Uv1,
    /// System-detector evolution for two intervals.
    Uv2,
}

impl Component {
    pub const ALL: [Component; 8] = [
        Component::P,
        Component::P1,
        Component::P2,
        Component::Uc,
        Component::Uac,
        Component::Dat,
        Component::Uv1,
        Component::Uv2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Component::P => "P",
            Component::P1 => "P1",
            Component::P2 => "P2",
            Component::Uc => "Uc",
            Component::Uac => "Uac",
            Component::Dat => "Dat",
            Component::Uv1 => "Uv1",
            Component::Uv2 => "Uv2",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::UnknownComponent(name.to_string()))
    }
}

/// Angles `(α, β, γ)` reported for the system-detector pulse templates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorAngles<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
}

/// Reported template angles, kept as data for user-supplied templates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentLibrary<T> {
    pub uv1_angles: DetectorAngles<T>,
    pub uv2_angles: DetectorAngles<T>,
}

impl<T: Real> Default for ComponentLibrary<T> {
    fn default() -> Self {
        Self {
            uv1_angles: DetectorAngles {
                alpha: T::lit(4.9751),
                beta: T::lit(1.8335),
                gamma: T::lit(0.1035),
            },
            uv2_angles: DetectorAngles {
                alpha: T::lit(5.2433),
                beta: T::lit(2.1018),
                gamma: T::lit(0.1998),
            },
        }
    }
}

/// Parameters substituted into component templates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentParams<T> {
    /// Detector coupling `λ`.
    pub lambda: T,
    /// Free rotation angle `ωt` of one interval.
    pub omega_t: T,
    /// Delay multiplier `a`.
    pub a: T,
    /// Delay unit `τ` in seconds.
    pub tau: T,
}

impl<T: Real> Default for ComponentParams<T> {
    fn default() -> Self {
        Self {
            lambda: T::lit(0.11),
            omega_t: T::lit(0.3) * T::PI(),
            a: T::one(),
            tau: T::lit(0.1),
        }
    }
}

fn rot<T: Real>(axis: RotationAxis, angle: T, target: Target) -> SequenceElement<T> {
    SequenceElement::rot(axis, angle, target)
}

fn pseudo_pure<T: Real>() -> Vec<SequenceElement<T>> {
    let pi = T::PI();
    vec![
        rot(RotationAxis::X, pi / T::lit(3.0), Target::Ancilla),
        SequenceElement::gradient(),
        rot(RotationAxis::X, pi / T::lit(4.0), Target::System),
        SequenceElement::zz(pi / T::lit(2.0)),
        rot(RotationAxis::Y, -pi / T::lit(4.0), Target::System),
        SequenceElement::gradient(),
    ]
}

fn cnot<T: Real>() -> Vec<SequenceElement<T>> {
    let half_pi = T::FRAC_PI_2();
    vec![
        rot(RotationAxis::Y, -half_pi, Target::Ancilla),
        SequenceElement::zz(-half_pi),
        rot(RotationAxis::Z, half_pi, Target::System),
        rot(RotationAxis::Z, half_pi, Target::Ancilla),
        rot(RotationAxis::Y, half_pi, Target::Ancilla),
    ]
}

/// `exp(−i H_D t_total)` as ancilla-frame ZZ conjugations around a system
/// `X` rotation: `H_D` is a rotation of `X⊗I` by `atan(2λ)` generated by
/// `Z⊗X`.
fn detector_evolution<T: Real>(lambda: T, omega_t_total: T) -> Vec<SequenceElement<T>> {
    let half_pi = T::FRAC_PI_2();
    let tilt = (T::lit(2.0) * lambda).atan();
    let big_angle = omega_t_total * (T::one() + T::lit(4.0) * lambda * lambda).sqrt();
    vec![
        rot(RotationAxis::Y, -half_pi, Target::Ancilla),
        SequenceElement::zz(-tilt),
        rot(RotationAxis::Y, half_pi, Target::Ancilla),
        rot(RotationAxis::X, big_angle, Target::System),
        rot(RotationAxis::Y, -half_pi, Target::Ancilla),
        SequenceElement::zz(tilt),
        rot(RotationAxis::Y, half_pi, Target::Ancilla),
    ]
}

pub fn compile_component<T: Real>(
    component: Component,
    params: &ComponentParams<T>,
) -> Result<PulseSequence<T>> {
    let pi = T::PI();
    let elements = match component {
        Component::P => pseudo_pure(),
        Component::P1 => {
            let mut e = pseudo_pure();
            e.push(rot(RotationAxis::X, -pi / T::lit(4.0), Target::System));
            e
        }
        Component::P2 => {
            let mut e = pseudo_pure();
            e.push(rot(
                RotationAxis::Y,
                T::lit(2.0) * pi / T::lit(5.0),
                Target::System,
            ));
            e
        }
        Component::Uc => cnot(),
        Component::Uac => {
            let flip = rot(RotationAxis::X, pi, Target::System);
            let mut e = vec![flip.clone()];
            e.extend(cnot());
            e.push(flip);
            e
        }
        Component::Dat => {
            let half = SequenceElement::delay(params.a * params.tau / T::lit(2.0));
            let refocus = rot(RotationAxis::X, pi, Target::Ancilla);
            vec![half.clone(), refocus.clone(), half, refocus]
        }
        Component::Uv1 => detector_evolution(params.lambda, params.omega_t),
        Component::Uv2 => detector_evolution(params.lambda, T::lit(2.0) * params.omega_t),
    };
    PulseSequence::new(elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::Gate;
    use crate::pulses::{
        apply_sequence, fidelity, sequence_unitary_ideal, sequence_unitary_with_drift,
        verify_decomposition, NmrPair,
    };
    use crate::qcore::{detector_propagator, DensityState, Matrix, Pauli, TwoQubitState};
    use std::f64::consts::PI;

    fn params() -> ComponentParams<f64> {
        ComponentParams::default()
    }

    #[test]
    fn names_parse_and_unknown_fails() {
        for c in Component::ALL {
            assert_eq!(Component::parse(c.name()).unwrap(), c);
        }
        assert!(matches!(
            Component::parse("Q7"),
            Err(Error::UnknownComponent(_))
        ));
    }

    #[test]
    fn compiled_cnot_is_exact() {
        let seq = compile_component(Component::Uc, &params()).unwrap();
        let f = verify_decomposition(&seq, &Gate::Cnot.matrix(), &NmrPair::default()).unwrap();
        assert!((f - 1.0).abs() < 1e-12);
        let seq = compile_component(Component::Uac, &params()).unwrap();
        let f = verify_decomposition(&seq, &Gate::AntiCnot.matrix(), &NmrPair::default()).unwrap();
        assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn detector_components_match_propagator() {
        let p = params();
        for (c, t) in [
            (Component::Uv1, p.omega_t),
            (Component::Uv2, 2.0 * p.omega_t),
        ] {
            let seq = compile_component(c, &p).unwrap();
            let target = detector_propagator(1.0, p.lambda, t).unwrap();
            let f = verify_decomposition(&seq, &target, &NmrPair::default()).unwrap();
            assert!((f - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn drift_degrades_detector_block_slowly_and_monotonically() {
        let p = params();
        let pair = NmrPair::default();
        let seq = compile_component(Component::Uv1, &p).unwrap();
        let ideal = sequence_unitary_ideal(&seq, &pair).unwrap();
        let f10 = fidelity(
            &sequence_unitary_with_drift(&seq, &pair, 1e-5).unwrap(),
            &ideal,
        )
        .unwrap();
        assert!(f10 >= 0.99, "{f10}");
        let mut last = 1.0;
        for tau in [0.0, 1e-6, 5e-6, 1e-5, 2e-5, 5e-5, 1e-4, 2e-4] {
            let f = fidelity(
                &sequence_unitary_with_drift(&seq, &pair, tau).unwrap(),
                &ideal,
            )
            .unwrap();
            assert!(f <= last + 1e-12, "tau {tau}: {f} > {last}");
            last = f;
        }
        assert!(last < 1.0);
    }

    #[test]
    fn refocused_delay_is_identity_on_both_qubits() {
        for tau in [0.0, 0.1, 0.37] {
            let p = ComponentParams {
                tau,
                a: 2.0,
                ..params()
            };
            let seq = compile_component(Component::Dat, &p).unwrap();
            let f = verify_decomposition(&seq, &Matrix::identity(4), &NmrPair::default()).unwrap();
            assert!((f - 1.0).abs() < 1e-12, "tau {tau}: {f}");
        }
    }

    #[test]
    fn preparation_reaches_pseudo_pure_populations() {
        let eps = 0.1;
        let deviation = &Matrix::pauli2(Pauli::Z, Pauli::I) + &Matrix::pauli2(Pauli::I, Pauli::Z);
        let thermal = &Matrix::identity(4).scale_real(0.25) + &deviation.scale_real(eps / 4.0);
        let rho = TwoQubitState::new(thermal).unwrap();
        let seq = compile_component(Component::P, &params()).unwrap();
        let out = apply_sequence(&seq, &rho, &NmrPair::default()).unwrap();
        let d = out.matrix().real_diagonal();
        let rest = d[1];
        assert!(d[0] > rest);
        assert!((d[2] - rest).abs() < 1e-12 && (d[3] - rest).abs() < 1e-12);
        let off: f64 = (0..4)
            .flat_map(|r| (0..4).map(move |c| (r, c)))
            .filter(|(r, c)| r != c)
            .map(|(r, c)| out.matrix().get(r, c).norm())
            .sum();
        assert!(off < 1e-15);
    }

    #[test]
    fn prepared_states_have_expected_system_bloch_vectors() {
        let pps = TwoQubitState::<f64>::basis(0, 0);
        let pair = NmrPair::default();
        for (c, want) in [
            (Component::P1, [0.0, (PI / 4.0).sin(), (PI / 4.0).cos()]),
            (Component::P2, [(0.4 * PI).sin(), 0.0, (0.4 * PI).cos()]),
        ] {
            let seq = compile_component(c, &params()).unwrap();
            // Apply only the trailing rotation to the pseudo-pure stand-in.
            let tail = PulseSequence::new(seq.elements()[6..].to_vec()).unwrap();
            let out = apply_sequence(&tail, &pps, &pair).unwrap();
            let sys = crate::qcore::partial_trace(&out, crate::qcore::Subsystem::System);
            let v = crate::qcore::bloch_from_density(&sys);
            assert!((v.x - want[0]).abs() < 1e-12);
            assert!((v.y - want[1]).abs() < 1e-12);
            assert!((v.z - want[2]).abs() < 1e-12);
        }
    }
}
