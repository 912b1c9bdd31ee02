//! Two unentangled spin-½ particles, each prepared with `σ_x = +1`, and
//! `σ_y` measurements at two spacelike-separated events.
//!
//! Basis order is `|z₊z₊⟩, |z₊z₋⟩, |z₋z₊⟩, |z₋z₋⟩`; subsystem 1 is the
//! leading factor. Spin operators are those of the rest frame.

use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, RngCore};

use crate::spacetime::{FourVector, SpacelikeSlice};
use crate::{Error, Particle, Result, Sign};

/// Tolerance for unit norm.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Tolerance on `|det|` of the amplitude matrix for a product state.
pub const PRODUCT_TOLERANCE: f64 = 1e-9;

/// Two states are the same ray when `|⟨φ|ψ⟩| >= 1 - RAY_TOLERANCE`.
pub const RAY_TOLERANCE: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A single-spin ket over `|z₊⟩, |z₋⟩`.
pub type Spinor = [Complex64; 2];

/// A 2×2 operator on one spin, row-major.
pub type Operator = [[Complex64; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

pub fn pauli(axis: Axis) -> Operator {
    match axis {
        Axis::X => [[ZERO, ONE], [ONE, ZERO]],
        Axis::Y => [[ZERO, -I], [I, ZERO]],
        Axis::Z => [[ONE, ZERO], [ZERO, -ONE]],
    }
}

/// `σ·n` for a real 3-vector `n`.
pub fn spin_along(n: [f64; 3]) -> Operator {
    let [x, y, z] = n;
    [
        [Complex64::new(z, 0.0), Complex64::new(x, -y)],
        [Complex64::new(x, y), Complex64::new(-z, 0.0)],
    ]
}

/// `(1 ± σ_y)/2`.
fn sigma_y_projector(sign: Sign) -> Operator {
    let s = Complex64::new(0.5 * sign.as_f64(), 0.0);
    let half = Complex64::new(0.5, 0.0);
    let y = pauli(Axis::Y);
    [
        [half + s * y[0][0], s * y[0][1]],
        [s * y[1][0], half + s * y[1][1]],
    ]
}

/// Eigenket of `σ_x` with the given eigenvalue.
pub fn x_ket(sign: Sign) -> Spinor {
    let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
    [r, r * sign.as_f64()]
}

/// Eigenket of `σ_y`: `|y±⟩ = (|z₊⟩ ± i|z₋⟩)/√2`.
pub fn y_ket(sign: Sign) -> Spinor {
    let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
    [r, I * r * sign.as_f64()]
}

/// Normalized four-amplitude vector of a two-spin system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoSpinState {
    amplitudes: [Complex64; 4],
}

impl TwoSpinState {
    pub fn new(amplitudes: [Complex64; 4]) -> Result<Self> {
        if amplitudes
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::InvalidArgument("amplitudes must be finite"));
        }
        let state = TwoSpinState { amplitudes };
        if (state.norm_sqr() - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidArgument("state must be normalized"));
        }
        Ok(state)
    }

    pub fn product(first: Spinor, second: Spinor) -> Self {
        let mut amplitudes = [ZERO; 4];
        for i in 0..2 {
            for j in 0..2 {
                amplitudes[2 * i + j] = first[i] * second[j];
            }
        }
        TwoSpinState { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &TwoSpinState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Equality up to global phase.
    pub fn same_ray(&self, other: &TwoSpinState) -> bool {
        self.inner(other).norm() >= 1.0 - RAY_TOLERANCE
    }

    /// Whether the 2×2 amplitude matrix has rank one.
    pub fn is_product(&self) -> bool {
        let [a, b, c, d] = self.amplitudes;
        (a * d - b * c).norm() <= PRODUCT_TOLERANCE
    }

    /// Applies a one-spin operator to `subsystem`, leaving the other untouched.
    pub fn apply(&self, subsystem: Particle, op: &Operator) -> TwoSpinState {
        let src = &self.amplitudes;
        let mut out = [ZERO; 4];
        for i in 0..2 {
            for j in 0..2 {
                out[2 * i + j] = match subsystem {
                    Particle::First => op[i][0] * src[j] + op[i][1] * src[2 + j],
                    Particle::Second => op[j][0] * src[2 * i] + op[j][1] * src[2 * i + 1],
                };
            }
        }
        TwoSpinState { amplitudes: out }
    }

    fn scaled(&self, factor: f64) -> TwoSpinState {
        TwoSpinState {
            amplitudes: self.amplitudes.map(|a| a * factor),
        }
    }
}

/// `|x₊⟩ ⊗ |x₊⟩`.
pub fn prepare_initial() -> TwoSpinState {
    TwoSpinState::product(x_ket(Sign::Plus), x_ket(Sign::Plus))
}

/// `⟨σ_axis⟩` on one subsystem.
pub fn pauli_expectation(state: &TwoSpinState, subsystem: Particle, axis: Axis) -> f64 {
    state.inner(&state.apply(subsystem, &pauli(axis))).re
}

/// Born probability of `σ_y = sign` on `subsystem` and the renormalized
/// post-measurement state (`None` when the probability vanishes).
pub fn project_sigma_y(
    state: &TwoSpinState,
    subsystem: Particle,
    sign: Sign,
) -> (f64, Option<TwoSpinState>) {
    let projected = state.apply(subsystem, &sigma_y_projector(sign));
    let probability = projected.norm_sqr();
    if probability <= f64::EPSILON {
        (probability, None)
    } else {
        (
            probability,
            Some(projected.scaled(1.0 / libm::sqrt(probability))),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measurement {
    pub outcome: Sign,
    pub post_state: TwoSpinState,
    /// Born weight of the sampled outcome.
    pub probability: f64,
}

/// Projective `σ_y` measurement with outcome drawn from `rng`.
pub fn measure_sigma_y<R: RngCore + ?Sized>(
    state: &TwoSpinState,
    subsystem: Particle,
    rng: &mut R,
) -> Result<Measurement> {
    if (state.norm_sqr() - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::InvalidArgument("state must be normalized"));
    }
    let (p_plus, _) = project_sigma_y(state, subsystem, Sign::Plus);
    let u: f64 = rng.random();
    let outcome = if u < p_plus { Sign::Plus } else { Sign::Minus };
    match project_sigma_y(state, subsystem, outcome) {
        (probability, Some(post_state)) => Ok(Measurement {
            outcome,
            post_state,
            probability,
        }),
        (_, None) => Err(Error::Internal("sampled a zero-probability outcome")),
    }
}

/// Results of the two `σ_y` measurements; `None` while not yet measured.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct OutcomeBranch {
    pub a: Option<Sign>,
    pub b: Option<Sign>,
}

impl OutcomeBranch {
    pub fn new(a: Option<Sign>, b: Option<Sign>) -> Self {
        OutcomeBranch { a, b }
    }

    pub fn get(&self, subsystem: Particle) -> Option<Sign> {
        match subsystem {
            Particle::First => self.a,
            Particle::Second => self.b,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Observer {
    Alice,
    Bob,
    Magician,
}

/// An observer's simultaneity slice `t' = tau` in their own frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObserverSlice {
    pub observer: Observer,
    pub tau: f64,
    pub chi: f64,
}

impl ObserverSlice {
    pub fn new(observer: Observer, chi: f64, tau: f64) -> Self {
        ObserverSlice { observer, tau, chi }
    }

    pub fn slice(&self) -> Result<SpacelikeSlice> {
        SpacelikeSlice::new(self.chi, self.tau)
    }
}

/// The state an observer assigns on their slice: `|y_sign⟩` for each
/// subsystem measured before the slice, `|x₊⟩` for the others.
pub fn description_on_slice(
    slice: &ObserverSlice,
    branch: &OutcomeBranch,
    measurement_events: &[FourVector; 2],
) -> Result<TwoSpinState> {
    let slice = slice.slice()?;
    let mut kets = [x_ket(Sign::Plus); 2];
    for subsystem in Particle::BOTH {
        let before = slice.is_before(measurement_events[subsystem.index()]);
        match (before, branch.get(subsystem)) {
            (true, Some(sign)) => kets[subsystem.index()] = y_ket(sign),
            (false, None) => {}
            _ => return Err(Error::InconsistentBranch(subsystem)),
        }
    }
    Ok(TwoSpinState::product(kets[0], kets[1]))
}

/// Born probability of the measured part of `branch` on the prepared state.
pub fn branch_probability(branch: &OutcomeBranch) -> f64 {
    let mut state = prepare_initial();
    let mut probability = 1.0;
    for subsystem in Particle::BOTH {
        if let Some(sign) = branch.get(subsystem) {
            match project_sigma_y(&state, subsystem, sign) {
                (p, Some(post)) => {
                    probability *= p;
                    state = post;
                }
                _ => return 0.0,
            }
        }
    }
    probability
}

/// Predicted `[P(σ_y = +1), P(σ_y = -1)]` for `subsystem`, as assessed on
/// `slice` and averaged over the outcome branches already realized there.
pub fn predicted_outcome_distribution(
    slice: &ObserverSlice,
    measurement_events: &[FourVector; 2],
    subsystem: Particle,
) -> Result<[f64; 2]> {
    let plane = slice.slice()?;
    let options = |i: usize| -> [Option<Option<Sign>>; 2] {
        if plane.is_before(measurement_events[i]) {
            [Some(Some(Sign::Plus)), Some(Some(Sign::Minus))]
        } else {
            [Some(None), None]
        }
    };
    let mut dist = [0.0; 2];
    for a in options(0).into_iter().flatten() {
        for b in options(1).into_iter().flatten() {
            let branch = OutcomeBranch::new(a, b);
            let weight = branch_probability(&branch);
            let state = description_on_slice(slice, &branch, measurement_events)?;
            let plus = 0.5 * (1.0 + pauli_expectation(&state, subsystem, Axis::Y));
            dist[0] += weight * plus;
            dist[1] += weight * (1.0 - plus);
        }
    }
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const EVENTS: [FourVector; 2] = [FourVector::tx(0.0, -1.0), FourVector::tx(0.0, 1.0)];

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn initial_state() {
        let s = prepare_initial();
        for a in s.amplitudes() {
            assert!((a - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        }
        for sub in Particle::BOTH {
            assert!(close(pauli_expectation(&s, sub, Axis::X), 1.0));
            assert!(close(pauli_expectation(&s, sub, Axis::Y), 0.0));
            assert!(close(pauli_expectation(&s, sub, Axis::Z), 0.0));
        }
    }

    #[test]
    fn eigenstate_expectations() {
        let s = TwoSpinState::product(y_ket(Sign::Plus), x_ket(Sign::Plus));
        assert!(close(pauli_expectation(&s, Particle::First, Axis::Y), 1.0));
        assert!(close(pauli_expectation(&s, Particle::Second, Axis::X), 1.0));
        let s = TwoSpinState::product(x_ket(Sign::Plus), y_ket(Sign::Minus));
        assert!(close(
            pauli_expectation(&s, Particle::Second, Axis::Y),
            -1.0
        ));
    }

    #[test]
    fn born_probabilities_on_initial_state() {
        for sub in Particle::BOTH {
            for sign in Sign::BOTH {
                let (p, post) = project_sigma_y(&prepare_initial(), sub, sign);
                assert!(close(p, 0.5));
                assert!(post.unwrap().is_product());
            }
        }
    }

    #[test]
    fn post_state_bloch_vector() {
        let (_, post) = project_sigma_y(&prepare_initial(), Particle::First, Sign::Plus);
        let post = post.unwrap();
        assert!(close(
            pauli_expectation(&post, Particle::First, Axis::X),
            0.0
        ));
        assert!(close(
            pauli_expectation(&post, Particle::First, Axis::Y),
            1.0
        ));
        assert!(close(
            pauli_expectation(&post, Particle::First, Axis::Z),
            0.0
        ));
        // the other spin is untouched
        assert!(close(
            pauli_expectation(&post, Particle::Second, Axis::X),
            1.0
        ));
    }

    #[test]
    fn repeated_measurement_is_certain() {
        let s = TwoSpinState::product(y_ket(Sign::Plus), x_ket(Sign::Plus));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let m = measure_sigma_y(&s, Particle::First, &mut rng).unwrap();
            assert_eq!(m.outcome, Sign::Plus);
            assert!(close(m.probability, 1.0));
            assert!(m.post_state.same_ray(&s));
        }
    }

    #[test]
    fn unnormalized_input_rejected() {
        let s = prepare_initial().scaled(2.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(measure_sigma_y(&s, Particle::First, &mut rng).is_err());
        assert!(TwoSpinState::new(*s.amplitudes()).is_err());
    }

    #[test]
    fn descriptions_per_observer() {
        let alice = ObserverSlice::new(Observer::Alice, -0.5, 0.0);
        let bob = ObserverSlice::new(Observer::Bob, 0.5, 0.0);
        let magician = ObserverSlice::new(Observer::Magician, 0.0, -1.0);

        let d = description_on_slice(&alice, &OutcomeBranch::new(Some(Sign::Plus), None), &EVENTS)
            .unwrap();
        assert!(d.same_ray(&TwoSpinState::product(y_ket(Sign::Plus), x_ket(Sign::Plus))));

        let d = description_on_slice(&bob, &OutcomeBranch::new(None, Some(Sign::Minus)), &EVENTS)
            .unwrap();
        assert!(d.same_ray(&TwoSpinState::product(
            x_ket(Sign::Plus),
            y_ket(Sign::Minus)
        )));

        let d = description_on_slice(&magician, &OutcomeBranch::default(), &EVENTS).unwrap();
        assert!(d.same_ray(&prepare_initial()));
    }

    #[test]
    fn branch_must_match_slice() {
        let alice = ObserverSlice::new(Observer::Alice, -0.5, 0.0);
        let full = OutcomeBranch::new(Some(Sign::Plus), Some(Sign::Plus));
        assert_eq!(
            description_on_slice(&alice, &full, &EVENTS),
            Err(Error::InconsistentBranch(Particle::Second))
        );
        assert_eq!(
            description_on_slice(&alice, &OutcomeBranch::default(), &EVENTS),
            Err(Error::InconsistentBranch(Particle::First))
        );
    }

    #[test]
    fn ray_comparison_ignores_phase() {
        let s = prepare_initial();
        let phased = TwoSpinState {
            amplitudes: s.amplitudes.map(|a| a * I),
        };
        assert!(s.same_ray(&phased));
        let y = TwoSpinState::product(x_ket(Sign::Plus), y_ket(Sign::Plus));
        let y_minus = TwoSpinState::product(x_ket(Sign::Plus), y_ket(Sign::Minus));
        assert!(y.inner(&y_minus).norm() < 1e-15);
    }

    #[test]
    fn singlet_is_not_product() {
        let r = FRAC_1_SQRT_2;
        let singlet =
            TwoSpinState::new([ZERO, Complex64::new(r, 0.0), Complex64::new(-r, 0.0), ZERO])
                .unwrap();
        assert!(!singlet.is_product());
    }
}
