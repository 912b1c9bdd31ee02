//! Two kicked bouncers and their Liouville supports on the `(E1, E2)` plane.
//!
//! Each mass bounces elastically on its own segment with momentum `±p`, and
//! at a given spacetime event receives a kick `k`, after which its momentum
//! is `k ± p`. The sign is known only statistically (½ each), so a kicked
//! particle carries two possible energies `E₊`, `E₋` until its energy is
//! measured. All energies are magician-frame (`χ = 0`) values.

use alloc::vec::Vec;

use libm::sqrt;

use crate::spacetime::{causal_relation, CausalClass, FourVector, SpacelikeSlice};
use crate::{Error, Particle, Result, Sign};

/// Energies closer than this are the same support coordinate.
pub const ENERGY_TOLERANCE: f64 = 1e-9;

/// Allowed drift of the total weight away from 1.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BouncerParams {
    /// Rest mass.
    pub m: f64,
    /// Momentum magnitude before the kick.
    pub p: f64,
    /// Kick momentum along `x`.
    pub k: f64,
    /// Half length `L` of each segment.
    pub segment_half_length: f64,
    pub x_center_1: f64,
    pub x_center_2: f64,
    pub kick_event_1: FourVector,
    pub kick_event_2: FourVector,
}

impl BouncerParams {
    /// Checks the parameter domain and that the two kicks are spacelike separated.
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.m,
            self.p,
            self.k,
            self.segment_half_length,
            self.x_center_1,
            self.x_center_2,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite || !self.kick_event_1.is_finite() || !self.kick_event_2.is_finite() {
            return Err(Error::InvalidArgument("bouncer parameters must be finite"));
        }
        check_mass(self.m)?;
        if self.p < 0.0 {
            return Err(Error::InvalidArgument(
                "momentum magnitude must be nonnegative",
            ));
        }
        if self.segment_half_length <= 0.0 {
            return Err(Error::InvalidArgument(
                "segment half length must be positive",
            ));
        }
        if causal_relation(self.kick_event_1, self.kick_event_2) != CausalClass::Spacelike {
            return Err(Error::InvalidScenario(
                "kick events must be spacelike separated",
            ));
        }
        Ok(())
    }

    pub fn kick_event(&self, particle: Particle) -> FourVector {
        match particle {
            Particle::First => self.kick_event_1,
            Particle::Second => self.kick_event_2,
        }
    }

    pub fn x_center(&self, particle: Particle) -> f64 {
        match particle {
            Particle::First => self.x_center_1,
            Particle::Second => self.x_center_2,
        }
    }

    /// True when kicking changes nothing observable: `E₊ = E₋`.
    pub fn is_degenerate(&self) -> bool {
        self.k * self.p == 0.0
    }
}

fn check_mass(m: f64) -> Result<()> {
    if m > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument("mass must be positive"))
    }
}

/// `E₀ = √(m² + p²)`.
pub fn rest_energy(params: &BouncerParams) -> Result<f64> {
    check_mass(params.m)?;
    Ok(sqrt(params.m * params.m + params.p * params.p))
}

/// `E± = √(m² + (k ± p)²)`.
pub fn kicked_energy(params: &BouncerParams, sign: Sign) -> Result<f64> {
    check_mass(params.m)?;
    let momentum = params.k + sign.as_f64() * params.p;
    Ok(sqrt(params.m * params.m + momentum * momentum))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportPoint {
    pub e1: f64,
    pub e2: f64,
    pub weight: f64,
}

impl SupportPoint {
    pub fn energy(&self, particle: Particle) -> f64 {
        match particle {
            Particle::First => self.e1,
            Particle::Second => self.e2,
        }
    }

    fn same_location(&self, e1: f64, e2: f64) -> bool {
        (self.e1 - e1).abs() <= ENERGY_TOLERANCE && (self.e2 - e2).abs() <= ENERGY_TOLERANCE
    }
}

/// Finite set of points of the `(E1, E2)` plane carrying nonzero probability.
#[derive(Clone, Debug, PartialEq)]
pub struct LiouvilleSupport {
    points: Vec<SupportPoint>,
}

impl LiouvilleSupport {
    /// Builds a support from `(e1, e2, weight)` triples, merging coincident
    /// points. Weights must be positive and sum to 1.
    pub fn from_weighted<I>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64, f64)>,
    {
        let mut merged: Vec<SupportPoint> = Vec::new();
        for (e1, e2, weight) in points {
            if !(e1.is_finite() && e2.is_finite() && weight.is_finite()) {
                return Err(Error::InvalidArgument("support entries must be finite"));
            }
            if weight <= 0.0 {
                return Err(Error::InvalidArgument("support weights must be positive"));
            }
            match merged.iter_mut().find(|pt| pt.same_location(e1, e2)) {
                Some(pt) => pt.weight += weight,
                None => merged.push(SupportPoint { e1, e2, weight }),
            }
        }
        if merged.is_empty() {
            return Err(Error::InvalidArgument("support must not be empty"));
        }
        let total: f64 = merged.iter().map(|pt| pt.weight).sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::InvalidArgument("support weights must sum to 1"));
        }
        Ok(LiouvilleSupport { points: merged })
    }

    pub fn points(&self) -> &[SupportPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.points.iter().map(|pt| pt.weight).sum()
    }

    /// Distribution of one particle's energy, as `(energy, weight)` pairs in
    /// first-seen order.
    pub fn marginal(&self, particle: Particle) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for pt in &self.points {
            let e = pt.energy(particle);
            match out
                .iter_mut()
                .find(|(x, _)| (x - e).abs() <= ENERGY_TOLERANCE)
            {
                Some((_, w)) => *w += pt.weight,
                None => out.push((e, pt.weight)),
            }
        }
        out
    }

    /// Set equality: same points and weights, each within `tol`, in any order.
    pub fn same_as(&self, other: &LiouvilleSupport, tol: f64) -> bool {
        self.points.len() == other.points.len()
            && self.points.iter().all(|a| {
                other.points.iter().any(|b| {
                    (a.e1 - b.e1).abs() <= tol
                        && (a.e2 - b.e2).abs() <= tol
                        && (a.weight - b.weight).abs() <= tol
                })
            })
    }
}

/// Which energies each particle was observed to have (`E₊` or `E₋`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct MeasurementRecord {
    pub particle_1_measured: Option<Sign>,
    pub particle_2_measured: Option<Sign>,
}

impl MeasurementRecord {
    pub const NONE: MeasurementRecord = MeasurementRecord {
        particle_1_measured: None,
        particle_2_measured: None,
    };

    pub fn new(particle_1_measured: Option<Sign>, particle_2_measured: Option<Sign>) -> Self {
        MeasurementRecord {
            particle_1_measured,
            particle_2_measured,
        }
    }

    pub fn get(&self, particle: Particle) -> Option<Sign> {
        match particle {
            Particle::First => self.particle_1_measured,
            Particle::Second => self.particle_2_measured,
        }
    }
}

/// Which kicks lie strictly before `slice`.
pub fn kicks_before(params: &BouncerParams, slice: &SpacelikeSlice) -> [bool; 2] {
    Particle::BOTH.map(|p| slice.is_before(params.kick_event(p)))
}

fn particle_options(
    params: &BouncerParams,
    kicked: bool,
    measured: Option<Sign>,
) -> Result<Vec<(f64, f64)>> {
    Ok(match (kicked, measured) {
        (false, _) => alloc::vec![(rest_energy(params)?, 1.0)],
        (true, None) => alloc::vec![
            (kicked_energy(params, Sign::Plus)?, 0.5),
            (kicked_energy(params, Sign::Minus)?, 0.5),
        ],
        (true, Some(sign)) => alloc::vec![(kicked_energy(params, sign)?, 1.0)],
    })
}

/// The observer's Liouville support on `slice`, given which energies have
/// already been measured.
///
/// A particle whose kick is not before the slice sits at `E₀`; a kicked,
/// unmeasured one is at `E₊` or `E₋` with weight ½ each; a measured one is at
/// the observed energy. The joint support is the product of the two.
pub fn support_on_slice(
    params: &BouncerParams,
    slice: &SpacelikeSlice,
    record: &MeasurementRecord,
) -> Result<LiouvilleSupport> {
    params.validate()?;
    let kicked = kicks_before(params, slice);
    for particle in Particle::BOTH {
        if record.get(particle).is_some() && !kicked[particle.index()] {
            return Err(Error::InconsistentRecord(particle));
        }
    }
    let first = particle_options(params, kicked[0], record.particle_1_measured)?;
    let second = particle_options(params, kicked[1], record.particle_2_measured)?;
    LiouvilleSupport::from_weighted(
        first
            .iter()
            .flat_map(|&(e1, w1)| second.iter().map(move |&(e2, w2)| (e1, e2, w1 * w2))),
    )
}

/// Conditions `support` on `particle` having energy `observed`.
pub fn collapse(
    support: &LiouvilleSupport,
    particle: Particle,
    observed: f64,
) -> Result<LiouvilleSupport> {
    let kept: Vec<SupportPoint> = support
        .points
        .iter()
        .filter(|pt| (pt.energy(particle) - observed).abs() <= ENERGY_TOLERANCE)
        .copied()
        .collect();
    let total: f64 = kept.iter().map(|pt| pt.weight).sum();
    if kept.is_empty() || total <= 0.0 {
        return Err(Error::ImpossibleOutcome);
    }
    Ok(LiouvilleSupport {
        points: kept
            .into_iter()
            .map(|pt| SupportPoint {
                weight: pt.weight / total,
                ..pt
            })
            .collect(),
    })
}

/// Predicted probabilities `[P(+), P(-)]` of `particle`'s momentum sign, as
/// assessed on `slice` and averaged over every energy record an observer on
/// that slice could hold.
///
/// Kicked particles are taken as measured on the slice; the prediction for
/// an unkicked particle is the ½/½ prior.
pub fn predicted_sign_distribution(
    params: &BouncerParams,
    slice: &SpacelikeSlice,
    particle: Particle,
) -> Result<[f64; 2]> {
    let kicked = kicks_before(params, slice);
    let options = |i: usize| -> Vec<Option<Sign>> {
        if kicked[i] {
            alloc::vec![Some(Sign::Plus), Some(Sign::Minus)]
        } else {
            alloc::vec![None]
        }
    };
    let unmeasured = support_on_slice(params, slice, &MeasurementRecord::NONE)?;
    let e_plus = kicked_energy(params, Sign::Plus)?;
    let e_minus = kicked_energy(params, Sign::Minus)?;
    let mut dist = [0.0; 2];
    for s1 in options(0) {
        for s2 in options(1) {
            let record = MeasurementRecord::new(s1, s2);
            // probability of holding this record, from the unmeasured description
            let mut record_weight = 1.0;
            for (p, s) in [(Particle::First, s1), (Particle::Second, s2)] {
                if let Some(s) = s {
                    let e = kicked_energy(params, s)?;
                    let w: f64 = unmeasured
                        .marginal(p)
                        .iter()
                        .filter(|(x, _)| (x - e).abs() <= ENERGY_TOLERANCE)
                        .map(|(_, w)| w)
                        .sum();
                    // E₊ = E₋ merges both signs into one point
                    record_weight *= if params.is_degenerate() { w / 2.0 } else { w };
                }
            }
            let support = support_on_slice(params, slice, &record)?;
            let marginal = support.marginal(particle);
            let weight_at = |e: f64| -> f64 {
                marginal
                    .iter()
                    .filter(|(x, _)| (x - e).abs() <= ENERGY_TOLERANCE)
                    .map(|(_, w)| w)
                    .sum()
            };
            let plus = if !kicked[particle.index()] || params.is_degenerate() {
                0.5
            } else {
                weight_at(e_plus) / (weight_at(e_plus) + weight_at(e_minus))
            };
            dist[0] += record_weight * plus;
            dist[1] += record_weight * (1.0 - plus);
        }
    }
    Ok(dist)
}

/// Pre-kick position of a bouncer at rest-frame time `t`.
///
/// Triangle wave of period `4L/v`, `v = p/E₀`, starting at the segment center
/// and moving towards `+x` at `t = 0`.
pub fn bouncer_position(params: &BouncerParams, particle: Particle, t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument("time must be finite"));
    }
    params.validate()?;
    if t > params.kick_event(particle).t {
        return Err(Error::OutOfModel(
            "trajectory after the kick is not modelled",
        ));
    }
    let center = params.x_center(particle);
    let half = params.segment_half_length;
    let speed = params.p / rest_energy(params)?;
    let period = 4.0 * half;
    let mut phase = libm::fmod(speed * t, period);
    if phase < 0.0 {
        phase += period;
    }
    let offset = if phase < half {
        phase
    } else if phase < 3.0 * half {
        2.0 * half - phase
    } else {
        phase - 4.0 * half
    };
    Ok(center + offset)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn params(m: f64, p: f64, k: f64) -> BouncerParams {
        BouncerParams {
            m,
            p,
            k,
            segment_half_length: 1.0,
            x_center_1: -1.0,
            x_center_2: 1.0,
            kick_event_1: FourVector::tx(0.0, -1.0),
            kick_event_2: FourVector::tx(0.0, 1.0),
        }
    }

    fn slice(chi: f64, tau: f64) -> SpacelikeSlice {
        SpacelikeSlice::new(chi, tau).unwrap()
    }

    #[test]
    fn energies() {
        let pr = params(3.0, 4.0, 4.0);
        assert_eq!(rest_energy(&pr).unwrap(), 5.0);
        assert!((rest_energy(&pr).unwrap() - sqrt(9.0 + 16.0)).abs() <= 1e-15);
        assert_eq!(rest_energy(&params(1.0, 0.0, 0.0)).unwrap(), 1.0);
        assert_eq!(kicked_energy(&pr, Sign::Minus).unwrap(), 3.0);
        assert!((kicked_energy(&pr, Sign::Plus).unwrap() - 73f64.sqrt()).abs() < 1e-12);
        let still = params(3.0, 4.0, 0.0);
        for s in Sign::BOTH {
            assert_eq!(kicked_energy(&still, s).unwrap(), 5.0);
        }
    }

    #[test]
    fn nonpositive_mass_rejected() {
        assert!(matches!(
            rest_energy(&params(0.0, 1.0, 1.0)),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            kicked_energy(&params(-1.0, 1.0, 1.0), Sign::Plus),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn timelike_kicks_rejected() {
        let mut pr = params(3.0, 4.0, 4.0);
        pr.kick_event_2 = FourVector::tx(5.0, 1.0);
        assert!(matches!(pr.validate(), Err(Error::InvalidScenario(_))));
    }

    #[test]
    fn support_cardinality_examples() {
        let pr = params(3.0, 4.0, 4.0);
        let before = support_on_slice(&pr, &slice(0.0, -1.0), &MeasurementRecord::NONE).unwrap();
        assert_eq!(
            before.points(),
            &[SupportPoint {
                e1: 5.0,
                e2: 5.0,
                weight: 1.0
            }]
        );

        let alice = support_on_slice(&pr, &slice(-0.5, 0.0), &MeasurementRecord::NONE).unwrap();
        let expected =
            LiouvilleSupport::from_weighted([(73f64.sqrt(), 5.0, 0.5), (3.0, 5.0, 0.5)]).unwrap();
        assert!(alice.same_as(&expected, 1e-12));

        let after = support_on_slice(&pr, &slice(0.3, 2.0), &MeasurementRecord::NONE).unwrap();
        assert_eq!(after.len(), 4);
        assert!(after.points().iter().all(|pt| pt.weight == 0.25));
    }

    #[test]
    fn record_must_follow_kicks() {
        let pr = params(3.0, 4.0, 4.0);
        let record = MeasurementRecord::new(None, Some(Sign::Plus));
        let err = support_on_slice(&pr, &slice(-0.5, 0.0), &record).unwrap_err();
        assert_eq!(err, Error::InconsistentRecord(Particle::Second));
    }

    #[test]
    fn zero_kick_merges_to_single_point() {
        let pr = params(3.0, 4.0, 0.0);
        let after = support_on_slice(&pr, &slice(0.0, 2.0), &MeasurementRecord::NONE).unwrap();
        assert_eq!(after.len(), 1);
        assert_eq!(after.points()[0].weight, 1.0);
    }

    #[test]
    fn collapse_examples() {
        let pr = params(3.0, 4.0, 4.0);
        let e_plus = kicked_energy(&pr, Sign::Plus).unwrap();
        let alice = support_on_slice(&pr, &slice(-0.5, 0.0), &MeasurementRecord::NONE).unwrap();
        let c = collapse(&alice, Particle::First, e_plus).unwrap();
        assert_eq!(
            c.points(),
            &[SupportPoint {
                e1: e_plus,
                e2: 5.0,
                weight: 1.0
            }]
        );
        assert_eq!(collapse(&c, Particle::First, e_plus).unwrap(), c);

        let after = support_on_slice(&pr, &slice(0.0, 2.0), &MeasurementRecord::NONE).unwrap();
        let c = collapse(&after, Particle::Second, 3.0).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.points().iter().all(|pt| pt.weight == 0.5 && pt.e2 == 3.0));

        assert_eq!(
            collapse(&alice, Particle::Second, 3.0),
            Err(Error::ImpossibleOutcome)
        );
    }

    #[test]
    fn marginal_after_kick() {
        let pr = params(3.0, 4.0, 4.0);
        let s = support_on_slice(&pr, &slice(1.2, 5.0), &MeasurementRecord::NONE).unwrap();
        let m = s.marginal(Particle::First);
        assert_eq!(m.len(), 2);
        assert!(m.iter().all(|&(_, w)| w == 0.5));
    }

    #[test]
    fn predicted_signs_are_fair_everywhere() {
        for k in [0.0, 1.0, 4.0] {
            let pr = params(3.0, 4.0, k);
            for (chi, tau) in [(-0.5, 0.0), (0.5, 0.0), (0.0, -2.0), (0.0, 2.0)] {
                for particle in Particle::BOTH {
                    let d = predicted_sign_distribution(&pr, &slice(chi, tau), particle).unwrap();
                    assert!(
                        (d[0] - 0.5).abs() < 1e-12 && (d[1] - 0.5).abs() < 1e-12,
                        "{d:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn bouncer_triangle_wave() {
        let mut pr = params(3.0, 4.0, 4.0);
        pr.kick_event_1 = FourVector::tx(100.0, -1.0);
        pr.kick_event_2 = FourVector::tx(100.0, 1.0);
        let v = 4.0 / 5.0;
        let l = pr.segment_half_length;
        let at = |t: f64| bouncer_position(&pr, Particle::First, t).unwrap();
        assert_eq!(at(0.0), -1.0);
        assert!((at(l / v) - (-1.0 + l)).abs() < 1e-12);
        assert!((at(2.0 * l / v) - (-1.0)).abs() < 1e-12);
        assert!((at(3.0 * l / v) - (-1.0 - l)).abs() < 1e-12);
        assert!((at(-l / v) - (-1.0 - l)).abs() < 1e-12);
        assert!(matches!(
            bouncer_position(&pr, Particle::First, 101.0),
            Err(Error::OutOfModel(_))
        ));
    }

    #[test]
    fn bouncer_at_rest_stays_centered() {
        let pr = params(3.0, 0.0, 4.0);
        assert_eq!(bouncer_position(&pr, Particle::Second, -7.0).unwrap(), 1.0);
    }
}
