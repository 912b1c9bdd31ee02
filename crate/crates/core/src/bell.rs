//! CHSH correlations: a classical pair of fragments with opposite, isotropic
//! angular momenta versus the spin singlet.
//!
//! The classical readout along a direction `n` is the sign of the projection
//! of the fragment's angular momentum on `n`. For `λ` isotropic and the two
//! fragments carrying `λ` and `-λ`, the correlation is `-1 + 2θ/π`.

use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

use libm::{atan2, cos, sin, sqrt};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::quantum::{spin_along, TwoSpinState};
use crate::{Error, Particle, Result};

pub type Vec3 = [f64; 3];

/// Allowed deviation of an analyzer direction from unit length.
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// Monte Carlo samples per independently seeded chunk.
pub const MC_CHUNK: u64 = 8192;

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn length(a: Vec3) -> f64 {
    sqrt(dot(a, a))
}

fn nonzero(v: Vec3) -> Result<()> {
    if !v.iter().all(|c| c.is_finite()) {
        return Err(Error::InvalidArgument("analyzer direction must be finite"));
    }
    if length(v) == 0.0 {
        return Err(Error::InvalidArgument("analyzer direction must be nonzero"));
    }
    Ok(())
}

fn normalized(v: Vec3) -> Result<Vec3> {
    nonzero(v)?;
    let n = length(v);
    Ok([v[0] / n, v[1] / n, v[2] / n])
}

/// Angle between two nonzero directions, accurate near 0 and π.
pub fn angle_between(a: Vec3, b: Vec3) -> Result<f64> {
    nonzero(a)?;
    nonzero(b)?;
    Ok(atan2(length(cross(a, b)), dot(a, b)))
}

/// Unit vector in the `x`-`z` plane at `angle` from `+z` towards `+x`.
pub fn in_plane(angle: f64) -> Vec3 {
    [sin(angle), 0.0, cos(angle)]
}

/// Measurement directions `a`, `a'` (first party) and `b`, `b'` (second party).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyzerSettings {
    pub a: Vec3,
    pub a_prime: Vec3,
    pub b: Vec3,
    pub b_prime: Vec3,
}

impl AnalyzerSettings {
    pub fn new(a: Vec3, a_prime: Vec3, b: Vec3, b_prime: Vec3) -> Result<Self> {
        for v in [a, a_prime, b, b_prime] {
            nonzero(v)?;
            if (length(v) - 1.0).abs() > UNIT_TOLERANCE {
                return Err(Error::InvalidArgument(
                    "analyzer directions must be unit vectors",
                ));
            }
        }
        Ok(AnalyzerSettings {
            a,
            a_prime,
            b,
            b_prime,
        })
    }

    /// Coplanar settings at 0°, 90° (`a`, `a'`) and 45°, -45° (`b`, `b'`),
    /// where the singlet reaches `|S| = 2√2`.
    pub fn standard() -> Self {
        AnalyzerSettings {
            a: in_plane(0.0),
            a_prime: in_plane(2.0 * FRAC_PI_4),
            b: in_plane(FRAC_PI_4),
            b_prime: in_plane(-FRAC_PI_4),
        }
    }

    /// Setting pairs in the order `(a,b), (a,b'), (a',b), (a',b')`.
    pub fn pairs(&self) -> [(Vec3, Vec3); 4] {
        [
            (self.a, self.b),
            (self.a, self.b_prime),
            (self.a_prime, self.b),
            (self.a_prime, self.b_prime),
        ]
    }
}

/// `-1 + 2θ/π`: exact sign-of-projection correlation for isotropic opposite momenta.
pub fn classical_correlation_analytic(a: Vec3, b: Vec3) -> Result<f64> {
    Ok(-1.0 + 2.0 * angle_between(a, b)? / PI)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationEstimate {
    pub value: f64,
    /// `None` when a single sample leaves the spread undefined.
    pub standard_error: Option<f64>,
    pub n_samples: u64,
}

/// Uniform point on the unit sphere: uniform `z` in `[-1, 1]`, uniform azimuth.
pub fn sample_isotropic<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    let z: f64 = 2.0 * rng.random::<f64>() - 1.0;
    let phi: f64 = 2.0 * PI * rng.random::<f64>();
    let r = sqrt((1.0 - z * z).max(0.0));
    [r * cos(phi), r * sin(phi), z]
}

fn readout(direction: Vec3, momentum: Vec3) -> i8 {
    if dot(direction, momentum) >= 0.0 {
        1
    } else {
        -1
    }
}

/// Number of samples in chunk `chunk` of a run of `n_samples` whose two
/// readouts agree. Chunks use independent ChaCha streams of `seed`, so any
/// partition of chunks over workers gives identical totals.
pub fn mc_chunk_agreements(a: Vec3, b: Vec3, seed: u64, chunk: u64, n_samples: u64) -> u64 {
    let start = chunk * MC_CHUNK;
    let len = n_samples.saturating_sub(start).min(MC_CHUNK);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    (0..len)
        .filter(|_| {
            let lambda = sample_isotropic(&mut rng);
            let first = readout(a, lambda);
            let second = -readout(b, lambda);
            first == second
        })
        .count() as u64
}

/// Number of chunks a run of `n_samples` is split into.
pub fn mc_chunk_count(n_samples: u64) -> u64 {
    n_samples.div_ceil(MC_CHUNK)
}

/// Builds the estimate from the total agreement count.
pub fn estimate_from_agreements(agreements: u64, n_samples: u64) -> CorrelationEstimate {
    let n = n_samples as f64;
    let value = (2.0 * agreements as f64 - n) / n;
    let standard_error =
        (n_samples > 1).then(|| sqrt(((1.0 - value * value) / (n - 1.0)).max(0.0)));
    CorrelationEstimate {
        value,
        standard_error,
        n_samples,
    }
}

/// Monte Carlo estimate of the classical correlation.
pub fn classical_correlation_mc(
    a: Vec3,
    b: Vec3,
    n_samples: u64,
    seed: u64,
) -> Result<CorrelationEstimate> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required"));
    }
    let (a, b) = (normalized(a)?, normalized(b)?);
    let agreements = (0..mc_chunk_count(n_samples))
        .map(|c| mc_chunk_agreements(a, b, seed, c, n_samples))
        .sum();
    Ok(estimate_from_agreements(agreements, n_samples))
}

/// `(|z₊z₋⟩ - |z₋z₊⟩)/√2`.
pub fn singlet() -> TwoSpinState {
    let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    TwoSpinState::new([zero, r, -r, zero]).expect("singlet is normalized")
}

/// `⟨ψ⁻|σ·a ⊗ σ·b|ψ⁻⟩`, evaluated on the explicit singlet vector.
pub fn quantum_singlet_correlation(a: Vec3, b: Vec3) -> Result<f64> {
    let (a, b) = (normalized(a)?, normalized(b)?);
    let psi = singlet();
    let image = psi
        .apply(Particle::First, &spin_along(a))
        .apply(Particle::Second, &spin_along(b));
    Ok(psi.inner(&image).re)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrelationModel {
    ClassicalAnalytic,
    ClassicalMonteCarlo { n_samples: u64, seed: u64 },
    Quantum,
}

/// Seed of the Monte Carlo run for setting pair `index` (splitmix64 step).
pub fn pair_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChshTerms {
    /// Correlations in [`AnalyzerSettings::pairs`] order.
    pub correlations: [f64; 4],
    pub s: f64,
}

pub fn correlation(model: CorrelationModel, a: Vec3, b: Vec3, pair_index: u64) -> Result<f64> {
    match model {
        CorrelationModel::ClassicalAnalytic => classical_correlation_analytic(a, b),
        CorrelationModel::Quantum => quantum_singlet_correlation(a, b),
        CorrelationModel::ClassicalMonteCarlo { n_samples, seed } => {
            Ok(classical_correlation_mc(a, b, n_samples, pair_seed(seed, pair_index))?.value)
        }
    }
}

/// `S = E(a,b) + E(a,b') + E(a',b) - E(a',b')` with its four terms.
pub fn chsh_terms(settings: &AnalyzerSettings, model: CorrelationModel) -> Result<ChshTerms> {
    let mut correlations = [0.0; 4];
    for (i, (x, y)) in settings.pairs().into_iter().enumerate() {
        correlations[i] = correlation(model, x, y, i as u64)?;
    }
    let [ab, abp, apb, apbp] = correlations;
    Ok(ChshTerms {
        correlations,
        s: ab + abp + apb - apbp,
    })
}

pub fn chsh(settings: &AnalyzerSettings, model: CorrelationModel) -> Result<f64> {
    Ok(chsh_terms(settings, model)?.s)
}

/// Largest classical `|S|` over `n_quadruples` random isotropic setting quadruples.
pub fn classical_chsh_bound_scan(n_quadruples: u64, seed: u64) -> Result<f64> {
    if n_quadruples == 0 {
        return Err(Error::InvalidArgument("at least one quadruple is required"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: f64 = 0.0;
    for _ in 0..n_quadruples {
        let settings = AnalyzerSettings {
            a: sample_isotropic(&mut rng),
            a_prime: sample_isotropic(&mut rng),
            b: sample_isotropic(&mut rng),
            b_prime: sample_isotropic(&mut rng),
        };
        best = best.max(chsh(&settings, CorrelationModel::ClassicalAnalytic)?.abs());
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::SQRT_2;

    #[test]
    fn analytic_examples() {
        let z = in_plane(0.0);
        assert_eq!(classical_correlation_analytic(z, z).unwrap(), -1.0);
        assert!(
            classical_correlation_analytic(z, in_plane(PI / 2.0))
                .unwrap()
                .abs()
                < 1e-15
        );
        assert!(
            (classical_correlation_analytic(z, in_plane(PI / 3.0)).unwrap() + 1.0 / 3.0).abs()
                < 1e-15
        );
        assert!(classical_correlation_analytic(z, [0.0; 3]).is_err());
    }

    #[test]
    fn singlet_examples() {
        let z = in_plane(0.0);
        assert!((quantum_singlet_correlation(z, z).unwrap() + 1.0).abs() < 1e-15);
        assert!(
            quantum_singlet_correlation(z, [1.0, 0.0, 0.0])
                .unwrap()
                .abs()
                < 1e-15
        );
        assert!(
            (quantum_singlet_correlation(z, in_plane(FRAC_PI_4)).unwrap() + SQRT_2 / 2.0).abs()
                < 1e-15
        );
        assert!(quantum_singlet_correlation([0.0; 3], z).is_err());
    }

    #[test]
    fn mc_single_sample() {
        let e = classical_correlation_mc(in_plane(0.0), in_plane(1.0), 1, 7).unwrap();
        assert!(e.value == 1.0 || e.value == -1.0);
        assert_eq!(e.standard_error, None);
        assert!(classical_correlation_mc(in_plane(0.0), in_plane(1.0), 0, 7).is_err());
    }

    #[test]
    fn mc_aligned_settings_are_exact() {
        let z = in_plane(0.0);
        let e = classical_correlation_mc(z, z, 10_000, 11).unwrap();
        assert_eq!(e.value, -1.0);
    }

    #[test]
    fn standard_quadruple() {
        let s = AnalyzerSettings::standard();
        assert!((chsh(&s, CorrelationModel::Quantum).unwrap().abs() - 2.0 * SQRT_2).abs() < 1e-12);
        assert!((chsh(&s, CorrelationModel::ClassicalAnalytic).unwrap().abs() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_settings() {
        let a = in_plane(0.3);
        let b = in_plane(1.1);
        let s = AnalyzerSettings::new(a, a, b, b).unwrap();
        for model in [
            CorrelationModel::ClassicalAnalytic,
            CorrelationModel::Quantum,
        ] {
            let terms = chsh_terms(&s, model).unwrap();
            assert!((terms.s - 2.0 * terms.correlations[0]).abs() < 1e-15);
            assert!(terms.s.abs() <= 2.0);
        }
        let z = in_plane(0.0);
        let all_same = AnalyzerSettings::new(z, z, z, z).unwrap();
        assert_eq!(
            chsh(&all_same, CorrelationModel::ClassicalAnalytic)
                .unwrap()
                .abs(),
            2.0
        );
    }

    #[test]
    fn settings_must_be_unit() {
        assert!(AnalyzerSettings::new(
            [2.0, 0.0, 0.0],
            in_plane(0.0),
            in_plane(0.0),
            in_plane(0.0)
        )
        .is_err());
    }

    #[test]
    fn scan_rejects_empty_grid() {
        assert!(classical_chsh_bound_scan(0, 1).is_err());
        assert!(classical_chsh_bound_scan(100, 1).unwrap() <= 2.0 + 1e-9);
    }
}
