//! JSON shapes of everything the CLI emits. Field names are part of the
//! file format; see `docs/formats.md`.

use exoframe_core::bell::{AnalyzerSettings, Vec3};
use exoframe_core::checker::CheckVerdict;
use exoframe_core::classical::LiouvilleSupport;
use exoframe_core::quantum::TwoSpinState;
use exoframe_core::Sign;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupportPointJson {
    pub e1: f64,
    pub e2: f64,
    pub weight: f64,
}

pub fn support_json(support: &LiouvilleSupport) -> Vec<SupportPointJson> {
    support
        .points()
        .iter()
        .map(|pt| SupportPointJson {
            e1: pt.e1,
            e2: pt.e2,
            weight: pt.weight,
        })
        .collect()
}

/// Amplitudes as `[re, im]` pairs in `|z₊z₊⟩, |z₊z₋⟩, |z₋z₊⟩, |z₋z₋⟩` order.
pub fn state_json(state: &TwoSpinState) -> Vec<[f64; 2]> {
    state.amplitudes().iter().map(|a| [a.re, a.im]).collect()
}

pub fn sign_json(sign: Sign) -> i8 {
    sign.as_i8()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictJson {
    pub function_exists: bool,
    pub witness: Option<[usize; 2]>,
    pub best_linear_residual: f64,
    pub per_row_errors: Vec<f64>,
}

impl From<&CheckVerdict> for VerdictJson {
    fn from(v: &CheckVerdict) -> Self {
        VerdictJson {
            function_exists: v.function_exists,
            witness: v.witness.map(|(i, j)| [i, j]),
            best_linear_residual: v.best_linear_residual,
            per_row_errors: v.per_row_errors.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SettingsJson {
    pub a: Vec3,
    pub a_prime: Vec3,
    pub b: Vec3,
    pub b_prime: Vec3,
}

impl From<&AnalyzerSettings> for SettingsJson {
    fn from(s: &AnalyzerSettings) -> Self {
        SettingsJson {
            a: s.a,
            a_prime: s.a_prime,
            b: s.b,
            b_prime: s.b_prime,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BellResultJson {
    pub model: &'static str,
    pub settings: SettingsJson,
    #[serde(rename = "S")]
    pub s: f64,
    /// `E(a,b), E(a,b'), E(a',b), E(a',b')`.
    pub correlations: [f64; 4],
    /// Monte Carlo standard errors, same order; only for sampled models.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub standard_errors: Option<[Option<f64>; 4]>,
    pub n_samples: Option<u64>,
    pub seed: Option<u64>,
}
