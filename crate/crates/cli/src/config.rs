//! Scenario files.
//!
//! A scenario is one TOML document in natural units (c = 1): masses,
//! momenta and energies share one unit, times and lengths another.
//! Unknown keys are rejected.

use std::path::{Path, PathBuf};

use exoframe_core::bell::AnalyzerSettings;
use exoframe_core::classical::BouncerParams;
use exoframe_core::quantum::{Observer, ObserverSlice};
use exoframe_core::spacetime::{causal_relation, CausalClass, FourVector};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    pub classical: ClassicalConfig,
    pub quantum: QuantumConfig,
    pub observers: Vec<ObserverConfig>,
    #[serde(default)]
    pub slices: Vec<SliceConfig>,
    pub bell: BellConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalConfig {
    pub m: f64,
    pub p: f64,
    pub k: f64,
    pub segment_half_length: f64,
    pub x_center_1: f64,
    pub x_center_2: f64,
    /// `[t, x, y, z]` of the kick on particle 1.
    pub kick_event_1: [f64; 4],
    pub kick_event_2: [f64; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumConfig {
    /// `[t, x, y, z]` of the measurement on spin 1.
    pub event_a: [f64; 4],
    pub event_b: [f64; 4],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObserverName {
    Alice,
    Bob,
    Magician,
}

impl ObserverName {
    pub fn as_str(self) -> &'static str {
        match self {
            ObserverName::Alice => "alice",
            ObserverName::Bob => "bob",
            ObserverName::Magician => "magician",
        }
    }

    pub fn observer(self) -> Observer {
        match self {
            ObserverName::Alice => Observer::Alice,
            ObserverName::Bob => Observer::Bob,
            ObserverName::Magician => Observer::Magician,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObserverConfig {
    pub name: ObserverName,
    pub rapidity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceConfig {
    pub observer: ObserverName,
    pub tau: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BellConfig {
    pub a: [f64; 3],
    pub a_prime: [f64; 3],
    pub b: [f64; 3],
    pub b_prime: [f64; 3],
    pub n_samples: u64,
    pub scan_quadruples: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let standard = AnalyzerSettings::standard();
        ScenarioConfig {
            seed: 1,
            output_dir: None,
            classical: ClassicalConfig {
                m: 3.0,
                p: 4.0,
                k: 4.0,
                segment_half_length: 1.0,
                x_center_1: -1.0,
                x_center_2: 1.0,
                kick_event_1: [0.0, -1.0, 0.0, 0.0],
                kick_event_2: [0.0, 1.0, 0.0, 0.0],
            },
            quantum: QuantumConfig {
                event_a: [0.0, -1.0, 0.0, 0.0],
                event_b: [0.0, 1.0, 0.0, 0.0],
            },
            observers: vec![
                ObserverConfig {
                    name: ObserverName::Alice,
                    rapidity: -0.5,
                },
                ObserverConfig {
                    name: ObserverName::Bob,
                    rapidity: 0.5,
                },
                ObserverConfig {
                    name: ObserverName::Magician,
                    rapidity: 0.0,
                },
            ],
            slices: vec![
                SliceConfig {
                    observer: ObserverName::Alice,
                    tau: 0.0,
                },
                SliceConfig {
                    observer: ObserverName::Bob,
                    tau: 0.0,
                },
                SliceConfig {
                    observer: ObserverName::Magician,
                    tau: -1.5,
                },
                SliceConfig {
                    observer: ObserverName::Magician,
                    tau: 1.5,
                },
            ],
            bell: BellConfig {
                a: standard.a,
                a_prime: standard.a_prime,
                b: standard.b,
                b_prime: standard.b_prime,
                n_samples: 100_000,
                scan_quadruples: 10_000,
            },
        }
    }
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn unit(v: [f64; 3], name: &str) -> Result<[f64; 3], CliError> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if !n.is_finite() || n == 0.0 {
        return Err(config_error(format!(
            "bell.{name} must be a finite nonzero vector"
        )));
    }
    Ok(v.map(|c| c / n))
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: ScenarioConfig =
            toml::from_str(text).map_err(|e| config_error(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => config_error(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config serializes")
    }

    /// Checks cross-references and physical preconditions.
    pub fn validate(&self) -> Result<(), CliError> {
        self.bouncer_params()?
            .validate()
            .map_err(|e| config_error(format!("classical: {e}")))?;
        let [a, b] = self.measurement_events();
        if !a.is_finite() || !b.is_finite() {
            return Err(config_error("quantum: measurement events must be finite"));
        }
        if causal_relation(a, b) != CausalClass::Spacelike {
            return Err(config_error(
                "quantum: measurement events must be spacelike separated",
            ));
        }
        for (i, obs) in self.observers.iter().enumerate() {
            if !obs.rapidity.is_finite() {
                return Err(config_error(format!(
                    "observer {} has a non-finite rapidity",
                    obs.name.as_str()
                )));
            }
            if self.observers[..i].iter().any(|o| o.name == obs.name) {
                return Err(config_error(format!(
                    "observer {} is listed twice",
                    obs.name.as_str()
                )));
            }
        }
        if let (Some(alice), Some(bob)) = (
            self.rapidity(ObserverName::Alice),
            self.rapidity(ObserverName::Bob),
        ) {
            if alice * bob >= 0.0 {
                return Err(config_error(
                    "alice and bob must have rapidities of opposite sign",
                ));
            }
        }
        for slice in &self.slices {
            if self.rapidity(slice.observer).is_none() {
                return Err(config_error(format!(
                    "slice refers to unknown observer {}",
                    slice.observer.as_str()
                )));
            }
            if !slice.tau.is_finite() {
                return Err(config_error("slice times must be finite"));
            }
        }
        for (v, name) in [
            (self.bell.a, "a"),
            (self.bell.a_prime, "a_prime"),
            (self.bell.b, "b"),
            (self.bell.b_prime, "b_prime"),
        ] {
            unit(v, name)?;
        }
        if self.bell.n_samples == 0 || self.bell.scan_quadruples == 0 {
            return Err(config_error(
                "bell.n_samples and bell.scan_quadruples must be at least 1",
            ));
        }
        Ok(())
    }

    pub fn bouncer_params(&self) -> Result<BouncerParams, CliError> {
        let c = &self.classical;
        Ok(BouncerParams {
            m: c.m,
            p: c.p,
            k: c.k,
            segment_half_length: c.segment_half_length,
            x_center_1: c.x_center_1,
            x_center_2: c.x_center_2,
            kick_event_1: FourVector::from(c.kick_event_1),
            kick_event_2: FourVector::from(c.kick_event_2),
        })
    }

    pub fn measurement_events(&self) -> [FourVector; 2] {
        [
            FourVector::from(self.quantum.event_a),
            FourVector::from(self.quantum.event_b),
        ]
    }

    pub fn rapidity(&self, name: ObserverName) -> Option<f64> {
        self.observers
            .iter()
            .find(|o| o.name == name)
            .map(|o| o.rapidity)
    }

    /// Configured slices, each resolved against its observer's rapidity.
    pub fn observer_slices(&self) -> Vec<ObserverSlice> {
        self.slices
            .iter()
            .filter_map(|s| {
                self.rapidity(s.observer)
                    .map(|chi| ObserverSlice::new(s.observer.observer(), chi, s.tau))
            })
            .collect()
    }

    /// First configured slice of `name`, or its `tau = 0` slice.
    pub fn primary_slice(&self, name: ObserverName) -> Result<ObserverSlice, CliError> {
        let chi = self
            .rapidity(name)
            .ok_or_else(|| config_error(format!("observer {} is required", name.as_str())))?;
        let tau = self
            .slices
            .iter()
            .find(|s| s.observer == name)
            .map_or(0.0, |s| s.tau);
        Ok(ObserverSlice::new(name.observer(), chi, tau))
    }

    pub fn analyzer_settings(&self) -> Result<AnalyzerSettings, CliError> {
        let b = &self.bell;
        AnalyzerSettings::new(
            unit(b.a, "a")?,
            unit(b.a_prime, "a_prime")?,
            unit(b.b, "b")?,
            unit(b.b_prime, "b_prime")?,
        )
        .map_err(|e| config_error(format!("bell: {e}")))
    }
}

pub fn observer_name(observer: Observer) -> &'static str {
    match observer {
        Observer::Alice => "alice",
        Observer::Bob => "bob",
        Observer::Magician => "magician",
    }
}
