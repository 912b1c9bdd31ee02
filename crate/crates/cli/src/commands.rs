//! The four subcommands. Each returns its documents in memory; `main`
//! decides where they go.

use std::path::Path;

use exoframe_core::bell::{self, chsh_terms, CorrelationModel};
use exoframe_core::checker::{
    build_classical_table, build_quantum_table, check, CheckVerdict, DescriptionTable,
};
use exoframe_core::classical::{
    bouncer_position, kicked_energy, kicks_before, rest_energy, support_on_slice, BouncerParams,
    LiouvilleSupport, MeasurementRecord,
};
use exoframe_core::quantum::{
    description_on_slice, measure_sigma_y, prepare_initial, ObserverSlice, OutcomeBranch,
};
use exoframe_core::spacetime::FourVector;
use exoframe_core::{Particle, Sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{observer_name, ObserverName, ScenarioConfig};
use crate::report::{self, BellResultJson, SettingsJson, SupportPointJson, VerdictJson};
use crate::svg::{fmt_num, round_sig, Scene, Viewport};
use crate::{csv_string, write_file, CliError, Format};

/// A claim check must beat this best-fit residual to count as confirmed.
pub const LINEAR_RESIDUAL_THRESHOLD: f64 = 0.5;

/// Documents produced by a subcommand.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutput {
    /// Primary document, printed to stdout.
    pub stdout: String,
    /// Files to write into the output directory, `(name, contents)`.
    pub files: Vec<(String, String)>,
    /// 0 when the scenario's claims hold, 1 otherwise.
    pub status: i32,
    pub warnings: Vec<String>,
}

impl CommandOutput {
    pub fn write_all(&self, dir: &Path) -> Result<Vec<std::path::PathBuf>, CliError> {
        self.files
            .iter()
            .map(|(name, contents)| write_file(dir, name, contents))
            .collect()
    }
}

fn label(slice: &ObserverSlice) -> &'static str {
    observer_name(slice.observer)
}

// ---------------------------------------------------------------- figures

#[derive(Serialize)]
struct EnergiesJson {
    e0: f64,
    e_plus: f64,
    e_minus: f64,
}

#[derive(Serialize)]
struct EventsJson {
    measurement_a: [f64; 4],
    measurement_b: [f64; 4],
    kick_1: [f64; 4],
    kick_2: [f64; 4],
}

#[derive(Serialize)]
struct SupportFigureJson {
    file: String,
    observer: &'static str,
    chi: f64,
    tau: f64,
    kicks_before: [bool; 2],
    points: Vec<SupportPointJson>,
}

#[derive(Serialize)]
struct SceneJson {
    file: String,
    scene: Scene,
}

#[derive(Serialize)]
struct FiguresJson {
    energies: EnergiesJson,
    events: EventsJson,
    supports: Vec<SupportFigureJson>,
    scenes: Vec<SceneJson>,
}

/// One emitted figure file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FigureArtifact {
    pub kind: &'static str,
    pub path: String,
    pub format: &'static str,
}

struct EnergyRange {
    lo: f64,
    hi: f64,
    ticks: Vec<f64>,
}

fn energy_range(params: &BouncerParams) -> Result<EnergyRange, CliError> {
    let mut ticks = vec![
        rest_energy(params)?,
        kicked_energy(params, Sign::Plus)?,
        kicked_energy(params, Sign::Minus)?,
    ];
    ticks.sort_by(f64::total_cmp);
    ticks.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    let (lo, hi) = (ticks[0] - 1.0, ticks[ticks.len() - 1] + 1.0);
    Ok(EnergyRange { lo, hi, ticks })
}

fn support_scene(title: &str, support: &LiouvilleSupport, range: &EnergyRange) -> Scene {
    let mut scene = Scene::new(360.0, 360.0);
    let vp = Viewport {
        x_range: (range.lo, range.hi),
        y_range: (range.lo, range.hi),
        origin: [60.0, 30.0],
        size: [270.0, 270.0],
    };
    let (bl, br, tl) = (
        vp.map(range.lo, range.lo),
        vp.map(range.hi, range.lo),
        vp.map(range.lo, range.hi),
    );
    scene.line(bl, br, "black", false);
    scene.line(bl, tl, "black", false);
    for &e in &range.ticks {
        let x = vp.map(e, range.lo);
        let y = vp.map(range.lo, e);
        scene.line(x, [x[0], x[1] + 5.0], "black", false);
        scene.text([x[0], x[1] + 18.0], format!("{e:.4}"), "middle");
        scene.line(y, [y[0] - 5.0, y[1]], "black", false);
        scene.text([y[0] - 8.0, y[1] + 4.0], format!("{e:.4}"), "end");
    }
    scene.text([195.0, 345.0], "E1", "middle");
    scene.text([20.0, 165.0], "E2", "middle");
    scene.text([195.0, 18.0], title, "middle");
    for pt in support.points() {
        let c = vp.map(pt.e1, pt.e2);
        scene.circle(c, 3.0 + 5.0 * pt.weight, "#1f4e9c");
        scene.text(
            [c[0] + 10.0, c[1] - 8.0],
            format!("w={}", fmt_num(round_sig(pt.weight))),
            "start",
        );
    }
    scene
}

fn observer_color(name: &str) -> &'static str {
    match name {
        "alice" => "#c0392b",
        "bob" => "#2471a3",
        _ => "#555555",
    }
}

fn worldline_scene(config: &ScenarioConfig, params: &BouncerParams) -> Result<Scene, CliError> {
    let [a, b] = config.measurement_events();
    let events = [a, b, params.kick_event_1, params.kick_event_2];
    let x_lo = events.iter().map(|e| e.x).fold(f64::INFINITY, f64::min) - 2.0;
    let x_hi = events.iter().map(|e| e.x).fold(f64::NEG_INFINITY, f64::max) + 2.0;
    let t_mid = events.iter().map(|e| e.t).sum::<f64>() / 4.0;
    let half = 0.5 * (x_hi - x_lo);
    let vp = Viewport {
        x_range: (x_lo, x_hi),
        y_range: (t_mid - half, t_mid + half),
        origin: [40.0, 40.0],
        size: [520.0, 520.0],
    };
    let mut scene = Scene::new(600.0, 600.0);
    let segment =
        |scene: &mut Scene, p: [f64; 2], q: [f64; 2], stroke: &'static str, dashed: bool| {
            if let Some((p, q)) = vp.clip(p, q) {
                scene.line(vp.map(p[0], p[1]), vp.map(q[0], q[1]), stroke, dashed);
            }
        };
    // axes, in (x, t) data coordinates
    segment(&mut scene, [x_lo, 0.0], [x_hi, 0.0], "#cccccc", false);
    segment(
        &mut scene,
        [0.0, t_mid - half],
        [0.0, t_mid + half],
        "#cccccc",
        false,
    );
    scene.text(vp.map(x_hi, 0.0), "x", "end");
    scene.text(vp.map(0.0, t_mid + half), "t", "start");

    let reach = 4.0 * half;
    for e in [a, b] {
        for (dx, dt) in [(1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)] {
            segment(
                &mut scene,
                [e.x, e.t],
                [e.x + dx * reach, e.t + dt * reach],
                "#e69f00",
                true,
            );
        }
    }

    for particle in Particle::BOTH {
        let kick = params.kick_event(particle);
        let t0 = t_mid - half;
        if kick.t > t0 {
            let steps = 240;
            let points: Vec<[f64; 2]> = (0..=steps)
                .map(|i| {
                    let t = t0 + (kick.t - t0) * f64::from(i) / f64::from(steps);
                    bouncer_position(params, particle, t).map(|x| vp.map(x, t))
                })
                .collect::<Result<_, _>>()?;
            scene.polyline(&points, "#999999");
        }
    }

    for obs in &config.observers {
        let name = obs.name.as_str();
        let anchor = match obs.name {
            ObserverName::Alice => a,
            ObserverName::Bob => b,
            ObserverName::Magician => FourVector::tx(0.0, 0.5 * (a.x + b.x)),
        };
        let v = obs.rapidity.tanh();
        let p = [anchor.x - v * reach, anchor.t - reach];
        let q = [anchor.x + v * reach, anchor.t + reach];
        if let Some((_, top)) = vp.clip(p, q) {
            scene.text(vp.map(top[0], top[1]), name, "middle");
        }
        segment(&mut scene, p, q, observer_color(name), false);
    }

    for slice in config.observer_slices() {
        let plane = slice.slice()?;
        let name = label(&slice);
        let p = [x_lo, plane.t_at(x_lo)];
        let q = [x_hi, plane.t_at(x_hi)];
        if let Some((_, right)) = vp.clip(p, q) {
            scene.text(
                vp.map(right[0], right[1]),
                format!("{name} t'={}", fmt_num(slice.tau)),
                "end",
            );
        }
        segment(&mut scene, p, q, observer_color(name), true);
    }

    for (e, name) in [(a, "A"), (b, "B")] {
        let c = vp.map(e.x, e.t);
        scene.circle(c, 5.0, "black");
        scene.text([c[0] + 8.0, c[1] + 16.0], name, "start");
    }
    for (e, name) in [
        (params.kick_event_1, "kick 1"),
        (params.kick_event_2, "kick 2"),
    ] {
        if e != a && e != b {
            let c = vp.map(e.x, e.t);
            scene.circle(c, 4.0, "#7d3c98");
            scene.text([c[0] + 8.0, c[1] - 8.0], name, "start");
        }
    }
    Ok(scene)
}

/// Spacetime diagram, one support dot plot per configured slice, and the
/// numbers behind them.
pub fn cmd_figures(
    config: &ScenarioConfig,
    format: Format,
    out_dir: &Path,
) -> Result<CommandOutput, CliError> {
    config.validate()?;
    let params = config.bouncer_params()?;
    let range = energy_range(&params)?;
    let mut scenes = vec![SceneJson {
        file: "worldlines.svg".into(),
        scene: worldline_scene(config, &params)?,
    }];
    let mut supports = Vec::new();
    let mut csv_rows = Vec::new();
    for (i, slice) in config.observer_slices().iter().enumerate() {
        let plane = slice.slice()?;
        let support = support_on_slice(&params, &plane, &MeasurementRecord::NONE)?;
        let file = format!("support_{i:02}_{}.svg", label(slice));
        let title = format!(
            "{} chi={} tau={}",
            label(slice),
            fmt_num(slice.chi),
            fmt_num(slice.tau)
        );
        scenes.push(SceneJson {
            file: file.clone(),
            scene: support_scene(&title, &support, &range),
        });
        for pt in support.points() {
            csv_rows.push(vec![
                label(slice).to_string(),
                fmt_num(slice.chi),
                fmt_num(slice.tau),
                fmt_num(pt.e1),
                fmt_num(pt.e2),
                fmt_num(pt.weight),
            ]);
        }
        supports.push(SupportFigureJson {
            file,
            observer: label(slice),
            chi: slice.chi,
            tau: slice.tau,
            kicks_before: kicks_before(&params, &plane),
            points: report::support_json(&support),
        });
    }
    let doc = FiguresJson {
        energies: EnergiesJson {
            e0: rest_energy(&params)?,
            e_plus: kicked_energy(&params, Sign::Plus)?,
            e_minus: kicked_energy(&params, Sign::Minus)?,
        },
        events: EventsJson {
            measurement_a: config.quantum.event_a,
            measurement_b: config.quantum.event_b,
            kick_1: config.classical.kick_event_1,
            kick_2: config.classical.kick_event_2,
        },
        supports,
        scenes,
    };

    let mut files: Vec<(String, String)> = doc
        .scenes
        .iter()
        .map(|s| (s.file.clone(), s.scene.render()))
        .collect();
    let mut artifacts: Vec<FigureArtifact> = doc
        .scenes
        .iter()
        .enumerate()
        .map(|(i, s)| FigureArtifact {
            kind: if i == 0 {
                "worldline-diagram"
            } else {
                "support-dots"
            },
            path: out_dir.join(&s.file).display().to_string(),
            format: "svg",
        })
        .collect();
    files.push(("figures.json".into(), crate::to_json(&doc)));
    artifacts.push(FigureArtifact {
        kind: "figure-data",
        path: out_dir.join("figures.json").display().to_string(),
        format: "json",
    });
    if format == Format::Csv {
        files.push((
            "supports.csv".into(),
            csv_string(&["observer", "chi", "tau", "e1", "e2", "weight"], csv_rows),
        ));
        artifacts.push(FigureArtifact {
            kind: "figure-data",
            path: out_dir.join("supports.csv").display().to_string(),
            format: "csv",
        });
    }
    Ok(CommandOutput {
        stdout: crate::to_json(&artifacts),
        files,
        status: 0,
        warnings: Vec::new(),
    })
}

// ---------------------------------------------------------------- check

#[derive(Serialize)]
struct QuantumRowJson {
    branch: [i8; 2],
    left: Vec<[f64; 2]>,
    right: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct ClassicalRowJson {
    branch: [i8; 2],
    left: Vec<SupportPointJson>,
    right: Vec<SupportPointJson>,
}

#[derive(Serialize)]
struct ScenarioVerdictJson<R> {
    #[serde(flatten)]
    verdict: VerdictJson,
    rows: Vec<R>,
}

#[derive(Serialize)]
struct CheckJson {
    quantum: ScenarioVerdictJson<QuantumRowJson>,
    classical: ScenarioVerdictJson<ClassicalRowJson>,
    classical_degenerate: bool,
    linear_residual_threshold: f64,
    confirmed: bool,
    warnings: Vec<String>,
}

fn branch_json(branch: (Sign, Sign)) -> [i8; 2] {
    [report::sign_json(branch.0), report::sign_json(branch.1)]
}

fn verdict_csv_rows<D: exoframe_core::checker::Description>(
    scenario: &str,
    table: &DescriptionTable<D>,
    verdict: &CheckVerdict,
) -> Vec<Vec<String>> {
    let witness = verdict
        .witness
        .map_or([String::new(), String::new()], |(i, j)| {
            [i.to_string(), j.to_string()]
        });
    table
        .rows()
        .iter()
        .zip(&verdict.per_row_errors)
        .enumerate()
        .map(|(i, (row, err))| {
            vec![
                scenario.to_string(),
                i.to_string(),
                row.branch.0.as_i8().to_string(),
                row.branch.1.as_i8().to_string(),
                fmt_num(*err),
                verdict.function_exists.to_string(),
                witness[0].clone(),
                witness[1].clone(),
                fmt_num(verdict.best_linear_residual),
            ]
        })
        .collect()
}

/// Runs the no-transformation checks on both scenarios.
pub fn cmd_check(config: &ScenarioConfig, format: Format) -> Result<CommandOutput, CliError> {
    config.validate()?;
    let params = config.bouncer_params()?;
    let alice = config.primary_slice(ObserverName::Alice)?;
    let bob = config.primary_slice(ObserverName::Bob)?;
    let scenario_error = |e: exoframe_core::Error| match e {
        exoframe_core::Error::InvalidScenario(msg) => CliError::Config(msg.to_string()),
        other => CliError::Core(other),
    };
    let quantum_table =
        build_quantum_table(&config.measurement_events(), &alice, &bob).map_err(scenario_error)?;
    let classical_table = build_classical_table(&params, &alice, &bob).map_err(scenario_error)?;
    let quantum = check(&quantum_table)?;
    let classical = check(&classical_table)?;

    let mut warnings = Vec::new();
    let quantum_ok =
        !quantum.function_exists && quantum.best_linear_residual > LINEAR_RESIDUAL_THRESHOLD;
    let degenerate = params.is_degenerate();
    let classical_ok = if degenerate {
        warnings.push(format!(
            "classical scenario is degenerate (k*p = 0): E+ = E-, descriptions agree and a map exists (function_exists = {})",
            classical.function_exists
        ));
        classical.function_exists
    } else {
        !classical.function_exists && classical.best_linear_residual > LINEAR_RESIDUAL_THRESHOLD
    };
    let confirmed = quantum_ok && classical_ok;

    let stdout = match format {
        Format::Json => crate::to_json(&CheckJson {
            quantum: ScenarioVerdictJson {
                verdict: VerdictJson::from(&quantum),
                rows: quantum_table
                    .rows()
                    .iter()
                    .map(|r| QuantumRowJson {
                        branch: branch_json(r.branch),
                        left: report::state_json(&r.left),
                        right: report::state_json(&r.right),
                    })
                    .collect(),
            },
            classical: ScenarioVerdictJson {
                verdict: VerdictJson::from(&classical),
                rows: classical_table
                    .rows()
                    .iter()
                    .map(|r| ClassicalRowJson {
                        branch: branch_json(r.branch),
                        left: report::support_json(&r.left),
                        right: report::support_json(&r.right),
                    })
                    .collect(),
            },
            classical_degenerate: degenerate,
            linear_residual_threshold: LINEAR_RESIDUAL_THRESHOLD,
            confirmed,
            warnings: warnings.clone(),
        }),
        Format::Csv => {
            let mut rows = verdict_csv_rows("quantum", &quantum_table, &quantum);
            rows.extend(verdict_csv_rows("classical", &classical_table, &classical));
            csv_string(
                &[
                    "scenario",
                    "row",
                    "branch_first",
                    "branch_second",
                    "row_error",
                    "function_exists",
                    "witness_first",
                    "witness_second",
                    "best_linear_residual",
                ],
                rows,
            )
        }
    };
    Ok(CommandOutput {
        files: vec![(format!("check.{}", format.extension()), stdout.clone())],
        stdout,
        status: if confirmed { 0 } else { 1 },
        warnings,
    })
}

// ---------------------------------------------------------------- chsh

#[derive(Serialize)]
struct BoundScanJson {
    quadruples: u64,
    seed: u64,
    max_abs_s: f64,
    bound: f64,
}

#[derive(Serialize)]
struct ChshJson {
    seed: u64,
    n_samples: u64,
    results: Vec<BellResultJson>,
    bound_scan: BoundScanJson,
}

/// CHSH values for the singlet and both classical evaluations, plus a
/// random scan of the classical bound.
pub fn cmd_chsh(config: &ScenarioConfig, format: Format) -> Result<CommandOutput, CliError> {
    config.validate()?;
    let settings = config.analyzer_settings()?;
    let (seed, n) = (config.seed, config.bell.n_samples);
    let settings_json = || SettingsJson::from(&settings);

    let quantum = chsh_terms(&settings, CorrelationModel::Quantum)?;
    let analytic = chsh_terms(&settings, CorrelationModel::ClassicalAnalytic)?;
    let mc = crate::parallel::chsh_mc(&settings, n, seed)?;
    let mc_values = mc.map(|e| e.value);
    let mc_s = mc_values[0] + mc_values[1] + mc_values[2] - mc_values[3];
    let scan_seed = bell::pair_seed(seed, 4);
    let max_abs_s = bell::classical_chsh_bound_scan(config.bell.scan_quadruples, scan_seed)?;

    let results = vec![
        BellResultJson {
            model: "quantum",
            settings: settings_json(),
            s: quantum.s,
            correlations: quantum.correlations,
            standard_errors: None,
            n_samples: None,
            seed: None,
        },
        BellResultJson {
            model: "classical-analytic",
            settings: settings_json(),
            s: analytic.s,
            correlations: analytic.correlations,
            standard_errors: None,
            n_samples: None,
            seed: None,
        },
        BellResultJson {
            model: "classical-mc",
            settings: settings_json(),
            s: mc_s,
            correlations: mc_values,
            standard_errors: Some(mc.map(|e| e.standard_error)),
            n_samples: Some(n),
            seed: Some(seed),
        },
    ];
    let mut warnings = Vec::new();
    if max_abs_s > 2.0 + 1e-9 {
        warnings.push(format!("classical bound scan exceeded 2: {max_abs_s}"));
    }
    let stdout = match format {
        Format::Json => crate::to_json(&ChshJson {
            seed,
            n_samples: n,
            results,
            bound_scan: BoundScanJson {
                quadruples: config.bell.scan_quadruples,
                seed: scan_seed,
                max_abs_s,
                bound: 2.0,
            },
        }),
        Format::Csv => {
            let mut rows = Vec::new();
            for r in &results {
                for (i, e) in r.correlations.iter().enumerate() {
                    rows.push(vec![
                        r.model.to_string(),
                        ["ab", "ab'", "a'b", "a'b'"][i].to_string(),
                        fmt_num(*e),
                        fmt_num(r.s),
                        r.n_samples.map(|v| v.to_string()).unwrap_or_default(),
                        r.seed.map(|v| v.to_string()).unwrap_or_default(),
                    ]);
                }
            }
            rows.push(vec![
                "classical-bound-scan".into(),
                String::new(),
                String::new(),
                fmt_num(max_abs_s),
                config.bell.scan_quadruples.to_string(),
                scan_seed.to_string(),
            ]);
            csv_string(
                &["model", "pair", "correlation", "s", "n_samples", "seed"],
                rows,
            )
        }
    };
    Ok(CommandOutput {
        files: vec![(format!("chsh.{}", format.extension()), stdout.clone())],
        stdout,
        status: if warnings.is_empty() { 0 } else { 1 },
        warnings,
    })
}

// ---------------------------------------------------------------- simulate

#[derive(Serialize)]
struct SimSliceJson {
    tau: f64,
    kicks_before: [bool; 2],
    measurements_before: [bool; 2],
    unmeasured_support: Vec<SupportPointJson>,
    measured_support: Vec<SupportPointJson>,
    quantum_state: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct SimObserverJson {
    name: &'static str,
    rapidity: f64,
    slices: Vec<SimSliceJson>,
}

#[derive(Serialize)]
struct SimulateJson {
    seed: u64,
    classical_signs: [i8; 2],
    classical_energies: [f64; 2],
    quantum_outcomes: [i8; 2],
    quantum_probabilities: [f64; 2],
    observers: Vec<SimObserverJson>,
}

/// Sampled outcomes of one run: kick signs, then the two `σ_y` results.
pub struct History {
    pub classical_signs: [Sign; 2],
    pub quantum_outcomes: [Sign; 2],
    pub quantum_probabilities: [f64; 2],
}

/// Draws one history. The draw order is fixed and independent of observers.
pub fn sample_history(seed: u64) -> Result<History, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sign = || {
        if rng.random::<bool>() {
            Sign::Plus
        } else {
            Sign::Minus
        }
    };
    let classical_signs = [sign(), sign()];
    let first = measure_sigma_y(&prepare_initial(), Particle::First, &mut rng)?;
    let second = measure_sigma_y(&first.post_state, Particle::Second, &mut rng)?;
    Ok(History {
        classical_signs,
        quantum_outcomes: [first.outcome, second.outcome],
        quantum_probabilities: [first.probability, second.probability],
    })
}

/// Samples one history and logs every observer's descriptions slice by slice.
pub fn cmd_simulate(config: &ScenarioConfig, format: Format) -> Result<CommandOutput, CliError> {
    config.validate()?;
    let params = config.bouncer_params()?;
    let events = config.measurement_events();
    let history = sample_history(config.seed)?;

    let mut observers = Vec::new();
    for obs in &config.observers {
        let mut taus: Vec<f64> = config
            .slices
            .iter()
            .filter(|s| s.observer == obs.name)
            .map(|s| s.tau)
            .collect();
        taus.sort_by(f64::total_cmp);
        let mut slices = Vec::new();
        for tau in taus {
            let slice = ObserverSlice::new(obs.name.observer(), obs.rapidity, tau);
            let plane = slice.slice()?;
            let kicked = kicks_before(&params, &plane);
            let record = MeasurementRecord::new(
                kicked[0].then_some(history.classical_signs[0]),
                kicked[1].then_some(history.classical_signs[1]),
            );
            let measured_before = events.map(|e| plane.is_before(e));
            let branch = OutcomeBranch::new(
                measured_before[0].then_some(history.quantum_outcomes[0]),
                measured_before[1].then_some(history.quantum_outcomes[1]),
            );
            slices.push(SimSliceJson {
                tau,
                kicks_before: kicked,
                measurements_before: measured_before,
                unmeasured_support: report::support_json(&support_on_slice(
                    &params,
                    &plane,
                    &MeasurementRecord::NONE,
                )?),
                measured_support: report::support_json(&support_on_slice(
                    &params, &plane, &record,
                )?),
                quantum_state: report::state_json(&description_on_slice(&slice, &branch, &events)?),
            });
        }
        observers.push(SimObserverJson {
            name: obs.name.as_str(),
            rapidity: obs.rapidity,
            slices,
        });
    }
    let doc = SimulateJson {
        seed: config.seed,
        classical_signs: history.classical_signs.map(Sign::as_i8),
        classical_energies: [
            kicked_energy(&params, history.classical_signs[0])?,
            kicked_energy(&params, history.classical_signs[1])?,
        ],
        quantum_outcomes: history.quantum_outcomes.map(Sign::as_i8),
        quantum_probabilities: history.quantum_probabilities,
        observers,
    };
    let stdout = match format {
        Format::Json => crate::to_json(&doc),
        Format::Csv => {
            let mut rows = Vec::new();
            for obs in &doc.observers {
                for s in &obs.slices {
                    let prefix = [obs.name.to_string(), fmt_num(obs.rapidity), fmt_num(s.tau)];
                    for (kind, support) in [
                        ("unmeasured", &s.unmeasured_support),
                        ("measured", &s.measured_support),
                    ] {
                        for (i, pt) in support.iter().enumerate() {
                            let mut row = prefix.to_vec();
                            row.extend([
                                kind.into(),
                                i.to_string(),
                                fmt_num(pt.e1),
                                fmt_num(pt.e2),
                                fmt_num(pt.weight),
                            ]);
                            rows.push(row);
                        }
                    }
                    for (i, [re, im]) in s.quantum_state.iter().enumerate() {
                        let mut row = prefix.to_vec();
                        row.extend([
                            "state".into(),
                            i.to_string(),
                            fmt_num(*re),
                            fmt_num(*im),
                            String::new(),
                        ]);
                        rows.push(row);
                    }
                }
            }
            csv_string(
                &["observer", "chi", "tau", "kind", "index", "v1", "v2", "v3"],
                rows,
            )
        }
    };
    Ok(CommandOutput {
        files: vec![(format!("simulate.{}", format.extension()), stdout.clone())],
        stdout,
        status: 0,
        warnings: Vec::new(),
    })
}
