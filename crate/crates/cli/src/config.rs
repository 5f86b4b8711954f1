//! Experiment configuration: `[section]` headers with `key = value` lines,
//! overridable with `section.key=value` pairs from the command line.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use bvlab_core::WeightSpec;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Experiment {
    Counterexample,
    WeightedPoint,
    CartanDemo,
    StrongCartan,
    HarnackSweep,
    CoareaSuite,
    ThinnessAtlas,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Counterexample,
        Experiment::WeightedPoint,
        Experiment::CartanDemo,
        Experiment::StrongCartan,
        Experiment::HarnackSweep,
        Experiment::CoareaSuite,
        Experiment::ThinnessAtlas,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Counterexample => "counterexample",
            Experiment::WeightedPoint => "weighted_point",
            Experiment::CartanDemo => "cartan_demo",
            Experiment::StrongCartan => "strong_cartan",
            Experiment::HarnackSweep => "harnack_sweep",
            Experiment::CoareaSuite => "coarea_suite",
            Experiment::ThinnessAtlas => "thinness_atlas",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Experiment::Counterexample => "rectangle chain: solution identity, capacity bounds, stripe density",
            Experiment::WeightedPoint => "mass decay and thickness of the origin under |x|^a weights",
            Experiment::CartanDemo => "weak Cartan certificate for a cusp at the origin",
            Experiment::StrongCartan => "stacked capacity-budget minimizers diverging along a cusp",
            Experiment::HarnackSweep => "superminimizer, De Giorgi and weak Harnack checks on a seeded suite",
            Experiment::CoareaSuite => "exact coarea on random grid functions",
            Experiment::ThinnessAtlas => "thin/thick classification of a reference family of sets",
        }
    }

    /// Default value of `key` for this experiment, if it has one.
    fn default_for(self, key: &str) -> Option<&'static str> {
        use Experiment::*;
        let v = match (self, key) {
            (_, "space.dim") => "2",
            (Counterexample, "space.extent") => "2",
            (_, "space.extent") => "1",
            (Counterexample, "space.resolution") => "2048",
            (WeightedPoint | CartanDemo, "space.resolution") => "512",
            (StrongCartan, "space.resolution") => "1024",
            (HarnackSweep | ThinnessAtlas, "space.resolution") => "256",
            (CoareaSuite, "space.resolution") => "32",
            (WeightedPoint | StrongCartan, "space.weight") => "power_law(-1.5)",
            (_, "space.weight") => "uniform",
            (_, "params.eps") => "0.1",
            (_, "params.chain_depth") => "2",
            (WeightedPoint, "params.depth") => "4",
            (_, "params.depth") => "3",
            (_, "params.k_max") => "4",
            (StrongCartan, "params.radius") => "0.98",
            (ThinnessAtlas, "params.radius") => "0.4",
            (_, "params.radius") => "0.5",
            (StrongCartan, "params.curvature") => "48",
            (_, "params.curvature") => "0.5",
            (_, "params.gate") => "verdict",
            (_, "params.seed") => "1",
            (_, "params.samples") => "200",
            (_, "params.trials") => "200",
            (_, "params.triples") => "50",
            (_, "params.solutions") => "20",
            (_, "tolerance.coarea") => "1e-12",
            (_, "tolerance.mass_ratio") => "0.15",
            (_, "tolerance.profile_floor") => "1e-2",
            (_, "tolerance.harnack_c") => "64",
            (_, "output.dir") => "out",
            (_, "output.svg") => "true",
            _ => return None,
        };
        Some(v)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s.trim())
            .ok_or_else(|| CliError::Usage(format!("unknown experiment {s:?}; expected one of: {}", experiment_list())))
    }
}

pub fn experiment_list() -> String {
    Experiment::ALL.iter().map(|e| e.name()).collect::<Vec<_>>().join(", ")
}

/// Every accepted key with its description.
pub const KEYS: &[(&str, &str)] = &[
    ("experiment.name", "experiment to run (see `bvlab list`)"),
    ("space.dim", "grid dimension, 1 or 2"),
    ("space.extent", "half side L of the domain [-L, L]^dim"),
    ("space.resolution", "cells per axis, even and at least 4"),
    ("space.weight", "uniform | power_law(a)"),
    ("params.eps", "rectangle chain parameter (counterexample)"),
    ("params.chain_depth", "number of rectangles in the chain (counterexample)"),
    ("params.depth", "number of dyadic scales"),
    ("params.k_max", "levels of the stacked construction (strong_cartan)"),
    ("params.radius", "base radius R"),
    ("params.curvature", "cusp opening: the cusp is |y| <= s^2 / curvature"),
    ("params.gate", "verdict | override: thinness gate of the Cartan constructions"),
    ("params.seed", "seed of every random draw"),
    ("params.samples", "random functions (coarea_suite)"),
    ("params.trials", "perturbations per solution (harnack_sweep)"),
    ("params.triples", "De Giorgi triples per solution (harnack_sweep)"),
    ("params.solutions", "size of the obstacle suite (harnack_sweep)"),
    ("tolerance.coarea", "relative tolerance of the coarea identity"),
    ("tolerance.mass_ratio", "relative tolerance of successive mass ratios"),
    ("tolerance.profile_floor", "lower bound on thick profiles"),
    ("tolerance.harnack_c", "bound on the fitted weak Harnack constant"),
    ("output.dir", "directory for report.csv, profiles and figures"),
    ("output.svg", "true | false: write SVG rasters"),
];

pub fn keys_help() -> String {
    let mut s = String::from("Config keys ([section] then key = value; override with --set section.key=value):\n");
    for (k, d) in KEYS {
        s.push_str(&format!("  {k:<24} {d}\n"));
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    Verdict,
    Override,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceConfig {
    pub dim: usize,
    pub extent: f64,
    pub resolution: usize,
    pub weight: WeightSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub eps: f64,
    pub chain_depth: usize,
    pub depth: usize,
    pub k_max: usize,
    pub radius: f64,
    pub curvature: f64,
    pub gate: Gate,
    pub seed: u64,
    pub samples: usize,
    pub trials: usize,
    pub triples: usize,
    pub solutions: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    pub coarea: f64,
    pub mass_ratio: f64,
    pub profile_floor: f64,
    pub harnack_c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub space: SpaceConfig,
    pub params: Params,
    pub tolerance: Tolerances,
    pub out_dir: PathBuf,
    pub svg: bool,
}

impl ExperimentConfig {
    /// Parses config text, then applies `overrides` of the form `section.key=value`.
    pub fn parse(text: &str, overrides: &[String]) -> Result<Self, CliError> {
        let ini = ini::Ini::load_from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        let mut values = BTreeMap::new();
        for (section, props) in ini.iter() {
            for (k, v) in props.iter() {
                let Some(section) = section else {
                    return Err(CliError::Usage(format!("config key {k:?} is outside a [section]")));
                };
                insert_key(&mut values, format!("{section}.{k}"), v)?;
            }
        }
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("override {o:?} is not key=value")))?;
            insert_key(&mut values, k.trim().to_string(), v)?;
        }
        Self::from_values(&values)
    }

    /// Defaults of `experiment` with `overrides` applied.
    pub fn defaults(experiment: Experiment, overrides: &[(&str, &str)]) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        values.insert("experiment.name".to_string(), experiment.name().to_string());
        for (k, v) in overrides {
            insert_key(&mut values, k.to_string(), v)?;
        }
        Self::from_values(&values)
    }

    fn from_values(values: &BTreeMap<String, String>) -> Result<Self, CliError> {
        let experiment: Experiment = values
            .get("experiment.name")
            .ok_or_else(|| {
                CliError::Usage(format!("missing experiment.name; expected one of: {}", experiment_list()))
            })?
            .parse()?;
        let get = |key: &str| -> &str {
            values
                .get(key)
                .map(String::as_str)
                .or_else(|| experiment.default_for(key))
                .unwrap_or_default()
        };
        let space = SpaceConfig {
            dim: parse_key(get("space.dim"), "space.dim")?,
            extent: parse_key(get("space.extent"), "space.extent")?,
            resolution: parse_key(get("space.resolution"), "space.resolution")?,
            weight: parse_key(get("space.weight"), "space.weight")?,
        };
        let gate = match get("params.gate") {
            "verdict" => Gate::Verdict,
            "override" => Gate::Override,
            other => return Err(CliError::Usage(format!("params.gate must be verdict or override, got {other:?}"))),
        };
        let params = Params {
            eps: parse_key(get("params.eps"), "params.eps")?,
            chain_depth: parse_key(get("params.chain_depth"), "params.chain_depth")?,
            depth: parse_key(get("params.depth"), "params.depth")?,
            k_max: parse_key(get("params.k_max"), "params.k_max")?,
            radius: parse_key(get("params.radius"), "params.radius")?,
            curvature: parse_key(get("params.curvature"), "params.curvature")?,
            gate,
            seed: parse_key(get("params.seed"), "params.seed")?,
            samples: parse_key(get("params.samples"), "params.samples")?,
            trials: parse_key(get("params.trials"), "params.trials")?,
            triples: parse_key(get("params.triples"), "params.triples")?,
            solutions: parse_key(get("params.solutions"), "params.solutions")?,
        };
        let tolerance = Tolerances {
            coarea: parse_key(get("tolerance.coarea"), "tolerance.coarea")?,
            mass_ratio: parse_key(get("tolerance.mass_ratio"), "tolerance.mass_ratio")?,
            profile_floor: parse_key(get("tolerance.profile_floor"), "tolerance.profile_floor")?,
            harnack_c: parse_key(get("tolerance.harnack_c"), "tolerance.harnack_c")?,
        };
        Ok(ExperimentConfig {
            experiment,
            space,
            params,
            tolerance,
            out_dir: PathBuf::from(get("output.dir")),
            svg: parse_key(get("output.svg"), "output.svg")?,
        })
    }

    /// Resolved configuration as `key = value` lines in key order.
    pub fn echo(&self) -> String {
        let p = &self.params;
        let t = &self.tolerance;
        let gate = match p.gate {
            Gate::Verdict => "verdict",
            Gate::Override => "override",
        };
        let lines = [
            ("experiment.name", self.experiment.to_string()),
            ("space.dim", self.space.dim.to_string()),
            ("space.extent", self.space.extent.to_string()),
            ("space.resolution", self.space.resolution.to_string()),
            ("space.weight", self.space.weight.to_string()),
            ("params.eps", p.eps.to_string()),
            ("params.chain_depth", p.chain_depth.to_string()),
            ("params.depth", p.depth.to_string()),
            ("params.k_max", p.k_max.to_string()),
            ("params.radius", p.radius.to_string()),
            ("params.curvature", p.curvature.to_string()),
            ("params.gate", gate.to_string()),
            ("params.seed", p.seed.to_string()),
            ("params.samples", p.samples.to_string()),
            ("params.trials", p.trials.to_string()),
            ("params.triples", p.triples.to_string()),
            ("params.solutions", p.solutions.to_string()),
            ("tolerance.coarea", t.coarea.to_string()),
            ("tolerance.mass_ratio", t.mass_ratio.to_string()),
            ("tolerance.profile_floor", t.profile_floor.to_string()),
            ("tolerance.harnack_c", t.harnack_c.to_string()),
            ("output.dir", self.out_dir.display().to_string()),
            ("output.svg", self.svg.to_string()),
        ];
        lines.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

fn insert_key(values: &mut BTreeMap<String, String>, key: String, value: &str) -> Result<(), CliError> {
    if !KEYS.iter().any(|(k, _)| *k == key) {
        return Err(CliError::Usage(format!("unknown config key {key:?}; see `bvlab run --help`")));
    }
    values.insert(key, value.trim().to_string());
    Ok(())
}

fn parse_key<T: FromStr>(raw: &str, key: &str) -> Result<T, CliError> {
    raw.parse()
        .map_err(|_| CliError::Usage(format!("{key}: cannot parse {raw:?}")))
}
