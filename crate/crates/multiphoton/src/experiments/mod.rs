//! Named, parameterized experiment reproductions.
//!
//! Every experiment returns a [`ScanResult`] plus a list of [`Check`]s whose
//! expected values come from closed-form oracle functions evaluated at run
//! time, never from stored constants. Deterministic experiments are
//! bit-reproducible; Monte Carlo experiments are reproducible given
//! (seed, samples).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::FitSummary;
use crate::scan::{Check, ScanResult};

mod distinguishability;
mod fringe_mc;
mod interference;
mod noon;
mod null_scans;

pub mod closed_form;

/// A parameter value: experiments take numbers, plus the occasional
/// scheme-selector string.
#[derive(Clone, Debug, PartialEq)]
pub enum ParamValue {
    Number(f64),
    Text(String),
}

impl Serialize for ParamValue {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match self {
            // whole numbers read better as integers in the summary
            ParamValue::Number(x) if x.fract() == 0.0 && x.abs() < 9.0e15 => {
                serializer.serialize_i64(*x as i64)
            }
            ParamValue::Number(x) => serializer.serialize_f64(*x),
            ParamValue::Text(t) => serializer.serialize_str(t),
        }
    }
}

impl ParamValue {
    pub fn parse(raw: &str) -> Self {
        match raw.parse::<f64>() {
            Ok(x) => ParamValue::Number(x),
            Err(_) => ParamValue::Text(raw.to_string()),
        }
    }
}

impl std::fmt::Display for ParamValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamValue::Number(x) => write!(f, "{x}"),
            ParamValue::Text(s) => write!(f, "{s}"),
        }
    }
}

/// Declared parameter of an experiment.
#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: ParamDefault,
    pub help: &'static str,
}

#[derive(Clone, Copy, Debug)]
pub enum ParamDefault {
    Number(f64),
    Text(&'static str),
}

/// Default sweep of the experiment's scanned parameter.
#[derive(Clone, Copy, Debug)]
pub struct ScanDefaults {
    pub parameter: &'static str,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

/// A requested sweep override.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanRange {
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl ScanRange {
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps.max(2);
        (0..n)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64)
            .collect()
    }
}

/// Inputs to one experiment run: overrides on top of schema defaults.
#[derive(Clone, Debug, Default)]
pub struct RunInput {
    pub params: BTreeMap<String, ParamValue>,
    pub scan: Option<ScanRange>,
    pub seed: u64,
}

/// Fully resolved parameters (defaults filled in, overrides validated).
pub struct ResolvedInput {
    values: BTreeMap<String, ParamValue>,
    scan: Option<ScanRange>,
    pub seed: u64,
}

impl ResolvedInput {
    pub fn number(&self, name: &str) -> f64 {
        match self.values.get(name) {
            Some(ParamValue::Number(x)) => *x,
            _ => unreachable!("schema guarantees numeric parameter '{name}'"),
        }
    }

    pub fn text(&self, name: &str) -> &str {
        match self.values.get(name) {
            Some(ParamValue::Text(s)) => s,
            _ => unreachable!("schema guarantees text parameter '{name}'"),
        }
    }

    /// Numeric parameter that must hold a non-negative integer.
    pub fn count(&self, name: &str) -> Result<usize> {
        let x = self.number(name);
        if x < 0.0 || x.fract() != 0.0 || x > u32::MAX as f64 {
            return Err(Error::InvalidParameter(format!(
                "{name} must be a non-negative integer, got {x}"
            )));
        }
        Ok(x as usize)
    }

    /// The effective sweep: override when given, otherwise the default.
    pub fn scan_values(&self, defaults: &ScanDefaults) -> Result<(String, Vec<f64>)> {
        match &self.scan {
            None => {
                let range = ScanRange {
                    parameter: defaults.parameter.to_string(),
                    start: defaults.start,
                    stop: defaults.stop,
                    steps: defaults.steps,
                };
                Ok((range.parameter.clone(), range.values()))
            }
            Some(range) => {
                if range.parameter != defaults.parameter {
                    return Err(Error::InvalidParameter(format!(
                        "this experiment scans '{}', not '{}'",
                        defaults.parameter, range.parameter
                    )));
                }
                if range.steps < 2 {
                    return Err(Error::InvalidParameter(
                        "scan needs at least 2 steps".into(),
                    ));
                }
                Ok((range.parameter.clone(), range.values()))
            }
        }
    }

    pub fn resolved_values(&self) -> &BTreeMap<String, ParamValue> {
        &self.values
    }
}

/// A registered experiment.
pub struct ExperimentDef {
    pub name: &'static str,
    pub summary: &'static str,
    /// Short anchor string printed by the listing.
    pub anchor: &'static str,
    pub params: &'static [ParamSpec],
    pub default_scan: Option<ScanDefaults>,
    pub runner: fn(&ResolvedInput) -> Result<ExperimentReport>,
}

impl ExperimentDef {
    fn resolve(&self, input: &RunInput) -> Result<ResolvedInput> {
        for key in input.params.keys() {
            if !self.params.iter().any(|p| p.name == key) {
                return Err(Error::InvalidParameter(format!(
                    "experiment '{}' has no parameter '{key}'",
                    self.name
                )));
            }
        }
        let mut values = BTreeMap::new();
        for spec in self.params {
            let value = match (input.params.get(spec.name), spec.default) {
                (Some(ParamValue::Number(x)), ParamDefault::Number(_)) => ParamValue::Number(*x),
                (Some(ParamValue::Text(s)), ParamDefault::Text(_)) => ParamValue::Text(s.clone()),
                (Some(ParamValue::Number(x)), ParamDefault::Text(_)) => {
                    ParamValue::Text(x.to_string())
                }
                (Some(ParamValue::Text(s)), ParamDefault::Number(_)) => {
                    return Err(Error::InvalidParameter(format!(
                        "parameter '{}' expects a number, got '{s}'",
                        spec.name
                    )));
                }
                (None, ParamDefault::Number(x)) => ParamValue::Number(x),
                (None, ParamDefault::Text(s)) => ParamValue::Text(s.to_string()),
            };
            values.insert(spec.name.to_string(), value);
        }
        if input.scan.is_some() && self.default_scan.is_none() {
            return Err(Error::InvalidParameter(format!(
                "experiment '{}' does not support a scan override",
                self.name
            )));
        }
        Ok(ResolvedInput {
            values,
            scan: input.scan.clone(),
            seed: input.seed,
        })
    }

    /// Runs with defaults filled in.
    pub fn run(&self, input: &RunInput) -> Result<ExperimentReport> {
        let resolved = self.resolve(input)?;
        let mut report = (self.runner)(&resolved)?;
        report
            .scan
            .insert_metadata("seed", resolved.seed.to_string());
        for (name, value) in resolved.resolved_values() {
            report.resolved_params.insert(name.clone(), value.clone());
        }
        report
            .resolved_params
            .insert("seed".into(), ParamValue::Number(resolved.seed as f64));
        Ok(report)
    }
}

/// Scan table, pass/fail checks, and the optional fringe fit of one run.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub scan: ScanResult,
    pub checks: Vec<Check>,
    pub fit: Option<FitSummary>,
    /// The exact parameter values the run used.
    pub resolved_params: BTreeMap<String, ParamValue>,
}

impl ExperimentReport {
    pub fn new(scan: ScanResult, checks: Vec<Check>, fit: Option<FitSummary>) -> Self {
        Self {
            scan,
            checks,
            fit,
            resolved_params: BTreeMap::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// All registered experiments, alphabetically by name.
pub fn registry() -> &'static [ExperimentDef] {
    &[
        ExperimentDef {
            name: "bunching",
            summary: "two-photon and pair bunching ratios vs pair delay",
            anchor: "Eq. 13-15/40",
            params: &[ParamSpec {
                name: "bandwidth",
                default: ParamDefault::Number(1.0),
                help: "packet bandwidth sigma",
            }],
            default_scan: Some(ScanDefaults {
                parameter: "pair_delay",
                start: 0.0,
                stop: 5.0,
                steps: 51,
            }),
            runner: interference::run_bunching,
        },
        ExperimentDef {
            name: "de_broglie_projection",
            summary: "multi-photon fringes from projection measurements",
            anchor: "Eq. 18/21/33",
            params: &[
                ParamSpec {
                    name: "scheme",
                    default: ParamDefault::Text("three_photon_wk"),
                    help: "three_photon_wk | four_photon_asym | four_photon_symmetric | noon_projection",
                },
                ParamSpec {
                    name: "photons",
                    default: ParamDefault::Number(4.0),
                    help: "photon number for the noon_projection scheme",
                },
            ],
            default_scan: Some(ScanDefaults {
                parameter: "phase",
                start: 0.0,
                stop: 2.0 * std::f64::consts::PI,
                steps: 81,
            }),
            runner: noon::run_de_broglie_projection,
        },
        ExperimentDef {
            name: "fock_filter",
            summary: "ancilla-conditioned removal of one Fock component",
            anchor: "Eq. 19/20",
            params: &[
                ParamSpec {
                    name: "transmissivity",
                    default: ParamDefault::Number(2.0 / 3.0),
                    help: "splitter transmissivity T",
                },
                ParamSpec {
                    name: "c0",
                    default: ParamDefault::Number(1.0),
                    help: "input amplitude on |0>",
                },
                ParamSpec {
                    name: "c1",
                    default: ParamDefault::Number(1.0),
                    help: "input amplitude on |1>",
                },
                ParamSpec {
                    name: "c2",
                    default: ParamDefault::Number(1.0),
                    help: "input amplitude on |2>",
                },
                ParamSpec {
                    name: "c3",
                    default: ParamDefault::Number(0.0),
                    help: "input amplitude on |3>",
                },
                ParamSpec {
                    name: "c4",
                    default: ParamDefault::Number(0.0),
                    help: "input amplitude on |4>",
                },
                ParamSpec {
                    name: "c5",
                    default: ParamDefault::Number(0.0),
                    help: "input amplitude on |5>",
                },
            ],
            default_scan: None,
            runner: null_scans::run_fock_filter,
        },
        ExperimentDef {
            name: "fringe_montecarlo",
            summary: "single-realization fringe formation and degree of coherence",
            anchor: "Eq. 55-57",
            params: &[
                ParamSpec {
                    name: "n",
                    default: ParamDefault::Number(2.0),
                    help: "photons in group 1",
                },
                ParamSpec {
                    name: "m",
                    default: ParamDefault::Number(2.0),
                    help: "photons in group 2",
                },
                ParamSpec {
                    name: "n_indist",
                    default: ParamDefault::Number(1.0),
                    help: "group-1 photons indistinguishable from group 2",
                },
                ParamSpec {
                    name: "m_indist",
                    default: ParamDefault::Number(1.0),
                    help: "group-2 photons indistinguishable from group 1",
                },
                ParamSpec {
                    name: "samples",
                    default: ParamDefault::Number(10_000.0),
                    help: "detection events per realization (>= 1000)",
                },
                ParamSpec {
                    name: "realizations",
                    default: ParamDefault::Number(100.0),
                    help: "independent fringe realizations",
                },
                ParamSpec {
                    name: "fringe_spacing",
                    default: ParamDefault::Number(1.0),
                    help: "fringe spacing L",
                },
            ],
            default_scan: None,
            runner: fringe_mc::run_fringe_montecarlo,
        },
        ExperimentDef {
            name: "hom_dip",
            summary: "two-photon coincidence dip vs relative delay",
            anchor: "Eq. 11/12",
            params: &[
                ParamSpec {
                    name: "transmissivity",
                    default: ParamDefault::Number(0.5),
                    help: "splitter transmissivity T",
                },
                ParamSpec {
                    name: "bandwidth",
                    default: ParamDefault::Number(1.0),
                    help: "packet bandwidth sigma",
                },
            ],
            default_scan: Some(ScanDefaults {
                parameter: "delay",
                start: -5.0,
                stop: 5.0,
                steps: 81,
            }),
            runner: interference::run_hom_dip,
        },
        ExperimentDef {
            name: "noon_fringe",
            summary: "N-photon fringe with 1/N period from a NOON state",
            anchor: "Eq. 22/23",
            params: &[ParamSpec {
                name: "photons",
                default: ParamDefault::Number(4.0),
                help: "NOON photon number N (1..=6)",
            }],
            default_scan: Some(ScanDefaults {
                parameter: "phase",
                start: 0.0,
                stop: 2.0 * std::f64::consts::PI,
                steps: 81,
            }),
            runner: noon::run_noon_fringe,
        },
        ExperimentDef {
            name: "pfleegor_mandel",
            summary: "intensity correlation of two independent sources",
            anchor: "Eq. 1.3/1.4",
            params: &[ParamSpec {
                name: "fringe_spacing",
                default: ParamDefault::Number(1.0),
                help: "fringe spacing L",
            }],
            default_scan: Some(ScanDefaults {
                parameter: "separation",
                start: -1.5,
                stop: 1.5,
                steps: 121,
            }),
            runner: interference::run_pfleegor_mandel,
        },
        ExperimentDef {
            name: "stimulated_emission",
            summary: "(N+1)-fold enhancement of all-photon bunching",
            anchor: "Eq. 16",
            params: &[ParamSpec {
                name: "n_max",
                default: ParamDefault::Number(5.0),
                help: "largest seed photon number N (1..=5)",
            }],
            default_scan: None,
            runner: interference::run_stimulated_emission,
        },
        ExperimentDef {
            name: "three_photon_noon_generation",
            summary: "three-photon NOON state from coherent + pair mixing",
            anchor: "Eq. 25",
            params: &[
                ParamSpec {
                    name: "alpha_re",
                    default: ParamDefault::Number(0.2),
                    help: "coherent amplitude, real part",
                },
                ParamSpec {
                    name: "alpha_im",
                    default: ParamDefault::Number(0.0),
                    help: "coherent amplitude, imaginary part",
                },
                ParamSpec {
                    name: "eta_re",
                    default: ParamDefault::Number(0.028_284_271_247_461_905),
                    help: "pair amplitude, real part",
                },
                ParamSpec {
                    name: "eta_im",
                    default: ParamDefault::Number(0.0),
                    help: "pair amplitude, imaginary part",
                },
            ],
            default_scan: Some(ScanDefaults {
                parameter: "eta_scale",
                start: 0.0,
                stop: 2.0,
                steps: 41,
            }),
            runner: noon::run_three_photon_noon_generation,
        },
        ExperimentDef {
            name: "two_pair_null",
            summary: "four-photon coincidence null of the two-pair input",
            anchor: "Eq. 21",
            params: &[],
            default_scan: Some(ScanDefaults {
                parameter: "transmissivity",
                start: 0.01,
                stop: 0.99,
                steps: 99,
            }),
            runner: null_scans::run_two_pair_null,
        },
        ExperimentDef {
            name: "visibility_vs_distinguishability",
            summary: "dip visibility m/N under partial distinguishability",
            anchor: "Eq. 53/54",
            params: &[
                ParamSpec {
                    name: "scheme",
                    default: ParamDefault::Text("noon_projection"),
                    help: "noon_projection | asymmetric_bs",
                },
                ParamSpec {
                    name: "photons",
                    default: ParamDefault::Number(2.0),
                    help: "number of V photons N (1..=4)",
                },
                ParamSpec {
                    name: "overlapping",
                    default: ParamDefault::Number(1.0),
                    help: "V photons indistinguishable from the H photon (m <= N)",
                },
                ParamSpec {
                    name: "bandwidth",
                    default: ParamDefault::Number(1.0),
                    help: "packet bandwidth sigma",
                },
            ],
            default_scan: Some(ScanDefaults {
                parameter: "delay",
                start: -5.0,
                stop: 5.0,
                steps: 81,
            }),
            runner: distinguishability::run_visibility_vs_distinguishability,
        },
        ExperimentDef {
            name: "wang_kobayashi_null",
            summary: "three-photon coincidence null at T = 2/3",
            anchor: "Eq. 17/18",
            params: &[],
            default_scan: Some(ScanDefaults {
                parameter: "transmissivity",
                start: 0.01,
                stop: 0.99,
                steps: 99,
            }),
            runner: null_scans::run_wang_kobayashi_null,
        },
    ]
}

/// Looks up an experiment by name.
pub fn find(name: &str) -> Result<&'static ExperimentDef> {
    registry()
        .iter()
        .find(|def| def.name == name)
        .ok_or_else(|| Error::UnknownExperiment(name.to_string()))
}

/// Convenience dispatch.
pub fn run(name: &str, input: &RunInput) -> Result<ExperimentReport> {
    find(name)?.run(input)
}

/// Locates a sign change of `f` on [lo, hi] to within `tol` by bisection.
pub fn bisect_zero(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let mut lo = lo;
    let mut hi = hi;
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::FitFailed(format!("no sign change on [{lo}, {hi}]")));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
