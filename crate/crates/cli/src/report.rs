//! Machine-readable reports (`--json`).

use concbound_core::bounds::BoundReport;
use concbound_core::concurrence::RoofOptions;
use concbound_core::distill::{DistillVerdict, Distillable, SearchOptions};
use concbound_core::states::Fingerprint;
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "concbound/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub version: String,
    pub command: Vec<String>,
    pub seed: Option<u64>,
    pub input: Input,
    pub results: Results,
    pub timing_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Input {
    pub source: String,
    pub m: usize,
    pub n: usize,
    pub trace: f64,
    pub min_eigenvalue: f64,
    pub hermitian_deviation: f64,
}

impl Input {
    pub fn new(source: String, fp: &Fingerprint) -> Self {
        Self {
            source,
            m: fp.m,
            n: fp.n,
            trace: fp.trace,
            min_eigenvalue: fp.min_eigenvalue,
            hermitian_deviation: fp.hermitian_deviation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Results {
    Gen { path: Option<String> },
    Bound { bounds: Vec<Bound> },
    Roof { bound: Bound, options: RoofSettings },
    Distill(Distill),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub kind: String,
    pub s: usize,
    pub t: usize,
    pub value_sq: f64,
    pub value: f64,
    pub prefactor: f64,
    pub certified: bool,
    pub converged: bool,
    pub swapped: bool,
    pub blocks: Vec<Block>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub contribution: f64,
}

impl From<&BoundReport> for Bound {
    fn from(r: &BoundReport) -> Self {
        Self {
            kind: r.kind.name().to_owned(),
            s: r.s,
            t: r.t,
            value_sq: r.value_sq,
            value: r.value(),
            prefactor: r.prefactor,
            certified: r.certified,
            converged: r.converged,
            swapped: r.swapped,
            blocks: r
                .blocks
                .iter()
                .map(|b| Block {
                    rows: b.selector.rows().to_vec(),
                    cols: b.selector.cols().to_vec(),
                    contribution: b.contribution,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoofSettings {
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    pub max_sweeps: usize,
    pub tol: f64,
}

impl From<&RoofOptions> for RoofSettings {
    fn from(o: &RoofOptions) -> Self {
        Self {
            ensemble_size: o.ensemble_size,
            restarts: o.restarts,
            max_sweeps: o.max_sweeps,
            tol: o.tol,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    Fires,
    Silent,
}

impl From<bool> for Flag {
    fn from(b: bool) -> Self {
        if b {
            Flag::Fires
        } else {
            Flag::Silent
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Criteria {
    pub theorem3: Flag,
    pub tau22_ou: Flag,
    pub reduction: Flag,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub copies: usize,
    pub orientation: String,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub min_pt_eigenvalue: f64,
    pub rotation: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Distill {
    pub distillable: String,
    pub criteria: Criteria,
    pub witness: Option<Witness>,
    pub tau22_ou_copies: Option<usize>,
    pub reduction_min_eigenvalue: f64,
    pub max_copies: usize,
    pub rotations: usize,
}

impl Distill {
    pub fn new(v: &DistillVerdict, opts: &SearchOptions) -> Self {
        Self {
            distillable: match v.distillable {
                Distillable::Yes => "yes",
                Distillable::Unknown => "unknown",
            }
            .to_owned(),
            criteria: Criteria {
                theorem3: v.theorem3.into(),
                tau22_ou: v.tau22_ou.is_some().into(),
                reduction: v.reduction.into(),
            },
            witness: v.witness.as_ref().map(|w| Witness {
                copies: w.copies,
                orientation: w.orientation.label().to_owned(),
                rows: w.selector.rows().to_vec(),
                cols: w.selector.cols().to_vec(),
                min_pt_eigenvalue: w.min_pt_eigenvalue,
                rotation: w.rotation,
            }),
            tau22_ou_copies: v.tau22_ou,
            reduction_min_eigenvalue: v.reduction_min_eigenvalue,
            max_copies: opts.max_copies,
            rotations: opts.rotations,
        }
    }
}
