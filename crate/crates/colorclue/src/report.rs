//! JSON documents written by the command-line tool.
//!
//! Fields whose name contains `elapsed` are timings; every other field is a
//! pure function of the inputs and the seed.

use colorclue_core::cdsatur::ChromaticBounds;
use colorclue_core::clue::{ub_rounded, ClueReport, Sample, Verdict};
use colorclue_core::iscount::{AlphaBounds, IsCount, PedersenBound};
use colorclue_core::{CountResult, Graph, LimitHit};
use serde::{Deserialize, Serialize, Serializer};

/// Extended real: finite values as numbers, `+inf` as the string `"+inf"`.
pub fn ser_extended<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str("+inf")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct InstanceInfo {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub density: Option<f64>,
}

impl InstanceInfo {
    pub fn of(g: &Graph, label: &str) -> Self {
        InstanceInfo { instance: label.to_string(), n: g.n(), m: g.m(), density: g.density().ok() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClueDoc {
    #[serde(flatten)]
    pub info: InstanceInfo,
    pub k: u32,
    pub t: usize,
    pub p: usize,
    #[serde(serialize_with = "ser_extended")]
    pub ub: f64,
    pub ub_rounded: Option<u64>,
    pub alpha_const: f64,
    pub is_count: u64,
    pub is_exact: bool,
    pub is_cap: u64,
    pub threshold: i64,
    pub verdict: Verdict,
    pub runs: u64,
    pub failed_runs: u64,
    pub seed: u64,
    pub seeds: Vec<u64>,
    pub elapsed_total_s: f64,
    pub per_run_elapsed_s: Vec<f64>,
}

impl ClueDoc {
    pub fn new(info: InstanceInfo, report: &ClueReport, sample: &Sample, seed: u64, elapsed_total: f64) -> Self {
        ClueDoc {
            info,
            k: report.k,
            t: report.t,
            p: report.p,
            ub: report.ub,
            ub_rounded: ub_rounded(report.ub),
            alpha_const: report.alpha_const,
            is_count: report.is_count.value(),
            is_exact: report.is_count.exact(),
            is_cap: report.is_count.cap,
            threshold: report.threshold,
            verdict: report.verdict,
            runs: sample.t() as u64 + sample.failed_runs,
            failed_runs: sample.failed_runs,
            seed,
            seeds: sample.seeds.clone(),
            elapsed_total_s: elapsed_total,
            per_run_elapsed_s: sample.per_run_elapsed.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsDoc {
    pub lb: u32,
    pub ub: u32,
    pub exact: bool,
    pub coloring: String,
    pub nodes: u64,
    pub elapsed_s: f64,
}

impl From<&ChromaticBounds> for BoundsDoc {
    fn from(b: &ChromaticBounds) -> Self {
        BoundsDoc {
            lb: b.lb,
            ub: b.ub,
            exact: b.exact,
            coloring: crate::dimacs::solution_line(&b.coloring),
            nodes: b.nodes,
            elapsed_s: b.elapsed,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CountDoc {
    #[serde(flatten)]
    pub info: InstanceInfo,
    pub k: u32,
    pub value: u64,
    pub exact: bool,
    pub limit_hit: LimitHit,
    pub nodes: u64,
    pub elapsed_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chromatic_bounds: Option<BoundsDoc>,
}

impl CountDoc {
    pub fn new(info: InstanceInfo, k: u32, r: &CountResult, bounds: Option<&ChromaticBounds>) -> Self {
        CountDoc {
            info,
            k,
            value: r.value,
            exact: r.exact,
            limit_hit: r.limit_hit,
            nodes: r.nodes,
            elapsed_s: r.elapsed,
            chromatic_bounds: bounds.map(BoundsDoc::from),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IsCountDoc {
    #[serde(flatten)]
    pub info: InstanceInfo,
    pub value: u64,
    pub exact: bool,
    pub cap: u64,
    pub limit_hit: LimitHit,
    pub nodes: u64,
    pub elapsed_s: f64,
    pub alpha_lb: u32,
    pub alpha_ub: u32,
    pub alpha_exact: bool,
    pub pedersen_lb: u64,
    pub pedersen_exceeds_cap: bool,
    pub bollobas_estimate: Option<f64>,
}

impl IsCountDoc {
    pub fn new(
        info: InstanceInfo,
        is: &IsCount,
        alpha: &AlphaBounds,
        pedersen: &PedersenBound,
        bollobas: Option<f64>,
    ) -> Self {
        IsCountDoc {
            info,
            value: is.value(),
            exact: is.exact(),
            cap: is.cap,
            limit_hit: is.result.limit_hit,
            nodes: is.result.nodes,
            elapsed_s: is.result.elapsed,
            alpha_lb: alpha.lb,
            alpha_ub: alpha.ub,
            alpha_exact: alpha.exact,
            pedersen_lb: pedersen.value,
            pedersen_exceeds_cap: pedersen.exceeds_cap,
            bollobas_estimate: bollobas.filter(|x| x.is_finite()),
        }
    }
}

/// Removes timing fields so two runs can be compared byte for byte.
pub fn strip_timings(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(map) => {
            map.retain(|k, _| !k.contains("elapsed"));
            map.values_mut().for_each(strip_timings);
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(strip_timings),
        _ => {}
    }
}
