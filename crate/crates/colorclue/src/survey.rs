//! One CSV row per instance: chromatic bounds, N(G,k), i(G) and the clue.

use std::io::Write;

use colorclue_core::cdsatur::{chromatic_bounds, count_colorings};
use colorclue_core::clue::{evaluate_clue, ub_rounded};
use colorclue_core::head::SolverConfig;
use colorclue_core::iscount::count_independent_sets;
use colorclue_core::{Graph, SearchLimits};
use serde::{Deserialize, Serialize};

use crate::sampling::{build_sample, SampleRequest, WallClock};

#[derive(Clone, Debug)]
pub struct SurveyOptions {
    /// Fixed color budget; `None` uses the best upper bound on chi.
    pub k: Option<u32>,
    pub count_limits: SearchLimits,
    pub is_cap: u64,
    /// Sample size; 0 skips sampling and the verdict.
    pub t: usize,
    pub solver: SolverConfig,
    pub run_budget: u64,
    pub workers: usize,
    pub alpha: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub d: Option<f64>,
    pub chi_lb: Option<u32>,
    pub chi_ub: Option<u32>,
    pub chi_exact: Option<bool>,
    pub k: Option<u32>,
    pub n_k: Option<u64>,
    pub n_k_exact: Option<bool>,
    pub is_count: Option<u64>,
    pub is_exact: Option<bool>,
    pub p: Option<usize>,
    pub t: Option<usize>,
    /// Rounded; empty when infinite or not sampled.
    pub ub: Option<u64>,
    pub verdict: Option<String>,
    pub error: Option<String>,
}

pub fn survey_graph(label: &str, g: &Graph, opts: &SurveyOptions) -> SurveyRow {
    let mut row =
        SurveyRow { instance: label.to_string(), n: g.n(), m: g.m(), d: g.density().ok(), ..Default::default() };
    if let Err(e) = fill(&mut row, g, opts) {
        row.error = Some(e.to_string());
    }
    row
}

fn fill(row: &mut SurveyRow, g: &Graph, opts: &SurveyOptions) -> anyhow::Result<()> {
    let clock = WallClock::start();
    let bounds = chromatic_bounds(g, &opts.count_limits, &clock);
    row.chi_lb = Some(bounds.lb);
    row.chi_ub = Some(bounds.ub);
    row.chi_exact = Some(bounds.exact);
    let k = opts.k.unwrap_or(bounds.ub.max(1));
    row.k = Some(k);

    let clock = WallClock::start();
    let nk = count_colorings(g, k, &opts.count_limits, &clock)?;
    row.n_k = Some(nk.value);
    row.n_k_exact = Some(nk.exact);

    let is = count_independent_sets(g, opts.is_cap, &WallClock::start())?;
    row.is_count = Some(is.value());
    row.is_exact = Some(is.exact());

    if opts.t > 0 {
        let req = SampleRequest {
            graph: g,
            t_target: opts.t,
            config: SolverConfig { k, ..opts.solver },
            run_budget: opts.run_budget,
            workers: opts.workers,
            abandon_after: Some(10),
        };
        let sample = build_sample(&req, &mut |_, _, _| {})?;
        let report = evaluate_clue(g, k, &sample, &is, opts.alpha)?;
        row.p = Some(report.p);
        row.t = Some(report.t);
        row.ub = ub_rounded(report.ub);
        row.verdict = Some(report.verdict.as_str().to_string());
    }
    Ok(())
}

pub fn write_csv<W: Write>(rows: &[SurveyRow], out: W) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(HEADER)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Written even when there are no rows.
pub const HEADER: [&str; 17] = [
    "instance",
    "n",
    "m",
    "d",
    "chi_lb",
    "chi_ub",
    "chi_exact",
    "k",
    "n_k",
    "n_k_exact",
    "is_count",
    "is_exact",
    "p",
    "t",
    "ub",
    "verdict",
    "error",
];

#[cfg(test)]
mod tests {
    use super::*;
    use colorclue_core::families::{myciel, queen};

    fn opts(t: usize) -> SurveyOptions {
        let mut solver = SolverConfig::new(1).with_seed(3);
        solver.tabu_iterations = 2000;
        SurveyOptions {
            k: None,
            count_limits: SearchLimits::new(60.0),
            is_cap: 1_000_000,
            t,
            solver,
            run_budget: 200,
            workers: 1,
            alpha: 1.01,
        }
    }

    #[test]
    fn myciel3_row() {
        let row = survey_graph("myciel3", &myciel(3), &opts(0));
        assert_eq!((row.chi_lb, row.chi_ub, row.chi_exact), (Some(4), Some(4), Some(true)));
        assert_eq!((row.n_k, row.is_count), (Some(520), Some(102)));
        assert!(row.verdict.is_none() && row.error.is_none());
    }

    #[test]
    fn queen5_row_with_sample() {
        let row = survey_graph("queen5_5", &queen(5, 5), &opts(20));
        assert_eq!(row.t, Some(20));
        assert_eq!(row.verdict.as_deref(), Some("CLUE"));
    }

    #[test]
    fn errors_stay_in_the_row() {
        let mut o = opts(0);
        o.is_cap = 0;
        let row = survey_graph("K3", &Graph::complete(3), &o);
        assert!(row.error.is_some());
        assert_eq!(row.n_k, Some(1));
    }

    #[test]
    fn csv_has_header_even_when_empty() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim_end(), HEADER.join(","));
        let mut buf = Vec::new();
        write_csv(&[survey_graph("myciel3", &myciel(3), &opts(0))], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.lines().nth(1).unwrap().starts_with("myciel3,11,20,"));
    }
}
