use rayon::prelude::*;
use serde::Serialize;

use poncelet_core::{count_poncelet_pairs, CountOptions, PonceletConfig};

use super::rotation_options;
use crate::args::{CountArgs, Common, Format};
use crate::error::{CliError, CliResult};
use crate::output::{emit, real, Output, RunConfig, Table};

#[derive(Debug, Serialize)]
struct PairOut {
    t: f64,
    p: u64,
    closure_residual: f64,
}

#[derive(Debug, Serialize)]
struct PeriodOut {
    n: u64,
    expected: u64,
    found: usize,
    pass: bool,
    pairs: Vec<PairOut>,
    error: Option<String>,
}

#[derive(Debug, Serialize)]
struct Verdict<'a> {
    config: RunConfig<'a, CountArgs>,
    failed_periods: Vec<u64>,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct Report<'a> {
    #[serde(flatten)]
    verdict: Verdict<'a>,
    results: Vec<PeriodOut>,
}

pub fn run(common: &Common, args: &CountArgs) -> CliResult<bool> {
    if args.n_min < 3 || args.n_min > args.n_max {
        return Err(CliError::Config("periods must satisfy 3 <= n_min <= n_max".into()));
    }
    if args.starts == 0 || args.tol_t.is_nan() || args.tol_t <= 0.0 {
        return Err(CliError::Config("--starts and --tol-t must be positive".into()));
    }
    let base = PonceletConfig::new(args.geometry.outer_radius, args.geometry.offset, 0.0)?;
    let opts = CountOptions {
        tol_t: args.tol_t,
        starts: args.starts,
        seed: common.seed,
        rotation: rotation_options(common),
    };
    let periods: Vec<u64> = (args.n_min..=args.n_max).collect();
    let results: Vec<PeriodOut> = periods
        .par_iter()
        .map(|&n| match count_poncelet_pairs(&base, n, &opts) {
            Ok(count) => PeriodOut {
                n,
                expected: count.expected,
                found: count.pairs.len(),
                pass: count.is_consistent(),
                pairs: count
                    .pairs
                    .iter()
                    .map(|p| PairOut {
                        t: p.t,
                        p: p.p,
                        closure_residual: p.closure_residual,
                    })
                    .collect(),
                error: None,
            },
            Err(e) => PeriodOut {
                n,
                expected: poncelet_core::pairs::euler_totient(n) / 2,
                found: 0,
                pass: false,
                pairs: Vec::new(),
                error: Some(e.to_string()),
            },
        })
        .collect();

    let mut table = Table::new(&["n", "p", "t", "closure_residual", "found", "expected", "pass"]);
    for r in &results {
        for pair in &r.pairs {
            table.push(vec![
                r.n.to_string(),
                pair.p.to_string(),
                real(pair.t),
                real(pair.closure_residual),
                r.found.to_string(),
                r.expected.to_string(),
                r.pass.to_string(),
            ]);
        }
        if r.pairs.is_empty() {
            table.push(vec![
                r.n.to_string(),
                String::new(),
                String::new(),
                String::new(),
                r.found.to_string(),
                r.expected.to_string(),
                r.pass.to_string(),
            ]);
        }
    }
    let failed_periods: Vec<u64> = results.iter().filter(|r| !r.pass).map(|r| r.n).collect();
    let pass = failed_periods.is_empty();
    let verdict = || Verdict {
        config: RunConfig {
            command: "count",
            common,
            params: args,
        },
        failed_periods: failed_periods.clone(),
        pass,
    };
    let output = Output {
        report: Report {
            verdict: verdict(),
            results,
        },
        table,
        verdict: verdict(),
        passed: pass,
    };
    emit(common, Format::Json, &output)
}
