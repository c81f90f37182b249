use rayon::prelude::*;
use serde::Serialize;

use poncelet_core::rotation::rotation_number_with;
use poncelet_core::scan::Direction;
use poncelet_core::twist::uniform_grid;
use poncelet_core::{member, CircleFamily, Staircase};

use super::{rotation_options, AnyFamily};
use crate::args::{Common, Format, StaircaseArgs};
use crate::error::{CliError, CliResult};
use crate::output::{emit, real, Output, RunConfig, Table};

#[derive(Debug, Serialize)]
struct Sample {
    t: f64,
    r: f64,
    error_radius: f64,
    lock_p: Option<i64>,
    lock_q: Option<u64>,
}

#[derive(Debug, Serialize)]
struct ViolationOut {
    index: usize,
    t: f64,
    drop: f64,
}

#[derive(Debug, Serialize)]
struct Verdict<'a> {
    config: RunConfig<'a, StaircaseArgs>,
    direction: &'static str,
    monotone: bool,
    violations: Vec<ViolationOut>,
    locked_samples: usize,
}

#[derive(Debug, Serialize)]
struct Report<'a> {
    #[serde(flatten)]
    verdict: Verdict<'a>,
    samples: Vec<Sample>,
}

pub fn run(common: &Common, args: &StaircaseArgs) -> CliResult<bool> {
    let family = AnyFamily::build(args.family, &args.geometry, args.coupling, false)?;
    let (a, b) = family.interval();
    let (lo, hi) = (args.t_min.unwrap_or(a), args.t_max.unwrap_or(b));
    if !(a <= lo && lo < hi && hi <= b) {
        return Err(CliError::Config(format!("grid must satisfy {a} <= t_min < t_max <= {b}")));
    }
    if args.points < 2 {
        return Err(CliError::Config("--points must be at least 2".into()));
    }
    let grid = uniform_grid(lo, hi, args.points);
    let opts = rotation_options(common);
    let estimates = grid
        .par_iter()
        .map(|&t| rotation_number_with(&member(&family, t), &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let st = Staircase::from_samples(grid.iter().copied().zip(estimates).collect());

    let samples: Vec<Sample> = st
        .samples
        .iter()
        .map(|(t, e)| Sample {
            t: *t,
            r: e.value,
            error_radius: e.error_radius,
            lock_p: e.lock.map(|l| l.p),
            lock_q: e.lock.map(|l| l.q),
        })
        .collect();
    let mut table = Table::new(&["t", "r", "error_radius", "lock_p", "lock_q"]);
    for s in &samples {
        table.push(vec![
            real(s.t),
            real(s.r),
            real(s.error_radius),
            s.lock_p.map(|p| p.to_string()).unwrap_or_default(),
            s.lock_q.map(|q| q.to_string()).unwrap_or_default(),
        ]);
    }
    let locked_samples = samples.iter().filter(|s| s.lock_q.is_some()).count();
    let verdict = || Verdict {
        config: RunConfig {
            command: "staircase",
            common,
            params: args,
        },
        direction: match st.direction {
            Direction::Increasing => "increasing",
            Direction::Decreasing => "decreasing",
            Direction::Constant => "constant",
        },
        monotone: st.is_monotone(),
        violations: st
            .violations
            .iter()
            .map(|v| ViolationOut {
                index: v.index,
                t: v.t,
                drop: v.drop,
            })
            .collect(),
        locked_samples,
    };
    let output = Output {
        report: Report {
            verdict: verdict(),
            samples,
        },
        table,
        verdict: verdict(),
        passed: st.is_monotone(),
    };
    emit(common, Format::Csv, &output)
}
