use serde::Serialize;

use poncelet_core::scan::locate_rotation_value;
use poncelet_core::twist::{BracketKind, SecondOrderStatus};
use poncelet_core::{second_order_estimate, CircleFamily, Error, RotationEstimate};

use super::{rotation_options, AnyFamily};
use crate::args::{Common, FamilyKind, Format, Prop2Args};
use crate::error::{CliError, CliResult};
use crate::output::{emit, real, Output, RunConfig, Table};

#[derive(Debug, Serialize)]
struct Estimate {
    value: f64,
    error_radius: f64,
    lock: Option<String>,
}

impl From<&RotationEstimate> for Estimate {
    fn from(e: &RotationEstimate) -> Self {
        Self {
            value: e.value,
            error_radius: e.error_radius,
            lock: e.lock.map(|l| format!("{}/{}", l.p, l.q)),
        }
    }
}

#[derive(Debug, Serialize)]
struct RowOut {
    kind: &'static str,
    delta: f64,
    t1: f64,
    t2: f64,
    r1: Estimate,
    r2: Estimate,
    ratio: f64,
    best_ratio: f64,
}

#[derive(Debug, Serialize)]
struct Verdict<'a> {
    config: RunConfig<'a, Prop2Args>,
    /// Name of the increasing parameter the brackets are expressed in.
    parameter: &'static str,
    tau: f64,
    located_target: Option<f64>,
    r_tau: Estimate,
    m: f64,
    bound: f64,
    best_ratio: Option<f64>,
    status: &'static str,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct Report<'a> {
    #[serde(flatten)]
    verdict: Verdict<'a>,
    rows: Vec<RowOut>,
}

fn parse_target(s: &str) -> CliResult<f64> {
    if s == "golden" {
        return Ok((5f64.sqrt() - 1.0) / 2.0);
    }
    s.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::Config(format!("cannot read target {s:?}")))
}

pub fn run(common: &Common, args: &Prop2Args) -> CliResult<bool> {
    let family = AnyFamily::build(args.family, &args.geometry, args.coupling, true)?;
    let reversed = args.family == FamilyKind::Poncelet;
    let opts = rotation_options(common);
    let interval = family.interval();
    let (tau, located_target) = match args.tau {
        Some(t) => (if reversed { -t } else { t }, None),
        None => {
            let target = parse_target(&args.target)?;
            let tau = locate_rotation_value(&family, target, interval, 1e-12, &opts).map_err(|e| match e {
                Error::NoSolution { .. } => CliError::Config(format!("target {target} is outside the rotation image")),
                e => e.into(),
            })?;
            (tau, Some(target))
        }
    };
    if args.deltas == 0 {
        return Err(CliError::Config("--deltas must be positive".into()));
    }
    let deltas: Vec<f64> = (1..=args.deltas as i32).map(|k| 0.1 * 2f64.powi(-k)).collect();
    let rep = second_order_estimate(&family, tau, &deltas, &opts)?;

    let rows: Vec<RowOut> = rep
        .rows
        .iter()
        .map(|r| RowOut {
            kind: match r.kind {
                BracketKind::Symmetric => "symmetric",
                BracketKind::Convergent => "convergent",
            },
            delta: r.delta,
            t1: r.t1,
            t2: r.t2,
            r1: (&r.r1).into(),
            r2: (&r.r2).into(),
            ratio: r.ratio,
            best_ratio: r.best_ratio,
        })
        .collect();
    let mut table = Table::new(&["kind", "delta", "t1", "t2", "r1", "e1", "r2", "e2", "ratio", "best_ratio"]);
    for r in &rows {
        table.push(vec![
            r.kind.to_string(),
            real(r.delta),
            real(r.t1),
            real(r.t2),
            real(r.r1.value),
            real(r.r1.error_radius),
            real(r.r2.value),
            real(r.r2.error_radius),
            real(r.ratio),
            real(r.best_ratio),
        ]);
    }
    let status = match rep.status {
        SecondOrderStatus::Pass => "pass",
        SecondOrderStatus::Fail => "fail",
        SecondOrderStatus::Inapplicable => "inapplicable",
    };
    let verdict = || Verdict {
        config: RunConfig {
            command: "prop2",
            common,
            params: args,
        },
        parameter: if reversed { "s = -t" } else { "t" },
        tau: rep.tau,
        located_target,
        r_tau: (&rep.r_tau).into(),
        m: rep.m,
        bound: rep.bound,
        best_ratio: rep.best_ratio.is_finite().then_some(rep.best_ratio),
        status,
        pass: rep.pass,
    };
    let passed = rep.status != SecondOrderStatus::Fail;
    let output = Output {
        report: Report {
            verdict: verdict(),
            rows,
        },
        table,
        verdict: verdict(),
        passed,
    };
    emit(common, Format::Json, &output)
}
