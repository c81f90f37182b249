use core::f64::consts::{PI, TAU};

use serde::Serialize;

use poncelet_core::geometry::{circular_distance, poncelet_map_analytic};
use poncelet_core::{AngleState, InvariantCircle, PonceletConfig};

use crate::args::{Common, Format, OrbitArgs};
use crate::error::CliResult;
use crate::output::{emit, real, Output, RunConfig, Table};

/// Largest accepted distance of an orbit point from the invariant circle.
const INVARIANCE_TOL: f64 = 1e-9;

#[derive(Debug, Serialize)]
struct Row {
    k: usize,
    theta: f64,
    phi: f64,
    x: f64,
    y: f64,
    invariance_residual: f64,
}

#[derive(Debug, Serialize)]
struct Verdict<'a> {
    config: RunConfig<'a, OrbitArgs>,
    max_invariance_residual: f64,
    return_distance: f64,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct Report<'a> {
    #[serde(flatten)]
    verdict: Verdict<'a>,
    rows: Vec<Row>,
}

/// Iterate the closed-form map from the tangent chord at `theta0`; every
/// state is compared with the tangent construction at the same point.
pub fn run(common: &Common, args: &OrbitArgs) -> CliResult<bool> {
    let cfg = PonceletConfig::new(args.geometry.outer_radius, args.geometry.offset, args.inner_radius)?;
    let circle = InvariantCircle::new(cfg);
    let mut state = AngleState::new(args.theta0, circle.direction(args.theta0)?);
    let mut rows = Vec::with_capacity(args.steps + 1);
    for k in 0..=args.steps {
        let on_circle = circle.direction(state.theta)?;
        let torus = state.to_torus();
        rows.push(Row {
            k,
            theta: state.theta,
            phi: state.phi,
            x: torus.x,
            y: torus.y,
            invariance_residual: circular_distance(state.phi, on_circle, PI),
        });
        state = poncelet_map_analytic(state, &cfg).state;
    }

    let max_invariance_residual = rows.iter().map(|r| r.invariance_residual).fold(0.0, f64::max);
    let last = rows.last().expect("at least the start row");
    let return_distance = circular_distance(last.theta, rows[0].theta, TAU);
    let mut table = Table::new(&["k", "theta", "phi", "x", "y", "invariance_residual"]);
    for r in &rows {
        table.push(vec![
            r.k.to_string(),
            real(r.theta),
            real(r.phi),
            real(r.x),
            real(r.y),
            real(r.invariance_residual),
        ]);
    }
    let pass = max_invariance_residual < INVARIANCE_TOL;
    let verdict = || Verdict {
        config: RunConfig {
            command: "orbit",
            common,
            params: args,
        },
        max_invariance_residual,
        return_distance,
        pass,
    };
    let output = Output {
        report: Report {
            verdict: verdict(),
            rows,
        },
        table,
        verdict: verdict(),
        passed: pass,
    };
    emit(common, Format::Csv, &output)
}
