mod cf;
mod count;
mod orbit;
mod prop2;
mod staircase;

use poncelet_core::{ArnoldFamily, CircleFamily, PonceletFamily, Reversed, RigidFamily, RotationOptions};

use crate::args::{Cli, Command, Common, FamilyKind, Geometry};
use crate::error::{CliError, CliResult};

pub use cf::{parse_input, random_dyadics, CfInput};

/// Run a parsed command line; `Ok(false)` means a check failed.
pub fn run(cli: &Cli) -> CliResult<bool> {
    if !(cli.common.tol > 0.0 && cli.common.tol < 1.0) {
        return Err(CliError::Config("--tol must lie in (0, 1)".into()));
    }
    match &cli.command {
        Command::Orbit(a) => orbit::run(&cli.common, a),
        Command::Staircase(a) => staircase::run(&cli.common, a),
        Command::Count(a) => count::run(&cli.common, a),
        Command::Cf(a) => cf::run(&cli.common, a),
        Command::Prop2(a) => prop2::run(&cli.common, a),
    }
}

fn rotation_options(common: &Common) -> RotationOptions {
    RotationOptions::with_tol(common.tol)
}

/// The families selectable on the command line.
#[derive(Debug, Clone, Copy)]
enum AnyFamily {
    Poncelet(PonceletFamily),
    /// The Poncelet family in `s = -t`, increasing.
    ReversedPoncelet(Reversed<PonceletFamily>),
    Arnold(ArnoldFamily),
    Rigid(RigidFamily),
}

impl AnyFamily {
    fn build(kind: FamilyKind, geometry: &Geometry, coupling: f64, increasing: bool) -> CliResult<Self> {
        Ok(match kind {
            FamilyKind::Poncelet => {
                let fam = PonceletFamily::new(geometry.outer_radius, geometry.offset)?;
                if increasing {
                    AnyFamily::ReversedPoncelet(Reversed(fam))
                } else {
                    AnyFamily::Poncelet(fam)
                }
            }
            FamilyKind::Arnold => AnyFamily::Arnold(ArnoldFamily::new(coupling)?),
            FamilyKind::Rigid => AnyFamily::Rigid(RigidFamily::new(0.0, 1.0)?),
        })
    }

    fn inner(&self) -> &dyn CircleFamily {
        match self {
            AnyFamily::Poncelet(f) => f,
            AnyFamily::ReversedPoncelet(f) => f,
            AnyFamily::Arnold(f) => f,
            AnyFamily::Rigid(f) => f,
        }
    }
}

impl CircleFamily for AnyFamily {
    fn interval(&self) -> (f64, f64) {
        self.inner().interval()
    }
    fn lift(&self, t: f64, x: f64) -> f64 {
        self.inner().lift(t, x)
    }
    fn parameter_derivative(&self, t: f64, x: f64) -> f64 {
        self.inner().parameter_derivative(t, x)
    }
}
