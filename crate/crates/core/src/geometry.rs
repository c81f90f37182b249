//! Billiard geometry for a pair of nested circles.
//!
//! The outer circle `K` has radius `R` and is centred at the origin. The
//! inner circle `L_t` has radius `t` and is centred at `(-c, 0)`; with this
//! placement the closed form of the billiard map below coincides with the
//! tangent-line construction. A chord of `K` is encoded by the angle `theta`
//! of its starting point and the direction `phi` of the line modulo `pi`.

use core::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;

/// Relative slack accepted when a point of `K` sits on `L_t` up to rounding.
const TANGENCY_SLACK: f64 = 1e-12;
/// Absolute tolerance of the primitive `H` of `Z`.
const POTENTIAL_TOL: f64 = 1e-12;

/// Reduce `x` into `[0, period)`.
pub fn wrap(x: f64, period: f64) -> f64 {
    let r = x - period * libm::floor(x / period);
    if r >= period || r < 0.0 {
        0.0
    } else {
        r
    }
}

/// Distance between two points of the circle `R / period Z`.
pub fn circular_distance(a: f64, b: f64, period: f64) -> f64 {
    let d = wrap(a - b, period);
    d.min(period - d)
}

/// Outer radius `R`, centre offset `c` and inner radius `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PonceletConfig {
    outer_radius: f64,
    offset: f64,
    inner_radius: f64,
}

impl PonceletConfig {
    /// Requires `R > 0`, `0 <= c < R` and `0 <= t <= R - c`.
    pub fn new(outer_radius: f64, offset: f64, inner_radius: f64) -> Result<Self> {
        if !(outer_radius.is_finite() && offset.is_finite() && inner_radius.is_finite()) {
            return Err(Error::InvalidConfig("radii and offset must be finite"));
        }
        if outer_radius <= 0.0 {
            return Err(Error::InvalidConfig("outer radius must be positive"));
        }
        if offset < 0.0 || offset >= outer_radius {
            return Err(Error::InvalidConfig("offset must satisfy 0 <= c < R"));
        }
        let max = outer_radius - offset;
        if inner_radius < 0.0 || inner_radius > max * (1.0 + TANGENCY_SLACK) {
            return Err(Error::InvalidConfig("inner radius must satisfy 0 <= t <= R - c"));
        }
        Ok(Self {
            outer_radius,
            offset,
            inner_radius: inner_radius.min(max),
        })
    }

    pub fn concentric(outer_radius: f64, inner_radius: f64) -> Result<Self> {
        Self::new(outer_radius, 0.0, inner_radius)
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    /// Largest admissible inner radius, `R - c` (internal tangency).
    pub fn max_inner_radius(&self) -> f64 {
        self.outer_radius - self.offset
    }

    pub fn with_inner_radius(&self, inner_radius: f64) -> Result<Self> {
        Self::new(self.outer_radius, self.offset, inner_radius)
    }

    pub fn inner_center(&self) -> (f64, f64) {
        (-self.offset, 0.0)
    }
}

/// Position angle on `K` in `[0, 2pi)` and line direction in `[0, pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleState {
    pub theta: f64,
    pub phi: f64,
}

impl AngleState {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self {
            theta: wrap(theta, TAU),
            phi: wrap(phi, PI),
        }
    }

    pub fn to_torus(self) -> TorusPoint {
        TorusPoint::new(self.theta / TAU, self.phi / PI)
    }
}

/// Torus coordinates `x = theta / 2pi`, `y = phi / pi`, both in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    pub x: f64,
    pub y: f64,
}

impl TorusPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self {
            x: wrap(x, 1.0),
            y: wrap(y, 1.0),
        }
    }

    pub fn to_angles(self) -> AngleState {
        AngleState::new(TAU * self.x, PI * self.y)
    }
}

/// Unreduced plane coordinates of the lifted map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftPoint {
    pub x: f64,
    pub y: f64,
}

impl LiftPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn to_torus(self) -> TorusPoint {
        TorusPoint::new(self.x, self.y)
    }
}

impl From<TorusPoint> for LiftPoint {
    fn from(p: TorusPoint) -> Self {
        Self { x: p.x, y: p.y }
    }
}

/// `B(theta') = 2 atan(c sin theta' / (R + c cos theta'))`, with `B(0) = 0`.
pub fn b_function(theta_prime: f64, cfg: &PonceletConfig) -> f64 {
    b_raw(theta_prime, cfg.outer_radius, cfg.offset)
}

#[inline]
fn b_raw(theta_prime: f64, r: f64, c: f64) -> f64 {
    let (s, co) = libm::sincos(theta_prime);
    2.0 * libm::atan(c * s / (r + c * co))
}

/// `Z(s) = -B(2 pi s) / pi`; 1-periodic with zero mean.
pub fn z_function(s: f64, cfg: &PonceletConfig) -> f64 {
    -b_raw(TAU * s, cfg.outer_radius, cfg.offset) / PI
}

/// One step of the closed-form billiard map, with the unreduced angles kept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapStep {
    pub state: AngleState,
    pub theta_unreduced: f64,
    pub phi_unreduced: f64,
}

/// `G(theta, phi) = (2 phi - theta + pi, 3 phi - 2 theta - B(theta') + pi)`.
pub fn poncelet_map_analytic(s: AngleState, cfg: &PonceletConfig) -> MapStep {
    let theta = 2.0 * s.phi - s.theta + PI;
    let phi = 3.0 * s.phi - 2.0 * s.theta - b_function(theta, cfg) + PI;
    MapStep {
        state: AngleState::new(theta, phi),
        theta_unreduced: theta,
        phi_unreduced: phi,
    }
}

/// The billiard map in torus coordinates, applied to a lift (no reduction).
///
/// `f(x, y) = (y - x + 1/2, 3y - 4x + Z(y - x + 1/2) + 1)`. The linear part
/// is integral, so `f(x + 1, y) = f(x, y) + (-1, -4)` and
/// `f(x, y + 1) = f(x, y) + (1, 3)` hold exactly.
pub fn twist_map(p: LiftPoint, cfg: &PonceletConfig) -> LiftPoint {
    let x = p.y - p.x + 0.5;
    let y = 3.0 * p.y - 4.0 * p.x + z_function(x, cfg) + 1.0;
    LiftPoint { x, y }
}

pub fn twist_map_torus(p: TorusPoint, cfg: &PonceletConfig) -> TorusPoint {
    twist_map(p.into(), cfg).to_torus()
}

/// The tangent from a point of `K` with `L_t` on its left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Tangent {
    /// Oriented direction of the chord, radians.
    pub direction: f64,
    /// Counter-clockwise angle from the start point to the end point, in `[0, 2pi)`.
    pub sweep: f64,
}

/// Err carries the offending distance from the start point to the centre of `L_t`.
pub(crate) fn tangent(theta: f64, r: f64, c: f64, t: f64, clamp: bool) -> core::result::Result<Tangent, f64> {
    let (s, co) = libm::sincos(theta);
    let vx = -c - r * co;
    let vy = -r * s;
    // d^2 - t^2 without cancellation near internal tangency.
    let half_cos = libm::cos(0.5 * theta);
    let mut leg2 = (r - c - t) * (r - c + t) + 4.0 * r * c * half_cos * half_cos;
    if leg2 < 0.0 {
        let d = libm::hypot(vx, vy);
        if clamp || t - d <= TANGENCY_SLACK * r {
            leg2 = 0.0;
        } else {
            return Err(d);
        }
    }
    // Turn the direction towards the centre clockwise by asin(t/d), with the
    // turning vector (leg, t) of length d.
    let leg = libm::sqrt(leg2);
    let direction = libm::atan2(leg * vy - t * vx, leg * vx + t * vy);
    // The chord leaves at angle beta from the inward normal -A/R and ends at
    // 2 direction - theta + pi, so it sweeps pi + 2 beta with |beta| <= pi/2.
    let mut beta = direction - theta - PI;
    beta -= TAU * libm::round(beta / TAU);
    let beta = beta.clamp(-FRAC_PI_2, FRAC_PI_2);
    Ok(Tangent {
        direction,
        sweep: PI + 2.0 * beta,
    })
}

fn checked_tangent(theta: f64, cfg: &PonceletConfig) -> Result<Tangent> {
    tangent(theta, cfg.outer_radius, cfg.offset, cfg.inner_radius, false).map_err(|distance| {
        Error::DegenerateTangency {
            theta,
            distance,
            radius: cfg.inner_radius,
        }
    })
}

/// Counter-clockwise angle swept by the chord from `theta` tangent to `L_t`.
pub fn chord_sweep(theta: f64, cfg: &PonceletConfig) -> Result<f64> {
    Ok(checked_tangent(theta, cfg)?.sweep)
}

/// Tangent-line construction: from `A = R(cos theta, sin theta)` draw the
/// tangent to `L_t` leaving `L_t` on its left and intersect it with `K`
/// again. Returns the angle of that second point and the line direction.
pub fn poncelet_map_geometric(theta: f64, cfg: &PonceletConfig) -> Result<AngleState> {
    let tg = checked_tangent(theta, cfg)?;
    let r = cfg.outer_radius;
    let (s, co) = libm::sincos(theta);
    let (ax, ay) = (r * co, r * s);
    let (us, uc) = libm::sincos(tg.direction);
    let chord = -2.0 * (ax * uc + ay * us);
    let theta_next = if chord > 0.0 {
        libm::atan2(ay + chord * us, ax + chord * uc)
    } else {
        theta
    };
    Ok(AngleState::new(theta_next, tg.direction))
}

/// The invariant circle `Gamma_t`: tangent lines to `L_t` parametrised by
/// their starting point on `K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantCircle {
    cfg: PonceletConfig,
}

impl InvariantCircle {
    pub fn new(cfg: PonceletConfig) -> Self {
        Self { cfg }
    }

    pub fn config(&self) -> &PonceletConfig {
        &self.cfg
    }

    /// Direction in `[0, pi)` of the tangent chord starting at `theta`.
    pub fn direction(&self, theta: f64) -> Result<f64> {
        Ok(wrap(checked_tangent(theta, &self.cfg)?.direction, PI))
    }

    /// `y(x)` in `[0, 1)`.
    pub fn y(&self, x: f64) -> Result<f64> {
        Ok(wrap(self.lifted(x)?, 1.0))
    }

    /// Continuous lift `Y` of the circle; `Y(x + 1) = Y(x) + 2`.
    pub fn lifted(&self, x: f64) -> Result<f64> {
        let sweep = checked_tangent(TAU * x, &self.cfg)?.sweep;
        Ok(2.0 * x + sweep / TAU - 0.5)
    }

    pub fn lift_point(&self, x: f64) -> Result<LiftPoint> {
        Ok(LiftPoint::new(x, self.lifted(x)?))
    }

    /// Degree-one lift `g(x) = F1(x, Y(x))` of the restricted map.
    pub fn circle_lift(&self, x: f64) -> Result<f64> {
        Ok(twist_map(self.lift_point(x)?, &self.cfg).x)
    }
}

/// `H(s) = int_0^s Z`, so `H' = Z` and `H(0) = 0`.
pub fn potential_primitive(s: f64, cfg: &PonceletConfig) -> f64 {
    let z = |u: f64| z_function(u, cfg);
    adaptive_simpson(&z, 0.0, s, POTENTIAL_TOL)
}

/// Generating potential `h(x, x')` of the twist map.
///
/// With `y = x' + x - 1/2` one has `-dh/dx = y` and `dh/dx' = y'`, where
/// `(x', y') = f(x, y)`.
pub fn generating_potential(x: f64, x_prime: f64, cfg: &PonceletConfig) -> f64 {
    -x * x_prime - (x * x - x) / 2.0 + (3.0 * x_prime * x_prime - x_prime) / 2.0 + potential_primitive(x_prime, cfg)
}

/// Centered finite-difference Jacobian determinant and `df1/dy` at `p`.
pub fn area_twist_check(p: impl Into<LiftPoint>, cfg: &PonceletConfig, h: f64) -> (f64, f64) {
    let p = p.into();
    let at = |dx: f64, dy: f64| twist_map(LiftPoint::new(p.x + dx, p.y + dy), cfg);
    let (xp, xm) = (at(h, 0.0), at(-h, 0.0));
    let (yp, ym) = (at(0.0, h), at(0.0, -h));
    let d1dx = (xp.x - xm.x) / (2.0 * h);
    let d2dx = (xp.y - xm.y) / (2.0 * h);
    let d1dy = (yp.x - ym.x) / (2.0 * h);
    let d2dy = (yp.y - ym.y) / (2.0 * h);
    (d1dx * d2dy - d1dy * d2dx, d1dy)
}
