//! One-parameter families `t -> g_t` of circle lifts.

use core::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::{tangent, PonceletConfig};
use crate::rotation::CircleLift;

/// Step used for parameter derivatives without a closed form.
pub const DERIVATIVE_STEP: f64 = 1e-6;

/// A continuous family of lifts over a closed parameter interval.
pub trait CircleFamily {
    fn interval(&self) -> (f64, f64);

    /// `g_t(x)`.
    fn lift(&self, t: f64, x: f64) -> f64;

    /// `dg_t(x)/dt`; defaults to a Richardson-extrapolated finite difference
    /// that stays inside [`CircleFamily::interval`].
    fn parameter_derivative(&self, t: f64, x: f64) -> f64 {
        let (a, b) = self.interval();
        richardson_derivative(&|s: f64| self.lift(s, x), t, DERIVATIVE_STEP, a, b)
    }
}

impl<F: CircleFamily + ?Sized> CircleFamily for &F {
    fn interval(&self) -> (f64, f64) {
        (**self).interval()
    }
    fn lift(&self, t: f64, x: f64) -> f64 {
        (**self).lift(t, x)
    }
    fn parameter_derivative(&self, t: f64, x: f64) -> f64 {
        (**self).parameter_derivative(t, x)
    }
}

/// Derivative of `f` at `t` from samples in `[lo, hi]`.
///
/// Centered differences at steps `h` and `h/2` combined by Richardson
/// extrapolation; second-order one-sided stencils near the ends.
pub fn richardson_derivative<F: Fn(f64) -> f64>(f: &F, t: f64, h: f64, lo: f64, hi: f64) -> f64 {
    let centered = |h: f64| (f(t + h) - f(t - h)) / (2.0 * h);
    if t - h >= lo && t + h <= hi {
        (4.0 * centered(0.5 * h) - centered(h)) / 3.0
    } else if t + 2.0 * h <= hi {
        (-3.0 * f(t) + 4.0 * f(t + h) - f(t + 2.0 * h)) / (2.0 * h)
    } else {
        (3.0 * f(t) - 4.0 * f(t - h) + f(t - 2.0 * h)) / (2.0 * h)
    }
}

/// The lift `g_t` of a family at a fixed parameter.
#[derive(Debug, Clone, Copy)]
pub struct Member<F> {
    family: F,
    t: f64,
}

impl<F> Member<F> {
    pub fn parameter(&self) -> f64 {
        self.t
    }
}

impl<F: CircleFamily> CircleLift for Member<F> {
    fn apply(&self, x: f64) -> f64 {
        self.family.lift(self.t, x)
    }
}

pub fn member<F: CircleFamily>(family: F, t: f64) -> Member<F> {
    Member { family, t }
}

/// `g_t(x) = x + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidFamily {
    pub a: f64,
    pub b: f64,
}

impl RigidFamily {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        check_interval(a, b)?;
        Ok(Self { a, b })
    }
}

impl CircleFamily for RigidFamily {
    fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }
    fn lift(&self, t: f64, x: f64) -> f64 {
        x + t
    }
    fn parameter_derivative(&self, _t: f64, _x: f64) -> f64 {
        1.0
    }
}

/// Arnold family `g_t(x) = x + t + K/(2 pi) sin(2 pi x)` on `t in [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArnoldFamily {
    coupling: f64,
}

impl ArnoldFamily {
    /// `0 <= K <= 1` keeps every member a homeomorphism (a diffeomorphism for `K < 1`).
    pub fn new(coupling: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&coupling) {
            return Err(Error::InvalidConfig("Arnold coupling must satisfy 0 <= K <= 1"));
        }
        Ok(Self { coupling })
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }
}

impl CircleFamily for ArnoldFamily {
    fn interval(&self) -> (f64, f64) {
        (0.0, 1.0)
    }
    fn lift(&self, t: f64, x: f64) -> f64 {
        x + t + self.coupling / TAU * libm::sin(TAU * x)
    }
    fn parameter_derivative(&self, _t: f64, _x: f64) -> f64 {
        1.0
    }
}

/// Lifts of the billiard map restricted to the invariant circles `Gamma_t`,
/// `t in [0, R - c]`: `g_t(x) = x + sweep_t(2 pi x) / 2 pi`.
///
/// The family is decreasing in `t`; wrap it in [`Reversed`] where an
/// increasing family is required.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PonceletFamily {
    outer_radius: f64,
    offset: f64,
}

impl PonceletFamily {
    pub fn new(outer_radius: f64, offset: f64) -> Result<Self> {
        PonceletConfig::new(outer_radius, offset, 0.0)?;
        Ok(Self { outer_radius, offset })
    }

    pub fn from_config(cfg: &PonceletConfig) -> Self {
        Self {
            outer_radius: cfg.outer_radius(),
            offset: cfg.offset(),
        }
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn config(&self, t: f64) -> Result<PonceletConfig> {
        PonceletConfig::new(self.outer_radius, self.offset, t)
    }
}

impl CircleFamily for PonceletFamily {
    fn interval(&self) -> (f64, f64) {
        (0.0, self.outer_radius - self.offset)
    }

    fn lift(&self, t: f64, x: f64) -> f64 {
        match tangent(TAU * x, self.outer_radius, self.offset, t, true) {
            Ok(tg) => x + tg.sweep / TAU,
            Err(_) => f64::NAN,
        }
    }
}

/// `s -> g_{-s}` on `[-b, -a]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reversed<F>(pub F);

impl<F: CircleFamily> CircleFamily for Reversed<F> {
    fn interval(&self) -> (f64, f64) {
        let (a, b) = self.0.interval();
        (-b, -a)
    }
    fn lift(&self, t: f64, x: f64) -> f64 {
        self.0.lift(-t, x)
    }
    fn parameter_derivative(&self, t: f64, x: f64) -> f64 {
        -self.0.parameter_derivative(-t, x)
    }
}

/// A family given by closures, with an optional closed-form derivative.
pub struct FnFamily<G, D = fn(f64, f64) -> f64> {
    a: f64,
    b: f64,
    lift: G,
    derivative: Option<D>,
}

impl<G: Fn(f64, f64) -> f64> FnFamily<G> {
    pub fn new(a: f64, b: f64, lift: G) -> Result<Self> {
        check_interval(a, b)?;
        Ok(Self {
            a,
            b,
            lift,
            derivative: None,
        })
    }
}

impl<G: Fn(f64, f64) -> f64, D: Fn(f64, f64) -> f64> FnFamily<G, D> {
    pub fn with_derivative(a: f64, b: f64, lift: G, derivative: D) -> Result<Self> {
        check_interval(a, b)?;
        Ok(Self {
            a,
            b,
            lift,
            derivative: Some(derivative),
        })
    }
}

impl<G: Fn(f64, f64) -> f64, D: Fn(f64, f64) -> f64> CircleFamily for FnFamily<G, D> {
    fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }
    fn lift(&self, t: f64, x: f64) -> f64 {
        (self.lift)(t, x)
    }
    fn parameter_derivative(&self, t: f64, x: f64) -> f64 {
        match &self.derivative {
            Some(d) => d(t, x),
            None => richardson_derivative(&|s: f64| (self.lift)(s, x), t, DERIVATIVE_STEP, self.a, self.b),
        }
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() && a < b {
        Ok(())
    } else {
        Err(Error::InvalidConfig("parameter interval must satisfy a < b"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotation::check_lift;

    #[test]
    fn richardson_on_polynomial() {
        let f = |t: f64| t * t * t;
        let d = richardson_derivative(&f, 0.5, 1e-3, 0.0, 1.0);
        assert!((d - 0.75).abs() < 1e-9);
        // one-sided at both ends
        let d0 = richardson_derivative(&f, 0.0, 1e-4, 0.0, 1.0);
        assert!(d0.abs() < 1e-7);
        let d1 = richardson_derivative(&f, 1.0, 1e-4, 0.0, 1.0);
        assert!((d1 - 3.0).abs() < 1e-7);
    }

    #[test]
    fn members_are_valid_lifts() {
        let arnold = ArnoldFamily::new(0.9).unwrap();
        check_lift(&member(arnold, 0.37)).unwrap();
        let pf = PonceletFamily::new(1.0, 0.3).unwrap();
        for &t in &[0.0, 0.2, 0.5, 0.7] {
            check_lift(&member(pf, t)).unwrap();
        }
    }

    #[test]
    fn poncelet_family_concentric_is_rotation() {
        let pf = PonceletFamily::new(1.0, 0.0).unwrap();
        for &t in &[0.0, 0.3, 0.5, 0.9] {
            for k in 0..16 {
                let x = k as f64 / 16.0;
                let expected = x + libm::acos(t) / core::f64::consts::PI;
                assert!((pf.lift(t, x) - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn reversed_flips_derivative_sign() {
        let pf = PonceletFamily::new(1.0, 0.0).unwrap();
        let rev = Reversed(pf);
        assert_eq!(rev.interval(), (-1.0, 0.0));
        let t = 0.4;
        let expected = 1.0 / (core::f64::consts::PI * libm::sqrt(1.0 - t * t));
        assert!((rev.parameter_derivative(-t, 0.2) - expected).abs() < 1e-8);
        assert!((pf.parameter_derivative(t, 0.2) + expected).abs() < 1e-8);
    }

    #[test]
    fn constructors_validate() {
        assert!(ArnoldFamily::new(1.0).is_ok());
        assert!(ArnoldFamily::new(1.01).is_err());
        assert!(ArnoldFamily::new(-0.1).is_err());
        assert!(RigidFamily::new(1.0, 0.0).is_err());
        assert!(PonceletFamily::new(1.0, 1.0).is_err());
        assert!(FnFamily::new(0.0, f64::INFINITY, |t, x| x + t).is_err());
    }

    #[test]
    fn fn_family_uses_closed_form_when_given() {
        let fam = FnFamily::with_derivative(0.0, 1.0, |t, x| x + t * t + t, |t, _| 2.0 * t + 1.0).unwrap();
        assert_eq!(fam.parameter_derivative(0.25, 0.0), 1.5);
        let fd = FnFamily::new(0.0, 1.0, |t: f64, x: f64| x + t * t + t).unwrap();
        assert!((fd.parameter_derivative(0.25, 0.0) - 1.5).abs() < 1e-9);
    }
}
