//! Adaptive fuzzy tracking law: combined error, the controller's internal
//! third-order model `x''' = -aᵀx + b·u - b·d(u)`, equivalent control and the
//! compensated control voltage.

use crate::error::{Error, Result};
use crate::plant::{PlantParams, CAVITATION_FLOOR_PA};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerParams<T> {
    /// Position coefficient of the error polynomial [1/s²].
    pub c0: T,
    /// Velocity coefficient of the error polynomial [1/s].
    pub c1: T,
    /// Feedback gain on the combined error.
    pub kappa: T,
    /// Adaptation rate of the fuzzy consequents.
    pub phi: T,
    /// When false the fuzzy compensation is disabled (`φ = 0`, `d̂ ≡ 0`).
    pub adaptive: bool,
    /// Plant model used for `a` and `b`; may differ from the simulated plant.
    pub model: PlantParams<T>,
}

impl<T: Real> Default for ControllerParams<T> {
    fn default() -> Self {
        Self::from_lambda(T::lit(8.0), T::one(), T::lit(0.5), PlantParams::default())
    }
}

impl<T: Real> ControllerParams<T> {
    /// Critically damped error polynomial `(p + λ)²`: `c1 = 2λ`, `c0 = λ²`.
    pub fn from_lambda(lambda: T, kappa: T, phi: T, model: PlantParams<T>) -> Self {
        Self {
            c0: lambda * lambda,
            c1: (lambda + lambda),
            kappa,
            phi,
            adaptive: true,
            model,
        }
    }

    /// Copy with adaptation switched off and `φ = 0`.
    pub fn frozen(mut self) -> Self {
        self.adaptive = false;
        self.phi = T::zero();
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("c0", self.c0), ("c1", self.c1), ("kappa", self.kappa)] {
            if !value.is_finite() || value <= T::zero() {
                return Err(Error::invalid(name, format!("must be finite and > 0, got {value}")));
            }
        }
        if !self.phi.is_finite() || (self.adaptive && self.phi <= T::zero()) || self.phi < T::zero() {
            return Err(Error::invalid("phi", format!("must be > 0, got {}", self.phi)));
        }
        if self.hurwitz_roots().iter().any(|&(re, _)| re >= T::zero()) {
            return Err(Error::invalid("c0", "p² + c1·p + c0 is not Hurwitz"));
        }
        self.model.validate()
    }

    /// Roots `(re, im)` of `p² + c1·p + c0`.
    pub fn hurwitz_roots(&self) -> [(T, T); 2] {
        let two = T::lit(2.0);
        let disc = self.c1 * self.c1 - T::lit(4.0) * self.c0;
        if disc >= T::zero() {
            let s = disc.sqrt();
            [((-self.c1 + s) / two, T::zero()), ((-self.c1 - s) / two, T::zero())]
        } else {
            let s = (-disc).sqrt() / two;
            let re = -self.c1 / two;
            [(re, s), (re, -s)]
        }
    }
}

/// Desired position and its first three time derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReferencePoint<T> {
    pub xd: T,
    pub xd_dot: T,
    pub xd_ddot: T,
    pub xd_dddot: T,
}

/// Measured `(x, ẋ, ẍ)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Measurement<T> {
    pub x: T,
    pub v: T,
    pub acc: T,
}

/// Tracking errors `x - x_d` up to second order.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TrackingError<T> {
    pub pos: T,
    pub vel: T,
    pub acc: T,
}

impl<T: Real> TrackingError<T> {
    pub fn new(meas: &Measurement<T>, r: &ReferencePoint<T>) -> Self {
        Self {
            pos: meas.x - r.xd,
            vel: meas.v - r.xd_dot,
            acc: meas.acc - r.xd_ddot,
        }
    }
}

/// `a = (a0, a1, a2)` of the third-order model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelCoefficients<T> {
    pub a0: T,
    pub a1: T,
    pub a2: T,
}

pub fn model_coefficients<T: Real>(m: &PlantParams<T>) -> ModelCoefficients<T> {
    let hydraulic = T::lit(4.0) * m.beta_e / (m.vt * m.mt);
    ModelCoefficients {
        a0: hydraulic * m.ctp * m.k,
        a1: m.k / m.mt + hydraulic * m.ap * m.ap + hydraulic * m.ctp * m.bp,
        a2: m.bp / m.mt + T::lit(4.0) * m.beta_e * m.ctp / m.vt,
    }
}

/// State-dependent input gain `b` of the model, evaluated with the sign of
/// the control voltage `sign_u ∈ {-1, 0, 1}`. Always strictly positive.
pub fn input_gain_b<T: Real>(meas: &Measurement<T>, sign_u: T, m: &PlantParams<T>) -> T {
    let load_pressure = (m.mt * meas.acc + m.bp * meas.v + m.k * meas.x) / m.ap;
    let drop = (m.ps - sign_u * load_pressure).max(T::lit(CAVITATION_FLOOR_PA));
    T::lit(4.0) * m.beta_e * m.ap / (m.vt * m.mt) * m.cd * m.w * m.kv * (drop / m.rho).sqrt()
}

/// `e = c0·x̃ + c1·x̃' + x̃''`.
pub fn combined_error<T: Real>(err: &TrackingError<T>, cp: &ControllerParams<T>) -> T {
    cp.c0 * err.pos + cp.c1 * err.vel + err.acc
}

/// `û = (aᵀx + x_d''' - c1·x̃'' - c0·x̃') / b`.
pub fn equivalent_control<T: Real>(
    meas: &Measurement<T>,
    r: &ReferencePoint<T>,
    a: &ModelCoefficients<T>,
    b: T,
    cp: &ControllerParams<T>,
) -> T {
    let err = TrackingError::new(meas, r);
    let model = a.a0 * meas.x + a.a1 * meas.v + a.a2 * meas.acc;
    (model + r.xd_dddot - cp.c1 * err.acc - cp.c0 * err.vel) / b
}

/// `u = û + d̂ - κ·e`.
pub fn control_law<T: Real>(u_hat: T, d_hat: T, e: T, cp: &ControllerParams<T>) -> T {
    u_hat + d_hat - cp.kappa * e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plant::{dead_zone_d, dead_zone_output};
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn coefficients_at_defaults() {
        let a = model_coefficients(&PlantParams::<f64>::default());
        assert!(rel(a.a0, 28.0) < 1e-12);
        assert!(rel(a.a2, 93.733_333_333_333_33) < 1e-12);
        assert!(rel(a.a1, 16_837.633_333_333_33) < 1e-12);
    }

    #[test]
    fn coefficients_without_losses() {
        let m = PlantParams::<f64> { ctp: 0.0, k: 0.0, bp: 0.0, ..Default::default() };
        let a = model_coefficients(&m);
        assert_eq!(a.a0, 0.0);
        assert_eq!(a.a2, 0.0);
        assert!(rel(a.a1, 4.0 * 7e8 * 9e-8 / (6e-5 * 250.0)) < 1e-12);
    }

    #[test]
    fn input_gain_at_rest() {
        let m = PlantParams::<f64>::default();
        let rest = Measurement::default();
        let b = input_gain_b(&rest, 1.0, &m);
        assert!(rel(b, 762.287_578_897_345_3) < 1e-12);
        assert_eq!(input_gain_b(&rest, 0.0, &m), b);
        assert_eq!(input_gain_b(&rest, -1.0, &m), b);
    }

    #[test]
    fn input_gain_floor() {
        let m = PlantParams::<f64>::default();
        // Mt·ẍ / Ap = Ps  =>  load term equals the supply pressure
        let meas = Measurement { x: 0.0, v: 0.0, acc: m.ps * m.ap / m.mt };
        let b = input_gain_b(&meas, 1.0, &m);
        assert!(rel(b, 9.111_079_228_383_559) < 1e-12);
        assert!(b > 0.0);
    }

    #[test]
    fn combined_error_examples() {
        let cp = ControllerParams::<f64>::default();
        assert_eq!((cp.c0, cp.c1), (64.0, 16.0));
        assert_eq!(combined_error(&TrackingError::default(), &cp), 0.0);
        let e = combined_error(&TrackingError { pos: 1.0, vel: 0.0, acc: 0.0 }, &cp);
        assert_eq!(e, 64.0);
    }

    #[test]
    fn equivalent_control_examples() {
        let cp = ControllerParams::<f64>::default();
        let zero_a = ModelCoefficients { a0: 0.0, a1: 0.0, a2: 0.0 };
        let a = model_coefficients(&cp.model);
        let r = ReferencePoint::default();
        assert_eq!(equivalent_control(&Measurement::default(), &r, &a, 762.3, &cp), 0.0);

        let meas = Measurement { x: 0.0, v: 0.0, acc: 1.0 };
        let u = equivalent_control(&meas, &r, &zero_a, 762.3, &cp);
        assert!(rel(u, -16.0 / 762.3) < 1e-14);
        assert!((u + 0.02099).abs() < 1e-5);
        let half = equivalent_control(&meas, &r, &zero_a, 2.0 * 762.3, &cp);
        assert!(rel(half, u / 2.0) < 1e-15);
    }

    #[test]
    fn control_law_examples() {
        let cp = ControllerParams::<f64>::default();
        assert_eq!(control_law(0.0, 0.0, 0.0, &cp), 0.0);
        assert!((control_law(0.5, 0.9, 0.1, &cp) - 1.3).abs() < 1e-15);
    }

    #[test]
    fn hurwitz_and_validation() {
        let cp = ControllerParams::<f64>::default();
        assert!(cp.validate().is_ok());
        assert!(cp.hurwitz_roots().iter().all(|&(re, _)| re < 0.0));
        let mut bad = cp;
        bad.c1 = -1.0;
        assert!(matches!(bad.validate(), Err(Error::InvalidParameter { name, .. }) if name == "c1"));
        let mut bad = cp;
        bad.phi = 0.0;
        assert!(bad.validate().is_err());
        assert!(cp.frozen().validate().is_ok());
        let oscillatory = ControllerParams { c0: 100.0, c1: 2.0, ..cp };
        assert!(oscillatory.hurwitz_roots().iter().all(|&(re, im)| re < 0.0 && im != 0.0));
    }

    proptest! {
        #[test]
        fn b_strictly_positive(x in -2.0f64..2.0, v in -5.0f64..5.0, acc in -1e5f64..1e5, s in -1i32..=1) {
            let m = PlantParams::<f64>::default();
            let b = input_gain_b(&Measurement { x, v, acc }, s as f64, &m);
            prop_assert!(b > 0.0 && b.is_finite());
        }

        #[test]
        fn combined_error_linear(p in -1.0f64..1.0, v in -1.0f64..1.0, a in -1.0f64..1.0, k in -4.0f64..4.0) {
            let cp = ControllerParams::<f64>::default();
            let e = combined_error(&TrackingError { pos: p, vel: v, acc: a }, &cp);
            let ek = combined_error(&TrackingError { pos: k * p, vel: k * v, acc: k * a }, &cp);
            prop_assert!((ek - k * e).abs() <= 1e-12 * (1.0 + e.abs() * k.abs()));
        }

        #[test]
        fn perfect_estimate_cancels_dead_zone(u_hat in -3.0f64..3.0) {
            // With e = 0 and d̂ = d(u), u solves u = û + d(u); the affine pieces
            // give u = û + δ on the outer branches and û = 0 inside the band.
            let m = PlantParams::<f64>::default();
            let cp = ControllerParams::<f64>::default();
            let candidates = [u_hat + m.delta_r, u_hat + m.delta_l];
            for u in candidates {
                let d = dead_zone_d(u, &m);
                if control_law(u_hat, d, 0.0, &cp) == u {
                    prop_assert!((dead_zone_output(u, &m) - m.kv * u_hat).abs() <= 1e-20);
                }
            }
        }
    }
}
