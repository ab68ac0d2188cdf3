//! Ground-truth servo-actuator model: a four-way valve with spool overlap
//! (dead-zone) feeding a symmetric cylinder that drives a mass-spring-damper
//! load. State is `(x, v, PL)`.

use crate::error::{Error, Result};
use crate::scalar::{sgn, Real};

/// Lower bound on the orifice pressure drop `Ps - sgn(x_sp)·PL` [Pa].
pub const CAVITATION_FLOOR_PA: f64 = 1.0e3;

/// Physical constants of the valve, cylinder, fluid and load (SI units,
/// dead-zone edges and gain in volts).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantParams<T> {
    /// Supply pressure [Pa].
    pub ps: T,
    /// Fluid density [kg/m³].
    pub rho: T,
    /// Discharge coefficient.
    pub cd: T,
    /// Orifice area gradient [m].
    pub w: T,
    /// Ram area [m²].
    pub ap: T,
    /// Total leakage coefficient [m³/(s·Pa)].
    pub ctp: T,
    /// Effective bulk modulus [Pa].
    pub beta_e: T,
    /// Total volume under compression [m³].
    pub vt: T,
    /// Total moving mass [kg].
    pub mt: T,
    /// Viscous damping [N·s/m].
    pub bp: T,
    /// Load spring constant [N/m].
    pub k: T,
    /// Left dead-zone edge [V], negative.
    pub delta_l: T,
    /// Right dead-zone edge [V], positive.
    pub delta_r: T,
    /// Valve gain [m/V].
    pub kv: T,
}

impl<T: Real> Default for PlantParams<T> {
    fn default() -> Self {
        Self {
            ps: T::lit(7.0e6),
            rho: T::lit(850.0),
            cd: T::lit(0.6),
            w: T::lit(2.5e-2),
            ap: T::lit(3.0e-4),
            ctp: T::lit(2.0e-12),
            beta_e: T::lit(7.0e8),
            vt: T::lit(6.0e-5),
            mt: T::lit(250.0),
            bp: T::lit(100.0),
            k: T::lit(75.0),
            delta_l: T::lit(-1.1),
            delta_r: T::lit(0.9),
            kv: T::lit(1.0e-5),
        }
    }
}

impl<T: Real> PlantParams<T> {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("ps", self.ps),
            ("rho", self.rho),
            ("cd", self.cd),
            ("w", self.w),
            ("ap", self.ap),
            ("beta_e", self.beta_e),
            ("vt", self.vt),
            ("mt", self.mt),
            ("kv", self.kv),
        ];
        for (name, value) in positive {
            if !value.is_finite() || value <= T::zero() {
                return Err(Error::invalid(name, format!("must be finite and > 0, got {value}")));
            }
        }
        for (name, value) in [("ctp", self.ctp), ("bp", self.bp), ("k", self.k)] {
            if !value.is_finite() || value < T::zero() {
                return Err(Error::invalid(name, format!("must be finite and >= 0, got {value}")));
            }
        }
        if !self.delta_l.is_finite() || self.delta_l >= T::zero() {
            return Err(Error::invalid("delta_l", format!("must be < 0, got {}", self.delta_l)));
        }
        if !self.delta_r.is_finite() || self.delta_r <= T::zero() {
            return Err(Error::invalid("delta_r", format!("must be > 0, got {}", self.delta_r)));
        }
        Ok(())
    }

    /// Copy with a different supply pressure.
    pub fn with_supply_pressure(mut self, ps: T) -> Self {
        self.ps = ps;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlantState<T> {
    /// Piston position [m].
    pub x: T,
    /// Piston velocity [m/s].
    pub v: T,
    /// Load pressure `P1 - P2` [Pa].
    pub pl: T,
}

impl<T: Real> PlantState<T> {
    pub fn new(x: T, v: T, pl: T) -> Self {
        Self { x, v, pl }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.v.is_finite() && self.pl.is_finite()
    }

    /// `self + other * h`, component-wise.
    pub fn axpy(&self, other: &Self, h: T) -> Self {
        Self {
            x: self.x + other.x * h,
            v: self.v + other.v * h,
            pl: self.pl + other.pl * h,
        }
    }
}

/// Effective spool displacement [m] produced by control voltage `u`.
pub fn dead_zone_output<T: Real>(u: T, p: &PlantParams<T>) -> T {
    if u <= p.delta_l {
        p.kv * (u - p.delta_l)
    } else if u >= p.delta_r {
        p.kv * (u - p.delta_r)
    } else {
        T::zero()
    }
}

/// Dead-zone disturbance `d(u)` such that the spool displacement is
/// `kv·(u - d(u))`.
pub fn dead_zone_d<T: Real>(u: T, p: &PlantParams<T>) -> T {
    if u <= p.delta_l {
        p.delta_l
    } else if u >= p.delta_r {
        p.delta_r
    } else {
        u
    }
}

/// Load flow through a matched symmetric orifice pair [m³/s].
pub fn load_flow<T: Real>(x_sp: T, pl: T, p: &PlantParams<T>) -> Result<T> {
    if !x_sp.is_finite() || !pl.is_finite() {
        return Err(Error::NonFinite("load_flow input"));
    }
    let drop = (p.ps - sgn(x_sp) * pl).max(T::lit(CAVITATION_FLOOR_PA));
    Ok(p.cd * p.w * x_sp * (drop / p.rho).sqrt())
}

/// Piston acceleration from the force balance.
pub fn acceleration<T: Real>(s: &PlantState<T>, p: &PlantParams<T>) -> T {
    (p.ap * s.pl - p.bp * s.v - p.k * s.x) / p.mt
}

/// Time derivative of the plant state under control voltage `u`.
pub fn plant_derivatives<T: Real>(s: &PlantState<T>, u: T, p: &PlantParams<T>) -> Result<PlantState<T>> {
    if !s.is_finite() || !u.is_finite() {
        return Err(Error::NonFinite("plant state"));
    }
    let ql = load_flow(dead_zone_output(u, p), s.pl, p)?;
    let stiffness = T::lit(4.0) * p.beta_e / p.vt;
    Ok(PlantState {
        x: s.v,
        v: acceleration(s, p),
        pl: stiffness * (ql - p.ap * s.v - p.ctp * s.pl),
    })
}
