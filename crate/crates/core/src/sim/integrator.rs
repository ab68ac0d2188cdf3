use crate::error::{Error, Result};
use crate::plant::{plant_derivatives, PlantParams, PlantState};
use crate::scalar::Real;

use super::{supply_pressure, SupplyMode};

/// One classical Runge-Kutta step of the plant with `u` held constant over
/// `dt`. The supply pressure is re-evaluated at every stage. The load
/// pressure of the result is clamped to `[-Ps, Ps]`.
///
/// Returns [`Error::NonFinite`] when any stage or the result is not finite;
/// the loop driver turns that into [`Error::BlowUp`] with the step time.
pub fn rk4_step<T: Real>(
    s: &PlantState<T>,
    u: T,
    dt: T,
    p: &PlantParams<T>,
    supply: SupplyMode,
) -> Result<PlantState<T>> {
    let f = |state: &PlantState<T>| {
        let local = p.with_supply_pressure(supply_pressure(supply, p.ps, state.x));
        plant_derivatives(state, u, &local)
    };
    let two = T::lit(2.0);
    let half = dt / two;

    let k1 = f(s)?;
    let k2 = f(&s.axpy(&k1, half))?;
    let k3 = f(&s.axpy(&k2, half))?;
    let k4 = f(&s.axpy(&k3, dt))?;

    let sixth = dt / T::lit(6.0);
    let mut next = PlantState {
        x: s.x + sixth * (k1.x + two * k2.x + two * k3.x + k4.x),
        v: s.v + sixth * (k1.v + two * k2.v + two * k3.v + k4.v),
        pl: s.pl + sixth * (k1.pl + two * k2.pl + two * k3.pl + k4.pl),
    };
    if !next.is_finite() {
        return Err(Error::NonFinite("integrated plant state"));
    }
    let ps = supply_pressure(supply, p.ps, next.x);
    next.pl = next.pl.max(-ps).min(ps);
    Ok(next)
}
