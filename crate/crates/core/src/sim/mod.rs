//! Multirate closed-loop executor.
//!
//! The plant is integrated with fixed-step RK4 at `dt_plant`; the controller
//! runs every `dt_control` (an integer multiple) and its output is held
//! constant over the intermediate plant steps.

mod integrator;
mod metrics;
mod monitor;

pub use integrator::rk4_step;
pub use metrics::Metrics;
pub use monitor::{stability_monitor, MonitorConfig, ViolationReport};

use crate::controller::{
    combined_error, control_law, equivalent_control, input_gain_b, model_coefficients,
    ControllerParams, Measurement, ReferencePoint, TrackingError,
};
use crate::error::{Error, Result};
use crate::fuzzy::FuzzyEstimator;
use crate::plant::{acceleration, dead_zone_d, PlantParams, PlantState};
use crate::scalar::{sgn, Real};

/// Relative supply-pressure swing of the varying mode.
pub const SUPPLY_VARIATION: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SupplyMode {
    #[default]
    Constant,
    /// `Ps = Ps_nominal · (1 + 0.2·sin(x))`, `x` the piston position in metres.
    Varying,
}

/// Supply pressure seen by the valve at piston position `x`.
pub fn supply_pressure<T: Real>(mode: SupplyMode, nominal: T, x: T) -> T {
    match mode {
        SupplyMode::Constant => nominal,
        SupplyMode::Varying => nominal * (T::one() + T::lit(SUPPLY_VARIATION) * x.sin()),
    }
}

/// Sinusoidal desired trajectory `x_d = amplitude · sin(omega · t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sinusoid<T> {
    pub amplitude: T,
    pub omega: T,
}

impl<T: Real> Default for Sinusoid<T> {
    fn default() -> Self {
        Self { amplitude: T::lit(0.5), omega: T::lit(0.1) }
    }
}

impl<T: Real> Sinusoid<T> {
    pub fn at(&self, t: T) -> ReferencePoint<T> {
        reference_at(t, self.amplitude, self.omega)
    }
}

pub fn reference_at<T: Real>(t: T, amp: T, omega: T) -> ReferencePoint<T> {
    let (s, c) = (omega * t).sin_cos();
    let w2 = omega * omega;
    ReferencePoint {
        xd: amp * s,
        xd_dot: amp * omega * c,
        xd_ddot: -amp * w2 * s,
        xd_dddot: -amp * w2 * omega * c,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario<T> {
    /// Simulated time [s].
    pub duration: T,
    /// Plant integration step [s].
    pub dt_plant: T,
    /// Controller period [s]; an integer multiple of `dt_plant`.
    pub dt_control: T,
    pub reference: Sinusoid<T>,
    pub supply: SupplyMode,
    pub initial: PlantState<T>,
    pub monitor: MonitorConfig<T>,
}

impl<T: Real> Default for Scenario<T> {
    fn default() -> Self {
        Self {
            duration: T::lit(120.0),
            dt_plant: T::lit(1.0 / 800.0),
            dt_control: T::lit(1.0 / 400.0),
            reference: Sinusoid::default(),
            supply: SupplyMode::Constant,
            initial: PlantState::default(),
            monitor: MonitorConfig::default(),
        }
    }
}

impl<T: Real> Scenario<T> {
    /// Number of plant steps per control period.
    pub fn substeps(&self) -> Result<usize> {
        if !self.dt_plant.is_finite() || self.dt_plant <= T::zero() {
            return Err(Error::invalid("dt_plant", "must be finite and > 0"));
        }
        if !self.dt_control.is_finite() || self.dt_control <= T::zero() {
            return Err(Error::invalid("dt_control", "must be finite and > 0"));
        }
        let ratio = self.dt_control / self.dt_plant;
        let n = ratio.round();
        if n < T::one() || (ratio - n).abs() > T::lit(1e-6) * n {
            return Err(Error::invalid(
                "dt_control",
                format!("must be a positive integer multiple of dt_plant (ratio {ratio})"),
            ));
        }
        Ok(n.to_usize().expect("ratio fits in usize"))
    }

    /// Number of control samples (output rows).
    pub fn samples(&self) -> Result<usize> {
        if !self.duration.is_finite() || self.duration < T::zero() {
            return Err(Error::invalid("duration", "must be finite and >= 0"));
        }
        let n = (self.duration / self.dt_control).round();
        n.to_usize()
            .ok_or_else(|| Error::invalid("duration", "too many control samples"))
    }

    pub fn validate(&self) -> Result<()> {
        self.substeps()?;
        self.samples()?;
        if !self.initial.is_finite() {
            return Err(Error::invalid("initial", "initial state must be finite"));
        }
        if !self.reference.amplitude.is_finite() || !self.reference.omega.is_finite() {
            return Err(Error::invalid("amplitude", "reference must be finite"));
        }
        self.monitor.validate()
    }
}

/// One control sample.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Row<T> {
    pub t: T,
    pub x: T,
    pub xd: T,
    /// Position tracking error `x - x_d`.
    pub xerr: T,
    pub v: T,
    pub pl: T,
    pub u: T,
    pub u_hat: T,
    /// True dead-zone disturbance `d(u)`.
    pub d: T,
    /// Fuzzy estimate `d̂(û)`.
    pub d_hat: T,
    pub e: T,
    /// Supply pressure at the sample.
    pub ps: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult<T> {
    pub rows: Vec<Row<T>>,
    pub dt_control: T,
    pub duration: T,
    pub metrics: Metrics<T>,
    /// Consequents at the end of the run.
    pub final_estimator: FuzzyEstimator<T>,
}

/// Runs the closed loop. Identical inputs give bit-identical results.
pub fn run<T: Real>(
    scenario: &Scenario<T>,
    plant: &PlantParams<T>,
    cp: &ControllerParams<T>,
    est: &FuzzyEstimator<T>,
) -> Result<SimResult<T>> {
    scenario.validate()?;
    plant.validate()?;
    cp.validate()?;

    let substeps = scenario.substeps()?;
    let samples = scenario.samples()?;
    let dt_control = scenario.dt_control;
    let dt_plant = dt_control / T::from_usize(substeps).expect("substeps fit scalar");

    let mut est = if cp.adaptive {
        est.clone()
    } else {
        FuzzyEstimator::zeroed(est.centers().to_vec())?
    };
    let a = model_coefficients(&cp.model);
    let mut state = scenario.initial;
    let mut prev_sign = T::zero();
    let mut rows = Vec::with_capacity(samples);

    for k in 0..samples {
        let t = T::from_usize(k).expect("sample index fits scalar") * dt_control;
        let blow_up = || Error::BlowUp { time: t.to_f64().unwrap_or(f64::NAN) };

        let meas = Measurement { x: state.x, v: state.v, acc: acceleration(&state, plant) };
        let r = scenario.reference.at(t);
        let err = TrackingError::new(&meas, &r);
        let e = combined_error(&err, cp);
        let b = input_gain_b(&meas, prev_sign, &cp.model);
        let u_hat = equivalent_control(&meas, &r, &a, b, cp);
        let psi = est.membership(u_hat).map_err(|_| blow_up())?;
        let d_hat = if cp.adaptive { est.infer(&psi) } else { T::zero() };
        let u = control_law(u_hat, d_hat, e, cp);
        if !u.is_finite() {
            return Err(blow_up());
        }
        if cp.adaptive {
            est.adapt(e, &psi, cp.phi, dt_control);
        }

        rows.push(Row {
            t,
            x: state.x,
            xd: r.xd,
            xerr: err.pos,
            v: state.v,
            pl: state.pl,
            u,
            u_hat,
            d: dead_zone_d(u, plant),
            d_hat,
            e,
            ps: supply_pressure(scenario.supply, plant.ps, state.x),
        });

        for _ in 0..substeps {
            state = rk4_step(&state, u, dt_plant, plant, scenario.supply).map_err(|_| blow_up())?;
        }
        prev_sign = sgn(u);
    }

    let metrics = Metrics::compute(&rows, dt_control, scenario.duration, est.centers(), &scenario.monitor);
    Ok(SimResult {
        rows,
        dt_control,
        duration: scenario.duration,
        metrics,
        final_estimator: est,
    })
}
