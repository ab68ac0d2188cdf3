use std::fmt::Write as _;
use std::time::Duration;

use crate::sim::SimResult;

/// Human-readable metrics table for a finished run.
pub fn summarize(result: &SimResult<f64>, wall: Duration) -> String {
    let m = &result.metrics;
    let mon = &m.monitor;
    let mut s = String::new();
    let mut row = |name: &str, value: String| writeln!(s, "{name:<36} {value}").unwrap();
    row("samples", result.rows.len().to_string());
    row("rms xerr, first quarter [m]", format!("{:.6e}", m.rms_xerr_first_quarter));
    row("rms xerr, final quarter [m]", format!("{:.6e}", m.rms_xerr_final_quarter));
    row("max |xerr| after transient [m]", format!("{:.6e}", m.max_abs_xerr_post_transient));
    row("mean |dhat - d|, first quarter [V]", format!("{:.6e}", m.mean_abs_dhat_err_first_quarter));
    row("mean |dhat - d|, final quarter [V]", format!("{:.6e}", m.mean_abs_dhat_err_final_quarter));
    row("e^2 non-increasing share", format!("{:.4}", m.e2_nonincreasing_fraction));
    row("final-window mean |e|", format!("{:.6e}", mon.final_mean_abs_e));
    row("violations: window rms(e) growth", mon.window_growth.to_string());
    row("violations: final mean |e|", mon.final_mean_e.to_string());
    row("violations: compensation sign", mon.compensation_sign.to_string());
    row("wall-clock [s]", format!("{:.3}", wall.as_secs_f64()));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{run, ControllerParams, FuzzyEstimator, PlantParams, Scenario, Sinusoid};

    #[test]
    fn equilibrium_summary_is_zero() {
        let scenario = Scenario { duration: 40.0, reference: Sinusoid { amplitude: 0.0, omega: 0.1 }, ..Default::default() };
        let res = run(&scenario, &PlantParams::default(), &ControllerParams::default(), &FuzzyEstimator::default()).unwrap();
        let text = summarize(&res, Duration::from_millis(5));
        assert!(text.contains("rms xerr, final quarter [m]          0.000000e0"), "{text}");
        assert!(text.contains("violations: window rms(e) growth     0"));
        assert_eq!(res.metrics.monitor.total(), 0);
        assert_eq!(res.metrics.max_abs_xerr_post_transient, 0.0);
    }
}
