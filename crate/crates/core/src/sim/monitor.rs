//! Runtime checks of the observable consequences of `V̇ = -κe²`: the
//! combined error must not grow window over window and must settle, and the
//! learned compensation must point at the correct dead-zone edge.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::Row;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonitorConfig<T> {
    /// Fraction of the run treated as adaptation transient.
    pub transient_fraction: T,
    /// Length of the RMS windows [s].
    pub window: T,
    /// Allowed growth factor of windowed RMS(e) between consecutive windows.
    pub growth_tolerance: T,
    /// Upper bound on mean |e| over the final window.
    pub final_mean_e_threshold: T,
}

impl<T: Real> Default for MonitorConfig<T> {
    fn default() -> Self {
        Self {
            transient_fraction: T::lit(0.25),
            window: T::lit(10.0),
            growth_tolerance: T::lit(1.05),
            final_mean_e_threshold: T::lit(0.05),
        }
    }
}

impl<T: Real> MonitorConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(T::zero()..T::one()).contains(&self.transient_fraction) {
            return Err(Error::invalid("transient_fraction", "must lie in [0, 1)"));
        }
        if !self.window.is_finite() || self.window <= T::zero() {
            return Err(Error::invalid("monitor_window", "must be finite and > 0"));
        }
        if !self.growth_tolerance.is_finite() || self.growth_tolerance < T::one() {
            return Err(Error::invalid("growth_tolerance", "must be finite and >= 1"));
        }
        if self.final_mean_e_threshold.is_nan() || self.final_mean_e_threshold <= T::zero() {
            return Err(Error::invalid("e_threshold", "must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ViolationReport<T> {
    /// Windowed RMS of `e` after the transient, one entry per full window.
    pub window_rms: Vec<T>,
    /// Consecutive window pairs where RMS(e) grew beyond the tolerance.
    pub window_growth: usize,
    /// Mean |e| over the final window.
    pub final_mean_abs_e: T,
    /// 1 when the final mean |e| exceeds the threshold, else 0.
    pub final_mean_e: usize,
    /// Final-window samples where `d̂` has the wrong sign for `û`.
    pub compensation_sign: usize,
}

impl<T: Real> ViolationReport<T> {
    pub fn total(&self) -> usize {
        self.window_growth + self.final_mean_e + self.compensation_sign
    }
}

/// Checks a completed series. `centers` are the fuzzy membership centers;
/// the sign check only looks at samples with `û` beyond the innermost
/// nonzero center on its side.
pub fn stability_monitor<T: Real>(
    rows: &[Row<T>],
    dt_control: T,
    duration: T,
    centers: &[T],
    cfg: &MonitorConfig<T>,
) -> ViolationReport<T> {
    let mut report = ViolationReport::default();
    if rows.is_empty() {
        return report;
    }
    let per_window = (cfg.window / dt_control).round().to_usize().unwrap_or(0).max(1);
    let start = transient_end(rows.len(), duration, dt_control, cfg.transient_fraction);

    report.window_rms = rows[start..]
        .chunks_exact(per_window)
        .map(|w| rms(w.iter().map(|r| r.e)))
        .collect();
    report.window_growth = report
        .window_rms
        .windows(2)
        .filter(|pair| pair[1] > cfg.growth_tolerance * pair[0])
        .count();

    let last = &rows[rows.len().saturating_sub(per_window)..];
    report.final_mean_abs_e = mean(last.iter().map(|r| r.e.abs()));
    report.final_mean_e = usize::from(report.final_mean_abs_e > cfg.final_mean_e_threshold);

    let upper = centers.iter().copied().filter(|&c| c > T::zero()).fold(T::infinity(), T::min);
    let lower = centers.iter().copied().filter(|&c| c < T::zero()).fold(T::neg_infinity(), T::max);
    report.compensation_sign = last
        .iter()
        .filter(|r| (r.u_hat > upper && r.d_hat <= T::zero()) || (r.u_hat < lower && r.d_hat >= T::zero()))
        .count();
    report
}

/// Index of the first sample after the transient.
pub(crate) fn transient_end<T: Real>(len: usize, duration: T, dt: T, fraction: T) -> usize {
    let n = (duration * fraction / dt).ceil().to_usize().unwrap_or(0);
    n.min(len)
}

pub(crate) fn rms<T: Real>(values: impl Iterator<Item = T>) -> T {
    let (sum, n) = values.fold((T::zero(), 0usize), |(s, n), v| (s + v * v, n + 1));
    if n == 0 {
        T::zero()
    } else {
        (sum / T::from_usize(n).unwrap()).sqrt()
    }
}

pub(crate) fn mean<T: Real>(values: impl Iterator<Item = T>) -> T {
    let (sum, n) = values.fold((T::zero(), 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        T::zero()
    } else {
        sum / T::from_usize(n).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::DEFAULT_CENTERS;

    fn series(e: impl Fn(f64) -> f64, duration: f64, dt: f64) -> Vec<Row<f64>> {
        let n = (duration / dt).round() as usize;
        (0..n)
            .map(|k| {
                let t = k as f64 * dt;
                Row { t, e: e(t), ..Default::default() }
            })
            .collect()
    }

    #[test]
    fn zero_error_is_clean() {
        let rows = series(|_| 0.0, 120.0, 0.0025);
        let r = stability_monitor(&rows, 0.0025, 120.0, &DEFAULT_CENTERS, &MonitorConfig::default());
        assert_eq!(r.total(), 0);
        assert_eq!(r.window_rms.len(), 9);
    }

    #[test]
    fn growing_error_flags_every_pair() {
        let rows = series(|t| 1e-3 * (0.1 * t).exp() * (3.0 * t).sin(), 120.0, 0.0025);
        let r = stability_monitor(&rows, 0.0025, 120.0, &DEFAULT_CENTERS, &MonitorConfig::default());
        assert_eq!(r.window_rms.len(), 9);
        assert_eq!(r.window_growth, 8);
        assert_eq!(r.final_mean_e, 1);
    }

    #[test]
    fn wrong_sign_compensation_counted() {
        let mut rows = series(|_| 0.0, 20.0, 0.0025);
        let n = rows.len();
        rows[n - 1].u_hat = 1.0;
        rows[n - 1].d_hat = -0.5;
        rows[n - 2].u_hat = -1.0;
        rows[n - 2].d_hat = -0.5;
        // inside the innermost centers: not checked
        rows[n - 3].u_hat = 0.01;
        rows[n - 3].d_hat = -0.5;
        let r = stability_monitor(&rows, 0.0025, 20.0, &DEFAULT_CENTERS, &MonitorConfig::default());
        assert_eq!(r.compensation_sign, 1);
    }

    #[test]
    fn empty_series() {
        let r = stability_monitor::<f64>(&[], 0.0025, 0.0, &DEFAULT_CENTERS, &MonitorConfig::default());
        assert_eq!(r.total(), 0);
    }
}
