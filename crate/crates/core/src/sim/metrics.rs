use crate::scalar::Real;

use super::monitor::{mean, rms, stability_monitor, transient_end, MonitorConfig, ViolationReport};
use super::Row;

/// Summary statistics of a run. Quarters are by time: the first quarter is
/// `t < T/4`, the final quarter `t >= 3T/4`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Metrics<T> {
    pub rms_xerr_first_quarter: T,
    pub rms_xerr_final_quarter: T,
    /// Max |x - x_d| after the transient window.
    pub max_abs_xerr_post_transient: T,
    pub mean_abs_dhat_err_first_quarter: T,
    pub mean_abs_dhat_err_final_quarter: T,
    /// Share of post-transient sample pairs with `e²(t_{k+1}) <= e²(t_k)`.
    pub e2_nonincreasing_fraction: T,
    pub monitor: ViolationReport<T>,
}

impl<T: Real> Metrics<T> {
    pub fn compute(rows: &[Row<T>], dt: T, duration: T, centers: &[T], cfg: &MonitorConfig<T>) -> Self {
        let n = rows.len();
        let quarter = transient_end(n, duration, dt, T::lit(0.25));
        let last_quarter = transient_end(n, duration, dt, T::lit(0.75));
        let first = &rows[..quarter];
        let last = &rows[last_quarter..];
        let start = transient_end(n, duration, dt, cfg.transient_fraction);
        let post = &rows[start..];

        let pairs = post.len().saturating_sub(1);
        let nonincreasing = post.windows(2).filter(|w| w[1].e * w[1].e <= w[0].e * w[0].e).count();
        let e2_nonincreasing_fraction = if pairs == 0 {
            T::one()
        } else {
            T::from_usize(nonincreasing).unwrap() / T::from_usize(pairs).unwrap()
        };

        Self {
            rms_xerr_first_quarter: rms(first.iter().map(|r| r.xerr)),
            rms_xerr_final_quarter: rms(last.iter().map(|r| r.xerr)),
            max_abs_xerr_post_transient: post.iter().map(|r| r.xerr.abs()).fold(T::zero(), T::max),
            mean_abs_dhat_err_first_quarter: mean(first.iter().map(|r| (r.d_hat - r.d).abs())),
            mean_abs_dhat_err_final_quarter: mean(last.iter().map(|r| (r.d_hat - r.d).abs())),
            e2_nonincreasing_fraction,
            monitor: stability_monitor(rows, dt, duration, centers, cfg),
        }
    }
}
