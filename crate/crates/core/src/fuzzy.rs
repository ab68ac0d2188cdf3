//! Zero-order Takagi-Sugeno-Kang estimator of the dead-zone disturbance.
//!
//! One input (the equivalent control `û`), `N` rules `if û is U_r then
//! d̂_r = D_r`. The antecedents form a full-overlap hat basis: triangles on the
//! interior centers and shoulder trapezoids at the two ends, so the
//! normalized firing strengths always sum to one and at most two of them are
//! nonzero.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Centers used when nothing else is configured [V].
pub const DEFAULT_CENTERS: [f64; 7] = [-0.50, -0.10, -0.05, 0.00, 0.05, 0.10, 0.50];

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyEstimator<T> {
    centers: Vec<T>,
    consequents: Vec<T>,
}

impl<T: Real> Default for FuzzyEstimator<T> {
    fn default() -> Self {
        let centers: Vec<T> = DEFAULT_CENTERS.iter().map(|&c| T::lit(c)).collect();
        Self::zeroed(centers).expect("default centers are valid")
    }
}

impl<T: Real> FuzzyEstimator<T> {
    /// Builds an estimator from membership centers and initial consequents.
    pub fn new(centers: Vec<T>, consequents: Vec<T>) -> Result<Self> {
        validate_centers(&centers)?;
        if consequents.len() != centers.len() {
            return Err(Error::invalid(
                "d_hat0",
                format!("expected {} values, got {}", centers.len(), consequents.len()),
            ));
        }
        if consequents.iter().any(|d| !d.is_finite()) {
            return Err(Error::invalid("d_hat0", "values must be finite"));
        }
        Ok(Self { centers, consequents })
    }

    /// Estimator with all consequents at zero (no compensation known).
    pub fn zeroed(centers: Vec<T>) -> Result<Self> {
        let n = centers.len();
        Self::new(centers, vec![T::zero(); n])
    }

    pub fn centers(&self) -> &[T] {
        &self.centers
    }

    pub fn consequents(&self) -> &[T] {
        &self.consequents
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn membership(&self, u_hat: T) -> Result<Vec<T>> {
        membership(u_hat, &self.centers)
    }

    /// `d̂ = Σ ψ_r·D_r` for an already-normalized membership vector.
    pub fn infer(&self, psi: &[T]) -> T {
        debug_assert_eq!(psi.len(), self.consequents.len());
        psi.iter()
            .zip(&self.consequents)
            .fold(T::zero(), |acc, (&p, &d)| acc + p * d)
    }

    /// Forward-Euler step of `dD/dt = -φ·e·Ψ`. Entries with `ψ_r = 0` are
    /// left untouched.
    pub fn adapt(&mut self, e: T, psi: &[T], phi: T, dt: T) {
        debug_assert_eq!(psi.len(), self.consequents.len());
        let gain = phi * e * dt;
        for (d, &p) in self.consequents.iter_mut().zip(psi) {
            if p != T::zero() {
                *d = *d - gain * p;
            }
        }
    }

    /// Consumes-and-returns form of [`adapt`](Self::adapt).
    pub fn adapted(mut self, e: T, psi: &[T], phi: T, dt: T) -> Self {
        self.adapt(e, psi, phi, dt);
        self
    }
}

pub(crate) fn validate_centers<T: Real>(centers: &[T]) -> Result<()> {
    if centers.len() < 2 {
        return Err(Error::invalid("centers", "need at least two membership centers"));
    }
    if centers.iter().any(|c| !c.is_finite()) {
        return Err(Error::invalid("centers", "values must be finite"));
    }
    if centers.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("centers", "must be strictly increasing"));
    }
    Ok(())
}

/// Normalized firing strengths `Ψ(û)` of the hat basis on `centers`.
///
/// `centers` must be strictly increasing with at least two entries.
pub fn membership<T: Real>(u_hat: T, centers: &[T]) -> Result<Vec<T>> {
    if !u_hat.is_finite() {
        return Err(Error::NonFinite("equivalent control"));
    }
    let n = centers.len();
    let mut psi = vec![T::zero(); n];
    if u_hat <= centers[0] {
        psi[0] = T::one();
    } else if u_hat >= centers[n - 1] {
        psi[n - 1] = T::one();
    } else {
        // first center strictly above û; r - 1 is the one at or below
        let r = centers.partition_point(|&c| c <= u_hat);
        let (lo, hi) = (centers[r - 1], centers[r]);
        let right = (u_hat - lo) / (hi - lo);
        psi[r] = right;
        psi[r - 1] = T::one() - right;
    }
    Ok(psi)
}
