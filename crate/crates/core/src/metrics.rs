//! Route deviation and capture outcomes.

use crate::{Scalar, Vec2};

/// Steps whose reference routes are closer than this (m^2) are left out of
/// the deviation average.
pub const DEGENERATE_DENOMINATOR: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct DeviationSeries<T> {
    /// Per-step deviation clamped to `[0, 1]`; `None` for excluded steps.
    pub theta: Vec<Option<T>>,
    /// Mean of the retained values (0 when nothing was retained).
    pub theta_index: T,
    pub excluded_steps: usize,
    /// Smallest and largest unclamped deviation among retained steps.
    pub raw_range: Option<(T, T)>,
}

impl<T: Scalar> DeviationSeries<T> {
    pub fn retained_steps(&self) -> usize {
        self.theta.len() - self.excluded_steps
    }
}

/// θ(t) = 1 - |x - x_f|^2 / |x_r - x_f|^2 per step: 0 on the no-attack route,
/// 1 on the always-attacked route.
///
/// # Panics
/// If the three trajectories differ in length.
pub fn deviation_series<T: Scalar>(
    actual: &[Vec2<T>],
    no_attack_ref: &[Vec2<T>],
    attack_ref: &[Vec2<T>],
) -> DeviationSeries<T> {
    assert!(
        actual.len() == no_attack_ref.len() && actual.len() == attack_ref.len(),
        "trajectories must have equal length"
    );
    let floor = T::lit(DEGENERATE_DENOMINATOR);
    let mut theta = Vec::with_capacity(actual.len());
    let mut raw_range: Option<(T, T)> = None;
    let mut sum = T::zero();
    let mut kept = 0usize;
    for ((x, r), f) in actual.iter().zip(no_attack_ref).zip(attack_ref) {
        let denom = r.distance_squared(*f);
        if denom < floor {
            theta.push(None);
            continue;
        }
        let raw = T::one() - x.distance_squared(*f) / denom;
        raw_range = Some(match raw_range {
            None => (raw, raw),
            Some((lo, hi)) => (lo.min(raw), hi.max(raw)),
        });
        let clamped = raw.max(T::zero()).min(T::one());
        sum += clamped;
        kept += 1;
        theta.push(Some(clamped));
    }
    let theta_index = if kept == 0 {
        T::zero()
    } else {
        sum / T::lit(kept as f64)
    };
    DeviationSeries {
        excluded_steps: theta.len() - kept,
        theta,
        theta_index,
        raw_range,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CaptureReport<T> {
    pub captured: bool,
    pub min_distance_to_attacker_dest: T,
    pub capture_step: Option<usize>,
}

/// A UAV is captured when it was deflected at least once and came within
/// `e_max` of the attacker's destination.
pub fn capture_report<T: Scalar>(
    trajectory: &[Vec2<T>],
    ever_deflected: bool,
    attacker_dest: Vec2<T>,
    e_max: T,
) -> CaptureReport<T> {
    let distances: Vec<T> = trajectory
        .iter()
        .map(|p| p.distance(attacker_dest))
        .collect();
    let min = distances
        .iter()
        .copied()
        .fold(T::infinity(), |a, b| a.min(b));
    let first_close = distances.iter().position(|d| *d <= e_max);
    let captured = ever_deflected && first_close.is_some();
    CaptureReport {
        captured,
        min_distance_to_attacker_dest: min,
        capture_step: if captured { first_close } else { None },
    }
}
