//! UAV motion between waypoints under the max-force controller.
//!
//! Each update starts from rest, so the physical constants (mass, update
//! interval, force limit) collapse into a single `step_length`: the UAV moves
//! `step_length` meters along the commanded heading per update, or lands on
//! the target when it is closer than that.

use crate::{Error, Result, Scalar, Vec2};

/// Per-update motion budget and the radius within which a UAV counts as arrived.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MotionParams<T> {
    pub step_length: T,
    pub arrival_radius: T,
}

impl<T: Scalar> MotionParams<T> {
    pub fn new(step_length: T, arrival_radius: T) -> Result<Self> {
        if !(step_length > T::zero() && step_length.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "step_length",
                reason: format!("must be positive and finite, got {step_length}"),
            });
        }
        if !(arrival_radius >= T::zero() && arrival_radius.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "arrival_radius",
                reason: format!("must be non-negative and finite, got {arrival_radius}"),
            });
        }
        Ok(Self {
            step_length,
            arrival_radius,
        })
    }
}

/// Unit direction of the straight route `from -> to`.
///
/// This is `(cos φ, sin φ)` with φ the four-quadrant route angle, so the
/// coordinate with the larger gap always carries the larger force component.
pub fn heading<T: Scalar>(from: Vec2<T>, to: Vec2<T>) -> Result<Vec2<T>> {
    let delta = to - from;
    let len = delta.norm();
    if len == T::zero() || !len.is_finite() {
        return Err(Error::ZeroLengthHeading);
    }
    Ok(delta * len.recip())
}

/// One controller update from `pos` toward `target`, clamped to land on the target.
pub fn step<T: Scalar>(pos: Vec2<T>, target: Vec2<T>, params: &MotionParams<T>) -> Vec2<T> {
    let remaining = pos.distance(target);
    if remaining <= params.step_length {
        return target;
    }
    match heading(pos, target) {
        Ok(dir) => pos + dir * params.step_length,
        Err(_) => pos,
    }
}

/// The no-attack route: `max_steps + 1` positions including the start.
///
/// Once the UAV is within `arrival_radius` of `dest` its position is held for
/// the remaining steps, so every reference route has the same length.
pub fn unattacked_trajectory<T: Scalar>(
    start: Vec2<T>,
    dest: Vec2<T>,
    params: &MotionParams<T>,
    max_steps: usize,
) -> Vec<Vec2<T>> {
    let mut out = Vec::with_capacity(max_steps + 1);
    let mut pos = start;
    out.push(pos);
    for _ in 0..max_steps {
        if !has_arrived(pos, dest, params) {
            pos = step(pos, dest, params);
        }
        out.push(pos);
    }
    out
}

#[inline]
pub fn has_arrived<T: Scalar>(pos: Vec2<T>, dest: Vec2<T>, params: &MotionParams<T>) -> bool {
    pos == dest || pos.distance(dest) <= params.arrival_radius
}
