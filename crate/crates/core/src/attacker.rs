//! The covert GPS spoofer.
//!
//! At every update the spoofer picks an imposed location within `e_max` of
//! the UAV's true position. The UAV then steers from that believed position
//! toward its real destination, but the displacement is applied to its true
//! position. The optimal imposed location makes the resulting heading as
//! close as possible to the direction of the attacker's destination and,
//! among equally good points, keeps the one farthest from the real
//! destination.

use crate::kinematics::{heading, MotionParams};
use crate::{Error, Result, Scalar, Vec2};

/// Triangle quantities between the UAV (`X`), its real destination (`D`) and
/// the attacker's destination (`A`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpoofGeometry<T> {
    /// |X - D|
    pub d: T,
    /// |X - A|
    pub a: T,
    /// |A - D|
    pub l: T,
    /// Heron product `(d+a+l)(d+a-l)(d-a+l)(a+l-d)`, i.e. 16 * area^2.
    pub s: T,
    /// Distance from `D` to the line through `X` and `A`.
    pub epsilon: T,
}

/// Per-update bound on the drift between true and imposed positions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpoofConstraint<T> {
    pub e_max: T,
}

impl<T: Scalar> SpoofConstraint<T> {
    pub fn new(e_max: T) -> Result<Self> {
        if e_max > T::zero() && e_max.is_finite() {
            Ok(Self { e_max })
        } else {
            Err(Error::InvalidParameter {
                name: "e_max",
                reason: format!("must be positive and finite, got {e_max}"),
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpoofCase {
    /// The line through `D` parallel to `X -> A` meets the drift circle; the
    /// spoofed heading points exactly at the attacker's destination.
    LineCircle,
    /// No point of the circle yields that heading; the imposed location is
    /// the tangency point whose heading comes closest.
    Tangent,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImposedLocation<T> {
    pub location: Vec2<T>,
    pub case: SpoofCase,
    /// Angle (radians) between the spoofed heading and the `X -> A` direction.
    pub objective: T,
}

pub fn spoof_geometry<T: Scalar>(
    uav: Vec2<T>,
    real_dest: Vec2<T>,
    attacker_dest: Vec2<T>,
) -> Result<SpoofGeometry<T>> {
    let d = uav.distance(real_dest);
    let a = uav.distance(attacker_dest);
    let l = attacker_dest.distance(real_dest);
    if a == T::zero() {
        return Err(Error::AttackerDestinationReached);
    }
    let s = ((d + a + l) * (d + a - l) * (d - a + l) * (a + l - d)).max(T::zero());
    let epsilon = s.sqrt() / (T::lit(2.0) * a);
    Ok(SpoofGeometry {
        d,
        a,
        l,
        s,
        epsilon,
    })
}

/// Optimal covert imposed location for a UAV at `uav`.
pub fn imposed_location<T: Scalar>(
    uav: Vec2<T>,
    real_dest: Vec2<T>,
    attacker_dest: Vec2<T>,
    constraint: &SpoofConstraint<T>,
) -> Result<ImposedLocation<T>> {
    let e = constraint.e_max;
    let to_real = real_dest - uav;
    let d = to_real.norm();
    if d <= e {
        return Err(Error::WithinArrivalRadius);
    }
    let geom = spoof_geometry(uav, real_dest, attacker_dest)?;
    let u = (attacker_dest - uav) * geom.a.recip();
    let along = to_real.dot(u);

    let (location, case) = if geom.epsilon <= e && along > T::zero() {
        // Points D + t*u on the circle |P - X| = e; the root with the most
        // negative t is the one farthest from D and heads along +u.
        let offset = to_real.cross(u);
        let disc = (e * e - offset * offset).max(T::zero());
        let t = -along - disc.sqrt();
        (real_dest + u * t, SpoofCase::LineCircle)
    } else {
        (tangent_point(uav, real_dest, u, e, d), SpoofCase::Tangent)
    };

    let objective = (real_dest - location).angle_to(u);
    Ok(ImposedLocation {
        location,
        case,
        objective,
    })
}

/// Tangency point of a line through `real_dest` with the drift circle,
/// on the side whose heading is closest to `u`.
fn tangent_point<T: Scalar>(uav: Vec2<T>, real_dest: Vec2<T>, u: Vec2<T>, e: T, d: T) -> Vec2<T> {
    let w = (real_dest - uav) * d.recip();
    let cos_b = e / d;
    let sin_b = (T::one() - cos_b * cos_b).max(T::zero()).sqrt();
    let radial = w * (e * cos_b);
    let lateral = w.perp() * (e * sin_b);
    let p1 = uav + radial + lateral;
    let p2 = uav + radial - lateral;
    let g1 = (real_dest - p1).angle_to(u);
    let g2 = (real_dest - p2).angle_to(u);
    if g1 < g2 {
        p1
    } else if g2 < g1 {
        p2
    } else {
        tie_break(p1, p2)
    }
}

/// Deterministic pick between two equally good points: lower y, then lower x.
fn tie_break<T: Scalar>(p: Vec2<T>, q: Vec2<T>) -> Vec2<T> {
    if p.y < q.y || (p.y == q.y && p.x <= q.x) {
        p
    } else {
        q
    }
}

/// True position after one update while the UAV believes it is at `imposed`.
///
/// The UAV clamps against its believed remaining distance, so the move is
/// `min(step_length, |real_dest - imposed|)` along the believed heading.
pub fn spoofed_step<T: Scalar>(
    uav_true: Vec2<T>,
    imposed: Vec2<T>,
    real_dest: Vec2<T>,
    params: &MotionParams<T>,
) -> Result<Vec2<T>> {
    let dir = heading(imposed, real_dest).map_err(|_| Error::DegenerateSpoofedHeading)?;
    let believed_remaining = imposed.distance(real_dest);
    Ok(uav_true + dir * params.step_length.min(believed_remaining))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

/// The coordinate axis with the larger gap on a route, and the direction of
/// travel along it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TravelAxis {
    pub axis: Axis,
    pub positive: bool,
}

impl TravelAxis {
    /// Ties between |dx| and |dy| resolve to the x axis.
    pub fn of_route<T: Scalar>(from: Vec2<T>, to: Vec2<T>) -> Self {
        let delta = to - from;
        if delta.x.abs() >= delta.y.abs() {
            Self {
                axis: Axis::X,
                positive: delta.x >= T::zero(),
            }
        } else {
            Self {
                axis: Axis::Y,
                positive: delta.y >= T::zero(),
            }
        }
    }

    #[inline]
    pub fn component<T: Scalar>(&self, v: Vec2<T>) -> T {
        match self.axis {
            Axis::X => v.x,
            Axis::Y => v.y,
        }
    }
}

/// Whether steering toward `attacker_dest` keeps the UAV moving the same way
/// along the dominant axis of its route. A covert spoofer cannot flip that
/// direction, so destinations failing this check are unreachable.
pub fn check_feasible_destination<T: Scalar>(
    uav: Vec2<T>,
    real_dest: Vec2<T>,
    attacker_dest: Vec2<T>,
) -> bool {
    let axis = TravelAxis::of_route(uav, real_dest);
    let to_real = axis.component(real_dest - uav);
    let to_attacker = axis.component(attacker_dest - uav);
    if to_real > T::zero() {
        to_attacker > T::zero()
    } else if to_real < T::zero() {
        to_attacker < T::zero()
    } else {
        false
    }
}

/// Strictly past the attacker's destination along the travel axis.
pub fn passed_beyond<T: Scalar>(uav: Vec2<T>, attacker_dest: Vec2<T>, travel: TravelAxis) -> bool {
    let pos = travel.component(uav);
    let target = travel.component(attacker_dest);
    if travel.positive {
        pos > target
    } else {
        pos < target
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64) -> Vec2<f64> {
        Vec2::new(x, y)
    }

    fn c(e: f64) -> SpoofConstraint<f64> {
        SpoofConstraint::new(e).unwrap()
    }

    // Independent oracle: distance from D to the line X-A via the cross product.
    fn line_distance(x: Vec2<f64>, d: Vec2<f64>, a: Vec2<f64>) -> f64 {
        (d - x).cross(a - x).abs() / x.distance(a)
    }

    #[test]
    fn geometry_examples() {
        let g = spoof_geometry(v(0.0, 0.0), v(100.0, 0.0), v(100.0, 30.0)).unwrap();
        assert_eq!(g.d, 100.0);
        assert!((g.a - 10900f64.sqrt()).abs() < 1e-12);
        assert!((g.l - 30.0).abs() < 1e-12);
        let oracle = line_distance(v(0.0, 0.0), v(100.0, 0.0), v(100.0, 30.0));
        assert!((oracle - 28.734788556634538).abs() < 1e-9);
        assert!((g.epsilon - oracle).abs() < 1e-9);

        let g = spoof_geometry(v(0.0, 0.0), v(100.0, 0.0), v(50.0, 0.0)).unwrap();
        assert_eq!(g.s, 0.0);
        assert_eq!(g.epsilon, 0.0);

        let g = spoof_geometry(v(0.0, 0.0), v(100.0, 0.0), v(100.0, 100.0)).unwrap();
        let oracle = line_distance(v(0.0, 0.0), v(100.0, 0.0), v(100.0, 100.0));
        assert!((g.epsilon - oracle).abs() < 1e-9);
        assert!((g.epsilon - 50.0 * 2f64.sqrt()).abs() < 1e-9);
        assert!(g.epsilon <= g.d.min(g.l) + 1e-9);
    }

    #[test]
    fn geometry_rejects_uav_at_attacker_destination() {
        assert_eq!(
            spoof_geometry(v(1.0, 1.0), v(5.0, 5.0), v(1.0, 1.0)),
            Err(Error::AttackerDestinationReached)
        );
    }

    #[test]
    fn imposed_collinear() {
        let r = imposed_location(v(0.0, 0.0), v(100.0, 0.0), v(100.0, 0.0), &c(50.0)).unwrap();
        assert_eq!(r.case, SpoofCase::LineCircle);
        assert!(r.location.distance(v(-50.0, 0.0)) < 1e-12);
        assert!(r.objective.abs() < 1e-12);
    }

    #[test]
    fn imposed_line_circle() {
        // Along L_p = (100 + 10t, 3t) the circle gives 109t^2 + 2000t + 7500 = 0.
        let disc: f64 = 2000.0 * 2000.0 - 4.0 * 109.0 * 7500.0;
        let t = (-2000.0 - disc.sqrt()) / (2.0 * 109.0);
        let expect = v(100.0 + 10.0 * t, 3.0 * t);
        let r = imposed_location(v(0.0, 0.0), v(100.0, 0.0), v(100.0, 30.0), &c(50.0)).unwrap();
        assert_eq!(r.case, SpoofCase::LineCircle);
        assert!(r.location.distance(expect) < 1e-9, "{:?}", r.location);
        assert!((r.location.x + 30.93).abs() < 1e-2 && (r.location.y + 39.28).abs() < 1e-2);
        let slope = (0.0 - r.location.y) / (100.0 - r.location.x);
        assert!((slope - 0.3).abs() < 1e-12);
        assert!(r.objective < 1e-9);
    }

    #[test]
    fn imposed_tangent_heads_toward_attacker_side() {
        // Tangency: x = e^2/d = 25, |y| = sqrt(e^2 - 25^2). The heading from
        // (25, -43.3) to D is (0.866, 0.5), 15 degrees from the attacker
        // direction; the mirror point would give 75 degrees.
        let r = imposed_location(v(0.0, 0.0), v(100.0, 0.0), v(100.0, 100.0), &c(50.0)).unwrap();
        assert_eq!(r.case, SpoofCase::Tangent);
        let y = (2500.0f64 - 625.0).sqrt();
        assert!(r.location.distance(v(25.0, -y)) < 1e-9, "{:?}", r.location);
        assert!((r.objective - 15f64.to_radians()).abs() < 1e-12);
        let tangent_len = r.location.distance(v(100.0, 0.0));
        assert!((tangent_len * tangent_len - (100.0 * 100.0 - 50.0 * 50.0)).abs() < 1e-8);
    }

    #[test]
    fn imposed_rejects_arrived() {
        assert_eq!(
            imposed_location(v(0.0, 0.0), v(40.0, 0.0), v(40.0, 30.0), &c(50.0)),
            Err(Error::WithinArrivalRadius)
        );
    }

    #[test]
    fn reverse_attacker_direction_uses_tangent() {
        // Attacker destination directly behind the UAV: no imposed point can
        // reverse it, the best is the cone edge. Both edges tie; lower y wins.
        let r = imposed_location(v(0.0, 0.0), v(100.0, 0.0), v(-100.0, 0.0), &c(50.0)).unwrap();
        assert_eq!(r.case, SpoofCase::Tangent);
        assert!(r.location.y < 0.0);
    }

    #[test]
    fn spoofed_step_examples() {
        let p = MotionParams::new(50.0, 0.0).unwrap();
        let s = spoofed_step(v(0.0, 0.0), v(-50.0, 0.0), v(100.0, 0.0), &p).unwrap();
        assert!(s.distance(v(50.0, 0.0)) < 1e-12);
        let s = spoofed_step(v(0.0, 0.0), v(25.0, 43.301), v(100.0, 0.0), &p).unwrap();
        assert!(s.distance(v(43.301, -25.0)) < 1e-3, "{s:?}");
        let s = spoofed_step(v(0.0, 0.0), v(0.0, -50.0), v(0.0, 100.0), &p).unwrap();
        assert!(s.distance(v(0.0, 50.0)) < 1e-12);
        assert_eq!(
            spoofed_step(v(0.0, 0.0), v(1.0, 1.0), v(1.0, 1.0), &p),
            Err(Error::DegenerateSpoofedHeading)
        );
    }

    #[test]
    fn spoofed_step_clamps_on_believed_distance() {
        let p = MotionParams::new(50.0, 0.0).unwrap();
        let s = spoofed_step(v(0.0, 0.0), v(80.0, 0.0), v(100.0, 0.0), &p).unwrap();
        assert!(s.distance(v(20.0, 0.0)) < 1e-12);
    }

    #[test]
    fn feasibility_examples() {
        assert!(check_feasible_destination(
            v(0.0, 0.0),
            v(100.0, 10.0),
            v(80.0, -40.0)
        ));
        assert!(!check_feasible_destination(
            v(0.0, 0.0),
            v(100.0, 10.0),
            v(-80.0, 0.0)
        ));
        assert!(check_feasible_destination(
            v(0.0, 0.0),
            v(10.0, 100.0),
            v(-50.0, 60.0)
        ));
    }

    #[test]
    fn passed_beyond_examples() {
        let east = TravelAxis::of_route(v(0.0, 0.0), v(500.0, 0.0));
        assert!(passed_beyond(v(60.0, 0.0), v(50.0, 20.0), east));
        assert!(!passed_beyond(v(40.0, 0.0), v(50.0, 20.0), east));
        assert!(!passed_beyond(v(50.0, 0.0), v(50.0, 20.0), east));
        let west = TravelAxis::of_route(v(0.0, 0.0), v(-500.0, 10.0));
        assert!(passed_beyond(v(-60.0, 0.0), v(-50.0, 20.0), west));
    }
}
