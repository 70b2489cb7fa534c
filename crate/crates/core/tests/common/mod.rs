#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spoofgame::attacker::check_feasible_destination;
use spoofgame::Vec2f;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn v(x: f64, y: f64) -> Vec2f {
    Vec2f::new(x, y)
}

pub fn polar(r: f64, phi: f64) -> Vec2f {
    v(r * phi.cos(), r * phi.sin())
}

/// Unsigned angle between two directions, in [0, pi].
pub fn angle_between(a: Vec2f, b: Vec2f) -> f64 {
    let cross = a.x * b.y - a.y * b.x;
    let dot = a.x * b.x + a.y * b.y;
    cross.abs().atan2(dot)
}

/// One UAV with its real destination, the spoofer's destination and a bound
/// on the imposed offset.
#[derive(Clone, Copy, Debug)]
pub struct SpoofSetup {
    pub uav: Vec2f,
    pub real: Vec2f,
    pub attacker: Vec2f,
    pub e_max: f64,
}

/// A spoofer destination roughly ahead of the UAV, passing the feasibility
/// check, with the UAV farther than `e_max` from its real destination.
pub fn feasible_setup(rng: &mut ChaCha8Rng) -> SpoofSetup {
    loop {
        let uav = v(
            rng.random_range(-500.0..500.0),
            rng.random_range(-500.0..500.0),
        );
        let heading = rng.random_range(0.0..2.0 * PI);
        let dist = rng.random_range(150.0..1500.0);
        let real = uav + polar(dist, heading);
        let off = rng.random_range(-1.2..1.2);
        let attacker = uav + polar(dist * rng.random_range(0.15..0.95), heading + off);
        let e_max = rng.random_range(5.0..95.0);
        let w = real - uav;
        let toward = attacker - uav;
        if w.dot(toward) <= 0.0 || dist <= e_max {
            continue;
        }
        if !check_feasible_destination(uav, real, attacker) {
            continue;
        }
        return SpoofSetup {
            uav,
            real,
            attacker,
            e_max,
        };
    }
}

/// Five points with every pair at least `min_gap` apart and every triangle
/// comfortably non-degenerate.
pub fn spread_points(rng: &mut ChaCha8Rng, n: usize, extent: f64, min_gap: f64) -> Vec<Vec2f> {
    'outer: loop {
        let pts: Vec<Vec2f> = (0..n)
            .map(|_| v(rng.random_range(0.0..extent), rng.random_range(0.0..extent)))
            .collect();
        for i in 0..n {
            for j in i + 1..n {
                if pts[i].distance(pts[j]) < min_gap {
                    continue 'outer;
                }
                for k in j + 1..n {
                    let area = ((pts[j] - pts[i]).cross(pts[k] - pts[i])).abs() / 2.0;
                    if area < 0.02 * extent * extent {
                        continue 'outer;
                    }
                }
            }
        }
        return pts;
    }
}

/// A five-UAV fleet: staggered starts, real destinations a few hundred
/// meters ahead, spoofer destinations between and to the side.
pub fn random_fleet(rng: &mut ChaCha8Rng) -> (Vec<Vec2f>, Vec<Vec2f>, Vec<Vec2f>) {
    let mut starts = Vec::new();
    let mut reals = Vec::new();
    let mut attackers = Vec::new();
    for i in 0..5 {
        let start = v(
            rng.random_range(0.0..60.0),
            120.0 * i as f64 + rng.random_range(-30.0..30.0),
        );
        let real = start
            + v(
                rng.random_range(250.0..600.0),
                rng.random_range(-80.0..80.0),
            );
        let frac = rng.random_range(0.3..0.8);
        let attacker = start + (real - start) * frac + v(0.0, rng.random_range(-120.0..120.0));
        starts.push(start);
        reals.push(real);
        attackers.push(attacker);
    }
    (starts, reals, attackers)
}
