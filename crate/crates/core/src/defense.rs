//! Cooperative localization used to detect and undo GPS spoofing.
//!
//! A checking UAV compares its own GPS fix with positions trilaterated from
//! every 3-subset of its neighbors (their reported positions plus the
//! checker's measured ranges to them). With at most `n` spoofed UAVs in a
//! group of `n + 4`, the honest subsets agree on a single point and the
//! spoofed UAVs are the ones left out of that agreement.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::{Error, Result, Scalar, Vec2};

/// Anchor triples whose triangle area is below this (m^2) are rejected.
pub const MIN_ANCHOR_AREA: f64 = 1e-6;

/// Default agreement tolerance for noise-free range measurements, in meters.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// Reported GPS fixes and inter-UAV ranges for one localization group.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupReading<T> {
    /// Positions as reported by each UAV's (possibly spoofed) receiver.
    pub gps_positions: Vec<Vec2<T>>,
    /// Symmetric range matrix with zero diagonal, in meters.
    pub ranges: Vec<Vec<T>>,
}

impl<T: Scalar> GroupReading<T> {
    /// Ranges synthesized from ground truth; GPS fixes are supplied separately.
    pub fn from_truth(true_positions: &[Vec2<T>], gps_positions: Vec<Vec2<T>>) -> Self {
        let ranges = true_positions
            .iter()
            .map(|p| true_positions.iter().map(|q| p.distance(*q)).collect())
            .collect();
        Self {
            gps_positions,
            ranges,
        }
    }

    /// Perturbs every pairwise range by zero-mean Gaussian noise of standard
    /// deviation `sigma`, keeping the matrix symmetric with a zero diagonal.
    pub fn add_range_noise<R: Rng + ?Sized>(&mut self, sigma: T, rng: &mut R) -> Result<()> {
        let invalid = |reason: String| Error::InvalidParameter {
            name: "sigma",
            reason,
        };
        if sigma.is_nan() || sigma < T::zero() {
            return Err(invalid(format!("must be non-negative, got {sigma}")));
        }
        let normal = Normal::new(0.0, sigma.to_f64_lossy()).map_err(|e| invalid(e.to_string()))?;
        let n = self.ranges.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let noisy = self.ranges[i][j] + T::lit(normal.sample(rng));
                let noisy = noisy.max(T::zero());
                self.ranges[i][j] = noisy;
                self.ranges[j][i] = noisy;
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.gps_positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gps_positions.is_empty()
    }

    fn validate(&self) -> Result<()> {
        let n = self.len();
        if self.ranges.len() != n || self.ranges.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidParameter {
                name: "ranges",
                reason: format!("expected a {n}x{n} matrix"),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalizationVerdict<T> {
    pub corrected_position: Vec2<T>,
    pub self_attacked: bool,
    /// Spoofed neighbors (group indices), ascending. Excludes the checker.
    pub attacked: Vec<usize>,
    /// The checker's GPS fix followed by one estimate per neighbor 3-subset.
    pub estimates: Vec<Vec2<T>>,
}

impl<T> LocalizationVerdict<T> {
    /// The single spoofed neighbor, when exactly one was identified.
    pub fn attacked_index(&self) -> Option<usize> {
        match self.attacked.as_slice() {
            [i] => Some(*i),
            _ => None,
        }
    }
}

/// A trilateration result and its RMS range residual.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fix<T> {
    pub position: Vec2<T>,
    pub residual: T,
}

/// Position from three anchors and measured ranges.
///
/// Linearizes by subtracting the first circle equation from the other two,
/// solves the 2x2 system, then polishes with Gauss-Newton on the range
/// residuals. Inconsistent ranges do not fail; they show up in `residual`.
pub fn trilaterate<T: Scalar>(anchors: [Vec2<T>; 3], ranges: [T; 3]) -> Result<Fix<T>> {
    let [a0, a1, a2] = anchors;
    let area = (a1 - a0).cross(a2 - a0).abs() / T::lit(2.0);
    if area.is_nan() || area < T::lit(MIN_ANCHOR_AREA) {
        return Err(Error::DegenerateAnchors);
    }
    if ranges.iter().any(|r| *r < T::zero() || !r.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "ranges",
            reason: "ranges must be finite and non-negative".into(),
        });
    }

    // Work relative to a0 to keep the squared terms small.
    let two = T::lit(2.0);
    let b1 = a1 - a0;
    let b2 = a2 - a0;
    let rhs1 = b1.norm_squared() - ranges[1] * ranges[1] + ranges[0] * ranges[0];
    let rhs2 = b2.norm_squared() - ranges[2] * ranges[2] + ranges[0] * ranges[0];
    let det = two * two * b1.cross(b2);
    let mut p = Vec2::new(
        (rhs1 * two * b2.y - rhs2 * two * b1.y) / det,
        (two * b1.x * rhs2 - two * b2.x * rhs1) / det,
    );

    let rel = [Vec2::zero(), b1, b2];
    for _ in 0..8 {
        // Normal equations J^T J dp = -J^T r with rows J_k = (p - a_k)/|p - a_k|.
        let (mut jxx, mut jxy, mut jyy, mut gx, mut gy) =
            (T::zero(), T::zero(), T::zero(), T::zero(), T::zero());
        for (a, r) in rel.iter().zip(ranges) {
            let diff = p - *a;
            let dist = diff.norm();
            if dist == T::zero() {
                continue;
            }
            let j = diff * dist.recip();
            let res = dist - r;
            jxx += j.x * j.x;
            jxy += j.x * j.y;
            jyy += j.y * j.y;
            gx += j.x * res;
            gy += j.y * res;
        }
        let det = jxx * jyy - jxy * jxy;
        if det.abs() <= T::epsilon() {
            break;
        }
        let dp = Vec2::new((jyy * gx - jxy * gy) / det, (jxx * gy - jxy * gx) / det);
        let next = p - dp;
        if rms_residual(next, &rel, &ranges) > rms_residual(p, &rel, &ranges) {
            break;
        }
        p = next;
        if dp.norm() <= T::epsilon() * (T::one() + p.norm()) {
            break;
        }
    }

    Ok(Fix {
        position: p + a0,
        residual: rms_residual(p, &rel, &ranges),
    })
}

fn rms_residual<T: Scalar>(p: Vec2<T>, anchors: &[Vec2<T>; 3], ranges: &[T; 3]) -> T {
    let sum = anchors
        .iter()
        .zip(ranges)
        .map(|(a, r)| {
            let e = p.distance(*a) - *r;
            e * e
        })
        .fold(T::zero(), |acc, x| acc + x);
    (sum / T::lit(3.0)).sqrt()
}

/// UAVs needed in a group so every member can localize with `n_attacked` spoofed.
pub fn required_group_size(n_attacked: usize) -> usize {
    n_attacked + 4
}

/// Position computations one checker performs: C(n + 3, 3) subsets plus its own fix.
pub fn localization_work(n_attacked: usize) -> usize {
    binomial(n_attacked + 3, 3) + 1
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// All 3-subsets of `items`, in lexicographic order.
pub fn triples(items: &[usize]) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            for k in j + 1..items.len() {
                out.push([items[i], items[j], items[k]]);
            }
        }
    }
    out
}

struct SubsetFix<T> {
    members: [usize; 3],
    fix: Fix<T>,
}

fn neighbor_fixes<T: Scalar>(
    reading: &GroupReading<T>,
    checker: usize,
) -> Result<(Vec<usize>, Vec<SubsetFix<T>>)> {
    reading.validate()?;
    let n = reading.len();
    if checker >= n {
        return Err(Error::IndexOutOfRange {
            index: checker,
            len: n,
        });
    }
    let neighbors: Vec<usize> = (0..n).filter(|&i| i != checker).collect();
    let fixes = triples(&neighbors)
        .into_iter()
        .map(|members| {
            let anchors = members.map(|m| reading.gps_positions[m]);
            let ranges = members.map(|m| reading.ranges[checker][m]);
            trilaterate(anchors, ranges).map(|fix| SubsetFix { members, fix })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((neighbors, fixes))
}

/// The single-spoofer check run by one member of a five-UAV group.
///
/// * every neighbor estimate matches the checker's GPS fix: no attack;
/// * the neighbor estimates agree with each other but not with the GPS fix:
///   the checker itself is spoofed and adopts the neighbors' estimate;
/// * otherwise the spoofed neighbor `j` is the one whose exclusion yields an
///   estimate matching the GPS fix while every subset containing `j` has an
///   inconsistent range system.
pub fn consensus_localize<T: Scalar>(
    reading: &GroupReading<T>,
    checker: usize,
    tolerance: T,
) -> Result<LocalizationVerdict<T>> {
    if reading.len() != 5 {
        return Err(Error::InvalidParameter {
            name: "reading",
            reason: format!("expected a group of 5, got {}", reading.len()),
        });
    }
    let (neighbors, fixes) = neighbor_fixes(reading, checker)?;
    let own = reading.gps_positions[checker];
    let mut estimates = vec![own];
    estimates.extend(fixes.iter().map(|f| f.fix.position));
    let agrees = |a: Vec2<T>, b: Vec2<T>| a.distance(b) <= tolerance;

    if fixes.iter().all(|f| agrees(f.fix.position, own)) {
        return Ok(LocalizationVerdict {
            corrected_position: own,
            self_attacked: false,
            attacked: Vec::new(),
            estimates,
        });
    }

    let first = fixes[0].fix.position;
    if fixes.iter().all(|f| agrees(f.fix.position, first)) {
        return Ok(LocalizationVerdict {
            corrected_position: mean(fixes.iter().map(|f| f.fix.position)),
            self_attacked: true,
            attacked: Vec::new(),
            estimates,
        });
    }

    let suspects: Vec<usize> = neighbors
        .iter()
        .copied()
        .filter(|&j| {
            fixes.iter().all(|f| {
                if f.members.contains(&j) {
                    f.fix.residual > tolerance
                } else {
                    agrees(f.fix.position, own) && f.fix.residual <= tolerance
                }
            })
        })
        .collect();
    match suspects.as_slice() {
        [j] => Ok(LocalizationVerdict {
            corrected_position: own,
            self_attacked: false,
            attacked: vec![*j],
            estimates,
        }),
        _ => Err(Error::ConsensusFailure),
    }
}

/// The same check for a group of `n + 4` with up to `n` spoofed members.
///
/// Subsets with a consistent range system (residual within tolerance) vote
/// for a position. If any of them matches the checker's GPS fix the checker
/// is honest; otherwise at least four mutually agreeing subsets are required
/// and the checker adopts their position. Spoofed neighbors are those that
/// appear in no supporting subset.
pub fn generalized_consensus<T: Scalar>(
    reading: &GroupReading<T>,
    checker: usize,
    tolerance: T,
) -> Result<LocalizationVerdict<T>> {
    if reading.len() < 5 {
        return Err(Error::InvalidParameter {
            name: "reading",
            reason: format!("need at least 5 UAVs, got {}", reading.len()),
        });
    }
    let (neighbors, fixes) = neighbor_fixes(reading, checker)?;
    let own = reading.gps_positions[checker];
    let mut estimates = vec![own];
    estimates.extend(fixes.iter().map(|f| f.fix.position));
    let consistent: Vec<&SubsetFix<T>> = fixes
        .iter()
        .filter(|f| f.fix.residual <= tolerance)
        .collect();

    let support_own: Vec<&SubsetFix<T>> = consistent
        .iter()
        .copied()
        .filter(|f| f.fix.position.distance(own) <= tolerance)
        .collect();
    if !support_own.is_empty() {
        return Ok(LocalizationVerdict {
            corrected_position: own,
            self_attacked: false,
            attacked: unsupported(&neighbors, &support_own),
            estimates,
        });
    }

    // Largest cluster of mutually agreeing consistent subsets; first seed wins ties.
    let mut best: Vec<&SubsetFix<T>> = Vec::new();
    for seed in &consistent {
        let cluster: Vec<&SubsetFix<T>> = consistent
            .iter()
            .copied()
            .filter(|f| f.fix.position.distance(seed.fix.position) <= tolerance)
            .collect();
        if cluster.len() > best.len() {
            best = cluster;
        }
    }
    if best.len() < 4 {
        return Err(Error::ConsensusFailure);
    }
    Ok(LocalizationVerdict {
        corrected_position: mean(best.iter().map(|f| f.fix.position)),
        self_attacked: true,
        attacked: unsupported(&neighbors, &best),
        estimates,
    })
}

fn unsupported<T>(neighbors: &[usize], support: &[&SubsetFix<T>]) -> Vec<usize> {
    neighbors
        .iter()
        .copied()
        .filter(|n| !support.iter().any(|f| f.members.contains(n)))
        .collect()
}

fn mean<T: Scalar>(points: impl Iterator<Item = Vec2<T>>) -> Vec2<T> {
    let (sum, count) = points.fold((Vec2::zero(), 0usize), |(s, c), p| (s + p, c + 1));
    sum * (T::one() / T::lit(count as f64))
}
