//! Dynamic Stackelberg game between the drone operator (leader) and the
//! spoofer (follower).
//!
//! Each step the operator protects one UAV with the cooperative-localization
//! check and the spoofer attacks one UAV. A protected UAV moves honestly even
//! when attacked; an attacked, unprotected UAV takes the spoofed step. Both
//! players minimize the sum of squared distances from the fleet to their own
//! destinations. The per-step solver enumerates all defend choices, computes
//! the spoofer's best response to each, and keeps the defend choice with the
//! lowest defender cost.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::attacker::{imposed_location, passed_beyond, spoofed_step, SpoofConstraint, TravelAxis};
use crate::kinematics::{has_arrived, heading, step, MotionParams};
use crate::{Error, Result, Scalar, Vec2};

/// Heading change (radians) above which an attacked step counts as a deflection.
pub const DEFLECTION_ANGLE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UavState<T> {
    pub true_pos: Vec2<T>,
    pub believed_pos: Vec2<T>,
    pub real_dest: Vec2<T>,
    pub attacker_dest: Vec2<T>,
    /// Dominant axis of the start -> real destination route, frozen at launch.
    pub travel: TravelAxis,
    pub arrived: bool,
    pub passed_beyond: bool,
    pub ever_deflected: bool,
}

impl<T: Scalar> UavState<T> {
    pub fn launch(
        start: Vec2<T>,
        real_dest: Vec2<T>,
        attacker_dest: Vec2<T>,
        params: &MotionParams<T>,
    ) -> Self {
        let travel = TravelAxis::of_route(start, real_dest);
        Self {
            true_pos: start,
            believed_pos: start,
            real_dest,
            attacker_dest,
            travel,
            arrived: has_arrived(start, real_dest, params),
            passed_beyond: passed_beyond(start, attacker_dest, travel),
            ever_deflected: false,
        }
    }

    /// One update. `attacked` means the spoofer targets this UAV and it is
    /// not protected this step.
    pub fn advance(
        &self,
        attacked: bool,
        params: &MotionParams<T>,
        constraint: &SpoofConstraint<T>,
    ) -> Self {
        let mut next = *self;
        if self.arrived {
            next.believed_pos = next.true_pos;
            return next;
        }
        let honest = step(self.true_pos, self.real_dest, params);
        let spoofed = if attacked {
            imposed_location(
                self.true_pos,
                self.real_dest,
                self.attacker_dest,
                constraint,
            )
            .ok()
            .and_then(|imp| {
                let pos = spoofed_step(self.true_pos, imp.location, self.real_dest, params).ok()?;
                Some((imp.location, pos))
            })
        } else {
            None
        };
        match spoofed {
            Some((imposed, pos)) => {
                next.true_pos = pos;
                next.believed_pos = step(imposed, self.real_dest, params);
                let honest_dir = heading(self.true_pos, self.real_dest);
                let spoof_dir = heading(imposed, self.real_dest);
                if let (Ok(h), Ok(s)) = (honest_dir, spoof_dir) {
                    if h.angle_to(s) > T::lit(DEFLECTION_ANGLE) {
                        next.ever_deflected = true;
                    }
                }
            }
            None => {
                next.true_pos = honest;
                next.believed_pos = honest;
            }
        }
        next.arrived = has_arrived(next.true_pos, self.real_dest, params);
        next.passed_beyond =
            self.passed_beyond || passed_beyond(next.true_pos, self.attacker_dest, self.travel);
        next
    }
}

/// One step's actions. `defend: None` means no UAV runs the defense.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StepDecision {
    pub defend: Option<usize>,
    pub attack: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameState<T> {
    pub uavs: Vec<UavState<T>>,
    pub t: usize,
    pub params: MotionParams<T>,
    pub constraint: SpoofConstraint<T>,
}

impl<T: Scalar> GameState<T> {
    /// Fleet at launch. A UAV counts as arrived within `e_max` of its real
    /// destination, which is also where the spoofer loses its grip.
    pub fn new(
        starts: &[Vec2<T>],
        real_dests: &[Vec2<T>],
        attacker_dests: &[Vec2<T>],
        step_length: T,
        e_max: T,
    ) -> Result<Self> {
        if starts.len() != real_dests.len() || starts.len() != attacker_dests.len() {
            return Err(Error::InvalidParameter {
                name: "fleet",
                reason: "starts, real_dests and attacker_dests differ in length".into(),
            });
        }
        if starts.is_empty() {
            return Err(Error::InvalidParameter {
                name: "fleet",
                reason: "no UAVs".into(),
            });
        }
        let params = MotionParams::new(step_length, e_max)?;
        let constraint = SpoofConstraint::new(e_max)?;
        let uavs = starts
            .iter()
            .zip(real_dests)
            .zip(attacker_dests)
            .map(|((s, d), a)| UavState::launch(*s, *d, *a, &params))
            .collect();
        Ok(Self {
            uavs,
            t: 0,
            params,
            constraint,
        })
    }

    pub fn len(&self) -> usize {
        self.uavs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.uavs.is_empty()
    }

    pub fn positions(&self) -> Vec<Vec2<T>> {
        self.uavs.iter().map(|u| u.true_pos).collect()
    }

    /// UAVs the spoofer still considers: those not yet past its destination.
    pub fn attack_candidates(&self) -> impl Iterator<Item = usize> + '_ {
        self.uavs
            .iter()
            .enumerate()
            .filter(|(_, u)| !u.passed_beyond)
            .map(|(i, _)| i)
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index,
                len: self.len(),
            })
        }
    }

    pub fn transition(&self, decision: StepDecision) -> Result<Self> {
        if let Some(d) = decision.defend {
            self.check_index(d)?;
        }
        if let Some(a) = decision.attack {
            self.check_index(a)?;
            if self.uavs[a].passed_beyond {
                return Err(Error::AttackOutOfSet(a));
            }
        }
        let uavs = self
            .uavs
            .iter()
            .enumerate()
            .map(|(i, u)| {
                let attacked = decision.attack == Some(i) && decision.defend != Some(i);
                u.advance(attacked, &self.params, &self.constraint)
            })
            .collect();
        Ok(Self {
            uavs,
            t: self.t + 1,
            params: self.params,
            constraint: self.constraint,
        })
    }

    pub fn all_settled(&self) -> bool {
        self.uavs.iter().all(|u| u.arrived)
    }
}

/// Sum of squared distances to the attacker's destinations.
pub fn attacker_step_utility<T: Scalar>(state: &GameState<T>) -> T {
    state.uavs.iter().fold(T::zero(), |acc, u| {
        acc + u.true_pos.distance_squared(u.attacker_dest)
    })
}

/// Sum of squared distances to the real destinations.
pub fn defender_step_utility<T: Scalar>(state: &GameState<T>) -> T {
    state.uavs.iter().fold(T::zero(), |acc, u| {
        acc + u.true_pos.distance_squared(u.real_dest)
    })
}

/// The spoofer's cost-minimizing target given the realized defend action.
/// Ties go to the lowest index; an empty action set yields `None`.
pub fn best_response<T: Scalar>(
    state: &GameState<T>,
    defend: Option<usize>,
) -> Result<Option<usize>> {
    Ok(best_response_with_state(state, defend)?.map(|(a, _)| a))
}

fn best_response_with_state<T: Scalar>(
    state: &GameState<T>,
    defend: Option<usize>,
) -> Result<Option<(usize, GameState<T>)>> {
    let mut best: Option<(usize, T, GameState<T>)> = None;
    for candidate in state.attack_candidates() {
        let next = state.transition(StepDecision {
            defend,
            attack: Some(candidate),
        })?;
        let cost = attacker_step_utility(&next);
        if best.as_ref().is_none_or(|(_, c, _)| cost < *c) {
            best = Some((candidate, cost, next));
        }
    }
    Ok(best.map(|(a, _, s)| (a, s)))
}

/// Leader's per-step optimum: the defend action whose induced best response
/// leaves the lowest defender cost. Ties go to the lowest defend index.
pub fn stackelberg_step<T: Scalar>(state: &GameState<T>) -> Result<StepDecision> {
    let mut best: Option<(StepDecision, T)> = None;
    for d in 0..state.len() {
        let defend = Some(d);
        let (attack, next) = match best_response_with_state(state, defend)? {
            Some((a, s)) => (Some(a), s),
            None => (
                None,
                state.transition(StepDecision {
                    defend,
                    attack: None,
                })?,
            ),
        };
        let cost = defender_step_utility(&next);
        if best.as_ref().is_none_or(|(_, c)| cost < *c) {
            best = Some((StepDecision { defend, attack }, cost));
        }
    }
    best.map(|(d, _)| d).ok_or(Error::InvalidParameter {
        name: "fleet",
        reason: "no UAVs".into(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DefenderPolicy {
    Stackelberg,
    Random,
    Deterministic,
    None,
}

impl DefenderPolicy {
    pub const ALL: [DefenderPolicy; 4] = [
        DefenderPolicy::Stackelberg,
        DefenderPolicy::Random,
        DefenderPolicy::Deterministic,
        DefenderPolicy::None,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DefenderPolicy::Stackelberg => "stackelberg",
            DefenderPolicy::Random => "random",
            DefenderPolicy::Deterministic => "deterministic",
            DefenderPolicy::None => "none",
        }
    }
}

impl std::fmt::Display for DefenderPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for DefenderPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                format!(
                    "unknown policy `{s}` (expected stackelberg, random, deterministic or none)"
                )
            })
    }
}

/// Defend action of a non-game-theoretic policy. `Stackelberg` is handled by
/// [`stackelberg_step`]; asking for it here falls back to round robin.
pub fn baseline_policy<T: Scalar, R: Rng + ?Sized>(
    kind: DefenderPolicy,
    state: &GameState<T>,
    rng: &mut R,
) -> Option<usize> {
    match kind {
        DefenderPolicy::Random => Some(rng.random_range(0..state.len())),
        DefenderPolicy::Deterministic | DefenderPolicy::Stackelberg => Some(state.t % state.len()),
        DefenderPolicy::None => None,
    }
}

/// Decision for one step under `policy`, with the spoofer best-responding
/// to the realized defend action.
pub fn decide<T: Scalar, R: Rng + ?Sized>(
    policy: DefenderPolicy,
    state: &GameState<T>,
    rng: &mut R,
) -> Result<StepDecision> {
    if policy == DefenderPolicy::Stackelberg {
        return stackelberg_step(state);
    }
    let defend = baseline_policy(policy, state, rng);
    Ok(StepDecision {
        defend,
        attack: best_response(state, defend)?,
    })
}

/// Full trace of one episode plus the two per-UAV reference routes.
#[derive(Clone, Debug, PartialEq)]
pub struct EpisodeRecord<T> {
    pub policy: DefenderPolicy,
    /// `positions[t][i]` for t in 0..=tau.
    pub positions: Vec<Vec<Vec2<T>>>,
    /// Route each UAV would fly with no attack.
    pub no_attack_ref: Vec<Vec<Vec2<T>>>,
    /// Route each UAV would fly if spoofed at every step with no defense.
    pub attack_ref: Vec<Vec<Vec2<T>>>,
    pub decisions: Vec<StepDecision>,
    pub attacker_utility: Vec<T>,
    pub defender_utility: Vec<T>,
    pub final_state: GameState<T>,
}

impl<T: Scalar> EpisodeRecord<T> {
    pub fn total_attacker_utility(&self) -> T {
        self.attacker_utility.iter().fold(T::zero(), |a, b| a + *b)
    }

    pub fn total_defender_utility(&self) -> T {
        self.defender_utility.iter().fold(T::zero(), |a, b| a + *b)
    }

    pub fn tau(&self) -> usize {
        self.decisions.len()
    }

    /// Trajectory of one UAV across all recorded steps.
    pub fn trajectory(&self, uav: usize) -> Vec<Vec2<T>> {
        self.positions.iter().map(|row| row[uav]).collect()
    }

    pub fn no_attack_trajectory(&self, uav: usize) -> Vec<Vec2<T>> {
        self.no_attack_ref.iter().map(|row| row[uav]).collect()
    }

    pub fn attack_trajectory(&self, uav: usize) -> Vec<Vec2<T>> {
        self.attack_ref.iter().map(|row| row[uav]).collect()
    }
}

/// Runs `tau` steps of the game from `initial`, alongside the no-attack and
/// always-attacked reference routes. With `attacker_enabled == false` the
/// spoofer never acts, though the defender still picks its actions.
pub fn run_episode<T: Scalar, R: Rng + ?Sized>(
    initial: &GameState<T>,
    policy: DefenderPolicy,
    tau: usize,
    attacker_enabled: bool,
    rng: &mut R,
) -> Result<EpisodeRecord<T>> {
    let mut state = initial.clone();
    let mut reference_r = initial.uavs.clone();
    let mut reference_f = initial.uavs.clone();
    let mut positions = vec![state.positions()];
    let mut no_attack_ref = vec![state.positions()];
    let mut attack_ref = vec![state.positions()];
    let mut decisions = Vec::with_capacity(tau);
    let mut attacker_utility = Vec::with_capacity(tau);
    let mut defender_utility = Vec::with_capacity(tau);

    for _ in 0..tau {
        let mut decision = decide(policy, &state, rng)?;
        if !attacker_enabled {
            decision.attack = None;
        }
        state = state.transition(decision)?;
        attacker_utility.push(attacker_step_utility(&state));
        defender_utility.push(defender_step_utility(&state));
        decisions.push(decision);
        positions.push(state.positions());

        for u in reference_r.iter_mut() {
            *u = u.advance(false, &state.params, &state.constraint);
        }
        for u in reference_f.iter_mut() {
            let attackable = !u.passed_beyond;
            *u = u.advance(attackable, &state.params, &state.constraint);
        }
        no_attack_ref.push(reference_r.iter().map(|u| u.true_pos).collect());
        attack_ref.push(reference_f.iter().map(|u| u.true_pos).collect());
    }

    Ok(EpisodeRecord {
        policy,
        positions,
        no_attack_ref,
        attack_ref,
        decisions,
        attacker_utility,
        defender_utility,
        final_state: state,
    })
}
