//! Finite trajectory games and their equilibrium analysis.
//!
//! A [`GameInstance`] holds, per player, a finite trajectory set with
//! precomputed footprints, a goal cell, and personal cost weights, plus
//! the shared level cost polynomials. These games are exact potential
//! games: the Rosenthal potential extended with the personal terms
//! changes by exactly the deviating player's cost change under any
//! unilateral deviation, which guarantees pure Nash equilibria exist and
//! better-response dynamics terminate.
//!
//! All cost comparisons run on exact rationals. [`Evaluator`] is the fast
//! profile-evaluation path used by enumeration (baselines plus pairwise
//! footprint intersections); the [`GameInstance`] cost methods rebuild
//! loads from scratch and serve as the reference implementation.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::{congestion_cost, personal_cost, CostBreakdown, LevelCosts, PersonalCostSpec};
use crate::grid::{
    distance_at, load_map, occupancy, Cell, Footprint, GridSpec, LoadMap, ResourceId, Trajectory,
};
use crate::rational::Rational;
use crate::{Error, Result};

/// Default ceiling on the joint strategy space for exhaustive solvers.
pub const DEFAULT_PROFILE_CAP: u64 = 10_000_000;

/// One strategy: a trajectory and its occupancy footprint.
#[derive(Clone, Debug)]
pub struct Strategy {
    trajectory: Trajectory,
    footprint: Footprint,
}

impl Strategy {
    pub fn trajectory(&self) -> &Trajectory {
        &self.trajectory
    }

    pub fn footprint(&self) -> &Footprint {
        &self.footprint
    }
}

/// A player: finite strategy set, goal cell, and personal cost weights.
#[derive(Clone, Debug)]
pub struct Player {
    strategies: Vec<Strategy>,
    goal: Cell,
    personal: PersonalCostSpec,
    personal_values: Vec<Rational>,
}

impl Player {
    pub fn strategies(&self) -> &[Strategy] {
        &self.strategies
    }

    pub fn goal(&self) -> Cell {
        self.goal
    }

    pub fn personal(&self) -> &PersonalCostSpec {
        &self.personal
    }

    /// Cached personal cost of strategy `s`.
    pub fn personal_value(&self, s: usize) -> &Rational {
        &self.personal_values[s]
    }
}

/// A finite driving game in congestion-game form.
#[derive(Clone, Debug)]
pub struct GameInstance {
    grid: GridSpec,
    levels: LevelCosts,
    players: Vec<Player>,
}

impl GameInstance {
    pub fn new(grid: GridSpec, levels: LevelCosts) -> Result<Self> {
        if levels.len() != grid.levels() {
            return Err(Error::LevelCountMismatch {
                costs: levels.len(),
                grid: grid.levels(),
            });
        }
        Ok(GameInstance {
            grid,
            levels,
            players: Vec::new(),
        })
    }

    /// Add a player with a non-empty trajectory set; footprints and
    /// personal costs are precomputed here.
    pub fn add_player(
        &mut self,
        trajectories: Vec<Trajectory>,
        goal: Cell,
        personal: PersonalCostSpec,
    ) -> Result<usize> {
        if trajectories.is_empty() {
            return Err(Error::InvalidScenario(format!(
                "player {} has an empty trajectory set",
                self.players.len()
            )));
        }
        let mut strategies = Vec::with_capacity(trajectories.len());
        let mut personal_values = Vec::with_capacity(trajectories.len());
        for trajectory in trajectories {
            let footprint = occupancy(&trajectory, &self.grid)?;
            personal_values.push(personal_cost(&trajectory, &personal, goal, &self.grid));
            strategies.push(Strategy {
                trajectory,
                footprint,
            });
        }
        self.players.push(Player {
            strategies,
            goal,
            personal,
            personal_values,
        });
        Ok(self.players.len() - 1)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn levels(&self) -> &LevelCosts {
        &self.levels
    }

    pub fn players(&self) -> &[Player] {
        &self.players
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn player(&self, i: usize) -> Result<&Player> {
        self.players.get(i).ok_or(Error::PlayerOutOfRange {
            player: i,
            players: self.players.len(),
        })
    }

    /// Strategy-set sizes, in player order.
    pub fn strategy_counts(&self) -> Vec<usize> {
        self.players.iter().map(|p| p.strategies.len()).collect()
    }

    /// Size of the joint strategy space (saturating).
    pub fn profile_count(&self) -> u128 {
        self.players
            .iter()
            .map(|p| p.strategies.len() as u128)
            .try_fold(1u128, |acc, n| acc.checked_mul(n))
            .unwrap_or(u128::MAX)
    }

    fn validate_profile(&self, profile: &Profile) -> Result<()> {
        if profile.choices().len() != self.players.len() {
            return Err(Error::InvalidProfile(format!(
                "profile has {} entries for {} players",
                profile.choices().len(),
                self.players.len()
            )));
        }
        for (i, &s) in profile.choices().iter().enumerate() {
            if s as usize >= self.players[i].strategies.len() {
                return Err(Error::InvalidProfile(format!(
                    "player {i} has {} strategies, index {s} is out of range",
                    self.players[i].strategies.len()
                )));
            }
        }
        Ok(())
    }

    /// Iterate all joint profiles in lexicographic order.
    pub fn profiles(&self) -> ProfileIter {
        ProfileIter::new(self.strategy_counts())
    }

    fn profile_footprints(&self, profile: &Profile) -> Vec<&Footprint> {
        profile
            .choices()
            .iter()
            .enumerate()
            .map(|(i, &s)| &self.players[i].strategies[s as usize].footprint)
            .collect()
    }

    /// Per-resource loads at a profile (reference path).
    pub fn loads(&self, profile: &Profile) -> Result<LoadMap> {
        self.validate_profile(profile)?;
        load_map(&self.profile_footprints(profile))
    }

    /// Congestion/personal cost split of player `i` at a profile,
    /// rebuilding loads from scratch.
    pub fn cost_breakdown(&self, profile: &Profile, i: usize) -> Result<CostBreakdown> {
        self.validate_profile(profile)?;
        self.player(i)?;
        let loads = load_map(&self.profile_footprints(profile))?;
        let s = profile.choices()[i] as usize;
        let congestion = congestion_cost(
            &self.players[i].strategies[s].footprint,
            &loads,
            &self.levels,
        )?;
        Ok(CostBreakdown {
            congestion,
            personal: self.players[i].personal_values[s].clone(),
        })
    }

    /// Total cost of player `i` at a profile.
    pub fn player_total(&self, profile: &Profile, i: usize) -> Result<Rational> {
        Ok(self.cost_breakdown(profile, i)?.total())
    }

    /// Social cost: the sum of all players' totals.
    pub fn social_cost(&self, profile: &Profile) -> Result<Rational> {
        self.validate_profile(profile)?;
        let loads = load_map(&self.profile_footprints(profile))?;
        let mut total = Rational::zero();
        for (i, player) in self.players.iter().enumerate() {
            let s = profile.choices()[i] as usize;
            total += congestion_cost(&player.strategies[s].footprint, &loads, &self.levels)?;
            total += &player.personal_values[s];
        }
        Ok(total)
    }
}

/// One joint strategy choice: a strategy index per player.
#[derive(
    Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
#[serde(transparent)]
pub struct Profile(Vec<u32>);

impl Profile {
    pub fn new(choices: Vec<u32>) -> Self {
        Profile(choices)
    }

    pub fn choices(&self) -> &[u32] {
        &self.0
    }

    pub fn choice(&self, player: usize) -> usize {
        self.0[player] as usize
    }

    /// The profile with player `i` switched to strategy `s`.
    pub fn with_choice(&self, player: usize, s: u32) -> Profile {
        let mut next = self.0.clone();
        next[player] = s;
        Profile(next)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// Lexicographic iterator over joint profiles.
pub struct ProfileIter {
    counts: Vec<usize>,
    current: Vec<u32>,
    done: bool,
}

impl ProfileIter {
    fn new(counts: Vec<usize>) -> Self {
        let done = counts.contains(&0) || counts.is_empty();
        ProfileIter {
            current: vec![0; counts.len()],
            counts,
            done,
        }
    }
}

impl Iterator for ProfileIter {
    type Item = Profile;

    fn next(&mut self) -> Option<Profile> {
        if self.done {
            return None;
        }
        let out = Profile(self.current.clone());
        // odometer increment, most significant digit first
        let mut pos = self.counts.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.current[pos] += 1;
            if (self.current[pos] as usize) < self.counts[pos] {
                break;
            }
            self.current[pos] = 0;
        }
        Some(out)
    }
}

/// Fast profile evaluation: per-strategy baselines plus corrections on
/// the (few) resources shared between players.
pub struct Evaluator<'a> {
    game: &'a GameInstance,
    base_congestion: Vec<Vec<Rational>>,
    pair_shared: Vec<Vec<Vec<Vec<ResourceId>>>>,
    cost_delta: Vec<Vec<Rational>>,
    potential_delta: Vec<Vec<Rational>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(game: &'a GameInstance) -> Result<Self> {
        let n = game.num_players();
        if n > 32 {
            // shared-resource occupants are tracked in a u32 bitmask
            return Err(Error::InvalidScenario(format!(
                "profile evaluation supports at most 32 players, got {n}"
            )));
        }
        let levels = game.levels();
        let mut base_congestion = Vec::with_capacity(n);
        for player in game.players() {
            let mut per_strategy = Vec::with_capacity(player.strategies.len());
            for strategy in &player.strategies {
                if strategy.footprint.levels() != levels.len() {
                    return Err(Error::LevelCountMismatch {
                        costs: levels.len(),
                        grid: strategy.footprint.levels(),
                    });
                }
                let mut base = Rational::zero();
                for &r in strategy.footprint.resources() {
                    base += levels.level(r.level as usize).eval(1);
                }
                per_strategy.push(base);
            }
            base_congestion.push(per_strategy);
        }

        // J_h(l) - J_h(1) and cumulative-minus-baseline tables, per level
        // and load up to the player count.
        let mut cost_delta = Vec::with_capacity(levels.len());
        let mut potential_delta = Vec::with_capacity(levels.len());
        for h in 0..levels.len() {
            let poly = levels.level(h);
            let j1 = poly.eval(1);
            let mut deltas = Vec::with_capacity(n + 1);
            let mut pot = Vec::with_capacity(n + 1);
            for load in 0..=n as u32 {
                if load <= 1 {
                    deltas.push(Rational::zero());
                    pot.push(Rational::zero());
                } else {
                    deltas.push(poly.eval(load) - &j1);
                    pot.push(poly.cumulative(load) - Rational::from_integer(load.into()) * &j1);
                }
            }
            cost_delta.push(deltas);
            potential_delta.push(pot);
        }

        // Pairwise footprint intersections across players.
        let mut pair_shared = vec![vec![]; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let a = &game.players()[i].strategies;
                let b = &game.players()[j].strategies;
                let mut table = Vec::with_capacity(a.len());
                for sa in a {
                    let mut row = Vec::with_capacity(b.len());
                    for sb in b {
                        row.push(crate::grid::intersect_sorted(
                            sa.footprint.resources(),
                            sb.footprint.resources(),
                        ));
                    }
                    table.push(row);
                }
                pair_shared[i * n + j] = table;
            }
        }

        Ok(Evaluator {
            game,
            base_congestion,
            pair_shared,
            cost_delta,
            potential_delta,
        })
    }

    /// Occupant bitmasks of every resource shared by at least two players.
    fn shared_masks(&self, profile: &Profile) -> HashMap<ResourceId, u32> {
        let n = self.game.num_players();
        let mut shared: HashMap<ResourceId, u32> = HashMap::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let table = &self.pair_shared[i * n + j];
                let si = profile.choice(i);
                let sj = profile.choice(j);
                for &r in &table[si][sj] {
                    *shared.entry(r).or_insert(0) |= (1 << i) | (1 << j);
                }
            }
        }
        shared
    }

    /// Congestion costs of all players at a profile.
    pub fn congestion_costs(&self, profile: &Profile) -> Vec<Rational> {
        let mut costs: Vec<Rational> = profile
            .choices()
            .iter()
            .enumerate()
            .map(|(i, &s)| self.base_congestion[i][s as usize].clone())
            .collect();
        for (r, mask) in self.shared_masks(profile) {
            let load = mask.count_ones() as usize;
            let delta = &self.cost_delta[r.level as usize][load];
            let mut bits = mask;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                costs[i] += delta;
                bits &= bits - 1;
            }
        }
        costs
    }

    /// Total costs (congestion + personal) of all players.
    pub fn totals(&self, profile: &Profile) -> Vec<Rational> {
        let mut costs = self.congestion_costs(profile);
        for (i, cost) in costs.iter_mut().enumerate() {
            *cost += self.game.players()[i].personal_value(profile.choice(i));
        }
        costs
    }

    /// Total cost of one player.
    pub fn total(&self, profile: &Profile, i: usize) -> Rational {
        self.totals(profile).swap_remove(i)
    }

    /// Social cost at a profile.
    pub fn social(&self, profile: &Profile) -> Rational {
        let mut total = Rational::zero();
        for c in self.totals(profile) {
            total += c;
        }
        total
    }

    /// Rosenthal potential extended with the personal terms.
    pub fn potential(&self, profile: &Profile) -> Rational {
        let mut phi = Rational::zero();
        for (i, &s) in profile.choices().iter().enumerate() {
            phi += &self.base_congestion[i][s as usize];
            phi += self.game.players()[i].personal_value(s as usize);
        }
        for (r, mask) in self.shared_masks(profile) {
            phi += &self.potential_delta[r.level as usize][mask.count_ones() as usize];
        }
        phi
    }
}

/// Rosenthal potential of a profile, computed from a fresh load map:
/// `sum_r sum_{k=1..=l_r} J_level(r)(k) + sum_i J_i^per`.
pub fn rosenthal_potential(game: &GameInstance, profile: &Profile) -> Result<Rational> {
    game.validate_profile(profile)?;
    let loads = game.loads(profile)?;
    let mut phi = Rational::zero();
    for (r, &load) in loads.iter() {
        phi += game.levels().level(r.level as usize).cumulative(load);
    }
    for (i, player) in game.players().iter().enumerate() {
        phi += player.personal_value(profile.choice(i));
    }
    Ok(phi)
}

/// A strictly improving unilateral deviation.
#[derive(Clone, Debug)]
pub struct DeviationWitness {
    pub player: usize,
    pub from: u32,
    pub to: u32,
    pub old_cost: Rational,
    pub new_cost: Rational,
}

/// Result of a Nash check.
#[derive(Clone, Debug)]
pub struct NashCheck {
    pub is_nash: bool,
    /// First strictly improving deviation in (player, strategy) scan
    /// order, when one exists.
    pub witness: Option<DeviationWitness>,
}

/// Check the weak-inequality equilibrium condition: no player has a
/// strictly improving unilateral deviation.
pub fn is_nash(game: &GameInstance, profile: &Profile) -> Result<NashCheck> {
    game.validate_profile(profile)?;
    for i in 0..game.num_players() {
        let current = game.player_total(profile, i)?;
        for s in 0..game.players()[i].strategies().len() as u32 {
            if s == profile.choices()[i] {
                continue;
            }
            let candidate = game.player_total(&profile.with_choice(i, s), i)?;
            if candidate < current {
                return Ok(NashCheck {
                    is_nash: false,
                    witness: Some(DeviationWitness {
                        player: i,
                        from: profile.choices()[i],
                        to: s,
                        old_cost: current,
                        new_cost: candidate,
                    }),
                });
            }
        }
    }
    Ok(NashCheck {
        is_nash: true,
        witness: None,
    })
}

struct Solved {
    nash: Vec<Profile>,
    optima: Vec<Profile>,
    worst_ne_cost: Rational,
    best_cost: Rational,
}

/// Opponent-combination index of `profile` with player `i`'s digit removed.
fn opponent_index(profile: &Profile, i: usize, counts: &[usize]) -> usize {
    let mut idx = 0;
    for (j, &count) in counts.iter().enumerate() {
        if j == i {
            continue;
        }
        idx = idx * count + profile.choice(j);
    }
    idx
}

// Above this many best-response table cells the solver falls back to
// per-profile deviation scans.
const BEST_RESPONSE_TABLE_LIMIT: u128 = 16_000_000;

fn solve_exhaustive(game: &GameInstance, cap: u64) -> Result<Solved> {
    solve_exhaustive_with_limit(game, cap, BEST_RESPONSE_TABLE_LIMIT)
}

fn solve_exhaustive_with_limit(game: &GameInstance, cap: u64, table_limit: u128) -> Result<Solved> {
    let profiles = game.profile_count();
    if profiles > cap as u128 {
        return Err(Error::CapExceeded { profiles, cap });
    }
    if profiles == 0 {
        return Err(Error::InvalidScenario("empty strategy space".into()));
    }
    let counts = game.strategy_counts();
    let n = game.num_players();
    let evaluator = Evaluator::new(game)?;

    // Best-response value tables, indexed by opponent combination.
    let table_cells: u128 = (0..n).map(|i| profiles / counts[i] as u128).sum();
    let use_tables = table_cells <= table_limit;

    let mut best_response: Vec<Vec<Option<Rational>>> = if use_tables {
        (0..n)
            .map(|i| vec![None; (profiles / counts[i] as u128) as usize])
            .collect()
    } else {
        Vec::new()
    };

    if use_tables {
        for profile in game.profiles() {
            let totals = evaluator.totals(&profile);
            for (i, total) in totals.into_iter().enumerate() {
                let slot = &mut best_response[i][opponent_index(&profile, i, &counts)];
                match slot {
                    Some(existing) if *existing <= total => {}
                    _ => *slot = Some(total),
                }
            }
        }
    }

    let mut nash = Vec::new();
    let mut worst_ne_cost: Option<Rational> = None;
    let mut best_cost: Option<Rational> = None;
    let mut optima = Vec::new();

    for profile in game.profiles() {
        let totals = evaluator.totals(&profile);
        let social: Rational = totals.iter().fold(Rational::zero(), |acc, c| acc + c);

        let equilibrium = if use_tables {
            (0..n).all(|i| {
                best_response[i][opponent_index(&profile, i, &counts)]
                    .as_ref()
                    .is_some_and(|best| totals[i] == *best)
            })
        } else {
            (0..n).all(|i| {
                (0..counts[i] as u32).all(|s| {
                    s == profile.choices()[i]
                        || evaluator.total(&profile.with_choice(i, s), i) >= totals[i]
                })
            })
        };

        if equilibrium {
            if worst_ne_cost.as_ref().is_none_or(|w| social > *w) {
                worst_ne_cost = Some(social.clone());
            }
            nash.push(profile.clone());
        }

        match &best_cost {
            Some(best) if social > *best => {}
            Some(best) if social == *best => optima.push(profile),
            _ => {
                best_cost = Some(social);
                optima.clear();
                optima.push(profile);
            }
        }
    }

    let worst_ne_cost = worst_ne_cost.ok_or_else(|| {
        Error::Internal("no pure Nash equilibrium found in an exact potential game".into())
    })?;
    let best_cost = best_cost.expect("non-empty profile space");
    Ok(Solved {
        nash,
        optima,
        worst_ne_cost,
        best_cost,
    })
}

/// All pure Nash equilibria, in lexicographic profile order.
///
/// Exhaustive by construction; errors when the joint strategy space
/// exceeds `cap`.
pub fn enumerate_nash(game: &GameInstance, cap: u64) -> Result<Vec<Profile>> {
    Ok(solve_exhaustive(game, cap)?.nash)
}

/// All social-cost minimizers, in lexicographic profile order.
pub fn social_optima(game: &GameInstance, cap: u64) -> Result<Vec<Profile>> {
    Ok(solve_exhaustive(game, cap)?.optima)
}

/// Run deterministic better-response dynamics from a starting profile.
///
/// Players are scanned in index order and the first strictly improving
/// deviation in strategy-index order is taken; every accepted step
/// strictly decreases the potential, so the walk terminates at a Nash
/// equilibrium.
pub fn better_response(game: &GameInstance, start: &Profile) -> Result<Profile> {
    game.validate_profile(start)?;
    let evaluator = Evaluator::new(game)?;
    Ok(better_response_with(&evaluator, start.clone()))
}

fn better_response_with(evaluator: &Evaluator<'_>, mut profile: Profile) -> Profile {
    let counts = evaluator.game.strategy_counts();
    'scan: loop {
        for (i, &count) in counts.iter().enumerate() {
            let current = evaluator.total(&profile, i);
            for s in 0..count as u32 {
                if s == profile.choices()[i] {
                    continue;
                }
                let candidate = profile.with_choice(i, s);
                if evaluator.total(&candidate, i) < current {
                    profile = candidate;
                    continue 'scan;
                }
            }
        }
        return profile;
    }
}

/// The empirical alpha-star convention for a (possibly zero) ratio set.
#[derive(Clone, Debug, PartialEq)]
pub enum AlphaStar {
    Finite(Rational),
    /// No profile in the reference set constrains the ratio (all
    /// congestion costs there are zero).
    Infinite,
}

impl AlphaStar {
    pub fn is_infinite(&self) -> bool {
        matches!(self, AlphaStar::Infinite)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            AlphaStar::Finite(r) => Some(r),
            AlphaStar::Infinite => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        self.as_rational().map(crate::rational::to_f64)
    }
}

impl fmt::Display for AlphaStar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaStar::Finite(r) => write!(f, "{}", crate::rational::to_string(r)),
            AlphaStar::Infinite => write!(f, "infinite"),
        }
    }
}

fn alpha_star_over<'p>(
    game: &GameInstance,
    profiles: impl IntoIterator<Item = &'p Profile>,
) -> Result<AlphaStar> {
    let evaluator = Evaluator::new(game)?;
    let mut best: Option<Rational> = None;
    for profile in profiles {
        game.validate_profile(profile)?;
        let congestion = evaluator.congestion_costs(profile);
        for (i, cg) in congestion.into_iter().enumerate() {
            if cg.is_zero() {
                // per >= alpha * 0 holds for every alpha; unconstrained.
                continue;
            }
            let ratio = game.players()[i].personal_value(profile.choice(i)).clone() / cg;
            if best.as_ref().is_none_or(|b| ratio < *b) {
                best = Some(ratio);
            }
        }
    }
    Ok(best.map_or(AlphaStar::Infinite, AlphaStar::Finite))
}

/// Largest constant with `J_i^per >= alpha * J_i^cg` for every player at
/// every profile in the report's equilibria and optima.
pub fn empirical_alpha_star(game: &GameInstance, report: &EquilibriumReport) -> Result<AlphaStar> {
    alpha_star_over(
        game,
        report.nash_profiles.iter().chain(report.optima.iter()),
    )
}

/// Equilibrium analysis of one game: the Nash set, the social optima, and
/// the (observed) price of anarchy.
#[derive(Clone, Debug)]
pub struct EquilibriumReport {
    pub nash_profiles: Vec<Profile>,
    pub optima: Vec<Profile>,
    pub worst_ne_cost: Rational,
    pub best_cost: Rational,
    /// `worst_ne_cost / best_cost`; `None` when the optimal cost is zero.
    pub poa: Option<Rational>,
    pub alpha_star: AlphaStar,
    /// True when produced by sampling (the ratio is then an observed
    /// lower bound, not the exact price of anarchy).
    pub sampled: bool,
}

impl EquilibriumReport {
    pub fn poa_f64(&self) -> Option<f64> {
        self.poa.as_ref().map(crate::rational::to_f64)
    }
}

/// Exhaustive price-of-anarchy analysis.
pub fn price_of_anarchy(game: &GameInstance, cap: u64) -> Result<EquilibriumReport> {
    let solved = solve_exhaustive(game, cap)?;
    let poa = if solved.best_cost.is_zero() {
        None
    } else {
        Some(&solved.worst_ne_cost / &solved.best_cost)
    };
    let alpha_star = alpha_star_over(game, solved.nash.iter().chain(solved.optima.iter()))?;
    Ok(EquilibriumReport {
        nash_profiles: solved.nash,
        optima: solved.optima,
        worst_ne_cost: solved.worst_ne_cost,
        best_cost: solved.best_cost,
        poa,
        alpha_star,
        sampled: false,
    })
}

/// Sampled ("observed") price-of-anarchy analysis for games too large to
/// enumerate: run better-response walks from seeded random starts and
/// compare the worst equilibrium reached against the best profile seen.
pub fn price_of_anarchy_sampled(
    game: &GameInstance,
    seed: u64,
    samples: u32,
) -> Result<EquilibriumReport> {
    if game.num_players() == 0 {
        return Err(Error::InvalidScenario("game has no players".into()));
    }
    let evaluator = Evaluator::new(game)?;
    let counts = game.strategy_counts();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nash: BTreeSet<Profile> = BTreeSet::new();
    let mut best: Option<(Rational, Profile)> = None;
    let mut worst_ne: Option<Rational> = None;

    for _ in 0..samples.max(1) {
        let start = Profile::new(counts.iter().map(|&c| rng.gen_range(0..c as u32)).collect());
        let start_cost = evaluator.social(&start);
        if best.as_ref().is_none_or(|(b, _)| start_cost < *b) {
            best = Some((start_cost, start.clone()));
        }
        let equilibrium = better_response_with(&evaluator, start);
        let cost = evaluator.social(&equilibrium);
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost.clone(), equilibrium.clone()));
        }
        if worst_ne.as_ref().is_none_or(|w| cost > *w) {
            worst_ne = Some(cost);
        }
        nash.insert(equilibrium);
    }

    let (best_cost, best_profile) = best.expect("at least one sample");
    let worst_ne_cost = worst_ne.expect("at least one sample");
    let nash_profiles: Vec<Profile> = nash.into_iter().collect();
    let optima = vec![best_profile];
    let poa = if best_cost.is_zero() {
        None
    } else {
        Some(&worst_ne_cost / &best_cost)
    };
    let alpha_star = alpha_star_over(game, nash_profiles.iter().chain(optima.iter()))?;
    Ok(EquilibriumReport {
        nash_profiles,
        optima,
        worst_ne_cost,
        best_cost,
        poa,
        alpha_star,
        sampled: true,
    })
}

/// Why a proximity-monotonicity check did not apply.
#[derive(Clone, Debug, PartialEq)]
pub enum Property1Skip {
    /// The deviation is not a rigid integer-cell translate of the current
    /// trajectory, so there is no cell-to-cell occupancy bijection.
    NotACellTranslate,
    /// The deviation moved away from some opponent at some step.
    DistanceIncreased { player: usize, t: usize },
}

impl fmt::Display for Property1Skip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property1Skip::NotACellTranslate => {
                write!(f, "deviation is not an integer-cell translate")
            }
            Property1Skip::DistanceIncreased { player, t } => {
                write!(f, "distance to player {player} increased at step {t}")
            }
        }
    }
}

/// Outcome of a proximity-monotonicity check.
#[derive(Clone, Debug, PartialEq)]
pub enum Property1Outcome {
    /// Every player's congestion cost weakly increased.
    Holds,
    Violated {
        player: usize,
        before: Rational,
        after: Rational,
    },
    NotApplicable(Property1Skip),
}

impl Property1Outcome {
    pub fn holds(&self) -> bool {
        matches!(self, Property1Outcome::Holds)
    }
}

/// Check that a unilateral translate deviation which weakly reduces all
/// pairwise distances weakly increases every player's congestion cost.
///
/// Precondition violations are reported as [`Property1Outcome::NotApplicable`],
/// never as failures.
pub fn check_property1(
    game: &GameInstance,
    profile: &Profile,
    i: usize,
    deviation: &Trajectory,
) -> Result<Property1Outcome> {
    game.validate_profile(profile)?;
    game.player(i)?;
    let current = game.players()[i].strategies()[profile.choice(i)].trajectory();

    if deviation
        .cell_translate_of(current, game.grid().cell_size())
        .is_none()
    {
        return Ok(Property1Outcome::NotApplicable(
            Property1Skip::NotACellTranslate,
        ));
    }
    for (j, player) in game.players().iter().enumerate() {
        if j == i {
            continue;
        }
        let other = player.strategies()[profile.choice(j)].trajectory();
        for t in 0..game.grid().horizon() as usize {
            if distance_at(deviation, other, t)? > distance_at(current, other, t)? {
                return Ok(Property1Outcome::NotApplicable(
                    Property1Skip::DistanceIncreased { player: j, t },
                ));
            }
        }
    }

    let deviated_footprint = occupancy(deviation, game.grid())?;
    let before_footprints = game.profile_footprints(profile);
    let mut after_footprints = before_footprints.clone();
    after_footprints[i] = &deviated_footprint;
    let before_loads = load_map(&before_footprints)?;
    let after_loads = load_map(&after_footprints)?;

    for j in 0..game.num_players() {
        let before = congestion_cost(before_footprints[j], &before_loads, game.levels())?;
        let after = congestion_cost(after_footprints[j], &after_loads, game.levels())?;
        if after < before {
            return Ok(Property1Outcome::Violated {
                player: j,
                before,
                after,
            });
        }
    }
    Ok(Property1Outcome::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{LevelCosts, LoadPolynomial, PersonalCostSpec};
    use crate::grid::{Cell, GridSpec, Point};
    use crate::rational::ratio;

    /// The two-resource pedagogical game: strategy 1 ("shared") heads to a
    /// contested cell with load-dependent cost `J(l) = l`, strategy 0
    /// ("private") stays put at constant total cost 2. Realized on the
    /// lattice with J(x) = (x + x^2)/4 and a goal-miss penalty of 1.
    pub(crate) fn shared_private_game() -> GameInstance {
        let grid = GridSpec::new(1.0, 3, 1, 2, vec![0.4]).unwrap();
        let levels = LevelCosts::new(vec![LoadPolynomial::new(vec![
            ratio(0, 1),
            ratio(1, 4),
            ratio(1, 4),
        ])
        .unwrap()])
        .unwrap();
        let mut game = GameInstance::new(grid.clone(), levels).unwrap();
        let personal = PersonalCostSpec::new(ratio(0, 1), ratio(0, 1), ratio(1, 1)).unwrap();
        // player 0 starts left, player 1 starts right, both aim for the
        // middle cell
        let p0 = vec![
            Trajectory::from_cells(&[Cell::new(0, 0), Cell::new(0, 0)], &grid).unwrap(),
            Trajectory::from_cells(&[Cell::new(0, 0), Cell::new(1, 0)], &grid).unwrap(),
        ];
        let p1 = vec![
            Trajectory::from_cells(&[Cell::new(2, 0), Cell::new(2, 0)], &grid).unwrap(),
            Trajectory::from_cells(&[Cell::new(2, 0), Cell::new(1, 0)], &grid).unwrap(),
        ];
        game.add_player(p0, Cell::new(1, 0), personal.clone())
            .unwrap();
        game.add_player(p1, Cell::new(1, 0), personal).unwrap();
        game
    }

    #[test]
    fn shared_private_payoffs_match_the_reference_matrix() {
        let game = shared_private_game();
        // (shared, shared): each pays J(1) at the start cell + J(2) at the
        // contested cell = 1/2 + 3/2 = 2.
        let both = Profile::new(vec![1, 1]);
        assert_eq!(game.player_total(&both, 0).unwrap(), ratio(2, 1));
        assert_eq!(game.player_total(&both, 1).unwrap(), ratio(2, 1));
        // (shared, private): the mover pays 1, the stayer pays 2.
        let split = Profile::new(vec![1, 0]);
        assert_eq!(game.player_total(&split, 0).unwrap(), ratio(1, 1));
        assert_eq!(game.player_total(&split, 1).unwrap(), ratio(2, 1));
        assert_eq!(game.social_cost(&split).unwrap(), ratio(3, 1));
        assert_eq!(game.social_cost(&both).unwrap(), ratio(4, 1));
    }

    #[test]
    fn shared_private_game_has_three_equilibria() {
        let game = shared_private_game();
        let nash = enumerate_nash(&game, DEFAULT_PROFILE_CAP).unwrap();
        assert_eq!(
            nash,
            vec![
                Profile::new(vec![0, 1]),
                Profile::new(vec![1, 0]),
                Profile::new(vec![1, 1])
            ]
        );
        assert!(!is_nash(&game, &Profile::new(vec![0, 0])).unwrap().is_nash);
    }

    #[test]
    fn shared_private_optima_and_poa() {
        let game = shared_private_game();
        let optima = social_optima(&game, DEFAULT_PROFILE_CAP).unwrap();
        assert_eq!(
            optima,
            vec![Profile::new(vec![0, 1]), Profile::new(vec![1, 0])]
        );
        let report = price_of_anarchy(&game, DEFAULT_PROFILE_CAP).unwrap();
        assert_eq!(report.worst_ne_cost, ratio(4, 1));
        assert_eq!(report.best_cost, ratio(3, 1));
        assert_eq!(report.poa, Some(ratio(4, 3)));
        assert_eq!(report.alpha_star, AlphaStar::Finite(ratio(0, 1)));
    }

    #[test]
    fn single_strategy_game_has_unique_everything() {
        let grid = GridSpec::new(1.0, 3, 1, 1, vec![0.4]).unwrap();
        let levels = LevelCosts::monomials(&[ratio(1, 1)], 1).unwrap();
        let mut game = GameInstance::new(grid.clone(), levels).unwrap();
        game.add_player(
            vec![Trajectory::from_cells(&[Cell::new(0, 0)], &grid).unwrap()],
            Cell::new(0, 0),
            PersonalCostSpec::zero(),
        )
        .unwrap();
        let nash = enumerate_nash(&game, 10).unwrap();
        assert_eq!(nash, vec![Profile::new(vec![0])]);
        assert_eq!(social_optima(&game, 10).unwrap(), nash);
    }

    #[test]
    fn single_player_nash_is_cost_minimization() {
        let grid = GridSpec::new(1.0, 4, 1, 2, vec![0.4]).unwrap();
        let levels = LevelCosts::monomials(&[ratio(1, 1)], 1).unwrap();
        let mut game = GameInstance::new(grid.clone(), levels).unwrap();
        let personal = PersonalCostSpec::new(ratio(0, 1), ratio(0, 1), ratio(3, 1)).unwrap();
        game.add_player(
            vec![
                Trajectory::from_cells(&[Cell::new(0, 0), Cell::new(0, 0)], &grid).unwrap(),
                Trajectory::from_cells(&[Cell::new(0, 0), Cell::new(1, 0)], &grid).unwrap(),
            ],
            Cell::new(1, 0),
            personal,
        )
        .unwrap();
        // strategy 1 reaches the goal and avoids the miss penalty
        let nash = enumerate_nash(&game, 10).unwrap();
        assert_eq!(nash, vec![Profile::new(vec![1])]);
        // the potential of a single-player game equals its cost
        for profile in [Profile::new(vec![0]), Profile::new(vec![1])] {
            assert_eq!(
                rosenthal_potential(&game, &profile).unwrap(),
                game.player_total(&profile, 0).unwrap()
            );
        }
    }

    #[test]
    fn potential_counts_resources_when_costs_are_linear_unit() {
        let grid = GridSpec::new(1.0, 6, 1, 1, vec![0.4]).unwrap();
        let levels = LevelCosts::monomials(&[ratio(1, 1)], 1).unwrap();
        let mut game = GameInstance::new(grid.clone(), levels).unwrap();
        for x in [0, 3] {
            game.add_player(
                vec![Trajectory::from_cells(&[Cell::new(x, 0)], &grid).unwrap()],
                Cell::new(x, 0),
                PersonalCostSpec::zero(),
            )
            .unwrap();
        }
        let profile = Profile::new(vec![0, 0]);
        // disjoint unit footprints: potential = number of occupied resources
        assert_eq!(rosenthal_potential(&game, &profile).unwrap(), ratio(2, 1));
    }

    #[test]
    fn exact_potential_identity_on_the_shared_private_game() {
        let game = shared_private_game();
        for profile in game.profiles().collect::<Vec<_>>() {
            let phi = rosenthal_potential(&game, &profile).unwrap();
            for i in 0..2 {
                for s in 0..2u32 {
                    if s == profile.choices()[i] {
                        continue;
                    }
                    let deviated = profile.with_choice(i, s);
                    let phi_dev = rosenthal_potential(&game, &deviated).unwrap();
                    let delta_cost = game.player_total(&deviated, i).unwrap()
                        - game.player_total(&profile, i).unwrap();
                    assert_eq!(
                        &phi_dev - &phi,
                        delta_cost,
                        "profile {profile} player {i} -> {s}"
                    );
                }
            }
        }
    }

    #[test]
    fn evaluator_matches_reference_costs() {
        let game = shared_private_game();
        let evaluator = Evaluator::new(&game).unwrap();
        for profile in game.profiles() {
            let totals = evaluator.totals(&profile);
            for (i, total) in totals.iter().enumerate() {
                assert_eq!(total, &game.player_total(&profile, i).unwrap());
            }
            assert_eq!(
                evaluator.social(&profile),
                game.social_cost(&profile).unwrap()
            );
            assert_eq!(
                evaluator.potential(&profile),
                rosenthal_potential(&game, &profile).unwrap()
            );
        }
    }

    #[test]
    fn better_response_fixed_point_and_convergence() {
        let game = shared_private_game();
        // from the non-equilibrium profile the walk lands on a NE
        let reached = better_response(&game, &Profile::new(vec![0, 0])).unwrap();
        assert!(is_nash(&game, &reached).unwrap().is_nash);
        // player 0 improves first, landing on (shared, private)
        assert_eq!(reached, Profile::new(vec![1, 0]));
        // starting at a NE returns it unchanged
        for ne in enumerate_nash(&game, 100).unwrap() {
            assert_eq!(better_response(&game, &ne).unwrap(), ne);
        }
    }

    #[test]
    fn cap_violations_are_reported() {
        let game = shared_private_game();
        assert!(matches!(
            enumerate_nash(&game, 3),
            Err(Error::CapExceeded {
                profiles: 4,
                cap: 3
            })
        ));
    }

    #[test]
    fn table_free_fallback_matches_the_table_path() {
        let game = shared_private_game();
        let with_tables = solve_exhaustive_with_limit(&game, 100, BEST_RESPONSE_TABLE_LIMIT).unwrap();
        let scanning = solve_exhaustive_with_limit(&game, 100, 0).unwrap();
        assert_eq!(with_tables.nash, scanning.nash);
        assert_eq!(with_tables.optima, scanning.optima);
        assert_eq!(with_tables.worst_ne_cost, scanning.worst_ne_cost);
        assert_eq!(with_tables.best_cost, scanning.best_cost);
    }

    #[test]
    fn alpha_star_conventions() {
        let game = shared_private_game();
        let report = price_of_anarchy(&game, 100).unwrap();
        // (shared, shared) has zero personal cost and positive congestion
        assert_eq!(report.alpha_star, AlphaStar::Finite(ratio(0, 1)));

        // a single stationary player with positive personal cost and no
        // way to realize zero congestion keeps the ratio finite
        let grid = GridSpec::new(1.0, 3, 1, 1, vec![0.4]).unwrap();
        let levels = LevelCosts::monomials(&[ratio(1, 1)], 1).unwrap();
        let mut lonely = GameInstance::new(grid.clone(), levels).unwrap();
        lonely
            .add_player(
                vec![Trajectory::from_cells(&[Cell::new(0, 0)], &grid).unwrap()],
                Cell::new(0, 0),
                PersonalCostSpec::new(ratio(1, 2), ratio(0, 1), ratio(0, 1)).unwrap(),
            )
            .unwrap();
        let report = price_of_anarchy(&lonely, 10).unwrap();
        // per = 1/2, cg = 1 on the only profile
        assert_eq!(report.alpha_star, AlphaStar::Finite(ratio(1, 2)));

        // zero level costs make every congestion cost vanish: unconstrained
        let zero_levels =
            LevelCosts::new(vec![LoadPolynomial::constant(ratio(0, 1)).unwrap()]).unwrap();
        let mut free = GameInstance::new(grid.clone(), zero_levels).unwrap();
        free.add_player(
            vec![Trajectory::from_cells(&[Cell::new(0, 0)], &grid).unwrap()],
            Cell::new(0, 0),
            PersonalCostSpec::new(ratio(1, 2), ratio(0, 1), ratio(0, 1)).unwrap(),
        )
        .unwrap();
        let report = price_of_anarchy(&free, 10).unwrap();
        assert_eq!(report.alpha_star, AlphaStar::Infinite);
        assert_eq!(report.poa, Some(ratio(1, 1)));
    }

    #[test]
    fn property1_holds_on_the_two_car_line() {
        // two stationary cars on a line; moving one cell closer weakly
        // raises both congestion costs
        let grid = GridSpec::new(1.0, 12, 1, 1, vec![1.2, 3.2]).unwrap();
        let levels = LevelCosts::monomials(&[ratio(1, 1), ratio(1, 2)], 2).unwrap();
        let mut game = GameInstance::new(grid.clone(), levels).unwrap();
        let t0 = Trajectory::from_cells(&[Cell::new(2, 0)], &grid).unwrap();
        let t1 = Trajectory::from_cells(&[Cell::new(7, 0)], &grid).unwrap();
        game.add_player(vec![t0.clone()], Cell::new(2, 0), PersonalCostSpec::zero())
            .unwrap();
        game.add_player(vec![t1], Cell::new(7, 0), PersonalCostSpec::zero())
            .unwrap();
        let profile = Profile::new(vec![0, 0]);

        // the identity deviation trivially holds
        let same = check_property1(&game, &profile, 0, &t0).unwrap();
        assert_eq!(same, Property1Outcome::Holds);

        let closer = t0.translated(1, 0, grid.cell_size());
        assert_eq!(
            check_property1(&game, &profile, 0, &closer).unwrap(),
            Property1Outcome::Holds
        );

        // moving away violates the distance precondition
        let away = t0.translated(-1, 0, grid.cell_size());
        assert_eq!(
            check_property1(&game, &profile, 0, &away).unwrap(),
            Property1Outcome::NotApplicable(Property1Skip::DistanceIncreased { player: 1, t: 0 })
        );

        // an off-lattice deviation is not applicable either
        let off = Trajectory::new(vec![Point::new(2.5, 0.0)]).unwrap();
        assert_eq!(
            check_property1(&game, &profile, 0, &off).unwrap(),
            Property1Outcome::NotApplicable(Property1Skip::NotACellTranslate)
        );
    }

    #[test]
    fn decoupled_players_have_poa_one() {
        let grid = GridSpec::new(1.0, 20, 1, 2, vec![0.6]).unwrap();
        let levels = LevelCosts::monomials(&[ratio(2, 1)], 2).unwrap();
        let mut game = GameInstance::new(grid.clone(), levels).unwrap();
        let personal = PersonalCostSpec::new(ratio(1, 4), ratio(0, 1), ratio(2, 1)).unwrap();
        for (start, goal) in [(0, 1), (15, 16)] {
            game.add_player(
                vec![
                    Trajectory::from_cells(&[Cell::new(start, 0), Cell::new(start, 0)], &grid)
                        .unwrap(),
                    Trajectory::from_cells(&[Cell::new(start, 0), Cell::new(start + 1, 0)], &grid)
                        .unwrap(),
                ],
                Cell::new(goal, 0),
                personal.clone(),
            )
            .unwrap();
        }
        let report = price_of_anarchy(&game, 100).unwrap();
        assert_eq!(report.poa, Some(ratio(1, 1)));
        // each NE is a product of individual minimizers
        for ne in &report.nash_profiles {
            assert_eq!(ne, &Profile::new(vec![1, 1]));
        }
    }
}
