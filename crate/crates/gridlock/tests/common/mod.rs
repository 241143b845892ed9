//! Shared helpers for the integration and acceptance suites: seeded
//! random game instances, the translate-deviation construction, and a
//! small pass/fail line printer.

#![allow(dead_code)]

use gridlock::{
    enumerate_trajectories, AgentSpec, Cell, GameInstance, GridSpec, LevelCosts, LoadPolynomial,
    PersonalCostSpec, Profile, RouteRules, ScenarioKind, Trajectory,
};
use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rational = gridlock::Rational;

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

const COEFFS: [(i64, i64); 6] = [(1, 4), (1, 2), (9, 10), (1, 1), (3, 2), (2, 1)];
const TIME_WEIGHTS: [(i64, i64); 3] = [(0, 1), (1, 10), (1, 4)];
const ACCEL_WEIGHTS: [(i64, i64); 3] = [(0, 1), (1, 4), (1, 2)];
const MISS_PENALTIES: [(i64, i64); 3] = [(0, 1), (2, 1), (5, 1)];

fn pick<R: Rng>(rng: &mut R, options: &[(i64, i64)]) -> Rational {
    let (n, d) = options[rng.gen_range(0..options.len())];
    ratio(n, d)
}

/// A random polynomial of degree <= `max_degree` with at least one
/// nonzero coefficient at power >= 1.
fn random_polynomial<R: Rng>(rng: &mut R, max_degree: u32) -> LoadPolynomial {
    let degree = rng.gen_range(1..=max_degree);
    let mut coeffs = vec![ratio(0, 1); degree as usize + 1];
    coeffs[degree as usize] = pick(rng, &COEFFS);
    if rng.gen_bool(0.3) {
        coeffs[0] = pick(rng, &COEFFS);
    }
    if degree >= 2 && rng.gen_bool(0.3) {
        coeffs[1] = pick(rng, &COEFFS);
    }
    LoadPolynomial::new(coeffs).unwrap()
}

fn random_personal<R: Rng>(rng: &mut R) -> PersonalCostSpec {
    PersonalCostSpec::new(
        pick(rng, &TIME_WEIGHTS),
        pick(rng, &ACCEL_WEIGHTS),
        pick(rng, &MISS_PENALTIES),
    )
    .unwrap()
}

/// A seeded random instance: 2-3 players with crossing or parallel
/// routes near the grid center, random level polynomials of degree <=
/// `max_degree`, and random personal cost weights. Trajectory sets are
/// truncated to `max_strategies`.
pub fn random_instance(seed: u64, max_strategies: usize, max_degree: u32) -> GameInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cell_size = if rng.gen_bool(0.5) { 0.5 } else { 1.0 };
    let levels_count = rng.gen_range(1..=3usize);
    let mut radii = Vec::with_capacity(levels_count);
    let mut rho = cell_size * rng.gen_range(0.45..1.1);
    for _ in 0..levels_count {
        radii.push(rho);
        rho *= rng.gen_range(1.6..2.1);
    }
    let horizon = rng.gen_range(3..=4u32);
    let grid = GridSpec::new(cell_size, 14, 14, horizon, radii).unwrap();
    let levels = LevelCosts::new(
        (0..levels_count)
            .map(|_| random_polynomial(&mut rng, max_degree))
            .collect(),
    )
    .unwrap();

    let mut game = GameInstance::new(grid.clone(), levels).unwrap();
    let players = rng.gen_range(2..=3usize);
    for p in 0..players {
        // alternate horizontal and vertical routes through the middle so
        // footprints actually interact
        let lane = rng.gen_range(5..=8i32);
        // half the routes get a parallel lane to swerve into
        let goal_lane = lane
            + if rng.gen_bool(0.5) {
                rng.gen_range(-1..=1i32)
            } else {
                0
            };
        let start_along = rng.gen_range(0..=2i32);
        let reach = rng.gen_range(3..=6i32);
        let horizontal = p % 2 == 0;
        let (start, goal) = if horizontal {
            (
                Cell::new(start_along, lane),
                Cell::new(start_along + reach, goal_lane),
            )
        } else {
            (
                Cell::new(lane, start_along),
                Cell::new(goal_lane, start_along + reach),
            )
        };
        let agent = AgentSpec {
            start,
            goal,
            max_speed: rng.gen_range(1..=2),
        };
        let route = RouteRules::for_agent(ScenarioKind::Custom, &agent);
        let mut trajectories = enumerate_trajectories(p, &agent, &route, &grid, 10_000).unwrap();
        trajectories.truncate(max_strategies);
        game.add_player(trajectories, agent.goal, random_personal(&mut rng))
            .unwrap();
    }
    game
}

/// A uniformly random profile of an instance.
pub fn random_profile<R: Rng>(rng: &mut R, game: &GameInstance) -> Profile {
    Profile::new(
        game.strategy_counts()
            .iter()
            .map(|&c| rng.gen_range(0..c as u32))
            .collect(),
    )
}

/// A translate-deviation case that provably satisfies the proximity
/// precondition: player 0 drives on the left of the grid, every other
/// player stays at least two cells to its right at all times, and the
/// deviation shifts player 0 one cell toward them.
pub struct TranslateCase {
    pub game: GameInstance,
    pub profile: Profile,
    pub player: usize,
    pub deviation: Trajectory,
}

pub fn random_translate_case(seed: u64) -> TranslateCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cell_size = 1.0;
    let levels_count = rng.gen_range(1..=2usize);
    let mut radii = Vec::new();
    let mut rho = rng.gen_range(0.5..1.0);
    for _ in 0..levels_count {
        radii.push(rho);
        rho *= rng.gen_range(1.7..2.3);
    }
    let grid = GridSpec::new(cell_size, 14, 14, 3, radii).unwrap();
    let levels = LevelCosts::new(
        (0..levels_count)
            .map(|_| random_polynomial(&mut rng, 2))
            .collect(),
    )
    .unwrap();
    let mut game = GameInstance::new(grid.clone(), levels).unwrap();

    // player 0: leftmost, x stays within [0, 4]
    let row = rng.gen_range(4..=9i32);
    let start = Cell::new(rng.gen_range(0..=2), row);
    let agent0 = AgentSpec {
        start,
        goal: Cell::new(start.x + 2, row),
        max_speed: 1,
    };
    let route0 = RouteRules::for_agent(ScenarioKind::Custom, &agent0);
    let trajectories = enumerate_trajectories(0, &agent0, &route0, &grid, 1000).unwrap();
    game.add_player(trajectories, agent0.goal, random_personal(&mut rng))
        .unwrap();

    // the others keep x >= 7 at every step
    for p in 1..rng.gen_range(2..=3usize) {
        let (start, goal) = if rng.gen_bool(0.5) {
            let column = rng.gen_range(7..=11i32);
            let y = rng.gen_range(0..=2i32);
            (
                Cell::new(column, y),
                Cell::new(column, y + rng.gen_range(2..=5)),
            )
        } else {
            let start_x = rng.gen_range(7..=9i32);
            let y = rng.gen_range(3..=10i32);
            (
                Cell::new(start_x, y),
                Cell::new(start_x + rng.gen_range(2..=4), y),
            )
        };
        let agent = AgentSpec {
            start,
            goal,
            max_speed: rng.gen_range(1..=2),
        };
        let route = RouteRules::for_agent(ScenarioKind::Custom, &agent);
        let trajectories = enumerate_trajectories(p, &agent, &route, &grid, 1000).unwrap();
        game.add_player(trajectories, agent.goal, random_personal(&mut rng))
            .unwrap();
    }

    let profile = random_profile(&mut rng, &game);
    let deviation = game.players()[0].strategies()[profile.choice(0)]
        .trajectory()
        .translated(1, 0, grid.cell_size());
    TranslateCase {
        game,
        profile,
        player: 0,
        deviation,
    }
}

/// Accumulates named checks and prints one line per check.
pub struct Checker {
    label: &'static str,
    failures: Vec<String>,
}

impl Checker {
    pub fn new(label: &'static str) -> Self {
        Checker {
            label,
            failures: Vec::new(),
        }
    }

    pub fn check(&mut self, name: &str, pass: bool) {
        println!(
            "[{}] {}: {}",
            self.label,
            name,
            if pass { "PASS" } else { "FAIL" }
        );
        if !pass {
            self.failures.push(name.to_string());
        }
    }

    pub fn finish(self) {
        assert!(
            self.failures.is_empty(),
            "[{}] failed checks: {:?}",
            self.label,
            self.failures
        );
    }
}
