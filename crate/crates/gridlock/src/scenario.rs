//! Desk-scale lattice driving scenarios with enumerable trajectory sets,
//! plus the two cost-curve studies (cost vs. distance for a car pair,
//! cost vs. crowding for a car cluster).
//!
//! Scenario dynamics are a deliberately minimal lattice model: each step
//! an agent picks an along-route advance of 0, 1, or 2 cells with a speed
//! change of at most one cell per step (initial speed zero), and may slide
//! one lane sideways where the scenario's road allows. Acceleration for
//! the comfort cost is the derived per-step speed change.

use serde::{Deserialize, Serialize};

use crate::cost::{congestion_cost, LevelCosts, PersonalCostSpec};
use crate::game::GameInstance;
use crate::grid::{load_map, occupancy, Cell, GridSpec, Point, Trajectory};
use crate::rational::{ratio, Rational};
use crate::{Error, Result};
use num::Zero;

/// Default per-agent ceiling on enumerated trajectories.
pub const DEFAULT_AGENT_CAP: usize = 10_000;

/// Scenario JSON schema version this build reads and writes.
pub const SCHEMA_VERSION: u32 = 1;

/// Scenario family; fixes the road geometry rules for enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    /// Two stationary cars at a configurable separation (curve study).
    TwoCar,
    /// A car cluster around an ego vehicle (curve study).
    MultiCar,
    /// Crossing single-lane roads; no lane changes.
    Intersection,
    /// Parallel lanes joining: agents may slide between their start and
    /// goal lanes.
    Merging,
    /// Free-form: lanes between start and goal are all usable.
    Custom,
}

/// One agent: start cell, goal cell, and top speed in cells per step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSpec {
    pub start: Cell,
    pub goal: Cell,
    pub max_speed: u32,
}

/// A complete scenario description; serializes as the versioned scenario
/// JSON consumed by `gridlock solve`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub schema: u32,
    pub kind: ScenarioKind,
    pub grid: GridSpec,
    pub levels: LevelCosts,
    /// One personal cost spec per agent.
    pub personal: Vec<PersonalCostSpec>,
    pub agents: Vec<AgentSpec>,
    /// Optional horizon override; when present it replaces the grid's
    /// `horizon_T` at build time.
    #[serde(rename = "horizon_T", default, skip_serializing_if = "Option::is_none")]
    pub horizon_override: Option<u32>,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::InvalidScenario(format!(
                "unsupported schema version {} (this build reads {SCHEMA_VERSION})",
                self.schema
            )));
        }
        if self.agents.is_empty() {
            return Err(Error::InvalidScenario(
                "at least one agent is required".into(),
            ));
        }
        if self.personal.len() != self.agents.len() {
            return Err(Error::InvalidScenario(format!(
                "{} personal cost specs for {} agents",
                self.personal.len(),
                self.agents.len()
            )));
        }
        if self.levels.len() != self.grid.levels() {
            return Err(Error::LevelCountMismatch {
                costs: self.levels.len(),
                grid: self.grid.levels(),
            });
        }
        for (i, agent) in self.agents.iter().enumerate() {
            if !self.grid.contains(agent.start) {
                return Err(Error::InvalidScenario(format!(
                    "agent {i} starts off-grid at {:?}",
                    agent.start
                )));
            }
            if !self.grid.contains(agent.goal) {
                return Err(Error::InvalidScenario(format!(
                    "agent {i} has an off-grid goal {:?}",
                    agent.goal
                )));
            }
            if agent.max_speed > 2 {
                return Err(Error::InvalidScenario(format!(
                    "agent {i} has max_speed {}, but the lattice move set tops out at 2 cells/step",
                    agent.max_speed
                )));
            }
        }
        Ok(())
    }

    /// Grid actually used for building (horizon override applied).
    pub fn effective_grid(&self) -> Result<GridSpec> {
        match self.horizon_override {
            None => Ok(self.grid.clone()),
            Some(horizon) => GridSpec::new(
                self.grid.cell_size(),
                self.grid.x_extent(),
                self.grid.y_extent(),
                horizon,
                self.grid.radii().to_vec(),
            ),
        }
    }

    /// Two crossing single-lane roads on a 12 x 12 unit-cell grid; with
    /// three players a second horizontal road runs below the first.
    pub fn intersection(players: usize) -> Result<Self> {
        if !(2..=3).contains(&players) {
            return Err(Error::InvalidScenario(
                "intersection scenarios support 2 or 3 players".into(),
            ));
        }
        let grid = GridSpec::new(1.0, 12, 12, 6, vec![0.6, 1.8])?;
        let levels = LevelCosts::monomials(&[ratio(3, 1), ratio(1, 4)], 2)?;
        let mut agents = vec![
            AgentSpec {
                start: Cell::new(1, 6),
                goal: Cell::new(10, 6),
                max_speed: 2,
            },
            AgentSpec {
                start: Cell::new(6, 1),
                goal: Cell::new(6, 10),
                max_speed: 2,
            },
        ];
        if players == 3 {
            agents.push(AgentSpec {
                start: Cell::new(11, 2),
                goal: Cell::new(2, 2),
                max_speed: 2,
            });
        }
        let personal = vec![default_personal()?; players];
        Ok(ScenarioSpec {
            schema: SCHEMA_VERSION,
            kind: ScenarioKind::Intersection,
            grid,
            levels,
            personal,
            agents,
            horizon_override: None,
        })
    }

    /// Two lanes joining into one: the merging agent starts on the side
    /// lane and must reach the main lane.
    pub fn merging(players: usize) -> Result<Self> {
        if !(2..=3).contains(&players) {
            return Err(Error::InvalidScenario(
                "merging scenarios support 2 or 3 players".into(),
            ));
        }
        let horizon = if players == 2 { 6 } else { 5 };
        let reach = |start: i32| start + (1 + 2 * (horizon as i32 - 2)).min(9);
        let grid = GridSpec::new(1.0, 14, 5, horizon, vec![0.6, 1.8])?;
        let mut agents = vec![
            AgentSpec {
                start: Cell::new(0, 1),
                goal: Cell::new(reach(0).min(13), 1),
                max_speed: 2,
            },
            AgentSpec {
                start: Cell::new(0, 2),
                goal: Cell::new(reach(0).min(13), 1),
                max_speed: 2,
            },
        ];
        if players == 3 {
            agents.push(AgentSpec {
                start: Cell::new(3, 1),
                goal: Cell::new(reach(3).min(13), 1),
                max_speed: 2,
            });
        }
        let levels = LevelCosts::monomials(&[ratio(3, 1), ratio(1, 4)], 2)?;
        let personal = vec![default_personal()?; players];
        Ok(ScenarioSpec {
            schema: SCHEMA_VERSION,
            kind: ScenarioKind::Merging,
            grid,
            levels,
            personal,
            agents,
            horizon_override: None,
        })
    }
}

fn default_personal() -> Result<PersonalCostSpec> {
    PersonalCostSpec::new(ratio(1, 10), ratio(1, 4), ratio(6, 1))
}

/// Route axis an agent travels along.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Heading {
    PosX,
    NegX,
    PosY,
    NegY,
}

impl Heading {
    /// Dominant-axis heading from start toward goal.
    pub fn toward(start: Cell, goal: Cell) -> Heading {
        let dx = goal.x - start.x;
        let dy = goal.y - start.y;
        if dx.abs() >= dy.abs() {
            if dx < 0 {
                Heading::NegX
            } else {
                Heading::PosX
            }
        } else if dy < 0 {
            Heading::NegY
        } else {
            Heading::PosY
        }
    }

    fn lane_of(&self, cell: Cell) -> i32 {
        match self {
            Heading::PosX | Heading::NegX => cell.y,
            Heading::PosY | Heading::NegY => cell.x,
        }
    }

    fn compose(&self, cell: Cell, advance: i32, lane: i32) -> Cell {
        match self {
            Heading::PosX => Cell::new(cell.x + advance, lane),
            Heading::NegX => Cell::new(cell.x - advance, lane),
            Heading::PosY => Cell::new(lane, cell.y + advance),
            Heading::NegY => Cell::new(lane, cell.y - advance),
        }
    }
}

/// Road rules for one agent: travel axis and the usable lane band.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RouteRules {
    pub heading: Heading,
    pub min_lane: i32,
    pub max_lane: i32,
}

impl RouteRules {
    /// Derive the rules a scenario kind grants an agent.
    pub fn for_agent(kind: ScenarioKind, agent: &AgentSpec) -> RouteRules {
        let heading = Heading::toward(agent.start, agent.goal);
        let start_lane = heading.lane_of(agent.start);
        let goal_lane = heading.lane_of(agent.goal);
        let (min_lane, max_lane) = match kind {
            ScenarioKind::Intersection | ScenarioKind::TwoCar | ScenarioKind::MultiCar => {
                (start_lane, start_lane)
            }
            ScenarioKind::Merging | ScenarioKind::Custom => {
                (start_lane.min(goal_lane), start_lane.max(goal_lane))
            }
        };
        RouteRules {
            heading,
            min_lane,
            max_lane,
        }
    }
}

/// Enumerate every lattice trajectory an agent can drive: per step an
/// advance of 0..=2 cells along the route (speed change at most one,
/// initial speed zero) plus an optional one-lane slide within the route's
/// lane band, pruned to the grid extents. Lane slides require forward
/// motion, so a car with `max_speed` 0 has exactly one (stationary)
/// trajectory. Deterministic depth-first order.
pub fn enumerate_trajectories(
    agent_index: usize,
    agent: &AgentSpec,
    route: &RouteRules,
    grid: &GridSpec,
    cap: usize,
) -> Result<Vec<Trajectory>> {
    if !grid.contains(agent.start) {
        return Err(Error::InvalidScenario(format!(
            "agent {agent_index} starts off-grid"
        )));
    }
    let mut cells = vec![agent.start];
    let mut results = Vec::new();
    extend(
        agent_index,
        agent,
        route,
        grid,
        cap,
        &mut cells,
        0,
        &mut results,
    )?;
    let trajectories = results
        .into_iter()
        .map(|cells| Trajectory::from_cells(&cells, grid))
        .collect::<Result<Vec<_>>>()?;
    Ok(trajectories)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    agent_index: usize,
    agent: &AgentSpec,
    route: &RouteRules,
    grid: &GridSpec,
    cap: usize,
    cells: &mut Vec<Cell>,
    speed: u32,
    results: &mut Vec<Vec<Cell>>,
) -> Result<()> {
    if cells.len() == grid.horizon() as usize {
        if results.len() >= cap {
            return Err(Error::AgentCapExceeded {
                agent: agent_index,
                cap,
            });
        }
        results.push(cells.clone());
        return Ok(());
    }
    let current = *cells.last().expect("non-empty prefix");
    let lane = route.heading.lane_of(current);
    let lo = speed.saturating_sub(1);
    let hi = (speed + 1).min(agent.max_speed);
    for advance in lo..=hi {
        for lane_shift in [-1i32, 0, 1] {
            if lane_shift != 0 && advance == 0 {
                continue;
            }
            let next_lane = lane + lane_shift;
            if next_lane < route.min_lane || next_lane > route.max_lane {
                continue;
            }
            let next = route.heading.compose(current, advance as i32, next_lane);
            if !grid.contains(next) {
                continue;
            }
            cells.push(next);
            extend(
                agent_index,
                agent,
                route,
                grid,
                cap,
                cells,
                advance,
                results,
            )?;
            cells.pop();
        }
    }
    Ok(())
}

/// Build a playable game from a scenario: enumerate each agent's
/// trajectories, precompute footprints, and attach the cost structure.
pub fn build_scenario(spec: &ScenarioSpec) -> Result<GameInstance> {
    build_scenario_with_cap(spec, DEFAULT_AGENT_CAP)
}

/// [`build_scenario`] with an explicit per-agent trajectory cap.
pub fn build_scenario_with_cap(spec: &ScenarioSpec, cap: usize) -> Result<GameInstance> {
    spec.validate()?;
    let grid = spec.effective_grid()?;
    let mut game = GameInstance::new(grid.clone(), spec.levels.clone())?;
    for (i, agent) in spec.agents.iter().enumerate() {
        let route = RouteRules::for_agent(spec.kind, agent);
        let trajectories = enumerate_trajectories(i, agent, &route, &grid, cap)?;
        game.add_player(trajectories, agent.goal, spec.personal[i].clone())?;
    }
    Ok(game)
}

/// One sampled point of a cost curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvePoint {
    pub abscissa: f64,
    pub raw: Rational,
    pub normalized: Rational,
}

/// A labeled cost curve with raw and normalized columns.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveTable {
    pub label: String,
    /// Meaning of the abscissa column (`delta_m` or `num_others`).
    pub abscissa: String,
    pub points: Vec<CurvePoint>,
}

/// Grid for the two-car distance study: 0.5 m cells, radii 1.5 / 3.5 / 6 m,
/// a single time step, one row of cells long enough for `delta_max`.
pub fn two_car_grid(delta_max: f64) -> Result<GridSpec> {
    let x_extent = (delta_max / 0.5).ceil() as u32 + 2;
    GridSpec::new(0.5, x_extent, 1, 1, vec![1.5, 3.5, 6.0])
}

/// The three weight configurations of the two-car study, steepest last.
pub fn two_car_weight_configs() -> Vec<(String, Vec<Rational>)> {
    vec![
        ("1-1-1".into(), vec![ratio(1, 1), ratio(1, 1), ratio(1, 1)]),
        (
            "0.9-0.4-0.2".into(),
            vec![ratio(9, 10), ratio(2, 5), ratio(1, 5)],
        ),
        (
            "1-0.1-0.02".into(),
            vec![ratio(1, 1), ratio(1, 10), ratio(1, 50)],
        ),
    ]
}

/// Congestion cost of one of two cars as a function of their separation.
///
/// Cars sit at `(0, 0)` and `(delta, 0)` for a single time step. The
/// normalized column subtracts the isolated-car baseline and divides by
/// the value at `delta = 0`, so it spans `[0, 1]`, equals 1 at contact,
/// and vanishes once the largest proximity balls no longer share a cell.
pub fn two_car_curve(
    grid: &GridSpec,
    levels: &LevelCosts,
    delta_max: f64,
    delta_step: f64,
) -> Result<CurveTable> {
    if grid.horizon() != 1 {
        return Err(Error::InvalidScenario(
            "the two-car study uses a single time step".into(),
        ));
    }
    if !(delta_step.is_finite() && delta_step > 0.0 && delta_max.is_finite() && delta_max >= 0.0) {
        return Err(Error::InvalidArgument(
            "delta range must be positive".into(),
        ));
    }
    let origin = Trajectory::new(vec![Point::new(0.0, 0.0)])?;
    let ego = occupancy(&origin, grid)?;
    let isolated = congestion_cost(&ego, &load_map(&[&ego])?, levels)?;
    let contact_loads = load_map(&[&ego, &ego])?;
    let contact = congestion_cost(&ego, &contact_loads, levels)?;
    let scale = &contact - &isolated;
    if scale.is_zero() {
        return Err(Error::InvalidScenario(
            "level costs are load-insensitive; the normalized curve is undefined".into(),
        ));
    }

    let steps = (delta_max / delta_step + 1e-9).floor() as u32;
    let mut points = Vec::with_capacity(steps as usize + 1);
    for i in 0..=steps {
        let delta = i as f64 * delta_step;
        let other = occupancy(&Trajectory::new(vec![Point::new(delta, 0.0)])?, grid)?;
        let loads = load_map(&[&ego, &other])?;
        let raw = congestion_cost(&ego, &loads, levels)?;
        let normalized = (&raw - &isolated) / &scale;
        points.push(CurvePoint {
            abscissa: delta,
            raw,
            normalized,
        });
    }
    Ok(CurveTable {
        label: "two-car".into(),
        abscissa: "delta_m".into(),
        points,
    })
}

/// Grid for the crowding study: 0.5 m cells, radii 1.5 / 3.5 / 6 m, a
/// single step, and enough room to center the cluster.
pub fn multi_car_grid() -> Result<GridSpec> {
    GridSpec::new(0.5, 41, 41, 1, vec![1.5, 3.5, 6.0])
}

/// Default neighbor offsets (meters, relative to the ego car).
pub fn multi_car_offsets() -> Vec<Point> {
    vec![
        Point::new(3.0, 0.0),
        Point::new(-3.0, 0.0),
        Point::new(0.0, 3.0),
        Point::new(0.0, -3.0),
    ]
}

/// Default per-level weights of the crowding study.
pub fn multi_car_weights() -> Vec<Rational> {
    vec![ratio(9, 10), ratio(2, 5), ratio(1, 5)]
}

/// Ego congestion cost against the number of present neighbors, one curve
/// per polynomial degree.
///
/// The ego car sits at the grid center; neighbors appear in offset-list
/// order. The raw column is the ego cost, the normalized column removes
/// the zero-neighbor offset and rescales by the full-cluster value.
pub fn multi_car_curve(
    grid: &GridSpec,
    weights: &[Rational],
    offsets: &[Point],
    degrees: &[u32],
) -> Result<Vec<CurveTable>> {
    if grid.horizon() != 1 {
        return Err(Error::InvalidScenario(
            "the crowding study uses a single time step".into(),
        ));
    }
    if offsets.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one neighbor offset is required".into(),
        ));
    }
    let center = Cell::new(grid.x_extent() as i32 / 2, grid.y_extent() as i32 / 2);
    let ego_position = grid.cell_center(center);
    let ego = occupancy(&Trajectory::new(vec![ego_position])?, grid)?;
    let neighbors = offsets
        .iter()
        .map(|o| {
            let p = Point::new(ego_position.x + o.x, ego_position.y + o.y);
            occupancy(&Trajectory::new(vec![p])?, grid)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut tables = Vec::with_capacity(degrees.len());
    for &degree in degrees {
        let levels = LevelCosts::monomials(weights, degree)?;
        let mut raw_costs = Vec::with_capacity(neighbors.len() + 1);
        for present in 0..=neighbors.len() {
            let mut footprints = vec![&ego];
            footprints.extend(neighbors.iter().take(present));
            let loads = load_map(&footprints)?;
            raw_costs.push(congestion_cost(&ego, &loads, &levels)?);
        }
        let offset = raw_costs[0].clone();
        let scale = raw_costs.last().expect("non-empty") - &offset;
        if scale.is_zero() {
            return Err(Error::InvalidScenario(
                "neighbors never share resources with the ego car; the curve is flat".into(),
            ));
        }
        let points = raw_costs
            .into_iter()
            .enumerate()
            .map(|(n, raw)| {
                let normalized = (&raw - &offset) / &scale;
                CurvePoint {
                    abscissa: n as f64,
                    raw,
                    normalized,
                }
            })
            .collect();
        tables.push(CurveTable {
            label: format!("d={degree}"),
            abscissa: "num_others".into(),
            points,
        });
    }
    Ok(tables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::to_f64;

    #[test]
    fn stationary_agent_has_one_trajectory() {
        let grid = GridSpec::new(1.0, 5, 5, 4, vec![0.4]).unwrap();
        let agent = AgentSpec {
            start: Cell::new(2, 2),
            goal: Cell::new(2, 2),
            max_speed: 0,
        };
        let route = RouteRules::for_agent(ScenarioKind::Intersection, &agent);
        let trajectories = enumerate_trajectories(0, &agent, &route, &grid, 100).unwrap();
        assert_eq!(trajectories.len(), 1);
        assert!(trajectories[0].speeds().iter().all(|&s| s == 0.0));
    }

    /// Independent recursion over (speed, remaining steps), ignoring
    /// geometry, for a single-lane road long enough not to prune.
    fn speed_path_oracle(speed: u32, max_speed: u32, remaining: usize) -> usize {
        if remaining == 0 {
            return 1;
        }
        let lo = speed.saturating_sub(1);
        let hi = (speed + 1).min(max_speed);
        (lo..=hi)
            .map(|s| speed_path_oracle(s, max_speed, remaining - 1))
            .sum()
    }

    #[test]
    fn straight_road_count_matches_recursion_oracle() {
        // three steps, top speed one: exactly the hand-enumerable case
        let grid = GridSpec::new(1.0, 20, 1, 3, vec![0.4]).unwrap();
        let agent = AgentSpec {
            start: Cell::new(0, 0),
            goal: Cell::new(2, 0),
            max_speed: 1,
        };
        let route = RouteRules::for_agent(ScenarioKind::Intersection, &agent);
        let trajectories = enumerate_trajectories(0, &agent, &route, &grid, 1000).unwrap();
        assert_eq!(trajectories.len(), speed_path_oracle(0, 1, 2));
        assert_eq!(trajectories.len(), 4);

        let grid = GridSpec::new(1.0, 40, 1, 6, vec![0.4]).unwrap();
        let agent = AgentSpec {
            start: Cell::new(0, 0),
            goal: Cell::new(9, 0),
            max_speed: 2,
        };
        let route = RouteRules::for_agent(ScenarioKind::Intersection, &agent);
        let trajectories = enumerate_trajectories(0, &agent, &route, &grid, 1000).unwrap();
        assert_eq!(trajectories.len(), speed_path_oracle(0, 2, 5));
    }

    #[test]
    fn enumerated_trajectories_respect_the_move_rules() {
        let spec = ScenarioSpec::merging(2).unwrap();
        let grid = spec.effective_grid().unwrap();
        for (i, agent) in spec.agents.iter().enumerate() {
            let route = RouteRules::for_agent(spec.kind, agent);
            let trajectories =
                enumerate_trajectories(i, agent, &route, &grid, DEFAULT_AGENT_CAP).unwrap();
            assert!(!trajectories.is_empty());
            for traj in &trajectories {
                let cells: Vec<Cell> = traj.positions().iter().map(|&p| grid.cell_of(p)).collect();
                assert_eq!(cells[0], agent.start);
                let mut speed = 0i32;
                for w in cells.windows(2) {
                    let advance = match route.heading {
                        Heading::PosX => w[1].x - w[0].x,
                        Heading::NegX => w[0].x - w[1].x,
                        Heading::PosY => w[1].y - w[0].y,
                        Heading::NegY => w[0].y - w[1].y,
                    };
                    let lane_now = route.heading.lane_of(w[0]);
                    let lane_next = route.heading.lane_of(w[1]);
                    assert!((lane_next - lane_now).abs() <= 1);
                    assert!(lane_next >= route.min_lane && lane_next <= route.max_lane);
                    assert!(advance >= 0 && advance <= agent.max_speed as i32);
                    assert!((advance - speed).abs() <= 1, "speed change above one");
                    speed = advance;
                    assert!(grid.contains(w[1]));
                }
            }
        }
    }

    #[test]
    fn cap_errors_carry_the_agent() {
        let grid = GridSpec::new(1.0, 40, 1, 6, vec![0.4]).unwrap();
        let agent = AgentSpec {
            start: Cell::new(0, 0),
            goal: Cell::new(9, 0),
            max_speed: 2,
        };
        let route = RouteRules::for_agent(ScenarioKind::Intersection, &agent);
        assert!(matches!(
            enumerate_trajectories(3, &agent, &route, &grid, 10),
            Err(Error::AgentCapExceeded { agent: 3, cap: 10 })
        ));
    }

    #[test]
    fn intersection_conflict_is_confined_to_the_crossing() {
        let spec = ScenarioSpec::intersection(2).unwrap();
        let game = build_scenario(&spec).unwrap();
        assert_eq!(game.num_players(), 2);
        // level-0 co-occupancy can only happen where the two roads cross
        let crossing = Cell::new(6, 6);
        let radius = game.grid().radii()[0];
        for a in game.players()[0].strategies() {
            for b in game.players()[1].strategies() {
                for r in crate::grid::intersect_sorted(
                    a.footprint().resources(),
                    b.footprint().resources(),
                ) {
                    if r.level == 0 {
                        let cell_distance = game
                            .grid()
                            .cell_center(Cell::new(r.x, r.y))
                            .distance(&game.grid().cell_center(crossing));
                        assert!(cell_distance < 2.0 * radius + game.grid().cell_size());
                    }
                }
            }
        }
    }

    #[test]
    fn merging_agent_actually_changes_lanes() {
        let spec = ScenarioSpec::merging(2).unwrap();
        let game = build_scenario(&spec).unwrap();
        let merger = &game.players()[1];
        let start_lane = spec.agents[1].start.y;
        let goal_lane = spec.agents[1].goal.y;
        assert_ne!(start_lane, goal_lane);
        let mut saw_lane_change = false;
        for s in merger.strategies() {
            let lanes: Vec<i32> = s
                .trajectory()
                .positions()
                .iter()
                .map(|&p| game.grid().cell_of(p).y)
                .collect();
            if lanes.last() == Some(&goal_lane) {
                saw_lane_change = true;
            }
            for lane in lanes {
                assert!(lane == start_lane || lane == goal_lane);
            }
        }
        assert!(saw_lane_change, "no strategy reaches the merge lane");
    }

    #[test]
    fn scenario_round_trips_through_json() {
        let mut spec = ScenarioSpec::intersection(2).unwrap();
        spec.kind = ScenarioKind::Custom;
        spec.horizon_override = Some(4);
        let text = serde_json::to_string_pretty(&spec).unwrap();
        let back: ScenarioSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn validation_catches_bad_specs() {
        let mut spec = ScenarioSpec::intersection(2).unwrap();
        spec.schema = 99;
        assert!(matches!(spec.validate(), Err(Error::InvalidScenario(_))));

        let mut spec = ScenarioSpec::intersection(2).unwrap();
        spec.personal.pop();
        assert!(spec.validate().is_err());

        let mut spec = ScenarioSpec::intersection(2).unwrap();
        spec.agents[0].max_speed = 3;
        assert!(spec.validate().is_err());

        let mut spec = ScenarioSpec::intersection(2).unwrap();
        spec.agents[0].start = Cell::new(-1, 0);
        assert!(spec.validate().is_err());
    }

    #[test]
    fn two_car_curve_endpoints_and_monotonicity() {
        let grid = two_car_grid(15.0).unwrap();
        for (_, weights) in two_car_weight_configs() {
            let levels = LevelCosts::monomials(&weights, 2).unwrap();
            let table = two_car_curve(&grid, &levels, 15.0, 0.25).unwrap();
            assert_eq!(table.points.len(), 61);
            assert_eq!(table.points[0].normalized, ratio(1, 1));
            let mut previous = ratio(2, 1);
            for point in &table.points {
                assert!(
                    point.normalized <= previous,
                    "not weakly decreasing at {}",
                    point.abscissa
                );
                assert!(point.normalized >= Rational::zero());
                previous = point.normalized.clone();
                if point.abscissa >= 12.0 {
                    assert!(
                        point.normalized.is_zero(),
                        "nonzero at delta {}",
                        point.abscissa
                    );
                }
            }
        }
    }

    #[test]
    fn steeper_weight_configs_decay_faster() {
        let grid = two_car_grid(15.0).unwrap();
        let configs = two_car_weight_configs();
        let curves: Vec<CurveTable> = configs
            .iter()
            .map(|(_, w)| {
                two_car_curve(&grid, &LevelCosts::monomials(w, 2).unwrap(), 15.0, 0.25).unwrap()
            })
            .collect();
        for i in 0..curves[0].points.len() {
            let delta = curves[0].points[i].abscissa;
            if delta > 3.0 && delta < 7.0 {
                assert!(
                    curves[1].points[i].normalized < curves[0].points[i].normalized,
                    "config 0.9-0.4-0.2 not steeper at {delta}"
                );
                assert!(
                    curves[2].points[i].normalized < curves[0].points[i].normalized,
                    "config 1-0.1-0.02 not steeper at {delta}"
                );
            }
        }
    }

    #[test]
    fn multi_car_curves_order_by_degree() {
        let grid = multi_car_grid().unwrap();
        let tables = multi_car_curve(
            &grid,
            &multi_car_weights(),
            &multi_car_offsets(),
            &[1, 2, 3],
        )
        .unwrap();
        assert_eq!(tables.len(), 3);
        for table in &tables {
            assert!(table.points[0].raw > Rational::zero());
            assert!(table.points[0].normalized.is_zero());
            assert_eq!(table.points.last().unwrap().normalized, ratio(1, 1));
        }
        for i in 0..tables[0].points.len() {
            let removed = |t: &CurveTable| &t.points[i].raw - &t.points[0].raw;
            assert!(removed(&tables[2]) >= removed(&tables[1]));
            assert!(removed(&tables[1]) >= removed(&tables[0]));
        }
    }

    #[test]
    fn degree_one_crowding_cost_is_linear_in_co_occupancy() {
        let grid = multi_car_grid().unwrap();
        let weights = multi_car_weights();
        let offsets = multi_car_offsets();
        let tables = multi_car_curve(&grid, &weights, &offsets, &[1]).unwrap();
        let table = &tables[0];

        let center = Cell::new(20, 20);
        let ego_position = grid.cell_center(center);
        let ego = occupancy(&Trajectory::new(vec![ego_position]).unwrap(), &grid).unwrap();
        for present in 0..=offsets.len() {
            // weighted co-occupancy oracle: sum over the ego's resources
            // of weight(level) * number of present others on it
            let mut expected = Rational::zero();
            for offset in offsets.iter().take(present) {
                let p = Point::new(ego_position.x + offset.x, ego_position.y + offset.y);
                let other = occupancy(&Trajectory::new(vec![p]).unwrap(), &grid).unwrap();
                for r in crate::grid::intersect_sorted(ego.resources(), other.resources()) {
                    expected += &weights[r.level as usize];
                }
            }
            let removed = &table.points[present].raw - &table.points[0].raw;
            assert_eq!(removed, expected, "n = {present}");
        }
        assert!(to_f64(&table.points.last().unwrap().raw) > 0.0);
    }
}
