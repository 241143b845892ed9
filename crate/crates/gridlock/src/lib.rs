//! Gridlock models discrete driving games as atomic congestion games over
//! spatio-temporal resources with proximity levels, and quantifies the
//! inefficiency of their equilibria.
//!
//! The pieces:
//!
//! - [`grid`] — the space x time x proximity-level resource lattice,
//!   trajectories, occupancy footprints, and binary loads.
//! - [`cost`] — exact polynomial congestion costs, analytic proximity
//!   forms, and personal (comfort/time/goal) costs.
//! - [`game`] — finite game instances, the Rosenthal potential,
//!   better-response dynamics, exhaustive Nash enumeration, social optima,
//!   the empirical price of anarchy, and the empirical alpha-star ratio.
//! - [`bounds`] — the analytic price-of-anarchy bounds for polynomial
//!   congestion games, their alpha-star refinement, and a numeric checker
//!   for the underlying smoothness constraint system.
//! - [`scenario`] — desk-scale lattice scenarios (intersection, merging)
//!   with enumerable trajectory sets, plus the two-car and multi-car
//!   cost curves.
//! - [`cli`] — the `gridlock` command-line front end and its CSV/JSON
//!   formats.
//!
//! Everything that feeds an equilibrium decision (costs, potential,
//! social cost) is computed in exact rational arithmetic, so potential
//! identities and cost ties are checked with equality, not tolerances.
//!
//! Start with the runnable examples (`cargo run --example ab_game`,
//! `bounds_table`, `intersection_poa`, ...) for a tour of the API.

pub mod bounds;
pub mod cli;
pub mod cost;
pub mod game;
pub mod grid;
pub mod rational;
pub mod scenario;

pub use bounds::{
    g_profile, phi_root, poa_bound_base, poa_bound_refined, psi_root, smoothness_constants,
    verify_smoothness, verify_smoothness_f64, BoundResult, GProfile, SmoothnessConstants,
    SmoothnessViolation,
};
pub use cost::{
    analytic_proximity_cost, congestion_cost, personal_cost, AnalyticProximitySpec, CostBreakdown,
    LevelCosts, LoadPolynomial, PersonalCostSpec,
};
pub use game::{
    better_response, check_property1, empirical_alpha_star, enumerate_nash, is_nash,
    price_of_anarchy, price_of_anarchy_sampled, rosenthal_potential, social_optima, AlphaStar,
    EquilibriumReport, Evaluator, GameInstance, NashCheck, Player, Profile, Property1Outcome,
    DEFAULT_PROFILE_CAP,
};
pub use grid::{
    distance_at, load_map, occupancy, Cell, Footprint, GridSpec, LoadMap, Point, ResourceId,
    Trajectory,
};
pub use rational::Rational;
pub use scenario::{
    build_scenario, build_scenario_with_cap, enumerate_trajectories, multi_car_curve,
    multi_car_grid, multi_car_offsets, multi_car_weights, two_car_curve, two_car_grid,
    two_car_weight_configs, AgentSpec, CurvePoint, CurveTable, RouteRules, ScenarioKind,
    ScenarioSpec, DEFAULT_AGENT_CAP,
};

/// Errors across the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("trajectory has {got} positions but the grid horizon is {want}")]
    HorizonMismatch { got: usize, want: usize },
    #[error("position ({x}, {y}) at time step {t} lies outside the grid extents")]
    OutOfGrid { t: usize, x: f64, y: f64 },
    #[error("time index {t} out of range (horizon {horizon})")]
    TimeOutOfRange { t: usize, horizon: usize },
    #[error("player index {player} out of range ({players} players)")]
    PlayerOutOfRange { player: usize, players: usize },
    #[error("footprints were built against different grids")]
    GridMismatch,
    #[error("level count mismatch: {costs} cost polynomials for {grid} grid levels")]
    LevelCountMismatch { costs: usize, grid: usize },
    #[error("coefficient of x^{power} is negative ({value})")]
    NegativeCoefficient { power: u32, value: String },
    #[error(
        "threshold proximity exponent must exceed 1, inverse exponents must be positive (got {0})"
    )]
    InvalidExponent(f64),
    #[error(
        "players {i} and {j} coincide at time step {t}; the inverse-power cost is singular there"
    )]
    ZeroDistance { i: usize, j: usize, t: usize },
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("profile space holds {profiles} joint strategies, above the cap of {cap}; raise the cap or use sampled mode")]
    CapExceeded { profiles: u128, cap: u64 },
    #[error("agent {agent} has more than {cap} feasible trajectories; shrink the horizon or speed range")]
    AgentCapExceeded { agent: usize, cap: usize },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("polynomial degree must be at least 1 (got {0}); degree-0 games are decoupled and have price of anarchy 1")]
    InvalidDegree(u32),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
