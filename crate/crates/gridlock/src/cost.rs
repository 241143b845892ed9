//! Cost evaluation: polynomial congestion costs, analytic proximity
//! costs, and personal (trajectory-only) costs.
//!
//! The congestion path `sum_t sum_h sum_{r in footprint_i(t,h)} J_h(l_r)`
//! is evaluated entirely in exact rational arithmetic; so are personal
//! costs, whose float inputs (derived speeds) are converted to rationals
//! losslessly. Analytic proximity forms are float-valued and exist for
//! comparison curves only; game instances never use them.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::grid::{distance_at, Cell, Footprint, GridSpec, LoadMap, Trajectory};
use crate::rational::{self, Rational, RationalField};
use crate::{Error, Result};
use num::Zero;

/// Polynomial load cost with non-negative rational coefficients,
/// evaluated on integer loads.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadPolynomial {
    coeffs: Vec<Rational>,
}

impl LoadPolynomial {
    /// Coefficients in ascending power order: `a_0 + a_1 x + ...`.
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        for (i, a) in coeffs.iter().enumerate() {
            if rational::is_negative(a) {
                return Err(Error::NegativeCoefficient {
                    power: i as u32,
                    value: rational::to_string(a),
                });
            }
        }
        Ok(LoadPolynomial { coeffs })
    }

    /// The single-term polynomial `weight * x^degree`.
    pub fn monomial(weight: Rational, degree: u32) -> Result<Self> {
        let mut coeffs = vec![Rational::zero(); degree as usize + 1];
        coeffs[degree as usize] = weight;
        LoadPolynomial::new(coeffs)
    }

    /// The constant polynomial.
    pub fn constant(value: Rational) -> Result<Self> {
        LoadPolynomial::new(vec![value])
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Index of the last nonzero coefficient (zero for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.coeffs.iter().rposition(|a| !a.is_zero()).unwrap_or(0) as u32
    }

    /// Exact evaluation at an integer load (Horner).
    pub fn eval(&self, load: u32) -> Rational {
        let x = Rational::from_integer(load.into());
        let mut acc = Rational::zero();
        for a in self.coeffs.iter().rev() {
            acc = acc * &x + a;
        }
        acc
    }

    /// Exact partial sum `sum_{k=1..=load} eval(k)` (the per-resource
    /// Rosenthal term).
    pub fn cumulative(&self, load: u32) -> Rational {
        let mut acc = Rational::zero();
        for k in 1..=load {
            acc += self.eval(k);
        }
        acc
    }
}

impl Serialize for LoadPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.coeffs.iter().map(rational::to_string))
    }
}

impl<'de> Deserialize<'de> for LoadPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<RationalField>::deserialize(deserializer)?;
        LoadPolynomial::new(raw.into_iter().map(|r| r.0).collect()).map_err(D::Error::custom)
    }
}

/// One load polynomial per proximity level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LevelCosts {
    polys: Vec<LoadPolynomial>,
}

impl LevelCosts {
    pub fn new(polys: Vec<LoadPolynomial>) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::InvalidScenario(
                "at least one level cost is required".into(),
            ));
        }
        Ok(LevelCosts { polys })
    }

    /// Monomials `a_h * x^degree` from per-level weights, as in the
    /// worked two-car and multi-car configurations.
    pub fn monomials(weights: &[Rational], degree: u32) -> Result<Self> {
        LevelCosts::new(
            weights
                .iter()
                .map(|a| LoadPolynomial::monomial(a.clone(), degree))
                .collect::<Result<_>>()?,
        )
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn level(&self, h: usize) -> &LoadPolynomial {
        &self.polys[h]
    }

    pub fn iter(&self) -> impl Iterator<Item = &LoadPolynomial> {
        self.polys.iter()
    }

    /// Maximum degree across levels; the `d` that enters the bounds.
    pub fn max_degree(&self) -> u32 {
        self.polys.iter().map(|p| p.degree()).max().unwrap_or(0)
    }
}

/// Congestion cost of the player owning `footprint`: the triple sum of
/// level polynomials evaluated at the current loads, exact.
pub fn congestion_cost(
    footprint: &Footprint,
    loads: &LoadMap,
    levels: &LevelCosts,
) -> Result<Rational> {
    if footprint.levels() != levels.len() {
        return Err(Error::LevelCountMismatch {
            costs: levels.len(),
            grid: footprint.levels(),
        });
    }
    let mut total = Rational::zero();
    for &r in footprint.resources() {
        total += levels.level(r.level as usize).eval(loads.load(r));
    }
    Ok(total)
}

/// Closed-form proximity costs of the distance-based kind, used as
/// comparison overlays for the congestion curves.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum AnalyticProximitySpec {
    /// `(delta_s - delta)^alpha` below the safety distance, zero above it.
    ThresholdPower { safety_distance: f64, exponent: f64 },
    /// `delta^-alpha`; singular at zero distance.
    InversePower { exponent: f64 },
    /// `-delta^alpha` (a negated power sum, non-positive by construction).
    NegativePowerSum { exponent: f64 },
}

impl AnalyticProximitySpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            AnalyticProximitySpec::ThresholdPower {
                safety_distance,
                exponent,
            } => {
                if !(exponent.is_finite() && exponent > 1.0) {
                    return Err(Error::InvalidExponent(exponent));
                }
                if !(safety_distance.is_finite() && safety_distance > 0.0) {
                    return Err(Error::InvalidScenario(format!(
                        "safety distance must be positive, got {safety_distance}"
                    )));
                }
            }
            AnalyticProximitySpec::InversePower { exponent }
            | AnalyticProximitySpec::NegativePowerSum { exponent } => {
                if !(exponent.is_finite() && exponent > 0.0) {
                    return Err(Error::InvalidExponent(exponent));
                }
            }
        }
        Ok(())
    }
}

/// Analytic proximity cost of player `i`: sum over opponents and time of
/// the chosen distance form.
///
/// The threshold and inverse-power forms are non-negative; the negated
/// power sum is non-positive. Colliding profiles (zero distance) are an
/// error under the inverse form rather than an infinite cost.
pub fn analytic_proximity_cost(
    trajectories: &[Trajectory],
    i: usize,
    spec: &AnalyticProximitySpec,
) -> Result<f64> {
    spec.validate()?;
    let horizon = trajectories
        .get(i)
        .ok_or(Error::PlayerOutOfRange {
            player: i,
            players: trajectories.len(),
        })?
        .len();
    let mut total = 0.0;
    for (j, other) in trajectories.iter().enumerate() {
        if j == i {
            continue;
        }
        for t in 0..horizon {
            let delta = distance_at(&trajectories[i], other, t)?;
            total += match *spec {
                AnalyticProximitySpec::ThresholdPower {
                    safety_distance,
                    exponent,
                } => {
                    if delta < safety_distance {
                        (safety_distance - delta).powf(exponent)
                    } else {
                        0.0
                    }
                }
                AnalyticProximitySpec::InversePower { exponent } => {
                    if delta == 0.0 {
                        return Err(Error::ZeroDistance { i, j, t });
                    }
                    delta.powf(-exponent)
                }
                AnalyticProximitySpec::NegativePowerSum { exponent } => -delta.powf(exponent),
            };
        }
    }
    Ok(total)
}

/// Personal (trajectory-only) cost weights: a per-step time cost, a
/// quadratic comfort penalty on accelerations, and a terminal penalty for
/// missing the goal cell.
#[derive(Clone, Debug, PartialEq)]
pub struct PersonalCostSpec {
    time_weight: Rational,
    accel_weight: Rational,
    goal_miss_penalty: Rational,
}

impl PersonalCostSpec {
    pub fn new(
        time_weight: Rational,
        accel_weight: Rational,
        goal_miss_penalty: Rational,
    ) -> Result<Self> {
        for (name, w) in [
            ("time_weight", &time_weight),
            ("accel_weight", &accel_weight),
            ("goal_miss_penalty", &goal_miss_penalty),
        ] {
            if rational::is_negative(w) {
                return Err(Error::InvalidScenario(format!(
                    "{name} must be non-negative, got {}",
                    rational::to_string(w)
                )));
            }
        }
        Ok(PersonalCostSpec {
            time_weight,
            accel_weight,
            goal_miss_penalty,
        })
    }

    pub fn zero() -> Self {
        PersonalCostSpec {
            time_weight: Rational::zero(),
            accel_weight: Rational::zero(),
            goal_miss_penalty: Rational::zero(),
        }
    }

    pub fn time_weight(&self) -> &Rational {
        &self.time_weight
    }

    pub fn accel_weight(&self) -> &Rational {
        &self.accel_weight
    }

    pub fn goal_miss_penalty(&self) -> &Rational {
        &self.goal_miss_penalty
    }

    pub fn is_zero(&self) -> bool {
        self.time_weight.is_zero()
            && self.accel_weight.is_zero()
            && self.goal_miss_penalty.is_zero()
    }

    /// Scale all three weights by a factor (used by the alpha sweep).
    pub fn scaled(&self, factor: &Rational) -> Self {
        PersonalCostSpec {
            time_weight: &self.time_weight * factor,
            accel_weight: &self.accel_weight * factor,
            goal_miss_penalty: &self.goal_miss_penalty * factor,
        }
    }
}

impl Serialize for PersonalCostSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("PersonalCostSpec", 3)?;
        s.serialize_field("time_weight", &RationalField(self.time_weight.clone()))?;
        s.serialize_field("accel_weight", &RationalField(self.accel_weight.clone()))?;
        s.serialize_field(
            "goal_miss_penalty",
            &RationalField(self.goal_miss_penalty.clone()),
        )?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for PersonalCostSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            time_weight: RationalField,
            accel_weight: RationalField,
            goal_miss_penalty: RationalField,
        }
        let raw = Raw::deserialize(deserializer)?;
        PersonalCostSpec::new(
            raw.time_weight.0,
            raw.accel_weight.0,
            raw.goal_miss_penalty.0,
        )
        .map_err(D::Error::custom)
    }
}

/// Personal cost of a trajectory:
/// `time_weight * T + accel_weight * sum accel^2 + goal_miss_penalty`
/// (the penalty applies when the final position's holding cell is not the
/// goal cell). Exact: derived float speeds are converted to rationals
/// losslessly before squaring.
pub fn personal_cost(
    trajectory: &Trajectory,
    spec: &PersonalCostSpec,
    goal: Cell,
    grid: &GridSpec,
) -> Rational {
    let mut total = spec.time_weight.clone() * Rational::from_integer(trajectory.len().into());
    if !spec.accel_weight.is_zero() {
        let speeds: Vec<Rational> = trajectory
            .speeds()
            .into_iter()
            .map(|s| rational::from_f64(s).expect("speeds are finite"))
            .collect();
        let mut accel_sq = Rational::zero();
        for w in speeds.windows(2) {
            let diff = &w[1] - &w[0];
            accel_sq += &diff * &diff;
        }
        total += &spec.accel_weight * accel_sq;
    }
    let final_position = trajectory.positions()[trajectory.len() - 1];
    if grid.cell_of(final_position) != goal {
        total += &spec.goal_miss_penalty;
    }
    total
}

/// A player's cost at a profile, split per the additive decomposition
/// `J_i = J_i^cg + J_i^per`.
#[derive(Clone, Debug, PartialEq)]
pub struct CostBreakdown {
    pub congestion: Rational,
    pub personal: Rational,
}

impl CostBreakdown {
    pub fn total(&self) -> Rational {
        &self.congestion + &self.personal
    }
}
