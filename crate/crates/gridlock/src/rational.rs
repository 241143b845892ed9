//! Exact rational arithmetic helpers.
//!
//! Congestion costs, the Rosenthal potential, and every equilibrium
//! comparison in this crate run on [`Rational`] so that potential
//! identities and cost ties hold with equality rather than to a
//! tolerance. Floating point only enters in the geometry predicates and
//! the bound calculator.

use num::bigint::BigInt;
use num::rational::Ratio;
use num::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary-precision rational number used for all exact cost paths.
pub type Rational = Ratio<BigInt>;

/// Shorthand for a small rational from an integer pair.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Exact conversion of a finite double into a rational.
///
/// Every finite IEEE-754 double is a dyadic rational, so this is lossless.
pub fn from_f64(value: f64) -> Option<Rational> {
    Rational::from_float(value)
}

/// Approximate a rational as a double (for display and CSV output only).
pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn to_string(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parse either a rational string (`"9/10"`, `"3"`) or a plain number.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Ok(r) = text.parse::<Rational>() {
        return Some(r);
    }
    text.parse::<f64>().ok().and_then(from_f64)
}

/// Serde adapter: a rational encoded as a string or a JSON number.
///
/// Strings round-trip exactly; numbers are converted from their exact
/// double value.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalField(pub Rational);

impl Serialize for RationalField {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&to_string(&self.0))
    }
}

impl<'de> Deserialize<'de> for RationalField {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
        }
        let raw = Raw::deserialize(deserializer)?;
        let value = match raw {
            Raw::Text(s) => {
                parse(&s).ok_or_else(|| D::Error::custom(format!("invalid rational `{s}`")))?
            }
            Raw::Number(v) => {
                from_f64(v).ok_or_else(|| D::Error::custom(format!("non-finite number {v}")))?
            }
        };
        Ok(RationalField(value))
    }
}

/// True if the value is negative (used by the non-negativity validators).
pub fn is_negative(value: &Rational) -> bool {
    value.is_negative()
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}
