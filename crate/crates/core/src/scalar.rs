use std::fmt::{Debug, Display};

use num_rational::Rational64;
use num_traits::{FromPrimitive, Num, ToPrimitive};

/// Numeric type used for payoffs, scores, thresholds and costs.
///
/// Implemented for `f32`, `f64` and [`Rational64`]. Scores are built from
/// neighbour counts multiplied by a payoff entry, so every comparison made
/// by the update rule sees a single rounding per score (none for the
/// rational type).
pub trait Scalar:
    Num + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Converts a node or edge count.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// Converts a decimal configuration value. Rational scalars recover the
    /// simplest fraction (e.g. `1.8` becomes `9/5`).
    fn from_config(x: f64) -> Option<Self> {
        Self::from_f64(x)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

impl Scalar for Rational64 {
    fn from_config(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        // Decimal text round-trips through f64's shortest representation,
        // which gives the intended fraction for grid values like 0.35.
        let text = format!("{x}");
        match text.split_once('.') {
            None => text.parse::<i64>().ok().map(Rational64::from_integer),
            Some((int, frac)) => {
                let digits = frac.len() as u32;
                if digits > 15 {
                    return Rational64::from_f64(x);
                }
                let denom = 10i64.checked_pow(digits)?;
                let negative = int.starts_with('-');
                let whole: i64 = int.trim_start_matches('-').parse().ok()?;
                let part: i64 = frac.parse().ok()?;
                let numer = whole.checked_mul(denom)?.checked_add(part)?;
                let value = Rational64::new(numer, denom);
                Some(if negative { -value } else { value })
            }
        }
    }
}
