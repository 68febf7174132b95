//! The value domain `[0, +∞]` with exact rational finite part.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::EmtError;

/// A nonnegative rational or `+∞`.
///
/// Ordering puts every finite value below `Infinite`. Finite payloads are kept
/// in lowest terms with a positive denominator (guaranteed by `BigRational`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtValue {
    Finite(BigRational),
    Infinite,
}

impl ExtValue {
    pub fn zero() -> Self {
        ExtValue::Finite(BigRational::zero())
    }

    pub fn infinite() -> Self {
        ExtValue::Infinite
    }

    pub fn int(n: u64) -> Self {
        ExtValue::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den`; panics on a zero denominator.
    pub fn ratio(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        ExtValue::Finite(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Checked constructor from an arbitrary rational.
    pub fn from_rational(r: BigRational) -> Result<Self, EmtError> {
        if r.is_negative() {
            return Err(EmtError::Domain(format!("negative value {r}")));
        }
        Ok(ExtValue::Finite(r))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtValue::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtValue::Infinite)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExtValue::Finite(r) => r.is_zero(),
            ExtValue::Infinite => false,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExtValue::Finite(r) => Some(r),
            ExtValue::Infinite => None,
        }
    }

    /// Addition saturating at `+∞`.
    pub fn saturating_sum(&self, other: &ExtValue) -> ExtValue {
        match (self, other) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => ExtValue::Finite(a + b),
            _ => ExtValue::Infinite,
        }
    }

    pub fn minimum(&self, other: &ExtValue) -> ExtValue {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn maximum(&self, other: &ExtValue) -> ExtValue {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// `self - other` when the result is a well-defined element of `[0, +∞]`.
    ///
    /// `∞ - finite = ∞`; `∞ - ∞` and negative results are undefined.
    pub fn checked_sub(&self, other: &ExtValue) -> Option<ExtValue> {
        match (self, other) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) if a >= b => Some(ExtValue::Finite(a - b)),
            (ExtValue::Finite(_), _) => None,
            (ExtValue::Infinite, ExtValue::Finite(_)) => Some(ExtValue::Infinite),
            (ExtValue::Infinite, ExtValue::Infinite) => None,
        }
    }

    /// `|self - other|` for values where it is defined (not both infinite).
    pub fn abs_diff(&self, other: &ExtValue) -> Option<ExtValue> {
        if self >= other {
            self.checked_sub(other)
        } else {
            other.checked_sub(self)
        }
    }
}

impl Default for ExtValue {
    fn default() -> Self {
        ExtValue::zero()
    }
}

impl Add for ExtValue {
    type Output = ExtValue;

    fn add(self, rhs: ExtValue) -> ExtValue {
        self.saturating_sum(&rhs)
    }
}

impl<'a> Add<&'a ExtValue> for &'a ExtValue {
    type Output = ExtValue;

    fn add(self, rhs: &'a ExtValue) -> ExtValue {
        self.saturating_sum(rhs)
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // BigRational prints "p" when the denominator is one, "p/q" otherwise.
            ExtValue::Finite(r) => write!(f, "{r}"),
            ExtValue::Infinite => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_natural(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl FromStr for ExtValue {
    type Err = EmtError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" {
            return Ok(ExtValue::Infinite);
        }
        let bad = |msg: &str| EmtError::parse("", format!("{msg}: {s:?}"));
        if s.starts_with('-') {
            return Err(bad("negative value"));
        }
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (
                parse_natural(n).ok_or_else(|| bad("malformed numerator"))?,
                parse_natural(d).ok_or_else(|| bad("malformed denominator"))?,
            ),
            None => (
                parse_natural(s).ok_or_else(|| bad("malformed value"))?,
                BigInt::from(1),
            ),
        };
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        Ok(ExtValue::Finite(BigRational::new(num, den)))
    }
}

impl Serialize for ExtValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExtValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(s: &str) -> ExtValue {
        s.parse().unwrap()
    }

    #[test]
    fn sums() {
        assert_eq!(v("1/2").saturating_sum(&v("1/3")), v("5/6"));
        assert_eq!(v("inf").saturating_sum(&v("0")), ExtValue::Infinite);
        assert_eq!(v("2") + v("inf"), ExtValue::Infinite);
    }

    #[test]
    fn minima() {
        assert_eq!(v("3").minimum(&v("inf")), v("3"));
        assert_eq!(v("1/2").minimum(&v("1/3")), v("1/3"));
        assert_eq!(v("inf").minimum(&v("inf")), ExtValue::Infinite);
    }

    #[test]
    fn text_form() {
        assert_eq!(v("4/2").to_string(), "2");
        assert_eq!(v("6/4").to_string(), "3/2");
        assert_eq!(ExtValue::Infinite.to_string(), "inf");
        assert!("-1".parse::<ExtValue>().is_err());
        assert!("1/0".parse::<ExtValue>().is_err());
        assert!("1.5".parse::<ExtValue>().is_err());
        assert!("".parse::<ExtValue>().is_err());
        assert!("-1/2".parse::<ExtValue>().is_err());
    }

    #[test]
    fn subtraction_when_defined() {
        assert_eq!(v("1").checked_sub(&v("1/4")), Some(v("3/4")));
        assert_eq!(v("1/4").checked_sub(&v("1")), None);
        assert_eq!(v("inf").checked_sub(&v("7")), Some(ExtValue::Infinite));
        assert_eq!(v("inf").checked_sub(&v("inf")), None);
        assert_eq!(v("1/4").abs_diff(&v("1")), Some(v("3/4")));
    }

    fn arb_value() -> impl Strategy<Value = ExtValue> {
        prop_oneof![
            4 => (0u64..50, 1u64..12).prop_map(|(n, d)| ExtValue::ratio(n, d)),
            1 => Just(ExtValue::Infinite),
        ]
    }

    proptest! {
        #[test]
        fn ordered_commutative_monoid(a in arb_value(), b in arb_value(), c in arb_value()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!((&a + &b).saturating_sum(&c), a.saturating_sum(&(&b + &c)));
            prop_assert_eq!(&a + &ExtValue::zero(), a.clone());
            if a <= b {
                prop_assert!(&a + &c <= &b + &c);
            }
        }

        #[test]
        fn display_parse_roundtrip(a in arb_value()) {
            prop_assert_eq!(a.to_string().parse::<ExtValue>().unwrap(), a);
        }
    }
}
