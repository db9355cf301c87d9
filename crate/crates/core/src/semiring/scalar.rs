use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::format::json_number;

/// Element of the max-plus semiring: a finite real or ε (minus infinity).
///
/// ε is stored as `f64::NEG_INFINITY`. Constructors reject NaN and `+∞`, so
/// `+∞` never appears and ⊗ can never form NaN.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaxPlus(f64);

impl MaxPlus {
    pub const EPSILON: MaxPlus = MaxPlus(f64::NEG_INFINITY);
    /// The ⊗-unit.
    pub const ZERO: MaxPlus = MaxPlus(0.0);

    /// Finite value. Panics on NaN or infinities; use [`MaxPlus::try_from_f64`] for untrusted data.
    pub fn finite(x: f64) -> Self {
        assert!(x.is_finite(), "MaxPlus::finite called with {x}");
        MaxPlus(x)
    }

    /// `-∞` maps to ε; NaN and `+∞` are rejected.
    pub fn try_from_f64(x: f64) -> Result<Self, &'static str> {
        if x.is_nan() {
            Err("NaN is not a max-plus value")
        } else if x == f64::INFINITY {
            Err("+inf is not a max-plus value")
        } else {
            Ok(MaxPlus(x))
        }
    }

    pub fn from_option(x: Option<f64>) -> Result<Self, &'static str> {
        match x {
            None => Ok(Self::EPSILON),
            Some(v) if v.is_finite() => Ok(MaxPlus(v)),
            Some(_) => Err("non-finite number where a finite weight was expected"),
        }
    }

    pub fn is_epsilon(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn is_finite(self) -> bool {
        !self.is_epsilon()
    }

    pub fn value(self) -> Option<f64> {
        if self.is_epsilon() {
            None
        } else {
            Some(self.0)
        }
    }

    /// Raw float, `-∞` for ε.
    pub fn to_f64(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn oplus(self, other: MaxPlus) -> MaxPlus {
        if self.0 >= other.0 {
            self
        } else {
            other
        }
    }

    #[inline]
    pub fn otimes(self, other: MaxPlus) -> MaxPlus {
        if self.is_epsilon() || other.is_epsilon() {
            MaxPlus::EPSILON
        } else {
            MaxPlus(self.0 + other.0)
        }
    }

    /// Entrywise infimum helper.
    #[inline]
    pub fn min(self, other: MaxPlus) -> MaxPlus {
        if self.0 <= other.0 {
            self
        } else {
            other
        }
    }

    /// ⊗-inverse of a finite value. ε has no inverse.
    pub fn inverse(self) -> Option<MaxPlus> {
        self.value().map(|v| MaxPlus(-v))
    }

    /// True when both are ε or both are finite and within `tol`.
    pub fn approx_eq(self, other: MaxPlus, tol: f64) -> bool {
        match (self.value(), other.value()) {
            (None, None) => true,
            (Some(a), Some(b)) => (a - b).abs() <= tol,
            _ => false,
        }
    }
}

impl Eq for MaxPlus {}

impl PartialOrd for MaxPlus {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MaxPlus {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl From<i32> for MaxPlus {
    fn from(x: i32) -> Self {
        MaxPlus(f64::from(x))
    }
}

impl fmt::Display for MaxPlus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            None => f.pad("ε"),
            Some(v) => f.pad(&crate::format::format_number(v)),
        }
    }
}

impl Serialize for MaxPlus {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.value() {
            None => serializer.serialize_none(),
            Some(v) => json_number(v).serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for MaxPlus {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Option::<f64>::deserialize(deserializer)?;
        MaxPlus::from_option(raw).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_is_neutral_for_oplus() {
        for x in [MaxPlus::EPSILON, MaxPlus::ZERO, MaxPlus::from(-7), MaxPlus::from(3)] {
            assert_eq!(MaxPlus::EPSILON.oplus(x), x);
            assert_eq!(x.oplus(MaxPlus::EPSILON), x);
        }
    }

    #[test]
    fn epsilon_absorbs_otimes() {
        for x in [MaxPlus::EPSILON, MaxPlus::ZERO, MaxPlus::from(-7), MaxPlus::from(3)] {
            assert!(MaxPlus::EPSILON.otimes(x).is_epsilon());
            assert!(x.otimes(MaxPlus::EPSILON).is_epsilon());
        }
    }

    #[test]
    fn finite_arithmetic() {
        let a = MaxPlus::from(-3);
        let b = MaxPlus::from(5);
        assert_eq!(a.oplus(b), b);
        assert_eq!(a.otimes(b), MaxPlus::from(2));
        assert_eq!(a.min(b), a);
        assert_eq!(b.inverse(), Some(MaxPlus::from(-5)));
        assert_eq!(MaxPlus::EPSILON.inverse(), None);
    }

    #[test]
    fn rejects_nan_and_positive_infinity() {
        assert!(MaxPlus::try_from_f64(f64::NAN).is_err());
        assert!(MaxPlus::try_from_f64(f64::INFINITY).is_err());
        assert!(MaxPlus::try_from_f64(f64::NEG_INFINITY).unwrap().is_epsilon());
        assert!(MaxPlus::from_option(Some(f64::NEG_INFINITY)).is_err());
    }

    #[test]
    fn ordering_puts_epsilon_first() {
        let mut v = vec![MaxPlus::from(1), MaxPlus::EPSILON, MaxPlus::from(-2)];
        v.sort();
        assert_eq!(v, vec![MaxPlus::EPSILON, MaxPlus::from(-2), MaxPlus::from(1)]);
    }

    #[test]
    fn json_round_trip() {
        let v = vec![MaxPlus::EPSILON, MaxPlus::from(-11), MaxPlus::finite(0.5)];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[null,-11,0.50000000000000000]");
        let back: Vec<MaxPlus> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
