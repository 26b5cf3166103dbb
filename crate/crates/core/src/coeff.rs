//! Exact rational coefficients and their JSON form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Coeff = BigRational;

/// `num / den` as an exact rational.
pub fn rat(num: i64, den: i64) -> Coeff {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `(-1)^d / n * C(n-1, d)^{-1}`, the coefficient attached to a surjection of
/// arity `n` with `d` descents in the logarithm of the identity series.
pub fn descent_coefficient(n: usize, d: usize) -> Coeff {
    assert!(n >= 1 && d < n, "descent count {d} impossible for arity {n}");
    let denom = BigInt::from(n as u64) * binomial(n as u64 - 1, d as u64);
    let sign = if d.is_even() { 1 } else { -1 };
    BigRational::new(BigInt::from(sign), denom)
}

pub fn to_f64(c: &Coeff) -> f64 {
    // Ratio::to_f64 handles numerators and denominators beyond f64 range.
    c.to_f64().unwrap_or(f64::NAN)
}

/// Renders `c` as `p/q`, or `p` for integers.
pub fn format_coeff(c: &Coeff) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn parse_coeff(s: &str) -> Option<Coeff> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// `{ "num": "-1", "den": "6" }`: decimal strings, always in lowest terms with
/// a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub num: String,
    pub den: String,
}

impl From<&Coeff> for CoeffJson {
    fn from(c: &Coeff) -> Self {
        CoeffJson {
            num: c.numer().to_string(),
            den: c.denom().to_string(),
        }
    }
}

impl TryFrom<&CoeffJson> for Coeff {
    type Error = Error;

    fn try_from(j: &CoeffJson) -> Result<Self> {
        let num: BigInt = j
            .num
            .parse()
            .map_err(|_| Error::Format(format!("bad numerator {:?}", j.num)))?;
        let den: BigInt = j
            .den
            .parse()
            .map_err(|_| Error::Format(format!("bad denominator {:?}", j.den)))?;
        if den.is_zero() {
            return Err(Error::Format("zero denominator".into()));
        }
        let c = BigRational::new(num, den);
        if c.is_zero() {
            return Err(Error::Format("zero coefficients are never stored".into()));
        }
        Ok(c)
    }
}

pub(crate) fn is_negative(c: &Coeff) -> bool {
    c.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descent_coefficients_match_worked_values() {
        // f = (2,1,2): n = 3, one descent.
        assert_eq!(descent_coefficient(3, 1), rat(-1, 6));
        assert_eq!(descent_coefficient(3, 0), rat(1, 3));
        assert_eq!(descent_coefficient(3, 2), rat(1, 3));
        assert_eq!(descent_coefficient(2, 1), rat(-1, 2));
        assert_eq!(descent_coefficient(1, 0), int(1));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 3), BigInt::from(35));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
    }

    #[test]
    fn coeff_text_round_trip() {
        for c in [rat(-1, 6), int(3), rat(5, 12), int(-1)] {
            assert_eq!(parse_coeff(&format_coeff(&c)), Some(c));
        }
        assert_eq!(parse_coeff("1/0"), None);
    }

    #[test]
    fn coeff_json_rejects_zero_denominator() {
        let j = CoeffJson { num: "1".into(), den: "0".into() };
        assert!(Coeff::try_from(&j).is_err());
        let j = CoeffJson::from(&rat(2, -4));
        assert_eq!(j, CoeffJson { num: "-1".into(), den: "2".into() });
    }
}
