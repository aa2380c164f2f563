use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::{ExactError, Rational};

/// Even-length sequence of strictly positive exact gaps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GapSequence {
    values: Vec<Rational>,
}

/// Integer image of a gap sequence: `values[i] = x_i * denominator`.
pub(crate) struct Scaled {
    pub values: Vec<BigInt>,
    pub denominator: BigInt,
}

impl GapSequence {
    pub fn new(values: Vec<Rational>) -> Result<Self, ExactError> {
        if values.is_empty() {
            return Err(ExactError::Empty);
        }
        if values.len() % 2 == 1 {
            return Err(ExactError::OddLength(values.len()));
        }
        if let Some(index) = values.iter().position(|v| !v.is_positive()) {
            return Err(ExactError::NonPositive { index });
        }
        Ok(GapSequence { values })
    }

    pub fn from_integers(values: &[i64]) -> Result<Self, ExactError> {
        Self::new(
            values
                .iter()
                .map(|&v| Rational::from_integer(v.into()))
                .collect(),
        )
    }

    /// Exact conversion of binary floating values.
    pub fn from_f64(values: &[f64]) -> Result<Self, ExactError> {
        let converted = values
            .iter()
            .enumerate()
            .map(|(index, &v)| Rational::from_float(v).ok_or(ExactError::NonPositive { index }))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(converted)
    }

    /// Comma-separated list of rationals, e.g. `"1/10,2/10,0.3,4e-1"`.
    pub fn parse(list: &str) -> Result<Self, ExactError> {
        let values = list
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(values)
    }

    /// The all-ones sequence of length `n`.
    pub fn ones(n: usize) -> Result<Self, ExactError> {
        Self::new(vec![Rational::one(); n])
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> Rational {
        self.values.iter().fold(Rational::zero(), |a, b| a + b)
    }

    pub fn mean(&self) -> Rational {
        self.sum() / Rational::from_integer(BigInt::from(self.len()))
    }

    pub fn scale(&self, c: &Rational) -> Result<Self, ExactError> {
        Self::new(self.values.iter().map(|v| v * c).collect())
    }

    /// `t*self + (1-t)*other`, for `0 < t < 1`.
    pub fn interpolate(&self, other: &Self, t: &Rational) -> Result<Self, ExactError> {
        let s = Rational::one() - t;
        Self::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * t + b * &s)
                .collect(),
        )
    }

    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.values
            .iter()
            .map(|v| v.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    pub(crate) fn scaled(&self) -> Scaled {
        let denominator = self
            .values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let values = self
            .values
            .iter()
            .map(|v| v.numer() * (&denominator / v.denom()))
            .collect();
        Scaled {
            values,
            denominator,
        }
    }
}

/// Parse `a/b`, an integer, or a decimal with optional exponent, exactly.
pub fn parse_rational(token: &str) -> Result<Rational, ExactError> {
    let err = || ExactError::Parse {
        token: token.to_string(),
    };
    let t = token.trim();
    if let Some((a, b)) = t.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| err())?;
        let b: BigInt = b.trim().parse().map_err(|_| err())?;
        if b.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(a, b));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let negative = int_part.starts_with('-');
    let int_digits = int_part.trim_start_matches(['+', '-']);
    if int_digits.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_digits
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let digits = format!("{int_digits}{frac_part}");
    let mut value = Rational::from_integer(digits.parse::<BigInt>().map_err(|_| err())?);
    let shift = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    value *= ten.pow(shift);
    Ok(if negative { -value } else { value })
}

/// Random gaps `a_i / q` with a shared denominator `q` in `[1000, 9999]` and
/// numerators uniform in `[1, 10^6]`. Exact ties are rare but possible.
pub fn random_gaps<R: Rng>(n: usize, rng: &mut R) -> GapSequence {
    let q: i64 = rng.random_range(1000..10_000);
    let values = (0..n)
        .map(|_| Rational::new(rng.random_range(1..=1_000_000i64).into(), q.into()))
        .collect();
    GapSequence::new(values).expect("positive even-length gaps")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(parse_rational("1/10").unwrap(), r(1, 10));
        assert_eq!(parse_rational("0.1").unwrap(), r(1, 10));
        assert_eq!(parse_rational(".25").unwrap(), r(1, 4));
        assert_eq!(parse_rational("3").unwrap(), r(3, 1));
        assert_eq!(parse_rational("4e-1").unwrap(), r(2, 5));
        assert_eq!(parse_rational("1.5E2").unwrap(), r(150, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn validation() {
        assert_eq!(GapSequence::parse(""), Err(ExactError::Empty));
        assert_eq!(GapSequence::parse("1,2,3"), Err(ExactError::OddLength(3)));
        assert_eq!(
            GapSequence::parse("1,0"),
            Err(ExactError::NonPositive { index: 1 })
        );
        assert!(GapSequence::from_f64(&[0.5, f64::NAN]).is_err());
    }

    #[test]
    fn scaling_uses_lcm() {
        let x = GapSequence::parse("1/10,1/4").unwrap();
        let s = x.scaled();
        assert_eq!(s.denominator, BigInt::from(20));
        assert_eq!(s.values, vec![BigInt::from(2), BigInt::from(5)]);
    }
}
