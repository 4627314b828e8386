//! Exact rational scalars. Every quantity in this crate is an exact
//! rational; no floating point appears anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Serialize in lowest terms with positive denominator: "p/q", or "p" when q = 1.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse "p" or "p/q"; the denominator must be nonzero.
pub fn rat_from_str(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::bad_input(format!("bad rational numerator {num:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::bad_input(format!("bad rational denominator {den:?}")))?;
    if d.is_zero() {
        return Err(Error::bad_input("zero denominator"));
    }
    let mut r = Rat::new(n, d);
    if r.denom().is_negative() {
        r = Rat::new(-r.numer().clone(), -r.denom().clone());
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_round_trip() {
        for (n, d, s) in [(4, 1, "4"), (1, 2, "1/2"), (-3, 4, "-3/4"), (0, 5, "0")] {
            let r = rat_frac(n, d);
            assert_eq!(rat_to_string(&r), s);
            assert_eq!(rat_from_str(s).unwrap(), r);
        }
    }

    #[test]
    fn parse_negative_denominator_normalizes() {
        assert_eq!(rat_from_str("3/-6").unwrap(), rat_frac(-1, 2));
    }

    #[test]
    fn parse_rejects_zero_denominator() {
        assert!(rat_from_str("1/0").is_err());
    }
}
