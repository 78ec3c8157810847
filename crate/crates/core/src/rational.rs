//! Exact rational helpers shared by the modules.

use alloc::format;
use alloc::string::String;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// `numer / denom` in lowest terms; panics if `denom` is zero.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    assert!(denom != 0, "zero denominator");
    let (mut n, mut d) = (i128::from(numer), i128::from(denom));
    let g = n.gcd(&d);
    n /= g;
    d /= g;
    if d < 0 {
        n = -n;
        d = -d;
    }
    Rational::new_raw(BigInt::from(n), BigInt::from(d))
}

pub fn from_biguint_ratio(numer: &BigUint, denom: &BigUint) -> Rational {
    Rational::new(
        BigInt::from_biguint(Sign::Plus, numer.clone()),
        BigInt::from_biguint(Sign::Plus, denom.clone()),
    )
}

/// Parses `"a/b"`, an integer `"a"`, or a finite decimal such as `"0.6"`
/// (read exactly, so `"0.6"` is `3/5`).
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if frac.is_empty() && int_digits.is_empty() {
            return None;
        }
        if !int_digits.chars().all(|c| c.is_ascii_digit())
            || !frac.chars().all(|c| c.is_ascii_digit())
        {
            return None;
        }
        let digits = format!("{int_digits}{frac}");
        let mut numer: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().ok()?
        };
        if negative {
            numer = -numer;
        }
        let denom = num_traits::pow(BigInt::from(10u32), frac.len());
        return Some(Rational::new(numer, denom));
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Always `"a/b"`, including integers (`"1/1"`, `"0/1"`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `floor(r + 1/2)`.
pub fn round_half_up(r: &Rational) -> BigInt {
    let shifted = r + Rational::new(BigInt::one(), BigInt::from(2));
    shifted.numer().div_floor(shifted.denom())
}

pub fn is_probability(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

/// Picks an index from a probability vector using one uniform 64-bit draw.
///
/// Entry `j` is chosen iff `c_{j-1} <= u / 2^64 < c_j` for the cumulative sums
/// `c_j`; the comparison is exact. Entries with zero mass are never chosen.
/// Returns `None` only for an empty or all-zero vector.
pub fn pick_by_threshold<'a, I>(probs: I, u: u64) -> Option<usize>
where
    I: IntoIterator<Item = &'a Rational>,
{
    let mut cumulative = Rational::zero();
    let mut last_positive = None;
    for (j, p) in probs.into_iter().enumerate() {
        if !p.is_positive() {
            continue;
        }
        last_positive = Some(j);
        cumulative += p;
        if below_threshold(u, &cumulative) {
            return Some(j);
        }
    }
    last_positive
}

/// `u / 2^64 < c` for a nonnegative rational `c`.
pub fn below_threshold(u: u64, c: &Rational) -> bool {
    if let (Some(a), Some(b)) = (c.numer().to_u64(), c.denom().to_u64()) {
        return (u as u128) * (b as u128) < (a as u128) << 64;
    }
    let lhs = BigInt::from(u) * c.denom();
    let rhs = c.numer() << 64usize;
    lhs < rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_is_normalized() {
        assert_eq!(
            ratio(2, -4),
            Rational::new(BigInt::from(-1), BigInt::from(2))
        );
        assert_eq!(ratio(0, -5), Rational::zero());
        assert_eq!(ratio(i64::MIN, i64::MIN), Rational::one());
        assert_eq!(ratio(6, 4).denom(), &BigInt::from(2));
    }

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse_rational("1/3"), Some(ratio(1, 3)));
        assert_eq!(parse_rational("2/4"), Some(ratio(1, 2)));
        assert_eq!(parse_rational("0.6"), Some(ratio(3, 5)));
        assert_eq!(parse_rational(".25"), Some(ratio(1, 4)));
        assert_eq!(parse_rational("-1.5"), Some(ratio(-3, 2)));
        assert_eq!(parse_rational("7"), Some(ratio(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn formats_with_explicit_denominator() {
        assert_eq!(format_rational(&ratio(1, 1)), "1/1");
        assert_eq!(format_rational(&ratio(0, 5)), "0/1");
        assert_eq!(format_rational(&ratio(6, 4)), "3/2");
    }

    #[test]
    fn rounding() {
        assert_eq!(round_half_up(&ratio(5000, 3)), BigInt::from(1667));
        assert_eq!(round_half_up(&ratio(5, 2)), BigInt::from(3));
        assert_eq!(round_half_up(&ratio(7, 3)), BigInt::from(2));
    }

    #[test]
    fn threshold_boundaries() {
        let half = ratio(1, 2);
        let probs = [half.clone(), half];
        assert_eq!(pick_by_threshold(&probs, 0), Some(0));
        assert_eq!(pick_by_threshold(&probs, (1u64 << 63) - 1), Some(0));
        assert_eq!(pick_by_threshold(&probs, 1u64 << 63), Some(1));
        assert_eq!(pick_by_threshold(&probs, u64::MAX), Some(1));
        let skewed = [ratio(0, 1), ratio(1, 1), ratio(0, 1)];
        assert_eq!(pick_by_threshold(&skewed, u64::MAX), Some(1));
        assert_eq!(pick_by_threshold(&skewed, 0), Some(1));
    }

    #[test]
    fn big_threshold_path_agrees_with_fast_path() {
        let small = ratio(1, 3);
        let big = Rational::new_raw(BigInt::from(1u32) << 80usize, BigInt::from(3u32) << 80usize);
        for u in [0u64, 1 << 40, u64::MAX / 3, u64::MAX / 3 + 1, u64::MAX] {
            assert_eq!(below_threshold(u, &small), below_threshold(u, &big));
        }
        let odd = Rational::new(BigInt::one(), (BigInt::one() << 70usize) + 1);
        assert!(below_threshold(0, &odd));
        assert!(!below_threshold(1 << 10, &odd));
    }
}
