//! Dyadic rationals: integers scaled by a power of two.
//!
//! These are the endpoints of isolating intervals and the coordinate type of
//! the Newton iteration. All arithmetic except division is exact; rounding
//! happens only where explicitly requested.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A number of the form `mant * 2^exp` with `mant` odd (or zero).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        Dyadic::new(n.into(), 0)
    }

    /// `2^k`
    pub fn pow2(k: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: k,
        }
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << (self.exp as u64))
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << ((-self.exp) as u64))
        }
    }

    /// Rounds a rational to the nearest multiple of `2^-bits` (ties away from zero).
    pub fn from_rational_round(q: &BigRational, bits: i64) -> Self {
        let scaled = if bits >= 0 {
            q * BigRational::from_integer(BigInt::one() << (bits as u64))
        } else {
            q / BigRational::from_integer(BigInt::one() << ((-bits) as u64))
        };
        Dyadic::new(round_rational_to_int(&scaled), -bits)
    }

    /// Rounds self to the nearest multiple of `2^-bits`.
    pub fn round_to(&self, bits: i64) -> Self {
        if self.exp >= -bits {
            return self.clone();
        }
        let shift = (-bits - self.exp) as u64;
        let half = BigInt::one() << (shift - 1);
        let adj = if self.mant.is_negative() {
            &self.mant - half
        } else {
            &self.mant + half
        };
        Dyadic::new(adj >> shift, -bits)
    }

    /// floor(log2 |self|), None for zero.
    pub fn log2_abs(&self) -> Option<i64> {
        if self.mant.is_zero() {
            return None;
        }
        Some(self.exp + self.mant.bits() as i64 - 1)
    }

    /// True iff |self| < 2^-bits.
    pub fn abs_below_pow2(&self, bits: i64) -> bool {
        match self.log2_abs() {
            None => true,
            Some(l) => l < -bits,
        }
    }

    pub fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
        let e = a.exp.min(b.exp);
        let ma = &a.mant << ((a.exp - e) as u64);
        let mb = &b.mant << ((b.exp - e) as u64);
        Dyadic::new(ma + mb, e - 1)
    }
}

fn round_rational_to_int(q: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    let (num, den) = (q.numer(), q.denom());
    let doubled = num * &two + if num.is_negative() { -den } else { den.clone() };
    doubled / (den * &two)
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.signum(), other.signum()) {
            (a, b) if a < b => return Ordering::Less,
            (a, b) if a > b => return Ordering::Greater,
            (0, 0) => return Ordering::Equal,
            _ => {}
        }
        let e = self.exp.min(other.exp);
        let ma = &self.mant << ((self.exp - e) as u64);
        let mb = &other.mant << ((other.exp - e) as u64);
        ma.cmp(&mb)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let ma = &self.mant << ((self.exp - e) as u64);
        let mb = &rhs.mant << ((rhs.exp - e) as u64);
        Dyadic::new(ma + mb, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic {
            mant: &self.mant * &rhs.mant,
            exp: self.exp + rhs.exp,
        }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", rational_to_decimal(&self.to_rational(), 12))
    }
}

/// Renders an exact rational as a decimal string, rounding half-even at
/// `digits` fractional digits. Trailing zeros are kept so output width is
/// deterministic.
pub fn rational_to_decimal(q: &BigRational, digits: usize) -> String {
    let neg = q.is_negative();
    let aq = q.abs();
    let pow = BigInt::from(10u32).pow(digits as u32);
    let scaled = aq.numer() * &pow;
    let (quo, rem) = num_integer::Integer::div_rem(&scaled, aq.denom());
    let twice = &rem * BigInt::from(2);
    let round_up = match twice.cmp(aq.denom()) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => num_integer::Integer::is_odd(&quo),
    };
    let quo = if round_up { quo + BigInt::one() } else { quo };
    let s = quo.to_string();
    let s = if s.len() <= digits {
        format!("0.{}{}", "0".repeat(digits - s.len()), s)
    } else {
        let (int, frac) = s.split_at(s.len() - digits);
        if digits == 0 {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        }
    };
    if neg && s.chars().any(|c| c != '0' && c != '.') {
        format!("-{s}")
    } else {
        s
    }
}

/// Parses a decimal literal ("0.3588989435", "-2", "1.5e-3" is not supported)
/// into an exact rational together with the number of binary digits of
/// precision its fractional part carries.
pub fn parse_decimal(s: &str) -> Option<(BigRational, u32)> {
    let s = s.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s),
    };
    if body.is_empty() {
        return None;
    }
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits: String = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().ok()?;
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    let q = BigRational::new(num * BigInt::from(sign), den);
    // 10^k spans k*log2(10) ~ 3.32k bits.
    let bits = ((frac_part.len() as f64) * std::f64::consts::LOG2_10).floor() as u32;
    Some((q, bits))
}

/// Parses "p/q", an integer, or a decimal into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.trim().parse().ok()?;
        let den: BigInt = d.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    parse_decimal(s).map(|(q, _)| q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dy(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = dy(3, -2); // 3/4
        let b = dy(1, -1); // 1/2
        assert_eq!(&a + &b, dy(5, -2));
        assert_eq!(&a - &b, dy(1, -2));
        assert_eq!(&a * &b, dy(3, -3));
        assert_eq!((&a - &a), Dyadic::zero());
    }

    #[test]
    fn rounding_to_nearest() {
        let q = BigRational::new(BigInt::from(1), BigInt::from(3));
        let d = Dyadic::from_rational_round(&q, 8);
        // 1/3 ~ 85.33/256 -> 85/256
        assert_eq!(d, dy(85, -8));
        assert_eq!(dy(7, -3).round_to(1), dy(1, 0)); // 7/8 -> 1
    }

    #[test]
    fn ordering() {
        assert!(dy(1, -1) < dy(3, -2));
        assert!(dy(-1, 4) < dy(1, -10));
        assert_eq!(Dyadic::midpoint(&dy(0, 0), &dy(1, 0)), dy(1, -1));
    }

    #[test]
    fn decimal_roundtrip() {
        let (q, bits) = parse_decimal("0.3588989435").unwrap();
        assert_eq!(
            q,
            BigRational::new(BigInt::from(3588989435u64), BigInt::from(10_000_000_000u64))
        );
        assert_eq!(bits, 33);
        assert_eq!(rational_to_decimal(&q, 10), "0.3588989435");
        assert_eq!(rational_to_decimal(&BigRational::new(BigInt::from(1), BigInt::from(8)), 2), "0.12");
        assert_eq!(rational_to_decimal(&BigRational::new(BigInt::from(3), BigInt::from(8)), 2), "0.38");
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(
            parse_rational("1/2").unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
        assert_eq!(parse_rational("-3").unwrap(), BigRational::from_integer(BigInt::from(-3)));
        assert!(parse_rational("1/0").is_none());
    }
}
