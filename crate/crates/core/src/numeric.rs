//! Exact combinatorics and a small fixed-point real type.
//!
//! [`Real`] stores `value · 2^FRACTION_BITS` in a big integer. With 320
//! fraction bits (about 96 decimal digits) and series evaluated to full
//! width, `ln`, `exp` and `pow` are accurate to well beyond 50 significant
//! digits for the magnitudes used by the audits.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const FRACTION_BITS: u32 = 320;

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    c
}

/// `Σ_{i=0}^{k} C(n, i)`.
pub fn binomial_prefix_sum(n: u64, k: u64) -> BigUint {
    let mut c = BigUint::one();
    let mut sum = BigUint::zero();
    for i in 0..=k.min(n) {
        sum += &c;
        c = c * (n - i) / (i + 1);
    }
    sum
}

/// `⌊√x⌋` for non-negative integers.
pub fn isqrt(x: &BigUint) -> BigUint {
    x.sqrt()
}

/// Fixed-point real number with [`FRACTION_BITS`] binary fraction digits.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Real(BigInt);

impl Real {
    pub fn zero() -> Self {
        Real(BigInt::zero())
    }

    pub fn from_int<T: Into<BigInt>>(x: T) -> Self {
        Real(x.into() << FRACTION_BITS)
    }

    pub fn from_biguint(x: &BigUint) -> Self {
        Real(BigInt::from(x.clone()) << FRACTION_BITS)
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_int(numer) / Self::from_int(denom)
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Real((q.numer() << FRACTION_BITS) / q.denom())
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Real {
        Real(self.0.abs())
    }

    /// `⌊self⌋`.
    pub fn floor(&self) -> BigInt {
        self.0.div_floor(&(BigInt::one() << FRACTION_BITS))
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.0.bits();
        if bits > 900 {
            let shift = bits - 900;
            let top = (&self.0 >> shift).to_f64().unwrap_or(f64::NAN);
            return top * 2f64.powi(shift as i32 - FRACTION_BITS as i32);
        }
        self.0.to_f64().unwrap_or(f64::NAN) / 2f64.powi(FRACTION_BITS as i32)
    }

    /// `2 atanh(z) = ln((1+z)/(1-z))` for `|z| ≤ 1/3`.
    fn twice_atanh(z: &Real) -> Real {
        let z2 = z * z;
        let mut power = z.clone();
        let mut sum = Real::zero();
        let mut k = 1i64;
        while !power.0.is_zero() {
            sum = sum + Real(&power.0 / k);
            power = &power * &z2;
            k += 2;
        }
        Real(sum.0 << 1)
    }

    pub fn ln2() -> Real {
        static LN2: OnceLock<Real> = OnceLock::new();
        LN2.get_or_init(|| Self::twice_atanh(&Real::from_ratio(1, 3)))
            .clone()
    }

    /// Natural logarithm. Panics on non-positive input.
    pub fn ln(&self) -> Real {
        assert!(self.0.is_positive(), "logarithm of a non-positive value");
        // self = 2^e · y with y in [1, 2)
        let e = self.0.bits() as i64 - 1 - FRACTION_BITS as i64;
        let y = if e >= 0 {
            Real(&self.0 >> e as u64)
        } else {
            Real(&self.0 << (-e) as u64)
        };
        let one = Real::from_int(1);
        let z = (&y - &one) / (&y + &one);
        Self::twice_atanh(&z) + Real::ln2() * Real::from_int(e)
    }

    pub fn exp(&self) -> Real {
        let ln2 = Real::ln2();
        // self = k ln 2 + r with |r| ≤ ln 2 / 2
        let k = (self / &ln2 + Real::from_ratio(1, 2)).floor();
        let r = self - &(&ln2 * &Real::from_int(k.clone()));
        let mut term = Real::from_int(1);
        let mut sum = Real::zero();
        let mut i = 1i64;
        while !term.0.is_zero() {
            sum = sum + term.clone();
            term = Real((&term * &r).0 / i);
            i += 1;
        }
        let k = k.to_i64().expect("exponent out of range");
        if k >= 0 {
            Real(sum.0 << k as u64)
        } else {
            Real(sum.0 >> (-k) as u64)
        }
    }

    /// `self^exponent` for positive `self`.
    pub fn powf(&self, exponent: &Real) -> Real {
        (exponent * &self.ln()).exp()
    }

    pub fn e() -> Real {
        Real::from_int(1).exp()
    }

    pub fn sqrt(&self) -> Real {
        assert!(!self.0.is_negative(), "square root of a negative value");
        Real((&self.0 << FRACTION_BITS).sqrt())
    }

    /// Decimal rendering with `digits` significant digits, switching to
    /// scientific notation for very large or very small magnitudes.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".into();
        }
        let negative = self.0.is_negative();
        let mag = self.0.abs();
        let int_part = &mag >> FRACTION_BITS;
        let int_digits = if int_part.is_zero() {
            0
        } else {
            int_part.to_string().len()
        };
        let body = if int_digits > 30
            || (int_digits == 0 && self.abs() < Real::from_ratio(1, 1_000_000))
        {
            scientific(&mag, digits)
        } else {
            let frac_digits = digits.saturating_sub(int_digits).max(1);
            let scaled: BigInt =
                (&mag * BigInt::from(10u32).pow(frac_digits as u32)) >> FRACTION_BITS;
            let s = format!("{:0>width$}", scaled.to_string(), width = frac_digits + 1);
            let (i, f) = s.split_at(s.len() - frac_digits);
            let f = f.trim_end_matches('0');
            if f.is_empty() {
                i.to_string()
            } else {
                format!("{i}.{f}")
            }
        };
        if negative {
            format!("-{body}")
        } else {
            body
        }
    }
}

fn scientific(mag: &BigInt, digits: usize) -> String {
    // mag / 2^F = m · 10^exp with 1 ≤ m < 10
    let value = Real(mag.clone());
    let log10 = value.ln() / Real::from_int(10).ln();
    let mut exp = log10.floor();
    let ten = BigInt::from(10u32);
    // one guard digit, then round half up
    let scale_for = |exp: &BigInt| -> BigInt {
        let shift = digits as i64 - exp.to_i64().unwrap();
        let guarded = if shift >= 0 {
            (mag * ten.pow(shift as u32)) >> FRACTION_BITS
        } else {
            (mag >> FRACTION_BITS) / ten.pow((-shift) as u32)
        };
        (guarded + 5u32) / 10u32
    };
    let mut mantissa = scale_for(&exp);
    if mantissa.to_string().len() > digits {
        exp += 1;
        mantissa = scale_for(&exp);
    }
    let s = mantissa.to_string();
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    if tail.is_empty() {
        format!("{head}e{exp}")
    } else {
        format!("{head}.{tail}e{exp}")
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(30))
    }
}

impl Add for Real {
    type Output = Real;
    fn add(self, rhs: Real) -> Real {
        Real(self.0 + rhs.0)
    }
}

impl Sub for Real {
    type Output = Real;
    fn sub(self, rhs: Real) -> Real {
        Real(self.0 - rhs.0)
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Mul for Real {
    type Output = Real;
    fn mul(self, rhs: Real) -> Real {
        &self * &rhs
    }
}

impl Div for Real {
    type Output = Real;
    fn div(self, rhs: Real) -> Real {
        &self / &rhs
    }
}

impl<'a> Add<&'a Real> for &'a Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        Real(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a Real> for &'a Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        Real(&self.0 - &rhs.0)
    }
}

impl<'a> Mul<&'a Real> for &'a Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        Real((&self.0 * &rhs.0) >> FRACTION_BITS)
    }
}

impl<'a> Div<&'a Real> for &'a Real {
    type Output = Real;
    fn div(self, rhs: &Real) -> Real {
        assert!(!rhs.0.is_zero(), "division by zero");
        Real((&self.0 << FRACTION_BITS) / &rhs.0)
    }
}

/// Sign-aware comparison of an exact integer with a real.
pub fn cmp_int_real(x: &BigUint, r: &Real) -> Ordering {
    Real::from_biguint(x).cmp(r)
}

/// Exact rational `p/q` rendered as `"p/q"` (or `"p"` for integers).
pub fn rational_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational(numer: i64, denom: i64) -> BigRational {
    BigRational::new(numer.into(), denom.into())
}

pub fn ceil_rational(q: &BigRational) -> BigInt {
    q.ceil().to_integer()
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"-0.65"`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p.trim().parse().ok()?, q));
    }
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let numer: BigInt = format!("{int}{frac}").parse().unwrap_or_default();
    let q = BigRational::new(numer, BigInt::from(10u32).pow(frac.len() as u32));
    Some(if negative { -q } else { q })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Real, expected: &str, digits: usize) {
        let s = a.to_decimal(digits + 5);
        assert!(
            s.starts_with(&expected[..digits.min(expected.len())]),
            "{s} vs {expected}"
        );
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial_prefix_sum(10, 3), BigUint::from(176u32));
        assert_eq!(binomial_prefix_sum(5, 5), BigUint::from(32u32));
        assert_eq!(binomial_prefix_sum(5, 9), BigUint::from(32u32));
        assert_eq!(
            binomial(100, 50).to_string(),
            "100891344545564193334812497256"
        );
    }

    #[test]
    fn constants_to_fifty_digits() {
        close(
            &Real::e(),
            "2.71828182845904523536028747135266249775724709369995",
            50,
        );
        close(
            &Real::ln2(),
            "0.69314718055994530941723212145817656807550013436025",
            50,
        );
        close(
            &Real::from_int(10).ln(),
            "2.30258509299404568401799145468436420760110148862877",
            50,
        );
        close(
            &Real::from_int(10).sqrt(),
            "3.16227766016837933199889354443271853371955513932521",
            50,
        );
    }

    #[test]
    fn exp_ln_round_trip() {
        for x in [
            Real::from_ratio(1, 7),
            Real::from_int(25),
            Real::from_ratio(-9, 2),
        ] {
            let back = x.exp().ln();
            let err = (&back - &x).abs();
            assert!(err < Real::from_ratio(1, 1) / Real::from_int(BigInt::from(10u32).pow(60)));
        }
    }

    #[test]
    fn large_powers() {
        // 2^100 exactly representable
        let p = Real::from_int(2).powf(&Real::from_int(100));
        let exact = Real::from_biguint(&(BigUint::one() << 100));
        let err = (&p - &exact).abs();
        assert!(err < Real::from_ratio(1, 1_000_000_000));
        assert_eq!(p.to_decimal(10), "1.2676506e30");
        assert_eq!(p.to_decimal(12), "1.26765060023e30");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Real::from_int(176).to_decimal(20), "176");
        assert_eq!(Real::from_ratio(-3, 2).to_decimal(20), "-1.5");
        assert_eq!(Real::from_ratio(1, 3).to_decimal(5), "0.33333");
        assert!(Real::from_ratio(1, 10_000_000)
            .to_decimal(5)
            .ends_with("e-7"));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("0.65"), Some(rational(13, 20)));
        assert_eq!(parse_rational("-3/6"), Some(rational(-1, 2)));
        assert_eq!(parse_rational("7"), Some(rational(7, 1)));
        assert_eq!(parse_rational(".5"), Some(rational(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("1e3"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn floor_of_negative() {
        assert_eq!(Real::from_ratio(-3, 2).floor(), BigInt::from(-2));
        assert_eq!(Real::from_ratio(7, 2).floor(), BigInt::from(3));
    }
}
