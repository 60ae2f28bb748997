//! Exact rational coordinates.
//!
//! `Coord` keeps values that fit in `i64/i64` inline and falls back to an
//! arbitrary-precision `BigRational` otherwise. The representation is
//! canonical: a value that fits the small form is never stored as `Big`, so
//! structural hashing agrees with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone)]
enum Repr {
    /// numerator, denominator; denominator > 0, gcd == 1
    Small(i64, i64),
    Big(Arc<BigRational>),
}

#[derive(Clone)]
pub struct Coord(Repr);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseCoordError(pub String);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
        return gcd_u64(a as u64, b as u64) as u128;
    }
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

impl Coord {
    pub const ZERO: Coord = Coord(Repr::Small(0, 1));
    pub const ONE: Coord = Coord(Repr::Small(1, 1));

    pub fn from_int(v: i64) -> Coord {
        Coord(Repr::Small(v, 1))
    }

    /// Builds `num/den`, reducing to lowest terms. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Coord {
        assert!(den != 0, "zero denominator");
        Coord::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Coord {
        debug_assert!(den != 0);
        let (mut n, mut d) = if den < 0 { (-num, -den) } else { (num, den) };
        if d != 1 {
            let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
            if g > 1 {
                n /= g;
                d /= g;
            }
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Coord(Repr::Small(n, d)),
            _ => Coord(Repr::Big(Arc::new(BigRational::new_raw(
                BigInt::from(n),
                BigInt::from(d),
            )))),
        }
    }

    pub fn from_big(r: BigRational) -> Coord {
        // BigRational::new reduces; new_raw callers must pass reduced values.
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            return Coord(Repr::Small(n, d));
        }
        Coord(Repr::Big(Arc::new(r)))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    /// `(num, den)` when the value fits the inline representation.
    #[inline]
    pub fn as_small(&self) -> Option<(i64, i64)> {
        match self.0 {
            Repr::Small(n, d) => Some((n, d)),
            Repr::Big(_) => None,
        }
    }

    /// Integer value when the denominator is 1 and it fits in `i64`.
    #[inline]
    pub fn as_int(&self) -> Option<i64> {
        match self.0 {
            Repr::Small(n, 1) => Some(n),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(b) => {
                if b.is_positive() {
                    1
                } else if b.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn abs(&self) -> Coord {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Smallest integer `>= self`.
    pub fn ceil(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, d) => {
                let q = n.div_euclid(*d);
                BigInt::from(if n.rem_euclid(*d) != 0 { q + 1 } else { q })
            }
            Repr::Big(b) => b.ceil().to_integer(),
        }
    }

    pub fn from_bigint(v: BigInt) -> Coord {
        Coord::from_big(BigRational::from_integer(v))
    }

    pub fn denom_is_one(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.denom().is_one(),
        }
    }

    pub fn recip(&self) -> Coord {
        Coord::ONE / self.clone()
    }

    pub fn max_of<'a>(&'a self, other: &'a Coord) -> &'a Coord {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min_of<'a>(&'a self, other: &'a Coord) -> &'a Coord {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl Default for Coord {
    fn default() -> Self {
        Coord::ZERO
    }
}

impl From<i64> for Coord {
    fn from(v: i64) -> Self {
        Coord::from_int(v)
    }
}

impl From<i32> for Coord {
    fn from(v: i32) -> Self {
        Coord::from_int(v as i64)
    }
}

impl PartialEq for Coord {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(a), Repr::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Coord {}

impl Hash for Coord {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.hash(state);
            }
        }
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if b == d {
                    a.cmp(c)
                } else {
                    (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
                }
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<&Coord> for &Coord {
            type Output = Coord;
            #[inline]
            fn $method(self, rhs: &Coord) -> Coord {
                $imp(self, rhs)
            }
        }
        impl $tr<Coord> for Coord {
            type Output = Coord;
            #[inline]
            fn $method(self, rhs: Coord) -> Coord {
                $imp(&self, &rhs)
            }
        }
        impl $tr<&Coord> for Coord {
            type Output = Coord;
            #[inline]
            fn $method(self, rhs: &Coord) -> Coord {
                $imp(&self, rhs)
            }
        }
        impl $tr<Coord> for &Coord {
            type Output = Coord;
            #[inline]
            fn $method(self, rhs: Coord) -> Coord {
                $imp(self, &rhs)
            }
        }
    };
}

fn add_impl(a: &Coord, b: &Coord) -> Coord {
    if let (Repr::Small(an, ad), Repr::Small(bn, bd)) = (&a.0, &b.0) {
        if *ad == 1 && *bd == 1 {
            if let Some(s) = an.checked_add(*bn) {
                return Coord(Repr::Small(s, 1));
            }
        }
        let (an, ad, bn, bd) = (*an as i128, *ad as i128, *bn as i128, *bd as i128);
        if ad == bd {
            return Coord::from_i128(an + bn, ad);
        }
        return Coord::from_i128(an * bd + bn * ad, ad * bd);
    }
    Coord::from_big(a.to_big() + b.to_big())
}

fn sub_impl(a: &Coord, b: &Coord) -> Coord {
    if let (Repr::Small(an, ad), Repr::Small(bn, bd)) = (&a.0, &b.0) {
        if *ad == 1 && *bd == 1 {
            if let Some(s) = an.checked_sub(*bn) {
                return Coord(Repr::Small(s, 1));
            }
        }
        let (an, ad, bn, bd) = (*an as i128, *ad as i128, *bn as i128, *bd as i128);
        if ad == bd {
            return Coord::from_i128(an - bn, ad);
        }
        return Coord::from_i128(an * bd - bn * ad, ad * bd);
    }
    Coord::from_big(a.to_big() - b.to_big())
}

fn mul_impl(a: &Coord, b: &Coord) -> Coord {
    if let (Repr::Small(an, ad), Repr::Small(bn, bd)) = (&a.0, &b.0) {
        if *ad == 1 && *bd == 1 {
            if let Some(s) = an.checked_mul(*bn) {
                return Coord(Repr::Small(s, 1));
            }
        }
        return Coord::from_i128(*an as i128 * *bn as i128, *ad as i128 * *bd as i128);
    }
    Coord::from_big(a.to_big() * b.to_big())
}

fn div_impl(a: &Coord, b: &Coord) -> Coord {
    assert!(!b.is_zero(), "division by zero");
    if let (Repr::Small(an, ad), Repr::Small(bn, bd)) = (&a.0, &b.0) {
        return Coord::from_i128(*an as i128 * *bd as i128, *ad as i128 * *bn as i128);
    }
    Coord::from_big(a.to_big() / b.to_big())
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, div_impl);

impl Neg for &Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        match &self.0 {
            Repr::Small(n, d) => match n.checked_neg() {
                Some(n) => Coord(Repr::Small(n, *d)),
                None => Coord::from_big(-self.to_big()),
            },
            Repr::Big(b) => Coord::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        -&self
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) => {
                if b.denom().is_one() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Coord {
    type Err = ParseCoordError;

    /// Accepts `p`, `p/q`, and plain decimals such as `-1.25`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseCoordError(s.to_string());
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| err())?;
            let q: BigInt = q.trim().parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            return Ok(Coord::from_big(BigRational::new(p, q)));
        }
        if let Some((ip, fp)) = s.split_once('.') {
            if fp.is_empty() || !fp.bytes().all(|c| c.is_ascii_digit()) {
                return Err(err());
            }
            let neg = ip.starts_with('-');
            let ip_abs = ip.trim_start_matches(['-', '+']);
            let whole: BigInt = if ip_abs.is_empty() {
                BigInt::zero()
            } else {
                ip_abs.parse().map_err(|_| err())?
            };
            let frac: BigInt = fp.parse().map_err(|_| err())?;
            let scale = num_traits::pow(BigInt::from(10), fp.len());
            let mut num = whole * &scale + frac;
            if neg {
                num = -num;
            }
            return Ok(Coord::from_big(BigRational::new(num, scale)));
        }
        let v: BigInt = s.parse().map_err(|_| err())?;
        Ok(Coord::from_bigint(v))
    }
}

/// Exact sign of `sum_i coef_i * prod_j factor_ij` over small integers, or
/// `None` if an intermediate overflows `i128`.
#[inline]
pub(crate) fn checked_sign(terms: &[(i128, i128)]) -> Option<i32> {
    let mut acc: i128 = 0;
    for &(a, b) in terms {
        acc = acc.checked_add(a.checked_mul(b)?)?;
    }
    Some(acc.signum() as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_arith_reduces() {
        let a = Coord::new(1, 3);
        let b = Coord::new(1, 6);
        assert_eq!(&a + &b, Coord::new(1, 2));
        assert_eq!(Coord::new(2, -4), Coord::new(-1, 2));
        assert_eq!(&a * &Coord::from_int(3), Coord::ONE);
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Coord::from_int(i64::MAX);
        let sq = &big * &big;
        assert!(sq.as_small().is_none());
        assert_eq!(&sq / &big, big);
        assert!((&sq / &big).as_small().is_some());
    }

    #[test]
    fn ordering_mixed() {
        let big = &Coord::from_int(i64::MAX) * &Coord::from_int(4);
        assert!(Coord::from_int(i64::MAX) < big);
        assert!(Coord::new(-1, 3) < Coord::new(-1, 4));
    }

    #[test]
    fn ceil_negative() {
        assert_eq!(Coord::new(-3, 2).ceil(), BigInt::from(-1));
        assert_eq!(Coord::new(3, 2).ceil(), BigInt::from(2));
        assert_eq!(Coord::from_int(-4).ceil(), BigInt::from(-4));
    }

    #[test]
    fn parse_forms() {
        assert_eq!("3/6".parse::<Coord>().unwrap(), Coord::new(1, 2));
        assert_eq!("-2.25".parse::<Coord>().unwrap(), Coord::new(-9, 4));
        assert_eq!("7".parse::<Coord>().unwrap(), Coord::from_int(7));
        assert!("1/0".parse::<Coord>().is_err());
        assert_eq!(Coord::new(-9, 4).to_string(), "-9/4");
    }
}
