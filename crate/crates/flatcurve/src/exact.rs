//! Exact arithmetic over a fixed real quadratic extension Q(√d).
//!
//! All coordinates, lengths and transverse measures in this crate are values
//! `a + b√d` with arbitrary-precision rational `a`, `b` and a square-free
//! positive integer `d` shared per surface. Signs and comparisons are decided
//! by rational arithmetic and squaring; no floating point enters any decision
//! path. Decimal output exists for reporting only.

use num::bigint::{BigInt, Sign};
use num::integer::Integer;
use num::rational::BigRational;
use num::traits::Euclid;
use num::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

pub type Rat = BigRational;

/// Convenience constructor for small rationals.
pub fn rat(n: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumError {
    #[error("field context mismatch: √{0} vs √{1}")]
    ContextMismatch(u64, u64),
    #[error("{0} is not square-free")]
    NotSquareFree(u64),
    #[error("invalid quadratic literal `{0}`")]
    BadLiteral(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// Checks square-freeness by trial division. Surface field discriminants are
/// small (2, 3, 5, ...), so this never has to work hard.
pub fn is_square_free(d: u64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// An element `a + b√d` of the real quadratic field Q(√d).
///
/// Canonical form: if `b == 0` the context is dropped (`d == 1`), so pure
/// rationals combine with values from any context. Two values with distinct
/// irrational contexts must never meet in one computation; the arithmetic
/// operators treat that as a programming error, `try_cmp` reports it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadNum {
    a: Rat,
    b: Rat,
    d: u64,
}

impl QuadNum {
    pub fn new(a: Rat, b: Rat, d: u64) -> Result<Self, NumError> {
        if !is_square_free(d) && !(b.is_zero() && d == 0) {
            return Err(NumError::NotSquareFree(d));
        }
        Ok(Self::make(a, b, d.max(1)))
    }

    fn make(a: Rat, mut b: Rat, mut d: u64) -> Self {
        if d == 1 {
            // √1 = 1 folds into the rational part.
            return QuadNum { a: a + b, b: Rat::zero(), d: 1 };
        }
        if b.is_zero() {
            d = 1;
            b = Rat::zero();
        }
        QuadNum { a, b, d }
    }

    pub fn from_rat(a: Rat) -> Self {
        QuadNum { a, b: Rat::zero(), d: 1 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(Rat::from(BigInt::from(n)))
    }

    /// `n/den + 0√d`.
    pub fn ratio(n: i64, den: i64) -> Self {
        Self::from_rat(rat(n, den))
    }

    /// The square root of the context integer itself, `0 + 1√d`.
    pub fn sqrt_d(d: u64) -> Result<Self, NumError> {
        Self::new(Rat::zero(), Rat::one(), d)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn rat_part(&self) -> &Rat {
        &self.a
    }

    pub fn surd_part(&self) -> &Rat {
        &self.b
    }

    /// Context discriminant; 1 for pure rationals.
    pub fn context(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Rational value if `b == 0`.
    pub fn as_rat(&self) -> Option<&Rat> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    fn join_ctx(&self, other: &Self) -> Result<u64, NumError> {
        match (self.d, other.d) {
            (1, d) | (d, 1) => Ok(d),
            (x, y) if x == y => Ok(x),
            (x, y) => Err(NumError::ContextMismatch(x, y)),
        }
    }

    fn ctx_or_panic(&self, other: &Self) -> u64 {
        self.join_ctx(other)
            .expect("mixed quadratic field contexts in one computation")
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, NumError> {
        let d = self.join_ctx(other)?;
        Ok(Self::make(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, NumError> {
        let d = self.join_ctx(other)?;
        Ok(Self::make(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, NumError> {
        let d = self.join_ctx(other)?;
        let dd = Rat::from(BigInt::from(d));
        let a = &self.a * &other.a + &self.b * &other.b * &dd;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::make(a, b, d))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, NumError> {
        if other.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        let d = self.join_ctx(other)?;
        // 1/(a+b√d) = (a−b√d)/(a²−b²d); the norm is nonzero because √d is
        // irrational for square-free d > 1.
        let dd = Rat::from(BigInt::from(d));
        let norm = &other.a * &other.a - &other.b * &other.b * &dd;
        debug_assert!(!norm.is_zero());
        let a = (&self.a * &other.a - &self.b * &other.b * &dd) / &norm;
        let b = (&self.b * &other.a - &self.a * &other.b) / &norm;
        Ok(Self::make(a, b, d))
    }

    /// Exact sign: −1, 0 or +1.
    pub fn sign(&self) -> i32 {
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // Mixed signs: compare a² with b²d. Equality is impossible since √d
        // is irrational and b ≠ 0.
        let dd = Rat::from(BigInt::from(self.d));
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * dd;
        match lhs.cmp(&rhs) {
            Ordering::Equal => unreachable!("a² = b²d with b ≠ 0 and d square-free"),
            Ordering::Greater => sa,
            Ordering::Less => sb,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Sign of `self − other`, reporting context mismatches as errors.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering, NumError> {
        let diff = self.checked_sub(other)?;
        Ok(match diff.sign() {
            0 => Ordering::Equal,
            s if s < 0 => Ordering::Less,
            _ => Ordering::Greater,
        })
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn square(&self) -> Self {
        self.checked_mul(self).unwrap()
    }

    /// Largest integer ≤ self, computed exactly via an integer square root.
    pub fn floor_int(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        // Write self = (p + q·s)/r with integers p, q, r > 0 and s = √(n·d)
        // where n = |numer(b)·denom(a)| etc.; then bracket q·s by integer
        // square roots and fix up with one exact comparison.
        let r = Integer::lcm(self.a.denom(), self.b.denom());
        let p = self.a.numer() * (&r / self.a.denom());
        let q = self.b.numer() * (&r / self.b.denom());
        let rad = (&q * &q) * BigInt::from(self.d);
        let s = rad.sqrt(); // floor of |q|√d scaled
        let t = if q.sign() != Sign::Minus { s } else { -s - 1 };
        let mut n = (&p + &t).div_euclid(&r);
        // Interval ((p+t)/r, (p+t+1)/r) has width < 1; at most one step up.
        loop {
            let next: BigInt = &n + 1;
            let cand = Self::from_rat(Rat::from(next.clone()));
            if cand <= *self {
                n = next;
            } else {
                break;
            }
        }
        n
    }

    /// Decimal approximation, truncated toward zero, with `digits` places
    /// after the point. Reporting only; never used for decisions.
    pub fn approx(&self, digits: u32) -> String {
        assert!(digits >= 1, "digits must be ≥ 1");
        let neg = self.is_negative();
        let mag = self.abs();
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = mag * QuadNum::from_rat(Rat::from(scale.clone()));
        let n = scaled.floor_int();
        let (int_part, frac_part) = (&n / &scale, &n % &scale);
        let frac = format!("{:0>width$}", frac_part.to_string(), width = digits as usize);
        let sign = if neg && !n.is_zero() { "-" } else { "" };
        format!("{sign}{int_part}.{frac}")
    }

    /// f64 value for plots and log lines. Not exact; never used for decisions.
    pub fn to_f64(&self) -> f64 {
        let a = rat_to_f64(&self.a);
        let b = rat_to_f64(&self.b);
        a + b * (self.d as f64).sqrt()
    }

    /// Renders the textual literal, `a` or `a+b√d` / `a-b√d`.
    pub fn render(&self) -> String {
        if self.b.is_zero() {
            return render_rat(&self.a);
        }
        let sep = if self.b.is_negative() { "-" } else { "+" };
        format!("{}{}{}√{}", render_rat(&self.a), sep, render_rat(&self.b.abs()), self.d)
    }

    /// Parses the literal grammar `<rat>` | `<rat>+<rat>√<int>` |
    /// `<rat>-<rat>√<int>` with `<rat>` an optionally signed integer or
    /// fraction. Round-trips `render` bit-exactly.
    pub fn parse(s: &str) -> Result<Self, NumError> {
        let bad = || NumError::BadLiteral(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(bad());
        }
        match t.find('√') {
            None => Ok(Self::from_rat(parse_rat(t).ok_or_else(bad)?)),
            Some(pos) => {
                let head = &t[..pos];
                let d: u64 = t[pos + '√'.len_utf8()..].parse().map_err(|_| bad())?;
                // Split head as <rat><sign><rat>; the separator sign is the
                // last top-level +/− that is not a leading sign or exponent.
                let mut split = None;
                for (i, c) in head.char_indices().skip(1) {
                    if (c == '+' || c == '-') && !matches!(&head[i - 1..i], "/" | "+" | "-") {
                        split = Some(i);
                    }
                }
                let (a_str, b_str, neg) = match split {
                    Some(i) => (&head[..i], &head[i + 1..], &head[i..i + 1] == "-"),
                    None => ("0", head, false),
                };
                let a = parse_rat(a_str).ok_or_else(bad)?;
                let mut b = parse_rat(b_str).ok_or_else(bad)?;
                if neg {
                    b = -b;
                }
                Self::new(a, b, d)
            }
        }
    }
}

fn rat_sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_negative() {
        -1
    } else {
        1
    }
}

fn rat_to_f64(r: &Rat) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn render_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        None => Some(Rat::from(BigInt::from_str(s).ok()?)),
        Some((n, d)) => {
            let den = BigInt::from_str(d).ok()?;
            if den.is_zero() {
                return None;
            }
            Some(Rat::new(BigInt::from_str(n).ok()?, den))
        }
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl PartialOrd for QuadNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadNum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.try_cmp(other)
            .expect("mixed quadratic field contexts in one comparison")
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: &QuadNum) -> QuadNum {
                self.ctx_or_panic(rhs);
                self.$checked(rhs).unwrap()
            }
        }
        impl $trait for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: QuadNum) -> QuadNum {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: &QuadNum) -> QuadNum {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl AddAssign<&QuadNum> for QuadNum {
    fn add_assign(&mut self, rhs: &QuadNum) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&QuadNum> for QuadNum {
    fn sub_assign(&mut self, rhs: &QuadNum) {
        *self = &*self - rhs;
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum::make(-self.a, -self.b, self.d)
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -self.clone()
    }
}

impl Serialize for QuadNum {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for QuadNum {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        QuadNum::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: (i64, i64), b: (i64, i64), d: u64) -> QuadNum {
        QuadNum::new(rat(a.0, a.1), rat(b.0, b.1), d).unwrap()
    }

    #[test]
    fn compare_identity() {
        let x = q((1, 2), (3, 4), 5);
        assert_eq!(x.try_cmp(&x).unwrap(), Ordering::Equal);
    }

    #[test]
    fn compare_one_plus_sqrt5_vs_three() {
        // x−y = −2+√5; squaring oracle: 5 > 4, so the surd wins.
        let x = q((1, 1), (1, 1), 5);
        let y = QuadNum::from_int(3);
        assert_eq!(x.try_cmp(&y).unwrap(), Ordering::Greater);
    }

    #[test]
    fn compare_sqrt2_vs_three_halves() {
        // Cross-squaring: 2 < 9/4.
        let x = QuadNum::sqrt_d(2).unwrap();
        let y = QuadNum::ratio(3, 2);
        assert_eq!(x.try_cmp(&y).unwrap(), Ordering::Less);
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let x = QuadNum::sqrt_d(2).unwrap();
        let y = QuadNum::sqrt_d(5).unwrap();
        assert!(matches!(x.try_cmp(&y), Err(NumError::ContextMismatch(2, 5))));
        // Pure rationals are context-free.
        let r = QuadNum::ratio(7, 3);
        assert!(x.try_cmp(&r).is_ok());
    }

    #[test]
    fn approx_golden_ratio() {
        let phi = q((1, 2), (1, 2), 5);
        assert_eq!(phi.approx(5), "1.61803");
    }

    #[test]
    fn approx_zero_and_negative_surd() {
        assert_eq!(QuadNum::zero().approx(3), "0.000");
        let x = q((0, 1), (-1, 1), 2);
        assert_eq!(x.approx(4), "-1.4142");
    }

    #[test]
    fn square_free_check() {
        assert!(QuadNum::new(rat(0, 1), rat(1, 1), 12).is_err());
        assert!(QuadNum::new(rat(0, 1), rat(1, 1), 10).is_ok());
    }

    #[test]
    fn render_parse_examples() {
        for s in ["0", "-7", "3/4", "1/2+1/2√5", "0-1√2", "-5/3+7√13"] {
            let x = QuadNum::parse(s).unwrap();
            assert_eq!(QuadNum::parse(&x.render()).unwrap(), x);
        }
        assert_eq!(QuadNum::parse("1/2+1/2√5").unwrap().render(), "1/2+1/2√5");
        assert!(QuadNum::parse("1+√5").is_err()); // grammar requires <rat>√<int>
        assert!(QuadNum::parse("1/0").is_err());
    }

    #[test]
    fn floor_of_surds() {
        let phi = q((1, 2), (1, 2), 5);
        assert_eq!(phi.floor_int(), BigInt::from(1));
        let x = q((0, 1), (-1, 1), 2); // −√2
        assert_eq!(x.floor_int(), BigInt::from(-2));
        assert_eq!(QuadNum::ratio(-7, 2).floor_int(), BigInt::from(-4));
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-40i64..40, 1i64..12).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_quad(d: u64) -> impl Strategy<Value = QuadNum> {
        (arb_rat(), arb_rat()).prop_map(move |(a, b)| QuadNum::new(a, b, d).unwrap())
    }

    proptest! {
        #[test]
        fn field_axioms(x in arb_quad(5), y in arb_quad(5), z in arb_quad(5)) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            if !z.is_zero() {
                prop_assert_eq!((&x / &z) * &z, x.clone());
            }
        }

        #[test]
        fn order_total_and_consistent_with_approx(x in arb_quad(5), y in arb_quad(5)) {
            let ord = x.try_cmp(&y).unwrap();
            prop_assert_eq!(ord.reverse(), y.try_cmp(&x).unwrap());
            // approx at high precision must agree whenever it distinguishes.
            let (ax, ay) = (x.approx(25), y.approx(25));
            if ord == Ordering::Equal {
                prop_assert_eq!(ax, ay);
            }
        }

        #[test]
        fn literal_round_trip(x in arb_quad(7)) {
            prop_assert_eq!(QuadNum::parse(&x.render()).unwrap(), x);
        }

        #[test]
        fn floor_is_floor(x in arb_quad(3)) {
            let n = x.floor_int();
            let lo = QuadNum::from_rat(Rat::from(n.clone()));
            let hi = QuadNum::from_rat(Rat::from(n + 1));
            prop_assert!(lo <= x && x < hi);
        }
    }
}
