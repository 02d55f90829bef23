//! Exact path lengths: sums of square roots of field elements.
//!
//! Segment lengths on a surface over Q(√d) are √(Δx²+Δy²) and generally
//! leave the field; a path length is a finite sum Σ cᵢ·√rᵢ with positive
//! rational cᵢ and radicands rᵢ ∈ Q(√d). Comparison first cancels terms
//! with identical canonical radicands, then decides the remaining sign by
//! interval refinement with escalating precision. Reported numeric bounds
//! in this crate are always field elements (L¹/L∞ envelopes); `Length` is
//! used for internal route selection and the geodesic certificate, where a
//! final exact angle check guards against mis-selection.

use crate::exact::{QuadNum, Rat};
use num::bigint::BigInt;
use num::integer::Roots;
use num::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Canonical radicand: `mult · (a + b√d)` with integer a, b of square-free
/// content, and a square-free integer multiplier. Rational radicands have
/// b = 0; the pure number 1 marks the rational part of a sum.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
struct Radicand {
    mult: BigInt,
    a: BigInt,
    b: BigInt,
    d: u64,
}

fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    // n = s²·f with f square-free; trial division with a cap, after which
    // any remaining factor is treated as square-free (harmless: canonical
    // forms merely distinguish less, refinement still decides).
    let mut f = BigInt::one();
    let mut s = BigInt::one();
    let mut m = n.clone();
    let mut p = BigInt::from(2u32);
    let cap = BigInt::from(100_000u32);
    while &p * &p <= m && p <= cap {
        let mut k = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            k += 1;
        }
        if k > 0 {
            s *= p.pow(k / 2);
            if k % 2 == 1 {
                f *= &p;
            }
        }
        p += 1u32;
    }
    // Remaining cofactor: try a perfect square.
    if !m.is_one() {
        let r = m.sqrt();
        if &r * &r == m {
            s *= r;
        } else {
            f *= m;
        }
    }
    (s, f)
}

impl Radicand {
    /// Canonicalizes √q for positive q, returning (rational factor, radicand).
    fn canonical(q: &QuadNum) -> (Rat, Radicand) {
        debug_assert!(q.is_positive());
        // Scale to integer pair: q = (A + B√d)/m  ⇒  √q = √(m·(A+B√d)) / m.
        let (ar, br) = (q.rat_part(), q.surd_part());
        let m = num::integer::lcm(ar.denom().clone(), br.denom().clone());
        let a = ar.numer() * (&m / ar.denom());
        let b = br.numer() * (&m / br.denom());
        // radicand0 = m·(a + b√d); extract the square part of the content.
        let content = num::integer::gcd(a.clone(), b.clone()) * &m;
        let (s, _f) = squarefree_split(&content);
        // radicand = (m·a/s², m·b/s²) — integral because s² | content·…
        // (s² divides content which divides both m·a and m·b).
        let s2 = &s * &s;
        let ra = &m * &a / &s2;
        let rb = &m * &b / &s2;
        let coeff = Rat::new(s, m);
        if rb.is_zero() {
            // Pure integer radicand: pull out its full square part too.
            let (s1, f1) = squarefree_split(&ra);
            (
                coeff * Rat::from(s1),
                Radicand { mult: BigInt::one(), a: f1, b: BigInt::zero(), d: 1 },
            )
        } else {
            (coeff, Radicand { mult: BigInt::one(), a: ra, b: rb, d: q.context() })
        }
    }

    fn is_one(&self) -> bool {
        self.b.is_zero() && self.a.is_one() && self.mult.is_one()
    }

    fn value(&self) -> QuadNum {
        let base = QuadNum::new(Rat::from(self.a.clone()), Rat::from(self.b.clone()), self.d)
            .expect("canonical radicand is well formed");
        base * QuadNum::from_rat(Rat::from(self.mult.clone()))
    }
}

/// A nonnegative sum of radicals Σ cᵢ√rᵢ.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Length {
    terms: BTreeMap<Radicand, Rat>,
}

impl Length {
    pub fn zero() -> Self {
        Length::default()
    }

    pub fn from_rat(r: Rat) -> Self {
        let mut l = Length::zero();
        if !r.is_zero() {
            l.terms.insert(
                Radicand { mult: BigInt::one(), a: BigInt::one(), b: BigInt::zero(), d: 1 },
                r,
            );
        }
        l
    }

    /// √q for a nonnegative field element q.
    pub fn sqrt_of(q: &QuadNum) -> Self {
        if q.is_zero() {
            return Length::zero();
        }
        let (c, r) = Radicand::canonical(q);
        let mut l = Length::zero();
        l.terms.insert(r, c);
        l
    }

    /// Euclidean length of the vector (dx, dy).
    pub fn euclid(dx: &QuadNum, dy: &QuadNum) -> Self {
        Length::sqrt_of(&(dx.square() + dy.square()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Length) -> Length {
        let mut out = self.clone();
        for (r, c) in &other.terms {
            let e = out.terms.entry(r.clone()).or_insert_with(Rat::zero);
            *e += c;
            if e.is_zero() {
                out.terms.remove(r);
            }
        }
        out
    }

    pub fn scale(&self, k: &Rat) -> Length {
        if k.is_zero() {
            return Length::zero();
        }
        Length { terms: self.terms.iter().map(|(r, c)| (r.clone(), c * k)).collect() }
    }

    /// Signed comparison of sums. Terms with equal canonical radicands cancel
    /// exactly; a remaining mixed-sign combination is separated by interval
    /// refinement up to a deep precision cap, at which point the sums are
    /// declared equal (see module docs for why this is safe here).
    pub fn cmp_len(&self, other: &Length) -> Ordering {
        let mut diff: BTreeMap<Radicand, Rat> = self.terms.clone();
        for (r, c) in &other.terms {
            let e = diff.entry(r.clone()).or_insert_with(Rat::zero);
            *e -= c;
            if e.is_zero() {
                diff.remove(r);
            }
        }
        if diff.is_empty() {
            return Ordering::Equal;
        }
        let mut sign = 0i32;
        let mut mixed = false;
        for c in diff.values() {
            let s = if c.is_negative() { -1 } else { 1 };
            if sign == 0 {
                sign = s;
            } else if sign != s {
                mixed = true;
                break;
            }
        }
        if !mixed {
            return if sign > 0 { Ordering::Greater } else { Ordering::Less };
        }
        for digits in [24u32, 48, 96, 192, 384, 768] {
            let mut lo = Rat::zero();
            let mut hi = Rat::zero();
            let scale = Rat::from(BigInt::from(10u32).pow(digits));
            for (r, c) in &diff {
                let v = r.value();
                let scaled = v * QuadNum::from_rat(&scale * &scale);
                let n = scaled.floor_int();
                let s = n.sqrt();
                let (rlo, rhi) = (Rat::new(s.clone(), scale.numer().clone()),
                                  Rat::new(s + 2, scale.numer().clone()));
                if c.is_negative() {
                    lo += c * &rhi;
                    hi += c * &rlo;
                } else {
                    lo += c * &rlo;
                    hi += c * &rhi;
                }
            }
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
        }
        Ordering::Equal
    }

    /// Floating approximation for reports.
    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(r, c)| {
                let rv = r.value().to_f64();
                let cv = {
                    use num::ToPrimitive;
                    c.to_f64().unwrap_or(f64::NAN)
                };
                cv * rv.sqrt()
            })
            .sum()
    }
}

impl fmt::Debug for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(r, c)| {
                if r.is_one() {
                    format!("{c}")
                } else {
                    format!("{c}·√({})", r.value())
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl PartialOrd for Length {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_len(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn q(x: i64) -> QuadNum {
        QuadNum::from_int(x)
    }

    #[test]
    fn perfect_squares_become_rational() {
        let l = Length::sqrt_of(&q(9));
        assert_eq!(l, Length::from_rat(rat(3, 1)));
        let l = Length::sqrt_of(&QuadNum::ratio(9, 4));
        assert_eq!(l, Length::from_rat(rat(3, 2)));
    }

    #[test]
    fn canonical_cancellation() {
        // √8 = 2√2, so √8 − 2√2 = 0 structurally.
        let a = Length::sqrt_of(&q(8));
        let b = Length::sqrt_of(&q(2)).scale(&rat(2, 1));
        assert_eq!(a.cmp_len(&b), Ordering::Equal);
    }

    #[test]
    fn refinement_separates_close_sums() {
        // √2 + √3 vs √5 + something tiny: 3.146… vs 3.146…? Use the classic
        // √2+√3 > √5 (squares: 5+2√6 > 5).
        let lhs = Length::sqrt_of(&q(2)).add(&Length::sqrt_of(&q(3)));
        let rhs = Length::sqrt_of(&q(5));
        assert_eq!(lhs.cmp_len(&rhs), Ordering::Greater);
        assert_eq!(rhs.cmp_len(&lhs), Ordering::Less);
    }

    #[test]
    fn field_radicands_compare() {
        // √(3+√5) = (√10+√2)/2 numerically ≈ 2.288/…; compare against √5.
        let phi_rad = QuadNum::new(rat(3, 1), rat(1, 1), 5).unwrap();
        let lhs = Length::sqrt_of(&phi_rad);
        let rhs = Length::sqrt_of(&q(5));
        assert_eq!(lhs.cmp_len(&rhs), Ordering::Greater); // 3+√5 ≈ 5.236 > 5
    }

    #[test]
    fn triangle_ineq_spot_check() {
        let leg = Length::euclid(&q(3), &q(4));
        assert_eq!(leg, Length::from_rat(rat(5, 1)));
        let hyp = Length::euclid(&q(1), &q(1));
        let two_sides = Length::from_rat(rat(2, 1));
        assert_eq!(hyp.cmp_len(&two_sides), Ordering::Less);
    }
}
