//! Univariate Laurent polynomials with exact rational coefficients and the
//! shift-operator calculus acting on 1-periodic functions.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::math::{binomial, to_f64, wrap_unit};
use crate::{Error, Rational, Result};

/// `P(z) = Σ c_e z^e` with finitely many nonzero rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is equality
/// of polynomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exponent: i64, coefficient: Rational) -> Self {
        let mut p = Self::zero();
        p.accumulate(exponent, coefficient);
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.accumulate(e, c);
        }
        p
    }

    /// Builds a polynomial from `(exponent, numerator, denominator)` triples.
    pub fn from_ratios(terms: &[(i64, i64, i64)]) -> Self {
        Self::from_terms(
            terms
                .iter()
                .map(|&(e, n, d)| (e, Rational::new(BigInt::from(n), BigInt::from(d)))),
        )
    }

    /// The difference symbol `(z − 1)^l`.
    pub fn d_power(l: u32) -> Self {
        Self::from_terms((0..=l as i64).map(|j| {
            let c = Rational::from_integer(BigInt::from(binomial(l as i64, j)));
            let sign = if (l as i64 - j) % 2 == 0 { c } else { -c };
            (j, sign)
        }))
    }

    fn accumulate(&mut self, exponent: i64, coefficient: Rational) {
        if coefficient.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponent).or_insert_with(Rational::zero);
        *entry += coefficient;
        if entry.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponent: i64) -> Rational {
        self.terms.get(&exponent).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * factor)).collect(),
        }
    }

    /// Multiplication by `z^offset`.
    pub fn shift(&self, offset: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + offset, c.clone())).collect(),
        }
    }

    /// `P(z²)`.
    pub fn substitute_square(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (2 * e, c.clone())).collect(),
        }
    }

    /// Division with remainder.
    ///
    /// Both operands are first normalized by their lowest monomial, ordinary
    /// long division is performed, and the shifts are restored. The result
    /// satisfies `self = divisor * quotient + remainder`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let (Some(b), Some(b_max)) = (divisor.min_exponent(), divisor.max_exponent()) else {
            return Err(Error::DivisionByZero);
        };
        let Some(a) = self.min_exponent() else {
            return Ok((Self::zero(), Self::zero()));
        };
        let a_max = self.max_exponent().unwrap_or(a);
        let mut rem: Vec<Rational> = (a..=a_max).map(|e| self.coefficient(e)).collect();
        let den: Vec<Rational> = (b..=b_max).map(|e| divisor.coefficient(e)).collect();
        let dn = den.len() - 1;
        let lead = den[dn].clone();
        let mut quot = vec![Rational::zero(); rem.len().saturating_sub(dn).max(1)];
        if rem.len() > dn {
            for i in (0..rem.len() - dn).rev() {
                let c = &rem[i + dn] / &lead;
                if c.is_zero() {
                    continue;
                }
                for (j, dj) in den.iter().enumerate() {
                    rem[i + j] -= &c * dj;
                }
                quot[i] = c;
            }
        }
        let quotient = Self::from_terms(
            quot.into_iter().enumerate().map(|(i, c)| (a - b + i as i64, c)),
        );
        let remainder =
            Self::from_terms(rem.into_iter().enumerate().map(|(i, c)| (a + i as i64, c)));
        Ok((quotient, remainder))
    }

    /// Exact quotient; fails when the remainder is nonzero.
    pub fn exact_quotient(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InvalidParameter(alloc::format!(
                "division leaves remainder {r}"
            )))
        }
    }

    /// `Σ |c_e|`.
    pub fn l1_norm(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c.abs())
    }

    /// `P(1)` computed exactly.
    pub fn sum_coefficients(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    /// Floating-point evaluation.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if x == 0.0 && self.min_exponent().is_some_and(|e| e < 0) {
            return Err(Error::ZeroArgument);
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| to_f64(c) * libm::pow(x, *e as f64))
            .sum())
    }

    /// Exact evaluation at a rational argument.
    pub fn eval_rational(&self, x: &Rational) -> Result<Rational> {
        if x.is_zero() && self.min_exponent().is_some_and(|e| e < 0) {
            return Err(Error::ZeroArgument);
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let pw = if *e >= 0 {
                num_traits::pow(x.clone(), *e as usize)
            } else {
                num_traits::pow(x.recip(), e.unsigned_abs() as usize)
            };
            acc += c * pw;
        }
        Ok(acc)
    }

    /// Twice the center of symmetry, if `c_e = c_{2c−e}` for all `e`.
    pub fn symmetry_center_doubled(&self) -> Option<i64> {
        let lo = self.min_exponent()?;
        let hi = self.max_exponent()?;
        let sum = lo + hi;
        self.terms
            .iter()
            .all(|(e, c)| self.terms.get(&(sum - e)) == Some(c))
            .then_some(sum)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_zero() || self.symmetry_center_doubled().is_some()
    }

    /// Coefficients as `(exponent, f64)` pairs.
    pub fn stencil(&self) -> Vec<(i64, f64)> {
        self.terms.iter().map(|(e, c)| (*e, to_f64(c))).collect()
    }

    /// `Σ c_e f(x + e·h)` with every argument reduced modulo 1.
    pub fn apply_shift_operator<F: FnMut(f64) -> f64>(&self, h: f64, mut f: F, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| to_f64(c) * f(wrap_unit(x + *e as f64 * h)))
            .sum()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match *e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{e}")?,
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.accumulate(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.accumulate(*e, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.accumulate(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::ratio;
    use proptest::prelude::*;

    fn p(terms: &[(i64, i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_ratios(terms)
    }

    #[test]
    fn addition_cancels() {
        let z = p(&[(1, 1, 1)]);
        assert!((&z + &(-&z)).is_zero());
        let a = p(&[(1, 1, 1), (0, 1, 1)]);
        let b = p(&[(-1, 1, 1)]);
        assert_eq!(&a + &b, p(&[(1, 1, 1), (0, 1, 1), (-1, 1, 1)]));
    }

    #[test]
    fn multiplication() {
        let zm1 = p(&[(1, 1, 1), (0, -1, 1)]);
        assert_eq!(&zm1 * &zm1, p(&[(2, 1, 1), (1, -2, 1), (0, 1, 1)]));
        assert_eq!(&zm1 * &zm1, LaurentPoly::d_power(2));
        let a = p(&[(1, 1, 1), (0, 2, 1), (-1, 1, 1)]);
        let b = p(&[(1, 1, 1), (-1, -1, 1)]);
        assert_eq!(&a * &b, p(&[(2, 1, 1), (1, 2, 1), (-1, -2, 1), (-2, -1, 1)]));
        assert_eq!(
            LaurentPoly::d_power(2).scale(&ratio(-1, 2)),
            p(&[(2, -1, 2), (1, 1, 1), (0, -1, 2)])
        );
    }

    #[test]
    fn squares() {
        assert_eq!(p(&[(1, 1, 1), (0, 1, 1)]).substitute_square(), p(&[(2, 1, 1), (0, 1, 1)]));
        assert_eq!(p(&[(1, 1, 1)]).substitute_square(), p(&[(2, 1, 1)]));
    }

    #[test]
    fn division() {
        let (q, r) = LaurentPoly::d_power(2).div_rem(&LaurentPoly::d_power(2)).unwrap();
        assert_eq!(q, LaurentPoly::one());
        assert!(r.is_zero());
        let (_, r) = p(&[(2, 1, 1), (0, 1, 1)]).div_rem(&LaurentPoly::d_power(1)).unwrap();
        assert!(!r.is_zero());
        assert_eq!(r, p(&[(0, 2, 1)]));
        assert_eq!(
            LaurentPoly::one().div_rem(&LaurentPoly::zero()),
            Err(Error::DivisionByZero)
        );
        let shifted = LaurentPoly::d_power(3).shift(-5);
        let q = shifted.exact_quotient(&LaurentPoly::d_power(1).shift(2)).unwrap();
        assert_eq!(q, LaurentPoly::d_power(2).shift(-7));
    }

    #[test]
    fn norms_and_evaluation() {
        assert_eq!(LaurentPoly::zero().l1_norm(), Rational::zero());
        let odd_star = p(&[(1, 1, 12), (0, 4, 12), (-1, 1, 12)]);
        assert_eq!(odd_star.l1_norm(), ratio(1, 2));
        assert_eq!(LaurentPoly::d_power(4).eval(1.0).unwrap(), 0.0);
        assert_eq!(p(&[(-1, 1, 1)]).eval(0.0), Err(Error::ZeroArgument));
        assert_eq!(p(&[(-2, 1, 1)]).eval(2.0).unwrap(), 0.25);
        assert_eq!(p(&[(-2, 3, 1), (1, 1, 1)]).eval_rational(&ratio(1, 2)).unwrap(), ratio(25, 2));
    }

    #[test]
    fn symmetry() {
        assert_eq!(p(&[(3, 1, 1), (1, 1, 1)]).symmetry_center_doubled(), Some(4));
        assert_eq!(p(&[(3, 1, 1), (1, 2, 1)]).symmetry_center_doubled(), None);
        assert!(LaurentPoly::zero().is_symmetric());
    }

    #[test]
    fn shift_operator() {
        let f = |x: f64| libm::sin(2.0 * core::f64::consts::PI * x);
        assert_eq!(LaurentPoly::one().apply_shift_operator(0.3, f, 0.2), f(0.2));
        let v = p(&[(1, 1, 1)]).apply_shift_operator(0.25, f, 0.0);
        assert!((v - 1.0).abs() < 1e-15);
        let g = |x: f64| x * x;
        let second = LaurentPoly::d_power(2).apply_shift_operator(0.125, g, 0.25);
        assert!((second - 2.0 * 0.125 * 0.125).abs() < 1e-15);
    }

    #[test]
    fn high_differences_annihilate_polynomials_exactly() {
        for r in 1..=3u32 {
            let d = LaurentPoly::d_power(2 * r);
            let h = ratio(1, 64);
            let x0 = ratio(3, 16);
            for j in 0..2 * r {
                let mut acc = Rational::zero();
                for (e, c) in d.terms() {
                    let x = &x0 + &h * Rational::from_integer(BigInt::from(e));
                    acc += c * num_traits::pow(x, j as usize);
                }
                assert!(acc.is_zero(), "r={r} j={j}");
            }
        }
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((-4i64..5, -20i64..21, 1i64..7), 0..6)
            .prop_map(|v| LaurentPoly::from_ratios(&v))
    }

    proptest! {
        #[test]
        fn division_round_trip(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b).unwrap();
            prop_assert_eq!(&(&b * &q) + &r, a.clone());
            if let (Some(lo), Some(hi)) = (r.min_exponent(), r.max_exponent()) {
                let span_b = b.max_exponent().unwrap() - b.min_exponent().unwrap();
                prop_assert!(hi - lo < span_b.max(1));
            }
        }

        #[test]
        fn norm_submultiplicative(a in arb_poly(), b in arb_poly()) {
            prop_assert!((&a * &b).l1_norm() <= a.l1_norm() * b.l1_norm());
        }

        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!(!(&a - &a).terms().any(|_| true));
        }
    }
}
