//! Cardinal B-splines, their periodized dyadic dilates and Faber hats.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::math::{to_f64, wrap_unit};
use crate::{Error, Rational, Result};

/// Largest supported B-spline order.
pub const MAX_ORDER: usize = 32;

/// `M_ℓ(x)`, the cardinal B-spline of order `ℓ` supported on `[0, ℓ]`.
///
/// Uses the Cox–de Boor recurrence on integer knots.
pub fn cardinal_bspline(order: u32, x: f64) -> f64 {
    let l = order as usize;
    assert!((1..=MAX_ORDER).contains(&l), "order must lie in 1..={MAX_ORDER}");
    if !(x > 0.0 && x < l as f64) {
        return 0.0;
    }
    let mut buf = [0.0f64; MAX_ORDER];
    let cell = libm::floor(x) as usize;
    cardinal_bspline_window(order, x - cell as f64, &mut buf[..l]);
    buf[cell]
}

/// Fills `out[q] = M_ℓ(frac + q)` for `q = 0..ℓ`, where `frac ∈ [0, 1)`.
///
/// These are the only integer translates of `M_ℓ` that may be nonzero in a
/// unit cell.
pub fn cardinal_bspline_window(order: u32, frac: f64, out: &mut [f64]) {
    let l = order as usize;
    assert!(out.len() >= l);
    out[0] = 1.0;
    for q in 1..l {
        out[q] = 0.0;
    }
    for ord in 2..=l {
        let inv = 1.0 / (ord - 1) as f64;
        for q in (0..ord).rev() {
            let x = frac + q as f64;
            let left = if q + 1 < ord { out[q] } else { 0.0 };
            let right = if q >= 1 { out[q - 1] } else { 0.0 };
            out[q] = (x * left + (ord as f64 - x) * right) * inv;
        }
    }
}

/// Exact piecewise-polynomial representation of `M_ℓ`.
///
/// Piece `i` is a polynomial in `t = x − i` valid on `[i, i+1]`; pieces are
/// built by repeated convolution with the indicator of `[0, 1)`.
#[derive(Clone, Debug)]
pub struct CardinalBSpline {
    order: u32,
    pieces: Vec<Vec<Rational>>,
    pieces_f64: Vec<Vec<f64>>,
}

impl CardinalBSpline {
    pub fn new(order: u32) -> Self {
        assert!(order >= 1);
        let one = Rational::from_integer(BigInt::from(1));
        let mut pieces: Vec<Vec<Rational>> = vec![vec![one.clone()]];
        for l in 2..=order as usize {
            let antideriv: Vec<Vec<Rational>> = pieces.iter().map(|p| integrate(p)).collect();
            let mut next = Vec::with_capacity(l);
            for i in 0..l {
                let mut poly = vec![Rational::zero(); l];
                if i < antideriv.len() {
                    add_into(&mut poly, &antideriv[i], &one);
                }
                if i >= 1 {
                    let prev = &antideriv[i - 1];
                    add_into(&mut poly, prev, &-one.clone());
                    poly[0] += prev.iter().fold(Rational::zero(), |a, c| a + c);
                }
                next.push(poly);
            }
            pieces = next;
        }
        let pieces_f64 = pieces.iter().map(|p| p.iter().map(to_f64).collect()).collect();
        Self { order, pieces, pieces_f64 }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficients (ascending powers of `t`) of the polynomial on `[i, i+1]`.
    pub fn piece(&self, i: usize) -> &[Rational] {
        &self.pieces[i]
    }

    /// Exact value at a rational point.
    pub fn eval_exact(&self, x: &Rational) -> Rational {
        let floor = x.floor();
        let Ok(i) = usize::try_from(floor.to_integer()) else {
            return Rational::zero();
        };
        if x <= &Rational::zero() || i >= self.order as usize {
            return Rational::zero();
        }
        let t = x - floor;
        self.pieces[i]
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * &t + c)
    }

    pub fn eval(&self, x: f64) -> f64 {
        if !(x > 0.0 && x < self.order as f64) {
            return 0.0;
        }
        let i = libm::floor(x) as usize;
        let t = x - i as f64;
        self.pieces_f64[i].iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    /// `∫ M_ℓ`, computed exactly from the pieces.
    pub fn integral(&self) -> Rational {
        self.pieces
            .iter()
            .map(|p| integrate(p).iter().fold(Rational::zero(), |a, c| a + c))
            .fold(Rational::zero(), |a, c| a + c)
    }
}

fn integrate(poly: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); poly.len() + 1];
    for (j, c) in poly.iter().enumerate() {
        out[j + 1] = c / Rational::from_integer(BigInt::from(j as i64 + 1));
    }
    out
}

fn add_into(acc: &mut [Rational], poly: &[Rational], factor: &Rational) {
    for (j, c) in poly.iter().enumerate() {
        acc[j] += c * factor;
    }
}

/// Number of shifts `|I(k)| = 2r·2^k` for periodic B-splines of order `2r`.
pub fn bspline_shift_count(r: u32, level: u32) -> usize {
    (2 * r as usize) << level
}

/// Number of shifts `|Z(k)|` of Faber hats at a level.
pub fn faber_shift_count(level: u32) -> usize {
    if level == 0 {
        1
    } else {
        1usize << (level - 1)
    }
}

/// `N_{k,s}(x)`: 1-periodization of `M_{2r}(2r·2^k·x − s)`.
pub fn periodic_bspline(r: u32, level: u32, shift: i64, x: f64) -> Result<f64> {
    let n = bspline_shift_count(r, level);
    if shift < 0 || shift as usize >= n {
        return Err(Error::ShiftOutOfRange { level, shift, limit: n as i64 });
    }
    let t = wrap_unit(x - shift as f64 / n as f64) * n as f64;
    Ok(cardinal_bspline(2 * r, t))
}

/// `φ_{k,s}(x)`: the constant 1 at level 0, otherwise the 1-periodization of
/// `M_2(2^k x − 2s)`, a hat of height 1 on `[2s·2^{−k}, (2s+2)·2^{−k}]`.
pub fn faber_hat(level: u32, shift: i64, x: f64) -> Result<f64> {
    let n = faber_shift_count(level);
    if shift < 0 || shift as usize >= n {
        return Err(Error::ShiftOutOfRange { level, shift, limit: n as i64 });
    }
    if level == 0 {
        return Ok(1.0);
    }
    let scale = libm::ldexp(1.0, level as i32);
    let t = wrap_unit(x - 2.0 * shift as f64 / scale) * scale;
    Ok(hat(t))
}

/// `M_2(t) = (1 − |t − 1|)_+`.
pub fn hat(t: f64) -> f64 {
    let v = 1.0 - libm::fabs(t - 1.0);
    if v > 0.0 {
        v
    } else {
        0.0
    }
}

/// Identifies one basis function: its order, dyadic level and shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SplineBasisId {
    pub order: u32,
    pub level: u32,
    pub shift: i64,
}

impl SplineBasisId {
    /// Checks the shift range (`Z(k)` for order 2 hats, `I(k)` otherwise).
    pub fn validate(&self, faber: bool) -> Result<()> {
        let limit = if faber {
            faber_shift_count(self.level)
        } else {
            bspline_shift_count(self.order / 2, self.level)
        };
        if self.shift < 0 || self.shift as usize >= limit {
            return Err(Error::ShiftOutOfRange {
                level: self.level,
                shift: self.shift,
                limit: limit as i64,
            });
        }
        Ok(())
    }

    pub fn eval(&self, faber: bool, x: f64) -> Result<f64> {
        if faber {
            faber_hat(self.level, self.shift, x)
        } else {
            periodic_bspline(self.order / 2, self.level, self.shift, x)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{binomial_f64, gauss_legendre, ratio};
    use proptest::prelude::*;

    fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64, cells: usize) -> f64 {
        let (x, w) = gauss_legendre(4);
        let h = (b - a) / cells as f64;
        let mut s = 0.0;
        for c in 0..cells {
            for (xi, wi) in x.iter().zip(&w) {
                s += wi * h * f(a + h * (c as f64 + xi));
            }
        }
        s
    }

    #[test]
    fn hat_values() {
        assert_eq!(cardinal_bspline(2, 1.0), 1.0);
        assert_eq!(cardinal_bspline(2, 0.5), 0.5);
        assert!((cardinal_bspline(4, 2.0) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn unit_integrals() {
        for l in [2u32, 4, 6] {
            let q = quad(|x| cardinal_bspline(l, x), 0.0, l as f64, 64 * l as usize);
            assert!((q - 1.0).abs() < 1e-10);
            assert_eq!(CardinalBSpline::new(l).integral(), ratio(1, 1));
        }
    }

    #[test]
    fn exact_pieces_match_recurrence() {
        for l in 1..=7u32 {
            let exact = CardinalBSpline::new(l);
            for i in 0..=(40 * l) {
                let x = i as f64 / 40.0;
                let a = exact.eval(x);
                let b = cardinal_bspline(l, x);
                assert!((a - b).abs() < 1e-13, "l={l} x={x}: {a} vs {b}");
            }
        }
        let m4 = CardinalBSpline::new(4);
        assert_eq!(m4.eval_exact(&ratio(2, 1)), ratio(2, 3));
        assert_eq!(m4.eval_exact(&ratio(1, 1)), ratio(1, 6));
        assert_eq!(m4.eval_exact(&ratio(4, 1)), ratio(0, 1));
    }

    #[test]
    fn periodic_examples() {
        assert_eq!(periodic_bspline(1, 0, 0, 0.25).unwrap(), 0.5);
        assert!(periodic_bspline(2, 1, 8, 0.1).is_err());
        for (r, k) in [(1u32, 0u32), (2, 1), (3, 2)] {
            let n = bspline_shift_count(r, k);
            let q = quad(|x| periodic_bspline(r, k, 3 % n as i64, x).unwrap(), 0.0, 1.0, 8 * n);
            assert!((q - 1.0 / n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn faber_examples() {
        assert_eq!(faber_hat(0, 0, 0.3).unwrap(), 1.0);
        assert_eq!(faber_hat(1, 0, 0.5).unwrap(), 1.0);
        assert_eq!(faber_hat(1, 0, 0.0).unwrap(), 0.0);
        assert_eq!(faber_hat(3, 1, 0.375).unwrap(), 1.0);
        assert_eq!(faber_hat(3, 1, 0.25).unwrap(), 0.0);
        assert_eq!(faber_hat(3, 3, 0.0).unwrap(), 0.0);
        assert_eq!(faber_hat(3, 3, 0.9375).unwrap(), 0.5);
        assert!(faber_hat(2, 2, 0.1).is_err());
        let q = quad(|x| faber_hat(1, 0, x).unwrap(), 0.0, 1.0, 64);
        assert!((q - 0.5).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn support_and_symmetry(l in 1u32..8, x in -2.0f64..10.0) {
            let v = cardinal_bspline(l, x);
            if x <= 0.0 || x >= l as f64 {
                prop_assert_eq!(v, 0.0);
            } else {
                prop_assert!(v > 0.0);
                prop_assert!((v - cardinal_bspline(l, l as f64 - x)).abs() < 1e-13);
            }
        }

        #[test]
        fn refinement(r in 1u32..4, x in 0.0f64..6.0) {
            let l = 2 * r;
            let lhs = cardinal_bspline(l, x);
            let rhs: f64 = (0..=l as i64)
                .map(|j| binomial_f64(l as i64, j) * cardinal_bspline(l, 2.0 * x - j as f64))
                .sum::<f64>()
                * libm::ldexp(1.0, -(l as i32) + 1);
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn periodicity(r in 1u32..4, k in 0u32..4, s in 0i64..100, x in 0.0f64..1.0) {
            let s = s % bspline_shift_count(r, k) as i64;
            let a = periodic_bspline(r, k, s, x).unwrap();
            let b = periodic_bspline(r, k, s, x + 1.0).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }

        #[test]
        fn faber_partition(k in 0u32..8, x in 0.0f64..1.0) {
            let total: f64 = (0..faber_shift_count(k) as i64)
                .map(|s| faber_hat(k, s, x).unwrap())
                .sum();
            prop_assert!((-1e-15..=1.0 + 1e-15).contains(&total));
        }

        #[test]
        fn bspline_partition_of_unity(r in 1u32..4, k in 0u32..4, x in 0.0f64..1.0) {
            let total: f64 = (0..bspline_shift_count(r, k) as i64)
                .map(|s| periodic_bspline(r, k, s, x).unwrap())
                .sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }
    }
}
