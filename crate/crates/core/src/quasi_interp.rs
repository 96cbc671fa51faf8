//! Even-order periodic B-spline quasi-interpolation on dyadic lattices.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::bspline::{cardinal_bspline, CardinalBSpline};
use crate::expansion::{Basis, LevelBlock, SparseExpansion};
use crate::faber::Recovery;
use crate::grids::{cumulative_level_sets, Coord, GridVariant, MultiIndex};
use crate::laurent::LaurentPoly;
use crate::math::{binomial, pow2_rational, ratio, to_f64};
use crate::sampling::SampleCache;
use crate::tensor::transform_axis;
use crate::{Error, Rational, Result};

/// A quasi-interpolation scheme: B-spline order `2r` and a symmetric weight
/// sequence `λ(−μ..=μ)`, with its derived symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct QIScheme {
    r: u32,
    lambda: Vec<Rational>,
    p_lambda: LaurentPoly,
    p_even: LaurentPoly,
    p_odd: LaurentPoly,
    p_even_star: LaurentPoly,
    p_odd_star: LaurentPoly,
}

impl QIScheme {
    /// Builds a scheme from the full sequence `λ(−μ), …, λ(μ)`.
    pub fn new(r: u32, lambda: &[Rational]) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameter("order parameter r must be positive".into()));
        }
        if lambda.len() % 2 == 0 {
            return Err(Error::AsymmetricLambda);
        }
        let mu = lambda.len() / 2;
        if (0..lambda.len()).any(|i| lambda[i] != lambda[lambda.len() - 1 - i]) {
            return Err(Error::AsymmetricLambda);
        }
        if mu + 1 < r as usize {
            return Err(Error::InvalidParameter(alloc::format!(
                "support half-width {mu} is below r − 1 = {}",
                r - 1
            )));
        }
        let half: Vec<Rational> = lambda[mu..].to_vec();
        let p_lambda = LaurentPoly::from_terms(
            lambda.iter().enumerate().map(|(i, c)| (r as i64 + i as i64 - mu as i64, c.clone())),
        );
        if p_lambda.sum_coefficients() != Rational::one() {
            return Err(Error::NotQuasiInterpolant("weights do not sum to 1".into()));
        }
        let squared = p_lambda.substitute_square();
        let two_r = 2 * r as i64;
        let norm = pow2_rational(1 - two_r);
        let even_tail = LaurentPoly::from_terms(
            (0..=r as i64).map(|j| (-2 * j, Rational::from_integer(BigInt::from(binomial(two_r, 2 * j))))),
        );
        let odd_tail = LaurentPoly::from_terms((0..r as i64).map(|j| {
            (-2 * j - 1, Rational::from_integer(BigInt::from(binomial(two_r, 2 * j + 1))))
        }));
        let p_even = &p_lambda - &(&squared * &even_tail).scale(&norm);
        let p_odd = &p_lambda - &(&squared * &odd_tail).scale(&norm);
        let d = LaurentPoly::d_power(2 * r);
        let star = |p: &LaurentPoly, which: &str| -> Result<LaurentPoly> {
            let (q, rem) = p.div_rem(&d)?;
            if rem.is_zero() {
                Ok(q)
            } else {
                Err(Error::NotQuasiInterpolant(alloc::format!(
                    "(z−1)^{} does not divide the {which} symbol",
                    2 * r
                )))
            }
        };
        let p_even_star = star(&p_even, "even")?;
        let p_odd_star = star(&p_odd, "odd")?;
        let mut full = half.iter().rev().cloned().collect::<Vec<_>>();
        full.extend(half.iter().skip(1).cloned());
        Ok(Self { r, lambda: full, p_lambda, p_even, p_odd, p_even_star, p_odd_star })
    }

    /// Builds a scheme from the symmetric half `λ(0), λ(1), …, λ(μ)`.
    pub fn from_half(r: u32, half: &[Rational]) -> Result<Self> {
        if half.is_empty() {
            return Err(Error::InvalidParameter("empty weight sequence".into()));
        }
        let mut full: Vec<Rational> = half.iter().rev().cloned().collect();
        full.extend(half.iter().skip(1).cloned());
        Self::new(r, &full)
    }

    /// Builds a scheme from its symbol `P_Λ(z) = z^r Σ λ(j) z^j`.
    pub fn from_symbol(r: u32, p_lambda: &LaurentPoly) -> Result<Self> {
        let (Some(lo), Some(hi)) = (p_lambda.min_exponent(), p_lambda.max_exponent()) else {
            return Err(Error::NotQuasiInterpolant("zero symbol".into()));
        };
        let mu = (r as i64 - lo).max(hi - r as i64).max(0);
        let lambda: Vec<Rational> =
            (-mu..=mu).map(|j| p_lambda.coefficient(r as i64 + j)).collect();
        Self::new(r, &lambda)
    }

    /// Piecewise linear interpolation, `λ(0) = 1`.
    pub fn linear() -> Self {
        Self::from_half(1, &[ratio(1, 1)]).expect("valid scheme")
    }

    /// Cubic scheme with `λ = (−1/6, 8/6, −1/6)`.
    pub fn cubic() -> Self {
        Self::from_half(2, &[ratio(8, 6), ratio(-1, 6)]).expect("valid scheme")
    }

    /// Quintic scheme with `P_Λ(z) = z³/14400 · [25150 − 5876(z + z⁻¹)
    /// + 448(z² + z⁻²) + 52(z³ + z⁻³) + (z⁴ + z⁻⁴)]`.
    pub fn quintic() -> Self {
        let half = [25150, -5876, 448, 52, 1].map(|n| ratio(n, 14400));
        Self::from_half(3, &half).expect("valid scheme")
    }

    /// Looks up `linear`, `cubic` or `quintic`.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "linear" => Some(Self::linear()),
            "cubic" => Some(Self::cubic()),
            "quintic" => Some(Self::quintic()),
            _ => None,
        }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn order(&self) -> u32 {
        2 * self.r
    }

    /// Half-width `μ` of the weight sequence.
    pub fn mu(&self) -> usize {
        self.lambda.len() / 2
    }

    /// `λ(j)`; zero outside `−μ..=μ`.
    pub fn lambda(&self, j: i64) -> Rational {
        let mu = self.mu() as i64;
        if j.abs() > mu {
            Rational::zero()
        } else {
            self.lambda[(j + mu) as usize].clone()
        }
    }

    /// `λ(0), …, λ(μ)`.
    pub fn lambda_half(&self) -> &[Rational] {
        &self.lambda[self.mu()..]
    }

    pub fn p_lambda(&self) -> &LaurentPoly {
        &self.p_lambda
    }

    pub fn p_even(&self) -> &LaurentPoly {
        &self.p_even
    }

    pub fn p_odd(&self) -> &LaurentPoly {
        &self.p_odd
    }

    pub fn p_even_star(&self) -> &LaurentPoly {
        &self.p_even_star
    }

    pub fn p_odd_star(&self) -> &LaurentPoly {
        &self.p_odd_star
    }

    pub fn basis(&self) -> Basis {
        Basis::BSpline { r: self.r }
    }

    /// Size `2r·2^k` of the sampling lattice at a level.
    pub fn lattice_size(&self, level: u32) -> usize {
        (2 * self.r as usize) << level
    }

    /// `‖Λ‖ = Σ |λ(j)|`.
    pub fn lambda_norm(&self) -> Rational {
        self.lambda.iter().fold(Rational::zero(), |a, c| a + c.abs())
    }

    /// `max(‖P*_even‖, ‖P*_odd‖)`.
    pub fn max_star_norm(&self) -> Rational {
        let e = self.p_even_star.l1_norm();
        let o = self.p_odd_star.l1_norm();
        if e > o {
            e
        } else {
            o
        }
    }

    /// Number of lattice samples one coefficient reads along a coordinate.
    pub fn stencil_size(&self, level: u32) -> usize {
        let span = |p: &LaurentPoly| (p.max_exponent().unwrap_or(0) - p.min_exponent().unwrap_or(0) + 1) as usize;
        if level == 0 {
            span(&self.p_lambda)
        } else {
            span(&self.p_even).max(span(&self.p_odd))
        }
    }

    /// Polynomials `p_t(x) = Σ_j λ(j) M_{2r}(x − t + r − j)` on `[0, 1)`,
    /// in ascending powers of `x`; only the nonzero ones are returned.
    fn lebesgue_pieces(&self) -> Vec<Vec<f64>> {
        let spline = CardinalBSpline::new(self.order());
        let r = self.r as i64;
        let mu = self.mu() as i64;
        let order = self.order() as i64;
        let mut out = Vec::new();
        for t in -(r + mu + 1)..=(r + mu + 1) {
            let mut acc = vec![Rational::zero(); self.order() as usize];
            for j in -mu..=mu {
                let piece = r - j - t;
                if (0..order).contains(&piece) {
                    let lam = self.lambda(j);
                    for (i, c) in spline.piece(piece as usize).iter().enumerate() {
                        acc[i] += c * &lam;
                    }
                }
            }
            if acc.iter().any(|c| !c.is_zero()) {
                out.push(acc.iter().map(to_f64).collect());
            }
        }
        out
    }

    /// The Lebesgue function `Σ_t |Σ_j λ(j) M_{2r}(x − t + r − j)|` of the
    /// unit-step operator, 1-periodic in `x`.
    pub fn lebesgue_function(&self, x: f64) -> f64 {
        let x = crate::math::wrap_unit(x);
        let r = self.r as i64;
        let mu = self.mu() as i64;
        let lam: Vec<f64> = self.lambda.iter().map(to_f64).collect();
        let mut total = 0.0;
        for t in -(r + mu + 1)..=(r + mu + 1) {
            let inner: f64 = (-mu..=mu)
                .map(|j| lam[(j + mu) as usize] * cardinal_bspline(self.order(), x - t as f64 + (r - j) as f64))
                .sum();
            total += libm::fabs(inner);
        }
        total
    }

    /// Certified maximization of the Lebesgue function.
    ///
    /// Branch and bound over subintervals of `[0, 1]`. On each interval every
    /// summand is a polynomial; summands of fixed sign are merged into one
    /// polynomial before bounding by a Taylor expansion at the midpoint.
    pub fn lebesgue_constant(&self, tolerance: f64) -> LebesgueBound {
        let pieces = self.lebesgue_pieces();
        let deg = self.order() as usize;
        let taylor = |p: &[f64], m: f64, out: &mut [f64]| {
            out.copy_from_slice(p);
            for i in 0..deg {
                for j in (i..deg - 1).rev() {
                    out[j] += m * out[j + 1];
                }
            }
        };
        let mut tay = vec![0.0; deg];
        let mut merged = vec![0.0; deg];
        let mut interval = |a: f64, b: f64| -> (f64, f64) {
            let m = 0.5 * (a + b);
            let h = 0.5 * (b - a);
            merged.iter_mut().for_each(|v| *v = 0.0);
            let mut loose = 0.0;
            let mut value = 0.0;
            for p in &pieces {
                taylor(p, m, &mut tay);
                value += libm::fabs(tay[0]);
                let mut rest = 0.0;
                let mut hp = 1.0;
                for c in &tay[1..] {
                    hp *= h;
                    rest += libm::fabs(*c) * hp;
                }
                if libm::fabs(tay[0]) >= rest {
                    let sign = if tay[0] >= 0.0 { 1.0 } else { -1.0 };
                    for (mv, c) in merged.iter_mut().zip(&tay) {
                        *mv += sign * c;
                    }
                } else {
                    loose += libm::fabs(tay[0]) + rest;
                }
            }
            let mut upper = merged[0] + loose;
            let mut hp = 1.0;
            for c in &merged[1..] {
                hp *= h;
                upper += libm::fabs(*c) * hp;
            }
            (value, upper * (1.0 + 8.0 * f64::EPSILON))
        };
        let mut best = 0.0f64;
        let mut certified = 0.0f64;
        let mut evaluations = 0;
        let mut stack: Vec<(f64, f64)> =
            (0..16).map(|i| (i as f64 / 16.0, (i + 1) as f64 / 16.0)).collect();
        while let Some((a, b)) = stack.pop() {
            let (value, upper) = interval(a, b);
            evaluations += 1;
            best = best.max(value);
            if upper <= best + tolerance || b - a < 1e-12 {
                certified = certified.max(upper);
                continue;
            }
            let m = 0.5 * (a + b);
            stack.push((a, m));
            stack.push((m, b));
        }
        LebesgueBound { value: best, upper: certified.max(best), evaluations }
    }

    /// The constants `(a, b)` of the error bounds at smoothness `α` and
    /// exponent `p ∈ [1, ∞]`.
    pub fn constants(&self, alpha: f64, p: f64) -> Result<SchemeConstants> {
        if !(alpha > 0.0 && alpha <= self.order() as f64) {
            return Err(Error::InvalidParameter(alloc::format!(
                "smoothness {alpha} outside (0, {}]",
                self.order()
            )));
        }
        if !(p >= 1.0) {
            return Err(Error::InvalidParameter(alloc::format!("exponent {p} below 1")));
        }
        let two_r = 2.0 * self.r as f64;
        let star = to_f64(&self.max_star_norm());
        let p_factor = if p.is_infinite() { 1.0 } else { libm::pow(self.r as f64 * (p + 1.0), -1.0 / p) };
        let a = libm::pow(two_r, -alpha) * p_factor * star;
        let a_cubature = libm::pow(two_r, -alpha - 1.0) * star;
        let leb = self.lebesgue_constant(1e-9);
        Ok(SchemeConstants {
            a,
            a_cubature,
            b: leb.value,
            b_upper: leb.upper,
            lambda_norm: to_f64(&self.lambda_norm()),
        })
    }
}

/// Result of the Lebesgue-constant maximization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LebesgueBound {
    /// Largest value found.
    pub value: f64,
    /// Certified upper bound on the supremum.
    pub upper: f64,
    pub evaluations: usize,
}

/// Constants entering the quasi-interpolation error bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeConstants {
    /// `(2r)^{−α} [r(p+1)]^{−1/p} max ‖P*‖`.
    pub a: f64,
    /// `(2r)^{−α−1} max ‖P*‖`, used by the cubature bound.
    pub a_cubature: f64,
    /// Maximum of the Lebesgue function found on the certified search.
    pub b: f64,
    /// Certified upper bound for `b`.
    pub b_upper: f64,
    /// `‖Λ‖`, a cruder upper bound for `b`.
    pub lambda_norm: f64,
}

fn apply_stencil(stencil: &[(i64, f64)], v: &[f64], s: usize) -> f64 {
    let n = v.len() as i64;
    stencil
        .iter()
        .map(|&(e, c)| c * v[(s as i64 + e).rem_euclid(n) as usize])
        .sum()
}

struct Stencils {
    lambda: Vec<(i64, f64)>,
    difference: Vec<(i64, f64)>,
    even_star: Vec<(i64, f64)>,
    odd_star: Vec<(i64, f64)>,
}

impl Stencils {
    fn new(scheme: &QIScheme) -> Self {
        Self {
            lambda: scheme.p_lambda.stencil(),
            difference: LaurentPoly::d_power(2 * scheme.r).stencil(),
            even_star: scheme.p_even_star.stencil(),
            odd_star: scheme.p_odd_star.stencil(),
        }
    }
}

fn lattice_dens(scheme: &QIScheme, level: &MultiIndex) -> Vec<u64> {
    level.levels().iter().map(|&l| scheme.lattice_size(l) as u64).collect()
}

fn operator_block<F: FnMut(&[f64]) -> f64>(
    cache: &mut SampleCache<F>,
    scheme: &QIScheme,
    st: &Stencils,
    level: &MultiIndex,
) -> LevelBlock {
    let dens = lattice_dens(scheme, level);
    let mut data = cache.gather_lattice(&dens);
    let mut shape: Vec<usize> = dens.iter().map(|&n| n as usize).collect();
    for axis in 0..shape.len() {
        let n = shape[axis];
        let (next, sh) = transform_axis(&data, &shape, axis, n, |v, c| {
            for s in 0..n {
                c[s] = apply_stencil(&st.lambda, v, s);
            }
        });
        data = next;
        shape = sh;
    }
    LevelBlock { level: level.clone(), coeffs: data }
}

fn component_block<F: FnMut(&[f64]) -> f64>(
    cache: &mut SampleCache<F>,
    scheme: &QIScheme,
    st: &Stencils,
    level: &MultiIndex,
) -> LevelBlock {
    let dens = lattice_dens(scheme, level);
    let mut data = cache.gather_lattice(&dens);
    let mut shape: Vec<usize> = dens.iter().map(|&n| n as usize).collect();
    let mut diff = Vec::new();
    for (axis, &l) in level.levels().iter().enumerate() {
        let n = shape[axis];
        let (next, sh) = transform_axis(&data, &shape, axis, n, |v, c| {
            if l == 0 {
                for s in 0..n {
                    c[s] = apply_stencil(&st.lambda, v, s);
                }
                return;
            }
            diff.clear();
            diff.extend((0..n).map(|i| apply_stencil(&st.difference, v, i)));
            for s in 0..n {
                let star = if s % 2 == 0 { &st.even_star } else { &st.odd_star };
                c[s] = apply_stencil(star, &diff, s);
            }
        });
        data = next;
        shape = sh;
    }
    LevelBlock { level: level.clone(), coeffs: data }
}

/// `Q_k(f) = Σ_s a_{k,s}(f) N_{k,s}` with `a_{k,s}(f) = T^{[P_Λ]}_h f(s h)`.
pub fn qi_operator<F: FnMut(&[f64]) -> f64>(scheme: &QIScheme, f: F, level: &MultiIndex) -> SparseExpansion {
    let mut cache = SampleCache::new(f, false);
    let st = Stencils::new(scheme);
    let mut out = SparseExpansion::new(level.dim(), scheme.basis());
    out.push_block(operator_block(&mut cache, scheme, &st, level)).expect("shape");
    out
}

/// The hierarchical component `q_k(f) = Σ_s c_{k,s}(f) N_{k,s}`.
///
/// Per coordinate, `c` applies `P_Λ` at level 0 and otherwise the `(2r)`-th
/// difference followed by `P*_even` or `P*_odd` according to the parity of
/// the shift.
pub fn component<F: FnMut(&[f64]) -> f64>(scheme: &QIScheme, f: F, level: &MultiIndex) -> SparseExpansion {
    let mut cache = SampleCache::new(f, false);
    let st = Stencils::new(scheme);
    let mut out = SparseExpansion::new(level.dim(), scheme.basis());
    out.push_block(component_block(&mut cache, scheme, &st, level)).expect("shape");
    out
}

/// Sum of the components over an arbitrary level set.
pub fn recover_levels<F: FnMut(&[f64]) -> f64>(
    scheme: &QIScheme,
    f: F,
    d: usize,
    levels: &[MultiIndex],
) -> Result<Recovery> {
    let mut cache = SampleCache::new(f, false);
    let st = Stencils::new(scheme);
    let mut expansion = SparseExpansion::new(d, scheme.basis());
    for k in levels {
        if k.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: k.dim() });
        }
        expansion.push_block(component_block(&mut cache, scheme, &st, k))?;
    }
    Ok(Recovery { expansion, sample_points: cache.into_points() })
}

/// Support-bounded quasi-interpolation recovery over `|k|₁ ≤ m`,
/// `|supp(k)| ≤ ν`.
pub fn recover_qi<F: FnMut(&[f64]) -> f64>(
    scheme: &QIScheme,
    f: F,
    d: usize,
    m: u32,
    nu: usize,
) -> Result<Recovery> {
    let variant = GridVariant::SupportBounded(nu);
    variant.validate(d)?;
    recover_levels(scheme, f, d, &cumulative_level_sets(d, m, variant))
}

/// Is `point` on the sampling lattice of `level` (coordinatewise multiples
/// of `1/(2r·2^{k_j})`)?
pub fn on_lattice(scheme: &QIScheme, level: &MultiIndex, point: &[Coord]) -> bool {
    point.iter().zip(level.levels()).all(|(c, &l)| {
        let n = scheme.lattice_size(l) as u64;
        n % c.denominator() == 0
    })
}

/// Converts the coefficient of `z^e` of a symbol to a rational with the
/// given denominator, for display.
pub fn scaled_coefficients(p: &LaurentPoly, denominator: i64) -> Vec<(i64, Rational)> {
    let den = Rational::from_integer(BigInt::from(denominator));
    p.terms().map(|(e, c)| (e, c * &den)).collect()
}
