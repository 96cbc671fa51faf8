//! Fooling functions: nonnegative members of the unit ball that vanish on a
//! whole sparse grid, certifying lower bounds for any method that only sees
//! grid samples.
//!
//! The building block is the bump `g_{k,s}(x) = M₄(2^{k+2}x − 4s)`
//! (periodized), supported on `[2^{−k}s, 2^{−k}(s+1)]` with integral
//! `2^{−k−2}`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::bounds::{beta, f_closed, gamma_prime};
use crate::bspline::{cardinal_bspline, CardinalBSpline};
use crate::grids::Coord;
use crate::math::{binomial, binomial_f64, pow2, pow2_rational, wrap_unit};
use crate::{Error, Rational, Result};

/// `g_{k,s}(x)`, zero outside `[2^{−k}s, 2^{−k}(s+1)]` (mod 1).
pub fn bump(level: u32, shift: u64, x: f64) -> f64 {
    let y = wrap_unit(x) * pow2(level as f64 + 2.0) - 4.0 * shift as f64;
    cardinal_bspline(4, y)
}

/// `g_k(x) = Σ_s g_{k,s}(x)`; only the shift `⌊2^k x⌋` can be nonzero.
pub fn level_bump_sum(level: u32, x: f64) -> f64 {
    let y = wrap_unit(x) * pow2(level as f64);
    let s = libm::floor(y);
    cardinal_bspline(4, 4.0 * (y - s))
}

/// Exact `g_k` at a dyadic rational.
fn level_bump_sum_exact(spline: &CardinalBSpline, level: u32, x: &Coord) -> Rational {
    let y = x.to_rational() * pow2_rational(level as i64);
    let frac = &y - y.floor();
    spline.eval_exact(&(frac * Rational::from_integer(4.into())))
}

/// Which grid the fooling function is built for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessVariant {
    /// `f_{m,n}`, vanishing on the interior grid.
    Interior,
    /// `φ^{[ν]}_{m,n}` in the first `ν` variables, vanishing on `G^ν(m)`.
    SupportBounded(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessConfig {
    pub d: usize,
    pub m: u32,
    pub n: u32,
    pub alpha: f64,
    pub variant: WitnessVariant,
}

impl WitnessConfig {
    /// Truncation `n = m + 40`.
    pub fn new(d: usize, m: u32, alpha: f64, variant: WitnessVariant) -> Result<Self> {
        Self::with_n(d, m, m + 40, alpha, variant)
    }

    pub fn with_n(d: usize, m: u32, n: u32, alpha: f64, variant: WitnessVariant) -> Result<Self> {
        let c = Self { d, m, n, alpha, variant };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if !(self.n >= self.m && self.m >= 1) {
            return Err(Error::InvalidParameter(alloc::format!("need n ≥ m ≥ 1, got m={}, n={}", self.m, self.n)));
        }
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return Err(Error::InvalidParameter(alloc::format!("smoothness {} outside (0, 2]", self.alpha)));
        }
        if let WitnessVariant::SupportBounded(nu) = self.variant {
            if nu == 0 || nu > self.d {
                return Err(Error::InvalidParameter(alloc::format!("ν = {nu} outside 1..={}", self.d)));
            }
        }
        Ok(())
    }

    /// Number of variables the function depends on.
    pub fn active(&self) -> usize {
        match self.variant {
            WitnessVariant::Interior => self.d,
            WitnessVariant::SupportBounded(nu) => nu,
        }
    }
}

/// The fooling function of a configuration.
#[derive(Clone, Debug)]
pub struct FoolingFunction {
    config: WitnessConfig,
    spline: CardinalBSpline,
}

/// Coefficients `[t^0..=t^n]` of `Π_j P_j(t)`, truncated at degree `n`.
fn truncated_product(factors: &[Vec<f64>], n: usize) -> Vec<f64> {
    let mut acc = vec![0.0; n + 1];
    acc[0] = 1.0;
    for f in factors {
        let mut next = vec![0.0; n + 1];
        for (i, &a) in acc.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in f.iter().enumerate().take(n + 1 - i) {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    acc
}

impl FoolingFunction {
    pub fn new(config: WitnessConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { config, spline: CardinalBSpline::new(4) })
    }

    pub fn config(&self) -> &WitnessConfig {
        &self.config
    }

    /// Pointwise value, summing level by level through the generating
    /// polynomials `G_j(t) = Σ_k g_k(x_j) t^k`.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let c = &self.config;
        let n = c.n as usize;
        let active = c.active();
        let factors: Vec<Vec<f64>> = x[..active]
            .iter()
            .map(|&xj| {
                let mut g = vec![0.0; n + 1];
                for (k, gk) in g.iter_mut().enumerate().skip(1) {
                    *gk = level_bump_sum(k as u32, xj);
                }
                g
            })
            .collect();
        let weight = |l: usize| pow2(-c.alpha * l as f64);
        match c.variant {
            WitnessVariant::Interior => {
                let prod = truncated_product(&factors, n);
                let s: f64 = (c.m as usize..=n).map(|l| weight(l) * prod[l]).sum();
                pow2(-5.0 * active as f64) * s
            }
            WitnessVariant::SupportBounded(_) => {
                // Π_j (1 + 2^{−5} G_j(t)) − 1 collects every nonempty u ⊂ [ν].
                let scaled: Vec<Vec<f64>> = factors
                    .iter()
                    .map(|g| {
                        let mut h: Vec<f64> = g.iter().map(|v| v / 32.0).collect();
                        h[0] = 1.0;
                        h
                    })
                    .collect();
                let prod = truncated_product(&scaled, n);
                (c.m as usize..=n).map(|l| weight(l) * prod[l]).sum()
            }
        }
    }

    /// Exact check that every constituent bump product vanishes at `x`.
    ///
    /// Evaluates `Σ_{l=m}^n Σ_{|k|=l} Π_j g_{k_j}(x_j)` (over the same level
    /// sets as the function) in rational arithmetic, so `true` means the
    /// function is exactly zero there irrespective of rounding.
    pub fn vanishes_exactly(&self, x: &[Coord]) -> bool {
        let c = &self.config;
        let n = c.n as usize;
        let active = c.active();
        let polys: Vec<Vec<Rational>> = x[..active]
            .iter()
            .map(|xj| {
                let mut g = vec![Rational::zero(); n + 1];
                for (k, gk) in g.iter_mut().enumerate().skip(1) {
                    *gk = level_bump_sum_exact(&self.spline, k as u32, xj);
                }
                if matches!(c.variant, WitnessVariant::SupportBounded(_)) {
                    g[0] = Rational::from_integer(1.into());
                }
                g
            })
            .collect();
        let mut acc = vec![Rational::zero(); n + 1];
        acc[0] = Rational::from_integer(1.into());
        for p in &polys {
            let mut next = vec![Rational::zero(); n + 1];
            for i in 0..=n {
                if acc[i].is_zero() {
                    continue;
                }
                for j in 0..=n - i {
                    if !p[j].is_zero() {
                        next[i + j] += &acc[i] * &p[j];
                    }
                }
            }
            acc = next;
        }
        acc[c.m as usize..].iter().all(Zero::is_zero)
    }

    /// Closed-form `‖·‖₁` at the configured truncation.
    pub fn l1_norm(&self) -> f64 {
        let c = &self.config;
        let level_sum = |s: usize| -> f64 {
            (c.m..=c.n)
                .map(|l| pow2(-c.alpha * l as f64) * binomial_f64(l as i64 - 1, s as i64 - 1))
                .sum()
        };
        match c.variant {
            WitnessVariant::Interior => pow2(-7.0 * c.d as f64) * level_sum(c.d),
            WitnessVariant::SupportBounded(nu) => (1..=nu)
                .map(|s| binomial_f64(nu as i64, s as i64) * pow2(-7.0 * s as f64) * level_sum(s))
                .sum(),
        }
    }

    /// `‖·‖₁` as an exact rational, available for integer `α`.
    pub fn l1_norm_exact(&self) -> Option<Rational> {
        let c = &self.config;
        if c.alpha != libm::floor(c.alpha) {
            return None;
        }
        let a = c.alpha as i64;
        let level_sum = |s: usize| -> Rational {
            (c.m..=c.n).fold(Rational::zero(), |acc, l| {
                acc + pow2_rational(-a * l as i64)
                    * Rational::from_integer(binomial(l as i64 - 1, s as i64 - 1).into())
            })
        };
        Some(match c.variant {
            WitnessVariant::Interior => pow2_rational(-7 * c.d as i64) * level_sum(c.d),
            WitnessVariant::SupportBounded(nu) => (1..=nu).fold(Rational::zero(), |acc, s| {
                acc + Rational::from_integer(binomial(nu as i64, s as i64).into())
                    * pow2_rational(-7 * s as i64)
                    * level_sum(s)
            }),
        })
    }

    /// Upper bound on the `L₁` mass of the levels beyond `n`.
    pub fn tail_bound(&self) -> f64 {
        let c = &self.config;
        let t = pow2(-c.alpha);
        let tail = |s: usize| pow2(-c.alpha * (c.n as f64 + 1.0)) * f_closed(c.n, s as u32 - 1, t).unwrap_or(f64::INFINITY);
        match c.variant {
            WitnessVariant::Interior => pow2(-7.0 * c.d as f64) * tail(c.d),
            WitnessVariant::SupportBounded(nu) => (1..=nu)
                .map(|s| binomial_f64(nu as i64, s as i64) * pow2(-7.0 * s as f64) * tail(s))
                .sum(),
        }
    }

    /// `lim_{n→∞} ‖·‖₁`, via `Σ_{l≥m} 2^{−αl} C(l−1, s−1) = 2^{−αm} F(m−1, s−1, 2^{−α})`.
    pub fn l1_norm_limit(&self) -> f64 {
        let c = &self.config;
        let t = pow2(-c.alpha);
        let full = |s: usize| pow2(-c.alpha * c.m as f64) * f_closed(c.m - 1, s as u32 - 1, t).unwrap_or(f64::NAN);
        match c.variant {
            WitnessVariant::Interior => pow2(-7.0 * c.d as f64) * full(c.d),
            WitnessVariant::SupportBounded(nu) => (1..=nu)
                .map(|s| binomial_f64(nu as i64, s as i64) * pow2(-7.0 * s as f64) * full(s))
                .sum(),
        }
    }

    /// The exact integral equals the `L₁` norm (the function is nonnegative).
    pub fn integral(&self) -> f64 {
        self.l1_norm()
    }
}

/// Outcome of a randomized mixed-difference check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolderReport {
    pub trials: usize,
    /// Trials with `|Δ| ≤ Π|h_j|^α + 1e−9`.
    pub passed: usize,
    /// Trials with `Π|h_j|^α ≥ 1e−12` and `|Δ| > Π|h_j|^α (1 + 1e−9)`.
    /// The absolute slack of `passed` hides violations at small `h`.
    pub relative_failures: usize,
    /// Largest `|Δ^{2,u}_h f(x)| / Π_{j∈u} |h_j|^α` over trials with
    /// `Π|h_j|^α ≥ 1e−12` (smaller bounds are dominated by rounding).
    pub worst_ratio: f64,
}

impl HolderReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }

    pub fn pass_rate(&self) -> f64 {
        if self.trials == 0 {
            1.0
        } else {
            self.passed as f64 / self.trials as f64
        }
    }
}

/// `Δ^{2,u}_h f(x)`: second differences `f(x) − 2f(x+h) + f(x+2h)` in every
/// direction of `u`.
pub fn mixed_second_difference<F: FnMut(&[f64]) -> f64>(f: &mut F, x: &[f64], u: &[usize], h: &[f64]) -> f64 {
    let q = u.len();
    let mut y = x.to_vec();
    let mut total = 0.0;
    for code in 0..3usize.pow(q as u32) {
        let mut c = code;
        let mut w = 1.0;
        for (i, &j) in u.iter().enumerate() {
            let e = c % 3;
            c /= 3;
            w *= [1.0, -2.0, 1.0][e];
            y[j] = x[j] + e as f64 * h[i];
        }
        total += w * f(&y);
    }
    total
}

/// Checks `|Δ^{2,u}_h f(x)| ≤ Π_{j∈u} |h_j|^α + 1e−9` at random `x`,
/// nonempty `u` and log-uniform `h_j ∈ [2^{−max_log2}, 1/2]`.
///
/// `uniform` must return independent samples from `[0, 1)`.
pub fn holder_spotcheck<F, R>(mut f: F, d: usize, alpha: f64, trials: usize, max_log2: f64, mut uniform: R) -> HolderReport
where
    F: FnMut(&[f64]) -> f64,
    R: FnMut() -> f64,
{
    let mut passed = 0;
    let mut relative_failures = 0;
    let mut worst = 0.0f64;
    let mut x = vec![0.0; d];
    for _ in 0..trials {
        for v in x.iter_mut() {
            *v = uniform();
        }
        let mask = loop {
            let m = (uniform() * (1u64 << d) as f64) as u64 & ((1u64 << d) - 1);
            if m != 0 {
                break m;
            }
        };
        let u: Vec<usize> = (0..d).filter(|j| mask >> j & 1 == 1).collect();
        let h: Vec<f64> = u.iter().map(|_| pow2(-1.0 - uniform() * (max_log2 - 1.0))).collect();
        let diff = libm::fabs(mixed_second_difference(&mut f, &x, &u, &h));
        let bound: f64 = h.iter().map(|&hj| libm::pow(hj, alpha)).product();
        if bound >= 1e-12 {
            worst = worst.max(diff / bound);
            if diff > bound * (1.0 + 1e-9) {
                relative_failures += 1;
            }
        }
        if diff <= bound + 1e-9 {
            passed += 1;
        }
    }
    HolderReport { trials, passed, relative_failures, worst_ratio: worst }
}

/// Comparison of a witness norm with the theorem's lower bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LowerBoundDemo {
    /// `‖witness‖₁` at the configured `n` (a lower bound for its `‖·‖_p`).
    pub witness_l1: f64,
    /// `lim_{n→∞} ‖witness‖₁`.
    pub witness_l1_limit: f64,
    /// Mass of the omitted levels `l > n`.
    pub tail_bound: f64,
    /// The theorem's refined lower bound.
    pub theorem_lower: f64,
    /// The theorem value recomputed as a witness norm limit over levels
    /// `l ≥ m+1` (the form used in the proof).
    pub theorem_as_limit: f64,
}

impl LowerBoundDemo {
    /// Does the witness certify the theorem value?
    pub fn certifies(&self) -> bool {
        self.witness_l1_limit >= self.theorem_lower * (1.0 - 1e-12)
    }
}

/// Computes the witness norms next to the theorem lower bound for `p ≥ 1`.
pub fn lower_bound_demonstration(config: &WitnessConfig, p: f64) -> Result<LowerBoundDemo> {
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(alloc::format!("p = {p} below 1")));
    }
    let f = FoolingFunction::new(*config)?;
    let c = config;
    let t = pow2(-c.alpha);
    let decay = pow2(-c.alpha * c.m as f64);
    let shifted = |s: usize| pow2(-c.alpha * (c.m as f64 + 1.0)) * f_closed(c.m, s as u32 - 1, t).unwrap_or(f64::NAN);
    let (theorem_lower, theorem_as_limit) = match c.variant {
        WitnessVariant::Interior => {
            let nf = c.d as f64;
            (pow2(-7.0 * nf) * beta(c.alpha, c.d as u32, c.m) * decay, pow2(-7.0 * nf) * shifted(c.d))
        }
        WitnessVariant::SupportBounded(nu) => {
            let limit = 1.0 * decay
                + (1..=nu)
                    .map(|s| binomial_f64(nu as i64, s as i64) * pow2(-7.0 * s as f64) * shifted(s))
                    .sum::<f64>();
            (gamma_prime(c.alpha, nu as u32, c.m) * decay, limit)
        }
    };
    Ok(LowerBoundDemo {
        witness_l1: f.l1_norm(),
        witness_l1_limit: f.l1_norm_limit(),
        tail_bound: f.tail_bound(),
        theorem_lower,
        theorem_as_limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::{enumerate_grid, GridVariant};
    use crate::math::{gauss_legendre, ratio};
    use crate::norms::TensorRule;

    struct Lcg(u64);
    impl Lcg {
        fn next(&mut self) -> f64 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (self.0 >> 11) as f64 / (1u64 << 53) as f64
        }
    }

    #[test]
    fn bump_shape() {
        for k in 0..6u32 {
            for s in 0..(1u64 << k) {
                let h = pow2(-(k as f64));
                assert_eq!(bump(k, s, s as f64 * h), 0.0);
                assert_eq!(bump(k, s, (s as f64 + 0.5) * h), 2.0 / 3.0);
                assert_eq!(bump(k, s, (s as f64 + 1.0) * h), 0.0);
                // Outside the support.
                let outside = bump(k, s, wrap_unit((s as f64 + 1.3) * h));
                if k == 0 {
                    assert!((outside - bump(0, 0, 0.3)).abs() < 1e-15);
                } else {
                    assert_eq!(outside, 0.0);
                }
                let (x, w) = gauss_legendre(6);
                let integral: f64 = (0..4)
                    .flat_map(|c| x.iter().zip(&w).map(move |(xi, wi)| (c, xi, wi)))
                    .map(|(c, xi, wi)| wi * h / 4.0 * bump(k, s, (s as f64 + (c as f64 + xi) / 4.0) * h))
                    .sum();
                assert!((integral - pow2(-(k as f64) - 2.0)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn disjoint_interiors() {
        let mut rng = Lcg(7);
        for _ in 0..2000 {
            let x = rng.next();
            for k in 0..8u32 {
                let nonzero = (0..(1u64 << k)).filter(|&s| bump(k, s, x) != 0.0).count();
                assert!(nonzero <= 1);
                let total: f64 = (0..(1u64 << k)).map(|s| bump(k, s, x)).sum();
                assert_eq!(total, level_bump_sum(k, x));
            }
        }
    }

    /// Brute-force `f_{m,n}` by enumerating all levels.
    fn brute(c: &WitnessConfig, x: &[f64]) -> f64 {
        let mut sum = 0.0;
        for l in c.m..=c.n {
            for k in crate::grids::compositions(c.d, l, true, c.d) {
                let p: f64 = k.levels().iter().zip(x).map(|(&kj, &xj)| level_bump_sum(kj, xj)).product();
                sum += pow2(-c.alpha * l as f64) * p;
            }
        }
        pow2(-5.0 * c.d as f64) * sum
    }

    #[test]
    fn evaluator_matches_brute_force_and_is_nonnegative() {
        let mut rng = Lcg(11);
        let c = WitnessConfig::with_n(3, 3, 9, 1.5, WitnessVariant::Interior).unwrap();
        let f = FoolingFunction::new(c).unwrap();
        for _ in 0..300 {
            let x = [rng.next(), rng.next(), rng.next()];
            let v = f.evaluate(&x);
            assert!((v - brute(&c, &x)).abs() <= 1e-13 * v.abs() + 1e-300);
            assert!(v >= 0.0);
        }
        let sb = FoolingFunction::new(WitnessConfig::with_n(4, 2, 20, 1.0, WitnessVariant::SupportBounded(2)).unwrap()).unwrap();
        for _ in 0..300 {
            let x = [rng.next(), rng.next(), rng.next(), rng.next()];
            let mut y = x;
            y[3] = rng.next();
            assert_eq!(sb.evaluate(&x), sb.evaluate(&y));
            // φ = f^{1} + f^{2} + f^{12} over the first two variables.
            let expect: f64 = [vec![0usize], vec![1], vec![0, 1]]
                .iter()
                .map(|u| {
                    let cu = WitnessConfig::with_n(u.len(), 2, 20, 1.0, WitnessVariant::Interior).unwrap();
                    let xu: Vec<f64> = u.iter().map(|&j| x[j]).collect();
                    FoolingFunction::new(cu).unwrap().evaluate(&xu)
                })
                .sum();
            assert!((sb.evaluate(&x) - expect).abs() <= 1e-13 * expect + 1e-300);
        }
    }

    #[test]
    fn vanishes_on_grids() {
        for d in 1..=3usize {
            for m in d as u32..=8 {
                let c = WitnessConfig::with_n(d, m, m + 6, 2.0, WitnessVariant::Interior).unwrap();
                let f = FoolingFunction::new(c).unwrap();
                for p in enumerate_grid(d, m, GridVariant::Interior).unwrap() {
                    assert!(f.vanishes_exactly(&p.coords));
                    assert_eq!(f.evaluate(&p.to_f64()), 0.0);
                }
            }
        }
        for (d, nu) in [(2usize, 1usize), (3, 2), (3, 3)] {
            let c = WitnessConfig::with_n(d, 4, 10, 1.0, WitnessVariant::SupportBounded(nu)).unwrap();
            let f = FoolingFunction::new(c).unwrap();
            for p in enumerate_grid(d, 4, GridVariant::SupportBounded(nu)).unwrap() {
                assert!(f.vanishes_exactly(&p.coords));
            }
        }
        // Negative control: a point off the grid.
        let f = FoolingFunction::new(WitnessConfig::with_n(2, 3, 8, 2.0, WitnessVariant::Interior).unwrap()).unwrap();
        assert!(!f.vanishes_exactly(&[Coord::new(1, 3), Coord::new(1, 5)]));
    }

    #[test]
    fn l1_closed_form() {
        let c = WitnessConfig::with_n(1, 2, 3, 2.0, WitnessVariant::Interior).unwrap();
        let f = FoolingFunction::new(c).unwrap();
        let expect = pow2_rational(-7) * (pow2_rational(-4) + pow2_rational(-6));
        assert_eq!(f.l1_norm_exact().unwrap(), expect);
        assert!((f.l1_norm() - crate::math::to_f64(&expect)).abs() < 1e-18);
        for (d, m, alpha) in [(1usize, 2u32, 2.0), (2, 2, 1.5), (2, 3, 2.0)] {
            let c = WitnessConfig::with_n(d, m, m + 4, alpha, WitnessVariant::Interior).unwrap();
            let f = FoolingFunction::new(c).unwrap();
            // Finest bump pieces have width 2^{−(n+2)}.
            let cells = vec![1usize << (m + 6); d];
            let rule = TensorRule::gauss(&cells, 4, false);
            let q: f64 = rule.sample(|x| f.evaluate(x)).iter().zip(rule.flat_weights()).map(|(v, w)| v * w).sum();
            assert!((q - f.l1_norm()).abs() < 1e-9 * f.l1_norm().max(1.0), "{q} vs {}", f.l1_norm());
            assert!((q - f.l1_norm()).abs() < 1e-12 * f.l1_norm());
        }
        let f = FoolingFunction::new(WitnessConfig::with_n(2, 3, 3, 0.5, WitnessVariant::Interior).unwrap()).unwrap();
        assert!(f.l1_norm_exact().is_none());
        let _ = ratio(1, 1);
    }

    #[test]
    fn tail_and_limit() {
        for (d, m, alpha) in [(1usize, 1u32, 1.0), (2, 6, 2.0), (3, 4, 0.8)] {
            let c = WitnessConfig::new(d, m, alpha, WitnessVariant::Interior).unwrap();
            let f = FoolingFunction::new(c).unwrap();
            let long = FoolingFunction::new(WitnessConfig::with_n(d, m, m + 400, alpha, WitnessVariant::Interior).unwrap()).unwrap();
            assert!((f.l1_norm() + f.tail_bound() - long.l1_norm()).abs() <= 1e-12 * long.l1_norm());
            assert!((f.l1_norm_limit() - long.l1_norm()).abs() <= 1e-12 * long.l1_norm());
            let demo = lower_bound_demonstration(&c, 2.0).unwrap();
            assert!(demo.certifies());
            assert!((demo.theorem_lower - demo.theorem_as_limit).abs() <= 1e-12 * demo.theorem_lower);
            assert!(demo.witness_l1 <= demo.witness_l1_limit * (1.0 + 1e-14));
        }
        // d = 2, α = 2, m = 6, n = m + 40: the proof's form of the bound.
        let c = WitnessConfig::new(2, 6, 2.0, WitnessVariant::Interior).unwrap();
        let demo = lower_bound_demonstration(&c, f64::INFINITY).unwrap();
        let expect = pow2(-14.0) * beta(2.0, 2, 6) * pow2(-12.0);
        assert!((demo.theorem_lower - expect).abs() < 1e-20);
        assert!((demo.theorem_as_limit - expect).abs() < 1e-8 * expect);
        assert!(lower_bound_demonstration(&c, 0.5).is_err());
    }

    #[test]
    fn support_bounded_demo_includes_empty_support_term() {
        let c = WitnessConfig::new(3, 4, 1.5, WitnessVariant::SupportBounded(1)).unwrap();
        let demo = lower_bound_demonstration(&c, 1.0).unwrap();
        assert!((demo.theorem_lower - demo.theorem_as_limit).abs() <= 1e-12 * demo.theorem_lower);
        // γ'(ν, m) carries β(0, m) 2^{−αm} = 2^{−αm}, which the witness lacks.
        assert!(!demo.certifies());
        let without = demo.theorem_lower - pow2(-1.5 * 4.0);
        assert!(demo.witness_l1_limit >= without);
    }

    #[test]
    fn holder_spotchecks() {
        let mut rng = Lcg(3);
        let r = holder_spotcheck(|_| 0.0, 2, 2.0, 100, 12.0, || rng.next());
        assert!(r.all_passed());
        let c = WitnessConfig::with_n(2, 2, 14, 1.5, WitnessVariant::Interior).unwrap();
        let f = FoolingFunction::new(c).unwrap();
        let r = holder_spotcheck(|x| f.evaluate(x), 2, 1.5, 2000, 16.0, || rng.next());
        assert!(r.all_passed(), "{r:?}");
        assert_eq!(r.relative_failures, 0);
        assert!(r.worst_ratio <= 1.0);
        assert_eq!(r.trials, 2000);
        // Negative control: doubling the function leaves the unit ball at α = 2.
        let c = WitnessConfig::with_n(1, 1, 15, 2.0, WitnessVariant::Interior).unwrap();
        let f = FoolingFunction::new(c).unwrap();
        let one = holder_spotcheck(|x| f.evaluate(x), 1, 2.0, 10_000, 18.0, || rng.next());
        let two = holder_spotcheck(|x| 2.0 * f.evaluate(x), 1, 2.0, 10_000, 18.0, || rng.next());
        assert_eq!(one.relative_failures, 0);
        assert!(two.relative_failures > 0 && two.worst_ratio > 1.0, "{two:?}");
    }
}
