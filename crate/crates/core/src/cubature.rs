//! Cubature rules induced by the recovery operators.
//!
//! A rule's weight at `ξ` is `∫ ψ_ξ`, where `R(f) = Σ_ξ f(ξ) ψ_ξ`. Each
//! hierarchical component is a tensor product of univariate functionals,
//! so the weights are sums over levels of tensor products of exact
//! univariate level weights.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{ToPrimitive, Zero};

use crate::expansion::Basis;
use crate::faber::{self, Recovery};
use crate::grids::{cumulative_level_sets, Coord, GridVariant, MultiIndex};
use crate::laurent::LaurentPoly;
use crate::math::{pairwise_sum, pow2_rational, to_f64};
use crate::norms::{lp_error, TensorRule};
use crate::quasi_interp::{self, QIScheme};
use crate::{Error, Rational, Result};

/// The recovery method a rule or experiment is built on.
#[derive(Clone, Debug, PartialEq)]
pub enum Method {
    Faber,
    QuasiInterpolation(QIScheme),
}

impl Method {
    pub fn basis(&self) -> Basis {
        match self {
            Method::Faber => Basis::Faber,
            Method::QuasiInterpolation(s) => s.basis(),
        }
    }

    /// Sampling lattice size at a univariate level.
    pub fn lattice_size(&self, level: u32) -> usize {
        match self {
            Method::Faber => 1usize << level,
            Method::QuasiInterpolation(s) => s.lattice_size(level),
        }
    }
}

/// A fully specified sparse-grid recovery operator.
#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryConfig {
    pub d: usize,
    pub m: u32,
    pub variant: GridVariant,
    pub method: Method,
}

impl RecoveryConfig {
    pub fn new(d: usize, m: u32, variant: GridVariant, method: Method) -> Result<Self> {
        variant.validate(d)?;
        if variant == GridVariant::Interior && method != Method::Faber {
            return Err(Error::InvalidParameter("the interior variant is defined for the Faber basis only".into()));
        }
        Ok(Self { d, m, variant, method })
    }

    /// The support-bounded variant with `ν = d` in place of `Full`.
    fn effective_variant(&self) -> GridVariant {
        match self.variant {
            GridVariant::Full => GridVariant::SupportBounded(self.d),
            v => v,
        }
    }

    pub fn zero_boundary(&self) -> bool {
        self.variant == GridVariant::Interior
    }

    pub fn levels(&self) -> Vec<MultiIndex> {
        cumulative_level_sets(self.d, self.m, self.effective_variant())
    }

    pub fn recover<F: FnMut(&[f64]) -> f64>(&self, f: F) -> Result<Recovery> {
        match &self.method {
            Method::Faber => faber::recover_levels(f, self.d, &self.levels(), self.zero_boundary()),
            Method::QuasiInterpolation(s) => quasi_interp::recover_levels(s, f, self.d, &self.levels()),
        }
    }
}

/// Where a rule came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Provenance {
    pub method: String,
    pub variant: GridVariant,
    pub d: usize,
    pub m: u32,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = match self.variant {
            GridVariant::Full => String::from("full"),
            GridVariant::Interior => String::from("interior"),
            GridVariant::SupportBounded(nu) => alloc::format!("nu={nu}"),
        };
        write!(f, "{} d={} m={} {}", self.method, self.d, self.m, v)
    }
}

/// Points with exact rational weights.
#[derive(Clone, Debug, PartialEq)]
pub struct CubatureRule {
    pub points: Vec<Vec<Coord>>,
    pub weights: Vec<Rational>,
    pub weights_f64: Vec<f64>,
    pub provenance: Provenance,
}

impl CubatureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn weight_sum(&self) -> Rational {
        self.weights.iter().fold(Rational::zero(), |a, w| a + w)
    }

    /// `Σ_ξ w_ξ f(ξ)` with pairwise summation in point order.
    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        let mut x = Vec::new();
        let terms: Vec<f64> = self
            .points
            .iter()
            .zip(&self.weights_f64)
            .map(|(p, w)| {
                x.clear();
                x.extend(p.iter().map(Coord::to_f64));
                w * f(&x)
            })
            .collect();
        pairwise_sum(&terms)
    }
}

fn exact(x: f64) -> Rational {
    Rational::from_float(x).expect("finite stencil weight")
}

/// Univariate weights of `∫ q_k` on the level-`k` sampling lattice.
pub fn level_weights(method: &Method, level: u32) -> Vec<Rational> {
    let n = method.lattice_size(level);
    let mut w = vec![Rational::zero(); n];
    match method {
        Method::Faber => {
            let integral = Basis::Faber.integral(level);
            for s in 0..crate::bspline::faber_shift_count(level) {
                for (i, c) in faber::lambda_stencil(level, s) {
                    w[i as usize] += exact(c) * &integral;
                }
            }
        }
        Method::QuasiInterpolation(scheme) => {
            let integral = scheme.basis().integral(level);
            let add = |w: &mut Vec<Rational>, stencil: &LaurentPoly, base: i64, scale: &Rational| {
                for (e, c) in stencil.terms() {
                    let i = (base + e).rem_euclid(n as i64) as usize;
                    w[i] += c * scale;
                }
            };
            if level == 0 {
                for s in 0..n as i64 {
                    add(&mut w, scheme.p_lambda(), s, &integral);
                }
            } else {
                let diff = LaurentPoly::d_power(2 * scheme.r());
                for s in 0..n as i64 {
                    let star = if s % 2 == 0 { scheme.p_even_star() } else { scheme.p_odd_star() };
                    for (t, c) in star.terms() {
                        add(&mut w, &diff, s + t, &(c * &integral));
                    }
                }
            }
        }
    }
    w
}

/// Derives the rule `ξ ↦ ∫ ψ_ξ` of a recovery operator, in exact arithmetic.
///
/// The interior variant drops points with a zero coordinate, where the
/// function class vanishes.
pub fn derive_rule(config: &RecoveryConfig) -> CubatureRule {
    let mut cache: BTreeMap<u32, Vec<Rational>> = BTreeMap::new();
    let mut acc: BTreeMap<Vec<Coord>, Rational> = BTreeMap::new();
    let d = config.d;
    for k in config.levels() {
        let per_axis: Vec<Vec<(Coord, Rational)>> = k
            .levels()
            .iter()
            .map(|&l| {
                let w = cache.entry(l).or_insert_with(|| level_weights(&config.method, l));
                let n = w.len() as u64;
                w.iter()
                    .enumerate()
                    .filter(|(i, c)| !c.is_zero() && !(config.zero_boundary() && *i == 0))
                    .map(|(i, c)| (Coord::new(i as u64, n), c.clone()))
                    .collect()
            })
            .collect();
        if per_axis.iter().any(Vec::is_empty) {
            continue;
        }
        let mut idx = vec![0usize; d];
        loop {
            let mut w = Rational::from_integer(1.into());
            let mut p = Vec::with_capacity(d);
            for j in 0..d {
                let (c, wj) = &per_axis[j][idx[j]];
                w *= wj;
                p.push(*c);
            }
            *acc.entry(p).or_insert_with(Rational::zero) += w;
            let mut j = d;
            let done = loop {
                if j == 0 {
                    break true;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < per_axis[j].len() {
                    break false;
                }
                idx[j] = 0;
            };
            if done {
                break;
            }
        }
    }
    let method = match &config.method {
        Method::Faber => String::from("faber"),
        Method::QuasiInterpolation(s) => alloc::format!("qi(r={})", s.r()),
    };
    let mut points = Vec::with_capacity(acc.len());
    let mut weights = Vec::with_capacity(acc.len());
    for (p, w) in acc {
        points.push(p);
        weights.push(w);
    }
    let weights_f64 = weights.iter().map(|w| w.to_f64().unwrap_or_else(|| to_f64(w))).collect();
    CubatureRule {
        points,
        weights,
        weights_f64,
        provenance: Provenance { method, variant: config.variant, d: config.d, m: config.m },
    }
}

/// `|I(f) − I_m(f)|` next to `‖f − R(f)‖₁`, the quantity that bounds it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubatureComparison {
    pub integral: f64,
    pub estimate: f64,
    pub cubature_error: f64,
    pub recovery_l1_error: f64,
}

impl CubatureComparison {
    /// `recovery_l1_error − cubature_error`; nonnegative up to quadrature error.
    pub fn slack(&self) -> f64 {
        self.recovery_l1_error - self.cubature_error
    }
}

/// Runs the rule and the recovery of the same configuration on `f`.
///
/// `integral` is the exact value of `∫ f`; the `L_1` error is measured on
/// `quadrature`.
pub fn cubature_error_vs_sampling<F: FnMut(&[f64]) -> f64>(
    rule: &CubatureRule,
    config: &RecoveryConfig,
    mut f: F,
    integral: f64,
    quadrature: &TensorRule,
) -> Result<CubatureComparison> {
    let p = &rule.provenance;
    if p.d != config.d || p.m != config.m || p.variant != config.variant {
        return Err(Error::InvalidParameter(alloc::format!("rule ({p}) does not match the recovery configuration")));
    }
    let estimate = rule.integrate(&mut f);
    let recovery = config.recover(&mut f)?;
    let recovery_l1_error = lp_error(&mut f, &recovery.expansion, quadrature, 1.0);
    Ok(CubatureComparison {
        integral,
        estimate,
        cubature_error: libm::fabs(integral - estimate),
        recovery_l1_error,
    })
}

/// `2^{−k}` as an exact rational; re-exported for rule tests.
pub fn dyadic_weight(level: u32) -> Rational {
    pow2_rational(-(level as i64))
}
