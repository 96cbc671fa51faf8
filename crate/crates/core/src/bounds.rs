//! Explicit constants and error bounds for sparse-grid recovery and
//! cubature.
//!
//! Binomial coefficients are computed exactly and converted to floating
//! point only when they enter a sum. `p = ∞` uses `(p+1)^{1/p} = 1`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::grids::MultiIndex;
use crate::math::{binomial_f64, p_root, pow2};
use crate::Result;

/// `F(m, n, t) = Σ_{s≥0} C(m+s, n) t^s` via its finite closed form.
pub fn f_closed(m: u32, n: u32, t: f64) -> Result<f64> {
    check_t(t)?;
    if n > m {
        return Err(Error::InvalidParameter(format!("F needs m ≥ n, got m={m}, n={n}")));
    }
    let x = t / (1.0 - t);
    let sum: f64 = (0..=n)
        .map(|s| binomial_f64(m as i64, s as i64) * libm::pow(x, (n - s) as f64))
        .sum();
    Ok(sum / (1.0 - t))
}

/// Truncated defining series of `F(m, n, t)`.
pub fn f_series(m: u32, n: u32, t: f64, terms: u32) -> f64 {
    let mut sum = 0.0;
    let mut tp = 1.0;
    for s in 0..terms {
        sum += binomial_f64((m + s) as i64, n as i64) * tp;
        tp *= t;
    }
    sum
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("t = {t} outside (0, 1)")))
    }
}

/// The piecewise factor with `F(m, n, t) ≤ C(m, n) b_n(t)` for `m ≥ 2n`.
pub fn b_n(n: u32, t: f64) -> f64 {
    if t == 0.5 {
        2.0 * (n as f64 + 1.0)
    } else if t < 0.5 {
        1.0 / (1.0 - 2.0 * t)
    } else {
        libm::pow(t / (1.0 - t), n as f64 + 1.0) / (2.0 * t - 1.0)
    }
}

/// `β(l, m) = (2^α−1)^{−l} Σ_{s<l} C(m, s) (2^α−1)^s`, with `β(0, m) = 1`.
pub fn beta(alpha: f64, l: u32, m: u32) -> f64 {
    if l == 0 {
        return 1.0;
    }
    let q = pow2(alpha) - 1.0;
    // Factor out q^{-l} termwise to avoid overflow of q^s.
    (0..l)
        .map(|s| binomial_f64(m as i64, s as i64) * libm::pow(q, s as f64 - l as f64))
        .sum()
}

fn weighted_beta_sum<W: Fn(u32) -> f64>(alpha: f64, nu: u32, m: u32, weight: W) -> f64 {
    (0..=nu)
        .map(|l| binomial_f64(nu as i64, l as i64) * weight(l) * beta(alpha, l, m))
        .sum()
}

/// `γ(ν, m) = Σ_l C(ν, l) 2^{−l} (p+1)^{−l/p} β(l, m)`.
pub fn gamma(alpha: f64, p: f64, nu: u32, m: u32) -> f64 {
    let w = 0.5 / p_root(p);
    weighted_beta_sum(alpha, nu, m, |l| libm::pow(w, l as f64))
}

/// `γ'(ν, m) = Σ_l C(ν, l) 2^{−7l} β(l, m)`.
pub fn gamma_prime(alpha: f64, nu: u32, m: u32) -> f64 {
    weighted_beta_sum(alpha, nu, m, |l| pow2(-7.0 * l as f64))
}

/// `Σ_l C(ν, l) 4^{−l} β(l, m)`, the cubature analogue of `γ`.
pub fn gamma_cubature(alpha: f64, nu: u32, m: u32) -> f64 {
    weighted_beta_sum(alpha, nu, m, |l| pow2(-2.0 * l as f64))
}

/// `δ(ν, a, b, m) = Σ_l C(ν, l) a^l b^{ν−l} β(l, m)`.
pub fn delta(alpha: f64, nu: u32, a: f64, b: f64, m: u32) -> f64 {
    weighted_beta_sum(alpha, nu, m, |l| libm::pow(a, l as f64) * libm::pow(b, (nu - l) as f64))
}

/// `2(2^α − 1)(p+1)^{1/p}`, the base of the Faber `m`-power bound.
pub fn bound_b_faber(alpha: f64, p: f64) -> f64 {
    2.0 * (pow2(alpha) - 1.0) * p_root(p)
}

/// Which of the three smoothness regimes around `α = 1` applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Regime {
    Below,
    One,
    Above,
}

fn regime(alpha: f64) -> Regime {
    if alpha == 1.0 {
        Regime::One
    } else if alpha < 1.0 {
        Regime::Below
    } else {
        Regime::Above
    }
}

/// `|2^α − 2|^{−|sgn(α−1)|}`: exactly 1 at `α = 1`.
fn regime_prefactor(alpha: f64) -> f64 {
    match regime(alpha) {
        Regime::One => 1.0,
        _ => 1.0 / libm::fabs(pow2(alpha) - 2.0),
    }
}

fn regime_case(alpha: f64, above: f64, one: f64, below: f64) -> f64 {
    regime_prefactor(alpha)
        * match regime(alpha) {
            Regime::Above => above,
            Regime::One => one,
            Regime::Below => below,
        }
}

/// `a°(d)` of the binomial-form recovery bound on interior grids.
pub fn a_interior(alpha: f64, p: f64, d: u32) -> f64 {
    let q = pow2(alpha) - 1.0;
    let base = libm::pow(2.0 * p_root(p), -(d as f64));
    base * regime_case(alpha, 1.0, d as f64, libm::pow(q, -(d as f64)))
}

/// `a(ν)` of the binomial-form recovery bound on `G^ν(m)`.
pub fn a_support(alpha: f64, p: f64, nu: u32) -> f64 {
    let q = pow2(alpha) - 1.0;
    let base = libm::pow(1.0 + 0.5 / p_root(p), nu as f64);
    base * regime_case(alpha, 1.0, nu as f64, libm::pow(q, -(nu as f64)))
}

/// `a°(d)` of the binomial-form cubature bound (without its `2^{−2d}`).
pub fn a_interior_cubature(alpha: f64, d: u32) -> f64 {
    let q = pow2(alpha) - 1.0;
    regime_case(alpha, 1.0, d as f64, libm::pow(q, -(d as f64)))
}

/// `a(ν)` of the binomial-form cubature bound on `G^ν(m)`.
pub fn a_support_cubature(alpha: f64, nu: u32) -> f64 {
    let q = pow2(alpha) - 1.0;
    let n = nu as f64;
    let five_q = libm::pow(1.25, n);
    regime_case(alpha, five_q, n * five_q, libm::pow(1.0 + 0.25 / q, n))
}

/// `c(ν, a, b)` of the binomial-form quasi-interpolation bound.
pub fn c_qi(alpha: f64, nu: u32, a: f64, b: f64) -> f64 {
    let q = pow2(alpha) - 1.0;
    let n = nu as f64;
    let s = libm::pow(a + b, n);
    regime_case(alpha, s, n * s, libm::pow(a / q + b, n))
}

/// Bound on `‖q_k(f)‖_p` for the Faber component at level `k` and `f` in
/// the unit ball of mixed Hölder smoothness `α ≤ 2`.
pub fn faber_level_bound(alpha: f64, p: f64, k: &MultiIndex) -> f64 {
    let u = k.support_len() as f64;
    libm::pow(2.0 * p_root(p), -u) * pow2(-alpha * k.l1() as f64)
}

/// Bound `a^{|u|} b^{d−|u|} 2^{−α|k|}` on a quasi-interpolation component.
pub fn qi_level_bound(alpha: f64, a: f64, b: f64, k: &MultiIndex) -> f64 {
    let u = k.support_len() as f64;
    let d = k.dim() as f64;
    libm::pow(a, u) * libm::pow(b, d - u) * pow2(-alpha * k.l1() as f64)
}

/// Parameters shared by all bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxParams {
    pub alpha: f64,
    pub p: f64,
    pub d: u32,
    pub nu: u32,
    pub m: u32,
}

impl ApproxParams {
    pub fn new(alpha: f64, p: f64, d: u32, nu: u32, m: u32) -> Self {
        Self { alpha, p, d, nu, m }
    }
}

/// The bounded quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Theorem {
    /// `L_p` recovery error of the Faber operator on interior grids.
    FaberInterior,
    /// `L_p` recovery error of the Faber operator on `G^ν(m)`.
    FaberSupportBounded,
    /// Lower bound for sampling recovery on interior grids.
    LowerInterior,
    /// Lower bound for sampling recovery on `G^ν(m)`.
    LowerSupportBounded,
    /// Optimal cubature on interior grids (both sides).
    CubatureInterior,
    /// Optimal cubature on `G^ν(m)` (both sides).
    CubatureSupportBounded,
    /// `L_p` recovery error of a quasi-interpolation scheme.
    QiRecovery,
    /// Cubature error of a quasi-interpolation scheme.
    QiCubature,
}

impl Theorem {
    pub const ALL: [Theorem; 8] = [
        Theorem::FaberInterior,
        Theorem::FaberSupportBounded,
        Theorem::LowerInterior,
        Theorem::LowerSupportBounded,
        Theorem::CubatureInterior,
        Theorem::CubatureSupportBounded,
        Theorem::QiRecovery,
        Theorem::QiCubature,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Theorem::FaberInterior => "faber_interior",
            Theorem::FaberSupportBounded => "faber_support_bounded",
            Theorem::LowerInterior => "lower_interior",
            Theorem::LowerSupportBounded => "lower_support_bounded",
            Theorem::CubatureInterior => "cubature_interior",
            Theorem::CubatureSupportBounded => "cubature_support_bounded",
            Theorem::QiRecovery => "qi_recovery",
            Theorem::QiCubature => "qi_cubature",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == name)
    }

    fn needs_scheme(&self) -> bool {
        matches!(self, Theorem::QiRecovery | Theorem::QiCubature)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Upper,
    Lower,
}

impl Side {
    pub fn name(&self) -> &'static str {
        match self {
            Side::Upper => "upper",
            Side::Lower => "lower",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Form {
    /// Sums of `β` terms, the sharpest explicit form.
    Refined,
    /// `const · 2^{−αm} C(m, ν−1)`.
    Binomial,
    /// `const · 2^{−αm} m^{ν−1}`.
    MPower,
}

impl Form {
    pub const ALL: [Form; 3] = [Form::Refined, Form::Binomial, Form::MPower];

    pub fn name(&self) -> &'static str {
        match self {
            Form::Refined => "refined",
            Form::Binomial => "binomial",
            Form::MPower => "m_power",
        }
    }
}

/// Scheme constants `a`, `b` for the quasi-interpolation bounds, together
/// with the order `2r` that caps the admissible smoothness.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeAB {
    pub a: f64,
    pub b: f64,
    pub order: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub theorem: Theorem,
    pub side: Side,
    pub form: Form,
    pub value: f64,
    /// The hypothesis under which this form holds.
    pub hypothesis: &'static str,
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} = {:e} [{}]",
            self.theorem.name(),
            self.side.name(),
            self.form.name(),
            self.value,
            self.hypothesis
        )
    }
}

fn violated(msg: alloc::string::String) -> Error {
    Error::HypothesisViolated(msg)
}

/// Evaluates one side and form of a theorem, checking its hypotheses.
pub fn theorem_bound(
    params: &ApproxParams,
    theorem: Theorem,
    side: Side,
    form: Form,
    scheme: Option<SchemeAB>,
) -> Result<BoundReport> {
    let ApproxParams { alpha, p, d, nu, m } = *params;
    if !(alpha > 0.0) || alpha.is_nan() {
        return Err(violated(format!("α = {alpha} must be positive")));
    }
    if !(p > 0.0) {
        return Err(violated(format!("p = {p} must be positive")));
    }
    if d == 0 {
        return Err(violated("d must be positive".into()));
    }
    let interior = matches!(theorem, Theorem::FaberInterior | Theorem::LowerInterior | Theorem::CubatureInterior);
    let n = if interior { d } else { nu };
    if !interior && (nu == 0 || nu > d) {
        return Err(violated(format!("ν = {nu} outside [1, {d}]")));
    }
    if m < n {
        return Err(violated(format!("m = {m} below {n}")));
    }
    let scheme = if theorem.needs_scheme() {
        let s = scheme.ok_or_else(|| Error::InvalidParameter("scheme constants required".into()))?;
        if alpha > s.order as f64 {
            return Err(violated(format!("α = {alpha} exceeds the scheme order {}", s.order)));
        }
        if !(p >= 1.0) {
            return Err(violated(format!("p = {p} below 1")));
        }
        Some(s)
    } else {
        if alpha > 2.0 {
            return Err(violated(format!("α = {alpha} exceeds 2")));
        }
        None
    };
    let lower_theorem = matches!(theorem, Theorem::LowerInterior | Theorem::LowerSupportBounded);
    if lower_theorem && side == Side::Upper {
        return Err(violated(format!("{} has no upper side", theorem.name())));
    }
    if matches!(theorem, Theorem::FaberInterior | Theorem::FaberSupportBounded | Theorem::QiRecovery | Theorem::QiCubature)
        && side == Side::Lower
    {
        return Err(violated(format!("{} has no lower side", theorem.name())));
    }
    if lower_theorem && !(p >= 1.0) {
        return Err(violated(format!("p = {p} below 1")));
    }
    if form == Form::Binomial && side == Side::Upper && m < 2 * (n - 1) {
        return Err(violated(format!("binomial form needs m ≥ 2({n}−1), got {m}")));
    }

    let q = pow2(alpha) - 1.0;
    let decay = pow2(-alpha * m as f64);
    let nf = n as f64;
    let mpow = libm::pow(m as f64, nf - 1.0);
    let cmb = binomial_f64(m as i64, n as i64 - 1);
    let e = libm::exp(q);
    let lower_binomial_sb = || libm::pow(pow2(alpha) - 127.0 / 128.0, nf - 1.0) / (128.0 * q) * decay * cmb;
    let unsupported = || violated(format!("{} has no {} {} form", theorem.name(), side.name(), form.name()));

    let (value, hypothesis) = match (theorem, side, form) {
        (Theorem::FaberInterior, _, Form::Refined) => {
            (libm::pow(2.0 * p_root(p), -nf) * beta(alpha, d, m) * decay, "m ≥ d")
        }
        (Theorem::FaberInterior, _, Form::MPower) => (e * libm::pow(bound_b_faber(alpha, p), -nf) * decay * mpow, "m ≥ d"),
        (Theorem::FaberInterior, _, Form::Binomial) => (a_interior(alpha, p, d) * decay * cmb, "m ≥ 2(d−1)"),
        (Theorem::FaberSupportBounded, _, Form::Refined) => (gamma(alpha, p, nu, m) * decay, "m ≥ ν"),
        (Theorem::FaberSupportBounded, _, Form::MPower) => {
            (e * libm::pow(1.0 + 1.0 / bound_b_faber(alpha, p), nf) * decay * mpow, "m ≥ ν")
        }
        (Theorem::FaberSupportBounded, _, Form::Binomial) => (a_support(alpha, p, nu) * decay * cmb, "m ≥ 2(ν−1)"),
        (Theorem::LowerInterior | Theorem::CubatureInterior, Side::Lower, Form::Refined) => {
            (pow2(-7.0 * nf) * beta(alpha, d, m) * decay, "m ≥ d")
        }
        (Theorem::LowerInterior | Theorem::CubatureInterior, Side::Lower, Form::Binomial) => {
            (pow2(-7.0 * nf) * decay * cmb / q, "m ≥ d")
        }
        (Theorem::LowerInterior, Side::Lower, Form::MPower) => {
            let base = if d == 1 { 1.0 } else { libm::pow(nf - 1.0, -(nf - 1.0)) };
            (pow2(-7.0 * nf) * base * decay * mpow / q, "m ≥ d")
        }
        (Theorem::LowerSupportBounded | Theorem::CubatureSupportBounded, Side::Lower, Form::Refined) => {
            (gamma_prime(alpha, nu, m) * decay, "m ≥ ν")
        }
        (Theorem::LowerSupportBounded | Theorem::CubatureSupportBounded, Side::Lower, Form::Binomial) => {
            (lower_binomial_sb(), "m ≥ ν")
        }
        (Theorem::CubatureInterior, Side::Upper, Form::Refined) => (pow2(-2.0 * nf) * beta(alpha, d, m) * decay, "m ≥ d"),
        (Theorem::CubatureInterior, Side::Upper, Form::Binomial) => {
            (a_interior_cubature(alpha, d) * pow2(-2.0 * nf) * decay * cmb, "m ≥ 2(d−1)")
        }
        (Theorem::CubatureSupportBounded, Side::Upper, Form::Refined) => (gamma_cubature(alpha, nu, m) * decay, "m ≥ ν"),
        (Theorem::CubatureSupportBounded, Side::Upper, Form::Binomial) => {
            (a_support_cubature(alpha, nu) * decay * cmb, "m ≥ 2(ν−1)")
        }
        (Theorem::QiRecovery | Theorem::QiCubature, _, f) => {
            let s = scheme.expect("checked above");
            match f {
                Form::Refined => (delta(alpha, nu, s.a, s.b, m) * decay, "m ≥ ν, α ≤ 2r, p ≥ 1"),
                Form::MPower => (e * libm::pow(s.a / q + s.b, nf) * decay * mpow, "m ≥ ν, α ≤ 2r, p ≥ 1"),
                Form::Binomial => (c_qi(alpha, nu, s.a, s.b) * decay * cmb, "m ≥ 2(ν−1), α ≤ 2r, p ≥ 1"),
            }
        }
        _ => return Err(unsupported()),
    };
    Ok(BoundReport { theorem, side, form, value, hypothesis })
}

/// Every side and form of `theorem` whose hypotheses hold at `params`.
pub fn theorem_bounds(params: &ApproxParams, theorem: Theorem, scheme: Option<SchemeAB>) -> Vec<BoundReport> {
    let mut out = Vec::new();
    for side in [Side::Upper, Side::Lower] {
        for form in Form::ALL {
            if let Ok(r) = theorem_bound(params, theorem, side, form, scheme) {
                out.push(r);
            }
        }
    }
    out
}
