//! Built-in test functions with certified smoothness data.
//!
//! Every non-constant member is a tensor product `c · Π_j φ_j(x_j)` of
//! 1-periodic univariate factors. For such products the mixed difference
//! factorizes, so
//!
//! ```text
//! sup_h Π_{j∈u} h_j^{−α} |Δ^{l,u}_h f| = c · Π_{j∈u} S_j · Π_{j∉u} sup|φ_j|,
//! S_j = sup_{x,h} h^{−α} |Δ^l_h φ_j(x)|,
//! ```
//!
//! and the seminorm bound reduces to one univariate maximization per factor.
//! `S_j` is estimated on a dense `(x, h)` lattice and inflated by
//! [`SAFETY`]; the scale `c` is then chosen so that the certified bound is 1.

use smolyak_core::bspline::{cardinal_bspline, faber_hat, periodic_bspline};
use smolyak_core::math::to_f64;
use smolyak_core::witness::bump;
use smolyak_core::{Basis, MultiIndex};

use crate::error::{CliError, CliResult};

/// Inflation applied to lattice estimates of difference suprema.
pub const SAFETY: f64 = 1.1;

/// Names accepted by [`CorpusFunction::build`].
pub const NAMES: [&str; 6] = ["prodsine", "zbump", "fewactive", "constant", "hat", "bspline"];

/// A univariate 1-periodic factor.
#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    One,
    /// `sin(2πx)`.
    Sine,
    /// `M_4(4x)`, periodized; vanishes at 0.
    Bump,
    /// Faber hat `φ_{k,s}`.
    Hat { level: u32, shift: usize },
    /// B-spline `N_{k,s}` of order `2r`.
    Spline { r: u32, level: u32, shift: usize },
}

impl Factor {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Factor::One => 1.0,
            Factor::Sine => (2.0 * std::f64::consts::PI * x).sin(),
            Factor::Bump => bump(0, 0, x),
            Factor::Hat { level, shift } => faber_hat(level, shift as i64, x).unwrap_or(0.0),
            Factor::Spline { r, level, shift } => periodic_bspline(r, level, shift as i64, x).unwrap_or(0.0),
        }
    }

    pub fn integral(&self) -> f64 {
        match *self {
            Factor::One => 1.0,
            Factor::Sine => 0.0,
            Factor::Bump => 0.25,
            Factor::Hat { level, .. } => to_f64(&Basis::Faber.integral(level)),
            Factor::Spline { r, level, .. } => to_f64(&Basis::BSpline { r }.integral(level)),
        }
    }

    /// `sup |φ|`.
    pub fn sup(&self) -> f64 {
        match *self {
            Factor::One | Factor::Sine | Factor::Hat { .. } => 1.0,
            Factor::Bump => cardinal_bspline(4, 2.0),
            Factor::Spline { r, .. } => cardinal_bspline(2 * r, r as f64),
        }
    }

    /// Largest smoothness for which the difference supremum is finite.
    pub fn max_alpha(&self) -> f64 {
        match *self {
            Factor::One | Factor::Sine => f64::INFINITY,
            Factor::Bump => 3.0,
            Factor::Hat { level: 0, .. } => f64::INFINITY,
            Factor::Hat { .. } => 1.0,
            Factor::Spline { r, .. } => (2 * r - 1) as f64,
        }
    }

    /// Lattice estimate of `sup_{x,h} h^{−α} |Δ^l_h φ(x)|` (not inflated).
    pub fn difference_sup(&self, alpha: f64, order: u32) -> f64 {
        if matches!(self, Factor::One | Factor::Hat { level: 0, .. }) {
            return 0.0;
        }
        let xs = x_lattice(self);
        let mut best = 0.0f64;
        for h in h_lattice() {
            let scale = h.powf(-alpha);
            for &x in &xs {
                let v = difference(|t| self.eval(t), x, h, order).abs() * scale;
                best = best.max(v);
            }
        }
        best
    }
}

/// `Δ^l_h g(x) = Σ_j (−1)^{l−j} C(l,j) g(x + jh)`.
pub fn difference<G: FnMut(f64) -> f64>(mut g: G, x: f64, h: f64, order: u32) -> f64 {
    let mut c = 1.0;
    let mut acc = 0.0;
    for j in 0..=order {
        let sign = if (order - j) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * c * g(x + j as f64 * h);
        c = c * (order - j) as f64 / (j + 1) as f64;
    }
    acc
}

fn x_lattice(factor: &Factor) -> Vec<f64> {
    const N: usize = 2048;
    let mut xs: Vec<f64> = (0..N).map(|i| i as f64 / N as f64).collect();
    // Knots of fine factors are not all on the uniform lattice; add them and
    // a few neighbours.
    let knots = match *factor {
        Factor::Hat { level, .. } => 1usize << level,
        Factor::Spline { r, level, .. } => 2 * r as usize * (1usize << level),
        _ => 0,
    };
    if knots > N {
        xs.extend((0..knots).map(|i| i as f64 / knots as f64));
    }
    xs
}

fn h_lattice() -> Vec<f64> {
    let mut hs: Vec<f64> = (0..=320).map(|t| (-(t as f64) / 16.0).exp2()).collect();
    hs.extend((1..512).map(|i| i as f64 / 512.0));
    hs
}

/// A closed-form member of the test corpus.
#[derive(Clone, Debug)]
pub struct CorpusFunction {
    pub name: String,
    pub d: usize,
    /// Coordinates the function depends on.
    pub active: Vec<usize>,
    pub factors: Vec<Factor>,
    pub scale: f64,
    /// Smoothness and difference order of the certificate.
    pub alpha: f64,
    pub order: u32,
    /// Certified bound on `max_u |f|_{H^α(u)}`.
    pub seminorm_bound: f64,
}

impl CorpusFunction {
    /// Builds a named member in `d` variables. `nu` selects the number of
    /// active variables of `fewactive`; the certificate is for smoothness
    /// `alpha` measured with differences of order `order`.
    pub fn build(name: &str, d: usize, nu: usize, alpha: f64, order: u32) -> CliResult<Self> {
        if d == 0 {
            return Err(CliError::Spec("dimension must be positive".into()));
        }
        if !(alpha > 0.0 && alpha <= order as f64) {
            return Err(CliError::Spec(format!(
                "smoothness {alpha} outside (0, {order}] for differences of order {order}"
            )));
        }
        let all: Vec<usize> = (0..d).collect();
        let (active, factors): (Vec<usize>, Vec<Factor>) = match name {
            "prodsine" => (all, vec![Factor::Sine; d]),
            "zbump" => (all, vec![Factor::Bump; d]),
            "fewactive" => {
                if nu == 0 || nu > d {
                    return Err(CliError::Spec(format!("active-variable count {nu} outside 1..={d}")));
                }
                let active: Vec<usize> = (0..nu).map(|j| (2 * j + 1) * d / (2 * nu)).collect();
                let factors = (0..d).map(|j| if active.contains(&j) { Factor::Sine } else { Factor::One }).collect();
                (active, factors)
            }
            "constant" => (Vec::new(), vec![Factor::One; d]),
            "hat" => {
                let factors: Vec<Factor> = (0..d)
                    .map(|j| {
                        // Levels alternate 2, 1; the level-2 hat is the
                        // one peaking at 3/4.
                        let level = 2 - (j % 2) as u32;
                        Factor::Hat { level, shift: (level == 2) as usize }
                    })
                    .collect();
                (all, factors)
            }
            "bspline" => {
                let r = (order / 2).max(1);
                let factors = (0..d)
                    .map(|j| Factor::Spline { r, level: (j % 2) as u32, shift: (3 * j + 1) % (2 * r as usize) })
                    .collect();
                (all, factors)
            }
            other => return Err(CliError::Spec(format!("unknown corpus function '{other}'"))),
        };
        let limit = factors.iter().map(Factor::max_alpha).fold(f64::INFINITY, f64::min);
        if alpha > limit {
            return Err(CliError::Spec(format!("'{name}' has no finite seminorm at smoothness {alpha} (limit {limit})")));
        }
        let unscaled = product_seminorm(&factors, alpha, order);
        let scale = if name == "constant" {
            0.75
        } else {
            1.0 / unscaled
        };
        Ok(Self {
            name: name.to_string(),
            d,
            active,
            factors,
            scale,
            alpha,
            order,
            seminorm_bound: scale * unscaled,
        })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.scale * self.factors.iter().zip(x).map(|(f, &t)| f.eval(t)).product::<f64>()
    }

    pub fn integral(&self) -> f64 {
        self.scale * self.factors.iter().map(Factor::integral).product::<f64>()
    }

    /// Whether `f` vanishes when any coordinate is 0.
    pub fn zero_boundary(&self) -> bool {
        self.factors.iter().all(|f| f.eval(0.0) == 0.0)
    }

    /// The Faber level of a single-hat member.
    pub fn hat_level(&self) -> Option<MultiIndex> {
        self.factors
            .iter()
            .map(|f| match *f {
                Factor::Hat { level, .. } => Some(level),
                _ => None,
            })
            .collect::<Option<Vec<u32>>>()
            .map(MultiIndex::new)
    }

    /// The B-spline level of a single-spline member.
    pub fn spline_level(&self) -> Option<MultiIndex> {
        self.factors
            .iter()
            .map(|f| match *f {
                Factor::Spline { level, .. } => Some(level),
                _ => None,
            })
            .collect::<Option<Vec<u32>>>()
            .map(MultiIndex::new)
    }
}

/// `SAFETY · max_u Π_{j∈u} S_j Π_{j∉u} sup|φ_j|` for a product of factors.
pub fn product_seminorm(factors: &[Factor], alpha: f64, order: u32) -> f64 {
    let mut cache: Vec<(Factor, f64)> = Vec::new();
    let mut pairs = Vec::with_capacity(factors.len());
    for f in factors {
        let s = match cache.iter().find(|(g, _)| g == f) {
            Some(&(_, s)) => s,
            None => {
                let s = SAFETY * f.difference_sup(alpha, order);
                cache.push((f.clone(), s));
                s
            }
        };
        pairs.push((s, f.sup()));
    }
    // Maximize over u coordinatewise: each coordinate takes the larger of
    // its two options.
    pairs.iter().map(|&(s, m)| s.max(m)).product()
}

/// Direct lattice estimate of `max_u sup Π_{j∈u} h_j^{−α} |Δ^{l,u}_h f(x)|`
/// for an arbitrary `d`-variate function; `x` runs over `nx^d` points and
/// each `h_j` over `hs`. Exponential in `d`; meant for cross-checks.
pub fn lattice_seminorm<F: FnMut(&[f64]) -> f64>(mut f: F, d: usize, alpha: f64, order: u32, nx: usize, hs: &[f64]) -> f64 {
    let mut best = 0.0f64;
    let mut x = vec![0.0; d];
    let total_x = nx.pow(d as u32);
    for mask in 0u32..(1 << d) {
        let u: Vec<usize> = (0..d).filter(|j| mask >> j & 1 == 1).collect();
        let total_h = hs.len().pow(u.len() as u32);
        for xi in 0..total_x {
            let mut rest = xi;
            for xj in x.iter_mut() {
                *xj = (rest % nx) as f64 / nx as f64;
                rest /= nx;
            }
            for hi in 0..total_h {
                let mut h = vec![0.0; u.len()];
                let mut rest = hi;
                for hj in h.iter_mut() {
                    *hj = hs[rest % hs.len()];
                    rest /= hs.len();
                }
                let v = mixed_difference(&mut f, &x, &u, &h, order).abs();
                let weight: f64 = h.iter().map(|t| t.powf(-alpha)).product();
                best = best.max(v * weight);
            }
        }
    }
    best
}

/// `Δ^{l,u}_h f(x)`, the mixed difference of order `l` in the coordinates `u`.
pub fn mixed_difference<F: FnMut(&[f64]) -> f64>(f: &mut F, x: &[f64], u: &[usize], h: &[f64], order: u32) -> f64 {
    let l = order as usize;
    let combos = (l + 1).pow(u.len() as u32);
    let binom: Vec<f64> = (0..=l)
        .scan(1.0, |c, j| {
            let v = *c;
            *c = *c * (l - j) as f64 / (j + 1) as f64;
            Some(v)
        })
        .collect();
    let mut y = x.to_vec();
    let mut acc = 0.0;
    for c in 0..combos {
        let mut rest = c;
        let mut coef = 1.0;
        for (i, &j) in u.iter().enumerate() {
            let step = rest % (l + 1);
            rest /= l + 1;
            y[j] = x[j] + step as f64 * h[i];
            coef *= binom[step] * if (l - step) % 2 == 0 { 1.0 } else { -1.0 };
        }
        acc += coef * f(&y);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sine_difference_sup_matches_analytic() {
        // sup_h (2 sin πh)^2 / h^2 = (2π)^2 as h → 0.
        let s = Factor::Sine.difference_sup(2.0, 2);
        assert!((s / (4.0 * PI * PI) - 1.0).abs() < 1e-4, "{s}");
        // At α = 1 the supremum is interior: max_h 4 sin^2(πh)/h.
        let grid: f64 = (1..200000)
            .map(|i| {
                let h = i as f64 / 200000.0;
                4.0 * (PI * h).sin().powi(2) / h
            })
            .fold(0.0, f64::max);
        let s1 = Factor::Sine.difference_sup(1.0, 2);
        assert!((s1 / grid - 1.0).abs() < 1e-3, "{s1} vs {grid}");
    }

    #[test]
    fn bump_difference_sup_is_curvature_bound() {
        // |Δ²_h M_4(4·)| ≤ h² · 16 · max|M_4''| = 32 h².
        let s = Factor::Bump.difference_sup(2.0, 2);
        assert!(s <= 32.0 + 1e-9 && s > 31.0, "{s}");
    }

    #[test]
    fn certified_bound_is_one_and_dominates_direct_lattice() {
        for name in ["prodsine", "zbump"] {
            let f = CorpusFunction::build(name, 2, 2, 2.0, 2).unwrap();
            assert!((f.seminorm_bound - 1.0).abs() < 1e-12);
            let hs: Vec<f64> = (1..=24).map(|t| (-(t as f64) / 3.0).exp2()).collect();
            let direct = lattice_seminorm(|x| f.eval(x), 2, 2.0, 2, 24, &hs);
            assert!(direct <= f.seminorm_bound, "{name}: {direct}");
            assert!(direct > 0.5, "{name}: {direct}");
        }
    }

    #[test]
    fn members_are_periodic_and_integrals_match_quadrature() {
        for name in NAMES {
            let f = CorpusFunction::build(name, 2, 1, 1.0, 2).unwrap();
            for &(a, b) in &[(0.13, 0.71), (0.5, 0.25), (0.0, 0.9)] {
                let v = f.eval(&[a, b]);
                assert!((v - f.eval(&[a + 1.0, b])).abs() < 1e-12);
                assert!((v - f.eval(&[a, b - 1.0])).abs() < 1e-12);
            }
            let n = 256;
            let mut sum = 0.0;
            for i in 0..n {
                for j in 0..n {
                    sum += f.eval(&[(i as f64 + 0.5) / n as f64, (j as f64 + 0.5) / n as f64]);
                }
            }
            let q = sum / (n * n) as f64;
            assert!((q - f.integral()).abs() < 1e-4 * f.scale.max(1.0), "{name}: {q} vs {}", f.integral());
        }
    }

    #[test]
    fn fewactive_spreads_active_variables() {
        let f = CorpusFunction::build("fewactive", 6, 2, 2.0, 2).unwrap();
        assert_eq!(f.active, vec![1, 4]);
        let g = CorpusFunction::build("prodsine", 2, 2, 2.0, 2).unwrap();
        assert!((f.scale - g.scale).abs() < 1e-15);
        let x = [0.3, 0.17, 0.9, 0.4, 0.61, 0.05];
        assert!((f.eval(&x) - g.eval(&[0.17, 0.61])).abs() < 1e-15);
    }

    #[test]
    fn rejects_unsupported_smoothness() {
        assert!(CorpusFunction::build("hat", 2, 2, 1.5, 2).is_err());
        assert!(CorpusFunction::build("zbump", 2, 2, 2.0, 1).is_err());
        assert!(CorpusFunction::build("nope", 2, 2, 1.0, 2).is_err());
        assert!(CorpusFunction::build("fewactive", 3, 4, 1.0, 2).is_err());
    }

    #[test]
    fn zero_boundary_members() {
        assert!(CorpusFunction::build("prodsine", 3, 3, 2.0, 2).unwrap().zero_boundary());
        assert!(CorpusFunction::build("zbump", 3, 3, 2.0, 2).unwrap().zero_boundary());
        assert!(!CorpusFunction::build("constant", 3, 3, 2.0, 2).unwrap().zero_boundary());
    }
}
