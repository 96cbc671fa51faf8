//! `L_p` norms of functions and expansions on the torus.

use alloc::vec;
use alloc::vec::Vec;

use crate::expansion::{Basis, SparseExpansion};
use crate::math::{gauss_legendre, pairwise_sum};
use crate::tensor::transform_axis;

/// A tensor-product point set with quadrature weights.
#[derive(Clone, Debug)]
pub struct TensorRule {
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<Vec<f64>>,
}

impl TensorRule {
    /// Composite Gauss–Legendre rule with `cells[j]` equal cells along axis
    /// `j`. With `corners`, the left cell endpoints are added with weight 0
    /// so that maxima at knots are seen.
    pub fn gauss(cells: &[usize], nodes: usize, corners: bool) -> Self {
        let (x, w) = gauss_legendre(nodes);
        let mut points = Vec::with_capacity(cells.len());
        let mut weights = Vec::with_capacity(cells.len());
        for &c in cells {
            let h = 1.0 / c as f64;
            let mut p = Vec::new();
            let mut q = Vec::new();
            for i in 0..c {
                if corners {
                    p.push(i as f64 * h);
                    q.push(0.0);
                }
                for (xi, wi) in x.iter().zip(&w) {
                    p.push((i as f64 + xi) * h);
                    q.push(wi * h);
                }
            }
            points.push(p);
            weights.push(q);
        }
        Self { points, weights }
    }

    /// Midpoints of `n[j]` equal cells per axis (a half-cell shifted lattice).
    pub fn midpoint(cells: &[usize]) -> Self {
        let points: Vec<Vec<f64>> = cells
            .iter()
            .map(|&c| (0..c).map(|i| (i as f64 + 0.5) / c as f64).collect())
            .collect();
        let weights = cells.iter().map(|&c| vec![1.0 / c as f64; c]).collect();
        Self { points, weights }
    }

    pub fn dim(&self) -> usize {
        self.points.len()
    }

    pub fn len(&self) -> usize {
        self.points.iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn shape(&self) -> Vec<usize> {
        self.points.iter().map(Vec::len).collect()
    }

    /// Calls `visit(point, weight)` for every node in row-major order.
    pub fn for_each<V: FnMut(&[f64], f64)>(&self, mut visit: V) {
        let d = self.dim();
        let shape = self.shape();
        if shape.iter().any(|&n| n == 0) {
            return;
        }
        let mut idx = vec![0usize; d];
        let mut x = vec![0.0; d];
        loop {
            let mut w = 1.0;
            for j in 0..d {
                x[j] = self.points[j][idx[j]];
                w *= self.weights[j][idx[j]];
            }
            visit(&x, w);
            let mut j = d;
            loop {
                if j == 0 {
                    return;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < shape[j] {
                    break;
                }
                idx[j] = 0;
            }
        }
    }

    /// Values of `f` at the nodes in row-major order.
    pub fn sample<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        self.for_each(|x, _| out.push(f(x)));
        out
    }

    /// Node weights in row-major order.
    pub fn flat_weights(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        self.for_each(|_, w| out.push(w));
        out
    }

    /// `(Σ w |v|^p)^{1/p}`, or `max |v|` for `p = ∞`.
    pub fn lp(&self, values: &[f64], p: f64) -> f64 {
        if p.is_infinite() {
            return values.iter().fold(0.0f64, |a, v| a.max(libm::fabs(*v)));
        }
        let w = self.flat_weights();
        let terms: Vec<f64> = values.iter().zip(&w).map(|(v, w)| w * libm::pow(libm::fabs(*v), p)).collect();
        libm::pow(pairwise_sum(&terms), 1.0 / p)
    }
}

/// Values of an expansion at the nodes of a tensor rule, computed block by
/// block with one sparse univariate map per axis.
pub fn expansion_values(e: &SparseExpansion, rule: &TensorRule) -> Vec<f64> {
    let d = e.dim();
    assert_eq!(rule.dim(), d);
    let basis = e.basis();
    let w = basis.width();
    let mut total = vec![0.0; rule.len()];
    let mut shifts = vec![0usize; w];
    let mut vals = vec![0.0; w];
    for block in e.blocks() {
        let mut data = block.coeffs.clone();
        let mut shape = e.shape(&block.level);
        for axis in 0..d {
            let level = block.level.levels()[axis];
            let pts = &rule.points[axis];
            let table: Vec<(Vec<usize>, Vec<f64>)> = pts
                .iter()
                .map(|&x| {
                    basis.active(level, x, &mut shifts, &mut vals);
                    (shifts.clone(), vals.clone())
                })
                .collect();
            let (next, sh) = transform_axis(&data, &shape, axis, pts.len(), |c, out| {
                for (o, (s, v)) in out.iter_mut().zip(&table) {
                    *o = s.iter().zip(v).map(|(&si, &vi)| vi * c[si]).sum();
                }
            });
            data = next;
            shape = sh;
        }
        for (t, v) in total.iter_mut().zip(&data) {
            *t += v;
        }
    }
    total
}

/// Knot counts per axis of the finest level present in an expansion.
pub fn knot_cells(e: &SparseExpansion) -> Vec<usize> {
    let mut cells = vec![1usize; e.dim()];
    for b in e.blocks() {
        for (j, &l) in b.level.levels().iter().enumerate() {
            let c = match e.basis() {
                Basis::Faber => 1usize << l,
                Basis::BSpline { r } => (2 * r as usize) << l,
            };
            cells[j] = cells[j].max(c);
        }
    }
    cells
}

/// `‖e‖_p` on a Gauss rule aligned with the knots of the expansion.
///
/// For `p = 2` this is exact; for `p = ∞` it is the maximum over Gauss nodes
/// and knots, a lower estimate of the supremum.
pub fn expansion_lp_norm(e: &SparseExpansion, p: f64) -> f64 {
    if e.is_empty() {
        return 0.0;
    }
    let nodes = match e.basis() {
        Basis::Faber => 4,
        Basis::BSpline { r } => 2 * r as usize + 2,
    };
    let rule = TensorRule::gauss(&knot_cells(e), nodes, true);
    rule.lp(&expansion_values(e, &rule), p)
}

/// `‖f − e‖_p` measured on a given tensor rule.
pub fn lp_error<F: FnMut(&[f64]) -> f64>(f: F, e: &SparseExpansion, rule: &TensorRule, p: f64) -> f64 {
    let fv = rule.sample(f);
    let ev = expansion_values(e, rule);
    let diff: Vec<f64> = fv.iter().zip(&ev).map(|(a, b)| a - b).collect();
    rule.lp(&diff, p)
}

/// `‖f − e‖_p` estimated from uniformly distributed points (Monte Carlo
/// mean for finite `p`, maximum for `p = ∞`).
pub fn lp_error_points<F: FnMut(&[f64]) -> f64>(mut f: F, e: &SparseExpansion, points: &[Vec<f64>], p: f64) -> f64 {
    let diffs: Vec<f64> = points.iter().map(|x| f(x) - e.evaluate(x)).collect();
    lp_of_samples(&diffs, p)
}

/// `(mean |v|^p)^{1/p}` or `max |v|`.
pub fn lp_of_samples(values: &[f64], p: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    if p.is_infinite() {
        return values.iter().fold(0.0f64, |a, v| a.max(libm::fabs(*v)));
    }
    let terms: Vec<f64> = values.iter().map(|v| libm::pow(libm::fabs(*v), p)).collect();
    libm::pow(pairwise_sum(&terms) / values.len() as f64, 1.0 / p)
}
