//! Evaluable sparse expansions `Σ_k Σ_s c_{k,s} · basis_{k,s}`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::bspline::{
    bspline_shift_count, cardinal_bspline_window, faber_shift_count, faber_hat, hat,
    periodic_bspline, MAX_ORDER,
};
use crate::grids::MultiIndex;
use crate::math::{pow2_rational, wrap_unit};
use crate::tensor::{strides, unflatten};
use crate::{Error, Rational, Result};

/// The univariate basis family of an expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    /// Periodic Faber hats `φ_{k,s}`.
    Faber,
    /// Periodic B-splines `N_{k,s}` of order `2r`.
    BSpline { r: u32 },
}

impl Basis {
    /// Number of shifts at a level.
    pub fn shift_count(&self, level: u32) -> usize {
        match *self {
            Basis::Faber => faber_shift_count(level),
            Basis::BSpline { r } => bspline_shift_count(r, level),
        }
    }

    /// Maximal number of basis functions of one level that can be nonzero
    /// at a point.
    pub fn width(&self) -> usize {
        match *self {
            Basis::Faber => 1,
            Basis::BSpline { r } => 2 * r as usize,
        }
    }

    pub fn eval(&self, level: u32, shift: usize, x: f64) -> f64 {
        match *self {
            Basis::Faber => faber_hat(level, shift as i64, x).unwrap_or(0.0),
            Basis::BSpline { r } => periodic_bspline(r, level, shift as i64, x).unwrap_or(0.0),
        }
    }

    /// Writes the (shift, value) pairs of the basis functions of `level`
    /// that may be nonzero at `x`; exactly [`Basis::width`] entries.
    pub fn active(&self, level: u32, x: f64, shifts: &mut [usize], values: &mut [f64]) {
        let x = wrap_unit(x);
        match *self {
            Basis::Faber => {
                if level == 0 {
                    shifts[0] = 0;
                    values[0] = 1.0;
                    return;
                }
                let t = x * libm::ldexp(1.0, level as i32);
                let cell = (libm::floor(t * 0.5) as usize).min(faber_shift_count(level) - 1);
                shifts[0] = cell;
                values[0] = hat(t - 2.0 * cell as f64);
            }
            Basis::BSpline { r } => {
                let n = bspline_shift_count(r, level);
                let t = x * n as f64;
                let base = (libm::floor(t) as usize).min(n - 1);
                let frac = t - base as f64;
                let l = 2 * r as usize;
                let mut buf = [0.0; MAX_ORDER];
                cardinal_bspline_window(2 * r, frac, &mut buf[..l]);
                for q in 0..l {
                    shifts[q] = (base + n - q) % n;
                    values[q] = buf[q];
                }
            }
        }
    }

    /// Exact integral over the torus of one basis function at `level`.
    pub fn integral(&self, level: u32) -> Rational {
        match *self {
            Basis::Faber if level == 0 => pow2_rational(0),
            Basis::Faber => pow2_rational(-(level as i64)),
            Basis::BSpline { r } => {
                pow2_rational(-(level as i64)) / Rational::from_integer(BigInt::from(2 * r))
            }
        }
    }
}

/// Coefficients of one level `k`, dense and row-major over the shift ranges.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelBlock {
    pub level: MultiIndex,
    pub coeffs: Vec<f64>,
}

/// A sparse expansion over a set of levels.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseExpansion {
    dim: usize,
    basis: Basis,
    blocks: Vec<LevelBlock>,
    max_level: u32,
}

/// Output of a recovery operator.
pub type RecoveredFunction = SparseExpansion;

impl SparseExpansion {
    pub fn new(dim: usize, basis: Basis) -> Self {
        Self { dim, basis, blocks: Vec::new(), max_level: 0 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn blocks(&self) -> &[LevelBlock] {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Shape of the coefficient array at a level.
    pub fn shape(&self, level: &MultiIndex) -> Vec<usize> {
        level.levels().iter().map(|&l| self.basis.shift_count(l)).collect()
    }

    /// Adds a block; a block with an already present level is merged by
    /// summing coefficients.
    pub fn push_block(&mut self, block: LevelBlock) -> Result<()> {
        if block.level.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: block.level.dim() });
        }
        let expected: usize = self.shape(&block.level).iter().product();
        if block.coeffs.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: block.coeffs.len() });
        }
        if let Some(existing) = self.blocks.iter_mut().find(|b| b.level == block.level) {
            for (a, b) in existing.coeffs.iter_mut().zip(&block.coeffs) {
                *a += b;
            }
            return Ok(());
        }
        self.max_level = self.max_level.max(block.level.levels().iter().copied().max().unwrap_or(0));
        self.blocks.push(block);
        Ok(())
    }

    pub fn block(&self, level: &MultiIndex) -> Option<&LevelBlock> {
        self.blocks.iter().find(|b| &b.level == level)
    }

    /// The part of the expansion living on one level.
    pub fn level_component(&self, level: &MultiIndex) -> SparseExpansion {
        let mut out = SparseExpansion::new(self.dim, self.basis);
        if let Some(b) = self.block(level) {
            out.push_block(b.clone()).expect("consistent block");
        }
        out
    }

    /// Sum of two expansions over the same basis.
    pub fn sum(&self, other: &SparseExpansion) -> Result<SparseExpansion> {
        if self.basis != other.basis || self.dim != other.dim {
            return Err(Error::InvalidParameter("incompatible expansions".into()));
        }
        let mut out = self.clone();
        for b in &other.blocks {
            out.push_block(b.clone())?;
        }
        Ok(out)
    }

    /// Multiplies every coefficient by `factor`.
    pub fn scaled(&self, factor: f64) -> SparseExpansion {
        let mut out = self.clone();
        for b in &mut out.blocks {
            for c in &mut b.coeffs {
                *c *= factor;
            }
        }
        out
    }

    /// Nonzero terms as `(level, shifts, coefficient)`.
    pub fn terms(&self) -> Vec<(MultiIndex, Vec<usize>, f64)> {
        let mut out = Vec::new();
        for b in &self.blocks {
            let shape = self.shape(&b.level);
            let mut idx = vec![0; self.dim];
            for (flat, &c) in b.coeffs.iter().enumerate() {
                if c != 0.0 {
                    unflatten(flat, &shape, &mut idx);
                    out.push((b.level.clone(), idx.clone(), c));
                }
            }
        }
        out
    }

    /// Total number of stored coefficients.
    pub fn coefficient_count(&self) -> usize {
        self.blocks.iter().map(|b| b.coeffs.len()).sum()
    }

    /// Value at `x`, visiting only basis functions that may be nonzero.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim, "point dimension");
        if self.blocks.is_empty() {
            return 0.0;
        }
        let w = self.basis.width();
        let levels = self.max_level as usize + 1;
        let mut shifts = vec![0usize; self.dim * levels * w];
        let mut values = vec![0.0; self.dim * levels * w];
        let mut filled = vec![false; self.dim * levels];
        let mut total = 0.0;
        let mut counter = vec![0usize; self.dim];
        for b in &self.blocks {
            let lv = b.level.levels();
            for j in 0..self.dim {
                let slot = j * levels + lv[j] as usize;
                if !filled[slot] {
                    let o = slot * w;
                    self.basis.active(lv[j], x[j], &mut shifts[o..o + w], &mut values[o..o + w]);
                    filled[slot] = true;
                }
            }
            let shape = self.shape(&b.level);
            let st = strides(&shape);
            counter.iter_mut().for_each(|c| *c = 0);
            let mut acc = 0.0;
            'outer: loop {
                let mut prod = 1.0;
                let mut flat = 0;
                for j in 0..self.dim {
                    let o = (j * levels + lv[j] as usize) * w + counter[j];
                    prod *= values[o];
                    flat += shifts[o] * st[j];
                }
                if prod != 0.0 {
                    acc += prod * b.coeffs[flat];
                }
                for j in (0..self.dim).rev() {
                    counter[j] += 1;
                    if counter[j] < w {
                        continue 'outer;
                    }
                    counter[j] = 0;
                }
                break;
            }
            total += acc;
        }
        total
    }

    /// Value at `x` by summing every term; used as a reference.
    pub fn evaluate_naive(&self, x: &[f64]) -> f64 {
        let mut total = 0.0;
        for b in &self.blocks {
            let shape = self.shape(&b.level);
            let mut idx = vec![0; self.dim];
            for (flat, &c) in b.coeffs.iter().enumerate() {
                unflatten(flat, &shape, &mut idx);
                let mut prod = c;
                for j in 0..self.dim {
                    prod *= self.basis.eval(b.level.levels()[j], idx[j], x[j]);
                }
                total += prod;
            }
        }
        total
    }

    /// `∫_{𝕋^d}` of the expansion from closed-form basis integrals.
    pub fn integral(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let w: f64 = b
                    .level
                    .levels()
                    .iter()
                    .map(|&l| crate::math::to_f64(&self.basis.integral(l)))
                    .product();
                w * b.coeffs.iter().sum::<f64>()
            })
            .sum()
    }
}
