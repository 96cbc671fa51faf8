//! Hierarchical Faber decomposition and the sparse-grid recovery operators
//! built from it.

use alloc::vec;
use alloc::vec::Vec;

use crate::expansion::{Basis, LevelBlock, SparseExpansion};
use crate::grids::{cumulative_level_sets, Coord, GridVariant, MultiIndex};
use crate::sampling::SampleCache;
use crate::tensor::transform_axis;
use crate::{Error, Result};

/// Univariate stencil of `λ_{k,s}` as `(lattice index, weight)` pairs on the
/// lattice `2^{−k}ℤ`.
pub fn lambda_stencil(level: u32, shift: usize) -> Vec<(u64, f64)> {
    if level == 0 {
        return vec![(0, 1.0)];
    }
    let n = 1u64 << level;
    let s = shift as u64;
    vec![(2 * s, -0.5), (2 * s + 1, 1.0), ((2 * s + 2) % n, -0.5)]
}

/// `λ_{k,s}(f)`: the tensor product of `f(0)` (level 0) and
/// `−½Δ²_{2^{−k}}(f, 2s·2^{−k})` (level `k ≥ 1`).
pub fn lambda_functional<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    level: &MultiIndex,
    shift: &[usize],
) -> Result<f64> {
    let d = level.dim();
    if shift.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: shift.len() });
    }
    let mut stencils = Vec::with_capacity(d);
    for (j, (&k, &s)) in level.levels().iter().zip(shift).enumerate() {
        let limit = crate::bspline::faber_shift_count(k);
        if s >= limit {
            return Err(Error::ShiftOutOfRange { level: level.levels()[j], shift: s as i64, limit: limit as i64 });
        }
        stencils.push(lambda_stencil(k, s));
    }
    let mut counter = vec![0usize; d];
    let mut point = vec![0.0; d];
    let mut total = 0.0;
    loop {
        let mut w = 1.0;
        for j in 0..d {
            let (i, wj) = stencils[j][counter[j]];
            w *= wj;
            point[j] = Coord::dyadic(i, level.levels()[j]).to_f64();
        }
        total += w * f(&point);
        let mut j = d;
        loop {
            if j == 0 {
                return Ok(total);
            }
            j -= 1;
            counter[j] += 1;
            if counter[j] < stencils[j].len() {
                break;
            }
            counter[j] = 0;
        }
    }
}

fn faber_block<F: FnMut(&[f64]) -> f64>(cache: &mut SampleCache<F>, level: &MultiIndex) -> LevelBlock {
    let dens: Vec<u64> = level.levels().iter().map(|&l| 1u64 << l).collect();
    let mut data = cache.gather_lattice(&dens);
    let mut shape: Vec<usize> = dens.iter().map(|&n| n as usize).collect();
    for (axis, &l) in level.levels().iter().enumerate() {
        if l == 0 {
            continue;
        }
        let n = shape[axis];
        let (next, next_shape) = transform_axis(&data, &shape, axis, n / 2, |v, c| {
            for s in 0..n / 2 {
                c[s] = v[2 * s + 1] - 0.5 * (v[2 * s] + v[(2 * s + 2) % n]);
            }
        });
        data = next;
        shape = next_shape;
    }
    LevelBlock { level: level.clone(), coeffs: data }
}

/// `q_k(f) = Σ_s λ_{k,s}(f) φ_{k,s}`.
pub fn faber_component<F: FnMut(&[f64]) -> f64>(f: F, level: &MultiIndex) -> SparseExpansion {
    let mut cache = SampleCache::new(f, false);
    let mut out = SparseExpansion::new(level.dim(), Basis::Faber);
    out.push_block(faber_block(&mut cache, level)).expect("shape");
    out
}

/// A recovered function together with the points where `f` was sampled.
#[derive(Clone, Debug)]
pub struct Recovery {
    pub expansion: SparseExpansion,
    pub sample_points: Vec<Vec<Coord>>,
}

/// Truncated Faber series over an arbitrary level set.
///
/// With `zero_boundary`, `f` is assumed to vanish whenever a coordinate is 0
/// and is never sampled there.
pub fn recover_levels<F: FnMut(&[f64]) -> f64>(
    f: F,
    d: usize,
    levels: &[MultiIndex],
    zero_boundary: bool,
) -> Result<Recovery> {
    let mut cache = SampleCache::new(f, zero_boundary);
    let mut expansion = SparseExpansion::new(d, Basis::Faber);
    for k in levels {
        if k.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: k.dim() });
        }
        expansion.push_block(faber_block(&mut cache, k))?;
    }
    Ok(Recovery { expansion, sample_points: cache.into_points() })
}

/// The interior operator: all levels `k ∈ ℕ^d` with `|k|₁ ≤ m`, for
/// functions vanishing on the coordinate hyperplanes. Empty for `m < d`.
pub fn recover_interior<F: FnMut(&[f64]) -> f64>(f: F, d: usize, m: u32) -> Result<Recovery> {
    GridVariant::Interior.validate(d)?;
    let levels = cumulative_level_sets(d, m, GridVariant::Interior);
    recover_levels(f, d, &levels, true)
}

/// The support-bounded operator: levels `k ∈ ℤ^d_+` with `|k|₁ ≤ m` and at
/// most `ν` nonzero entries.
pub fn recover_support_bounded<F: FnMut(&[f64]) -> f64>(
    f: F,
    d: usize,
    m: u32,
    nu: usize,
) -> Result<Recovery> {
    let variant = GridVariant::SupportBounded(nu);
    variant.validate(d)?;
    recover_levels(f, d, &cumulative_level_sets(d, m, variant), false)
}

/// Dispatches on the grid variant; `Full` is the support-bounded operator
/// with `ν = d`.
pub fn recover<F: FnMut(&[f64]) -> f64>(f: F, d: usize, m: u32, variant: GridVariant) -> Result<Recovery> {
    match variant {
        GridVariant::Interior => recover_interior(f, d, m),
        GridVariant::Full => recover_support_bounded(f, d, m, d),
        GridVariant::SupportBounded(nu) => recover_support_bounded(f, d, m, nu),
    }
}

/// The cardinal functions `ψ_ξ` with `R(f) = Σ_ξ f(ξ) ψ_ξ`, one per sample
/// point, obtained by recovering the point's Kronecker delta.
pub fn sampling_functions(d: usize, m: u32, variant: GridVariant) -> Result<Vec<(Vec<Coord>, SparseExpansion)>> {
    let probe = recover(|_: &[f64]| 1.0, d, m, variant)?;
    let mut out = Vec::with_capacity(probe.sample_points.len());
    for xi in probe.sample_points {
        let target: Vec<f64> = xi.iter().map(Coord::to_f64).collect();
        let psi = recover(|x: &[f64]| f64::from(u8::from(x == target.as_slice())), d, m, variant)?;
        out.push((xi, psi.expansion));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bspline::faber_hat;
    use crate::grids::{enumerate_grid, grid_point_set};

    /// Deterministic "random" continuous function of the point.
    fn rough(x: &[f64]) -> f64 {
        x.iter()
            .enumerate()
            .map(|(j, &v)| libm::sin(7.3 * v + j as f64) * libm::cos(3.1 * v * v + 0.7))
            .product::<f64>()
            + x.iter().sum::<f64>()
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn lambda_examples() {
        let f = |x: &[f64]| libm::exp(x[0]);
        assert_eq!(lambda_functional(f, &mi(&[0]), &[0]).unwrap(), 1.0);
        for k in 1..5u32 {
            for s in 0..crate::bspline::faber_shift_count(k) {
                let v = lambda_functional(|x: &[f64]| faber_hat(k, s as i64, x[0]).unwrap(), &mi(&[k]), &[s]).unwrap();
                assert_eq!(v, 1.0);
            }
        }
        assert_eq!(lambda_functional(|_: &[f64]| 3.0, &mi(&[2, 0]), &[1, 0]).unwrap(), 0.0);
        assert!(lambda_functional(|_: &[f64]| 3.0, &mi(&[2]), &[2]).is_err());
    }

    #[test]
    fn component_matches_functional() {
        let k = mi(&[2, 3]);
        let q = faber_component(rough, &k);
        for (level, s, c) in q.terms() {
            let direct = lambda_functional(rough, &level, &s).unwrap();
            assert!((c - direct).abs() < 1e-14);
        }
        let hat = |x: &[f64]| faber_hat(2, 1, x[0]).unwrap() * faber_hat(3, 2, x[1]).unwrap();
        let q = faber_component(hat, &k);
        let terms: Vec<_> = q.terms().into_iter().filter(|t| t.2.abs() > 1e-15).collect();
        assert_eq!(terms, vec![(k.clone(), vec![1, 2], 1.0)]);
        let c = faber_component(|_: &[f64]| 4.0, &mi(&[0, 0]));
        assert_eq!(c.terms(), vec![(mi(&[0, 0]), vec![0, 0], 4.0)]);
    }

    #[test]
    fn interpolates_on_full_grid() {
        for d in 1..=3usize {
            for m in 0..=6u32 {
                let rec = recover(rough, d, m, GridVariant::Full).unwrap();
                for v in [GridVariant::Full, GridVariant::SupportBounded(d)] {
                    for p in enumerate_grid(d, m, v).unwrap() {
                        let x = p.to_f64();
                        assert!((rec.expansion.evaluate(&x) - rough(&x)).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn span_members_recovered() {
        let f = |x: &[f64]| 2.0 * faber_hat(2, 1, x[0]).unwrap() * faber_hat(1, 0, x[1]).unwrap();
        let rec = recover_interior(f, 2, 3).unwrap();
        for i in 0..50 {
            let x = [i as f64 / 50.0, (i * 7 % 50) as f64 / 50.0];
            assert!((rec.expansion.evaluate(&x) - f(&x)).abs() < 1e-12);
        }
        assert!(recover_interior(f, 3, 2).unwrap().expansion.is_empty());
    }

    #[test]
    fn sample_sets_lie_in_grids() {
        for d in 1..=3usize {
            for m in 0..=6u32 {
                let rec = recover_interior(rough, d, m).unwrap();
                let grid = grid_point_set(d, m, GridVariant::Interior).unwrap();
                assert!(rec.sample_points.iter().all(|p| grid.contains(p)));
                assert_eq!(rec.sample_points.len(), grid.len());
                for nu in 1..=d {
                    let v = GridVariant::SupportBounded(nu);
                    let rec = recover_support_bounded(rough, d, m, nu).unwrap();
                    let grid = grid_point_set(d, m, v).unwrap();
                    assert!(rec.sample_points.iter().all(|p| grid.contains(p)));
                }
            }
        }
    }

    #[test]
    fn constants_reproduced() {
        let rec = recover_support_bounded(|_: &[f64]| 2.5, 3, 4, 2).unwrap();
        for x in [[0.1, 0.2, 0.3], [0.9, 0.55, 0.0]] {
            assert!((rec.expansion.evaluate(&x) - 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn cardinal_functions_reassemble_operator() {
        let table = sampling_functions(2, 3, GridVariant::SupportBounded(2)).unwrap();
        let rec = recover(rough, 2, 3, GridVariant::SupportBounded(2)).unwrap();
        for x in [[0.13, 0.71], [0.5, 0.25], [0.99, 0.01]] {
            let via_table: f64 = table
                .iter()
                .map(|(xi, psi)| {
                    let p: Vec<f64> = xi.iter().map(Coord::to_f64).collect();
                    rough(&p) * psi.evaluate(&x)
                })
                .sum();
            assert!((via_table - rec.expansion.evaluate(&x)).abs() < 1e-12);
        }
    }
}
