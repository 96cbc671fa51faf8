//! Memoized function sampling at exact rational points.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::grids::Coord;

/// Caches function values keyed by exact coordinates so that every point is
/// evaluated once per recovery.
///
/// With `zero_boundary` set, points having a zero coordinate are taken to
/// carry the value 0 and the function is not called there.
pub struct SampleCache<F> {
    f: F,
    zero_boundary: bool,
    values: BTreeMap<Vec<Coord>, f64>,
    point: Vec<f64>,
}

impl<F: FnMut(&[f64]) -> f64> SampleCache<F> {
    pub fn new(f: F, zero_boundary: bool) -> Self {
        Self { f, zero_boundary, values: BTreeMap::new(), point: Vec::new() }
    }

    pub fn value(&mut self, coords: &[Coord]) -> f64 {
        if self.zero_boundary && coords.iter().any(Coord::is_zero) {
            return 0.0;
        }
        if let Some(v) = self.values.get(coords) {
            return *v;
        }
        self.point.clear();
        self.point.extend(coords.iter().map(Coord::to_f64));
        let v = (self.f)(&self.point);
        self.values.insert(coords.to_vec(), v);
        v
    }

    /// Values on the lattice `{(i_1/n_1, …, i_d/n_d)}` in row-major order.
    pub fn gather_lattice(&mut self, dens: &[u64]) -> Vec<f64> {
        let total: usize = dens.iter().map(|&n| n as usize).product();
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0u64; dens.len()];
        let mut coords: Vec<Coord> = dens.iter().map(|_| Coord::zero()).collect();
        for _ in 0..total {
            for (j, c) in coords.iter_mut().enumerate() {
                *c = Coord::new(idx[j], dens[j]);
            }
            out.push(self.value(&coords));
            for j in (0..dens.len()).rev() {
                idx[j] += 1;
                if idx[j] < dens[j] {
                    break;
                }
                idx[j] = 0;
            }
        }
        out
    }

    /// Number of distinct points at which the function was evaluated.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Points actually evaluated, in lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = &Vec<Coord>> + '_ {
        self.values.keys()
    }

    pub fn into_points(self) -> Vec<Vec<Coord>> {
        self.values.into_keys().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::cell::Cell;

    #[test]
    fn memoizes_and_skips_boundary() {
        let calls = Cell::new(0);
        let mut cache = SampleCache::new(
            |x: &[f64]| {
                calls.set(calls.get() + 1);
                x[0] + x[1]
            },
            true,
        );
        let v = cache.gather_lattice(&[2, 4]);
        assert_eq!(v, vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.75, 1.0, 1.25]);
        assert_eq!(calls.get(), 3);
        cache.gather_lattice(&[2, 2]);
        assert_eq!(calls.get(), 3);
        assert_eq!(cache.len(), 3);
    }
}
