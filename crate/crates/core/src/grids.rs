//! Level multi-indices, exact grid coordinates and the Smolyak grids.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::math::binomial;
use crate::{Error, Rational, Result};

/// A vector of nonnegative dyadic levels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    levels: Vec<u32>,
}

impl MultiIndex {
    pub fn new(levels: Vec<u32>) -> Self {
        Self { levels }
    }

    pub fn zeros(d: usize) -> Self {
        Self { levels: vec![0; d] }
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    /// `|k|₁`.
    pub fn l1(&self) -> u32 {
        self.levels.iter().sum()
    }

    /// Coordinates with a nonzero level, in increasing order.
    pub fn support(&self) -> Vec<usize> {
        (0..self.levels.len()).filter(|&j| self.levels[j] != 0).collect()
    }

    pub fn support_len(&self) -> usize {
        self.levels.iter().filter(|&&k| k != 0).count()
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &Self) -> bool {
        self.levels.iter().zip(&other.levels).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.levels.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// An exact rational coordinate in `[0, 1)`, stored in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Coord {
    num: u64,
    den: u64,
}

impl Coord {
    /// `(num mod den) / den` in lowest terms.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let num = num % den;
        let g = num.gcd(&den);
        Self { num: num / g, den: den / g }
    }

    /// `s·2^{−k}` reduced modulo 1.
    pub fn dyadic(shift: u64, level: u32) -> Self {
        Self::new(shift, 1u64 << level)
    }

    pub fn zero() -> Self {
        Self { num: 0, den: 1 }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// The three grid families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GridVariant {
    /// `k ∈ ℕ^d` (all levels positive), shifts from 0.
    Full,
    /// `k ∈ ℕ^d`, shifts `s_j ≥ 1`.
    Interior,
    /// `k ∈ ℤ^d_+` with at most `ν` nonzero levels.
    SupportBounded(usize),
}

impl GridVariant {
    pub fn validate(&self, d: usize) -> Result<()> {
        if d == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if let GridVariant::SupportBounded(nu) = *self {
            if nu == 0 || nu > d {
                return Err(Error::InvalidParameter(alloc::format!(
                    "active-variable budget {nu} outside 1..={d}"
                )));
            }
        }
        Ok(())
    }

    fn admits(&self, k: &[u32]) -> bool {
        match *self {
            GridVariant::Full | GridVariant::Interior => k.iter().all(|&l| l > 0),
            GridVariant::SupportBounded(nu) => k.iter().filter(|&&l| l > 0).count() <= nu,
        }
    }
}

/// All `k ∈ ℤ^d_+` with `|k|₁ = m`, optionally all-positive and with a
/// support-size cap, in lexicographic order.
pub fn compositions(d: usize, m: u32, positive: bool, max_support: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; d];
    fn rec(
        j: usize,
        left: u32,
        support: usize,
        positive: bool,
        max_support: usize,
        cur: &mut Vec<u32>,
        out: &mut Vec<MultiIndex>,
    ) {
        let d = cur.len();
        if j + 1 == d {
            if positive && left == 0 {
                return;
            }
            if left > 0 && support + 1 > max_support {
                return;
            }
            cur[j] = left;
            out.push(MultiIndex::new(cur.clone()));
            return;
        }
        let lo = u32::from(positive);
        let remaining = (d - j - 1) as u32;
        let hi = if positive { left.saturating_sub(remaining) } else { left };
        if positive && left < remaining + 1 {
            return;
        }
        for v in lo..=hi {
            let s = support + usize::from(v > 0);
            if s > max_support {
                continue;
            }
            cur[j] = v;
            rec(j + 1, left - v, s, positive, max_support, cur, out);
        }
    }
    if d == 0 {
        return out;
    }
    rec(0, m, 0, positive, max_support, &mut cur, &mut out);
    out
}

/// Level multi-indices with `|k|₁ = m` admitted by the variant.
pub fn level_index_sets(d: usize, m: u32, variant: GridVariant) -> Vec<MultiIndex> {
    match variant {
        GridVariant::Full | GridVariant::Interior => compositions(d, m, true, d),
        GridVariant::SupportBounded(nu) => compositions(d, m, false, nu),
    }
}

/// Level multi-indices with `|k|₁ ≤ m` used by the recovery operators.
///
/// The interior operator keeps only all-positive levels; the support-bounded
/// one keeps `k ∈ ℤ^d_+` with `|supp(k)| ≤ ν`.
pub fn cumulative_level_sets(d: usize, m: u32, variant: GridVariant) -> Vec<MultiIndex> {
    (0..=m).flat_map(|l| level_index_sets(d, l, variant)).collect()
}

/// A distinct grid point together with every `(k, s)` that generates it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridPoint {
    pub coords: Vec<Coord>,
    pub origins: Vec<(MultiIndex, Vec<u64>)>,
}

impl GridPoint {
    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(Coord::to_f64).collect()
    }

    /// Origins whose shifts are nonzero on every active coordinate; these
    /// are the pairs counted by the cardinality formulas.
    pub fn hierarchical_origins(&self) -> impl Iterator<Item = &(MultiIndex, Vec<u64>)> + '_ {
        self.origins.iter().filter(|(k, s)| {
            k.levels().iter().zip(s).all(|(&l, &sj)| l == 0 || sj >= 1)
        })
    }
}

/// The grid at parameter `m` as a lexicographically sorted list of distinct
/// points, each with all of its generating pairs.
pub fn enumerate_grid(d: usize, m: u32, variant: GridVariant) -> Result<Vec<GridPoint>> {
    variant.validate(d)?;
    let mut points: BTreeMap<Vec<Coord>, Vec<(MultiIndex, Vec<u64>)>> = BTreeMap::new();
    let interior = variant == GridVariant::Interior;
    for k in level_index_sets(d, m, variant) {
        let ranges: Vec<(u64, u64)> = k
            .levels()
            .iter()
            .map(|&l| (u64::from(interior), 1u64 << l))
            .collect();
        if ranges.iter().any(|(lo, hi)| lo >= hi) {
            continue;
        }
        let mut s: Vec<u64> = ranges.iter().map(|r| r.0).collect();
        loop {
            let coords = s
                .iter()
                .zip(k.levels())
                .map(|(&sj, &l)| Coord::dyadic(sj, l))
                .collect();
            points.entry(coords).or_default().push((k.clone(), s.clone()));
            let mut j = d;
            loop {
                if j == 0 {
                    break;
                }
                j -= 1;
                s[j] += 1;
                if s[j] < ranges[j].1 {
                    break;
                }
                s[j] = ranges[j].0;
                if j == 0 {
                    j = usize::MAX;
                    break;
                }
            }
            if j == usize::MAX {
                break;
            }
        }
    }
    Ok(points
        .into_iter()
        .map(|(coords, origins)| GridPoint { coords, origins })
        .collect())
}

/// The set of distinct points of a grid.
pub fn grid_point_set(d: usize, m: u32, variant: GridVariant) -> Result<BTreeSet<Vec<Coord>>> {
    Ok(enumerate_grid(d, m, variant)?.into_iter().map(|p| p.coords).collect())
}

/// Closed-form size and the published upper bound of a grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridCardinality {
    /// `Σ_k Π_{j ∈ supp k} (2^{k_j} − 1)` over the admitted levels
    /// (`Σ_k 2^{|k|₁}` for the full grid).
    pub exact: BigUint,
    /// `2^m C(m−1, d−1)` or `2^m C(d, ν) C(m−1, ν−1)`; `None` when the
    /// precondition `m ≥ d` (resp. `m ≥ ν`) fails.
    pub stated_bound: Option<BigUint>,
}

/// Grid cardinality computed from the summation formula by a generating
/// function recursion over coordinates (no enumeration).
pub fn grid_cardinality(d: usize, m: u32, variant: GridVariant) -> Result<GridCardinality> {
    variant.validate(d)?;
    let m_us = m as usize;
    // poly[l][t]: weighted count over processed coordinates with level sum l
    // and t active coordinates.
    let mut poly = vec![vec![BigUint::zero(); d + 1]; m_us + 1];
    poly[0][0] = BigUint::one();
    for _ in 0..d {
        let mut next = vec![vec![BigUint::zero(); d + 1]; m_us + 1];
        for l in 0..=m_us {
            for t in 0..=d {
                if poly[l][t].is_zero() {
                    continue;
                }
                if !matches!(variant, GridVariant::Full | GridVariant::Interior) {
                    next[l][t] += &poly[l][t];
                }
                for v in 1..=(m_us - l) {
                    let w = match variant {
                        GridVariant::Full => BigUint::one() << v,
                        _ => (BigUint::one() << v) - 1u32,
                    };
                    if t < d {
                        next[l + v][t + 1] += &poly[l][t] * w;
                    }
                }
            }
        }
        poly = next;
    }
    let exact = match variant {
        GridVariant::Full | GridVariant::Interior => poly[m_us][d].clone(),
        GridVariant::SupportBounded(nu) => poly[m_us][..=nu].iter().sum(),
    };
    let two_m = BigUint::one() << m_us;
    let stated_bound = match variant {
        GridVariant::Full | GridVariant::Interior => (m_us >= d)
            .then(|| two_m * binomial(m as i64 - 1, d as i64 - 1)),
        GridVariant::SupportBounded(nu) => (m_us >= nu).then(|| {
            two_m * binomial(d as i64, nu as i64) * binomial(m as i64 - 1, nu as i64 - 1)
        }),
    };
    Ok(GridCardinality { exact, stated_bound })
}

/// Counts the generating pairs of an enumerated grid under the convention
/// of [`grid_cardinality`].
pub fn origin_count(points: &[GridPoint], variant: GridVariant) -> u64 {
    points
        .iter()
        .map(|p| match variant {
            GridVariant::Full => p.origins.len() as u64,
            _ => p.hierarchical_origins().count() as u64,
        })
        .sum()
}

/// Does `k` belong to the level family of the variant (ignoring `|k|₁`)?
pub fn admits_level(variant: GridVariant, k: &MultiIndex) -> bool {
    variant.admits(k.levels())
}
