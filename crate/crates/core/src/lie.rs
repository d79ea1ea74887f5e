//! Structure-constant tables, 't Hooft symbols and their validity checks.
//!
//! Generator indices are 0-based throughout the library; model files use
//! 1-based indices and convert at the boundary.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::expr::rat;

/// Sign of the permutation taking `0..n` to `idx`, or 0 if an index repeats.
pub fn permutation_sign(idx: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            match idx[i].cmp(&idx[j]) {
                std::cmp::Ordering::Equal => return 0,
                std::cmp::Ordering::Greater => sign = -sign,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    sign
}

/// Three-index Levi-Civita symbol on `{0, 1, 2}`.
pub fn epsilon3(i: usize, j: usize, k: usize) -> i32 {
    if i > 2 || j > 2 || k > 2 {
        return 0;
    }
    permutation_sign(&[i, j, k])
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("index ({0}, {1}, {2}) out of range for {3} generators")]
    IndexOutOfRange(usize, usize, usize, usize),
    #[error("representative ({0}, {1}, {2}) has a repeated index")]
    RepeatedIndex(usize, usize, usize),
    #[error("representatives disagree on the orbit of ({0}, {1}, {2})")]
    Conflict(usize, usize, usize),
}

/// Sparse table `f_abc` over `dim` generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    dim: usize,
    entries: BTreeMap<(usize, usize, usize), BigRational>,
}

impl StructureConstants {
    /// Stores exactly the given entries, without completing them. Useful for
    /// building deliberately invalid tables.
    pub fn from_entries(
        dim: usize,
        entries: impl IntoIterator<Item = ((usize, usize, usize), BigRational)>,
    ) -> Result<Self, StructureError> {
        let mut map = BTreeMap::new();
        for ((a, b, c), v) in entries {
            if a >= dim || b >= dim || c >= dim {
                return Err(StructureError::IndexOutOfRange(a, b, c, dim));
            }
            if !v.is_zero() {
                map.insert((a, b, c), v);
            }
        }
        Ok(StructureConstants { dim, entries: map })
    }

    /// Completes each representative over all six permutations with the
    /// permutation sign.
    pub fn from_representatives(
        dim: usize,
        reps: &[((usize, usize, usize), BigRational)],
    ) -> Result<Self, StructureError> {
        let mut map: BTreeMap<(usize, usize, usize), BigRational> = BTreeMap::new();
        for ((a, b, c), v) in reps {
            let (a, b, c) = (*a, *b, *c);
            if a >= dim || b >= dim || c >= dim {
                return Err(StructureError::IndexOutOfRange(a, b, c, dim));
            }
            if a == b || b == c || a == c {
                return Err(StructureError::RepeatedIndex(a, b, c));
            }
            if v.is_zero() {
                continue;
            }
            let idx = [a, b, c];
            for perm in PERMS {
                let key = (idx[perm[0]], idx[perm[1]], idx[perm[2]]);
                let val = v * rat(permutation_sign(&perm) as i64);
                match map.get(&key) {
                    Some(old) if *old != val => return Err(StructureError::Conflict(a, b, c)),
                    _ => {
                        map.insert(key, val);
                    }
                }
            }
        }
        Ok(StructureConstants { dim, entries: map })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> BigRational {
        self.entries
            .get(&(a, b, c))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Nonzero stored entries in index order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize, usize), &BigRational)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    /// Nonzero `(b, c, f_abc)` for fixed `a`.
    pub fn row(&self, a: usize) -> impl Iterator<Item = (usize, usize, &BigRational)> {
        self.entries
            .range((a, 0, 0)..(a + 1, 0, 0))
            .map(|(&(_, b, c), v)| (b, c, v))
    }

    /// One entry per orbit, with strictly increasing indices.
    pub fn representatives(&self) -> Vec<((usize, usize, usize), BigRational)> {
        self.entries
            .iter()
            .filter(|(&(a, b, c), _)| a < b && b < c)
            .map(|(k, v)| (*k, v.clone()))
            .collect()
    }

    fn dense(&self) -> Vec<BigRational> {
        let n = self.dim;
        let mut d = vec![BigRational::zero(); n * n * n];
        for (&(a, b, c), v) in &self.entries {
            d[(a * n + b) * n + c] = v.clone();
        }
        d
    }
}

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [1, 2, 0],
    [2, 0, 1],
    [1, 0, 2],
    [0, 2, 1],
    [2, 1, 0],
];

/// `f_abc = epsilon_abc`.
pub fn so3_structure() -> StructureConstants {
    StructureConstants::from_representatives(3, &[((0, 1, 2), BigRational::one())])
        .expect("valid catalog")
}

/// Antisymmetric completion of `f_321 = f_156 = f_246 = f_345 = 1`
/// (1-based labels).
pub fn so4_structure() -> StructureConstants {
    let reps = [(2, 1, 0), (0, 4, 5), (1, 3, 5), (2, 3, 4)];
    let reps: Vec<_> = reps.iter().map(|&k| (k, BigRational::one())).collect();
    StructureConstants::from_representatives(6, &reps).expect("valid catalog")
}

/// Rank of the catalog algebras (so(3) and so(4)); `None` for anything else.
pub fn known_rank(f: &StructureConstants) -> Option<usize> {
    if *f == so3_structure() {
        Some(1)
    } else if *f == so4_structure() {
        Some(2)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    /// First stored `(a, b, c)` whose transposes do not carry the opposite sign.
    pub antisymmetry_violation: Option<(usize, usize, usize)>,
    /// First `(a, b, c, d)` at which the Jacobi sum is nonzero.
    pub jacobi_violation: Option<(usize, usize, usize, usize)>,
    pub jacobi_tuples_checked: usize,
}

impl ValidityReport {
    pub fn passed(&self) -> bool {
        self.antisymmetry_violation.is_none() && self.jacobi_violation.is_none()
    }
}

pub fn check_structure(f: &StructureConstants) -> ValidityReport {
    let antisymmetry_violation = f.entries.iter().find_map(|(&(a, b, c), v)| {
        let neg = -v.clone();
        (f.get(b, a, c) != neg || f.get(a, c, b) != neg).then_some((a, b, c))
    });

    let n = f.dim;
    let d = f.dense();
    let at = |a: usize, b: usize, c: usize| &d[(a * n + b) * n + c];
    let mut jacobi_violation = None;
    'outer: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for dd in 0..n {
                    let mut s = BigRational::zero();
                    for e in 0..n {
                        s += at(a, b, e) * at(e, c, dd);
                        s += at(b, c, e) * at(e, a, dd);
                        s += at(c, a, e) * at(e, b, dd);
                    }
                    if !s.is_zero() {
                        jacobi_violation = Some((a, b, c, dd));
                        break 'outer;
                    }
                }
            }
        }
    }
    ValidityReport {
        antisymmetry_violation,
        jacobi_violation,
        jacobi_tuples_checked: n.pow(4),
    }
}

/// `eta[i][alpha][beta]`, with `i` in `0..3` standing for the triplet labels
/// 1..3 and `alpha, beta` in `0..4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThooftSymbols {
    eta: [[[i8; 4]; 4]; 3],
}

impl ThooftSymbols {
    pub fn get(&self, i: usize, alpha: usize, beta: usize) -> i8 {
        self.eta[i][alpha][beta]
    }
}

pub fn thooft_eta() -> ThooftSymbols {
    let delta = |x: usize, y: usize| (x == y) as i32;
    let mut eta = [[[0i8; 4]; 4]; 3];
    for (i, block) in eta.iter_mut().enumerate() {
        let label = i + 1;
        for (alpha, row) in block.iter_mut().enumerate() {
            for (beta, v) in row.iter_mut().enumerate() {
                let val = permutation_sign(&[0, label, alpha, beta])
                    - delta(label, alpha) * delta(0, beta)
                    + delta(0, alpha) * delta(label, beta);
                *v = val as i8;
            }
        }
    }
    ThooftSymbols { eta }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThooftReport {
    pub antisymmetry_violation: Option<(usize, usize, usize)>,
    /// First `(i, j, alpha, beta)` where the commutation identity fails.
    pub commutation_violation: Option<(usize, usize, usize, usize)>,
    pub tuples_checked: usize,
}

impl ThooftReport {
    pub fn passed(&self) -> bool {
        self.antisymmetry_violation.is_none() && self.commutation_violation.is_none()
    }
}

/// Checks antisymmetry in the vector indices and
/// `sum_rho (eta^i_{a rho} eta^j_{b rho} - eta^j_{a rho} eta^i_{b rho}) = 2 eps_ijk eta^k_{ab}`.
pub fn check_thooft(t: &ThooftSymbols) -> ThooftReport {
    let mut antisymmetry_violation = None;
    for i in 0..3 {
        for a in 0..4 {
            for b in 0..4 {
                if antisymmetry_violation.is_none() && t.get(i, a, b) != -t.get(i, b, a) {
                    antisymmetry_violation = Some((i, a, b));
                }
            }
        }
    }
    let mut commutation_violation = None;
    let mut tuples_checked = 0;
    for i in 0..3 {
        for j in 0..3 {
            for a in 0..4 {
                for b in 0..4 {
                    tuples_checked += 1;
                    let lhs: i32 = (0..4)
                        .map(|r| {
                            t.get(i, a, r) as i32 * t.get(j, b, r) as i32
                                - t.get(j, a, r) as i32 * t.get(i, b, r) as i32
                        })
                        .sum();
                    let rhs: i32 = (0..3)
                        .map(|k| 2 * epsilon3(i, j, k) * t.get(k, a, b) as i32)
                        .sum();
                    if lhs != rhs && commutation_violation.is_none() {
                        commutation_violation = Some((i, j, a, b));
                    }
                }
            }
        }
    }
    ThooftReport {
        antisymmetry_violation,
        commutation_violation,
        tuples_checked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_signs() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[2, 0, 1]), 1);
        assert_eq!(permutation_sign(&[0, 0, 1]), 0);
    }

    #[test]
    fn conflicting_representatives_are_rejected() {
        let r = StructureConstants::from_representatives(
            3,
            &[((0, 1, 2), rat(1)), ((1, 0, 2), rat(1))],
        );
        assert_eq!(r, Err(StructureError::Conflict(1, 0, 2)));
        let r = StructureConstants::from_representatives(3, &[((0, 0, 2), rat(1))]);
        assert_eq!(r, Err(StructureError::RepeatedIndex(0, 0, 2)));
    }

    #[test]
    fn representatives_round_trip() {
        let f = so4_structure();
        let g = StructureConstants::from_representatives(6, &f.representatives()).unwrap();
        assert_eq!(f, g);
        assert_eq!(f.representatives().len(), 4);
    }
}
