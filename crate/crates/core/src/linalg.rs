//! Sparse exact linear algebra over cyclotomic scalars.
//!
//! Everything is built around [`Echelon`], an incrementally maintained
//! reduced row echelon form. Solving, kernels, ranks and subspace
//! coordinates all go through it.

use std::collections::BTreeMap;

use crate::exactnum::Cyclotomic;

pub type Scalar = Cyclotomic;

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, Scalar::one())] }
    }

    pub fn single(i: usize, c: Scalar) -> Self {
        if c.is_zero() {
            Self::new()
        } else {
            SparseVec { entries: vec![(i, c)] }
        }
    }

    /// Build from arbitrary (index, value) pairs; duplicates are summed.
    pub fn from_pairs(mut pairs: Vec<(usize, Scalar)>) -> Self {
        pairs.sort_by_key(|p| p.0);
        let mut entries: Vec<(usize, Scalar)> = Vec::with_capacity(pairs.len());
        for (i, c) in pairs {
            match entries.last_mut() {
                Some((j, acc)) if *j == i => *acc += &c,
                _ => entries.push((i, c)),
            }
        }
        entries.retain(|(_, c)| !c.is_zero());
        SparseVec { entries }
    }

    /// From strictly increasing indices with nonzero values.
    pub fn from_sorted(entries: Vec<(usize, Scalar)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|(_, c)| !c.is_zero()));
        SparseVec { entries }
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        SparseVec {
            entries: v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect(),
        }
    }

    pub fn to_dense(&self, n: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); n];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Scalar)> {
        self.entries.iter()
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn leading(&self) -> Option<&(usize, Scalar)> {
        self.entries.first()
    }

    pub fn get(&self, i: usize) -> Scalar {
        match self.entries.binary_search_by_key(&i, |p| p.0) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    fn get_ref(&self, i: usize) -> Option<&Scalar> {
        self.entries.binary_search_by_key(&i, |p| p.0).ok().map(|k| &self.entries[k].1)
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        if c.is_one() {
            return self.clone();
        }
        SparseVec { entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect() }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Scalar, other: &SparseVec) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => {
                    let (j, y) = b.next().unwrap();
                    out.push((*j, y * c));
                }
                (Some((i, _)), Some((j, _))) => {
                    if i < j {
                        out.push(a.next().unwrap().clone());
                    } else if j < i {
                        let (j, y) = b.next().unwrap();
                        out.push((*j, y * c));
                    } else {
                        let (i, x) = a.next().unwrap();
                        let (_, y) = b.next().unwrap();
                        let s = x + &(y * c);
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                    }
                }
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> Self {
        self.add_scaled(&Scalar::one(), other)
    }

    pub fn sub(&self, other: &SparseVec) -> Self {
        self.add_scaled(&Scalar::from_int(-1), other)
    }

    /// Shift all indices by `offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        SparseVec { entries: self.entries.iter().map(|(i, c)| (i + offset, c.clone())).collect() }
    }

    /// Keep only indices `< n`.
    pub fn truncated(&self, n: usize) -> Self {
        SparseVec { entries: self.entries.iter().filter(|(i, _)| *i < n).cloned().collect() }
    }

    /// Entries with index `>= n`, shifted down by `n`.
    pub fn tail_from(&self, n: usize) -> Self {
        SparseVec { entries: self.entries.iter().filter(|(i, _)| *i >= n).map(|(i, c)| (i - n, c.clone())).collect() }
    }

    pub fn dot(&self, dense: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (i, c) in &self.entries {
            if !dense[*i].is_zero() {
                acc += &(c * &dense[*i]);
            }
        }
        acc
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|p| p.0)
    }
}

/// Outcome of inserting a row into an [`Echelon`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Insert {
    /// The row was independent; its pivot column is returned.
    Independent(usize),
    /// The row reduced to zero.
    Dependent,
    /// The row reduced to something supported only on columns at or beyond
    /// the limit (an inconsistent equation when those columns hold a
    /// right-hand side).
    Inconsistent,
}

/// Incremental reduced row echelon form.
///
/// Rows are kept fully reduced: every stored row is zero in every pivot
/// column other than its own, and has leading coefficient 1. Columns at or
/// beyond `pivot_limit` are never used as pivots.
#[derive(Clone, Debug)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    pivots: BTreeMap<usize, usize>,
    pivot_limit: usize,
}

impl Echelon {
    pub fn new() -> Self {
        Self::with_pivot_limit(usize::MAX)
    }

    pub fn with_pivot_limit(limit: usize) -> Self {
        Echelon { rows: Vec::new(), pivots: BTreeMap::new(), pivot_limit: limit }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = (usize, &SparseVec)> {
        self.pivots.iter().map(move |(c, r)| (*c, &self.rows[*r]))
    }

    pub fn row_for_pivot(&self, col: usize) -> Option<&SparseVec> {
        self.pivots.get(&col).map(|&r| &self.rows[r])
    }

    /// Reduce `v` against the stored rows.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        // Reduced rows are zero on other pivot columns, so one pass over the
        // pivot columns present in `v` suffices.
        let hits: Vec<(usize, Scalar)> = v
            .iter()
            .filter(|(c, _)| self.pivots.contains_key(c))
            .map(|(c, x)| (*c, x.clone()))
            .collect();
        for (c, x) in hits {
            let row = &self.rows[self.pivots[&c]];
            out = out.add_scaled(&-x, row);
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).truncated(self.pivot_limit).is_zero()
    }

    pub fn insert(&mut self, v: &SparseVec) -> Insert {
        let r = self.reduce(v);
        let Some((lead, lc)) = r.leading().cloned() else { return Insert::Dependent };
        if lead >= self.pivot_limit {
            return Insert::Inconsistent;
        }
        let r = r.scaled(&lc.inv().expect("nonzero leading coefficient"));
        for row in self.rows.iter_mut() {
            if let Some(x) = row.get_ref(lead) {
                let x = -x;
                *row = row.add_scaled(&x, &r);
            }
        }
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(r);
        Insert::Independent(lead)
    }

    /// Rows sorted by pivot column: the canonical reduced basis.
    pub fn basis(&self) -> Vec<SparseVec> {
        self.pivots.values().map(|&r| self.rows[r].clone()).collect()
    }
}

impl Default for Echelon {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("linear system is inconsistent")]
    Inconsistent,
}

/// Solution of a linear system with its rank information.
#[derive(Debug, Clone)]
pub struct Solution {
    pub values: Vec<Scalar>,
    pub rank: usize,
    pub nvars: usize,
}

impl Solution {
    pub fn is_unique(&self) -> bool {
        self.rank == self.nvars
    }
}

/// Solve `sum_j a_ij x_j = b_i`, given rows as `(a_i, b_i)`. Free variables
/// are set to zero.
pub fn solve(nvars: usize, rows: impl IntoIterator<Item = (SparseVec, Scalar)>) -> Result<Solution, SolveError> {
    let mut ech = Echelon::with_pivot_limit(nvars);
    for (a, b) in rows {
        let mut row = a;
        if !b.is_zero() {
            row = row.add(&SparseVec::single(nvars, b));
        }
        if ech.insert(&row) == Insert::Inconsistent {
            return Err(SolveError::Inconsistent);
        }
    }
    let mut values = vec![Scalar::zero(); nvars];
    for (c, row) in ech.pivot_columns() {
        values[c] = row.get(nvars);
    }
    Ok(Solution { values, rank: ech.rank(), nvars })
}

/// Basis of `{x : a_i . x = 0 for all rows a_i}`.
pub fn kernel(nvars: usize, rows: impl IntoIterator<Item = SparseVec>) -> Vec<SparseVec> {
    let mut ech = Echelon::new();
    for r in rows {
        ech.insert(&r);
    }
    kernel_of(&ech, nvars)
}

pub fn kernel_of(ech: &Echelon, nvars: usize) -> Vec<SparseVec> {
    let free: Vec<usize> = (0..nvars).filter(|c| ech.row_for_pivot(*c).is_none()).collect();
    free.iter()
        .map(|&f| {
            let mut pairs = vec![(f, Scalar::one())];
            for (c, row) in ech.pivot_columns() {
                let x = row.get(f);
                if !x.is_zero() {
                    pairs.push((c, -x));
                }
            }
            SparseVec::from_pairs(pairs)
        })
        .collect()
}

/// Basis of the linear relations among `cols`: vectors `x` with
/// `sum_i x_i cols[i] = 0`.
pub fn column_kernel(cols: &[SparseVec]) -> Vec<SparseVec> {
    let offset = cols.iter().filter_map(|c| c.max_index()).max().map_or(0, |m| m + 1);
    let mut ech = Echelon::with_pivot_limit(offset);
    let mut out = Vec::new();
    for (i, c) in cols.iter().enumerate() {
        let row = c.add(&SparseVec::unit(offset + i));
        let r = ech.reduce(&row);
        if r.truncated(offset).is_zero() {
            out.push(r.tail_from(offset));
        } else {
            ech.insert(&r);
        }
    }
    out
}

pub fn rank(vectors: &[SparseVec]) -> usize {
    let mut ech = Echelon::new();
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}

/// Coordinates with respect to a fixed (not necessarily echelon) basis of a
/// subspace of `k^n`.
#[derive(Clone, Debug)]
pub struct SubspaceCoords {
    n: usize,
    dim: usize,
    ech: Echelon,
}

impl SubspaceCoords {
    /// `basis` must be linearly independent; returns `None` otherwise.
    pub fn new(n: usize, basis: &[SparseVec]) -> Option<Self> {
        let mut ech = Echelon::with_pivot_limit(n);
        for (k, v) in basis.iter().enumerate() {
            debug_assert!(v.max_index().is_none_or(|m| m < n));
            let row = v.add(&SparseVec::unit(n + k));
            if !matches!(ech.insert(&row), Insert::Independent(c) if c < n) {
                return None;
            }
        }
        Some(SubspaceCoords { n, dim: basis.len(), ech })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    /// Coordinates of `v` in the basis, or `None` if `v` is outside the span.
    pub fn coords(&self, v: &SparseVec) -> Option<SparseVec> {
        let r = self.ech.reduce(v);
        if !r.truncated(self.n).is_zero() {
            return None;
        }
        let tag = r.tail_from(self.n);
        Some(tag.scaled(&Scalar::from_int(-1)))
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.ech.reduce(v).truncated(self.n).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(pairs: &[(usize, i64)]) -> SparseVec {
        SparseVec::from_pairs(pairs.iter().map(|&(i, c)| (i, Scalar::from_int(c))).collect())
    }

    #[test]
    fn add_scaled_cancels() {
        let a = v(&[(0, 1), (2, 3)]);
        let b = v(&[(2, 1), (5, 1)]);
        let s = a.add_scaled(&Scalar::from_int(-3), &b);
        assert_eq!(s, v(&[(0, 1), (5, -3)]));
    }

    #[test]
    fn solve_small_system() {
        // x + y = 3, x - y = 1
        let sol = solve(2, vec![(v(&[(0, 1), (1, 1)]), Scalar::from_int(3)), (v(&[(0, 1), (1, -1)]), Scalar::from_int(1))])
            .unwrap();
        assert!(sol.is_unique());
        assert_eq!(sol.values, vec![Scalar::from_int(2), Scalar::from_int(1)]);
    }

    #[test]
    fn inconsistent_system() {
        let r = solve(1, vec![(v(&[(0, 1)]), Scalar::from_int(1)), (v(&[(0, 2)]), Scalar::from_int(1))]);
        assert_eq!(r.unwrap_err(), SolveError::Inconsistent);
    }

    #[test]
    fn kernel_dimension() {
        let k = kernel(3, vec![v(&[(0, 1), (1, 1), (2, 1)])]);
        assert_eq!(k.len(), 2);
        for x in &k {
            assert!(x.dot(&[Scalar::one(), Scalar::one(), Scalar::one()]).is_zero());
        }
    }

    #[test]
    fn coords_roundtrip() {
        let basis = vec![v(&[(0, 1), (1, 1)]), v(&[(1, 1), (2, 2)])];
        let sc = SubspaceCoords::new(3, &basis).unwrap();
        let w = v(&[(0, 2), (1, -1), (2, -6)]);
        let c = sc.coords(&w).unwrap();
        assert_eq!(c, v(&[(0, 2), (1, -3)]));
        assert!(sc.coords(&v(&[(2, 1)])).is_none());
        assert!(SubspaceCoords::new(3, &[basis[0].clone(), basis[0].clone()]).is_none());
    }
}
