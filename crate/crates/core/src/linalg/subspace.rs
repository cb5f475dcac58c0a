use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::SparseVec;
use crate::rational::Rational;

const NONE: u32 = u32::MAX;

/// Reduces `v` against echelon rows (each row has leading entry 1 at its pivot).
///
/// Columns are visited in increasing order, so the residual is the unique
/// representative of `v + span(rows)` that vanishes on every pivot column.
fn reduce_with(rows: &[SparseVec], pivot_of: &[u32], v: &SparseVec) -> SparseVec {
    if v.entries().iter().all(|(c, _)| pivot_of[*c as usize] == NONE) {
        return v.clone();
    }
    let mut work: BTreeMap<u32, Rational> = v.entries().iter().cloned().collect();
    let mut out = Vec::new();
    while let Some((c, x)) = work.pop_first() {
        if x.is_zero() {
            continue;
        }
        let r = pivot_of[c as usize];
        if r == NONE {
            out.push((c, x));
            continue;
        }
        for (j, y) in &rows[r as usize].entries()[1..] {
            work.entry(*j).or_insert_with(Rational::zero).sub_mul_assign(&x, y);
        }
    }
    SparseVec::from_sorted_unchecked(out)
}

fn check_columns(v: &SparseVec, dim: usize) -> Result<()> {
    match v.max_col() {
        Some(c) if c as usize >= dim => Err(Error::IndexingMismatch(format!(
            "column {c} outside ambient dimension {dim}"
        ))),
        _ => Ok(()),
    }
}

/// Incremental row echelon form. Rows are kept with unit pivots; other rows
/// may still carry entries in a newer row's pivot column until [`Echelon::finish`].
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    fingerprint: u64,
    rows: Vec<SparseVec>,
    pivot_of: Vec<u32>,
}

impl Echelon {
    pub fn new(dim: usize, fingerprint: u64) -> Self {
        Self { dim, fingerprint, rows: Vec::new(), pivot_of: vec![NONE; dim] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        reduce_with(&self.rows, &self.pivot_of, v)
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        assert!(
            v.max_col().is_none_or(|c| (c as usize) < self.dim),
            "vector column outside ambient dimension {}",
            self.dim
        );
        let r = self.reduce(v);
        self.push_reduced(r)
    }

    fn push_reduced(&mut self, r: SparseVec) -> bool {
        let Some((p, lead)) = r.leading() else {
            return false;
        };
        let row = if lead.is_one() { r } else { r.scale(&lead.recip()) };
        self.pivot_of[p as usize] = self.rows.len() as u32;
        self.rows.push(row);
        true
    }

    /// Reduces a batch in parallel against the current rows, then inserts
    /// sequentially in input order. The resulting span and canonical form are
    /// the same as inserting one at a time.
    pub fn extend_par(&mut self, vs: &[SparseVec]) {
        let pre: Vec<SparseVec> = vs.par_iter().map(|v| self.reduce(v)).collect();
        for r in pre {
            if r.is_zero() {
                continue;
            }
            let r = self.reduce(&r);
            self.push_reduced(r);
        }
    }

    /// Rows whose pivot is at or after `col`.
    fn rows_from(&self, col: u32) -> impl Iterator<Item = &SparseVec> {
        self.rows.iter().filter(move |r| r.leading().unwrap().0 >= col)
    }

    /// Back-substitutes into the canonical reduced row echelon form.
    pub fn finish(self) -> Subspace {
        let Echelon { dim, fingerprint, mut rows, .. } = self;
        rows.sort_by_key(|r| r.leading().unwrap().0);
        let mut pivot_of = vec![NONE; dim];
        for (i, r) in rows.iter().enumerate() {
            pivot_of[r.leading().unwrap().0 as usize] = i as u32;
        }
        for i in (0..rows.len()).rev() {
            let entries = rows[i].entries();
            let (p, _) = entries[0];
            if entries[1..].iter().all(|(c, _)| pivot_of[*c as usize] == NONE) {
                continue;
            }
            let tail = SparseVec::from_sorted_unchecked(entries[1..].to_vec());
            let tail = reduce_with(&rows, &pivot_of, &tail);
            let mut e = Vec::with_capacity(tail.nnz() + 1);
            e.push((p, Rational::one()));
            e.extend(tail.into_entries());
            rows[i] = SparseVec::from_sorted_unchecked(e);
        }
        Subspace { dim, fingerprint, rows, pivot_of }
    }
}

/// A linear subspace of ℚ^dim, stored as its reduced row echelon basis.
///
/// The representation is canonical: two subspaces over the same indexing are
/// equal exactly when their row lists are identical.
#[derive(Clone, Debug)]
pub struct Subspace {
    dim: usize,
    fingerprint: u64,
    rows: Vec<SparseVec>,
    pivot_of: Vec<u32>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.fingerprint == other.fingerprint && self.rows == other.rows
    }
}

impl Eq for Subspace {}

impl Subspace {
    pub fn zero(dim: usize, fingerprint: u64) -> Self {
        Echelon::new(dim, fingerprint).finish()
    }

    pub fn span<'a, I>(vectors: I, dim: usize, fingerprint: u64) -> Self
    where
        I: IntoIterator<Item = &'a SparseVec>,
    {
        let mut e = Echelon::new(dim, fingerprint);
        for v in vectors {
            e.insert(v);
        }
        e.finish()
    }

    /// Like [`Subspace::span`], reducing batches of vectors in parallel.
    pub fn span_par(vectors: &[SparseVec], dim: usize, fingerprint: u64) -> Self {
        let mut e = Echelon::new(dim, fingerprint);
        for chunk in vectors.chunks(256) {
            e.extend_par(chunk);
        }
        e.finish()
    }

    /// Rebuilds a subspace from rows claimed to be in reduced row echelon form,
    /// checking every invariant.
    pub fn from_rref_rows(rows: Vec<SparseVec>, dim: usize, fingerprint: u64) -> Result<Self> {
        let mut pivot_of = vec![NONE; dim];
        let mut last: Option<u32> = None;
        for (i, r) in rows.iter().enumerate() {
            check_columns(r, dim)?;
            let (p, lead) = r
                .leading()
                .ok_or_else(|| Error::CacheFormat(format!("row {i} is zero")))?;
            if !lead.is_one() {
                return Err(Error::CacheFormat(format!("row {i} pivot is {lead}, not 1")));
            }
            if last.is_some_and(|q| q >= p) {
                return Err(Error::CacheFormat("pivots not strictly increasing".into()));
            }
            last = Some(p);
            pivot_of[p as usize] = i as u32;
        }
        for (i, r) in rows.iter().enumerate() {
            for (c, _) in &r.entries()[1..] {
                if pivot_of[*c as usize] != NONE {
                    return Err(Error::CacheFormat(format!(
                        "row {i} has an entry in pivot column {c}"
                    )));
                }
            }
        }
        Ok(Self { dim, fingerprint, rows, pivot_of })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.iter().map(|r| r.leading().unwrap().0)
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        self.pivot_of[col as usize] != NONE
    }

    fn check_compat(&self, other: &Subspace) -> Result<()> {
        if self.dim != other.dim || self.fingerprint != other.fingerprint {
            return Err(Error::IndexingMismatch(format!(
                "subspaces over ({}, {:016x}) and ({}, {:016x})",
                self.dim, self.fingerprint, other.dim, other.fingerprint
            )));
        }
        Ok(())
    }

    /// Residual of `v` after reduction: the quotient coordinates of `v + S`.
    pub fn reduce(&self, v: &SparseVec) -> Result<SparseVec> {
        check_columns(v, self.dim)?;
        Ok(reduce_with(&self.rows, &self.pivot_of, v))
    }

    pub fn member(&self, v: &SparseVec) -> Result<bool> {
        Ok(self.reduce(v)?.is_zero())
    }

    /// Coordinates of `v` in the quotient by this subspace, supported on the
    /// non-pivot columns. Zero exactly when `v` is a member.
    pub fn quotient_coords(&self, v: &SparseVec) -> Result<SparseVec> {
        self.reduce(v)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compat(other)?;
        let (big, small) = if self.rank() >= other.rank() { (self, other) } else { (other, self) };
        let mut e = Echelon { dim: big.dim, fingerprint: big.fingerprint, rows: big.rows.clone(), pivot_of: big.pivot_of.clone() };
        for r in &small.rows {
            e.insert(r);
        }
        Ok(e.finish())
    }

    /// Intersection by the Zassenhaus stacked elimination: rows `[s | s]` and
    /// `[t | 0]`; the rows with vanishing left half span `S ∩ T`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compat(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.dim, self.fingerprint));
        }
        let d = self.dim as u32;
        let mut e = Echelon::new(2 * self.dim, 0);
        for s in &self.rows {
            e.insert(&s.add(&s.shifted(d)));
        }
        for t in &other.rows {
            e.insert(t);
        }
        let rows: Vec<SparseVec> = e.rows_from(d).map(|r| r.window(d, 2 * d)).collect();
        Ok(Subspace::span(&rows, self.dim, self.fingerprint))
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_compat(other)?;
        for r in &other.rows {
            if !self.member(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First row of `other` that is not in `self`, if any.
    pub fn first_non_member(&self, other: &Subspace) -> Result<Option<SparseVec>> {
        self.check_compat(other)?;
        for r in &other.rows {
            if !self.member(r)? {
                return Ok(Some(r.clone()));
            }
        }
        Ok(None)
    }

    pub fn equal(&self, other: &Subspace) -> Result<bool> {
        self.check_compat(other)?;
        Ok(self == other)
    }

    /// Image of this subspace in the quotient by `k`, written in `k`'s
    /// quotient coordinates (same indexing, supported off `k`'s pivots).
    pub fn image_mod(&self, k: &Subspace) -> Result<Subspace> {
        self.check_compat(k)?;
        let q: Vec<SparseVec> = self.rows.par_iter().map(|r| k.reduce(r)).collect::<Result<_>>()?;
        Ok(Subspace::span(&q, self.dim, self.fingerprint))
    }
}

/// Kernel of the linear map `e_i ↦ images[i] + modulo` from ℚ^m into the
/// quotient of the target by `modulo`. The result lives in a domain of
/// dimension `images.len()` with the given fingerprint.
pub fn kernel_mod(images: &[SparseVec], modulo: &Subspace, domain_fingerprint: u64) -> Result<Subspace> {
    let t = modulo.dim() as u32;
    let m = images.len();
    let reduced: Vec<SparseVec> = images.par_iter().map(|v| modulo.reduce(v)).collect::<Result<_>>()?;
    let mut e = Echelon::new(t as usize + m, 0);
    for (i, q) in reduced.into_iter().enumerate() {
        let mut entries = q.into_entries();
        entries.push((t + i as u32, Rational::one()));
        e.insert(&SparseVec::from_sorted_unchecked(entries));
    }
    let rows: Vec<SparseVec> = e.rows_from(t).map(|r| r.window(t, t + m as u32)).collect();
    Ok(Subspace::span(&rows, m, domain_fingerprint))
}

/// Rank of a family of vectors in ℚ^dim.
pub fn rank_of(vectors: &[SparseVec], dim: usize) -> usize {
    Subspace::span_par(vectors, dim, 0).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(u32, i64)]) -> SparseVec {
        SparseVec::from_entries(entries.iter().map(|(c, x)| (*c, Rational::from_int(*x))))
    }

    #[test]
    fn empty_span_is_zero() {
        let s = Subspace::span(&[], 4, 0);
        assert_eq!(s.rank(), 0);
        assert!(s.member(&SparseVec::new()).unwrap());
    }

    #[test]
    fn scalar_multiple_does_not_raise_rank() {
        let a = v(&[(0, 1), (2, 3)]);
        let s = Subspace::span(&[a.clone(), a.scale(&Rational::from_int(2))], 3, 0);
        assert_eq!(s.rank(), 1);
        assert!(s.member(&a).unwrap());
    }

    #[test]
    fn rref_is_fully_reduced() {
        let s = Subspace::span(&[v(&[(0, 1), (1, 1), (2, 1)]), v(&[(1, 1), (2, 2)])], 3, 0);
        assert_eq!(s.rows()[0], v(&[(0, 1), (2, -1)]));
        assert_eq!(s.rows()[1], v(&[(1, 1), (2, 2)]));
    }

    #[test]
    fn quotient_coords_vanish_on_members() {
        let k = Subspace::span(&[v(&[(0, 1), (1, -1)])], 3, 0);
        assert!(k.quotient_coords(&v(&[(0, 2), (1, -2)])).unwrap().is_zero());
        assert_eq!(k.quotient_coords(&v(&[(0, 1)])).unwrap(), v(&[(1, 1)]));
        let zero = Subspace::zero(3, 0);
        assert_eq!(zero.quotient_coords(&v(&[(2, 5)])).unwrap(), v(&[(2, 5)]));
    }

    #[test]
    fn intersect_examples() {
        let s = Subspace::span(&[v(&[(0, 1)]), v(&[(1, 1)])], 3, 0);
        let t = Subspace::span(&[v(&[(1, 1), (2, 1)]), v(&[(0, 1), (2, 1)])], 3, 0);
        let i = s.intersect(&t).unwrap();
        assert_eq!(i.rank(), 1);
        assert!(i.member(&v(&[(0, 1), (1, -1)])).unwrap());
        assert_eq!(s.intersect(&s).unwrap(), s);
        assert!(s.intersect(&Subspace::zero(3, 0)).unwrap().is_zero());
    }

    #[test]
    fn mismatched_indexings_are_rejected() {
        let s = Subspace::zero(3, 1);
        let t = Subspace::zero(3, 2);
        assert!(matches!(s.sum(&t), Err(Error::IndexingMismatch(_))));
        assert!(s.member(&v(&[(7, 1)])).is_err());
    }

    #[test]
    fn kernel_of_map() {
        // e0 -> x, e1 -> 2x, e2 -> y, modulo span{y}
        let images = vec![v(&[(0, 1)]), v(&[(0, 2)]), v(&[(1, 1)])];
        let modulo = Subspace::span(&[v(&[(1, 1)])], 2, 0);
        let k = kernel_mod(&images, &modulo, 9).unwrap();
        assert_eq!(k.rank(), 2);
        assert!(k.member(&v(&[(0, 2), (1, -1)])).unwrap());
        assert!(k.member(&v(&[(2, 1)])).unwrap());
    }

    #[test]
    fn rejects_malformed_rref() {
        let bad = vec![v(&[(0, 1), (1, 1)]), v(&[(1, 1)])];
        assert!(Subspace::from_rref_rows(bad, 2, 0).is_err());
        let bad = vec![v(&[(0, 2)])];
        assert!(Subspace::from_rref_rows(bad, 2, 0).is_err());
    }
}
