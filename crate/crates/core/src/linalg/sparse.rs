use std::collections::BTreeMap;
use std::fmt;

use crate::rational::Rational;

/// A sparse rational vector: strictly increasing columns, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(u32, Rational)>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    /// Collects arbitrary `(column, value)` pairs, summing duplicates and dropping zeros.
    pub fn from_entries<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (u32, Rational)>,
    {
        let mut acc: BTreeMap<u32, Rational> = BTreeMap::new();
        for (c, x) in entries {
            if x.is_zero() {
                continue;
            }
            match acc.get_mut(&c) {
                Some(y) => *y = &*y + &x,
                None => {
                    acc.insert(c, x);
                }
            }
        }
        Self { entries: acc.into_iter().filter(|(_, x)| !x.is_zero()).collect() }
    }

    /// Wraps entries that are already sorted by column and free of zeros.
    pub(crate) fn from_sorted_unchecked(entries: Vec<(u32, Rational)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|(_, x)| !x.is_zero()));
        Self { entries }
    }

    pub fn unit(col: u32) -> Self {
        Self { entries: vec![(col, Rational::one())] }
    }

    pub fn entries(&self) -> &[(u32, Rational)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(u32, Rational)> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn leading(&self) -> Option<(u32, &Rational)> {
        self.entries.first().map(|(c, x)| (*c, x))
    }

    pub fn max_col(&self) -> Option<u32> {
        self.entries.last().map(|(c, _)| *c)
    }

    pub fn get(&self, col: u32) -> Rational {
        match self.entries.binary_search_by_key(&col, |(c, _)| *c) {
            Ok(i) => self.entries[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn scale(&self, f: &Rational) -> SparseVec {
        if f.is_zero() {
            return SparseVec::new();
        }
        Self { entries: self.entries.iter().map(|(c, x)| (*c, x * f)).collect() }
    }

    /// `self + f * other`.
    pub fn add_scaled(&self, f: &Rational, other: &SparseVec) -> SparseVec {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                let x = f * &b[j].1;
                if !x.is_zero() {
                    out.push((b[j].0, x));
                }
                j += 1;
            } else {
                let mut x = a[i].1.clone();
                x.sub_mul_assign(&-f, &b[j].1);
                if !x.is_zero() {
                    out.push((a[i].0, x));
                }
                i += 1;
                j += 1;
            }
        }
        Self { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(&Rational::one(), other)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(&-Rational::one(), other)
    }

    pub fn dot(&self, other: &SparseVec) -> Rational {
        let mut acc = Rational::zero();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc.sub_mul_assign(&-&a[i].1, &b[j].1);
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    /// Shifts every column by `offset` (used to build stacked matrices).
    pub fn shifted(&self, offset: u32) -> SparseVec {
        Self { entries: self.entries.iter().map(|(c, x)| (c + offset, x.clone())).collect() }
    }

    /// Keeps the entries with `lo <= col < hi`, re-based to start at zero.
    pub fn window(&self, lo: u32, hi: u32) -> SparseVec {
        Self {
            entries: self
                .entries
                .iter()
                .filter(|(c, _)| *c >= lo && *c < hi)
                .map(|(c, x)| (c - lo, x.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, (c, x)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}:{x}")?;
        }
        write!(f, "]")
    }
}

impl FromIterator<(u32, Rational)> for SparseVec {
    fn from_iter<T: IntoIterator<Item = (u32, Rational)>>(iter: T) -> Self {
        SparseVec::from_entries(iter)
    }
}
