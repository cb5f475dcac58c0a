use std::collections::HashMap;
use std::fmt::Display;
use std::hash::Hash;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{SparseVec, Subspace};
use crate::rational::Rational;

/// A fixed, ordered family of basis keys with a bijection to column indices.
///
/// The fingerprint is a digest of the keys' text forms in order; two indexings
/// with equal fingerprints are treated as the same coordinate system.
#[derive(Clone, Debug)]
pub struct BasisIndexing<K> {
    keys: Vec<K>,
    index: HashMap<K, u32>,
    fingerprint: u64,
}

impl<K: Clone + Eq + Hash + Display> BasisIndexing<K> {
    pub fn new(keys: Vec<K>) -> Self {
        let mut hasher = Sha256::new();
        for k in &keys {
            hasher.update(k.to_string().as_bytes());
            hasher.update(b"\n");
        }
        let digest = hasher.finalize();
        let fingerprint = u64::from_be_bytes(digest[..8].try_into().unwrap());
        let index = keys.iter().enumerate().map(|(i, k)| (k.clone(), i as u32)).collect();
        Self { keys, index, fingerprint }
    }

    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn keys(&self) -> &[K] {
        &self.keys
    }

    pub fn key(&self, col: u32) -> &K {
        &self.keys[col as usize]
    }

    pub fn index_of(&self, key: &K) -> Result<u32> {
        self.index.get(key).copied().ok_or_else(|| Error::UnknownKey(key.to_string()))
    }

    pub fn vector<'a, I>(&self, terms: I) -> Result<SparseVec>
    where
        I: IntoIterator<Item = (&'a K, &'a Rational)>,
        K: 'a,
    {
        let mut entries = Vec::new();
        for (k, x) in terms {
            entries.push((self.index_of(k)?, x.clone()));
        }
        Ok(SparseVec::from_entries(entries))
    }

    /// Maps a vector back to `(key, coefficient)` pairs.
    pub fn terms<'s>(&'s self, v: &'s SparseVec) -> impl Iterator<Item = (&'s K, &'s Rational)> {
        v.entries().iter().map(move |(c, x)| (self.key(*c), x))
    }

    pub fn zero_subspace(&self) -> Subspace {
        Subspace::zero(self.dim(), self.fingerprint)
    }

    pub fn span<'a, I>(&self, vectors: I) -> Subspace
    where
        I: IntoIterator<Item = &'a SparseVec>,
    {
        Subspace::span(vectors, self.dim(), self.fingerprint)
    }

    pub fn full(&self) -> Subspace {
        let units: Vec<SparseVec> = (0..self.dim() as u32).map(SparseVec::unit).collect();
        self.span(&units)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_key_is_an_error() {
        let ix = BasisIndexing::new(vec!["a".to_string(), "b".to_string()]);
        assert_eq!(ix.index_of(&"b".to_string()).unwrap(), 1);
        assert!(matches!(ix.index_of(&"c".to_string()), Err(Error::UnknownKey(_))));
    }

    #[test]
    fn fingerprint_depends_on_order() {
        let a = BasisIndexing::new(vec![1u32, 2, 3]);
        let b = BasisIndexing::new(vec![1u32, 3, 2]);
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint(), BasisIndexing::new(vec![1u32, 2, 3]).fingerprint());
    }
}
