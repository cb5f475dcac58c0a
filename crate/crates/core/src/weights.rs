//! Chord diagrams, insertions of `μ`, the weight filtration of `H^{⊗n}`,
//! Labute's presentation of `gr^I ℚπ`, the generator families `B^{s,r}`,
//! cyclic invariants and the symplectic action on tensors.
//!
//! Tensors are [`AlgebraElement`]s that are homogeneous of their degree; the
//! coordinate space of `H^{⊗n}` is indexed by [`tensor_basis`].

use std::fmt;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupring::{AlgebraElement, Gen, Word};
use crate::linalg::{BasisIndexing, SparseVec, Subspace};
use crate::rational::Rational;

/// All monomials of degree `k`, lexicographic in the canonical letter order.
pub fn tensor_basis(k: usize, g: usize) -> BasisIndexing<Word> {
    BasisIndexing::new(Word::all(k, g))
}

/// Coordinates of a homogeneous tensor of degree `ix`'s word length.
pub fn tensor_vector(v: &AlgebraElement, ix: &BasisIndexing<Word>) -> Result<SparseVec> {
    ix.vector(v.terms())
}

/// The tensor with the given coordinates, at cap `k`.
pub fn tensor_from_vector(v: &SparseVec, ix: &BasisIndexing<Word>, k: usize) -> Result<AlgebraElement> {
    AlgebraElement::from_terms(ix.terms(v).map(|(w, c)| (w.clone(), c.clone())), k)
}

/// A chord diagram `(k̲, l̲)` in `[n]`: `r` disjoint pairs `k_i < l_i` with `k₁ < ⋯ < k_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChordDiagram {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl ChordDiagram {
    pub fn new(n: usize, mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        pairs.sort_unstable();
        let mut seen = vec![false; n + 1];
        for &(k, l) in &pairs {
            if !(1 <= k && k < l && l <= n) {
                return Err(Error::Precondition(format!("chord ({k},{l}) invalid in [{n}]")));
            }
            for x in [k, l] {
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Precondition(format!("slot {x} used twice")));
                }
            }
        }
        Ok(Self { n, pairs })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, pairs: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn is_nonconsecutive(&self) -> bool {
        self.pairs.iter().all(|&(k, l)| k + 1 < l)
    }

    /// Slots not touched by a chord, increasing.
    pub fn free_slots(&self) -> Vec<usize> {
        (1..=self.n).filter(|x| !self.pairs.iter().any(|&(k, l)| k == *x || l == *x)).collect()
    }

    /// All diagrams of length `r` in `[n]`, lexicographic on `(k₁,l₁,…,k_r,l_r)`.
    pub fn all(n: usize, r: usize) -> Vec<ChordDiagram> {
        fn go(n: usize, r: usize, used: &mut Vec<bool>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<ChordDiagram>) {
            if cur.len() == r {
                out.push(ChordDiagram { n, pairs: cur.clone() });
                return;
            }
            let start = cur.last().map_or(1, |p| p.0 + 1);
            for k in start..=n {
                if used[k] {
                    continue;
                }
                for l in k + 1..=n {
                    if used[l] {
                        continue;
                    }
                    used[k] = true;
                    used[l] = true;
                    cur.push((k, l));
                    go(n, r, used, cur, out);
                    cur.pop();
                    used[k] = false;
                    used[l] = false;
                }
            }
        }
        let mut out = Vec::new();
        if 2 * r <= n {
            go(n, r, &mut vec![false; n + 1], &mut Vec::new(), &mut out);
        }
        out
    }

    /// Parses `(1,4)(2,6)`; the empty string is the empty diagram.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let bad = || Error::Parse(format!("bad chord diagram {text:?}"));
        let mut pairs = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let inner_end = rest.find(')').ok_or_else(bad)?;
            let inner = rest.strip_prefix('(').ok_or_else(bad)?;
            let (a, b) = inner[..inner_end - 1].split_once(',').ok_or_else(bad)?;
            pairs.push((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?));
            rest = rest[inner_end + 1..].trim_start();
        }
        Self::new(n, pairs)
    }
}

impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in &self.pairs {
            write!(f, "({k},{l})")?;
        }
        Ok(())
    }
}

/// `μ^{n,r}_{k̲,l̲}`: inserts `μ` at each chord and the input's letters at
/// the free slots, in order.
pub fn insertion(cd: &ChordDiagram, v: &AlgebraElement, g: usize) -> Result<AlgebraElement> {
    let free = cd.free_slots();
    if !v.is_homogeneous(free.len()) {
        return Err(Error::DegreeMismatch { expected: free.len(), got: v.degree().unwrap_or(0) });
    }
    let n = cd.n();
    let cells: Vec<Gen> = Gen::all(g).collect();
    let mut terms = Vec::new();
    for (w, c) in v.terms() {
        if let Some(x) = w.letters().iter().find(|x| x.handle() > g) {
            return Err(Error::InvalidGenerator { index: x.index(), genus: g });
        }
        let mut base = vec![Gen::from_slot(0); n];
        for (&s, &x) in free.iter().zip(w.letters()) {
            base[s - 1] = x;
        }
        let mut choice = vec![0usize; cd.r()];
        loop {
            let mut word = base.clone();
            let mut sign = 1;
            for (&(k, l), &j) in cd.pairs().iter().zip(&choice) {
                word[k - 1] = cells[j];
                word[l - 1] = cells[j].dual();
                sign *= cells[j].sign();
            }
            terms.push((Word(word), if sign > 0 { c.clone() } else { -c }));
            // odometer over the 2g choices per chord
            let mut t = 0;
            while t < choice.len() {
                choice[t] += 1;
                if choice[t] < cells.len() {
                    break;
                }
                choice[t] = 0;
                t += 1;
            }
            if t == choice.len() {
                break;
            }
        }
    }
    AlgebraElement::from_terms(terms, n)
}

/// `insertion` applied to a single monomial.
pub fn insert_monomial(cd: &ChordDiagram, m: &Word, g: usize) -> Result<AlgebraElement> {
    insertion(cd, &AlgebraElement::word(m.clone(), m.len())?, g)
}

/// Span of all insertion images of length `r` with `n − 2r ≤ w`.
pub fn weight_filter(n: usize, w: i64, g: usize) -> Result<Subspace> {
    let ix = tensor_basis(n, g);
    weight_filter_in(&ix, n, w, g)
}

pub fn weight_filter_in(ix: &BasisIndexing<Word>, n: usize, w: i64, g: usize) -> Result<Subspace> {
    let mut vecs = Vec::new();
    for r in 0..=n / 2 {
        if (n - 2 * r) as i64 > w {
            continue;
        }
        let monomials = Word::all(n - 2 * r, g);
        for cd in ChordDiagram::all(n, r) {
            for m in &monomials {
                vecs.push(tensor_vector(&insert_monomial(&cd, m, g)?, ix)?);
            }
        }
    }
    Ok(Subspace::span_par(&vecs, ix.dim(), ix.fingerprint()))
}

/// `Σ_{i<k} im μ_{i,i+1}` in `H^{⊗k}`: the relations of `gr^I_k ℚπ`.
pub fn labute_rel(k: usize, g: usize) -> Result<Subspace> {
    labute_rel_in(&tensor_basis(k, g), k, g)
}

pub fn labute_rel_in(ix: &BasisIndexing<Word>, k: usize, g: usize) -> Result<Subspace> {
    let mut vecs = Vec::new();
    if k >= 2 {
        let monomials = Word::all(k - 2, g);
        for i in 1..k {
            let cd = ChordDiagram::new(k, vec![(i, i + 1)])?;
            for m in &monomials {
                vecs.push(tensor_vector(&insert_monomial(&cd, m, g)?, ix)?);
            }
        }
    }
    Ok(Subspace::span_par(&vecs, ix.dim(), ix.fingerprint()))
}

/// Coordinates of `v` in `gr^I_k ℚπ = H^{⊗k} / labute_rel(k)`.
pub fn labute_quotient_coords(v: &SparseVec, rel: &Subspace) -> Result<SparseVec> {
    rel.quotient_coords(v)
}

/// An element `μ^{s,r}_{k̲,l̲}(m)` of `B^{s,r}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorElement {
    pub s: usize,
    pub r: usize,
    pub diagram: ChordDiagram,
    pub monomial: Word,
}

impl GeneratorElement {
    /// The tensor `μ^{s,r}_{k̲,l̲}(m)`; under the Magnus lift it is also the group-ring element.
    pub fn tensor(&self, g: usize) -> Result<AlgebraElement> {
        insert_monomial(&self.diagram, &self.monomial, g)
    }
}

impl fmt::Display for GeneratorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mu^{{{},{}}}{}[{}]", self.s, self.r, self.diagram, self.monomial)
    }
}

/// Positive monomials of degree `m` with indices `> g − m`.
pub fn positive_monomials(m: usize, g: usize) -> Vec<Word> {
    if m == 0 {
        return vec![Word::empty()];
    }
    if g < m {
        return Vec::new();
    }
    let letters: Vec<Gen> = (g - m + 1..=g).map(|i| Gen::raw(i as i8)).collect();
    let mut out = vec![Word::empty()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|w| {
                letters.iter().map(move |&x| {
                    let mut v = w.0.clone();
                    v.push(x);
                    Word(v)
                })
            })
            .collect();
    }
    out
}

/// `B^{s,r}` (or `B^{s,r}_nc`), diagrams outer and monomials inner.
pub fn enumerate_b(s: usize, r: usize, g: usize, nonconsecutive: bool) -> Result<Vec<GeneratorElement>> {
    if 2 * r > s {
        return Err(Error::Precondition(format!("2r = {} exceeds s = {s}", 2 * r)));
    }
    let m = s - 2 * r;
    if m > 0 && g < m {
        warn!("B^{{{s},{r}}} at g={g}: no positive indices above g-{m}, family is empty");
        return Ok(Vec::new());
    }
    let monomials = positive_monomials(m, g);
    let mut out = Vec::new();
    for cd in ChordDiagram::all(s, r) {
        if nonconsecutive && !cd.is_nonconsecutive() {
            continue;
        }
        for mono in &monomials {
            out.push(GeneratorElement { s, r, diagram: cd.clone(), monomial: mono.clone() });
        }
    }
    Ok(out)
}

/// Rotation of tensor slots: `x₁⊗⋯⊗x_m ↦ x_m⊗x₁⊗⋯⊗x_{m−1}`.
pub fn rotate(w: &Word) -> Word {
    let mut v = w.0.clone();
    v.rotate_right(1);
    Word(v)
}

/// Span of orbit sums of monomials under cyclic rotation.
pub fn cyclic_invariants(m: usize, g: usize) -> Result<Subspace> {
    let ix = tensor_basis(m, g);
    cyclic_invariants_in(&ix, m)
}

pub fn cyclic_invariants_in(ix: &BasisIndexing<Word>, m: usize) -> Result<Subspace> {
    if m == 0 {
        return Err(Error::Precondition("cyclic invariants need m >= 1".into()));
    }
    let mut vecs = Vec::new();
    for w in ix.keys() {
        let mut orbit = vec![w.clone()];
        let mut x = rotate(w);
        while &x != w {
            orbit.push(x.clone());
            x = rotate(&x);
        }
        if orbit.iter().min() != Some(w) {
            continue;
        }
        let entries = orbit.iter().map(|o| Ok((ix.index_of(o)?, Rational::one()))).collect::<Result<Vec<_>>>()?;
        vecs.push(SparseVec::from_entries(entries));
    }
    Ok(Subspace::span(&vecs, ix.dim(), ix.fingerprint()))
}

/// Integer matrix on `H` in the basis `a₁, a₋₁, a₂, a₋₂, …`; column `c` is the image of basis vector `c`.
pub type Matrix = Vec<Vec<i64>>;

fn check_square(m: &Matrix, g: usize) -> Result<()> {
    if m.len() != 2 * g || m.iter().any(|row| row.len() != 2 * g) {
        return Err(Error::Precondition(format!("matrix must be {0}x{0}", 2 * g)));
    }
    Ok(())
}

/// The matrix of the pairing given by `μ`: `J[a_i, a_{−i}] = sign(i)`.
pub fn symplectic_form(g: usize) -> Matrix {
    let mut j = vec![vec![0; 2 * g]; 2 * g];
    for x in Gen::all(g) {
        j[x.slot()][x.dual().slot()] = x.sign();
    }
    j
}

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn transpose(a: &Matrix) -> Matrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

/// Whether `MᵀJM = J`.
pub fn is_symplectic(m: &Matrix, g: usize) -> Result<bool> {
    check_square(m, g)?;
    let j = symplectic_form(g);
    Ok(matmul(&matmul(&transpose(m), &j), m) == j)
}

/// Diagonal action `M^{⊗k}` on a homogeneous tensor.
pub fn tensor_action(m: &Matrix, v: &AlgebraElement, g: usize) -> Result<AlgebraElement> {
    check_square(m, g)?;
    let mut out = AlgebraElement::zero(v.cap());
    for (w, c) in v.terms() {
        let mut partial: Vec<(Vec<Gen>, i64)> = vec![(Vec::with_capacity(w.len()), 1)];
        for x in w.letters() {
            if x.handle() > g {
                return Err(Error::InvalidGenerator { index: x.index(), genus: g });
            }
            let col = x.slot();
            partial = partial
                .into_iter()
                .flat_map(|(p, s)| {
                    (0..2 * g).filter(|&row| m[row][col] != 0).map(move |row| {
                        let mut q = p.clone();
                        q.push(Gen::from_slot(row));
                        (q, s * m[row][col])
                    })
                })
                .collect();
        }
        let image = AlgebraElement::from_terms(partial.into_iter().map(|(p, s)| (Word(p), c * &Rational::from_int(s))), v.cap())?;
        out = out.add(&image)?;
    }
    Ok(out)
}

/// Elementary symplectic matrices: for each handle the two shears and the
/// quarter turn, and for each pair of handles the mixing transvection.
pub fn symplectic_generators(g: usize) -> Vec<Matrix> {
    let id = |g: usize| -> Matrix { (0..2 * g).map(|i| (0..2 * g).map(|j| i64::from(i == j)).collect()).collect() };
    let mut out = Vec::new();
    for h in 0..g {
        let (p, q) = (2 * h, 2 * h + 1);
        let mut a = id(g);
        a[q][p] = 1;
        out.push(a);
        let mut b = id(g);
        b[p][q] = 1;
        out.push(b);
        let mut t = id(g);
        t[p][p] = 0;
        t[q][q] = 0;
        t[q][p] = 1;
        t[p][q] = -1;
        out.push(t);
    }
    for h in 0..g {
        for k in h + 1..g {
            // a_h ↦ a_h + a_k, a_{−k} ↦ a_{−k} − a_{−h}
            let mut m = id(g);
            m[2 * k][2 * h] = 1;
            m[2 * h + 1][2 * k + 1] = -1;
            out.push(m);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightReport {
    pub n: usize,
    pub w: i64,
    pub g: usize,
    pub rank: usize,
}

pub fn weight_report(n: usize, w: i64, g: usize) -> Result<WeightReport> {
    Ok(WeightReport { n, w, g, rank: weight_filter(n, w, g)?.rank() })
}
