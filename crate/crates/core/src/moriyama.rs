//! Homology of the configuration space of a wedge of `2g` circles in the
//! Moriyama basis, the signed shuffle product and the map `Δ^N`.
//!
//! A basis element places ordered blocks of particles on the cells
//! `1, −1, 2, −2, …, g, −g` and denotes the product of simplices
//! `Δ^{N₁}(α₁) × Δ^{N₋₁}(α₋₁) × ⋯` taken in that canonical cell order. All
//! signs are measured against this normal form.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::groupring::{AlgebraElement, Gen, Word};
use crate::linalg::{BasisIndexing, SparseVec};
use crate::rational::Rational;

const END: u8 = u8::MAX;

/// One Moriyama basis element: an ordered block of labels per cell.
///
/// Stored as the concatenation of the blocks in canonical cell order with a
/// terminator after each block, so the derived order is lexicographic on
/// the block mapping (a label sorts before "block ended").
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrangementBasisElement {
    n: u8,
    g: u8,
    code: Vec<u8>,
}

impl ArrangementBasisElement {
    fn from_slots(g: usize, slots: &[&[u8]]) -> Self {
        debug_assert_eq!(slots.len(), 2 * g);
        let n: usize = slots.iter().map(|b| b.len()).sum();
        let mut code = Vec::with_capacity(n + 2 * g);
        for b in slots {
            code.extend_from_slice(b);
            code.push(END);
        }
        Self { n: n as u8, g: g as u8, code }
    }

    /// The element with no particles.
    pub fn empty(g: usize) -> Self {
        Self::from_slots(g, &vec![&[][..]; 2 * g])
    }

    /// Builds from `(cell, block)` pairs; unlisted cells are empty.
    pub fn from_blocks(g: usize, blocks: &[(Gen, Vec<u8>)]) -> Result<Self> {
        let mut slots: Vec<&[u8]> = vec![&[]; 2 * g];
        for (c, b) in blocks {
            if c.handle() > g {
                return Err(Error::InvalidGenerator { index: c.index(), genus: g });
            }
            if !slots[c.slot()].is_empty() {
                return Err(Error::InvalidLabels(format!("cell {c} listed twice")));
            }
            slots[c.slot()] = b;
        }
        let mut seen: Vec<u8> = slots.iter().flat_map(|b| b.iter().copied()).collect();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) || seen.iter().any(|&l| l == 0 || l == END) {
            return Err(Error::InvalidLabels(format!("labels {seen:?} not distinct positive")));
        }
        Ok(Self::from_slots(g, &slots))
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn g(&self) -> usize {
        self.g as usize
    }

    /// Blocks in canonical cell order, one per cell (possibly empty).
    pub fn slots(&self) -> Vec<&[u8]> {
        let mut out = Vec::with_capacity(2 * self.g());
        let mut start = 0;
        for (i, &c) in self.code.iter().enumerate() {
            if c == END {
                out.push(&self.code[start..i]);
                start = i + 1;
            }
        }
        out
    }

    /// The block on a given cell.
    pub fn block(&self, cell: Gen) -> &[u8] {
        self.slots()[cell.slot()]
    }

    /// Nonempty `(cell, block)` pairs in canonical order.
    pub fn blocks(&self) -> Vec<(Gen, &[u8])> {
        self.slots()
            .into_iter()
            .enumerate()
            .filter(|(_, b)| !b.is_empty())
            .map(|(s, b)| (Gen::from_slot(s), b))
            .collect()
    }

    /// Sorted label set.
    pub fn labels(&self) -> Vec<u8> {
        let mut l: Vec<u8> = self.code.iter().copied().filter(|&c| c != END).collect();
        l.sort_unstable();
        l
    }

    /// Parses the text form `1:(1,2);-1:(3)`; `()` is the empty arrangement.
    pub fn parse(text: &str, g: usize) -> Result<Self> {
        let text = text.trim();
        if text == "()" || text.is_empty() {
            return Ok(Self::empty(g));
        }
        let bad = || Error::Parse(format!("bad arrangement {text:?}"));
        let mut blocks = Vec::new();
        for part in text.split(';') {
            let (cell, rest) = part.split_once(':').ok_or_else(bad)?;
            let cell: i32 = cell.trim().parse().map_err(|_| bad())?;
            let inner = rest.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
            let labels = inner
                .split(',')
                .map(|t| t.trim().parse::<u8>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            blocks.push((Gen::new(cell, g)?, labels));
        }
        Self::from_blocks(g, &blocks)
    }
}

impl fmt::Display for ArrangementBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks = self.blocks();
        if blocks.is_empty() {
            return write!(f, "()");
        }
        for (k, (c, b)) in blocks.iter().enumerate() {
            if k > 0 {
                write!(f, ";")?;
            }
            write!(f, "{c}:(")?;
            for (t, l) in b.iter().enumerate() {
                if t > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{l}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// A rational combination of basis elements sharing a label set and genus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HClass {
    g: usize,
    labels: Vec<u8>,
    terms: BTreeMap<ArrangementBasisElement, Rational>,
}

fn sorted_labels(seq: &[u8]) -> Result<Vec<u8>> {
    let mut l = seq.to_vec();
    l.sort_unstable();
    if l.windows(2).any(|w| w[0] == w[1]) || l.iter().any(|&x| x == 0 || x == END) {
        return Err(Error::InvalidLabels(format!("labels {seq:?} not distinct positive")));
    }
    Ok(l)
}

impl HClass {
    pub fn zero(labels: &[u8], g: usize) -> Result<Self> {
        Ok(Self { g, labels: sorted_labels(labels)?, terms: BTreeMap::new() })
    }

    pub fn basis(e: ArrangementBasisElement) -> Self {
        let mut terms = BTreeMap::new();
        let (g, labels) = (e.g(), e.labels());
        terms.insert(e, Rational::one());
        Self { g, labels, terms }
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ArrangementBasisElement, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &ArrangementBasisElement) -> Rational {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, e: ArrangementBasisElement, c: &Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.g != other.g || self.labels != other.labels {
            return Err(Error::InvalidLabels(format!(
                "classes on {:?} (g={}) and {:?} (g={})",
                self.labels, self.g, other.labels, other.g
            )));
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &Self, f: &Rational) -> Result<()> {
        self.check_same(other)?;
        for (e, c) in &other.terms {
            self.add_term(e.clone(), &(c * f));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one())?;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one())?;
        Ok(out)
    }

    pub fn scale(&self, f: &Rational) -> Self {
        let mut out = Self { g: self.g, labels: self.labels.clone(), terms: BTreeMap::new() };
        if !f.is_zero() {
            out.terms = self.terms.iter().map(|(e, c)| (e.clone(), c * f)).collect();
        }
        out
    }

    /// Coordinates in a basis indexing (normally [`full_basis`]).
    pub fn vector(&self, ix: &BasisIndexing<ArrangementBasisElement>) -> Result<SparseVec> {
        ix.vector(self.terms.iter())
    }

    pub fn from_vector(v: &SparseVec, ix: &BasisIndexing<ArrangementBasisElement>, labels: &[u8], g: usize) -> Result<Self> {
        let mut out = Self::zero(labels, g)?;
        for (e, c) in ix.terms(v) {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }
}

impl fmt::Display for HClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag}·")?;
            }
            write!(f, "[{e}]")?;
        }
        Ok(())
    }
}

/// `Δ^{labels}(α_cell)` as a single basis element.
pub fn simplex(cell: Gen, labels: &[u8], g: usize) -> Result<HClass> {
    if labels.is_empty() {
        return Err(Error::InvalidLabels("simplex needs at least one label".into()));
    }
    Ok(HClass::basis(ArrangementBasisElement::from_blocks(g, &[(cell, labels.to_vec())])?))
}

/// All shuffles of `a` and `b` with the sign of the permutation from `a b`.
pub fn shuffles(a: &[u8], b: &[u8]) -> Vec<(Vec<u8>, i64)> {
    fn go(a: &[u8], b: &[u8], cur: &mut Vec<u8>, inv: usize, out: &mut Vec<(Vec<u8>, i64)>) {
        if a.is_empty() || b.is_empty() {
            let mut w = cur.clone();
            w.extend_from_slice(a);
            w.extend_from_slice(b);
            out.push((w, if inv.is_multiple_of(2) { 1 } else { -1 }));
            return;
        }
        cur.push(a[0]);
        go(&a[1..], b, cur, inv, out);
        cur.pop();
        cur.push(b[0]);
        go(a, &b[1..], cur, inv + a.len(), out);
        cur.pop();
    }
    let mut out = Vec::new();
    go(a, b, &mut Vec::with_capacity(a.len() + b.len()), 0, &mut out);
    out
}

/// Shuffle product of two basis elements with disjoint labels.
pub fn shuffle_basis(x: &ArrangementBasisElement, y: &ArrangementBasisElement) -> Vec<(ArrangementBasisElement, i64)> {
    let g = x.g();
    let (xs, ys) = (x.slots(), y.slots());
    // y's factor on cell c passes every x factor on a later cell
    let mut parity = 0usize;
    let mut x_after = x.n();
    for c in 0..2 * g {
        x_after -= xs[c].len();
        parity += ys[c].len() * x_after;
    }
    let base = if parity.is_multiple_of(2) { 1 } else { -1 };
    let mut partial: Vec<(Vec<Vec<u8>>, i64)> = vec![(Vec::with_capacity(2 * g), base)];
    for c in 0..2 * g {
        let options: Vec<(Vec<u8>, i64)> = match (xs[c].is_empty(), ys[c].is_empty()) {
            (true, _) => vec![(ys[c].to_vec(), 1)],
            (_, true) => vec![(xs[c].to_vec(), 1)],
            _ => shuffles(xs[c], ys[c]),
        };
        if options.len() == 1 {
            let (blk, s) = &options[0];
            for (p, sign) in &mut partial {
                p.push(blk.clone());
                *sign *= s;
            }
        } else {
            partial = partial
                .into_iter()
                .flat_map(|(p, sign)| {
                    options.iter().map(move |(blk, s)| {
                        let mut q = p.clone();
                        q.push(blk.clone());
                        (q, sign * s)
                    })
                })
                .collect();
        }
    }
    partial
        .into_iter()
        .map(|(p, s)| {
            let slots: Vec<&[u8]> = p.iter().map(Vec::as_slice).collect();
            (ArrangementBasisElement::from_slots(g, &slots), s)
        })
        .collect()
}

/// The exterior (shuffle) product `H_I × H_J → H_{I⊔J}`.
pub fn shuffle_product(x: &HClass, y: &HClass) -> Result<HClass> {
    if x.g != y.g {
        return Err(Error::InvalidLabels(format!("genus {} vs {}", x.g, y.g)));
    }
    let mut all = x.labels.clone();
    all.extend_from_slice(&y.labels);
    let mut out = HClass::zero(&all, x.g)?;
    for (a, ca) in &x.terms {
        for (b, cb) in &y.terms {
            let c = ca * cb;
            for (e, s) in shuffle_basis(a, b) {
                out.add_term(e, &if s > 0 { c.clone() } else { -&c });
            }
        }
    }
    Ok(out)
}

/// Compositions of `n` into `k` positive parts, in lexicographic order.
pub fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            if n == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if n < k {
            return;
        }
        for first in 1..=n - (k - 1) {
            cur.push(first);
            go(n - first, k - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, &mut Vec::new(), &mut out);
    out
}

fn check_word(w: &Word, g: usize) -> Result<()> {
    match w.letters().iter().find(|x| x.handle() > g) {
        Some(x) => Err(Error::InvalidGenerator { index: x.index(), genus: g }),
        None => Ok(()),
    }
}

/// `Δ^N` of a single word.
pub fn delta_word(w: &Word, labels: &[u8], g: usize) -> Result<HClass> {
    check_word(w, g)?;
    let n = labels.len();
    let mut out = HClass::zero(labels, g)?;
    let k = w.len();
    if k == 0 {
        if n == 0 {
            out.add_term(ArrangementBasisElement::empty(g), &Rational::one());
        }
        return Ok(out);
    }
    for comp in compositions(n, k) {
        let mut acc: BTreeMap<ArrangementBasisElement, i64> = BTreeMap::new();
        acc.insert(ArrangementBasisElement::empty(g), 1);
        let mut start = 0;
        for (x, &len) in w.letters().iter().zip(&comp) {
            let block = ArrangementBasisElement::from_slots(g, &{
                let mut s: Vec<&[u8]> = vec![&[]; 2 * g];
                s[x.slot()] = &labels[start..start + len];
                s
            });
            start += len;
            let mut next: BTreeMap<ArrangementBasisElement, i64> = BTreeMap::new();
            for (e, c) in &acc {
                for (f, s) in shuffle_basis(e, &block) {
                    *next.entry(f).or_insert(0) += c * s;
                }
            }
            next.retain(|_, c| *c != 0);
            acc = next;
        }
        for (e, c) in acc {
            out.add_term(e, &Rational::from_int(c));
        }
    }
    Ok(out)
}

/// `Δ^N(x)` for `x` in the truncated group algebra, by the decomposition formula.
pub fn delta(x: &AlgebraElement, labels: &[u8], g: usize) -> Result<HClass> {
    if x.cap() < labels.len() {
        return Err(Error::LengthOverflow { len: labels.len(), cap: x.cap() });
    }
    let mut out = HClass::zero(labels, g)?;
    for (w, c) in x.terms() {
        if w.len() > labels.len() {
            check_word(w, g)?;
            continue;
        }
        out.add_scaled(&delta_word(w, labels, g)?, c)?;
    }
    Ok(out)
}

/// Rank of `H_n(U_2g)`: the rising factorial `2g(2g+1)⋯(2g+n−1)`.
pub fn dimension(n: usize, g: usize) -> u64 {
    (0..n as u64).map(|i| 2 * g as u64 + i).product()
}

/// Every basis element on the given labels, sorted.
pub fn arrangements(labels: &[u8], g: usize) -> Vec<ArrangementBasisElement> {
    let n = labels.len();
    let mut perms: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..n {
        perms = perms
            .into_iter()
            .flat_map(|p| {
                let rest: Vec<u8> = labels.iter().copied().filter(|l| !p.contains(l)).collect();
                rest.into_iter().map(move |l| {
                    let mut q = p.clone();
                    q.push(l);
                    q
                })
            })
            .collect();
    }
    // cut points: a weak composition of n into 2g parts
    let mut cuts: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..2 * g - 1 {
        cuts = cuts
            .into_iter()
            .flat_map(|c| {
                let used: usize = c.iter().sum();
                (0..=n - used).map(move |x| {
                    let mut d = c.clone();
                    d.push(x);
                    d
                })
            })
            .collect();
    }
    let mut out = Vec::with_capacity(perms.len() * cuts.len());
    for p in &perms {
        for c in &cuts {
            let mut slots: Vec<&[u8]> = Vec::with_capacity(2 * g);
            let mut start = 0;
            for &len in c {
                slots.push(&p[start..start + len]);
                start += len;
            }
            slots.push(&p[start..]);
            out.push(ArrangementBasisElement::from_slots(g, &slots));
        }
    }
    out.sort();
    out
}

/// The Moriyama basis of `H_n(U_2g)` on labels `1..=n`.
pub fn full_basis(n: usize, g: usize) -> BasisIndexing<ArrangementBasisElement> {
    let labels: Vec<u8> = (1..=n as u8).collect();
    BasisIndexing::new(arrangements(&labels, g))
}
