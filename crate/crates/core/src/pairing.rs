//! Dual classes `Ê_b` recorded by their signed transversal intersections with
//! the Moriyama cells, and the pairing with `H_n(U_2g)`.
//!
//! A dual class is a functional on Moriyama coordinates: its entry at a basis
//! element is the intersection number of that cell (in canonical order) with
//! the submanifold. Pairing is the coefficient-wise dot product.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::groupring::Gen;
use crate::linalg::{BasisIndexing, SparseVec};
use crate::moriyama::{ArrangementBasisElement, HClass};
use crate::rational::Rational;
use crate::weights::GeneratorElement;

/// A signed product of simplex blocks, in the order written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalPattern {
    pub sign: i64,
    pub factors: Vec<(Gen, Vec<u8>)>,
}

impl LocalPattern {
    fn new(sign: i64, factors: Vec<(Gen, Vec<u8>)>) -> Self {
        Self { sign, factors }
    }

    /// Swaps two particle labels throughout.
    pub fn relabel(&self, a: u8, b: u8) -> Self {
        let swap = |l: u8| if l == a { b } else if l == b { a } else { l };
        Self { sign: self.sign, factors: self.factors.iter().map(|(c, p)| (*c, p.iter().map(|&l| swap(l)).collect())).collect() }
    }
}

/// The six surviving intersections of the symmetrized `Ê` on particles
/// `(p₁,p₂,p₃)` and cells `±(2j−1)`, in the order (1), (1)′, (2), (3), (2)′, (3)′.
pub fn ehat_patterns(p: [u8; 3], j: usize, g: usize) -> Result<Vec<LocalPattern>> {
    if j == 0 || 2 * j > g {
        return Err(Error::Precondition(format!("Ê factor {j} needs 2j <= g = {g}")));
    }
    if p[0] == p[1] || p[1] == p[2] || p[0] == p[2] {
        return Err(Error::InvalidLabels(format!("particles {p:?} not distinct")));
    }
    let c = Gen::new(2 * j as i32 - 1, g)?;
    let d = c.dual();
    let [p1, p2, p3] = p;
    Ok(vec![
        LocalPattern::new(1, vec![(c, vec![p1, p2]), (d, vec![p3])]),
        LocalPattern::new(1, vec![(c, vec![p2, p1]), (d, vec![p3])]),
        LocalPattern::new(-1, vec![(c, vec![p1]), (d, vec![p2, p3])]),
        LocalPattern::new(-1, vec![(c, vec![p1]), (d, vec![p3, p2])]),
        LocalPattern::new(-1, vec![(c, vec![p2]), (d, vec![p1, p3])]),
        LocalPattern::new(-1, vec![(c, vec![p2]), (d, vec![p3, p1])]),
    ])
}

/// The five intersections of the unsymmetrized `E` (particles 1,2,3; cells ±1, ±2).
pub fn ecal_patterns() -> Vec<LocalPattern> {
    let c = Gen::from_slot;
    vec![
        LocalPattern::new(1, vec![(c(0), vec![1, 2]), (c(1), vec![3])]),
        LocalPattern::new(-1, vec![(c(0), vec![1]), (c(1), vec![2, 3])]),
        LocalPattern::new(-1, vec![(c(0), vec![1]), (c(1), vec![3, 2])]),
        LocalPattern::new(1, vec![(c(0), vec![2]), (c(2), vec![1]), (c(3), vec![3])]),
        LocalPattern::new(-1, vec![(c(0), vec![1]), (c(2), vec![2]), (c(3), vec![3])]),
    ]
}

/// The single intersection of a dual curve to `α_cell` carrying particle `p`.
pub fn torus_pattern(p: u8, cell: Gen) -> LocalPattern {
    LocalPattern::new(1, vec![(cell, vec![p])])
}

/// A functional on `H_n(U_2g)` given by intersection numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualClass {
    n: usize,
    g: usize,
    entries: BTreeMap<ArrangementBasisElement, Rational>,
}

/// Normal form of a product of blocks: factors are sorted stably into
/// canonical cell order with the sign `(−1)^{pq}` per transposition; factors
/// landing on one cell are joined in the order given.
pub fn combine_factors(factors: &[(Gen, Vec<u8>)], g: usize) -> Result<(ArrangementBasisElement, i64)> {
    let mut parity = 0usize;
    for (t, (ct, pt)) in factors.iter().enumerate() {
        for (cs, ps) in &factors[..t] {
            if cs.slot() > ct.slot() {
                parity += ps.len() * pt.len();
            }
        }
    }
    let mut merged: Vec<(Gen, Vec<u8>)> = Vec::new();
    for (c, p) in factors {
        match merged.iter_mut().find(|(m, _)| m == c) {
            Some((_, q)) => q.extend_from_slice(p),
            None => merged.push((*c, p.clone())),
        }
    }
    let e = ArrangementBasisElement::from_blocks(g, &merged)?;
    Ok((e, if parity.is_multiple_of(2) { 1 } else { -1 }))
}

impl DualClass {
    pub fn zero(n: usize, g: usize) -> Self {
        Self { n, g, entries: BTreeMap::new() }
    }

    /// Sum of the given patterns, each read as a signed cell.
    pub fn from_patterns(n: usize, g: usize, patterns: &[LocalPattern]) -> Result<Self> {
        let mut d = Self::zero(n, g);
        for p in patterns {
            d.add_pattern(p)?;
        }
        Ok(d)
    }

    fn add_pattern(&mut self, p: &LocalPattern) -> Result<()> {
        let (e, s) = combine_factors(&p.factors, self.g)?;
        if e.n() != self.n {
            return Err(Error::DegreeMismatch { expected: self.n, got: e.n() });
        }
        let c = Rational::from_int(s * p.sign);
        let entry = self.entries.entry(e).or_insert_with(Rational::zero);
        *entry = &*entry + &c;
        self.entries.retain(|_, x| !x.is_zero());
        Ok(())
    }

    pub fn add(&self, other: &DualClass) -> Result<DualClass> {
        if (self.n, self.g) != (other.n, other.g) {
            return Err(Error::Precondition("dual classes of different (n, g)".into()));
        }
        let mut out = self.clone();
        for (e, c) in &other.entries {
            let entry = out.entries.entry(e.clone()).or_insert_with(Rational::zero);
            *entry = &*entry + c;
        }
        out.entries.retain(|_, x| !x.is_zero());
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn entries(&self) -> impl Iterator<Item = (&ArrangementBasisElement, &Rational)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, e: &ArrangementBasisElement) -> Rational {
        self.entries.get(e).cloned().unwrap_or_default()
    }

    pub fn vector(&self, ix: &BasisIndexing<ArrangementBasisElement>) -> Result<SparseVec> {
        ix.vector(self.entries.iter())
    }
}

/// Particle positions `(κ_j, λ_j)` and `ρ_t` from the surjection `[n] → [s]`
/// that doubles each `k_j`.
pub fn particle_assignment(b: &GeneratorElement) -> (Vec<(u8, u8)>, Vec<u8>) {
    let doubled: Vec<usize> = b.diagram.pairs().iter().map(|p| p.0).collect();
    let mut first = vec![0u8; b.s + 1];
    let mut next = 1u8;
    for (x, slot) in first.iter_mut().enumerate().skip(1) {
        *slot = next;
        next += if doubled.contains(&x) { 2 } else { 1 };
    }
    let chords = b.diagram.pairs().iter().map(|&(k, l)| (first[k], first[l])).collect();
    let rho = b.diagram.free_slots().into_iter().map(|x| first[x]).collect();
    (chords, rho)
}

/// `Ê_b = Ê_1 × ⋯ × Ê_r × T_m` for `b ∈ B^{s,r}_nc` with `s + r = n`.
pub fn dual_class(b: &GeneratorElement, n: usize, g: usize) -> Result<DualClass> {
    if b.s + b.r != n {
        return Err(Error::Precondition(format!("s + r = {} but n = {n}", b.s + b.r)));
    }
    if g < n {
        return Err(Error::Precondition(format!("dual classes need g >= n, got g = {g} < {n}")));
    }
    if !b.diagram.is_nonconsecutive() {
        return Err(Error::Precondition(format!("chord diagram {} is consecutive", b.diagram)));
    }
    let m = b.s - 2 * b.r;
    if b.monomial.len() != m || b.monomial.letters().iter().any(|x| !x.is_positive() || x.handle() + m <= g || x.handle() > g) {
        return Err(Error::Precondition(format!("monomial {} is not positive with indices > {}", b.monomial, g - m)));
    }
    let (chords, rho) = particle_assignment(b);
    let torus: Vec<(Gen, Vec<u8>)> = rho.iter().zip(b.monomial.letters()).map(|(&p, &x)| (x, vec![p])).collect();
    let per_chord: Vec<Vec<LocalPattern>> = chords
        .iter()
        .enumerate()
        .map(|(j, &(kappa, lambda))| ehat_patterns([kappa, kappa + 1, lambda], j + 1, g))
        .collect::<Result<_>>()?;
    let mut d = DualClass::zero(n, g);
    let mut choice = vec![0usize; per_chord.len()];
    loop {
        let mut factors = Vec::new();
        let mut sign = 1;
        for (pats, &c) in per_chord.iter().zip(&choice) {
            factors.extend(pats[c].factors.iter().cloned());
            sign *= pats[c].sign;
        }
        factors.extend(torus.iter().cloned());
        d.add_pattern(&LocalPattern::new(sign, factors))?;
        let mut t = 0;
        while t < choice.len() {
            choice[t] += 1;
            if choice[t] < 6 {
                break;
            }
            choice[t] = 0;
            t += 1;
        }
        if t == choice.len() {
            break;
        }
    }
    Ok(d)
}

/// `⟨x, D⟩ = Σ_e x_e D_e`.
pub fn pair(x: &HClass, d: &DualClass) -> Result<Rational> {
    if x.g() != d.g || x.n() != d.n {
        return Err(Error::Precondition(format!("pairing H_{} (g={}) with a dual class of (n={}, g={})", x.n(), x.g(), d.n, d.g)));
    }
    let mut acc = Rational::zero();
    for (e, c) in x.terms() {
        if let Some(y) = d.entries.get(e) {
            acc = &acc + &(c * y);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::{AlgebraElement, Word};
    use crate::moriyama::{delta, simplex};
    use crate::weights::{enumerate_b, ChordDiagram};

    fn el(text: &str, g: usize) -> ArrangementBasisElement {
        ArrangementBasisElement::parse(text, g).unwrap()
    }

    #[test]
    fn six_row_table() {
        let d = DualClass::from_patterns(3, 2, &ehat_patterns([1, 2, 3], 1, 2).unwrap()).unwrap();
        let expected = [
            ("1:(1,2);-1:(3)", 1),
            ("1:(2,1);-1:(3)", 1),
            ("1:(1);-1:(2,3)", -1),
            ("1:(1);-1:(3,2)", -1),
            ("1:(2);-1:(1,3)", -1),
            ("1:(2);-1:(3,1)", -1),
        ];
        assert_eq!(d.len(), 6);
        for (t, s) in expected {
            assert_eq!(d.get(&el(t, 2)), Rational::from_int(s), "{t}");
        }
        assert!(ehat_patterns([1, 2, 3], 2, 3).is_err());
        assert!(ehat_patterns([1, 1, 3], 1, 2).is_err());
    }

    #[test]
    fn symmetrizing_the_five_rows() {
        let e = DualClass::from_patterns(3, 2, &ecal_patterns()).unwrap();
        let swapped: Vec<LocalPattern> = ecal_patterns().iter().map(|p| p.relabel(1, 2)).collect();
        let te = DualClass::from_patterns(3, 2, &swapped).unwrap();
        let six = DualClass::from_patterns(3, 2, &ehat_patterns([1, 2, 3], 1, 2).unwrap()).unwrap();
        assert_eq!(e.add(&te).unwrap(), six);
        assert_eq!(e.get(&el("1:(2);2:(1);-2:(3)", 2)), Rational::one());
        assert_eq!(te.get(&el("1:(2);2:(1);-2:(3)", 2)), -Rational::one());
    }

    #[test]
    fn annihilates_cubes_of_singletons() {
        let d = DualClass::from_patterns(3, 2, &ehat_patterns([1, 2, 3], 1, 2).unwrap()).unwrap();
        for w in Word::all(3, 2) {
            let x = delta(&AlgebraElement::word(w.clone(), 3).unwrap(), &[1, 2, 3], 2).unwrap();
            assert!(pair(&x, &d).unwrap().is_zero(), "{w}");
        }
    }

    #[test]
    fn torus_pairings() {
        let g = 4;
        let c = Gen::new(4, g).unwrap();
        let t = DualClass::from_patterns(1, g, &[torus_pattern(1, c)]).unwrap();
        assert_eq!(pair(&simplex(c, &[1], g).unwrap(), &t).unwrap(), Rational::one());
        assert!(pair(&simplex(c.dual(), &[1], g).unwrap(), &t).unwrap().is_zero());
        assert_eq!(torus_pattern(3, c), LocalPattern { sign: 1, factors: vec![(c, vec![3])] });
    }

    #[test]
    fn same_cell_torus_factors_concatenate() {
        let g = 2;
        let c = Gen::new(2, g).unwrap();
        let (e, s) = combine_factors(&[(c, vec![1]), (c, vec![2])], g).unwrap();
        assert_eq!((e, s), (el("2:(1,2)", g), 1));
        let (e, s) = combine_factors(&[(Gen::new(-1, g).unwrap(), vec![1, 2]), (Gen::new(1, g).unwrap(), vec![3])], g).unwrap();
        assert_eq!((e, s), (el("1:(3);-1:(1,2)", g), 1));
        let (_, s) = combine_factors(&[(Gen::new(-1, g).unwrap(), vec![1]), (Gen::new(1, g).unwrap(), vec![3])], g).unwrap();
        assert_eq!(s, -1);
    }

    #[test]
    fn dual_class_with_one_chord() {
        let g = 4;
        let b = GeneratorElement { s: 3, r: 1, diagram: ChordDiagram::parse("(1,3)", 3).unwrap(), monomial: Word::parse("4", g).unwrap() };
        assert_eq!(particle_assignment(&b), (vec![(1, 4)], vec![3]));
        let d = dual_class(&b, 4, g).unwrap();
        assert_eq!(d.len(), 6);
        for (e, _) in d.entries() {
            let neg: Vec<Gen> = e.blocks().iter().map(|(c, _)| *c).filter(|c| !c.is_positive()).collect();
            assert_eq!(neg.len(), 1);
            assert!(neg[0].handle() <= 2);
            assert_eq!(e.block(Gen::new(4, g).unwrap()), &[3]);
        }
        let x = delta(&b.tensor(g).unwrap().with_cap(4), &[1, 2, 3, 4], g).unwrap();
        assert_eq!(pair(&x, &d).unwrap().abs(), Rational::one());
    }

    #[test]
    fn dual_class_without_chords() {
        let g = 3;
        for b in enumerate_b(3, 0, g, true).unwrap() {
            let d = dual_class(&b, 3, g).unwrap();
            assert_eq!(d.len(), 1);
            let (e, c) = d.entries().next().unwrap();
            assert!(c.abs().is_one());
            let x = delta(&b.tensor(g).unwrap().with_cap(3), &[1, 2, 3], g).unwrap();
            assert!(pair(&x, &d).unwrap().is_one(), "{b}");
            for (t, x) in b.monomial.letters().iter().enumerate() {
                assert!(e.block(*x).contains(&(t as u8 + 1)));
            }
        }
    }

    #[test]
    fn dual_class_preconditions() {
        let g = 3;
        let b = GeneratorElement { s: 3, r: 0, diagram: ChordDiagram::empty(3), monomial: Word::parse("1,2,3", 4).unwrap() };
        assert!(dual_class(&b, 3, 4).is_err());
        assert!(dual_class(&b, 3, g).is_ok());
        let b = GeneratorElement { s: 3, r: 0, diagram: ChordDiagram::empty(3), monomial: Word::parse("3,3,3", g).unwrap() };
        assert!(dual_class(&b, 3, 2).is_err());
        assert!(dual_class(&b, 4, g).is_err());
    }
}
