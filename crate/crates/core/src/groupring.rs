//! The truncated group algebra ℚπ₁/I₁^{cap+1} of the free group on
//! α_{±1}, …, α_{±g}.
//!
//! # Representation
//!
//! An element is stored by its Fox coordinates: a rational combination of
//! words `(i₁, …, i_k)`, where the word stands for the product
//! `(α_{i₁} − 1)⋯(α_{i_k} − 1)` and the empty word for `1`. Words of length
//! `k` span `I₁^k / I₁^{k+1} ≅ H^{⊗k}`, with the word identified with the
//! monomial `a_{i₁} ⊗ ⋯ ⊗ a_{i_k}`.
//!
//! In these coordinates the Magnus lift `a_{i₁}⊗⋯⊗a_{i_k} ↦ (α_{i₁}−1)⋯(α_{i_k}−1)`
//! is the identity, so "a tensor" and "its lift" are literally the same
//! [`AlgebraElement`]. Group elements enter through [`generator_series`]:
//! `α_i = 1 + w(i)` and `α_i⁻¹ = Σ_k (−1)^k w(i)^k`.
//!
//! Every element carries its truncation cap. Arithmetic between different
//! caps is an error; use [`AlgebraElement::with_cap`] to change it explicitly.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A generator index `i` with `1 ≤ |i|`; `i` and `-i` are the two loops of one handle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gen(i8);

impl Gen {
    pub fn new(i: i32, g: usize) -> Result<Gen> {
        if i == 0 || i.unsigned_abs() as usize > g || i.unsigned_abs() > 60 {
            return Err(Error::InvalidGenerator { index: i, genus: g });
        }
        Ok(Gen(i as i8))
    }

    /// Constructs without a genus bound (caller guarantees `i != 0`).
    pub(crate) fn raw(i: i8) -> Gen {
        debug_assert!(i != 0);
        Gen(i)
    }

    pub fn index(self) -> i32 {
        self.0 as i32
    }

    pub fn handle(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn sign(self) -> i64 {
        if self.0 > 0 {
            1
        } else {
            -1
        }
    }

    pub fn dual(self) -> Gen {
        Gen(-self.0)
    }

    /// Position in the canonical cell order `1, −1, 2, −2, …`.
    pub fn slot(self) -> usize {
        2 * (self.handle() - 1) + usize::from(self.0 < 0)
    }

    pub fn from_slot(slot: usize) -> Gen {
        let h = (slot / 2 + 1) as i8;
        Gen(if slot.is_multiple_of(2) { h } else { -h })
    }

    /// All `2g` generators in canonical order.
    pub fn all(g: usize) -> impl Iterator<Item = Gen> {
        (0..2 * g).map(Gen::from_slot)
    }
}

impl PartialOrd for Gen {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Gen {
    fn cmp(&self, other: &Self) -> Ordering {
        self.slot().cmp(&other.slot())
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A word in the generators; also a tensor monomial.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Gen>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Parses the comma-separated text form, validating indices against `g`.
    pub fn parse(text: &str, g: usize) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Word::empty());
        }
        text.split(',')
            .map(|t| {
                let i: i32 = t
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad generator {t:?} in word {text:?}")))?;
                Gen::new(i, g)
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    /// All words of the given length over `2g` letters, in lexicographic order
    /// with letters in canonical cell order.
    pub fn all(len: usize, g: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    Gen::all(g).map(move |x| {
                        let mut v = w.0.clone();
                        v.push(x);
                        Word(v)
                    })
                })
                .collect();
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses without a genus bound (indices up to 60).
    fn from_str(s: &str) -> Result<Word> {
        Word::parse(s, 60)
    }
}

/// An element of ℚπ₁/I₁^{cap+1} in Fox coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    cap: usize,
    terms: BTreeMap<Word, Rational>,
}

impl AlgebraElement {
    pub fn zero(cap: usize) -> Self {
        Self { cap, terms: BTreeMap::new() }
    }

    pub fn one(cap: usize) -> Self {
        Self::word(Word::empty(), cap).unwrap()
    }

    /// The single term `1·w`.
    pub fn word(w: Word, cap: usize) -> Result<Self> {
        Self::from_terms([(w, Rational::one())], cap)
    }

    pub fn from_terms<I>(terms: I, cap: usize) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Rational)>,
    {
        let mut x = Self::zero(cap);
        for (w, c) in terms {
            if w.len() > cap {
                return Err(Error::LengthOverflow { len: w.len(), cap });
            }
            x.add_term(w, &c);
        }
        Ok(x)
    }

    fn add_term(&mut self, w: Word, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w).or_insert_with(Rational::zero);
        *e = &*e + c;
        if e.is_zero() {
            // re-borrow to remove
            let key = self.terms.iter().find(|(_, v)| v.is_zero()).map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_default()
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

    /// Changes the cap. Lowering drops the words that no longer fit, which is
    /// the quotient map; raising is the (non-canonical) inclusion by coordinates.
    pub fn with_cap(&self, cap: usize) -> Self {
        Self {
            cap,
            terms: self.terms.iter().filter(|(w, _)| w.len() <= cap).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    fn check_cap(&self, other: &Self) -> Result<()> {
        if self.cap != other.cap {
            return Err(Error::CapMismatch(self.cap, other.cap));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_cap(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, f: &Rational) -> Self {
        if f.is_zero() {
            return Self::zero(self.cap);
        }
        Self { cap: self.cap, terms: self.terms.iter().map(|(w, c)| (w.clone(), c * f)).collect() }
    }

    /// Product in the truncated algebra: concatenate words, drop those longer than the cap.
    pub fn truncated_product(&self, other: &Self) -> Result<Self> {
        self.check_cap(other)?;
        let mut acc: BTreeMap<Word, Rational> = BTreeMap::new();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                if u.len() + v.len() > self.cap {
                    continue;
                }
                let e = acc.entry(u.concat(v)).or_insert_with(Rational::zero);
                e.sub_mul_assign(&-a, b);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Self { cap: self.cap, terms: acc })
    }

    /// The terms of word length exactly `k`.
    pub fn graded_piece(&self, k: usize) -> Result<Self> {
        if k > self.cap {
            return Err(Error::LengthOverflow { len: k, cap: self.cap });
        }
        Ok(Self {
            cap: self.cap,
            terms: self.terms.iter().filter(|(w, _)| w.len() == k).map(|(w, c)| (w.clone(), c.clone())).collect(),
        })
    }

    /// Coefficient of the empty word.
    pub fn augmentation(&self) -> Rational {
        self.coeff(&Word::empty())
    }

    /// Highest word length present, if nonzero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn is_homogeneous(&self, k: usize) -> bool {
        self.terms.keys().all(|w| w.len() == k)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "w({w})")?;
            } else {
                write!(f, "{mag}·w({w})")?;
            }
        }
        Ok(())
    }
}

/// `α_i^{±1}` expanded in Fox coordinates up to the cap.
pub fn generator_series(i: Gen, exponent: i32, cap: usize) -> Result<AlgebraElement> {
    match exponent {
        1 => {
            let mut terms = vec![(Word::empty(), Rational::one())];
            if cap >= 1 {
                terms.push((Word(vec![i]), Rational::one()));
            }
            AlgebraElement::from_terms(terms, cap)
        }
        -1 => AlgebraElement::from_terms(
            (0..=cap).map(|k| {
                let c = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
                (Word(vec![i; k]), c)
            }),
            cap,
        ),
        e => Err(Error::Precondition(format!("exponent must be ±1, got {e}"))),
    }
}

/// Evaluates a group word given as `(generator, ±1)` letters.
pub fn word_element(letters: &[(Gen, i32)], cap: usize) -> Result<AlgebraElement> {
    let mut acc = AlgebraElement::one(cap);
    for &(x, e) in letters {
        acc = acc.truncated_product(&generator_series(x, e, cap)?)?;
    }
    Ok(acc)
}

/// The surface relator `ζ = [α₁, α₋₁] ⋯ [α_g, α₋g]` with `[a, b] = a b a⁻¹ b⁻¹`.
pub fn zeta(g: usize, cap: usize) -> Result<AlgebraElement> {
    if g == 0 {
        return Err(Error::Precondition("genus must be at least 1".into()));
    }
    let mut letters = Vec::with_capacity(4 * g);
    for h in 1..=g as i32 {
        let a = Gen::new(h, g)?;
        let b = Gen::new(-h, g)?;
        letters.extend([(a, 1), (b, 1), (a, -1), (b, -1)]);
    }
    word_element(&letters, cap)
}

/// The symplectic element `μ = Σ_{1≤±i≤g} sign(i) a_i ⊗ a_{−i}`, at cap 2.
pub fn mu(g: usize) -> Result<AlgebraElement> {
    if g == 0 {
        return Err(Error::Precondition("genus must be at least 1".into()));
    }
    AlgebraElement::from_terms(
        Gen::all(g).map(|x| (Word(vec![x, x.dual()]), Rational::from_int(x.sign()))),
        2,
    )
}

/// The Magnus lift of a monomial: the word itself, with coefficient one.
pub fn magnus_lift(monomial: &Word, cap: usize) -> Result<AlgebraElement> {
    AlgebraElement::word(monomial.clone(), cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(ix: &[i8]) -> Word {
        Word(ix.iter().map(|&i| Gen::raw(i)).collect())
    }

    fn el(terms: &[(&[i8], i64)], cap: usize) -> AlgebraElement {
        AlgebraElement::from_terms(terms.iter().map(|(x, c)| (w(x), Rational::from_int(*c))), cap).unwrap()
    }

    #[test]
    fn concatenation_and_truncation() {
        let a = el(&[(&[1], 1)], 2);
        let b = el(&[(&[-1], 1)], 2);
        assert_eq!(a.truncated_product(&b).unwrap(), el(&[(&[1, -1], 1)], 2));
        let top = el(&[(&[1, 2], 1)], 2);
        assert!(top.truncated_product(&a).unwrap().is_zero());
        assert!(matches!(a.truncated_product(&a.with_cap(3)), Err(Error::CapMismatch(2, 3))));
    }

    #[test]
    fn inverse_series() {
        let g1 = Gen::new(1, 1).unwrap();
        assert_eq!(generator_series(g1, -1, 2).unwrap(), el(&[(&[], 1), (&[1], -1), (&[1, 1], 1)], 2));
        assert_eq!(generator_series(g1, 1, 0).unwrap(), AlgebraElement::one(0));
        let p = generator_series(g1, 1, 5).unwrap().truncated_product(&generator_series(g1, -1, 5).unwrap());
        assert_eq!(p.unwrap(), AlgebraElement::one(5));
    }

    #[test]
    fn commutator_at_cap_two() {
        let (a, b) = (Gen::new(1, 1).unwrap(), Gen::new(-1, 1).unwrap());
        let c = word_element(&[(a, 1), (b, 1), (a, -1), (b, -1)], 2).unwrap();
        assert_eq!(c, el(&[(&[], 1), (&[1, -1], 1), (&[-1, 1], -1)], 2));
        assert_eq!(word_element(&[], 3).unwrap(), AlgebraElement::one(3));
        assert_eq!(word_element(&[(a, 1)], 3).unwrap(), el(&[(&[], 1), (&[1], 1)], 3));
    }

    #[test]
    fn zeta_minus_one_is_mu() {
        let z = zeta(1, 2).unwrap().sub(&AlgebraElement::one(2)).unwrap();
        assert_eq!(z, el(&[(&[1, -1], 1), (&[-1, 1], -1)], 2));
        assert_eq!(mu(1).unwrap(), z);
        assert_eq!(mu(2).unwrap().len(), 4);
        for g in 1..=4 {
            let z = zeta(g, 2).unwrap();
            assert_eq!(z.sub(&AlgebraElement::one(2)).unwrap(), mu(g).unwrap());
        }
    }

    #[test]
    fn graded_pieces_of_zeta() {
        let z = zeta(2, 3).unwrap();
        assert_eq!(z.augmentation(), Rational::one());
        assert!(z.graded_piece(1).unwrap().is_zero());
        assert_eq!(z.graded_piece(2).unwrap(), mu(2).unwrap().with_cap(3));
        assert!(z.graded_piece(4).is_err());
    }

    #[test]
    fn magnus_lift_is_identity_on_coordinates() {
        let m = w(&[1, 2]);
        let l = magnus_lift(&m, 3).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l.coeff(&m), Rational::one());
        assert!(magnus_lift(&m, 1).is_err());
    }

    #[test]
    fn word_text_form() {
        let x = Word::parse("1,-1,2", 2).unwrap();
        assert_eq!(x, w(&[1, -1, 2]));
        assert_eq!(x.to_string(), "1,-1,2");
        assert!(Word::parse("1,3", 2).is_err());
        assert!(Word::parse("1,0", 2).is_err());
        assert!(Word::parse("", 2).unwrap().is_empty());
    }

    #[test]
    fn word_enumeration_order() {
        let all = Word::all(2, 1);
        assert_eq!(all, vec![w(&[1, 1]), w(&[1, -1]), w(&[-1, 1]), w(&[-1, -1])]);
        assert_eq!(Word::all(3, 2).len(), 64);
    }
}
