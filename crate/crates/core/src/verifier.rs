//! Exact checks of the kernel, vanishing, independence, pairing and cyclic
//! statements, reported as [`Verdict`]s.

use std::collections::BTreeMap;
use std::fmt::{self, Display};
use std::hash::Hash;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupring::{mu, AlgebraElement, Gen, Word};
use crate::linalg::{kernel_mod, BasisIndexing, SparseVec, Subspace};
use crate::moriyama::delta_word;
use crate::pairing::dual_class;
use crate::rational::Rational;
use crate::surface::{Limits, SurfaceSpace};
use crate::weights::{
    cyclic_invariants_in, enumerate_b, labute_rel_in, tensor_basis, tensor_vector, weight_filter_in, ChordDiagram,
    GeneratorElement,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    VerifiedEqual,
    VerifiedContained,
    Refuted,
    SkippedResource,
}

impl Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::VerifiedEqual => "verified-equal",
            Status::VerifiedContained => "verified-contained",
            Status::Refuted => "refuted",
            Status::SkippedResource => "skipped-resource",
        })
    }
}

pub const OUTSIDE_PROVED_REGIME: &str = "outside-proved-regime";

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub g: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessTerm {
    pub col: u32,
    pub key: String,
    pub value: String,
}

/// A vector in a named coordinate system, stored exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub space: String,
    pub dim: usize,
    pub terms: Vec<WitnessTerm>,
}

impl Witness {
    pub fn new<K: Clone + Eq + Hash + Display>(space: &str, ix: &BasisIndexing<K>, v: &SparseVec) -> Self {
        let terms = ix
            .terms(v)
            .zip(v.entries())
            .map(|((k, x), (c, _))| WitnessTerm { col: *c, key: k.to_string(), value: x.to_string() })
            .collect();
        Self { space: space.to_string(), dim: ix.dim(), terms }
    }

    pub fn vector(&self) -> Result<SparseVec> {
        let entries = self.terms.iter().map(|t| Ok((t.col, t.value.parse::<Rational>()?))).collect::<Result<Vec<_>>>()?;
        Ok(SparseVec::from_entries(entries))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingReport {
    pub n: usize,
    pub g: usize,
    pub family_size: usize,
    pub diagonal_signs: Vec<i64>,
    pub off_diagonal_max_abs: String,
}

/// Outcome of one check. The serialized form omits the elapsed time, so two
/// runs of the same check serialize identically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub theorem: String,
    pub params: Params,
    pub status: Status,
    #[serde(default)]
    pub tags: Vec<String>,
    #[serde(default)]
    pub dims: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<PairingReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Verdict {
    fn new(theorem: &str, params: Params, status: Status) -> Self {
        Self {
            theorem: theorem.to_string(),
            params,
            status,
            tags: Vec::new(),
            dims: BTreeMap::new(),
            witness: None,
            pairing: None,
            message: None,
            elapsed: Duration::ZERO,
        }
    }

    fn dim(&mut self, name: &str, value: usize) {
        self.dims.insert(name.to_string(), value as i64);
    }

    pub fn is_refuted(&self) -> bool {
        self.status == Status::Refuted
    }
}

/// One unit of work for [`Verifier::run`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "theorem", rename_all = "kebab-case")]
pub enum Task {
    A { n: usize, g: usize },
    C { k: usize, n: usize, g: usize },
    Vanishing { n: usize, g: usize },
    MuTilde { n: usize, g: usize },
    Independence { n: usize, g: usize },
    Pairing { n: usize, g: usize },
    Cyclic { k: usize, w: i64, g: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tier {
    Fast,
    Slow,
    All,
}

impl FromStr for Tier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Tier::Fast),
            "slow" => Ok(Tier::Slow),
            "all" => Ok(Tier::All),
            _ => Err(Error::Parse(format!("unknown tier {s:?}"))),
        }
    }
}

/// The standard desk-scale cases.
pub fn standard_tasks(tier: Tier) -> Vec<Task> {
    let fast = vec![
        Task::A { n: 2, g: 1 },
        Task::A { n: 3, g: 2 },
        Task::A { n: 3, g: 3 },
        Task::C { k: 1, n: 3, g: 3 },
        Task::C { k: 2, n: 3, g: 3 },
        Task::C { k: 3, n: 3, g: 3 },
        Task::Vanishing { n: 3, g: 2 },
        Task::Vanishing { n: 3, g: 3 },
        Task::Vanishing { n: 4, g: 3 },
        Task::Independence { n: 2, g: 2 },
        Task::Independence { n: 3, g: 3 },
        Task::Pairing { n: 3, g: 3 },
        Task::Cyclic { k: 1, w: 0, g: 2 },
        Task::Cyclic { k: 1, w: 1, g: 2 },
        Task::Cyclic { k: 1, w: 1, g: 3 },
    ];
    let slow = vec![
        Task::A { n: 4, g: 3 },
        Task::C { k: 1, n: 4, g: 4 },
        Task::C { k: 2, n: 4, g: 4 },
        Task::C { k: 3, n: 4, g: 4 },
        Task::C { k: 4, n: 4, g: 4 },
        Task::Independence { n: 4, g: 4 },
        Task::Pairing { n: 4, g: 4 },
        Task::Cyclic { k: 2, w: 1, g: 4 },
        Task::Cyclic { k: 2, w: 2, g: 4 },
    ];
    match tier {
        Tier::Fast => fast,
        Tier::Slow => slow,
        Tier::All => fast.into_iter().chain(slow).collect(),
    }
}

type Slot<V> = Arc<Mutex<Option<Arc<V>>>>;

/// Build-once cache; concurrent requests for one key wait for a single build.
struct Memo<K, V> {
    slots: Mutex<BTreeMap<K, Slot<V>>>,
}

impl<K: Ord + Clone, V> Memo<K, V> {
    fn new() -> Self {
        Self { slots: Mutex::new(BTreeMap::new()) }
    }

    fn get_or_try(&self, key: K, build: impl FnOnce() -> Result<V>) -> Result<Arc<V>> {
        let slot = self.slots.lock().unwrap().entry(key).or_default().clone();
        let mut guard = slot.lock().unwrap();
        if let Some(v) = guard.as_ref() {
            return Ok(v.clone());
        }
        let v = Arc::new(build()?);
        *guard = Some(v.clone());
        Ok(v)
    }
}

/// `ker gr_k Δ^n` as a subspace of `H^{⊗k}` containing the Labute relations.
#[derive(Clone, Debug)]
pub struct GradedKernel {
    pub k: usize,
    pub n: usize,
    pub g: usize,
    pub tensor: BasisIndexing<Word>,
    pub rel: Subspace,
    pub kernel: Subspace,
}

impl GradedKernel {
    /// The kernel in Labute quotient coordinates.
    pub fn image(&self) -> Result<Subspace> {
        self.kernel.image_mod(&self.rel)
    }

    pub fn quotient_dim(&self) -> usize {
        self.tensor.dim() - self.rel.rank()
    }
}

/// `∪_{s+r=n} B^{s,r}_nc`, by decreasing `s`.
pub fn top_family(n: usize, g: usize) -> Result<Vec<GeneratorElement>> {
    let mut out = Vec::new();
    for s in (0..=n).rev() {
        let r = n - s;
        if 2 * r <= s {
            out.extend(enumerate_b(s, r, g, true)?);
        }
    }
    Ok(out)
}

/// `∪_{s+r≤n} B^{s,r}_nc` without `B^{0,0}`, by decreasing `s + r` then `s`.
pub fn extended_family(n: usize, g: usize) -> Result<Vec<GeneratorElement>> {
    let mut out = Vec::new();
    for m in (1..=n).rev() {
        out.extend(top_family(m, g)?);
    }
    Ok(out)
}

fn lift(b: &GeneratorElement, n: usize, g: usize) -> Result<AlgebraElement> {
    Ok(b.tensor(g)?.with_cap(n))
}

pub struct Verifier {
    limits: Limits,
    cache_dir: Option<PathBuf>,
    spaces: Memo<(usize, usize), SurfaceSpace>,
    word_deltas: Memo<(usize, usize, usize), Vec<SparseVec>>,
    filtrations: Memo<(usize, usize, usize), Subspace>,
}

impl Default for Verifier {
    fn default() -> Self {
        Self::new(Limits::default(), None)
    }
}

impl Verifier {
    pub fn new(limits: Limits, cache_dir: Option<PathBuf>) -> Self {
        Self { limits, cache_dir, spaces: Memo::new(), word_deltas: Memo::new(), filtrations: Memo::new() }
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn space(&self, n: usize, g: usize) -> Result<Arc<SurfaceSpace>> {
        self.spaces.get_or_try((n, g), || SurfaceSpace::load_or_build(n, g, &self.limits, self.cache_dir.as_deref()))
    }

    /// Moriyama coordinates of `Δ^n(w̃)` for every word of length `len`, in `Word::all` order.
    pub fn word_deltas(&self, len: usize, n: usize, g: usize) -> Result<Arc<Vec<SparseVec>>> {
        self.word_deltas.get_or_try((len, n, g), || {
            let space = self.space(n, g)?;
            let words = Word::all(len, g);
            self.limits.check_span(words.len())?;
            let labels = space.labels();
            words.par_iter().map(|w| space.vector(&delta_word(w, &labels, g)?)).collect()
        })
    }

    /// `K_n(ι) + Δ^n(I^{s+1})` in Moriyama coordinates.
    pub fn filtration(&self, s: usize, n: usize, g: usize) -> Result<Arc<Subspace>> {
        self.filtrations.get_or_try((s, n, g), || {
            let space = self.space(n, g)?;
            let mut deeper = Vec::new();
            for len in s + 1..=n {
                deeper.extend(self.word_deltas(len, n, g)?.iter().cloned());
            }
            self.limits.check_span(deeper.len())?;
            let ix = space.basis();
            space.kernel().sum(&Subspace::span_par(&deeper, ix.dim(), ix.fingerprint()))
        })
    }

    pub fn graded_kernel(&self, k: usize, n: usize, g: usize) -> Result<GradedKernel> {
        if k == 0 || k > n {
            return Err(Error::Precondition(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
        }
        self.limits.check_dim((2 * g).pow(k as u32))?;
        let tensor = tensor_basis(k, g);
        let rel = labute_rel_in(&tensor, k, g)?;
        let modulo = self.filtration(k, n, g)?;
        let images = self.word_deltas(k, n, g)?;
        let kernel = kernel_mod(&images, &modulo, tensor.fingerprint())?;
        Ok(GradedKernel { k, n, g, tensor, rel, kernel })
    }

    /// `ker gr^I_k Δ^n` in Labute quotient coordinates.
    pub fn ker_gr_delta(&self, k: usize, n: usize, g: usize) -> Result<Subspace> {
        self.graded_kernel(k, n, g)?.image()
    }

    pub fn run(&self, task: Task) -> Result<Verdict> {
        let start = Instant::now();
        let (theorem, params) = describe(task);
        let result = match task {
            Task::A { n, g } => self.theorem_a(n, g),
            Task::C { k, n, g } => self.theorem_c(k, n, g),
            Task::Vanishing { n, g } => self.vanishing(n, g),
            Task::MuTilde { n, g } => self.mu_tilde(n, g),
            Task::Independence { n, g } => self.independence(n, g),
            Task::Pairing { n, g } => self.pairing(n, g),
            Task::Cyclic { k, w, g } => self.lemma_cyclic(k, w, g),
        };
        let mut verdict = match result {
            Ok(v) => v,
            Err(Error::Resource { what, value, ceiling }) => {
                let mut v = Verdict::new(theorem, params, Status::SkippedResource);
                v.message = Some(format!("{what} = {value} exceeds ceiling {ceiling}"));
                v
            }
            Err(e) => return Err(e),
        };
        verdict.elapsed = start.elapsed();
        info!("{} {:?}: {} in {:.2?}", verdict.theorem, verdict.params, verdict.status, verdict.elapsed);
        Ok(verdict)
    }

    /// Runs the tasks concurrently and returns verdicts in task order, followed
    /// by a cross-check for each `(n, g)` where both pairing and independence ran.
    pub fn run_all(&self, tasks: &[Task]) -> Result<Vec<Verdict>> {
        let mut out: Vec<Verdict> = tasks.par_iter().map(|t| self.run(*t)).collect::<Result<_>>()?;
        let mut checks = Vec::new();
        for p in out.iter().filter(|v| v.theorem == "pairing") {
            if let Some(i) = out.iter().find(|v| v.theorem == "independence" && v.params == p.params) {
                checks.push(cross_oracle(p, i));
            }
        }
        out.extend(checks);
        Ok(out)
    }

    fn compare_kernel(&self, theorem: &str, k: usize, n: usize, g: usize, require_equal: bool) -> Result<Verdict> {
        let w = 3 * k as i64 - 2 * (n as i64 + 1);
        let mut v = Verdict::new(theorem, Params { k: Some(k), n: Some(n), g, w: Some(w) }, Status::VerifiedEqual);
        let gk = self.graded_kernel(k, n, g)?;
        let kernel = gk.image()?;
        let weight = weight_filter_in(&gk.tensor, k, w, g)?.image_mod(&gk.rel)?;
        v.dim("tensor_dim", gk.tensor.dim());
        v.dim("labute_quotient_dim", gk.quotient_dim());
        v.dim("kernel_dim", kernel.rank());
        v.dim("weight_image_dim", weight.rank());
        if let Some(x) = kernel.first_non_member(&weight)? {
            v.status = Status::Refuted;
            v.witness = Some(Witness::new("tensor", &gk.tensor, &x));
            v.message = Some("weight image not contained in the kernel".into());
        } else if weight.first_non_member(&kernel)?.is_none() {
            v.status = Status::VerifiedEqual;
        } else if require_equal {
            let x = weight.first_non_member(&kernel)?.unwrap();
            v.status = Status::Refuted;
            v.witness = Some(Witness::new("tensor", &gk.tensor, &x));
            v.message = Some("kernel element outside the weight image".into());
        } else {
            v.status = Status::VerifiedContained;
        }
        Ok(v)
    }

    /// The kernel of `gr_n Δ^n` is the image of weight `≤ n − 2`.
    pub fn theorem_a(&self, n: usize, g: usize) -> Result<Verdict> {
        if n < 2 {
            return Err(Error::Precondition(format!("theorem A needs n >= 2, got {n}")));
        }
        self.compare_kernel("A", n, n, g, true)
    }

    /// The weight `≤ 3k − 2(n+1)` image lies in `ker gr_k Δ^n`, with equality when `g ≥ n`.
    pub fn theorem_c(&self, k: usize, n: usize, g: usize) -> Result<Verdict> {
        let mut v = self.compare_kernel("C", k, n, g, g >= n)?;
        if k <= g && g < n {
            v.tags.push(OUTSIDE_PROVED_REGIME.into());
        }
        Ok(v)
    }

    /// Every lift of `B^{s,r}_nc` with `s + r ≥ n + 1`, and every full insertion
    /// image `μ^{s,r}(m)` in that range, maps to zero in `H_n(Σ_{g,*})`.
    pub fn vanishing(&self, n: usize, g: usize) -> Result<Verdict> {
        if n < 2 {
            return Err(Error::Precondition(format!("vanishing needs n >= 2, got {n}")));
        }
        let mut v = Verdict::new("vanishing", Params { n: Some(n), g, ..Params::default() }, Status::VerifiedEqual);
        let space = self.space(n, g)?;
        let mut lifts = Vec::new();
        let mut insertions = Vec::new();
        for s in 0..=n {
            for r in 0..=s / 2 {
                if s + r < n + 1 {
                    continue;
                }
                lifts.extend(enumerate_b(s, r, g, true)?);
                for cd in ChordDiagram::all(s, r) {
                    for m in Word::all(s - 2 * r, g) {
                        insertions.push(GeneratorElement { s, r, diagram: cd.clone(), monomial: m });
                    }
                }
            }
        }
        self.limits.check_span(lifts.len() + insertions.len())?;
        v.dim("lifts_checked", lifts.len());
        v.dim("insertions_checked", insertions.len());
        let all: Vec<&GeneratorElement> = lifts.iter().chain(&insertions).collect();
        let images: Vec<SparseVec> =
            all.par_iter().map(|b| Ok(space.delta_surface(&lift(b, n, g)?)?.coords)).collect::<Result<_>>()?;
        if let Some((b, x)) = all.iter().zip(&images).find(|(_, x)| !x.is_zero()) {
            v.status = Status::Refuted;
            v.witness = Some(Witness::new("moriyama", space.basis(), x));
            v.message = Some(format!("{b} does not vanish"));
        }
        Ok(v)
    }

    /// Whether `Δ^n(μ̃)` vanishes in `H_n(Σ_{g,*})`.
    pub fn mu_tilde(&self, n: usize, g: usize) -> Result<Verdict> {
        if n < 2 {
            return Err(Error::Precondition(format!("mu-tilde needs n >= 2, got {n}")));
        }
        let mut v = Verdict::new("mu-tilde", Params { n: Some(n), g, ..Params::default() }, Status::VerifiedEqual);
        let space = self.space(n, g)?;
        let x = space.delta_surface(&mu(g)?.with_cap(n))?.coords;
        v.dim("nonzero_coords", x.nnz());
        if !x.is_zero() {
            v.status = Status::Refuted;
            v.witness = Some(Witness::new("moriyama", space.basis(), &x));
            v.message = Some("the image of mu is nonzero".into());
        }
        Ok(v)
    }

    fn family_kernel(&self, family: &[GeneratorElement], modulo: &Subspace, n: usize, g: usize) -> Result<(Subspace, BasisIndexing<GeneratorElement>)> {
        let space = self.space(n, g)?;
        let images: Vec<SparseVec> =
            family.par_iter().map(|b| space.delta_vector(&lift(b, n, g)?)).collect::<Result<_>>()?;
        let ix = BasisIndexing::new(family.to_vec());
        Ok((kernel_mod(&images, modulo, ix.fingerprint())?, ix))
    }

    /// Linear independence of `Δ^n` on `∪_{s+r=n} B^{s,r}_nc`, of each fixed-`s`
    /// part modulo `Δ^n(I^{s+1})`, and of the same for `s + r ≤ n`.
    pub fn independence(&self, n: usize, g: usize) -> Result<Verdict> {
        let mut v = Verdict::new("independence", Params { n: Some(n), g, ..Params::default() }, Status::VerifiedEqual);
        let space = self.space(n, g)?;
        let mut failure: Option<(String, Witness)> = None;
        let mut check = |v: &mut Verdict, name: String, family: Vec<GeneratorElement>, modulo: &Subspace| -> Result<()> {
            let (kern, ix) = self.family_kernel(&family, modulo, n, g)?;
            v.dim(&format!("{name}_size"), family.len());
            v.dim(&format!("{name}_rank"), family.len() - kern.rank());
            if failure.is_none() && !kern.is_zero() {
                failure = Some((name.clone(), Witness::new(&format!("family:{name}"), &ix, &kern.rows()[0])));
            }
            Ok(())
        };
        let top = top_family(n, g)?;
        let extended = extended_family(n, g)?;
        self.limits.check_span(extended.len())?;
        check(&mut v, "family".into(), top.clone(), space.kernel())?;
        check(&mut v, "extended".into(), extended.clone(), space.kernel())?;
        for s in 1..=n {
            let modulo = self.filtration(s, n, g)?;
            let part: Vec<GeneratorElement> = top.iter().filter(|b| b.s == s).cloned().collect();
            if !part.is_empty() {
                check(&mut v, format!("furthermore_s{s}"), part, &modulo)?;
            }
            let part: Vec<GeneratorElement> = extended.iter().filter(|b| b.s == s).cloned().collect();
            if !part.is_empty() {
                check(&mut v, format!("extended_s{s}"), part, &modulo)?;
            }
        }
        if let Some((name, w)) = failure {
            v.witness = Some(w);
            if n <= g {
                v.status = Status::Refuted;
                v.message = Some(format!("linear relation in {name}"));
            } else {
                v.status = Status::VerifiedContained;
                v.message = Some(format!("observed linear relation in {name}"));
            }
        }
        if n > g {
            v.tags.push(OUTSIDE_PROVED_REGIME.into());
        }
        Ok(v)
    }

    /// The matrix `⟨Δ^n(b̃), Ê_{b′}⟩` over `∪_{s+r=n} B^{s,r}_nc` is diagonal
    /// with entries ±1; each `Ê_b` vanishes on `K_n(ι)` and on `Δ^n(I^{s+1})`.
    pub fn pairing(&self, n: usize, g: usize) -> Result<Verdict> {
        if g < n {
            return Err(Error::Precondition(format!("pairing needs g >= n, got g = {g} < {n}")));
        }
        let mut v = Verdict::new("pairing", Params { n: Some(n), g, ..Params::default() }, Status::VerifiedEqual);
        let space = self.space(n, g)?;
        let family = top_family(n, g)?;
        let fix = BasisIndexing::new(family.clone());
        let duals: Vec<SparseVec> =
            family.par_iter().map(|b| dual_class(b, n, g)?.vector(space.basis())).collect::<Result<_>>()?;
        let images: Vec<SparseVec> =
            family.par_iter().map(|b| space.delta_vector(&lift(b, n, g)?)).collect::<Result<_>>()?;
        let matrix: Vec<SparseVec> = images
            .par_iter()
            .map(|x| SparseVec::from_entries(duals.iter().enumerate().map(|(j, d)| (j as u32, x.dot(d)))))
            .collect();
        let mut signs = Vec::new();
        let mut off_max = Rational::zero();
        let mut bad_row = None;
        for (i, row) in matrix.iter().enumerate() {
            let d = row.get(i as u32);
            signs.push(if d.is_one() { 1 } else if (-&d).is_one() { -1 } else { 0 });
            let mut ok = d.abs().is_one();
            for (j, x) in row.entries() {
                if *j as usize != i {
                    ok = false;
                    if x.abs() > off_max {
                        off_max = x.abs();
                    }
                }
            }
            if !ok && bad_row.is_none() {
                bad_row = Some(i);
            }
        }
        v.dim("family_size", family.len());
        v.dim("kernel_rows", space.kernel().rank());
        if let Some(i) = bad_row {
            v.status = Status::Refuted;
            v.witness = Some(Witness::new("pairing-row", &fix, &matrix[i]));
            v.message = Some(format!("row of {} is not a signed unit vector", family[i]));
        }
        let kernel_rows = space.kernel().rows();
        let mut deeper_checked = 0;
        for (b, d) in family.iter().zip(&duals) {
            if v.status == Status::Refuted {
                break;
            }
            if let Some(row) = kernel_rows.par_iter().find_first(|r| !r.dot(d).is_zero()) {
                v.status = Status::Refuted;
                v.witness = Some(Witness::new("moriyama", space.basis(), row));
                v.message = Some(format!("dual class of {b} pairs nontrivially with the kernel"));
                break;
            }
            for len in b.s + 1..=n {
                let deltas = self.word_deltas(len, n, g)?;
                deeper_checked += deltas.len();
                if let Some(x) = deltas.par_iter().find_first(|x| !x.dot(d).is_zero()) {
                    v.status = Status::Refuted;
                    v.witness = Some(Witness::new("moriyama", space.basis(), x));
                    v.message = Some(format!("dual class of {b} pairs nontrivially with a deeper word"));
                    break;
                }
            }
        }
        v.dim("deeper_pairings_checked", deeper_checked);
        v.pairing = Some(PairingReport { n, g, family_size: family.len(), diagonal_signs: signs, off_diagonal_max_abs: off_max.to_string() });
        Ok(v)
    }

    /// `Cyc ∩ (H ⊗ W_{≤w}(k+1)) ⊆ W_{≤w−1}(k+2)` inside `H^{⊗(k+2)}`.
    pub fn lemma_cyclic(&self, k: usize, w: i64, g: usize) -> Result<Verdict> {
        if w < -1 || w > k as i64 {
            return Err(Error::Precondition(format!("need -1 <= w <= k, got w = {w}, k = {k}")));
        }
        let mut v = Verdict::new("cyclic", Params { k: Some(k), g, w: Some(w), ..Params::default() }, Status::VerifiedContained);
        let m = k + 2;
        self.limits.check_dim((2 * g).pow(m as u32))?;
        let ix = tensor_basis(m, g);
        let inner = tensor_basis(k + 1, g);
        let cyclic = cyclic_invariants_in(&ix, m)?;
        let filter = weight_filter_in(&inner, k + 1, w, g)?;
        let mut rows = Vec::new();
        for a in Gen::all(g) {
            let prefix = Word(vec![a]);
            for row in filter.rows() {
                let x = AlgebraElement::from_terms(inner.terms(row).map(|(u, c)| (prefix.concat(u), c.clone())), m)?;
                rows.push(tensor_vector(&x, &ix)?);
            }
        }
        let extended = Subspace::span_par(&rows, ix.dim(), ix.fingerprint());
        let meet = cyclic.intersect(&extended)?;
        let target = weight_filter_in(&ix, m, w - 1, g)?;
        v.dim("tensor_dim", ix.dim());
        v.dim("cyclic_dim", cyclic.rank());
        v.dim("extended_dim", extended.rank());
        v.dim("intersection_dim", meet.rank());
        v.dim("target_dim", target.rank());
        if let Some(x) = target.first_non_member(&meet)? {
            v.status = Status::Refuted;
            v.witness = Some(Witness::new("tensor", &ix, &x));
            v.message = Some("cyclic element of the intersection has higher weight".into());
        }
        Ok(v)
    }
}

fn describe(task: Task) -> (&'static str, Params) {
    match task {
        Task::A { n, g } => ("A", Params { k: Some(n), n: Some(n), g, w: Some(n as i64 - 2) }),
        Task::C { k, n, g } => ("C", Params { k: Some(k), n: Some(n), g, w: Some(3 * k as i64 - 2 * (n as i64 + 1)) }),
        Task::Vanishing { n, g } => ("vanishing", Params { n: Some(n), g, ..Params::default() }),
        Task::MuTilde { n, g } => ("mu-tilde", Params { n: Some(n), g, ..Params::default() }),
        Task::Independence { n, g } => ("independence", Params { n: Some(n), g, ..Params::default() }),
        Task::Pairing { n, g } => ("pairing", Params { n: Some(n), g, ..Params::default() }),
        Task::Cyclic { k, w, g } => ("cyclic", Params { k: Some(k), g, w: Some(w), ..Params::default() }),
    }
}

/// A diagonal ±1 pairing matrix forces full rank of the family.
pub fn cross_oracle(pairing: &Verdict, independence: &Verdict) -> Verdict {
    let mut v = Verdict::new("cross-oracle", pairing.params.clone(), Status::VerifiedEqual);
    let diagonal = pairing.status == Status::VerifiedEqual;
    let full = independence.dims.get("family_size") == independence.dims.get("family_rank")
        && independence.dims.contains_key("family_rank");
    if diagonal && !full {
        v.status = Status::Refuted;
        v.message = Some("pairing is perfect but the family is dependent".into());
    } else if !diagonal {
        v.status = Status::VerifiedContained;
        v.message = Some("pairing not perfect; nothing to cross-check".into());
    }
    v
}
