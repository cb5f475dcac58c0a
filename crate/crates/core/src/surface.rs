//! `H_n(Σ_{g,*})` as the quotient of `H_n(U_2g)` by the kernel `K_n(ι)`
//! spanned by `Δ^I(ζ) × H_J(U_2g)` over ordered `I` with `|I| ≥ 2`.

use std::fs;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::{debug, info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupring::{zeta, AlgebraElement};
use crate::linalg::io::{read_subspace, write_subspace, SUBSPACE_FORMAT_VERSION};
use crate::linalg::{BasisIndexing, Echelon, SparseVec, Subspace};
use crate::moriyama::{arrangements, delta, dimension, full_basis, shuffle_product, ArrangementBasisElement, HClass};

/// Bumped whenever an orientation or enumeration convention changes.
pub const CONVENTION_VERSION: u32 = 1;

/// Ceilings that turn oversized computations into [`Error::Resource`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_dim: usize,
    pub max_span: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_dim: 20_000, max_span: 100_000 }
    }
}

impl Limits {
    pub fn check_dim(&self, value: usize) -> Result<()> {
        if value > self.max_dim {
            return Err(Error::Resource { what: "ambient dimension", value, ceiling: self.max_dim });
        }
        Ok(())
    }

    pub fn check_span(&self, value: usize) -> Result<()> {
        if value > self.max_span {
            return Err(Error::Resource { what: "spanning vectors", value, ceiling: self.max_span });
        }
        Ok(())
    }
}

/// `Δ^I(ζ)`.
pub fn zeta_simplex(labels: &[u8], g: usize) -> Result<HClass> {
    if labels.is_empty() {
        return Err(Error::Precondition("zeta_simplex needs at least one label".into()));
    }
    delta(&zeta(g, labels.len())?, labels, g)
}

/// Ordered subsets of `1..=n` of size at least 2: by size, then subset in
/// lexicographic order, then orderings in lexicographic order.
pub fn ordered_subsets(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for size in 2..=n {
        for subset in subsets(n, size) {
            out.extend(permutations(&subset));
        }
    }
    out
}

fn subsets(n: usize, size: usize) -> Vec<Vec<u8>> {
    fn go(start: u8, n: u8, size: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            cur.push(x);
            go(x + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n as u8, size, &mut Vec::new(), &mut out);
    out
}

/// Permutations of a sorted sequence in lexicographic order.
pub fn permutations(items: &[u8]) -> Vec<Vec<u8>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Number of spanning vectors used for `K_n(ι)`.
pub fn kernel_span_count(n: usize, g: usize) -> usize {
    (2..=n)
        .map(|m| {
            let falling: usize = (0..m).map(|i| n - i).product();
            falling * dimension(n - m, g) as usize
        })
        .sum()
}

/// Spanning vectors of `K_n(ι)` for one ordered subset `I`.
fn kernel_vectors_for(
    order: &[u8],
    n: usize,
    g: usize,
    basis: &BasisIndexing<ArrangementBasisElement>,
) -> Result<Vec<SparseVec>> {
    let zs = zeta_simplex(order, g)?;
    let rest: Vec<u8> = (1..=n as u8).filter(|l| !order.contains(l)).collect();
    arrangements(&rest, g)
        .into_iter()
        .map(|e| shuffle_product(&zs, &HClass::basis(e))?.vector(basis))
        .collect()
}

/// `K_n(ι)` in the Moriyama indexing of `full_basis(n, g)`.
pub fn iota_kernel(n: usize, g: usize, limits: &Limits) -> Result<Subspace> {
    let basis = full_basis_checked(n, g, limits)?;
    iota_kernel_in(n, g, &basis, limits)
}

fn full_basis_checked(n: usize, g: usize, limits: &Limits) -> Result<BasisIndexing<ArrangementBasisElement>> {
    if g == 0 {
        return Err(Error::Precondition("genus must be at least 1".into()));
    }
    limits.check_dim(dimension(n, g).try_into().unwrap_or(usize::MAX))?;
    Ok(full_basis(n, g))
}

fn iota_kernel_in(n: usize, g: usize, basis: &BasisIndexing<ArrangementBasisElement>, limits: &Limits) -> Result<Subspace> {
    limits.check_span(kernel_span_count(n, g))?;
    let mut ech = Echelon::new(basis.dim(), basis.fingerprint());
    for chunk in ordered_subsets(n).chunks(64) {
        let batches: Vec<Vec<SparseVec>> =
            chunk.par_iter().map(|order| kernel_vectors_for(order, n, g, basis)).collect::<Result<_>>()?;
        for b in batches {
            ech.extend_par(&b);
        }
        if ech.rank() == basis.dim() {
            break;
        }
    }
    Ok(ech.finish())
}

/// `H_n(Σ_{g,*})`: the Moriyama basis of `H_n(U_2g)` together with `K_n(ι)`.
#[derive(Clone, Debug)]
pub struct SurfaceSpace {
    n: usize,
    g: usize,
    basis: Arc<BasisIndexing<ArrangementBasisElement>>,
    kernel: Subspace,
}

/// An element of `H_n(Σ_{g,*})` in the quotient coordinates of a [`SurfaceSpace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceClass {
    pub coords: SparseVec,
}

impl SurfaceClass {
    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub n: usize,
    pub g: usize,
    pub ambient_dim: usize,
    pub kernel_rank: usize,
    pub quotient_dim: usize,
}

impl SurfaceSpace {
    pub fn build(n: usize, g: usize, limits: &Limits) -> Result<Self> {
        let basis = full_basis_checked(n, g, limits)?;
        let kernel = iota_kernel_in(n, g, &basis, limits)?;
        info!("built K_{n}(ι) for g={g}: rank {} of {}", kernel.rank(), basis.dim());
        Ok(Self { n, g, basis: Arc::new(basis), kernel })
    }

    pub fn cache_path(dir: &Path, n: usize, g: usize) -> PathBuf {
        dir.join(format!("surface-n{n}-g{g}-c{CONVENTION_VERSION}-f{SUBSPACE_FORMAT_VERSION}.txt"))
    }

    /// Loads from `dir` when a valid cache file exists, otherwise builds and
    /// stores it. Unreadable or stale cache files are rebuilt.
    pub fn load_or_build(n: usize, g: usize, limits: &Limits, dir: Option<&Path>) -> Result<Self> {
        let Some(dir) = dir else {
            return Self::build(n, g, limits);
        };
        let basis = full_basis_checked(n, g, limits)?;
        let path = Self::cache_path(dir, n, g);
        if path.exists() {
            match fs::File::open(&path).map_err(Error::from).and_then(|f| read_subspace(BufReader::new(f))) {
                Ok(k) if k.fingerprint() == basis.fingerprint() && k.dim() == basis.dim() => {
                    debug!("loaded {}", path.display());
                    return Ok(Self { n, g, basis: Arc::new(basis), kernel: k });
                }
                Ok(_) => warn!("{} does not match the current basis, rebuilding", path.display()),
                Err(e) => warn!("ignoring cache {}: {e}", path.display()),
            }
        }
        let kernel = iota_kernel_in(n, g, &basis, limits)?;
        let space = Self { n, g, basis: Arc::new(basis), kernel };
        if let Err(e) = space.store(&path) {
            warn!("could not write cache {}: {e}", path.display());
        }
        Ok(space)
    }

    fn store(&self, path: &Path) -> Result<()> {
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        write_subspace(BufWriter::new(fs::File::create(&tmp)?), &self.kernel)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn basis(&self) -> &BasisIndexing<ArrangementBasisElement> {
        &self.basis
    }

    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn quotient_dim(&self) -> usize {
        self.basis.dim() - self.kernel.rank()
    }

    pub fn labels(&self) -> Vec<u8> {
        (1..=self.n as u8).collect()
    }

    pub fn report(&self) -> SurfaceReport {
        SurfaceReport {
            n: self.n,
            g: self.g,
            ambient_dim: self.ambient_dim(),
            kernel_rank: self.kernel.rank(),
            quotient_dim: self.quotient_dim(),
        }
    }

    /// Moriyama coordinates of a class on labels `1..=n`.
    pub fn vector(&self, x: &HClass) -> Result<SparseVec> {
        if x.g() != self.g || x.labels() != self.labels() {
            return Err(Error::DegreeMismatch { expected: self.n, got: x.n() });
        }
        x.vector(&self.basis)
    }

    pub fn to_surface(&self, x: &HClass) -> Result<SurfaceClass> {
        Ok(SurfaceClass { coords: self.kernel.quotient_coords(&self.vector(x)?)? })
    }

    /// `Δ^n(x)` in Moriyama coordinates, before passing to the quotient.
    pub fn delta_vector(&self, x: &AlgebraElement) -> Result<SparseVec> {
        self.vector(&delta(x, &self.labels(), self.g)?)
    }

    pub fn delta_surface(&self, x: &AlgebraElement) -> Result<SurfaceClass> {
        Ok(SurfaceClass { coords: self.kernel.quotient_coords(&self.delta_vector(x)?)? })
    }
}
