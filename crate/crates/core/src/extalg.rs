//! The exterior algebra `Λ[x_1, ..., x_n]` over `Q` with bitmask monomials,
//! the endomorphism `Φ: z ↦ z ∧ ω`, and exact bases of its kernel `K` and
//! cokernel `V = Λ/(ω)`.
//!
//! Monomials are subsets of `{1..n}` stored as bitmasks (bit `i-1` set means
//! `x_i` occurs); the Koszul sign of a product is the shuffle parity of the
//! two masks. The canonical order on monomials of fixed degree is the integer
//! order of masks, which makes every basis, and hence every representation
//! matrix downstream, reproducible bit-for-bit.
//!
//! Everything here works for any rank, but enumerating `Λ^k` visits all
//! `2^n` masks, so ranks beyond about 16 (genus 8) are impractical.

use alloc::vec;
use alloc::vec::Vec;
use alloc::collections::BTreeMap;
use core::fmt;

use num_traits::{One, Zero};

use crate::freegroup::Bivector;
use crate::matrix::RatMatrix;
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtAlgError {
    DegreeOutOfRange { degree: usize, rank: usize },
}

impl fmt::Display for ExtAlgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtAlgError::DegreeOutOfRange { degree, rank } => {
                write!(f, "degree {degree} out of range for rank {rank}")
            }
        }
    }
}

impl core::error::Error for ExtAlgError {}

/// An element of `Λ[x_1..x_n]`: bitmask monomials with nonzero rational
/// coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtElem {
    rank: usize,
    terms: BTreeMap<u32, Rat>,
}

impl ExtElem {
    pub fn zero(rank: usize) -> ExtElem {
        ExtElem { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> ExtElem {
        ExtElem::monomial(rank, 0)
    }

    /// The single monomial `x^mask` with coefficient 1.
    pub fn monomial(rank: usize, mask: u32) -> ExtElem {
        debug_assert!(mask < (1u32 << rank));
        let mut terms = BTreeMap::new();
        terms.insert(mask, Rat::one());
        ExtElem { rank, terms }
    }

    pub fn generator(rank: usize, index: usize) -> ExtElem {
        assert!(index >= 1 && index <= rank);
        ExtElem::monomial(rank, 1 << (index - 1))
    }

    pub fn from_bivector(b: &Bivector) -> ExtElem {
        let mut out = ExtElem::zero(b.rank());
        for (i, j, c) in b.iter() {
            out.add_term((1 << (i - 1)) | (1 << (j - 1)), c.clone());
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rat)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn coeff(&self, mask: u32) -> Rat {
        self.terms.get(&mask).cloned().unwrap_or_else(Rat::zero)
    }

    /// `Some(k)` when all monomials have popcount `k` (the zero element is
    /// homogeneous of every degree; this returns `Some(0)` for it).
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|m| m.count_ones() as usize);
        let Some(first) = degs.next() else { return Some(0) };
        degs.all(|d| d == first).then_some(first)
    }

    pub fn homogeneous_part(&self, degree: usize) -> ExtElem {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.count_ones() as usize == degree)
            .map(|(&m, c)| (m, c.clone()))
            .collect();
        ExtElem { rank: self.rank, terms }
    }

    pub fn add_term(&mut self, mask: u32, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mask).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn add(&self, other: &ExtElem) -> ExtElem {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> ExtElem {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, s: &Rat) -> ExtElem {
        if s.is_zero() {
            return ExtElem::zero(self.rank);
        }
        ExtElem {
            rank: self.rank,
            terms: self.terms.iter().map(|(&m, c)| (m, c * s)).collect(),
        }
    }

    /// Graded-commutative product; the sign of each monomial pair is the
    /// shuffle parity of the masks, and overlapping masks vanish.
    pub fn wedge(&self, other: &ExtElem) -> ExtElem {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        let mut out = ExtElem::zero(self.rank);
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                if ma & mb != 0 {
                    continue;
                }
                let c = ca * cb;
                out.add_term(ma | mb, if shuffle_sign_is_neg(ma, mb) { -c } else { c });
            }
        }
        out
    }

    /// Linear substitution `x_i ↦ Σ_j m[j][i] x_j`, extended as an algebra
    /// map. The matrix columns are the images of the generators.
    pub fn apply_linear(&self, m: &RatMatrix) -> ExtElem {
        assert_eq!(m.rows(), self.rank);
        assert_eq!(m.cols(), self.rank);
        let images: Vec<ExtElem> = (0..self.rank)
            .map(|col| {
                let mut img = ExtElem::zero(self.rank);
                for row in 0..self.rank {
                    img.add_term(1 << row, m[(row, col)].clone());
                }
                img
            })
            .collect();
        let mut out = ExtElem::zero(self.rank);
        for (mask, c) in self.terms() {
            let mut prod = ExtElem::one(self.rank);
            let mut bits = mask;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                prod = prod.wedge(&images[i]);
            }
            out = out.add(&prod.scale(c));
        }
        out
    }

    /// Coefficients of `self` over the monomials of a degree slice; panics
    /// if `self` has a monomial outside the slice.
    pub fn coeff_vec(&self, slice: &DegreeSlice) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); slice.len()];
        for (m, c) in self.terms() {
            let idx = slice
                .index_of(m)
                .expect("monomial outside the degree slice");
            v[idx] = c.clone();
        }
        v
    }

    pub fn from_coeff_vec(slice: &DegreeSlice, v: &[Rat]) -> ExtElem {
        assert_eq!(v.len(), slice.len());
        let mut out = ExtElem::zero(slice.rank());
        for (idx, c) in v.iter().enumerate() {
            out.add_term(slice.monomial(idx), c.clone());
        }
        out
    }
}

/// Parity of `#{(i, j) : i ∈ a, j ∈ b, i > j}`; true means negative.
pub(crate) fn shuffle_sign_is_neg(a: u32, b: u32) -> bool {
    let mut parity = 0u32;
    let mut bits = b;
    while bits != 0 {
        let j = bits.trailing_zeros();
        bits &= bits - 1;
        parity ^= (a >> (j + 1)).count_ones() & 1;
    }
    parity == 1
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (mask, c)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if mask == 0 {
                write!(f, "{c}")?;
                continue;
            }
            if !c.is_one() {
                write!(f, "{c}*")?;
            }
            let mut bits = mask;
            let mut first = true;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize + 1;
                bits &= bits - 1;
                if !first {
                    write!(f, "^")?;
                }
                write!(f, "x{i}")?;
                first = false;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The ordered monomial basis of `Λ^k` in rank `n`: all masks of popcount
/// `k`, ascending as integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSlice {
    rank: usize,
    degree: usize,
    monomials: Vec<u32>,
}

impl DegreeSlice {
    pub fn new(rank: usize, degree: usize) -> DegreeSlice {
        let monomials = if degree > rank {
            Vec::new()
        } else {
            (0u32..(1u32 << rank))
                .filter(|m| m.count_ones() as usize == degree)
                .collect()
        };
        DegreeSlice { rank, degree, monomials }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial(&self, idx: usize) -> u32 {
        self.monomials[idx]
    }

    pub fn monomials(&self) -> &[u32] {
        &self.monomials
    }

    pub fn index_of(&self, mask: u32) -> Option<usize> {
        self.monomials.binary_search(&mask).ok()
    }
}

/// `ω = x_1 x_2 + x_3 x_4 + ... + x_{2g-1} x_{2g}` in rank `2g`.
pub fn omega(genus: usize) -> ExtElem {
    let mut out = ExtElem::zero(2 * genus);
    for i in 0..genus {
        out.add_term(0b11 << (2 * i), Rat::one());
    }
    out
}

/// Matrix of `Φ: Λ^k → Λ^{k+2}`, `z ↦ z ∧ ω`, in the canonical monomial
/// bases. When `k + 2` exceeds the rank the matrix has zero rows.
pub fn phi_matrix(genus: usize, k: usize) -> Result<RatMatrix, ExtAlgError> {
    let rank = 2 * genus;
    if k > rank {
        return Err(ExtAlgError::DegreeOutOfRange { degree: k, rank });
    }
    let domain = DegreeSlice::new(rank, k);
    let target = DegreeSlice::new(rank, k + 2);
    let om = omega(genus);
    let mut m = RatMatrix::zero(target.len(), domain.len());
    for col in 0..domain.len() {
        let z = ExtElem::monomial(rank, domain.monomial(col));
        for (mask, c) in z.wedge(&om).terms() {
            let row = target.index_of(mask).expect("wedge lands in Λ^{k+2}");
            m[(row, col)] = c.clone();
        }
    }
    Ok(m)
}

/// Which side of the Lefschetz pair a class lives in: the cokernel algebra
/// `V = Λ/(ω)` or the kernel module `K = ker Φ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LefschetzSpace {
    Cokernel,
    Kernel,
}

/// Exact basis of `K^k = ker(Φ: Λ^k → Λ^{k+2})`, derived from the reduced
/// echelon form of the matrix of `Φ`. Deterministic: one basis vector per
/// free column, ascending, each carrying coefficient 1 on its own monomial
/// and 0 on the other free monomials.
pub fn kernel_basis(genus: usize, k: usize) -> Vec<ExtElem> {
    let rank = 2 * genus;
    if k > rank {
        return Vec::new();
    }
    PhiSlice::new(genus, k).kernel
}

/// Coset representatives spanning `V^k = Λ^k / (ω · Λ^{k-2})`: the monomials
/// away from the pivot columns of the reduced echelon form of the image,
/// i.e. the lexicographically-first monomial complement of the column space.
pub fn cokernel_basis(genus: usize, k: usize) -> Vec<ExtElem> {
    let rank = 2 * genus;
    if k > rank {
        return Vec::new();
    }
    let slice = PhiSlice::new(genus, k);
    slice
        .coker_monomials
        .iter()
        .map(|&m| ExtElem::monomial(rank, m))
        .collect()
}

/// Multiply a `V`- or `K`-class by a homogeneous `z ∈ Λ` and express the
/// result in the canonical basis of the target space.
///
/// For `V` the product is reduced modulo the image of `Φ`; for `K` the
/// product is certified to lie in `ker Φ` and read off against the kernel
/// basis (both can only fail on an internal inconsistency, which panics).
pub fn module_action(
    z: &ExtElem,
    class_index: usize,
    space: LefschetzSpace,
    genus: usize,
    k: usize,
) -> Vec<Rat> {
    let deg = z
        .homogeneous_degree()
        .expect("module_action requires a homogeneous multiplier");
    let source = PhiSlice::new(genus, k);
    let target = PhiSlice::new(genus, k + deg);
    match space {
        LefschetzSpace::Cokernel => {
            let rep = ExtElem::monomial(2 * genus, source.coker_monomials[class_index]);
            target.reduce_to_cokernel(&z.wedge(&rep))
        }
        LefschetzSpace::Kernel => {
            let rep = source.kernel[class_index].clone();
            target
                .kernel_coordinates(&z.wedge(&rep))
                .expect("Λ-multiple of a kernel class stays in the kernel")
        }
    }
}

/// Precomputed data for one degree `k`: the kernel basis of `Φ` on `Λ^k` and
/// the reduction of `Λ^k` onto cokernel representatives.
#[derive(Clone, Debug)]
pub struct PhiSlice {
    genus: usize,
    k: usize,
    domain: DegreeSlice,
    /// rref of the image `Φ(Λ^{k-2}) ⊆ Λ^k`, spanning vectors as rows.
    image_rref: RatMatrix,
    image_pivots: Vec<usize>,
    /// Monomials (ascending) whose classes form the basis of `V^k`.
    pub coker_monomials: Vec<u32>,
    /// Basis of `K^k`.
    pub kernel: Vec<ExtElem>,
    kernel_free_cols: Vec<usize>,
}

impl PhiSlice {
    pub fn new(genus: usize, k: usize) -> PhiSlice {
        let rank = 2 * genus;
        assert!(k <= rank, "degree out of range");
        let domain = DegreeSlice::new(rank, k);

        // Kernel of Φ on Λ^k.
        let phi = phi_matrix(genus, k).expect("degree checked above");
        let kernel_vecs = phi.kernel_basis();
        let ker_echelon = phi.echelon();
        let kernel_free_cols: Vec<usize> = (0..domain.len())
            .filter(|c| !ker_echelon.pivots.contains(c))
            .collect();
        let kernel: Vec<ExtElem> = kernel_vecs
            .iter()
            .map(|v| ExtElem::from_coeff_vec(&domain, v))
            .collect();

        // Image of Φ from Λ^{k-2}, as a row space in rref.
        let image_rows: Vec<Vec<Rat>> = if k >= 2 {
            let prev = phi_matrix(genus, k - 2).expect("degree checked above");
            (0..prev.cols())
                .map(|c| (0..prev.rows()).map(|r| prev[(r, c)].clone()).collect())
                .collect()
        } else {
            Vec::new()
        };
        let echelon = RatMatrix::from_rows(if image_rows.is_empty() {
            vec![vec![Rat::zero(); domain.len()]]
        } else {
            image_rows
        })
        .echelon();
        let image_pivots = echelon.pivots.clone();
        let coker_monomials: Vec<u32> = (0..domain.len())
            .filter(|c| !image_pivots.contains(c))
            .map(|c| domain.monomial(c))
            .collect();

        PhiSlice {
            genus,
            k,
            domain,
            image_rref: echelon.rref,
            image_pivots,
            coker_monomials,
            kernel,
            kernel_free_cols,
        }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn domain(&self) -> &DegreeSlice {
        &self.domain
    }

    pub fn coker_dim(&self) -> usize {
        self.coker_monomials.len()
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }

    /// Coordinates of the class of `u` over the cokernel representatives.
    pub fn reduce_to_cokernel(&self, u: &ExtElem) -> Vec<Rat> {
        let mut v = u.coeff_vec(&self.domain);
        for (r, &p) in self.image_pivots.iter().enumerate() {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for c in 0..self.domain.len() {
                if !self.image_rref[(r, c)].is_zero() {
                    let delta = &factor * &self.image_rref[(r, c)];
                    v[c] -= delta;
                }
            }
        }
        debug_assert!(self.image_pivots.iter().all(|&p| v[p].is_zero()));
        (0..self.domain.len())
            .filter(|c| !self.image_pivots.contains(c))
            .map(|c| v[c].clone())
            .collect()
    }

    /// Coordinates of `u` over the kernel basis, or `None` when `u` does not
    /// lie in the kernel span. Exploits the identity pattern of the kernel
    /// basis on free columns, then verifies the reconstruction exactly.
    pub fn kernel_coordinates(&self, u: &ExtElem) -> Option<Vec<Rat>> {
        let v = u.coeff_vec(&self.domain);
        let coords: Vec<Rat> = self
            .kernel_free_cols
            .iter()
            .map(|&c| v[c].clone())
            .collect();
        let mut recon = ExtElem::zero(self.domain.rank());
        for (x, b) in coords.iter().zip(&self.kernel) {
            recon = recon.add(&b.scale(x));
        }
        (&recon == u).then_some(coords)
    }
}

/// All `PhiSlice`s of one genus, built once and shared read-only.
#[derive(Clone, Debug)]
pub struct LefschetzCache {
    genus: usize,
    slices: Vec<PhiSlice>,
}

impl LefschetzCache {
    pub fn new(genus: usize) -> LefschetzCache {
        let slices = (0..=2 * genus).map(|k| PhiSlice::new(genus, k)).collect();
        LefschetzCache { genus, slices }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// The slice at exterior degree `k`; `None` beyond `2g`.
    pub fn slice(&self, k: usize) -> Option<&PhiSlice> {
        self.slices.get(k)
    }

    pub fn coker_dim(&self, k: usize) -> usize {
        self.slice(k).map_or(0, PhiSlice::coker_dim)
    }

    pub fn kernel_dim(&self, k: usize) -> usize {
        self.slice(k).map_or(0, PhiSlice::kernel_dim)
    }
}
