//! The bidegree/weight slices of `Q[y_1..y_{2g}, w] ⊗ H(Λ[x_1..x_{2g}, v],
//! d v = 2ω)` and the exact mapping class action on them.
//!
//! Gradings follow `|x_i| = (1,(1))`, `|y_i| = (2,(2))`, `|w| = (0,(1))`,
//! `|v| = (1,(2))`. The homology factor is encoded through the Lefschetz
//! pair: a class is either a cokernel (`V`) class, or a kernel (`K`) class
//! carrying the factor `v`. The `(i, (n))` slice is the degree-`i` weight-`n`
//! piece; its dimension is `dim H^i` of the configuration space of `n`
//! points on the genus-`g` one-boundary surface.
//!
//! Two independent routes to every dimension are kept side by side: the
//! structured one through `V`/`K` bases, and a brute-force rank computation
//! on the full differential complex ([`SliceContext::brute_force_slice_dim`]),
//! which is the referee in the acceptance suite.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::extalg::{ExtElem, LefschetzCache};
use crate::freegroup::lcs_member_witness;
use crate::johnson::{johnson_endo, weight_slice_monomials, AlgElem, AlgMono};
use crate::matrix::{bareiss_rank, RatMatrix};
use crate::mcg::MappingClass;
use crate::{Int, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CohomologyError {
    GenusMismatch { expected: usize, found: usize },
    /// The syntactic J(2)-style certificate failed on one generator image.
    CertificateMissing { generator: usize },
}

impl fmt::Display for CohomologyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CohomologyError::GenusMismatch { expected, found } => {
                write!(f, "genus mismatch: expected {expected}, found {found}")
            }
            CohomologyError::CertificateMissing { generator } => {
                write!(
                    f,
                    "certificate missing: image of α_{generator} is not syntactically of the form α_{generator}·(product of double commutators)"
                )
            }
        }
    }
}

impl core::error::Error for CohomologyError {}

/// Which homology class a monomial carries: a `V^k` (cokernel) class, or a
/// `K^k` (kernel) class together with the odd generator `v`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClassPart {
    V { k: usize, index: usize },
    K { k: usize, index: usize },
}

impl ClassPart {
    pub fn k(&self) -> usize {
        match self {
            ClassPart::V { k, .. } | ClassPart::K { k, .. } => *k,
        }
    }

    pub fn index(&self) -> usize {
        match self {
            ClassPart::V { index, .. } | ClassPart::K { index, .. } => *index,
        }
    }

    fn has_v(&self) -> bool {
        matches!(self, ClassPart::K { .. })
    }
}

/// A basis monomial `w^a · y^β · (class)` of one slice.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RMonomial {
    pub w_exp: usize,
    pub ypows: Vec<u16>,
    pub class: ClassPart,
}

impl RMonomial {
    pub fn degree(&self) -> usize {
        2 * self.y_total() + self.class.k() + usize::from(self.class.has_v())
    }

    pub fn weight(&self) -> usize {
        self.w_exp + 2 * self.y_total() + self.class.k() + 2 * usize::from(self.class.has_v())
    }

    fn y_total(&self) -> usize {
        self.ypows.iter().map(|&p| p as usize).sum()
    }
}

/// The ordered monomial basis of the `(i, (n))` slice, with an index lookup.
#[derive(Clone, Debug)]
pub struct SliceBasis {
    pub genus: usize,
    pub degree: usize,
    pub weight: usize,
    monomials: Vec<RMonomial>,
    index: BTreeMap<(usize, Vec<u16>, usize), usize>,
}

impl SliceBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[RMonomial] {
        &self.monomials
    }

    /// Row of the monomial `w^a y^γ (class j)`; the sector and exterior
    /// degree are implied by `(a, γ)` within a fixed slice.
    fn index_of(&self, w_exp: usize, ypows: &[u16], class_index: usize) -> Option<usize> {
        self.index
            .get(&(w_exp, ypows.to_vec(), class_index))
            .copied()
    }
}

/// A representation matrix on a slice basis: exact, column `j` is the image
/// of the `j`-th basis monomial.
#[derive(Clone, Debug)]
pub struct RepMatrix {
    pub basis: SliceBasis,
    pub matrix: RatMatrix,
}

/// The degree dictionary between the weight-`n` slices for different sphere
/// parameters: degree `i` at `m = 1` sits in degree `i + (2m-2) n` at `m`.
pub fn regrade(m: usize, i: usize, n: usize) -> usize {
    assert!(m >= 1);
    i + (2 * m - 2) * n
}

/// Per-genus context: owns the Lefschetz kernel/cokernel data and hands out
/// slice bases, dimension tables and representation matrices. Immutable
/// after construction; all methods take `&self`.
pub struct SliceContext {
    genus: usize,
    lefschetz: LefschetzCache,
}

impl SliceContext {
    pub fn new(genus: usize) -> SliceContext {
        SliceContext { genus, lefschetz: LefschetzCache::new(genus) }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn lefschetz(&self) -> &LefschetzCache {
        &self.lefschetz
    }

    fn sector_dim(&self, has_v: bool, k: usize) -> usize {
        if has_v {
            self.lefschetz.kernel_dim(k)
        } else {
            self.lefschetz.coker_dim(k)
        }
    }

    /// Enumerate the `(i, (n))` slice basis: all monomials `w^a y^β (class)`
    /// with degree `i` and weight `n`, ordered by `(w-exponent, y-multidegree
    /// lex, class index)`. An empty basis is a valid outcome.
    pub fn slice_basis(&self, i: usize, n: usize) -> SliceBasis {
        let rank = 2 * self.genus;
        let mut monomials = Vec::new();
        // Weight minus degree fixes a + v, with v ∈ {0, 1}.
        if n >= i {
            for v in 0..=1usize.min(n - i) {
                let a = n - i - v;
                let has_v = v == 1;
                let mut b = 0;
                while 2 * b + v <= i {
                    let k = i - 2 * b - v;
                    let dim = self.sector_dim(has_v, k);
                    if dim > 0 {
                        for ypows in crate::johnson::compositions(b, rank) {
                            for index in 0..dim {
                                monomials.push(RMonomial {
                                    w_exp: a,
                                    ypows: ypows.clone(),
                                    class: if has_v {
                                        ClassPart::K { k, index }
                                    } else {
                                        ClassPart::V { k, index }
                                    },
                                });
                            }
                        }
                    }
                    b += 1;
                }
            }
        }
        monomials.sort_by(|x, y| {
            (x.w_exp, &x.ypows, x.class.index()).cmp(&(y.w_exp, &y.ypows, y.class.index()))
        });
        let index = monomials
            .iter()
            .enumerate()
            .map(|(row, m)| ((m.w_exp, m.ypows.clone(), m.class.index()), row))
            .collect();
        debug_assert!(monomials.iter().all(|m| m.degree() == i && m.weight() == n));
        SliceBasis { genus: self.genus, degree: i, weight: n, monomials, index }
    }

    /// `table[i][n] = dim H^i(C_n)`.
    pub fn dims_table(&self, i_max: usize, n_max: usize) -> Vec<Vec<usize>> {
        (0..=i_max)
            .map(|i| (0..=n_max).map(|n| self.slice_basis(i, n).len()).collect())
            .collect()
    }

    /// The matrix of a validated mapping class on one slice: `w` and `v` are
    /// fixed, the class part transforms by the symplectic action pushed
    /// through the `V`/`K` coordinates, and each `y_i` picks up its
    /// `ξ`-correction, with `Λ`-parts absorbed into the class by the module
    /// structure. Expansion is asserted to stay inside the slice.
    pub fn act(&self, class: &MappingClass, basis: &SliceBasis) -> Result<RepMatrix, CohomologyError> {
        if class.genus() != self.genus {
            return Err(CohomologyError::GenusMismatch {
                expected: self.genus,
                found: class.genus(),
            });
        }
        let rank = 2 * self.genus;
        let endo = johnson_endo(class.hom());
        let msym = class.symplectic_matrix();
        let dim = basis.len();
        let mut matrix = RatMatrix::zero(dim, dim);

        for (col, mono) in basis.monomials().iter().enumerate() {
            // Transformed homology class (still a plain exterior element).
            let k = mono.class.k();
            let slice_k = self.lefschetz.slice(k).expect("class degree within range");
            let z0 = match &mono.class {
                ClassPart::V { index, .. } => {
                    ExtElem::monomial(rank, slice_k.coker_monomials[*index]).apply_linear(msym)
                }
                ClassPart::K { index, .. } => slice_k.kernel[*index].apply_linear(msym),
            };

            // Johnson expansion of the y-part.
            let y_mono = AlgElem::monomial(
                rank,
                AlgMono { xmask: 0, ypows: mono.ypows.clone() },
            );
            let expanded = endo.apply(&y_mono);

            for (term, coeff) in expanded.terms() {
                let lam = ExtElem::monomial(rank, term.xmask);
                debug_assert!(term.xmask.count_ones() % 2 == 0, "ξ-corrections are even");
                let product = lam.wedge(&z0);
                if product.is_zero() {
                    continue;
                }
                let k_target = k + term.xmask.count_ones() as usize;
                let target = self
                    .lefschetz
                    .slice(k_target)
                    .expect("bigrading is preserved");
                let coords: Vec<Rat> = match &mono.class {
                    ClassPart::V { .. } => target.reduce_to_cokernel(&product),
                    ClassPart::K { .. } => target
                        .kernel_coordinates(&product)
                        .expect("Λ-multiple of a kernel class stays in the kernel"),
                };
                for (j, c) in coords.into_iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let row = basis
                        .index_of(mono.w_exp, &term.ypows, j)
                        .expect("action preserves the bidegree slice");
                    matrix[(row, col)] += coeff * &c;
                }
            }
        }
        Ok(RepMatrix { basis: basis.clone(), matrix })
    }

    /// Trace of [`SliceContext::act`] on the `(i, (n))` slice.
    pub fn character(
        &self,
        class: &MappingClass,
        i: usize,
        n: usize,
    ) -> Result<Rat, CohomologyError> {
        let basis = self.slice_basis(i, n);
        let rep = self.act(class, &basis)?;
        let mut trace = Rat::zero();
        for d in 0..rep.matrix.rows() {
            trace += &rep.matrix[(d, d)];
        }
        Ok(trace)
    }

    /// Brute-force referee: the dimension of the `(i, (n))` slice computed
    /// from exact integer ranks of the full differential `d(v) = 2ω` on
    /// `Q[y, w] ⊗ Λ[x, v]`, with no use of the `V`/`K` structure. Elimination
    /// is fraction-free (Bareiss), a different algorithm from the rational
    /// echelon used elsewhere.
    pub fn brute_force_slice_dim(&self, i: usize, n: usize) -> usize {
        let dim = full_slice_monomials(self.genus, i, n).len();
        let rank_out = full_differential_rank(self.genus, i, n);
        let rank_in = if i == 0 {
            0
        } else {
            full_differential_rank(self.genus, i - 1, n)
        };
        dim - rank_out - rank_in
    }

    /// Alternating sum `Σ_i (-1)^i dim H^i(C_n)` over `0..=i_max`.
    pub fn euler_characteristic(&self, n: usize, i_max: usize) -> i64 {
        (0..=i_max)
            .map(|i| {
                let d = self.slice_basis(i, n).len() as i64;
                if i % 2 == 0 {
                    d
                } else {
                    -d
                }
            })
            .sum()
    }

    /// Verify the syntactic J(2)-style certificate (`φ(α_i) = α_i h_i` with
    /// every `h_i` a certified product of double commutators), then test
    /// whether the class acts as the identity on every slice with `i ≤ i_max`
    /// and `n ≤ n_max`.
    pub fn j2_trivial_check(
        &self,
        class: &MappingClass,
        i_max: usize,
        n_max: usize,
    ) -> Result<bool, CohomologyError> {
        if class.genus() != self.genus {
            return Err(CohomologyError::GenusMismatch {
                expected: self.genus,
                found: class.genus(),
            });
        }
        let n_gens = 2 * self.genus;
        for i in 1..=n_gens {
            let gen = crate::freegroup::Word::generator(n_gens, i).expect("index in range");
            let residue = gen.inverse().mul(class.hom().image(i));
            if !lcs_member_witness(&residue, 2) {
                return Err(CohomologyError::CertificateMissing { generator: i });
            }
        }
        for i in 0..=i_max {
            for n in 0..=n_max {
                let basis = self.slice_basis(i, n);
                if basis.is_empty() {
                    continue;
                }
                let rep = self.act(class, &basis)?;
                if !rep.matrix.is_identity() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// A monomial `w^a y^β x^S v^e` of the full (un-differentiated) algebra.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct FullMono {
    w_exp: usize,
    ypows: Vec<u16>,
    xmask: u32,
    v: bool,
}

/// All monomials of bidegree `(i, (n))` in `Q[y, w] ⊗ Λ[x, v]`,
/// deterministic order.
fn full_slice_monomials(genus: usize, i: usize, n: usize) -> Vec<FullMono> {
    let rank = 2 * genus;
    let mut out = Vec::new();
    if n < i {
        return out;
    }
    for v in 0..=1usize.min(n - i).min(i) {
        let a = n - i - v;
        // Remaining degree 2|β| + |S| = i - v, weight consistent by
        // construction.
        let rest = i - v;
        for mixed in weight_slice_monomials(rank, rest) {
            out.push(FullMono {
                w_exp: a,
                ypows: mixed.ypows,
                xmask: mixed.xmask,
                v: v == 1,
            });
        }
    }
    out.sort();
    out
}

/// Integer rank of `d: (i, (n)) → (i + 1, (n))`, where `d(v) = 2ω` and all
/// other generators are cycles.
fn full_differential_rank(genus: usize, i: usize, n: usize) -> usize {
    let rank = 2 * genus;
    let domain = full_slice_monomials(genus, i, n);
    let target = full_slice_monomials(genus, i + 1, n);
    if domain.is_empty() || target.is_empty() {
        return 0;
    }
    let index: BTreeMap<&FullMono, usize> =
        target.iter().enumerate().map(|(r, m)| (m, r)).collect();
    let omega = crate::extalg::omega(genus);
    let mut rows = vec![vec![Int::zero(); domain.len()]; target.len()];
    for (col, mono) in domain.iter().enumerate() {
        if !mono.v {
            continue;
        }
        // d(x^S v) = (-1)^{|S|} x^S ∧ 2ω (the y/w part is carried along).
        let xs = ExtElem::monomial(rank, mono.xmask);
        let image = xs.wedge(&omega);
        let sign_neg = mono.xmask.count_ones() % 2 == 1;
        for (mask, c) in image.terms() {
            let tm = FullMono {
                w_exp: mono.w_exp,
                ypows: mono.ypows.clone(),
                xmask: mask,
                v: false,
            };
            let row = index[&tm];
            debug_assert!(c.denom().is_one());
            let mut entry = c.numer() * Int::from(2);
            if sign_neg {
                entry = -entry;
            }
            rows[row][col] = entry;
        }
    }
    bareiss_rank(&rows)
}
