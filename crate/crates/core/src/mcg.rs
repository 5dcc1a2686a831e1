//! Mapping classes of the genus-`g` one-boundary surface, realized as
//! automorphisms of the free group on `2g` generators fixing the boundary
//! word `ζ_g = [α_1, α_2] ... [α_{2g-1}, α_{2g}]` exactly.
//!
//! Explicit twist data lives in catalog files (see [`parse_catalog`] for the
//! format); every entry is validated at load time, so a transcription error
//! in the data fails loudly instead of poisoning downstream computations.
//! The Johnson homomorphism `τ` is computed here by a route independent of
//! the content function: the degree-2 coefficients of the Magnus expansion.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::freegroup::{boundary_word, AutError, Bivector, FreeAut, FreeHom, Sign, Word};
use crate::johnson::{xi, XiMap};
use crate::matrix::RatMatrix;
use crate::{Int, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum McgError {
    RankMismatch { expected: usize, found: usize },
    /// The automorphism moves the boundary word; carries the reduced image.
    BoundaryNotFixed { image: Word },
    /// The abelianization matrix does not preserve the symplectic form.
    NotSymplectic,
    /// No inverse is attached to this mapping class.
    InverseUnavailable,
    Invertibility(AutError),
    GenusTooSmall { genus: usize, required: usize },
    /// A bounded search exhausted its frontier without a hit; says nothing
    /// about larger bounds.
    NotFoundWithinBound { bound: usize },
    /// `τ` is only defined where the image residues `φ(α_i) α_i^{-1}` are
    /// homology-trivial; carries the first offending generator.
    TauUndefined { generator: usize },
}

impl fmt::Display for McgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            McgError::RankMismatch { expected, found } => {
                write!(f, "rank mismatch: expected {expected}, found {found}")
            }
            McgError::BoundaryNotFixed { image } => {
                write!(f, "boundary word not fixed: maps to `{image}`")
            }
            McgError::NotSymplectic => write!(f, "abelianization is not symplectic"),
            McgError::InverseUnavailable => write!(f, "no inverse attached"),
            McgError::Invertibility(e) => write!(f, "{e}"),
            McgError::GenusTooSmall { genus, required } => {
                write!(f, "genus {genus} too small, need at least {required}")
            }
            McgError::NotFoundWithinBound { bound } => {
                write!(f, "no witness found within word length {bound}")
            }
            McgError::TauUndefined { generator } => {
                write!(f, "τ undefined for this presentation: residue of α_{generator} is not homology-trivial")
            }
        }
    }
}

impl core::error::Error for McgError {}

/// The standard symplectic form `Ω` on `Q^{2g}`: `⟨e_{2i-1}, e_{2i}⟩ = 1`,
/// blocks `[[0, 1], [-1, 0]]` down the diagonal.
pub fn symplectic_form_matrix(genus: usize) -> RatMatrix {
    let mut m = RatMatrix::zero(2 * genus, 2 * genus);
    for i in 0..genus {
        m[(2 * i, 2 * i + 1)] = Rat::one();
        m[(2 * i + 1, 2 * i)] = -Rat::one();
    }
    m
}

/// The transvection `x ↦ x + ε ⟨x, γ⟩ γ` along an integer class `γ`.
pub fn transvection_matrix(genus: usize, gamma: &[i64], eps: i64) -> RatMatrix {
    let n = 2 * genus;
    assert_eq!(gamma.len(), n);
    let omega = symplectic_form_matrix(genus);
    let gamma_rat: Vec<Rat> = gamma.iter().map(|&x| crate::rat(x)).collect();
    let mut m = RatMatrix::identity(n);
    for j in 0..n {
        // ⟨e_j, γ⟩ = Σ_k Ω_{jk} γ_k.
        let mut pair = Rat::zero();
        for k in 0..n {
            pair += &omega[(j, k)] * &gamma_rat[k];
        }
        for i in 0..n {
            m[(i, j)] += crate::rat(eps) * &pair * &gamma_rat[i];
        }
    }
    m
}

/// A validated mapping class: an automorphism of `F_{2g}` fixing `ζ_g`
/// exactly, with its (symplectic) abelianization matrix and, when known, an
/// explicit inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingClass {
    genus: usize,
    hom: FreeHom,
    inverse: Option<FreeHom>,
    symplectic: RatMatrix,
}

/// Check both mapping-class invariants: `φ(ζ_g) = ζ_g` as reduced words and
/// `MᵀΩM = Ω` for the abelianization matrix `M`. The symplectic matrix is
/// returned as part of the class.
pub fn validate(hom: FreeHom, genus: usize) -> Result<MappingClass, McgError> {
    let n = 2 * genus;
    if hom.source_rank() != n || hom.target_rank() != n {
        return Err(McgError::RankMismatch { expected: n, found: hom.source_rank() });
    }
    let zeta = boundary_word(genus);
    let image = hom.apply(&zeta).expect("ranks agree");
    if image != zeta {
        return Err(McgError::BoundaryNotFixed { image });
    }
    let m = hom.abelianization_matrix();
    let omega = symplectic_form_matrix(genus);
    if m.transpose().mul(&omega).mul(&m) != omega {
        return Err(McgError::NotSymplectic);
    }
    Ok(MappingClass { genus, hom, inverse: None, symplectic: m })
}

impl MappingClass {
    pub fn identity(genus: usize) -> MappingClass {
        let hom = FreeHom::identity(2 * genus);
        MappingClass {
            genus,
            hom: hom.clone(),
            inverse: Some(hom),
            symplectic: RatMatrix::identity(2 * genus),
        }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn hom(&self) -> &FreeHom {
        &self.hom
    }

    pub fn symplectic_matrix(&self) -> &RatMatrix {
        &self.symplectic
    }

    pub fn inverse_hom(&self) -> Option<&FreeHom> {
        self.inverse.as_ref()
    }

    /// Attach a caller-supplied inverse, verified as two-sided.
    pub fn with_inverse(mut self, inverse: FreeHom) -> Result<MappingClass, McgError> {
        let aut = FreeAut::new(self.hom.clone(), inverse).map_err(McgError::Invertibility)?;
        self.inverse = Some(aut.inverse_hom().clone());
        Ok(self)
    }

    /// Attach an inverse found by the bounded Nielsen search; failure is
    /// reported as unverified invertibility, never guessed.
    pub fn ensure_inverse(self) -> Result<MappingClass, McgError> {
        if self.inverse.is_some() {
            return Ok(self);
        }
        let aut = FreeAut::certify(self.hom.clone()).map_err(McgError::Invertibility)?;
        let inv = aut.inverse_hom().clone();
        self.with_inverse(inv)
    }

    /// The certified automorphism; requires an attached inverse.
    pub fn aut(&self) -> Result<FreeAut, McgError> {
        let inv = self.inverse.clone().ok_or(McgError::InverseUnavailable)?;
        FreeAut::new(self.hom.clone(), inv).map_err(McgError::Invertibility)
    }

    /// `self ∘ other` (apply `other` first). Validation is preserved under
    /// composition, so the product is assembled directly.
    pub fn compose(&self, other: &MappingClass) -> MappingClass {
        assert_eq!(self.genus, other.genus, "genus mismatch");
        let hom = self.hom.compose(&other.hom).expect("ranks agree");
        let inverse = match (&self.inverse, &other.inverse) {
            (Some(a), Some(b)) => Some(b.compose(a).expect("ranks agree")),
            _ => None,
        };
        let symplectic = self.symplectic.mul(&other.symplectic);
        debug_assert_eq!(hom.abelianization_matrix(), symplectic);
        MappingClass { genus: self.genus, hom, inverse, symplectic }
    }

    pub fn inverse(&self) -> Result<MappingClass, McgError> {
        let inv = self.inverse.clone().ok_or(McgError::InverseUnavailable)?;
        Ok(MappingClass {
            genus: self.genus,
            hom: inv.clone(),
            inverse: Some(self.hom.clone()),
            symplectic: inv.abelianization_matrix(),
        })
    }

    pub fn xi_map(&self) -> XiMap {
        xi(&self.hom)
    }

    /// Acts trivially on homology.
    pub fn is_torelli(&self) -> bool {
        self.symplectic.is_identity()
    }

    pub fn is_identity(&self) -> bool {
        self.hom.is_identity()
    }
}

/// The inner automorphism `α_i ↦ w α_i w^{-1}`. Validation succeeds exactly
/// when `w` commutes with `ζ_g`, i.e. `w ∈ ⟨ζ_g⟩`; that case models the
/// boundary Dehn twist.
pub fn conjugation_by(w: &Word, genus: usize) -> FreeHom {
    let n = 2 * genus;
    assert_eq!(w.rank(), n, "conjugator must live in F_2g");
    let images = (1..=n)
        .map(|i| {
            w.mul(&Word::generator(n, i).expect("index in range"))
                .mul(&w.inverse())
        })
        .collect();
    FreeHom::new(n, n, images).expect("images have rank 2g")
}

/// The boundary twist `conjugation_by(ζ_g)`, validated, with its inverse.
pub fn boundary_twist(genus: usize) -> MappingClass {
    let zeta = boundary_word(genus);
    validate(conjugation_by(&zeta, genus), genus)
        .expect("conjugation by ζ fixes ζ")
        .with_inverse(conjugation_by(&zeta.inverse(), genus))
        .expect("conjugation by ζ^{-1} inverts it")
}

/// The twist about the separating curve `ζ_k` enclosing the first `k`
/// handles: conjugates `α_1..α_{2k}` by `ζ_k`, fixes the rest. A Torelli
/// element; for `handles < genus` it is not inner.
pub fn separating_twist(genus: usize, handles: usize) -> MappingClass {
    assert!(handles <= genus);
    let n = 2 * genus;
    let zeta_k = {
        let small = boundary_word(handles);
        Word::reduce(n, small.letters().to_vec()).expect("indices fit in the larger rank")
    };
    let images = (1..=n)
        .map(|i| {
            let gen = Word::generator(n, i).expect("index in range");
            if i <= 2 * handles {
                zeta_k.mul(&gen).mul(&zeta_k.inverse())
            } else {
                gen
            }
        })
        .collect();
    let hom = FreeHom::new(n, n, images).expect("rank 2g images");
    let inv_images = (1..=n)
        .map(|i| {
            let gen = Word::generator(n, i).expect("index in range");
            if i <= 2 * handles {
                zeta_k.inverse().mul(&gen).mul(&zeta_k)
            } else {
                gen
            }
        })
        .collect();
    let inv = FreeHom::new(n, n, inv_images).expect("rank 2g images");
    validate(hom, genus)
        .expect("partial boundary conjugation fixes ζ")
        .with_inverse(inv)
        .expect("conjugation by ζ_k^{-1} inverts it")
}

/// The class of a homology-trivial word in `F^(1)/F^(2) ≅ Λ² Z^n`, read off
/// the degree-2 coefficients of the Magnus expansion.
///
/// This is the map `j` sending a commutator `[a, b]` to `[a] ∧ [b]`,
/// computed without reference to the content function: the expansion
/// `α_i ↦ 1 + X_i`, `α_i^{-1} ↦ 1 - X_i + X_i²` is multiplied out once over
/// the word and truncated past degree 2. For homology-trivial words the
/// quadratic coefficient matrix is antisymmetric and is the class.
pub fn commutator_pairing_class(w: &Word) -> Result<Bivector, McgError> {
    let n = w.rank();
    let mut linear = vec![Int::zero(); n];
    let mut quad = vec![vec![Int::zero(); n]; n];
    for l in w.letters() {
        let k = l.index - 1;
        match l.sign {
            Sign::Plus => {
                // (1 + λX + QXX)(1 + X_k): Q += λ ⊗ e_k, λ += e_k.
                for i in 0..n {
                    if !linear[i].is_zero() {
                        quad[i][k] += &linear[i];
                    }
                }
                linear[k] += 1;
            }
            Sign::Minus => {
                // (1 + λX + QXX)(1 - X_k + X_k²).
                for i in 0..n {
                    if !linear[i].is_zero() {
                        quad[i][k] -= &linear[i];
                    }
                }
                quad[k][k] += 1;
                linear[k] -= 1;
            }
        }
    }
    if let Some(i) = linear.iter().position(|x| !x.is_zero()) {
        return Err(McgError::TauUndefined { generator: i + 1 });
    }
    let mut class = Bivector::zero(n);
    for i in 0..n {
        debug_assert!(quad[i][i].is_zero(), "diagonal survives only with nonzero homology");
        for j in (i + 1)..n {
            debug_assert!(quad[i][j] == -quad[j][i].clone(), "quadratic part must be antisymmetric");
            if !quad[i][j].is_zero() {
                class.add_pair(i + 1, j + 1, Rat::from_integer(quad[i][j].clone()));
            }
        }
    }
    Ok(class)
}

/// The Johnson homomorphism `τ(φ)(e_i) = j(φ(α_i) α_i^{-1})`, defined when
/// every residue `φ(α_i) α_i^{-1}` is homology-trivial (in particular on all
/// Torelli classes). Independent of `ξ`; the identity `ξ = 2τ` on Torelli
/// elements is a theorem, asserted in tests rather than assumed.
pub fn tau(class: &MappingClass) -> Result<Vec<Bivector>, McgError> {
    let n = 2 * class.genus();
    (1..=n)
        .map(|i| {
            let gen = Word::generator(n, i).expect("index in range");
            let residue = class.hom().image(i).mul(&gen.inverse());
            commutator_pairing_class(&residue).map_err(|_| McgError::TauUndefined { generator: i })
        })
        .collect()
}

/// One validated catalog entry with its provenance note (the comment lines
/// preceding it in the file).
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub provenance: String,
    pub class: MappingClass,
}

/// A named collection of validated mapping classes of one genus.
#[derive(Clone, Debug)]
pub struct TwistCatalog {
    genus: usize,
    entries: Vec<CatalogEntry>,
}

impl TwistCatalog {
    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogError {
    Parse { line: usize, message: String },
    Validation { entry: String, source: McgError },
}

impl fmt::Display for CatalogError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogError::Parse { line, message } => write!(f, "line {line}: {message}"),
            CatalogError::Validation { entry, source } => {
                write!(f, "entry `{entry}`: {source}")
            }
        }
    }
}

impl core::error::Error for CatalogError {}

/// Parse and validate a catalog from its text format:
///
/// ```text
/// genus: <int>
/// NAME:
/// a1 -> <word>
/// ...
/// a<2g> -> <word>
/// ```
///
/// Word tokens are `a<j>` and `a<j>^-1`, whitespace-separated; `1` is the
/// empty word; `#` starts a comment. Comment lines directly above an entry
/// become its provenance note. Every entry must validate (boundary word
/// fixed, symplectic abelianization) and gets an inverse attached by the
/// bounded search; any failure names the entry.
pub fn parse_catalog(text: &str) -> Result<TwistCatalog, CatalogError> {
    let parse_err = |line: usize, message: String| CatalogError::Parse { line, message };
    struct Lines<'a> {
        inner: core::iter::Enumerate<core::str::Lines<'a>>,
    }
    struct Line<'a> {
        number: usize,
        content: &'a str,
    }
    impl<'a> Lines<'a> {
        fn next_meaningful(&mut self, pending: &mut Vec<String>) -> Option<Line<'a>> {
            for (idx, raw) in self.inner.by_ref() {
                let (content, comment) = match raw.find('#') {
                    Some(pos) => (raw[..pos].trim(), Some(raw[pos + 1..].trim())),
                    None => (raw.trim(), None),
                };
                if content.is_empty() {
                    match comment {
                        Some(c) if !c.is_empty() => pending.push(c.to_owned()),
                        Some(_) => {}
                        None => pending.clear(), // blank line resets provenance
                    }
                    continue;
                }
                return Some(Line { number: idx + 1, content });
            }
            None
        }
    }

    let mut lines = Lines { inner: text.lines().enumerate() };
    let mut pending_comments: Vec<String> = Vec::new();

    let header = lines
        .next_meaningful(&mut pending_comments)
        .ok_or_else(|| parse_err(0, "missing `genus:` header".to_owned()))?;
    let genus: usize = header
        .content
        .strip_prefix("genus:")
        .map(str::trim)
        .ok_or_else(|| parse_err(header.number, "expected `genus: <int>`".to_owned()))?
        .parse()
        .map_err(|_| parse_err(header.number, "expected `genus: <int>`".to_owned()))?;
    let n = 2 * genus;
    pending_comments.clear();

    let mut entries: Vec<CatalogEntry> = Vec::new();
    while let Some(line) = lines.next_meaningful(&mut pending_comments) {
        let name = line
            .content
            .strip_suffix(':')
            .filter(|s| !s.is_empty() && !s.contains(' '))
            .ok_or_else(|| {
                parse_err(line.number, format!("expected `NAME:`, found `{}`", line.content))
            })?
            .to_owned();
        if entries.iter().any(|e| e.name == name) {
            return Err(parse_err(line.number, format!("duplicate entry `{name}`")));
        }
        let provenance = pending_comments.join(" ");
        pending_comments.clear();

        let mut images = Vec::with_capacity(n);
        for i in 1..=n {
            let Some(img_line) = lines.next_meaningful(&mut pending_comments) else {
                return Err(parse_err(
                    0,
                    format!("entry `{name}`: missing image line for a{i}"),
                ));
            };
            let (lhs, rhs) = img_line.content.split_once("->").ok_or_else(|| {
                parse_err(img_line.number, format!("expected `a{i} -> <word>`"))
            })?;
            if lhs.trim() != format!("a{i}") {
                return Err(parse_err(
                    img_line.number,
                    format!("expected image of a{i}, found `{}`", lhs.trim()),
                ));
            }
            let word = Word::parse(n, rhs.trim()).map_err(|e| {
                parse_err(img_line.number, format!("{e}"))
            })?;
            images.push(word);
        }
        pending_comments.clear();

        let hom = FreeHom::new(n, n, images).expect("image count and ranks match");
        let class = validate(hom, genus)
            .and_then(MappingClass::ensure_inverse)
            .map_err(|source| CatalogError::Validation { entry: name.clone(), source })?;
        entries.push(CatalogEntry { name, provenance, class });
    }

    Ok(TwistCatalog { genus, entries })
}

/// A product of catalog generators: entry indices with signs, left to right
/// in composition order (the rightmost factor acts first).
pub type GeneratorWord = Vec<(usize, Sign)>;

/// Render a generator word with catalog names, `*`-separated.
pub fn generator_word_name(catalog: &TwistCatalog, word: &GeneratorWord) -> String {
    if word.is_empty() {
        return "1".to_owned();
    }
    let mut out = String::new();
    for (k, &(idx, sign)) in word.iter().enumerate() {
        if k > 0 {
            out.push('*');
        }
        out.push_str(&catalog.entries()[idx].name);
        if sign == Sign::Minus {
            out.push_str("^-1");
        }
    }
    out
}

/// One hit of [`torelli_search`].
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub word: GeneratorWord,
    pub class: MappingClass,
}

/// Breadth-first enumeration of products of catalog generators and inverses
/// up to length `max_len`, returning exactly the elements with identity
/// abelianization matrix. Deterministic: generators in catalog order (each
/// followed by its inverse), first-seen automorphism kept, results in BFS
/// order, i.e. sorted by word length then lexicographically.
pub fn torelli_search(catalog: &TwistCatalog, max_len: usize) -> Vec<SearchResult> {
    let generators: Vec<(usize, Sign, MappingClass)> = catalog
        .entries()
        .iter()
        .enumerate()
        .flat_map(|(idx, e)| {
            let inv = e
                .class
                .inverse()
                .expect("catalog entries carry inverses");
            [
                (idx, Sign::Plus, e.class.clone()),
                (idx, Sign::Minus, inv),
            ]
        })
        .collect();

    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let identity = MappingClass::identity(catalog.genus());
    seen.insert(state_key(&identity));
    let mut frontier: Vec<(GeneratorWord, MappingClass)> = vec![(Vec::new(), identity.clone())];
    let mut results = vec![SearchResult { word: Vec::new(), class: identity }];

    for _ in 0..max_len {
        let mut next = Vec::new();
        for (word, class) in &frontier {
            for (idx, sign, gen) in &generators {
                // Extending the word on the right means the new generator
                // acts first: class ∘ gen.
                let product = class.compose(gen);
                if !seen.insert(state_key(&product)) {
                    continue;
                }
                let mut new_word = word.clone();
                new_word.push((*idx, *sign));
                if product.is_torelli() {
                    results.push(SearchResult { word: new_word.clone(), class: product.clone() });
                }
                next.push((new_word, product));
            }
        }
        frontier = next;
    }
    results
}

fn state_key(class: &MappingClass) -> Vec<i64> {
    let mut key = Vec::new();
    for w in class.hom().images() {
        for l in w.letters() {
            key.push(l.sign.as_int() * l.index as i64);
        }
        key.push(0);
    }
    key
}

/// A Torelli element whose `ξ` escapes the line `Q·ω`, pinning down the
/// non-symplecticity of the action.
#[derive(Clone, Debug)]
pub struct NonsymplecticWitness {
    pub word: GeneratorWord,
    pub class: MappingClass,
    /// 1-based basis index `i` with `ξ(φ)(e_i) ∉ Q·ω`.
    pub basis_index: usize,
    pub xi_value: Bivector,
}

/// Scan the Torelli elements found up to length `max_len` for one whose
/// `ξ`-column lies outside `Q·ω` (an exact rank-2 check on the pair). Needs
/// genus at least 2: at genus 1 every bivector is a multiple of `ω`.
pub fn nonsymplectic_witness(
    catalog: &TwistCatalog,
    max_len: usize,
) -> Result<NonsymplecticWitness, McgError> {
    let genus = catalog.genus();
    if genus < 2 {
        return Err(McgError::GenusTooSmall { genus, required: 2 });
    }
    let omega = Bivector::symplectic_form(genus);
    for hit in torelli_search(catalog, max_len) {
        let ximap = hit.class.xi_map();
        for i in 1..=2 * genus {
            let column = ximap.column(i);
            if !in_omega_line(column, &omega) {
                return Ok(NonsymplecticWitness {
                    word: hit.word,
                    class: hit.class,
                    basis_index: i,
                    xi_value: column.clone(),
                });
            }
        }
    }
    Err(McgError::NotFoundWithinBound { bound: max_len })
}

/// Exact rank test: is `b` a rational multiple of `ω`?
fn in_omega_line(b: &Bivector, omega: &Bivector) -> bool {
    use crate::extalg::{DegreeSlice, ExtElem};
    let n = b.rank();
    let slice = DegreeSlice::new(n, 2);
    let rows = vec![
        ExtElem::from_bivector(b).coeff_vec(&slice),
        ExtElem::from_bivector(omega).coeff_vec(&slice),
    ];
    RatMatrix::from_rows(rows).rank() < 2
}
