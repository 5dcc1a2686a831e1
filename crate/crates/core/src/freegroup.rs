//! Words in finitely generated free groups, free reduction, homomorphisms,
//! abelianization and the content function.
//!
//! A [`Word`] is always stored reduced, with 1-based generator indices and a
//! sign bit per letter. The content of a word `w = w_1 ... w_k` is the sum
//! over letter pairs `i < j` of `[w_i] ∧ [w_j]` in the second exterior power
//! of the abelianization; it is well defined on reduced words and satisfies
//! `c(ab) = c(a) + c(b) + [a] ∧ [b]`.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::{Int, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_int(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// One letter of a word: a generator index (1-based) and a sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub index: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn positive(index: usize) -> Letter {
        Letter { index, sign: Sign::Plus }
    }

    pub fn negative(index: usize) -> Letter {
        Letter { index, sign: Sign::Minus }
    }

    pub fn inverse(self) -> Letter {
        Letter { index: self.index, sign: self.sign.flip() }
    }

    fn cancels(self, other: Letter) -> bool {
        self.index == other.index && self.sign != other.sign
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreeGroupError {
    GeneratorOutOfRange { index: usize, rank: usize },
    RankMismatch { expected: usize, found: usize },
    Parse { token: String },
}

impl fmt::Display for FreeGroupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreeGroupError::GeneratorOutOfRange { index, rank } => {
                write!(f, "generator index {index} out of range for rank {rank}")
            }
            FreeGroupError::RankMismatch { expected, found } => {
                write!(f, "rank mismatch: expected {expected}, found {found}")
            }
            FreeGroupError::Parse { token } => write!(f, "cannot parse word token `{token}`"),
        }
    }
}

impl core::error::Error for FreeGroupError {}

/// Signed exponent vector of a word, one entry per generator.
pub type IntVector = Vec<Int>;

/// A reduced word in the free group of the given rank.
///
/// The empty sequence is the identity. No adjacent pair of letters is
/// mutually inverse; every constructor maintains this.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(rank: usize) -> Word {
        Word { rank, letters: Vec::new() }
    }

    pub fn generator(rank: usize, index: usize) -> Result<Word, FreeGroupError> {
        if index == 0 || index > rank {
            return Err(FreeGroupError::GeneratorOutOfRange { index, rank });
        }
        Ok(Word { rank, letters: vec![Letter::positive(index)] })
    }

    /// Free reduction of an arbitrary letter sequence. Idempotent.
    pub fn reduce<I>(rank: usize, letters: I) -> Result<Word, FreeGroupError>
    where
        I: IntoIterator<Item = Letter>,
    {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if l.index == 0 || l.index > rank {
                return Err(FreeGroupError::GeneratorOutOfRange { index: l.index, rank });
            }
            push_reduced(&mut out, l);
        }
        Ok(Word { rank, letters: out })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Concatenation followed by reduction. Panics on rank mismatch; words
    /// from different ambient free groups cannot be multiplied.
    pub fn mul(&self, other: &Word) -> Word {
        assert_eq!(self.rank, other.rank, "cannot multiply words of different rank");
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Word { rank: self.rank, letters }
    }

    pub fn pow(&self, exp: i64) -> Word {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        for _ in 0..exp.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Signed occurrence count of each generator.
    pub fn abelianize(&self) -> IntVector {
        let mut v = vec![Int::zero(); self.rank];
        for l in &self.letters {
            v[l.index - 1] += l.sign.as_int();
        }
        v
    }

    /// The content `c(w) = Σ_{i<j} [w_i] ∧ [w_j]`, computed in one pass via
    /// prefix abelianizations: `c(w) = Σ_j (Σ_{i<j} [w_i]) ∧ [w_j]`.
    ///
    /// Independent of the spelling of `w` among unreduced representatives,
    /// but dependent on the generator basis.
    pub fn content(&self) -> Bivector {
        let mut prefix = vec![Int::zero(); self.rank];
        let mut c = Bivector::zero(self.rank);
        for l in &self.letters {
            let j = l.index;
            let s = l.sign.as_int();
            for i in 1..=self.rank {
                if i == j || prefix[i - 1].is_zero() {
                    continue;
                }
                let coeff = Rat::from_integer(&prefix[i - 1] * Int::from(s));
                c.add_pair(i, j, coeff);
            }
            prefix[j - 1] += s;
        }
        c
    }

    /// Parse the external word syntax: whitespace-separated tokens `a<i>` or
    /// `a<i>^-1`, with `1` denoting the empty word.
    pub fn parse(rank: usize, input: &str) -> Result<Word, FreeGroupError> {
        let mut letters = Vec::new();
        let trimmed = input.trim();
        if trimmed == "1" {
            return Ok(Word::identity(rank));
        }
        for token in trimmed.split_whitespace() {
            letters.push(parse_letter(token)?);
        }
        Word::reduce(rank, letters)
    }
}

fn parse_letter(token: &str) -> Result<Letter, FreeGroupError> {
    let err = || FreeGroupError::Parse { token: token.to_owned() };
    let rest = token.strip_prefix('a').ok_or_else(err)?;
    let (digits, sign) = match rest.split_once('^') {
        None => (rest, Sign::Plus),
        Some((digits, "-1")) => (digits, Sign::Minus),
        Some(_) => return Err(err()),
    };
    let index: usize = digits.parse().map_err(|_| err())?;
    if index == 0 {
        return Err(err());
    }
    Ok(Letter { index, sign })
}

fn push_reduced(stack: &mut Vec<Letter>, l: Letter) {
    match stack.last() {
        Some(&top) if top.cancels(l) => {
            stack.pop();
        }
        _ => stack.push(l),
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            match l.sign {
                Sign::Plus => write!(f, "a{}", l.index)?,
                Sign::Minus => write!(f, "a{}^-1", l.index)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `[a, b] = a b a^-1 b^-1`, reduced.
pub fn commutator(a: &Word, b: &Word) -> Word {
    a.mul(b).mul(&a.inverse()).mul(&b.inverse())
}

/// The boundary word `ζ_g = [α_1, α_2] ... [α_{2g-1}, α_{2g}]` in rank `2g`.
pub fn boundary_word(genus: usize) -> Word {
    let rank = 2 * genus;
    let mut letters = Vec::with_capacity(4 * genus);
    for i in 0..genus {
        let a = 2 * i + 1;
        let b = 2 * i + 2;
        letters.push(Letter::positive(a));
        letters.push(Letter::positive(b));
        letters.push(Letter::negative(a));
        letters.push(Letter::negative(b));
    }
    Word::reduce(rank, letters).expect("boundary word indices are in range")
}

/// An element of `Λ² Q^n`, keyed by unordered index pairs `{i < j}`.
#[derive(Clone, PartialEq, Eq)]
pub struct Bivector {
    rank: usize,
    coeffs: BTreeMap<(usize, usize), Rat>,
}

impl Bivector {
    pub fn zero(rank: usize) -> Bivector {
        Bivector { rank, coeffs: BTreeMap::new() }
    }

    /// `ω = e_1 ∧ e_2 + ... + e_{2g-1} ∧ e_{2g}` in rank `2g`.
    pub fn symplectic_form(genus: usize) -> Bivector {
        let mut b = Bivector::zero(2 * genus);
        for i in 0..genus {
            b.add_pair(2 * i + 1, 2 * i + 2, Rat::from_integer(Int::from(1)));
        }
        b
    }

    /// `u ∧ v` for integer vectors of equal length.
    pub fn wedge_vectors(u: &[Int], v: &[Int]) -> Bivector {
        assert_eq!(u.len(), v.len());
        let mut b = Bivector::zero(u.len());
        for i in 1..=u.len() {
            for j in (i + 1)..=u.len() {
                let coeff = &u[i - 1] * &v[j - 1] - &u[j - 1] * &v[i - 1];
                if !coeff.is_zero() {
                    b.add_pair(i, j, Rat::from_integer(coeff));
                }
            }
        }
        b
    }

    /// `u ∧ v` for rational vectors of equal length.
    pub fn wedge_rat_vectors(u: &[Rat], v: &[Rat]) -> Bivector {
        assert_eq!(u.len(), v.len());
        let mut b = Bivector::zero(u.len());
        for i in 1..=u.len() {
            for j in (i + 1)..=u.len() {
                let coeff = &u[i - 1] * &v[j - 1] - &u[j - 1] * &v[i - 1];
                if !coeff.is_zero() {
                    b.add_pair(i, j, coeff);
                }
            }
        }
        b
    }

    /// Push forward along a linear map: `e_i ∧ e_j ↦ (M e_i) ∧ (M e_j)`,
    /// with the columns of `m` as the generator images.
    pub fn apply_linear(&self, m: &crate::matrix::RatMatrix) -> Bivector {
        let target = m.rows();
        assert_eq!(m.cols(), self.rank, "rank mismatch");
        let col = |i: usize| -> Vec<Rat> { (0..target).map(|r| m[(r, i - 1)].clone()).collect() };
        let mut out = Bivector::zero(target);
        for (&(i, j), c) in &self.coeffs {
            out = out.add(&Bivector::wedge_rat_vectors(&col(i), &col(j)).scale(c));
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `e_i ∧ e_j`; antisymmetric in `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> Rat {
        if i < j {
            self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
        } else if j < i {
            -self.get(j, i)
        } else {
            Rat::zero()
        }
    }

    /// Add `coeff · e_i ∧ e_j`.
    pub fn add_pair(&mut self, i: usize, j: usize, coeff: Rat) {
        assert!(i != j && i >= 1 && j >= 1 && i <= self.rank && j <= self.rank);
        let (key, coeff) = if i < j { ((i, j), coeff) } else { ((j, i), -coeff) };
        let entry = self.coeffs.entry(key).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn add(&self, other: &Bivector) -> Bivector {
        assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (&(i, j), c) in &other.coeffs {
            out.add_pair(i, j, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Bivector {
        let mut out = Bivector::zero(self.rank);
        for (&(i, j), c) in &self.coeffs {
            out.add_pair(i, j, -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> Bivector {
        let mut out = Bivector::zero(self.rank);
        if s.is_zero() {
            return out;
        }
        for (&(i, j), c) in &self.coeffs {
            out.add_pair(i, j, c * s);
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.coeffs.iter().map(|(&(i, j), c)| (i, j, c))
    }
}

impl fmt::Display for Bivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (&(i, j), c)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "e{i}^e{j}")?;
            } else {
                write!(f, "{c}*e{i}^e{j}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Bivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A homomorphism between free groups, determined by generator images.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeHom {
    source_rank: usize,
    target_rank: usize,
    images: Vec<Word>,
}

impl FreeHom {
    pub fn new(
        source_rank: usize,
        target_rank: usize,
        images: Vec<Word>,
    ) -> Result<FreeHom, FreeGroupError> {
        if images.len() != source_rank {
            return Err(FreeGroupError::RankMismatch {
                expected: source_rank,
                found: images.len(),
            });
        }
        for w in &images {
            if w.rank() != target_rank {
                return Err(FreeGroupError::RankMismatch {
                    expected: target_rank,
                    found: w.rank(),
                });
            }
        }
        Ok(FreeHom { source_rank, target_rank, images })
    }

    pub fn identity(rank: usize) -> FreeHom {
        let images = (1..=rank)
            .map(|i| Word::generator(rank, i).expect("index in range"))
            .collect();
        FreeHom { source_rank: rank, target_rank: rank, images }
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn image(&self, generator: usize) -> &Word {
        &self.images[generator - 1]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.source_rank == self.target_rank
            && self.images.iter().enumerate().all(|(k, w)| {
                w.letters() == [Letter::positive(k + 1)]
            })
    }

    /// Letterwise substitution with sign handling, then reduction.
    pub fn apply(&self, w: &Word) -> Result<Word, FreeGroupError> {
        if w.rank() != self.source_rank {
            return Err(FreeGroupError::RankMismatch {
                expected: self.source_rank,
                found: w.rank(),
            });
        }
        let mut out: Vec<Letter> = Vec::new();
        for l in w.letters() {
            let img = &self.images[l.index - 1];
            match l.sign {
                Sign::Plus => {
                    for &m in img.letters() {
                        push_reduced(&mut out, m);
                    }
                }
                Sign::Minus => {
                    for &m in img.letters().iter().rev() {
                        push_reduced(&mut out, m.inverse());
                    }
                }
            }
        }
        Ok(Word { rank: self.target_rank, letters: out })
    }

    /// `self ∘ other`: `(self ∘ other)(α_i) = self(other(α_i))`.
    pub fn compose(&self, other: &FreeHom) -> Result<FreeHom, FreeGroupError> {
        if other.target_rank != self.source_rank {
            return Err(FreeGroupError::RankMismatch {
                expected: self.source_rank,
                found: other.target_rank,
            });
        }
        let images = other
            .images
            .iter()
            .map(|w| self.apply(w))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FreeHom {
            source_rank: other.source_rank,
            target_rank: self.target_rank,
            images,
        })
    }

    /// Columns are the abelianizations of the generator images; the matrix
    /// of the induced map `Z^n → Z^m`. Entries are integer-valued.
    pub fn abelianization_matrix(&self) -> crate::matrix::RatMatrix {
        let mut m = crate::matrix::RatMatrix::zero(self.target_rank, self.source_rank);
        for (col, w) in self.images.iter().enumerate() {
            for (row, x) in w.abelianize().into_iter().enumerate() {
                m[(row, col)] = Rat::from_integer(x);
            }
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutError {
    RankMismatch { expected: usize, found: usize },
    /// The supplied inverse fails one of the two composition checks.
    NotInverse,
    /// The bounded Nielsen-style search did not find an inverse. The
    /// homomorphism may or may not be invertible; nothing was certified.
    InvertibilityUnverified,
}

impl fmt::Display for AutError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutError::RankMismatch { expected, found } => {
                write!(f, "rank mismatch: expected {expected}, found {found}")
            }
            AutError::NotInverse => write!(f, "supplied homomorphism is not a two-sided inverse"),
            AutError::InvertibilityUnverified => {
                write!(f, "invertibility unverified: bounded inverse search failed")
            }
        }
    }
}

impl core::error::Error for AutError {}

/// An automorphism of a free group, certified by an explicit two-sided
/// inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAut {
    fwd: FreeHom,
    inv: FreeHom,
}

impl FreeAut {
    /// Certify with a caller-supplied inverse; both compositions are checked
    /// against the identity.
    pub fn new(fwd: FreeHom, inv: FreeHom) -> Result<FreeAut, AutError> {
        if fwd.source_rank() != fwd.target_rank() {
            return Err(AutError::RankMismatch {
                expected: fwd.source_rank(),
                found: fwd.target_rank(),
            });
        }
        if inv.source_rank() != fwd.source_rank() || inv.target_rank() != fwd.source_rank() {
            return Err(AutError::RankMismatch {
                expected: fwd.source_rank(),
                found: inv.source_rank(),
            });
        }
        let ok = fwd.compose(&inv).map(|h| h.is_identity()).unwrap_or(false)
            && inv.compose(&fwd).map(|h| h.is_identity()).unwrap_or(false);
        if !ok {
            return Err(AutError::NotInverse);
        }
        Ok(FreeAut { fwd, inv })
    }

    /// Certify by searching for the inverse with a depth-limited greedy
    /// Nielsen reduction. Failure means "invertibility unverified", not
    /// "not invertible".
    pub fn certify(fwd: FreeHom) -> Result<FreeAut, AutError> {
        if fwd.source_rank() != fwd.target_rank() {
            return Err(AutError::RankMismatch {
                expected: fwd.source_rank(),
                found: fwd.target_rank(),
            });
        }
        let inv = search_inverse(&fwd, 400).ok_or(AutError::InvertibilityUnverified)?;
        FreeAut::new(fwd, inv)
    }

    pub fn identity(rank: usize) -> FreeAut {
        FreeAut { fwd: FreeHom::identity(rank), inv: FreeHom::identity(rank) }
    }

    pub fn rank(&self) -> usize {
        self.fwd.source_rank()
    }

    pub fn hom(&self) -> &FreeHom {
        &self.fwd
    }

    pub fn inverse_hom(&self) -> &FreeHom {
        &self.inv
    }

    pub fn inverse(&self) -> FreeAut {
        FreeAut { fwd: self.inv.clone(), inv: self.fwd.clone() }
    }

    /// `self ∘ other`, with the inverse composed the opposite way.
    pub fn compose(&self, other: &FreeAut) -> Result<FreeAut, FreeGroupError> {
        Ok(FreeAut {
            fwd: self.fwd.compose(&other.fwd)?,
            inv: other.inv.compose(&self.inv)?,
        })
    }

    pub fn apply(&self, w: &Word) -> Result<Word, FreeGroupError> {
        self.fwd.apply(w)
    }
}

/// Greedy Nielsen descent: repeatedly apply the elementary move that most
/// reduces the total image length, tracking the accumulated inverse. Stops
/// at a signed permutation tuple (success) or after `max_steps` without
/// progress (failure).
fn search_inverse(hom: &FreeHom, max_steps: usize) -> Option<FreeHom> {
    let n = hom.source_rank();
    let mut tuple: Vec<Word> = hom.images().to_vec();
    // Accumulated automorphism e with tuple = images of hom ∘ e.
    let mut acc = FreeHom::identity(n);
    let total = |t: &[Word]| t.iter().map(Word::len).sum::<usize>();
    for _ in 0..max_steps {
        if let Some(inv) = finish_signed_permutation(&tuple, &acc) {
            return Some(inv);
        }
        let current = total(&tuple);
        let mut best: Option<(usize, usize, Word, FreeHom)> = None;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for sign in [Sign::Plus, Sign::Minus] {
                    let factor = match sign {
                        Sign::Plus => tuple[j].clone(),
                        Sign::Minus => tuple[j].inverse(),
                    };
                    let gen_j = match sign {
                        Sign::Plus => Word::generator(n, j + 1).unwrap(),
                        Sign::Minus => Word::generator(n, j + 1).unwrap().inverse(),
                    };
                    let gen_i = Word::generator(n, i + 1).unwrap();
                    // Moves w_i <- w_i w_j^s and w_i <- w_j^s w_i, realized
                    // by post-composing acc with α_i ↦ α_i α_j^s resp.
                    // α_i ↦ α_j^s α_i.
                    for (candidate, eps_image) in [
                        (tuple[i].mul(&factor), gen_i.mul(&gen_j)),
                        (factor.mul(&tuple[i]), gen_j.mul(&gen_i)),
                    ] {
                        let new_total = current - tuple[i].len() + candidate.len();
                        if new_total < current
                            && best.as_ref().is_none_or(|(b, _, _, _)| new_total < *b)
                        {
                            let mut images: Vec<Word> = (1..=n)
                                .map(|k| Word::generator(n, k).unwrap())
                                .collect();
                            images[i] = eps_image.clone();
                            let eps = FreeHom::new(n, n, images).unwrap();
                            best = Some((new_total, i, candidate, eps));
                        }
                    }
                }
            }
        }
        let (_, i, candidate, eps) = best?;
        tuple[i] = candidate;
        acc = acc.compose(&eps).expect("ranks agree");
    }
    finish_signed_permutation(&tuple, &acc)
}

/// If every tuple entry is a signed generator and the indices are a
/// permutation, build the full inverse; otherwise `None`.
fn finish_signed_permutation(tuple: &[Word], acc: &FreeHom) -> Option<FreeHom> {
    let n = tuple.len();
    let mut images = vec![None; n];
    for (i, w) in tuple.iter().enumerate() {
        if w.len() != 1 {
            return None;
        }
        let l = w.letters()[0];
        if images[l.index - 1].is_some() {
            return None;
        }
        // tuple[i] = α_{l.index}^{l.sign}, so the inverse sends α_{l.index}
        // to α_{i+1}^{l.sign}.
        let letter = Letter { index: i + 1, sign: l.sign };
        images[l.index - 1] = Some(Word::reduce(n, [letter]).unwrap());
    }
    let perm_inv =
        FreeHom::new(n, n, images.into_iter().collect::<Option<Vec<_>>>()?).unwrap();
    // hom ∘ acc = signed permutation p, so hom^{-1} = acc ∘ p^{-1}.
    Some(acc.compose(&perm_inv).expect("ranks agree"))
}

/// Uniformly random reduced word of length at most `max_len` (the raw length
/// before reduction), for the randomized identity suites.
pub fn random_word(rank: usize, max_len: usize, rng: &mut crate::rng::SplitMix64) -> Word {
    if rank == 0 {
        return Word::identity(0);
    }
    let len = rng.below((max_len + 1) as u64) as usize;
    let letters = (0..len).map(|_| Letter {
        index: 1 + rng.below(rank as u64) as usize,
        sign: if rng.coin() { Sign::Plus } else { Sign::Minus },
    });
    Word::reduce(rank, letters).expect("indices are in range")
}

/// Random homomorphism with image words of raw length at most `max_len`.
pub fn random_hom(
    source_rank: usize,
    target_rank: usize,
    max_len: usize,
    rng: &mut crate::rng::SplitMix64,
) -> FreeHom {
    let images = (0..source_rank)
        .map(|_| random_word(target_rank, max_len, rng))
        .collect();
    FreeHom::new(source_rank, target_rank, images).expect("images have the target rank")
}

/// Random certified automorphism: a product of elementary Nielsen moves
/// (inversions and one-sided multiplications), composed with its inverse
/// tracked move by move.
pub fn random_aut(rank: usize, moves: usize, rng: &mut crate::rng::SplitMix64) -> FreeAut {
    let mut aut = FreeAut::identity(rank);
    if rank == 0 {
        return aut;
    }
    for _ in 0..moves {
        let elementary = if rank == 1 || rng.below(4) == 0 {
            // α_i ↦ α_i^{-1}, self-inverse.
            let i = rng.range_usize(1, rank);
            let mut images: Vec<Word> = (1..=rank)
                .map(|k| Word::generator(rank, k).expect("index in range"))
                .collect();
            images[i - 1] = images[i - 1].inverse();
            let hom = FreeHom::new(rank, rank, images).expect("rank matches");
            FreeAut::new(hom.clone(), hom).expect("inversion is self-inverse")
        } else {
            // α_i ↦ α_i α_j^{±1} with inverse α_i ↦ α_i α_j^{∓1}.
            let i = rng.range_usize(1, rank);
            let j = loop {
                let j = rng.range_usize(1, rank);
                if j != i {
                    break j;
                }
            };
            let sign = if rng.coin() { Sign::Plus } else { Sign::Minus };
            let make = |s: Sign| {
                let mut images: Vec<Word> = (1..=rank)
                    .map(|k| Word::generator(rank, k).expect("index in range"))
                    .collect();
                let factor = match s {
                    Sign::Plus => Word::generator(rank, j).expect("index in range"),
                    Sign::Minus => Word::generator(rank, j).expect("index in range").inverse(),
                };
                images[i - 1] = images[i - 1].mul(&factor);
                FreeHom::new(rank, rank, images).expect("rank matches")
            };
            FreeAut::new(make(sign), make(sign.flip())).expect("one-sided moves invert")
        };
        aut = aut.compose(&elementary).expect("ranks agree");
    }
    aut
}

/// One-sided syntactic certificate for lower central series membership.
///
/// Returns `true` only when the reduced word can be recognized as a product
/// of commutator blocks (`depth` 1), or of blocks `[u, k]` where `k` is
/// itself recognized as a product of commutators (`depth` 2). A `false`
/// answer carries no information: this is a bounded search used to construct
/// test elements, not a decision procedure.
pub fn lcs_member_witness(w: &Word, depth: u8) -> bool {
    assert!(depth == 1 || depth == 2, "depth must be 1 or 2");
    if w.len() > MAX_WITNESS_LEN {
        return false;
    }
    if w.is_empty() {
        return true;
    }
    // Every block abelianizes to zero, so all split points must be positions
    // with vanishing prefix abelianization.
    if w.abelianize().iter().any(|x| !x.is_zero()) {
        return false;
    }
    let splits = zero_prefix_positions(w);
    let mut memo = BTreeMap::new();
    decompose_from(w, 0, depth, &splits, &mut memo)
}

const MAX_WITNESS_LEN: usize = 128;

fn zero_prefix_positions(w: &Word) -> BTreeSet<usize> {
    let mut positions = BTreeSet::new();
    let mut prefix = vec![0i64; w.rank()];
    positions.insert(0usize);
    for (p, l) in w.letters().iter().enumerate() {
        prefix[l.index - 1] += l.sign.as_int();
        if prefix.iter().all(|&x| x == 0) {
            positions.insert(p + 1);
        }
    }
    positions
}

fn decompose_from(
    w: &Word,
    start: usize,
    depth: u8,
    splits: &BTreeSet<usize>,
    memo: &mut BTreeMap<(usize, usize), bool>,
) -> bool {
    if start == w.len() {
        return true;
    }
    let ends: Vec<usize> = splits.range((start + 1)..=w.len()).copied().collect();
    for end in ends {
        if is_block(w, start, end, depth, memo)
            && decompose_from(w, end, depth, splits, memo)
        {
            return true;
        }
    }
    false
}

/// Does the segment `w[start..end]` spell a commutator `[u, v]` (depth 1),
/// or `[u, k]` / `[k, u]` with `k` a certified product of commutators
/// (depth 2)? Candidates for `u` and `v` are subwords of the segment, their
/// inverses, and single letters; each candidate pair is verified exactly by
/// reducing `u v u^-1 v^-1`.
fn is_block(
    w: &Word,
    start: usize,
    end: usize,
    depth: u8,
    memo: &mut BTreeMap<(usize, usize), bool>,
) -> bool {
    if let Some(&hit) = memo.get(&(start, end)) {
        return hit;
    }
    let result = is_block_uncached(w, start, end, depth);
    memo.insert((start, end), result);
    result
}

fn is_block_uncached(w: &Word, start: usize, end: usize, depth: u8) -> bool {
    let seg_len = end - start;
    if seg_len < 4 || !seg_len.is_multiple_of(2) {
        return false;
    }
    let segment = Word {
        rank: w.rank(),
        letters: w.letters()[start..end].to_vec(),
    };
    let candidates = segment_candidates(w, start, end);
    for u in &candidates {
        for v in &candidates {
            // A reduced commutator [u, v] has length at most 2(|u| + |v|).
            if 2 * (u.len() + v.len()) < seg_len {
                continue;
            }
            if commutator(u, v) != segment {
                continue;
            }
            match depth {
                1 => return true,
                _ => {
                    if lcs_member_witness(v, 1) || lcs_member_witness(u, 1) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn segment_candidates(w: &Word, start: usize, end: usize) -> Vec<Word> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |word: Word| {
        if !word.is_empty() && seen.insert(word.clone()) {
            out.push(word);
        }
    };
    for i in 1..=w.rank() {
        push(Word { rank: w.rank(), letters: vec![Letter::positive(i)] });
        push(Word { rank: w.rank(), letters: vec![Letter::negative(i)] });
    }
    let half = (end - start).div_ceil(2);
    for a in start..end {
        for b in (a + 1)..=end {
            if b - a > half {
                break;
            }
            let sub = Word {
                rank: w.rank(),
                letters: w.letters()[a..b].to_vec(),
            };
            push(sub.inverse());
            push(sub);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    fn w(rank: usize, s: &str) -> Word {
        Word::parse(rank, s).unwrap()
    }

    #[test]
    fn reduce_cancels_inverse_pairs() {
        let letters = vec![Letter::positive(1), Letter::negative(1)];
        assert!(Word::reduce(2, letters).unwrap().is_empty());

        let letters = vec![
            Letter::positive(1),
            Letter::positive(2),
            Letter::negative(2),
            Letter::positive(1),
        ];
        let reduced = Word::reduce(2, letters).unwrap();
        assert_eq!(reduced, w(2, "a1 a1"));
    }

    #[test]
    fn reduce_rejects_out_of_range() {
        let err = Word::reduce(2, vec![Letter::positive(3)]).unwrap_err();
        assert_eq!(err, FreeGroupError::GeneratorOutOfRange { index: 3, rank: 2 });
    }

    #[test]
    fn reduce_is_idempotent_on_reduced_input() {
        let word = w(3, "a1 a2^-1 a1 a3");
        let again = Word::reduce(3, word.letters().to_vec()).unwrap();
        assert_eq!(word, again);
    }

    #[test]
    fn compose_identity_laws() {
        let g = FreeHom::new(2, 2, vec![w(2, "a1 a2"), w(2, "a2^-1")]).unwrap();
        let id = FreeHom::identity(2);
        assert_eq!(id.compose(&g).unwrap(), g);
        assert_eq!(g.compose(&id).unwrap(), g);
    }

    #[test]
    fn compose_substitutes_per_postcondition() {
        // f: a1 -> a1 a2, a2 -> a2;  g: a1 -> a1^-1, a2 -> a2.
        let f = FreeHom::new(2, 2, vec![w(2, "a1 a2"), w(2, "a2")]).unwrap();
        let g = FreeHom::new(2, 2, vec![w(2, "a1^-1"), w(2, "a2")]).unwrap();
        // (f∘g)(a1) = f(a1^-1) = (a1 a2)^-1.
        assert_eq!(f.compose(&g).unwrap().image(1), &w(2, "a2^-1 a1^-1"));
        // The other composition order gives g(f(a1)) = a1^-1 a2.
        assert_eq!(g.compose(&f).unwrap().image(1), &w(2, "a1^-1 a2"));
    }

    #[test]
    fn apply_is_a_homomorphism() {
        let f = FreeHom::new(2, 2, vec![w(2, "a1 a2"), w(2, "a2 a1 a2^-1")]).unwrap();
        let a = w(2, "a1 a2 a1");
        let b = w(2, "a2^-1 a1");
        let lhs = f.apply(&commutator(&a, &b)).unwrap();
        let rhs = commutator(&f.apply(&a).unwrap(), &f.apply(&b).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn apply_inner_automorphism() {
        // φ(a_i) = a1 a_i a1^-1 applied to a2.
        let n = 3;
        let images = (1..=n)
            .map(|i| {
                let a1 = Word::generator(n, 1).unwrap();
                let ai = Word::generator(n, i).unwrap();
                a1.mul(&ai).mul(&a1.inverse())
            })
            .collect();
        let phi = FreeHom::new(n, n, images).unwrap();
        assert_eq!(phi.apply(&w(n, "a2")).unwrap(), w(n, "a1 a2 a1^-1"));
        assert_eq!(phi.apply(&w(n, "a1")).unwrap(), w(n, "a1"));
    }

    #[test]
    fn abelianize_examples() {
        let v = w(3, "a1 a2 a1^-1").abelianize();
        assert_eq!(v, vec![Int::from(0), Int::from(1), Int::from(0)]);

        let a = w(3, "a1 a3");
        let b = w(3, "a2 a2");
        assert!(commutator(&a, &b).abelianize().iter().all(Zero::is_zero));

        assert!(boundary_word(3).abelianize().iter().all(Zero::is_zero));
    }

    #[test]
    fn content_basic_values() {
        assert!(w(4, "a1").content().is_zero());
        assert!(Word::identity(4).content().is_zero());

        let c = w(2, "a1 a2").content();
        assert_eq!(c.get(1, 2), crate::rat(1));

        let zeta2 = boundary_word(2);
        let expected = Bivector::symplectic_form(2).scale(&crate::rat(2));
        assert_eq!(zeta2.content(), expected);
    }

    #[test]
    fn content_of_commutator_is_twice_the_wedge() {
        let a = w(3, "a1 a2 a3^-1");
        let b = w(3, "a3 a1");
        let expected =
            Bivector::wedge_vectors(&a.abelianize(), &b.abelianize()).scale(&crate::rat(2));
        assert_eq!(commutator(&a, &b).content(), expected);
    }

    #[test]
    fn content_depends_on_basis() {
        // The word β1 = α1 α2 has content e1 ∧ e2 in the α-basis; as the
        // single letter β1 of the β-basis its content is zero.
        assert_eq!(w(2, "a1 a2").content().get(1, 2), crate::rat(1));
        assert!(w(2, "a1").content().is_zero());
    }

    #[test]
    fn boundary_word_shape() {
        assert_eq!(boundary_word(1), w(2, "a1 a2 a1^-1 a2^-1"));
        assert!(boundary_word(0).is_empty());
        for g in 0..5 {
            assert_eq!(boundary_word(g).len(), 4 * g);
        }
    }

    #[test]
    fn word_parse_and_display_round_trip() {
        for s in ["1", "a1", "a2^-1 a1 a1", "a10 a3^-1"] {
            let word = w(12, s);
            assert_eq!(format!("{word}"), s);
        }
        assert!(Word::parse(2, "b1").is_err());
        assert!(Word::parse(2, "a0").is_err());
        assert!(Word::parse(2, "a1^2").is_err());
    }

    #[test]
    fn certify_finds_inverse_of_transvection_like_maps() {
        // a1 -> a1 a2, a2 -> a2.
        let t = FreeHom::new(2, 2, vec![w(2, "a1 a2"), w(2, "a2")]).unwrap();
        let aut = FreeAut::certify(t.clone()).unwrap();
        assert!(aut.hom().compose(aut.inverse_hom()).unwrap().is_identity());
        assert_eq!(aut.inverse_hom().image(1), &w(2, "a1 a2^-1"));

        // An inner automorphism: conjugation by a1 a2.
        let c = w(2, "a1 a2");
        let images = (1..=2)
            .map(|i| c.mul(&Word::generator(2, i).unwrap()).mul(&c.inverse()))
            .collect();
        let inner = FreeHom::new(2, 2, images).unwrap();
        let aut = FreeAut::certify(inner).unwrap();
        assert!(aut.inverse_hom().compose(aut.hom()).unwrap().is_identity());
    }

    #[test]
    fn certify_rejects_non_automorphism() {
        // a1 -> a1 a1 is injective but not surjective.
        let sq = FreeHom::new(1, 1, vec![w(1, "a1 a1")]).unwrap();
        assert_eq!(FreeAut::certify(sq), Err(AutError::InvertibilityUnverified));

        let f = FreeHom::new(2, 2, vec![w(2, "a1 a2"), w(2, "a2")]).unwrap();
        assert_eq!(
            FreeAut::new(f.clone(), f).unwrap_err(),
            AutError::NotInverse
        );
    }

    #[test]
    fn aut_compose_and_inverse() {
        let t1 = FreeAut::certify(
            FreeHom::new(2, 2, vec![w(2, "a1 a2"), w(2, "a2")]).unwrap(),
        )
        .unwrap();
        let t2 = FreeAut::certify(
            FreeHom::new(2, 2, vec![w(2, "a1"), w(2, "a2 a1")]).unwrap(),
        )
        .unwrap();
        let prod = t1.compose(&t2).unwrap();
        let id = prod.compose(&prod.inverse()).unwrap();
        assert!(id.hom().is_identity());
    }

    #[test]
    fn random_words_are_reduced_and_bounded() {
        let mut rng = crate::rng::SplitMix64::new(99);
        for _ in 0..200 {
            let word = random_word(4, 12, &mut rng);
            assert!(word.len() <= 12);
            let again = Word::reduce(4, word.letters().to_vec()).unwrap();
            assert_eq!(word, again);
        }
    }

    #[test]
    fn lcs_witness_depth_one() {
        let a = w(3, "a1 a2");
        let b = w(3, "a3");
        assert!(lcs_member_witness(&commutator(&a, &b), 1));
        assert!(!lcs_member_witness(&w(3, "a1"), 1));

        // Product of two commutators, e.g. a boundary word.
        assert!(lcs_member_witness(&boundary_word(2), 1));
    }

    #[test]
    fn lcs_witness_depth_two() {
        let a = w(3, "a1");
        let b = w(3, "a2");
        let c = w(3, "a3");
        let double = commutator(&a, &commutator(&b, &c));
        assert!(lcs_member_witness(&double, 2));
        assert!(!lcs_member_witness(&commutator(&b, &c), 2) || double.is_empty());

        // [α_i^-1, ζ] survives the junction cancellation against ζ.
        let zeta = boundary_word(2);
        for i in 1..=4 {
            let u = Word::generator(4, i).unwrap().inverse();
            let h = commutator(&u, &zeta);
            assert!(lcs_member_witness(&h, 2), "failed for i = {i}");
        }
    }
}
