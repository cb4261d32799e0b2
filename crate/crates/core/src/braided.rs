//! The free braided algebra `T(V)` of a rank-two diagonal braiding: words,
//! graded elements, the bicharacter, skew derivations, the adjoint action of
//! `x1` and super-letters of Lyndon words.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactfield::{Field, FieldElement};
use crate::qcalc::{unit_pow, BraidingParams};

/// Longest word a [`Word`] can hold.
pub const MAX_WORD_LEN: usize = 64;

/// Word over the letters `{1, 2}`, packed one bit per letter (set bit = `2`),
/// first letter in the most significant used bit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Word {
    bits: u64,
    len: u8,
}

impl Word {
    pub fn empty() -> Word {
        Word::default()
    }

    pub fn letter(l: u8) -> Word {
        Word::from_letters(&[l])
    }

    /// Panics on letters other than 1 and 2 or on overlong input.
    pub fn from_letters(letters: &[u8]) -> Word {
        assert!(letters.len() <= MAX_WORD_LEN, "word too long");
        let mut bits = 0u64;
        for &l in letters {
            assert!(l == 1 || l == 2, "letters must be 1 or 2, got {l}");
            bits = (bits << 1) | u64::from(l == 2);
        }
        Word { bits, len: letters.len() as u8 }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Letter at 0-based position `i`.
    pub fn at(&self, i: usize) -> u8 {
        debug_assert!(i < self.len());
        if (self.bits >> (self.len() - 1 - i)) & 1 == 1 {
            2
        } else {
            1
        }
    }

    pub fn letters(&self) -> Vec<u8> {
        (0..self.len()).map(|i| self.at(i)).collect()
    }

    pub fn degree(&self) -> MultiDegree {
        let twos = self.bits.count_ones() as usize;
        MultiDegree::new(self.len() - twos, twos)
    }

    pub fn concat(&self, other: &Word) -> Word {
        assert!(self.len() + other.len() <= MAX_WORD_LEN, "word too long");
        let bits = if other.len == 0 { self.bits } else { (self.bits << other.len) | other.bits };
        Word { bits, len: self.len + other.len }
    }

    /// Letters `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        debug_assert!(start <= end && end <= self.len());
        let n = end - start;
        let shifted = self.bits >> (self.len() - end);
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Word { bits: shifted & mask, len: n as u8 }
    }

    /// The word with the letter at position `i` removed.
    pub fn remove(&self, i: usize) -> Word {
        self.slice(0, i).concat(&self.slice(i + 1, self.len()))
    }

    /// Strictly smaller than each proper nonempty suffix.
    pub fn is_lyndon(&self) -> bool {
        !self.is_empty() && (1..self.len()).all(|i| *self < self.slice(i, self.len()))
    }
}

impl Ord for Word {
    /// Lexicographic with `1 < 2`; a proper prefix is smaller.
    fn cmp(&self, other: &Self) -> Ordering {
        let common = self.len.min(other.len) as u32;
        let a = if common == 0 { 0 } else { self.bits >> (self.len as u32 - common) };
        let b = if common == 0 { 0 } else { other.bits >> (other.len as u32 - common) };
        a.cmp(&b).then(self.len.cmp(&other.len))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        for i in 0..self.len() {
            write!(f, "x{}", self.at(i))?;
        }
        Ok(())
    }
}

/// `a alpha_1 + b alpha_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiDegree {
    pub a: usize,
    pub b: usize,
}

impl MultiDegree {
    pub const fn new(a: usize, b: usize) -> Self {
        MultiDegree { a, b }
    }

    pub fn total(&self) -> usize {
        self.a + self.b
    }

    pub fn as_pair(&self) -> (i64, i64) {
        (self.a as i64, self.b as i64)
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// `chi(alpha, beta) = prod q_ij^(alpha_i beta_j)`; negative components are
/// allowed.
pub fn chi(alpha: (i64, i64), beta: (i64, i64), params: &BraidingParams) -> FieldElement {
    let a = [alpha.0, alpha.1];
    let b = [beta.0, beta.1];
    let mut acc = params.field().one();
    for i in 0..2 {
        for j in 0..2 {
            let e = a[i] * b[j];
            if e != 0 {
                acc = acc * unit_pow(params.entry(i + 1, j + 1), e);
            }
        }
    }
    acc
}

/// Finite linear combination of words; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedElement {
    field: Field,
    terms: BTreeMap<Word, FieldElement>,
}

impl std::hash::Hash for GradedElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl GradedElement {
    pub fn zero(field: &Field) -> Self {
        GradedElement { field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn one(field: &Field) -> Self {
        Self::monomial(Word::empty(), field.one())
    }

    pub fn monomial(word: Word, coeff: FieldElement) -> Self {
        let mut out = GradedElement::zero(coeff.field());
        out.add_term(word, coeff);
        out
    }

    pub fn word(field: &Field, word: Word) -> Self {
        Self::monomial(word, field.one())
    }

    /// The generator `x_i`.
    pub fn generator(field: &Field, i: u8) -> Self {
        Self::word(field, Word::letter(i))
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, FieldElement)>>(field: &Field, terms: I) -> Self {
        let mut out = GradedElement::zero(field);
        for (w, c) in terms {
            out.add_term(w, c);
        }
        out
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> FieldElement {
        self.terms.get(w).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, w: Word, c: FieldElement) {
        assert!(c.field() == &self.field, "coefficient from {} in element over {}", c.field(), self.field);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// The common multidegree, `None` for zero or inhomogeneous elements.
    pub fn degree(&self) -> Option<MultiDegree> {
        let mut it = self.terms.keys().map(Word::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(crate::exactfield::FieldError::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            )
            .into())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, -c);
        }
        Ok(out)
    }

    /// Concatenation product, extended bilinearly.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let mut out = GradedElement::zero(&self.field);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let mut out = GradedElement::zero(&self.field);
        if c.is_zero() {
            return out;
        }
        for (w, a) in &self.terms {
            out.terms.insert(*w, a * c);
        }
        out
    }

    /// Panicking convenience wrappers used where both operands share a field
    /// by construction.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("same field")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("same field")
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("same field")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("serialisable")
    }

    fn to_wire(&self) -> WireElement {
        WireElement {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| WireTerm { word: w.letters(), coeff: c.to_string() })
                .collect(),
        }
    }

    pub fn from_json(s: &str, field: &Field) -> Result<Self> {
        let wire: WireElement =
            serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        let mut out = GradedElement::zero(field);
        for t in wire.terms {
            if t.word.iter().any(|&l| l != 1 && l != 2) || t.word.len() > MAX_WORD_LEN {
                return Err(Error::Malformed(format!("bad word {:?}", t.word)));
            }
            out.add_term(Word::from_letters(&t.word), field.parse_element(&t.coeff)?);
        }
        Ok(out)
    }
}

impl fmt::Debug for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("({c}){w}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct WireElement {
    terms: Vec<WireTerm>,
}

#[derive(Serialize, Deserialize)]
struct WireTerm {
    word: Vec<u8>,
    coeff: String,
}

/// Skew derivation `d_i` with `d_i(x_j) = delta_ij` and
/// `d_i(xy) = d_i(x) y + chi(deg x, alpha_i) x d_i(y)`.
pub fn skew_derive(i: u8, x: &GradedElement, params: &BraidingParams) -> GradedElement {
    assert!(i == 1 || i == 2, "derivation index must be 1 or 2");
    let alpha_i = if i == 1 { (1, 0) } else { (0, 1) };
    let mut out = GradedElement::zero(x.field());
    for (w, c) in x.terms() {
        for pos in 0..w.len() {
            if w.at(pos) != i {
                continue;
            }
            let prefix = w.slice(0, pos);
            let scalar = chi(prefix.degree().as_pair(), alpha_i, params);
            out.add_term(w.remove(pos), c * &scalar);
        }
    }
    out
}

/// `ad x1 (y) = x1 y - chi(alpha_1, deg y) y x1` for homogeneous `y`.
pub fn ad_x1(y: &GradedElement, params: &BraidingParams) -> Result<GradedElement> {
    if y.is_zero() {
        return Ok(y.clone());
    }
    let deg = y.degree().ok_or(Error::NonHomogeneous)?;
    let x1 = GradedElement::generator(y.field(), 1);
    let scalar = chi((1, 0), deg.as_pair(), params);
    Ok(x1.mul(y).sub(&y.mul(&x1).scale(&scalar)))
}

pub fn ad_x1_pow(m: usize, y: &GradedElement, params: &BraidingParams) -> Result<GradedElement> {
    let mut out = y.clone();
    for _ in 0..m {
        out = ad_x1(&out, params)?;
    }
    Ok(out)
}

/// Shirshov decomposition `w = uv`: `v` the longest proper suffix such that
/// both `u` and `v` are Lyndon.
pub fn shirshov_decomposition(w: &Word) -> Option<(Word, Word)> {
    if !w.is_lyndon() || w.len() < 2 {
        return None;
    }
    (1..w.len()).find_map(|split| {
        let (u, v) = (w.slice(0, split), w.slice(split, w.len()));
        (u.is_lyndon() && v.is_lyndon()).then_some((u, v))
    })
}

/// The super-letter `[w]` of a Lyndon word.
pub fn shirshov_superletter(w: &Word, params: &BraidingParams) -> Result<GradedElement> {
    if !w.is_lyndon() {
        return Err(Error::NotLyndon(w.to_string()));
    }
    let field = params.field();
    if w.len() == 1 {
        return Ok(GradedElement::word(field, *w));
    }
    let (u, v) = shirshov_decomposition(w).expect("Lyndon words of length >= 2 decompose");
    let bu = shirshov_superletter(&u, params)?;
    let bv = shirshov_superletter(&v, params)?;
    let scalar = chi(u.degree().as_pair(), v.degree().as_pair(), params);
    Ok(bu.mul(&bv).sub(&bv.mul(&bu).scale(&scalar)))
}
