//! Exact fields: the rationals, prime fields `F_p`, and simple algebraic
//! extensions `K[t]/(f)` over either of them.
//!
//! A [`Field`] is a cheap, shareable handle to a [`FieldDescriptor`]. Every
//! [`FieldElement`] carries its field so that mixing elements of different
//! fields is detected: the `try_*`/[`field_arith`] routes report
//! [`FieldError::FieldMismatch`], the operator overloads panic.
//!
//! Canonical forms: rationals are reduced with positive denominator, residues
//! live in `[0, p)`, extension elements are coefficient vectors of length
//! `deg f` already reduced modulo `f`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use rand::Rng;

/// Largest accepted prime characteristic; residues multiply inside `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// Maximum degree of an extension over the rationals.
pub const MAX_RATIONAL_EXTENSION_DEGREE: usize = 4;

// Caps for the exhaustive irreducibility searches.
const MAX_FACTOR_CANDIDATES: u128 = 4_000_000;
const MAX_CONSTANT_TERM: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("malformed field or element spec: {0}")]
    MalformedSpec(String),
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("modulus polynomial {0} is reducible")]
    ReduciblePolynomial(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields ({0} vs {1})")]
    FieldMismatch(String, String),
}

/// Internal canonical representation of an element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Repr {
    Rational(BigRational),
    Residue(u64),
    Poly(Vec<Repr>),
}

/// Description of an exact field.
#[derive(Debug, PartialEq, Eq)]
pub enum FieldDescriptor {
    Rationals,
    PrimeField { p: u64 },
    Extension(ExtensionData),
}

/// `base[t]/(f)`; `modulus` is `f` made monic, `spec_coeffs` the coefficients
/// as given (reduced into the base field), kept for rendering.
#[derive(Debug, PartialEq, Eq)]
pub struct ExtensionData {
    base: Field,
    modulus: Vec<Repr>,
    spec_coeffs: Vec<Repr>,
}

impl ExtensionData {
    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }
}

/// Shareable handle to a field.
#[derive(Clone)]
pub struct Field(Arc<FieldDescriptor>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({self})")
    }
}

/// Arithmetic operations accepted by [`field_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Parses a field spec: `Q`, `Fp:<prime>`, `ext:Fp:<prime>:<c0,..,cd>` or
/// `ext:Q:<c0,..,cd>`, where `f = sum c_i t^i`.
pub fn parse_field_spec(spec: &str) -> Result<Field, FieldError> {
    spec.parse()
}

impl FromStr for Field {
    type Err = FieldError;

    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let spec = spec.trim();
        let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
        match parts.as_slice() {
            ["Q"] => Ok(Field::rationals()),
            ["Fp", p] => Field::prime(parse_prime(p)?),
            ["ext", "Fp", p, coeffs] => {
                let base = Field::prime(parse_prime(p)?)?;
                let coeffs = parse_coeff_list(&base, coeffs)?;
                Field::extension(base, coeffs)
            }
            ["ext", "Q", coeffs] => {
                let base = Field::rationals();
                let coeffs = parse_coeff_list(&base, coeffs)?;
                Field::extension(base, coeffs)
            }
            _ => Err(FieldError::MalformedSpec(spec.to_string())),
        }
    }
}

fn parse_prime(s: &str) -> Result<u64, FieldError> {
    let p: u64 = s
        .parse()
        .map_err(|_| FieldError::MalformedSpec(format!("bad characteristic `{s}`")))?;
    if !is_prime(p) {
        return Err(FieldError::NonPrimeCharacteristic(p));
    }
    if p > MAX_PRIME {
        return Err(FieldError::MalformedSpec(format!(
            "characteristic {p} exceeds {MAX_PRIME}"
        )));
    }
    Ok(p)
}

fn parse_coeff_list(base: &Field, s: &str) -> Result<Vec<FieldElement>, FieldError> {
    s.split(',').map(|c| base.parse_element(c)).collect()
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(FieldDescriptor::Rationals))
    }

    pub fn prime(p: u64) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrimeCharacteristic(p));
        }
        if p > MAX_PRIME {
            return Err(FieldError::MalformedSpec(format!(
                "characteristic {p} exceeds {MAX_PRIME}"
            )));
        }
        Ok(Field(Arc::new(FieldDescriptor::PrimeField { p })))
    }

    /// Builds `base[t]/(f)` for `f = sum coeffs[i] t^i`, checking that `f`
    /// has degree at least 2 and is irreducible.
    pub fn extension(base: Field, coeffs: Vec<FieldElement>) -> Result<Field, FieldError> {
        if matches!(*base.0, FieldDescriptor::Extension(_)) {
            return Err(FieldError::MalformedSpec(
                "extension towers are not supported".into(),
            ));
        }
        for c in &coeffs {
            if c.field != base {
                return Err(FieldError::FieldMismatch(c.field.to_string(), base.to_string()));
            }
        }
        let spec_coeffs: Vec<Repr> = coeffs.into_iter().map(|c| c.repr).collect();
        let degree = match spec_coeffs.iter().rposition(|c| !base.r_is_zero(c)) {
            Some(d) if d + 1 == spec_coeffs.len() => d,
            _ => {
                return Err(FieldError::MalformedSpec(
                    "leading coefficient of the modulus must be nonzero".into(),
                ))
            }
        };
        if degree < 2 {
            return Err(FieldError::MalformedSpec(
                "modulus must have degree at least 2".into(),
            ));
        }
        let lead_inv = base.r_inv(&spec_coeffs[degree]).expect("nonzero leading coefficient");
        let modulus: Vec<Repr> = spec_coeffs.iter().map(|c| base.r_mul(c, &lead_inv)).collect();
        match &*base.0 {
            FieldDescriptor::PrimeField { p } => check_irreducible_mod_p(*p, &modulus)?,
            FieldDescriptor::Rationals => {
                if degree > MAX_RATIONAL_EXTENSION_DEGREE {
                    return Err(FieldError::MalformedSpec(format!(
                        "extensions of Q are limited to degree {MAX_RATIONAL_EXTENSION_DEGREE}"
                    )));
                }
                check_irreducible_over_q(&modulus)?
            }
            FieldDescriptor::Extension(_) => unreachable!(),
        }
        Ok(Field(Arc::new(FieldDescriptor::Extension(ExtensionData {
            base,
            modulus,
            spec_coeffs,
        }))))
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.0
    }

    /// 0 for characteristic zero, otherwise the prime.
    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            FieldDescriptor::Rationals => 0,
            FieldDescriptor::PrimeField { p } => *p,
            FieldDescriptor::Extension(ext) => ext.base.characteristic(),
        }
    }

    /// Number of elements, or `None` for infinite fields.
    pub fn order(&self) -> Option<u128> {
        match &*self.0 {
            FieldDescriptor::Rationals => None,
            FieldDescriptor::PrimeField { p } => Some(*p as u128),
            FieldDescriptor::Extension(ext) => {
                let base = ext.base.order()?;
                base.checked_pow(ext.degree() as u32)
            }
        }
    }

    /// All elements of a finite field in a fixed order (`0` first), or `None`
    /// for infinite fields and fields with more than `2^20` elements.
    pub fn elements(&self) -> Option<Vec<FieldElement>> {
        let order = self.order()?;
        if order > 1 << 20 {
            return None;
        }
        let reprs: Vec<Repr> = match &*self.0 {
            FieldDescriptor::PrimeField { p } => (0..*p).map(Repr::Residue).collect(),
            FieldDescriptor::Extension(ext) => {
                let base: Vec<Repr> = ext.base.elements()?.into_iter().map(|e| e.repr).collect();
                let mut out: Vec<Vec<Repr>> = vec![Vec::new()];
                for _ in 0..ext.degree() {
                    let mut next = Vec::with_capacity(out.len() * base.len());
                    for prefix in &out {
                        for b in &base {
                            let mut v = prefix.clone();
                            v.push(b.clone());
                            next.push(v);
                        }
                    }
                    out = next;
                }
                out.into_iter().map(Repr::Poly).collect()
            }
            FieldDescriptor::Rationals => unreachable!(),
        };
        Some(reprs.into_iter().map(|r| self.wrap(r)).collect())
    }

    pub fn nonzero_elements(&self) -> Option<Vec<FieldElement>> {
        let mut all = self.elements()?;
        all.retain(|e| !e.is_zero());
        Some(all)
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(self.r_zero())
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(self.r_one())
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElement {
        self.wrap(self.r_from_bigint(n))
    }

    /// The class of `t` in an extension field.
    pub fn generator(&self) -> Option<FieldElement> {
        match &*self.0 {
            FieldDescriptor::Extension(ext) => {
                let mut coeffs = vec![ext.base.r_zero(); ext.degree()];
                coeffs[1] = ext.base.r_one();
                Some(self.wrap(Repr::Poly(coeffs)))
            }
            _ => None,
        }
    }

    /// Parses an element literal: `a/b` or `a` (rationals), `k` (prime
    /// fields; negative literals and `a/b` are reduced), `c0+c1*t+...`
    /// (extensions).
    pub fn parse_element(&self, s: &str) -> Result<FieldElement, FieldError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(FieldError::MalformedSpec("empty element literal".into()));
        }
        match &*self.0 {
            FieldDescriptor::Rationals | FieldDescriptor::PrimeField { .. } => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), Some(d.trim())),
                    None => (s, None),
                };
                let parse_int = |t: &str| {
                    BigInt::from_str(t)
                        .map_err(|_| FieldError::MalformedSpec(format!("bad literal `{s}`")))
                };
                let n = self.from_bigint(&parse_int(num)?);
                match den {
                    None => Ok(n),
                    Some(d) => n.checked_div(&self.from_bigint(&parse_int(d)?)),
                }
            }
            FieldDescriptor::Extension(ext) => {
                let t = self.generator().expect("extension");
                let mut acc = self.zero();
                for (negative, term) in split_signed_terms(s)? {
                    let (coef, power) = match term.find('t') {
                        None => (ext.base.parse_element(&term)?, 0u64),
                        Some(pos) => {
                            let coef_part = term[..pos].trim().trim_end_matches('*').trim();
                            let coef = if coef_part.is_empty() {
                                ext.base.one()
                            } else {
                                ext.base.parse_element(coef_part)?
                            };
                            let rest = term[pos + 1..].trim();
                            let power = if rest.is_empty() {
                                1
                            } else {
                                rest.strip_prefix('^')
                                    .and_then(|e| e.trim().parse::<u64>().ok())
                                    .ok_or_else(|| {
                                        FieldError::MalformedSpec(format!("bad term `{term}`"))
                                    })?
                            };
                            (coef, power)
                        }
                    };
                    let mut value = self.embed(&coef) * t.pow(power);
                    if negative {
                        value = -value;
                    }
                    acc = acc + value;
                }
                Ok(acc)
            }
        }
    }

    /// Embeds an element of the base field of an extension (or of this field).
    pub fn embed(&self, x: &FieldElement) -> FieldElement {
        if x.field == *self {
            return x.clone();
        }
        match &*self.0 {
            FieldDescriptor::Extension(ext) if x.field == ext.base => {
                let mut coeffs = vec![ext.base.r_zero(); ext.degree()];
                coeffs[0] = x.repr.clone();
                self.wrap(Repr::Poly(coeffs))
            }
            _ => panic!("cannot embed element of {} into {}", x.field, self),
        }
    }

    /// Random element; rationals draw small numerators and denominators.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        self.wrap(self.r_random(rng))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let x = self.random_element(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    fn wrap(&self, repr: Repr) -> FieldElement {
        FieldElement { field: self.clone(), repr }
    }

    // Raw arithmetic on representations.

    fn r_zero(&self) -> Repr {
        match &*self.0 {
            FieldDescriptor::Rationals => Repr::Rational(BigRational::zero()),
            FieldDescriptor::PrimeField { .. } => Repr::Residue(0),
            FieldDescriptor::Extension(ext) => Repr::Poly(vec![ext.base.r_zero(); ext.degree()]),
        }
    }

    fn r_one(&self) -> Repr {
        match &*self.0 {
            FieldDescriptor::Rationals => Repr::Rational(BigRational::one()),
            FieldDescriptor::PrimeField { .. } => Repr::Residue(1),
            FieldDescriptor::Extension(ext) => {
                let mut v = vec![ext.base.r_zero(); ext.degree()];
                v[0] = ext.base.r_one();
                Repr::Poly(v)
            }
        }
    }

    fn r_from_bigint(&self, n: &BigInt) -> Repr {
        match &*self.0 {
            FieldDescriptor::Rationals => Repr::Rational(BigRational::from_integer(n.clone())),
            FieldDescriptor::PrimeField { p } => {
                let r = n.mod_floor(&BigInt::from(*p));
                Repr::Residue(r.to_u64().expect("residue fits"))
            }
            FieldDescriptor::Extension(ext) => {
                let mut v = vec![ext.base.r_zero(); ext.degree()];
                v[0] = ext.base.r_from_bigint(n);
                Repr::Poly(v)
            }
        }
    }

    fn r_is_zero(&self, a: &Repr) -> bool {
        match a {
            Repr::Rational(x) => x.is_zero(),
            Repr::Residue(x) => *x == 0,
            Repr::Poly(v) => {
                let base = self.ext().base.clone();
                v.iter().all(|c| base.r_is_zero(c))
            }
        }
    }

    fn ext(&self) -> &ExtensionData {
        match &*self.0 {
            FieldDescriptor::Extension(ext) => ext,
            _ => panic!("{self} is not an extension field"),
        }
    }

    fn r_add(&self, a: &Repr, b: &Repr) -> Repr {
        match (&*self.0, a, b) {
            (FieldDescriptor::Rationals, Repr::Rational(x), Repr::Rational(y)) => {
                Repr::Rational(x + y)
            }
            (FieldDescriptor::PrimeField { p }, Repr::Residue(x), Repr::Residue(y)) => {
                Repr::Residue((x + y) % p)
            }
            (FieldDescriptor::Extension(ext), Repr::Poly(x), Repr::Poly(y)) => Repr::Poly(
                x.iter().zip(y).map(|(c, d)| ext.base.r_add(c, d)).collect(),
            ),
            _ => unreachable!("representation does not match field"),
        }
    }

    fn r_neg(&self, a: &Repr) -> Repr {
        match (&*self.0, a) {
            (FieldDescriptor::Rationals, Repr::Rational(x)) => Repr::Rational(-x),
            (FieldDescriptor::PrimeField { p }, Repr::Residue(x)) => Repr::Residue((p - x) % p),
            (FieldDescriptor::Extension(ext), Repr::Poly(x)) => {
                Repr::Poly(x.iter().map(|c| ext.base.r_neg(c)).collect())
            }
            _ => unreachable!("representation does not match field"),
        }
    }

    fn r_sub(&self, a: &Repr, b: &Repr) -> Repr {
        self.r_add(a, &self.r_neg(b))
    }

    fn r_mul(&self, a: &Repr, b: &Repr) -> Repr {
        match (&*self.0, a, b) {
            (FieldDescriptor::Rationals, Repr::Rational(x), Repr::Rational(y)) => {
                Repr::Rational(x * y)
            }
            (FieldDescriptor::PrimeField { p }, Repr::Residue(x), Repr::Residue(y)) => {
                Repr::Residue(x * y % p)
            }
            (FieldDescriptor::Extension(ext), Repr::Poly(x), Repr::Poly(y)) => {
                let base = &ext.base;
                let d = ext.degree();
                let mut prod = vec![base.r_zero(); 2 * d - 1];
                for (i, c) in x.iter().enumerate() {
                    if base.r_is_zero(c) {
                        continue;
                    }
                    for (j, e) in y.iter().enumerate() {
                        prod[i + j] = base.r_add(&prod[i + j], &base.r_mul(c, e));
                    }
                }
                Repr::Poly(ext.reduce(prod))
            }
            _ => unreachable!("representation does not match field"),
        }
    }

    fn r_inv(&self, a: &Repr) -> Option<Repr> {
        if self.r_is_zero(a) {
            return None;
        }
        Some(match (&*self.0, a) {
            (FieldDescriptor::Rationals, Repr::Rational(x)) => Repr::Rational(x.recip()),
            (FieldDescriptor::PrimeField { p }, Repr::Residue(x)) => {
                Repr::Residue(mod_pow(*x, p - 2, *p))
            }
            (FieldDescriptor::Extension(ext), Repr::Poly(x)) => Repr::Poly(ext.invert(x)),
            _ => unreachable!("representation does not match field"),
        })
    }

    fn r_random<R: Rng + ?Sized>(&self, rng: &mut R) -> Repr {
        match &*self.0 {
            FieldDescriptor::Rationals => {
                let n: i64 = rng.gen_range(-6..=6);
                let d: i64 = rng.gen_range(1..=4);
                Repr::Rational(BigRational::new(n.into(), d.into()))
            }
            FieldDescriptor::PrimeField { p } => Repr::Residue(rng.gen_range(0..*p)),
            FieldDescriptor::Extension(ext) => {
                Repr::Poly((0..ext.degree()).map(|_| ext.base.r_random(rng)).collect())
            }
        }
    }

    fn fmt_repr(&self, a: &Repr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match a {
            Repr::Rational(x) => {
                if x.is_integer() {
                    write!(f, "{}", x.numer())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
            Repr::Residue(x) => write!(f, "{x}"),
            Repr::Poly(coeffs) => {
                let base = &self.ext().base;
                let mut first = true;
                for (i, c) in coeffs.iter().enumerate() {
                    if base.r_is_zero(c) {
                        continue;
                    }
                    let (negative, mag) = match c {
                        Repr::Rational(x) if x.is_negative() => (true, Repr::Rational(-x)),
                        _ => (false, c.clone()),
                    };
                    if negative {
                        f.write_str("-")?;
                    } else if !first {
                        f.write_str("+")?;
                    }
                    first = false;
                    let unit = mag == base.r_one();
                    if i == 0 {
                        base.fmt_repr(&mag, f)?;
                        continue;
                    }
                    if !unit {
                        base.fmt_repr(&mag, f)?;
                        f.write_str("*")?;
                    }
                    if i == 1 {
                        f.write_str("t")?;
                    } else {
                        write!(f, "t^{i}")?;
                    }
                }
                if first {
                    f.write_str("0")?;
                }
                Ok(())
            }
        }
    }
}

impl ExtensionData {
    /// Reduces a coefficient vector modulo the monic modulus.
    fn reduce(&self, mut v: Vec<Repr>) -> Vec<Repr> {
        let d = self.degree();
        let base = &self.base;
        for i in (d..v.len()).rev() {
            let c = v[i].clone();
            if base.r_is_zero(&c) {
                continue;
            }
            for j in 0..d {
                let t = base.r_mul(&c, &self.modulus[j]);
                v[i - d + j] = base.r_sub(&v[i - d + j], &t);
            }
            v[i] = base.r_zero();
        }
        v.truncate(d);
        v.resize(d, base.r_zero());
        v
    }

    /// Inverse of a nonzero residue class via the extended Euclidean algorithm.
    fn invert(&self, x: &[Repr]) -> Vec<Repr> {
        let base = &self.base;
        let poly = PolyOps { base };
        // Invariant: s_i * x = r_i (mod f).
        let mut r0 = poly.trim(self.modulus.clone());
        let mut r1 = poly.trim(x.to_vec());
        let mut s0: Vec<Repr> = Vec::new();
        let mut s1: Vec<Repr> = vec![base.r_one()];
        while r1.len() > 1 {
            let (q, r) = poly.divrem(&r0, &r1);
            let s2 = poly.sub(&s0, &poly.mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant because f is irreducible.
        let c_inv = base.r_inv(&r1[0]).expect("gcd with irreducible modulus is a unit");
        let mut out: Vec<Repr> = s1.iter().map(|c| base.r_mul(c, &c_inv)).collect();
        out.resize(self.degree(), base.r_zero());
        self.reduce(out)
    }
}

/// Dense polynomial helpers over a base field; vectors are trimmed (no
/// trailing zeros, the zero polynomial is empty).
struct PolyOps<'a> {
    base: &'a Field,
}

impl PolyOps<'_> {
    fn trim(&self, mut v: Vec<Repr>) -> Vec<Repr> {
        while v.last().is_some_and(|c| self.base.r_is_zero(c)) {
            v.pop();
        }
        v
    }

    fn sub(&self, a: &[Repr], b: &[Repr]) -> Vec<Repr> {
        let n = a.len().max(b.len());
        let zero = self.base.r_zero();
        let v = (0..n)
            .map(|i| self.base.r_sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
            .collect();
        self.trim(v)
    }

    fn mul(&self, a: &[Repr], b: &[Repr]) -> Vec<Repr> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.base.r_zero(); a.len() + b.len() - 1];
        for (i, c) in a.iter().enumerate() {
            for (j, d) in b.iter().enumerate() {
                out[i + j] = self.base.r_add(&out[i + j], &self.base.r_mul(c, d));
            }
        }
        self.trim(out)
    }

    fn divrem(&self, a: &[Repr], b: &[Repr]) -> (Vec<Repr>, Vec<Repr>) {
        let lead_inv = self.base.r_inv(b.last().expect("nonzero divisor")).expect("trimmed");
        let mut rem = a.to_vec();
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let mut quot = vec![self.base.r_zero(); rem.len() - b.len() + 1];
        while rem.len() >= b.len() {
            let shift = rem.len() - b.len();
            let c = self.base.r_mul(rem.last().expect("nonempty"), &lead_inv);
            for (j, d) in b.iter().enumerate() {
                rem[shift + j] = self.base.r_sub(&rem[shift + j], &self.base.r_mul(&c, d));
            }
            quot[shift] = c;
            rem.pop();
            rem = self.trim(rem);
        }
        (self.trim(quot), rem)
    }
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Exhaustive search for a monic factor of degree `1..=d/2` over `F_p`.
fn check_irreducible_mod_p(p: u64, monic: &[Repr]) -> Result<(), FieldError> {
    let base = Field::prime(p)?;
    let poly = PolyOps { base: &base };
    let d = monic.len() - 1;
    let f = poly.trim(monic.to_vec());
    for k in 1..=d / 2 {
        let count = (p as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if count > MAX_FACTOR_CANDIDATES {
            return Err(FieldError::MalformedSpec(format!(
                "exhaustive irreducibility check over F_{p} in degree {d} is too large"
            )));
        }
        for idx in 0..count as u64 {
            let mut g: Vec<Repr> = Vec::with_capacity(k + 1);
            let mut rest = idx;
            for _ in 0..k {
                g.push(Repr::Residue(rest % p));
                rest /= p;
            }
            g.push(Repr::Residue(1));
            let (_, r) = poly.divrem(&f, &g);
            if r.is_empty() {
                return Err(FieldError::ReduciblePolynomial(render_poly(&base, monic)));
            }
        }
    }
    Ok(())
}

/// Rational root test plus a search for quadratic factors (degree 4).
fn check_irreducible_over_q(monic: &[Repr]) -> Result<(), FieldError> {
    let base = Field::rationals();
    let rationals: Vec<BigRational> = monic
        .iter()
        .map(|c| match c {
            Repr::Rational(x) => x.clone(),
            _ => unreachable!(),
        })
        .collect();
    let d = rationals.len() - 1;
    let lcm = rationals.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = rationals.iter().map(|c| (c * &lcm).to_integer()).collect();
    // g(y) = c_d^(d-1) f(y / c_d) is monic with integer coefficients.
    let lead = ints[d].clone();
    let g: Vec<BigInt> = (0..=d)
        .map(|i| {
            if i == d {
                BigInt::one()
            } else {
                &ints[i] * num::pow(lead.clone(), d - 1 - i)
            }
        })
        .collect();
    let reducible = || FieldError::ReduciblePolynomial(render_poly(&base, monic));
    if g[0].is_zero() {
        return Err(reducible());
    }
    let g0 = g[0]
        .abs()
        .to_u64()
        .filter(|v| *v <= MAX_CONSTANT_TERM)
        .ok_or_else(|| FieldError::MalformedSpec("modulus coefficients too large".into()))?;
    let divisors = positive_divisors(g0);
    let eval = |x: &BigInt| g.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c);
    for dv in &divisors {
        for x in [BigInt::from(*dv), -BigInt::from(*dv)] {
            if eval(&x).is_zero() {
                return Err(reducible());
            }
        }
    }
    if d == 4 {
        let (g1, g2, g3) = (&g[1], &g[2], &g[3]);
        for dv in &divisors {
            for c in [BigInt::from(*dv), -BigInt::from(*dv)] {
                let c2 = &g[0] / &c;
                if c2 != c {
                    let num = g1 - g3 * &c;
                    let den = &c2 - &c;
                    if !(&num % &den).is_zero() {
                        continue;
                    }
                    let b = num / den;
                    let e = g3 - &b;
                    if &c + &c2 + &b * &e == *g2 {
                        return Err(reducible());
                    }
                } else {
                    if *g1 != g3 * &c {
                        continue;
                    }
                    let disc = g3 * g3 - BigInt::from(4) * (g2 - BigInt::from(2) * &c);
                    if disc.sign() == Sign::Minus {
                        continue;
                    }
                    let root = disc.sqrt();
                    if &root * &root == disc && (g3 + &root).is_even() {
                        return Err(reducible());
                    }
                }
            }
        }
    }
    Ok(())
}

fn positive_divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out
}

fn render_poly(base: &Field, coeffs: &[Repr]) -> String {
    coeffs
        .iter()
        .map(|c| base.wrap(c.clone()).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Splits `a+b-c` into signed terms; a sign directly after `^`, `*` or `/`
/// belongs to the term.
fn split_signed_terms(s: &str) -> Result<Vec<(bool, String)>, FieldError> {
    let mut terms = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    let mut prev: Option<char> = None;
    for ch in s.chars().filter(|c| !c.is_whitespace()) {
        let binds = matches!(prev, Some('^') | Some('*') | Some('/'));
        if (ch == '+' || ch == '-') && !binds {
            if !current.is_empty() {
                terms.push((negative, std::mem::take(&mut current)));
            } else if prev.is_some() {
                return Err(FieldError::MalformedSpec(format!("bad literal `{s}`")));
            }
            negative = ch == '-';
        } else {
            current.push(ch);
        }
        prev = Some(ch);
    }
    if current.is_empty() {
        return Err(FieldError::MalformedSpec(format!("bad literal `{s}`")));
    }
    terms.push((negative, current));
    Ok(terms)
}

impl fmt::Display for Field {
    /// Canonical spec string; parsing it back yields the same field.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            FieldDescriptor::Rationals => f.write_str("Q"),
            FieldDescriptor::PrimeField { p } => write!(f, "Fp:{p}"),
            FieldDescriptor::Extension(ext) => {
                match &*ext.base.0 {
                    FieldDescriptor::PrimeField { p } => write!(f, "ext:Fp:{p}:")?,
                    _ => f.write_str("ext:Q:")?,
                }
                f.write_str(&render_poly(&ext.base, &ext.spec_coeffs))
            }
        }
    }
}

/// An element of an exact field, in canonical form.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    repr: Repr,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr && self.field == other.field
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.repr.hash(state);
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.field.fmt_repr(&self.repr, f)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.field.r_is_zero(&self.repr)
    }

    pub fn is_one(&self) -> bool {
        self.repr == self.field.r_one()
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch(self.field.to_string(), other.field.to_string()))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.r_add(&self.repr, &other.repr)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.r_sub(&self.repr, &other.repr)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.r_mul(&self.repr, &other.repr)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let inv = other.inv()?;
        Ok(self.field.wrap(self.field.r_mul(&self.repr, &inv.repr)))
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        self.field
            .r_inv(&self.repr)
            .map(|r| self.field.wrap(r))
            .ok_or(FieldError::DivisionByZero)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = self.field.r_one();
        let mut b = self.repr.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.field.r_mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.field.r_mul(&b, &b);
            }
        }
        self.field.wrap(acc)
    }

    /// Integer power; negative exponents invert first.
    pub fn powi(&self, e: i64) -> Result<Self, FieldError> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// The rational value, for elements of `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rational(x) => Some(x),
            _ => None,
        }
    }

    /// The residue, for elements of a prime field.
    pub fn as_residue(&self) -> Option<u64> {
        match &self.repr {
            Repr::Residue(x) => Some(*x),
            _ => None,
        }
    }

    /// Coefficients `c_0, .., c_{d-1}` over the base field, for extension
    /// elements.
    pub fn coefficients(&self) -> Option<Vec<FieldElement>> {
        match &self.repr {
            Repr::Poly(v) => {
                let base = &self.field.ext().base;
                Some(v.iter().map(|c| base.wrap(c.clone())).collect())
            }
            _ => None,
        }
    }
}

/// Checked binary arithmetic.
pub fn field_arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement, FieldError> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
        ArithOp::Div => a.checked_div(b),
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
        impl $trait<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.field.wrap(self.field.r_neg(&self.repr))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}
