//! q-deformed combinatorics and the scalar quantities attached to a rank-two
//! diagonal braiding.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num::{BigInt, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactfield::{Field, FieldElement};

/// The braiding matrix `(q_ij)` of a rank-two braided vector space of
/// diagonal type. The derived scalars `q = q11`, `r = q12 q21`, `s = q22`
/// are always recomputed from the entries.
#[derive(Clone, PartialEq, Eq)]
pub struct BraidingParams {
    entries: [[FieldElement; 2]; 2],
}

impl BraidingParams {
    pub fn new(
        q11: FieldElement,
        q12: FieldElement,
        q21: FieldElement,
        q22: FieldElement,
    ) -> Result<Self> {
        for (name, x) in [("q11", &q11), ("q12", &q12), ("q21", &q21), ("q22", &q22)] {
            if x.field() != q11.field() {
                return Err(crate::exactfield::FieldError::FieldMismatch(
                    q11.field().to_string(),
                    x.field().to_string(),
                )
                .into());
            }
            if x.is_zero() {
                return Err(Error::ZeroBraidingEntry(name));
            }
        }
        Ok(BraidingParams { entries: [[q11, q12], [q21, q22]] })
    }

    /// `q11 = q`, `q12 = r`, `q21 = 1`, `q22 = s`.
    pub fn shorthand(q: FieldElement, r: FieldElement, s: FieldElement) -> Result<Self> {
        let one = q.field().one();
        Self::new(q, r, one, s)
    }

    pub fn field(&self) -> &Field {
        self.entries[0][0].field()
    }

    /// `q_ij` with 1-based letters.
    pub fn entry(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i - 1][j - 1]
    }

    pub fn q11(&self) -> &FieldElement {
        &self.entries[0][0]
    }

    pub fn q12(&self) -> &FieldElement {
        &self.entries[0][1]
    }

    pub fn q21(&self) -> &FieldElement {
        &self.entries[1][0]
    }

    pub fn q22(&self) -> &FieldElement {
        &self.entries[1][1]
    }

    pub fn q(&self) -> FieldElement {
        self.q11().clone()
    }

    pub fn r(&self) -> FieldElement {
        self.q12() * self.q21()
    }

    pub fn s(&self) -> FieldElement {
        self.q22().clone()
    }

    pub(crate) fn q_pow(&self, e: i64) -> FieldElement {
        unit_pow(self.q11(), e)
    }

    pub(crate) fn r_pow(&self, e: i64) -> FieldElement {
        unit_pow(&self.r(), e)
    }
}

impl fmt::Debug for BraidingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BraidingParams[{}; q11={}, q12={}, q21={}, q22={}]",
            self.field(),
            self.q11(),
            self.q12(),
            self.q21(),
            self.q22()
        )
    }
}

/// Power of an element known to be nonzero.
pub(crate) fn unit_pow(x: &FieldElement, e: i64) -> FieldElement {
    x.powi(e).expect("braiding scalars are units")
}

/// `(n)_q = 1 + q + ... + q^(n-1)`.
pub fn q_int(n: u64, q: &FieldElement) -> FieldElement {
    let mut acc = q.field().zero();
    let mut power = q.field().one();
    for _ in 0..n {
        acc = &acc + &power;
        power = &power * q;
    }
    acc
}

/// `(n)_q^! = (1)_q (2)_q ... (n)_q`.
pub fn q_fact(n: u64, q: &FieldElement) -> FieldElement {
    (1..=n).fold(q.field().one(), |acc, k| acc * q_int(k, q))
}

/// Gaussian binomial via the Pascal recursion, so it stays a polynomial in
/// `q` and is total in positive characteristic. Returns 0 for `k > n`.
pub fn q_binom(n: u64, k: u64, q: &FieldElement) -> FieldElement {
    let field = q.field();
    if k > n {
        return field.zero();
    }
    // row[j] holds (i choose j)_q for the current i.
    let mut row = vec![field.one()];
    for i in 1..=n {
        let mut next = vec![field.zero(); (i as usize + 1).min(k as usize + 1)];
        for j in 0..next.len() {
            let upper = row.get(j).cloned().unwrap_or_else(|| field.zero());
            let lower = if j == 0 {
                field.zero()
            } else {
                row.get(j - 1).cloned().unwrap_or_else(|| field.zero()) * q.pow(i - j as u64)
            };
            next[j] = upper + lower;
        }
        row = next;
    }
    row[k as usize].clone()
}

/// `b_k = prod_{j<k} (1 - q^j r)`.
pub fn b_k(k: u64, params: &BraidingParams) -> FieldElement {
    let field = params.field();
    let r = params.r();
    (0..k).fold(field.one(), |acc, j| acc * (field.one() - params.q_pow(j as i64) * &r))
}

/// `(m)_q^! b_m`, the scalar whose nonvanishing guarantees the normalised
/// basis of `U_m` exists.
pub fn factorial_b(m: u64, params: &BraidingParams) -> FieldElement {
    q_fact(m, &params.q()) * b_k(m, params)
}

pub fn hypothesis_holds(m: u64, params: &BraidingParams) -> bool {
    !factorial_b(m, params).is_zero()
}

pub(crate) fn require_hypothesis(m: u64, params: &BraidingParams) -> Result<()> {
    if hypothesis_holds(m, params) {
        Ok(())
    } else {
        Err(Error::HypothesisViolated(format!("({m})_q^! b_{m} = 0")))
    }
}

/// `lambda_(n,k) = prod_{j=1..n} (1 - q^(k-1+j) r) (k+j)_q`.
pub fn lambda_coeff(n: u64, k: u64, params: &BraidingParams) -> FieldElement {
    let field = params.field();
    let q = params.q();
    let r = params.r();
    (1..=n).fold(field.one(), |acc, j| {
        let e = k as i64 - 1 + j as i64;
        acc * (field.one() - params.q_pow(e) * &r) * q_int(k + j, &q)
    })
}

/// `beta_(i,m',k) = prod_{j=1..i} (q^(m'+2k-j) r - r^-1)`.
pub fn beta_coeff(i: u64, m_prime: u64, k: u64, params: &BraidingParams) -> FieldElement {
    let field = params.field();
    let r = params.r();
    let r_inv = params.r_pow(-1);
    (1..=i).fold(field.one(), |acc, j| {
        let e = m_prime as i64 + 2 * k as i64 - j as i64;
        acc * (params.q_pow(e) * &r - &r_inv)
    })
}

/// Sparse polynomial in `Z[q, r]`: exponent pair `(q, r)` to coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl BivariatePoly {
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, q_exp: u32, r_exp: u32) -> BigInt {
        self.terms.get(&(q_exp, r_exp)).cloned().unwrap_or_default()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(0, 0).is_one()
    }

    /// Parses `sum c q^a r^b` from a list of `((a, b), c)`; zero terms dropped.
    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), i64)>>(terms: I) -> Self {
        let mut out = BivariatePoly::default();
        for (e, c) in terms {
            *out.terms.entry(e).or_default() += BigInt::from(c);
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn evaluate(&self, q: &FieldElement, r: &FieldElement) -> FieldElement {
        let field = q.field();
        let mut acc = field.zero();
        for (&(a, b), c) in &self.terms {
            acc = acc + field.from_bigint(c) * q.pow(a as u64) * r.pow(b as u64);
        }
        acc
    }
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (&(a, b), c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let mag = c.abs();
            let mut parts = Vec::new();
            if !mag.is_one() || (a == 0 && b == 0) {
                parts.push(mag.to_string());
            }
            match a {
                0 => {}
                1 => parts.push("q".into()),
                _ => parts.push(format!("q^{a}")),
            }
            match b {
                0 => {}
                1 => parts.push("r".into()),
                _ => parts.push(format!("r^{b}")),
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

/// Laurent polynomial in `q`, polynomial in `r`: index = `r` exponent.
type LaurentRows = Vec<BTreeMap<i64, BigInt>>;

fn laurent_mul(a: &LaurentRows, b: &LaurentRows) -> LaurentRows {
    let mut out: LaurentRows = vec![BTreeMap::new(); a.len() + b.len() - 1];
    for (i, ra) in a.iter().enumerate() {
        for (j, rb) in b.iter().enumerate() {
            for (ea, ca) in ra {
                for (eb, cb) in rb {
                    *out[i + j].entry(ea + eb).or_default() += ca * cb;
                }
            }
        }
    }
    for row in &mut out {
        row.retain(|_, c| !c.is_zero());
    }
    out
}

/// Numerator `(q^((2k+m)(m+1)/2) (-r)^(m+1) - 1) prod_{i=0..m} (1 - q^(k+i) r)`.
fn q2_numerator(k: usize, m: usize) -> LaurentRows {
    let e = ((2 * k + m) * (m + 1) / 2) as i64;
    let mut first: LaurentRows = vec![BTreeMap::new(); m + 2];
    first[0].insert(0, BigInt::from(-1));
    let sign = if (m + 1).is_multiple_of(2) { 1 } else { -1 };
    first[m + 1].insert(e, BigInt::from(sign));
    let mut acc = first;
    for i in 0..=m {
        let mut factor: LaurentRows = vec![BTreeMap::new(); 2];
        factor[0].insert(0, BigInt::one());
        factor[1].insert((k + i) as i64, BigInt::from(-1));
        acc = laurent_mul(&acc, &factor);
    }
    acc
}

fn compute_q2(k: usize, m: usize) -> Result<BivariatePoly> {
    let shift = (2 * k + m) as i64;
    let mut rem = q2_numerator(k, m);
    let top = rem.len() - 1;
    let mut quot: LaurentRows = vec![BTreeMap::new(); top.saturating_sub(1)];
    // Divide by q^shift r^2 - 1; the leading coefficient is a unit monomial.
    for deg in (2..=top).rev() {
        let lead = std::mem::take(&mut rem[deg]);
        for (e, c) in lead {
            let qe = e - shift;
            *quot[deg - 2].entry(qe).or_default() += &c;
            *rem[deg - 2].entry(qe).or_default() += &c;
        }
        rem[deg - 2].retain(|_, c| !c.is_zero());
    }
    let inexact = || Error::InternalInexactDivision { k, m };
    if rem.iter().any(|row| row.values().any(|c| !c.is_zero())) {
        return Err(inexact());
    }
    let mut out = BivariatePoly::default();
    for (rexp, row) in quot.into_iter().enumerate() {
        for (qexp, c) in row {
            if c.is_zero() {
                continue;
            }
            if qexp < 0 {
                return Err(inexact());
            }
            out.terms.insert((qexp as u32, rexp as u32), c);
        }
    }
    Ok(out)
}

type Q2Cache = RwLock<HashMap<(usize, usize), Arc<BivariatePoly>>>;

fn q2_cache() -> &'static Q2Cache {
    static CACHE: OnceLock<Q2Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `Q_2^{k,m}` as an element of `Z[q, r]`, computed by exact division and
/// memoised.
pub fn q2_poly(k: usize, m: usize) -> Result<Arc<BivariatePoly>> {
    if let Some(p) = q2_cache().read().expect("q2 cache poisoned").get(&(k, m)) {
        return Ok(p.clone());
    }
    let poly = Arc::new(compute_q2(k, m)?);
    q2_cache()
        .write()
        .expect("q2 cache poisoned")
        .entry((k, m))
        .or_insert(poly.clone());
    Ok(poly)
}

/// `Q_2^{k,m}` evaluated at the braiding's `q` and `r`.
pub fn q2_eval(k: usize, m: usize, params: &BraidingParams) -> Result<FieldElement> {
    Ok(q2_poly(k, m)?.evaluate(&params.q(), &params.r()))
}

/// The undivided numerator of `Q_2^{k,m}` evaluated in the field.
pub fn q2_numerator_eval(k: usize, m: usize, params: &BraidingParams) -> FieldElement {
    let field = params.field();
    let r = params.r();
    let e = ((2 * k + m) * (m + 1) / 2) as i64;
    let first = params.q_pow(e) * (-&r).pow((m + 1) as u64) - field.one();
    (0..=m).fold(first, |acc, i| acc * (field.one() - params.q_pow((k + i) as i64) * &r))
}

/// `q^(2k+m) r^2 - 1`.
pub fn q2_denominator_eval(k: usize, m: usize, params: &BraidingParams) -> FieldElement {
    params.q_pow((2 * k + m) as i64) * params.r().pow(2) - params.field().one()
}

/// `q^(j(j-1)/2) (-r)^j s = -1`.
pub fn j_first_equation(j: usize, params: &BraidingParams) -> bool {
    let lhs = params.q_pow((j * j.saturating_sub(1) / 2) as i64) * (-params.r()).pow(j as u64) * params.s();
    lhs == -params.field().one()
}

/// `q^(n+j-1) r^2`, the base of the even-gap condition.
pub(crate) fn pair_scalar(j: usize, n: usize, params: &BraidingParams) -> FieldElement {
    params.q_pow(n as i64 + j as i64 - 1) * params.r().pow(2)
}

/// The gap condition between `n < j`: `((j-n)/2)_{q^(n+j-1) r^2} = 0` for even
/// `j - n`, `(j-n)_{-q^((n+j-1)/2) r} = 0` for odd `j - n`. Returns `false`
/// unless `n < j`.
pub fn j_condition(j: usize, n: usize, params: &BraidingParams) -> bool {
    if n >= j {
        return false;
    }
    let t = (j - n) as u64;
    if t.is_multiple_of(2) {
        q_int(t / 2, &pair_scalar(j, n, params)).is_zero()
    } else {
        // n + j - 1 = 2n + t - 1 is even here.
        let half = ((n + j - 1) / 2) as i64;
        let base = -(params.q_pow(half) * params.r());
        q_int(t, &base).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(params: (i64, i64, i64)) -> BraidingParams {
        let f = Field::rationals();
        BraidingParams::shorthand(f.from_i64(params.0), f.from_i64(params.1), f.from_i64(params.2))
            .unwrap()
    }

    #[test]
    fn q_integers_and_binomials() {
        let f = Field::rationals();
        assert_eq!(q_int(3, &f.from_i64(2)), f.from_i64(7));
        assert_eq!(q_binom(2, 1, &f.from_i64(5)), f.from_i64(6));
        assert_eq!(q_binom(4, 2, &f.one()), f.from_i64(6));
        assert_eq!(q_binom(3, 5, &f.from_i64(2)), f.zero());
        assert_eq!(q_binom(0, 0, &f.from_i64(2)), f.one());
        // (4 choose 2)_q = 1 + q + 2q^2 + q^3 + q^4
        assert_eq!(q_binom(4, 2, &f.from_i64(2)), f.from_i64(1 + 2 + 8 + 8 + 16));
    }

    #[test]
    fn binomial_is_total_in_positive_characteristic() {
        let f3 = Field::prime(3).unwrap();
        let one = f3.one();
        // (3)_1 = 0 in F_3 but the binomial at q = 1 is still the integer binomial.
        assert!(q_fact(3, &one).is_zero());
        assert_eq!(q_binom(4, 2, &one), f3.from_i64(6));
        assert_eq!(q_binom(4, 1, &one), f3.from_i64(4));
    }

    #[test]
    fn b_lambda_beta_examples() {
        let p = rat((2, 3, -1));
        let f = p.field().clone();
        assert_eq!(b_k(0, &p), f.one());
        assert_eq!(b_k(1, &p), f.from_i64(-2));
        assert_eq!(b_k(2, &p), f.from_i64(10));
        assert_eq!(lambda_coeff(0, 4, &p), f.one());
        assert_eq!(beta_coeff(0, 3, 1, &p), f.one());
        assert_eq!(lambda_coeff(1, 0, &p), f.one() - p.r());
        // beta_(1,1,0) = q^0 r - r^-1
        assert_eq!(beta_coeff(1, 1, 0, &p), p.r() - p.r().inv().unwrap());
    }

    #[test]
    fn q2_examples() {
        for k in 0..4 {
            assert!(q2_poly(k, 0).unwrap().is_one(), "k = {k}");
        }
        // (1 - r)(1 - q r) = 1 - r - q r + q r^2
        let expected = BivariatePoly::from_terms([((0, 0), 1), ((0, 1), -1), ((1, 1), -1), ((1, 2), 1)]);
        assert_eq!(*q2_poly(0, 1).unwrap(), expected);
        let p = rat((2, 3, 5));
        assert_eq!(q2_eval(0, 1, &p).unwrap(), p.field().from_i64(10));
    }

    #[test]
    fn q2_exact_division_consistency() {
        let p = rat((2, -3, 5));
        for k in 0..5 {
            for m in 0..5 {
                let lhs = q2_eval(k, m, &p).unwrap() * q2_denominator_eval(k, m, &p);
                assert_eq!(lhs, q2_numerator_eval(k, m, &p), "k = {k}, m = {m}");
            }
        }
    }

    #[test]
    fn j_condition_examples() {
        let f3 = Field::prime(3).unwrap();
        let p = BraidingParams::shorthand(f3.from_i64(1), f3.from_i64(2), f3.from_i64(2)).unwrap();
        assert!(!j_condition(1, 0, &p));
        assert!(j_condition(3, 0, &p));
        let f2 = Field::prime(2).unwrap();
        let p2 = BraidingParams::shorthand(f2.one(), f2.one(), f2.one()).unwrap();
        assert!(!j_condition(2, 0, &p2));
        assert!(!j_condition(0, 0, &p2));
    }

    #[test]
    fn rejects_zero_entries() {
        let f = Field::prime(5).unwrap();
        assert_eq!(
            BraidingParams::shorthand(f.one(), f.zero(), f.one()),
            Err(Error::ZeroBraidingEntry("q12"))
        );
    }
}
