//! The elements `u_k`, `û_k`, `P_k`, `S(k,t)`, `L_n` and the identities
//! relating them.
//!
//! Elements of `U_m` are kept as coordinates `(λ_0, .., λ_m)` in the basis
//! `(-q21)^i û_i û_{m-i}`; the word expansion is derived from them.

use std::fmt;

use serde::Serialize;

use crate::braided::{ad_x1_pow, GradedElement, MultiDegree, Word};
use crate::error::{Error, Result};
use crate::exactfield::{Field, FieldElement};
use crate::jset::compute_j;
use crate::linalg::Matrix;
use crate::oracle::Oracle;
use crate::qcalc::{
    beta_coeff, factorial_b, lambda_coeff, pair_scalar, q_binom, q_int, require_hypothesis,
    unit_pow, BraidingParams,
};

/// Coordinates of an element of `U_m` in the basis `(-q21)^i û_i û_{m-i}`.
/// The empty vector stands for the zero element one level below `U_0`.
#[derive(Clone, PartialEq, Eq)]
pub struct UhatBasisVector {
    coords: Vec<FieldElement>,
}

impl UhatBasisVector {
    pub fn new(coords: Vec<FieldElement>) -> Self {
        UhatBasisVector { coords }
    }

    pub fn zero(field: &Field, m: usize) -> Self {
        UhatBasisVector { coords: vec![field.zero(); m + 1] }
    }

    /// `m` for a vector of `U_m`; `-1` for the empty vector.
    pub fn level(&self) -> isize {
        self.coords.len() as isize - 1
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(FieldElement::is_zero)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        UhatBasisVector { coords: self.coords.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.coords.len(), other.coords.len(), "level mismatch");
        UhatBasisVector {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    /// `λ_0 = λ_m = 0`, i.e. the element lies in `U'_m`.
    pub fn is_interior(&self) -> bool {
        match (self.coords.first(), self.coords.last()) {
            (Some(a), Some(b)) => a.is_zero() && b.is_zero(),
            _ => true,
        }
    }

    /// Word expansion; requires `(m)_q^! b_m != 0`.
    pub fn to_element(&self, params: &BraidingParams) -> Result<GradedElement> {
        let field = params.field();
        if self.coords.is_empty() {
            return Ok(GradedElement::zero(field));
        }
        let m = self.coords.len() - 1;
        require_hypothesis(m as u64, params)?;
        let mut out = GradedElement::zero(field);
        for (i, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&uhat_basis_element(m, i, params).scale(c));
            }
        }
        Ok(out)
    }

    /// Coordinates of `x` in `U_m`, read off triangularly from the words
    /// `x1^j x2 x1^(m-j) x2`; fails with [`Error::NotInUm`] if `x` is not in
    /// the span.
    pub fn from_element(x: &GradedElement, m: usize, params: &BraidingParams) -> Result<Self> {
        require_hypothesis(m as u64, params)?;
        let field = params.field();
        if x.is_zero() {
            return Ok(Self::zero(field, m));
        }
        if x.degree() != Some(MultiDegree::new(m, 2)) {
            return Err(Error::NotInUm { m });
        }
        let us: Vec<GradedElement> = (0..=m).map(|k| u_k(k, params)).collect();
        // c[i] is the coefficient of u_i u_{m-i}.
        let mut c = vec![field.zero(); m + 1];
        for j in (0..=m).rev() {
            let mut val = x.coeff(&leading_word(j, m));
            for (i, ci) in c.iter().enumerate().skip(j + 1) {
                let w = ones(j).concat(&Word::letter(2)).concat(&ones(i - j));
                val = val - ci * us[i].coeff(&w);
            }
            c[j] = val;
        }
        let mut rebuilt = GradedElement::zero(field);
        for (i, ci) in c.iter().enumerate() {
            if !ci.is_zero() {
                rebuilt = rebuilt.add(&us[i].mul(&us[m - i]).scale(ci));
            }
        }
        if rebuilt != *x {
            return Err(Error::NotInUm { m });
        }
        let minus_q21 = -params.q21();
        let coords = c
            .iter()
            .enumerate()
            .map(|(i, ci)| {
                ci * factorial_b(i as u64, params) * factorial_b((m - i) as u64, params)
                    / unit_pow(&minus_q21, i as i64)
            })
            .collect();
        Ok(UhatBasisVector { coords })
    }

    /// Same as [`from_element`](Self::from_element) by a dense linear solve
    /// over all words of degree `(m, 2)`.
    pub fn from_element_dense(x: &GradedElement, m: usize, params: &BraidingParams) -> Result<Self> {
        require_hypothesis(m as u64, params)?;
        let field = params.field();
        if x.is_zero() {
            return Ok(Self::zero(field, m));
        }
        if x.degree() != Some(MultiDegree::new(m, 2)) {
            return Err(Error::NotInUm { m });
        }
        let words = words_of_degree(m, 2);
        let columns: Vec<Vec<FieldElement>> = (0..=m)
            .map(|i| {
                let e = uhat_basis_element(m, i, params);
                words.iter().map(|w| e.coeff(w)).collect()
            })
            .collect();
        let a = Matrix::from_columns(field, words.len(), &columns);
        let b: Vec<FieldElement> = words.iter().map(|w| x.coeff(w)).collect();
        let sol = a.solve(&b).ok_or(Error::NotInUm { m })?;
        Ok(UhatBasisVector { coords: sol })
    }
}

impl fmt::Debug for UhatBasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

impl Serialize for UhatBasisVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coords.iter().map(ToString::to_string))
    }
}

fn ones(n: usize) -> Word {
    Word::from_letters(&vec![1; n])
}

/// `x1^j x2 x1^(m-j) x2`.
fn leading_word(j: usize, m: usize) -> Word {
    ones(j).concat(&Word::letter(2)).concat(&ones(m - j)).concat(&Word::letter(2))
}

/// All words with `a` letters 1 and `b` letters 2, in lexicographic order.
pub fn words_of_degree(a: usize, b: usize) -> Vec<Word> {
    fn go(a: usize, b: usize, prefix: Word, out: &mut Vec<Word>) {
        if a == 0 && b == 0 {
            out.push(prefix);
            return;
        }
        if a > 0 {
            go(a - 1, b, prefix.concat(&Word::letter(1)), out);
        }
        if b > 0 {
            go(a, b - 1, prefix.concat(&Word::letter(2)), out);
        }
    }
    let mut out = Vec::new();
    go(a, b, Word::empty(), &mut out);
    out
}

/// `u_0 = x2`, `u_k = x1 u_{k-1} - q^(k-1) q12 u_{k-1} x1`.
pub fn u_k(k: usize, params: &BraidingParams) -> GradedElement {
    let field = params.field();
    let x1 = GradedElement::generator(field, 1);
    let mut u = GradedElement::generator(field, 2);
    for j in 1..=k {
        let scalar = params.q_pow(j as i64 - 1) * params.q12();
        u = x1.mul(&u).sub(&u.mul(&x1).scale(&scalar));
    }
    u
}

/// `u_k / ((k)_q^! b_k)`, or zero when that scalar vanishes.
pub fn u_hat_k(k: usize, params: &BraidingParams) -> GradedElement {
    let n = factorial_b(k as u64, params);
    match n.inv() {
        Ok(inv) => u_k(k, params).scale(&inv),
        Err(_) => GradedElement::zero(params.field()),
    }
}

/// `(-q21)^i û_i û_{m-i}`.
pub fn uhat_basis_element(m: usize, i: usize, params: &BraidingParams) -> GradedElement {
    let w = unit_pow(&-params.q21(), i as i64);
    u_hat_k(i, params).mul(&u_hat_k(m - i, params)).scale(&w)
}

/// `P_k`: coordinates `q^(i(i-1)/2)`.
pub fn p_k(k: usize, params: &BraidingParams) -> Result<UhatBasisVector> {
    require_hypothesis(k as u64, params)?;
    let coords = (0..=k).map(|i| params.q_pow((i * i.saturating_sub(1) / 2) as i64)).collect();
    Ok(UhatBasisVector { coords })
}

/// `S(k, t)`: coordinates `q^((i-t)(i-t-1)/2) (i choose t)_q` for `i >= t`.
pub fn s_kt(k: usize, t: usize, params: &BraidingParams) -> Result<UhatBasisVector> {
    if t > k {
        return Err(Error::OutOfRange(format!("S(k, t) needs t <= k, got k = {k}, t = {t}")));
    }
    require_hypothesis(k as u64, params)?;
    let field = params.field();
    let q = params.q();
    let coords = (0..=k)
        .map(|i| {
            if i < t {
                field.zero()
            } else {
                let d = i - t;
                params.q_pow((d * d.saturating_sub(1) / 2) as i64) * q_binom(i as u64, t as u64, &q)
            }
        })
        .collect();
    Ok(UhatBasisVector { coords })
}

/// `q12^(-m) (ad x1)^m (P_k)` via the closed form
/// `sum_i (m)!/(m-i)! λ_(m-i,k) β_(i,m,k) S(k+m, i)`.
pub fn ad_p_closed_form(m: usize, k: usize, params: &BraidingParams) -> Result<UhatBasisVector> {
    require_hypothesis((k + m) as u64, params)?;
    let q = params.q();
    let mut acc = UhatBasisVector::zero(params.field(), k + m);
    for i in 0..=m {
        let falling = ((m - i + 1)..=m).fold(params.field().one(), |a, j| a * q_int(j as u64, &q));
        let scalar = falling
            * lambda_coeff((m - i) as u64, k as u64, params)
            * beta_coeff(i as u64, m as u64, k as u64, params);
        acc = acc.add(&s_kt(k + m, i, params)?.scale(&scalar));
    }
    Ok(acc)
}

fn level_of(v: &UhatBasisVector) -> Result<usize> {
    usize::try_from(v.level()).map_err(|_| Error::OutOfRange("empty coordinate vector".into()))
}

/// `d1` on `U_k`: coordinates `-q21 (λ_(i+1) - q^i λ_i)` at level `k - 1`.
pub fn d1_on_um(v: &UhatBasisVector, params: &BraidingParams) -> Result<UhatBasisVector> {
    let k = level_of(v)?;
    require_hypothesis(k as u64, params)?;
    let minus_q21 = -params.q21();
    let lam = &v.coords;
    let coords = (0..k)
        .map(|i| &minus_q21 * (&lam[i + 1] - params.q_pow(i as i64) * &lam[i]))
        .collect();
    Ok(UhatBasisVector { coords })
}

/// `d2` on `U_k` is a multiple of `û_k`; returns the scalar
/// `λ_0 + (-r)^k s λ_k`.
pub fn d2_on_um(v: &UhatBasisVector, params: &BraidingParams) -> Result<FieldElement> {
    let k = level_of(v)?;
    require_hypothesis(k as u64, params)?;
    let lam = &v.coords;
    Ok(&lam[0] + (-params.r()).pow(k as u64) * params.s() * &lam[k])
}

/// `sum_i q^(-i(i+1)/2) μ_i`; `w` has a `d1`-preimage in `U'_(k)` iff this
/// vanishes.
pub fn solvability_scalar(w: &UhatBasisVector, params: &BraidingParams) -> FieldElement {
    w.coords.iter().enumerate().fold(params.field().zero(), |acc, (i, mu)| {
        acc + params.q_pow(-((i * (i + 1) / 2) as i64)) * mu
    })
}

/// The unique interior `v` at level `k = level(w) + 1` with
/// `-q21^(-1) d1(v) = w`.
pub fn solve_d1(w: &UhatBasisVector, params: &BraidingParams) -> Result<UhatBasisVector> {
    let k = level_of(w)? + 1;
    require_hypothesis(k as u64, params)?;
    let sum = solvability_scalar(w, params);
    if !sum.is_zero() {
        return Err(Error::SolvabilityViolated(sum.to_string()));
    }
    let field = params.field();
    let mu = &w.coords;
    let coords: Vec<FieldElement> = (0..=k)
        .map(|i| {
            (0..i).fold(field.zero(), |acc, j| {
                let e = ((i + j) * (i - j - 1) / 2) as i64;
                acc + params.q_pow(e) * &mu[j]
            })
        })
        .collect();
    let v = UhatBasisVector { coords };
    if !v.is_interior() {
        return Err(Error::Postcondition("solution of d1 is not interior".into()));
    }
    let back = d1_on_um(&v, params)?.scale(&-params.q21().inv()?);
    if back != *w {
        return Err(Error::Postcondition("-q21^-1 d1(v) != w".into()));
    }
    Ok(v)
}

/// `L_n`: the interior element of `U_n` in the kernel with
/// `-q21^(-1) d1(L_n) = (ad x1)^(n-j_n-1)(P_(j_n))`.
pub fn l_n(n: usize, params: &BraidingParams, j_n: usize) -> Result<UhatBasisVector> {
    l_n_with_oracle(n, params, j_n, &Oracle::new(params))
}

pub(crate) fn l_n_with_oracle(
    n: usize,
    params: &BraidingParams,
    j_n: usize,
    oracle: &Oracle,
) -> Result<UhatBasisVector> {
    require_hypothesis(n as u64, params)?;
    let not_in_j2 = || Error::NotInJ2 { n, j_n };
    if j_n >= n || !pair_scalar(n, j_n, params).is_one() {
        return Err(not_in_j2());
    }
    let cls = compute_j(n, params);
    if !cls.j2().iter().any(|&(m, _)| m == n) || !cls.j1().contains(&j_n) {
        return Err(not_in_j2());
    }
    let m = n - j_n - 1;
    let target = ad_p_closed_form(m, j_n, params)?.scale(&params.q12().pow(m as u64));
    let v = solve_d1(&target, params)?;
    if !d2_on_um(&v, params)?.is_zero() {
        return Err(Error::Postcondition(format!("d2(L_{n}) != 0")));
    }
    if !oracle.in_kernel(&v.to_element(params)?)? {
        return Err(Error::Postcondition(format!("L_{n} is not in ker(pi)")));
    }
    Ok(v)
}

/// `(ad x1)^m (P_k)` at word level.
pub fn ad_p_words(m: usize, k: usize, params: &BraidingParams) -> Result<GradedElement> {
    ad_x1_pow(m, &p_k(k, params)?.to_element(params)?, params)
}
