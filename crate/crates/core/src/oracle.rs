//! Ground truth for `ker(π)`: the quantum symmetrizer on each multidegree
//! component, a recursive skew-derivation test, and verification of the
//! kernel basis of `U_m`.
//!
//! The word engine here is rank-generic (letters `0..n`); the rank-2
//! algebra of [`crate::braided`] maps letter `i` to `i - 1`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use serde::Serialize;

use crate::braided::{ad_x1_pow, skew_derive, GradedElement, MultiDegree};
use crate::error::{Error, Result};
use crate::exactfield::{Field, FieldElement};
use crate::jset::compute_j;
use crate::linalg::{rank_of_vectors, Matrix};
use crate::qcalc::{require_hypothesis, BraidingParams};
use crate::rootvec::{l_n_with_oracle, p_k, uhat_basis_element, UhatBasisVector};

/// Largest total degree the symmetrizer oracle will build.
pub const DEGREE_CEILING: usize = 14;

/// Diagonal braiding `c(x_i ⊗ x_j) = q_ij x_j ⊗ x_i` of any rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidingMatrix {
    field: Field,
    entries: Vec<Vec<FieldElement>>,
}

impl BraidingMatrix {
    pub fn new(entries: Vec<Vec<FieldElement>>) -> Result<Self> {
        let n = entries.len();
        let first = entries
            .first()
            .and_then(|row| row.first())
            .ok_or_else(|| Error::Malformed("empty braiding matrix".into()))?;
        let field = first.field().clone();
        for row in &entries {
            if row.len() != n {
                return Err(Error::Malformed("braiding matrix is not square".into()));
            }
            for x in row {
                if x.field() != &field {
                    return Err(Error::Malformed("braiding entries over different fields".into()));
                }
                if x.is_zero() {
                    return Err(Error::ZeroBraidingEntry("q_ij"));
                }
            }
        }
        Ok(BraidingMatrix { field, entries })
    }

    pub fn from_params(params: &BraidingParams) -> Self {
        let entries =
            (1..=2).map(|i| (1..=2).map(|j| params.entry(i, j).clone()).collect()).collect();
        BraidingMatrix { field: params.field().clone(), entries }
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `q_ij` with 0-based letters.
    pub fn get(&self, i: u8, j: u8) -> &FieldElement {
        &self.entries[i as usize][j as usize]
    }
}

/// All words with `degree[l]` copies of letter `l`, in lexicographic order.
pub fn words_with_degree(degree: &[usize]) -> Vec<Vec<u8>> {
    fn go(remaining: &mut [usize], prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if remaining.iter().all(|&c| c == 0) {
            out.push(prefix.clone());
            return;
        }
        for l in 0..remaining.len() {
            if remaining[l] > 0 {
                remaining[l] -= 1;
                prefix.push(l as u8);
                go(remaining, prefix, out);
                prefix.pop();
                remaining[l] += 1;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut degree.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// Symmetrizer restricted to one multidegree component.
/// `matrix[row][col]` is the coefficient of `basis[row]` in `S(basis[col])`.
#[derive(Clone, Debug)]
pub struct SymmetrizerMatrix {
    degree: Vec<usize>,
    basis: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    matrix: Matrix,
}

impl SymmetrizerMatrix {
    fn with_basis(field: &Field, degree: &[usize]) -> (Vec<Vec<u8>>, HashMap<Vec<u8>, usize>, Matrix) {
        let basis = words_with_degree(degree);
        let index = basis.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let n = basis.len();
        (basis, index, Matrix::zeros(field, n, n))
    }

    pub fn degree(&self) -> &[usize] {
        &self.degree
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }

    pub fn index_of(&self, word: &[u8]) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}

/// `c_i` on a multidegree component: basis index `k` maps to
/// `scalar * basis[target]`.
#[derive(Clone, Debug)]
pub struct BraidingOp {
    position: usize,
    map: Vec<(usize, FieldElement)>,
}

impl BraidingOp {
    pub fn position(&self) -> usize {
        self.position
    }

    pub fn image(&self, k: usize) -> (usize, &FieldElement) {
        let (t, ref c) = self.map[k];
        (t, c)
    }

    pub fn apply(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let field = v.first().map(|x| x.field().clone());
        let mut out: Vec<FieldElement> = match field {
            Some(f) => vec![f.zero(); v.len()],
            None => return Vec::new(),
        };
        for (k, x) in v.iter().enumerate() {
            if !x.is_zero() {
                let (t, c) = &self.map[k];
                out[*t] = &out[*t] + &(c * x);
            }
        }
        out
    }

    pub fn to_matrix(&self, field: &Field) -> Matrix {
        let n = self.map.len();
        let mut m = Matrix::zeros(field, n, n);
        for (k, (t, c)) in self.map.iter().enumerate() {
            m.set(*t, k, c.clone());
        }
        m
    }
}

/// `c_i` (1-based `i`) on the span of `basis`, which must be closed under
/// adjacent swaps.
pub fn braiding_op(i: usize, basis: &[Vec<u8>], braiding: &BraidingMatrix) -> Result<BraidingOp> {
    let n = basis.first().map_or(0, Vec::len);
    if i == 0 || i >= n {
        return Err(Error::OutOfRange(format!("c_{i} on words of length {n}")));
    }
    let index: HashMap<&[u8], usize> = basis.iter().enumerate().map(|(k, w)| (w.as_slice(), k)).collect();
    let map = basis
        .iter()
        .map(|w| {
            let (a, b) = (w[i - 1], w[i]);
            let mut swapped = w.clone();
            swapped.swap(i - 1, i);
            let t = *index.get(swapped.as_slice()).expect("basis closed under swaps");
            (t, braiding.get(a, b).clone())
        })
        .collect();
    Ok(BraidingOp { position: i, map })
}

/// Sum over all permutations of the braided permutation operators, each
/// taken along a reduced expression obtained by bubble sort. Only meant as a
/// cross-check for small lengths.
pub fn naive_symmetrizer(degree: &[usize], braiding: &BraidingMatrix) -> Result<SymmetrizerMatrix> {
    let n: usize = degree.iter().sum();
    if n > 8 {
        return Err(Error::OutOfRange(format!("naive symmetrizer limited to length 8, got {n}")));
    }
    let field = braiding.field().clone();
    let (basis, index, mut matrix) = SymmetrizerMatrix::with_basis(&field, degree);
    let ops: Vec<BraidingOp> = (1..n).map(|i| braiding_op(i, &basis, braiding)).collect::<Result<_>>()?;
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let swaps = bubble_sort_swaps(&perm);
        for col in 0..basis.len() {
            let mut k = col;
            let mut c = field.one();
            for &s in &swaps {
                let (t, x) = ops[s - 1].image(k);
                c = c * x;
                k = t;
            }
            let v = matrix.get(k, col) + &c;
            matrix.set(k, col, v);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(SymmetrizerMatrix { degree: degree.to_vec(), basis, index, matrix })
}

/// Adjacent transpositions (1-based) that sort `perm`; their number equals
/// the inversion count, so the sequence is a reduced expression.
fn bubble_sort_swaps(perm: &[usize]) -> Vec<usize> {
    let mut p = perm.to_vec();
    let mut out = Vec::new();
    for end in (1..p.len()).rev() {
        for i in 0..end {
            if p[i] > p[i + 1] {
                p.swap(i, i + 1);
                out.push(i + 1);
            }
        }
    }
    out
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot has a successor");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateVerdict {
    pub label: String,
    pub in_kernel: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub m: usize,
    pub dim: usize,
    pub candidates: Vec<CandidateVerdict>,
    pub independent: bool,
    pub matches_theorem: bool,
    /// `|J ∩ [0, m]|`.
    #[serde(skip)]
    pub j_count: usize,
    /// Failures met while building candidates.
    #[serde(skip)]
    pub errors: Vec<String>,
}

impl KernelReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serialises")
    }
}

/// `ker(π) ∩ U_m` in û-coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelSubspace {
    pub dim: usize,
    pub basis: Vec<UhatBasisVector>,
}

/// Caches symmetrizer components and derivation verdicts for one braiding.
pub struct Oracle {
    braiding: BraidingMatrix,
    params: Option<BraidingParams>,
    symmetrizers: RwLock<HashMap<Vec<usize>, Arc<SymmetrizerMatrix>>>,
    derivation_memo: Mutex<HashMap<GradedElement, bool>>,
}

impl Oracle {
    pub fn new(params: &BraidingParams) -> Self {
        Oracle {
            braiding: BraidingMatrix::from_params(params),
            params: Some(params.clone()),
            symmetrizers: RwLock::default(),
            derivation_memo: Mutex::default(),
        }
    }

    /// Oracle for an arbitrary-rank braiding; only the symmetrizer methods
    /// are available.
    pub fn with_braiding(braiding: BraidingMatrix) -> Self {
        Oracle {
            braiding,
            params: None,
            symmetrizers: RwLock::default(),
            derivation_memo: Mutex::default(),
        }
    }

    pub fn braiding(&self) -> &BraidingMatrix {
        &self.braiding
    }

    fn params(&self) -> Result<&BraidingParams> {
        self.params
            .as_ref()
            .ok_or_else(|| Error::Malformed("operation needs a rank-2 braiding".into()))
    }

    /// Recursive symmetrizer `S_n = (S_(n-1) ⊗ id)(id + c_(n-1) + ... +
    /// c_(n-1)...c_1)` on one component.
    pub fn symmetrizer(&self, degree: &[usize]) -> Result<Arc<SymmetrizerMatrix>> {
        if degree.len() != self.braiding.rank() {
            return Err(Error::Malformed(format!(
                "multidegree has {} entries, braiding has rank {}",
                degree.len(),
                self.braiding.rank()
            )));
        }
        let total: usize = degree.iter().sum();
        if total > DEGREE_CEILING {
            return Err(Error::DegreeCeiling(total));
        }
        if let Some(s) = self.symmetrizers.read().expect("cache lock").get(degree) {
            return Ok(s.clone());
        }
        let built = Arc::new(self.build_symmetrizer(degree)?);
        self.symmetrizers.write().expect("cache lock").entry(degree.to_vec()).or_insert(built.clone());
        Ok(built)
    }

    fn build_symmetrizer(&self, degree: &[usize]) -> Result<SymmetrizerMatrix> {
        let field = self.braiding.field().clone();
        let total: usize = degree.iter().sum();
        let (basis, index, mut matrix) = SymmetrizerMatrix::with_basis(&field, degree);
        if total <= 1 {
            for i in 0..basis.len() {
                matrix.set(i, i, field.one());
            }
            return Ok(SymmetrizerMatrix { degree: degree.to_vec(), basis, index, matrix });
        }
        let mut subs: Vec<Option<Arc<SymmetrizerMatrix>>> = vec![None; degree.len()];
        for (col, w) in basis.iter().enumerate() {
            for k in 0..w.len() {
                let l = w[k];
                let scalar = w[k + 1..].iter().fold(field.one(), |acc, &b| acc * self.braiding.get(l, b));
                let sub = match &subs[l as usize] {
                    Some(s) => s.clone(),
                    None => {
                        let mut d = degree.to_vec();
                        d[l as usize] -= 1;
                        let s = self.symmetrizer(&d)?;
                        subs[l as usize] = Some(s.clone());
                        s
                    }
                };
                let mut rest = w.clone();
                rest.remove(k);
                let sub_col = sub.index[&rest];
                for (row, word) in sub.basis.iter().enumerate() {
                    let e = sub.matrix.get(row, sub_col);
                    if e.is_zero() {
                        continue;
                    }
                    let mut target = word.clone();
                    target.push(l);
                    let t = index[&target];
                    let v = matrix.get(t, col) + &(&scalar * e);
                    matrix.set(t, col, v);
                }
            }
        }
        Ok(SymmetrizerMatrix { degree: degree.to_vec(), basis, index, matrix })
    }

    /// `dim B(V)_α`, the rank of the symmetrizer on that component.
    pub fn nichols_dim(&self, degree: &[usize]) -> Result<usize> {
        Ok(self.symmetrizer(degree)?.rank())
    }

    fn coefficient_vector(&self, x: &GradedElement, sym: &SymmetrizerMatrix) -> Vec<FieldElement> {
        let mut v = vec![x.field().zero(); sym.basis.len()];
        for (w, c) in x.terms() {
            let letters: Vec<u8> = w.letters().iter().map(|l| l - 1).collect();
            v[sym.index[&letters]] = c.clone();
        }
        v
    }

    fn homogeneous_degree(x: &GradedElement) -> Result<MultiDegree> {
        x.degree().ok_or(Error::NonHomogeneous)
    }

    /// Symmetrizer test: `S v = 0`.
    pub fn in_kernel(&self, x: &GradedElement) -> Result<bool> {
        if x.is_zero() {
            return Ok(true);
        }
        let d = Self::homogeneous_degree(x)?;
        let sym = self.symmetrizer(&[d.a, d.b])?;
        let v = self.coefficient_vector(x, &sym);
        Ok(sym.matrix.mul_vec(&v).iter().all(FieldElement::is_zero))
    }

    /// Derivation test: `x ∈ ker π` iff `d1(x)` and `d2(x)` are, with
    /// nonzero elements of degree at most one never in the kernel.
    pub fn in_kernel_by_derivations(&self, x: &GradedElement) -> Result<bool> {
        let params = self.params()?.clone();
        if x.is_zero() {
            return Ok(true);
        }
        Self::homogeneous_degree(x)?;
        Ok(self.derivation_verdict(x, &params))
    }

    fn derivation_verdict(&self, x: &GradedElement, params: &BraidingParams) -> bool {
        if x.is_zero() {
            return true;
        }
        let total = x.degree().map_or(0, |d| d.total());
        if total <= 1 {
            return false;
        }
        if let Some(&v) = self.derivation_memo.lock().expect("memo lock").get(x) {
            return v;
        }
        let verdict = self.derivation_verdict(&skew_derive(1, x, params), params)
            && self.derivation_verdict(&skew_derive(2, x, params), params);
        self.derivation_memo.lock().expect("memo lock").insert(x.clone(), verdict);
        verdict
    }

    /// `ker(π) ∩ U_m` via the symmetrizer applied to the û-basis of `U_m`.
    pub fn ker_cap_um(&self, m: usize) -> Result<KernelSubspace> {
        let params = self.params()?.clone();
        require_hypothesis(m as u64, &params)?;
        let sym = self.symmetrizer(&[m, 2])?;
        let columns: Vec<Vec<FieldElement>> = (0..=m)
            .map(|i| sym.matrix.mul_vec(&self.coefficient_vector(&uhat_basis_element(m, i, &params), &sym)))
            .collect();
        let a = Matrix::from_columns(params.field(), sym.basis.len(), &columns);
        let basis: Vec<UhatBasisVector> = a.nullspace().into_iter().map(UhatBasisVector::new).collect();
        Ok(KernelSubspace { dim: basis.len(), basis })
    }

    /// Builds the predicted kernel basis of `U_m` and checks it against the
    /// symmetrizer.
    pub fn verify_main(&self, m: usize) -> Result<KernelReport> {
        let params = self.params()?.clone();
        require_hypothesis(m as u64, &params)?;
        let cls = compute_j(m, &params);
        let dim = self.ker_cap_um(m)?.dim;
        let mut candidates = Vec::new();
        let mut coords = Vec::new();
        let mut errors = Vec::new();
        for j in cls.j1() {
            let label = format!("adP({},{j})", m - j);
            let built = p_k(j, &params).and_then(|p| ad_x1_pow(m - j, &p.to_element(&params)?, &params));
            self.judge(label, built, m, &params, &mut candidates, &mut coords, &mut errors);
        }
        for (n, j_n) in cls.j2() {
            let label = if n == m { format!("L({n})") } else { format!("adL({},{n})", m - n) };
            let built = l_n_with_oracle(n, &params, j_n, self)
                .and_then(|l| ad_x1_pow(m - n, &l.to_element(&params)?, &params));
            self.judge(label, built, m, &params, &mut candidates, &mut coords, &mut errors);
        }
        let independent = coords.len() == candidates.len()
            && rank_of_vectors(params.field(), &coords) == coords.len();
        let j_count = cls.count_upto(m);
        let matches_theorem = dim == j_count
            && candidates.iter().all(|c| c.in_kernel)
            && independent
            && candidates.len() == dim;
        Ok(KernelReport { m, dim, candidates, independent, matches_theorem, j_count, errors })
    }

    #[allow(clippy::too_many_arguments)]
    fn judge(
        &self,
        label: String,
        built: Result<GradedElement>,
        m: usize,
        params: &BraidingParams,
        candidates: &mut Vec<CandidateVerdict>,
        coords: &mut Vec<Vec<FieldElement>>,
        errors: &mut Vec<String>,
    ) {
        let x = match built {
            Ok(x) => x,
            Err(e) => {
                errors.push(format!("{label}: {e}"));
                candidates.push(CandidateVerdict { label, in_kernel: false });
                return;
            }
        };
        let in_kernel = match self.in_kernel(&x) {
            Ok(v) => v,
            Err(e) => {
                errors.push(format!("{label}: {e}"));
                false
            }
        };
        match UhatBasisVector::from_element(&x, m, params) {
            Ok(v) => coords.push(v.coords().to_vec()),
            Err(e) => errors.push(format!("{label}: {e}")),
        }
        candidates.push(CandidateVerdict { label, in_kernel });
    }
}

pub fn symmetrizer(degree: MultiDegree, params: &BraidingParams) -> Result<Arc<SymmetrizerMatrix>> {
    Oracle::new(params).symmetrizer(&[degree.a, degree.b])
}

pub fn nichols_dim(degree: MultiDegree, params: &BraidingParams) -> Result<usize> {
    Oracle::new(params).nichols_dim(&[degree.a, degree.b])
}

pub fn in_kernel(x: &GradedElement, params: &BraidingParams) -> Result<bool> {
    Oracle::new(params).in_kernel(x)
}

pub fn in_kernel_by_derivations(x: &GradedElement, params: &BraidingParams) -> Result<bool> {
    Oracle::new(params).in_kernel_by_derivations(x)
}

pub fn ker_cap_um(m: usize, params: &BraidingParams) -> Result<KernelSubspace> {
    Oracle::new(params).ker_cap_um(m)
}

pub fn verify_main(m: usize, params: &BraidingParams) -> Result<KernelReport> {
    Oracle::new(params).verify_main(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braided::Word;
    use crate::exactfield::parse_field_spec;
    use crate::rootvec::{u_k, ad_p_words};

    fn params(field: &str, q: &str, r: &str, s: &str) -> BraidingParams {
        let f = parse_field_spec(field).unwrap();
        BraidingParams::shorthand(
            f.parse_element(q).unwrap(),
            f.parse_element(r).unwrap(),
            f.parse_element(s).unwrap(),
        )
        .unwrap()
    }

    fn general() -> BraidingParams {
        let f = Field::rationals();
        BraidingParams::new(f.from_i64(2), f.from_i64(3), f.from_i64(5), f.from_i64(7)).unwrap()
    }

    #[test]
    fn braiding_op_examples() {
        let p = general();
        let b = BraidingMatrix::from_params(&p);
        let basis = words_with_degree(&[1, 1]);
        assert_eq!(basis, [vec![0, 1], vec![1, 0]]);
        let c1 = braiding_op(1, &basis, &b).unwrap();
        assert_eq!(c1.image(0), (1, p.q12()));
        let v = vec![p.field().one(), p.field().zero()];
        let twice = c1.apply(&c1.apply(&v));
        assert_eq!(twice[0], p.r());
        assert!(twice[1].is_zero());
        assert!(matches!(braiding_op(0, &basis, &b), Err(Error::OutOfRange(_))));
        assert!(matches!(braiding_op(2, &basis, &b), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn braid_relation() {
        let p = general();
        let b = BraidingMatrix::from_params(&p);
        let basis = words_with_degree(&[2, 1]);
        let f = p.field();
        let c1 = braiding_op(1, &basis, &b).unwrap().to_matrix(f);
        let c2 = braiding_op(2, &basis, &b).unwrap().to_matrix(f);
        assert_eq!(c1.mul(&c2).mul(&c1), c2.mul(&c1).mul(&c2));
    }

    #[test]
    fn small_symmetrizers() {
        let p = general();
        let s = symmetrizer(MultiDegree::new(1, 1), &p).unwrap();
        let m = s.matrix();
        assert_eq!(m.get(0, 0), &p.field().one());
        assert_eq!(m.get(0, 1), p.q21());
        assert_eq!(m.get(1, 0), p.q12());
        assert_eq!(m.get(1, 1), &p.field().one());
        let s = symmetrizer(MultiDegree::new(0, 2), &p).unwrap();
        assert_eq!(s.matrix().get(0, 0), &(p.field().one() + p.s()));
    }

    #[test]
    fn recursive_matches_naive() {
        let p = general();
        let b = BraidingMatrix::from_params(&p);
        let oracle = Oracle::new(&p);
        for d in [[2, 2], [3, 1], [1, 3], [2, 3], [4, 2]] {
            let naive = naive_symmetrizer(&d, &b).unwrap();
            assert_eq!(oracle.symmetrizer(&d).unwrap().matrix(), naive.matrix(), "{d:?}");
        }
    }

    #[test]
    fn rank_three_symmetrizer() {
        let f = Field::prime(7).unwrap();
        let entries = (0..3)
            .map(|i| (0..3).map(|j| f.from_i64(((i * 3 + j) % 6 + 1) as i64)).collect())
            .collect();
        let b = BraidingMatrix::new(entries).unwrap();
        let oracle = Oracle::with_braiding(b.clone());
        let d = [1, 2, 1];
        assert_eq!(oracle.symmetrizer(&d).unwrap().matrix(), naive_symmetrizer(&d, &b).unwrap().matrix());
        assert!(oracle.in_kernel_by_derivations(&GradedElement::generator(&f, 1)).is_err());
    }

    #[test]
    fn nichols_dim_examples() {
        assert_eq!(nichols_dim(MultiDegree::new(0, 2), &params("Q", "2", "3", "-1")), Ok(0));
        assert_eq!(nichols_dim(MultiDegree::new(0, 2), &params("Q", "2", "3", "5")), Ok(1));
        assert_eq!(nichols_dim(MultiDegree::new(1, 1), &params("Q", "2", "1", "5")), Ok(1));
        assert_eq!(nichols_dim(MultiDegree::new(1, 1), &params("Q", "2", "3", "5")), Ok(2));
        assert_eq!(nichols_dim(MultiDegree::new(2, 0), &params("Q", "-1", "3", "5")), Ok(0));
        assert_eq!(nichols_dim(MultiDegree::new(15, 0), &params("Q", "2", "3", "5")), Err(Error::DegreeCeiling(15)));
    }

    #[test]
    fn in_kernel_examples() {
        let p = params("Q", "2", "3", "-1");
        let f = p.field().clone();
        let x1 = GradedElement::generator(&f, 1);
        assert_eq!(in_kernel(&x1, &p), Ok(false));
        assert_eq!(in_kernel_by_derivations(&x1, &p), Ok(false));
        let p0 = GradedElement::word(&f, Word::from_letters(&[2, 2]));
        assert_eq!(in_kernel(&p0, &p), Ok(true));
        assert_eq!(in_kernel_by_derivations(&p0, &p), Ok(true));
        let mixed = x1.add(&p0);
        assert_eq!(in_kernel(&mixed, &p), Err(Error::NonHomogeneous));
    }

    #[test]
    fn u_k_never_in_kernel_over_f5() {
        let f = Field::prime(5).unwrap();
        for q in f.nonzero_elements().unwrap() {
            for r in f.nonzero_elements().unwrap() {
                let p = BraidingParams::shorthand(q.clone(), r.clone(), f.from_i64(2)).unwrap();
                let oracle = Oracle::new(&p);
                for k in 0..=5 {
                    if crate::qcalc::hypothesis_holds(k, &p) {
                        assert_eq!(oracle.in_kernel(&u_k(k as usize, &p)), Ok(false));
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_of_um_examples() {
        assert_eq!(ker_cap_um(0, &params("Q", "2", "3", "-1")).unwrap().dim, 1);
        assert_eq!(ker_cap_um(0, &params("Q", "2", "3", "5")).unwrap().dim, 0);
        let p = params("Q", "2", "3", "-1");
        let k = ker_cap_um(2, &p).unwrap();
        assert_eq!(k.dim, 1);
        let ad = ad_p_words(2, 0, &p).unwrap();
        let v = UhatBasisVector::from_element(&ad, 2, &p).unwrap();
        assert_eq!(rank_of_vectors(p.field(), &[k.basis[0].coords().to_vec(), v.coords().to_vec()]), 1);
    }

    #[test]
    fn verify_main_examples() {
        let p = params("ext:Fp:3:1,0,1", "t", "t", "-1");
        let report = verify_main(3, &p).unwrap();
        assert_eq!(
            report.to_json(),
            r#"{"m":3,"dim":2,"candidates":[{"label":"adP(3,0)","in_kernel":true},{"label":"L(3)","in_kernel":true}],"independent":true,"matches_theorem":true}"#
        );
        let p = params("Q", "2", "3", "5");
        let report = verify_main(3, &p).unwrap();
        assert!(report.candidates.is_empty());
        assert_eq!(report.dim, 0);
        assert!(report.matches_theorem);
        let p = params("Fp:3", "1", "2", "2");
        assert!(matches!(verify_main(3, &p), Err(Error::HypothesisViolated(_))));
    }
}
