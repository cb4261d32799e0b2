//! The index set `J = J1 ⊔ J2` governing relations in degree `m α1 + 2 α2`,
//! multiplicities of those degrees and the non-root table.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcalc::{
    b_k, hypothesis_holds, j_condition, j_first_equation, pair_scalar, q_int, require_hypothesis,
    BraidingParams,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum JClass {
    J1,
    J2,
    /// Admitted by the definition but satisfying neither characterisation
    /// clause. Only possible when the factorial hypothesis fails; always
    /// accompanied by an [`Anomaly::Unclassified`].
    Unclassified,
}

/// How a member `j` relates to an earlier member `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairRecord {
    pub n: usize,
    /// The gap condition between `n` and `j` from the definition.
    pub condition: bool,
    /// `q^(n+j-1) r^2 = 1`.
    pub unit_pair: bool,
    /// The second characterisation clause holds for this `n`.
    pub second_clause: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JMember {
    pub j: usize,
    pub class: JClass,
    /// Preferred witness for `J2` members: the smallest `J1` member
    /// satisfying the second clause, falling back to the smallest member.
    pub witness: Option<usize>,
    /// Every earlier member satisfying the second clause.
    pub witnesses: Vec<usize>,
    pub first_equation_holds: bool,
    pub pairs: Vec<PairRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Anomaly {
    /// A member satisfies neither characterisation clause.
    Unclassified { j: usize },
    /// A `J2` member whose witnesses all lie outside `J1`.
    WitnessOutsideJ1 { j: usize },
    /// `b_j != 0` but the simplified divisibility test disagrees with the
    /// second clause.
    SimplifiedClauseDisagrees { j: usize, clause: bool, simplified: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JClassification {
    bound: usize,
    characteristic: u64,
    members: Vec<JMember>,
    anomalies: Vec<Anomaly>,
}

#[derive(Serialize)]
struct J2Json {
    n: usize,
    j_n: usize,
}

#[derive(Serialize)]
struct JClassificationJson {
    #[serde(rename = "J")]
    j: Vec<usize>,
    #[serde(rename = "J1")]
    j1: Vec<usize>,
    #[serde(rename = "J2")]
    j2: Vec<J2Json>,
    bound: usize,
}

impl JClassification {
    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn members(&self) -> &[JMember] {
        &self.members
    }

    pub fn anomalies(&self) -> &[Anomaly] {
        &self.anomalies
    }

    pub fn j_set(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.j).collect()
    }

    pub fn j1(&self) -> Vec<usize> {
        self.members.iter().filter(|m| m.class == JClass::J1).map(|m| m.j).collect()
    }

    /// `(n, j_n)` for every `J2` member.
    pub fn j2(&self) -> Vec<(usize, usize)> {
        self.members
            .iter()
            .filter(|m| m.class == JClass::J2)
            .map(|m| (m.j, m.witness.expect("J2 members carry a witness")))
            .collect()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.members.iter().any(|m| m.j == j)
    }

    pub fn member(&self, j: usize) -> Option<&JMember> {
        self.members.iter().find(|m| m.j == j)
    }

    /// `|J ∩ [0, m]|`.
    pub fn count_upto(&self, m: usize) -> usize {
        self.members.iter().filter(|x| x.j <= m).count()
    }

    /// The classification restricted to `[0, m]`.
    pub fn truncate(&self, m: usize) -> JClassification {
        JClassification {
            bound: m.min(self.bound),
            characteristic: self.characteristic,
            members: self.members.iter().filter(|x| x.j <= m).cloned().collect(),
            anomalies: self
                .anomalies
                .iter()
                .filter(|a| {
                    let j = match a {
                        Anomaly::Unclassified { j }
                        | Anomaly::WitnessOutsideJ1 { j }
                        | Anomaly::SimplifiedClauseDisagrees { j, .. } => *j,
                    };
                    j <= m
                })
                .cloned()
                .collect(),
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = JClassificationJson {
            j: self.j_set(),
            j1: self.j1(),
            j2: self.j2().into_iter().map(|(n, j_n)| J2Json { n, j_n }).collect(),
            bound: self.bound,
        };
        serde_json::to_value(doc).expect("plain data serialises")
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }
}

/// The second characterisation clause between `n < j`:
/// `q^(n+j-1) r^2 = 1` and `2p | (j-n)` for even gaps,
/// `q^((n+j-1)/2) r = -1` and `p | (j-n)` for odd gaps. In characteristic
/// zero the divisibility never holds.
pub fn second_clause(j: usize, n: usize, params: &BraidingParams) -> bool {
    if n >= j {
        return false;
    }
    let p = params.field().characteristic();
    if p == 0 {
        return false;
    }
    let t = (j - n) as u64;
    if t.is_multiple_of(2) {
        pair_scalar(j, n, params).is_one() && t.is_multiple_of(2 * p)
    } else {
        let half = ((n + j - 1) / 2) as i64;
        let x = params.q_pow(half) * params.r();
        x == -params.field().one() && t.is_multiple_of(p)
    }
}

/// The simplified form of the second clause valid when `b_j != 0`:
/// `q^(n+j-1) r^2 = 1` and `p | (j-n)` (odd `p`) or `4 | (j-n)` (`p = 2`).
fn simplified_second_clause(j: usize, n: usize, params: &BraidingParams) -> bool {
    let p = params.field().characteristic();
    let t = (j - n) as u64;
    let divides = match p {
        0 => false,
        2 => t.is_multiple_of(4),
        _ => t.is_multiple_of(p),
    };
    divides && pair_scalar(j, n, params).is_one()
}

/// `J ∩ [0, m_max]`, built incrementally from the definition and then
/// classified.
pub fn compute_j(m_max: usize, params: &BraidingParams) -> JClassification {
    let mut members: Vec<JMember> = Vec::new();
    let mut anomalies = Vec::new();
    for j in 0..=m_max {
        let first = j_first_equation(j, params);
        if !first {
            continue;
        }
        let pairs: Vec<PairRecord> = members
            .iter()
            .map(|m| PairRecord {
                n: m.j,
                condition: j_condition(j, m.j, params),
                unit_pair: pair_scalar(j, m.j, params).is_one(),
                second_clause: second_clause(j, m.j, params),
            })
            .collect();
        if !pairs.iter().all(|p| p.condition) {
            continue;
        }
        let first_clause = pairs.iter().all(|p| !p.unit_pair);
        let witnesses: Vec<usize> = pairs.iter().filter(|p| p.second_clause).map(|p| p.n).collect();
        let class = if first_clause {
            JClass::J1
        } else if !witnesses.is_empty() {
            JClass::J2
        } else {
            anomalies.push(Anomaly::Unclassified { j });
            JClass::Unclassified
        };
        let mut witness = None;
        if class == JClass::J2 {
            let in_j1 = witnesses
                .iter()
                .copied()
                .find(|n| members.iter().any(|m| m.j == *n && m.class == JClass::J1));
            if in_j1.is_none() {
                anomalies.push(Anomaly::WitnessOutsideJ1 { j });
            }
            witness = in_j1.or_else(|| witnesses.first().copied());
        }
        if !b_k(j as u64, params).is_zero() {
            let clause = !witnesses.is_empty();
            let simplified = pairs.iter().any(|p| simplified_second_clause(j, p.n, params));
            if clause != simplified {
                anomalies.push(Anomaly::SimplifiedClauseDisagrees { j, clause, simplified });
            }
        }
        members.push(JMember { j, class, witness, witnesses, first_equation_holds: first, pairs });
    }
    JClassification {
        bound: m_max,
        characteristic: params.field().characteristic(),
        members,
        anomalies,
    }
}

/// Membership built from the two characterisation clauses instead of the
/// definition: `j` is admitted iff clause (1) or clause (2) holds against
/// the members admitted so far.
pub fn compute_j_via_clauses(m_max: usize, params: &BraidingParams) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for j in 0..=m_max {
        let first = j_first_equation(j, params) && out.iter().all(|&n| !pair_scalar(j, n, params).is_one());
        let second = out.iter().any(|&n| second_clause(j, n, params));
        if first || second {
            out.push(j);
        }
    }
    out
}

/// `m'` in the multiplicity formula.
pub fn m_prime(m: usize, params: &BraidingParams) -> usize {
    if m % 2 == 1 {
        m.div_ceil(2)
    } else {
        let e = (m * m / 4) as i64;
        let lhs = params.q_pow(e) * params.r().pow((m / 2) as u64) * params.s();
        if lhs == -params.field().one() {
            m / 2 + 1
        } else {
            m / 2
        }
    }
}

/// Multiplicity of `m α1 + 2 α2`: `m' - |J ∩ [0, m]|`.
pub fn multiplicity(m: usize, params: &BraidingParams) -> Result<usize> {
    require_hypothesis(m as u64, params)?;
    let count = compute_j(m, params).count_upto(m);
    m_prime(m, params).checked_sub(count).ok_or_else(|| {
        Error::Postcondition(format!("|J ∩ [0,{m}]| = {count} exceeds m' = {}", m_prime(m, params)))
    })
}

/// Whether `[x1^k x2 x1^l x2]` is a root vector: `|J ∩ [0, k+l]| <= l`.
pub fn root_vector_criterion(k: usize, l: usize, params: &BraidingParams) -> Result<bool> {
    if k < l {
        return Err(Error::OutOfRange(format!("need k >= l, got k = {k}, l = {l}")));
    }
    require_hypothesis((k + l) as u64, params)?;
    if k == l {
        let lhs = params.q_pow((k * k) as i64) * params.r().pow(k as u64) * params.s();
        if lhs != -params.field().one() {
            return Err(Error::HypothesisViolated(format!("q^{} r^{k} s != -1", k * k)));
        }
    }
    Ok(compute_j(k + l, params).count_upto(k + l) <= l)
}

/// Evaluates the non-root condition for `m ∈ {1, 2, 3, 4, 6}`.
pub fn non_root_table_check(m: usize, params: &BraidingParams) -> Result<bool> {
    if ![1, 2, 3, 4, 6].contains(&m) {
        return Err(Error::UnsupportedM(m));
    }
    require_hypothesis(m as u64, params)?;
    let f = params.field();
    let one = f.one();
    let q = params.q();
    let r = params.r();
    let s = params.s();
    let s_minus_one = s == -one.clone();
    let rs_one = (&r * &s).is_one();
    let three_vanishes = |base| q_int(3, &base).is_zero();
    Ok(match m {
        1 => s_minus_one || rs_one,
        2 => s_minus_one || rs_one || (&q * &r * &r * &s) == -one.clone(),
        3 => s_minus_one && three_vanishes(-(&q * &r)),
        4 => {
            (s_minus_one && three_vanishes(-(&q * &r)))
                || (s_minus_one && (q.pow(3) * &r * &r) == -one.clone())
                || (rs_one && three_vanishes(-(q.pow(2) * &r)))
        }
        6 => q.is_one() && s_minus_one && three_vanishes(-r.clone()),
        _ => unreachable!(),
    })
}

/// `(m)_q^! b_m != 0`, exposed for sweep drivers deciding which checks apply.
pub fn classification_hypothesis(m: usize, params: &BraidingParams) -> bool {
    hypothesis_holds(m as u64, params)
}
