//! Per-point consistency checks used by sweeps over parameter space.

use std::fmt;
use std::str::FromStr;

use crate::braided::{GradedElement, Word};
use crate::error::{Error, Result};
use crate::exactfield::Field;
use crate::jset::{compute_j, compute_j_via_clauses, multiplicity, non_root_table_check};
use crate::oracle::Oracle;
use crate::qcalc::{hypothesis_holds, BraidingParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Check {
    /// Kernel basis of `U_m` against the symmetrizer, plus structural
    /// properties of `J`.
    Main,
    /// Symmetrizer and derivation oracles agree.
    Oracles,
    /// Non-root table against the multiplicity formula.
    Table1,
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "main" => Ok(Check::Main),
            "oracles" => Ok(Check::Oracles),
            "table1" => Ok(Check::Table1),
            other => Err(format!("unknown check '{other}' (expected main, oracles or table1)")),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::Main => "main",
            Check::Oracles => "oracles",
            Check::Table1 => "table1",
        })
    }
}

#[derive(Clone, Debug)]
pub struct PointOutcome {
    pub params: BraidingParams,
    pub checked: usize,
    /// Cases skipped because `(m)_q^! b_m = 0`.
    pub skipped: usize,
    pub violations: Vec<String>,
}

/// Every `(q, r, s)` in `(F^×)^3`, in element order.
pub fn shorthand_points(field: &Field) -> Result<Vec<BraidingParams>> {
    let units = field
        .nonzero_elements()
        .ok_or_else(|| Error::OutOfRange(format!("{field} is not a small finite field")))?;
    let mut out = Vec::with_capacity(units.len().pow(3));
    for q in &units {
        for r in &units {
            for s in &units {
                out.push(BraidingParams::shorthand(q.clone(), r.clone(), s.clone())?);
            }
        }
    }
    Ok(out)
}

/// `|J ∩ [0,m]| <= m/3 + 1` and no two members at distance 1 or 2.
pub fn structural_violations(params: &BraidingParams, max_m: usize) -> Vec<String> {
    let mut out = Vec::new();
    let cls = compute_j(max_m, params);
    let j = cls.j_set();
    for m in 0..=max_m {
        let count = cls.count_upto(m);
        if 3 * count > m + 3 {
            out.push(format!("|J ∩ [0,{m}]| = {count} exceeds m/3 + 1"));
        }
    }
    for w in j.windows(2) {
        if w[1] - w[0] <= 2 {
            out.push(format!("J members {} and {} are too close", w[0], w[1]));
        }
    }
    out
}

pub fn check_point(check: Check, params: &BraidingParams, max_m: usize) -> PointOutcome {
    let mut outcome =
        PointOutcome { params: params.clone(), checked: 0, skipped: 0, violations: Vec::new() };
    match check {
        Check::Main => check_main(params, max_m, &mut outcome),
        Check::Oracles => check_oracles(params, max_m, &mut outcome),
        Check::Table1 => check_table1(params, &mut outcome),
    }
    outcome
}

fn check_main(params: &BraidingParams, max_m: usize, out: &mut PointOutcome) {
    let oracle = Oracle::new(params);
    out.violations.extend(structural_violations(params, max_m));
    let cls = compute_j(max_m, params);
    for m in 0..=max_m {
        if !hypothesis_holds(m as u64, params) {
            out.skipped += 1;
            continue;
        }
        out.checked += 1;
        if compute_j_via_clauses(m, params) != cls.truncate(m).j_set() {
            out.violations.push(format!("m = {m}: definition and characterisation disagree on J"));
        }
        for a in cls.truncate(m).anomalies() {
            out.violations.push(format!("m = {m}: classification anomaly {a:?}"));
        }
        match oracle.verify_main(m) {
            Ok(report) if report.matches_theorem => {}
            Ok(report) => out.violations.push(format!(
                "m = {m}: kernel dim {} vs |J| = {}, candidates {:?}, independent {}, errors {:?}",
                report.dim, report.j_count, report.candidates, report.independent, report.errors
            )),
            Err(e) => out.violations.push(format!("m = {m}: {e}")),
        }
    }
}

fn check_oracles(params: &BraidingParams, max_deg: usize, out: &mut PointOutcome) {
    let oracle = Oracle::new(params);
    let field = params.field();
    for total in 2..=max_deg {
        for a in 0..=total {
            let b = total - a;
            let sym = match oracle.symmetrizer(&[a, b]) {
                Ok(s) => s,
                Err(e) => {
                    out.violations.push(format!("({a},{b}): {e}"));
                    continue;
                }
            };
            let to_word = |letters: &[u8]| Word::from_letters(&letters.iter().map(|l| l + 1).collect::<Vec<_>>());
            let mut elements: Vec<GradedElement> =
                sym.basis().iter().map(|w| GradedElement::word(field, to_word(w))).collect();
            for v in sym.matrix().nullspace() {
                elements.push(GradedElement::from_terms(
                    field,
                    sym.basis().iter().zip(v).map(|(w, c)| (to_word(w), c)),
                ));
            }
            for x in elements {
                out.checked += 1;
                let by_sym = oracle.in_kernel(&x);
                let by_der = oracle.in_kernel_by_derivations(&x);
                if by_sym != by_der {
                    out.violations.push(format!("({a},{b}): oracles disagree on {x}"));
                }
            }
        }
    }
}

fn check_table1(params: &BraidingParams, out: &mut PointOutcome) {
    for m in [1, 2, 3, 4, 6] {
        if !hypothesis_holds(m as u64, params) {
            out.skipped += 1;
            continue;
        }
        out.checked += 1;
        match (multiplicity(m, params), non_root_table_check(m, params)) {
            (Ok(mult), Ok(table)) if (mult == 0) == table => {}
            (Ok(mult), Ok(table)) => out
                .violations
                .push(format!("m = {m}: multiplicity {mult} but table says non-root = {table}")),
            (a, b) => out.violations.push(format!("m = {m}: {a:?} / {b:?}")),
        }
    }
    out.violations.extend(structural_violations(params, 6));
}
