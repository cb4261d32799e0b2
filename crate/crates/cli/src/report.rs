//! Text rendering and serialisable summaries for the subcommands.

use std::fmt::Write as _;

use nichols_core::jset::{m_prime, Anomaly};
use nichols_core::qcalc::hypothesis_holds;
use nichols_core::sweep::{Check, PointOutcome};
use nichols_core::{multiplicity, non_root_table_check, BraidingParams, Error, Field, JClassification, KernelReport};
use serde::Serialize;

/// Result of one run: exit code plus an optional message for stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    code: u8,
    message: Option<String>,
}

impl Outcome {
    pub fn ok() -> Self {
        Outcome { code: 0, message: None }
    }

    pub fn failed() -> Self {
        Outcome { code: 1, message: None }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Outcome { code: 2, message: Some(message.into()) }
    }

    pub fn code(&self) -> u8 {
        self.code
    }

    pub fn message(&self) -> Option<&str> {
        self.message.as_deref()
    }
}

fn list(xs: impl IntoIterator<Item = impl ToString>) -> String {
    let items: Vec<String> = xs.into_iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

pub fn jset_text(cls: &JClassification) -> String {
    let mut out = String::new();
    let b = cls.bound();
    let _ = writeln!(out, "J  ∩ [0,{b}] = {}", list(cls.j_set()));
    let _ = writeln!(out, "J1 ∩ [0,{b}] = {}", list(cls.j1()));
    let j2 = cls.j2().into_iter().map(|(n, j)| format!("{n} (j_n = {j})"));
    let _ = writeln!(out, "J2 ∩ [0,{b}] = {}", list(j2));
    for a in cls.anomalies() {
        let line = match a {
            Anomaly::Unclassified { j } => format!("{j} satisfies neither classification clause"),
            Anomaly::WitnessOutsideJ1 { j } => format!("{j} has no witness in J1"),
            Anomaly::SimplifiedClauseDisagrees { j, clause, simplified } => {
                format!("{j}: second clause {clause}, simplified divisibility test {simplified}")
            }
        };
        let _ = writeln!(out, "anomaly: {line}");
    }
    out
}

#[derive(Serialize)]
pub struct MultiplicityRow {
    m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    m_prime: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    j_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    multiplicity: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    skipped: Option<String>,
}

pub fn multiplicity_rows(p: &BraidingParams, max: usize) -> Vec<MultiplicityRow> {
    let cls = nichols_core::compute_j(max, p);
    (0..=max)
        .map(|m| match multiplicity(m, p) {
            Ok(mult) => MultiplicityRow {
                m,
                m_prime: Some(m_prime(m, p)),
                j_count: Some(cls.count_upto(m)),
                multiplicity: Some(mult),
                skipped: None,
            },
            Err(e) => MultiplicityRow { m, m_prime: None, j_count: None, multiplicity: None, skipped: Some(e.to_string()) },
        })
        .collect()
}

pub fn multiplicity_text(rows: &[MultiplicityRow]) -> String {
    let mut out = String::from("   m   m'  |J|  multiplicity\n");
    for r in rows {
        match (r.m_prime, r.j_count, r.multiplicity) {
            (Some(mp), Some(j), Some(mult)) => {
                let _ = writeln!(out, "{:>4} {:>4} {:>4}  {mult}", r.m, mp, j);
            }
            _ => {
                let _ = writeln!(out, "{:>4}  skipped: {}", r.m, r.skipped.as_deref().unwrap_or(""));
            }
        }
    }
    out
}

pub fn verify_text(results: &[Result<KernelReport, (usize, Error)>]) -> String {
    let mut out = String::new();
    for r in results {
        match r {
            Ok(r) => {
                let verdict = if r.matches_theorem { "ok" } else { "MISMATCH" };
                let _ = writeln!(
                    out,
                    "m = {}: dim ker ∩ U_m = {}, |J ∩ [0,m]| = {}, independent = {}: {verdict}",
                    r.m, r.dim, r.j_count, r.independent
                );
                for c in &r.candidates {
                    let _ = writeln!(out, "    {:<12} in kernel: {}", c.label, c.in_kernel);
                }
                for e in &r.errors {
                    let _ = writeln!(out, "    error: {e}");
                }
            }
            Err((m, e)) => {
                let _ = writeln!(out, "m = {m}: skipped ({e})");
            }
        }
    }
    out
}

#[derive(Serialize)]
pub struct TableRow {
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub non_root: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agrees: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

pub fn table_rows(p: &BraidingParams) -> Vec<TableRow> {
    [1, 2, 3, 4, 6]
        .into_iter()
        .map(|m| {
            if !hypothesis_holds(m as u64, p) {
                return TableRow {
                    m,
                    non_root: None,
                    multiplicity: None,
                    agrees: None,
                    skipped: Some(format!("({m})_q^! b_{m} = 0")),
                };
            }
            match (non_root_table_check(m, p), multiplicity(m, p)) {
                (Ok(nr), Ok(mult)) => TableRow {
                    m,
                    non_root: Some(nr),
                    multiplicity: Some(mult),
                    agrees: Some(nr == (mult == 0)),
                    skipped: None,
                },
                (a, b) => TableRow {
                    m,
                    non_root: None,
                    multiplicity: None,
                    agrees: Some(false),
                    skipped: Some(format!("{a:?} / {b:?}")),
                },
            }
        })
        .collect()
}

pub fn table_text(rows: &[TableRow]) -> String {
    let mut out = String::from("   m  non-root  multiplicity  agrees\n");
    for r in rows {
        match (r.non_root, r.multiplicity, r.agrees) {
            (Some(nr), Some(mult), Some(a)) => {
                let _ = writeln!(out, "{:>4}  {:<8}  {:<12}  {a}", r.m, nr, mult);
            }
            _ => {
                let _ = writeln!(out, "{:>4}  skipped: {}", r.m, r.skipped.as_deref().unwrap_or(""));
            }
        }
    }
    out
}

#[derive(Serialize)]
pub struct PointFailure {
    q: String,
    r: String,
    s: String,
    messages: Vec<String>,
}

#[derive(Serialize)]
pub struct ScanSummary {
    pub field: String,
    pub check: String,
    pub max: usize,
    pub points: usize,
    pub checked: usize,
    pub skipped: usize,
    pub violations: usize,
    pub failures: Vec<PointFailure>,
}

impl ScanSummary {
    pub fn new(field: &Field, check: Check, max: usize, outcomes: &[PointOutcome]) -> Self {
        let failures: Vec<PointFailure> = outcomes
            .iter()
            .filter(|o| !o.violations.is_empty())
            .map(|o| PointFailure {
                q: o.params.q().to_string(),
                r: o.params.r().to_string(),
                s: o.params.s().to_string(),
                messages: o.violations.clone(),
            })
            .collect();
        ScanSummary {
            field: field.to_string(),
            check: check.to_string(),
            max,
            points: outcomes.len(),
            checked: outcomes.iter().map(|o| o.checked).sum(),
            skipped: outcomes.iter().map(|o| o.skipped).sum(),
            violations: outcomes.iter().map(|o| o.violations.len()).sum(),
            failures,
        }
    }

    pub fn text(&self) -> String {
        let mut out = format!(
            "scan {} over {} (max {}): {} points, {} cases checked, {} skipped, {} violations\n",
            self.check, self.field, self.max, self.points, self.checked, self.skipped, self.violations
        );
        for f in &self.failures {
            for m in &f.messages {
                let _ = writeln!(out, "  q = {}, r = {}, s = {}: {m}", f.q, f.r, f.s);
            }
        }
        out
    }
}
