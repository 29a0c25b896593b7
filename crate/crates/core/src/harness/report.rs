use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::free::{ElementTerm, FineDegree, LieElement};
use crate::quotient::Quotient;

use super::{CheckConfig, LemmaId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    Counterexample,
    HypothesisViolated,
    BudgetExceeded,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Counterexample => "counterexample",
            Verdict::HypothesisViolated => "hypothesis-violated",
            Verdict::BudgetExceeded => "budget-exceeded",
        }
    }
}

/// A nonzero element of the quotient refuting the checked statement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub fine_degree: BTreeMap<String, u32>,
    pub zn_degree: u64,
    /// Free-algebra representative.
    pub element: Vec<ElementTerm>,
    pub rendered: String,
}

impl Witness {
    pub(crate) fn new(q: &Quotient, key: &FineDegree, e: &LieElement) -> Self {
        let alg = q.algebra();
        Witness {
            fine_degree: key.to_map(alg.generators()),
            zn_degree: q.zn_degree(key),
            element: alg.element_to_json(e),
            rendered: alg.render(e),
        }
    }

    /// Whether the witness is nonzero in `q`.
    pub fn replay(&self, q: &Quotient) -> Result<bool> {
        let e = q.algebra().element_from_json(&self.element)?;
        Ok(!q.is_zero(&e)?)
    }
}

/// Result of one check. The JSON form omits wall time, so identical
/// configurations give identical bytes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub version: String,
    pub lemma: LemmaId,
    pub control: bool,
    pub config: CheckConfig,
    pub verdict: Verdict,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub statistics: BTreeMap<String, serde_json::Value>,
    #[serde(skip)]
    pub wall_seconds: f64,
}

/// Fixed-width summary, one row per report.
pub fn render_table(reports: &[CheckReport]) -> String {
    let header = [
        "#", "lemma", "n", "control", "verdict", "seconds", "message",
    ];
    let rows: Vec<[String; 7]> = reports
        .iter()
        .enumerate()
        .map(|(i, r)| {
            [
                i.to_string(),
                r.lemma.label().to_string(),
                r.config.modulus.to_string(),
                if r.control { "yes" } else { "no" }.to_string(),
                r.verdict.label().to_string(),
                format!("{:.2}", r.wall_seconds),
                r.message.clone(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: &[String]| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, w))| {
                if i + 1 == cells.len() {
                    c.clone()
                } else {
                    format!("{c:<w$}")
                }
            })
            .collect();
        parts.join("  ").trim_end().to_string()
    };
    let mut out = String::new();
    out.push_str(&line(&header.map(String::from)));
    out.push('\n');
    for row in &rows {
        out.push_str(&line(row));
        out.push('\n');
    }
    out
}
