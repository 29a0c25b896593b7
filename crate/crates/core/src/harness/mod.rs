//! Reproducible verification campaigns for the vanishing lemmas.
//!
//! Each [`CheckConfig`] names a lemma and its parameters. Hypotheses are
//! validated with [`crate::zn`] before any algebra is built; the check then
//! instantiates the universal truncated quotient and decides the lemma's
//! conclusion exactly. With `control` set, the check runs its weakened twin,
//! which is expected to fail.

mod checks;
mod report;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::free::{witt_dimension, FineDegree, GeneratorSet};
use crate::quotient::{Budget, Quotient};
use crate::zn::Modulus;

pub use checks::{
    component_census_on, predicted_degrees, span_form_on, ComponentCensusOutcome, SpanFormOutcome,
};
pub use report::{render_table, CheckReport, Verdict, Witness};

/// Version string embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable holding the default budget in seconds.
pub const BUDGET_ENV: &str = "GRADEDLIE_BUDGET_SECONDS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaId {
    /// `[[x_a1, x_a2], [x_a3, x_a4], x_b] = 0` for `b` outside `D~(a1, a2, a3, a4)`.
    Lemma1,
    /// `[x_c, x_a, ..., x_a] = 0` with seven copies of `x_a = [x_b, x_(a-b)]`.
    Lemma2,
    /// The second selective condition forces `L^(2) = 0`.
    Lemma3,
    /// The ideal of `[L, L]` generated by `U` lies in the span of constrained products.
    SpanForm,
    /// Nontrivial components of that ideal lie in the predicted index set; the centralizer bound.
    ComponentBound,
    /// `L^(3)` lies in the ideal `J`.
    Proposition,
}

impl LemmaId {
    pub fn label(self) -> &'static str {
        match self {
            LemmaId::Lemma1 => "lemma1",
            LemmaId::Lemma2 => "lemma2",
            LemmaId::Lemma3 => "lemma3",
            LemmaId::SpanForm => "span_form",
            LemmaId::ComponentBound => "component_bound",
            LemmaId::Proposition => "proposition",
        }
    }
}

/// One check. Field meaning depends on `lemma`:
///
/// | lemma | `indices` | `target` | `generators` |
/// |---|---|---|---|
/// | lemma1 | `a1, a2, a3, a4` | `b`; absent sweeps every admissible `b` | unused |
/// | lemma2 | `a, b, c` | unused | unused |
/// | lemma3, proposition | unused | unused | generator degrees, default `1, 2, 3` |
/// | span_form, component_bound | `d1, d2, d3, d4` | unused | extra generator degrees |
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    pub lemma: LemmaId,
    pub modulus: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub indices: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<i64>>,
    /// Copies of `x_a` for lemma2; default 7.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_seconds: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub control: bool,
}

impl CheckConfig {
    pub fn new(lemma: LemmaId, modulus: u64) -> Self {
        CheckConfig {
            lemma,
            modulus,
            indices: Vec::new(),
            target: None,
            generators: None,
            multiplicity: None,
            cutoff: None,
            budget_seconds: None,
            control: false,
        }
    }

    pub fn indices(mut self, indices: &[i64]) -> Self {
        self.indices = indices.to_vec();
        self
    }

    pub fn target(mut self, b: i64) -> Self {
        self.target = Some(b);
        self
    }

    pub fn generators(mut self, degrees: &[i64]) -> Self {
        self.generators = Some(degrees.to_vec());
        self
    }

    pub fn multiplicity(mut self, m: u32) -> Self {
        self.multiplicity = Some(m);
        self
    }

    pub fn cutoff(mut self, c: usize) -> Self {
        self.cutoff = Some(c);
        self
    }

    pub fn budget_seconds(mut self, s: f64) -> Self {
        self.budget_seconds = Some(s);
        self
    }

    pub fn control(mut self) -> Self {
        self.control = true;
        self
    }

    /// Structural validation: modulus, index count, budget. Lemma
    /// hypotheses are not checked here; they yield a verdict, not an error.
    pub fn validate(&self) -> Result<Modulus> {
        let n = Modulus::new(self.modulus)?;
        let want = match self.lemma {
            LemmaId::Lemma1 | LemmaId::SpanForm | LemmaId::ComponentBound => Some(4),
            LemmaId::Lemma2 => Some(3),
            LemmaId::Lemma3 | LemmaId::Proposition => None,
        };
        match want {
            Some(k) if self.indices.len() != k => {
                return Err(Error::InvalidConfig(format!(
                    "{} takes {k} indices, got {}",
                    self.lemma.label(),
                    self.indices.len()
                )))
            }
            None if !self.indices.is_empty() => {
                return Err(Error::InvalidConfig(format!(
                    "{} takes no indices",
                    self.lemma.label()
                )))
            }
            _ => {}
        }
        if let Some(s) = self.budget_seconds {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::InvalidConfig(format!("budget of {s} seconds")));
            }
        }
        if self.multiplicity == Some(0) {
            return Err(Error::InvalidConfig("multiplicity must be positive".into()));
        }
        if self.generators.as_ref().is_some_and(|g| g.len() > 16) {
            return Err(Error::InvalidConfig("at most 16 generators".into()));
        }
        Ok(n)
    }

    fn budget(&self) -> Budget {
        let secs = self
            .budget_seconds
            .or_else(|| std::env::var(BUDGET_ENV).ok()?.parse().ok());
        match secs {
            Some(s) if s > 0.0 => Budget::seconds(s),
            _ => Budget::unlimited(),
        }
    }
}

/// Per-check state: the quotients built, and statistics collected so far.
pub(crate) struct Context {
    pub(crate) budget: Budget,
    pub(crate) quotients: Vec<Arc<Quotient>>,
    pub(crate) stats: BTreeMap<String, serde_json::Value>,
}

impl Context {
    pub(crate) fn stat(&mut self, key: &str, value: impl Serialize) {
        self.stats.insert(
            key.to_string(),
            serde_json::to_value(value).expect("statistics serialize"),
        );
    }
}

/// Outcome of a check body before it is wrapped into a report.
pub(crate) enum Outcome {
    Verified(String),
    Counterexample(String, Option<Witness>),
    HypothesisViolated(String),
}

/// Runs one check. `Err` only for structurally invalid configurations.
pub fn run_check(cfg: &CheckConfig) -> Result<CheckReport> {
    cfg.validate()?;
    let mut ctx = Context {
        budget: cfg.budget(),
        quotients: Vec::new(),
        stats: BTreeMap::new(),
    };
    let started = std::time::Instant::now();
    let result = match cfg.lemma {
        LemmaId::Lemma1 => checks::lemma1(cfg, &mut ctx),
        LemmaId::Lemma2 => checks::lemma2(cfg, &mut ctx),
        LemmaId::Lemma3 => checks::lemma3(cfg, &mut ctx),
        LemmaId::SpanForm => checks::span_form(cfg, &mut ctx),
        LemmaId::ComponentBound => checks::component_bound(cfg, &mut ctx),
        LemmaId::Proposition => checks::proposition(cfg, &mut ctx),
    };
    let (verdict, message, witness) = match result {
        Ok(Outcome::Verified(m)) => (Verdict::Verified, m, None),
        Ok(Outcome::Counterexample(m, w)) => (Verdict::Counterexample, m, w),
        Ok(Outcome::HypothesisViolated(m)) => (Verdict::HypothesisViolated, m, None),
        Err(Error::BudgetExceeded(s)) => (
            Verdict::BudgetExceeded,
            format!("budget of {s:.1}s exceeded"),
            None,
        ),
        Err(e) => return Err(e),
    };
    let mut engine = crate::quotient::EngineStats::default();
    for q in &ctx.quotients {
        let s = q.stats();
        engine.components += s.components;
        engine.relator_rows += s.relator_rows;
        engine.closure_rows += s.closure_rows;
    }
    if !ctx.quotients.is_empty() {
        ctx.stat("engine", engine);
    }
    Ok(CheckReport {
        version: VERSION.to_string(),
        lemma: cfg.lemma,
        control: cfg.control,
        config: cfg.clone(),
        verdict,
        message,
        witness,
        statistics: ctx.stats,
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Validates every configuration, then runs them concurrently. Reports are
/// in configuration order.
pub fn run_campaign(cfgs: &[CheckConfig]) -> Result<Vec<CheckReport>> {
    for (i, c) in cfgs.iter().enumerate() {
        c.validate()
            .map_err(|e| Error::InvalidConfig(format!("config {i}: {e}")))?;
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = cfgs.iter().map(|c| s.spawn(move || run_check(c))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check thread panicked"))
            .collect()
    })
}

pub fn parse_campaign(text: &str) -> Result<Vec<CheckConfig>> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let configs = if value.is_array() {
        value
    } else {
        serde_json::Value::Array(vec![value])
    };
    serde_json::from_value(configs).map_err(|e| Error::Parse(e.to_string()))
}

/// What a check would do, without row reduction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckPlan {
    pub version: String,
    pub lemma: LemmaId,
    /// `None` when the hypotheses hold, else the violation.
    pub hypothesis_violation: Option<String>,
    /// Fine-degree label to free dimension for the components the check reduces.
    pub free_dimensions: BTreeMap<String, u128>,
    pub total_free_dimension: u128,
}

/// Validates hypotheses and estimates component dimensions with the Witt
/// formula.
pub fn plan_check(cfg: &CheckConfig) -> Result<CheckPlan> {
    cfg.validate()?;
    let (violation, gens, keys) = checks::plan(cfg)?;
    let mut free_dimensions = BTreeMap::new();
    if let Some(gens) = &gens {
        for k in &keys {
            free_dimensions.insert(k.label(gens), witt_dimension(k.counts()));
        }
    }
    Ok(CheckPlan {
        version: VERSION.to_string(),
        lemma: cfg.lemma,
        hypothesis_violation: violation,
        total_free_dimension: free_dimensions.values().sum(),
        free_dimensions,
    })
}

pub(crate) type PlanParts = (Option<String>, Option<GeneratorSet>, Vec<FineDegree>);

#[cfg(test)]
mod tests;
