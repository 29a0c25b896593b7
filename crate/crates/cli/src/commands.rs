use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Serialize;

use gradedlie_core::eigenspace::{analyze_algebra, AlgebraFile};
use gradedlie_core::free::witt_dimension;
use gradedlie_core::harness::{
    parse_campaign, plan_check, render_table, run_campaign, CheckConfig, CheckReport, LemmaId,
    Verdict, BUDGET_ENV, VERSION,
};
use gradedlie_core::quotient::{Budget, EngineStats, GradedPresentation, Quotient};
use gradedlie_core::zn::{
    dependency_set, dtilde_set, is_minus_one_dependent, IndexSequence, PaperConstants,
};
use gradedlie_core::Error;

use crate::Output;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::BudgetExceeded(_)) => EXIT_BUDGET,
            _ => EXIT_INVALID,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(s) | CliError::Usage(s) => f.write_str(s),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult = Result<u8, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn print_json(value: &impl Serialize) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("reports serialize")
    );
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        parts.join("  ").trim_end().to_string()
    };
    let mut out = vec![line(header.to_vec())];
    out.extend(
        rows.iter()
            .map(|r| line(r.iter().map(String::as_str).collect())),
    );
    out.join("\n")
}

fn set_text(values: impl IntoIterator<Item = u64>) -> String {
    let parts: Vec<String> = values.into_iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

#[derive(Serialize)]
struct DepsReport {
    version: &'static str,
    modulus: u64,
    sequence: Vec<u64>,
    dependent: bool,
    /// Present only for independent sequences.
    dependency_set: Option<Vec<u64>>,
    dtilde: Vec<u64>,
}

pub fn deps(n: u64, seq: &[i64], output: Output) -> CliResult {
    let s = IndexSequence::new(n, seq)?;
    let dependent = is_minus_one_dependent(&s)?;
    let d = if dependent {
        None
    } else {
        Some(dependency_set(&s)?)
    };
    let report = DepsReport {
        version: VERSION,
        modulus: n,
        sequence: s.entries().to_vec(),
        dependent,
        dependency_set: d.map(|d| d.values.into_iter().collect()),
        dtilde: dtilde_set(&s)?.values.into_iter().collect(),
    };
    match output {
        Output::Json => print_json(&report),
        Output::Table => {
            println!(
                "{}",
                if dependent {
                    "dependent"
                } else {
                    "independent"
                }
            );
            if let Some(d) = &report.dependency_set {
                println!("D  = {}", set_text(d.iter().copied()));
            }
            println!("D~ = {}", set_text(report.dtilde.iter().copied()));
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ComponentRow {
    fine_degree: String,
    length: usize,
    zn_degree: u64,
    free_dimension: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quotient_dimension: Option<usize>,
}

#[derive(Serialize)]
struct BuildReport {
    version: &'static str,
    modulus: u64,
    cutoff: usize,
    dry_run: bool,
    components: Vec<ComponentRow>,
    total_free_dimension: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    total_quotient_dimension: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    engine: Option<EngineStats>,
}

fn budget(flag: Option<f64>) -> Result<Budget, CliError> {
    let secs = match flag {
        Some(s) => Some(s),
        None => match std::env::var(BUDGET_ENV) {
            Ok(v) => Some(v.parse::<f64>().map_err(|_| {
                CliError::Usage(format!("{BUDGET_ENV}={v} is not a number of seconds"))
            })?),
            Err(_) => None,
        },
    };
    match secs {
        Some(s) if s.is_nan() || s <= 0.0 => {
            Err(CliError::Usage(format!("budget must be positive, got {s}")))
        }
        Some(s) => Ok(Budget::seconds(s)),
        None => Ok(Budget::unlimited()),
    }
}

pub fn build(
    file: &Path,
    cutoff: Option<usize>,
    budget_seconds: Option<f64>,
    dry_run: bool,
    output: Output,
) -> CliResult {
    let mut pres = GradedPresentation::from_json(&read(file)?)?;
    if let Some(c) = cutoff {
        pres = pres.with_cutoff(c)?;
    }
    let gens = pres.generators().clone();
    let keys: Vec<_> = gens
        .fine_degrees_up_to(pres.cutoff())
        .into_iter()
        .filter(|k| witt_dimension(k.counts()) > 0)
        .collect();
    let mut report = BuildReport {
        version: VERSION,
        modulus: pres.modulus().get(),
        cutoff: pres.cutoff(),
        dry_run,
        components: Vec::new(),
        total_free_dimension: 0,
        total_quotient_dimension: None,
        engine: None,
    };
    if dry_run {
        for key in &keys {
            report.components.push(ComponentRow {
                fine_degree: key.label(&gens),
                length: key.len(),
                zn_degree: key.zn_degree(&gens),
                free_dimension: witt_dimension(key.counts()),
                rank: None,
                quotient_dimension: None,
            });
        }
    } else {
        let q = Quotient::with_budget(pres, budget(budget_seconds)?)?;
        let mut total = 0;
        for key in &keys {
            let comp = q.component(key)?;
            total += comp.quotient_dimension();
            report.components.push(ComponentRow {
                fine_degree: key.label(&gens),
                length: key.len(),
                zn_degree: key.zn_degree(&gens),
                free_dimension: comp.free_dimension() as u128,
                rank: Some(comp.rank()),
                quotient_dimension: Some(comp.quotient_dimension()),
            });
        }
        report.total_quotient_dimension = Some(total);
        report.engine = Some(q.stats());
    }
    report.total_free_dimension = report.components.iter().map(|c| c.free_dimension).sum();
    match output {
        Output::Json => print_json(&report),
        Output::Table => {
            let opt = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
            let rows: Vec<Vec<String>> = report
                .components
                .iter()
                .map(|c| {
                    vec![
                        c.fine_degree.clone(),
                        c.length.to_string(),
                        c.zn_degree.to_string(),
                        c.free_dimension.to_string(),
                        opt(c.rank),
                        opt(c.quotient_dimension),
                    ]
                })
                .collect();
            println!(
                "{}",
                table(
                    &["fine degree", "length", "zn", "free", "rank", "quotient"],
                    &rows
                )
            );
            println!(
                "total free {} quotient {}",
                report.total_free_dimension,
                opt(report.total_quotient_dimension)
            );
        }
    }
    Ok(EXIT_OK)
}

pub fn decompose(file: &Path, output: Output) -> CliResult {
    let input = AlgebraFile::from_json(&read(file)?)?.build()?;
    let report = analyze_algebra(&input)?;
    match output {
        Output::Json => print_json(&report),
        Output::Table => {
            let mut rows = Vec::new();
            if let Some(p) = &report.automorphism_pair {
                for c in &p.checks {
                    rows.push(vec![
                        c.name.clone(),
                        pass(c.passed),
                        c.detail.clone().unwrap_or_default(),
                    ]);
                }
            }
            if let Some(g) = &report.grading {
                rows.push(vec![
                    "grading".into(),
                    "-".into(),
                    format!("dimensions {:?}", g.component_dimensions),
                ]);
            }
            if let Some(h) = &report.hypotheses {
                let detail = format!(
                    "dim C_L(phi) = {}, dim C_L(h) = {}, C_L(h) metabelian: {}",
                    h.fixed_phi_dimension, h.fixed_h_dimension, h.fixed_h_metabelian
                );
                rows.push(vec!["hypotheses".into(), pass(h.passed), detail]);
            }
            if let Some(s) = &report.selective {
                rows.push(vec![
                    "selective".into(),
                    pass(s.passed),
                    format!("{} index quadruples", s.index_quadruples),
                ]);
            }
            println!("{}", table(&["check", "result", "detail"], &rows));
        }
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_FAILED })
}

fn pass(b: bool) -> String {
    if b { "pass" } else { "FAIL" }.into()
}

pub struct VerifyFlags {
    pub lemma: Option<LemmaId>,
    pub n: Option<u64>,
    pub seq: Option<Vec<i64>>,
    pub generators: Option<Vec<i64>>,
    pub target: Option<i64>,
    pub multiplicity: Option<u32>,
    pub control: bool,
    pub cutoff: Option<usize>,
    pub budget_seconds: Option<f64>,
}

impl VerifyFlags {
    fn single(&self) -> Result<CheckConfig, CliError> {
        let lemma = self
            .lemma
            .ok_or_else(|| CliError::Usage("give a campaign file or --lemma".into()))?;
        let n = self
            .n
            .ok_or_else(|| CliError::Usage("--lemma needs --n".into()))?;
        let mut cfg = CheckConfig::new(lemma, n);
        if let Some(seq) = &self.seq {
            cfg = match lemma {
                LemmaId::Lemma3 | LemmaId::Proposition => cfg.generators(seq),
                _ => cfg.indices(seq),
            };
        }
        if let Some(g) = &self.generators {
            cfg = cfg.generators(g);
        }
        cfg.target = self.target;
        cfg.multiplicity = self.multiplicity;
        cfg.control = self.control;
        Ok(cfg)
    }

    fn has_check_fields(&self) -> bool {
        self.n.is_some()
            || self.seq.is_some()
            || self.generators.is_some()
            || self.target.is_some()
            || self.multiplicity.is_some()
            || self.control
    }
}

pub fn verify(file: Option<&Path>, flags: VerifyFlags, dry_run: bool, output: Output) -> CliResult {
    let mut cfgs = match file {
        Some(path) => {
            if flags.has_check_fields() {
                return Err(CliError::Usage(
                    "with a campaign file only --cutoff and --budget-seconds may be given".into(),
                ));
            }
            parse_campaign(&read(path)?)?
        }
        None => vec![flags.single()?],
    };
    for cfg in &mut cfgs {
        if flags.cutoff.is_some() {
            cfg.cutoff = flags.cutoff;
        }
        if flags.budget_seconds.is_some() {
            cfg.budget_seconds = flags.budget_seconds;
        }
    }
    if dry_run {
        let plans = cfgs.iter().map(plan_check).collect::<Result<Vec<_>, _>>()?;
        match output {
            Output::Json => print_json(&plans),
            Output::Table => {
                let rows: Vec<Vec<String>> = plans
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        vec![
                            i.to_string(),
                            p.lemma.label().to_string(),
                            p.total_free_dimension.to_string(),
                            p.hypothesis_violation
                                .clone()
                                .unwrap_or_else(|| "hypotheses hold".into()),
                        ]
                    })
                    .collect();
                println!(
                    "{}",
                    table(&["#", "lemma", "free dimension", "hypotheses"], &rows)
                );
            }
        }
        let violated = plans.iter().any(|p| p.hypothesis_violation.is_some());
        return Ok(if violated { EXIT_FAILED } else { EXIT_OK });
    }
    let reports = run_campaign(&cfgs)?;
    match output {
        Output::Json if file.is_none() => print_json(&reports[0]),
        Output::Json => print_json(&reports),
        Output::Table => print!("{}", render_table(&reports)),
    }
    Ok(campaign_exit(&reports))
}

fn campaign_exit(reports: &[CheckReport]) -> u8 {
    let has = |v: Verdict| reports.iter().any(|r| r.verdict == v);
    if has(Verdict::Counterexample) || has(Verdict::HypothesisViolated) {
        EXIT_FAILED
    } else if has(Verdict::BudgetExceeded) {
        EXIT_BUDGET
    } else {
        EXIT_OK
    }
}

#[derive(Serialize)]
struct ConstantsReport {
    version: &'static str,
    #[serde(flatten)]
    constants: PaperConstants,
    e_bound_rendered: String,
    e_bound_decimal_digits: u64,
    e_bound_bits: u64,
}

pub fn constants(f1: u64, output: Output) -> CliResult {
    let c = PaperConstants::new(f1);
    let report = ConstantsReport {
        version: VERSION,
        constants: c,
        e_bound_rendered: c.e_bound.render(),
        e_bound_decimal_digits: c.e_bound.decimal_digits(),
        e_bound_bits: c.e_bound.bit_length(),
    };
    match output {
        Output::Json => print_json(&report),
        Output::Table => {
            let rows: BTreeMap<&str, String> = [
                ("dtilde_max", c.dtilde_max.to_string()),
                ("u_max", c.u_max.to_string()),
                ("e_bound", report.e_bound_rendered.clone()),
                ("e_bound digits", report.e_bound_decimal_digits.to_string()),
                ("f1", c.f1.to_string()),
                ("final_length", c.final_length.to_string()),
            ]
            .into();
            let rows: Vec<Vec<String>> = rows
                .into_iter()
                .map(|(k, v)| vec![k.to_string(), v])
                .collect();
            println!("{}", table(&["constant", "value"], &rows));
        }
    }
    Ok(EXIT_OK)
}
