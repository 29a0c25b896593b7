use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::free::{FineDegree, GeneratorSet, LieElement, MonoId};
use crate::quotient::{
    Ambient, CentralizerCensus, GradedPresentation, IdealSnapshot, Quotient, RelatorFamily,
};
use crate::zn::{
    dependency_set, dtilde_set, is_minus_one_independent, order_three_subgroup, residue_order,
    IndexSequence, Modulus, Residue, ResidueSet,
};

use super::report::Witness;
use super::{CheckConfig, Context, LemmaId, Outcome, PlanParts};

/// Everything a check needs once its hypotheses hold.
struct Setup {
    /// One generating set per instance; several only for a lemma1 sweep over `b`.
    instances: Vec<(u64, GeneratorSet)>,
    families: Vec<RelatorFamily>,
    cutoff: usize,
    /// Residues from `indices`, reduced.
    tuple: Vec<u64>,
    multiplicity: u32,
}

type Prepared = std::result::Result<Setup, String>;

fn residues(n: Modulus, v: &[i64]) -> Vec<u64> {
    v.iter().map(|&x| n.reduce(x)).collect()
}

fn sequence(n: Modulus, v: &[u64]) -> Result<IndexSequence> {
    let entries: Vec<i64> = v.iter().map(|&x| x as i64).collect();
    IndexSequence::new(n.get(), &entries)
}

fn order_of(n: Modulus, i: u64) -> u64 {
    n.get() / i.gcd(&n.get())
}

fn generators(n: Modulus, named: &[(String, u64)]) -> Result<GeneratorSet> {
    let pairs: Vec<(&str, i64)> = named.iter().map(|(s, d)| (s.as_str(), *d as i64)).collect();
    GeneratorSet::from_pairs(n.get(), &pairs)
}

fn numbered(prefix: &str, degrees: &[u64]) -> Vec<(String, u64)> {
    let width = degrees.len().to_string().len();
    degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| (format!("{prefix}{:0width$}", i + 1), d))
        .collect()
}

/// `(d1, d2, d3)` (-1)-independent, `d4` in `D(d1, d2, d3)`, no entry zero.
fn quadruple_hypotheses(n: Modulus, d: &[u64]) -> Result<std::result::Result<(), String>> {
    if let Some(i) = d.iter().position(|&x| x == 0) {
        return Ok(Err(format!("index {} is 0, and L_0 = 0", i + 1)));
    }
    let head = sequence(n, &d[..3])?;
    if !is_minus_one_independent(&head)? {
        return Ok(Err(format!("{head} is (-1)-dependent")));
    }
    if !dependency_set(&head)?.contains(d[3]) {
        return Ok(Err(format!("{} is not in D{head}", d[3])));
    }
    Ok(Ok(()))
}

fn nonzero_degrees(
    n: Modulus,
    cfg: &CheckConfig,
    default: &[i64],
) -> std::result::Result<Vec<u64>, String> {
    let raw = cfg.generators.clone().unwrap_or_else(|| default.to_vec());
    let d = residues(n, &raw);
    match d.iter().position(|&x| x == 0) {
        Some(i) => Err(format!("generator {} has degree 0, and L_0 = 0", i + 1)),
        None => Ok(d),
    }
}

fn min_cutoff(cfg: &CheckConfig, default: usize, min: usize) -> std::result::Result<usize, String> {
    let c = cfg.cutoff.unwrap_or(default);
    if c < min {
        Err(format!("cutoff {c} is below the required {min}"))
    } else {
        Ok(c)
    }
}

fn prepare(cfg: &CheckConfig) -> Result<Prepared> {
    let n = cfg.validate()?;
    let tuple = residues(n, &cfg.indices);
    let sm_zck = vec![
        RelatorFamily::SelectiveMetabelian,
        RelatorFamily::ZeroComponentKill,
    ];
    macro_rules! bail {
        ($e:expr) => {
            match $e {
                Ok(v) => v,
                Err(m) => return Ok(Err(m)),
            }
        };
    }
    let setup = match cfg.lemma {
        LemmaId::Lemma1 => {
            bail!(quadruple_hypotheses(n, &tuple)?);
            let quad = sequence(n, &tuple)?;
            let dt = dtilde_set(&quad)?;
            let bs: Vec<u64> = match cfg.target {
                Some(b) => {
                    let b = n.reduce(b);
                    if dt.contains(b) {
                        return Ok(Err(format!("b = {b} lies in D~{quad}")));
                    }
                    vec![b]
                }
                None => (0..n.get()).filter(|&b| !dt.contains(b)).collect(),
            };
            if bs.is_empty() {
                return Ok(Err(format!(
                    "no admissible b: D~{quad} covers Z/{}Z",
                    n.get()
                )));
            }
            let cutoff = bail!(min_cutoff(cfg, 5, 5));
            let mut instances = Vec::new();
            for b in bs {
                let mut named = numbered("x", &tuple);
                named.push(("xb".into(), b));
                instances.push((b, generators(n, &named)?));
            }
            let families = if cfg.control {
                vec![RelatorFamily::ZeroComponentKill]
            } else {
                sm_zck
            };
            Setup {
                instances,
                families,
                cutoff,
                tuple,
                multiplicity: 1,
            }
        }
        LemmaId::Lemma2 => {
            let (a, b, c) = (tuple[0], tuple[1], tuple[2]);
            let ord = residue_order(Residue::new(a as i64, n.get())?);
            if ord <= 3 {
                return Ok(Err(format!("o(a) = {ord} is not greater than 3")));
            }
            let amb = n.add(a, n.neg(b));
            for (name, d) in [("c", c), ("b", b), ("a-b", amb)] {
                if d == 0 {
                    return Ok(Err(format!("x_{name} has degree 0, and L_0 = 0")));
                }
            }
            let m = cfg.multiplicity.unwrap_or(7);
            let cutoff = bail!(min_cutoff(cfg, 2 * m as usize + 1, 2 * m as usize + 1));
            let gens = generators(
                n,
                &[("x_c".into(), c), ("x_b".into(), b), ("x_ab".into(), amb)],
            )?;
            let families = if cfg.control {
                vec![RelatorFamily::ZeroComponentKill]
            } else {
                sm_zck
            };
            Setup {
                instances: vec![(0, gens)],
                families,
                cutoff,
                tuple,
                multiplicity: m,
            }
        }
        LemmaId::Lemma3 | LemmaId::Proposition => {
            let degrees = bail!(nonzero_degrees(n, cfg, &[1, 2, 3]));
            if degrees.is_empty() {
                return Ok(Err("no generators".into()));
            }
            let (min, families) = match (cfg.lemma, cfg.control) {
                (LemmaId::Lemma3, false) => (
                    4,
                    vec![
                        RelatorFamily::SelectSecond,
                        RelatorFamily::ZeroComponentKill,
                    ],
                ),
                (LemmaId::Lemma3, true) => (4, Vec::new()),
                _ => (6, sm_zck),
            };
            let cutoff = bail!(min_cutoff(cfg, 6, min));
            Setup {
                instances: vec![(0, generators(n, &numbered("x", &degrees))?)],
                families,
                cutoff,
                tuple,
                multiplicity: 1,
            }
        }
        LemmaId::SpanForm | LemmaId::ComponentBound => {
            bail!(quadruple_hypotheses(n, &tuple)?);
            let extras = bail!(nonzero_degrees(n, cfg, &[]));
            let cutoff = bail!(min_cutoff(cfg, 6, 6));
            let mut named = numbered("u", &tuple);
            named.extend(numbered("y", &extras));
            Setup {
                instances: vec![(0, generators(n, &named)?)],
                families: sm_zck,
                cutoff,
                tuple,
                multiplicity: 1,
            }
        }
    };
    Ok(Ok(setup))
}

pub(super) fn plan(cfg: &CheckConfig) -> Result<PlanParts> {
    let setup = match prepare(cfg)? {
        Ok(s) => s,
        Err(m) => return Ok((Some(m), None, Vec::new())),
    };
    let gens = setup.instances[0].1.clone();
    let keys = match cfg.lemma {
        LemmaId::Lemma1 => vec![FineDegree::from_counts(vec![1; 5])],
        LemmaId::Lemma2 => {
            let m = setup.multiplicity;
            // Sorted generator order: x_ab, x_b, x_c.
            vec![FineDegree::from_counts(vec![m, m, 1])]
        }
        _ => gens.fine_degrees_up_to(setup.cutoff),
    };
    Ok((None, Some(gens), keys))
}

fn build(
    ctx: &mut Context,
    gens: GeneratorSet,
    families: Vec<RelatorFamily>,
    cutoff: usize,
) -> Result<Arc<Quotient>> {
    let pres = GradedPresentation::new(gens, families, cutoff)?;
    let q = Arc::new(Quotient::with_budget(pres, ctx.budget)?);
    let named: Vec<(String, i64)> = q
        .presentation()
        .generators()
        .iter()
        .map(|g| (g.name.clone(), g.degree.value() as i64))
        .collect();
    ctx.stat("generators", named);
    ctx.quotients.push(q.clone());
    Ok(q)
}

fn gen(q: &Quotient, name: &str) -> Result<LieElement> {
    q.algebra().generator(name)
}

fn row_witness(q: &Quotient, key: &FineDegree, row: &[(u32, BigInt)]) -> Witness {
    let rational: Vec<(u32, BigRational)> = row
        .iter()
        .map(|(c, v)| (*c, BigRational::from_integer(v.clone())))
        .collect();
    Witness::new(q, key, &q.element_from_row(key, &rational))
}

fn element_witness(q: &Quotient, e: &LieElement) -> Result<Witness> {
    let key = q
        .algebra()
        .fine_degree_of_element(e)?
        .ok_or_else(|| Error::Internal("zero witness".into()))?;
    Ok(Witness::new(q, &key, &q.reduce(e)?))
}

fn hv(setup: Result<Prepared>) -> Result<std::result::Result<Setup, Outcome>> {
    Ok(setup?.map_err(Outcome::HypothesisViolated))
}

macro_rules! setup_or_return {
    ($cfg:expr) => {
        match hv(prepare($cfg))? {
            Ok(s) => s,
            Err(o) => return Ok(o),
        }
    };
}

pub(super) fn lemma1(cfg: &CheckConfig, ctx: &mut Context) -> Result<Outcome> {
    let setup = setup_or_return!(cfg);
    let n = cfg.validate()?;
    ctx.stat(
        "dtilde_size",
        dtilde_set(&sequence(n, &setup.tuple)?)?.len(),
    );
    ctx.stat(
        "b_values",
        setup.instances.iter().map(|(b, _)| *b).collect::<Vec<_>>(),
    );
    let count = setup.instances.len();
    for (b, gens) in setup.instances {
        let q = build(ctx, gens, setup.families.clone(), setup.cutoff)?;
        let x = |i: usize| gen(&q, &format!("x{i}"));
        let alg = q.algebra();
        let u = alg.bracket(&alg.bracket(&x(1)?, &x(2)?), &alg.bracket(&x(3)?, &x(4)?));
        let product = alg.bracket(&u, &gen(&q, "xb")?);
        let key = alg.fine_degree_of_element(&product)?;
        if let Some(key) = &key {
            let comp = q.component(key)?;
            ctx.stat("free_dimension", comp.free_dimension());
            ctx.stat("relation_rank", comp.rank());
        }
        if !q.is_zero(&product)? {
            return Ok(Outcome::Counterexample(
                format!("[[x_a1, x_a2], [x_a3, x_a4], x_b] is nonzero for b = {b}"),
                Some(element_witness(&q, &product)?),
            ));
        }
    }
    Ok(Outcome::Verified(format!(
        "[[x_a1, x_a2], [x_a3, x_a4], x_b] = 0 for {count} admissible b"
    )))
}

pub(super) fn lemma2(cfg: &CheckConfig, ctx: &mut Context) -> Result<Outcome> {
    let setup = setup_or_return!(cfg);
    let m = setup.multiplicity;
    let (_, gens) = setup.instances.into_iter().next().expect("one instance");
    let q = build(ctx, gens, setup.families, setup.cutoff)?;
    let alg = q.algebra();
    let xa = alg.bracket(&gen(&q, "x_b")?, &gen(&q, "x_ab")?);
    let mut factors = vec![gen(&q, "x_c")?];
    factors.extend(std::iter::repeat_n(xa, m as usize));
    let product = alg.left_normalized(&factors)?;
    ctx.stat("multiplicity", m);
    ctx.stat("product_length", 2 * m + 1);
    if let Some(key) = alg.fine_degree_of_element(&product)? {
        let comp = q.component(&key)?;
        ctx.stat("fine_degree", key.label(alg.generators()));
        ctx.stat("free_dimension", comp.free_dimension());
        ctx.stat("relation_rank", comp.rank());
    }
    if q.is_zero(&product)? {
        Ok(Outcome::Verified(format!("[x_c, x_a x{m}] = 0")))
    } else {
        Ok(Outcome::Counterexample(
            format!("[x_c, x_a x{m}] is nonzero"),
            Some(element_witness(&q, &product)?),
        ))
    }
}

fn record_derived_length(ctx: &mut Context, q: &Quotient) -> Result<()> {
    let dl = q.derived_length()?;
    ctx.stat("derived_length", dl.length);
    ctx.stat("vacuity_threshold", dl.vacuity_threshold);
    ctx.stat("derived_length_informative", dl.informative);
    ctx.stat("derived_term_dimensions", &dl.term_dimensions);
    Ok(())
}

fn first_element_witness(q: &Quotient, s: &IdealSnapshot) -> Option<Witness> {
    let (key, ech) = s.components().next()?;
    let row = ech.rows().next()?;
    Some(row_witness(q, key, row))
}

pub(super) fn lemma3(cfg: &CheckConfig, ctx: &mut Context) -> Result<Outcome> {
    let setup = setup_or_return!(cfg);
    let (_, gens) = setup.instances.into_iter().next().expect("one instance");
    let q = build(ctx, gens, setup.families, setup.cutoff)?;
    let series = q.derived_series(2)?;
    let l2 = &series[1];
    ctx.stat("l1_dimension", series[0].total_dimension());
    ctx.stat("l2_dimension", l2.total_dimension());
    record_derived_length(ctx, &q)?;
    match first_element_witness(&q, l2) {
        None => Ok(Outcome::Verified(format!(
            "L^(2) = 0 in every component up to length {}",
            setup.cutoff
        ))),
        Some(w) => {
            let len: u32 = w.fine_degree.values().sum();
            Ok(Outcome::Counterexample(
                format!("L^(2) is nonzero at length {len}"),
                Some(w),
            ))
        }
    }
}

/// Ideal of `M = [L, L]` generated by `seeds`, and the span of the
/// constrained products `[U, m_1, ..., m_v]` over seeds `U`: each `m_k` a
/// quotient monomial of `M` of zn-degree in `dtilde`, with the order-3
/// degrees after all others. `tail_only` admits order-3 degrees only.
#[derive(Debug, Clone)]
pub struct SpanFormOutcome {
    pub ideal: IdealSnapshot,
    pub span: IdealSnapshot,
    pub products: usize,
    pub excess: Option<(FineDegree, Vec<(u32, BigInt)>)>,
}

pub fn span_form_on(
    q: &Quotient,
    seeds: &[LieElement],
    dtilde: &ResidueSet,
    tail_only: bool,
) -> Result<SpanFormOutcome> {
    let n = q.presentation().modulus();
    let alg = q.algebra();
    let ideal = q.ideal_generated(seeds, Ambient::Derived, "ideal of [L, L] generated by U")?;
    let mut m_keys: Vec<(FineDegree, bool, Vec<MonoId>)> = Vec::new();
    for key in q.fine_degrees() {
        let i = q.zn_degree(&key);
        if key.len() < 2 || i == 0 || !dtilde.contains(i) {
            continue;
        }
        let comp = q.component(&key)?;
        let monos: Vec<MonoId> = comp.quotient_monomials().collect();
        if !monos.is_empty() {
            m_keys.push((key, order_of(n, i) == 3, monos));
        }
    }
    let mut products = Vec::new();
    // (element, length, inside the order-3 tail)
    let mut stack: Vec<(LieElement, usize, bool)> = Vec::new();
    for s in seeds {
        let Some(key) = alg.fine_degree_of_element(s)? else {
            continue;
        };
        let r = q.reduce(s)?;
        if !r.is_zero() {
            stack.push((r, key.len(), false));
        }
    }
    while let Some((e, len, in_tail)) = stack.pop() {
        q.budget().check()?;
        for (key, order3, monos) in &m_keys {
            if len + key.len() > q.cutoff() || (in_tail || tail_only) && !order3 {
                continue;
            }
            for &m in monos {
                let next = q.reduce(&alg.bracket(&e, &alg.monomial_element(m)))?;
                if !next.is_zero() {
                    stack.push((next, len + key.len(), in_tail || *order3));
                }
            }
        }
        products.push(e);
    }
    let span = q.span_snapshot(&products, Ambient::Derived, "span of constrained products")?;
    let excess = ideal.first_excess(&span);
    Ok(SpanFormOutcome {
        products: products.len(),
        ideal,
        span,
        excess,
    })
}

fn quadruple_u(q: &Quotient) -> Result<LieElement> {
    let alg = q.algebra();
    let u = |i: usize| gen(q, &format!("u{i}"));
    Ok(alg.bracket(&alg.bracket(&u(1)?, &u(2)?), &alg.bracket(&u(3)?, &u(4)?)))
}

pub(super) fn span_form(cfg: &CheckConfig, ctx: &mut Context) -> Result<Outcome> {
    let setup = setup_or_return!(cfg);
    let n = cfg.validate()?;
    let dt = dtilde_set(&sequence(n, &setup.tuple)?)?;
    let (_, gens) = setup.instances.into_iter().next().expect("one instance");
    let q = build(ctx, gens, setup.families, setup.cutoff)?;
    let u = quadruple_u(&q)?;
    let out = span_form_on(&q, &[u], &dt, cfg.control)?;
    ctx.stat("dtilde_size", dt.len());
    ctx.stat("ideal_dimension", out.ideal.total_dimension());
    ctx.stat("span_dimension", out.span.total_dimension());
    ctx.stat("constrained_products", out.products);
    ctx.stat("ideal", out.ideal.report(&q));
    match out.excess {
        None => Ok(Outcome::Verified(format!(
            "ideal generated by U (dimension {}) lies in the constrained span",
            out.ideal.total_dimension()
        ))),
        Some((key, row)) => Ok(Outcome::Counterexample(
            format!(
                "ideal leaves the constrained span in fine degree {}",
                key.label(q.presentation().generators())
            ),
            Some(row_witness(&q, &key, &row)),
        )),
    }
}

/// `sigma + s + beta` with `s` a sum of at most `slots` elements of `dtilde`
/// of order above 3 and `beta` in the order-3 subgroup. `tail_only` forces `s = 0`.
pub fn predicted_degrees(
    n: Modulus,
    sigma: u64,
    dtilde: &ResidueSet,
    slots: usize,
    tail_only: bool,
) -> BTreeSet<u64> {
    let steps: Vec<u64> = dtilde
        .values
        .iter()
        .copied()
        .filter(|&i| i != 0 && order_of(n, i) > 3)
        .collect();
    let mut sums = BTreeSet::from([0u64]);
    if !tail_only {
        for _ in 0..slots {
            let next: Vec<u64> = sums
                .iter()
                .flat_map(|&s| steps.iter().map(move |&i| n.add(s, i)))
                .collect();
            let before = sums.len();
            sums.extend(next);
            if sums.len() == before {
                break;
            }
        }
    }
    let b = order_three_subgroup(n);
    sums.iter()
        .flat_map(|&s| b.iter().map(move |&beta| n.add(n.add(sigma, s), beta)))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentCensusOutcome {
    pub census: CentralizerCensus,
    pub predicted: BTreeSet<u64>,
    /// Nontrivial zn-degrees of `T` outside the predicted set.
    pub outside: BTreeSet<u64>,
}

/// Census of `t` against the predicted index set. Slots are the number of
/// length-2 factors that fit after a length-4 generator: `(cutoff - 4) / 2`.
pub fn component_census_on(
    q: &Quotient,
    t: &IdealSnapshot,
    sigma: u64,
    dtilde: &ResidueSet,
    tail_only: bool,
) -> Result<ComponentCensusOutcome> {
    let n = q.presentation().modulus();
    let census = q.centralizer_census(t)?;
    let predicted = predicted_degrees(
        n,
        sigma,
        dtilde,
        q.cutoff().saturating_sub(4) / 2,
        tail_only,
    );
    let outside = census.nontrivial.difference(&predicted).copied().collect();
    Ok(ComponentCensusOutcome {
        census,
        predicted,
        outside,
    })
}

/// Quotient monomials of `L` grouped by zn-degree, with lengths.
fn monomials_by_degree(
    q: &Quotient,
    min_len: usize,
    max_len: usize,
) -> Result<BTreeMap<u64, Vec<(MonoId, usize)>>> {
    let mut out: BTreeMap<u64, Vec<(MonoId, usize)>> = BTreeMap::new();
    for key in q.fine_degrees() {
        if key.len() < min_len || key.len() > max_len {
            continue;
        }
        let comp = q.component(&key)?;
        let i = q.zn_degree(&key);
        out.entry(i)
            .or_default()
            .extend(comp.quotient_monomials().map(|m| (m, key.len())));
    }
    Ok(out)
}

/// Every `[[m_1, m_2], [m_3, m_4]]` with `m_k` a quotient monomial of
/// zn-degree `d_k` and length at least `min_len`, within the cutoff.
fn four_fold_products(q: &Quotient, degrees: &[u64], min_len: usize) -> Result<Vec<LieElement>> {
    let c = q.cutoff();
    if 4 * min_len > c {
        return Ok(Vec::new());
    }
    let by = monomials_by_degree(q, min_len, c - 3 * min_len)?;
    let alg = q.algebra();
    let empty = Vec::new();
    let pick = |d: u64| by.get(&d).unwrap_or(&empty);
    let mut out = Vec::new();
    for &(a, la) in pick(degrees[0]) {
        for &(b, lb) in pick(degrees[1]) {
            if la + lb + 2 * min_len > c {
                continue;
            }
            let ab = alg.bracket(&alg.monomial_element(a), &alg.monomial_element(b));
            if ab.is_zero() {
                continue;
            }
            for &(x, lx) in pick(degrees[2]) {
                for &(y, ly) in pick(degrees[3]) {
                    if la + lb + lx + ly > c {
                        continue;
                    }
                    let xy = alg.bracket(&alg.monomial_element(x), &alg.monomial_element(y));
                    let p = alg.bracket(&ab, &xy);
                    if !p.is_zero() {
                        out.push(p);
                    }
                }
            }
        }
    }
    Ok(out)
}

pub(super) fn component_bound(cfg: &CheckConfig, ctx: &mut Context) -> Result<Outcome> {
    let setup = setup_or_return!(cfg);
    let n = cfg.validate()?;
    let dt = dtilde_set(&sequence(n, &setup.tuple)?)?;
    let (_, gens) = setup.instances.into_iter().next().expect("one instance");
    let q = build(ctx, gens, setup.families, setup.cutoff)?;
    let seeds = four_fold_products(&q, &setup.tuple, 1)?;
    let t = q.ideal_generated(&seeds, Ambient::Derived, "T")?;
    let sigma = setup.tuple.iter().fold(0, |acc, &d| n.add(acc, d));
    let out = component_census_on(&q, &t, sigma, &dt, cfg.control)?;
    let e = out.census.nontrivial.len();
    ctx.stat("seeds", seeds.len());
    ctx.stat("t_dimension", t.total_dimension());
    ctx.stat("nontrivial", &out.census.nontrivial);
    ctx.stat("noncentralizing", &out.census.noncentralizing);
    ctx.stat("predicted_size", out.predicted.len());
    ctx.stat("e", e);
    ctx.stat("e_squared", e * e);
    if let Some(&i) = out.outside.iter().next() {
        let witness = t
            .components()
            .find(|(k, _)| q.zn_degree(k) == i)
            .and_then(|(k, ech)| ech.rows().next().map(|r| row_witness(&q, k, r)));
        return Ok(Outcome::Counterexample(
            format!("T has a nontrivial component of degree {i} outside the predicted set"),
            witness,
        ));
    }
    if !out.census.bound_holds() {
        return Ok(Outcome::Counterexample(
            format!(
                "{} noncentralizing components exceed e^2 = {}",
                out.census.noncentralizing.len(),
                e * e
            ),
            None,
        ));
    }
    Ok(Outcome::Verified(format!(
        "{e} nontrivial components, all predicted; {} noncentralizing <= e^2",
        out.census.noncentralizing.len()
    )))
}

pub(super) fn proposition(cfg: &CheckConfig, ctx: &mut Context) -> Result<Outcome> {
    let setup = setup_or_return!(cfg);
    let n = cfg.validate()?;
    let (_, gens) = setup.instances.into_iter().next().expect("one instance");
    let q = build(ctx, gens, setup.families, setup.cutoff)?;
    let mut seeds = Vec::new();
    let live: Vec<u64> = (1..n.get()).collect();
    let mut d_cache: HashMap<[u64; 3], Option<ResidueSet>> = HashMap::new();
    if 8 <= q.cutoff() {
        for &i1 in &live {
            for &i2 in &live {
                for &i3 in &live {
                    let d = d_cache.entry([i1, i2, i3]).or_insert_with(|| {
                        let s = sequence(n, &[i1, i2, i3]).ok()?;
                        dependency_set(&s).ok()
                    });
                    let Some(d) = d.clone() else { continue };
                    for &i4 in d.values.iter().filter(|&&i| i != 0) {
                        seeds.extend(four_fold_products(&q, &[i1, i2, i3, i4], 2)?);
                    }
                }
            }
        }
    }
    let j = if cfg.control {
        IdealSnapshot::empty(Ambient::Derived, "J replaced by 0", q.cutoff())
    } else {
        q.ideal_generated(&seeds, Ambient::Derived, "J")?
    };
    let series = q.derived_series(3)?;
    let l3 = &series[2];
    ctx.stat("seeds", seeds.len());
    ctx.stat("j_dimension", j.total_dimension());
    ctx.stat("l3_dimension", l3.total_dimension());
    // L^(3) starts at length 8.
    let vacuous = q.cutoff() < 8;
    ctx.stat("vacuous", vacuous);
    record_derived_length(ctx, &q)?;
    if l3.is_zero() {
        let how = if vacuous {
            "vacuously"
        } else {
            "since L^(3) = 0"
        };
        return Ok(Outcome::Verified(format!(
            "L^(3) <= J holds {how} up to length {}",
            q.cutoff()
        )));
    }
    match l3.first_excess(&j) {
        None => Ok(Outcome::Verified("L^(3) <= J in every fine degree".into())),
        Some((key, row)) => Ok(Outcome::Counterexample(
            format!(
                "L^(3) leaves J in fine degree {}",
                key.label(q.presentation().generators())
            ),
            Some(row_witness(&q, &key, &row)),
        )),
    }
}
