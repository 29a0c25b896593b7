use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use parking_lot::Mutex;
use serde::Serialize;

use super::presentation::{GradedPresentation, RelatorFamily};
use crate::error::{Error, Result};
use crate::free::{Basis, FineDegree, FreeLieAlgebra, HallMonomial, LieElement, MonoId};
use crate::linalg::{Echelon, Reduced, Span, SpanBuilder, SparseRow};
use crate::zn::{is_minus_one_independent, IndexSequence};

pub(crate) type Combo = Vec<(MonoId, BigInt)>;

pub(crate) fn row_from_small(basis: &Basis, terms: &[(MonoId, i64)]) -> SparseRow {
    let mut row: SparseRow = terms
        .iter()
        .map(|&(m, c)| {
            (
                basis.column(m).expect("bracket stays in its fine degree"),
                BigInt::from(c),
            )
        })
        .collect();
    row.sort_unstable_by_key(|(c, _)| *c);
    row
}

pub(crate) fn row_from_combo(basis: &Basis, terms: Combo) -> SparseRow {
    let mut row: SparseRow = terms
        .into_iter()
        .map(|(m, c)| {
            (
                basis.column(m).expect("bracket stays in its fine degree"),
                c,
            )
        })
        .collect();
    row.sort_unstable_by_key(|(c, _)| *c);
    row
}

pub(crate) fn combo_from_row(basis: &Basis, row: &[(u32, BigInt)]) -> Combo {
    row.iter()
        .map(|(c, v)| (basis.monos[*c as usize], v.clone()))
        .collect()
}

/// Wall-clock allowance for a computation.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    start: Instant,
    limit: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            start: Instant::now(),
            limit: None,
        }
    }

    pub fn seconds(secs: f64) -> Self {
        Budget {
            start: Instant::now(),
            limit: Some(Duration::from_secs_f64(secs.max(0.0))),
        }
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }

    pub fn check(&self) -> Result<()> {
        match self.limit {
            Some(l) if self.start.elapsed() > l => Err(Error::BudgetExceeded(l.as_secs_f64())),
            _ => Ok(()),
        }
    }
}

/// One fine-degree component of the quotient: the free component modulo
/// the slice of the relation ideal.
#[derive(Debug)]
pub struct QuotientComponent {
    key: FineDegree,
    basis: Arc<Basis>,
    relations: Span,
    free_columns: Vec<u32>,
}

impl QuotientComponent {
    fn new(key: FineDegree, basis: Arc<Basis>, relations: Span) -> Self {
        let free_columns = relations.free_columns();
        QuotientComponent {
            key,
            basis,
            relations,
            free_columns,
        }
    }

    pub fn key(&self) -> &FineDegree {
        &self.key
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn free_dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn rank(&self) -> usize {
        self.relations.rank()
    }

    pub fn quotient_dimension(&self) -> usize {
        self.free_columns.len()
    }

    /// The quotient component is zero.
    pub fn is_trivial(&self) -> bool {
        self.free_columns.is_empty()
    }

    pub fn relations(&self) -> &Span {
        &self.relations
    }

    /// Columns whose monomials project to a basis of the quotient.
    pub fn quotient_columns(&self) -> &[u32] {
        &self.free_columns
    }

    pub fn quotient_monomials(&self) -> impl Iterator<Item = MonoId> + '_ {
        self.free_columns
            .iter()
            .map(|&c| self.basis.monos[c as usize])
    }

    pub fn reduce(&self, row: &[(u32, BigInt)]) -> Reduced {
        self.relations.reduce(row)
    }

    /// Row-reduced relation matrix; the identity when the component is killed.
    pub fn relation_rows(&self) -> Vec<SparseRow> {
        match &self.relations {
            Span::Full { ncols } => (0..*ncols as u32)
                .map(|c| vec![(c, BigInt::one())])
                .collect(),
            Span::Partial(e) => e.rows().cloned().collect(),
        }
    }
}

/// Work counters of a [`Quotient`].
#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct EngineStats {
    pub components: usize,
    pub relator_rows: usize,
    pub closure_rows: usize,
}

/// Spans of bracket pairs in one fine degree, reduced modulo the relations
/// and keyed by the degree class of their slots.
type SlotSpans = BTreeMap<u64, Vec<Combo>>;

/// Memoizing evaluator for one presentation.
///
/// Components are computed in increasing fine degree; each one is built
/// from the components directly below it, so a request for `K` fills the
/// cache for every fine degree dominated by `K`.
pub struct Quotient {
    pres: GradedPresentation,
    explicit: HashMap<FineDegree, Vec<SparseRow>>,
    kill_zero: bool,
    metabelian: bool,
    select_second: bool,
    components: Mutex<HashMap<FineDegree, Arc<QuotientComponent>>>,
    pair_spans: Mutex<HashMap<FineDegree, Arc<SlotSpans>>>,
    second_spans: Mutex<HashMap<FineDegree, Arc<SlotSpans>>>,
    independence: Mutex<HashMap<Vec<u64>, bool>>,
    budget: Budget,
    relator_rows: AtomicUsize,
    closure_rows: AtomicUsize,
}

impl Quotient {
    pub fn new(pres: GradedPresentation) -> Result<Self> {
        Self::with_budget(pres, Budget::unlimited())
    }

    pub fn with_budget(pres: GradedPresentation, budget: Budget) -> Result<Self> {
        let alg = pres.algebra().clone();
        let mut explicit: HashMap<FineDegree, Vec<SparseRow>> = HashMap::new();
        for fam in pres.families() {
            if let RelatorFamily::ExplicitList(elems) = fam {
                for e in elems {
                    let Some(key) = alg.fine_degree_of_element(e)? else {
                        continue;
                    };
                    if key.len() > pres.cutoff() {
                        continue;
                    }
                    let (combo, _) = alg.to_integer_combination(e)?;
                    let basis = alg.basis(&key);
                    explicit
                        .entry(key)
                        .or_default()
                        .push(row_from_combo(&basis, combo));
                }
            }
        }
        Ok(Quotient {
            kill_zero: pres.kills_zero_component(),
            metabelian: pres.has_family(&RelatorFamily::SelectiveMetabelian),
            select_second: pres.has_family(&RelatorFamily::SelectSecond),
            pres,
            explicit,
            components: Mutex::new(HashMap::new()),
            pair_spans: Mutex::new(HashMap::new()),
            second_spans: Mutex::new(HashMap::new()),
            independence: Mutex::new(HashMap::new()),
            budget,
            relator_rows: AtomicUsize::new(0),
            closure_rows: AtomicUsize::new(0),
        })
    }

    pub fn presentation(&self) -> &GradedPresentation {
        &self.pres
    }

    pub fn algebra(&self) -> &Arc<FreeLieAlgebra> {
        self.pres.algebra()
    }

    pub fn cutoff(&self) -> usize {
        self.pres.cutoff()
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    pub fn stats(&self) -> EngineStats {
        EngineStats {
            components: self.components.lock().len(),
            relator_rows: self.relator_rows.load(Ordering::Relaxed),
            closure_rows: self.closure_rows.load(Ordering::Relaxed),
        }
    }

    pub fn zn_degree(&self, key: &FineDegree) -> u64 {
        key.zn_degree(self.pres.generators())
    }

    /// Every fine degree of length `1..=cutoff`, in increasing order.
    pub fn fine_degrees(&self) -> Vec<FineDegree> {
        self.pres.generators().fine_degrees_up_to(self.cutoff())
    }

    fn check_key(&self, key: &FineDegree) -> Result<()> {
        if key.counts().len() != self.pres.generators().len() {
            return Err(Error::DimensionMismatch(format!(
                "fine degree has {} entries for {} generators",
                key.counts().len(),
                self.pres.generators().len()
            )));
        }
        if key.is_empty() {
            return Err(Error::EmptyFineDegree);
        }
        if key.len() > self.cutoff() {
            return Err(Error::BeyondCutoff {
                length: key.len(),
                cutoff: self.cutoff(),
            });
        }
        Ok(())
    }

    /// The component at `key`, computing everything below it first.
    pub fn component(&self, key: &FineDegree) -> Result<Arc<QuotientComponent>> {
        self.check_key(key)?;
        if let Some(c) = self.components.lock().get(key) {
            return Ok(c.clone());
        }
        let mut order = key.proper_parts();
        order.push(key.clone());
        let mut last = None;
        for k in order {
            let cached = self.components.lock().get(&k).cloned();
            let c = match cached {
                Some(c) => c,
                None => {
                    let c = Arc::new(self.compute_component(&k)?);
                    self.components.lock().entry(k).or_insert(c).clone()
                }
            };
            last = Some(c);
        }
        Ok(last.expect("order ends with key"))
    }

    fn cached(&self, key: &FineDegree) -> Arc<QuotientComponent> {
        self.components
            .lock()
            .get(key)
            .cloned()
            .expect("components below a key are computed first")
    }

    fn independent(&self, mut degrees: Vec<u64>) -> bool {
        degrees.sort_unstable();
        if let Some(&v) = self.independence.lock().get(&degrees) {
            return v;
        }
        let n = self.pres.modulus().get();
        let entries: Vec<i64> = degrees.iter().map(|&d| d as i64).collect();
        let v = IndexSequence::new(n, &entries)
            .and_then(|s| is_minus_one_independent(&s))
            .expect("short nonempty sequence");
        self.independence.lock().insert(degrees, v);
        v
    }

    fn compute_component(&self, key: &FineDegree) -> Result<QuotientComponent> {
        self.budget.check()?;
        let alg = self.algebra();
        let gens = self.pres.generators();
        let basis = alg.basis(key);
        let ncols = basis.len();
        let killed =
            |basis: Arc<Basis>| QuotientComponent::new(key.clone(), basis, Span::Full { ncols });
        if ncols == 0 || (self.kill_zero && self.zn_degree(key) == 0) {
            return Ok(killed(basis));
        }
        let mut builder = SpanBuilder::new(ncols);
        if let Some(rows) = self.explicit.get(key) {
            for r in rows {
                builder.push(r.clone());
            }
        }
        if key.len() >= 2 {
            // L_K = sum_g [L_{K-g}, g], and the ideal slice contains [I_{K-g}, g]
            let below: Vec<(usize, Arc<QuotientComponent>)> = key
                .letters()
                .filter_map(|g| {
                    let sub = key.checked_sub(&gens.unit(g))?;
                    (!sub.is_empty()).then(|| (g, self.cached(&sub)))
                })
                .collect();
            if below.iter().all(|(_, c)| c.is_trivial()) {
                return Ok(killed(basis));
            }
            let mut closure = 0usize;
            for (g, sub) in &below {
                let gid = alg.letter_id(*g);
                match sub.relations() {
                    Span::Full { .. } => {
                        for &m in &sub.basis().monos {
                            if builder.is_full() {
                                break;
                            }
                            builder.push(row_from_small(&basis, &alg.bracket_monomials(m, gid)));
                            closure += 1;
                        }
                    }
                    Span::Partial(e) => {
                        for r in e.rows() {
                            if builder.is_full() {
                                break;
                            }
                            let prod = alg.bracket_combinations(
                                &combo_from_row(sub.basis(), r),
                                &[(gid, BigInt::one())],
                            );
                            builder.push(row_from_combo(&basis, prod));
                            closure += 1;
                        }
                    }
                }
            }
            self.closure_rows.fetch_add(closure, Ordering::Relaxed);
            if !builder.is_full() && key.len() >= 4 && (self.metabelian || self.select_second) {
                self.push_relator_instances(key, &basis, &mut builder)?;
            }
        }
        Ok(QuotientComponent::new(key.clone(), basis, builder.finish()))
    }

    /// Instances of the selective families at exactly `key`, with slots
    /// ranging over quotient representatives.
    fn push_relator_instances(
        &self,
        key: &FineDegree,
        basis: &Basis,
        builder: &mut SpanBuilder,
    ) -> Result<()> {
        let alg = self.algebra();
        let mut count = 0usize;
        for p in key.proper_parts() {
            let q = key.checked_sub(&p).expect("part of key");
            if p.len() < 2 || q.len() < 2 {
                continue;
            }
            let zp = self.zn_degree(&p);
            let zq = self.zn_degree(&q);
            let n = self.pres.modulus();
            let left = self.pair_spans(&p)?;
            if left.is_empty() {
                continue;
            }
            if self.metabelian && p <= q {
                let right = self.pair_spans(&q)?;
                for (&c1, rows1) in left.iter() {
                    for (&c3, rows3) in right.iter() {
                        if !self.independent(vec![
                            c1,
                            n.add(zp, n.neg(c1)),
                            c3,
                            n.add(zq, n.neg(c3)),
                        ]) {
                            continue;
                        }
                        for a in rows1 {
                            for b in rows3 {
                                if builder.is_full() {
                                    return Ok(());
                                }
                                builder.push(row_from_combo(basis, alg.bracket_combinations(a, b)));
                                count += 1;
                            }
                        }
                    }
                }
            }
            if self.select_second {
                let right = self.second_spans(&q)?;
                for (&c1, rows1) in left.iter() {
                    for (&d3, rows3) in right.iter() {
                        if !self.independent(vec![c1, n.add(zp, n.neg(c1)), d3]) {
                            continue;
                        }
                        for a in rows1 {
                            for b in rows3 {
                                if builder.is_full() {
                                    return Ok(());
                                }
                                builder.push(row_from_combo(basis, alg.bracket_combinations(a, b)));
                                count += 1;
                            }
                        }
                    }
                }
            }
            self.budget.check()?;
        }
        self.relator_rows.fetch_add(count, Ordering::Relaxed);
        Ok(())
    }

    /// Quotient span of `[u1, u2]` at `key`, grouped by the class
    /// `min(d1, d2)` of the slot degrees. Classes with a zero slot degree
    /// are omitted: they never occur in an independent sequence.
    fn pair_spans(&self, key: &FineDegree) -> Result<Arc<SlotSpans>> {
        if let Some(s) = self.pair_spans.lock().get(key) {
            return Ok(s.clone());
        }
        let spans = Arc::new(self.slot_spans(key, true)?);
        Ok(self
            .pair_spans
            .lock()
            .entry(key.clone())
            .or_insert(spans)
            .clone())
    }

    /// Quotient span of `[u3, x]` at `key`, grouped by the degree of `u3`.
    fn second_spans(&self, key: &FineDegree) -> Result<Arc<SlotSpans>> {
        if let Some(s) = self.second_spans.lock().get(key) {
            return Ok(s.clone());
        }
        let spans = Arc::new(self.slot_spans(key, false)?);
        Ok(self
            .second_spans
            .lock()
            .entry(key.clone())
            .or_insert(spans)
            .clone())
    }

    fn slot_spans(&self, key: &FineDegree, symmetric: bool) -> Result<SlotSpans> {
        let alg = self.algebra();
        let n = self.pres.modulus();
        let comp = self.component(key)?;
        let mut out = SlotSpans::new();
        if comp.is_trivial() {
            return Ok(out);
        }
        let zk = self.zn_degree(key);
        let mut spans: BTreeMap<u64, Echelon> = BTreeMap::new();
        for p1 in key.proper_parts() {
            let p2 = key.checked_sub(&p1).expect("part of key");
            if symmetric && p1 > p2 {
                continue;
            }
            let d1 = self.zn_degree(&p1);
            let d2 = n.add(zk, n.neg(d1));
            if d1 == 0 || (symmetric && d2 == 0) {
                continue;
            }
            let class = if symmetric { d1.min(d2) } else { d1 };
            let c1 = self.component(&p1)?;
            let c2 = self.component(&p2)?;
            if c1.is_trivial() || c2.is_trivial() {
                continue;
            }
            let ech = spans
                .entry(class)
                .or_insert_with(|| Echelon::new(comp.free_dimension()));
            'pairs: for u in c1.quotient_monomials() {
                for v in c2.quotient_monomials() {
                    if ech.rank() == comp.quotient_dimension() {
                        break 'pairs;
                    }
                    let row = row_from_small(comp.basis(), &alg.bracket_monomials(u, v));
                    let red = comp.reduce(&row);
                    if !red.is_zero() {
                        ech.insert(&red.remainder);
                    }
                }
            }
            self.budget.check()?;
        }
        for (class, ech) in spans {
            if ech.rank() > 0 {
                out.insert(
                    class,
                    ech.rows()
                        .map(|r| combo_from_row(comp.basis(), r))
                        .collect(),
                );
            }
        }
        Ok(out)
    }

    /// Integer row of a homogeneous element together with its fine degree
    /// and the denominator that was cleared. `None` for zero.
    pub fn element_row(&self, e: &LieElement) -> Result<Option<(FineDegree, SparseRow, BigInt)>> {
        let alg = self.algebra();
        let Some(key) = alg.fine_degree_of_element(e)? else {
            return Ok(None);
        };
        self.check_key(&key)?;
        let (combo, denom) = alg.to_integer_combination(e)?;
        let basis = alg.basis(&key);
        Ok(Some((key, row_from_combo(&basis, combo), denom)))
    }

    /// Element of fine degree `key` with the given rational row.
    pub fn element_from_row(&self, key: &FineDegree, row: &[(u32, BigRational)]) -> LieElement {
        let alg = self.algebra();
        let basis = alg.basis(key);
        let mut e = LieElement::zero();
        for (c, v) in row {
            e.add_term(
                HallMonomial::from_word(alg.word(basis.monos[*c as usize])),
                v.clone(),
            );
        }
        e
    }

    /// Canonical representative modulo the relations, supported on
    /// quotient monomials.
    pub fn reduce(&self, e: &LieElement) -> Result<LieElement> {
        let Some((key, row, denom)) = self.element_row(e)? else {
            return Ok(LieElement::zero());
        };
        let comp = self.component(&key)?;
        let red = comp.reduce(&row);
        let scale = &red.scale * BigRational::from_integer(denom);
        let rational: Vec<(u32, BigRational)> = red
            .remainder
            .iter()
            .map(|(c, v)| (*c, BigRational::from_integer(v.clone()) / &scale))
            .collect();
        Ok(self.element_from_row(&key, &rational))
    }

    /// Whether a homogeneous element vanishes in the quotient.
    pub fn is_zero(&self, e: &LieElement) -> Result<bool> {
        let Some((key, row, _)) = self.element_row(e)? else {
            return Ok(true);
        };
        Ok(self.component(&key)?.reduce(&row).is_zero())
    }

    /// Every relator instance of fine degree dominated by `key`, with slots
    /// ranging over free Lyndon monomials. This enumerates instances
    /// directly and serves as an independent route to the relation ideal.
    pub fn instantiate_relators(&self, key: &FineDegree) -> Result<Vec<LieElement>> {
        self.check_key(key)?;
        let alg = self.algebra();
        let n = self.pres.modulus();
        let mut parts = key.proper_parts();
        parts.push(key.clone());
        let monos: BTreeMap<FineDegree, Vec<MonoId>> = parts
            .iter()
            .map(|p| (p.clone(), alg.basis(p).monos.clone()))
            .collect();
        let mut out = Vec::new();
        for fam in self.pres.families() {
            match fam {
                RelatorFamily::ZeroComponentKill => {
                    for p in &parts {
                        if self.zn_degree(p) == 0 {
                            out.extend(monos[p].iter().map(|&m| alg.monomial_element(m)));
                        }
                    }
                }
                RelatorFamily::ExplicitList(elems) => {
                    for e in elems {
                        if let Some(k) = alg.fine_degree_of_element(e)? {
                            if k.dominated_by(key) {
                                out.push(e.clone());
                            }
                        }
                    }
                }
                RelatorFamily::SelectiveMetabelian | RelatorFamily::SelectSecond => {
                    let metabelian = matches!(fam, RelatorFamily::SelectiveMetabelian);
                    // ordered quadruples of nonzero fine degrees with sum <= key
                    let mut quads = Vec::new();
                    for k1 in &parts {
                        for k2 in &parts {
                            let Some(r2) = key.checked_sub(&k1.add(k2)) else {
                                continue;
                            };
                            for k3 in &parts {
                                let Some(r3) = r2.checked_sub(k3) else {
                                    continue;
                                };
                                for k4 in &parts {
                                    if k4.dominated_by(&r3) {
                                        quads.push([k1, k2, k3, k4]);
                                    }
                                }
                            }
                        }
                    }
                    for q in quads {
                        let d: Vec<u64> = q.iter().map(|k| self.zn_degree(k)).collect();
                        let slots = if metabelian { 4 } else { 3 };
                        let entries: Vec<i64> = d[..slots].iter().map(|&x| x as i64).collect();
                        if !is_minus_one_independent(&IndexSequence::new(n.get(), &entries)?)? {
                            continue;
                        }
                        for &u1 in &monos[q[0]] {
                            for &u2 in &monos[q[1]] {
                                let left = alg.bracket_monomials(u1, u2);
                                if left.is_empty() {
                                    continue;
                                }
                                for &u3 in &monos[q[2]] {
                                    for &u4 in &monos[q[3]] {
                                        let right = alg.bracket_monomials(u3, u4);
                                        let l: Combo = left
                                            .iter()
                                            .map(|&(m, c)| (m, BigInt::from(c)))
                                            .collect();
                                        let r: Combo = right
                                            .iter()
                                            .map(|&(m, c)| (m, BigInt::from(c)))
                                            .collect();
                                        let prod = alg.bracket_combinations(&l, &r);
                                        if !prod.is_empty() {
                                            out.push(
                                                alg.from_integer_combination(&prod, &BigInt::one()),
                                            );
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out.retain(|e| !e.is_zero());
        Ok(out)
    }

    /// Alias of [`Quotient::component`].
    pub fn relation_subspace(&self, key: &FineDegree) -> Result<Arc<QuotientComponent>> {
        self.component(key)
    }
}
