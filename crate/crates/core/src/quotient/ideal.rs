use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::engine::{combo_from_row, row_from_combo, row_from_small, Combo, Quotient};
use crate::error::{Error, Result};
use crate::free::{FineDegree, LieElement};
use crate::linalg::Echelon;

/// The algebra an ideal is taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ambient {
    /// The whole quotient `L`.
    Whole,
    /// The derived subalgebra `M = [L, L]`.
    Derived,
}

/// A graded subspace of the quotient, one echelon per nonzero fine degree.
///
/// Rows are remainders modulo the relations, so they are supported on
/// quotient monomials and two snapshots compare directly.
#[derive(Debug, Clone)]
pub struct IdealSnapshot {
    ambient: Ambient,
    description: String,
    cutoff: usize,
    components: BTreeMap<FineDegree, Arc<Echelon>>,
}

/// JSON summary of an [`IdealSnapshot`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotReport {
    pub description: String,
    pub ambient: Ambient,
    pub cutoff: usize,
    /// Fine-degree label to dimension, nonzero components only.
    pub components: BTreeMap<String, usize>,
    /// Zn-degree to total dimension.
    pub zn_census: BTreeMap<u64, usize>,
    pub total_dimension: usize,
}

impl IdealSnapshot {
    pub fn empty(ambient: Ambient, description: impl Into<String>, cutoff: usize) -> Self {
        IdealSnapshot {
            ambient,
            description: description.into(),
            cutoff,
            components: BTreeMap::new(),
        }
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&FineDegree, &Arc<Echelon>)> {
        self.components.iter()
    }

    pub fn component(&self, key: &FineDegree) -> Option<&Arc<Echelon>> {
        self.components.get(key)
    }

    pub fn dimension(&self, key: &FineDegree) -> usize {
        self.components.get(key).map_or(0, |e| e.rank())
    }

    pub fn total_dimension(&self) -> usize {
        self.components.values().map(|e| e.rank()).sum()
    }

    /// Zn-degrees of the nonzero components.
    pub fn nontrivial_degrees(&self, q: &Quotient) -> BTreeSet<u64> {
        self.components.keys().map(|k| q.zn_degree(k)).collect()
    }

    /// First fine degree where `self` is not contained in `other`, with a
    /// witness row.
    pub fn first_excess(&self, other: &IdealSnapshot) -> Option<(FineDegree, Vec<(u32, BigInt)>)> {
        for (key, ech) in &self.components {
            for row in ech.rows() {
                let inside = other.components.get(key).is_some_and(|o| o.contains(row));
                if !inside {
                    return Some((key.clone(), row.clone()));
                }
            }
        }
        None
    }

    pub fn is_subspace_of(&self, other: &IdealSnapshot) -> bool {
        self.first_excess(other).is_none()
    }

    /// Basis elements of the component at `key`, as free-algebra
    /// representatives.
    pub fn basis_elements(&self, q: &Quotient, key: &FineDegree) -> Vec<LieElement> {
        let Some(ech) = self.components.get(key) else {
            return Vec::new();
        };
        ech.rows()
            .map(|r| {
                let rational: Vec<(u32, BigRational)> = r
                    .iter()
                    .map(|(c, v)| (*c, BigRational::from_integer(v.clone())))
                    .collect();
                q.element_from_row(key, &rational)
            })
            .collect()
    }

    pub fn report(&self, q: &Quotient) -> SnapshotReport {
        let gens = q.presentation().generators();
        let mut zn_census = BTreeMap::new();
        let mut components = BTreeMap::new();
        for (k, e) in &self.components {
            components.insert(k.label(gens), e.rank());
            *zn_census.entry(q.zn_degree(k)).or_insert(0) += e.rank();
        }
        SnapshotReport {
            description: self.description.clone(),
            ambient: self.ambient,
            cutoff: self.cutoff,
            components,
            zn_census,
            total_dimension: self.total_dimension(),
        }
    }
}

/// Least `k` with `L^(k) = 0`, and the level past which the truncation
/// alone forces the derived series to vanish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedLength {
    pub length: usize,
    /// `ceil(log2(cutoff + 1))`: `L^(k)` lives in length `>= 2^k`.
    pub vacuity_threshold: usize,
    /// `length < vacuity_threshold`; otherwise the value reflects the cutoff.
    pub informative: bool,
    /// Total dimensions of `L^(1), L^(2), ...` up to the first zero term.
    pub term_dimensions: Vec<usize>,
}

pub fn vacuity_threshold(cutoff: usize) -> usize {
    let mut k = 0;
    while (1usize << k) <= cutoff {
        k += 1;
    }
    k
}

/// Zn-degrees of an ideal's nonzero components and of the ambient
/// components that fail to centralize it.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CentralizerCensus {
    pub nontrivial: BTreeSet<u64>,
    pub noncentralizing: BTreeSet<u64>,
}

impl CentralizerCensus {
    /// `|noncentralizing| <= |nontrivial|^2`.
    pub fn bound_holds(&self) -> bool {
        self.noncentralizing.len() <= self.nontrivial.len() * self.nontrivial.len()
    }
}

impl Quotient {
    fn keys_above(&self, seeds: impl Iterator<Item = FineDegree> + Clone) -> Vec<FineDegree> {
        self.fine_degrees()
            .into_iter()
            .filter(|k| seeds.clone().any(|s| s.dominated_by(k)))
            .collect()
    }

    /// Smallest ideal of the ambient algebra containing `seeds`, within the
    /// cutoff. Closure brackets with generators for `L` and with quotient
    /// monomials of length at least 2 for `M`; the Jacobi identity makes
    /// these spanning sets sufficient.
    pub fn ideal_generated(
        &self,
        seeds: &[LieElement],
        ambient: Ambient,
        description: &str,
    ) -> Result<IdealSnapshot> {
        let alg = self.algebra();
        let mut seed_rows: BTreeMap<FineDegree, Vec<Vec<(u32, BigInt)>>> = BTreeMap::new();
        for s in seeds {
            let Some((key, row, _)) = self.element_row(s)? else {
                continue;
            };
            seed_rows.entry(key).or_default().push(row);
        }
        let mut out = IdealSnapshot::empty(ambient, description, self.cutoff());
        if seed_rows.is_empty() {
            return Ok(out);
        }
        let gens = self.presentation().generators();
        for key in self.keys_above(seed_rows.keys().cloned()) {
            self.budget().check()?;
            let comp = self.component(&key)?;
            if comp.is_trivial() {
                continue;
            }
            let qdim = comp.quotient_dimension();
            let mut ech = Echelon::new(comp.free_dimension());
            let add = |ech: &mut Echelon, row: Vec<(u32, BigInt)>| {
                let red = comp.reduce(&row);
                if !red.is_zero() {
                    ech.insert(&red.remainder);
                }
            };
            for row in seed_rows.get(&key).into_iter().flatten() {
                add(&mut ech, row.clone());
            }
            match ambient {
                Ambient::Whole => {
                    for g in key.letters() {
                        let Some(sub) = key.checked_sub(&gens.unit(g)) else {
                            continue;
                        };
                        let Some(below) = out.components.get(&sub) else {
                            continue;
                        };
                        let sub_basis = alg.basis(&sub);
                        let gid: Combo = vec![(alg.letter_id(g), BigInt::one())];
                        for r in below.rows() {
                            if ech.rank() == qdim {
                                break;
                            }
                            let prod =
                                alg.bracket_combinations(&combo_from_row(&sub_basis, r), &gid);
                            add(&mut ech, row_from_combo(comp.basis(), prod));
                        }
                    }
                }
                Ambient::Derived => {
                    let below: Vec<(FineDegree, Arc<Echelon>)> = out
                        .components
                        .iter()
                        .filter(|(s, _)| **s != key && s.dominated_by(&key))
                        .map(|(s, e)| (s.clone(), e.clone()))
                        .collect();
                    for (sub, rows) in below {
                        let other = key.checked_sub(&sub).expect("dominated");
                        if other.len() < 2 {
                            continue;
                        }
                        let ocomp = self.component(&other)?;
                        let sub_basis = alg.basis(&sub);
                        for r in rows.rows() {
                            let x = combo_from_row(&sub_basis, r);
                            for m in ocomp.quotient_monomials() {
                                if ech.rank() == qdim {
                                    break;
                                }
                                let prod = alg.bracket_combinations(&x, &[(m, BigInt::one())]);
                                add(&mut ech, row_from_combo(comp.basis(), prod));
                            }
                        }
                    }
                }
            }
            if ech.rank() > 0 {
                out.components.insert(key, Arc::new(ech));
            }
        }
        Ok(out)
    }

    /// Linear span of homogeneous elements in the quotient, without closure.
    pub fn span_snapshot(
        &self,
        elements: &[LieElement],
        ambient: Ambient,
        description: &str,
    ) -> Result<IdealSnapshot> {
        let mut out = IdealSnapshot::empty(ambient, description, self.cutoff());
        for e in elements {
            let Some((key, row, _)) = self.element_row(e)? else {
                continue;
            };
            let comp = self.component(&key)?;
            let red = comp.reduce(&row);
            if red.is_zero() {
                continue;
            }
            let ech = out
                .components
                .entry(key)
                .or_insert_with(|| Arc::new(Echelon::new(comp.free_dimension())));
            Arc::make_mut(ech).insert(&red.remainder);
        }
        Ok(out)
    }

    /// The quotient itself as a snapshot (`L^(0)`).
    pub fn whole(&self) -> Result<IdealSnapshot> {
        self.layer_snapshot(1, "L")
    }

    fn layer_snapshot(&self, min_len: usize, description: &str) -> Result<IdealSnapshot> {
        let mut out = IdealSnapshot::empty(Ambient::Whole, description, self.cutoff());
        for key in self.fine_degrees() {
            if key.len() < min_len {
                continue;
            }
            let comp = self.component(&key)?;
            if comp.is_trivial() {
                continue;
            }
            let mut ech = Echelon::new(comp.free_dimension());
            for &c in comp.quotient_columns() {
                ech.insert(&[(c, BigInt::one())]);
            }
            out.components.insert(key, Arc::new(ech));
        }
        Ok(out)
    }

    /// `[A, B]` for graded subspaces `A`, `B`, reduced modulo the relations.
    pub fn bracket_snapshots(
        &self,
        a: &IdealSnapshot,
        b: &IdealSnapshot,
        description: &str,
    ) -> Result<IdealSnapshot> {
        let alg = self.algebra();
        let mut out = IdealSnapshot::empty(a.ambient, description, self.cutoff());
        let mut acc: BTreeMap<FineDegree, Echelon> = BTreeMap::new();
        for (ka, ea) in &a.components {
            let basis_a = alg.basis(ka);
            for (kb, eb) in &b.components {
                let key = ka.add(kb);
                if key.len() > self.cutoff() {
                    continue;
                }
                // [A_ka, B_kb] and [A_kb, B_ka] coincide up to sign when a == b
                if std::ptr::eq(a, b) && kb < ka {
                    continue;
                }
                self.budget().check()?;
                let comp = self.component(&key)?;
                if comp.is_trivial() {
                    continue;
                }
                let ech = acc
                    .entry(key.clone())
                    .or_insert_with(|| Echelon::new(comp.free_dimension()));
                let basis_b = alg.basis(kb);
                'rows: for ra in ea.rows() {
                    let x = combo_from_row(&basis_a, ra);
                    for rb in eb.rows() {
                        if ech.rank() == comp.quotient_dimension() {
                            break 'rows;
                        }
                        let prod = alg.bracket_combinations(&x, &combo_from_row(&basis_b, rb));
                        let red = comp.reduce(&row_from_combo(comp.basis(), prod));
                        if !red.is_zero() {
                            ech.insert(&red.remainder);
                        }
                    }
                }
            }
        }
        for (k, e) in acc {
            if e.rank() > 0 {
                out.components.insert(k, Arc::new(e));
            }
        }
        Ok(out)
    }

    /// `L^(1), ..., L^(depth)`, each the span of brackets of the previous
    /// term's component bases.
    pub fn derived_series(&self, depth: usize) -> Result<Vec<IdealSnapshot>> {
        if depth == 0 {
            return Err(Error::Parse(
                "derived series depth must be at least 1".into(),
            ));
        }
        // [L, L] is spanned by the monomials of length >= 2
        let mut out = vec![self.layer_snapshot(2, "L^(1)")?];
        while out.len() < depth {
            let prev = out.last().expect("nonempty");
            let next = if prev.is_zero() {
                IdealSnapshot::empty(
                    Ambient::Whole,
                    format!("L^({})", out.len() + 1),
                    self.cutoff(),
                )
            } else {
                self.bracket_snapshots(prev, prev, &format!("L^({})", out.len() + 1))?
            };
            out.push(next);
        }
        Ok(out)
    }

    pub fn derived_length(&self) -> Result<DerivedLength> {
        let threshold = vacuity_threshold(self.cutoff());
        if self.whole()?.is_zero() {
            return Ok(DerivedLength {
                length: 0,
                vacuity_threshold: threshold,
                informative: true,
                term_dimensions: Vec::new(),
            });
        }
        let mut dims = Vec::new();
        let mut term = self.layer_snapshot(2, "L^(1)")?;
        let mut k = 1;
        loop {
            dims.push(term.total_dimension());
            if term.is_zero() {
                break;
            }
            k += 1;
            term = self.bracket_snapshots(&term, &term, &format!("L^({k})"))?;
        }
        Ok(DerivedLength {
            length: k,
            vacuity_threshold: threshold,
            informative: k < threshold,
            term_dimensions: dims,
        })
    }

    /// Zn-degrees where `t` is nonzero, and zn-degrees `i` of the ambient
    /// algebra with `[L_i, t] != 0` inside the cutoff.
    pub fn centralizer_census(&self, t: &IdealSnapshot) -> Result<CentralizerCensus> {
        let alg = self.algebra();
        let mut census = CentralizerCensus {
            nontrivial: t.nontrivial_degrees(self),
            noncentralizing: BTreeSet::new(),
        };
        let min_len = match t.ambient {
            Ambient::Whole => 1,
            Ambient::Derived => 2,
        };
        let ambient_keys = self.fine_degrees();
        for (kt, et) in &t.components {
            let basis_t = alg.basis(kt);
            let rows_t: Vec<Combo> = et.rows().map(|r| combo_from_row(&basis_t, r)).collect();
            for k1 in &ambient_keys {
                if k1.len() < min_len || k1.len() + kt.len() > self.cutoff() {
                    continue;
                }
                let i = self.zn_degree(k1);
                if census.noncentralizing.contains(&i) {
                    continue;
                }
                self.budget().check()?;
                let c1 = self.component(k1)?;
                let key = k1.add(kt);
                let comp = self.component(&key)?;
                if c1.is_trivial() || comp.is_trivial() {
                    continue;
                }
                'search: for m in c1.quotient_monomials() {
                    for x in &rows_t {
                        let prod = alg.bracket_combinations(&[(m, BigInt::one())], x);
                        if !comp.reduce(&row_from_combo(comp.basis(), prod)).is_zero() {
                            census.noncentralizing.insert(i);
                            break 'search;
                        }
                    }
                }
            }
        }
        Ok(census)
    }

    /// Whether `[x, y]` of two quotient monomials vanishes; a helper for
    /// grading-law checks.
    pub fn monomial_bracket_vanishes(
        &self,
        x: crate::free::MonoId,
        y: crate::free::MonoId,
    ) -> Result<bool> {
        let alg = self.algebra();
        let key = alg.fine_degree_of(x).add(&alg.fine_degree_of(y));
        if key.len() > self.cutoff() {
            return Ok(true);
        }
        let comp = self.component(&key)?;
        Ok(comp
            .reduce(&row_from_small(comp.basis(), &alg.bracket_monomials(x, y)))
            .is_zero())
    }
}
