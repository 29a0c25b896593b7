use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zn::{is_minus_one_independent, IndexSequence, Modulus};

use super::algebra::{AlgebraInput, AutomorphismPair, SCAlgebra};
use super::cyclotomic::{CyclotomicField, CyclotomicNumber, RationalJson};
use super::matrix::{is_zero_vector, CycMatrix, CycVector};

/// One named pass/fail check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedCheck {
    pub name: String,
    pub passed: bool,
    /// Basis indices locating the failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl NamedCheck {
    fn pass(name: &str) -> Self {
        NamedCheck {
            name: name.into(),
            passed: true,
            witness: None,
            detail: None,
        }
    }

    fn fail(name: &str, witness: Option<Vec<usize>>, detail: String) -> Self {
        NamedCheck {
            name: name.into(),
            passed: false,
            witness,
            detail: Some(detail),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairReport {
    pub passed: bool,
    pub checks: Vec<NamedCheck>,
}

impl PairReport {
    pub fn check(&self, name: &str) -> Option<&NamedCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check_square(alg: &SCAlgebra, m: &CycMatrix, name: &str) -> Result<()> {
    if m.rows() != alg.dimension() || m.cols() != alg.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "{name} is {}x{} but the algebra has dimension {}",
            m.rows(),
            m.cols(),
            alg.dimension()
        )));
    }
    if m.field().order() != alg.field().order() {
        return Err(Error::DimensionMismatch(format!(
            "{name} is defined over another cyclotomic field"
        )));
    }
    Ok(())
}

fn check_pair_shape(alg: &SCAlgebra, aut: &AutomorphismPair) -> Result<()> {
    Modulus::new(aut.order)?;
    if aut.order != alg.field().order() {
        return Err(Error::DimensionMismatch(format!(
            "automorphism order {} but the algebra is over Q(w_{})",
            aut.order,
            alg.field().order()
        )));
    }
    check_square(alg, &aut.phi, "phi")?;
    check_square(alg, &aut.h, "h")
}

fn bracket_check(alg: &SCAlgebra, m: &CycMatrix, name: &str) -> NamedCheck {
    match alg.automorphism_violation(m) {
        None => NamedCheck::pass(name),
        Some((i, j)) => NamedCheck::fail(
            name,
            Some(vec![i, j]),
            format!(
                "does not preserve [{}, {}]",
                alg.labels()[i],
                alg.labels()[j]
            ),
        ),
    }
}

/// Checks that `phi` and `h` are automorphisms, `phi` has order exactly `n`,
/// `h^2 = 1` and `h phi h^-1 = phi^-1`.
pub fn verify_automorphism_pair(alg: &SCAlgebra, aut: &AutomorphismPair) -> Result<PairReport> {
    check_pair_shape(alg, aut)?;
    let n = aut.order;
    let mut checks = vec![
        bracket_check(alg, &aut.phi, "phi_preserves_bracket"),
        bracket_check(alg, &aut.h, "h_preserves_bracket"),
    ];

    let phi_n = aut.phi.pow(n);
    let order = if !phi_n.is_identity() {
        NamedCheck::fail("phi_order", None, format!("phi^{n} is not the identity"))
    } else if let Some(d) = (1..n)
        .filter(|d| n.is_multiple_of(*d))
        .find(|&d| aut.phi.pow(d).is_identity())
    {
        NamedCheck::fail(
            "phi_order",
            None,
            format!("phi^{d} is already the identity, so the order is not {n}"),
        )
    } else {
        NamedCheck::pass("phi_order")
    };
    checks.push(order);

    checks.push(if aut.h.mul(&aut.h).is_identity() {
        NamedCheck::pass("h_involution")
    } else {
        NamedCheck::fail("h_involution", None, "h^2 is not the identity".into())
    });

    let conj = match aut.h.inverse() {
        None => NamedCheck::fail("conjugation", None, "h is not invertible".into()),
        Some(h_inv) => {
            let lhs = aut.h.mul(&aut.phi).mul(&h_inv);
            if lhs.mul(&aut.phi).is_identity() {
                NamedCheck::pass("conjugation")
            } else {
                NamedCheck::fail("conjugation", None, "h phi h^-1 is not phi^-1".into())
            }
        }
    };
    checks.push(conj);

    Ok(PairReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

/// `L = L_0 + ... + L_{n-1}` with `L_i` the `w^i`-eigenspace.
#[derive(Debug, Clone)]
pub struct Grading {
    order: u64,
    dimension: usize,
    components: Vec<Vec<CycVector>>,
    /// Inverse of the matrix whose columns are all component bases in order.
    coordinates: CycMatrix,
    offsets: Vec<usize>,
}

impl Grading {
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn component(&self, i: u64) -> &[CycVector] {
        &self.components[(i % self.order) as usize]
    }

    pub fn dimensions(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }

    /// Whether `v` lies in `L_i`.
    pub fn lies_in(&self, v: &[CyclotomicNumber], i: u64) -> bool {
        let c = self.coordinates.apply(v);
        let i = (i % self.order) as usize;
        let (lo, hi) = (self.offsets[i], self.offsets[i] + self.components[i].len());
        c.iter()
            .enumerate()
            .all(|(k, x)| (lo..hi).contains(&k) || x.is_zero())
    }

    pub fn to_report(&self) -> GradingReport {
        GradingReport {
            order: self.order,
            dimension: self.dimension,
            component_dimensions: self.dimensions(),
            components: self
                .components
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|v| v.iter().map(|x| x.to_json()).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

/// Serializable form of a [`Grading`]: component `i` is a list of basis vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingReport {
    pub order: u64,
    pub dimension: usize,
    pub component_dimensions: Vec<usize>,
    pub components: Vec<Vec<Vec<Vec<RationalJson>>>>,
}

/// Eigenspace grading from `phi` alone, for any `n >= 1`.
///
/// `phi` must be a bracket-preserving map with `phi^n = 1`; the grading law
/// `[L_i, L_j] <= L_{i+j}` is checked on component bases.
pub fn decompose_eigenspaces(alg: &SCAlgebra, phi: &CycMatrix, order: u64) -> Result<Grading> {
    check_square(alg, phi, "phi")?;
    if order != alg.field().order() {
        return Err(Error::DimensionMismatch(format!(
            "grading order {order} but the algebra is over Q(w_{})",
            alg.field().order()
        )));
    }
    if let Some((i, j)) = alg.automorphism_violation(phi) {
        return Err(Error::NotAnAutomorphism(format!(
            "phi does not preserve [{}, {}]",
            alg.labels()[i],
            alg.labels()[j]
        )));
    }
    let field: &std::sync::Arc<CyclotomicField> = alg.field();
    let d = alg.dimension();
    let components: Vec<Vec<CycVector>> = (0..order)
        .map(|i| phi.shift(&field.omega_power(i as i64)).kernel())
        .collect();
    let found: usize = components.iter().map(Vec::len).sum();
    if found != d {
        return Err(Error::IncompleteDecomposition { found, expected: d });
    }
    let all: Vec<CycVector> = components.iter().flatten().cloned().collect();
    let coordinates = CycMatrix::from_columns(field, d, &all)
        .inverse()
        .ok_or_else(|| Error::Internal("eigenspaces are not independent".into()))?;
    let mut offsets = Vec::with_capacity(components.len());
    let mut acc = 0;
    for c in &components {
        offsets.push(acc);
        acc += c.len();
    }
    let grading = Grading {
        order,
        dimension: d,
        components,
        coordinates,
        offsets,
    };
    for i in 0..order {
        for j in i..order {
            for u in grading.component(i) {
                for v in grading.component(j) {
                    if !grading.lies_in(&alg.bracket(u, v), i + j) {
                        return Err(Error::Internal(format!(
                            "[L_{i}, L_{j}] is not contained in L_{}",
                            (i + j) % order
                        )));
                    }
                }
            }
        }
    }
    Ok(grading)
}

/// Eigenspace grading of `aut.phi`, also checking that `h` maps `L_i` onto `L_{-i}`.
pub fn eigenspace_decomposition(alg: &SCAlgebra, aut: &AutomorphismPair) -> Result<Grading> {
    check_square(alg, &aut.h, "h")?;
    let grading = decompose_eigenspaces(alg, &aut.phi, aut.order)?;
    let n = aut.order;
    for i in 0..n {
        let target = (n - i) % n;
        if grading.component(i).len() != grading.component(target).len() {
            return Err(Error::Internal(format!(
                "dim L_{i} differs from dim L_{target}"
            )));
        }
        for v in grading.component(i) {
            if !grading.lies_in(&aut.h.apply(v), target) {
                return Err(Error::Internal(format!(
                    "h does not map L_{i} into L_{target}"
                )));
            }
        }
    }
    Ok(grading)
}

/// Basis of `{x : map(x) = x}`, checked to be a subalgebra.
pub fn fixed_subalgebra(alg: &SCAlgebra, map: &CycMatrix) -> Result<Vec<CycVector>> {
    check_square(alg, map, "map")?;
    let basis = map.shift(&alg.field().one()).kernel();
    let rank = basis.len();
    for (a, u) in basis.iter().enumerate() {
        for v in &basis[a + 1..] {
            let w = alg.bracket(u, v);
            if is_zero_vector(&w) {
                continue;
            }
            let mut cols = basis.clone();
            cols.push(w);
            if CycMatrix::from_columns(alg.field(), alg.dimension(), &cols).rank() != rank {
                return Err(Error::NotAnAutomorphism(
                    "fixed points are not closed under the bracket".into(),
                ));
            }
        }
    }
    Ok(basis)
}

fn render(v: &[CyclotomicNumber]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub passed: bool,
    /// `dim C_L(F)`; the hypothesis asks for 0.
    pub fixed_phi_dimension: usize,
    /// A nonzero `phi`-fixed vector, in basis coordinates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_phi_witness: Option<Vec<String>>,
    pub fixed_h_dimension: usize,
    pub fixed_h_metabelian: bool,
    /// Positions `(p, q, r, s)` in the `C_L(H)` basis with `[[c_p, c_q], [c_r, c_s]] != 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metabelian_witness: Option<Vec<usize>>,
}

/// `C_L(F) = 0` and `[[C, C], [C, C]] = 0` for `C = C_L(H)`, by direct
/// four-fold brackets over a basis of `C`.
pub fn verify_hypotheses(alg: &SCAlgebra, aut: &AutomorphismPair) -> Result<HypothesisReport> {
    check_pair_shape(alg, aut)?;
    let fixed_phi = fixed_subalgebra(alg, &aut.phi)?;
    let fixed_h = fixed_subalgebra(alg, &aut.h)?;
    let mut inner: Vec<((usize, usize), CycVector)> = Vec::new();
    for p in 0..fixed_h.len() {
        for q in p + 1..fixed_h.len() {
            let w = alg.bracket(&fixed_h[p], &fixed_h[q]);
            if !is_zero_vector(&w) {
                inner.push(((p, q), w));
            }
        }
    }
    let mut metabelian_witness = None;
    'outer: for (a, (pq, x)) in inner.iter().enumerate() {
        for (rs, y) in &inner[a + 1..] {
            if !is_zero_vector(&alg.bracket(x, y)) {
                metabelian_witness = Some(vec![pq.0, pq.1, rs.0, rs.1]);
                break 'outer;
            }
        }
    }
    Ok(HypothesisReport {
        passed: fixed_phi.is_empty() && metabelian_witness.is_none(),
        fixed_phi_dimension: fixed_phi.len(),
        fixed_phi_witness: fixed_phi.first().map(|v| render(v)),
        fixed_h_dimension: fixed_h.len(),
        fixed_h_metabelian: metabelian_witness.is_none(),
        metabelian_witness,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectiveWitness {
    /// Component indices `(a_1, a_2, a_3, a_4)`.
    pub indices: Vec<u64>,
    /// Basis positions inside each component.
    pub positions: Vec<usize>,
    /// `[[x_1, x_2], [x_3, x_4]]` in basis coordinates.
    pub value: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectiveReport {
    pub passed: bool,
    pub index_quadruples: usize,
    pub basis_quadruples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<SelectiveWitness>,
}

/// `[u_p, v_q]` tagged with the positions `(p, q)` in the component bases.
type PositionedBracket = ((usize, usize), CycVector);

/// `[[x_1, x_2], [x_3, x_4]] = 0` for basis vectors `x_k` of `L_{a_k}` whenever
/// `(a_1, a_2, a_3, a_4)` is (-1)-independent.
pub fn verify_selective_condition(alg: &SCAlgebra, grading: &Grading) -> Result<SelectiveReport> {
    let n = grading.order();
    Modulus::new(n)?;
    if grading.dimension() != alg.dimension() {
        return Err(Error::DimensionMismatch(
            "grading and algebra dimensions differ".into(),
        ));
    }
    let live: Vec<u64> = (1..n)
        .filter(|&i| !grading.component(i).is_empty())
        .collect();
    let mut products: HashMap<(u64, u64), Vec<PositionedBracket>> = HashMap::new();
    let mut pair = |i: u64, j: u64| -> Vec<PositionedBracket> {
        products
            .entry((i, j))
            .or_insert_with(|| {
                let mut out = Vec::new();
                for (p, u) in grading.component(i).iter().enumerate() {
                    for (q, v) in grading.component(j).iter().enumerate() {
                        out.push(((p, q), alg.bracket(u, v)));
                    }
                }
                out
            })
            .clone()
    };
    let mut report = SelectiveReport {
        passed: true,
        index_quadruples: 0,
        basis_quadruples: 0,
        witness: None,
    };
    for &a1 in &live {
        for &a2 in &live {
            for &a3 in &live {
                for &a4 in &live {
                    let seq = IndexSequence::new(n, &[a1 as i64, a2 as i64, a3 as i64, a4 as i64])?;
                    if !is_minus_one_independent(&seq)? {
                        continue;
                    }
                    report.index_quadruples += 1;
                    let left = pair(a1, a2);
                    let right = pair(a3, a4);
                    for (pq, x) in &left {
                        for (rs, y) in &right {
                            report.basis_quadruples += 1;
                            let w = alg.bracket(x, y);
                            if !is_zero_vector(&w) {
                                report.passed = false;
                                report.witness = Some(SelectiveWitness {
                                    indices: vec![a1, a2, a3, a4],
                                    positions: vec![pq.0, pq.1, rs.0, rs.1],
                                    value: render(&w),
                                });
                                return Ok(report);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Everything derivable from an algebra file: the pair checks when `h` is
/// present, then the grading, the hypotheses and the selective condition.
/// The grading is absent when the pair checks fail.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub version: String,
    pub order: u64,
    pub dimension: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub automorphism_pair: Option<PairReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grading: Option<GradingReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypotheses: Option<HypothesisReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selective: Option<SelectiveReport>,
}

pub fn analyze_algebra(input: &AlgebraInput) -> Result<DecompositionReport> {
    let alg = &input.algebra;
    let order = alg.field().order();
    let mut report = DecompositionReport {
        version: crate::harness::VERSION.to_string(),
        order,
        dimension: alg.dimension(),
        passed: false,
        automorphism_pair: None,
        grading: None,
        hypotheses: None,
        selective: None,
    };
    let grading = match (input.pair(), &input.phi) {
        (Some(aut), _) => {
            let pair = verify_automorphism_pair(alg, &aut)?;
            let ok = pair.passed;
            report.automorphism_pair = Some(pair);
            if ok {
                report.hypotheses = Some(verify_hypotheses(alg, &aut)?);
                Some(eigenspace_decomposition(alg, &aut)?)
            } else {
                None
            }
        }
        (None, Some(phi)) => Some(decompose_eigenspaces(alg, phi, order)?),
        (None, None) => {
            return Err(Error::Parse(
                "the algebra file has no `phi` to decompose by".into(),
            ))
        }
    };
    if let Some(g) = &grading {
        report.selective = Some(verify_selective_condition(alg, g)?);
        report.grading = Some(g.to_report());
    }
    report.passed = grading.is_some()
        && report.hypotheses.as_ref().is_none_or(|h| h.passed)
        && report.selective.as_ref().is_some_and(|s| s.passed);
    Ok(report)
}
