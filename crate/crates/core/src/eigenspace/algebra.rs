use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::cyclotomic::{CyclotomicField, CyclotomicNumber, RationalJson};
use super::matrix::{is_zero_vector, CycMatrix, CycVector};

/// Finite-dimensional Lie algebra over `Q(w_n)` given by structure constants.
///
/// Antisymmetry and the Jacobi identity are checked on construction.
#[derive(Clone)]
pub struct SCAlgebra {
    field: Arc<CyclotomicField>,
    labels: Vec<String>,
    /// `[e_i, e_j]` for `i < j`, nonzero entries only.
    table: BTreeMap<(usize, usize), CycVector>,
}

impl std::fmt::Debug for SCAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SCAlgebra")
            .field("order", &self.field.order())
            .field("basis", &self.labels)
            .field("nonzero_brackets", &self.table.len())
            .finish()
    }
}

/// One structure constant: the coefficient of `e_k` in `[e_i, e_j]`.
#[derive(Debug, Clone)]
pub struct StructureConstant {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: CyclotomicNumber,
}

impl SCAlgebra {
    pub fn new(
        field: &Arc<CyclotomicField>,
        labels: Vec<String>,
        constants: Vec<StructureConstant>,
    ) -> Result<Self> {
        let d = labels.len();
        let mut raw: BTreeMap<(usize, usize), CycVector> = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for c in constants {
            if c.i >= d || c.j >= d || c.k >= d {
                return Err(Error::DimensionMismatch(format!(
                    "structure constant ({}, {}, {}) outside dimension {d}",
                    c.i, c.j, c.k
                )));
            }
            if c.value.field().order() != field.order() {
                return Err(Error::DimensionMismatch(
                    "structure constant from another field".into(),
                ));
            }
            if !seen.insert((c.i, c.j, c.k)) {
                return Err(Error::InvalidAlgebra(format!(
                    "duplicate structure constant ({}, {}, {})",
                    c.i, c.j, c.k
                )));
            }
            let v = raw
                .entry((c.i, c.j))
                .or_insert_with(|| vec![field.zero(); d]);
            v[c.k] = c.value;
        }
        let mut table = BTreeMap::new();
        for (&(i, j), v) in &raw {
            if is_zero_vector(v) {
                continue;
            }
            if i == j {
                return Err(Error::InvalidAlgebra(format!("[e{i}, e{i}] must vanish")));
            }
            let (a, b) = (i.min(j), i.max(j));
            let forward = if i < j {
                v.clone()
            } else {
                v.iter().map(CyclotomicNumber::neg).collect()
            };
            if let Some(other) = raw.get(&(j, i)) {
                let sum: CycVector = v.iter().zip(other).map(|(x, y)| x.add(y)).collect();
                if !is_zero_vector(&sum) {
                    return Err(Error::InvalidAlgebra(format!(
                        "antisymmetry fails for ({i}, {j})"
                    )));
                }
            }
            table.insert((a, b), forward);
        }
        let alg = SCAlgebra {
            field: field.clone(),
            labels,
            table,
        };
        if let Some((i, j, k)) = alg.jacobi_violation() {
            return Err(Error::InvalidAlgebra(format!(
                "Jacobi identity fails for basis triple ({i}, {j}, {k})"
            )));
        }
        Ok(alg)
    }

    /// Abelian algebra of the given dimension.
    pub fn abelian(field: &Arc<CyclotomicField>, labels: Vec<String>) -> Self {
        SCAlgebra {
            field: field.clone(),
            labels,
            table: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn dimension(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_abelian(&self) -> bool {
        self.table.is_empty()
    }

    pub fn basis_vector(&self, i: usize) -> CycVector {
        let mut v = vec![self.field.zero(); self.dimension()];
        v[i] = self.field.one();
        v
    }

    pub fn zero_vector(&self) -> CycVector {
        vec![self.field.zero(); self.dimension()]
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> CycVector {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => self.zero_vector(),
            std::cmp::Ordering::Less => self
                .table
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(|| self.zero_vector()),
            std::cmp::Ordering::Greater => self
                .table
                .get(&(j, i))
                .map(|v| v.iter().map(CyclotomicNumber::neg).collect())
                .unwrap_or_else(|| self.zero_vector()),
        }
    }

    pub fn bracket(&self, x: &[CyclotomicNumber], y: &[CyclotomicNumber]) -> CycVector {
        let mut out = self.zero_vector();
        for (&(i, j), v) in &self.table {
            // [x, y] picks up (x_i y_j - x_j y_i) [e_i, e_j].
            let c = x[i].mul(&y[j]).sub(&x[j].mul(&y[i]));
            if c.is_zero() {
                continue;
            }
            for (o, t) in out.iter_mut().zip(v) {
                if !t.is_zero() {
                    *o = o.add(&c.mul(t));
                }
            }
        }
        out
    }

    fn jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        let d = self.dimension();
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let (ei, ej, ek) = (
                        self.basis_vector(i),
                        self.basis_vector(j),
                        self.basis_vector(k),
                    );
                    let a = self.bracket(&self.bracket(&ei, &ej), &ek);
                    let b = self.bracket(&self.bracket(&ej, &ek), &ei);
                    let c = self.bracket(&self.bracket(&ek, &ei), &ej);
                    let sum: CycVector = a
                        .iter()
                        .zip(&b)
                        .zip(&c)
                        .map(|((x, y), z)| x.add(y).add(z))
                        .collect();
                    if !is_zero_vector(&sum) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// First basis pair `(i, j)` with `m[e_i, e_j] != [m e_i, m e_j]`.
    pub fn automorphism_violation(&self, m: &CycMatrix) -> Option<(usize, usize)> {
        let d = self.dimension();
        let images: Vec<CycVector> = (0..d).map(|j| m.column(j)).collect();
        for i in 0..d {
            for j in i + 1..d {
                let lhs = m.apply(&self.bracket_basis(i, j));
                let rhs = self.bracket(&images[i], &images[j]);
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn constants(&self) -> Vec<StructureConstant> {
        let mut out = Vec::new();
        for (&(i, j), v) in &self.table {
            for (k, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    out.push(StructureConstant {
                        i,
                        j,
                        k,
                        value: c.clone(),
                    });
                }
            }
        }
        out
    }
}

/// `phi` of order `n` and an involution `h` with `h phi h^-1 = phi^-1`.
#[derive(Debug, Clone)]
pub struct AutomorphismPair {
    pub phi: CycMatrix,
    pub h: CycMatrix,
    pub order: u64,
}

/// JSON input: an algebra and optionally its automorphisms.
///
/// Every coefficient is a list of rationals `[c_0, c_1, ...]` meaning
/// `sum c_k w^k`; matrices are lists of rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub order: u64,
    pub dimension: usize,
    #[serde(default)]
    pub basis: Vec<String>,
    /// `[i, j, k, coefficient]`: the coefficient of `e_k` in `[e_i, e_j]`.
    #[serde(default)]
    pub structure_constants: Vec<(usize, usize, usize, Vec<RationalJson>)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Vec<Vec<RationalJson>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<Vec<Vec<RationalJson>>>>,
}

/// Parsed and validated [`AlgebraFile`].
#[derive(Debug, Clone)]
pub struct AlgebraInput {
    pub algebra: SCAlgebra,
    pub phi: Option<CycMatrix>,
    pub h: Option<CycMatrix>,
}

impl AlgebraInput {
    pub fn pair(&self) -> Option<AutomorphismPair> {
        Some(AutomorphismPair {
            phi: self.phi.clone()?,
            h: self.h.clone()?,
            order: self.algebra.field().order(),
        })
    }
}

impl AlgebraFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn build(&self) -> Result<AlgebraInput> {
        let field = CyclotomicField::new(self.order)?;
        let labels = if self.basis.is_empty() {
            (1..=self.dimension).map(|i| format!("e{i}")).collect()
        } else if self.basis.len() == self.dimension {
            self.basis.clone()
        } else {
            return Err(Error::DimensionMismatch(format!(
                "{} basis labels for dimension {}",
                self.basis.len(),
                self.dimension
            )));
        };
        let constants = self
            .structure_constants
            .iter()
            .map(|(i, j, k, c)| {
                Ok(StructureConstant {
                    i: *i,
                    j: *j,
                    k: *k,
                    value: field.from_json(c)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let algebra = SCAlgebra::new(&field, labels, constants)?;
        let matrix =
            |m: &Option<Vec<Vec<Vec<RationalJson>>>>, name: &str| -> Result<Option<CycMatrix>> {
                let Some(rows) = m else { return Ok(None) };
                let m = CycMatrix::from_json(&field, rows)?;
                if m.rows() != self.dimension || m.cols() != self.dimension {
                    return Err(Error::DimensionMismatch(format!(
                        "{name} is {}x{} but the algebra has dimension {}",
                        m.rows(),
                        m.cols(),
                        self.dimension
                    )));
                }
                Ok(Some(m))
            };
        Ok(AlgebraInput {
            phi: matrix(&self.phi, "phi")?,
            h: matrix(&self.h, "h")?,
            algebra,
        })
    }

    pub fn from_parts(algebra: &SCAlgebra, phi: Option<&CycMatrix>, h: Option<&CycMatrix>) -> Self {
        AlgebraFile {
            order: algebra.field().order(),
            dimension: algebra.dimension(),
            basis: algebra.labels().to_vec(),
            structure_constants: algebra
                .constants()
                .into_iter()
                .map(|c| (c.i, c.j, c.k, c.value.to_json()))
                .collect(),
            phi: phi.map(CycMatrix::to_json),
            h: h.map(CycMatrix::to_json),
        }
    }
}
