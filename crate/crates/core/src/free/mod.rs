//! Free Lie algebras over the rationals on (Z/nZ)-graded generators.
//!
//! Elements are written in the Lyndon basis: generators are ordered by name,
//! every Lyndon word `w` stands for its standard bracketing, and brackets of
//! basis elements are rewritten into the basis with antisymmetry and the
//! Jacobi identity. All work is organized by *fine degree*, the vector of
//! generator multiplicities, which refines both length and Z/nZ-degree.

mod algebra;
mod element;
mod lyndon;

pub use algebra::{Basis, FreeLieAlgebra, MonoId};
pub use element::{
    format_rational, parse_rational, BracketExpr, ElementTerm, HallMonomial, JsonInt, LieElement,
    MonomialJson,
};
pub use lyndon::{is_lyndon, lyndon_words_with_content, standard_factorization, witt_dimension};

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zn::{Modulus, Residue};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: Residue,
}

/// Generators sorted by name; a generator's position is its letter in
/// Lyndon words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    modulus: Modulus,
    gens: Vec<Generator>,
    index: HashMap<String, usize>,
}

impl GeneratorSet {
    pub fn new(modulus: u64, specs: &[GeneratorSpec]) -> Result<Self> {
        let modulus = Modulus::new(modulus)?;
        if specs.is_empty() {
            return Err(Error::EmptyGeneratingSet);
        }
        let mut gens: Vec<Generator> = specs
            .iter()
            .map(|s| Generator {
                name: s.name.clone(),
                degree: modulus.residue(s.degree),
            })
            .collect();
        gens.sort_by(|a, b| a.name.cmp(&b.name));
        let mut index = HashMap::new();
        for (i, g) in gens.iter().enumerate() {
            if index.insert(g.name.clone(), i).is_some() {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
        }
        if gens.len() > u8::MAX as usize {
            return Err(Error::DimensionMismatch(format!(
                "{} generators exceed 255",
                gens.len()
            )));
        }
        Ok(GeneratorSet {
            modulus,
            gens,
            index,
        })
    }

    /// The empty generating set; its free algebra is zero.
    pub fn empty(modulus: Modulus) -> Self {
        GeneratorSet {
            modulus,
            gens: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Shorthand for generators given as `(name, degree)` pairs.
    pub fn from_pairs(modulus: u64, pairs: &[(&str, i64)]) -> Result<Self> {
        let specs: Vec<GeneratorSpec> = pairs
            .iter()
            .map(|&(name, degree)| GeneratorSpec {
                name: name.to_string(),
                degree,
            })
            .collect();
        Self::new(modulus, &specs)
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator> {
        self.gens.iter()
    }

    pub fn get(&self, letter: usize) -> &Generator {
        &self.gens[letter]
    }

    pub fn letter(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn specs(&self) -> Vec<GeneratorSpec> {
        self.gens
            .iter()
            .map(|g| GeneratorSpec {
                name: g.name.clone(),
                degree: g.degree.value() as i64,
            })
            .collect()
    }

    pub fn degree_of_letter(&self, letter: usize) -> u64 {
        self.gens[letter].degree.value()
    }

    /// Fine degree with a single occurrence of `letter`.
    pub fn unit(&self, letter: usize) -> FineDegree {
        let mut counts = vec![0; self.len()];
        counts[letter] = 1;
        FineDegree { counts }
    }

    pub fn fine_degree(&self, counts: &[(&str, u32)]) -> Result<FineDegree> {
        let mut out = vec![0; self.len()];
        for &(name, c) in counts {
            out[self.letter(name)?] += c;
        }
        Ok(FineDegree { counts: out })
    }

    pub fn fine_degree_from_map(&self, counts: &BTreeMap<String, u32>) -> Result<FineDegree> {
        let mut out = vec![0; self.len()];
        for (name, &c) in counts {
            out[self.letter(name)?] += c;
        }
        Ok(FineDegree { counts: out })
    }

    /// Every fine degree with total length in `1..=max_len`, ordered by
    /// length and then by counts.
    pub fn fine_degrees_up_to(&self, max_len: usize) -> Vec<FineDegree> {
        let mut out = Vec::new();
        let mut counts = vec![0u32; self.len()];
        fn rec(i: usize, remaining: usize, counts: &mut Vec<u32>, out: &mut Vec<FineDegree>) {
            if i == counts.len() {
                if counts.iter().any(|&c| c > 0) {
                    out.push(FineDegree {
                        counts: counts.clone(),
                    });
                }
                return;
            }
            for c in 0..=remaining {
                counts[i] = c as u32;
                rec(i + 1, remaining - c, counts, out);
            }
            counts[i] = 0;
        }
        rec(0, max_len, &mut counts, &mut out);
        out.sort();
        out
    }
}

/// Generator multiplicities of a monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FineDegree {
    counts: Vec<u32>,
}

impl FineDegree {
    pub fn from_counts(counts: Vec<u32>) -> Self {
        FineDegree { counts }
    }

    pub fn zero(ngens: usize) -> Self {
        FineDegree {
            counts: vec![0; ngens],
        }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn zn_degree(&self, gens: &GeneratorSet) -> u64 {
        let m = gens.modulus();
        self.counts.iter().enumerate().fold(0, |acc, (i, &c)| {
            m.add(acc, m.mul(c as u64, gens.degree_of_letter(i)))
        })
    }

    pub fn add(&self, other: &FineDegree) -> FineDegree {
        FineDegree {
            counts: self
                .counts
                .iter()
                .zip(&other.counts)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn checked_sub(&self, other: &FineDegree) -> Option<FineDegree> {
        let mut counts = Vec::with_capacity(self.counts.len());
        for (a, b) in self.counts.iter().zip(&other.counts) {
            counts.push(a.checked_sub(*b)?);
        }
        Some(FineDegree { counts })
    }

    /// Componentwise `<=`.
    pub fn dominated_by(&self, other: &FineDegree) -> bool {
        self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
    }

    /// Nonzero proper parts `p` with `p <= self` componentwise, in order.
    pub fn proper_parts(&self) -> Vec<FineDegree> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.counts.len()];
        fn rec(i: usize, bound: &[u32], cur: &mut Vec<u32>, out: &mut Vec<FineDegree>) {
            if i == bound.len() {
                out.push(FineDegree {
                    counts: cur.clone(),
                });
                return;
            }
            for c in 0..=bound[i] {
                cur[i] = c;
                rec(i + 1, bound, cur, out);
            }
            cur[i] = 0;
        }
        rec(0, &self.counts, &mut cur, &mut out);
        out.retain(|p| !p.is_empty() && p != self);
        out.sort();
        out
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| i)
    }

    /// `name:count` pairs joined by commas, zero counts omitted.
    pub fn label(&self, gens: &GeneratorSet) -> String {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, c)| format!("{}:{}", gens.get(i).name, c))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn to_map(&self, gens: &GeneratorSet) -> BTreeMap<String, u32> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (gens.get(i).name.clone(), c))
            .collect()
    }
}

impl PartialOrd for FineDegree {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Length first, then counts in reverse lexicographic order so that
/// `(a:1)` precedes `(b:1)`.
impl Ord for FineDegree {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| other.counts.cmp(&self.counts))
    }
}

impl fmt::Display for FineDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_sorted_and_unique() {
        let g = GeneratorSet::from_pairs(7, &[("b", 2), ("a", 1)]).unwrap();
        assert_eq!(g.get(0).name, "a");
        assert_eq!(g.letter("b").unwrap(), 1);
        assert!(matches!(
            GeneratorSet::from_pairs(7, &[("a", 1), ("a", 2)]),
            Err(Error::DuplicateGenerator(_))
        ));
        assert_eq!(GeneratorSet::new(7, &[]), Err(Error::EmptyGeneratingSet));
    }

    #[test]
    fn fine_degree_bookkeeping() {
        let g = GeneratorSet::from_pairs(7, &[("a", 3), ("b", 5)]).unwrap();
        let k = g.fine_degree(&[("a", 1), ("b", 3)]).unwrap();
        assert_eq!(k.len(), 4);
        assert_eq!(k.zn_degree(&g), (3 + 15) % 7);
        assert_eq!(k.label(&g), "a:1,b:3");
        assert_eq!(k.proper_parts().len(), 2 * 4 - 2);
        assert!(g.unit(0).dominated_by(&k));
    }

    #[test]
    fn enumerates_fine_degrees() {
        let g = GeneratorSet::from_pairs(7, &[("a", 1), ("b", 2), ("c", 3)]).unwrap();
        let all = g.fine_degrees_up_to(3);
        // monomials in 3 variables of degree 1..=3
        assert_eq!(all.len(), 3 + 6 + 10);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
}
