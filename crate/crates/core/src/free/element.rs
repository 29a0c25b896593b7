use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::algebra::FreeLieAlgebra;
use super::lyndon::standard_factorization;
use super::FineDegree;
use crate::error::{Error, Result};

/// A Lyndon basis monomial, identified by its word. The bracketing is the
/// standard factorization, applied recursively.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HallMonomial {
    word: Box<[u8]>,
}

impl HallMonomial {
    pub fn from_word(word: Box<[u8]>) -> Self {
        HallMonomial { word }
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_generator(&self) -> bool {
        self.word.len() == 1
    }

    pub fn factors(&self) -> Option<(HallMonomial, HallMonomial)> {
        standard_factorization(&self.word).map(|(u, v)| {
            (
                HallMonomial::from_word(u.into()),
                HallMonomial::from_word(v.into()),
            )
        })
    }

    pub fn fine_degree(&self, ngens: usize) -> FineDegree {
        let mut counts = vec![0u32; ngens];
        for &l in self.word.iter() {
            counts[l as usize] += 1;
        }
        FineDegree::from_counts(counts)
    }
}

/// Shorter monomials first, then lexicographic.
impl Ord for HallMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for HallMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A rational linear combination of Lyndon basis monomials. Zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LieElement {
    terms: BTreeMap<HallMonomial, BigRational>,
}

impl LieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: HallMonomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, BigRational::one());
        LieElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HallMonomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &HallMonomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, m: HallMonomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(m.clone())
            .or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_scaled(&mut self, other: &LieElement, c: &BigRational) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        out.add_scaled(other, &BigRational::one());
        out
    }

    pub fn sub(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        out.add_scaled(other, &-BigRational::one());
        out
    }

    pub fn scaled(&self, c: &BigRational) -> LieElement {
        let mut out = LieElement::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> LieElement {
        self.scaled(&-BigRational::one())
    }

    /// Least common multiple of the coefficient denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Homogeneous parts keyed by fine degree.
    pub fn split_homogeneous(&self, ngens: usize) -> BTreeMap<FineDegree, LieElement> {
        let mut out: BTreeMap<FineDegree, LieElement> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.fine_degree(ngens))
                .or_default()
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// The same element restricted to monomials of one fine degree.
    pub fn homogeneous_part(&self, key: &FineDegree) -> LieElement {
        let ngens = key.counts().len();
        LieElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.fine_degree(ngens) == *key)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{}*{:?}", c, m.word()))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// An arbitrary bracketing, normalized by [`FreeLieAlgebra::normalize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BracketExpr {
    Generator(String),
    Element(LieElement),
    Bracket(Box<BracketExpr>, Box<BracketExpr>),
}

impl BracketExpr {
    pub fn gen(name: &str) -> Self {
        BracketExpr::Generator(name.to_string())
    }

    pub fn bracket(l: BracketExpr, r: BracketExpr) -> Self {
        BracketExpr::Bracket(Box::new(l), Box::new(r))
    }
}

/// JSON form of a bracket monomial: a generator name, or a two-element
/// array `[left, right]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MonomialJson {
    Generator(String),
    Bracket(Box<MonomialJson>, Box<MonomialJson>),
}

impl MonomialJson {
    pub fn to_expr(&self) -> BracketExpr {
        match self {
            MonomialJson::Generator(n) => BracketExpr::gen(n),
            MonomialJson::Bracket(l, r) => BracketExpr::bracket(l.to_expr(), r.to_expr()),
        }
    }
}

/// Integer for JSON: a number when it fits in i64, else a decimal string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonInt {
    Small(i64),
    Big(String),
}

impl JsonInt {
    pub fn from_bigint(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(s) => JsonInt::Small(s),
            None => JsonInt::Big(v.to_string()),
        }
    }

    pub fn to_bigint(&self) -> Result<BigInt> {
        match self {
            JsonInt::Small(v) => Ok(BigInt::from(*v)),
            JsonInt::Big(s) => s
                .parse()
                .map_err(|_| Error::Parse(format!("`{s}` is not an integer"))),
        }
    }
}

/// `(monomial, numerator, denominator)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementTerm(pub MonomialJson, pub JsonInt, pub JsonInt);

impl FreeLieAlgebra {
    pub fn monomial_json(&self, m: &HallMonomial) -> MonomialJson {
        match m.factors() {
            None => {
                MonomialJson::Generator(self.generators().get(m.word()[0] as usize).name.clone())
            }
            Some((u, v)) => MonomialJson::Bracket(
                Box::new(self.monomial_json(&u)),
                Box::new(self.monomial_json(&v)),
            ),
        }
    }

    pub fn element_to_json(&self, e: &LieElement) -> Vec<ElementTerm> {
        e.terms()
            .map(|(m, c)| {
                ElementTerm(
                    self.monomial_json(m),
                    JsonInt::from_bigint(c.numer()),
                    JsonInt::from_bigint(c.denom()),
                )
            })
            .collect()
    }

    /// Parses and normalizes; input monomials may use any bracketing.
    pub fn element_from_json(&self, terms: &[ElementTerm]) -> Result<LieElement> {
        let mut out = LieElement::zero();
        for ElementTerm(m, num, den) in terms {
            let den = den.to_bigint()?;
            if den.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            let c = BigRational::new(num.to_bigint()?, den);
            let e = self.normalize(&m.to_expr())?;
            out.add_scaled(&e, &c);
        }
        Ok(out)
    }
}

/// Canonical rational text: `p` or `p/q` with `q > 0` and no common factor.
pub fn format_rational(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("`{s}` is not a rational number"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}
