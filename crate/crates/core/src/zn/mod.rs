//! Arithmetic and combinatorics on indices in Z/nZ.
//!
//! A sequence `(a_1, ..., a_k)` is *(-1)-dependent* when some nonzero
//! 0/1-vector `t` satisfies `t_1 a_1 + ... + t_k a_k = 0 (mod n)`. Everything
//! else in the crate that needs to know which products are forced to vanish
//! asks this module.

mod constants;

pub use constants::{final_length, PaperConstants, SymbolicPower};

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Longest sequence accepted by the exhaustive dependence test.
pub const MAX_ENUMERATION_LENGTH: usize = 24;

/// An odd modulus `n >= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::InvalidModulus(n));
        }
        Ok(Modulus(n))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// Least nonnegative representative of `value` mod n.
    pub fn reduce(self, value: i64) -> u64 {
        value.rem_euclid(self.0 as i64) as u64
    }

    pub fn residue(self, value: i64) -> Residue {
        Residue {
            value: self.reduce(value),
            modulus: self,
        }
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.0 as u128) as u64
    }

    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub fn mul(self, k: u64, a: u64) -> u64 {
        ((k as u128 * a as u128) % self.0 as u128) as u64
    }

    /// Signed representative in `(-n/2, n/2)`, used only for reports.
    pub fn signed(self, a: u64) -> i64 {
        let n = self.0 as i64;
        let a = a as i64;
        if a > n / 2 {
            a - n
        } else {
            a
        }
    }
}

impl<'de> Deserialize<'de> for Modulus {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let n = u64::deserialize(d)?;
        Modulus::new(n).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

impl Residue {
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        Ok(Modulus::new(modulus)?.residue(value))
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Additive order: the least `t > 0` with `t * a = 0 (mod n)`.
    pub fn order(self) -> u64 {
        residue_order(self)
    }

    pub fn signed(self) -> i64 {
        self.modulus.signed(self.value)
    }
}

impl std::ops::Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Residue {
            value: self.modulus.add(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl std::ops::Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue {
            value: self.modulus.neg(self.value),
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

pub fn residue_order(a: Residue) -> u64 {
    let n = a.modulus.get();
    n / n.gcd(&a.value)
}

/// An ordered, nonempty list of residues sharing one modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SequenceRepr", into = "SequenceRepr")]
pub struct IndexSequence {
    modulus: Modulus,
    entries: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct SequenceRepr {
    modulus: u64,
    entries: Vec<i64>,
}

impl TryFrom<SequenceRepr> for IndexSequence {
    type Error = Error;
    fn try_from(r: SequenceRepr) -> Result<Self> {
        IndexSequence::new(r.modulus, &r.entries)
    }
}

impl From<IndexSequence> for SequenceRepr {
    fn from(s: IndexSequence) -> Self {
        SequenceRepr {
            modulus: s.modulus.get(),
            entries: s.entries.iter().map(|&v| v as i64).collect(),
        }
    }
}

impl IndexSequence {
    pub fn new(modulus: u64, entries: &[i64]) -> Result<Self> {
        let modulus = Modulus::new(modulus)?;
        if entries.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(IndexSequence {
            modulus,
            entries: entries.iter().map(|&e| modulus.reduce(e)).collect(),
        })
    }

    pub fn from_residues(residues: &[Residue]) -> Result<Self> {
        let first = residues.first().ok_or(Error::EmptySequence)?;
        let modulus = first.modulus;
        for r in residues {
            if r.modulus != modulus {
                return Err(Error::ModulusMismatch(modulus.get(), r.modulus.get()));
            }
        }
        Ok(IndexSequence {
            modulus,
            entries: residues.iter().map(|r| r.value).collect(),
        })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn residues(&self) -> impl Iterator<Item = Residue> + '_ {
        self.entries.iter().map(move |&value| Residue {
            value,
            modulus: self.modulus,
        })
    }

    /// The sequence with `value` appended.
    pub fn extended(&self, value: u64) -> IndexSequence {
        let mut entries = self.entries.clone();
        entries.push(value % self.modulus.get());
        IndexSequence {
            modulus: self.modulus,
            entries,
        }
    }

    pub fn has_zero_entry(&self) -> bool {
        self.entries.contains(&0)
    }
}

impl fmt::Display for IndexSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(u64::to_string).collect();
        write!(f, "({}) mod {}", parts.join(", "), self.modulus)
    }
}

/// A set of residues, printed as least nonnegative representatives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueSet {
    pub modulus: u64,
    pub values: BTreeSet<u64>,
}

impl ResidueSet {
    pub fn contains(&self, value: u64) -> bool {
        self.values.contains(&(value % self.modulus))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_subset(&self, other: &ResidueSet) -> bool {
        self.modulus == other.modulus && self.values.is_subset(&other.values)
    }
}

/// True iff some nonzero 0/1-combination of the entries vanishes mod n.
///
/// Runs over all `2^k - 1` subsets in Gray-code order, so each step costs one
/// addition or subtraction.
pub fn is_minus_one_dependent(seq: &IndexSequence) -> Result<bool> {
    let k = seq.len();
    if k == 0 {
        return Err(Error::EmptySequence);
    }
    if k > MAX_ENUMERATION_LENGTH {
        return Err(Error::SequenceTooLong(k));
    }
    let m = seq.modulus;
    let mut sum = 0u64;
    let mut prev_gray = 0u64;
    for i in 1u64..(1u64 << k) {
        let gray = i ^ (i >> 1);
        let bit = (gray ^ prev_gray).trailing_zeros() as usize;
        let a = seq.entries[bit];
        sum = if gray & (1 << bit) != 0 {
            m.add(sum, a)
        } else {
            m.add(sum, m.neg(a))
        };
        if sum == 0 {
            return Ok(true);
        }
        prev_gray = gray;
    }
    Ok(false)
}

pub fn is_minus_one_independent(seq: &IndexSequence) -> Result<bool> {
    is_minus_one_dependent(seq).map(|d| !d)
}

/// Subset sums of the entries, the empty sum included.
fn subset_sums(seq: &IndexSequence) -> BTreeSet<u64> {
    let m = seq.modulus;
    let mut sums = BTreeSet::from([0u64]);
    for &a in &seq.entries {
        let shifted: Vec<u64> = sums.iter().map(|&s| m.add(s, a)).collect();
        sums.extend(shifted);
    }
    sums
}

/// `D(seq)`: every `j` for which `(seq, j)` is (-1)-dependent.
///
/// For an independent sequence these are exactly the negated subset sums.
/// The empty sum contributes `0`, so `0` always belongs to the result even
/// though lemma hypotheses elsewhere only use nonzero indices.
pub fn dependency_set(seq: &IndexSequence) -> Result<ResidueSet> {
    if is_minus_one_dependent(seq)? {
        return Err(Error::DependentSequence(seq.entries.clone()));
    }
    let m = seq.modulus;
    Ok(ResidueSet {
        modulus: m.get(),
        values: subset_sums(seq).into_iter().map(|s| m.neg(s)).collect(),
    })
}

/// `D~(seq)`: all combinations `u_1 b_1 + ... + u_k b_k` with
/// `u_i in {0, +-1, +-2}`.
pub fn dtilde_set(seq: &IndexSequence) -> Result<ResidueSet> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    let m = seq.modulus;
    let n = m.get() as usize;
    let mut reached = vec![false; n];
    reached[0] = true;
    for &b in &seq.entries {
        let mut next = vec![false; n];
        let steps = [0, b, m.mul(2, b), m.neg(b), m.neg(m.mul(2, b))];
        for (s, _) in reached.iter().enumerate().filter(|(_, &r)| r) {
            for &step in &steps {
                next[m.add(s as u64, step) as usize] = true;
            }
        }
        reached = next;
    }
    Ok(ResidueSet {
        modulus: m.get(),
        values: reached
            .iter()
            .enumerate()
            .filter(|(_, &r)| r)
            .map(|(i, _)| i as u64)
            .collect(),
    })
}

/// Elements of additive order exactly 3, together with 0: the subgroup of
/// order 3 when `3 | n`, and `{0}` otherwise.
pub fn order_three_subgroup(modulus: Modulus) -> BTreeSet<u64> {
    let n = modulus.get();
    let mut out = BTreeSet::from([0]);
    if n.is_multiple_of(3) {
        out.insert(n / 3);
        out.insert(2 * n / 3);
    }
    out
}
