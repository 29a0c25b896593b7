//! Sparse row reduction over the rationals.
//!
//! Rows are sparse integer vectors kept primitive (content 1, positive
//! leading entry). Elimination is fraction-free: eliminating column `c` of
//! `r` with pivot `p` replaces `r` by `(p_c/g) r - (r_c/g) p` where
//! `g = gcd(p_c, r_c)`. Pivots are leading columns, so the pivot column set
//! is an invariant of the row space and remainders are canonical.
//!
//! [`SpanBuilder`] first runs the same elimination modulo a 61-bit prime. Rank
//! modulo p never exceeds the rational rank, so a full rank there settles
//! the rational answer without any big-integer work.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type SparseRow = Vec<(u32, BigInt)>;

const PRIME: u64 = (1 << 61) - 1;

fn content(row: &[(u32, BigInt)]) -> BigInt {
    let mut g = BigInt::zero();
    for (_, v) in row {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    g
}

/// `a * r - b * p` for rows sorted by column.
fn combine(a: &BigInt, r: &[(u32, BigInt)], b: &BigInt, p: &[(u32, BigInt)]) -> SparseRow {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        let take_r = j >= p.len() || (i < r.len() && r[i].0 < p[j].0);
        let take_p = i >= r.len() || (j < p.len() && p[j].0 < r[i].0);
        if take_r {
            out.push((r[i].0, a * &r[i].1));
            i += 1;
        } else if take_p {
            out.push((p[j].0, -(b * &p[j].1)));
            j += 1;
        } else {
            let v = a * &r[i].1 - b * &p[j].1;
            if !v.is_zero() {
                out.push((r[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Result of reducing a vector: `remainder / scale` is the exact remainder.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub remainder: SparseRow,
    pub scale: BigRational,
}

impl Reduced {
    pub fn is_zero(&self) -> bool {
        self.remainder.is_empty()
    }

    pub fn rational(&self) -> Vec<(u32, BigRational)> {
        self.remainder
            .iter()
            .map(|(c, v)| (*c, BigRational::from_integer(v.clone()) / &self.scale))
            .collect()
    }
}

/// Row echelon form over Q with one primitive integer row per pivot column.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    ncols: usize,
    rows: BTreeMap<u32, SparseRow>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseRow> {
        self.rows.values()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.keys().copied()
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn free_columns(&self) -> Vec<u32> {
        (0..self.ncols as u32)
            .filter(|c| !self.rows.contains_key(c))
            .collect()
    }

    /// Reduces `row` against every pivot. The remainder is zero exactly on
    /// the pivot columns.
    pub fn reduce(&self, row: &[(u32, BigInt)]) -> Reduced {
        let mut r: SparseRow = row.iter().filter(|(_, v)| !v.is_zero()).cloned().collect();
        let mut scale = BigRational::one();
        let mut cursor = 0usize;
        while cursor < r.len() {
            let (col, coeff) = (r[cursor].0, r[cursor].1.clone());
            if let Some(p) = self.rows.get(&col) {
                let lead = &p[0].1;
                let g = lead.gcd(&coeff);
                let a = lead / &g;
                let b = &coeff / &g;
                r = combine(&a, &r, &b, p);
                scale *= BigRational::from_integer(a);
                // entries before `col` are untouched and `col` is now zero
                cursor = r.partition_point(|(c, _)| *c <= col);
                if r.len() > 8 && cursor.is_multiple_of(16) {
                    let g = content(&r);
                    if !g.is_one() && !g.is_zero() {
                        for (_, v) in r.iter_mut() {
                            *v /= &g;
                        }
                        scale /= BigRational::from_integer(g);
                    }
                }
            } else {
                cursor += 1;
            }
        }
        let g = content(&r);
        if !g.is_zero() && !g.is_one() {
            for (_, v) in r.iter_mut() {
                *v /= &g;
            }
            scale /= BigRational::from_integer(g);
        }
        Reduced {
            remainder: r,
            scale,
        }
    }

    pub fn contains(&self, row: &[(u32, BigInt)]) -> bool {
        self.reduce(row).is_zero()
    }

    /// Adds `row` to the span; returns whether the rank grew.
    pub fn insert(&mut self, row: &[(u32, BigInt)]) -> bool {
        let mut r = self.reduce(row).remainder;
        if r.is_empty() {
            return false;
        }
        if r[0].1.is_negative() {
            for (_, v) in r.iter_mut() {
                *v = -&*v;
            }
        }
        debug_assert!((r[0].0 as usize) < self.ncols);
        self.rows.insert(r[0].0, r);
        true
    }

    /// Inserts an already-reduced primitive row without checking it.
    fn insert_reduced(&mut self, mut r: SparseRow) {
        if r[0].1.is_negative() {
            for (_, v) in r.iter_mut() {
                *v = -&*v;
            }
        }
        self.rows.insert(r[0].0, r);
    }
}

fn to_mod(v: &BigInt) -> u64 {
    let m = BigInt::from(PRIME);
    let r = v.mod_floor(&m);
    r.to_u64().expect("reduced residue fits")
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn inv_mod(a: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a;
    let mut e = PRIME - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(result, base);
        }
        base = mul_mod(base, base);
        e >>= 1;
    }
    result
}

/// Echelon form modulo a fixed prime, pivot rows scaled to leading entry 1.
#[derive(Debug, Default)]
struct ModEchelon {
    rows: BTreeMap<u32, Vec<(u32, u64)>>,
}

impl ModEchelon {
    fn insert(&mut self, row: &[(u32, BigInt)]) -> bool {
        let mut r: Vec<(u32, u64)> = row
            .iter()
            .map(|(c, v)| (*c, to_mod(v)))
            .filter(|&(_, v)| v != 0)
            .collect();
        let mut cursor = 0;
        while cursor < r.len() {
            let (col, coeff) = r[cursor];
            if let Some(p) = self.rows.get(&col) {
                // r -= coeff * p
                let mut out = Vec::with_capacity(r.len() + p.len());
                out.extend_from_slice(&r[..cursor]);
                let (mut i, mut j) = (cursor, 0);
                while i < r.len() || j < p.len() {
                    if j >= p.len() || (i < r.len() && r[i].0 < p[j].0) {
                        out.push(r[i]);
                        i += 1;
                    } else if i >= r.len() || p[j].0 < r[i].0 {
                        out.push((p[j].0, PRIME - mul_mod(coeff, p[j].1)));
                        j += 1;
                    } else {
                        let v = (r[i].1 + PRIME - mul_mod(coeff, p[j].1)) % PRIME;
                        if v != 0 {
                            out.push((r[i].0, v));
                        }
                        i += 1;
                        j += 1;
                    }
                }
                r = out;
            } else {
                cursor += 1;
            }
        }
        if r.is_empty() {
            return false;
        }
        let inv = inv_mod(r[0].1);
        for (_, v) in r.iter_mut() {
            *v = mul_mod(*v, inv);
        }
        self.rows.insert(r[0].0, r);
        true
    }
}

/// Span of a set of rows.
#[derive(Debug, Clone)]
pub enum Span {
    /// Every column is a pivot; no rows are kept.
    Full {
        ncols: usize,
    },
    Partial(Echelon),
}

impl Span {
    pub fn ncols(&self) -> usize {
        match self {
            Span::Full { ncols } => *ncols,
            Span::Partial(e) => e.ncols(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Span::Full { ncols } => *ncols,
            Span::Partial(e) => e.rank(),
        }
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ncols()
    }

    pub fn codimension(&self) -> usize {
        self.ncols() - self.rank()
    }

    pub fn contains(&self, row: &[(u32, BigInt)]) -> bool {
        match self {
            Span::Full { .. } => true,
            Span::Partial(e) => e.contains(row),
        }
    }

    pub fn reduce(&self, row: &[(u32, BigInt)]) -> Reduced {
        match self {
            Span::Full { .. } => Reduced {
                remainder: Vec::new(),
                scale: BigRational::one(),
            },
            Span::Partial(e) => e.reduce(row),
        }
    }

    /// Columns outside the pivot set; their monomials span the quotient.
    pub fn free_columns(&self) -> Vec<u32> {
        match self {
            Span::Full { .. } => Vec::new(),
            Span::Partial(e) => e.free_columns(),
        }
    }
}

/// Primitive form with positive leading entry, so that proportional rows
/// compare equal.
fn normalized(mut row: SparseRow) -> SparseRow {
    let g = content(&row);
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
    if row.first().is_some_and(|(_, v)| v.is_negative()) {
        for (_, v) in row.iter_mut() {
            *v = -&*v;
        }
    }
    row
}

/// Accumulates rows and produces their exact [`Span`].
///
/// Rows are screened modulo p as they arrive; once the modular rank is full
/// further rows are ignored. Rows dependent modulo p are kept for the exact
/// pass in [`SpanBuilder::finish`].
#[derive(Debug)]
pub struct SpanBuilder {
    ncols: usize,
    modp: ModEchelon,
    accepted: Vec<SparseRow>,
    rejected: Vec<SparseRow>,
    seen: HashSet<SparseRow>,
}

impl SpanBuilder {
    pub fn new(ncols: usize) -> Self {
        SpanBuilder {
            ncols,
            modp: ModEchelon::default(),
            accepted: Vec::new(),
            rejected: Vec::new(),
            seen: HashSet::new(),
        }
    }

    pub fn is_full(&self) -> bool {
        self.modp.rows.len() == self.ncols
    }

    pub fn modular_rank(&self) -> usize {
        self.modp.rows.len()
    }

    pub fn push(&mut self, row: SparseRow) {
        if self.is_full() || row.is_empty() {
            return;
        }
        debug_assert!(
            row.windows(2).all(|w| w[0].0 < w[1].0),
            "columns must be strictly increasing"
        );
        let row = normalized(row);
        if !self.seen.insert(row.clone()) {
            return;
        }
        if self.modp.insert(&row) {
            self.accepted.push(row);
        } else {
            self.rejected.push(row);
        }
    }

    pub fn finish(self) -> Span {
        let ncols = self.ncols;
        if self.is_full() {
            return Span::Full { ncols };
        }
        let mut exact = Echelon::new(ncols);
        for row in &self.accepted {
            let red = exact.reduce(row);
            debug_assert!(
                !red.is_zero(),
                "independent mod p implies independent over Q"
            );
            if !red.is_zero() {
                exact.insert_reduced(red.remainder);
            }
        }
        // a row dependent mod p can still be independent over Q
        for row in &self.rejected {
            if exact.is_full() {
                break;
            }
            exact.insert(row);
        }
        if exact.is_full() {
            Span::Full { ncols }
        } else {
            Span::Partial(exact)
        }
    }
}

/// Exact span of `rows` inside a space of `ncols` columns.
pub fn span(rows: &[SparseRow], ncols: usize) -> Span {
    let mut b = SpanBuilder::new(ncols);
    for r in rows {
        b.push(r.clone());
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(entries: &[(u32, i64)]) -> SparseRow {
        entries.iter().map(|&(c, v)| (c, BigInt::from(v))).collect()
    }

    #[test]
    fn rank_and_membership() {
        let rows = vec![
            row(&[(0, 2), (1, 4)]),
            row(&[(0, 1), (1, 2)]),
            row(&[(1, 3), (2, 1)]),
        ];
        let s = span(&rows, 3);
        assert_eq!(s.rank(), 2);
        assert!(s.contains(&row(&[(0, 1), (1, 5), (2, 1)])));
        assert!(!s.contains(&row(&[(2, 1)])));
        assert_eq!(s.free_columns(), vec![2]);
    }

    #[test]
    fn full_rank_shortcut() {
        let rows = vec![row(&[(0, 1), (1, 1)]), row(&[(0, 1), (1, -1)])];
        assert!(matches!(span(&rows, 2), Span::Full { ncols: 2 }));
    }

    #[test]
    fn dependent_mod_p_but_not_over_q() {
        let p = PRIME as i64;
        // second row is p times a unit vector: zero mod p, nonzero over Q
        let rows = vec![row(&[(0, 1)]), row(&[(1, p)])];
        let s = span(&rows, 2);
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn reduce_is_linear_remainder() {
        let mut e = Echelon::new(3);
        e.insert(&row(&[(0, 3), (2, 1)]));
        let red = e.reduce(&row(&[(0, 1), (2, 1)]));
        // (1,0,1) - (1/3)(3,0,1) = (0,0,2/3)
        assert_eq!(
            red.rational(),
            vec![(2, BigRational::new(2.into(), 3.into()))]
        );
    }

    fn dense_rank(mut m: Vec<Vec<BigRational>>) -> usize {
        let mut rank = 0;
        let ncols = m.first().map_or(0, |r| r.len());
        for col in 0..ncols {
            let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            for i in 0..m.len() {
                if i != rank && !m[i][col].is_zero() {
                    let f = &m[i][col] / &m[rank][col];
                    let pivot = m[rank].clone();
                    for (x, y) in m[i].iter_mut().zip(pivot) {
                        *x -= &f * y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    proptest! {
        #[test]
        fn rank_matches_dense_elimination(
            entries in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..7)
        ) {
            let rows: Vec<SparseRow> = entries
                .iter()
                .map(|r| r.iter().enumerate().filter(|(_, &v)| v != 0).map(|(c, &v)| (c as u32, BigInt::from(v))).collect())
                .collect();
            let dense: Vec<Vec<BigRational>> = entries
                .iter()
                .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
                .collect();
            prop_assert_eq!(span(&rows, 5).rank(), dense_rank(dense));
        }

        #[test]
        fn reduce_idempotent(
            entries in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..4),
            v in prop::collection::vec(-5i64..=5, 4)
        ) {
            let mut e = Echelon::new(4);
            for r in &entries {
                e.insert(&r.iter().enumerate().filter(|(_, &x)| x != 0).map(|(c, &x)| (c as u32, BigInt::from(x))).collect::<Vec<_>>());
            }
            let v: SparseRow = v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(c, &x)| (c as u32, BigInt::from(x))).collect();
            let once = e.reduce(&v);
            let twice = e.reduce(&once.remainder);
            prop_assert_eq!(&once.remainder, &twice.remainder);
            for (c, _) in &once.remainder {
                prop_assert!(!e.is_pivot(*c));
            }
        }
    }
}
