use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use parking_lot::Mutex;

use super::element::{BracketExpr, HallMonomial, LieElement};
use super::lyndon::{is_lyndon, lyndon_words_with_content, standard_factorization};
use super::{FineDegree, GeneratorSet};
use crate::error::{Error, Result};

/// Interned Lyndon word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonoId(pub u32);

const NONE: u32 = u32::MAX;

#[derive(Debug)]
struct WordEntry {
    word: Box<[u8]>,
    left: u32,
    right: u32,
    fine: FineDegree,
}

/// Lyndon basis of one fine degree, in lexicographic order.
#[derive(Debug)]
pub struct Basis {
    pub key: FineDegree,
    pub monos: Vec<MonoId>,
    position: HashMap<MonoId, u32>,
}

impl Basis {
    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn column(&self, id: MonoId) -> Option<u32> {
        self.position.get(&id).copied()
    }
}

type Combination = Arc<[(MonoId, i64)]>;

#[derive(Default)]
struct Store {
    words: Vec<WordEntry>,
    by_word: HashMap<Box<[u8]>, u32>,
    bases: HashMap<FineDegree, Arc<Basis>>,
    brackets: HashMap<(u32, u32), Combination>,
}

/// The free Lie algebra on a graded generating set.
///
/// Interned words, Lyndon bases and the bracket table of basis elements are
/// memoized behind a mutex, so one algebra can serve concurrent callers.
pub struct FreeLieAlgebra {
    gens: GeneratorSet,
    store: Mutex<Store>,
}

fn add_scaled(acc: &mut HashMap<u32, i64>, terms: &[(MonoId, i64)], c: i64) {
    for &(m, v) in terms {
        let e = acc.entry(m.0).or_insert(0);
        *e = v
            .checked_mul(c)
            .and_then(|p| e.checked_add(p))
            .expect("structure constant overflow");
    }
}

fn finish(acc: HashMap<u32, i64>) -> Combination {
    let mut v: Vec<(MonoId, i64)> = acc
        .into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|(m, c)| (MonoId(m), c))
        .collect();
    v.sort_unstable_by_key(|&(m, _)| m);
    v.into()
}

impl Store {
    fn intern(&mut self, word: &[u8], ngens: usize) -> u32 {
        if let Some(&id) = self.by_word.get(word) {
            return id;
        }
        let (left, right) = match standard_factorization(word) {
            Some((u, v)) => (self.intern(u, ngens), self.intern(v, ngens)),
            None => (NONE, NONE),
        };
        let mut counts = vec![0u32; ngens];
        for &l in word {
            counts[l as usize] += 1;
        }
        let id = self.words.len() as u32;
        self.words.push(WordEntry {
            word: word.into(),
            left,
            right,
            fine: FineDegree::from_counts(counts),
        });
        self.by_word.insert(word.into(), id);
        id
    }

    /// Interns the concatenation `uv`, whose standard factorization is
    /// known to be `(u, v)`.
    fn intern_product(&mut self, u: u32, v: u32) -> u32 {
        let mut word = self.words[u as usize].word.to_vec();
        word.extend_from_slice(&self.words[v as usize].word);
        if let Some(&id) = self.by_word.get(word.as_slice()) {
            return id;
        }
        debug_assert!(is_lyndon(&word));
        let fine = self.words[u as usize]
            .fine
            .add(&self.words[v as usize].fine);
        let id = self.words.len() as u32;
        self.by_word.insert(word.clone().into(), id);
        self.words.push(WordEntry {
            word: word.into(),
            left: u,
            right: v,
            fine,
        });
        id
    }

    /// `[P(u), P(v)]` in the Lyndon basis.
    fn bracket(&mut self, u: u32, v: u32) -> Combination {
        if u == v {
            return Arc::new([]);
        }
        if self.words[u as usize].word > self.words[v as usize].word {
            let r = self.bracket(v, u);
            return r.iter().map(|&(m, c)| (m, -c)).collect();
        }
        if let Some(r) = self.brackets.get(&(u, v)) {
            return r.clone();
        }
        let (u1, u2) = (self.words[u as usize].left, self.words[u as usize].right);
        let result: Combination =
            if u1 == NONE || self.words[u2 as usize].word >= self.words[v as usize].word {
                Arc::new([(MonoId(self.intern_product(u, v)), 1)])
            } else {
                // [[u1, u2], v] = [[u1, v], u2] + [u1, [u2, v]]
                let mut acc = HashMap::new();
                let first = self.bracket(u1, v);
                for &(w, c) in first.iter() {
                    let t = self.bracket(w.0, u2);
                    add_scaled(&mut acc, &t, c);
                }
                let second = self.bracket(u2, v);
                for &(w, c) in second.iter() {
                    let t = self.bracket(u1, w.0);
                    add_scaled(&mut acc, &t, c);
                }
                finish(acc)
            };
        self.brackets.insert((u, v), result.clone());
        result
    }
}

impl FreeLieAlgebra {
    pub fn new(gens: GeneratorSet) -> Self {
        let mut store = Store::default();
        for letter in 0..gens.len() {
            store.intern(&[letter as u8], gens.len());
        }
        FreeLieAlgebra {
            gens,
            store: Mutex::new(store),
        }
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn letter_id(&self, letter: usize) -> MonoId {
        // letters are interned first, in order
        MonoId(letter as u32)
    }

    pub fn intern_word(&self, word: &[u8]) -> Result<MonoId> {
        if !is_lyndon(word) || word.iter().any(|&l| l as usize >= self.gens.len()) {
            return Err(Error::Parse(format!(
                "{word:?} is not a Lyndon word over the generators"
            )));
        }
        Ok(MonoId(self.store.lock().intern(word, self.gens.len())))
    }

    pub fn word(&self, id: MonoId) -> Box<[u8]> {
        self.store.lock().words[id.0 as usize].word.clone()
    }

    pub fn fine_degree_of(&self, id: MonoId) -> FineDegree {
        self.store.lock().words[id.0 as usize].fine.clone()
    }

    pub fn length_of(&self, id: MonoId) -> usize {
        self.store.lock().words[id.0 as usize].word.len()
    }

    pub fn factors(&self, id: MonoId) -> Option<(MonoId, MonoId)> {
        let store = self.store.lock();
        let e = &store.words[id.0 as usize];
        (e.left != NONE).then_some((MonoId(e.left), MonoId(e.right)))
    }

    /// Lyndon basis of the fine degree `key`.
    pub fn basis(&self, key: &FineDegree) -> Arc<Basis> {
        if let Some(b) = self.store.lock().bases.get(key) {
            return b.clone();
        }
        let words = lyndon_words_with_content(key.counts());
        let mut store = self.store.lock();
        if let Some(b) = store.bases.get(key) {
            return b.clone();
        }
        let ngens = self.gens.len();
        let monos: Vec<MonoId> = words
            .iter()
            .map(|w| MonoId(store.intern(w, ngens)))
            .collect();
        let position = monos
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, i as u32))
            .collect();
        let basis = Arc::new(Basis {
            key: key.clone(),
            monos,
            position,
        });
        store.bases.insert(key.clone(), basis.clone());
        basis
    }

    pub fn hall_basis(&self, key: &FineDegree) -> Result<Vec<HallMonomial>> {
        if self.gens.is_empty() {
            return Err(Error::EmptyGeneratingSet);
        }
        if key.is_empty() {
            return Err(Error::EmptyFineDegree);
        }
        let basis = self.basis(key);
        Ok(basis
            .monos
            .iter()
            .map(|&m| HallMonomial::from_word(self.word(m)))
            .collect())
    }

    /// Bracket of two basis monomials, as a sorted integer combination.
    pub fn bracket_monomials(&self, u: MonoId, v: MonoId) -> Arc<[(MonoId, i64)]> {
        self.store.lock().bracket(u.0, v.0)
    }

    /// Bilinear extension of [`Self::bracket_monomials`] to integer
    /// combinations; the result is sorted by monomial id.
    pub fn bracket_combinations(
        &self,
        x: &[(MonoId, BigInt)],
        y: &[(MonoId, BigInt)],
    ) -> Vec<(MonoId, BigInt)> {
        let mut acc: HashMap<MonoId, BigInt> = HashMap::new();
        {
            let mut store = self.store.lock();
            for (u, cu) in x {
                for (v, cv) in y {
                    let t = store.bracket(u.0, v.0);
                    if t.is_empty() {
                        continue;
                    }
                    let prod = cu * cv;
                    for &(m, c) in t.iter() {
                        *acc.entry(m).or_insert_with(BigInt::zero) += &prod * c;
                    }
                }
            }
        }
        let mut out: Vec<(MonoId, BigInt)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.sort_unstable_by_key(|(m, _)| *m);
        out
    }

    pub fn generator(&self, name: &str) -> Result<LieElement> {
        let letter = self.gens.letter(name)?;
        Ok(LieElement::monomial(HallMonomial::from_word(
            vec![letter as u8].into(),
        )))
    }

    pub fn monomial_element(&self, id: MonoId) -> LieElement {
        LieElement::monomial(HallMonomial::from_word(self.word(id)))
    }

    fn id_of(&self, m: &HallMonomial) -> Result<MonoId> {
        let mut store = self.store.lock();
        if let Some(&id) = store.by_word.get(m.word()) {
            return Ok(MonoId(id));
        }
        if !is_lyndon(m.word()) || m.word().iter().any(|&l| l as usize >= self.gens.len()) {
            return Err(Error::Parse(format!(
                "{:?} is not a Lyndon word over the generators",
                m.word()
            )));
        }
        Ok(MonoId(store.intern(m.word(), self.gens.len())))
    }

    /// Integer combination `c * e` with the smallest positive `c` clearing
    /// denominators. Returns the combination and `c`.
    pub fn to_integer_combination(
        &self,
        e: &LieElement,
    ) -> Result<(Vec<(MonoId, BigInt)>, BigInt)> {
        let denom = e.common_denominator();
        let mut out = Vec::with_capacity(e.len());
        for (m, c) in e.terms() {
            let scaled = c * num_rational::BigRational::from_integer(denom.clone());
            out.push((self.id_of(m)?, scaled.to_integer()));
        }
        out.sort_unstable_by_key(|(m, _)| *m);
        Ok((out, denom))
    }

    pub fn from_integer_combination(
        &self,
        terms: &[(MonoId, BigInt)],
        denom: &BigInt,
    ) -> LieElement {
        let mut e = LieElement::zero();
        for (m, c) in terms {
            e.add_term(
                HallMonomial::from_word(self.word(*m)),
                num_rational::BigRational::new(c.clone(), denom.clone()),
            );
        }
        e
    }

    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> LieElement {
        let (cx, dx) = self
            .to_integer_combination(x)
            .expect("elements built over this algebra");
        let (cy, dy) = self
            .to_integer_combination(y)
            .expect("elements built over this algebra");
        let prod = self.bracket_combinations(&cx, &cy);
        self.from_integer_combination(&prod, &(dx * dy))
    }

    /// `[...[[e_1, e_2], e_3], ..., e_s]`.
    pub fn left_normalized(&self, elems: &[LieElement]) -> Result<LieElement> {
        let (first, rest) = elems
            .split_first()
            .ok_or_else(|| Error::Parse("left-normalized product of an empty list".into()))?;
        Ok(rest
            .iter()
            .fold(first.clone(), |acc, e| self.bracket(&acc, e)))
    }

    /// Rewrites an arbitrary bracketing into the Lyndon basis.
    pub fn normalize(&self, expr: &BracketExpr) -> Result<LieElement> {
        match expr {
            BracketExpr::Generator(name) => self.generator(name),
            BracketExpr::Element(e) => {
                let mut out = LieElement::zero();
                for (m, c) in e.terms() {
                    let basis_form = self.normalize_tree(m.word())?;
                    out.add_scaled(&basis_form, c);
                }
                Ok(out)
            }
            BracketExpr::Bracket(l, r) => {
                let l = self.normalize(l)?;
                let r = self.normalize(r)?;
                Ok(self.bracket(&l, &r))
            }
        }
    }

    /// A stored Lyndon word is already in normal form; anything else is
    /// rejected.
    fn normalize_tree(&self, word: &[u8]) -> Result<LieElement> {
        self.id_of(&HallMonomial::from_word(word.into()))?;
        Ok(LieElement::monomial(HallMonomial::from_word(word.into())))
    }

    /// Nested bracket rendering using generator names, e.g. `[a,[a,b]]`.
    pub fn render_monomial(&self, m: &HallMonomial) -> String {
        match standard_factorization(m.word()) {
            None => self.gens.get(m.word()[0] as usize).name.clone(),
            Some((u, v)) => format!(
                "[{},{}]",
                self.render_monomial(&HallMonomial::from_word(u.into())),
                self.render_monomial(&HallMonomial::from_word(v.into()))
            ),
        }
    }

    pub fn render(&self, e: &LieElement) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = e
            .terms()
            .map(|(m, c)| {
                if c.is_one() {
                    self.render_monomial(m)
                } else {
                    format!("({})*{}", c, self.render_monomial(m))
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// Fine degree of a homogeneous nonzero element.
    pub fn fine_degree_of_element(&self, e: &LieElement) -> Result<Option<FineDegree>> {
        let mut key: Option<FineDegree> = None;
        for (m, _) in e.terms() {
            let k = m.fine_degree(self.gens.len());
            match &key {
                None => key = Some(k),
                Some(prev) if *prev != k => return Err(Error::Inhomogeneous),
                _ => {}
            }
        }
        Ok(key)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free::{witt_dimension, GeneratorSet};
    use num_rational::BigRational;

    fn abc() -> FreeLieAlgebra {
        FreeLieAlgebra::new(
            GeneratorSet::from_pairs(7, &[("a", 1), ("b", 2), ("c", 3), ("d", 4)]).unwrap(),
        )
    }

    #[test]
    fn antisymmetry_and_alternation() {
        let f = abc();
        let a = f.generator("a").unwrap();
        let b = f.generator("b").unwrap();
        let ab = f.bracket(&a, &b);
        let ba = f.bracket(&b, &a);
        assert_eq!(f.render(&ab), "[a,b]");
        assert_eq!(ba, ab.scaled(&BigRational::from_integer((-1).into())));
        assert!(f.bracket(&a, &a).is_zero());
        assert!(f.bracket(&ab, &ab).is_zero());
    }

    #[test]
    fn two_by_two_bracket_reexpands() {
        let f = abc();
        let g = |n: &str| f.generator(n).unwrap();
        let ab = f.bracket(&g("a"), &g("b"));
        let cd = f.bracket(&g("c"), &g("d"));
        let lhs = f.bracket(&ab, &cd);
        // [[a,b],[c,d]] = [[a,b],c],d] - [[a,b],d],c]
        let t1 = f
            .left_normalized(&[g("a"), g("b"), g("c"), g("d")])
            .unwrap();
        let t2 = f
            .left_normalized(&[g("a"), g("b"), g("d"), g("c")])
            .unwrap();
        assert_eq!(lhs, t1.sub(&t2));
        assert_eq!(
            f.fine_degree_of_element(&lhs).unwrap().unwrap().counts(),
            &[1, 1, 1, 1]
        );
    }

    #[test]
    fn basis_sizes_match_witt() {
        let f = abc();
        for key in f.generators().fine_degrees_up_to(5) {
            assert_eq!(
                f.basis(&key).len() as u128,
                witt_dimension(key.counts()),
                "{key}"
            );
        }
    }

    #[test]
    fn brackets_stay_in_fine_degree() {
        let f = abc();
        let key = f.generators().fine_degree(&[("a", 2), ("b", 1)]).unwrap();
        let key2 = f
            .generators()
            .fine_degree(&[("a", 1), ("c", 1), ("b", 1)])
            .unwrap();
        let sum = key.add(&key2);
        for &u in &f.basis(&key).monos {
            for &v in &f.basis(&key2).monos {
                for &(m, _) in f.bracket_monomials(u, v).iter() {
                    assert_eq!(f.fine_degree_of(m), sum);
                }
            }
        }
    }
}
