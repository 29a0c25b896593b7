//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test -p gradedlie-core --test acceptance -- --nocapture`
//! to see the lines.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use gradedlie_core::eigenspace::{
    abelian_example, decompose_eigenspaces, eigenspace_decomposition, heisenberg,
    verify_automorphism_pair, verify_hypotheses, verify_selective_condition, CycMatrix,
};
use gradedlie_core::free::{witt_dimension, FineDegree, FreeLieAlgebra, GeneratorSet, LieElement};
use gradedlie_core::harness::{run_check, CheckConfig, CheckReport, LemmaId, Verdict};
use gradedlie_core::quotient::{Ambient, GradedPresentation, Quotient, RelatorFamily};
use gradedlie_core::zn::{
    dependency_set, final_length, is_minus_one_dependent, IndexSequence, PaperConstants,
};

type Outcome = Result<String, String>;

/// Runs `body`, prints the criterion line, and fails the test on error,
/// panic, or exceeded time limit.
fn criterion(id: u32, name: &str, limit_secs: f64, body: impl FnOnce() -> Outcome) {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into()))
    });
    let secs = start.elapsed().as_secs_f64();
    let result = result.and_then(|detail| {
        if secs <= limit_secs {
            Ok(detail)
        } else {
            Err(format!("took {secs:.2}s, limit {limit_secs}s"))
        }
    });
    match result {
        Ok(detail) => println!("PASS criterion {id:>2} [{secs:8.3}s] {name}: {detail}"),
        Err(why) => {
            println!("FAIL criterion {id:>2} [{secs:8.3}s] {name}: {why}");
            panic!("criterion {id} failed: {why}");
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(cfg: &CheckConfig) -> Result<CheckReport, String> {
    run_check(cfg).map_err(|e| e.to_string())
}

fn expect_verdict(r: &CheckReport, v: Verdict, what: &str) -> Result<(), String> {
    ensure(r.verdict == v, || {
        format!(
            "{what}: expected {v:?}, got {:?} ({})",
            r.verdict, r.message
        )
    })
}

// ---- independent oracles ----

/// Residues reachable as sums of nonempty subsets, by forward dynamic programming.
fn nonempty_subset_sums(n: u64, seq: &[u64]) -> BTreeSet<u64> {
    let mut reach: BTreeSet<u64> = BTreeSet::new();
    for &a in seq {
        let shifted: Vec<u64> = reach.iter().map(|&s| (s + a) % n).collect();
        reach.extend(shifted);
        reach.insert(a % n);
    }
    reach
}

fn oracle_dependent(n: u64, seq: &[u64]) -> bool {
    nonempty_subset_sums(n, seq).contains(&0)
}

/// `{c_1 d_1 + ... + c_k d_k : c_i in {0, +-1, +-2}}` by direct enumeration.
fn oracle_dtilde(n: u64, ds: &[u64]) -> BTreeSet<u64> {
    let mut out = BTreeSet::from([0u64]);
    for &d in ds {
        out = out
            .iter()
            .flat_map(|&s| (0..5u64).map(move |c| (s + (c + n - 2) % n * d) % n))
            .collect();
    }
    out
}

fn additive_order(n: u64, a: u64) -> u64 {
    (1..=n).find(|&k| (k * a).is_multiple_of(n)).unwrap()
}

fn is_lyndon_brute(w: &[u8]) -> bool {
    (1..w.len()).all(|r| {
        let rot: Vec<u8> = w[r..].iter().chain(&w[..r]).copied().collect();
        w < rot.as_slice()
    })
}

/// Number of Lyndon words with the given letter content, by enumerating every word.
fn lyndon_count_brute(counts: &[u32]) -> u64 {
    fn go(counts: &mut Vec<u32>, word: &mut Vec<u8>, total: usize, hits: &mut u64) {
        if word.len() == total {
            if is_lyndon_brute(word) {
                *hits += 1;
            }
            return;
        }
        for l in 0..counts.len() {
            if counts[l] > 0 {
                counts[l] -= 1;
                word.push(l as u8);
                go(counts, word, total, hits);
                word.pop();
                counts[l] += 1;
            }
        }
    }
    let total = counts.iter().sum::<u32>() as usize;
    let mut hits = 0;
    go(&mut counts.to_vec(), &mut Vec::new(), total, &mut hits);
    hits
}

fn moebius(mut d: u64) -> i128 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= d {
        if d.is_multiple_of(p) {
            d /= p;
            if d.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if d > 1 {
        sign = -sign;
    }
    sign
}

fn factorial(k: u64) -> i128 {
    (1..=k as i128).product()
}

/// Necklace formula evaluated from scratch.
fn witt_oracle(counts: &[u32]) -> i128 {
    let total: u64 = counts.iter().map(|&c| c as u64).sum();
    let g = counts.iter().fold(0u64, |g, &c| num_gcd(g, c as u64));
    let mut acc = 0i128;
    for d in (1..=g).filter(|d| g % d == 0) {
        let multinomial = counts
            .iter()
            .fold(factorial(total / d), |m, &c| m / factorial(c as u64 / d));
        acc += moebius(d) * multinomial;
    }
    acc / total as i128
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

// ---- criteria ----

#[test]
fn criterion_01_combinatorics_oracle() {
    criterion(1, "combinatorics oracle equivalence", 10.0, || {
        let mut sequences = 0u64;
        let mut independent = 0u64;
        for n in (3..=15u64).step_by(2) {
            let nonzero: Vec<u64> = (1..n).collect();
            for len in 1..=4usize {
                let base = nonzero.len() as u64;
                for code in 0..base.pow(len as u32) {
                    let seq: Vec<u64> = (0..len as u32)
                        .map(|p| nonzero[(code / base.pow(p) % base) as usize])
                        .collect();
                    let signed: Vec<i64> = seq.iter().map(|&v| v as i64).collect();
                    let s = IndexSequence::new(n, &signed).map_err(|e| e.to_string())?;
                    let dep = is_minus_one_dependent(&s).map_err(|e| e.to_string())?;
                    ensure(dep == oracle_dependent(n, &seq), || {
                        format!("dependence mismatch on {seq:?} mod {n}")
                    })?;

                    if dep {
                        ensure(dependency_set(&s).is_err(), || {
                            format!("D accepted dependent {seq:?} mod {n}")
                        })?;
                    } else {
                        let d = dependency_set(&s).map_err(|e| e.to_string())?;
                        let by_definition: BTreeSet<u64> = (0..n)
                            .filter(|&j| {
                                let mut ext = seq.clone();
                                ext.push(j);
                                oracle_dependent(n, &ext)
                            })
                            .collect();
                        let mut negated: BTreeSet<u64> = nonempty_subset_sums(n, &seq)
                            .iter()
                            .map(|&x| (n - x) % n)
                            .collect();
                        negated.insert(0);
                        ensure(d.values == by_definition && d.values == negated, || {
                            format!("D mismatch on {seq:?} mod {n}")
                        })?;
                        independent += 1;
                    }
                    sequences += 1;
                }
            }
        }
        Ok(format!(
            "{sequences} sequences agree, {independent} independent"
        ))
    });
}

#[test]
fn criterion_02_hall_basis_dimensions() {
    criterion(2, "Hall basis dimensions equal Witt formula", 60.0, || {
        let gens = GeneratorSet::from_pairs(7, &[("a", 1), ("b", 2), ("c", 3)])
            .map_err(|e| e.to_string())?;
        let alg = FreeLieAlgebra::new(gens);
        let mut keys = 0;
        for k1 in 0..=8u32 {
            for k2 in 0..=8 - k1 {
                for k3 in 0..=8 - k1 - k2 {
                    let counts = [k1, k2, k3];
                    if k1 + k2 + k3 == 0 {
                        continue;
                    }
                    let hall = alg
                        .hall_basis(&FineDegree::from_counts(counts.to_vec()))
                        .map_err(|e| e.to_string())?;
                    let witt = witt_dimension(&counts);
                    let brute = lyndon_count_brute(&counts);
                    ensure(hall.len() as u128 == witt && witt == brute as u128, || {
                        format!("{counts:?}: hall {} witt {witt} brute {brute}", hall.len())
                    })?;
                    ensure(witt as i128 == witt_oracle(&counts), || {
                        format!("{counts:?}: formula oracle")
                    })?;
                    keys += 1;
                }
            }
        }
        let big = [1, 7, 7];
        let hall = alg
            .hall_basis(&FineDegree::from_counts(big.to_vec()))
            .map_err(|e| e.to_string())?;
        ensure(
            witt_dimension(&big) == 3432 && witt_oracle(&big) == 3432 && hall.len() == 3432,
            || format!("(1,7,7): hall {} witt {}", hall.len(), witt_dimension(&big)),
        )?;
        Ok(format!(
            "{keys} fine degrees up to length 8; (1,7,7) has dimension 3432"
        ))
    });
}

#[test]
fn criterion_03_lemma3() {
    criterion(3, "Lemma 3 reproduction", 300.0, || {
        let mut lines = Vec::new();
        for n in [5, 7] {
            let r = run(&CheckConfig::new(LemmaId::Lemma3, n)
                .generators(&[1, 2, 3])
                .cutoff(6))?;
            expect_verdict(&r, Verdict::Verified, &format!("n = {n}"))?;
            ensure(r.statistics["derived_length"] == 2, || {
                format!("n = {n}: derived length {}", r.statistics["derived_length"])
            })?;
            ensure(r.statistics["vacuity_threshold"] == 3, || {
                format!("n = {n}: threshold")
            })?;
            ensure(r.statistics["derived_length_informative"] == true, || {
                format!("n = {n}: not informative")
            })?;

            let c = run(&CheckConfig::new(LemmaId::Lemma3, n)
                .generators(&[1, 2, 3])
                .cutoff(6)
                .control())?;
            expect_verdict(&c, Verdict::Counterexample, &format!("n = {n} control"))?;
            let len: u32 = c
                .witness
                .as_ref()
                .ok_or("control without witness")?
                .fine_degree
                .values()
                .sum();
            ensure(len == 4, || {
                format!("n = {n}: control witness at length {len}")
            })?;
            lines.push(format!(
                "n={n} derived length 2, control nonzero at length 4"
            ));
        }
        Ok(lines.join("; "))
    });
}

#[test]
fn criterion_04_lemma1() {
    criterion(4, "Lemma 1 reproduction", 300.0, || {
        let n = 101;
        let tuple = [1u64, 2, 5, 98];
        let dt = oracle_dtilde(n, &tuple);
        let admissible: Vec<u64> = (1..n).filter(|b| !dt.contains(b)).collect();
        ensure(admissible.len() >= 5, || {
            format!("only {} admissible b", admissible.len())
        })?;
        let mut slowest = 0f64;
        for &b in &admissible {
            let start = Instant::now();
            let r = run(&CheckConfig::new(LemmaId::Lemma1, n)
                .indices(&[1, 2, 5, 98])
                .target(b as i64))?;
            expect_verdict(&r, Verdict::Verified, &format!("b = {b}"))?;
            ensure(r.statistics["free_dimension"] == 24, || {
                format!("b = {b}: free dimension")
            })?;
            let secs = start.elapsed().as_secs_f64();
            ensure(secs < 300.0, || format!("b = {b} took {secs:.1}s"))?;
            slowest = slowest.max(secs);
        }
        for b in [0u64, 3, 4] {
            ensure(dt.contains(&b), || format!("{b} should lie in D~"))?;
            let r = run(&CheckConfig::new(LemmaId::Lemma1, n)
                .indices(&[1, 2, 5, 98])
                .target(b as i64))?;
            expect_verdict(&r, Verdict::HypothesisViolated, &format!("b = {b} in D~"))?;
        }
        Ok(format!(
            "{} admissible b verified, slowest {slowest:.3}s",
            admissible.len()
        ))
    });
}

#[test]
fn criterion_05_lemma2() {
    criterion(5, "Lemma 2 reproduction", 3600.0, || {
        let smoke_start = Instant::now();
        let smoke = run(&CheckConfig::new(LemmaId::Lemma2, 11)
            .indices(&[1, 3, 2])
            .multiplicity(3))?;
        expect_verdict(&smoke, Verdict::Verified, "multiplicity 3")?;
        ensure(smoke.statistics["product_length"] == 7, || {
            "smoke length".into()
        })?;
        let smoke_secs = smoke_start.elapsed().as_secs_f64();
        ensure(smoke_secs < 300.0, || {
            format!("smoke took {smoke_secs:.1}s")
        })?;

        let full = run(&CheckConfig::new(LemmaId::Lemma2, 11)
            .indices(&[1, 3, 2])
            .cutoff(15)
            .budget_seconds(3600.0))?;
        expect_verdict(&full, Verdict::Verified, "multiplicity 7")?;
        ensure(full.statistics["free_dimension"] == 3432, || {
            format!("free dimension {}", full.statistics["free_dimension"])
        })?;
        ensure(full.statistics["product_length"] == 15, || {
            "product length".into()
        })?;
        Ok(format!(
            "length-15 product zero in a 3432-dimensional component; smoke {smoke_secs:.3}s"
        ))
    });
}

#[test]
fn criterion_06_span_form_and_component_bound() {
    criterion(6, "span containment and index prediction", 900.0, || {
        let cfg = |lemma| {
            CheckConfig::new(lemma, 101)
                .indices(&[1, 2, 5, 98])
                .generators(&[96, 100])
                .cutoff(6)
        };
        let span = run(&cfg(LemmaId::SpanForm))?;
        expect_verdict(&span, Verdict::Verified, "span form")?;
        let weak = run(&cfg(LemmaId::SpanForm).control())?;
        expect_verdict(&weak, Verdict::Counterexample, "weakened span control")?;

        let bound = run(&cfg(LemmaId::ComponentBound))?;
        expect_verdict(&bound, Verdict::Verified, "component bound")?;
        let nontrivial: BTreeSet<u64> =
            serde_json::from_value(bound.statistics["nontrivial"].clone())
                .map_err(|e| e.to_string())?;
        let noncentralizing: BTreeSet<u64> =
            serde_json::from_value(bound.statistics["noncentralizing"].clone())
                .map_err(|e| e.to_string())?;

        // sigma + (at most one step of order above 3) + order-3 subgroup, which is {0} mod 101.
        let n = 101u64;
        let sigma = (1 + 2 + 5 + 98) % n;
        let steps: Vec<u64> = oracle_dtilde(n, &[1, 2, 5, 98])
            .into_iter()
            .filter(|&i| i != 0 && additive_order(n, i) > 3)
            .collect();
        let mut predicted = BTreeSet::from([sigma]);
        predicted.extend(steps.iter().map(|&s| (sigma + s) % n));
        ensure(nontrivial.is_subset(&predicted), || {
            format!("{nontrivial:?} not predicted")
        })?;
        ensure(noncentralizing.len() <= nontrivial.len().pow(2), || {
            "e^2 bound".into()
        })?;

        let control = run(&cfg(LemmaId::ComponentBound).control())?;
        expect_verdict(&control, Verdict::Counterexample, "tail-only control")?;
        Ok(format!(
            "ideal dimension {}, nontrivial {nontrivial:?} within {} predicted; both controls fail",
            span.statistics["ideal_dimension"],
            predicted.len()
        ))
    });
}

/// Census recomputed from brackets of quotient monomials against a basis of `t`.
fn census_by_brackets(
    q: &Quotient,
    t: &gradedlie_core::quotient::IdealSnapshot,
) -> (BTreeSet<u64>, BTreeSet<u64>) {
    let alg = q.algebra();
    let mut nontrivial = BTreeSet::new();
    let mut t_basis: Vec<(FineDegree, LieElement)> = Vec::new();
    for (key, _) in t.components() {
        let elems = t.basis_elements(q, key);
        if !elems.is_empty() {
            nontrivial.insert(q.zn_degree(key));
        }
        t_basis.extend(elems.into_iter().map(|e| (key.clone(), e)));
    }
    let mut noncentralizing = BTreeSet::new();
    for key in q.fine_degrees().into_iter().filter(|k| k.len() >= 2) {
        let i = q.zn_degree(&key);
        if noncentralizing.contains(&i) {
            continue;
        }
        let comp = q.component(&key).unwrap();
        'mono: for m in comp.quotient_monomials() {
            let me = alg.monomial_element(m);
            for (tk, te) in &t_basis {
                if key.len() + tk.len() > q.cutoff() {
                    continue;
                }
                if !q.is_zero(&alg.bracket(&me, te)).unwrap() {
                    noncentralizing.insert(i);
                    break 'mono;
                }
            }
        }
    }
    (nontrivial, noncentralizing)
}

#[test]
fn criterion_07_centralizer_property() {
    criterion(
        7,
        "centralizer census bound on random ideals",
        600.0,
        || {
            let mut rng = StdRng::seed_from_u64(0x5eed_0007);
            let mut max_e = 0;
            for trial in 0..200 {
                let n = [3u64, 5, 7, 9, 11][rng.gen_range(0..5)];
                let ngens = rng.gen_range(1..=3);
                let pairs: Vec<(String, i64)> = (0..ngens)
                    .map(|i| (format!("g{i}"), rng.gen_range(1..n) as i64))
                    .collect();
                let refs: Vec<(&str, i64)> = pairs.iter().map(|(s, d)| (s.as_str(), *d)).collect();
                let gens = GeneratorSet::from_pairs(n, &refs).map_err(|e| e.to_string())?;
                let mut families = Vec::new();
                for f in [
                    RelatorFamily::ZeroComponentKill,
                    RelatorFamily::SelectiveMetabelian,
                    RelatorFamily::SelectSecond,
                ] {
                    if rng.gen_bool(0.5) {
                        families.push(f);
                    }
                }
                let cutoff = rng.gen_range(3..=5);
                let q = Quotient::new(
                    GradedPresentation::new(gens, families, cutoff).map_err(|e| e.to_string())?,
                )
                .map_err(|e| e.to_string())?;

                let keys: Vec<FineDegree> = q
                    .fine_degrees()
                    .into_iter()
                    .filter(|k| k.len() >= 2 && !q.component(k).unwrap().is_trivial())
                    .collect();
                let mut seeds = Vec::new();
                if !keys.is_empty() {
                    for _ in 0..rng.gen_range(1..=2) {
                        let key = &keys[rng.gen_range(0..keys.len())];
                        let comp = q.component(key).unwrap();
                        let mut e = LieElement::zero();
                        for m in comp.quotient_monomials() {
                            let c: i64 = rng.gen_range(-2..=2);
                            if c != 0 {
                                let term = q
                                    .algebra()
                                    .monomial_element(m)
                                    .scaled(&num_rational::BigRational::from_integer(c.into()));
                                e = e.add(&term);
                            }
                        }
                        seeds.push(e);
                    }
                }
                let t = q
                    .ideal_generated(&seeds, Ambient::Derived, "T")
                    .map_err(|e| e.to_string())?;
                let census = q.centralizer_census(&t).map_err(|e| e.to_string())?;
                ensure(census.bound_holds(), || {
                    format!("trial {trial}: bound fails {census:?}")
                })?;
                let (nontrivial, noncentralizing) = census_by_brackets(&q, &t);
                ensure(
                    census.nontrivial == nontrivial && census.noncentralizing == noncentralizing,
                    || {
                        format!("trial {trial}: census {census:?} vs recomputed {nontrivial:?} {noncentralizing:?}")
                    },
                )?;
                let differences: BTreeSet<u64> = nontrivial
                    .iter()
                    .flat_map(|&k| nontrivial.iter().map(move |&j| (k + n - j) % n))
                    .collect();
                ensure(noncentralizing.is_subset(&differences), || {
                    format!("trial {trial}: not in S - S")
                })?;
                max_e = max_e.max(nontrivial.len());
            }
            Ok(format!("200 ideals, largest e = {max_e}"))
        },
    );
}

#[test]
fn criterion_08_proposition() {
    criterion(8, "Proposition pipeline", 900.0, || {
        let cfg = CheckConfig::new(LemmaId::Proposition, 7)
            .generators(&[1, 2, 3])
            .cutoff(6);
        let r = run(&cfg)?;
        expect_verdict(&r, Verdict::Verified, "proposition")?;
        let c = run(&cfg.clone().control())?;
        let control_ok = c.verdict == Verdict::Counterexample || c.statistics["vacuous"] == true;
        ensure(control_ok, || {
            format!("control neither fails nor is vacuous: {}", c.message)
        })?;
        let deep = run(&CheckConfig::new(LemmaId::Proposition, 7)
            .generators(&[1, 2, 3])
            .cutoff(8))?;
        expect_verdict(&deep, Verdict::Verified, "proposition at cutoff 8")?;
        ensure(deep.statistics["vacuous"] == false, || {
            "cutoff 8 should not be vacuous".into()
        })?;
        Ok(format!(
            "{}; cutoff 8: {}; control {} (vacuous = {})",
            r.message,
            deep.message,
            c.verdict.label(),
            c.statistics["vacuous"]
        ))
    });
}

#[test]
fn criterion_09_eigenspace() {
    criterion(9, "eigenspace pipeline", 10.0, || {
        let err = |e: gradedlie_core::Error| e.to_string();
        let (alg, aut) = abelian_example();
        ensure(
            verify_automorphism_pair(&alg, &aut).map_err(err)?.passed,
            || "pair".into(),
        )?;
        let hyp = verify_hypotheses(&alg, &aut).map_err(err)?;
        ensure(
            hyp.passed && hyp.fixed_phi_dimension == 0 && hyp.fixed_h_metabelian,
            || format!("{hyp:?}"),
        )?;
        let g = eigenspace_decomposition(&alg, &aut).map_err(err)?;
        ensure(g.dimensions() == vec![0, 1, 1], || {
            format!("dims {:?}", g.dimensions())
        })?;
        ensure(
            verify_selective_condition(&alg, &g).map_err(err)?.passed,
            || "selective".into(),
        )?;

        for n in [3, 5] {
            let h = heisenberg(n).map_err(err)?;
            let k = h.field().clone();
            let phi = CycMatrix::diagonal(
                &k,
                vec![k.omega_power(1), k.omega_power(1), k.omega_power(2)],
            );
            let g = decompose_eigenspaces(&h, &phi, n).map_err(err)?;
            ensure(
                g.component(1) == [h.basis_vector(0), h.basis_vector(1)],
                || format!("n = {n}: L_1"),
            )?;
            ensure(g.component(2) == [h.basis_vector(2)], || {
                format!("n = {n}: L_2")
            })?;
        }
        Ok("abelian example passes all checks; Heisenberg L_1 = <x, y>, L_2 = <z>".into())
    });
}

#[test]
fn criterion_10_constants() {
    criterion(10, "constants", 1.0, || {
        let c = PaperConstants::new(3);
        ensure(c.dtilde_max == 625, || "dtilde".into())?;
        ensure(c.u_max == 2_343_750, || "u_max".into())?;
        ensure(
            (c.e_bound.coefficient, c.e_bound.base, c.e_bound.exponent) == (3, 5, 4 * c.u_max),
            || format!("e_bound {}", c.e_bound.render()),
        )?;
        ensure(c.final_length == 5 && final_length(3) == 5, || {
            "final length".into()
        })?;
        let natural = (3f64.ln() + 4.0 * 2_343_750.0 * 5f64.ln()) / 10f64.ln();
        let oracle = natural.floor() as i64 + 1;
        let digits = c.e_bound.decimal_digits() as i64;
        ensure((digits - oracle).abs() <= 1, || {
            format!("{digits} digits vs {oracle}")
        })?;
        let table: BTreeMap<&str, String> = [
            ("e_bound", c.e_bound.render()),
            ("digits", digits.to_string()),
        ]
        .into();
        Ok(format!("{table:?}"))
    });
}
