//! Random small configurations: every check must end verified or with a
//! hypothesis violation, never a counterexample.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use gradedlie_core::harness::{run_check, CheckConfig, LemmaId, Verdict};

const MODULI: [u64; 8] = [5, 7, 9, 11, 13, 15, 17, 21];

fn residues(rng: &mut StdRng, n: u64, k: usize) -> Vec<i64> {
    (0..k).map(|_| rng.gen_range(0..n) as i64).collect()
}

/// `(a1, a2, a3, a4)` with small `a1..a3` and `a4` minus a random subset sum of
/// them, the shape the quadruple hypotheses ask for when `a1..a3` are independent.
fn quadruple(rng: &mut StdRng, n: u64) -> Vec<i64> {
    let mut idx: Vec<i64> = (0..3).map(|_| rng.gen_range(0..n / 5) as i64).collect();
    let sum: i64 = idx.iter().filter(|_| rng.gen_bool(0.6)).sum();
    idx.push((-sum).rem_euclid(n as i64));
    idx
}

fn random_config(rng: &mut StdRng, lemma: LemmaId) -> CheckConfig {
    let n = *MODULI.choose(rng).unwrap();
    let cfg = CheckConfig::new(lemma, n);
    match lemma {
        LemmaId::Lemma1 => {
            // D~ of a quadruple covers small moduli, so use larger ones with small indices.
            let n = *[41u64, 53, 61, 71, 83, 101].choose(rng).unwrap();
            let cfg = CheckConfig::new(lemma, n).indices(&quadruple(rng, n));
            if rng.gen_bool(0.5) {
                cfg.target(rng.gen_range(0..n) as i64)
            } else {
                cfg
            }
        }
        LemmaId::Lemma2 => cfg.indices(&residues(rng, n, 3)),
        LemmaId::Lemma3 => {
            let k = rng.gen_range(1..=3);
            cfg.generators(&residues(rng, n, k))
                .cutoff(rng.gen_range(4..=5))
        }
        LemmaId::SpanForm | LemmaId::ComponentBound => {
            let extras = rng.gen_range(0..=1);
            cfg.indices(&quadruple(rng, n))
                .generators(&residues(rng, n, extras))
                .cutoff(6)
        }
        LemmaId::Proposition => {
            let k = rng.gen_range(1..=2);
            cfg.generators(&residues(rng, n, k)).cutoff(6)
        }
    }
}

#[test]
fn random_configs_never_produce_counterexamples() {
    let mut rng = StdRng::seed_from_u64(0xf022);
    for lemma in [
        LemmaId::Lemma1,
        LemmaId::Lemma2,
        LemmaId::Lemma3,
        LemmaId::SpanForm,
        LemmaId::ComponentBound,
        LemmaId::Proposition,
    ] {
        let mut verified = 0;
        for _ in 0..100 {
            let cfg = random_config(&mut rng, lemma);
            let report = run_check(&cfg).unwrap_or_else(|e| panic!("{cfg:?}: {e}"));
            match report.verdict {
                Verdict::Verified => verified += 1,
                Verdict::HypothesisViolated => {}
                other => panic!("{cfg:?}: {other:?} ({})", report.message),
            }
        }
        assert!(
            verified > 0,
            "{lemma:?}: no configuration met the hypotheses"
        );
    }
}
