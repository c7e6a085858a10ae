//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use gcchern::chern::{
    self, admissible_ac_chern, complex_structure_chtm, conjugate, gc_admissible_chern,
    gc_chtm_from_pair, modulo_conjugation, pretty, symplectic_chtm, whitney_product,
};
use gcchern::enumeration::{
    ball_bound, brute_force_oracle, enumerate_solutions, ORACLE_MAX_WINDOW,
};
use gcchern::manifold::preset;
use gcchern::moduli::{
    canonical_from_chtm, finiteness_certificate, infinite_components_certificate, FiniteVerdict,
    InfiniteVerdict,
};
use gcchern::{
    ChernData, CohClass, Completeness, EnumerationProblem, GcPairing, IntersectionLattice,
};
use num_bigint::BigInt;
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn a(k: i64) -> CohClass {
    CohClass::new(vec![k])
}

fn cp2_almost_complex() -> Outcome {
    let m = preset("CP2").map_err(err)?;
    let p =
        EnumerationProblem::new(m.lattice.clone(), m.ac_target(), m.w2.clone(), 8).map_err(err)?;
    let r = enumerate_solutions(&p).map_err(err)?;
    ensure!(
        r.solutions() == [a(-3), a(3)],
        "solutions {:?}",
        r.solutions()
    );
    ensure!(r.completeness() == Completeness::Complete, "not complete");
    let list = admissible_ac_chern(&m, 8).map_err(err)?;
    let shown: BTreeSet<String> = list.data.iter().map(|d| pretty(&m.lattice, d)).collect();
    let want: BTreeSet<String> = ["1 + 3a + 3a^2", "1 - 3a + 3a^2"].map(String::from).into();
    ensure!(shown == want, "rendered {shown:?}");
    Ok("c1 = ±3a, Chern polynomials 1 ± 3a + 3a^2".into())
}

fn cp2_generalized() -> Outcome {
    let m = preset("CP2").map_err(err)?;
    let list = gc_admissible_chern(&m, 8).map_err(err)?;
    let want = vec![
        ChernData::new(4, a(-6), 15),
        ChernData::new(4, a(0), -3),
        ChernData::new(4, a(6), 15),
    ];
    ensure!(list.data == want, "gc values {:?}", list.data);
    let shown: Vec<String> = list.data.iter().map(|d| pretty(&m.lattice, d)).collect();
    ensure!(
        shown == ["1 - 6a + 15a^2", "1 - 3a^2", "1 + 6a + 15a^2"],
        "rendered {shown:?}"
    );
    let symp = symplectic_chtm(&m.lattice, &a(3), 3).map_err(err)?;
    ensure!(
        pretty(&m.lattice, &symp) == "1 - 3a^2",
        "symplectic gives {symp:?}"
    );
    let cx = complex_structure_chtm(&m.lattice, &a(-3), 3).map_err(err)?;
    ensure!(
        pretty(&m.lattice, &cx) == "1 - 6a + 15a^2",
        "complex gives {cx:?}"
    );
    let reps = modulo_conjugation(&list.data).map_err(err)?;
    ensure!(reps.len() == 2, "{} classes modulo conjugation", reps.len());
    Ok("{1 - 3a^2, 1 ± 6a + 15a^2}, 2 up to conjugation".into())
}

fn definite_finiteness() -> Outcome {
    let mut summary = Vec::new();
    for name in ["CP2", "CP2bar", "#2CP2", "#3CP2"] {
        let m = preset(name).map_err(err)?;
        let n = m.ac_target();
        let p =
            EnumerationProblem::new(m.lattice.clone(), n.clone(), m.w2.clone(), 8).map_err(err)?;
        let r = enumerate_solutions(&p).map_err(err)?;
        ensure!(
            r.completeness() == Completeness::Complete,
            "{name}: not complete"
        );
        let bound = ball_bound(&p).map_err(err)?;
        let oracle_problem =
            EnumerationProblem::new(m.lattice.clone(), n.clone(), m.w2.clone(), bound)
                .map_err(err)?;
        let oracle = brute_force_oracle(&oracle_problem).map_err(err)?;
        ensure!(
            r.solutions() == oracle.as_slice(),
            "{name}: differs from the oracle"
        );
        for c in r.solutions() {
            for &g in c.iter() {
                ensure!(
                    BigInt::from(g * g) <= n.abs(),
                    "{name}: {c} outside the ball"
                );
            }
        }
        summary.push(format!("{name}:{}", r.solutions().len()));
    }
    Ok(format!("complete and oracle-equal ({})", summary.join(" ")))
}

fn definite_certificates() -> Outcome {
    let names = [
        "CP2", "CP2bar", "#2CP2", "#3CP2", "4CP2", "2CP2bar", "3CP2bar", "5CP2bar", "6CP2bar",
    ];
    for name in names {
        let m = preset(name).map_err(err)?;
        ensure!(m.lattice.is_definite(), "{name} is not definite");
        let cert = finiteness_certificate(&m, 8).map_err(err)?;
        ensure!(
            cert.verdict == FiniteVerdict::Finite,
            "{name}: verdict {:?}",
            cert.verdict
        );
        ensure!(
            cert.completeness == Completeness::Complete,
            "{name}: incomplete"
        );
        // independent list: all products of oracle solutions
        let p = EnumerationProblem::new(m.lattice.clone(), m.ac_target(), m.w2.clone(), 0)
            .map_err(err)?;
        let bound = ball_bound(&p).map_err(err)?;
        let p = EnumerationProblem::new(m.lattice.clone(), m.ac_target(), m.w2.clone(), bound)
            .map_err(err)?;
        let sols = brute_force_oracle(&p).map_err(err)?;
        let mut want = BTreeSet::new();
        for x in &sols {
            for y in &sols {
                let c1 = x.checked_add(y).map_err(err)?;
                let c2 = BigInt::from(2 * m.euler) + m.lattice.pair(x, y).map_err(err)?;
                want.insert(ChernData::new(4, c1, c2));
            }
        }
        let got: BTreeSet<ChernData> = cert.chern_data().into_iter().collect();
        ensure!(
            got == want,
            "{name}: certificate list differs from the oracle"
        );
        ensure!(cert.count == want.len(), "{name}: count {}", cert.count);
    }
    Ok(format!("{} definite presets certified finite", names.len()))
}

fn infinitely_many_orbits() -> Outcome {
    for name in ["E(1)", "K3"] {
        let m = preset(name).map_err(err)?;
        let cert = infinite_components_certificate(&m, 10).map_err(err)?;
        ensure!(
            cert.verdict == InfiniteVerdict::Verified,
            "{name}: unverified"
        );
        let div: Vec<BigInt> = cert
            .entries
            .iter()
            .map(|e| e.divisibility.clone())
            .collect();
        let want: Vec<BigInt> = (0..=10).map(BigInt::from).collect();
        ensure!(div == want, "{name}: divisibility column {div:?}");
        let fiber = m.fiber.clone().ok_or(format!("{name}: no fiber"))?;
        for e in &cert.entries {
            let expected = fiber.checked_scale(-(e.k as i64)).map_err(err)?;
            ensure!(e.c1k == expected, "{name}: k = {} has c1K = {}", e.k, e.c1k);
            ensure!(
                e.c1k.is_zero() == (e.k == 0),
                "{name}: k = {} zero pattern",
                e.k
            );
        }
    }
    Ok("E(1) and K3 verified, divisibility 0..10".into())
}

fn canonical_consistency() -> Outcome {
    let mut rng = common::rng(6);
    let presets: Vec<_> = common::small_presets()
        .into_iter()
        .filter(|m| {
            admissible_ac_chern(m, chern::SearchWindow::new(2).with_limit(64))
                .map(|l| !l.data.is_empty())
                .unwrap_or(false)
        })
        .collect();
    ensure!(
        !presets.is_empty(),
        "no preset admits almost complex structures"
    );
    let mut checked = 0;
    while checked < 200 {
        let base = presets.choose(&mut rng).unwrap();
        let m = common::scrambled(base, &mut rng);
        let list =
            admissible_ac_chern(&m, chern::SearchWindow::new(4).with_limit(64)).map_err(err)?;
        if list.data.is_empty() {
            continue;
        }
        let plus = list.data.choose(&mut rng).unwrap();
        let minus = list.data.choose(&mut rng).unwrap();
        let d = gc_chtm_from_pair(&m.lattice, plus, minus, GcPairing::J1).map_err(err)?;
        let k = canonical_from_chtm(&d).map_err(|e| format!("{}: {e}", m.name))?;
        let half = plus.c1.checked_add(&minus.c1).map_err(err)?.halve();
        ensure!(
            half.as_ref() == Some(&k.c1k),
            "{}: c1K = {} for {} + {}",
            m.name,
            k.c1k,
            plus.c1,
            minus.c1
        );
        ensure!(
            k.c1k.checked_scale(2).map_err(err)? == d.c1,
            "{}: c1(TM) != 2 c1K",
            m.name
        );
        checked += 1;
    }
    Ok(format!("{checked} random pairs, c1(TM) = 2 c1(K)"))
}

fn algebra_properties() -> Outcome {
    let mut rng = common::rng(7);
    let mut cases = 0;
    for _ in 0..200 {
        let base = common::small_presets().choose(&mut rng).unwrap().clone();
        let m = common::scrambled(&base, &mut rng);
        let l = &m.lattice;
        let r = l.rank();
        let mut data = || {
            let rank = rng.gen_range(0..4);
            let c1 = CohClass::new((0..r).map(|_| rng.gen_range(-9..=9)).collect());
            ChernData::new(rank, c1, rng.gen_range(-50..=50))
        };
        let (x, y, z) = (data(), data(), data());
        let xy = whitney_product(l, &x, &y).map_err(err)?;
        ensure!(
            xy == whitney_product(l, &y, &x).map_err(err)?,
            "commutativity"
        );
        let left = whitney_product(l, &xy, &z).map_err(err)?;
        let right =
            whitney_product(l, &x, &whitney_product(l, &y, &z).map_err(err)?).map_err(err)?;
        ensure!(left == right, "associativity");
        ensure!(
            whitney_product(l, &x, &ChernData::unit(r)).map_err(err)? == x,
            "unit"
        );
        ensure!(
            conjugate(&conjugate(&x).map_err(err)?).map_err(err)? == x,
            "involution"
        );
        let conj_xy = whitney_product(
            l,
            &conjugate(&x).map_err(err)?,
            &conjugate(&y).map_err(err)?,
        )
        .map_err(err)?;
        ensure!(
            conjugate(&xy).map_err(err)? == conj_xy,
            "conjugation is not multiplicative"
        );
        cases += 1;
    }
    for m in common::small_presets() {
        let list = admissible_ac_chern(&m, chern::SearchWindow::new(3)).map_err(err)?;
        let set: BTreeSet<CohClass> = list.data.iter().map(|d| d.c1.clone()).collect();
        for c in &set {
            ensure!(
                set.contains(&c.checked_neg().map_err(err)?),
                "{}: {c} without its negative",
                m.name
            );
        }
    }
    let mut changes = 0;
    let lattices: Vec<IntersectionLattice> = common::small_presets()
        .into_iter()
        .map(|m| m.lattice)
        .chain([
            IntersectionLattice::e8(),
            IntersectionLattice::e8()
                .negated()
                .direct_sum(&IntersectionLattice::hyperbolic()),
        ])
        .collect();
    while changes < 50 {
        let l = lattices.choose(&mut rng).unwrap();
        let t = common::random_unimodular(&mut rng, l.rank(), 8);
        let Ok(moved) = l.transform(&t) else { continue };
        ensure!(
            moved.signature().map_err(err)? == l.signature().map_err(err)?,
            "inertia changed under a basis change"
        );
        ensure!(
            moved.determinant() == l.determinant(),
            "determinant changed"
        );
        changes += 1;
    }
    Ok(format!(
        "{cases} product cases, {changes} basis changes, zero failures"
    ))
}

const RANK4_SAMPLE: usize = 100;

/// Compares the enumerator with the oracle for every parity and every
/// `|N| ≤ 20` on one definite form; returns the number of problems.
fn oracle_check(l: &IntersectionLattice) -> Result<usize, String> {
    let mut problems = 0;
    for parity in common::parity_classes(l.rank()) {
        for n in -20i64..=20 {
            let p = EnumerationProblem::new(l.clone(), n, parity.clone(), 0).map_err(err)?;
            let bound = ball_bound(&p).map_err(err)?;
            ensure!(
                bound <= ORACLE_MAX_WINDOW,
                "ball bound {bound} for {:?}",
                l.gram()
            );
            let fast = enumerate_solutions(&p).map_err(err)?;
            let slow = brute_force_oracle(
                &EnumerationProblem::new(l.clone(), n, parity.clone(), bound).map_err(err)?,
            )
            .map_err(err)?;
            ensure!(
                fast.solutions() == slow.as_slice(),
                "gram {:?}, N = {n}, parity {parity}",
                l.gram()
            );
            problems += 1;
        }
    }
    Ok(problems)
}

fn definite(gram: Vec<Vec<i64>>) -> Option<IntersectionLattice> {
    IntersectionLattice::new(gram)
        .ok()
        .filter(|l| l.is_nondegenerate() && l.is_definite())
}

fn oracle_equivalence() -> Outcome {
    // Every definite form of rank <= 3 with entries in [-2, 2]; for rank 4 a
    // fixed-seed sample, the full set being about 10^8 problems.
    let mut problems = 0;
    let mut exhaustive = 0;
    for rank in 1..=3 {
        for l in common::all_gram_matrices(rank, -2, 2)
            .into_iter()
            .filter_map(definite)
        {
            problems += oracle_check(&l)?;
            exhaustive += 1;
        }
    }
    let mut rng = common::rng(8);
    let mut seen = BTreeSet::new();
    while seen.len() < RANK4_SAMPLE {
        let upper: Vec<i64> = (0..10).map(|_| rng.gen_range(-2..=2)).collect();
        let g = common::symmetric(4, &upper);
        if let Some(l) = definite(g.clone()) {
            if seen.insert(g) {
                problems += oracle_check(&l)?;
            }
        }
    }
    let sampled = seen.len();
    Ok(format!(
        "all {exhaustive} definite forms of rank <= 3 and {sampled} sampled of rank 4, {problems} problems, zero discrepancies"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("CP2 almost complex enumeration", cp2_almost_complex),
        ("CP2 generalized Chern values", cp2_generalized),
        ("finiteness on definite forms", definite_finiteness),
        ("finiteness certificates", definite_certificates),
        ("infinitely many orbits on E(1), K3", infinitely_many_orbits),
        ("canonical class consistency", canonical_consistency),
        ("algebra property suite", algebra_properties),
        ("oracle equivalence", oracle_equivalence),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail}) [{ms} ms]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why} [{ms} ms]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
