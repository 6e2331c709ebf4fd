//! One PASS/FAIL line per acceptance criterion, written straight to stderr
//! so they show without `--nocapture`. The test fails if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};

use common::{random_category, random_graded_poset, rng, MAX_MORPHISMS, MAX_OBJECTS};
use koszul_core::category::{from_quiver, opposite, product, FiniteGradedCategory};
use koszul_core::factorization::FactorizationIndex;
use koszul_core::fixtures::{self, Document};
use koszul_core::homology::{check_semisimplicial, reduced_cohomology, Field, SemiSimplicialSet};
use koszul_core::io::CategoryFile;
use koszul_core::koszul::{ext_oracle_resolution, ext_simples, ext_table, is_koszul, CheckedUpTo, ExtQuery};
use koszul_core::poset::{is_locally_cm, poset_to_category, verify_interval_equals_factorization};
use koszul_core::rs::{
    is_almost_discrete_fibration, reduced_incidence_algebra, relation_from_fibration, rs_quotient_indexed,
    verify_rs_axioms,
};
use koszul_core::toric::{skew_category, toric_report};

const Q: Field = Field::Rationals;
const RANDOM_CATEGORIES: u64 = 200;
const RANDOM_POSETS: u64 = 500;
const CATEGORY_SEED: u64 = 0xacce_0002;
const POSET_SEED: u64 = 0xacce_0006;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Every category among the bundled fixtures, including toric skew
/// categories and the relation quotients.
fn fixture_categories() -> Vec<(String, FiniteGradedCategory)> {
    let mut out = Vec::new();
    for f in fixtures::fixtures() {
        match &f.document {
            Document::Category(c) => out.push((f.file.to_string(), c.load().unwrap().category)),
            Document::Relation(r) => {
                let (p, rel) = r.load().unwrap();
                out.push((
                    f.file.to_string(),
                    rs_quotient_indexed(&p, &rel).unwrap().category,
                ));
            }
            Document::Fibration(x) => {
                let l = x.load().unwrap();
                out.push((format!("{} (domain)", f.file), l.domain.category));
                out.push((format!("{} (codomain)", f.file), l.codomain.category));
            }
            Document::Toric(t) => out.push((f.file.to_string(), skew_category(t).unwrap())),
        }
    }
    out
}

fn degrees(cat: &FiniteGradedCategory) -> u32 {
    match CheckedUpTo::of(cat) {
        CheckedUpTo::Complete => cat.max_length(),
        CheckedUpTo::Degree(b) => b,
    }
}

/// Compares both Ext computations on every pair of objects and degree;
/// returns the number of queries.
fn oracle_matches(cat: &FiniteGradedCategory) -> Result<usize, String> {
    let mut n_queries = 0;
    for w in cat.objects() {
        for v in cat.objects() {
            for n in 0..=degrees(cat) {
                let q = ExtQuery { w, v, n };
                let a = ext_simples(cat, q, Q).map_err(|e| e.to_string())?;
                let b = ext_oracle_resolution(cat, q, Q).map_err(|e| e.to_string())?;
                ensure!(a == b, "w={} v={} n={n}: {a:?} vs {b:?}", w.0, v.0);
                n_queries += 1;
            }
        }
    }
    Ok(n_queries)
}

fn criterion_1() -> Outcome {
    let cat = from_quiver(&fixtures::beilinson_p2()).unwrap();
    let (v1, v3) = (
        cat.object_by_label("v1").unwrap(),
        cat.object_by_label("v3").unwrap(),
    );
    for n in 0..=6 {
        let e = ext_simples(&cat, ExtQuery { w: v3, v: v1, n }, Q).unwrap();
        let expected = if n == 2 {
            BTreeMap::from([(2, 3)])
        } else {
            BTreeMap::new()
        };
        ensure!(e == expected, "n={n}: {e:?}");
    }
    Ok("Ext(S_v3, S_v1) = {2: 3} in degree 2, zero for n = 0..6 otherwise".into())
}

fn criterion_2() -> Outcome {
    let mut queries = 0;
    let fx = fixture_categories();
    for (name, cat) in &fx {
        queries += oracle_matches(cat).map_err(|e| format!("{name}: {e}"))?;
    }
    let mut r = rng(CATEGORY_SEED);
    let mut nonzero_higher = 0;
    for i in 0..RANDOM_CATEGORIES {
        let cat = random_category(&mut r);
        ensure!(
            cat.num_objects() <= MAX_OBJECTS && cat.num_morphisms() <= MAX_MORPHISMS,
            "random category {i} too large"
        );
        queries += oracle_matches(&cat).map_err(|e| format!("random category {i}: {e}"))?;
        if !is_koszul(&cat, Q).koszul {
            nonzero_higher += 1;
        }
    }
    Ok(format!(
        "{} fixture and {RANDOM_CATEGORIES} random categories, {queries} queries equal \
         ({nonzero_higher} random ones non-Koszul)",
        fx.len()
    ))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion_3() -> Outcome {
    let cat = from_quiver(&fixtures::kx_truncated(6)).unwrap();
    let index = FactorizationIndex::new(&cat);
    for n in 2..=6u32 {
        let p = cat
            .non_identities_by_length()
            .into_iter()
            .find(|&m| cat.length(m) == n)
            .ok_or(format!("no x^{n}"))?;
        let s = index.space(p).unwrap();
        for r in 1..n as usize {
            let got = s.set.num_cells(r - 1);
            ensure!(
                got == binomial(n as usize - 1, r),
                "x^{n}: dim {} has {got} cells",
                r - 1
            );
        }
        ensure!(
            s.set.top_dim() == n as i64 - 2,
            "x^{n}: top dimension {}",
            s.set.top_dim()
        );
        let b = reduced_cohomology(&s.set, Q);
        ensure!(b.is_acyclic(), "x^{n}: Betti {b}");
    }
    let v = is_koszul(&cat, Q);
    ensure!(
        v.koszul && v.checked_up_to == CheckedUpTo::Degree(6),
        "verdict {v:?}"
    );
    Ok("cells C(n-1, r) in dim r-1 for n = 2..6, all acyclic, Koszul up to degree 6".into())
}

fn criterion_4() -> Outcome {
    use koszul_core::toric::examples::*;
    let r = |s| toric_report(&s, Q).unwrap();
    let f1 = r(hirzebruch(1));
    ensure!(!f1.koszul, "F1 Koszul");
    ensure!(
        f1.witness.as_deref() == Some("x3∘x2∘x1"),
        "F1 witness {:?}",
        f1.witness
    );
    for (name, spec) in [
        ("F2", hirzebruch(2)),
        ("F3", hirzebruch(3)),
        ("P1xP1", p1xp1()),
        ("P2", projective(2, &[0, 1, 2])),
    ] {
        let rep = r(spec);
        ensure!(rep.koszul && rep.engine_koszul, "{name} not Koszul");
    }
    let w = r(weighted_112());
    ensure!(
        w.koszul && !w.potential.exists && !w.dual_collection_strong,
        "P(1,1,2): koszul {} potential {} strong {}",
        w.koszul,
        w.potential.exists,
        w.dual_collection_strong
    );
    Ok("F1 false (x3∘x2∘x1); F2, F3, P1xP1, P2 true; P(1,1,2) Koszul, no potential, not strong".into())
}

fn criterion_5() -> Outcome {
    for rf in [fixtures::v_relation(), fixtures::hexagon_relation()] {
        let (p, rel) = rf.load().unwrap();
        ensure!(
            verify_rs_axioms(&p, &rel).passes(),
            "relation on {:?} fails",
            p.labels()
        );
    }
    let mut induced = 0;
    for f in fixtures::fixtures() {
        let Document::Fibration(x) = &f.document else {
            continue;
        };
        let l = x.load().unwrap();
        let (d, c, fun) = (&l.domain.category, &l.codomain.category, &l.functor);
        let adf = is_almost_discrete_fibration(d, c, fun).unwrap();
        if let (Some((p, pc)), true) = (&l.domain.poset, adf.almost_discrete) {
            let rel = relation_from_fibration(p, pc, c, fun).map_err(|e| format!("{}: {e}", f.file))?;
            ensure!(
                verify_rs_axioms(p, &rel).passes(),
                "{}: induced relation fails",
                f.file
            );
            induced += 1;
        }
    }
    ensure!(induced >= 2, "only {induced} fibration fixtures checked");

    let dc = fixtures::diamond_to_chain().load().unwrap();
    let adf = is_almost_discrete_fibration(&dc.domain.category, &dc.codomain.category, &dc.functor).unwrap();
    ensure!(!adf.almost_discrete, "diamond to chain accepted");
    let w = adf.witness.unwrap();
    let lifts = vec![
        vec!["b≤d".to_string(), "a≤b".into()],
        vec!["c≤d".to_string(), "a≤c".into()],
    ];
    ensure!(w.morphism == "a≤d" && w.lifts == lifts, "witness {w:?}");

    let (p, rel) = fixtures::hexagon_relation().load().unwrap();
    let q = rs_quotient_indexed(&p, &rel).unwrap();
    let (b, c) = (p.index_of("b").unwrap(), p.index_of("c").unwrap());
    ensure!(
        q.element_object[b] == q.element_object[c],
        "b and c not identified"
    );
    let alg = reduced_incidence_algebra(&p, &rel).unwrap();
    ensure!(
        alg.op_isomorphic == Some(true) && alg.mismatches.is_empty(),
        "structure constants differ at {:?}",
        alg.mismatches
    );
    Ok(format!(
        "V and hexagon relations pass, {induced} induced relations pass, diamond witness exact, \
         hexagon quotient has {} objects with [b] = [c] and {} classes, op-isomorphic",
        q.category.num_objects(),
        rel.num_classes()
    ))
}

fn criterion_6() -> Outcome {
    let mut r = rng(POSET_SEED);
    let (mut non_cm, mut intervals) = (0, 0);
    for i in 0..RANDOM_POSETS {
        let p = random_graded_poset(&mut r, 8);
        let cm = is_locally_cm(&p, Q).locally_cohen_macaulay;
        let k = is_koszul(&poset_to_category(&p).unwrap(), Q).koszul;
        ensure!(cm == k, "poset {i}: CM {cm}, Koszul {k}");
        non_cm += usize::from(!cm);
        for (x, y) in p.intervals() {
            if x != y {
                ensure!(
                    verify_interval_equals_factorization(&p, x, y, Q).unwrap(),
                    "poset {i}: interval ({}, {})",
                    p.label(x),
                    p.label(y)
                );
                intervals += 1;
            }
        }
    }
    Ok(format!(
        "{RANDOM_POSETS} graded posets ({non_cm} not locally CM), {intervals} intervals match"
    ))
}

fn criterion_7() -> Outcome {
    let fx = fixture_categories();
    for (name, cat) in &fx {
        ensure!(
            ext_table(cat, Q) == ext_table(&opposite(cat), Q).transposed(),
            "{name}: opposite table differs"
        );
    }
    let small: Vec<(String, FiniteGradedCategory)> = fixtures::fixtures()
        .into_iter()
        .filter_map(|f| match f.document {
            Document::Category(
                c @ (CategoryFile::Quiver(_) | CategoryFile::Category(_) | CategoryFile::Poset(_)),
            ) => Some((f.file.to_string(), c.load().unwrap().category)),
            _ => None,
        })
        .filter(|(_, c)| c.num_objects() <= 4 && is_koszul(c, Q).koszul)
        .collect();
    let mut pairs = 0;
    for (i, (na, a)) in small.iter().enumerate() {
        for (nb, b) in &small[i..] {
            ensure!(is_koszul(&product(a, b), Q).koszul, "{na} x {nb} not Koszul");
            pairs += 1;
        }
    }
    Ok(format!(
        "{} fixtures symmetric under opposite; {pairs} products of {} Koszul fixtures Koszul",
        fx.len(),
        small.len()
    ))
}

fn betti(x: &SemiSimplicialSet) -> BTreeMap<i64, usize> {
    reduced_cohomology(x, Q).reduced_betti
}

fn criterion_8() -> Outcome {
    let points = |n: usize| SemiSimplicialSet::from_faces(vec![vec![vec![]; n]]).unwrap();
    ensure!(
        betti(&SemiSimplicialSet::empty()) == BTreeMap::from([(-1, 1)]),
        "empty set"
    );
    for n in 1..=5 {
        let expected = if n == 1 {
            BTreeMap::new()
        } else {
            BTreeMap::from([(0, n - 1)])
        };
        ensure!(betti(&points(n)) == expected, "{n} points");
    }
    // a cycle of k edges, edge i from i+1 to i (d_0 = target, d_1 = source)
    let cycle = |k: usize| {
        let edges = (0..k).map(|i| vec![(i + 1) % k, i]).collect();
        SemiSimplicialSet::from_faces(vec![vec![vec![]; k], edges]).unwrap()
    };
    ensure!(betti(&cycle(3)) == BTreeMap::from([(1, 1)]), "triangle boundary");
    ensure!(betti(&cycle(4)) == BTreeMap::from([(1, 1)]), "4-cycle");
    // a 2-simplex over a triangle with one face swapped
    let good = vec![
        vec![vec![]; 3],
        vec![vec![1, 0], vec![2, 0], vec![2, 1]],
        vec![vec![2, 1, 0]],
    ];
    ensure!(
        check_semisimplicial(&SemiSimplicialSet::from_faces(good.clone()).unwrap()).is_empty(),
        "valid simplex flagged"
    );
    let mut bad = good;
    bad[2][0] = vec![2, 0, 1];
    ensure!(
        !check_semisimplicial(&SemiSimplicialSet::from_faces(bad).unwrap()).is_empty(),
        "planted defect missed"
    );
    Ok("empty {-1:1}, n points {0:n-1}, triangle and 4-cycle {1:1}, planted defect caught".into())
}

/// Bypasses the test harness's output capture.
fn report(line: &str) {
    let _ = writeln!(std::io::stderr().lock(), "{line}");
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 8] = [
        ("Beilinson P2 Ext", criterion_1),
        ("oracle equivalence", criterion_2),
        ("k[x] truncation", criterion_3),
        ("toric panel", criterion_4),
        ("RS machinery", criterion_5),
        ("poset equivalence", criterion_6),
        ("symmetry and products", criterion_7),
        ("homology suite", criterion_8),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => report(&format!("criterion {}: PASS  {name}: {detail}", i + 1)),
            Err(detail) => {
                report(&format!("criterion {}: FAIL  {name}: {detail}", i + 1));
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
