//! Seeded random categories and graded posets.

#![allow(dead_code)]

use std::collections::BTreeMap;

use koszul_core::category::{from_quiver, product, FiniteGradedCategory, QuiverPresentation};
use koszul_core::poset::{poset_to_category, FinitePoset};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const MAX_OBJECTS: usize = 6;
pub const MAX_MORPHISMS: usize = 25;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every rank is nonempty and every relation joins adjacent ranks, so the
/// result is graded. Edge density varies per poset; about half have a
/// single bottom and top with narrow middle ranks, where disconnected
/// intervals are common.
pub fn random_graded_poset(rng: &mut impl Rng, max_elements: usize) -> FinitePoset {
    let mut rank: Vec<usize> = Vec::new();
    if max_elements >= 4 && rng.gen_bool(0.5) {
        rank.push(0);
        let mut r = 1;
        while rank.len() + 1 < max_elements && (r < 3 || rng.gen_bool(0.5)) {
            let width = rng.gen_range(1..=3).min(max_elements - 1 - rank.len());
            rank.extend(std::iter::repeat_n(r, width));
            r += 1;
        }
        rank.push(r);
    } else {
        let n = rng.gen_range(1..=max_elements);
        let ranks = rng.gen_range(1..=n.min(5));
        rank.extend(0..ranks);
        rank.extend((ranks..n).map(|_| rng.gen_range(0..ranks)));
        rank.sort_unstable();
    }
    let n = rank.len();
    let top = rank[n - 1];
    let density = rng.gen_range(0.3..0.95);
    let mut relations = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if rank[b] == rank[a] + 1 && rng.gen_bool(density) {
                relations.push((a, b));
            }
        }
    }
    // keep bounded ones bounded
    if rank.iter().filter(|&&r| r == 0).count() == 1 && rank.iter().filter(|&&r| r == top).count() == 1 {
        relations.extend((0..n).filter(|&b| rank[b] == 1).map(|b| (0, b)));
        relations.extend((0..n).filter(|&a| rank[a] + 1 == top).map(|a| (a, n - 1)));
    }
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    FinitePoset::from_relations(labels, &relations).expect("rank increases along relations")
}

/// Arrows with random endpoints (loops allowed), some of length 2, and
/// commutativity relations between random parallel two-arrow paths.
pub fn random_quiver(rng: &mut impl Rng) -> QuiverPresentation {
    let nv = rng.gen_range(1..=4);
    let names: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut q = QuiverPresentation::new(&refs, rng.gen_range(2..=4));
    let na = rng.gen_range(1..=5);
    let mut arrows = Vec::new();
    for i in 0..na {
        let (s, t) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
        let len = if rng.gen_bool(0.8) { 1 } else { 2 };
        q = q.arrow(&format!("a{i}"), &names[s], &names[t], len);
        arrows.push((s, t, len));
    }
    let mut parallel: BTreeMap<(usize, usize, u32), Vec<[usize; 2]>> = BTreeMap::new();
    for (i, &(s, m, l1)) in arrows.iter().enumerate() {
        for (j, &(m2, t, l2)) in arrows.iter().enumerate() {
            if m == m2 {
                parallel.entry((s, t, l1 + l2)).or_default().push([i, j]);
            }
        }
    }
    for paths in parallel.values() {
        if paths.len() >= 2 && rng.gen_bool(0.5) {
            let pick: Vec<&[usize; 2]> = paths.choose_multiple(rng, 2).collect();
            let l = |p: &[usize; 2]| [format!("a{}", p[0]), format!("a{}", p[1])];
            let (x, y) = (l(pick[0]), l(pick[1]));
            q = q.relation(&[&x[0], &x[1]], &[&y[0], &y[1]]);
        }
    }
    q
}

fn small(c: &FiniteGradedCategory) -> bool {
    c.num_objects() <= MAX_OBJECTS && c.num_morphisms() <= MAX_MORPHISMS
}

/// A category with at most 6 objects and 25 morphisms: a quiver category,
/// a poset category, or a product of two such.
pub fn random_category(rng: &mut impl Rng) -> FiniteGradedCategory {
    loop {
        let c = match rng.gen_range(0..10) {
            0..=5 => from_quiver(&random_quiver(rng)).ok(),
            6..=8 => poset_to_category(&random_graded_poset(rng, MAX_OBJECTS)).ok(),
            _ => {
                let a = poset_to_category(&random_graded_poset(rng, 3)).ok();
                let b = from_quiver(&random_quiver(rng)).ok();
                a.zip(b).map(|(a, b)| product(&a, &b))
            }
        };
        if let Some(c) = c.filter(small) {
            return c;
        }
    }
}
