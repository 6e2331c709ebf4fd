//! Skew categories: objects are group elements, morphisms `a → b` are the
//! monomials of degree `b - a`, composition multiplies monomials.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{enumerate, pointed, ClassGroup, ToricCollectionSpec, ToricError};
use crate::category::{CategoryBuilder, FiniteGradedCategory, MorId, ObjId};
use crate::rs::FunctorData;

/// How morphism lengths are assigned.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LengthGrading {
    /// Number of indecomposable factors; falls back to `TotalDegree` when
    /// two factorizations into indecomposables differ in length.
    #[default]
    ArrowCount,
    /// Total degree of the monomial.
    TotalDegree,
}

#[derive(Clone, Debug)]
pub struct SkewCategory {
    pub category: FiniteGradedCategory,
    /// The grading actually used.
    pub grading: LengthGrading,
    pub objects: Vec<Vec<i64>>,
    /// Exponent vector of each morphism, by id.
    pub monomials: Vec<Vec<u32>>,
    pub variables: Vec<String>,
}

impl SkewCategory {
    pub fn monomial_label(&self, m: MorId) -> String {
        render_monomial(&self.variables, &self.monomials[m.0])
    }

    /// Indecomposable non-identity morphisms.
    pub fn arrows(&self) -> Vec<MorId> {
        let cat = &self.category;
        let mut decomposable = vec![false; cat.num_morphisms()];
        for a in cat.morphism_ids().filter(|&a| !cat.is_identity(a)) {
            for o in cat.objects() {
                for &b in cat.hom(cat.target(a), o) {
                    if !cat.is_identity(b) {
                        if let Some(c) = cat.composite(a, b) {
                            decomposable[c.0] = true;
                        }
                    }
                }
            }
        }
        cat.morphism_ids()
            .filter(|&m| !cat.is_identity(m) && !decomposable[m.0])
            .collect()
    }
}

/// `x1^2*x2`, or `1` for the empty monomial.
pub fn render_monomial(names: &[String], u: &[u32]) -> String {
    let parts: Vec<String> = u
        .iter()
        .zip(names)
        .filter(|(&e, _)| e > 0)
        .map(|(&e, n)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

struct Entry {
    source: usize,
    target: usize,
    mono: Vec<u32>,
}

fn build(
    object_labels: Vec<String>,
    objects: Vec<Vec<i64>>,
    names: Vec<String>,
    mut homs: impl FnMut(usize, usize) -> Result<Vec<Vec<u32>>, ToricError>,
    grading: LengthGrading,
    bound: Option<u32>,
) -> Result<SkewCategory, ToricError> {
    let n = objects.len();
    let mut entries = Vec::new();
    let mut index: HashMap<(usize, usize, Vec<u32>), usize> = HashMap::new();
    for i in 0..n {
        for j in 0..n {
            for mono in homs(i, j)? {
                index.insert((i, j, mono.clone()), entries.len());
                entries.push(Entry {
                    source: i,
                    target: j,
                    mono,
                });
            }
        }
    }
    let total = |e: &Entry| e.mono.iter().sum::<u32>();
    let is_id = |e: &Entry| e.source == e.target && e.mono.iter().all(|&x| x == 0);

    let mut used = grading;
    let mut length: Vec<u32> = entries.iter().map(total).collect();
    if grading == LengthGrading::ArrowCount {
        let mut order: Vec<usize> = (0..entries.len()).filter(|&e| !is_id(&entries[e])).collect();
        order.sort_by_key(|&e| total(&entries[e]));
        let mut arrow = vec![0u32; entries.len()];
        'outer: for &e in &order {
            let Entry { source, target, mono } = &entries[e];
            let mut ls = BTreeSet::new();
            for (a, ea) in entries.iter().enumerate() {
                if ea.source != *source || is_id(ea) || ea.mono == *mono {
                    continue;
                }
                if ea.mono.iter().zip(mono).any(|(x, y)| x > y) {
                    continue;
                }
                let rest: Vec<u32> = mono.iter().zip(&ea.mono).map(|(y, x)| y - x).collect();
                if let Some(&b) = index.get(&(ea.target, *target, rest)) {
                    ls.insert(arrow[a] + arrow[b]);
                }
            }
            arrow[e] = match ls.len() {
                0 => 1,
                1 => *ls.first().unwrap(),
                _ => {
                    used = LengthGrading::TotalDegree;
                    break 'outer;
                }
            };
        }
        if used == LengthGrading::ArrowCount {
            length = arrow;
        }
    }

    let mut b = CategoryBuilder::new();
    let objs: Vec<ObjId> = object_labels.iter().map(|l| b.add_object(l.clone())).collect();
    let mut mor = vec![MorId(0); entries.len()];
    let mut monomials = Vec::new();
    let record = |m: MorId, mono: &[u32], monomials: &mut Vec<Vec<u32>>| {
        if monomials.len() <= m.0 {
            monomials.resize(m.0 + 1, Vec::new());
        }
        monomials[m.0] = mono.to_vec();
    };
    for (k, e) in entries.iter().enumerate() {
        if is_id(e) {
            mor[k] = b.set_identity_label(objs[e.source], format!("1 : {}", object_labels[e.source]));
            record(mor[k], &e.mono, &mut monomials);
        }
    }
    for (k, e) in entries.iter().enumerate() {
        if !is_id(e) {
            let label = format!(
                "{} : {}→{}",
                render_monomial(&names, &e.mono),
                object_labels[e.source],
                object_labels[e.target]
            );
            mor[k] = b.add_morphism(label, objs[e.source], objs[e.target], length[k]);
            record(mor[k], &e.mono, &mut monomials);
        }
    }
    let mut dropped = false;
    for (ka, ea) in entries.iter().enumerate() {
        if is_id(ea) {
            continue;
        }
        for (kb, eb) in entries.iter().enumerate() {
            if eb.source != ea.target || is_id(eb) {
                continue;
            }
            let sum: Vec<u32> = ea.mono.iter().zip(&eb.mono).map(|(x, y)| x + y).collect();
            match index.get(&(ea.source, eb.target, sum)) {
                Some(&c) => b.set_composite(mor[ka], mor[kb], mor[c]),
                None => {
                    debug_assert!(bound.is_some(), "composite missing without truncation");
                    b.set_out_of_range(mor[ka], mor[kb]);
                    dropped = true;
                }
            }
        }
    }
    if dropped {
        b.truncate_at(bound);
    }
    let category = b.build().expect("skew category is well-formed");
    Ok(SkewCategory {
        category,
        grading: used,
        objects,
        monomials,
        variables: names,
    })
}

/// The skew category of the collection with lengths by indecomposable factor
/// count.
pub fn skew_category(spec: &ToricCollectionSpec) -> Result<FiniteGradedCategory, ToricError> {
    skew_category_with(spec, LengthGrading::ArrowCount).map(|s| s.category)
}

pub fn skew_category_with(
    spec: &ToricCollectionSpec,
    grading: LengthGrading,
) -> Result<SkewCategory, ToricError> {
    let (degrees, collection) = spec.validate()?;
    if !pointed(&degrees, spec.free_rank) {
        return Err(ToricError::NotPointed);
    }
    let g = spec.group();
    let labels = collection.iter().map(|d| g.render(d)).collect();
    let cap = spec.max_total_degree;
    let objs = collection.clone();
    build(
        labels,
        collection,
        spec.variable_names(),
        |i, j| enumerate(&g, &degrees, &g.sub(&objs[j], &objs[i]), cap),
        grading,
        None,
    )
}

/// All exponent vectors in `nv` variables with total degree at most `n`.
fn bounded_monomials(nv: usize, n: u32) -> Vec<Vec<u32>> {
    fn go(k: usize, nv: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == nv {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            go(k + 1, nv, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, nv, n, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.iter().sum::<u32>().cmp(&b.iter().sum()).then_with(|| b.cmp(a)));
    out
}

/// Skew category on an arbitrary subset of the group, keeping monomials of
/// total degree at most `n` and graded by total degree. Needs no
/// pointedness, so it covers torsion and non-pointed degree data.
pub fn truncated_skew_category(
    spec: &ToricCollectionSpec,
    subset: &[Vec<i64>],
    n: u32,
) -> Result<SkewCategory, ToricError> {
    let (degrees, _) = spec.validate()?;
    let g = spec.group();
    let objects = subset
        .iter()
        .map(|d| g.normalize(d))
        .collect::<Result<Vec<_>, _>>()?;
    for (i, d) in objects.iter().enumerate() {
        if objects[..i].contains(d) {
            return Err(ToricError::InvalidSpec(format!(
                "subset entry {} is repeated",
                g.render(d)
            )));
        }
    }
    let labels = objects.iter().map(|d| g.render(d)).collect();
    truncated(&g, &degrees, objects, labels, spec.variable_names(), n)
}

fn truncated(
    g: &ClassGroup,
    degrees: &[Vec<i64>],
    objects: Vec<Vec<i64>>,
    labels: Vec<String>,
    names: Vec<String>,
    n: u32,
) -> Result<SkewCategory, ToricError> {
    let all = bounded_monomials(degrees.len(), n);
    let deg_of = |u: &[u32]| {
        let mut d = vec![0i64; g.rank()];
        for (e, dv) in u.iter().zip(degrees) {
            for (c, x) in dv.iter().enumerate() {
                d[c] += *e as i64 * x;
            }
        }
        g.normalize(&d).expect("same shape")
    };
    let mono_degrees: Vec<Vec<i64>> = all.iter().map(|u| deg_of(u)).collect();
    let objs = objects.clone();
    build(
        labels,
        objects,
        names,
        |i, j| {
            let d = g.sub(&objs[j], &objs[i]);
            Ok(all
                .iter()
                .zip(&mono_degrees)
                .filter(|(_, md)| **md == d)
                .map(|(u, _)| u.clone())
                .collect())
        },
        LengthGrading::TotalDegree,
        Some(n),
    )
}

/// One object, every monomial of total degree at most `n`.
pub fn monomial_category(spec: &ToricCollectionSpec, n: u32) -> Result<SkewCategory, ToricError> {
    spec.validate()?;
    let trivial = ClassGroup {
        free_rank: 0,
        torsion: vec![],
    };
    let degrees = vec![Vec::new(); spec.variables.len()];
    truncated(
        &trivial,
        &degrees,
        vec![Vec::new()],
        vec!["*".into()],
        spec.variable_names(),
        n,
    )
}

/// The forgetful functor sending every morphism to its monomial.
pub fn projection_functor(skew: &SkewCategory, mono: &SkewCategory) -> Result<FunctorData, ToricError> {
    let by_mono: HashMap<&[u32], MorId> = mono
        .category
        .morphism_ids()
        .map(|m| (mono.monomials[m.0].as_slice(), m))
        .collect();
    let morphism_map = skew
        .category
        .morphism_ids()
        .map(|m| {
            by_mono
                .get(skew.monomials[m.0].as_slice())
                .copied()
                .ok_or_else(|| {
                    ToricError::InvalidSpec(format!(
                        "monomial {} exceeds the monomial category",
                        skew.monomial_label(m)
                    ))
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FunctorData {
        object_map: vec![ObjId(0); skew.category.num_objects()],
        morphism_map,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Saturation {
    pub saturated: bool,
    /// `(a, c, b)` with `a ≤ c ≤ b`, `a, b` in the subset and `c` outside.
    pub witness: Option<[Vec<i64>; 3]>,
}

/// Whether every degree between two members of `subset` (in the order
/// `a ≤ b` iff `b - a` is the degree of a monomial) lies in `subset`.
pub fn is_saturated(spec: &ToricCollectionSpec, subset: &[Vec<i64>]) -> Result<Saturation, ToricError> {
    let (degrees, _) = spec.validate()?;
    if !pointed(&degrees, spec.free_rank) {
        return Err(ToricError::NotPointed);
    }
    let g = spec.group();
    let s = subset
        .iter()
        .map(|d| g.normalize(d))
        .collect::<Result<Vec<_>, _>>()?;
    for a in &s {
        for b in &s {
            for m in enumerate(&g, &degrees, &g.sub(b, a), spec.max_total_degree)? {
                for div in divisors(&m) {
                    let mut c = a.clone();
                    for (e, dv) in div.iter().zip(&degrees) {
                        c = g.add(&c, &dv.iter().map(|x| x * *e as i64).collect::<Vec<_>>());
                    }
                    if !s.contains(&c) {
                        return Ok(Saturation {
                            saturated: false,
                            witness: Some([a.clone(), c, b.clone()]),
                        });
                    }
                }
            }
        }
    }
    Ok(Saturation {
        saturated: true,
        witness: None,
    })
}

/// Proper nontrivial divisors in lexicographic order.
fn divisors(m: &[u32]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![Vec::new()];
    for &e in m {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=e).map(move |k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    out.retain(|d| d.iter().any(|&x| x > 0) && d.as_slice() != m);
    out
}
