//! Path categories of quivers modulo commutativity relations, truncated at a
//! length bound.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{CategoryBuilder, CategoryError, FiniteGradedCategory, MorId, ObjId};

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Arrow {
    pub label: String,
    #[serde(alias = "src")]
    pub source: String,
    #[serde(alias = "tgt")]
    pub target: String,
    #[serde(default = "one", alias = "len")]
    pub length: u32,
}

/// Relation paths are lists of arrow labels read left to right, i.e. in the
/// order the arrows are traversed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverPresentation {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    #[serde(default, alias = "relations")]
    pub relation_pairs: Vec<(Vec<String>, Vec<String>)>,
    pub max_length: u32,
}

impl QuiverPresentation {
    pub fn new(vertices: &[&str], max_length: u32) -> Self {
        QuiverPresentation {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            arrows: Vec::new(),
            relation_pairs: Vec::new(),
            max_length,
        }
    }

    pub fn arrow(mut self, label: &str, source: &str, target: &str, length: u32) -> Self {
        self.arrows.push(Arrow {
            label: label.into(),
            source: source.into(),
            target: target.into(),
            length,
        });
        self
    }

    pub fn relation(mut self, left: &[&str], right: &[&str]) -> Self {
        self.relation_pairs.push((
            left.iter().map(|s| s.to_string()).collect(),
            right.iter().map(|s| s.to_string()).collect(),
        ));
        self
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

/// Morphisms are classes of nonempty paths of length at most `max_length`
/// under the congruence generated by the relations; composites beyond the
/// bound are marked out of range.
pub fn from_quiver(pres: &QuiverPresentation) -> Result<FiniteGradedCategory, CategoryError> {
    let vidx: HashMap<&str, usize> = pres
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    if vidx.len() != pres.vertices.len() {
        let dup = pres
            .vertices
            .iter()
            .enumerate()
            .find(|(i, v)| vidx[v.as_str()] != *i)
            .map(|(_, v)| v.clone())
            .unwrap_or_default();
        return Err(CategoryError::DuplicateObjectLabel(dup));
    }
    let mut arrows = Vec::with_capacity(pres.arrows.len());
    let mut aidx: HashMap<&str, usize> = HashMap::new();
    for (i, a) in pres.arrows.iter().enumerate() {
        let s = *vidx
            .get(a.source.as_str())
            .ok_or_else(|| CategoryError::UnknownObject(a.source.clone()))?;
        let t = *vidx
            .get(a.target.as_str())
            .ok_or_else(|| CategoryError::UnknownObject(a.target.clone()))?;
        if a.length == 0 {
            return Err(CategoryError::InvalidPath { index: i });
        }
        if aidx.insert(a.label.as_str(), i).is_some() {
            return Err(CategoryError::DuplicateMorphismLabel(a.label.clone()));
        }
        arrows.push((s, t, a.length));
    }
    let weight = |p: &[usize]| p.iter().map(|&a| arrows[a].2).sum::<u32>();

    let mut relations = Vec::new();
    for (index, (l, r)) in pres.relation_pairs.iter().enumerate() {
        let conv = |path: &Vec<String>| -> Result<Vec<usize>, CategoryError> {
            path.iter()
                .map(|s| {
                    aidx.get(s.as_str())
                        .copied()
                        .ok_or_else(|| CategoryError::UnknownMorphism(s.clone()))
                })
                .collect()
        };
        let (l, r) = (conv(l)?, conv(r)?);
        let ends = |p: &[usize]| -> Option<(usize, usize)> {
            if p.is_empty() || p.windows(2).any(|w| arrows[w[0]].1 != arrows[w[1]].0) {
                return None;
            }
            Some((arrows[p[0]].0, arrows[p[p.len() - 1]].1))
        };
        let (el, er) = match (ends(&l), ends(&r)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(CategoryError::InvalidPath { index }),
        };
        if el != er {
            return Err(CategoryError::RelationEndpointMismatch { index });
        }
        if weight(&l) != weight(&r) {
            return Err(CategoryError::InhomogeneousRelation { index });
        }
        if weight(&l) > pres.max_length {
            return Err(CategoryError::RelationTooLong { index });
        }
        relations.push((l, r));
    }

    // all nonempty paths within the bound
    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<(Vec<usize>, u32)> = arrows
        .iter()
        .enumerate()
        .filter(|(_, a)| a.2 <= pres.max_length)
        .map(|(i, a)| (vec![i], a.2))
        .collect();
    stack.reverse();
    while let Some((p, w)) = stack.pop() {
        let head = arrows[*p.last().unwrap()].1;
        for (i, a) in arrows.iter().enumerate() {
            if a.0 == head && w + a.2 <= pres.max_length {
                let mut q = p.clone();
                q.push(i);
                stack.push((q, w + a.2));
            }
        }
        paths.push(p);
    }
    paths.sort();
    let pidx: HashMap<Vec<usize>, usize> = paths.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();

    let mut uf = UnionFind((0..paths.len()).collect());
    for (i, p) in paths.iter().enumerate() {
        for (l, r) in &relations {
            for (from, to) in [(l, r), (r, l)] {
                if from.len() > p.len() {
                    continue;
                }
                for start in 0..=p.len() - from.len() {
                    if &p[start..start + from.len()] == from.as_slice() {
                        let mut q = p[..start].to_vec();
                        q.extend_from_slice(to);
                        q.extend_from_slice(&p[start + from.len()..]);
                        let j = pidx[&q];
                        uf.union(i, j);
                    }
                }
            }
        }
    }

    // classes keyed by their smallest path; paths are sorted so the root's
    // first member is the minimum
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..paths.len() {
        let r = uf.find(i);
        classes.entry(r).or_default().push(i);
    }
    let mut reps: Vec<usize> = classes.values().map(|members| members[0]).collect();
    reps.sort_by_key(|&r| (weight(&paths[r]), paths[r].clone()));

    let mut b = CategoryBuilder::new();
    for v in &pres.vertices {
        b.add_object(v.clone());
    }
    let mut class_mor: HashMap<usize, MorId> = HashMap::new();
    for &r in &reps {
        let p = &paths[r];
        let label = p
            .iter()
            .rev()
            .map(|&a| pres.arrows[a].label.as_str())
            .collect::<Vec<_>>()
            .join("∘");
        let m = b.add_morphism(
            label,
            ObjId(arrows[p[0]].0),
            ObjId(arrows[*p.last().unwrap()].1),
            weight(p),
        );
        class_mor.insert(uf.find(r), m);
    }
    let mor_of_path =
        |uf: &mut UnionFind, p: &[usize]| -> Option<MorId> { pidx.get(p).map(|&i| class_mor[&uf.find(i)]) };

    let mut truncated = false;
    let mut composites: Vec<(MorId, MorId, Option<MorId>)> = Vec::new();
    for &r1 in &reps {
        for &r2 in &reps {
            let (p1, p2) = (&paths[r1], &paths[r2]);
            if arrows[*p1.last().unwrap()].1 != arrows[p2[0]].0 {
                continue;
            }
            let f = class_mor[&uf.find(r1)];
            let g = class_mor[&uf.find(r2)];
            let mut q = p1.clone();
            q.extend_from_slice(p2);
            let h = mor_of_path(&mut uf, &q);
            if h.is_none() {
                truncated = true;
            }
            composites.push((f, g, h));
        }
    }

    let mut left: HashMap<(MorId, MorId), MorId> = HashMap::new();
    let mut right: HashMap<(MorId, MorId), MorId> = HashMap::new();
    let label_of = |b: &CategoryBuilder, m: MorId| b_label(b, m);
    for &(f, g, h) in &composites {
        let Some(h) = h else { continue };
        if let Some(&g2) = left.get(&(f, h)) {
            if g2 != g {
                return Err(CategoryError::NonCancellative {
                    left: label_of(&b, g),
                    right: label_of(&b, g2),
                    via: label_of(&b, f),
                });
            }
        }
        left.insert((f, h), g);
        if let Some(&f2) = right.get(&(g, h)) {
            if f2 != f {
                return Err(CategoryError::NonCancellative {
                    left: label_of(&b, f),
                    right: label_of(&b, f2),
                    via: label_of(&b, g),
                });
            }
        }
        right.insert((g, h), f);
    }
    for (f, g, h) in composites {
        match h {
            Some(h) => b.set_composite(f, g, h),
            None => b.set_out_of_range(f, g),
        }
    }
    b.truncate_at(truncated.then_some(pres.max_length));
    b.build()
}

fn b_label(b: &CategoryBuilder, m: MorId) -> String {
    b.morphisms[m.0].label.clone()
}
