//! Functors between finite graded categories, (almost) discrete fibrations,
//! and path posets.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{IntervalRelation, RsError, RsQuotient};
use crate::category::{Composite, FiniteGradedCategory, MorId, ObjId};
use crate::factorization::FactorizationIndex;
use crate::poset::{poset_category, FinitePoset, PosetCategory};

/// Object and morphism maps of a functor, indexed by domain ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorData {
    pub object_map: Vec<ObjId>,
    pub morphism_map: Vec<MorId>,
}

impl FunctorData {
    pub fn object(&self, o: ObjId) -> ObjId {
        self.object_map[o.0]
    }

    pub fn apply(&self, m: MorId) -> MorId {
        self.morphism_map[m.0]
    }
}

/// Checks shapes, endpoints, lengths, identities and composition. Composites
/// beyond the domain's truncation are not checked.
pub fn check_functor(
    dom: &FiniteGradedCategory,
    cod: &FiniteGradedCategory,
    f: &FunctorData,
) -> Result<(), RsError> {
    let bad = |s: String| Err(RsError::NotAFunctor(s));
    if f.object_map.len() != dom.num_objects() || f.morphism_map.len() != dom.num_morphisms() {
        return bad("map sizes do not match the domain".into());
    }
    if let Some(o) = f.object_map.iter().find(|o| o.0 >= cod.num_objects()) {
        return bad(format!("object image {} out of range", o.0));
    }
    if let Some(m) = f.morphism_map.iter().find(|m| m.0 >= cod.num_morphisms()) {
        return bad(format!("morphism image {} out of range", m.0));
    }
    for m in dom.morphism_ids() {
        let fm = f.apply(m);
        if cod.source(fm) != f.object(dom.source(m)) || cod.target(fm) != f.object(dom.target(m)) {
            return bad(format!(
                "`{}` maps to `{}` with wrong endpoints",
                dom.label(m),
                cod.label(fm)
            ));
        }
        if cod.length(fm) != dom.length(m) {
            return bad(format!(
                "`{}` maps to `{}` of a different length",
                dom.label(m),
                cod.label(fm)
            ));
        }
    }
    for o in dom.objects() {
        if f.apply(dom.identity(o)) != cod.identity(f.object(o)) {
            return bad(format!("identity of `{}` is not preserved", dom.object_label(o)));
        }
    }
    for a in dom.morphism_ids() {
        for o in dom.objects() {
            for &b in dom.hom(dom.target(a), o) {
                if let Composite::Defined(c) = dom.compose(a, b) {
                    if cod.composite(f.apply(a), f.apply(b)) != Some(f.apply(c)) {
                        return bad(format!(
                            "composite of `{}` then `{}` is not preserved",
                            dom.label(a),
                            dom.label(b)
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// A valid functor that is bijective on objects and on morphisms.
pub fn is_isomorphism(dom: &FiniteGradedCategory, cod: &FiniteGradedCategory, f: &FunctorData) -> bool {
    if check_functor(dom, cod, f).is_err()
        || dom.num_objects() != cod.num_objects()
        || dom.num_morphisms() != cod.num_morphisms()
    {
        return false;
    }
    let objs: HashSet<ObjId> = f.object_map.iter().copied().collect();
    let mors: HashSet<MorId> = f.morphism_map.iter().copied().collect();
    objs.len() == cod.num_objects() && mors.len() == cod.num_morphisms()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdfWitness {
    pub morphism: String,
    pub image: String,
    /// Factorization of the image, in composition order.
    pub factorization: Vec<String>,
    /// Its lifts to factorizations of `morphism`.
    pub lifts: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdfReport {
    pub almost_discrete: bool,
    pub witness: Option<AdfWitness>,
}

/// Whether `f` induces, for every non-identity `p`, a bijection between the
/// nontrivial factorizations of `p` and those of `f(p)`.
pub fn is_almost_discrete_fibration(
    dom: &FiniteGradedCategory,
    cod: &FiniteGradedCategory,
    f: &FunctorData,
) -> Result<AdfReport, RsError> {
    check_functor(dom, cod, f)?;
    let di = FactorizationIndex::new(dom);
    let ci = FactorizationIndex::new(cod);
    let labels = |c: &FiniteGradedCategory, s: &[MorId]| s.iter().map(|&m| c.label(m).to_string()).collect();
    for p in dom.non_identities_by_length() {
        let q = f.apply(p);
        let mut lifts: BTreeMap<Vec<MorId>, Vec<Vec<MorId>>> = BTreeMap::new();
        for t in ci.sequences(q).iter().filter(|t| t.len() >= 2) {
            lifts.insert(t.clone(), Vec::new());
        }
        for s in di.sequences(p).iter().filter(|s| s.len() >= 2) {
            let image: Vec<MorId> = s.iter().map(|&m| f.apply(m)).collect();
            lifts.entry(image).or_default().push(s.clone());
        }
        if let Some((t, ls)) = lifts.iter().find(|(_, ls)| ls.len() != 1) {
            return Ok(AdfReport {
                almost_discrete: false,
                witness: Some(AdfWitness {
                    morphism: dom.label(p).to_string(),
                    image: cod.label(q).to_string(),
                    factorization: labels(cod, t),
                    lifts: ls.iter().map(|s| labels(dom, s)).collect(),
                }),
            });
        }
    }
    Ok(AdfReport {
        almost_discrete: true,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DfWitness {
    pub object: String,
    pub morphism: String,
    pub lifts: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DfReport {
    pub discrete: bool,
    pub witness: Option<DfWitness>,
}

/// Whether every codomain morphism into `f(e)` has exactly one lift ending
/// at `e`.
pub fn is_discrete_fibration(
    dom: &FiniteGradedCategory,
    cod: &FiniteGradedCategory,
    f: &FunctorData,
) -> Result<DfReport, RsError> {
    check_functor(dom, cod, f)?;
    for e in dom.objects() {
        let fe = f.object(e);
        let mut lifts: BTreeMap<MorId, Vec<MorId>> = BTreeMap::new();
        for o in cod.objects() {
            for &g in cod.hom(o, fe) {
                lifts.insert(g, Vec::new());
            }
        }
        for o in dom.objects() {
            for &m in dom.hom(o, e) {
                lifts.entry(f.apply(m)).or_default().push(m);
            }
        }
        if let Some((g, ls)) = lifts.iter().find(|(_, ls)| ls.len() != 1) {
            return Ok(DfReport {
                discrete: false,
                witness: Some(DfWitness {
                    object: dom.object_label(e).to_string(),
                    morphism: cod.label(*g).to_string(),
                    lifts: ls.iter().map(|&m| dom.label(m).to_string()).collect(),
                }),
            });
        }
    }
    Ok(DfReport {
        discrete: true,
        witness: None,
    })
}

/// The relation `[a,b] ~ [c,d]` iff both map to the same morphism, for a
/// functor out of the category of a graded poset that is surjective on
/// morphisms and an almost discrete fibration.
pub fn relation_from_fibration(
    p: &FinitePoset,
    pc: &PosetCategory,
    cod: &FiniteGradedCategory,
    f: &FunctorData,
) -> Result<IntervalRelation, RsError> {
    let report = is_almost_discrete_fibration(&pc.category, cod, f)?;
    let hit: HashSet<MorId> = f.morphism_map.iter().copied().collect();
    if let Some(m) = cod.morphism_ids().find(|m| !hit.contains(m)) {
        return Err(RsError::NotSurjectiveOnMorphisms(cod.label(m).to_string()));
    }
    if let Some(w) = report.witness {
        return Err(RsError::NotAlmostDiscrete(w.morphism));
    }
    let key: Vec<usize> = p
        .intervals()
        .into_iter()
        .map(|(a, b)| f.apply(pc.morphism(a, b).expect("interval")).0)
        .collect();
    Ok(IntervalRelation::from_class_vector(p, &key))
}

/// The functor from the quotient by the relation of `f` back to the
/// codomain, sending each class to the common image of its members.
pub fn quotient_comparison(
    p: &FinitePoset,
    pc: &PosetCategory,
    quotient: &RsQuotient,
    rel: &IntervalRelation,
    f: &FunctorData,
) -> FunctorData {
    let q = &quotient.category;
    let mut object_map = vec![ObjId(0); q.num_objects()];
    for e in 0..p.len() {
        object_map[quotient.element_object[e].0] = f.object(ObjId(e));
    }
    let mut morphism_map = vec![MorId(0); q.num_morphisms()];
    for (ci, cls) in rel.classes().iter().enumerate() {
        let (a, b) = cls[0];
        morphism_map[quotient.class_morphism[ci].0] = f.apply(pc.morphism(a, b).expect("interval"));
    }
    FunctorData {
        object_map,
        morphism_map,
    }
}

/// Morphisms out of `v`, ordered by `p ≤ q` iff `q = r ∘ p` for some `r`.
/// Element `i` is the i-th morphism of `source = v` in (length, id) order;
/// the returned vector lists them.
pub fn path_poset(cat: &FiniteGradedCategory, v: ObjId) -> Result<(FinitePoset, Vec<MorId>), RsError> {
    if v.0 >= cat.num_objects() {
        return Err(RsError::UnknownObject(v.0));
    }
    let mut elems: Vec<MorId> = cat.morphism_ids().filter(|&m| cat.source(m) == v).collect();
    elems.sort_by_key(|&m| (cat.length(m), m));
    let pos: BTreeMap<MorId, usize> = elems.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let (poset, _) = below_relation(cat, &elems, &pos)?;
    Ok((poset, elems))
}

type Divisors = BTreeMap<(usize, usize), Vec<MorId>>;

fn below_relation(
    cat: &FiniteGradedCategory,
    elems: &[MorId],
    pos: &BTreeMap<MorId, usize>,
) -> Result<(FinitePoset, Divisors), RsError> {
    let mut rel = Vec::new();
    let mut divisors: Divisors = BTreeMap::new();
    for (i, &p) in elems.iter().enumerate() {
        for o in cat.objects() {
            for &r in cat.hom(cat.target(p), o) {
                if let Some(q) = cat.composite(p, r) {
                    if let Some(&j) = pos.get(&q) {
                        rel.push((i, j));
                        divisors.entry((i, j)).or_default().push(r);
                    }
                }
            }
        }
    }
    let labels = elems.iter().map(|&m| cat.label(m).to_string()).collect();
    Ok((FinitePoset::from_relations(labels, &rel)?, divisors))
}

/// The path poset of all morphisms with its projection functor.
#[derive(Clone, Debug)]
pub struct PathPosetProjection {
    /// Element `i` is morphism `MorId(i)`.
    pub poset: FinitePoset,
    pub poset_category: PosetCategory,
    /// Sends `p` to its target and `p ≤ q` to the `r` with `r ∘ p = q`.
    pub functor: FunctorData,
}

pub fn path_poset_projection(cat: &FiniteGradedCategory) -> Result<PathPosetProjection, RsError> {
    let elems: Vec<MorId> = cat.morphism_ids().collect();
    let pos: BTreeMap<MorId, usize> = elems.iter().map(|&m| (m, m.0)).collect();
    let (poset, divisors) = below_relation(cat, &elems, &pos)?;
    let pc = poset_category(&poset)?;
    let d = &pc.category;
    let object_map = elems.iter().map(|&m| cat.target(m)).collect();
    let mut morphism_map = vec![MorId(0); d.num_morphisms()];
    for (a, b) in poset.intervals() {
        let rs = &divisors[&(a, b)];
        if rs.len() != 1 {
            return Err(RsError::NonCancellative(format!(
                "{} ≤ {}",
                poset.label(a),
                poset.label(b)
            )));
        }
        morphism_map[pc.morphism(a, b).expect("interval").0] = rs[0];
    }
    let functor = FunctorData {
        object_map,
        morphism_map,
    };
    check_functor(d, cat, &functor)?;
    Ok(PathPosetProjection {
        poset,
        poset_category: pc,
        functor,
    })
}
