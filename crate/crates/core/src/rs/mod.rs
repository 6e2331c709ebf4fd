//! Equivalence relations on the closed intervals of a poset satisfying the
//! quotient axioms below, their quotient categories, and reduced incidence
//! algebras.
//!
//! Axioms checked (with `~` the relation on intervals):
//! - A1: `[a,b]~[a',b']` and `[b,c]~[b',c']` imply `[a,c]~[a',c']`.
//! - A2: for `[a,b]~[a',b']` each `c` in `[a,b]` has exactly one `c'` in
//!   `[a',b']` with `[a,c]~[a',c']` and `[c,b]~[c',b']`.
//! - A4: if `a ≤ b1`, `b2 ≤ c` and `[b1,b1]~[b2,b2]`, some `a' ≤ b' ≤ c'`
//!   has `[a,b1]~[a',b']` and `[b2,c]~[b',c']`.

mod fibration;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

pub use fibration::{
    check_functor, is_almost_discrete_fibration, is_discrete_fibration, is_isomorphism, path_poset,
    path_poset_projection, quotient_comparison, relation_from_fibration, AdfReport, AdfWitness, DfReport,
    DfWitness, FunctorData, PathPosetProjection,
};

use crate::category::{CategoryBuilder, FiniteGradedCategory, MorId, ObjId};
use crate::poset::{FinitePoset, PosetError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RsError {
    #[error("not a partition of the intervals: {0}")]
    NotAPartition(String),
    #[error("relation fails the axioms ({0})")]
    AxiomsNotVerified(String),
    #[error("interval lengths differ within the class of {0}")]
    LengthNotConstantOnClass(String),
    #[error("endpoints of equivalent intervals {0} and {1} are not equivalent")]
    InconsistentEndpoints(String, String),
    #[error("product of classes {0} and {1} is ill-defined")]
    IllDefinedProduct(String, String),
    #[error("not a functor: {0}")]
    NotAFunctor(String),
    #[error("codomain morphism `{0}` has no preimage")]
    NotSurjectiveOnMorphisms(String),
    #[error("functor is not an almost discrete fibration at `{0}`")]
    NotAlmostDiscrete(String),
    #[error("factors `{0}` are not determined by composition (non-cancellative)")]
    NonCancellative(String),
    #[error("unknown object {0}")]
    UnknownObject(usize),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// A partition of the intervals `a ≤ b` of a poset, by class number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalRelation {
    intervals: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    class: Vec<usize>,
    num_classes: usize,
}

impl IntervalRelation {
    /// Every interval in its own class.
    pub fn identity(p: &FinitePoset) -> Self {
        Self::from_classes(p, &[]).expect("empty class list")
    }

    /// Classes list intervals as (bottom, top); unlisted intervals are
    /// singletons. Class numbers follow the first interval of each class in
    /// lexicographic order.
    pub fn from_classes(p: &FinitePoset, classes: &[Vec<(usize, usize)>]) -> Result<Self, RsError> {
        let intervals = p.intervals();
        let index: HashMap<(usize, usize), usize> =
            intervals.iter().enumerate().map(|(i, &iv)| (iv, i)).collect();
        let mut raw: Vec<Option<usize>> = vec![None; intervals.len()];
        for (ci, cls) in classes.iter().enumerate() {
            for &(a, b) in cls {
                let Some(&i) = index.get(&(a, b)) else {
                    return Err(RsError::NotAPartition(format!(
                        "[{},{}] is not an interval",
                        label_or_index(p, a),
                        label_or_index(p, b)
                    )));
                };
                if let Some(prev) = raw[i] {
                    if prev != ci {
                        return Err(RsError::NotAPartition(format!(
                            "[{},{}] appears in two classes",
                            p.label(a),
                            p.label(b)
                        )));
                    }
                }
                raw[i] = Some(ci);
            }
        }
        let mut renumber: HashMap<(bool, usize), usize> = HashMap::new();
        let mut class = Vec::with_capacity(intervals.len());
        for (i, r) in raw.iter().enumerate() {
            let key = match r {
                Some(ci) => (true, *ci),
                None => (false, i),
            };
            let n = renumber.len();
            class.push(*renumber.entry(key).or_insert(n));
        }
        Ok(IntervalRelation {
            intervals,
            index,
            num_classes: renumber.len(),
            class,
        })
    }

    pub(crate) fn from_class_vector(p: &FinitePoset, key: &[usize]) -> Self {
        let mut groups: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (i, iv) in p.intervals().into_iter().enumerate() {
            groups.entry(key[i]).or_default().push(iv);
        }
        let classes: Vec<Vec<(usize, usize)>> = groups.into_values().collect();
        Self::from_classes(p, &classes).expect("partition by key")
    }

    pub fn intervals(&self) -> &[(usize, usize)] {
        &self.intervals
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn class_of(&self, a: usize, b: usize) -> Option<usize> {
        self.index.get(&(a, b)).map(|&i| self.class[i])
    }

    fn cls(&self, a: usize, b: usize) -> usize {
        self.class[self.index[&(a, b)]]
    }

    /// Members of each class, in class order.
    pub fn classes(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.num_classes];
        for (i, &iv) in self.intervals.iter().enumerate() {
            out[self.class[i]].push(iv);
        }
        out
    }

    /// Smallest relation containing this one in which equivalent intervals
    /// have equivalent bottoms and tops (as point intervals).
    pub fn with_endpoint_closure(&self, p: &FinitePoset) -> Self {
        let n = self.intervals.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(u: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while u[r] != r {
                r = u[r];
            }
            u[x] = r;
            r
        }
        for (i, &c) in self.class.iter().enumerate() {
            let first = self.class.iter().position(|&d| d == c).unwrap();
            let (a, b) = (find(&mut parent, i), find(&mut parent, first));
            parent[a.max(b)] = a.min(b);
        }
        loop {
            let mut changed = false;
            for i in 0..n {
                for j in i + 1..n {
                    if find(&mut parent, i) != find(&mut parent, j) {
                        continue;
                    }
                    let (a, b) = self.intervals[i];
                    let (c, d) = self.intervals[j];
                    for (x, y) in [(a, c), (b, d)] {
                        let (px, py) = (self.index[&(x, x)], self.index[&(y, y)]);
                        let (rx, ry) = (find(&mut parent, px), find(&mut parent, py));
                        if rx != ry {
                            parent[rx.max(ry)] = rx.min(ry);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let key: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        Self::from_class_vector(p, &key)
    }

    pub fn describe(&self, p: &FinitePoset) -> Vec<Vec<String>> {
        self.classes()
            .iter()
            .map(|c| c.iter().map(|&(a, b)| interval_label(p, a, b)).collect())
            .collect()
    }
}

fn label_or_index(p: &FinitePoset, i: usize) -> String {
    if i < p.len() {
        p.label(i).to_string()
    } else {
        i.to_string()
    }
}

pub fn interval_label(p: &FinitePoset, a: usize, b: usize) -> String {
    format!("[{},{}]", p.label(a), p.label(b))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct A1Witness {
    pub first: (String, String),
    pub second: (String, String),
    pub composites: (String, String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct A2Witness {
    pub interval: String,
    pub equivalent: String,
    pub element: String,
    /// Candidate images; A2 wants exactly one.
    pub candidates: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct A4Witness {
    pub lower: String,
    pub upper: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauWitness {
    pub interval: String,
    pub equivalent: String,
    pub pair: (String, String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RsAxiomReport {
    pub a1: Vec<A1Witness>,
    pub a2: Vec<A2Witness>,
    pub a4: Vec<A4Witness>,
    /// Whether every comparison map from A2 preserves the order.
    pub tau_order_preserving: bool,
    pub tau_violations: Vec<TauWitness>,
}

impl RsAxiomReport {
    pub fn passes(&self) -> bool {
        self.a1.is_empty() && self.a2.is_empty() && self.a4.is_empty()
    }

    fn summary(&self) -> String {
        format!(
            "A1: {} failures, A2: {} failures, A4: {} failures",
            self.a1.len(),
            self.a2.len(),
            self.a4.len()
        )
    }
}

const WITNESS_CAP: usize = 20;

/// Pairs of intervals sharing a middle point: ((a,b), (b,c)).
fn composable_pairs(rel: &IntervalRelation) -> Vec<((usize, usize), (usize, usize))> {
    let mut out = Vec::new();
    for &(a, b) in &rel.intervals {
        for &(b2, c) in &rel.intervals {
            if b == b2 {
                out.push(((a, b), (b, c)));
            }
        }
    }
    out
}

pub fn verify_rs_axioms(p: &FinitePoset, rel: &IntervalRelation) -> RsAxiomReport {
    let mut report = RsAxiomReport {
        tau_order_preserving: true,
        ..Default::default()
    };
    let pairs = composable_pairs(rel);
    let il = |(a, b): (usize, usize)| interval_label(p, a, b);

    // A1: all composable pairs with the same class pair compose to one class
    let mut by_classes: BTreeMap<(usize, usize), ((usize, usize), (usize, usize), usize)> = BTreeMap::new();
    for &(i, j) in &pairs {
        let key = (rel.cls(i.0, i.1), rel.cls(j.0, j.1));
        let comp = rel.cls(i.0, j.1);
        match by_classes.get(&key) {
            Some(&(i0, j0, c0)) if c0 != comp => {
                if report.a1.len() < WITNESS_CAP {
                    report.a1.push(A1Witness {
                        first: (il(i0), il(i)),
                        second: (il(j0), il(j)),
                        composites: (il((i0.0, j0.1)), il((i.0, j.1))),
                    });
                }
            }
            Some(_) => {}
            None => {
                by_classes.insert(key, (i, j, comp));
            }
        }
    }

    // A2: pointwise determination of tau, then monotonicity
    let classes = rel.classes();
    for cls in &classes {
        for &(a, b) in cls {
            for &(a2, b2) in cls {
                let members: Vec<usize> = (0..p.len()).filter(|&c| p.leq(a, c) && p.leq(c, b)).collect();
                let mut tau = HashMap::new();
                let mut ok = true;
                for &c in &members {
                    let cands: Vec<usize> = (0..p.len())
                        .filter(|&d| {
                            p.leq(a2, d)
                                && p.leq(d, b2)
                                && rel.cls(a2, d) == rel.cls(a, c)
                                && rel.cls(d, b2) == rel.cls(c, b)
                        })
                        .collect();
                    if cands.len() != 1 {
                        ok = false;
                        if report.a2.len() < WITNESS_CAP {
                            report.a2.push(A2Witness {
                                interval: il((a, b)),
                                equivalent: il((a2, b2)),
                                element: p.label(c).to_string(),
                                candidates: cands.iter().map(|&d| p.label(d).to_string()).collect(),
                            });
                        }
                    } else {
                        tau.insert(c, cands[0]);
                    }
                }
                if !ok {
                    continue;
                }
                for &c in &members {
                    for &d in &members {
                        if p.leq(c, d) && !p.leq(tau[&c], tau[&d]) {
                            report.tau_order_preserving = false;
                            if report.tau_violations.len() < WITNESS_CAP {
                                report.tau_violations.push(TauWitness {
                                    interval: il((a, b)),
                                    equivalent: il((a2, b2)),
                                    pair: (p.label(c).to_string(), p.label(d).to_string()),
                                });
                            }
                        }
                    }
                }
            }
        }
    }

    // A4: composable class pairs must be realized
    let realized: BTreeSet<(usize, usize)> = by_classes.keys().copied().collect();
    for &(a, b1) in &rel.intervals {
        for &(b2, c) in &rel.intervals {
            if rel.cls(b1, b1) != rel.cls(b2, b2) {
                continue;
            }
            if !realized.contains(&(rel.cls(a, b1), rel.cls(b2, c))) && report.a4.len() < WITNESS_CAP {
                report.a4.push(A4Witness {
                    lower: il((a, b1)),
                    upper: il((b2, c)),
                });
            }
        }
    }
    report
}

/// The quotient category with its class bookkeeping.
#[derive(Clone, Debug)]
pub struct RsQuotient {
    pub category: FiniteGradedCategory,
    /// Morphism for each relation class.
    pub class_morphism: Vec<MorId>,
    /// Object for each element of the poset.
    pub element_object: Vec<ObjId>,
}

pub fn rs_quotient(p: &FinitePoset, rel: &IntervalRelation) -> Result<FiniteGradedCategory, RsError> {
    rs_quotient_indexed(p, rel).map(|q| q.category)
}

pub fn rs_quotient_indexed(p: &FinitePoset, rel: &IntervalRelation) -> Result<RsQuotient, RsError> {
    let report = verify_rs_axioms(p, rel);
    if !report.passes() {
        return Err(RsError::AxiomsNotVerified(report.summary()));
    }
    let classes = rel.classes();
    let mut lengths = Vec::with_capacity(classes.len());
    for cls in &classes {
        let mut ls = cls.iter().map(|&(a, b)| p.rank_length(a, b));
        let first = ls.next().unwrap();
        if first.is_none() {
            let (a, b) = cls[0];
            return Err(PosetError::NotGraded(p.label(a).into(), p.label(b).into()).into());
        }
        if ls.any(|l| l != first) {
            let (a, b) = cls[0];
            return Err(RsError::LengthNotConstantOnClass(interval_label(p, a, b)));
        }
        lengths.push(first.unwrap());
    }
    for cls in &classes {
        let (a, b) = cls[0];
        for &(c, d) in &cls[1..] {
            if rel.cls(a, a) != rel.cls(c, c) || rel.cls(b, b) != rel.cls(d, d) {
                return Err(RsError::InconsistentEndpoints(
                    interval_label(p, a, b),
                    interval_label(p, c, d),
                ));
            }
        }
    }
    let mut builder = CategoryBuilder::new();
    let mut object_of_class: HashMap<usize, ObjId> = HashMap::new();
    for e in 0..p.len() {
        let c = rel.cls(e, e);
        object_of_class
            .entry(c)
            .or_insert_with(|| builder.add_object(format!("[{}]", p.label(e))));
    }
    let element_object: Vec<ObjId> = (0..p.len()).map(|e| object_of_class[&rel.cls(e, e)]).collect();
    let mut class_morphism = vec![MorId(usize::MAX); classes.len()];
    for (ci, cls) in classes.iter().enumerate() {
        let (a, b) = cls[0];
        class_morphism[ci] = if a == b {
            builder.set_identity_label(element_object[a], format!("[{}≤{}]", p.label(a), p.label(b)))
        } else {
            builder.add_morphism(
                format!("[{}≤{}]", p.label(a), p.label(b)),
                element_object[a],
                element_object[b],
                lengths[ci],
            )
        };
    }
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    for ((a, b), (_, c)) in composable_pairs(rel) {
        let key = (rel.cls(a, b), rel.cls(b, c));
        let comp = rel.cls(a, c);
        if let Some(&prev) = seen.get(&key) {
            if prev != comp {
                return Err(RsError::IllDefinedProduct(
                    interval_label(p, a, b),
                    interval_label(p, b, c),
                ));
            }
            continue;
        }
        seen.insert(key, comp);
        builder.set_composite(class_morphism[key.0], class_morphism[key.1], class_morphism[comp]);
    }
    Ok(RsQuotient {
        category: builder.build().expect("quotient category"),
        class_morphism,
        element_object,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedIncidenceAlgebra {
    /// Class members, by label.
    pub classes: Vec<Vec<String>>,
    /// Nonzero structure constants `ξ_X · ξ_Y = ξ_Z` as (X, Y, Z).
    pub products: Vec<(usize, usize, usize)>,
    /// Whether `class ↦ morphism` is an isomorphism onto the opposite of
    /// the quotient category algebra, when the quotient exists.
    pub op_isomorphic: Option<bool>,
    pub mismatches: Vec<(usize, usize)>,
}

pub fn reduced_incidence_algebra(
    p: &FinitePoset,
    rel: &IntervalRelation,
) -> Result<ReducedIncidenceAlgebra, RsError> {
    let mut table: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for ((a, b), (_, c)) in composable_pairs(rel) {
        let key = (rel.cls(a, b), rel.cls(b, c));
        let z = rel.cls(a, c);
        if let Some(&prev) = table.get(&key) {
            if prev != z {
                return Err(RsError::IllDefinedProduct(
                    interval_label(p, a, b),
                    interval_label(p, b, c),
                ));
            }
        }
        table.insert(key, z);
    }
    let (op_isomorphic, mismatches) = match rs_quotient_indexed(p, rel) {
        Ok(q) => {
            let cat = &q.category;
            let mut bad = Vec::new();
            let n = rel.num_classes();
            for x in 0..n {
                for y in 0..n {
                    // ξ_X ξ_Y corresponds to (Y ∘ X) in the quotient
                    let lhs = table.get(&(x, y)).map(|&z| q.class_morphism[z]);
                    let rhs = cat.composite(q.class_morphism[x], q.class_morphism[y]);
                    if lhs != rhs {
                        bad.push((x, y));
                    }
                }
            }
            (Some(bad.is_empty()), bad)
        }
        Err(_) => (None, Vec::new()),
    };
    Ok(ReducedIncidenceAlgebra {
        classes: rel.describe(p),
        products: table.into_iter().map(|((x, y), z)| (x, y, z)).collect(),
        op_isomorphic,
        mismatches,
    })
}
