//! Koszulity of a line-bundle collection from its monomial posets, with the
//! grading potential that decides whether the dual collection shifts to a
//! strong one.

use std::collections::VecDeque;

use serde::Serialize;

use super::skew::{skew_category_with, LengthGrading, SkewCategory};
use super::{ToricCollectionSpec, ToricError};
use crate::category::MorId;
use crate::factorization::FactorizationIndex;
use crate::homology::Field;
use crate::koszul::is_koszul;
use crate::poset::{is_locally_cm, FinitePoset, LocalCmWitness};
use crate::rs::path_poset;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PosetVerdict {
    pub object: String,
    pub elements: usize,
    pub locally_cohen_macaulay: bool,
    pub witness: Option<LocalCmWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PotentialEdge {
    pub arrow: String,
    pub source: String,
    pub target: String,
}

/// An integer `f` on objects with `f(target) - f(source) = 1` along every
/// arrow, or a cycle of arrows on which no such `f` exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Potential {
    pub exists: bool,
    pub values: Option<Vec<i64>>,
    pub inconsistent_cycle: Option<Vec<PotentialEdge>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToricReport {
    pub objects: Vec<String>,
    pub field: String,
    pub grading: LengthGrading,
    pub posets: Vec<PosetVerdict>,
    /// All monomial posets locally Cohen–Macaulay.
    pub koszul: bool,
    /// Verdict of the factorization-space check on the skew category.
    pub engine_koszul: bool,
    /// Shortest failing morphism as a path of arrows, first arrow rightmost.
    pub witness: Option<String>,
    pub potential: Potential,
    /// `d_i = -f(D_i)` when the potential exists.
    pub shifts: Option<Vec<i64>>,
    /// Koszul and the potential exists.
    pub dual_collection_strong: bool,
    /// The strongness verdict assumes the input is a full strong
    /// exceptional collection; that is not checked.
    pub strongness_conditional: bool,
}

pub fn toric_report(spec: &ToricCollectionSpec, k: Field) -> Result<ToricReport, ToricError> {
    let skew = skew_category_with(spec, LengthGrading::ArrowCount)?;
    let cat = &skew.category;
    let posets: Vec<PosetVerdict> = cat
        .objects()
        .map(|o| {
            let (p, elems) = path_poset(cat, o).expect("object exists");
            let p = relabel(&p, elems.iter().map(|&m| skew.monomial_label(m)).collect());
            let r = is_locally_cm(&p, k);
            PosetVerdict {
                object: cat.object_label(o).to_string(),
                elements: p.len(),
                locally_cohen_macaulay: r.locally_cohen_macaulay,
                witness: r.witness,
            }
        })
        .collect();
    let koszul = posets.iter().all(|p| p.locally_cohen_macaulay);
    let engine = is_koszul(cat, k);
    let witness = engine.witnesses.first().map(|w| arrow_path(&skew, w.morphism));
    let potential = potential(&skew);
    let shifts = potential.values.as_ref().map(|f| f.iter().map(|v| -v).collect());
    Ok(ToricReport {
        objects: cat.object_labels().to_vec(),
        field: k.to_string(),
        grading: skew.grading,
        posets,
        koszul,
        engine_koszul: engine.koszul,
        witness,
        dual_collection_strong: koszul && potential.exists,
        potential,
        shifts,
        strongness_conditional: true,
    })
}

fn relabel(p: &FinitePoset, labels: Vec<String>) -> FinitePoset {
    FinitePoset::from_relations(labels, &p.cover_relations()).expect("same order")
}

/// Lexicographically smallest factorization into arrows, compared in the
/// order the arrows are applied, written as a composite.
fn arrow_path(skew: &SkewCategory, m: MorId) -> String {
    let index = FactorizationIndex::new(&skew.category);
    let best = index
        .sequences(m)
        .iter()
        .filter(|s| s.iter().all(|&f| !index.is_decomposable(f)))
        .map(|s| s.iter().map(|&f| skew.monomial_label(f)).collect::<Vec<_>>())
        .min_by(|a, b| a.iter().rev().cmp(b.iter().rev()))
        .expect("every morphism factors into arrows");
    best.join("∘")
}

fn potential(skew: &SkewCategory) -> Potential {
    let cat = &skew.category;
    let n = cat.num_objects();
    let mut adj: Vec<Vec<(MorId, usize, i64)>> = vec![Vec::new(); n];
    for a in skew.arrows() {
        let (s, t) = (cat.source(a).0, cat.target(a).0);
        adj[s].push((a, t, 1));
        adj[t].push((a, s, -1));
    }
    let mut f: Vec<Option<i64>> = vec![None; n];
    let mut parent: Vec<Option<(MorId, usize)>> = vec![None; n];
    let edge = |a: MorId| PotentialEdge {
        arrow: skew.monomial_label(a),
        source: cat.object_label(cat.source(a)).to_string(),
        target: cat.object_label(cat.target(a)).to_string(),
    };
    let tree_path = |parent: &[Option<(MorId, usize)>], mut v: usize| {
        let mut out = Vec::new();
        while let Some((a, u)) = parent[v] {
            out.push(a);
            v = u;
        }
        out
    };
    let mut components = Vec::new();
    for root in 0..n {
        if f[root].is_some() {
            continue;
        }
        f[root] = Some(0);
        let mut comp = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let fu = f[u].unwrap();
            for &(a, v, sign) in &adj[u] {
                match f[v] {
                    None => {
                        f[v] = Some(fu + sign);
                        parent[v] = Some((a, u));
                        comp.push(v);
                        queue.push_back(v);
                    }
                    Some(fv) if fv != fu + sign => {
                        // root → u, the arrow, then v → root
                        let mut cycle: Vec<MorId> = tree_path(&parent, u);
                        cycle.reverse();
                        cycle.push(a);
                        cycle.extend(tree_path(&parent, v));
                        return Potential {
                            exists: false,
                            values: None,
                            inconsistent_cycle: Some(cycle.into_iter().map(edge).collect()),
                        };
                    }
                    Some(_) => {}
                }
            }
        }
        components.push(comp);
    }
    let mut values: Vec<i64> = f.into_iter().map(|v| v.unwrap()).collect();
    for comp in components {
        let min = comp.iter().map(|&v| values[v]).min().unwrap();
        for v in comp {
            values[v] -= min;
        }
    }
    Potential {
        exists: true,
        values: Some(values),
        inconsistent_cycle: None,
    }
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::*;
    use crate::category::ObjId;
    use crate::poset::{order_complex, IntervalSpec};

    fn report(spec: &ToricCollectionSpec) -> ToricReport {
        toric_report(spec, Field::Rationals).unwrap()
    }

    #[test]
    fn f1_not_koszul() {
        let r = report(&hirzebruch(1));
        assert!(!r.koszul);
        assert!(!r.engine_koszul);
        assert_eq!(r.witness.as_deref(), Some("x3∘x2∘x1"));
        assert!(!r.dual_collection_strong);
    }

    #[test]
    fn hirzebruch_family() {
        for n in 2..=4 {
            let r = report(&hirzebruch(n));
            assert!(r.koszul, "F_{n}");
            assert!(r.engine_koszul);
            assert_eq!(r.grading, LengthGrading::ArrowCount);
        }
    }

    #[test]
    fn p1xp1_strong() {
        let r = report(&p1xp1());
        assert!(r.koszul);
        assert_eq!(r.potential.values, Some(vec![0, 1, 1, 2]));
        assert_eq!(r.shifts, Some(vec![0, -1, -1, -2]));
        assert!(r.dual_collection_strong);
        assert!(r.strongness_conditional);
    }

    #[test]
    fn p2_koszul_with_ten_element_poset() {
        let r = report(&projective(2, &[0, 1, 2]));
        assert!(r.koszul);
        assert_eq!(r.posets[0].elements, 10);
        assert_eq!(r.potential.values, Some(vec![0, 1, 2]));
    }

    #[test]
    fn weighted_projective_potential_fails() {
        let r = report(&weighted_112());
        assert!(r.koszul);
        assert!(r.engine_koszul);
        assert!(!r.potential.exists);
        let cycle = r.potential.inconsistent_cycle.unwrap();
        assert_eq!(cycle.first().unwrap().source, "O(0)");
        assert_eq!(cycle.last().unwrap().source, "O(0)");
        assert!(!r.dual_collection_strong);
    }

    #[test]
    fn f3_circle_interval() {
        // (1, x1^2*x2*x3^2) in the poset of O(0,0) is a 4-cycle
        let spec = hirzebruch(3);
        let skew = skew_category_with(&spec, LengthGrading::ArrowCount).unwrap();
        let (p, elems) = path_poset(&skew.category, ObjId(0)).unwrap();
        let p = relabel(&p, elems.iter().map(|&m| skew.monomial_label(m)).collect());
        let (bot, top) = (p.index_of("1").unwrap(), p.index_of("x1^2*x2*x3^2").unwrap());
        let b = order_complex(&p, IntervalSpec::Open(bot, top)).betti(Field::Rationals);
        assert_eq!(b.reduced_betti, std::collections::BTreeMap::from([(1, 1)]));
        assert_eq!(p.open_interval(bot, top).len(), 4);
    }
}
