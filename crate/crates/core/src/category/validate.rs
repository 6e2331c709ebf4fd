use serde::{Deserialize, Serialize};

use super::{Composite, FiniteGradedCategory, MorId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    IdentityLength,
    IdentityLaw,
    DegreeZero,
    MissingComposite,
    CompositeEndpoints,
    Additivity,
    Associativity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: Vec<MorId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    /// True when every violation is a length-0 non-identity, the case
    /// `skeletalize` can repair.
    pub fn only_degree_zero(&self) -> bool {
        !self.is_valid()
            && self
                .violations
                .iter()
                .all(|v| v.kind == ViolationKind::DegreeZero)
    }
}

/// Checks the category axioms on the represented range. Pairs whose composite
/// is out of range are skipped by the additivity and associativity checks.
pub fn validate(cat: &FiniteGradedCategory) -> ValidationReport {
    let mut out = Vec::new();
    let mut push = |kind, witness: Vec<MorId>| out.push(Violation { kind, witness });

    for o in cat.objects() {
        let id = cat.identity(o);
        if cat.length(id) != 0 {
            push(ViolationKind::IdentityLength, vec![id]);
        }
    }
    for m in cat.morphism_ids() {
        if cat.length(m) == 0 && !cat.is_identity(m) {
            push(ViolationKind::DegreeZero, vec![m]);
        }
        let ids = cat.identity(cat.source(m));
        let idt = cat.identity(cat.target(m));
        if cat.compose(ids, m) != Composite::Defined(m) {
            push(ViolationKind::IdentityLaw, vec![ids, m]);
        }
        if cat.compose(m, idt) != Composite::Defined(m) {
            push(ViolationKind::IdentityLaw, vec![m, idt]);
        }
    }
    for f in cat.morphism_ids() {
        for &g in outgoing(cat, f) {
            match cat.compose(f, g) {
                Composite::Missing => push(ViolationKind::MissingComposite, vec![f, g]),
                Composite::Defined(h) => {
                    if cat.source(h) != cat.source(f) || cat.target(h) != cat.target(g) {
                        push(ViolationKind::CompositeEndpoints, vec![f, g, h]);
                    }
                    if cat.length(h) != cat.length(f) + cat.length(g) {
                        push(ViolationKind::Additivity, vec![f, g]);
                    }
                }
                _ => {}
            }
        }
    }
    for f in cat.morphism_ids() {
        for &g in outgoing(cat, f) {
            let Some(gf) = cat.composite(f, g) else { continue };
            for &h in outgoing(cat, g) {
                let Some(hg) = cat.composite(g, h) else { continue };
                let left = cat.compose(gf, h);
                let right = cat.compose(f, hg);
                if let (Composite::Defined(a), Composite::Defined(b)) = (left, right) {
                    if a != b {
                        push(ViolationKind::Associativity, vec![f, g, h]);
                    }
                } else if left != right {
                    push(ViolationKind::Associativity, vec![f, g, h]);
                }
            }
        }
    }
    ValidationReport { violations: out }
}

fn outgoing(cat: &FiniteGradedCategory, f: MorId) -> impl Iterator<Item = &MorId> {
    let t = cat.target(f);
    cat.objects().flat_map(move |o| cat.hom(t, o).iter())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{a2_chain, CategoryBuilder, ObjId};

    #[test]
    fn a2_is_valid() {
        assert!(validate(&a2_chain()).is_valid());
    }

    #[test]
    fn additivity_violation_is_reported() {
        let mut b = CategoryBuilder::new();
        let a = b.add_object("a");
        let bb = b.add_object("b");
        let c = b.add_object("c");
        let f = b.add_morphism("f", a, bb, 1);
        let g = b.add_morphism("g", bb, c, 1);
        let gf = b.add_morphism("g∘f", a, c, 3);
        b.set_composite(f, g, gf);
        let r = validate(&b.build().unwrap());
        assert_eq!(
            r.violations,
            vec![Violation {
                kind: ViolationKind::Additivity,
                witness: vec![f, g]
            }]
        );
    }

    #[test]
    fn missing_and_degree_zero() {
        let mut b = CategoryBuilder::new();
        let a = b.add_object("a");
        let bb = b.add_object("b");
        let z = b.add_morphism("z", a, bb, 0);
        let w = b.add_morphism("w", bb, a, 0);
        let _ = (z, w);
        let cat = b.build().unwrap();
        let r = validate(&cat);
        assert!(r.has(ViolationKind::DegreeZero));
        assert!(r.has(ViolationKind::MissingComposite));
        assert!(!r.only_degree_zero());
        assert_eq!(cat.identity(ObjId(0)), MorId(0));
    }

    #[test]
    fn broken_identity_law() {
        let mut b = CategoryBuilder::new();
        let a = b.add_object("a");
        let f = b.add_morphism("f", a, a, 1);
        let ff = b.add_morphism("ff", a, a, 2);
        let id = b.identity(a);
        b.set_composite(id, f, ff);
        b.set_out_of_range(f, f);
        b.set_out_of_range(f, ff);
        b.set_out_of_range(ff, f);
        b.set_out_of_range(ff, ff);
        let r = validate(&b.build().unwrap());
        assert!(r.has(ViolationKind::IdentityLaw));
    }
}
