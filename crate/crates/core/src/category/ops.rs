use super::{CategoryBuilder, CategoryError, Composite, FiniteGradedCategory, MorId, ObjId};

/// Same morphisms with source and target swapped; `compose(f, g)` in the
/// opposite is `compose(g, f)` in the original. Labels are kept so that
/// taking the opposite twice returns an equal value.
pub fn opposite(cat: &FiniteGradedCategory) -> FiniteGradedCategory {
    let n = cat.num_morphisms();
    let morphisms = cat
        .morphisms
        .iter()
        .map(|m| super::Morphism {
            source: m.target,
            target: m.source,
            length: m.length,
            label: m.label.clone(),
        })
        .collect::<Vec<_>>();
    let mut table = vec![super::NONE; n * n];
    for f in 0..n {
        for g in 0..n {
            table[f * n + g] = cat.table[g * n + f];
        }
    }
    let no = cat.num_objects();
    let mut hom = vec![vec![Vec::new(); no]; no];
    for (i, m) in morphisms.iter().enumerate() {
        hom[m.source.0][m.target.0].push(MorId(i));
    }
    FiniteGradedCategory {
        objects: cat.objects.clone(),
        morphisms,
        identities: cat.identities.clone(),
        table,
        truncation: cat.truncation,
        hom,
    }
}

/// Drops morphisms longer than `bound`; composites landing there become out
/// of range. The truncation becomes the smaller of `bound` and the old one.
pub fn truncate_to_length(cat: &FiniteGradedCategory, bound: u32) -> FiniteGradedCategory {
    let kept: Vec<MorId> = cat.morphism_ids().filter(|&m| cat.length(m) <= bound).collect();
    let mut new_id = vec![None; cat.num_morphisms()];
    for (i, &m) in kept.iter().enumerate() {
        new_id[m.0] = Some(i as u32);
    }
    let n = kept.len();
    let mut table = vec![super::NONE; n * n];
    for (i, &f) in kept.iter().enumerate() {
        for (j, &g) in kept.iter().enumerate() {
            table[i * n + j] = match cat.compose(f, g) {
                Composite::Defined(h) => new_id[h.0].unwrap_or(super::OUT),
                Composite::OutOfRange => super::OUT,
                Composite::Missing | Composite::NotComposable => super::NONE,
            };
        }
    }
    let morphisms: Vec<super::Morphism> = kept.iter().map(|&m| cat.morphism(m).clone()).collect();
    let no = cat.num_objects();
    let mut hom = vec![vec![Vec::new(); no]; no];
    for (i, m) in morphisms.iter().enumerate() {
        hom[m.source.0][m.target.0].push(MorId(i));
    }
    let truncation = Some(cat.truncation().map_or(bound, |t| t.min(bound)));
    FiniteGradedCategory {
        objects: cat.objects.clone(),
        identities: cat
            .identities
            .iter()
            .map(|m| MorId(new_id[m.0].expect("length 0") as usize))
            .collect(),
        morphisms,
        table,
        truncation,
        hom,
    }
}

/// Objects and morphisms are pairs, length adds, composition is componentwise.
/// A composite is out of range when either component is.
pub fn product(a: &FiniteGradedCategory, b: &FiniteGradedCategory) -> FiniteGradedCategory {
    let mut builder = CategoryBuilder::new();
    let nb_obj = b.num_objects();
    for oa in a.objects() {
        for ob in b.objects() {
            builder.add_object(format!("({},{})", a.object_label(oa), b.object_label(ob)));
        }
    }
    let obj = |oa: ObjId, ob: ObjId| ObjId(oa.0 * nb_obj + ob.0);
    let nb = b.num_morphisms();
    let mut ids = vec![MorId(0); a.num_morphisms() * nb];
    for f in a.morphism_ids() {
        for g in b.morphism_ids() {
            let o_src = obj(a.source(f), b.source(g));
            let id = if a.is_identity(f) && b.is_identity(g) {
                builder.set_identity_label(o_src, format!("({},{})", a.label(f), b.label(g)))
            } else {
                builder.add_morphism(
                    format!("({},{})", a.label(f), b.label(g)),
                    o_src,
                    obj(a.target(f), b.target(g)),
                    a.length(f) + b.length(g),
                )
            };
            ids[f.0 * nb + g.0] = id;
        }
    }
    let pair = |f: MorId, g: MorId| ids[f.0 * nb + g.0];
    for f1 in a.morphism_ids() {
        for f2 in a.morphism_ids() {
            let ca = a.compose(f1, f2);
            if ca == Composite::NotComposable {
                continue;
            }
            for g1 in b.morphism_ids() {
                for g2 in b.morphism_ids() {
                    let cb = b.compose(g1, g2);
                    match (ca, cb) {
                        (Composite::NotComposable, _) | (_, Composite::NotComposable) => {}
                        (Composite::Defined(x), Composite::Defined(y)) => {
                            builder.set_composite(pair(f1, g1), pair(f2, g2), pair(x, y))
                        }
                        (Composite::Missing, _) | (_, Composite::Missing) => {}
                        _ => builder.set_out_of_range(pair(f1, g1), pair(f2, g2)),
                    }
                }
            }
        }
    }
    builder.truncate_at(match (a.truncation(), b.truncation()) {
        (None, None) => None,
        (Some(x), None) | (None, Some(x)) => Some(x),
        (Some(x), Some(y)) => Some(x.min(y)),
    });
    builder.build().expect("product of valid categories")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub category: FiniteGradedCategory,
    /// For each original object, the object of the skeleton representing it.
    pub object_map: Vec<ObjId>,
}

/// Collapses each indiscrete length-0 component onto its lowest-index
/// object and keeps the full subcategory on those representatives.
pub fn skeletalize(cat: &FiniteGradedCategory) -> Result<Skeleton, CategoryError> {
    let no = cat.num_objects();
    let mut comp: Vec<usize> = (0..no).collect();
    fn find(c: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while c[r] != r {
            r = c[r];
        }
        c[x] = r;
        r
    }
    for m in cat.morphism_ids() {
        if cat.length(m) == 0 {
            let (s, t) = (find(&mut comp, cat.source(m).0), find(&mut comp, cat.target(m).0));
            if s != t {
                let (lo, hi) = (s.min(t), s.max(t));
                comp[hi] = lo;
            }
        }
    }
    let roots: Vec<usize> = (0..no).map(|o| find(&mut comp, o)).collect();
    for a in 0..no {
        for b in 0..no {
            if roots[a] != roots[b] {
                continue;
            }
            let count = cat
                .hom(ObjId(a), ObjId(b))
                .iter()
                .filter(|&&m| cat.length(m) == 0)
                .count();
            if count != 1 {
                return Err(CategoryError::NotIndiscretelyBased {
                    a: cat.object_label(ObjId(a)).to_string(),
                    b: cat.object_label(ObjId(b)).to_string(),
                    count,
                });
            }
        }
    }
    let reps: Vec<usize> = (0..no).filter(|&o| roots[o] == o).collect();
    let mut new_index = vec![usize::MAX; no];
    let mut builder = CategoryBuilder::new();
    for &r in &reps {
        new_index[r] = builder.add_object(cat.object_label(ObjId(r))).0;
    }
    let mut mor_map = vec![None; cat.num_morphisms()];
    for &r in &reps {
        builder.set_identity_label(ObjId(new_index[r]), cat.label(cat.identity(ObjId(r))));
        mor_map[cat.identity(ObjId(r)).0] = Some(builder.identity(ObjId(new_index[r])));
    }
    for m in cat.morphism_ids() {
        let (s, t) = (cat.source(m).0, cat.target(m).0);
        if roots[s] != s || roots[t] != t || cat.is_identity(m) {
            continue;
        }
        mor_map[m.0] = Some(builder.add_morphism(
            cat.label(m),
            ObjId(new_index[s]),
            ObjId(new_index[t]),
            cat.length(m),
        ));
    }
    for f in cat.morphism_ids() {
        let Some(nf) = mor_map[f.0] else { continue };
        for g in cat.morphism_ids() {
            let Some(ng) = mor_map[g.0] else { continue };
            match cat.compose(f, g) {
                Composite::Defined(h) => {
                    if let Some(nh) = mor_map[h.0] {
                        builder.set_composite(nf, ng, nh);
                    }
                }
                Composite::OutOfRange => builder.set_out_of_range(nf, ng),
                _ => {}
            }
        }
    }
    builder.truncate_at(cat.truncation());
    let category = builder.build()?;
    let object_map = roots.iter().map(|&r| ObjId(new_index[r])).collect();
    Ok(Skeleton { category, object_map })
}
