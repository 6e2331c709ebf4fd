//! Bundled example inputs with their expected verdicts.
//!
//! `emit_fixtures` writes every document plus a `manifest.json` listing, per
//! file, a command line and a JSON object that must be contained in the
//! command's report.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::category::{a2_chain, from_quiver, product, MorId, ObjId, QuiverPresentation};
use crate::io::{CategoryFile, CategoryTable, FibrationFile, PosetSpec, RelationFile};
use crate::poset::{poset_category, FinitePoset};
use crate::rs::{path_poset_projection, FunctorData};
use crate::toric::examples::{hirzebruch, p1xp1, projective, weighted_112};
use crate::toric::ToricCollectionSpec;

pub fn beilinson_p1() -> QuiverPresentation {
    QuiverPresentation::new(&["v1", "v2"], 1)
        .arrow("x", "v1", "v2", 1)
        .arrow("y", "v1", "v2", 1)
}

/// Three arrows `x_i: v1 → v2`, three `y_i: v2 → v3`, with `y_i x_j = y_j x_i`.
pub fn beilinson_p2() -> QuiverPresentation {
    let mut q = QuiverPresentation::new(&["v1", "v2", "v3"], 2);
    for i in 0..3 {
        q = q.arrow(&format!("x{i}"), "v1", "v2", 1);
    }
    for i in 0..3 {
        q = q.arrow(&format!("y{i}"), "v2", "v3", 1);
    }
    for i in 0..3 {
        for j in i + 1..3 {
            q = q.relation(
                &[&format!("x{j}"), &format!("y{i}")],
                &[&format!("x{i}"), &format!("y{j}")],
            );
        }
    }
    q
}

/// One loop `x`, truncated at length `n`.
pub fn kx_truncated(n: u32) -> QuiverPresentation {
    QuiverPresentation::new(&["v"], n).arrow("x", "v", "v", 1)
}

fn poset(elements: &[&str], relations: &[(&str, &str)]) -> PosetSpec {
    PosetSpec {
        elements: elements.iter().map(|s| s.to_string()).collect(),
        relations: relations
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect(),
    }
}

pub fn hexagon() -> PosetSpec {
    poset(
        &["a", "b", "c", "d", "e", "f"],
        &[
            ("a", "b"),
            ("b", "d"),
            ("d", "f"),
            ("a", "c"),
            ("c", "e"),
            ("e", "f"),
        ],
    )
}

pub fn diamond() -> PosetSpec {
    poset(
        &["a", "b", "c", "d"],
        &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
    )
}

pub fn v_poset() -> PosetSpec {
    poset(&["a", "b", "c"], &[("a", "b"), ("a", "c")])
}

pub fn chain3() -> PosetSpec {
    poset(&["0", "1", "2"], &[("0", "1"), ("1", "2")])
}

fn pairs(ps: &[(&str, &str)]) -> Vec<(String, String)> {
    ps.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

/// `[a,b] ~ [a,c]` on the hexagon, with the forced `[b,b] ~ [c,c]`.
pub fn hexagon_relation() -> RelationFile {
    RelationFile {
        poset: hexagon(),
        classes: vec![pairs(&[("a", "b"), ("a", "c")]), pairs(&[("b", "b"), ("c", "c")])],
        endpoint_closure: false,
    }
}

/// Gluing the two maximal elements of the V-poset.
pub fn v_relation() -> RelationFile {
    RelationFile {
        poset: v_poset(),
        classes: vec![pairs(&[("b", "b"), ("c", "c")])],
        endpoint_closure: false,
    }
}

/// The diamond collapsed onto a 3-chain, `b` and `c` to the middle.
pub fn diamond_to_chain() -> FibrationFile {
    let (d, c) = (diamond().build().unwrap(), chain3().build().unwrap());
    let (dc, cc) = (poset_category(&d).unwrap(), poset_category(&c).unwrap());
    let obj = [0usize, 1, 1, 2];
    let mut morphism_map = vec![MorId(0); dc.category.num_morphisms()];
    for (x, y) in d.intervals() {
        morphism_map[dc.morphism(x, y).unwrap().0] = cc.morphism(obj[x], obj[y]).unwrap();
    }
    let f = FunctorData {
        object_map: obj.iter().map(|&o| ObjId(o)).collect(),
        morphism_map,
    };
    FibrationFile::from_functor(
        CategoryFile::Poset(diamond()),
        CategoryFile::Poset(chain3()),
        &dc.category,
        &cc.category,
        &f,
    )
}

/// Projection from the path poset of a quiver category onto the category.
pub fn path_fibration(q: QuiverPresentation) -> FibrationFile {
    let cat = from_quiver(&q).unwrap();
    let proj = path_poset_projection(&cat).unwrap();
    FibrationFile::from_functor(
        CategoryFile::Poset(PosetSpec::from_poset(&proj.poset)),
        CategoryFile::Quiver(q),
        &proj.poset_category.category,
        &cat,
        &proj.functor,
    )
}

pub fn p1xp1_category() -> CategoryTable {
    let p1 = from_quiver(&beilinson_p1()).unwrap();
    CategoryTable::from_category(&product(&p1, &p1))
}

pub enum Document {
    Category(CategoryFile),
    Relation(RelationFile),
    Fibration(FibrationFile),
    Toric(ToricCollectionSpec),
}

impl Document {
    pub fn render(&self) -> String {
        let v = match self {
            Document::Category(c) => serde_json::to_string_pretty(c),
            Document::Relation(r) => serde_json::to_string_pretty(&tagged("rs-relation", r)),
            Document::Fibration(f) => serde_json::to_string_pretty(&tagged("fibration", f)),
            Document::Toric(t) => return toml::to_string(t).expect("plain data"),
        };
        v.expect("plain data") + "\n"
    }
}

/// Adds the `kind` key checked by `parse_tagged`.
fn tagged<T: serde::Serialize>(kind: &str, v: &T) -> Value {
    let mut v = serde_json::to_value(v).expect("plain data");
    if let Value::Object(m) = &mut v {
        m.insert("kind".into(), json!(kind));
    }
    v
}

pub struct Fixture {
    pub file: &'static str,
    pub document: Document,
}

pub struct Check {
    pub file: &'static str,
    pub args: Vec<&'static str>,
    /// Must be contained in the JSON report.
    pub expected: Value,
}

pub fn fixtures() -> Vec<Fixture> {
    use Document::*;
    let cat = |file, c| Fixture {
        file,
        document: Category(c),
    };
    vec![
        cat("beilinson-p1.json", CategoryFile::Quiver(beilinson_p1())),
        cat("beilinson-p2.json", CategoryFile::Quiver(beilinson_p2())),
        cat(
            "a2-chain.json",
            CategoryFile::Category(CategoryTable::from_category(&a2_chain())),
        ),
        cat("kx-truncated.json", CategoryFile::Quiver(kx_truncated(6))),
        cat("p1xp1.json", CategoryFile::Category(p1xp1_category())),
        cat("hexagon.json", CategoryFile::Poset(hexagon())),
        cat("diamond.json", CategoryFile::Poset(diamond())),
        cat("v-poset.json", CategoryFile::Poset(v_poset())),
        Fixture {
            file: "hexagon-relation.json",
            document: Relation(hexagon_relation()),
        },
        Fixture {
            file: "v-relation.json",
            document: Relation(v_relation()),
        },
        Fixture {
            file: "diamond-to-chain.json",
            document: Fibration(diamond_to_chain()),
        },
        Fixture {
            file: "p1-path-fibration.json",
            document: Fibration(path_fibration(beilinson_p1())),
        },
        Fixture {
            file: "p2-path-fibration.json",
            document: Fibration(path_fibration(beilinson_p2())),
        },
        Fixture {
            file: "f1.toml",
            document: Toric(hirzebruch(1)),
        },
        Fixture {
            file: "f2.toml",
            document: Toric(hirzebruch(2)),
        },
        Fixture {
            file: "f3.toml",
            document: Toric(hirzebruch(3)),
        },
        Fixture {
            file: "p1xp1.toml",
            document: Toric(p1xp1()),
        },
        Fixture {
            file: "p2.toml",
            document: Toric(projective(2, &[0, 1, 2])),
        },
        Fixture {
            file: "weighted-p112.toml",
            document: Toric(weighted_112()),
        },
    ]
}

pub fn checks() -> Vec<Check> {
    let c = |file, args: &[&'static str], expected| Check {
        file,
        args: args.to_vec(),
        expected,
    };
    vec![
        c(
            "beilinson-p1.json",
            &["koszul"],
            json!({"koszul": true, "checked_up_to": "complete"}),
        ),
        c("beilinson-p2.json", &["koszul"], json!({"koszul": true})),
        c(
            "beilinson-p2.json",
            &["ext", "--from", "v3", "--to", "v1", "--degree", "2"],
            json!({"ext": {"2": 3}}),
        ),
        c(
            "beilinson-p2.json",
            &["quadratic"],
            json!({"quadratic": {"status": "quadratic"}}),
        ),
        c("a2-chain.json", &["koszul"], json!({"koszul": true})),
        c("a2-chain.json", &["validate"], json!({"valid": true})),
        c(
            "kx-truncated.json",
            &["koszul"],
            json!({"koszul": true, "checked_up_to": 6}),
        ),
        c("p1xp1.json", &["koszul"], json!({"koszul": true})),
        c("hexagon.json", &["koszul"], json!({"koszul": false})),
        c("hexagon.json", &["cm"], json!({"locally_cohen_macaulay": false})),
        c("diamond.json", &["koszul"], json!({"koszul": true})),
        c("diamond.json", &["cm"], json!({"locally_cohen_macaulay": true})),
        c("v-poset.json", &["koszul"], json!({"koszul": true})),
        c("hexagon-relation.json", &["rs-verify"], json!({"passes": true})),
        c(
            "hexagon-relation.json",
            &["rs-quotient"],
            json!({"objects": 5, "classes": 15, "op_isomorphic": true}),
        ),
        c("v-relation.json", &["rs-verify"], json!({"passes": true})),
        c(
            "v-relation.json",
            &["rs-quotient"],
            json!({"objects": 2, "classes": 4, "op_isomorphic": true}),
        ),
        c(
            "diamond-to-chain.json",
            &["fibration"],
            json!({"almost_discrete": false, "witness": {"morphism": "a≤d", "image": "0≤2"}}),
        ),
        c(
            "p1-path-fibration.json",
            &["fibration"],
            json!({"almost_discrete": true, "induced_relation": {"passes": true}, "quotient_isomorphic": true}),
        ),
        c(
            "p2-path-fibration.json",
            &["fibration"],
            json!({"almost_discrete": true, "induced_relation": {"passes": true}, "quotient_isomorphic": true}),
        ),
        c(
            "f1.toml",
            &["toric"],
            json!({"koszul": false, "witness": "x3∘x2∘x1"}),
        ),
        c("f2.toml", &["toric"], json!({"koszul": true})),
        c("f3.toml", &["toric"], json!({"koszul": true})),
        c(
            "p1xp1.toml",
            &["toric"],
            json!({"koszul": true, "potential": {"exists": true}, "dual_collection_strong": true}),
        ),
        c("p2.toml", &["toric"], json!({"koszul": true})),
        c(
            "weighted-p112.toml",
            &["toric"],
            json!({"koszul": true, "potential": {"exists": false}, "dual_collection_strong": false}),
        ),
    ]
}

pub fn manifest() -> Value {
    let checks: Vec<Value> = checks()
        .into_iter()
        .map(|c| json!({"file": c.file, "args": c.args, "expected": c.expected}))
        .collect();
    json!({"fixtures": fixtures().iter().map(|f| f.file).collect::<Vec<_>>(), "checks": checks})
}

/// Writes every fixture and `manifest.json` into `dir`.
pub fn emit_fixtures(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for f in fixtures() {
        let path = dir.join(f.file);
        std::fs::write(&path, f.document.render())?;
        written.push(path);
    }
    let path = dir.join("manifest.json");
    std::fs::write(
        &path,
        serde_json::to_string_pretty(&manifest()).expect("plain data") + "\n",
    )?;
    written.push(path);
    Ok(written)
}

/// `true` when every key of `expected` appears in `actual` with a matching
/// value, recursively for objects.
pub fn json_contains(actual: &Value, expected: &Value) -> bool {
    match (actual, expected) {
        (Value::Object(a), Value::Object(e)) => e
            .iter()
            .all(|(k, ev)| a.get(k).is_some_and(|av| json_contains(av, ev))),
        _ => actual == expected,
    }
}

/// Posets of the bundled fixtures, by file name.
pub fn fixture_posets() -> Vec<(&'static str, FinitePoset)> {
    fixtures()
        .into_iter()
        .filter_map(|f| match f.document {
            Document::Category(CategoryFile::Poset(p)) => Some((f.file, p.build().unwrap())),
            _ => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{parse_json, parse_tagged, parse_toml};

    #[test]
    fn at_least_ten_and_round_trip() {
        let fs = fixtures();
        assert!(fs.len() >= 10);
        for f in fs {
            let text = f.document.render();
            match &f.document {
                Document::Category(c) => assert_eq!(&parse_json::<CategoryFile>(&text).unwrap(), c),
                Document::Relation(r) => {
                    assert_eq!(&parse_tagged::<RelationFile>(&text, "rs-relation").unwrap(), r)
                }
                Document::Fibration(x) => {
                    assert_eq!(&parse_tagged::<FibrationFile>(&text, "fibration").unwrap(), x)
                }
                Document::Toric(t) => assert_eq!(&parse_toml::<ToricCollectionSpec>(&text).unwrap(), t),
            }
        }
    }

    #[test]
    fn every_check_names_a_fixture() {
        let names: Vec<&str> = fixtures().iter().map(|f| f.file).collect();
        for c in checks() {
            assert!(names.contains(&c.file), "{}", c.file);
        }
    }

    #[test]
    fn containment() {
        let a = json!({"x": 1, "y": {"z": [1, 2], "w": true}});
        assert!(json_contains(&a, &json!({"y": {"w": true}})));
        assert!(!json_contains(&a, &json!({"y": {"w": false}})));
        assert!(!json_contains(&a, &json!({"q": 1})));
    }
}
