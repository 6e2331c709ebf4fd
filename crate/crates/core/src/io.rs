//! File formats: categories (explicit tables, quiver presentations or
//! posets), interval relations, functors, and toric collection specs.
//!
//! JSON documents carry a `kind` tag; toric specs are plain TOML or JSON.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::category::{
    from_quiver, Arrow, CategoryBuilder, CategoryError, Composite, FiniteGradedCategory, MorId, ObjId,
    QuiverPresentation,
};
use crate::poset::{poset_category, FinitePoset, PosetCategory, PosetError};
use crate::rs::{FunctorData, IntervalRelation, RsError};
use crate::toric::{ToricCollectionSpec, ToricError};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at key `{key}`: {message}")]
    Schema { key: String, message: String },
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Relation(#[from] RsError),
    #[error(transparent)]
    Toric(#[from] ToricError),
}

/// Key named in a serde message such as "unknown field `x`".
fn offending_key(message: &str) -> String {
    message
        .split('`')
        .nth(1)
        .map(str::to_string)
        .unwrap_or_else(|| "<root>".into())
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, InputError> {
    serde_json::from_str(text).map_err(|e| {
        use serde_json::error::Category;
        let message = e.to_string();
        match e.classify() {
            Category::Data => InputError::Schema {
                key: offending_key(&message),
                message,
            },
            _ => InputError::Parse {
                line: e.line(),
                column: e.column(),
                message,
            },
        }
    })
}

pub fn parse_toml<T: DeserializeOwned>(text: &str) -> Result<T, InputError> {
    toml::from_str(text).map_err(|e| {
        let message = e.message().to_string();
        let schema = [
            "unknown field",
            "missing field",
            "invalid type",
            "invalid length",
            "invalid value",
        ]
        .iter()
        .any(|s| message.contains(s));
        if schema {
            return InputError::Schema {
                key: offending_key(&message),
                message,
            };
        }
        let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
        InputError::Parse {
            line,
            column,
            message,
        }
    })
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Reads a document, as TOML when the extension is `.toml` and JSON
/// otherwise.
pub fn read_document<T: DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let text = read_text(path)?;
    if path.extension().is_some_and(|e| e == "toml") {
        parse_toml(&text)
    } else {
        parse_json(&text)
    }
}

/// Parses a JSON object whose optional `kind` key must equal `kind`.
pub fn parse_tagged<T: DeserializeOwned>(text: &str, kind: &str) -> Result<T, InputError> {
    let mut v: serde_json::Value = parse_json(text)?;
    if let Some(obj) = v.as_object_mut() {
        if let Some(k) = obj.remove("kind") {
            if k != kind {
                return Err(InputError::Schema {
                    key: "kind".into(),
                    message: format!("expected `{kind}`, found {k}"),
                });
            }
        }
    }
    serde_json::from_value(v).map_err(|e| {
        let message = e.to_string();
        InputError::Schema {
            key: offending_key(&message),
            message,
        }
    })
}

fn read_text(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn read_tagged<T: DeserializeOwned>(path: &Path, kind: &str) -> Result<T, InputError> {
    parse_tagged(&read_text(path)?, kind)
}

/// Explicit composition table. Composites are `[first, second, result]`
/// with `result = second ∘ first`; identity composites are implicit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryTable {
    pub objects: Vec<String>,
    /// Identity labels in object order; `id_<object>` when omitted.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub identities: Vec<String>,
    pub morphisms: Vec<Arrow>,
    #[serde(default)]
    pub composites: Vec<(String, String, String)>,
    /// Composable pairs whose composite lies beyond `truncation`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub out_of_range: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetSpec {
    pub elements: Vec<String>,
    /// Pairs `[a, b]` meaning `a ≤ b`; the order is their transitive closure.
    pub relations: Vec<(String, String)>,
}

impl PosetSpec {
    pub fn build(&self) -> Result<FinitePoset, PosetError> {
        let e: Vec<&str> = self.elements.iter().map(String::as_str).collect();
        let r: Vec<(&str, &str)> = self
            .relations
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        FinitePoset::from_labeled(&e, &r)
    }

    pub fn from_poset(p: &FinitePoset) -> Self {
        PosetSpec {
            elements: p.labels().to_vec(),
            relations: p
                .cover_relations()
                .into_iter()
                .map(|(a, b)| (p.label(a).to_string(), p.label(b).to_string()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CategoryFile {
    Category(CategoryTable),
    Quiver(QuiverPresentation),
    Poset(PosetSpec),
}

/// A category read from a file; posets keep their element order.
#[derive(Clone, Debug)]
pub struct LoadedCategory {
    pub category: FiniteGradedCategory,
    pub poset: Option<(FinitePoset, PosetCategory)>,
}

impl CategoryFile {
    pub fn load(&self) -> Result<LoadedCategory, InputError> {
        Ok(match self {
            CategoryFile::Category(t) => LoadedCategory {
                category: t.build()?,
                poset: None,
            },
            CategoryFile::Quiver(q) => LoadedCategory {
                category: from_quiver(q)?,
                poset: None,
            },
            CategoryFile::Poset(s) => {
                let p = s.build()?;
                let pc = poset_category(&p)?;
                LoadedCategory {
                    category: pc.category.clone(),
                    poset: Some((p, pc)),
                }
            }
        })
    }
}

impl CategoryTable {
    pub fn build(&self) -> Result<FiniteGradedCategory, CategoryError> {
        let mut b = CategoryBuilder::new();
        let mut objs: BTreeMap<&str, ObjId> = BTreeMap::new();
        for o in &self.objects {
            objs.insert(o, b.add_object(o.clone()));
        }
        let mut mors: BTreeMap<String, MorId> = BTreeMap::new();
        for (i, o) in self.objects.iter().enumerate() {
            let id = match self.identities.get(i) {
                Some(l) => b.set_identity_label(ObjId(i), l.clone()),
                None => b.identity(ObjId(i)),
            };
            mors.insert(self.identities.get(i).cloned().unwrap_or(format!("id_{o}")), id);
        }
        let obj = |l: &str| {
            objs.get(l)
                .copied()
                .ok_or_else(|| CategoryError::UnknownObject(l.into()))
        };
        for m in &self.morphisms {
            let id = b.add_morphism(m.label.clone(), obj(&m.source)?, obj(&m.target)?, m.length);
            mors.insert(m.label.clone(), id);
        }
        let mor = |l: &str| {
            mors.get(l)
                .copied()
                .ok_or_else(|| CategoryError::UnknownMorphism(l.into()))
        };
        for (f, g, h) in &self.composites {
            b.set_composite(mor(f)?, mor(g)?, mor(h)?);
        }
        for (f, g) in &self.out_of_range {
            b.set_out_of_range(mor(f)?, mor(g)?);
        }
        b.truncate_at(self.truncation);
        b.build()
    }

    /// Table listing every defined non-identity composite.
    pub fn from_category(cat: &FiniteGradedCategory) -> Self {
        let mut composites = Vec::new();
        let mut out_of_range = Vec::new();
        for a in cat.morphism_ids().filter(|&a| !cat.is_identity(a)) {
            for o in cat.objects() {
                for &b in cat.hom(cat.target(a), o) {
                    if cat.is_identity(b) {
                        continue;
                    }
                    match cat.compose(a, b) {
                        Composite::Defined(c) => composites.push((
                            cat.label(a).to_string(),
                            cat.label(b).to_string(),
                            cat.label(c).to_string(),
                        )),
                        Composite::OutOfRange => {
                            out_of_range.push((cat.label(a).to_string(), cat.label(b).to_string()))
                        }
                        _ => {}
                    }
                }
            }
        }
        let identities: Vec<String> = cat
            .objects()
            .map(|o| cat.label(cat.identity(o)).to_string())
            .collect();
        let default_ids = cat
            .objects()
            .all(|o| identities[o.0] == format!("id_{}", cat.object_label(o)));
        CategoryTable {
            objects: cat.object_labels().to_vec(),
            identities: if default_ids { Vec::new() } else { identities },
            morphisms: cat
                .non_identities_by_length()
                .into_iter()
                .map(|m| Arrow {
                    label: cat.label(m).to_string(),
                    source: cat.object_label(cat.source(m)).to_string(),
                    target: cat.object_label(cat.target(m)).to_string(),
                    length: cat.length(m),
                })
                .collect(),
            composites,
            out_of_range,
            truncation: cat.truncation(),
        }
    }
}

/// Classes of intervals `[bottom, top]`; unlisted intervals are singletons.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    pub poset: PosetSpec,
    pub classes: Vec<Vec<(String, String)>>,
    /// Close the relation under equivalence of endpoints first.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub endpoint_closure: bool,
}

impl RelationFile {
    pub fn load(&self) -> Result<(FinitePoset, IntervalRelation), InputError> {
        let p = self.poset.build()?;
        let idx = |l: &str| p.index_of(l).ok_or_else(|| PosetError::UnknownElement(l.into()));
        let classes = self
            .classes
            .iter()
            .map(|c| {
                c.iter()
                    .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
                    .collect::<Result<Vec<_>, PosetError>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut rel = IntervalRelation::from_classes(&p, &classes)?;
        if self.endpoint_closure {
            rel = rel.with_endpoint_closure(&p);
        }
        Ok((p, rel))
    }
}

/// A functor given by object and morphism labels. Identities may be omitted
/// from the morphism map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibrationFile {
    pub domain: CategoryFile,
    pub codomain: CategoryFile,
    pub objects: BTreeMap<String, String>,
    pub morphisms: BTreeMap<String, String>,
}

pub struct LoadedFunctor {
    pub domain: LoadedCategory,
    pub codomain: LoadedCategory,
    pub functor: FunctorData,
}

impl FibrationFile {
    pub fn load(&self) -> Result<LoadedFunctor, InputError> {
        let domain = self.domain.load()?;
        let codomain = self.codomain.load()?;
        let (d, c) = (&domain.category, &codomain.category);
        let cobj = |l: &str| {
            c.object_by_label(l)
                .ok_or_else(|| CategoryError::UnknownObject(l.into()))
        };
        let mut object_map = Vec::with_capacity(d.num_objects());
        for o in d.objects() {
            let l = d.object_label(o);
            let img = self.objects.get(l).ok_or_else(|| InputError::Schema {
                key: format!("objects.{l}"),
                message: format!("object `{l}` has no image"),
            })?;
            object_map.push(cobj(img)?);
        }
        for l in self.objects.keys() {
            d.object_by_label(l)
                .ok_or_else(|| CategoryError::UnknownObject(l.clone()))?;
        }
        let mut morphism_map = Vec::with_capacity(d.num_morphisms());
        for m in d.morphism_ids() {
            let l = d.label(m);
            let img = match self.morphisms.get(l) {
                Some(t) => c
                    .morphism_by_label(t)
                    .ok_or_else(|| CategoryError::UnknownMorphism(t.clone()))?,
                None if d.is_identity(m) => c.identity(object_map[d.source(m).0]),
                None => {
                    return Err(InputError::Schema {
                        key: format!("morphisms.{l}"),
                        message: format!("morphism `{l}` has no image"),
                    })
                }
            };
            morphism_map.push(img);
        }
        for l in self.morphisms.keys() {
            d.morphism_by_label(l)
                .ok_or_else(|| CategoryError::UnknownMorphism(l.clone()))?;
        }
        Ok(LoadedFunctor {
            domain,
            codomain,
            functor: FunctorData {
                object_map,
                morphism_map,
            },
        })
    }

    /// Label maps for a functor, omitting identities sent to identities.
    pub fn from_functor(
        domain: CategoryFile,
        codomain: CategoryFile,
        d: &FiniteGradedCategory,
        c: &FiniteGradedCategory,
        f: &FunctorData,
    ) -> Self {
        FibrationFile {
            domain,
            codomain,
            objects: d
                .objects()
                .map(|o| {
                    (
                        d.object_label(o).to_string(),
                        c.object_label(f.object(o)).to_string(),
                    )
                })
                .collect(),
            morphisms: d
                .morphism_ids()
                .filter(|&m| !d.is_identity(m))
                .map(|m| (d.label(m).to_string(), c.label(f.apply(m)).to_string()))
                .collect(),
        }
    }
}

pub fn load_toric(path: &Path) -> Result<ToricCollectionSpec, InputError> {
    let spec: ToricCollectionSpec = read_document(path)?;
    spec.validate()?;
    Ok(spec)
}
