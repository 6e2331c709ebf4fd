//! One function per subcommand, each producing a JSON report.

use std::path::Path;

use koszul_core::category::{truncate_to_length, validate as check_axioms, FiniteGradedCategory};
use koszul_core::fixtures::emit_fixtures;
use koszul_core::homology::Field;
use koszul_core::io::{
    load_toric, read_document, read_tagged, CategoryFile, FibrationFile, InputError, LoadedCategory,
    RelationFile,
};
use koszul_core::koszul::{
    ext_simples, generated_in_degree_one, is_koszul_with_limit, quadratic_status, CheckedUpTo, ExtQuery,
};
use koszul_core::poset::is_locally_cm;
use koszul_core::rs::{
    is_almost_discrete_fibration, is_discrete_fibration, is_isomorphism, quotient_comparison,
    reduced_incidence_algebra, relation_from_fibration, rs_quotient_indexed, verify_rs_axioms,
};
use koszul_core::toric::toric_report;
use serde_json::{json, Map, Value};

use crate::{Common, Failure, Output};

type Report = Result<Value, Failure>;

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn field(o: &Common) -> Result<Field, Failure> {
    Field::from_characteristic(o.characteristic).map_err(input)
}

/// Adds `version`, `field` and `checked_up_to`.
fn finish(mut v: Value, k: Option<Field>, checked: CheckedUpTo) -> Value {
    let m = v.as_object_mut().expect("reports are objects");
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("checked_up_to".into(), json!(checked));
    if let Some(k) = k {
        m.insert("field".into(), json!(k.to_string()));
    }
    v
}

fn load(o: &Common) -> Result<LoadedCategory, Failure> {
    Ok(read_document::<CategoryFile>(&o.input)?.load()?)
}

/// Loaded, axiom-checked and cut to `--max-length`.
fn category(o: &Common) -> Result<FiniteGradedCategory, Failure> {
    let cat = load(o)?.category;
    let r = check_axioms(&cat);
    if let Some(v) = r.violations.first() {
        let labels: Vec<&str> = v.witness.iter().map(|&m| cat.label(m)).collect();
        return Err(Failure::Input(format!(
            "not a graded category: {:?} at {}",
            v.kind,
            labels.join(", ")
        )));
    }
    Ok(match o.max_length {
        Some(b) => truncate_to_length(&cat, b),
        None => cat,
    })
}

pub fn validate(o: &Common) -> Report {
    let cat = load(o)?.category;
    let r = check_axioms(&cat);
    let violations: Vec<Value> = r
        .violations
        .iter()
        .take(o.witness_limit)
        .map(|v| json!({"kind": v.kind, "witness": v.witness.iter().map(|&m| cat.label(m)).collect::<Vec<_>>()}))
        .collect();
    Ok(finish(
        json!({
            "valid": r.is_valid(),
            "objects": cat.num_objects(),
            "morphisms": cat.num_morphisms(),
            "violations": violations,
            "total_violations": r.violations.len(),
        }),
        None,
        CheckedUpTo::of(&cat),
    ))
}

fn dims_json(d: &std::collections::BTreeMap<i64, usize>) -> Value {
    Value::Object(d.iter().map(|(i, n)| (i.to_string(), json!(n))).collect())
}

pub fn ext(o: &Common, from: &str, to: &str, degree: Option<u32>) -> Report {
    let k = field(o)?;
    let cat = category(o)?;
    let obj = |l: &str| {
        cat.object_by_label(l)
            .ok_or_else(|| Failure::Input(format!("unknown object `{l}`")))
    };
    let (w, v) = (obj(from)?, obj(to)?);
    let checked = CheckedUpTo::of(&cat);
    let query = |n| ext_simples(&cat, ExtQuery { w, v, n }, k).map_err(input);
    let mut out = json!({"from": from, "to": to});
    match degree {
        Some(n) => {
            out["degree"] = json!(n);
            out["ext"] = dims_json(&query(n)?);
        }
        None => {
            let mut by = Map::new();
            for n in 0..=cat.max_length() {
                let d = query(n)?;
                if !d.is_empty() {
                    by.insert(n.to_string(), dims_json(&d));
                }
            }
            out["ext_by_degree"] = Value::Object(by);
        }
    }
    Ok(finish(out, Some(k), checked))
}

pub fn koszul(o: &Common) -> Report {
    let k = field(o)?;
    let cat = category(o)?;
    let v = is_koszul_with_limit(&cat, k, o.witness_limit);
    let out = json!({
        "koszul": v.koszul,
        "failing_morphisms": v.failing_morphisms,
        "witnesses": v.witnesses.iter().map(|w| json!({
            "morphism": w.label,
            "length": w.length,
            "degree": w.degree,
            "dimension": w.dimension,
        })).collect::<Vec<_>>(),
    });
    Ok(finish(out, Some(k), v.checked_up_to))
}

pub fn quadratic(o: &Common) -> Report {
    let k = field(o)?;
    let cat = category(o)?;
    let status = quadratic_status(&cat, k);
    let mut status = serde_json::to_value(&status).expect("plain data");
    if let Some(m) = status.as_object_mut() {
        m.remove("witness");
    }
    let out = json!({
        "quadratic": status,
        "generated_in_degree_one": generated_in_degree_one(&cat).generated_in_degree_one,
    });
    Ok(finish(out, Some(k), CheckedUpTo::of(&cat)))
}

pub fn cm(o: &Common) -> Report {
    let k = field(o)?;
    let (p, _) = load(o)?
        .poset
        .ok_or_else(|| Failure::Input("`cm` needs a poset input (kind = \"poset\")".into()))?;
    let r = is_locally_cm(&p, k);
    let out = json!({
        "elements": p.len(),
        "locally_cohen_macaulay": r.locally_cohen_macaulay,
        "witness": r.witness,
    });
    Ok(finish(out, Some(k), CheckedUpTo::Complete))
}

fn relation(
    path: &Path,
) -> Result<(koszul_core::poset::FinitePoset, koszul_core::rs::IntervalRelation), Failure> {
    Ok(read_tagged::<RelationFile>(path, "rs-relation")?.load()?)
}

fn truncated(mut v: Value, limit: usize) -> Value {
    if let Value::Array(xs) = &mut v {
        xs.truncate(limit);
    }
    v
}

pub fn rs_verify(o: &Common) -> Report {
    let (p, rel) = relation(&o.input)?;
    let r = verify_rs_axioms(&p, &rel);
    let out = json!({
        "passes": r.passes(),
        "classes": rel.num_classes(),
        "a1": truncated(json!(r.a1), o.witness_limit),
        "a2": truncated(json!(r.a2), o.witness_limit),
        "a4": truncated(json!(r.a4), o.witness_limit),
        "tau_order_preserving": r.tau_order_preserving,
        "tau_violations": truncated(json!(r.tau_violations), o.witness_limit),
    });
    Ok(finish(out, None, CheckedUpTo::Complete))
}

pub fn rs_quotient(o: &Common) -> Report {
    let k = field(o)?;
    let (p, rel) = relation(&o.input)?;
    let q = rs_quotient_indexed(&p, &rel).map_err(input)?;
    let alg = reduced_incidence_algebra(&p, &rel).map_err(input)?;
    let cat = &q.category;
    let out = json!({
        "objects": cat.num_objects(),
        "morphisms": cat.num_morphisms(),
        "classes": rel.num_classes(),
        "object_labels": cat.object_labels(),
        "morphism_labels": cat.morphisms().iter().map(|m| &m.label).collect::<Vec<_>>(),
        "op_isomorphic": alg.op_isomorphic,
        "koszul": is_koszul_with_limit(cat, k, o.witness_limit).koszul,
    });
    let out = finish(out, Some(k), CheckedUpTo::Complete);
    if alg.op_isomorphic == Some(false) {
        return Err(Failure::Internal(
            "quotient algebra is not the opposite of the reduced incidence algebra".into(),
            Some(out),
        ));
    }
    Ok(out)
}

pub fn fibration(o: &Common) -> Report {
    let loaded = read_tagged::<FibrationFile>(&o.input, "fibration")?.load()?;
    let (d, c, f) = (
        &loaded.domain.category,
        &loaded.codomain.category,
        &loaded.functor,
    );
    let adf = is_almost_discrete_fibration(d, c, f).map_err(input)?;
    let df = is_discrete_fibration(d, c, f).map_err(input)?;
    let mut out = json!({
        "almost_discrete": adf.almost_discrete,
        "witness": adf.witness,
        "discrete": df.discrete,
        "discrete_witness": df.witness,
        "induced_relation": null,
        "quotient_isomorphic": null,
    });
    if let (Some((p, pc)), true) = (&loaded.domain.poset, adf.almost_discrete) {
        if let Ok(rel) = relation_from_fibration(p, pc, c, f) {
            let r = verify_rs_axioms(p, &rel);
            out["induced_relation"] = json!({"passes": r.passes(), "classes": rel.num_classes()});
            if r.passes() {
                let q = rs_quotient_indexed(p, &rel).map_err(|e| Failure::Internal(e.to_string(), None))?;
                let g = quotient_comparison(p, pc, &q, &rel, f);
                out["quotient_isomorphic"] = json!(is_isomorphism(&q.category, c, &g));
            }
        }
    }
    Ok(finish(out, None, CheckedUpTo::of(d)))
}

pub fn toric(o: &Common) -> Report {
    let k = field(o)?;
    let spec = load_toric(&o.input)?;
    let r = toric_report(&spec, k).map_err(input)?;
    let out = serde_json::to_value(&r).expect("plain data");
    Ok(finish(out, None, CheckedUpTo::Complete))
}

pub fn emit(dir: &Path) -> Report {
    let written = emit_fixtures(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    let names: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
    Ok(json!({"written": names, "version": env!("CARGO_PKG_VERSION")}))
}

pub fn render(v: &Value, output: Output) -> String {
    match output {
        Output::Json => serde_json::to_string_pretty(v).expect("plain data"),
        Output::Table => {
            let mut rows = Vec::new();
            flatten("", v, &mut rows);
            let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
            rows.iter()
                .map(|(k, v)| format!("{k:width$}  {v}"))
                .collect::<Vec<_>>()
                .join("\n")
        }
    }
}

/// `a.b[2].c  value` rows; arrays of scalars stay on one row.
fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&join(k), x, rows);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, rows);
            }
        }
        Value::String(s) => rows.push((prefix.into(), s.clone())),
        _ => rows.push((prefix.into(), v.to_string())),
    }
}
