use std::collections::BTreeMap;
use std::path::Path;

use delannoy_core::algcls::{
    e_idempotents, etale_subalgebras, gamma, gamma_is_field, is_algebra_hom, is_etale, restriction_ideals,
    schwartz_algebra, subetale_example, AlgebraObject,
};
use delannoy_core::karoubi::{
    decompose, tensor_decompose, verify_restriction_rule, KObject, LabelTuple, Registry, SimpleLabel,
    AMALGAM_ORDER_VERSION,
};
use delannoy_core::ordcomb::{equivalence_relations, quotient, GSet, OrbitShape};
use delannoy_core::permcat::hom_dim;
use delannoy_core::scalar::render;
use delannoy_core::{Cat, Error, Q};
use serde_json::{json, Value};

use crate::cache;
use crate::render::{summary, table, Output};
use crate::CliError;

/// Largest line handled by `homdim`; beyond it the count leaves `u128`.
const MAX_HOMDIM: usize = 40;

fn label(word: &str) -> Result<SimpleLabel, CliError> {
    SimpleLabel::new(word).map_err(|_| CliError::Usage(format!("`{word}` is not a word over {{a, b}}")))
}

/// `1`, `C(pt)`, `C(R)`, `C(R^n)` or `C(R^a⊠R^b⊠…)`.
pub fn parse_object(text: &str) -> Result<GSet, CliError> {
    let bad = || CliError::Usage(format!("cannot read object `{text}`; expected C(R^n), C(R^a⊠R^b) or 1"));
    let t = text.trim();
    if t == "1" || t == "C(pt)" {
        return Ok(GSet::point(1));
    }
    let inner = t.strip_prefix("C(").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
    let arms = inner
        .split('⊠')
        .map(|f| match f.trim() {
            "R" => Ok(1),
            "pt" => Ok(0),
            f => f.strip_prefix("R^").and_then(|n| n.parse::<usize>().ok()).ok_or_else(bad),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GSet::transitive(OrbitShape::new(arms)))
}

fn parts_json(parts: &BTreeMap<LabelTuple, usize>) -> Value {
    Value::Array(parts.iter().map(|(l, k)| json!({"label": l.to_string(), "multiplicity": k})).collect())
}

fn parts_table(parts: &BTreeMap<LabelTuple, usize>) -> String {
    let rows: Vec<Vec<String>> = parts.iter().map(|(l, k)| vec![l.to_string(), k.to_string()]).collect();
    table(&["label", "multiplicity"], &rows)
}

pub fn homdim(n: usize, m: usize) -> Result<Output, CliError> {
    if n.max(m) > MAX_HOMDIM {
        return Err(Error::Cap(format!("homdim is limited to n, m ≤ {MAX_HOMDIM}")).into());
    }
    let d = hom_dim(&GSet::line(n), &GSet::line(m));
    Ok(Output::new(json!({"n": n, "m": m, "hom_dim": d}), format!("{d}\n")))
}

pub fn decompose_object(cat: &Cat, cache: Option<&Path>, text: &str) -> Result<Output, CliError> {
    let x = parse_object(text)?;
    let reg = cache::obtain(cat, cache, x.max_arms().into_iter().max().unwrap_or(0))?;
    let d = decompose(cat, &reg, &KObject::whole(cat, &x)?)?;
    let json = json!({"object": text.trim(), "set": x.to_string(), "end_dim": d.end_dim, "parts": parts_json(&d.parts)});
    let t = summary(&[("object", text.trim().into()), ("end_dim", d.end_dim.to_string())], Some(parts_table(&d.parts)));
    Ok(Output::new(json, t))
}

pub fn decompose_label(cat: &Cat, cache: Option<&Path>, word: &str) -> Result<Output, CliError> {
    let l = label(word)?;
    let reg = cache::obtain(cat, cache, l.len())?;
    let obj = reg.object(&l)?;
    let d = decompose(cat, &reg, &obj)?;
    let dim = obj.dim(cat)?;
    let json = json!({"label": l.to_string(), "dim": dim.to_string(), "end_dim": d.end_dim, "parts": parts_json(&d.parts)});
    let t = summary(&[("label", l.to_string()), ("dim", dim.to_string())], Some(parts_table(&d.parts)));
    Ok(Output::new(json, t).falsified_if(d.parts.len() != 1))
}

pub fn restrict(cat: &Cat, cache: Option<&Path>, word: &str) -> Result<Output, CliError> {
    let l = label(word)?;
    let reg = cache::obtain(cat, cache, l.len())?;
    let r = verify_restriction_rule(cat, &reg, &l)?;
    let json = json!({
        "label": l.to_string(),
        "holds": r.holds,
        "observed": parts_json(&r.observed),
        "expected": parts_json(&r.expected),
    });
    let t = summary(&[("label", l.to_string()), ("holds", r.holds.to_string())], Some(parts_table(&r.observed)));
    Ok(Output::new(json, t).falsified_if(!r.holds))
}

pub fn tensor(cat: &Cat, cache: Option<&Path>, left: &str, right: &str) -> Result<Output, CliError> {
    let (l, r) = (label(left)?, label(right)?);
    let reg = cache::obtain(cat, cache, l.len() + r.len())?;
    let d = tensor_decompose(cat, &reg, &l, &r)?;
    let json = json!({"left": l.to_string(), "right": r.to_string(), "parts": parts_json(&d.parts)});
    let t = summary(&[("product", format!("L_{l} ⊗ L_{r}"))], Some(parts_table(&d.parts)));
    Ok(Output::new(json, t))
}

pub fn eidem(cat: &Cat, n: usize) -> Result<Output, CliError> {
    let x = GSet::line(n);
    let found = e_idempotents::<Q>(cat, &x)?;
    let relations = equivalence_relations(cat, &x)?;
    let bijective = found.len() == relations.len() && found.iter().zip(&relations).all(|(e, r)| e.relation == *r);
    let mut items = Vec::new();
    let mut rows = Vec::new();
    for e in &found {
        let (q, map) = quotient(cat, &x, &e.relation)?;
        let kept = &map.orbits[0].injections[0];
        items.push(json!({
            "relation_orbits": e.relation.orbits,
            "quotient": q.to_string(),
            "kept_coordinates": kept,
            "support": e.element.support(),
        }));
        rows.push(vec![q.to_string(), format!("{kept:?}"), e.relation.orbits.len().to_string()]);
    }
    let json = json!({
        "n": n,
        "count": found.len(),
        "equivalence_relations": relations.len(),
        "bijective": bijective,
        "idempotents": items,
    });
    let t = summary(
        &[("count", found.len().to_string()), ("equivalence relations", relations.len().to_string())],
        Some(table(&["quotient", "kept", "relation orbits"], &rows)),
    );
    Ok(Output::new(json, t).falsified_if(!bijective))
}

pub fn subalgebras(cat: &Cat, n: usize) -> Result<Output, CliError> {
    let x = GSet::line(n);
    let whole = schwartz_algebra::<Q>(cat, &x)?;
    let mut items = Vec::new();
    let mut rows = Vec::new();
    let mut all_homs = true;
    for s in etale_subalgebras::<Q>(cat, &x)? {
        let sub = schwartz_algebra::<Q>(cat, &s.quotient)?;
        let hom = is_algebra_hom(cat, &sub, &whole, &s.embedding)?;
        all_homs &= hom;
        let kept = &s.map.orbits[0].injections[0];
        items.push(json!({"quotient": s.quotient.to_string(), "kept_coordinates": kept, "algebra_hom": hom}));
        rows.push(vec![s.quotient.to_string(), format!("{kept:?}"), hom.to_string()]);
    }
    let json = json!({"n": n, "count": items.len(), "subalgebras": items});
    let t = summary(&[("count", rows.len().to_string())], Some(table(&["quotient", "kept", "algebra hom"], &rows)));
    Ok(Output::new(json, t).falsified_if(!all_homs))
}

pub fn etale_check(cat: &Cat, cache: Option<&Path>, builtin: &str) -> Result<Output, CliError> {
    let (name, a): (String, AlgebraObject<Q>) = match builtin.trim() {
        "subetale" => {
            let reg = cache::obtain(cat, cache, 1)?;
            ("L_a ⊕ 1 ⊂ C(R)".into(), subetale_example(cat, &reg)?)
        }
        b => {
            let n = b
                .strip_prefix("schwartz:")
                .and_then(|n| n.parse::<usize>().ok())
                .ok_or_else(|| CliError::Usage(format!("unknown builtin `{b}`; use schwartz:N or subetale")))?;
            (format!("C(R^{n})"), schwartz_algebra(cat, &GSet::line(n))?)
        }
    };
    let r = is_etale(cat, &a)?;
    let g = gamma(cat, &a)?;
    let field = match gamma_is_field(&g) {
        Ok(f) => json!(f),
        Err(Error::Undetermined(_)) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let witness = r.witness.as_ref().map(|w| json!({"support": w.support(), "coeffs": render(&w.coeffs)}));
    let json = json!({
        "algebra": name,
        "etale": r.etale,
        "unit_trace": r.unit_trace.to_string(),
        "end_dim": r.end_dim,
        "radical_dim": r.radical_dim,
        "witness": witness,
        "invariants_dim": g.dim(),
        "invariants_field": field,
    });
    let t = summary(
        &[
            ("algebra", name.clone()),
            ("etale", r.etale.to_string()),
            ("unit_trace", r.unit_trace.to_string()),
            ("radical_dim", format!("{} of {}", r.radical_dim, r.end_dim)),
            ("invariants_dim", g.dim().to_string()),
        ],
        None,
    );
    Ok(Output::new(json, t))
}

pub fn resideals(cat: &Cat, cache: Option<&Path>, n: usize) -> Result<Output, CliError> {
    let reg = cache::obtain(cat, cache, n)?;
    let r = restriction_ideals(cat, &reg, n)?;
    let orbits: Vec<String> = r.orbits.iter().map(ToString::to_string).collect();
    let json = json!({
        "n": n,
        "orbits": orbits,
        "right_orbits": r.right_orbits,
        "left_orbits": r.left_orbits,
        "product_zero": r.product_zero,
        "sum_proper": r.sum_proper,
        "case_a": r.is_case_a(),
        "quotient": r.quotient.to_string(),
    });
    let rows: Vec<Vec<String>> = orbits
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let side = match (r.right_orbits.contains(&i), r.left_orbits.contains(&i)) {
                (true, true) => "both",
                (true, false) => "right",
                (false, true) => "left",
                (false, false) => "",
            };
            vec![i.to_string(), o.clone(), side.to_string()]
        })
        .collect();
    let t = summary(
        &[
            ("case_a", r.is_case_a().to_string()),
            ("product_zero", r.product_zero.to_string()),
            ("quotient", r.quotient.to_string()),
        ],
        Some(table(&["orbit", "shape", "ideal"], &rows)),
    );
    Ok(Output::new(json, t))
}

pub fn registry(cat: &Cat, cache: Option<&Path>, depth: usize) -> Result<Output, CliError> {
    // an incompatible or unreadable cache is replaced, never extended
    let existing = cache.filter(|p| p.exists()).and_then(|p| cache::load(cat, p).ok());
    let mut reg = existing.unwrap_or(Registry::trivial(cat)?);
    reg.extend_to(cat, depth)?;
    if let Some(p) = cache {
        cache::store(&reg, p)?;
    }
    let mut items = Vec::new();
    let mut rows = Vec::new();
    for l in reg.labels().filter(|l| l.len() <= depth) {
        let e = reg.idempotent(l)?;
        let dim = reg.object(l)?.dim(cat)?;
        items.push(json!({"label": l.to_string(), "ambient": e.source.to_string(), "dim": dim.to_string()}));
        rows.push(vec![l.to_string(), e.source.to_string(), dim.to_string()]);
    }
    let json = json!({
        "depth": depth,
        "amalgam_order_version": AMALGAM_ORDER_VERSION,
        "cached": cache.is_some(),
        "simples": items,
    });
    let t = summary(&[("depth", depth.to_string())], Some(table(&["label", "ambient", "dim"], &rows)));
    Ok(Output::new(json, t))
}
