//! JSON form of derivations. Loading re-parses every string and re-runs the
//! checker; nothing is trusted.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{check, Derivation, Judgment, Meta, Rule};
use crate::error::{Error, Result};
use crate::names::{self, Name};
use crate::term::parse_term_with;
use crate::types::{parse_type_with, Context, Type};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct MetaJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub var: Option<String>,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub ty: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tyvar: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inst: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodeJson {
    pub rule: String,
    pub ctx: Vec<(String, String)>,
    pub term: String,
    #[serde(rename = "type")]
    pub ty: String,
    #[serde(default)]
    pub meta: MetaJson,
    #[serde(default)]
    pub premises: Vec<NodeJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Document {
    pub system: String,
    pub derivation: NodeJson,
}

pub fn to_node(d: &Derivation) -> NodeJson {
    let mut meta = MetaJson::default();
    match &d.meta {
        Meta::Ax { var, ty } | Meta::W { var, ty } => {
            meta.var = Some(var.to_string());
            meta.ty = Some(ty.to_string());
        }
        Meta::LollI { var } => meta.var = Some(var.to_string()),
        Meta::M { domain, range } => {
            meta.domain = Some(domain.iter().map(|x| x.to_string()).collect());
            meta.range = Some(range.to_string());
        }
        Meta::ForallI { tyvar } => meta.tyvar = Some(tyvar.to_string()),
        Meta::ForallE { tyvar, inst } => {
            meta.tyvar = Some(tyvar.to_string());
            meta.inst = Some(inst.to_string());
        }
        Meta::LollE | Meta::St => {}
    }
    NodeJson {
        rule: d.rule().tag().into(),
        ctx: d.ctx().iter().map(|(x, t)| (x.to_string(), t.to_string())).collect(),
        term: d.subject().to_string(),
        ty: d.ty().to_string(),
        meta,
        premises: d.premises.iter().map(|p| to_node(p)).collect(),
    }
}

pub fn to_json_string(d: &Derivation) -> String {
    let doc = Document { system: "STR".into(), derivation: to_node(d) };
    serde_json::to_string_pretty(&doc).expect("derivation serializes")
}

pub(crate) fn field<'a>(v: &'a Option<String>, what: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| Error::Json(format!("missing meta field {what:?}")))
}

pub(crate) fn ident(s: &str) -> Name {
    names::reserve(s);
    names::name(s)
}

fn ty(s: &str) -> Result<Type> {
    Ok(parse_type_with(s, true)?)
}

/// Rebuild the tree exactly as stored, without checking.
pub fn from_node(n: &NodeJson) -> Result<Derivation> {
    let rule = Rule::from_tag(&n.rule).ok_or_else(|| Error::Json(format!("unknown rule {:?}", n.rule)))?;
    let m = &n.meta;
    let meta = match rule {
        Rule::Ax => Meta::Ax { var: ident(field(&m.var, "var")?), ty: ty(field(&m.ty, "type")?)? },
        Rule::W => Meta::W { var: ident(field(&m.var, "var")?), ty: ty(field(&m.ty, "type")?)? },
        Rule::LollI => Meta::LollI { var: ident(field(&m.var, "var")?) },
        Rule::LollE => Meta::LollE,
        Rule::M => Meta::M {
            domain: m
                .domain
                .as_ref()
                .ok_or_else(|| Error::Json("missing meta field \"domain\"".into()))?
                .iter()
                .map(|s| ident(s))
                .collect(),
            range: ident(field(&m.range, "range")?),
        },
        Rule::St => Meta::St,
        Rule::ForallI => Meta::ForallI { tyvar: ident(field(&m.tyvar, "tyvar")?) },
        Rule::ForallE => Meta::ForallE {
            tyvar: ident(field(&m.tyvar, "tyvar")?),
            inst: ty(field(&m.inst, "inst")?)?,
        },
    };
    let mut ctx = Context::new();
    for (x, t) in &n.ctx {
        if ctx.insert(ident(x), ty(t)?).is_some() {
            return Err(Error::Json(format!("variable {x} bound twice in a context")));
        }
    }
    let concl = Judgment { ctx, subject: parse_term_with(&n.term, true)?, ty: ty(&n.ty)? };
    let premises = n.premises.iter().map(|p| from_node(p).map(Arc::new)).collect::<Result<_>>()?;
    Ok(Derivation { meta, concl, premises })
}

/// Parse, rebuild and check.
pub fn load_str(s: &str) -> Result<Derivation> {
    let d = read_str(s)?;
    check(&d)?;
    Ok(d)
}

/// Parse and rebuild without checking, for diagnostics on broken files.
pub fn read_str(s: &str) -> Result<Derivation> {
    let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
    let node: NodeJson = match v.get("system") {
        Some(sys) => {
            if sys != "STR" {
                return Err(Error::Json(format!("expected system STR, found {sys}")));
            }
            let doc: Document = serde_json::from_value(v).map_err(|e| Error::Json(e.to_string()))?;
            doc.derivation
        }
        None => serde_json::from_value(v).map_err(|e| Error::Json(e.to_string()))?,
    };
    from_node(&node)
}
