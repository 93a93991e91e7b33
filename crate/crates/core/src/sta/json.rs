//! JSON form of modal derivations, in the node schema of the stratified
//! system with system tag `STA`.

use std::sync::Arc;

use super::{check_sta, parse_sta_type_with, StaContext, StaDerivation, StaMeta, StaRule, StaType};
use crate::derivation::json::{field, ident, Document, MetaJson, NodeJson};
use crate::error::{Error, Result};
use crate::term::parse_term_with;

pub const SYSTEM: &str = "STA";

pub fn to_node(d: &StaDerivation) -> NodeJson {
    let mut meta = MetaJson::default();
    match &d.meta {
        StaMeta::Ax { var, ty } | StaMeta::W { var, ty } => {
            meta.var = Some(var.to_string());
            meta.ty = Some(ty.to_string());
        }
        StaMeta::LollI { var } => meta.var = Some(var.to_string()),
        StaMeta::M { domain, range } => {
            meta.domain = Some(domain.iter().map(|x| x.to_string()).collect());
            meta.range = Some(range.to_string());
        }
        StaMeta::ForallI { tyvar } => meta.tyvar = Some(tyvar.to_string()),
        StaMeta::ForallE { tyvar, inst } => {
            meta.tyvar = Some(tyvar.to_string());
            meta.inst = Some(inst.to_string());
        }
        StaMeta::LollE | StaMeta::Sp => {}
    }
    NodeJson {
        rule: d.rule().tag().into(),
        ctx: d.ctx.iter().map(|(x, t)| (x.to_string(), t.to_string())).collect(),
        term: d.subject.to_string(),
        ty: d.ty.to_string(),
        meta,
        premises: d.premises.iter().map(|p| to_node(p)).collect(),
    }
}

pub fn to_json_string(d: &StaDerivation) -> String {
    let doc = Document { system: SYSTEM.into(), derivation: to_node(d) };
    serde_json::to_string_pretty(&doc).expect("derivation serializes")
}

fn ty(s: &str) -> Result<StaType> {
    Ok(parse_sta_type_with(s, true)?)
}

pub fn from_node(n: &NodeJson) -> Result<StaDerivation> {
    let rule = StaRule::from_tag(&n.rule).ok_or_else(|| Error::Json(format!("unknown rule {:?}", n.rule)))?;
    let m = &n.meta;
    let meta = match rule {
        StaRule::Ax => StaMeta::Ax { var: ident(field(&m.var, "var")?), ty: ty(field(&m.ty, "type")?)? },
        StaRule::W => StaMeta::W { var: ident(field(&m.var, "var")?), ty: ty(field(&m.ty, "type")?)? },
        StaRule::LollI => StaMeta::LollI { var: ident(field(&m.var, "var")?) },
        StaRule::LollE => StaMeta::LollE,
        StaRule::ForallI => StaMeta::ForallI { tyvar: ident(field(&m.tyvar, "tyvar")?) },
        StaRule::ForallE => StaMeta::ForallE {
            tyvar: ident(field(&m.tyvar, "tyvar")?),
            inst: ty(field(&m.inst, "inst")?)?,
        },
        StaRule::M => StaMeta::M {
            domain: m
                .domain
                .as_ref()
                .ok_or_else(|| Error::Json("missing meta field \"domain\"".into()))?
                .iter()
                .map(|s| ident(s))
                .collect(),
            range: ident(field(&m.range, "range")?),
        },
        StaRule::Sp => StaMeta::Sp,
    };
    let mut ctx = StaContext::new();
    for (x, t) in &n.ctx {
        if ctx.insert(ident(x), ty(t)?).is_some() {
            return Err(Error::Json(format!("variable {x} bound twice in a context")));
        }
    }
    let premises = n.premises.iter().map(|p| from_node(p).map(Arc::new)).collect::<Result<_>>()?;
    Ok(StaDerivation { meta, ctx, subject: parse_term_with(&n.term, true)?, ty: ty(&n.ty)?, premises })
}

/// Parse, rebuild and check a document tagged `STA`.
pub fn load_str(s: &str) -> Result<StaDerivation> {
    let doc: Document = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
    if doc.system != SYSTEM {
        return Err(Error::Json(format!("expected system {SYSTEM}, found {}", doc.system)));
    }
    let d = from_node(&doc.derivation)?;
    check_sta(&d)?;
    Ok(d)
}
