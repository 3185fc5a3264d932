//! JSON documents for structures, theory structures and staged models.
//!
//! A structure is `{"base": N, "relations": {name: {"arity": m, "tuples": [[..], ..]}}}`
//! with relations in signature order. A theory structure adds `"default": "order"`; its
//! relations are named `r1, r2, ...` and list only the deviations from the order default:
//! `tuples` holds the non-increasing tuples that hold, `absent` the increasing ones that fail.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sinvaut_core::construct::{is_increasing, HWeight, PaEntry, StagedModel, TheoryStructure};
use sinvaut_core::{BaseSet, PartialMap, Relation, Structure};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid document: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] sinvaut_core::Error),
}

pub type Result<T> = std::result::Result<T, FormatError>;

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(FormatError::Invalid(msg.into()))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationDoc {
    arity: usize,
    tuples: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    absent: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct StructureDoc {
    base: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    default: Option<String>,
    relations: Map<String, Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PaDoc {
    stage: usize,
    s: usize,
    pairs: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct StagedDoc {
    #[serde(flatten)]
    structure: StructureDoc,
    stages: Vec<usize>,
    h: Map<String, Value>,
    pi: Vec<[usize; 2]>,
    pa_log: Vec<PaDoc>,
    seed: u64,
    richness: usize,
    s: usize,
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn relation_to_json(r: &Relation) -> Value {
    serde_json::to_value(RelationDoc {
        arity: r.arity(),
        tuples: r.tuples().collect(),
        absent: Vec::new(),
    })
    .expect("plain data")
}

pub fn relation_from_json(base: BaseSet, value: &Value) -> Result<Relation> {
    let doc: RelationDoc = serde_json::from_value(value.clone())?;
    if !doc.absent.is_empty() {
        return invalid("`absent` is only allowed in order-default documents");
    }
    check_arities(doc.arity, &doc.tuples)?;
    Ok(Relation::from_tuples(base, doc.arity, &doc.tuples)?)
}

fn check_arities(arity: usize, tuples: &[Vec<usize>]) -> Result<()> {
    match tuples.iter().find(|t| t.len() != arity) {
        Some(t) => invalid(format!("tuple {t:?} does not have arity {arity}")),
        None => Ok(()),
    }
}

pub fn structure_to_json(s: &Structure) -> Value {
    let relations = s
        .names()
        .iter()
        .zip(s.relations())
        .map(|(n, r)| (n.clone(), relation_to_json(r)))
        .collect();
    serde_json::to_value(StructureDoc {
        base: s.base().size(),
        default: None,
        relations,
    })
    .expect("plain data")
}

/// Reads a plain structure; order-default documents are expanded up to their largest arity.
pub fn structure_from_json(value: &Value) -> Result<Structure> {
    let doc: StructureDoc = serde_json::from_value(value.clone())?;
    if doc.default.is_some() {
        let t = theory_from_doc(&doc)?;
        let top = doc
            .relations
            .values()
            .filter_map(|r| r.get("arity")?.as_u64())
            .max()
            .unwrap_or(0) as usize;
        return Ok(t.to_structure(top.max(t.max_exception_arity()))?);
    }
    let base = BaseSet::new(doc.base)?;
    let mut s = Structure::new(base);
    for (name, rel) in &doc.relations {
        s.push(name.clone(), relation_from_json(base, rel)?)?;
    }
    Ok(s)
}

pub fn theory_to_json(t: &TheoryStructure) -> Value {
    serde_json::to_value(theory_doc(t)).expect("plain data")
}

fn theory_doc(t: &TheoryStructure) -> StructureDoc {
    let mut by_arity: BTreeMap<usize, RelationDoc> = BTreeMap::new();
    for e in t.exceptions() {
        let doc = by_arity.entry(e.len()).or_insert_with(|| RelationDoc {
            arity: e.len(),
            tuples: vec![],
            absent: vec![],
        });
        if is_increasing(e) {
            doc.absent.push(e.clone());
        } else {
            doc.tuples.push(e.clone());
        }
    }
    let relations = by_arity
        .into_iter()
        .map(|(m, doc)| {
            (
                format!("r{m}"),
                serde_json::to_value(doc).expect("plain data"),
            )
        })
        .collect();
    StructureDoc {
        base: t.size(),
        default: Some("order".into()),
        relations,
    }
}

/// Reads an order-default document, or a plain structure over `r1, r2, ...` whose missing
/// arities follow the order default.
pub fn theory_from_json(value: &Value) -> Result<TheoryStructure> {
    let doc: StructureDoc = serde_json::from_value(value.clone())?;
    if doc.default.is_none() {
        return Ok(TheoryStructure::from_structure(&structure_from_json(
            value,
        )?)?);
    }
    theory_from_doc(&doc)
}

fn theory_from_doc(doc: &StructureDoc) -> Result<TheoryStructure> {
    if doc.default.as_deref() != Some("order") {
        return invalid(format!(
            "unknown default {:?}; only \"order\" is supported",
            doc.default
        ));
    }
    let mut exceptions = Vec::new();
    for (name, rel) in &doc.relations {
        let r: RelationDoc = serde_json::from_value(rel.clone())?;
        if name != &format!("r{}", r.arity) {
            return invalid(format!(
                "relation `{name}` of arity {} must be named r{}",
                r.arity, r.arity
            ));
        }
        check_arities(r.arity, &r.tuples)?;
        check_arities(r.arity, &r.absent)?;
        if let Some(t) = r.tuples.iter().find(|t| is_increasing(t)) {
            return invalid(format!(
                "{name}: increasing tuple {t:?} belongs to the default"
            ));
        }
        if let Some(t) = r.absent.iter().find(|t| !is_increasing(t)) {
            return invalid(format!(
                "{name}: non-increasing tuple {t:?} is absent by default"
            ));
        }
        exceptions.extend(r.tuples.into_iter().chain(r.absent));
    }
    Ok(TheoryStructure::from_exceptions(doc.base, exceptions)?)
}

fn pairs_of(map: &PartialMap) -> Vec<[usize; 2]> {
    map.pairs().map(|(a, b)| [a, b]).collect()
}

fn map_of(pairs: &[[usize; 2]]) -> Result<PartialMap> {
    Ok(PartialMap::from_pairs(pairs.iter().map(|&[a, b]| (a, b)))?)
}

pub fn weights_to_json(h: &HWeight) -> Value {
    Value::Object(
        h.iter()
            .map(|(a, w)| (a.to_string(), Value::from(w)))
            .collect(),
    )
}

pub fn weights_from_json(value: &Value) -> Result<HWeight> {
    let Some(obj) = value.as_object() else {
        return invalid("weights must be an object");
    };
    let mut h = HWeight::new();
    for (k, v) in obj {
        let a: usize = k
            .parse()
            .map_err(|_| FormatError::Invalid(format!("weight key `{k}` is not an element")))?;
        let Some(w) = v.as_u64() else {
            return invalid(format!("weight of {k} is not a natural number"));
        };
        h.insert(a, w as usize);
    }
    Ok(h)
}

pub fn staged_to_json(sm: &StagedModel) -> Value {
    let doc = StagedDoc {
        structure: theory_doc(sm.model()),
        stages: sm.stage_sizes().to_vec(),
        h: match weights_to_json(sm.h()) {
            Value::Object(m) => m,
            _ => unreachable!("weights are an object"),
        },
        pi: pairs_of(sm.pi()),
        pa_log: sm
            .pa_log()
            .iter()
            .map(|e| PaDoc {
                stage: e.stage,
                s: e.s,
                pairs: pairs_of(&e.map),
            })
            .collect(),
        seed: sm.seed(),
        richness: sm.richness(),
        s: sm.s(),
    };
    serde_json::to_value(doc).expect("plain data")
}

pub fn staged_from_json(value: &Value) -> Result<StagedModel> {
    let doc: StagedDoc = serde_json::from_value(value.clone())?;
    let model = theory_from_doc(&doc.structure)?;
    let h = weights_from_json(&Value::Object(doc.h))?;
    let pa_log = doc
        .pa_log
        .iter()
        .map(|p| {
            Ok(PaEntry {
                stage: p.stage,
                s: p.s,
                map: map_of(&p.pairs)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StagedModel::from_parts(
        model,
        doc.stages,
        h,
        map_of(&doc.pi)?,
        pa_log,
        doc.seed,
        doc.richness,
        doc.s,
    )?)
}

/// True iff the document carries the staged-model fields.
pub fn is_staged(value: &Value) -> bool {
    value.get("stages").is_some() && value.get("h").is_some()
}
