//! Native instance format: a TOML document with `metadata`, `first_stage`
//! and an array of `scenarios`.
//!
//! ```toml
//! [metadata]
//! name = "tiny"
//!
//! [first_stage]
//! c = [1.0, 2.0]
//! lower = [0.0, 0.0]
//! upper = [1.0, 1.0]
//! kinds = ["binary", "binary"]
//!
//! [[first_stage.rows]]
//! coeffs = [1.0, 1.0]
//! relation = "<="
//! rhs = 1.0
//!
//! [[scenarios]]
//! probability = 1.0
//! q = [3.0]
//! w = [[1.0]]
//! t = [[1.0, 1.0]]
//! h = [1.0]
//! relations = [">="]
//! y_lower = [0.0]
//! y_upper = [5.0]
//! y_kinds = ["continuous"]
//! ```
//!
//! Infinite bounds are written `inf` / `-inf`. Floats are printed in their
//! shortest round-trip form, so writing and re-reading is exact.

use fwph_core::lp::{Bound, Constraint, Relation};
use fwph_core::milp::VarKind;
use fwph_core::model::{FirstStageData, ScenarioData, TwoStageProblem};
use serde::{Deserialize, Serialize};

use crate::error::{from_report, ParseError, ParseErrorKind};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_smip: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_ld: Option<f64>,
    /// Where the reference values come from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NativeInstance {
    pub problem: TwoStageProblem,
    pub metadata: Metadata,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Continuous,
    Integer,
    Binary,
}

impl From<VarKind> for Kind {
    fn from(k: VarKind) -> Self {
        match k {
            VarKind::Continuous => Kind::Continuous,
            VarKind::Integer => Kind::Integer,
            VarKind::Binary => Kind::Binary,
        }
    }
}

impl From<Kind> for VarKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Continuous => VarKind::Continuous,
            Kind::Integer => VarKind::Integer,
            Kind::Binary => VarKind::Binary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
enum Rel {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

impl From<Relation> for Rel {
    fn from(r: Relation) -> Self {
        match r {
            Relation::LessEq => Rel::Le,
            Relation::GreaterEq => Rel::Ge,
            Relation::Equal => Rel::Eq,
        }
    }
}

impl From<Rel> for Relation {
    fn from(r: Rel) -> Self {
        match r {
            Rel::Le => Relation::LessEq,
            Rel::Ge => Relation::GreaterEq,
            Rel::Eq => Relation::Equal,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowDoc {
    coeffs: Vec<f64>,
    relation: Rel,
    rhs: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FirstStageDoc {
    c: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    kinds: Vec<Kind>,
    #[serde(default)]
    rows: Vec<RowDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    probability: f64,
    q: Vec<f64>,
    w: Vec<Vec<f64>>,
    t: Vec<Vec<f64>>,
    h: Vec<f64>,
    relations: Vec<Rel>,
    y_lower: Vec<f64>,
    y_upper: Vec<f64>,
    y_kinds: Vec<Kind>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    metadata: Metadata,
    first_stage: FirstStageDoc,
    scenarios: Vec<ScenarioDoc>,
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Line of the `[first_stage]` header (`None`) or of the header of scenario
/// `s`, falling back to the top of the file.
fn section_line(text: &str, scenario: Option<usize>) -> (usize, usize) {
    let mut seen = 0;
    for (i, line) in text.lines().enumerate() {
        let l = line.trim();
        match scenario {
            None if l == "[first_stage]" => return (i + 1, 1),
            Some(s) if l == "[[scenarios]]" => {
                if seen == s {
                    return (i + 1, 1);
                }
                seen += 1;
            }
            _ => {}
        }
    }
    (1, 1)
}

fn bounds(lower: &[f64], upper: &[f64], what: &str) -> Result<Vec<Bound>, String> {
    if lower.len() != upper.len() {
        return Err(format!("{what}: {} lower bounds but {} upper bounds", lower.len(), upper.len()));
    }
    Ok(lower.iter().zip(upper).map(|(&l, &u)| Bound::new(l, u)).collect())
}

pub fn parse_native(text: &str) -> Result<NativeInstance, ParseError> {
    let doc: Doc = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| position(text, s.start));
        ParseError::new(ParseErrorKind::Syntax, line, column, e.message().trim().to_string())
    })?;
    let dim = |s: Option<usize>, msg: String| {
        let (line, column) = section_line(text, s);
        ParseError::new(ParseErrorKind::Dimension, line, column, msg)
    };
    let fs = doc.first_stage;
    let first = FirstStageData {
        bounds: bounds(&fs.lower, &fs.upper, "first_stage").map_err(|m| dim(None, m))?,
        c: fs.c,
        rows: fs.rows.into_iter().map(|r| Constraint::new(r.coeffs, r.relation.into(), r.rhs)).collect(),
        kinds: fs.kinds.into_iter().map(Into::into).collect(),
    };
    let mut scenarios = Vec::with_capacity(doc.scenarios.len());
    for (s, sc) in doc.scenarios.into_iter().enumerate() {
        scenarios.push(ScenarioData {
            y_bounds: bounds(&sc.y_lower, &sc.y_upper, "y").map_err(|m| dim(Some(s), m))?,
            probability: sc.probability,
            q: sc.q,
            w: sc.w,
            t: sc.t,
            h: sc.h,
            relations: sc.relations.into_iter().map(Into::into).collect(),
            y_kinds: sc.y_kinds.into_iter().map(Into::into).collect(),
        });
    }
    let problem = TwoStageProblem { first, scenarios };
    if let Some(e) = from_report(&problem.validate(), |s| section_line(text, s)) {
        return Err(e);
    }
    Ok(NativeInstance { problem, metadata: doc.metadata })
}

pub fn write_native(problem: &TwoStageProblem, metadata: &Metadata) -> String {
    let f = &problem.first;
    let doc = Doc {
        metadata: metadata.clone(),
        first_stage: FirstStageDoc {
            c: f.c.clone(),
            lower: f.bounds.iter().map(|b| b.lower).collect(),
            upper: f.bounds.iter().map(|b| b.upper).collect(),
            kinds: f.kinds.iter().map(|&k| k.into()).collect(),
            rows: f
                .rows
                .iter()
                .map(|r| RowDoc { coeffs: r.coeffs.clone(), relation: r.relation.into(), rhs: r.rhs })
                .collect(),
        },
        scenarios: problem
            .scenarios
            .iter()
            .map(|sc| ScenarioDoc {
                probability: sc.probability,
                q: sc.q.clone(),
                w: sc.w.clone(),
                t: sc.t.clone(),
                h: sc.h.clone(),
                relations: sc.relations.iter().map(|&r| r.into()).collect(),
                y_lower: sc.y_bounds.iter().map(|b| b.lower).collect(),
                y_upper: sc.y_bounds.iter().map(|b| b.upper).collect(),
                y_kinds: sc.y_kinds.iter().map(|&k| k.into()).collect(),
            })
            .collect(),
    };
    toml::to_string(&doc).expect("instance documents always serialize")
}
