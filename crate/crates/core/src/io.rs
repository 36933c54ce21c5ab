//! Problem files and resolution trees as JSON documents. Every integer
//! and rational is written as a decimal string ("-3", "3/2") so files
//! stay exact regardless of the reader; parsers also accept plain JSON
//! numbers. Coordinate indices in files are 1-based.

use serde_json::{json, Value};
use thiserror::Error;

use crate::binomial::{self, Binomial, BinomialIdeal};
use crate::chart::{Chart, EmbeddingState, LineageStep};
use crate::driver::{
    Certificate, LeafCheck, ResolutionNode, ResolutionTree, ResolveReport, ResolveStatus,
    StepRecord,
};
use crate::invariant::{Entry, GammaVal, InvariantValue};
use crate::lattice::{Boundary, Lattice};
use crate::Rat;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error("no generators")]
    NoGenerators,
    #[error(
        "lattice is not saturated: {multiple} * {witness:?} lies in it but the vector does not; \
         set \"auto_saturate\": true to take the saturation"
    )]
    NotSaturated { witness: Vec<i64>, multiple: i64 },
}

fn field_err(field: &str, message: impl Into<String>) -> IoError {
    IoError::Field {
        field: field.to_string(),
        message: message.into(),
    }
}

/// A parsed problem file: the ambient chart data and the variety,
/// presented either by binomial generators or by lattice rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemFile {
    pub dim: usize,
    /// Coordinates that are units in the chart (complement of E), 0-based.
    pub invertible: Vec<usize>,
    pub names: Option<Vec<String>>,
    pub gens: ProblemGens,
    pub auto_saturate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProblemGens {
    Binomials(Vec<(Vec<i64>, Vec<i64>)>),
    Lattice(Vec<Vec<i64>>),
}

fn parse_i64(v: &Value, field: &str) -> Result<i64, IoError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .ok_or_else(|| field_err(field, "integer out of range")),
        Value::String(s) => s
            .trim()
            .parse::<i64>()
            .map_err(|_| field_err(field, format!("not a decimal integer: {s:?}"))),
        _ => Err(field_err(field, "expected an integer or a decimal string")),
    }
}

fn parse_usize(v: &Value, field: &str) -> Result<usize, IoError> {
    let n = parse_i64(v, field)?;
    usize::try_from(n).map_err(|_| field_err(field, "expected a nonnegative integer"))
}

fn parse_row(v: &Value, field: &str, dim: usize) -> Result<Vec<i64>, IoError> {
    let items = v
        .as_array()
        .ok_or_else(|| field_err(field, "expected an array of integers"))?;
    if items.len() != dim {
        return Err(field_err(
            field,
            format!("expected {dim} entries, found {}", items.len()),
        ));
    }
    items.iter().map(|x| parse_i64(x, field)).collect()
}

/// Parse a 1-based coordinate index list into a 0-based boundary set.
fn parse_coords(v: &Value, field: &str, dim: usize) -> Result<Vec<usize>, IoError> {
    let items = v
        .as_array()
        .ok_or_else(|| field_err(field, "expected an array of coordinate indices"))?;
    let mut out = Vec::new();
    for x in items {
        let j = parse_usize(x, field)?;
        if j == 0 || j > dim {
            return Err(field_err(
                field,
                format!("coordinate index {j} out of range 1..={dim}"),
            ));
        }
        out.push(j - 1);
    }
    Ok(out)
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, IoError> {
    let root: Value = serde_json::from_str(text)?;
    let obj = root
        .as_object()
        .ok_or_else(|| field_err("(document)", "expected a JSON object"))?;
    let dim = parse_usize(
        obj.get("dim")
            .ok_or_else(|| field_err("dim", "missing required field"))?,
        "dim",
    )?;
    if dim == 0 {
        return Err(field_err("dim", "ambient dimension must be positive"));
    }
    let invertible = match obj.get("invertible") {
        Some(v) => parse_coords(v, "invertible", dim)?,
        None => Vec::new(),
    };
    let names = match obj.get("names") {
        Some(v) => {
            let items = v
                .as_array()
                .ok_or_else(|| field_err("names", "expected an array of strings"))?;
            if items.len() != dim {
                return Err(field_err(
                    "names",
                    format!("expected {dim} names, found {}", items.len()),
                ));
            }
            Some(
                items
                    .iter()
                    .map(|x| {
                        x.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| field_err("names", "expected a string"))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            )
        }
        None => None,
    };
    let gens = match (obj.get("binomials"), obj.get("lattice")) {
        (Some(_), Some(_)) => {
            return Err(field_err(
                "binomials",
                "give either binomials or lattice rows, not both",
            ))
        }
        (Some(v), None) => {
            let items = v
                .as_array()
                .ok_or_else(|| field_err("binomials", "expected an array"))?;
            if items.is_empty() {
                return Err(IoError::NoGenerators);
            }
            let mut rows = Vec::new();
            for (k, item) in items.iter().enumerate() {
                let field = format!("binomials[{k}]");
                let pair = item
                    .as_object()
                    .ok_or_else(|| field_err(&field, "expected an object with plus and minus"))?;
                let plus = parse_row(
                    pair.get("plus")
                        .ok_or_else(|| field_err(&field, "missing plus"))?,
                    &field,
                    dim,
                )?;
                let minus = parse_row(
                    pair.get("minus")
                        .ok_or_else(|| field_err(&field, "missing minus"))?,
                    &field,
                    dim,
                )?;
                rows.push((plus, minus));
            }
            ProblemGens::Binomials(rows)
        }
        (None, Some(v)) => {
            let items = v
                .as_array()
                .ok_or_else(|| field_err("lattice", "expected an array of rows"))?;
            if items.is_empty() {
                return Err(IoError::NoGenerators);
            }
            let rows = items
                .iter()
                .enumerate()
                .map(|(k, x)| parse_row(x, &format!("lattice[{k}]"), dim))
                .collect::<Result<Vec<_>, _>>()?;
            ProblemGens::Lattice(rows)
        }
        (None, None) => return Err(IoError::NoGenerators),
    };
    let auto_saturate = match obj.get("auto_saturate") {
        Some(Value::Bool(b)) => *b,
        Some(_) => return Err(field_err("auto_saturate", "expected a boolean")),
        None => false,
    };
    Ok(ProblemFile {
        dim,
        invertible,
        names,
        gens,
        auto_saturate,
    })
}

impl ProblemFile {
    /// The boundary set E: every coordinate that is not invertible.
    pub fn boundary(&self) -> Boundary {
        (0..self.dim)
            .filter(|j| !self.invertible.contains(j))
            .collect()
    }

    /// Build the root embedding. Binomial generators must be nonnegative
    /// on E; lattice rows must span a saturated lattice unless
    /// auto-saturation was requested.
    pub fn to_state(&self) -> Result<EmbeddingState, IoError> {
        let e = self.boundary();
        let chart = Chart::root(self.dim, e.clone());
        match &self.gens {
            ProblemGens::Binomials(rows) => {
                let mut gens = Vec::new();
                for (k, (plus, minus)) in rows.iter().enumerate() {
                    let field = format!("binomials[{k}]");
                    for &j in &e {
                        if plus[j] < 0 || minus[j] < 0 {
                            return Err(field_err(
                                &field,
                                format!("negative exponent on boundary coordinate {}", j + 1),
                            ));
                        }
                    }
                    let g = Binomial::new(plus.clone(), minus.clone())
                        .ok_or_else(|| field_err(&field, "the two sides are equal"))?;
                    gens.push(g);
                }
                let ideal = BinomialIdeal::new(self.dim, gens);
                if self.auto_saturate {
                    Ok(EmbeddingState::new_saturating(chart, ideal))
                } else {
                    EmbeddingState::new(chart, ideal).map_err(|err| match err {
                        crate::lattice::LatticeError::NotSaturated { witness, multiple } => {
                            IoError::NotSaturated { witness, multiple }
                        }
                        other => field_err("binomials", other.to_string()),
                    })
                }
            }
            ProblemGens::Lattice(rows) => {
                let lattice = Lattice::from_rows(self.dim, rows);
                let lattice = if self.auto_saturate {
                    lattice.saturate()
                } else if let Some((witness, multiple)) = lattice.torsion_witness() {
                    return Err(IoError::NotSaturated { witness, multiple });
                } else {
                    lattice
                };
                let ideal = binomial::ideal_of_lattice(&lattice);
                Ok(EmbeddingState {
                    chart,
                    ideal,
                    lattice,
                })
            }
        }
    }
}

fn int_str(n: i64) -> Value {
    Value::String(n.to_string())
}

fn row_json(row: &[i64]) -> Value {
    Value::Array(row.iter().map(|&x| int_str(x)).collect())
}

fn coords_json(s: &Boundary) -> Value {
    Value::Array(s.iter().map(|&j| int_str(j as i64 + 1)).collect())
}

fn rat_str(q: &Rat) -> String {
    if q.denom() == &1.into() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn entry_json(e: &Entry) -> Value {
    match e {
        Entry::Bottom => Value::String("bottom".into()),
        Entry::Inf => Value::String("inf".into()),
        Entry::Val(q) => Value::String(rat_str(q)),
        Entry::Gamma(g) => json!({
            "gamma": {
                "p": int_str(g.p as i64),
                "ratio": Value::String(rat_str(&g.ratio)),
                "divisors": Value::Array(
                    g.indices.iter().map(|&j| int_str(j as i64 + 1)).collect()
                ),
            }
        }),
    }
}

fn value_json(v: &InvariantValue) -> Value {
    json!({
        "hcodim": int_str(v.hcodim as i64),
        "entries": Value::Array(v.entries.iter().map(entry_json).collect()),
    })
}

/// Emit the problem back as canonical JSON (useful for fixtures).
pub fn emit_problem(p: &ProblemFile) -> String {
    let mut obj = serde_json::Map::new();
    obj.insert("dim".into(), int_str(p.dim as i64));
    if !p.invertible.is_empty() {
        obj.insert(
            "invertible".into(),
            Value::Array(p.invertible.iter().map(|&j| int_str(j as i64 + 1)).collect()),
        );
    }
    if let Some(names) = &p.names {
        obj.insert(
            "names".into(),
            Value::Array(names.iter().map(|s| Value::String(s.clone())).collect()),
        );
    }
    match &p.gens {
        ProblemGens::Binomials(rows) => {
            obj.insert(
                "binomials".into(),
                Value::Array(
                    rows.iter()
                        .map(|(a, b)| json!({"plus": row_json(a), "minus": row_json(b)}))
                        .collect(),
                ),
            );
        }
        ProblemGens::Lattice(rows) => {
            obj.insert(
                "lattice".into(),
                Value::Array(rows.iter().map(|r| row_json(r)).collect()),
            );
        }
    }
    if p.auto_saturate {
        obj.insert("auto_saturate".into(), Value::Bool(true));
    }
    let mut out = serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable");
    out.push('\n');
    out
}

fn status_str(s: ResolveStatus) -> &'static str {
    match s {
        ResolveStatus::Terminal => "terminal",
        ResolveStatus::BudgetExhausted => "budget-exhausted",
        ResolveStatus::Stalled => "stalled",
    }
}

fn node_json(node: &ResolutionNode) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("id".into(), int_str(node.chart.id as i64));
    obj.insert("e".into(), coords_json(&node.chart.e));
    obj.insert("h".into(), coords_json(&node.chart.h));
    obj.insert(
        "lineage".into(),
        Value::Array(
            node.chart
                .lineage
                .iter()
                .map(|l| {
                    json!({
                        "parent": int_str(l.parent as i64),
                        "center": coords_json(&l.center),
                        "coord": int_str(l.coord as i64 + 1),
                    })
                })
                .collect(),
        ),
    );
    if let Some(sub) = &node.substitution {
        obj.insert(
            "substitution".into(),
            Value::Array(sub.iter().map(|r| row_json(r)).collect()),
        );
    }
    obj.insert(
        "lattice".into(),
        Value::Array(node.lattice.basis().iter().map(|r| row_json(r)).collect()),
    );
    obj.insert(
        "generators".into(),
        Value::Array(
            node.ideal
                .gens()
                .iter()
                .map(|g| json!({"plus": row_json(g.plus()), "minus": row_json(g.minus())}))
                .collect(),
        ),
    );
    if node.ideal.monomial_factor().iter().any(|&f| f != 0) {
        obj.insert("factor".into(), row_json(node.ideal.monomial_factor()));
    }
    Value::Object(obj)
}

/// Emit the resolution report, with its certificate when provided, as
/// pretty JSON with a trailing newline.
pub fn emit_report(report: &ResolveReport, cert: Option<&Certificate>) -> String {
    let steps: Vec<Value> = report
        .tree
        .steps
        .iter()
        .map(|s| {
            json!({
                "value": value_json(&s.value),
                "centers": Value::Array(
                    s.centers
                        .iter()
                        .map(|(i, stratum)| json!({
                            "chart": int_str(*i as i64),
                            "stratum": coords_json(stratum),
                        }))
                        .collect(),
                ),
            })
        })
        .collect();
    let mut obj = serde_json::Map::new();
    obj.insert("dim".into(), int_str(report.tree.dim as i64));
    obj.insert("status".into(), Value::String(status_str(report.status).into()));
    obj.insert("steps".into(), Value::Array(steps));
    obj.insert(
        "charts".into(),
        Value::Array(report.tree.nodes.iter().map(node_json).collect()),
    );
    if let Some(cert) = cert {
        obj.insert(
            "certificate".into(),
            json!({
                "ok": cert.ok,
                "iso_charts": Value::Array(
                    cert.iso_leaves.iter().map(|&i| int_str(i as i64)).collect()
                ),
                "leaves": Value::Array(
                    cert.leaves
                        .iter()
                        .map(|l: &LeafCheck| json!({
                            "chart": int_str(l.chart_id as i64),
                            "transversal": l.transversal,
                            "jacobian_ok": l.jacobian_ok,
                            "basis": Value::Array(l.basis.iter().map(|r| row_json(r)).collect()),
                        }))
                        .collect(),
                ),
            }),
        );
    }
    let mut out = serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable");
    out.push('\n');
    out
}

fn parse_rat(s: &str, field: &str) -> Result<Rat, IoError> {
    let parse_big = |t: &str| {
        t.trim()
            .parse::<num::BigInt>()
            .map_err(|_| field_err(field, format!("not a rational: {s:?}")))
    };
    match s.split_once('/') {
        Some((num, den)) => {
            let den = parse_big(den)?;
            if den == 0.into() {
                return Err(field_err(field, "zero denominator"));
            }
            Ok(Rat::new(parse_big(num)?, den))
        }
        None => Ok(Rat::from_integer(parse_big(s)?)),
    }
}

fn parse_entry(v: &Value, field: &str) -> Result<Entry, IoError> {
    match v {
        Value::String(s) if s == "inf" => Ok(Entry::Inf),
        Value::String(s) if s == "bottom" => Ok(Entry::Bottom),
        Value::String(s) => Ok(Entry::Val(parse_rat(s, field)?)),
        Value::Number(_) => Ok(Entry::Val(Rat::from_integer(parse_i64(v, field)?.into()))),
        Value::Object(o) => {
            let g = o
                .get("gamma")
                .and_then(Value::as_object)
                .ok_or_else(|| field_err(field, "expected a gamma object"))?;
            let p = parse_usize(
                g.get("p").ok_or_else(|| field_err(field, "gamma missing p"))?,
                field,
            )? as u32;
            let ratio = match g.get("ratio") {
                Some(Value::String(s)) => parse_rat(s, field)?,
                Some(v) => Rat::from_integer(parse_i64(v, field)?.into()),
                None => return Err(field_err(field, "gamma missing ratio")),
            };
            let divisors = g
                .get("divisors")
                .and_then(Value::as_array)
                .ok_or_else(|| field_err(field, "gamma missing divisors"))?;
            let mut indices = Vec::new();
            for d in divisors {
                let j = parse_usize(d, field)?;
                if j == 0 {
                    return Err(field_err(field, "divisor indices are 1-based"));
                }
                indices.push(j - 1);
            }
            Ok(Entry::Gamma(GammaVal { p, ratio, indices }))
        }
        _ => Err(field_err(field, "expected an invariant entry")),
    }
}

fn parse_value(v: &Value, field: &str) -> Result<InvariantValue, IoError> {
    let obj = v
        .as_object()
        .ok_or_else(|| field_err(field, "expected an invariant value object"))?;
    let hcodim = parse_usize(
        obj.get("hcodim")
            .ok_or_else(|| field_err(field, "missing hcodim"))?,
        field,
    )? as u32;
    let entries = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| field_err(field, "missing entries"))?
        .iter()
        .map(|e| parse_entry(e, field))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(InvariantValue { hcodim, entries })
}

fn parse_boundary(v: &Value, field: &str, dim: usize) -> Result<Boundary, IoError> {
    Ok(parse_coords(v, field, dim)?.into_iter().collect())
}

/// Parse a tree emitted by `emit_report`, recomputing the child links.
pub fn parse_report(text: &str) -> Result<ResolveReport, IoError> {
    let root: Value = serde_json::from_str(text)?;
    let obj = root
        .as_object()
        .ok_or_else(|| field_err("(document)", "expected a JSON object"))?;
    let dim = parse_usize(
        obj.get("dim")
            .ok_or_else(|| field_err("dim", "missing required field"))?,
        "dim",
    )?;
    let status = match obj.get("status").and_then(Value::as_str) {
        Some("terminal") => ResolveStatus::Terminal,
        Some("budget-exhausted") => ResolveStatus::BudgetExhausted,
        Some("stalled") => ResolveStatus::Stalled,
        _ => return Err(field_err("status", "expected a status string")),
    };
    let mut steps = Vec::new();
    for (k, step) in obj
        .get("steps")
        .and_then(Value::as_array)
        .ok_or_else(|| field_err("steps", "missing steps"))?
        .iter()
        .enumerate()
    {
        let field = format!("steps[{k}]");
        let s = step
            .as_object()
            .ok_or_else(|| field_err(&field, "expected a step object"))?;
        let value = parse_value(
            s.get("value")
                .ok_or_else(|| field_err(&field, "missing value"))?,
            &field,
        )?;
        let mut centers = Vec::new();
        for c in s
            .get("centers")
            .and_then(Value::as_array)
            .ok_or_else(|| field_err(&field, "missing centers"))?
        {
            let co = c
                .as_object()
                .ok_or_else(|| field_err(&field, "expected a center object"))?;
            let chart = parse_usize(
                co.get("chart")
                    .ok_or_else(|| field_err(&field, "center missing chart"))?,
                &field,
            )?;
            let stratum = parse_boundary(
                co.get("stratum")
                    .ok_or_else(|| field_err(&field, "center missing stratum"))?,
                &field,
                dim,
            )?;
            centers.push((chart, stratum));
        }
        steps.push(StepRecord { value, centers });
    }
    let mut nodes: Vec<ResolutionNode> = Vec::new();
    for (k, chart_v) in obj
        .get("charts")
        .and_then(Value::as_array)
        .ok_or_else(|| field_err("charts", "missing charts"))?
        .iter()
        .enumerate()
    {
        let field = format!("charts[{k}]");
        let c = chart_v
            .as_object()
            .ok_or_else(|| field_err(&field, "expected a chart object"))?;
        let id = parse_usize(
            c.get("id").ok_or_else(|| field_err(&field, "missing id"))?,
            &field,
        )?;
        if id != k {
            return Err(field_err(&field, "chart ids must be consecutive"));
        }
        let e = parse_boundary(
            c.get("e").ok_or_else(|| field_err(&field, "missing e"))?,
            &field,
            dim,
        )?;
        let h = parse_boundary(
            c.get("h").ok_or_else(|| field_err(&field, "missing h"))?,
            &field,
            dim,
        )?;
        let mut lineage = Vec::new();
        for l in c
            .get("lineage")
            .and_then(Value::as_array)
            .ok_or_else(|| field_err(&field, "missing lineage"))?
        {
            let lo = l
                .as_object()
                .ok_or_else(|| field_err(&field, "expected a lineage object"))?;
            let parent = parse_usize(
                lo.get("parent")
                    .ok_or_else(|| field_err(&field, "lineage missing parent"))?,
                &field,
            )?;
            let center = parse_boundary(
                lo.get("center")
                    .ok_or_else(|| field_err(&field, "lineage missing center"))?,
                &field,
                dim,
            )?;
            let coord = parse_usize(
                lo.get("coord")
                    .ok_or_else(|| field_err(&field, "lineage missing coord"))?,
                &field,
            )?;
            if coord == 0 || coord > dim {
                return Err(field_err(&field, "lineage coord out of range"));
            }
            lineage.push(LineageStep {
                parent,
                center,
                coord: coord - 1,
            });
        }
        let substitution = match c.get("substitution") {
            Some(v) => Some(
                v.as_array()
                    .ok_or_else(|| field_err(&field, "expected a substitution matrix"))?
                    .iter()
                    .map(|r| parse_row(r, &field, dim))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            None => None,
        };
        let lattice_rows = c
            .get("lattice")
            .and_then(Value::as_array)
            .ok_or_else(|| field_err(&field, "missing lattice"))?
            .iter()
            .map(|r| parse_row(r, &field, dim))
            .collect::<Result<Vec<_>, _>>()?;
        let lattice = Lattice::from_rows(dim, &lattice_rows);
        let mut gens = Vec::new();
        for g in c
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| field_err(&field, "missing generators"))?
        {
            let go = g
                .as_object()
                .ok_or_else(|| field_err(&field, "expected a generator object"))?;
            let plus = parse_row(
                go.get("plus")
                    .ok_or_else(|| field_err(&field, "generator missing plus"))?,
                &field,
                dim,
            )?;
            let minus = parse_row(
                go.get("minus")
                    .ok_or_else(|| field_err(&field, "generator missing minus"))?,
                &field,
                dim,
            )?;
            gens.push(
                Binomial::new(plus, minus)
                    .ok_or_else(|| field_err(&field, "generator sides are equal"))?,
            );
        }
        let factor = match c.get("factor") {
            Some(v) => parse_row(v, &field, dim)?,
            None => vec![0; dim],
        };
        let ideal = BinomialIdeal::with_factor(dim, gens, factor);
        let chart = Chart {
            id,
            dim,
            e,
            h,
            lineage,
        };
        nodes.push(ResolutionNode {
            chart,
            ideal,
            lattice,
            substitution,
            children: Vec::new(),
        });
    }
    for k in 0..nodes.len() {
        if let Some(parent) = nodes[k].parent() {
            if parent >= nodes.len() {
                return Err(field_err("charts", "lineage parent out of range"));
            }
            nodes[parent].children.push(k);
        }
    }
    Ok(ResolveReport {
        tree: ResolutionTree { dim, nodes, steps },
        status,
    })
}
