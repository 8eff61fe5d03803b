//! Two-stage SMPS subset: a free-format core file, an implicit time file with
//! exactly two periods, and a stoch file with `SCENARIOS DISCRETE` or
//! `INDEP DISCRETE` replacing rhs, objective or matrix entries.
//!
//! Integer columns between `INTORG`/`INTEND` markers without an explicit
//! upper bound are read as binary.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use fwph_core::lp::{Bound, Constraint, Relation};
use fwph_core::milp::VarKind;
use fwph_core::model::{FirstStageData, ScenarioData, TwoStageProblem};

use crate::error::{from_report, ParseError, ParseErrorKind};

/// Tolerance on the scenario probabilities summing to one. Accepted sums are
/// renormalized exactly.
pub const PROBABILITY_SUM_TOL: f64 = 1e-9;

struct Line<'a> {
    no: usize,
    header: bool,
    tokens: Vec<(usize, &'a str)>,
}

impl<'a> Line<'a> {
    fn col(&self, i: usize) -> usize {
        self.tokens.get(i).map_or(1, |t| t.0)
    }

    fn tok(&self, i: usize) -> &'a str {
        self.tokens.get(i).map_or("", |t| t.1)
    }

    fn len(&self) -> usize {
        self.tokens.len()
    }

    fn err(&self, kind: ParseErrorKind, i: usize, msg: impl Into<String>) -> ParseError {
        ParseError::new(kind, self.no, self.col(i), msg)
    }

    fn num(&self, i: usize) -> Result<f64, ParseError> {
        let t = self.tok(i);
        if t.is_empty() {
            return Err(self.err(ParseErrorKind::Syntax, i, "missing number"));
        }
        match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            Ok(_) => Err(self.err(ParseErrorKind::Value, i, format!("non-finite number '{t}'"))),
            Err(_) => Err(self.err(ParseErrorKind::Syntax, i, format!("expected a number, found '{t}'"))),
        }
    }
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        if raw.starts_with('*') || raw.trim().is_empty() {
            return None;
        }
        let mut tokens = Vec::new();
        let mut start = None;
        for (ci, ch) in raw.char_indices().chain(std::iter::once((raw.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(ci),
                (true, Some(s)) => {
                    tokens.push((raw[..s].chars().count() + 1, &raw[s..ci]));
                    start = None;
                }
                _ => {}
            }
        }
        let header = !raw.starts_with(char::is_whitespace);
        Some(Line { no: i + 1, header, tokens })
    })
}

fn unsupported(line: &Line<'_>, construct: &str) -> ParseError {
    line.err(ParseErrorKind::Unsupported, 0, format!("unsupported section: {construct}"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum RowKind {
    L,
    G,
    E,
}

#[derive(Debug, Clone)]
struct RowDef {
    name: String,
    kind: RowKind,
    rhs: f64,
    range: Option<f64>,
    /// Position among all rows, objective rows included, for the time split.
    order: usize,
}

impl RowDef {
    /// Lower and upper activity limits.
    fn limits(&self) -> (f64, f64) {
        let (r, inf) = (self.rhs, f64::INFINITY);
        match (self.kind, self.range) {
            (RowKind::L, None) => (-inf, r),
            (RowKind::G, None) => (r, inf),
            (RowKind::E, None) => (r, r),
            (RowKind::L, Some(rg)) => (r - rg.abs(), r),
            (RowKind::G, Some(rg)) => (r, r + rg.abs()),
            (RowKind::E, Some(rg)) if rg >= 0.0 => (r, r + rg),
            (RowKind::E, Some(rg)) => (r + rg, r),
        }
    }
}

#[derive(Debug, Clone)]
struct ColDef {
    name: String,
    obj: f64,
    lower: f64,
    upper: f64,
    explicit_upper: bool,
    kind: VarKind,
}

#[derive(Debug, Clone)]
struct Core {
    obj_row: String,
    obj_order: usize,
    free_rows: Vec<String>,
    rows: Vec<RowDef>,
    row_index: HashMap<String, usize>,
    cols: Vec<ColDef>,
    col_index: HashMap<String, usize>,
    /// Dense coefficients, one vector per constraint row.
    a: Vec<Vec<f64>>,
    rhs_set: Option<String>,
}

fn parse_core(text: &str) -> Result<Core, ParseError> {
    let mut core = Core {
        obj_row: String::new(),
        obj_order: 0,
        free_rows: Vec::new(),
        rows: Vec::new(),
        row_index: HashMap::new(),
        cols: Vec::new(),
        col_index: HashMap::new(),
        a: Vec::new(),
        rhs_set: None,
    };
    let mut section = "";
    let mut integer = false;
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    let mut order = 0;
    let mut ended = false;
    for line in lines(text) {
        if line.header {
            section = match line.tok(0) {
                "NAME" => "NAME",
                "ROWS" => "ROWS",
                "COLUMNS" => "COLUMNS",
                "RHS" => "RHS",
                "RANGES" => "RANGES",
                "BOUNDS" => "BOUNDS",
                "ENDATA" => {
                    ended = true;
                    break;
                }
                other => return Err(unsupported(&line, other)),
            };
            continue;
        }
        match section {
            "ROWS" => {
                if line.len() != 2 {
                    return Err(line.err(ParseErrorKind::Syntax, 0, "expected '<type> <row>'"));
                }
                let name = line.tok(1).to_string();
                let kind = match line.tok(0) {
                    "N" => {
                        if core.obj_row.is_empty() {
                            core.obj_row = name;
                            core.obj_order = order;
                        } else {
                            core.free_rows.push(name);
                        }
                        order += 1;
                        continue;
                    }
                    "L" => RowKind::L,
                    "G" => RowKind::G,
                    "E" => RowKind::E,
                    t => return Err(line.err(ParseErrorKind::Syntax, 0, format!("unknown row type '{t}'"))),
                };
                if core.row_index.contains_key(&name) || name == core.obj_row {
                    return Err(line.err(ParseErrorKind::Value, 1, format!("duplicate row '{name}'")));
                }
                core.row_index.insert(name.clone(), core.rows.len());
                core.rows.push(RowDef { name, kind, rhs: 0.0, range: None, order });
                order += 1;
            }
            "COLUMNS" => {
                if line.len() == 3 && line.tok(1).trim_matches('\'') == "MARKER" {
                    match line.tok(2).trim_matches('\'') {
                        "INTORG" => integer = true,
                        "INTEND" => integer = false,
                        t => return Err(line.err(ParseErrorKind::Syntax, 2, format!("unknown marker '{t}'"))),
                    }
                    continue;
                }
                if line.len() != 3 && line.len() != 5 {
                    return Err(line.err(ParseErrorKind::Syntax, 0, "expected '<column> <row> <value> [<row> <value>]'"));
                }
                let name = line.tok(0);
                let j = match core.col_index.get(name) {
                    Some(&j) if j + 1 == core.cols.len() => j,
                    Some(_) => {
                        return Err(line.err(ParseErrorKind::Syntax, 0, format!("entries of column '{name}' are not contiguous")))
                    }
                    None => {
                        core.col_index.insert(name.to_string(), core.cols.len());
                        core.cols.push(ColDef {
                            name: name.to_string(),
                            obj: 0.0,
                            lower: 0.0,
                            upper: f64::INFINITY,
                            explicit_upper: false,
                            kind: if integer { VarKind::Integer } else { VarKind::Continuous },
                        });
                        core.cols.len() - 1
                    }
                };
                for k in [1, 3] {
                    if k >= line.len() {
                        break;
                    }
                    let row = line.tok(k);
                    let v = line.num(k + 1)?;
                    if row == core.obj_row {
                        core.cols[j].obj = v;
                    } else if let Some(&i) = core.row_index.get(row) {
                        entries.push((i, j, v));
                    } else if !core.free_rows.iter().any(|r| r == row) {
                        return Err(line.err(ParseErrorKind::Value, k, format!("unknown row '{row}'")));
                    }
                }
            }
            "RHS" | "RANGES" => {
                let skip = if line.len() % 2 == 1 { 1 } else { 0 };
                if line.len() < 2 + skip || line.len() > 4 + skip {
                    return Err(line.err(ParseErrorKind::Syntax, 0, "expected '[<set>] <row> <value> [<row> <value>]'"));
                }
                if section == "RHS" && skip == 1 && core.rhs_set.is_none() {
                    core.rhs_set = Some(line.tok(0).to_string());
                }
                let mut k = skip;
                while k + 1 < line.len() {
                    let row = line.tok(k);
                    let v = line.num(k + 1)?;
                    if row == core.obj_row {
                        return Err(unsupported(&line, "objective constant in RHS"));
                    }
                    let i = *core
                        .row_index
                        .get(row)
                        .ok_or_else(|| line.err(ParseErrorKind::Value, k, format!("unknown row '{row}'")))?;
                    if section == "RHS" {
                        core.rows[i].rhs = v;
                    } else {
                        core.rows[i].range = Some(v);
                    }
                    k += 2;
                }
            }
            "BOUNDS" => {
                let kind = line.tok(0);
                let needs_value = !matches!(kind, "FR" | "MI" | "PL" | "BV");
                let want = if needs_value { 3 } else { 2 };
                let skip = match line.len() {
                    n if n == want => 0,
                    n if n == want + 1 => 1,
                    _ => return Err(line.err(ParseErrorKind::Syntax, 0, "malformed bound")),
                };
                let name = line.tok(1 + skip);
                let j = *core
                    .col_index
                    .get(name)
                    .ok_or_else(|| line.err(ParseErrorKind::Value, 1 + skip, format!("unknown column '{name}'")))?;
                let v = if needs_value { line.num(2 + skip)? } else { 0.0 };
                let col = &mut core.cols[j];
                match kind {
                    "UP" => {
                        col.upper = v;
                        col.explicit_upper = true;
                    }
                    "LO" => col.lower = v,
                    "FX" => {
                        col.lower = v;
                        col.upper = v;
                        col.explicit_upper = true;
                    }
                    "FR" => {
                        col.lower = f64::NEG_INFINITY;
                        col.upper = f64::INFINITY;
                        col.explicit_upper = true;
                    }
                    "MI" => col.lower = f64::NEG_INFINITY,
                    "PL" => {
                        col.upper = f64::INFINITY;
                        col.explicit_upper = true;
                    }
                    "BV" => {
                        col.lower = 0.0;
                        col.upper = 1.0;
                        col.explicit_upper = true;
                        col.kind = VarKind::Binary;
                    }
                    "LI" => {
                        col.lower = v;
                        col.kind = VarKind::Integer;
                    }
                    "UI" => {
                        col.upper = v;
                        col.explicit_upper = true;
                        col.kind = VarKind::Integer;
                    }
                    other => return Err(unsupported(&line, &format!("bound type {other}"))),
                }
            }
            "NAME" => {}
            _ => return Err(line.err(ParseErrorKind::Syntax, 0, "data outside of any section")),
        }
    }
    if !ended {
        return Err(ParseError::new(ParseErrorKind::Syntax, text.lines().count().max(1), 1, "missing ENDATA"));
    }
    if core.obj_row.is_empty() {
        return Err(ParseError::new(ParseErrorKind::Syntax, 1, 1, "no objective row"));
    }
    for col in &mut core.cols {
        if col.kind == VarKind::Integer && !col.explicit_upper {
            col.upper = 1.0;
        }
        if col.kind == VarKind::Integer && col.lower == 0.0 && col.upper == 1.0 {
            col.kind = VarKind::Binary;
        }
    }
    core.a = vec![vec![0.0; core.cols.len()]; core.rows.len()];
    for (i, j, v) in entries {
        core.a[i][j] = v;
    }
    Ok(core)
}

/// Positions where the second period starts: column index and row order.
struct Split {
    col: usize,
    row_order: usize,
}

fn parse_time(text: &str, core: &Core) -> Result<Split, ParseError> {
    let mut periods: Vec<Line<'_>> = Vec::new();
    let mut section = "";
    for line in lines(text) {
        if line.header {
            section = match line.tok(0) {
                "TIME" => "TIME",
                "PERIODS" => {
                    if matches!(line.tok(1), "" | "IMPLICIT" | "LP") {
                        "PERIODS"
                    } else {
                        return Err(unsupported(&line, &format!("PERIODS {}", line.tok(1))));
                    }
                }
                "ENDATA" => break,
                other => return Err(unsupported(&line, other)),
            };
            continue;
        }
        if section != "PERIODS" || line.len() != 3 {
            return Err(line.err(ParseErrorKind::Syntax, 0, "expected '<column> <row> <period>'"));
        }
        periods.push(line);
    }
    if periods.len() != 2 {
        let msg = format!("{} periods; only two-stage problems are supported", periods.len());
        let (no, col) = periods.get(2).map_or((1, 1), |l| (l.no, l.col(0)));
        return Err(ParseError::new(ParseErrorKind::Unsupported, no, col, format!("unsupported section: {msg}")));
    }
    let second = &periods[1];
    let col = *core
        .col_index
        .get(second.tok(0))
        .ok_or_else(|| second.err(ParseErrorKind::Value, 0, format!("unknown column '{}'", second.tok(0))))?;
    let row = second.tok(1);
    let row_order = if row == core.obj_row {
        core.obj_order
    } else {
        core.rows
            .get(*core.row_index.get(row).ok_or_else(|| second.err(ParseErrorKind::Value, 1, format!("unknown row '{row}'")))?)
            .map(|r| r.order)
            .unwrap_or(0)
    };
    if col == 0 {
        return Err(second.err(ParseErrorKind::Value, 0, "second period starts at the first column"));
    }
    Ok(Split { col, row_order })
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Target {
    Rhs(usize),
    Obj(usize),
    Coef(usize, usize),
}

fn target(line: &Line<'_>, core: &Core, split: &Split) -> Result<Target, ParseError> {
    let (col, row) = (line.tok(0), line.tok(1));
    let second_row = |i: usize| core.rows[i].order >= split.row_order;
    let bad = |k: usize, msg: String| line.err(ParseErrorKind::Value, k, msg);
    match (core.col_index.get(col), row == core.obj_row, core.row_index.get(row)) {
        (Some(&j), true, _) if j >= split.col => Ok(Target::Obj(j)),
        (Some(_), true, _) => Err(bad(0, format!("stochastic cost on first-stage column '{col}'"))),
        (Some(&j), false, Some(&i)) if second_row(i) => Ok(Target::Coef(i, j)),
        (None, false, Some(&i)) if second_row(i) => Ok(Target::Rhs(i)),
        (None, true, _) => Err(unsupported(line, "objective constant")),
        (_, false, Some(_)) => Err(bad(1, format!("stochastic entry in first-stage row '{row}'"))),
        (_, false, None) => Err(bad(1, format!("unknown row '{row}'"))),
    }
}

type Mods = Vec<(Target, f64)>;

fn parse_stoch(text: &str, core: &Core, split: &Split) -> Result<Vec<(f64, Mods, usize)>, ParseError> {
    #[derive(PartialEq)]
    enum Mode {
        None,
        Scenarios,
        Indep,
    }
    let mut mode = Mode::None;
    // (probability, modifications, line of the SC record)
    let mut scenarios: Vec<(f64, Mods, usize)> = Vec::new();
    let mut names: HashMap<String, usize> = HashMap::new();
    let mut groups: Vec<(Target, Vec<(f64, f64)>)> = Vec::new();
    let mut ended = false;
    for line in lines(text) {
        if line.header {
            mode = match line.tok(0) {
                "STOCH" => Mode::None,
                "SCENARIOS" | "INDEP" if mode != Mode::None => {
                    return Err(unsupported(&line, "more than one distribution section"))
                }
                "SCENARIOS" => {
                    if !matches!(line.tok(1), "" | "DISCRETE") || !matches!(line.tok(2), "" | "REPLACE") {
                        return Err(unsupported(&line, format!("SCENARIOS {} {}", line.tok(1), line.tok(2)).trim()));
                    }
                    Mode::Scenarios
                }
                "INDEP" => {
                    if line.tok(1) != "DISCRETE" || !matches!(line.tok(2), "" | "REPLACE") {
                        return Err(unsupported(&line, format!("INDEP {} {}", line.tok(1), line.tok(2)).trim()));
                    }
                    Mode::Indep
                }
                "ENDATA" => {
                    ended = true;
                    break;
                }
                other => return Err(unsupported(&line, other)),
            };
            continue;
        }
        match mode {
            Mode::Scenarios if line.tok(0) == "SC" => {
                if line.len() < 4 {
                    return Err(line.err(ParseErrorKind::Syntax, 0, "expected 'SC <name> <parent> <probability> [<period>]'"));
                }
                let p = line.num(3)?;
                let parent = line.tok(2).trim_matches('\'');
                let mods = if parent == "ROOT" {
                    Vec::new()
                } else {
                    let &k = names
                        .get(parent)
                        .ok_or_else(|| line.err(ParseErrorKind::Value, 2, format!("unknown parent scenario '{parent}'")))?;
                    scenarios[k].1.clone()
                };
                names.insert(line.tok(1).to_string(), scenarios.len());
                scenarios.push((p, mods, line.no));
            }
            Mode::Scenarios => {
                if line.len() != 3 {
                    return Err(line.err(ParseErrorKind::Syntax, 0, "expected '<column> <row> <value>'"));
                }
                let t = target(&line, core, split)?;
                let v = line.num(2)?;
                let current =
                    scenarios.last_mut().ok_or_else(|| line.err(ParseErrorKind::Syntax, 0, "entry before any SC record"))?;
                current.1.retain(|(old, _)| *old != t);
                current.1.push((t, v));
            }
            Mode::Indep => {
                if line.len() != 4 && line.len() != 5 {
                    return Err(line.err(ParseErrorKind::Syntax, 0, "expected '<column> <row> <value> [<period>] <probability>'"));
                }
                let t = target(&line, core, split)?;
                let v = line.num(2)?;
                let p = line.num(line.len() - 1)?;
                match groups.iter_mut().find(|(g, _)| *g == t) {
                    Some(g) => g.1.push((v, p)),
                    None => groups.push((t, vec![(v, p)])),
                }
            }
            Mode::None => return Err(line.err(ParseErrorKind::Syntax, 0, "data outside of any section")),
        }
    }
    if !ended {
        return Err(ParseError::new(ParseErrorKind::Syntax, text.lines().count().max(1), 1, "missing ENDATA"));
    }
    if mode == Mode::Indep {
        // Cross product with the first group varying slowest.
        scenarios = vec![(1.0, Vec::new(), 1)];
        for (t, values) in &groups {
            let mut next = Vec::with_capacity(scenarios.len() * values.len());
            for (p, mods, no) in &scenarios {
                for &(v, q) in values {
                    let mut m = mods.clone();
                    m.push((*t, v));
                    next.push((p * q, m, *no));
                }
            }
            scenarios = next;
        }
    }
    if scenarios.is_empty() {
        return Err(ParseError::new(ParseErrorKind::Probability, 1, 1, "no scenarios"));
    }
    Ok(scenarios)
}

pub fn parse_smps(core: &str, time: &str, stoch: &str) -> Result<TwoStageProblem, ParseError> {
    let core_doc = parse_core(core).map_err(|e| e.in_file("core"))?;
    let split = parse_time(time, &core_doc).map_err(|e| e.in_file("time"))?;
    let scenarios = parse_stoch(stoch, &core_doc, &split).map_err(|e| e.in_file("stoch"))?;
    let sum: f64 = scenarios.iter().map(|s| s.0).sum();
    if let Some(s) = scenarios.iter().find(|s| s.0.is_nan() || s.0 <= 0.0) {
        return Err(ParseError::new(ParseErrorKind::Probability, s.2, 1, format!("probability {} is not positive", s.0))
            .in_file("stoch"));
    }
    if (sum - 1.0).abs() > PROBABILITY_SUM_TOL {
        return Err(ParseError::new(ParseErrorKind::Probability, scenarios[0].2, 1, format!("probabilities sum to {sum}, not 1"))
            .in_file("stoch"));
    }
    let problem = assemble(&core_doc, &split, &scenarios, sum).map_err(|e| e.in_file("core"))?;
    if let Some(e) = from_report(&problem.validate(), |_| (1, 1)) {
        return Err(e.in_file("core"));
    }
    Ok(problem)
}

fn row_constraints(lo: f64, hi: f64) -> Vec<(Relation, f64)> {
    match (lo.is_finite(), hi.is_finite()) {
        _ if lo == hi => vec![(Relation::Equal, lo)],
        (true, true) => vec![(Relation::GreaterEq, lo), (Relation::LessEq, hi)],
        (true, false) => vec![(Relation::GreaterEq, lo)],
        (false, true) => vec![(Relation::LessEq, hi)],
        (false, false) => Vec::new(),
    }
}

fn assemble(core: &Core, split: &Split, scenarios: &[(f64, Mods, usize)], sum: f64) -> Result<TwoStageProblem, ParseError> {
    let nx = split.col;
    let is_second = |i: usize| core.rows[i].order >= split.row_order;
    let mut rows = Vec::new();
    for (i, r) in core.rows.iter().enumerate() {
        if is_second(i) {
            continue;
        }
        if let Some(j) = (nx..core.cols.len()).find(|&j| core.a[i][j] != 0.0) {
            return Err(ParseError::new(
                ParseErrorKind::Value,
                1,
                1,
                format!("first-stage row '{}' uses second-stage column '{}'", r.name, core.cols[j].name),
            ));
        }
        let (lo, hi) = r.limits();
        for (rel, rhs) in row_constraints(lo, hi) {
            rows.push(Constraint::new(core.a[i][..nx].to_vec(), rel, rhs));
        }
    }
    let bound = |c: &ColDef| Bound::new(c.lower, c.upper);
    let first = FirstStageData {
        c: core.cols[..nx].iter().map(|c| c.obj).collect(),
        rows,
        bounds: core.cols[..nx].iter().map(bound).collect(),
        kinds: core.cols[..nx].iter().map(|c| c.kind).collect(),
    };
    let mut out = Vec::with_capacity(scenarios.len());
    for (p, mods, _) in scenarios {
        let mut a = core.a.clone();
        let mut rdefs = core.rows.clone();
        let mut obj: Vec<f64> = core.cols.iter().map(|c| c.obj).collect();
        for &(t, v) in mods {
            match t {
                Target::Rhs(i) => rdefs[i].rhs = v,
                Target::Obj(j) => obj[j] = v,
                Target::Coef(i, j) => a[i][j] = v,
            }
        }
        let mut sc = ScenarioData {
            probability: p / sum,
            q: obj[nx..].to_vec(),
            w: Vec::new(),
            t: Vec::new(),
            h: Vec::new(),
            relations: Vec::new(),
            y_bounds: core.cols[nx..].iter().map(bound).collect(),
            y_kinds: core.cols[nx..].iter().map(|c| c.kind).collect(),
        };
        for (i, r) in rdefs.iter().enumerate() {
            if !is_second(i) {
                continue;
            }
            let (lo, hi) = r.limits();
            for (rel, rhs) in row_constraints(lo, hi) {
                sc.t.push(a[i][..nx].to_vec());
                sc.w.push(a[i][nx..].to_vec());
                sc.h.push(rhs);
                sc.relations.push(rel);
            }
        }
        out.push(sc);
    }
    Ok(TwoStageProblem { first, scenarios: out })
}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("no {what} file next to {base} (tried {tried})")]
    Missing { what: &'static str, base: PathBuf, tried: String },
    #[error("{0}")]
    Parse(#[from] ParseError),
}

const EXTENSIONS: [(&str, [&str; 3]); 3] =
    [("core", ["cor", "core", "mps"]), ("time", ["tim", "time", "tim"]), ("stoch", ["sto", "stoch", "sto"])];

/// Reads `<base>.cor|.core|.mps`, `<base>.tim|.time` and `<base>.sto|.stoch`.
pub fn read_smps(base: &Path) -> Result<TwoStageProblem, ReadError> {
    let mut texts = Vec::new();
    let mut paths = Vec::new();
    for (what, exts) in EXTENSIONS {
        let found = exts.iter().map(|e| base.with_extension(e)).find(|p| p.is_file());
        let path = found.ok_or_else(|| ReadError::Missing { what, base: base.to_path_buf(), tried: exts.join(", ") })?;
        texts.push(std::fs::read_to_string(&path).map_err(|source| ReadError::Io { path: path.clone(), source })?);
        paths.push(path);
    }
    parse_smps(&texts[0], &texts[1], &texts[2]).map_err(|mut e| {
        let idx = match e.file.as_deref() {
            Some("time") => 1,
            Some("stoch") => 2,
            _ => 0,
        };
        e.file = Some(paths[idx].display().to_string());
        ReadError::Parse(e)
    })
}
