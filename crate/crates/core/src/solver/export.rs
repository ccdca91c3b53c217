//! CPLEX-LP and free-MPS writers with matching readers.
//!
//! Numbers are written in plain fixed-point notation using the shortest
//! decimal that parses back to the same `f64`, which never needs more than
//! twelve significant digits for values that have a twelve-digit form. Cone
//! rows cannot be expressed in either format, so the file carries their
//! current tangent cuts as ordinary rows and lists the exact cone
//! definitions in a leading comment block.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::formulation::{ConeKind, MipModel, Sense};

use super::cuts::Cut;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Lp,
    Mps,
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Lp => "lp",
            ExportFormat::Mps => "mps",
        }
    }
}

/// `<dir>/<run-id>_<scenario-id>.<ext>`.
pub fn export_path(dir: &Path, run_id: &str, scenario: usize, format: ExportFormat) -> PathBuf {
    dir.join(format!("{run_id}_{scenario}.{}", format.extension()))
}

pub fn export_model(model: &MipModel, cuts: &[Cut], format: ExportFormat, path: &Path) -> Result<()> {
    let text = match format {
        ExportFormat::Lp => write_lp(model, cuts),
        ExportFormat::Mps => write_mps(model, cuts),
    };
    fs::write(path, text)?;
    Ok(())
}

fn num(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}

fn bound(v: f64) -> String {
    if v == f64::INFINITY {
        "+inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        num(v)
    }
}

/// Unique row names: duplicates get their position appended.
fn row_names(model: &MipModel, cuts: &[Cut]) -> Vec<String> {
    let mut seen = HashSet::new();
    let base = model
        .rows
        .iter()
        .map(|r| r.tag.to_string())
        .chain(cuts.iter().enumerate().map(|(i, c)| format!("cut{i}_{}", model.cones[c.cone].name())));
    base.enumerate()
        .map(|(i, name)| {
            let name = if name.is_empty() { format!("r{i}") } else { name };
            if seen.insert(name.clone()) {
                name
            } else {
                let alt = format!("{name}_{i}");
                seen.insert(alt.clone());
                alt
            }
        })
        .collect()
}

fn cone_comments(model: &MipModel, prefix: &str) -> String {
    let mut out = String::new();
    if model.cones.is_empty() {
        return out;
    }
    let _ = writeln!(out, "{prefix} cone rows, exact form (the constraints carry their tangent cuts)");
    let affine = |form: &crate::formulation::Affine| {
        let mut s = String::new();
        for (i, &(c, a)) in form.terms.iter().enumerate() {
            let sep = if i == 0 { "" } else { " + " };
            let _ = write!(s, "{sep}{} {}", num(a), model.column_name(c));
        }
        if form.constant != 0.0 || form.terms.is_empty() {
            let _ = write!(s, " + {}", num(form.constant));
        }
        s
    };
    for cone in &model.cones {
        let _ = match &cone.kind {
            ConeKind::Circle { x, y, radius } => {
                writeln!(out, "{prefix} {}: norm({}, {}) <= {}", cone.name(), affine(x), affine(y), num(*radius))
            }
            ConeKind::Rotated { fp, fq, a, v } => writeln!(
                out,
                "{prefix} {}: {}^2 + {}^2 <= {} * {}",
                cone.name(),
                model.column_name(*fp),
                model.column_name(*fq),
                model.column_name(*a),
                model.column_name(*v)
            ),
        };
    }
    out
}

struct LineWrap {
    out: String,
    width: usize,
}

impl LineWrap {
    fn push(&mut self, token: &str) {
        if self.width + token.len() + 1 > 200 {
            self.out.push_str("\n ");
            self.width = 1;
        }
        self.out.push(' ');
        self.out.push_str(token);
        self.width += token.len() + 1;
    }
}

fn lp_terms(model: &MipModel, terms: impl Iterator<Item = (usize, f64)>, lead: &str) -> String {
    let mut w = LineWrap { out: lead.to_string(), width: lead.len() };
    for (i, (c, a)) in terms.enumerate() {
        let name = model.column_name(c);
        let (sign, mag) = if a < 0.0 || (a == 0.0 && a.is_sign_negative()) { ("-", -a) } else { ("+", a) };
        if i > 0 || sign == "-" {
            w.push(sign);
        }
        if mag != 1.0 {
            w.push(&num(mag));
        }
        w.push(&name);
    }
    w.out
}

pub fn write_lp(model: &MipModel, cuts: &[Cut]) -> String {
    let mut out = cone_comments(model, "\\");
    out.push_str("Minimize\n");
    let mut obj = lp_terms(model, model.columns.iter().enumerate().map(|(c, col)| (c, col.objective())), " obj:");
    let constant = model.objective_constant + model.penalty_constant;
    if constant != 0.0 {
        obj.push_str(&format!(" {} {}", if constant < 0.0 { "-" } else { "+" }, num(constant.abs())));
    } else if model.columns.is_empty() {
        obj.push_str(" 0");
    }
    out.push_str(&obj);
    out.push('\n');
    out.push_str("Subject To\n");
    let names = row_names(model, cuts);
    let rows = model
        .rows
        .iter()
        .map(|r| (&r.terms, r.sense, r.rhs))
        .chain(cuts.iter().map(|c| (&c.terms, Sense::Le, c.rhs)));
    for ((terms, sense, rhs), name) in rows.zip(&names) {
        let mut line = lp_terms(model, terms.iter().copied(), &format!(" {name}:"));
        if terms.is_empty() {
            line.push_str(" 0");
        }
        line.push_str(&format!(" {} {}\n", sense.symbol(), num(rhs)));
        out.push_str(&line);
    }
    let bounds: Vec<String> = model
        .columns
        .iter()
        .enumerate()
        .filter(|(_, c)| !(c.lb == 0.0 && (c.ub == f64::INFINITY || (c.binary && c.ub == 1.0))))
        .map(|(i, c)| {
            let name = model.column_name(i);
            if c.lb == f64::NEG_INFINITY && c.ub == f64::INFINITY {
                format!(" {name} free")
            } else {
                format!(" {} <= {name} <= {}", bound(c.lb), bound(c.ub))
            }
        })
        .collect();
    if !bounds.is_empty() {
        out.push_str("Bounds\n");
        for b in bounds {
            out.push_str(&b);
            out.push('\n');
        }
    }
    let binaries: Vec<String> = model.binaries().map(|c| model.column_name(c)).collect();
    if !binaries.is_empty() {
        out.push_str("Binaries\n");
        let mut w = LineWrap { out: String::new(), width: 0 };
        for b in &binaries {
            w.push(b);
        }
        out.push_str(&w.out);
        out.push('\n');
    }
    out.push_str("End\n");
    out
}

pub fn write_mps(model: &MipModel, cuts: &[Cut]) -> String {
    let mut out = cone_comments(model, "*");
    out.push_str("NAME model\nROWS\n N obj\n");
    let names = row_names(model, cuts);
    let senses = model.rows.iter().map(|r| r.sense).chain(cuts.iter().map(|_| Sense::Le));
    for (sense, name) in senses.clone().zip(&names) {
        let code = match sense {
            Sense::Le => "L",
            Sense::Ge => "G",
            Sense::Eq => "E",
        };
        let _ = writeln!(out, " {code} {name}");
    }
    let mut by_col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); model.columns.len()];
    let all_terms = model.rows.iter().map(|r| &r.terms).chain(cuts.iter().map(|c| &c.terms));
    for (r, terms) in all_terms.enumerate() {
        for &(c, a) in terms {
            by_col[c].push((r, a));
        }
    }
    out.push_str("COLUMNS\n");
    let mut in_int = false;
    for (c, col) in model.columns.iter().enumerate() {
        if col.binary != in_int {
            let tag = if col.binary { "INTORG" } else { "INTEND" };
            let _ = writeln!(out, " MARKER 'MARKER' '{tag}'");
            in_int = col.binary;
        }
        let name = model.column_name(c);
        let _ = writeln!(out, " {name} obj {}", num(col.objective()));
        for &(r, a) in &by_col[c] {
            let _ = writeln!(out, " {name} {} {}", names[r], num(a));
        }
    }
    if in_int {
        out.push_str(" MARKER 'MARKER' 'INTEND'\n");
    }
    out.push_str("RHS\n");
    let constant = model.objective_constant + model.penalty_constant;
    if constant != 0.0 {
        let _ = writeln!(out, " RHS obj {}", num(-constant));
    }
    let rhs = model.rows.iter().map(|r| r.rhs).chain(cuts.iter().map(|c| c.rhs));
    for (v, name) in rhs.zip(&names) {
        if v != 0.0 {
            let _ = writeln!(out, " RHS {name} {}", num(v));
        }
    }
    out.push_str("BOUNDS\n");
    for (c, col) in model.columns.iter().enumerate() {
        let name = model.column_name(c);
        let (lb, ub) = (col.lb, col.ub);
        if col.binary && lb == 0.0 && ub == 1.0 {
            let _ = writeln!(out, " BV BND {name}");
        } else if lb == ub {
            let _ = writeln!(out, " FX BND {name} {}", num(lb));
        } else if lb == f64::NEG_INFINITY && ub == f64::INFINITY {
            let _ = writeln!(out, " FR BND {name}");
        } else {
            if lb == f64::NEG_INFINITY {
                let _ = writeln!(out, " MI BND {name}");
            } else if lb != 0.0 || col.binary {
                let _ = writeln!(out, " LO BND {name} {}", num(lb));
            }
            if ub != f64::INFINITY {
                let _ = writeln!(out, " UP BND {name} {}", num(ub));
            } else if col.binary {
                let _ = writeln!(out, " PL BND {name}");
            }
        }
    }
    out.push_str("ENDATA\n");
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedColumn {
    pub name: String,
    pub lb: f64,
    pub ub: f64,
    pub binary: bool,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedRow {
    pub name: String,
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// Model read back from an LP or MPS file; columns in order of first
/// appearance.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParsedModel {
    pub columns: Vec<ParsedColumn>,
    pub rows: Vec<ParsedRow>,
    pub objective_constant: f64,
    pub comments: Vec<String>,
    index: HashMap<String, usize>,
}

impl ParsedModel {
    fn column(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.columns.len();
        self.columns.push(ParsedColumn { name: name.to_string(), lb: 0.0, ub: f64::INFINITY, binary: false, cost: 0.0 });
        self.index.insert(name.to_string(), i);
        i
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
}

fn parse_num(tok: &str, line: usize) -> Result<f64> {
    match tok.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" | "+infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        _ => tok.parse().map_err(|_| Error::Parse { line, msg: format!("expected a number, found '{tok}'") }),
    }
}

fn is_number(tok: &str) -> bool {
    tok.parse::<f64>().is_ok() || matches!(tok.to_ascii_lowercase().as_str(), "inf" | "+inf" | "-inf" | "infinity")
}

/// Splits LP text into (line number, token), separating operators from
/// names and numbers.
fn lp_tokens(text: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('\\').next().unwrap_or("");
        let mut cur = String::new();
        let flush = |cur: &mut String, out: &mut Vec<(usize, String)>| {
            if !cur.is_empty() {
                out.push((ln + 1, std::mem::take(cur)));
            }
        };
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let ch = chars[i];
            match ch {
                c if c.is_whitespace() => flush(&mut cur, &mut out),
                ':' | '+' | '-' => {
                    flush(&mut cur, &mut out);
                    out.push((ln + 1, ch.to_string()));
                }
                '<' | '>' | '=' => {
                    flush(&mut cur, &mut out);
                    let mut op = ch.to_string();
                    if i + 1 < chars.len() && chars[i + 1] == '=' {
                        op.push('=');
                        i += 1;
                    }
                    out.push((ln + 1, op));
                }
                _ => cur.push(ch),
            }
            i += 1;
        }
        flush(&mut cur, &mut out);
    }
    out
}

fn section(tok: &str, next: Option<&str>) -> Option<(&'static str, usize)> {
    let t = tok.to_ascii_lowercase();
    let n = next.map(str::to_ascii_lowercase);
    match t.as_str() {
        "minimize" | "minimise" | "min" => Some(("objective", 1)),
        "subject" if n.as_deref() == Some("to") => Some(("rows", 2)),
        "st" | "s.t." => Some(("rows", 1)),
        "bounds" => Some(("bounds", 1)),
        "binaries" | "binary" => Some(("binaries", 1)),
        "end" => Some(("end", 1)),
        _ => None,
    }
}

fn sense_of(tok: &str) -> Option<Sense> {
    match tok {
        "<=" | "<" | "=<" => Some(Sense::Le),
        ">=" | ">" | "=>" => Some(Sense::Ge),
        "=" => Some(Sense::Eq),
        _ => None,
    }
}

pub fn read_lp(text: &str) -> Result<ParsedModel> {
    let mut m = ParsedModel {
        comments: text
            .lines()
            .filter_map(|l| l.trim_start().strip_prefix('\\').map(|c| c.trim().to_string()))
            .collect(),
        ..Default::default()
    };
    let toks = lp_tokens(text);
    let mut sec = "";
    let mut i = 0;
    let tok = |i: usize| toks.get(i).map(|(_, t)| t.as_str());
    let line_at = |i: usize| toks.get(i).map(|(l, _)| *l).unwrap_or(0);
    while i < toks.len() {
        if let Some((name, width)) = section(&toks[i].1, tok(i + 1)) {
            sec = name;
            i += width;
            continue;
        }
        match sec {
            "objective" | "rows" => {
                // optional `name :`
                let mut name = String::new();
                if tok(i + 1) == Some(":") {
                    name = toks[i].1.clone();
                    i += 2;
                }
                let mut terms = Vec::new();
                let mut constant = 0.0;
                let mut sign = 1.0;
                let mut coef: Option<f64> = None;
                let mut sense = None;
                while i < toks.len() {
                    let t = toks[i].1.as_str();
                    if section(t, tok(i + 1)).is_some() || tok(i + 1) == Some(":") {
                        break;
                    }
                    if let Some(s) = sense_of(t) {
                        sense = Some(s);
                        i += 1;
                        break;
                    }
                    match t {
                        "+" => {}
                        "-" => sign = -sign,
                        _ if is_number(t) => coef = Some(coef.unwrap_or(1.0) * parse_num(t, line_at(i))?),
                        _ => {
                            let c = m.column(t);
                            terms.push((c, sign * coef.unwrap_or(1.0)));
                            sign = 1.0;
                            coef = None;
                        }
                    }
                    i += 1;
                }
                if let Some(c) = coef.take() {
                    constant += sign * c;
                }
                if sec == "objective" {
                    for (c, a) in terms {
                        m.columns[c].cost += a;
                    }
                    m.objective_constant = constant;
                    continue;
                }
                let sense = sense.ok_or(Error::Parse { line: line_at(i.saturating_sub(1)), msg: format!("row '{name}' has no sense") })?;
                let mut rhs_sign = 1.0;
                while tok(i) == Some("-") || tok(i) == Some("+") {
                    if tok(i) == Some("-") {
                        rhs_sign = -rhs_sign;
                    }
                    i += 1;
                }
                let rhs = rhs_sign * parse_num(tok(i).unwrap_or(""), line_at(i))? - constant;
                i += 1;
                if name.is_empty() {
                    name = format!("r{}", m.rows.len());
                }
                m.rows.push(ParsedRow { name, terms, sense, rhs });
            }
            "bounds" => {
                let line = line_at(i);
                let mut parts: Vec<String> = Vec::new();
                while i < toks.len() && toks[i].0 == line {
                    parts.push(toks[i].1.clone());
                    i += 1;
                }
                read_lp_bound(&mut m, &merge_signs(parts), line)?;
            }
            "binaries" => {
                let c = m.column(&toks[i].1);
                m.columns[c].binary = true;
                if m.columns[c].ub == f64::INFINITY && m.columns[c].lb == 0.0 {
                    m.columns[c].ub = 1.0;
                }
                i += 1;
            }
            "end" => break,
            _ => return Err(Error::Parse { line: line_at(i), msg: format!("unexpected '{}' outside a section", toks[i].1) }),
        }
    }
    Ok(m)
}

/// Re-attaches unary signs split off by the tokenizer (`-`, `inf` → `-inf`).
fn merge_signs(parts: Vec<String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut pending = String::new();
    for p in parts {
        if p == "-" || p == "+" {
            pending = p;
        } else {
            out.push(format!("{pending}{p}"));
            pending.clear();
        }
    }
    out
}

fn read_lp_bound(m: &mut ParsedModel, parts: &[String], line: usize) -> Result<()> {
    let p: Vec<&str> = parts.iter().map(String::as_str).collect();
    let bad = || Error::Parse { line, msg: format!("unrecognised bound '{}'", p.join(" ")) };
    match p.as_slice() {
        [name, free] if free.eq_ignore_ascii_case("free") => {
            let c = m.column(name);
            m.columns[c].lb = f64::NEG_INFINITY;
            m.columns[c].ub = f64::INFINITY;
        }
        [lo, "<=", name, "<=", hi] => {
            let c = m.column(name);
            m.columns[c].lb = parse_num(lo, line)?;
            m.columns[c].ub = parse_num(hi, line)?;
        }
        [name, op, v] if !is_number(name) => {
            let c = m.column(name);
            let v = parse_num(v, line)?;
            match sense_of(op).ok_or_else(bad)? {
                Sense::Le => m.columns[c].ub = v,
                Sense::Ge => m.columns[c].lb = v,
                Sense::Eq => {
                    m.columns[c].lb = v;
                    m.columns[c].ub = v;
                }
            }
        }
        [v, op, name] => {
            let c = m.column(name);
            let v = parse_num(v, line)?;
            match sense_of(op).ok_or_else(bad)? {
                Sense::Le => m.columns[c].lb = v,
                Sense::Ge => m.columns[c].ub = v,
                Sense::Eq => {
                    m.columns[c].lb = v;
                    m.columns[c].ub = v;
                }
            }
        }
        _ => return Err(bad()),
    }
    Ok(())
}

pub fn read_mps(text: &str) -> Result<ParsedModel> {
    let mut m = ParsedModel::default();
    let mut sec = String::new();
    let mut objective = String::new();
    let mut rows: HashMap<String, usize> = HashMap::new();
    let mut in_int = false;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        if let Some(c) = raw.strip_prefix('*') {
            m.comments.push(c.trim().to_string());
            continue;
        }
        if raw.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with(' ') && !raw.starts_with('\t') {
            sec = f[0].to_ascii_uppercase();
            if sec == "ENDATA" {
                break;
            }
            continue;
        }
        let bad = |msg: &str| Error::Parse { line, msg: msg.to_string() };
        match sec.as_str() {
            "ROWS" => {
                let [code, name] = f.as_slice() else { return Err(bad("ROWS entries need a type and a name")) };
                let sense = match code.to_ascii_uppercase().as_str() {
                    "N" => {
                        if objective.is_empty() {
                            objective = name.to_string();
                        }
                        continue;
                    }
                    "L" => Sense::Le,
                    "G" => Sense::Ge,
                    "E" => Sense::Eq,
                    _ => return Err(bad("row type must be N, L, G or E")),
                };
                rows.insert(name.to_string(), m.rows.len());
                m.rows.push(ParsedRow { name: name.to_string(), terms: Vec::new(), sense, rhs: 0.0 });
            }
            "COLUMNS" => {
                if f.len() >= 3 && f[1].trim_matches('\'') == "MARKER" {
                    in_int = f[2].contains("INTORG");
                    continue;
                }
                if f.len() < 3 || f.len() % 2 == 0 {
                    return Err(bad("COLUMNS entries are a column name and row/value pairs"));
                }
                let c = m.column(f[0]);
                if in_int {
                    m.columns[c].binary = true;
                }
                for pair in f[1..].chunks(2) {
                    let v = parse_num(pair[1], line)?;
                    if pair[0] == objective {
                        m.columns[c].cost += v;
                    } else {
                        let r = *rows.get(pair[0]).ok_or_else(|| bad(&format!("unknown row '{}'", pair[0])))?;
                        m.rows[r].terms.push((c, v));
                    }
                }
            }
            "RHS" => {
                for pair in f[1..].chunks(2) {
                    let [name, v] = pair else { return Err(bad("RHS entries are row/value pairs")) };
                    let v = parse_num(v, line)?;
                    if *name == objective {
                        m.objective_constant = -v;
                    } else {
                        let r = *rows.get(*name).ok_or_else(|| bad(&format!("unknown row '{name}'")))?;
                        m.rows[r].rhs = v;
                    }
                }
            }
            "BOUNDS" => {
                if f.len() < 3 {
                    return Err(bad("BOUNDS entries need a type, a set name and a column"));
                }
                let c = m.column(f[2]);
                let value = || f.get(3).map(|v| parse_num(v, line)).unwrap_or(Err(bad("bound value missing")));
                let col = &mut m.columns[c];
                match f[0].to_ascii_uppercase().as_str() {
                    "UP" => col.ub = value()?,
                    "LO" => col.lb = value()?,
                    "FX" => {
                        col.lb = value()?;
                        col.ub = col.lb;
                    }
                    "FR" => {
                        col.lb = f64::NEG_INFINITY;
                        col.ub = f64::INFINITY;
                    }
                    "MI" => col.lb = f64::NEG_INFINITY,
                    "PL" => col.ub = f64::INFINITY,
                    "BV" => {
                        col.binary = true;
                        col.lb = 0.0;
                        col.ub = 1.0;
                    }
                    other => return Err(bad(&format!("unsupported bound type {other}"))),
                }
            }
            "RANGES" => return Err(bad("RANGES are not supported")),
            _ => {}
        }
    }
    Ok(m)
}
