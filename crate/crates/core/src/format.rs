//! The line-oriented `.iq` text format and its JSON mirror.
//!
//! ```text
//! QUIVER zl2
//! VERTICES 1 2 3 4 5 6
//! FROZEN 1 2 3
//! ARROWS
//! a: 1 -> 2
//! c: 4 -> 1 [deg=0]
//! FROZEN_ARROWS a
//! POTENTIAL
//! 1 * e.a.c
//! -1/2 * b.c.d
//! GROUP cyclic-2
//! ACTION
//! g: vertex (2 3)(5 6); arrow a -> -b, b -> -a
//! MODULE
//! dim 1 = 1
//! map a = [[1]]
//! gamma 4 = 1
//! ```
//!
//! Words are in composition order, as everywhere else. `GROUP table` is
//! followed by one row per element, `x: xy1 xy2 ...`, with the columns in row
//! order. Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::character::ModuleDatum;
use crate::error::{Error, Result};
use crate::group::{self, ArrowImage, FiniteGroup, GeneratorImage, GroupAction};
use crate::quiver::{format_rational, GradedArrow, IceQuiver, Potential, Rational, Vertex, VertexId};
use crate::representation::QuiverRepresentation;

/// Contents of one `.iq` file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverFile {
    pub quiver: IceQuiver,
    #[serde(with = "potential_json")]
    pub potential: Potential,
    pub group: Option<FiniteGroup>,
    /// Generator images as written; the action is their closure.
    pub generators: Vec<GeneratorImage>,
    pub module: Option<ModuleDatum>,
    /// Whether `FROZEN_ARROWS` was given explicitly.
    pub explicit_frozen_arrows: bool,
}

/// Outcome of the structural checks run on a parsed file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FileCheck {
    pub rule: String,
    pub passed: bool,
    pub detail: String,
}

impl QuiverFile {
    pub fn new(quiver: IceQuiver) -> Self {
        QuiverFile {
            quiver,
            potential: Potential::zero(),
            group: None,
            generators: Vec::new(),
            module: None,
            explicit_frozen_arrows: false,
        }
    }

    pub fn action(&self) -> Result<Option<GroupAction>> {
        match &self.group {
            None => Ok(None),
            Some(g) => GroupAction::from_generators(&self.quiver, g.clone(), &self.generators).map(Some),
        }
    }

    /// The action, or a validation error when the file has no `GROUP`.
    pub fn require_action(&self) -> Result<GroupAction> {
        self.action()?
            .ok_or_else(|| Error::Validation("the file has no GROUP section; folding is disabled".into()))
    }

    /// Admissibility, invariance of the potential and equivariance of its
    /// cyclic derivatives.
    pub fn checks(&self) -> Result<Vec<FileCheck>> {
        let mut out = Vec::new();
        let degree = self.potential.validate(&self.quiver);
        out.push(FileCheck {
            rule: "potential is homogeneous".into(),
            passed: degree.is_ok(),
            detail: match &degree {
                Ok(d) => format!("degree {d}"),
                Err(e) => e.to_string(),
            },
        });
        if let Some(act) = self.action()? {
            let adm = group::is_admissible(&self.quiver, &act);
            out.push(FileCheck {
                rule: "action is admissible".into(),
                passed: adm.is_ok(),
                detail: match adm {
                    Ok(()) => "ok".into(),
                    Err(w) => w.to_string(),
                },
            });
            let inv = group::potential_invariant(&self.potential, &act);
            out.push(FileCheck {
                rule: "potential is invariant".into(),
                passed: inv,
                detail: if inv {
                    "ok".into()
                } else {
                    "g·W ≠ W for some g".into()
                },
            });
            let eq = group::derivatives_equivariant(&self.quiver, &self.potential, &act);
            out.push(FileCheck {
                rule: "cyclic derivatives are equivariant".into(),
                passed: matches!(eq, Ok(true)),
                detail: match eq {
                    Ok(true) => "ok".into(),
                    Ok(false) => "g·∂_aW ≠ ±∂_{g·a}W".into(),
                    Err(e) => e.to_string(),
                },
            });
        }
        Ok(out)
    }
}

mod potential_json {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Term {
        coefficient: String,
        cycle: Vec<String>,
    }

    pub fn serialize<S: Serializer>(w: &Potential, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<Term> = w
            .terms()
            .map(|(c, k)| Term {
                coefficient: format_rational(k),
                cycle: c.arrows().to_vec(),
            })
            .collect();
        terms.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Potential, D::Error> {
        use serde::de::Error as _;
        let terms = Vec::<Term>::deserialize(d)?;
        let mut w = Potential::zero();
        for t in terms {
            let c: Rational = t.coefficient.parse().map_err(D::Error::custom)?;
            w.add_term(c, crate::quiver::Cycle::from_closed_word(t.cycle));
        }
        Ok(w)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Header,
    Arrows,
    Potential,
    GroupTable,
    Action,
    Module,
}

struct Parser<'a> {
    line: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn err(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    /// Column (1-based) of `needle` in the current line.
    fn col(&self, needle: &str) -> usize {
        self.text.find(needle).map_or(1, |k| self.text[..k].chars().count() + 1)
    }

    fn vertex(&self, tok: &str) -> Result<VertexId> {
        tok.parse()
            .map_err(|_| self.err(self.col(tok), format!("expected a vertex id, found `{tok}`")))
    }
}

/// Parses a `.iq` file.
pub fn parse_quiver_file(text: &str) -> Result<QuiverFile> {
    let mut name = String::from("quiver");
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut frozen: Vec<VertexId> = Vec::new();
    let mut arrows: Vec<(GradedArrow, usize)> = Vec::new();
    let mut frozen_arrows: Option<(Vec<String>, usize)> = None;
    let mut potential_lines: Vec<(Rational, Vec<String>, usize, String)> = Vec::new();
    let mut group_spec: Option<(String, usize)> = None;
    let mut table_rows: Vec<(String, Vec<String>, usize)> = Vec::new();
    let mut action_lines: Vec<(usize, String)> = Vec::new();
    let mut module_lines: Vec<(usize, String)> = Vec::new();
    let mut section = Section::Header;

    for (k, raw) in text.lines().enumerate() {
        let p = Parser { line: k + 1, text: raw };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match head {
            "QUIVER" => {
                name = rest.to_string();
                section = Section::Header;
                continue;
            }
            "VERTICES" => {
                for tok in rest.split_whitespace() {
                    let (id, label) = tok.split_once('=').unwrap_or((tok, tok));
                    vertices.push(Vertex {
                        id: p.vertex(id)?,
                        label: label.to_string(),
                    });
                }
                section = Section::Header;
                continue;
            }
            "FROZEN" => {
                for tok in rest.split_whitespace() {
                    frozen.push(p.vertex(tok)?);
                }
                section = Section::Header;
                continue;
            }
            "FROZEN_ARROWS" => {
                frozen_arrows = Some((rest.split_whitespace().map(str::to_string).collect(), k + 1));
                section = Section::Header;
                continue;
            }
            "ARROWS" => {
                section = Section::Arrows;
                continue;
            }
            "POTENTIAL" => {
                section = Section::Potential;
                continue;
            }
            "GROUP" => {
                group_spec = Some((rest.to_string(), k + 1));
                section = if rest == "table" {
                    Section::GroupTable
                } else {
                    Section::Header
                };
                continue;
            }
            "ACTION" => {
                section = Section::Action;
                continue;
            }
            "MODULE" => {
                section = Section::Module;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Header => return Err(p.err(1, format!("unexpected line `{line}`"))),
            Section::Arrows => arrows.push((parse_arrow(&p, line)?, k + 1)),
            Section::Potential => {
                let (c, word) = line
                    .split_once('*')
                    .ok_or_else(|| p.err(1, "expected `coefficient * a.b.c`"))?;
                let c: Rational = c
                    .trim()
                    .parse()
                    .map_err(|_| p.err(1, format!("bad coefficient `{}`", c.trim())))?;
                let word: Vec<String> = word.trim().split('.').map(|s| s.trim().to_string()).collect();
                potential_lines.push((c, word, k + 1, raw.to_string()));
            }
            Section::GroupTable => {
                let (g, row) = line
                    .split_once(':')
                    .ok_or_else(|| p.err(1, "expected `element: products...`"))?;
                table_rows.push((
                    g.trim().to_string(),
                    row.split_whitespace().map(str::to_string).collect(),
                    k + 1,
                ));
            }
            Section::Action => action_lines.push((k + 1, raw.to_string())),
            Section::Module => module_lines.push((k + 1, raw.to_string())),
        }
    }

    let explicit_frozen_arrows = frozen_arrows.is_some();
    // unknown endpoints are reported at the arrow's line
    let ids: Vec<VertexId> = vertices.iter().map(|v| v.id).collect();
    for (a, line) in &arrows {
        for end in [a.source, a.target] {
            if !ids.contains(&end) {
                let text = text.lines().nth(line - 1).unwrap_or("");
                let p = Parser { line: *line, text };
                return Err(p.err(
                    p.col(&end.to_string()),
                    format!("arrow `{}` uses unknown vertex {end}", a.id),
                ));
            }
        }
    }
    let quiver = IceQuiver::new(
        name,
        vertices,
        frozen,
        arrows.into_iter().map(|(a, _)| a).collect(),
        frozen_arrows.as_ref().map(|(l, _)| l.clone()),
    )
    .map_err(|e| match (&e, &frozen_arrows) {
        (Error::UnknownArrow(a), Some((_, line))) => Error::Parse {
            line: *line,
            column: 1,
            message: format!("unknown frozen arrow `{a}`"),
        },
        _ => e,
    })?;

    let mut potential = Potential::zero();
    for (c, word, line, raw) in potential_lines {
        let refs: Vec<&str> = word.iter().map(String::as_str).collect();
        let cycle = quiver.cycle(&refs).map_err(|e| {
            let p = Parser { line, text: &raw };
            let column = match &e {
                Error::UnknownArrow(a) => p.col(a),
                _ => p.col(&word[0]),
            };
            p.err(column, e.to_string())
        })?;
        potential.add_term(c, cycle);
    }

    let group = match &group_spec {
        None => None,
        Some((spec, line)) => Some(parse_group(spec, *line, &table_rows)?),
    };
    let mut generators = Vec::new();
    for (line, raw) in &action_lines {
        let p = Parser { line: *line, text: raw };
        let g = group
            .as_ref()
            .ok_or_else(|| p.err(1, "ACTION requires a GROUP section"))?;
        generators.push(parse_action_line(&p, raw.trim(), g, &quiver)?);
    }
    if let Some(g) = &group {
        // the closure validates the images
        GroupAction::from_generators(&quiver, g.clone(), &generators)?;
    }
    let module = if module_lines.is_empty() {
        None
    } else {
        Some(parse_module(&module_lines, &quiver)?)
    };
    Ok(QuiverFile {
        quiver,
        potential,
        group,
        generators,
        module,
        explicit_frozen_arrows,
    })
}

fn parse_arrow(p: &Parser, line: &str) -> Result<GradedArrow> {
    let (id, rest) = line
        .split_once(':')
        .ok_or_else(|| p.err(1, "expected `id: src -> tgt`"))?;
    let id = id.trim();
    if id.is_empty() || id.contains(char::is_whitespace) {
        return Err(p.err(1, format!("bad arrow id `{id}`")));
    }
    let (ends, degree) = match rest.split_once('[') {
        Some((ends, tail)) => {
            let inner = tail
                .trim()
                .strip_suffix(']')
                .ok_or_else(|| p.err(p.col("["), "unterminated `[`"))?;
            let d = inner
                .trim()
                .strip_prefix("deg=")
                .and_then(|d| d.trim().parse::<i32>().ok())
                .ok_or_else(|| p.err(p.col("["), format!("expected `[deg=d]`, found `[{inner}]`")))?;
            (ends, d)
        }
        None => (rest, 0),
    };
    let (s, t) = ends
        .split_once("->")
        .ok_or_else(|| p.err(p.col(":") + 1, "expected `src -> tgt`"))?;
    Ok(GradedArrow::new(id, p.vertex(s.trim())?, p.vertex(t.trim())?).with_degree(degree))
}

fn parse_group(spec: &str, line: usize, rows: &[(String, Vec<String>, usize)]) -> Result<FiniteGroup> {
    let err = |column: usize, message: String| Error::Parse { line, column, message };
    if let Some(m) = spec.strip_prefix("cyclic-") {
        let m: usize = m.parse().map_err(|_| err(7, format!("bad order `{m}`")))?;
        return FiniteGroup::cyclic(m);
    }
    if spec == "trivial" {
        return Ok(FiniteGroup::trivial());
    }
    if spec != "table" {
        return Err(err(
            7,
            format!("expected `cyclic-m`, `trivial` or `table`, found `{spec}`"),
        ));
    }
    let names: Vec<String> = rows.iter().map(|r| r.0.clone()).collect();
    let mut mul = Vec::with_capacity(rows.len());
    for (_, row, l) in rows {
        let mut out = Vec::with_capacity(row.len());
        for x in row {
            out.push(names.iter().position(|n| n == x).ok_or_else(|| Error::Parse {
                line: *l,
                column: 1,
                message: format!("unknown element `{x}`"),
            })?);
        }
        mul.push(out);
    }
    FiniteGroup::from_table(names, mul)
}

fn parse_action_line(p: &Parser, line: &str, g: &FiniteGroup, q: &IceQuiver) -> Result<GeneratorImage> {
    let (el, rest) = line
        .split_once(':')
        .ok_or_else(|| p.err(1, "expected `element: vertex (...); arrow ...`"))?;
    let element = g
        .find(el.trim())
        .ok_or_else(|| p.err(1, format!("unknown group element `{}`", el.trim())))?;
    let mut img = GeneratorImage {
        element,
        ..Default::default()
    };
    for clause in rest.split(';').map(str::trim).filter(|c| !c.is_empty()) {
        if let Some(cycles) = clause.strip_prefix("vertex") {
            for cyc in cycles
                .split(')')
                .map(|c| c.trim().trim_start_matches('('))
                .filter(|c| !c.is_empty())
            {
                let members = cyc
                    .split_whitespace()
                    .map(|t| p.vertex(t))
                    .collect::<Result<Vec<VertexId>>>()?;
                for (i, v) in members.iter().enumerate() {
                    if !q.has_vertex(*v) {
                        return Err(p.err(p.col(&v.to_string()), format!("unknown vertex {v}")));
                    }
                    img.vertices.insert(*v, members[(i + 1) % members.len()]);
                }
            }
        } else if let Some(maps) = clause.strip_prefix("arrow") {
            for m in maps.split(',').map(str::trim).filter(|m| !m.is_empty()) {
                let (a, b) = m
                    .split_once("->")
                    .ok_or_else(|| p.err(p.col(m), "expected `id -> [-]id`"))?;
                let (a, b) = (a.trim(), b.trim());
                let (sign, b) = match b.strip_prefix('-') {
                    Some(b) => (-1, b.trim()),
                    None => (1, b),
                };
                for id in [a, b] {
                    if q.arrow(id).is_err() {
                        return Err(p.err(p.col(id), format!("unknown arrow `{id}`")));
                    }
                }
                img.arrows.insert(
                    a.to_string(),
                    ArrowImage {
                        sign,
                        arrow: b.to_string(),
                    },
                );
            }
        } else {
            return Err(p.err(p.col(clause), format!("expected `vertex` or `arrow`, found `{clause}`")));
        }
    }
    Ok(img)
}

fn parse_module(lines: &[(usize, String)], q: &IceQuiver) -> Result<ModuleDatum> {
    let mut dims: BTreeMap<VertexId, usize> = q.vertex_ids().map(|v| (v, 0)).collect();
    let mut maps: BTreeMap<String, Vec<Vec<i64>>> = BTreeMap::new();
    let mut gamma: BTreeMap<VertexId, u32> = BTreeMap::new();
    let mut map_lines = BTreeMap::new();
    for (line, raw) in lines {
        let p = Parser { line: *line, text: raw };
        let (lhs, rhs) = raw
            .split_once('=')
            .ok_or_else(|| p.err(1, "expected `dim v = d`, `map a = [[..]]` or `gamma v = k`"))?;
        let (kind, key) = lhs
            .trim()
            .split_once(char::is_whitespace)
            .ok_or_else(|| p.err(1, "missing key"))?;
        let (key, rhs) = (key.trim(), rhs.trim());
        match kind {
            "dim" => {
                let v = p.vertex(key)?;
                if !q.has_vertex(v) {
                    return Err(p.err(p.col(key), format!("unknown vertex {v}")));
                }
                dims.insert(
                    v,
                    rhs.parse()
                        .map_err(|_| p.err(p.col("="), format!("bad dimension `{rhs}`")))?,
                );
            }
            "gamma" => {
                let v = p.vertex(key)?;
                if !q.has_vertex(v) {
                    return Err(p.err(p.col(key), format!("unknown vertex {v}")));
                }
                gamma.insert(
                    v,
                    rhs.parse()
                        .map_err(|_| p.err(p.col("="), format!("bad multiplicity `{rhs}`")))?,
                );
            }
            "map" => {
                if q.arrow(key).is_err() {
                    return Err(p.err(p.col(key), format!("unknown arrow `{key}`")));
                }
                let m: Vec<Vec<i64>> =
                    serde_json::from_str(rhs).map_err(|e| p.err(p.col("=") + 1, format!("bad matrix: {e}")))?;
                maps.insert(key.to_string(), m);
                map_lines.insert(key.to_string(), *line);
            }
            other => return Err(p.err(1, format!("unknown module entry `{other}`"))),
        }
    }
    for a in q.arrows() {
        let (r, c) = (dims[&a.source], dims[&a.target]);
        let m = maps.entry(a.id.clone()).or_insert_with(|| vec![vec![0; c]; r]);
        if m.len() != r || m.iter().any(|row| row.len() != c) {
            return Err(Error::Parse {
                line: map_lines.get(&a.id).copied().unwrap_or(0),
                column: 1,
                message: format!("map for `{}` must be {r}x{c}", a.id),
            });
        }
    }
    ModuleDatum::new(q, gamma, QuiverRepresentation { dims, maps })
}

/// Canonical text form; `parse_quiver_file(&serialize(f)) == f`.
pub fn serialize(f: &QuiverFile) -> String {
    let q = &f.quiver;
    let mut s = String::new();
    let _ = writeln!(s, "QUIVER {}", q.name());
    let vs: Vec<String> = q
        .vertices()
        .iter()
        .map(|v| {
            if v.label == v.id.to_string() {
                v.label.clone()
            } else {
                format!("{}={}", v.id, v.label)
            }
        })
        .collect();
    let _ = writeln!(s, "VERTICES {}", vs.join(" "));
    if !q.frozen().is_empty() {
        let fr: Vec<String> = q.frozen().iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "FROZEN {}", fr.join(" "));
    }
    if !q.arrows().is_empty() {
        let _ = writeln!(s, "ARROWS");
        for a in q.arrows() {
            if a.degree == 0 {
                let _ = writeln!(s, "{}: {} -> {}", a.id, a.source, a.target);
            } else {
                let _ = writeln!(s, "{}: {} -> {} [deg={}]", a.id, a.source, a.target, a.degree);
            }
        }
    }
    if f.explicit_frozen_arrows {
        let fa: Vec<&str> = q.frozen_arrows().iter().map(String::as_str).collect();
        let _ = writeln!(s, "FROZEN_ARROWS {}", fa.join(" "));
    }
    if !f.potential.is_zero() {
        let _ = writeln!(s, "POTENTIAL");
        for (c, k) in f.potential.terms() {
            let _ = writeln!(s, "{} * {}", format_rational(k), c);
        }
    }
    if let Some(g) = &f.group {
        if *g == FiniteGroup::trivial() {
            let _ = writeln!(s, "GROUP trivial");
        } else if FiniteGroup::cyclic(g.order()).is_ok_and(|c| c == *g) {
            let _ = writeln!(s, "GROUP cyclic-{}", g.order());
        } else {
            let _ = writeln!(s, "GROUP table");
            for x in g.elements() {
                let row: Vec<&str> = g.elements().map(|y| g.name(g.mul(x, y))).collect();
                let _ = writeln!(s, "{}: {}", g.name(x), row.join(" "));
            }
        }
        if !f.generators.is_empty() {
            let _ = writeln!(s, "ACTION");
        }
        for img in &f.generators {
            let mut clauses = Vec::new();
            let cycles = vertex_cycles(&img.vertices);
            if !cycles.is_empty() {
                clauses.push(format!("vertex {cycles}"));
            }
            if !img.arrows.is_empty() {
                let maps: Vec<String> = img
                    .arrows
                    .iter()
                    .map(|(a, im)| format!("{a} -> {}{}", if im.sign < 0 { "-" } else { "" }, im.arrow))
                    .collect();
                clauses.push(format!("arrow {}", maps.join(", ")));
            }
            let _ = writeln!(s, "{}: {}", g.name(img.element), clauses.join("; "));
        }
    }
    if let Some(m) = &f.module {
        let _ = writeln!(s, "MODULE");
        for (v, d) in m.module.dims.iter().filter(|(_, d)| **d > 0) {
            let _ = writeln!(s, "dim {v} = {d}");
        }
        for (a, mat) in &m.module.maps {
            if mat.iter().any(|r| r.iter().any(|x| *x != 0)) {
                let _ = writeln!(s, "map {a} = {}", serde_json::to_string(mat).unwrap());
            }
        }
        for (v, k) in &m.gamma {
            let _ = writeln!(s, "gamma {v} = {k}");
        }
    }
    s
}

/// `(2 3)(5 6)` from a vertex map; fixed points are dropped.
fn vertex_cycles(map: &BTreeMap<VertexId, VertexId>) -> String {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = String::new();
    for &start in map.keys() {
        if seen.contains(&start) || map[&start] == start {
            continue;
        }
        let mut cyc = vec![start];
        seen.insert(start);
        let mut v = map[&start];
        while v != start && !seen.contains(&v) {
            cyc.push(v);
            seen.insert(v);
            v = map.get(&v).copied().unwrap_or(start);
        }
        let parts: Vec<String> = cyc.iter().map(|v| v.to_string()).collect();
        let _ = write!(out, "({})", parts.join(" "));
    }
    out
}

pub fn to_json(f: &QuiverFile) -> String {
    serde_json::to_string_pretty(f).expect("serializable")
}

pub fn from_json(text: &str) -> Result<QuiverFile> {
    let f: QuiverFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    f.action()?;
    if let Some(m) = &f.module {
        m.validate(&f.quiver)?;
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::tests::{a3, zl2};
    use crate::quiver::rat;

    const A3: &str = "\
QUIVER a3
VERTICES 1 2 3 4 5 6
FROZEN 4 5 6
ARROWS
a: 1 -> 2
b: 3 -> 2
c: 4 -> 1
d: 5 -> 2
e: 6 -> 3
GROUP cyclic-2
ACTION
g: vertex (1 3)(4 6); arrow a -> b, b -> a, c -> e, e -> c
";

    #[test]
    fn a3_text_matches_the_built_objects() {
        let f = parse_quiver_file(A3).unwrap();
        let (q, act) = a3();
        assert_eq!(f.quiver, q);
        assert_eq!(f.action().unwrap().unwrap(), act);
        assert!(f.checks().unwrap().iter().all(|c| c.passed));
        assert_eq!(parse_quiver_file(&serialize(&f)).unwrap(), f);
    }

    #[test]
    fn zl2_round_trip() {
        let (q, act, w) = zl2();
        let mut f = QuiverFile::new(q);
        f.potential = w;
        f.group = Some(act.group().clone());
        let mut img = GeneratorImage {
            element: 1,
            ..Default::default()
        };
        for v in f.quiver.vertex_ids() {
            if act.act_vertex(1, v) != v {
                img.vertices.insert(v, act.act_vertex(1, v));
            }
        }
        for a in f.quiver.arrows() {
            let im = act.act_arrow(1, &a.id);
            if im.arrow != a.id || im.sign != 1 {
                img.arrows.insert(a.id.clone(), im);
            }
        }
        f.generators = vec![img];
        let text = serialize(&f);
        let back = parse_quiver_file(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.action().unwrap().unwrap(), act);
        assert_eq!(from_json(&to_json(&f)).unwrap(), f);
        assert!(back.checks().unwrap().iter().all(|c| c.passed));
    }

    #[test]
    fn unknown_vertex_is_a_parse_error() {
        let text = "QUIVER x\nVERTICES 1 2\nARROWS\na: 1 -> 7\n";
        match parse_quiver_file(text) {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 4);
                assert_eq!(column, 9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn other_parse_errors() {
        for (text, line) in [
            ("QUIVER x\nVERTICES 1 y\n", 2),
            ("QUIVER x\nVERTICES 1\nARROWS\na 1 -> 1\n", 4),
            (
                "QUIVER x\nVERTICES 1 2\nARROWS\na: 1 -> 2\nb: 2 -> 1\nPOTENTIAL\nx * a.b\n",
                7,
            ),
            (
                "QUIVER x\nVERTICES 1 2\nARROWS\na: 1 -> 2\nb: 2 -> 1\nPOTENTIAL\n1 * a.z\n",
                7,
            ),
            ("QUIVER x\nVERTICES 1 2\nGROUP cyclic-2\nACTION\ng: vertex (1 9)\n", 5),
            ("QUIVER x\nVERTICES 1 2\nwhat\n", 3),
        ] {
            match parse_quiver_file(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn missing_group_disables_folding() {
        let f = parse_quiver_file("QUIVER x\nVERTICES 1 2\nARROWS\na: 1 -> 2\n").unwrap();
        assert!(f.action().unwrap().is_none());
        assert!(matches!(f.require_action(), Err(Error::Validation(_))));
    }

    #[test]
    fn group_tables_and_modules() {
        let text = "\
QUIVER s
VERTICES 1 2 3=top
FROZEN 3
ARROWS
a: 1 -> 2
b: 2 -> 1 [deg=-1]
c: 3 -> 1
GROUP table
e: e x
x: x e
ACTION
x:
POTENTIAL
-1/2 * a.b
MODULE
dim 1 = 1
dim 2 = 1
map a = [[1]]
gamma 3 = 2
";
        let f = parse_quiver_file(text).unwrap();
        assert_eq!(f.quiver.vertices()[2].label, "top");
        assert_eq!(f.quiver.arrow("b").unwrap().degree, -1);
        assert_eq!(f.potential.len(), 1);
        assert_eq!(f.potential.terms().next().unwrap().1, &(rat(-1) / rat(2)));
        let m = f.module.as_ref().unwrap();
        assert_eq!(m.gamma[&3], 2);
        assert_eq!(m.module.maps["b"], vec![vec![0]]);
        assert_eq!(parse_quiver_file(&serialize(&f)).unwrap(), f);
        let bad = text.replace("map a = [[1]]", "map a = [[1, 2]]");
        assert!(matches!(parse_quiver_file(&bad), Err(Error::Parse { line: 18, .. })));
    }
}
