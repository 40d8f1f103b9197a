//! Graded ice quivers, paths, potentials up to cyclic equivalence and the
//! unfolded exchange matrix.
//!
//! Paths are written in composition order: the word `e.a.c` (or `[e, a, c]`)
//! traverses `c` first, then `a`, then `e`. A word `[x, y]` is composable when
//! `source(x) == target(y)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = u32;
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedArrow {
    pub id: String,
    pub source: VertexId,
    pub target: VertexId,
    #[serde(default)]
    pub degree: i32,
}

impl GradedArrow {
    pub fn new(id: impl Into<String>, source: VertexId, target: VertexId) -> Self {
        GradedArrow {
            id: id.into(),
            source,
            target,
            degree: 0,
        }
    }

    pub fn with_degree(mut self, degree: i32) -> Self {
        self.degree = degree;
        self
    }
}

/// Serialized shape of an [`IceQuiver`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverData {
    pub name: String,
    pub vertices: Vec<Vertex>,
    pub frozen: Vec<VertexId>,
    pub arrows: Vec<GradedArrow>,
    pub frozen_arrows: Vec<String>,
}

/// A finite graded quiver with a distinguished frozen subquiver `F`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "QuiverData", into = "QuiverData")]
pub struct IceQuiver {
    name: String,
    vertices: Vec<Vertex>,
    frozen: BTreeSet<VertexId>,
    arrows: Vec<GradedArrow>,
    frozen_arrows: BTreeSet<String>,
    arrow_index: HashMap<String, usize>,
}

impl PartialEq for IceQuiver {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.vertices == other.vertices
            && self.frozen == other.frozen
            && self.arrows == other.arrows
            && self.frozen_arrows == other.frozen_arrows
    }
}

impl Eq for IceQuiver {}

impl TryFrom<QuiverData> for IceQuiver {
    type Error = Error;

    fn try_from(data: QuiverData) -> Result<Self> {
        IceQuiver::new(
            data.name,
            data.vertices,
            data.frozen,
            data.arrows,
            Some(data.frozen_arrows),
        )
    }
}

impl From<IceQuiver> for QuiverData {
    fn from(q: IceQuiver) -> Self {
        QuiverData {
            name: q.name,
            vertices: q.vertices,
            frozen: q.frozen.into_iter().collect(),
            arrows: q.arrows,
            frozen_arrows: q.frozen_arrows.into_iter().collect(),
        }
    }
}

impl IceQuiver {
    /// Builds and validates an ice quiver. When `frozen_arrows` is `None` the
    /// frozen subquiver is the full subquiver on the frozen vertices.
    pub fn new(
        name: impl Into<String>,
        vertices: Vec<Vertex>,
        frozen: impl IntoIterator<Item = VertexId>,
        arrows: Vec<GradedArrow>,
        frozen_arrows: Option<Vec<String>>,
    ) -> Result<Self> {
        let mut ids = BTreeSet::new();
        for v in &vertices {
            if !ids.insert(v.id) {
                return Err(Error::DuplicateId(v.id.to_string()));
            }
        }
        let frozen: BTreeSet<VertexId> = frozen.into_iter().collect();
        if let Some(v) = frozen.iter().find(|v| !ids.contains(v)) {
            return Err(Error::UnknownVertex(*v));
        }
        let mut arrow_index = HashMap::new();
        for (k, a) in arrows.iter().enumerate() {
            if a.id.is_empty() {
                return Err(Error::InvalidQuiver("empty arrow id".into()));
            }
            if arrow_index.insert(a.id.clone(), k).is_some() {
                return Err(Error::DuplicateId(a.id.clone()));
            }
            for end in [a.source, a.target] {
                if !ids.contains(&end) {
                    return Err(Error::UnknownVertex(end));
                }
            }
        }
        let frozen_arrows: BTreeSet<String> = match frozen_arrows {
            Some(list) => list.into_iter().collect(),
            None => arrows
                .iter()
                .filter(|a| frozen.contains(&a.source) && frozen.contains(&a.target))
                .map(|a| a.id.clone())
                .collect(),
        };
        for id in &frozen_arrows {
            let a = arrow_index
                .get(id)
                .map(|&k| &arrows[k])
                .ok_or_else(|| Error::UnknownArrow(id.clone()))?;
            if !frozen.contains(&a.source) || !frozen.contains(&a.target) {
                return Err(Error::InvalidQuiver(format!(
                    "frozen arrow `{id}` has an unfrozen endpoint"
                )));
            }
        }
        Ok(IceQuiver {
            name: name.into(),
            vertices,
            frozen,
            arrows,
            frozen_arrows,
            arrow_index,
        })
    }

    /// Convenience constructor: vertices labelled by their ids, degree-0 arrows,
    /// full frozen subquiver.
    pub fn simple(
        name: &str,
        vertices: &[VertexId],
        frozen: &[VertexId],
        arrows: &[(&str, VertexId, VertexId)],
    ) -> Result<Self> {
        IceQuiver::new(
            name,
            vertices
                .iter()
                .map(|&id| Vertex {
                    id,
                    label: id.to_string(),
                })
                .collect(),
            frozen.iter().copied(),
            arrows.iter().map(|&(id, s, t)| GradedArrow::new(id, s, t)).collect(),
            None,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().map(|v| v.id)
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.iter().any(|x| x.id == v)
    }

    pub fn frozen(&self) -> &BTreeSet<VertexId> {
        &self.frozen
    }

    pub fn is_frozen(&self, v: VertexId) -> bool {
        self.frozen.contains(&v)
    }

    pub fn unfrozen(&self) -> Vec<VertexId> {
        self.vertex_ids().filter(|v| !self.is_frozen(*v)).collect()
    }

    pub fn arrows(&self) -> &[GradedArrow] {
        &self.arrows
    }

    pub fn arrow(&self, id: &str) -> Result<&GradedArrow> {
        self.arrow_index
            .get(id)
            .map(|&k| &self.arrows[k])
            .ok_or_else(|| Error::UnknownArrow(id.to_string()))
    }

    pub fn arrow_position(&self, id: &str) -> Option<usize> {
        self.arrow_index.get(id).copied()
    }

    pub fn frozen_arrows(&self) -> &BTreeSet<String> {
        &self.frozen_arrows
    }

    pub fn is_frozen_arrow(&self, id: &str) -> bool {
        self.frozen_arrows.contains(id)
    }

    /// Vertices in id order with unfrozen ones first.
    pub fn row_order(&self) -> Vec<VertexId> {
        let mut ids: Vec<VertexId> = self.vertex_ids().collect();
        ids.sort_by_key(|v| (self.is_frozen(*v), *v));
        ids
    }

    /// The frozen subquiver `F` as a quiver in its own right (no frozen part).
    pub fn frozen_subquiver(&self) -> IceQuiver {
        let vertices = self.vertices.iter().filter(|v| self.is_frozen(v.id)).cloned().collect();
        let arrows = self
            .arrows
            .iter()
            .filter(|a| self.is_frozen_arrow(&a.id))
            .cloned()
            .collect();
        IceQuiver::new(format!("{}-frozen", self.name), vertices, [], arrows, Some(vec![]))
            .expect("frozen subquiver of a valid quiver is valid")
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Vertices ordered so that every arrow goes from an earlier to a later vertex.
    pub fn topological_order(&self) -> Option<Vec<VertexId>> {
        let mut indeg: BTreeMap<VertexId, usize> = self.vertex_ids().map(|v| (v, 0)).collect();
        for a in &self.arrows {
            *indeg.get_mut(&a.target).unwrap() += 1;
        }
        let mut ready: Vec<VertexId> = indeg.iter().filter(|(_, d)| **d == 0).map(|(v, _)| *v).collect();
        ready.reverse();
        let mut order = Vec::new();
        while let Some(v) = ready.pop() {
            order.push(v);
            for a in self.arrows.iter().filter(|a| a.source == v) {
                let d = indeg.get_mut(&a.target).unwrap();
                *d -= 1;
                if *d == 0 {
                    ready.push(a.target);
                }
            }
        }
        (order.len() == self.vertices.len()).then_some(order)
    }

    fn check_word(&self, arrows: &[String]) -> Result<()> {
        for pair in arrows.windows(2) {
            let (x, y) = (self.arrow(&pair[0])?, self.arrow(&pair[1])?);
            if x.source != y.target {
                return Err(Error::NotComposable(x.id.clone(), y.id.clone()));
            }
        }
        Ok(())
    }

    /// Builds the path for a composable word.
    pub fn path(&self, arrows: &[&str]) -> Result<Path> {
        let word: Vec<String> = arrows.iter().map(|s| s.to_string()).collect();
        if word.is_empty() {
            return Err(Error::EmptyCycle);
        }
        self.check_word(&word)?;
        let target = self.arrow(&word[0])?.target;
        let source = self.arrow(word.last().unwrap())?.source;
        Ok(Path {
            source,
            target,
            arrows: word,
        })
    }

    /// Builds a canonical cycle from a word.
    pub fn cycle(&self, arrows: &[&str]) -> Result<Cycle> {
        let word: Vec<String> = arrows.iter().map(|s| s.to_string()).collect();
        canonical_cycle(&word, self)
    }

    /// Total degree of a word of arrows.
    pub fn word_degree(&self, arrows: &[String]) -> Result<i32> {
        arrows.iter().map(|a| self.arrow(a).map(|a| a.degree)).sum()
    }
}

/// A path in composition order. An empty `arrows` list is the lazy path at
/// `source == target`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Path {
    pub source: VertexId,
    pub target: VertexId,
    pub arrows: Vec<String>,
}

impl Path {
    pub fn lazy(v: VertexId) -> Self {
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn arrow(id: impl Into<String>, source: VertexId, target: VertexId) -> Self {
        Path {
            source,
            target,
            arrows: vec![id.into()],
        }
    }

    pub fn is_lazy(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self ∘ other`: `other` first, then `self`. `None` when not composable.
    pub fn compose(&self, other: &Path) -> Option<Path> {
        if self.source != other.target {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend(other.arrows.iter().cloned());
        Some(Path {
            source: other.source,
            target: self.target,
            arrows,
        })
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arrows.is_empty() {
            write!(f, "e{}", self.source)
        } else {
            write!(f, "{}", self.arrows.join("."))
        }
    }
}

/// A finite linear combination of paths with exact rational coefficients.
/// Paths produced by a single cyclic derivative share their endpoints; sums
/// built for identities (commutator totals, differentials of loops) may mix
/// endpoints, so the carrier does not enforce it. See [`PathSum::endpoints`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathSum {
    terms: BTreeMap<Path, Rational>,
}

impl PathSum {
    pub fn zero() -> Self {
        PathSum::default()
    }

    pub fn from_path(p: Path) -> Self {
        Self::from_term(rat(1), p)
    }

    pub fn from_term(c: Rational, p: Path) -> Self {
        let mut s = PathSum::zero();
        s.add_term(c, p);
        s
    }

    pub fn add_term(&mut self, c: Rational, p: Path) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(p) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &Path) -> Rational {
        self.terms.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    /// Common endpoints `(source, target)`, if all terms share them.
    pub fn endpoints(&self) -> Option<(VertexId, VertexId)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let ends = (first.source, first.target);
        it.all(|p| (p.source, p.target) == ends).then_some(ends)
    }

    pub fn add(&self, other: &PathSum) -> PathSum {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(c.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, other: &PathSum) -> PathSum {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> PathSum {
        let mut out = PathSum::zero();
        if c.is_zero() {
            return out;
        }
        for (p, v) in &self.terms {
            out.terms.insert(p.clone(), v * c);
        }
        out
    }

    /// Product in composition order: `self ∘ other`.
    pub fn compose(&self, other: &PathSum) -> PathSum {
        let mut out = PathSum::zero();
        for (p, c) in &self.terms {
            for (q, d) in &other.terms {
                if let Some(pq) = p.compose(q) {
                    out.add_term(c * d, pq);
                }
            }
        }
        out
    }

    /// Keeps only the terms that are loops at `v` (`e_v · x · e_v`).
    pub fn restrict_loops(&self, v: VertexId) -> PathSum {
        PathSum {
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| p.source == v && p.target == v)
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn map_paths(&self, mut f: impl FnMut(&Path) -> PathSum) -> PathSum {
        let mut out = PathSum::zero();
        for (p, c) in &self.terms {
            out = out.add(&f(p).scale(c));
        }
        out
    }
}

impl fmt::Display for PathSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (p, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{}*", format_rational(&mag))?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// An oriented cycle stored in its lexicographically least rotation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cycle {
    arrows: Vec<String>,
}

impl Cycle {
    pub fn arrows(&self) -> &[String] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Canonical form of a word that is already known to be a closed path.
    pub fn from_closed_word(word: Vec<String>) -> Cycle {
        let n = word.len();
        let best = (0..n)
            .map(|r| {
                let mut rot = word[r..].to_vec();
                rot.extend_from_slice(&word[..r]);
                rot
            })
            .min()
            .unwrap_or_default();
        Cycle { arrows: best }
    }

    /// All rotations, starting with the canonical one.
    pub fn rotations(&self) -> Vec<Vec<String>> {
        let n = self.arrows.len();
        (0..n)
            .map(|r| {
                let mut rot = self.arrows[r..].to_vec();
                rot.extend_from_slice(&self.arrows[..r]);
                rot
            })
            .collect()
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.arrows.join("."))
    }
}

/// Normalizes a closed composable word to its canonical rotation.
pub fn canonical_cycle(arrows: &[String], quiver: &IceQuiver) -> Result<Cycle> {
    if arrows.is_empty() {
        return Err(Error::EmptyCycle);
    }
    quiver.check_word(arrows)?;
    let first = quiver.arrow(&arrows[0])?;
    let last = quiver.arrow(arrows.last().unwrap())?;
    if first.target != last.source {
        return Err(Error::NotClosed);
    }
    Ok(Cycle::from_closed_word(arrows.to_vec()))
}

/// A potential: rational combination of cycles up to rotation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Potential {
    terms: BTreeMap<Cycle, Rational>,
}

impl Potential {
    pub fn zero() -> Self {
        Potential::default()
    }

    /// Builds a potential from `(coefficient, word)` pairs, canonicalizing each word.
    pub fn from_words<'a>(
        quiver: &IceQuiver,
        terms: impl IntoIterator<Item = (Rational, &'a [&'a str])>,
    ) -> Result<Self> {
        let mut w = Potential::zero();
        for (c, word) in terms {
            w.add_term(c, quiver.cycle(word)?);
        }
        Ok(w)
    }

    pub fn add_term(&mut self, c: Rational, cycle: Cycle) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(cycle.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&cycle);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Cycle, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, c: &Cycle) -> Rational {
        self.terms.get(c).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Potential) -> Potential {
        let mut out = self.clone();
        for (c, v) in &other.terms {
            out.add_term(v.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Potential {
        self.scale(&rat(-1))
    }

    pub fn scale(&self, s: &Rational) -> Potential {
        let mut out = Potential::zero();
        for (c, v) in &self.terms {
            out.add_term(v * s, c.clone());
        }
        out
    }

    /// Checks every cycle against `quiver` and returns the set of total degrees.
    pub fn degrees(&self, quiver: &IceQuiver) -> Result<BTreeSet<i32>> {
        let mut out = BTreeSet::new();
        for c in self.terms.keys() {
            canonical_cycle(&c.arrows, quiver)?;
            out.insert(quiver.word_degree(&c.arrows)?);
        }
        Ok(out)
    }

    /// Validates cycles and homogeneity; returns the degree (0 for the zero potential).
    pub fn validate(&self, quiver: &IceQuiver) -> Result<i32> {
        let degrees = self.degrees(quiver)?;
        match degrees.len() {
            0 => Ok(0),
            1 => Ok(*degrees.iter().next().unwrap()),
            _ => Err(Error::Validation(format!(
                "potential is not homogeneous (degrees {degrees:?})"
            ))),
        }
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (c, v)) in self.terms.iter().enumerate() {
            let neg = v.is_negative();
            let mag = v.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{}*", format_rational(&mag))?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// `∂_a W`: for each occurrence of `a` in a cycle `u a v`, adds `coeff · v u`.
/// The result runs from `target(a)` to `source(a)`.
pub fn cyclic_derivative(w: &Potential, a: &str, quiver: &IceQuiver) -> Result<PathSum> {
    let arrow = quiver.arrow(a)?;
    let mut out = PathSum::zero();
    for (cycle, coeff) in w.terms() {
        let word = cycle.arrows();
        if !word.iter().any(|x| x == a) {
            continue;
        }
        if quiver.word_degree(word)? != 0 || word.iter().any(|x| quiver.arrow(x).map_or(true, |x| x.degree != 0)) {
            return Err(Error::Unsupported(
                "cyclic derivatives with Koszul signs (graded cycles)".into(),
            ));
        }
        for (p, x) in word.iter().enumerate() {
            if x != a {
                continue;
            }
            let mut cut: Vec<String> = word[p + 1..].to_vec();
            cut.extend_from_slice(&word[..p]);
            let path = Path {
                source: arrow.target,
                target: arrow.source,
                arrows: cut,
            };
            out.add_term(coeff.clone(), path);
        }
    }
    Ok(out)
}

/// Row/column keyed integer matrix: rows over vertices (or orbit
/// representatives), columns over the unfrozen ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExchangeMatrix {
    rows: Vec<VertexId>,
    cols: Vec<VertexId>,
    entries: Vec<Vec<i64>>,
}

impl ExchangeMatrix {
    pub fn new(rows: Vec<VertexId>, cols: Vec<VertexId>, entries: Vec<Vec<i64>>) -> Result<Self> {
        if entries.len() != rows.len() || entries.iter().any(|r| r.len() != cols.len()) {
            return Err(Error::InvalidQuiver("matrix shape mismatch".into()));
        }
        if let Some(c) = cols.iter().find(|c| !rows.contains(c)) {
            return Err(Error::InvalidQuiver(format!("column key {c} is not a row key")));
        }
        let distinct: BTreeSet<_> = rows.iter().collect();
        if distinct.len() != rows.len() {
            return Err(Error::InvalidQuiver("duplicate row key".into()));
        }
        Ok(ExchangeMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: Vec<VertexId>, cols: Vec<VertexId>) -> Result<Self> {
        let entries = vec![vec![0; cols.len()]; rows.len()];
        ExchangeMatrix::new(rows, cols, entries)
    }

    pub fn rows(&self) -> &[VertexId] {
        &self.rows
    }

    pub fn cols(&self) -> &[VertexId] {
        &self.cols
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn row_position(&self, key: VertexId) -> Option<usize> {
        self.rows.iter().position(|r| *r == key)
    }

    pub fn col_position(&self, key: VertexId) -> Option<usize> {
        self.cols.iter().position(|c| *c == key)
    }

    pub fn is_column(&self, key: VertexId) -> bool {
        self.cols.contains(&key)
    }

    /// Entry `b_{row, col}`; `None` if the keys are unknown.
    pub fn get(&self, row: VertexId, col: VertexId) -> Option<i64> {
        Some(self.entries[self.row_position(row)?][self.col_position(col)?])
    }

    /// Entry between any two row keys, using skew-symmetry of the principal part
    /// when `col` is not a column. `None` when neither key is a column.
    pub fn signed_count(&self, from: VertexId, to: VertexId) -> Option<i64> {
        if self.is_column(to) {
            self.get(from, to)
        } else if self.is_column(from) {
            self.get(to, from).map(|x| -x)
        } else {
            None
        }
    }

    pub(crate) fn set(&mut self, r: usize, c: usize, v: i64) {
        self.entries[r][c] = v;
    }

    /// Square part on the column keys.
    pub fn principal(&self) -> Vec<Vec<i64>> {
        self.cols
            .iter()
            .map(|&k| {
                let r = self.row_position(k).unwrap();
                self.entries[r].clone()
            })
            .collect()
    }

    pub fn is_sign_skew_symmetric(&self) -> bool {
        let p = self.principal();
        let n = p.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let (x, y) = (p[i][j], p[j][i]);
                (x == 0 && y == 0) || (x.signum() == -y.signum() && x != 0)
            })
        })
    }

    /// True when `diag(d) · B_principal` is skew-symmetric.
    pub fn is_skew_symmetrized_by(&self, d: &[u64]) -> bool {
        let p = self.principal();
        let n = p.len();
        d.len() == n && (0..n).all(|i| (0..n).all(|j| d[i] as i64 * p[i][j] == -(d[j] as i64) * p[j][i]))
    }

    /// True when `B_principal · diag(d)` is skew-symmetric.
    pub fn is_right_skew_symmetrized_by(&self, d: &[u64]) -> bool {
        let p = self.principal();
        let n = p.len();
        d.len() == n && (0..n).all(|i| (0..n).all(|j| p[i][j] * d[j] as i64 == -(p[j][i] * d[i] as i64)))
    }
}

impl fmt::Display for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .entries
            .iter()
            .flatten()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1)
            .max(self.cols.iter().map(|c| c.to_string().len()).max().unwrap_or(1));
        let key_w = self.rows.iter().map(|r| r.to_string().len()).max().unwrap_or(1);
        write!(f, "{:>key_w$} |", "")?;
        for c in &self.cols {
            write!(f, " {c:>width$}")?;
        }
        writeln!(f)?;
        for (r, row) in self.rows.iter().zip(&self.entries) {
            write!(f, "{r:>key_w$} |")?;
            for x in row {
                write!(f, " {x:>width$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `b̃_{i,j} = #{i → j} − #{j → i}` with rows over all vertices (unfrozen
/// first) and columns over the unfrozen vertices.
pub fn exchange_matrix(q: &IceQuiver) -> Result<ExchangeMatrix> {
    let mut counts: BTreeMap<(VertexId, VertexId), i64> = BTreeMap::new();
    for a in q.arrows() {
        if a.degree != 0 {
            return Err(Error::GradedArrow(a.id.clone()));
        }
        let touches_unfrozen = !q.is_frozen(a.source) || !q.is_frozen(a.target);
        if a.source == a.target {
            if touches_unfrozen {
                return Err(Error::HasLoops(a.id.clone()));
            }
            continue;
        }
        *counts.entry((a.source, a.target)).or_insert(0) += 1;
    }
    for &(s, t) in counts.keys() {
        let touches_unfrozen = !q.is_frozen(s) || !q.is_frozen(t);
        if touches_unfrozen && counts.contains_key(&(t, s)) {
            return Err(Error::HasTwoCycles(s.min(t), s.max(t)));
        }
    }
    let rows = q.row_order();
    let cols = q.unfrozen();
    let entries = rows
        .iter()
        .map(|&i| {
            cols.iter()
                .map(|&j| counts.get(&(i, j)).copied().unwrap_or(0) - counts.get(&(j, i)).copied().unwrap_or(0))
                .collect()
        })
        .collect();
    ExchangeMatrix::new(rows, cols, entries)
}

/// `Σ_a (a ∘ ∂_aW − ∂_aW ∘ a)` over every arrow of `quiver`; identically zero
/// for degree-0 potentials.
pub fn commutator_identity(w: &Potential, quiver: &IceQuiver) -> Result<PathSum> {
    let mut total = PathSum::zero();
    for a in quiver.arrows() {
        let d = cyclic_derivative(w, &a.id, quiver)?;
        let pa = PathSum::from_path(Path::arrow(a.id.clone(), a.source, a.target));
        total = total.add(&pa.compose(&d)).sub(&d.compose(&pa));
    }
    Ok(total)
}
