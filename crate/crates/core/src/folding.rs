//! The folded ice quiver `(Q_G, F_G)`, the folded potential `W_G`, and the
//! skew group algebra `kQ∗G` they are read off from.
//!
//! Inside this module paths of `kQ∗G` are stored in traversal order: the word
//! `[c, a, e]` runs along `c` first. A product `x·y` is nonzero when
//! `target(x) == source(y)`. Cycles handed back as [`Potential`]s use the
//! composition order of [`crate::quiver`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::characters::CharacterTable;
use crate::cyclotomic::{Cyc, Cyclotomic};
use crate::error::{Error, Result};
use crate::group::{self, check_action, potential_invariant, Elem, GroupAction, Orbit};
use crate::linalg::{self, Field};
use crate::quiver::{
    exchange_matrix, format_rational, Cycle, ExchangeMatrix, GradedArrow, IceQuiver, Potential, Rational, Vertex,
    VertexId,
};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SkewKey {
    pub source: VertexId,
    pub target: VertexId,
    /// Arrow ids in traversal order; empty for `e_source`.
    pub word: Vec<String>,
    pub g: Elem,
}

/// Element of `kQ∗G`: a finite sum of `coefficient · (path ∗ g)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SkewGroupElement {
    terms: BTreeMap<SkewKey, Cyc>,
}

impl SkewGroupElement {
    pub fn terms(&self) -> impl Iterator<Item = (&SkewKey, &Cyc)> {
        self.terms.iter()
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
}

/// Arithmetic in `kQ∗G` over `Q(ζ_m)`.
#[derive(Clone, Debug)]
pub struct SkewAlgebra<'a> {
    pub quiver: &'a IceQuiver,
    pub action: &'a GroupAction,
    pub field: Cyclotomic,
}

impl<'a> SkewAlgebra<'a> {
    pub fn new(quiver: &'a IceQuiver, action: &'a GroupAction) -> Self {
        SkewAlgebra {
            quiver,
            action,
            field: Cyclotomic::new(action.group().exponent()),
        }
    }

    pub fn zero(&self) -> SkewGroupElement {
        SkewGroupElement::default()
    }

    fn add_term(&self, x: &mut SkewGroupElement, key: SkewKey, c: Cyc) {
        let k = &self.field;
        if k.is_zero(&c) {
            return;
        }
        let sum = match x.terms.get(&key) {
            Some(old) => k.add(old, &c),
            None => c,
        };
        if k.is_zero(&sum) {
            x.terms.remove(&key);
        } else {
            x.terms.insert(key, sum);
        }
    }

    /// `c · (e_v ∗ g)`.
    pub fn vertex(&self, v: VertexId, g: Elem, c: Cyc) -> SkewGroupElement {
        let mut x = self.zero();
        self.add_term(
            &mut x,
            SkewKey {
                source: v,
                target: v,
                word: vec![],
                g,
            },
            c,
        );
        x
    }

    /// `c · (path ∗ g)` for a traversal-order word.
    pub fn path(&self, word: &[&str], g: Elem, c: Cyc) -> Result<SkewGroupElement> {
        if word.is_empty() {
            return Err(Error::EmptyCycle);
        }
        let arrows: Vec<&GradedArrow> = word.iter().map(|a| self.quiver.arrow(a)).collect::<Result<_>>()?;
        for p in arrows.windows(2) {
            if p[0].target != p[1].source {
                return Err(Error::NotComposable(p[0].id.clone(), p[1].id.clone()));
            }
        }
        let mut x = self.zero();
        self.add_term(
            &mut x,
            SkewKey {
                source: arrows[0].source,
                target: arrows.last().unwrap().target,
                word: word.iter().map(|s| s.to_string()).collect(),
                g,
            },
            c,
        );
        Ok(x)
    }

    pub fn add(&self, x: &SkewGroupElement, y: &SkewGroupElement) -> SkewGroupElement {
        let mut out = x.clone();
        for (k, c) in &y.terms {
            self.add_term(&mut out, k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, x: &SkewGroupElement, c: &Cyc) -> SkewGroupElement {
        let mut out = self.zero();
        for (k, v) in &x.terms {
            self.add_term(&mut out, k.clone(), self.field.mul(v, c));
        }
        out
    }

    /// `(x∗g)(y∗h) = x·ᵍy ∗ gh`, extended bilinearly.
    pub fn multiply(&self, x: &SkewGroupElement, y: &SkewGroupElement) -> SkewGroupElement {
        let grp = self.action.group();
        let mut out = self.zero();
        for (kx, cx) in &x.terms {
            for (ky, cy) in &y.terms {
                let src = self.action.act_vertex(kx.g, ky.source);
                if kx.target != src {
                    continue;
                }
                let mut sign = 1i64;
                let mut word = kx.word.clone();
                for a in &ky.word {
                    let im = self.action.act_arrow(kx.g, a);
                    sign *= im.sign as i64;
                    word.push(im.arrow);
                }
                let key = SkewKey {
                    source: kx.source,
                    target: self.action.act_vertex(kx.g, ky.target),
                    word,
                    g: grp.mul(kx.g, ky.g),
                };
                let c = self.field.mul(cx, cy);
                let c = if sign < 0 { self.field.neg(&c) } else { c };
                self.add_term(&mut out, key, c);
            }
        }
        out
    }

    pub fn format(&self, x: &SkewGroupElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let grp = self.action.group();
        let parts: Vec<String> = x
            .terms
            .iter()
            .map(|(k, c)| {
                let path = if k.word.is_empty() {
                    format!("e{}", k.source)
                } else {
                    k.word.join(".")
                };
                format!("{}*({}*{})", self.field.format(c), path, grp.name(k.g))
            })
            .collect();
        parts.join(" + ")
    }
}

/// `(x∗g)(y∗h) = x·ᵍy ∗ gh` on the algebra of `act`.
pub fn skew_multiply(x: &SkewGroupElement, y: &SkewGroupElement, q: &IceQuiver, act: &GroupAction) -> SkewGroupElement {
    SkewAlgebra::new(q, act).multiply(x, y)
}

/// Which orbit member serves as the base vertex `i ∈ [G\Q_0]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representatives {
    #[default]
    Least,
    Greatest,
}

/// Stabilizer data of one orbit.
#[derive(Clone, Debug)]
struct Stab {
    orbit: Orbit,
    base: VertexId,
    elems: Vec<Elem>,
    local: BTreeMap<Elem, usize>,
    table: CharacterTable,
    /// member ↦ least `y` with `y · base = member`
    coset: BTreeMap<VertexId, Elem>,
}

impl Stab {
    fn chi(&self, rho: usize, h: Elem) -> &Cyc {
        self.table.value(rho, self.local[&h])
    }
}

fn stab_data(
    act: &GroupAction,
    orbit: &Orbit,
    choice: Representatives,
    tables: &BTreeMap<VertexId, CharacterTable>,
) -> Result<Stab> {
    let base = match choice {
        Representatives::Least => orbit.members[0],
        Representatives::Greatest => *orbit.members.last().unwrap(),
    };
    let grp = act.group();
    let (sub, elems) = grp.subgroup(&act.stabilizer(base))?;
    let m = grp.exponent();
    let table = match tables.get(&orbit.representative()) {
        Some(t) => {
            if t.group().order() != sub.order() || t.field().order() != m {
                return Err(Error::InvalidCharacterTable(format!(
                    "table for vertex {} does not match its stabilizer",
                    orbit.representative()
                )));
            }
            t.clone()
        }
        None if sub.is_abelian() => CharacterTable::abelian(&sub, m)?,
        None => return Err(Error::NonAbelianStabilizer(orbit.representative())),
    };
    let local = elems.iter().enumerate().map(|(k, &g)| (g, k)).collect();
    let coset = orbit
        .members
        .iter()
        .map(|&v| (v, act.transporter(base, v).expect("member of the orbit")))
        .collect();
    Ok(Stab {
        orbit: orbit.clone(),
        base,
        elems,
        local,
        table,
        coset,
    })
}

/// Decomposition of `M(i, j; τ)` as a `G_i`-module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MSpace {
    pub i: VertexId,
    pub j: VertexId,
    pub tau: String,
    pub dim: usize,
    /// Spanning elements `a ∗ y_a` (times `kG_j e_τ`).
    pub spanning: Vec<String>,
    /// `(ρ, multiplicity)` over the irreducibles of `G_i`.
    pub decomposition: Vec<(String, i64)>,
}

impl MSpace {
    pub fn multiplicity(&self, rho: &str) -> i64 {
        self.decomposition.iter().find(|(n, _)| n == rho).map_or(0, |(_, m)| *m)
    }
}

impl fmt::Display for MSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .decomposition
            .iter()
            .filter(|(_, m)| *m != 0)
            .map(|(n, m)| if *m == 1 { n.clone() } else { format!("{m}*{n}") })
            .collect();
        write!(
            f,
            "M({},{};{}) = span({}) ~ {}",
            self.i,
            self.j,
            self.tau,
            self.spanning.join(", "),
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join(" + ")
            }
        )
    }
}

fn m_space_inner(
    q: &IceQuiver,
    act: &GroupAction,
    si: &Stab,
    sj: &Stab,
    tau: usize,
    frozen_only: bool,
) -> Result<MSpace> {
    let k = si.table.field().clone();
    let grp = act.group();
    let (i, j) = (si.base, sj.base);
    let arrows: Vec<&GradedArrow> = q
        .arrows()
        .iter()
        .filter(|a| a.source == i && sj.orbit.contains(a.target))
        .filter(|a| !frozen_only || q.is_frozen_arrow(&a.id))
        .collect();
    let transport = |a: &GradedArrow| act.transporter(j, a.target).expect("target in the orbit of j");
    let mut chi_m = Vec::with_capacity(si.elems.len());
    for &h in &si.elems {
        let mut acc = k.zero();
        for a in &arrows {
            let im = act.act_arrow(h, &a.id);
            if im.arrow != a.id {
                continue;
            }
            let y = transport(a);
            let conj = grp.mul(grp.mul(grp.inv(y), h), y);
            let v = sj.chi(tau, conj).clone();
            acc = if im.sign < 0 { k.sub(&acc, &v) } else { k.add(&acc, &v) };
        }
        chi_m.push(acc);
    }
    let mult = si.table.decompose(&chi_m)?;
    let decomposition = si
        .table
        .names()
        .iter()
        .zip(&mult)
        .map(|(n, m)| {
            if !m.is_integer() || m.is_negative() {
                return Err(Error::InvalidCharacterTable(format!(
                    "multiplicity {} of {n} is not a natural number",
                    format_rational(m)
                )));
            }
            Ok((n.clone(), m.to_integer().try_into().unwrap_or(i64::MAX)))
        })
        .collect::<Result<_>>()?;
    let spanning = arrows
        .iter()
        .map(|a| {
            let y = grp.name(transport(a)).to_string();
            if sj.elems.len() > 1 {
                format!("{}*{}e_{}", a.id, y, sj.table.names()[tau])
            } else {
                format!("{}*{}", a.id, y)
            }
        })
        .collect();
    Ok(MSpace {
        i,
        j,
        tau: sj.table.names()[tau].clone(),
        dim: arrows.len() * sj.table.dim(tau),
        spanning,
        decomposition,
    })
}

/// `M(i, j; τ)` for vertices `i`, `j` and an irreducible `τ` of `G_j` (by name).
pub fn m_space(
    q: &IceQuiver,
    act: &GroupAction,
    i: VertexId,
    j: VertexId,
    tau: &str,
    tables: &BTreeMap<VertexId, CharacterTable>,
) -> Result<MSpace> {
    let orbits = group::orbits(q, act);
    let oi = group::orbit_of(&orbits, i).ok_or(Error::UnknownVertex(i))?;
    let oj = group::orbit_of(&orbits, j).ok_or(Error::UnknownVertex(j))?;
    let mut si = stab_data(act, oi, Representatives::Least, tables)?;
    let mut sj = stab_data(act, oj, Representatives::Least, tables)?;
    for (s, v) in [(&mut si, i), (&mut sj, j)] {
        if s.base != v {
            let (sub, elems) = act.group().subgroup(&act.stabilizer(v))?;
            s.base = v;
            s.local = elems.iter().enumerate().map(|(k, &g)| (g, k)).collect();
            s.elems = elems;
            if !tables.contains_key(&s.orbit.representative()) {
                if !sub.is_abelian() {
                    return Err(Error::NonAbelianStabilizer(v));
                }
                s.table = CharacterTable::abelian(&sub, act.group().exponent())?;
            }
        }
    }
    let t = sj
        .table
        .names()
        .iter()
        .position(|n| n == tau)
        .ok_or_else(|| Error::Validation(format!("unknown irreducible `{tau}` of the stabilizer of {j}")))?;
    m_space_inner(q, act, &si, &sj, t, false)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldedVertex {
    pub id: VertexId,
    /// Least member of the orbit.
    pub base: VertexId,
    pub irrep: usize,
    pub irrep_name: String,
    pub frozen: bool,
}

impl FoldedVertex {
    pub fn label(&self) -> String {
        format!("({},{})", self.base, self.irrep_name)
    }
}

/// Image of a folded arrow in `ε(kQ∗G)ε`.
#[derive(Clone, Debug)]
pub struct ArrowBasis {
    pub arrow: String,
    /// The spanning element `a ∗ y` whose projection was kept.
    pub spanning: String,
    pub element: SkewGroupElement,
}

#[derive(Clone, Debug)]
pub struct FoldedQuiver {
    pub quiver: IceQuiver,
    pub vertices: Vec<FoldedVertex>,
    pub orbits: Vec<Orbit>,
    pub m_spaces: Vec<MSpace>,
    /// Present when every stabilizer is abelian.
    pub basis: Option<Vec<ArrowBasis>>,
    pub notes: Vec<String>,
    pub field: Cyclotomic,
    stabs: Vec<Stab>,
}

impl FoldedQuiver {
    pub fn vertex(&self, id: VertexId) -> Option<&FoldedVertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<&FoldedVertex> {
        self.vertices.iter().find(|v| v.label() == label)
    }

    /// `F_G` as a quiver of its own.
    pub fn frozen_part(&self) -> IceQuiver {
        self.quiver.frozen_subquiver()
    }

    pub fn arrow_basis(&self, arrow: &str) -> Option<&ArrowBasis> {
        self.basis.as_ref()?.iter().find(|b| b.arrow == arrow)
    }

    /// Number of arrows `(i,ρ) → (j,τ)`, by labels.
    pub fn arrow_count(&self, from: &str, to: &str) -> usize {
        match (self.vertex_by_label(from), self.vertex_by_label(to)) {
            (Some(s), Some(t)) => self
                .quiver
                .arrows()
                .iter()
                .filter(|a| a.source == s.id && a.target == t.id)
                .count(),
            _ => 0,
        }
    }
}

impl fmt::Display for FoldedQuiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices:")?;
        for v in &self.vertices {
            writeln!(
                f,
                "  {} = {}{}",
                v.id,
                v.label(),
                if v.frozen { " [frozen]" } else { "" }
            )?;
        }
        writeln!(f, "arrows:")?;
        for a in self.quiver.arrows() {
            let s = self.vertex(a.source).unwrap().label();
            let t = self.vertex(a.target).unwrap().label();
            let frozen = if self.quiver.is_frozen_arrow(&a.id) {
                " [frozen]"
            } else {
                ""
            };
            let basis = self
                .arrow_basis(&a.id)
                .map(|b| format!("  from {}", b.spanning))
                .unwrap_or_default();
            writeln!(f, "  {}: {} -> {}{}{}", a.id, s, t, frozen, basis)?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct FoldOptions {
    pub representatives: Representatives,
    /// Character tables for stabilizers, keyed by the orbit's least member.
    pub tables: BTreeMap<VertexId, CharacterTable>,
}

/// Builds `(Q_G, F_G)`.
pub fn fold_quiver(q: &IceQuiver, act: &GroupAction) -> Result<FoldedQuiver> {
    fold_quiver_with(q, act, &FoldOptions::default())
}

pub fn fold_quiver_with(q: &IceQuiver, act: &GroupAction, opts: &FoldOptions) -> Result<FoldedQuiver> {
    check_action(q, act).into_result()?;
    let mut orbits = group::orbits(q, act);
    orbits.sort_by_key(Orbit::representative);
    let stabs: Vec<Stab> = orbits
        .iter()
        .map(|o| stab_data(act, o, opts.representatives, &opts.tables))
        .collect::<Result<_>>()?;
    let trivial = act.group().order() == 1;
    let mut vertices = Vec::new();
    let mut next: VertexId = 1;
    for s in &stabs {
        for (r, name) in s.table.names().iter().enumerate() {
            vertices.push(FoldedVertex {
                id: if trivial { s.orbit.representative() } else { next },
                base: s.orbit.representative(),
                irrep: r,
                irrep_name: name.clone(),
                frozen: s.orbit.frozen,
            });
            next += 1;
        }
    }
    let abelian = stabs
        .iter()
        .all(|s| s.table.is_linear() && s.elems.len() == s.table.len());
    let alg = SkewAlgebra::new(q, act);
    let wide = q.vertex_ids().any(|v| v >= 10);
    let mut arrows: Vec<GradedArrow> = Vec::new();
    let mut frozen_arrows: Vec<String> = Vec::new();
    let mut basis: Vec<ArrowBasis> = Vec::new();
    let mut m_spaces = Vec::new();
    let mut notes = Vec::new();
    for si in &stabs {
        for sj in &stabs {
            let ms: Vec<MSpace> = (0..sj.table.len())
                .map(|tau| m_space_inner(q, act, si, sj, tau, false))
                .collect::<Result<_>>()?;
            for (tau, m) in ms.iter().enumerate() {
                let n = if si.orbit.frozen && sj.orbit.frozen {
                    Some(m_space_inner(q, act, si, sj, tau, true)?)
                } else {
                    None
                };
                let tgt = vertices
                    .iter()
                    .find(|v| v.base == sj.orbit.representative() && v.irrep == tau)
                    .unwrap()
                    .clone();
                for rho in 0..si.table.len() {
                    let count = m.decomposition[rho].1 as usize;
                    if count == 0 {
                        continue;
                    }
                    let frozen_count = n.as_ref().map_or(0, |n| n.decomposition[rho].1 as usize);
                    let src = vertices
                        .iter()
                        .find(|v| v.base == si.orbit.representative() && v.irrep == rho)
                        .unwrap()
                        .clone();
                    let stem = if wide {
                        format!("x{}_{}", src.base, tgt.base)
                    } else {
                        format!("x{}{}", src.base, tgt.base)
                    };
                    let targets = ms.iter().filter(|m| m.decomposition[rho].1 > 0).count();
                    let suffix = if si.table.len() > 1 && sj.table.len() > 1 && targets > 1 {
                        format!("{}{}", src.irrep_name, tgt.irrep_name)
                    } else if si.table.len() > 1 {
                        src.irrep_name.clone()
                    } else if sj.table.len() > 1 {
                        tgt.irrep_name.clone()
                    } else {
                        String::new()
                    };
                    if si.table.len() == 1 && sj.table.len() > 1 && tau == 1 {
                        notes.push(format!(
                            "arrows {stem}{} .. {stem}{} out of {} share the unsuffixed label {stem}",
                            sj.table.names()[0],
                            sj.table.names()[sj.table.len() - 1],
                            src.label()
                        ));
                    }
                    let chosen = if abelian {
                        Some(choose_basis(&alg, si, sj, rho, tau, count, frozen_count)?)
                    } else {
                        None
                    };
                    for c in 0..count {
                        let id = if trivial {
                            chosen
                                .as_ref()
                                .map(|ch| ch[c].0.clone())
                                .unwrap_or_else(|| format!("{stem}{suffix}"))
                        } else if count == 1 {
                            format!("{stem}{suffix}")
                        } else {
                            format!("{stem}{suffix}_{}", c + 1)
                        };
                        if c < frozen_count {
                            frozen_arrows.push(id.clone());
                        }
                        arrows.push(GradedArrow {
                            id: id.clone(),
                            source: src.id,
                            target: tgt.id,
                            degree: 0,
                        });
                        if let Some(ch) = &chosen {
                            basis.push(ArrowBasis {
                                arrow: id,
                                spanning: ch[c].1.clone(),
                                element: ch[c].2.clone(),
                            });
                        }
                    }
                }
                m_spaces.push(m.clone());
            }
        }
    }
    if trivial {
        arrows.sort_by_key(|a| q.arrow_position(&a.id));
        basis.sort_by_key(|b| q.arrow_position(&b.arrow));
    }
    let qg = IceQuiver::new(
        format!("{}_G", q.name()),
        vertices
            .iter()
            .map(|v| Vertex {
                id: v.id,
                label: v.label(),
            })
            .collect(),
        vertices.iter().filter(|v| v.frozen).map(|v| v.id),
        arrows,
        Some(frozen_arrows),
    )?;
    Ok(FoldedQuiver {
        quiver: qg,
        vertices,
        orbits,
        m_spaces,
        basis: abelian.then_some(basis),
        notes,
        field: alg.field.clone(),
        stabs,
    })
}

/// `Σ_{k∈G_i} c_k (e_v ∗ y k)` with `e_ρ = Σ c_k k`.
fn left_idem(alg: &SkewAlgebra, s: &Stab, rho: usize, v: VertexId, y: Elem) -> SkewGroupElement {
    let grp = alg.action.group();
    let coeffs = s.table.idempotent(rho);
    let mut out = alg.zero();
    for (local, &g) in s.elems.iter().enumerate() {
        out = alg.add(&out, &alg.vertex(v, grp.mul(y, g), coeffs[local].clone()));
    }
    out
}

/// `Σ_{k∈G_i} c_k (e_base ∗ k y^{-1})`.
fn right_idem(alg: &SkewAlgebra, s: &Stab, rho: usize, y: Elem) -> SkewGroupElement {
    let grp = alg.action.group();
    let coeffs = s.table.idempotent(rho);
    let mut out = alg.zero();
    for (local, &g) in s.elems.iter().enumerate() {
        out = alg.add(&out, &alg.vertex(s.base, grp.mul(g, grp.inv(y)), coeffs[local].clone()));
    }
    out
}

fn vectors<'x>(k: &Cyclotomic, elems: impl IntoIterator<Item = &'x SkewGroupElement>) -> (Vec<Vec<Cyc>>, Vec<SkewKey>) {
    let elems: Vec<&SkewGroupElement> = elems.into_iter().collect();
    let keys: BTreeSet<SkewKey> = elems.iter().flat_map(|e| e.terms.keys().cloned()).collect();
    let keys: Vec<SkewKey> = keys.into_iter().collect();
    let rows = elems
        .iter()
        .map(|e| {
            keys.iter()
                .map(|key| e.terms.get(key).cloned().unwrap_or_else(|| k.zero()))
                .collect()
        })
        .collect();
    (rows, keys)
}

fn rank_of(k: &Cyclotomic, elems: &[SkewGroupElement]) -> usize {
    let (rows, _) = vectors(k, elems.iter());
    linalg::rank(k, &rows)
}

/// Greedy basis of the folded arrow space `(i,ρ) → (j,τ)`: projections of the
/// spanning elements in arrow-id order, frozen arrows first.
fn choose_basis(
    alg: &SkewAlgebra,
    si: &Stab,
    sj: &Stab,
    rho: usize,
    tau: usize,
    count: usize,
    frozen_count: usize,
) -> Result<Vec<(String, String, SkewGroupElement)>> {
    let q = alg.quiver;
    let act = alg.action;
    let grp = act.group();
    let k = &alg.field;
    let left = left_idem(alg, si, rho, si.base, grp.identity());
    let right = left_idem(alg, sj, tau, sj.base, grp.identity());
    let mut candidates: Vec<&GradedArrow> = q
        .arrows()
        .iter()
        .filter(|a| a.source == si.base && sj.orbit.contains(a.target))
        .collect();
    candidates.sort_by_key(|a| (!q.is_frozen_arrow(&a.id), a.id.clone()));
    let mut chosen: Vec<(String, String, SkewGroupElement)> = Vec::new();
    let mut frozen_seen = 0;
    for a in candidates {
        if chosen.len() == count {
            break;
        }
        let y = act.transporter(sj.base, a.target).unwrap();
        let x = alg.path(&[a.id.as_str()], y, k.one())?;
        let proj = alg.multiply(&alg.multiply(&left, &x), &right);
        if proj.is_zero() {
            continue;
        }
        let mut trial: Vec<SkewGroupElement> = chosen.iter().map(|c| c.2.clone()).collect();
        trial.push(proj.clone());
        if rank_of(k, &trial) == trial.len() {
            if q.is_frozen_arrow(&a.id) {
                frozen_seen += 1;
            } else if frozen_seen < frozen_count {
                return Err(Error::Linear(
                    "frozen arrows do not span the frozen folded arrows".into(),
                ));
            }
            chosen.push((a.id.clone(), format!("{}*{}", a.id, grp.name(y)), proj));
        }
    }
    if chosen.len() != count {
        return Err(Error::Linear(format!(
            "found {} independent arrow elements, expected {count}",
            chosen.len()
        )));
    }
    Ok(chosen)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaCheck {
    pub source: String,
    pub target: String,
    pub arrows: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaReport {
    pub checks: Vec<GammaCheck>,
}

impl GammaReport {
    pub fn passes(&self) -> bool {
        self.checks.iter().all(|c| c.arrows == c.rank)
    }
}

/// Compares, for every pair of folded vertices, the arrow count of `Q_G` with
/// the dimension of `(e_i∗e_ρ)(kQ_1∗G)(e_j∗e_τ)` computed by exact ranks.
pub fn verify_gamma(q: &IceQuiver, act: &GroupAction) -> Result<GammaReport> {
    let folded = fold_quiver(q, act)?;
    if folded.basis.is_none() {
        let bad = folded
            .stabs
            .iter()
            .find(|s| !s.table.is_linear())
            .map_or(0, |s| s.orbit.representative());
        return Err(Error::NonAbelianStabilizer(bad));
    }
    let alg = SkewAlgebra::new(q, act);
    let grp = act.group();
    let k = alg.field.clone();
    let mut checks = Vec::new();
    for u in &folded.vertices {
        let su = folded
            .stabs
            .iter()
            .find(|s| s.orbit.representative() == u.base)
            .unwrap();
        let left = left_idem(&alg, su, u.irrep, su.base, grp.identity());
        for v in &folded.vertices {
            let sv = folded
                .stabs
                .iter()
                .find(|s| s.orbit.representative() == v.base)
                .unwrap();
            let right = left_idem(&alg, sv, v.irrep, sv.base, grp.identity());
            let mut span = Vec::new();
            for a in q.arrows() {
                for g in grp.elements() {
                    let x = alg.path(&[a.id.as_str()], g, k.one())?;
                    let p = alg.multiply(&alg.multiply(&left, &x), &right);
                    if !p.is_zero() {
                        span.push(p);
                    }
                }
            }
            let rank = rank_of(&k, &span);
            let arrows = folded
                .quiver
                .arrows()
                .iter()
                .filter(|a| a.source == u.id && a.target == v.id)
                .count();
            checks.push(GammaCheck {
                source: u.label(),
                target: v.label(),
                arrows,
                rank,
            });
        }
    }
    Ok(GammaReport { checks })
}

/// `W_G` with coefficients in `Q(ζ_m)`, on the arrows of `quiver`.
#[derive(Clone, Debug)]
pub struct FoldedPotential {
    pub folded: FoldedQuiver,
    pub terms: BTreeMap<Cycle, Cyc>,
}

impl FoldedPotential {
    pub fn field(&self) -> &Cyclotomic {
        &self.folded.field
    }

    /// The potential when every coefficient is rational.
    pub fn rational(&self) -> Option<Potential> {
        let mut w = Potential::zero();
        for (c, v) in &self.terms {
            w.add_term(self.folded.field.to_rational(v)?, c.clone());
        }
        Some(w)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn format(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, v)| format!("{}*{}", self.folded.field.format(v), c))
            .collect();
        parts.join(" + ")
    }
}

/// Computes `W_G`: first `W' = Σ_j b_j W a_j` in `ε(kQ∗G)ε` over the complete
/// family `ε_(y,i,ρ) = e_{y·i} ∗ y e_ρ y^{-1}`, then the unique expansion of
/// each `ε_(i,ρ) W' ε_(i,ρ)` in closed paths of `Q_G`.
pub fn fold_potential(q: &IceQuiver, act: &GroupAction, w: &Potential) -> Result<FoldedPotential> {
    fold_potential_with(q, act, w, &FoldOptions::default())
}

pub fn fold_potential_with(
    q: &IceQuiver,
    act: &GroupAction,
    w: &Potential,
    opts: &FoldOptions,
) -> Result<FoldedPotential> {
    if let Some(a) = q.arrows().iter().find(|a| a.degree != 0) {
        return Err(Error::Unsupported(format!(
            "folding potentials with graded arrows (`{}` has degree {})",
            a.id, a.degree
        )));
    }
    w.validate(q)?;
    if !potential_invariant(w, act) {
        return Err(Error::NotInvariant);
    }
    let folded = fold_quiver_with(q, act, opts)?;
    let basis = match &folded.basis {
        Some(b) => b.clone(),
        None => {
            let bad = folded
                .stabs
                .iter()
                .find(|s| !s.table.is_linear())
                .map_or(0, |s| s.orbit.representative());
            return Err(Error::NonAbelianStabilizer(bad));
        }
    };
    let alg = SkewAlgebra::new(q, act);
    let k = alg.field.clone();
    let mut wk = alg.zero();
    for (cycle, c) in w.terms() {
        let mut word: Vec<&str> = cycle.arrows().iter().map(String::as_str).collect();
        word.reverse();
        wk = alg.add(
            &wk,
            &alg.path(&word, act.group().identity(), k.from_rational(c.clone()))?,
        );
    }
    // W' split by folded base vertex and path length
    let mut pieces: BTreeMap<(VertexId, usize), SkewGroupElement> = BTreeMap::new();
    for fv in &folded.vertices {
        let s = folded
            .stabs
            .iter()
            .find(|s| s.orbit.representative() == fv.base)
            .unwrap();
        let mut acc = alg.zero();
        for (&v, &y) in &s.coset {
            let a_j = left_idem(&alg, s, fv.irrep, v, y);
            let b_j = right_idem(&alg, s, fv.irrep, y);
            acc = alg.add(&acc, &alg.multiply(&alg.multiply(&b_j, &wk), &a_j));
        }
        for (key, c) in acc.terms() {
            let mut single = alg.zero();
            alg.add_term(&mut single, key.clone(), c.clone());
            let e = pieces.entry((fv.id, key.word.len())).or_default();
            *e = alg.add(e, &single);
        }
    }
    let basis_map: BTreeMap<&str, &SkewGroupElement> = basis.iter().map(|b| (b.arrow.as_str(), &b.element)).collect();
    let mut terms: BTreeMap<Cycle, Cyc> = BTreeMap::new();
    for ((u, len), piece) in &pieces {
        if piece.is_zero() {
            continue;
        }
        let closed = closed_paths(&folded.quiver, *u, *len);
        let images: Vec<SkewGroupElement> = closed
            .iter()
            .map(|word| {
                let mut it = word.iter();
                let first = basis_map[it.next().unwrap().as_str()].clone();
                it.fold(first, |acc, a| alg.multiply(&acc, basis_map[a.as_str()]))
            })
            .collect();
        let mut all = images.clone();
        all.push(piece.clone());
        let (rows, _) = vectors(&k, all.iter());
        let cols = linalg::transpose(&rows[..images.len()], rows[0].len());
        let rhs = rows[images.len()].clone();
        if linalg::rank(&k, &rows[..images.len()]) != images.len() {
            return Err(Error::Linear("images of closed paths of Q_G are dependent".into()));
        }
        let lambda = linalg::solve(&k, &cols, &rhs)
            .ok_or_else(|| Error::Linear(format!("W' at vertex {u} is not in the span of closed paths of Q_G")))?;
        for (word, l) in closed.iter().zip(lambda) {
            if k.is_zero(&l) {
                continue;
            }
            let mut comp = word.clone();
            comp.reverse();
            let cyc = Cycle::from_closed_word(comp);
            let sum = match terms.get(&cyc) {
                Some(old) => k.add(old, &l),
                None => l,
            };
            if k.is_zero(&sum) {
                terms.remove(&cyc);
            } else {
                terms.insert(cyc, sum);
            }
        }
    }
    Ok(FoldedPotential { folded, terms })
}

/// Closed paths at `u` of length `len`, as traversal-order words.
fn closed_paths(q: &IceQuiver, u: VertexId, len: usize) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    let mut word = Vec::new();
    fn go(q: &IceQuiver, u: VertexId, at: VertexId, len: usize, word: &mut Vec<String>, out: &mut Vec<Vec<String>>) {
        if word.len() == len {
            if at == u {
                out.push(word.clone());
            }
            return;
        }
        for a in q.arrows().iter().filter(|a| a.source == at) {
            word.push(a.id.clone());
            go(q, u, a.target, len, word, out);
            word.pop();
        }
    }
    if len > 0 {
        go(q, u, u, len, &mut word, &mut out);
    }
    out
}

/// Rescales arrows so that as many terms as possible get coefficient ±1:
/// terms are visited in canonical order and the first arrow of a term whose
/// scale is still free, occurring once, absorbs the coefficient's magnitude.
/// Returns the rescaled potential and the scale `s` of each arrow, meaning the
/// new basis element is `s` times the old one.
pub fn normalize_scales(w: &Potential) -> (Potential, BTreeMap<String, Rational>) {
    let mut scales: BTreeMap<String, Rational> = BTreeMap::new();
    let coefficient = |c: &Cycle, v: &Rational, scales: &BTreeMap<String, Rational>| -> Rational {
        c.arrows().iter().fold(v.clone(), |acc, a| {
            acc / scales.get(a).cloned().unwrap_or_else(Rational::one)
        })
    };
    for (c, v) in w.terms() {
        let cur = coefficient(c, v, &scales);
        let free = c
            .arrows()
            .iter()
            .find(|a| !scales.contains_key(*a) && c.arrows().iter().filter(|b| b == a).count() == 1);
        if let Some(a) = free.filter(|_| !cur.abs().is_one()) {
            scales.insert(a.clone(), cur.abs());
        }
        for a in c.arrows() {
            scales.entry(a.clone()).or_insert_with(Rational::one);
        }
    }
    scales.retain(|_, s| !s.is_one());
    let mut out = Potential::zero();
    for (c, v) in w.terms() {
        out.add_term(coefficient(c, v, &scales), c.clone());
    }
    (out, scales)
}

/// Exchange matrix of `Q_G` collapsed to orbits: `B_{I,J} = Σ_τ dim τ ·
/// b_{(i,ρ),(j,τ)}` for a fixed `ρ`, with rows and columns keyed by least
/// orbit members. Fails when the sum depends on `ρ`.
pub fn collapse_exchange(folded: &FoldedQuiver) -> Result<ExchangeMatrix> {
    let b = exchange_matrix(&folded.quiver)?;
    let mut orbits = folded.orbits.clone();
    orbits.sort_by_key(|o| (o.frozen, o.representative()));
    let rows: Vec<VertexId> = orbits.iter().map(Orbit::representative).collect();
    let cols: Vec<VertexId> = orbits.iter().filter(|o| !o.frozen).map(Orbit::representative).collect();
    let mut entries = Vec::new();
    for &i in &rows {
        let mut row = Vec::new();
        for &j in &cols {
            let sj = folded.stabs.iter().find(|s| s.orbit.representative() == j).unwrap();
            let mut values = BTreeSet::new();
            for fi in folded.vertices.iter().filter(|v| v.base == i) {
                let mut total = 0i64;
                for fj in folded.vertices.iter().filter(|v| v.base == j) {
                    let d = sj.table.dim(fj.irrep) as i64;
                    total += d * b.signed_count(fi.id, fj.id).unwrap_or(0);
                }
                values.insert(total);
            }
            if values.len() != 1 {
                return Err(Error::NotWellDefined { row: i, col: j });
            }
            row.push(*values.iter().next().unwrap());
        }
        entries.push(row);
    }
    ExchangeMatrix::new(rows, cols, entries)
}
