//! Finite groups given by multiplication tables and their monomial actions on
//! ice quivers.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::{Cycle, ExchangeMatrix, IceQuiver, Path, PathSum, Potential, VertexId};

/// Index of a group element in its table.
pub type Elem = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    names: Vec<String>,
    mul: Vec<Vec<Elem>>,
    identity: Elem,
    inverse: Vec<Elem>,
}

impl FiniteGroup {
    /// Validates a Cayley table (`mul[g][h] = gh`) and derives identity and inverses.
    pub fn from_table(names: Vec<String>, mul: Vec<Vec<Elem>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty group".into()));
        }
        if mul.len() != n || mul.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGroup("table is not square".into()));
        }
        if mul.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidGroup("table entry out of range".into()));
        }
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != n {
            return Err(Error::InvalidGroup("duplicate element name".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = vec![0; n];
        for g in 0..n {
            inverse[g] = (0..n)
                .find(|&h| mul[g][h] == identity && mul[h][g] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("`{}` has no inverse", names[g])))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails on ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            names,
            mul,
            identity,
            inverse,
        })
    }

    /// `Z/m` with elements `e, g, g^2, ...`.
    pub fn cyclic(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let names = (0..m)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{k}"),
            })
            .collect();
        let mul = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
        FiniteGroup::from_table(names, mul)
    }

    pub fn trivial() -> Self {
        FiniteGroup::cyclic(1).expect("trivial group")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order()
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn mul(&self, g: Elem, h: Elem) -> Elem {
        self.mul[g][h]
    }

    pub fn inv(&self, g: Elem) -> Elem {
        self.inverse[g]
    }

    pub fn name(&self, g: Elem) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<Elem>] {
        &self.mul
    }

    pub fn find(&self, name: &str) -> Option<Elem> {
        self.names.iter().position(|n| n == name)
    }

    pub fn pow(&self, g: Elem, k: usize) -> Elem {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, g))
    }

    pub fn element_order(&self, g: Elem) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        self.elements().map(|g| self.element_order(g)).fold(1, num_integer::lcm)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<Elem>> {
        let mut seen = vec![false; self.order()];
        let mut classes = Vec::new();
        for x in self.elements() {
            if seen[x] {
                continue;
            }
            let class: BTreeSet<Elem> = self.elements().map(|g| self.mul(self.mul(g, x), self.inv(g))).collect();
            for &y in &class {
                seen[y] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    /// The subgroup on `elements` (closed under products), as a group in its
    /// own right together with the embedding of its elements.
    pub fn subgroup(&self, elements: &[Elem]) -> Result<(FiniteGroup, Vec<Elem>)> {
        let mut embed: Vec<Elem> = elements.to_vec();
        embed.sort_unstable();
        embed.dedup();
        if let Some(p) = embed.iter().position(|&g| g == self.identity) {
            embed.swap(0, p);
            embed[1..].sort_unstable();
        } else {
            return Err(Error::InvalidGroup("subset does not contain the identity".into()));
        }
        let index: BTreeMap<Elem, usize> = embed.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        let mut mul = Vec::with_capacity(embed.len());
        for &a in &embed {
            let mut row = Vec::with_capacity(embed.len());
            for &b in &embed {
                let p = self.mul(a, b);
                row.push(
                    *index
                        .get(&p)
                        .ok_or_else(|| Error::InvalidGroup("subset is not closed under multiplication".into()))?,
                );
            }
            mul.push(row);
        }
        let names = embed.iter().map(|&g| self.names[g].clone()).collect();
        Ok((FiniteGroup::from_table(names, mul)?, embed))
    }
}

/// Image of an arrow under a group element: `g·a = sign · arrow`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArrowImage {
    pub sign: i8,
    pub arrow: String,
}

/// Images of one generator, as written in an action file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorImage {
    pub element: Elem,
    pub vertices: BTreeMap<VertexId, VertexId>,
    pub arrows: BTreeMap<String, ArrowImage>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupAction {
    group: FiniteGroup,
    vertex_map: Vec<BTreeMap<VertexId, VertexId>>,
    arrow_map: Vec<BTreeMap<String, ArrowImage>>,
}

impl GroupAction {
    /// Builds an action from complete per-element maps, without validation.
    pub fn from_maps(
        group: FiniteGroup,
        vertex_map: Vec<BTreeMap<VertexId, VertexId>>,
        arrow_map: Vec<BTreeMap<String, ArrowImage>>,
    ) -> Result<Self> {
        if vertex_map.len() != group.order() || arrow_map.len() != group.order() {
            return Err(Error::InvalidAction(
                "one vertex map and one arrow map per element required".into(),
            ));
        }
        Ok(GroupAction {
            group,
            vertex_map,
            arrow_map,
        })
    }

    /// The trivial action of the trivial group.
    pub fn trivial(q: &IceQuiver) -> Self {
        GroupAction::identity_action(FiniteGroup::trivial(), q)
    }

    /// Every element of `group` acts as the identity.
    pub fn identity_action(group: FiniteGroup, q: &IceQuiver) -> Self {
        let vm: BTreeMap<VertexId, VertexId> = q.vertex_ids().map(|v| (v, v)).collect();
        let am: BTreeMap<String, ArrowImage> = q
            .arrows()
            .iter()
            .map(|a| {
                (
                    a.id.clone(),
                    ArrowImage {
                        sign: 1,
                        arrow: a.id.clone(),
                    },
                )
            })
            .collect();
        let n = group.order();
        GroupAction {
            group,
            vertex_map: vec![vm; n],
            arrow_map: vec![am; n],
        }
    }

    /// Extends generator images to the whole group by closure. Vertices and
    /// arrows omitted from a generator's images are fixed (arrows with sign +1).
    pub fn from_generators(q: &IceQuiver, group: FiniteGroup, generators: &[GeneratorImage]) -> Result<Self> {
        let n = group.order();
        let full = |img: &GeneratorImage| -> Result<(BTreeMap<VertexId, VertexId>, BTreeMap<String, ArrowImage>)> {
            let mut vm = BTreeMap::new();
            for v in q.vertex_ids() {
                vm.insert(v, *img.vertices.get(&v).unwrap_or(&v));
            }
            for v in img.vertices.keys() {
                if !q.has_vertex(*v) {
                    return Err(Error::UnknownVertex(*v));
                }
            }
            let mut am = BTreeMap::new();
            for a in q.arrows() {
                let im = img.arrows.get(&a.id).cloned().unwrap_or(ArrowImage {
                    sign: 1,
                    arrow: a.id.clone(),
                });
                q.arrow(&im.arrow)?;
                am.insert(a.id.clone(), im);
            }
            for a in img.arrows.keys() {
                q.arrow(a)?;
            }
            Ok((vm, am))
        };
        type Images = (Elem, BTreeMap<VertexId, VertexId>, BTreeMap<String, ArrowImage>);
        let gens: Vec<Images> = generators
            .iter()
            .map(|g| full(g).map(|(vm, am)| (g.element, vm, am)))
            .collect::<Result<_>>()?;
        let id = group.identity();
        let ident = GroupAction::identity_action(group.clone(), q);
        let mut vertex_map: Vec<Option<BTreeMap<VertexId, VertexId>>> = vec![None; n];
        let mut arrow_map: Vec<Option<BTreeMap<String, ArrowImage>>> = vec![None; n];
        vertex_map[id] = Some(ident.vertex_map[id].clone());
        arrow_map[id] = Some(ident.arrow_map[id].clone());
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            for (s, svm, sam) in &gens {
                let sg = group.mul(*s, g);
                let gvm = vertex_map[g].as_ref().unwrap();
                let gam = arrow_map[g].as_ref().unwrap();
                let vm: BTreeMap<VertexId, VertexId> = gvm.iter().map(|(v, w)| (*v, svm[w])).collect();
                let am: BTreeMap<String, ArrowImage> = gam
                    .iter()
                    .map(|(a, im)| {
                        let next = &sam[&im.arrow];
                        (
                            a.clone(),
                            ArrowImage {
                                sign: im.sign * next.sign,
                                arrow: next.arrow.clone(),
                            },
                        )
                    })
                    .collect();
                match &vertex_map[sg] {
                    None => {
                        vertex_map[sg] = Some(vm);
                        arrow_map[sg] = Some(am);
                        queue.push_back(sg);
                    }
                    Some(existing) => {
                        if *existing != vm || arrow_map[sg].as_ref() != Some(&am) {
                            return Err(Error::InvalidAction(format!(
                                "generator images are inconsistent at element `{}`",
                                group.name(sg)
                            )));
                        }
                    }
                }
            }
        }
        if let Some(g) = vertex_map.iter().position(|m| m.is_none()) {
            return Err(Error::InvalidAction(format!(
                "generators do not reach element `{}`",
                group.name(g)
            )));
        }
        Ok(GroupAction {
            group,
            vertex_map: vertex_map.into_iter().map(Option::unwrap).collect(),
            arrow_map: arrow_map.into_iter().map(Option::unwrap).collect(),
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn vertex_map(&self, g: Elem) -> &BTreeMap<VertexId, VertexId> {
        &self.vertex_map[g]
    }

    pub fn arrow_map(&self, g: Elem) -> &BTreeMap<String, ArrowImage> {
        &self.arrow_map[g]
    }

    pub fn act_vertex(&self, g: Elem, v: VertexId) -> VertexId {
        *self.vertex_map[g].get(&v).unwrap_or(&v)
    }

    pub fn act_arrow(&self, g: Elem, a: &str) -> ArrowImage {
        self.arrow_map[g].get(a).cloned().unwrap_or(ArrowImage {
            sign: 1,
            arrow: a.to_string(),
        })
    }

    /// `g · p` as a signed path.
    pub fn act_path(&self, g: Elem, p: &Path) -> (i8, Path) {
        let mut sign = 1;
        let mut arrows = Vec::with_capacity(p.arrows.len());
        for a in &p.arrows {
            let im = self.act_arrow(g, a);
            sign *= im.sign;
            arrows.push(im.arrow);
        }
        (
            sign,
            Path {
                source: self.act_vertex(g, p.source),
                target: self.act_vertex(g, p.target),
                arrows,
            },
        )
    }

    pub fn act_path_sum(&self, g: Elem, s: &PathSum) -> PathSum {
        let mut out = PathSum::zero();
        for (p, c) in s.terms() {
            let (sign, gp) = self.act_path(g, p);
            out.add_term(c * crate::quiver::rat(sign as i64), gp);
        }
        out
    }

    pub fn act_cycle(&self, g: Elem, c: &Cycle) -> (i8, Cycle) {
        let mut sign = 1;
        let word = c
            .arrows()
            .iter()
            .map(|a| {
                let im = self.act_arrow(g, a);
                sign *= im.sign;
                im.arrow
            })
            .collect();
        (sign, Cycle::from_closed_word(word))
    }

    pub fn act_potential(&self, g: Elem, w: &Potential) -> Potential {
        let mut out = Potential::zero();
        for (c, coeff) in w.terms() {
            let (sign, gc) = self.act_cycle(g, c);
            out.add_term(coeff * crate::quiver::rat(sign as i64), gc);
        }
        out
    }

    pub fn stabilizer(&self, v: VertexId) -> Vec<Elem> {
        self.group.elements().filter(|&g| self.act_vertex(g, v) == v).collect()
    }

    pub fn vertex_orbit(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.group.elements().map(|g| self.act_vertex(g, v)).collect()
    }

    /// Least element `y` with `y · from = to`, if any.
    pub fn transporter(&self, from: VertexId, to: VertexId) -> Option<Elem> {
        self.group.elements().find(|&g| self.act_vertex(g, from) == to)
    }
}

/// Outcome of [`check_action`]; an empty violation list means the action is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionReport {
    pub violations: Vec<String>,
}

impl ActionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::Validation(self.violations.join("; ")))
        }
    }
}

/// Checks bijectivity, the homomorphism law, endpoint compatibility and
/// stability of the frozen subquiver.
pub fn check_action(q: &IceQuiver, act: &GroupAction) -> ActionReport {
    let mut v = Vec::new();
    let grp = act.group();
    let vertices: BTreeSet<VertexId> = q.vertex_ids().collect();
    let arrows: BTreeSet<&str> = q.arrows().iter().map(|a| a.id.as_str()).collect();
    for g in grp.elements() {
        let name = grp.name(g);
        let vm = act.vertex_map(g);
        let am = act.arrow_map(g);
        let dom: BTreeSet<VertexId> = vm.keys().copied().collect();
        let img: BTreeSet<VertexId> = vm.values().copied().collect();
        if dom != vertices || img != vertices {
            v.push(format!("`{name}` is not a permutation of the vertices"));
        }
        let adom: BTreeSet<&str> = am.keys().map(String::as_str).collect();
        let aimg: BTreeSet<&str> = am.values().map(|i| i.arrow.as_str()).collect();
        if adom != arrows || aimg != arrows {
            v.push(format!("`{name}` is not a signed permutation of the arrows"));
        }
        if am.values().any(|i| i.sign != 1 && i.sign != -1) {
            v.push(format!("`{name}` uses a sign other than +1/-1"));
        }
        for a in q.arrows() {
            let im = act.act_arrow(g, &a.id);
            let Ok(b) = q.arrow(&im.arrow) else {
                v.push(format!("`{name}` maps `{}` to unknown arrow `{}`", a.id, im.arrow));
                continue;
            };
            if b.source != act.act_vertex(g, a.source) || b.target != act.act_vertex(g, a.target) {
                v.push(format!(
                    "`{name}` maps `{}`: {} -> {} to `{}`: {} -> {}, expected {} -> {}",
                    a.id,
                    a.source,
                    a.target,
                    b.id,
                    b.source,
                    b.target,
                    act.act_vertex(g, a.source),
                    act.act_vertex(g, a.target)
                ));
            }
            if b.degree != a.degree {
                v.push(format!("`{name}` changes the degree of `{}`", a.id));
            }
            if q.is_frozen_arrow(&a.id) != q.is_frozen_arrow(&b.id) {
                v.push(format!("`{name}` does not stabilize the frozen arrows (`{}`)", a.id));
            }
        }
        for &x in &vertices {
            if q.is_frozen(x) != q.is_frozen(act.act_vertex(g, x)) {
                v.push(format!("`{name}` does not stabilize the frozen vertices ({x})"));
            }
        }
    }
    let id = grp.identity();
    if q.vertex_ids().any(|x| act.act_vertex(id, x) != x)
        || q.arrows().iter().any(|a| {
            act.act_arrow(id, &a.id)
                != ArrowImage {
                    sign: 1,
                    arrow: a.id.clone(),
                }
        })
    {
        v.push("the identity does not act trivially".into());
    }
    for g in grp.elements() {
        for h in grp.elements() {
            let gh = grp.mul(g, h);
            for x in q.vertex_ids() {
                if act.act_vertex(gh, x) != act.act_vertex(g, act.act_vertex(h, x)) {
                    v.push(format!(
                        "homomorphism law fails on vertices for ({}, {})",
                        grp.name(g),
                        grp.name(h)
                    ));
                    break;
                }
            }
            for a in q.arrows() {
                let ha = act.act_arrow(h, &a.id);
                let gha = act.act_arrow(g, &ha.arrow);
                let direct = act.act_arrow(gh, &a.id);
                if direct.arrow != gha.arrow || direct.sign != ha.sign * gha.sign {
                    v.push(format!(
                        "homomorphism law fails on arrow `{}` for ({}, {})",
                        a.id,
                        grp.name(g),
                        grp.name(h)
                    ));
                    break;
                }
            }
        }
    }
    v.dedup();
    ActionReport { violations: v }
}

/// True iff `g · W == W` for every `g` after canonicalization.
pub fn potential_invariant(w: &Potential, act: &GroupAction) -> bool {
    act.group().elements().all(|g| act.act_potential(g, w) == *w)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub members: Vec<VertexId>,
    pub frozen: bool,
    pub stabilizer_order: usize,
}

impl Orbit {
    /// The least member, used as the orbit's key.
    pub fn representative(&self) -> VertexId {
        self.members[0]
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.contains(&v)
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }
}

impl fmt::Display for Orbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.members.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", m.join(","))
    }
}

/// Vertex orbits: unfrozen ones first, each group ordered by least member.
pub fn orbits(q: &IceQuiver, act: &GroupAction) -> Vec<Orbit> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut ids: Vec<VertexId> = q.vertex_ids().collect();
    ids.sort_unstable();
    for v in ids {
        if seen.contains(&v) {
            continue;
        }
        let members: Vec<VertexId> = act.vertex_orbit(v).into_iter().collect();
        seen.extend(members.iter().copied());
        out.push(Orbit {
            frozen: q.is_frozen(v),
            stabilizer_order: act.group().order() / members.len(),
            members,
        });
    }
    out.sort_by_key(|o| (o.frozen, o.representative()));
    out
}

/// The orbit containing `v`.
pub fn orbit_of(orbits: &[Orbit], v: VertexId) -> Option<&Orbit> {
    orbits.iter().find(|o| o.contains(v))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum AdmissibilityWitness {
    /// An arrow joining two vertices of one orbit.
    GLoop {
        arrow: String,
        source: VertexId,
        target: VertexId,
    },
    /// Arrows `x -> y` and `y -> z` with `z` in the orbit of `x`.
    GTwoCycle {
        first: String,
        second: String,
        x: VertexId,
        y: VertexId,
        z: VertexId,
    },
}

impl fmt::Display for AdmissibilityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdmissibilityWitness::GLoop { arrow, source, target } => {
                write!(f, "G-loop: arrow `{arrow}` from {source} to {target} inside one orbit")
            }
            AdmissibilityWitness::GTwoCycle { first, second, x, y, z } => write!(
                f,
                "G-2-cycle: `{first}`: {x} -> {y} and `{second}`: {y} -> {z} with {z} in the orbit of {x}"
            ),
        }
    }
}

impl From<AdmissibilityWitness> for Error {
    fn from(w: AdmissibilityWitness) -> Self {
        Error::NotAdmissible(w.to_string())
    }
}

/// `Ok(())` when `(q, G)` has no G-loops and no G-2-cycles, otherwise a witness.
pub fn is_admissible(q: &IceQuiver, act: &GroupAction) -> std::result::Result<(), AdmissibilityWitness> {
    let orbit: BTreeMap<VertexId, BTreeSet<VertexId>> = q.vertex_ids().map(|v| (v, act.vertex_orbit(v))).collect();
    for a in q.arrows() {
        if orbit[&a.source].contains(&a.target) {
            return Err(AdmissibilityWitness::GLoop {
                arrow: a.id.clone(),
                source: a.source,
                target: a.target,
            });
        }
    }
    for a in q.arrows() {
        for b in q.arrows().iter().filter(|b| b.source == a.target) {
            if orbit[&a.source].contains(&b.target) {
                return Err(AdmissibilityWitness::GTwoCycle {
                    first: a.id.clone(),
                    second: b.id.clone(),
                    x: a.source,
                    y: a.target,
                    z: b.target,
                });
            }
        }
    }
    Ok(())
}

/// Admissibility of the quiver realized by an exchange matrix: arrows are read
/// from the signed entries between row and column keys.
pub fn matrix_admissibility(b: &ExchangeMatrix, act: &GroupAction) -> std::result::Result<(), AdmissibilityWitness> {
    let keys = b.rows();
    let arrow = |x: VertexId, y: VertexId| b.signed_count(x, y).unwrap_or(0) > 0;
    let name = |x: VertexId, y: VertexId| format!("{x}->{y}");
    for &x in keys {
        let orb = act.vertex_orbit(x);
        for &y in &orb {
            if arrow(x, y) {
                return Err(AdmissibilityWitness::GLoop {
                    arrow: name(x, y),
                    source: x,
                    target: y,
                });
            }
        }
    }
    for &x in keys {
        let orb = act.vertex_orbit(x);
        for &y in keys {
            if !arrow(x, y) {
                continue;
            }
            for &z in &orb {
                if arrow(y, z) {
                    return Err(AdmissibilityWitness::GTwoCycle {
                        first: name(x, y),
                        second: name(y, z),
                        x,
                        y,
                        z,
                    });
                }
            }
        }
    }
    Ok(())
}

/// `g · ∂_a W == sign · ∂_{g·a} W` for all `g` and `a`; used to test that
/// derivatives of invariant potentials transform with the action.
pub fn derivatives_equivariant(q: &IceQuiver, w: &Potential, act: &GroupAction) -> Result<bool> {
    for g in act.group().elements() {
        for a in q.arrows() {
            let lhs = act.act_path_sum(g, &crate::quiver::cyclic_derivative(w, &a.id, q)?);
            let im = act.act_arrow(g, &a.id);
            let rhs = crate::quiver::cyclic_derivative(w, &im.arrow, q)?.scale(&crate::quiver::rat(im.sign as i64));
            if !lhs.sub(&rhs).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::quiver::rat;

    pub(crate) fn a3() -> (IceQuiver, GroupAction) {
        let q = IceQuiver::simple(
            "a3",
            &[1, 2, 3, 4, 5, 6],
            &[4, 5, 6],
            &[("a", 1, 2), ("b", 3, 2), ("c", 4, 1), ("d", 5, 2), ("e", 6, 3)],
        )
        .unwrap();
        let act = swap_action(&q, &[(1, 3), (4, 6)], &[("a", "b", 1), ("c", "e", 1)]);
        (q, act)
    }

    pub(crate) fn swap_action(
        q: &IceQuiver,
        vertex_swaps: &[(VertexId, VertexId)],
        arrow_swaps: &[(&str, &str, i8)],
    ) -> GroupAction {
        let mut img = GeneratorImage {
            element: 1,
            ..Default::default()
        };
        for &(x, y) in vertex_swaps {
            img.vertices.insert(x, y);
            img.vertices.insert(y, x);
        }
        for &(a, b, s) in arrow_swaps {
            img.arrows.insert(
                a.into(),
                ArrowImage {
                    sign: s,
                    arrow: b.into(),
                },
            );
            img.arrows.insert(
                b.into(),
                ArrowImage {
                    sign: s,
                    arrow: a.into(),
                },
            );
        }
        GroupAction::from_generators(q, FiniteGroup::cyclic(2).unwrap(), &[img]).unwrap()
    }

    pub(crate) fn zl2() -> (IceQuiver, GroupAction, Potential) {
        let q = IceQuiver::simple(
            "zl2",
            &[1, 2, 3, 4, 5, 6],
            &[1, 2, 3],
            &[
                ("a", 1, 2),
                ("b", 1, 3),
                ("c", 4, 1),
                ("d", 3, 4),
                ("e", 2, 4),
                ("f", 4, 5),
                ("g", 4, 6),
                ("r", 6, 3),
                ("s", 5, 2),
            ],
        )
        .unwrap();
        let mut img = GeneratorImage {
            element: 1,
            ..Default::default()
        };
        for (x, y) in [(2, 3), (3, 2), (5, 6), (6, 5)] {
            img.vertices.insert(x, y);
        }
        for (a, s, b) in [
            ("a", -1, "b"),
            ("b", -1, "a"),
            ("e", 1, "d"),
            ("d", 1, "e"),
            ("s", 1, "r"),
            ("r", 1, "s"),
            ("f", -1, "g"),
            ("g", -1, "f"),
        ] {
            img.arrows.insert(
                a.into(),
                ArrowImage {
                    sign: s,
                    arrow: b.into(),
                },
            );
        }
        let act = GroupAction::from_generators(&q, FiniteGroup::cyclic(2).unwrap(), &[img]).unwrap();
        let w = Potential::from_words(
            &q,
            [
                (rat(1), &["e", "a", "c"][..]),
                (rat(-1), &["f", "e", "s"][..]),
                (rat(1), &["g", "d", "r"][..]),
                (rat(-1), &["b", "c", "d"][..]),
            ],
        )
        .unwrap();
        (q, act, w)
    }

    #[test]
    fn cyclic_group_laws() {
        let g = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.exponent(), 4);
        assert!(g.is_abelian());
        assert_eq!(g.conjugacy_classes().len(), 4);
        assert_eq!(g.element_order(2), 2);
        assert_eq!(g.inv(1), 3);
    }

    #[test]
    fn bad_tables_are_rejected() {
        let names = vec!["x".to_string(), "y".to_string()];
        assert!(FiniteGroup::from_table(names.clone(), vec![vec![0, 0], vec![0, 0]]).is_err());
        assert!(FiniteGroup::from_table(names, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn s3_is_non_abelian_with_three_classes() {
        // permutations of {0,1,2} composed as functions
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let mul = perms
            .iter()
            .map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect();
        let names = (0..6).map(|k| format!("p{k}")).collect();
        let g = FiniteGroup::from_table(names, mul).unwrap();
        assert!(!g.is_abelian());
        assert_eq!(g.conjugacy_classes().len(), 3);
        let (c3, embed) = g.subgroup(&[0, 1, 2]).unwrap();
        assert_eq!(c3.order(), 3);
        assert_eq!(embed, vec![0, 1, 2]);
        assert!(g.subgroup(&[0, 1]).is_err());
    }

    #[test]
    fn a3_action_is_valid_and_admissible() {
        let (q, act) = a3();
        assert!(check_action(&q, &act).is_valid());
        assert!(is_admissible(&q, &act).is_ok());
        let o = orbits(&q, &act);
        let members: Vec<Vec<VertexId>> = o.iter().map(|o| o.members.clone()).collect();
        assert_eq!(members, vec![vec![1, 3], vec![2], vec![4, 6], vec![5]]);
        assert_eq!(
            o.iter().map(|o| o.stabilizer_order).collect::<Vec<_>>(),
            vec![1, 2, 1, 2]
        );
        assert_eq!(
            o.iter().map(|o| o.frozen).collect::<Vec<_>>(),
            vec![false, false, true, true]
        );
    }

    #[test]
    fn trivial_action_is_valid() {
        let (q, _) = a3();
        let act = GroupAction::trivial(&q);
        assert!(check_action(&q, &act).is_valid());
        assert_eq!(orbits(&q, &act).len(), 6);
    }

    #[test]
    fn endpoint_violation_is_reported() {
        let (q, _) = a3();
        let mut img = GeneratorImage {
            element: 1,
            ..Default::default()
        };
        img.arrows.insert(
            "a".into(),
            ArrowImage {
                sign: 1,
                arrow: "c".into(),
            },
        );
        img.arrows.insert(
            "c".into(),
            ArrowImage {
                sign: 1,
                arrow: "a".into(),
            },
        );
        let act = GroupAction::from_generators(&q, FiniteGroup::cyclic(2).unwrap(), &[img]).unwrap();
        let report = check_action(&q, &act);
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.contains("maps `a`")));
    }

    #[test]
    fn inconsistent_generators_are_rejected() {
        let (q, _) = a3();
        let mut img = GeneratorImage {
            element: 1,
            ..Default::default()
        };
        // order-3 permutation for an element of order 2
        img.vertices.insert(1, 2);
        img.vertices.insert(2, 3);
        img.vertices.insert(3, 1);
        let err = GroupAction::from_generators(&q, FiniteGroup::cyclic(2).unwrap(), &[img]);
        assert!(matches!(err, Err(Error::InvalidAction(_))));
    }

    #[test]
    fn zl2_potential_is_invariant() {
        let (q, act, w) = zl2();
        assert!(check_action(&q, &act).is_valid());
        assert!(potential_invariant(&w, &act));
        assert!(potential_invariant(&Potential::zero(), &act));
        let eac = Potential::from_words(&q, [(rat(1), &["e", "a", "c"][..])]).unwrap();
        assert!(!potential_invariant(&eac, &act));
        let image = act.act_potential(1, &eac);
        let expected = Potential::from_words(&q, [(rat(-1), &["d", "b", "c"][..])]).unwrap();
        assert_eq!(image, expected);
        assert!(derivatives_equivariant(&q, &w, &act).unwrap());
    }

    #[test]
    fn a5_orbits() {
        let q = crate::group::tests::a5().0;
        let act = crate::group::tests::a5().1;
        let reps: Vec<VertexId> = orbits(&q, &act).iter().map(|o| o.representative()).collect();
        assert_eq!(reps, vec![4, 5, 9, 1, 2, 7]);
        assert!(is_admissible(&q, &act).is_ok());
    }

    pub(crate) fn a5() -> (IceQuiver, GroupAction) {
        let arrows = [
            ("x1", 7, 5),
            ("x2", 2, 7),
            ("x3", 2, 4),
            ("x4", 5, 2),
            ("x5", 5, 9),
            ("x6", 1, 2),
            ("x7", 1, 3),
            ("x8", 4, 6),
            ("x9", 4, 5),
            ("x10", 4, 1),
            ("x11", 9, 4),
            ("x12", 3, 8),
            ("x13", 3, 4),
            ("x14", 6, 3),
            ("x15", 6, 9),
            ("x16", 8, 6),
        ];
        let q = IceQuiver::simple("a5", &[1, 2, 3, 4, 5, 6, 7, 8, 9], &[1, 2, 3, 7, 8], &arrows).unwrap();
        let act = swap_action(
            &q,
            &[(2, 3), (7, 8), (5, 6)],
            &[
                ("x1", "x16", 1),
                ("x2", "x12", 1),
                ("x3", "x13", 1),
                ("x4", "x14", 1),
                ("x5", "x15", 1),
                ("x6", "x7", 1),
                ("x8", "x9", 1),
            ],
        );
        (q, act)
    }

    #[test]
    fn g_loop_and_g_two_cycle_witnesses() {
        let q = IceQuiver::simple("l", &[1, 2], &[], &[("a", 1, 2)]).unwrap();
        let act = swap_action(&q, &[(1, 2)], &[]);
        assert!(matches!(
            is_admissible(&q, &act),
            Err(AdmissibilityWitness::GLoop { .. })
        ));

        let q = IceQuiver::simple("p", &[1, 2, 3], &[], &[("a", 1, 2), ("b", 2, 3)]).unwrap();
        // 1<->3 forces a -> b^op, which is not an arrow: use the vertex action only
        let mut vm = BTreeMap::new();
        vm.insert(1, 3);
        vm.insert(3, 1);
        vm.insert(2, 2);
        let id: BTreeMap<VertexId, VertexId> = [(1, 1), (2, 2), (3, 3)].into();
        let am: BTreeMap<String, ArrowImage> = ["a", "b"]
            .iter()
            .map(|a| {
                (
                    a.to_string(),
                    ArrowImage {
                        sign: 1,
                        arrow: a.to_string(),
                    },
                )
            })
            .collect();
        let act = GroupAction::from_maps(FiniteGroup::cyclic(2).unwrap(), vec![id, vm], vec![am.clone(), am]).unwrap();
        match is_admissible(&q, &act) {
            Err(AdmissibilityWitness::GTwoCycle { x, y, z, .. }) => assert_eq!((x, y, z), (1, 2, 3)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn matrix_admissibility_agrees_on_fixtures() {
        for (q, act) in [a3(), a5()] {
            let b = crate::quiver::exchange_matrix(&q).unwrap();
            assert!(matrix_admissibility(&b, &act).is_ok());
        }
    }
}
