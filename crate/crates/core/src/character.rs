//! Cluster characters of module data over acyclic ice quivers.
//!
//! A datum is a pair `(γ, L)`: multiplicities `γ` of the projective-injective
//! summands `Γ_i` and a module `L` supported on unfrozen vertices. Its
//! character is
//!
//! `CC = x^{γ − ind L} Σ_e χ(Gr^e L) x^{−B̃e}`,
//!
//! where `Gr^e L` parametrizes quotients of `L` of dimension `e`, that is
//! submodules of dimension `dim L − e`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cluster::{project_pi, var_name};
use crate::error::{Error, Result};
use crate::grassmannian::{dimension_vectors, point_count, DEFAULT_BUDGET};
use crate::group::{Elem, GroupAction, Orbit};
use crate::laurent::LaurentPolynomial;
use crate::linalg::{self, Q};
use crate::quiver::{rat, ExchangeMatrix, IceQuiver, VertexId};
use crate::representation::QuiverRepresentation;

/// `[P_0] − [P_1]` on the vertices.
pub type IndexVector = BTreeMap<VertexId, i64>;

/// Multiplicities of the indecomposable projectives in a presentation
/// `P_1 → P_0 → L → 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub p0: BTreeMap<VertexId, i64>,
    pub p1: BTreeMap<VertexId, i64>,
}

impl Presentation {
    pub fn index(&self) -> IndexVector {
        self.p0
            .iter()
            .map(|(v, t)| (*v, t - self.p1.get(v).copied().unwrap_or(0)))
            .collect()
    }

    /// Adds `P_v^k` to both terms.
    pub fn pad(&self, v: VertexId, k: i64) -> Presentation {
        let mut out = self.clone();
        *out.p0.entry(v).or_insert(0) += k;
        *out.p1.entry(v).or_insert(0) += k;
        out
    }
}

fn require_acyclic(q: &IceQuiver) -> Result<()> {
    if q.topological_order().is_none() {
        return Err(Error::Unsupported(
            "module data over quivers with oriented cycles".into(),
        ));
    }
    Ok(())
}

/// `C[v][i]` = number of paths from `v` to `i`, so that `dim P_i` is column `i`.
pub fn path_counts(q: &IceQuiver) -> Result<Vec<Vec<i64>>> {
    require_acyclic(q)?;
    let ids: Vec<VertexId> = q.vertex_ids().collect();
    let n = ids.len();
    let pos = |v: VertexId| ids.iter().position(|x| *x == v).unwrap();
    let order = q.topological_order().unwrap();
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 1;
    }
    // sources of longer paths come earlier in the topological order
    for &v in order.iter().rev() {
        for a in q.arrows().iter().filter(|a| a.source == v) {
            let (s, t) = (pos(a.source), pos(a.target));
            let below = c[t].clone();
            for (x, y) in c[s].iter_mut().zip(below) {
                *x += y;
            }
        }
    }
    Ok(c)
}

/// The minimal projective presentation: `P_0` covers the top and `P_1` is
/// the projective kernel.
pub fn minimal_presentation(q: &IceQuiver, m: &QuiverRepresentation) -> Result<Presentation> {
    m.validate(q)?;
    let c = path_counts(q)?;
    let ids: Vec<VertexId> = q.vertex_ids().collect();
    let cq: Vec<Vec<_>> = c.iter().map(|r| r.iter().map(|x| rat(*x)).collect()).collect();
    let dims: Vec<_> = ids.iter().map(|v| rat(m.dim(*v) as i64)).collect();
    let coeffs = linalg::solve(&Q, &cq, &dims).expect("path-count matrix is unitriangular");
    let top = m.top(q);
    let mut p0 = BTreeMap::new();
    let mut p1 = BTreeMap::new();
    for (v, x) in ids.iter().zip(coeffs) {
        let t = top[v] as i64;
        let s = t - x.to_integer().try_into().unwrap_or(i64::MAX);
        if s < 0 {
            return Err(Error::InvalidRepresentation(format!(
                "negative syzygy multiplicity at {v}"
            )));
        }
        p0.insert(*v, t);
        p1.insert(*v, s);
    }
    Ok(Presentation { p0, p1 })
}

pub fn index(q: &IceQuiver, m: &QuiverRepresentation) -> Result<IndexVector> {
    minimal_presentation(q, m).map(|p| p.index())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDatum {
    /// Multiplicities of the projective-injective summands `Γ_i`.
    pub gamma: BTreeMap<VertexId, u32>,
    pub module: QuiverRepresentation,
}

impl ModuleDatum {
    pub fn new(q: &IceQuiver, gamma: BTreeMap<VertexId, u32>, module: QuiverRepresentation) -> Result<Self> {
        let d = ModuleDatum { gamma, module };
        d.validate(q)?;
        Ok(d)
    }

    pub fn module(q: &IceQuiver, module: QuiverRepresentation) -> Result<Self> {
        Self::new(q, BTreeMap::new(), module)
    }

    /// `Γ_v` itself: no module part.
    pub fn gamma_summand(q: &IceQuiver, v: VertexId) -> Result<Self> {
        if !q.has_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
        Ok(ModuleDatum {
            gamma: [(v, 1)].into(),
            module: QuiverRepresentation::zero(q),
        })
    }

    pub fn validate(&self, q: &IceQuiver) -> Result<()> {
        self.module.validate(q)?;
        if !self.module.supported_on_unfrozen(q) {
            return Err(Error::InvalidRepresentation(
                "module data must vanish on frozen vertices".into(),
            ));
        }
        if let Some(v) = self.gamma.keys().find(|v| !q.has_vertex(**v)) {
            return Err(Error::UnknownVertex(*v));
        }
        Ok(())
    }

    pub fn direct_sum(&self, q: &IceQuiver, other: &Self) -> Self {
        let mut gamma = self.gamma.clone();
        for (v, k) in &other.gamma {
            *gamma.entry(*v).or_insert(0) += k;
        }
        gamma.retain(|_, k| *k > 0);
        ModuleDatum {
            gamma,
            module: self.module.direct_sum(q, &other.module),
        }
    }

    pub fn act(&self, act: &GroupAction, g: Elem) -> Self {
        ModuleDatum {
            gamma: self.gamma.iter().map(|(v, k)| (act.act_vertex(g, *v), *k)).collect(),
            module: self.module.act(act, g),
        }
    }

    /// `γ − ind L`.
    pub fn index(&self, q: &IceQuiver) -> Result<IndexVector> {
        let mut ind: IndexVector = index(q, &self.module)?.into_iter().map(|(v, x)| (v, -x)).collect();
        for (v, k) in &self.gamma {
            *ind.entry(*v).or_insert(0) += i64::from(*k);
        }
        Ok(ind)
    }
}

/// `CC` of a datum, over the row variables of `b`.
pub fn cluster_character(q: &IceQuiver, datum: &ModuleDatum, b: &ExchangeMatrix) -> Result<LaurentPolynomial> {
    cluster_character_with(q, datum, b, DEFAULT_BUDGET)
}

pub fn cluster_character_with(
    q: &IceQuiver,
    datum: &ModuleDatum,
    b: &ExchangeMatrix,
    budget: u64,
) -> Result<LaurentPolynomial> {
    datum.validate(q)?;
    let vars: Vec<String> = b.rows().iter().map(|k| var_name(*k)).collect();
    let row = |v: VertexId| b.row_position(v).ok_or(Error::UnknownVertex(v));
    let mut ind = vec![0i64; vars.len()];
    for (v, x) in datum.index(q)? {
        ind[row(v)?] += x;
    }
    let lead = LaurentPolynomial::monomial(&vars, ind, rat(1));
    let mut sum = LaurentPolynomial::zero(&vars);
    for e in dimension_vectors(&datum.module) {
        let chi = point_count(q, &datum.module, &e, budget)?.euler();
        if chi == 0 {
            continue;
        }
        // −B̃(dim L − e), on the unfrozen columns
        let mut exps = vec![0i64; vars.len()];
        let quotient: BTreeMap<VertexId, usize> = e.iter().map(|(v, x)| (*v, datum.module.dim(*v) - x)).collect();
        for (v, x) in quotient.iter().filter(|(_, x)| **x > 0) {
            let col = b
                .col_position(*v)
                .ok_or_else(|| Error::InvalidRepresentation(format!("vertex {v} is not an exchange column")))?;
            for (r, entry) in b.entries().iter().enumerate() {
                exps[r] -= entry[col] * *x as i64;
            }
        }
        sum.add_term(exps, rat(chi));
    }
    Ok(lead.mul(&sum))
}

/// `P = π ∘ CC`.
pub fn projected_character(
    q: &IceQuiver,
    datum: &ModuleDatum,
    b: &ExchangeMatrix,
    orbits: &[Orbit],
) -> Result<LaurentPolynomial> {
    project_pi(&cluster_character(q, datum, b)?, orbits)
}

/// `g` acting on Laurent polynomials by `x_v ↦ x_{g v}`.
pub fn act_on_variables(p: &LaurentPolynomial, act: &GroupAction, g: Elem) -> Result<LaurentPolynomial> {
    let vars = p.vars().to_vec();
    let map = vars
        .iter()
        .map(|v| {
            let k: VertexId = v
                .strip_prefix('x')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Validation(format!("variable {v} is not a vertex variable")))?;
            let target = var_name(act.act_vertex(g, k));
            vars.iter()
                .position(|w| *w == target)
                .ok_or_else(|| Error::Validation(format!("no variable {target}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(p.substitute(&vars, &map))
}
