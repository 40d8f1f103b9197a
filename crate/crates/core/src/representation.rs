//! Finite-dimensional modules over the path algebra of an acyclic quiver.
//!
//! A module assigns a space `L_v` to each vertex and, to each arrow
//! `a: i → j`, a matrix `L_a : L_j → L_i` with `dim L_i` rows. Projectives
//! `P_i` are spanned by the paths ending at `i`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Elem, GroupAction};
use crate::linalg::{self, Fp, Q};
use crate::quiver::{rat, IceQuiver, Rational, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverRepresentation {
    pub dims: BTreeMap<VertexId, usize>,
    /// Integer matrices, read over `Q` or reduced mod `p`.
    pub maps: BTreeMap<String, Vec<Vec<i64>>>,
}

impl QuiverRepresentation {
    pub fn new(q: &IceQuiver, dims: BTreeMap<VertexId, usize>, maps: BTreeMap<String, Vec<Vec<i64>>>) -> Result<Self> {
        let r = QuiverRepresentation { dims, maps };
        r.validate(q)?;
        Ok(r)
    }

    pub fn zero(q: &IceQuiver) -> Self {
        let dims = q.vertex_ids().map(|v| (v, 0)).collect();
        let maps = q.arrows().iter().map(|a| (a.id.clone(), vec![])).collect();
        QuiverRepresentation { dims, maps }
    }

    pub fn validate(&self, q: &IceQuiver) -> Result<()> {
        for v in q.vertex_ids() {
            if !self.dims.contains_key(&v) {
                return Err(Error::InvalidRepresentation(format!("missing dimension at {v}")));
            }
        }
        if let Some(v) = self.dims.keys().find(|v| !q.has_vertex(**v)) {
            return Err(Error::UnknownVertex(*v));
        }
        for a in q.arrows() {
            let m = self
                .maps
                .get(&a.id)
                .ok_or_else(|| Error::InvalidRepresentation(format!("missing map for {}", a.id)))?;
            let (r, c) = (self.dims[&a.source], self.dims[&a.target]);
            if m.len() != r || m.iter().any(|row| row.len() != c) {
                return Err(Error::InvalidRepresentation(format!(
                    "map for {} must be {r}x{c}",
                    a.id
                )));
            }
        }
        if let Some(a) = self.maps.keys().find(|a| q.arrow(a).is_err()) {
            return Err(Error::UnknownArrow(a.clone()));
        }
        Ok(())
    }

    pub fn dim(&self, v: VertexId) -> usize {
        self.dims.get(&v).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn dim_vector(&self) -> Vec<usize> {
        self.dims.values().copied().collect()
    }

    pub fn map(&self, a: &str) -> &[Vec<i64>] {
        self.maps.get(a).map_or(&[], |m| m.as_slice())
    }

    /// The simple module at `v`.
    pub fn simple(q: &IceQuiver, v: VertexId) -> Result<Self> {
        Self::thin(q, &[v])
    }

    /// The module with `k` at each vertex of `support` and identity maps on
    /// the arrows inside it.
    pub fn thin(q: &IceQuiver, support: &[VertexId]) -> Result<Self> {
        if let Some(v) = support.iter().find(|v| !q.has_vertex(**v)) {
            return Err(Error::UnknownVertex(*v));
        }
        let inside = |v: VertexId| support.contains(&v);
        let dims = q.vertex_ids().map(|v| (v, usize::from(inside(v)))).collect();
        let maps = q
            .arrows()
            .iter()
            .map(|a| {
                let m = if inside(a.source) && inside(a.target) {
                    vec![vec![1]]
                } else if inside(a.source) {
                    vec![vec![]]
                } else {
                    vec![]
                };
                (a.id.clone(), m)
            })
            .collect();
        Ok(QuiverRepresentation { dims, maps })
    }

    /// The projective `P_i`, with basis the paths ending at `i`.
    pub fn projective(q: &IceQuiver, i: VertexId) -> Result<Self> {
        if q.topological_order().is_none() {
            return Err(Error::Unsupported("projectives of quivers with oriented cycles".into()));
        }
        // paths ending at i, indexed by their starting vertex
        let mut paths: Vec<(VertexId, Vec<String>)> = vec![(i, vec![])];
        let mut k = 0;
        while k < paths.len() {
            let (v, p) = paths[k].clone();
            for a in q.arrows().iter().filter(|a| a.target == v) {
                let mut np = p.clone();
                np.push(a.id.clone());
                paths.push((a.source, np));
            }
            k += 1;
        }
        let at = |v: VertexId| -> Vec<usize> { (0..paths.len()).filter(|&k| paths[k].0 == v).collect() };
        let dims = q.vertex_ids().map(|v| (v, at(v).len())).collect();
        let maps = q
            .arrows()
            .iter()
            .map(|a| {
                let rows = at(a.source);
                let cols = at(a.target);
                // L_a sends the path p at target(a) to p·a at source(a)
                let m = rows
                    .iter()
                    .map(|&r| {
                        cols.iter()
                            .map(|&c| {
                                let mut ext = paths[c].1.clone();
                                ext.push(a.id.clone());
                                i64::from(paths[r].1 == ext)
                            })
                            .collect()
                    })
                    .collect();
                (a.id.clone(), m)
            })
            .collect();
        Ok(QuiverRepresentation { dims, maps })
    }

    pub fn direct_sum(&self, q: &IceQuiver, other: &Self) -> Self {
        let dims: BTreeMap<VertexId, usize> = q.vertex_ids().map(|v| (v, self.dim(v) + other.dim(v))).collect();
        let maps = q
            .arrows()
            .iter()
            .map(|a| {
                let (r1, c1) = (self.dim(a.source), self.dim(a.target));
                let (r2, c2) = (other.dim(a.source), other.dim(a.target));
                let mut out = vec![vec![0; c1 + c2]; r1 + r2];
                for (i, row) in self.map(&a.id).iter().enumerate() {
                    out[i][..c1].copy_from_slice(row);
                }
                for (i, row) in other.map(&a.id).iter().enumerate() {
                    out[r1 + i][c1..].copy_from_slice(row);
                }
                (a.id.clone(), out)
            })
            .collect();
        QuiverRepresentation { dims, maps }
    }

    /// `g·L`: `(g·L)_{g v} = L_v` and `(g·L)_{a'} = s·L_a` when `g·a = s·a'`.
    pub fn act(&self, act: &GroupAction, g: Elem) -> Self {
        let dims = self.dims.iter().map(|(v, d)| (act.act_vertex(g, *v), *d)).collect();
        let maps = self
            .maps
            .iter()
            .map(|(a, m)| {
                let im = act.act_arrow(g, a);
                let s = i64::from(im.sign);
                (im.arrow, m.iter().map(|r| r.iter().map(|x| s * x).collect()).collect())
            })
            .collect();
        QuiverRepresentation { dims, maps }
    }

    /// True when the module vanishes on frozen vertices.
    pub fn supported_on_unfrozen(&self, q: &IceQuiver) -> bool {
        q.frozen().iter().all(|v| self.dim(*v) == 0)
    }

    /// `dim top(L)_v = dim L_v − rank(Σ_{a: v→w} im L_a)`.
    pub fn top(&self, q: &IceQuiver) -> BTreeMap<VertexId, usize> {
        q.vertex_ids()
            .map(|v| {
                let d = self.dim(v);
                // columns of all maps landing in L_v
                let mut cols: Vec<Vec<Rational>> = Vec::new();
                for a in q.arrows().iter().filter(|a| a.source == v) {
                    let m = self.map(&a.id);
                    cols.extend((0..self.dim(a.target)).map(|c| m.iter().map(|row| rat(row[c])).collect()));
                }
                let r = if cols.is_empty() || d == 0 {
                    0
                } else {
                    linalg::rank(&Q, &cols)
                };
                (v, d - r)
            })
            .collect()
    }

    /// Whether every map is well defined over `F_p` with the same ranks as over
    /// `Q`, a cheap guard before point counting.
    pub fn same_ranks_mod(&self, p: u64) -> bool {
        let f = Fp::new(p);
        self.maps.values().all(|m| {
            if m.is_empty() || m[0].is_empty() {
                return true;
            }
            let mq: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|x| rat(*x)).collect()).collect();
            let mp: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|x| f.from_i64(*x)).collect()).collect();
            linalg::rank(&Q, &mq) == linalg::rank(&f, &mp)
        })
    }
}

/// All walks in the underlying graph, up to reversal, with at most
/// `max_len` vertices and no repeated vertex: the supports of string modules
/// of a tree-shaped quiver.
pub fn string_supports(q: &IceQuiver, max_len: usize) -> Vec<Vec<VertexId>> {
    let mut out: Vec<Vec<VertexId>> = Vec::new();
    let neighbours = |v: VertexId| -> Vec<VertexId> {
        let mut n: Vec<VertexId> = q
            .arrows()
            .iter()
            .filter_map(|a| {
                if a.source == v {
                    Some(a.target)
                } else if a.target == v {
                    Some(a.source)
                } else {
                    None
                }
            })
            .collect();
        n.sort();
        n.dedup();
        n
    };
    let mut stack: Vec<Vec<VertexId>> = q.vertex_ids().map(|v| vec![v]).collect();
    while let Some(walk) = stack.pop() {
        let (first, last) = (walk[0], *walk.last().unwrap());
        if first <= last {
            out.push(walk.clone());
        }
        if walk.len() == max_len {
            continue;
        }
        for n in neighbours(last) {
            if !walk.contains(&n) {
                let mut w = walk.clone();
                w.push(n);
                stack.push(w);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}
