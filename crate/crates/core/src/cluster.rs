//! Seeds, exact mutation of cluster variables, exchange-graph enumeration and
//! the projection `π : x_i ↦ x_{orbit(i)}`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{self, orbit_of, GroupAction, Orbit};
use crate::laurent::LaurentPolynomial;
use crate::mutation::{fold_quiver_matrix, fz_mutate, orbit_mutate, FoldConvention};
use crate::quiver::{exchange_matrix, ExchangeMatrix, IceQuiver, Rational, VertexId};

pub fn var_name(key: VertexId) -> String {
    format!("x{key}")
}

fn key_of(name: &str) -> Option<VertexId> {
    name.strip_prefix('x')?.parse().ok()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    pub matrix: ExchangeMatrix,
    /// Initial variables, one per row key.
    pub vars: Vec<String>,
    /// Current variable at each column key.
    pub cluster: BTreeMap<VertexId, LaurentPolynomial>,
}

impl Seed {
    pub fn initial(matrix: ExchangeMatrix) -> Self {
        let vars: Vec<String> = matrix.rows().iter().map(|&k| var_name(k)).collect();
        let cluster = matrix
            .cols()
            .iter()
            .map(|&k| (k, LaurentPolynomial::var(&vars, matrix.row_position(k).unwrap())))
            .collect();
        Seed { matrix, vars, cluster }
    }

    /// Current variable at a row key; frozen keys give themselves.
    pub fn variable(&self, key: VertexId) -> Option<LaurentPolynomial> {
        if let Some(x) = self.cluster.get(&key) {
            return Some(x.clone());
        }
        let pos = self.matrix.row_position(key)?;
        Some(LaurentPolynomial::var(&self.vars, pos))
    }

    pub fn frozen_vars(&self) -> Vec<String> {
        self.matrix
            .rows()
            .iter()
            .filter(|k| !self.matrix.is_column(**k))
            .map(|&k| var_name(k))
            .collect()
    }

    /// The cluster as a sorted list of canonical texts.
    pub fn cluster_key(&self) -> Vec<String> {
        let mut k: Vec<String> = self.cluster.values().map(|x| x.to_string()).collect();
        k.sort();
        k
    }
}

/// `x_k' x_k = Π x_i^{[b_ik]_+} + Π x_i^{[−b_ik]_+}` together with `μ^FZ_k`.
pub fn mutate_seed(s: &Seed, k: VertexId) -> Result<Seed> {
    let matrix = fz_mutate(&s.matrix, k)?;
    let mut plus = LaurentPolynomial::one(&s.vars);
    let mut minus = LaurentPolynomial::one(&s.vars);
    for &i in s.matrix.rows() {
        let b = s.matrix.get(i, k).unwrap();
        if b == 0 {
            continue;
        }
        let x = s.variable(i).unwrap().pow(b.unsigned_abs() as u32);
        if b > 0 {
            plus = plus.mul(&x);
        } else {
            minus = minus.mul(&x);
        }
    }
    let new = plus.add(&minus).divide_exact(&s.cluster[&k])?;
    let mut cluster = s.cluster.clone();
    cluster.insert(k, new);
    Ok(Seed {
        matrix,
        vars: s.vars.clone(),
        cluster,
    })
}

#[derive(Clone, Debug)]
pub struct ExchangeGraph {
    pub seeds: Vec<Seed>,
    /// `(from, to, direction)`.
    pub edges: Vec<(usize, usize, VertexId)>,
    /// False when the budget stopped the search.
    pub complete: bool,
}

impl ExchangeGraph {
    pub fn cluster_count(&self) -> usize {
        self.seeds.len()
    }

    /// Distinct unfrozen cluster variables over all seeds.
    pub fn variables(&self) -> BTreeSet<LaurentPolynomial> {
        self.seeds.iter().flat_map(|s| s.cluster.values().cloned()).collect()
    }
}

/// Breadth-first closure under mutation; seeds are identified by their cluster.
pub fn enumerate_exchange_graph(s: &Seed, max_seeds: usize) -> Result<ExchangeGraph> {
    let mut seeds = vec![s.clone()];
    let mut index: BTreeMap<Vec<String>, usize> = BTreeMap::from([(s.cluster_key(), 0)]);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let mut complete = true;
    while let Some(at) = queue.pop_front() {
        for &k in s.matrix.cols() {
            let next = mutate_seed(&seeds[at], k)?;
            let key = next.cluster_key();
            let to = match index.get(&key) {
                Some(&to) => to,
                None => {
                    if seeds.len() >= max_seeds {
                        complete = false;
                        continue;
                    }
                    seeds.push(next);
                    index.insert(key, seeds.len() - 1);
                    queue.push_back(seeds.len() - 1);
                    seeds.len() - 1
                }
            };
            if at < to {
                edges.push((at, to, k));
            }
        }
    }
    Ok(ExchangeGraph { seeds, edges, complete })
}

/// `π`: substitutes `x_i ↦ x_{rep(orbit(i))}`. The result is over the
/// representatives of `orbits`, in the given order.
pub fn project_pi(p: &LaurentPolynomial, orbits: &[Orbit]) -> Result<LaurentPolynomial> {
    let vars: Vec<String> = orbits.iter().map(|o| var_name(o.representative())).collect();
    let map = p
        .vars()
        .iter()
        .map(|v| {
            key_of(v)
                .and_then(|k| orbits.iter().position(|o| o.contains(k)))
                .ok_or_else(|| Error::Validation(format!("variable {v} is not covered by the orbits")))
        })
        .collect::<Result<Vec<usize>>>()?;
    Ok(p.substitute(&vars, &map))
}

/// Orbits in the row order of a folded matrix: unfrozen then frozen, each by
/// representative.
pub fn row_ordered_orbits(q: &IceQuiver, act: &GroupAction) -> Vec<Orbit> {
    let mut o = group::orbits(q, act);
    o.sort_by_key(|o| (o.frozen, o.representative()));
    o
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoldVariableStep {
    pub prefix: Vec<VertexId>,
    /// `(orbit, π(unfolded), folded)` where they differ.
    pub mismatches: Vec<(VertexId, String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoldVariableReport {
    pub steps: Vec<FoldVariableStep>,
}

impl FoldVariableReport {
    pub fn consistent(&self) -> bool {
        self.steps.iter().all(|s| s.mismatches.is_empty())
    }
}

/// Runs the orbit sequence on the unfolded seed and the FZ sequence on the
/// (row-convention) folded seed, comparing `π` of every unfolded variable with
/// the folded variable of its orbit at every prefix.
pub fn check_fold_variables(q: &IceQuiver, act: &GroupAction, seq: &[VertexId]) -> Result<FoldVariableReport> {
    group::is_admissible(q, act)?;
    let orbits = row_ordered_orbits(q, act);
    let mut unfolded = Seed::initial(exchange_matrix(q)?);
    let mut folded = Seed::initial(fold_quiver_matrix(q, act, FoldConvention::Row)?.matrix);
    let compare = |prefix: &[VertexId], u: &Seed, f: &Seed| -> Result<FoldVariableStep> {
        let mut mismatches = Vec::new();
        for (&i, x) in &u.cluster {
            let o = orbit_of(&orbits, i).unwrap();
            let lhs = project_pi(x, &orbits)?;
            let rhs = f.cluster[&o.representative()].clone();
            if lhs != rhs {
                mismatches.push((i, lhs.to_string(), rhs.to_string()));
            }
        }
        Ok(FoldVariableStep {
            prefix: prefix.to_vec(),
            mismatches,
        })
    };
    let mut steps = vec![compare(&[], &unfolded, &folded)?];
    for (t, &v) in seq.iter().enumerate() {
        let prefix = &seq[..t];
        let wrap = |e: Error| Error::at_prefix(prefix, e);
        let orbit = orbit_of(&orbits, v).ok_or_else(|| wrap(Error::UnknownVertex(v)))?;
        if orbit.frozen {
            return Err(wrap(Error::FrozenOrbit(orbit.representative())));
        }
        group::matrix_admissibility(&unfolded.matrix, act).map_err(|w| wrap(w.into()))?;
        // orbit members commute; the matrix check guards the order
        orbit_mutate(&unfolded.matrix, orbit).map_err(wrap)?;
        for &m in &orbit.members {
            unfolded = mutate_seed(&unfolded, m).map_err(wrap)?;
        }
        folded = mutate_seed(&folded, orbit.representative()).map_err(wrap)?;
        steps.push(compare(&seq[..=t], &unfolded, &folded)?);
    }
    Ok(FoldVariableReport { steps })
}

/// All sequences over `alphabet` of length ≤ `max_len` without immediate repeats.
pub fn reduced_sequences(alphabet: &[VertexId], max_len: usize) -> Vec<Vec<VertexId>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for &a in alphabet {
                if s.last() != Some(&a) {
                    let mut t: Vec<VertexId> = s.clone();
                    t.push(a);
                    next.push(t);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// `Σ_g` of a polynomial's `G`-translates on the variables `x_i`.
pub fn symmetrize(p: &LaurentPolynomial, act: &GroupAction) -> Result<LaurentPolynomial> {
    let mut total = LaurentPolynomial::zero(p.vars());
    for g in act.group().elements() {
        let map = p
            .vars()
            .iter()
            .map(|v| {
                let k = key_of(v).ok_or_else(|| Error::Validation(format!("bad variable {v}")))?;
                let image = var_name(act.act_vertex(g, k));
                p.vars()
                    .iter()
                    .position(|w| *w == image)
                    .ok_or_else(|| Error::Validation(format!("{image} missing")))
            })
            .collect::<Result<Vec<usize>>>()?;
        total = total.add(&p.substitute(p.vars(), &map));
    }
    Ok(total.scale(&(Rational::one() / Rational::from_integer((act.group().order() as i64).into()))))
}
