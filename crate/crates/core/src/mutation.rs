//! Fomin–Zelevinsky mutation, orbit mutation and folding of exchange matrices.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{self, orbit_of, GroupAction, Orbit};
use crate::quiver::{exchange_matrix, ExchangeMatrix, IceQuiver, VertexId};

fn pos(x: i64) -> i64 {
    x.max(0)
}

/// `μ_k`: negates row and column `k`, and updates the other entries by
/// `b_il + [b_ik]_+ [b_kl]_+ − [−b_ik]_+ [−b_kl]_+`.
pub fn fz_mutate(b: &ExchangeMatrix, k: VertexId) -> Result<ExchangeMatrix> {
    let kc = b.col_position(k).ok_or(Error::FrozenDirection(k))?;
    let kr = b.row_position(k).expect("column keys are row keys");
    let mut out = b.clone();
    let e = b.entries();
    for r in 0..b.rows().len() {
        for c in 0..b.cols().len() {
            let v = if r == kr || c == kc {
                -e[r][c]
            } else {
                let (x, y) = (e[r][kc], e[kr][c]);
                e[r][c] + pos(x) * pos(y) - pos(-x) * pos(-y)
            };
            out.set(r, c, v);
        }
    }
    Ok(out)
}

/// How orbit sums are formed when folding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FoldConvention {
    /// `b_{I,J} = Σ_{k∈I} b̃_{k,j}` for a fixed `j ∈ J`.
    #[default]
    Row,
    /// `b_{I,J} = Σ_{l∈J} b̃_{i,l}` for a fixed `i ∈ I`.
    Column,
}

impl std::str::FromStr for FoldConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "row" => Ok(FoldConvention::Row),
            "column" => Ok(FoldConvention::Column),
            other => Err(Error::Validation(format!("unknown fold convention `{other}`"))),
        }
    }
}

/// Exchange matrix indexed by orbits (keyed by their least members).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldedExchangeMatrix {
    pub matrix: ExchangeMatrix,
    pub orbits: Vec<Orbit>,
    /// `d` with `diag(d) · B` skew-symmetric on the unfrozen part.
    pub symmetrizer: Vec<u64>,
    pub convention: FoldConvention,
}

impl FoldedExchangeMatrix {
    /// `d'` with `B · diag(d')` skew-symmetric.
    pub fn right_symmetrizer(&self) -> Vec<u64> {
        let lcm = self.symmetrizer.iter().copied().fold(1, num_integer::lcm);
        self.symmetrizer.iter().map(|d| lcm / d).collect()
    }

    pub fn mutate(&self, k: VertexId) -> Result<FoldedExchangeMatrix> {
        let rep = orbit_of(&self.orbits, k).map(Orbit::representative).unwrap_or(k);
        Ok(FoldedExchangeMatrix {
            matrix: fz_mutate(&self.matrix, rep)?,
            orbits: self.orbits.clone(),
            symmetrizer: self.symmetrizer.clone(),
            convention: self.convention,
        })
    }

    pub fn is_symmetrized(&self) -> bool {
        self.matrix.is_skew_symmetrized_by(&self.symmetrizer)
    }
}

impl fmt::Display for FoldedExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.matrix)?;
        let s: Vec<String> = self.symmetrizer.iter().map(|d| d.to_string()).collect();
        let r: Vec<String> = self.right_symmetrizer().iter().map(|d| d.to_string()).collect();
        writeln!(f, "symmetrizer (D*B skew): ({})", s.join(","))?;
        writeln!(f, "column symmetrizer (B*D skew): ({})", r.join(","))
    }
}

/// Folds with the default row convention.
pub fn fold_matrix(b: &ExchangeMatrix, orbits: &[Orbit]) -> Result<FoldedExchangeMatrix> {
    fold_matrix_with(b, orbits, FoldConvention::Row)
}

/// Folds `b` over `orbits`, checking that every entry is independent of the
/// fixed representative and agrees with the averaged form
/// `Σ_{k∈I, l∈J} b̃_{k,l} / |J|` (row) or `/ |I|` (column).
pub fn fold_matrix_with(
    b: &ExchangeMatrix,
    orbits: &[Orbit],
    convention: FoldConvention,
) -> Result<FoldedExchangeMatrix> {
    let covered: BTreeSet<VertexId> = orbits.iter().flat_map(|o| o.members.iter().copied()).collect();
    let rows: BTreeSet<VertexId> = b.rows().iter().copied().collect();
    if covered != rows {
        return Err(Error::Validation("orbits do not partition the row keys".into()));
    }
    for o in orbits {
        if o.members.iter().any(|m| b.is_column(*m) == o.frozen) {
            return Err(Error::Validation(format!("orbit {o} mixes frozen and unfrozen keys")));
        }
    }
    let entry = |x: VertexId, y: VertexId| -> i64 { b.signed_count(x, y).expect("at least one key is a column") };
    let row_keys: Vec<VertexId> = orbits.iter().map(Orbit::representative).collect();
    let col_orbits: Vec<&Orbit> = orbits.iter().filter(|o| !o.frozen).collect();
    let col_keys: Vec<VertexId> = col_orbits.iter().map(|o| o.representative()).collect();
    let mut entries = Vec::with_capacity(orbits.len());
    for oi in orbits {
        let mut row = Vec::with_capacity(col_orbits.len());
        for oj in &col_orbits {
            let (fixed, summed) = match convention {
                FoldConvention::Row => (&oj.members, &oi.members),
                FoldConvention::Column => (&oi.members, &oj.members),
            };
            let values: Vec<i64> = fixed
                .iter()
                .map(|&f| {
                    summed
                        .iter()
                        .map(|&s| match convention {
                            FoldConvention::Row => entry(s, f),
                            FoldConvention::Column => entry(f, s),
                        })
                        .sum()
                })
                .collect();
            if values.iter().any(|v| *v != values[0]) {
                return Err(Error::NotWellDefined {
                    row: oi.representative(),
                    col: oj.representative(),
                });
            }
            let total: i64 = oi
                .members
                .iter()
                .flat_map(|&k| oj.members.iter().map(move |&l| (k, l)))
                .map(|(k, l)| entry(k, l))
                .sum();
            if Ratio::new(total, fixed.len() as i64) != Ratio::from_integer(values[0]) {
                return Err(Error::NotWellDefined {
                    row: oi.representative(),
                    col: oj.representative(),
                });
            }
            row.push(values[0]);
        }
        entries.push(row);
    }
    let symmetrizer = col_orbits
        .iter()
        .map(|o| match convention {
            FoldConvention::Row => o.stabilizer_order as u64,
            FoldConvention::Column => o.size() as u64,
        })
        .collect();
    Ok(FoldedExchangeMatrix {
        matrix: ExchangeMatrix::new(row_keys, col_keys, entries)?,
        orbits: orbits.to_vec(),
        symmetrizer,
        convention,
    })
}

/// Checks admissibility of `(q, G)` and folds its exchange matrix.
pub fn fold_quiver_matrix(
    q: &IceQuiver,
    act: &GroupAction,
    convention: FoldConvention,
) -> Result<FoldedExchangeMatrix> {
    group::is_admissible(q, act)?;
    let b = exchange_matrix(q)?;
    fold_matrix_with(&b, &group::orbits(q, act), convention)
}

fn permutations(items: &[VertexId]) -> Vec<Vec<VertexId>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn mutate_in_order(b: &ExchangeMatrix, order: &[VertexId]) -> Result<ExchangeMatrix> {
    order.iter().try_fold(b.clone(), |m, &k| fz_mutate(&m, k))
}

/// Composite of `μ_i` over the orbit members. Orders tried: every permutation
/// for orbits of size ≤ 4, otherwise ascending and descending.
pub fn orbit_mutate(b: &ExchangeMatrix, orbit: &Orbit) -> Result<ExchangeMatrix> {
    if orbit.frozen || orbit.members.iter().any(|m| !b.is_column(*m)) {
        return Err(Error::FrozenOrbit(orbit.representative()));
    }
    let orders = if orbit.size() <= 4 {
        permutations(&orbit.members)
    } else {
        let asc = orbit.members.clone();
        let mut desc = asc.clone();
        desc.reverse();
        vec![asc, desc]
    };
    let first = mutate_in_order(b, &orders[0])?;
    for order in &orders[1..] {
        if mutate_in_order(b, order)? != first {
            return Err(Error::OrderDependent(orbit.representative()));
        }
    }
    Ok(first)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutationStep {
    pub prefix: Vec<VertexId>,
    pub unfolded: ExchangeMatrix,
    /// Fold of the orbit-mutated unfolded matrix.
    pub folded_after: ExchangeMatrix,
    /// FZ mutation sequence applied to the initial fold.
    pub mutated_fold: ExchangeMatrix,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutationTrace {
    pub steps: Vec<CommutationStep>,
}

impl CommutationTrace {
    pub fn commutes(&self) -> bool {
        self.steps.iter().all(|s| s.equal)
    }
}

/// Runs `seq` (orbits named by any member) on both sides and compares
/// `fold(μ_orbit …(b̃))` with `μ^FZ …(fold(b̃))` at every prefix, including the
/// empty one. Admissibility is re-checked before each step.
pub fn check_fold_commutes(q: &IceQuiver, act: &GroupAction, seq: &[VertexId]) -> Result<CommutationTrace> {
    check_fold_commutes_with(q, act, seq, FoldConvention::Row)
}

pub fn check_fold_commutes_with(
    q: &IceQuiver,
    act: &GroupAction,
    seq: &[VertexId],
    convention: FoldConvention,
) -> Result<CommutationTrace> {
    group::is_admissible(q, act)?;
    let orbits = group::orbits(q, act);
    let mut b = exchange_matrix(q)?;
    let mut folded = fold_matrix_with(&b, &orbits, convention)?;
    let mut steps = vec![CommutationStep {
        prefix: vec![],
        unfolded: b.clone(),
        folded_after: folded.matrix.clone(),
        mutated_fold: folded.matrix.clone(),
        equal: true,
    }];
    for (t, &v) in seq.iter().enumerate() {
        let prefix = &seq[..t];
        let wrap = |e: Error| Error::at_prefix(prefix, e);
        let orbit = orbit_of(&orbits, v).ok_or_else(|| wrap(Error::UnknownVertex(v)))?;
        if orbit.frozen {
            return Err(wrap(Error::FrozenOrbit(orbit.representative())));
        }
        group::matrix_admissibility(&b, act).map_err(|w| wrap(w.into()))?;
        b = orbit_mutate(&b, orbit).map_err(wrap)?;
        folded = folded.mutate(orbit.representative()).map_err(wrap)?;
        let refold = fold_matrix_with(&b, &orbits, convention).map_err(wrap)?;
        steps.push(CommutationStep {
            prefix: seq[..=t].to_vec(),
            unfolded: b.clone(),
            equal: refold.matrix == folded.matrix,
            folded_after: refold.matrix,
            mutated_fold: folded.matrix.clone(),
        });
    }
    Ok(CommutationTrace { steps })
}
