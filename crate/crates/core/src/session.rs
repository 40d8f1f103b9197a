//! Exploration sessions: a file, a history of moves and the seeds it reaches.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cluster::{mutate_seed, project_pi, row_ordered_orbits, Seed};
use crate::error::{Error, Result};
use crate::format::QuiverFile;
use crate::group::{self, orbit_of, GroupAction, Orbit};
use crate::mutation::{fold_matrix, fold_quiver_matrix, orbit_mutate, FoldConvention, FoldedExchangeMatrix};
use crate::quiver::{exchange_matrix, ExchangeMatrix, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Move {
    /// Mutation at the orbit of a vertex, on both seeds.
    Orbit(VertexId),
    /// Mutation at a single vertex of the unfolded seed.
    Vertex(VertexId),
}

#[derive(Clone, Debug)]
pub struct Session {
    pub file: QuiverFile,
    action: Option<GroupAction>,
    orbits: Vec<Orbit>,
    pub history: Vec<Move>,
    pub unfolded: Seed,
    pub folded: Option<Seed>,
}

/// Serialized view of a seed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeedView {
    pub matrix: ExchangeMatrix,
    /// Current cluster variable at each column key, in canonical text.
    pub cluster: BTreeMap<VertexId, String>,
}

impl From<&Seed> for SeedView {
    fn from(s: &Seed) -> Self {
        SeedView {
            matrix: s.matrix.clone(),
            cluster: s.cluster.iter().map(|(k, x)| (*k, x.to_string())).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StateView {
    pub history: Vec<Move>,
    pub unfolded: SeedView,
    pub folded: Option<SeedView>,
    /// `Some(true)` when the fold of the unfolded matrix equals the folded
    /// matrix and `π` of every unfolded variable is the folded variable of
    /// its orbit; `None` without a group.
    pub commutes: Option<bool>,
}

impl Session {
    pub fn new(file: QuiverFile) -> Result<Self> {
        let action = file.action()?;
        let unfolded = Seed::initial(exchange_matrix(&file.quiver)?);
        let (orbits, folded) = match &action {
            Some(act) => (
                row_ordered_orbits(&file.quiver, act),
                Some(Seed::initial(
                    fold_quiver_matrix(&file.quiver, act, FoldConvention::Row)?.matrix,
                )),
            ),
            None => (Vec::new(), None),
        };
        Ok(Session {
            file,
            action,
            orbits,
            history: Vec::new(),
            unfolded,
            folded,
        })
    }

    /// Rebuilds a session by applying `history` from the start.
    pub fn replay(file: QuiverFile, history: &[Move]) -> Result<Self> {
        let mut s = Session::new(file)?;
        for m in history {
            s.apply(*m)?;
        }
        Ok(s)
    }

    pub fn action(&self) -> Option<&GroupAction> {
        self.action.as_ref()
    }

    pub fn apply(&mut self, m: Move) -> Result<()> {
        let wrap = |e: Error| Error::at_prefix(&self.prefix(), e);
        match m {
            Move::Vertex(v) => {
                self.unfolded = mutate_seed(&self.unfolded, v).map_err(wrap)?;
            }
            Move::Orbit(v) => {
                let act = self
                    .action
                    .as_ref()
                    .ok_or_else(|| Error::Validation("orbit moves need a GROUP section".into()))?;
                let orbit = orbit_of(&self.orbits, v)
                    .ok_or_else(|| wrap(Error::UnknownVertex(v)))?
                    .clone();
                if orbit.frozen {
                    return Err(wrap(Error::FrozenOrbit(orbit.representative())));
                }
                group::matrix_admissibility(&self.unfolded.matrix, act).map_err(|w| wrap(w.into()))?;
                orbit_mutate(&self.unfolded.matrix, &orbit).map_err(wrap)?;
                let mut next = self.unfolded.clone();
                for &k in &orbit.members {
                    next = mutate_seed(&next, k).map_err(wrap)?;
                }
                let folded = match &self.folded {
                    Some(f) => Some(mutate_seed(f, orbit.representative()).map_err(wrap)?),
                    None => None,
                };
                self.unfolded = next;
                self.folded = folded;
            }
        }
        self.history.push(m);
        Ok(())
    }

    fn prefix(&self) -> Vec<VertexId> {
        self.history
            .iter()
            .map(|m| match m {
                Move::Orbit(v) | Move::Vertex(v) => *v,
            })
            .collect()
    }

    /// Drops the last move. Returns false when the history is empty.
    pub fn undo(&mut self) -> Result<bool> {
        if self.history.is_empty() {
            return Ok(false);
        }
        let mut h = self.history.clone();
        h.pop();
        *self = Session::replay(self.file.clone(), &h)?;
        Ok(true)
    }

    /// Fold of the current unfolded matrix.
    pub fn fold(&self) -> Result<FoldedExchangeMatrix> {
        let act = self
            .action
            .as_ref()
            .ok_or_else(|| Error::Validation("folding needs a GROUP section".into()))?;
        group::matrix_admissibility(&self.unfolded.matrix, act).map_err(Error::from)?;
        fold_matrix(&self.unfolded.matrix, &group::orbits(&self.file.quiver, act))
    }

    pub fn commutes(&self) -> Option<bool> {
        let folded = self.folded.as_ref()?;
        let matrix_ok = self.fold().is_ok_and(|f| {
            // the folded seed keeps row-ordered orbits; compare entry by entry
            folded.matrix.rows().iter().all(|r| {
                folded
                    .matrix
                    .cols()
                    .iter()
                    .all(|c| f.matrix.get(*r, *c) == folded.matrix.get(*r, *c))
            })
        });
        let vars_ok = self.unfolded.cluster.iter().all(|(i, x)| {
            let rep = orbit_of(&self.orbits, *i).map(Orbit::representative);
            match (project_pi(x, &self.orbits), rep.and_then(|r| folded.cluster.get(&r))) {
                (Ok(p), Some(y)) => p == *y,
                _ => false,
            }
        });
        Some(matrix_ok && vars_ok)
    }

    pub fn state(&self) -> StateView {
        StateView {
            history: self.history.clone(),
            unfolded: (&self.unfolded).into(),
            folded: self.folded.as_ref().map(Into::into),
            commutes: self.commutes(),
        }
    }

    /// Canonical texts of the current unfrozen variables.
    pub fn variables(&self) -> Variables {
        Variables {
            unfolded: self.unfolded.cluster.values().map(|x| x.to_string()).collect(),
            folded: self
                .folded
                .as_ref()
                .map(|f| f.cluster.values().map(|x| x.to_string()).collect())
                .unwrap_or_default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Variables {
    pub unfolded: Vec<String>,
    pub folded: Vec<String>,
}
