//! Random instances for the property harnesses: cyclic group actions on small
//! ice quivers, random and invariant potentials, orbit sequences.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{self, ArrowImage, FiniteGroup, GeneratorImage, GroupAction, Orbit};
use crate::mutation::{check_fold_commutes_with, FoldConvention};
use crate::quiver::{exchange_matrix, rat, Cycle, GradedArrow, IceQuiver, Potential, Vertex, VertexId};

#[derive(Clone, Debug)]
pub struct PairConfig {
    pub max_vertices: usize,
    pub max_order: usize,
    /// Random signs on arrow orbits whenever the action allows them.
    pub signed: bool,
    /// Reject pairs with G-loops or G-2-cycles, loops or 2-cycles.
    pub admissible: bool,
    /// Allow arrows between frozen vertices (always in the frozen subquiver).
    pub frozen_arrows: bool,
    pub frozen_probability: f64,
}

impl Default for PairConfig {
    fn default() -> Self {
        PairConfig {
            max_vertices: 8,
            max_order: 4,
            signed: false,
            admissible: true,
            frozen_arrows: false,
            frozen_probability: 0.3,
        }
    }
}

fn divisors(m: usize) -> Vec<usize> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

/// A quiver with a `Z/m` action (`m ≤ max_order`), built orbit by orbit so the
/// action is valid by construction.
pub fn random_pair<R: Rng>(rng: &mut R, cfg: &PairConfig) -> Result<(IceQuiver, GroupAction)> {
    let m = rng.gen_range(1..=cfg.max_order.max(1));
    let n_target = rng.gen_range(2..=cfg.max_vertices.max(2));
    let mut orbit_members: Vec<Vec<VertexId>> = Vec::new();
    let mut next: VertexId = 1;
    while (next as usize) <= n_target {
        let room = n_target + 1 - next as usize;
        let sizes: Vec<usize> = divisors(m).into_iter().filter(|s| *s <= room).collect();
        let s = *sizes.choose(rng).unwrap();
        orbit_members.push((next..next + s as VertexId).collect());
        next += s as VertexId;
    }
    let mut frozen_orbit: Vec<bool> = orbit_members
        .iter()
        .map(|_| rng.gen_bool(cfg.frozen_probability))
        .collect();
    if frozen_orbit.iter().all(|f| *f) {
        frozen_orbit[0] = false;
    }
    let frozen: BTreeSet<VertexId> = orbit_members
        .iter()
        .zip(&frozen_orbit)
        .filter(|(_, f)| **f)
        .flat_map(|(o, _)| o.iter().copied())
        .collect();
    let orbit_index: BTreeMap<VertexId, usize> = orbit_members
        .iter()
        .enumerate()
        .flat_map(|(k, o)| o.iter().map(move |v| (*v, k)))
        .collect();
    let shift = |v: VertexId, k: usize| -> VertexId {
        let o = &orbit_members[orbit_index[&v]];
        let p = o.iter().position(|x| *x == v).unwrap();
        o[(p + k) % o.len()]
    };
    let vertices: Vec<VertexId> = (1..next).collect();
    let mut arrows: Vec<GradedArrow> = Vec::new();
    let mut gen_arrows: BTreeMap<String, ArrowImage> = BTreeMap::new();
    let draws = rng.gen_range(1..=2 * vertices.len());
    let mut pairs: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for t in 0..draws {
        let x = *vertices.choose(rng).unwrap();
        let y = *vertices.choose(rng).unwrap();
        let both_frozen = frozen.contains(&x) && frozen.contains(&y);
        if both_frozen && !cfg.frozen_arrows {
            continue;
        }
        if cfg.admissible && orbit_index[&x] == orbit_index[&y] {
            continue;
        }
        let mut orbit_pairs = Vec::new();
        for k in 0..m {
            let p = (shift(x, k), shift(y, k));
            if orbit_pairs.contains(&p) {
                break;
            }
            orbit_pairs.push(p);
        }
        if cfg.admissible {
            let mut trial = pairs.clone();
            trial.extend(orbit_pairs.iter().copied());
            let two_cycle = trial
                .iter()
                .any(|&(s, t)| trial.contains(&(t, s)) && !(frozen.contains(&s) && frozen.contains(&t)));
            let g_two_cycle = trial
                .iter()
                .any(|&(s, t)| trial.iter().any(|&(u, z)| u == t && orbit_index[&z] == orbit_index[&s]));
            if two_cycle || g_two_cycle {
                continue;
            }
        }
        let len = orbit_pairs.len();
        let repeat = m / len;
        let mut signs: Vec<i8> = vec![1; len];
        if cfg.signed {
            for s in signs.iter_mut() {
                *s = if rng.gen_bool(0.5) { -1 } else { 1 };
            }
            let prod: i8 = signs.iter().product();
            if repeat % 2 == 1 && prod == -1 {
                signs[0] = -signs[0];
            }
        }
        for (k, &(s, tgt)) in orbit_pairs.iter().enumerate() {
            let id = format!("a{t}_{k}");
            arrows.push(GradedArrow::new(id.clone(), s, tgt));
            gen_arrows.insert(
                id,
                ArrowImage {
                    sign: signs[k],
                    arrow: format!("a{t}_{}", (k + 1) % len),
                },
            );
        }
        pairs.extend(orbit_pairs);
    }
    let q = IceQuiver::new(
        "random",
        vertices
            .iter()
            .map(|&id| Vertex {
                id,
                label: id.to_string(),
            })
            .collect(),
        frozen.iter().copied(),
        arrows,
        None,
    )?;
    let group = FiniteGroup::cyclic(m)?;
    let img = GeneratorImage {
        element: if m > 1 { 1 } else { 0 },
        vertices: vertices.iter().map(|&v| (v, shift(v, 1))).collect(),
        arrows: gen_arrows,
    };
    let act = if m == 1 {
        GroupAction::trivial(&q)
    } else {
        GroupAction::from_generators(&q, group, &[img])?
    };
    if cfg.admissible {
        exchange_matrix(&q)?;
        group::is_admissible(&q, &act)?;
    }
    Ok((q, act))
}

/// Draws until an admissible pair appears.
pub fn random_admissible_pair<R: Rng>(rng: &mut R, max_vertices: usize, max_order: usize) -> (IceQuiver, GroupAction) {
    let cfg = PairConfig {
        max_vertices,
        max_order,
        ..PairConfig::default()
    };
    loop {
        if let Ok(pair) = random_pair(rng, &cfg) {
            return pair;
        }
    }
}

/// Random sequence of unfrozen orbit representatives.
pub fn random_sequence<R: Rng>(rng: &mut R, orbits: &[Orbit], len: usize) -> Vec<VertexId> {
    let unfrozen: Vec<VertexId> = orbits.iter().filter(|o| !o.frozen).map(Orbit::representative).collect();
    (0..len).map(|_| *unfrozen.choose(rng).unwrap()).collect()
}

/// All distinct cycles of length at most `max_len`, in canonical form.
pub fn cycles_up_to(q: &IceQuiver, max_len: usize) -> Vec<Cycle> {
    let mut out = BTreeSet::new();
    // word in traversal order, converted to composition order at the end
    fn extend(
        q: &IceQuiver,
        start: VertexId,
        at: VertexId,
        word: &mut Vec<String>,
        max_len: usize,
        out: &mut BTreeSet<Cycle>,
    ) {
        if word.len() >= max_len {
            return;
        }
        for a in q.arrows().iter().filter(|a| a.source == at) {
            word.push(a.id.clone());
            if a.target == start {
                let mut comp = word.clone();
                comp.reverse();
                out.insert(Cycle::from_closed_word(comp));
            }
            extend(q, start, a.target, word, max_len, out);
            word.pop();
        }
    }
    for v in q.vertex_ids() {
        extend(q, v, v, &mut Vec::new(), max_len, &mut out);
    }
    out.into_iter().collect()
}

/// A random rational combination of cycles of length ≤ `max_len`.
pub fn random_potential<R: Rng>(rng: &mut R, q: &IceQuiver, max_terms: usize, max_len: usize) -> Potential {
    let cycles = cycles_up_to(q, max_len);
    let mut w = Potential::zero();
    if cycles.is_empty() {
        return w;
    }
    for _ in 0..rng.gen_range(1..=max_terms) {
        let c = cycles.choose(rng).unwrap().clone();
        let num = rng.gen_range(-4i64..=4);
        let den = rng.gen_range(1i64..=3);
        w.add_term(rat(num) / rat(den), c);
    }
    w
}

/// `Σ_g g·W` for a random `W`.
pub fn random_invariant_potential<R: Rng>(
    rng: &mut R,
    q: &IceQuiver,
    act: &GroupAction,
    max_terms: usize,
    max_len: usize,
) -> Potential {
    let w = random_potential(rng, q, max_terms, max_len);
    act.group()
        .elements()
        .fold(Potential::zero(), |acc, g| acc.add(&act.act_potential(g, &w)))
}

/// A random quiver with cycles (no group), for potential identities.
pub fn random_quiver_with_cycles<R: Rng>(rng: &mut R, max_vertices: usize, max_arrows: usize) -> IceQuiver {
    let n = rng.gen_range(1..=max_vertices.max(1)) as VertexId;
    let arrows: Vec<GradedArrow> = (0..rng.gen_range(1..=max_arrows.max(1)))
        .map(|k| GradedArrow::new(format!("a{k}"), rng.gen_range(1..=n), rng.gen_range(1..=n)))
        .collect();
    let frozen: Vec<VertexId> = (1..=n).filter(|_| rng.gen_bool(0.3)).collect();
    IceQuiver::new(
        "random",
        (1..=n)
            .map(|id| Vertex {
                id,
                label: id.to_string(),
            })
            .collect(),
        frozen,
        arrows,
        None,
    )
    .expect("random quiver is valid")
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutationSummary {
    pub instances: usize,
    pub steps_checked: usize,
    /// Sequences cut short because the mutated quiver stopped being admissible.
    pub truncated: usize,
    pub failures: Vec<String>,
}

/// Randomized fold/mutate commutation harness.
pub fn commutation_harness<R: Rng>(
    rng: &mut R,
    instances: usize,
    max_vertices: usize,
    max_order: usize,
    max_len: usize,
    convention: FoldConvention,
) -> CommutationSummary {
    let mut summary = CommutationSummary::default();
    for n in 0..instances {
        let (q, act) = random_admissible_pair(rng, max_vertices, max_order);
        let orbits = group::orbits(&q, &act);
        let len = rng.gen_range(0..=max_len);
        let mut seq = random_sequence(rng, &orbits, len);
        summary.instances += 1;
        let trace = loop {
            match check_fold_commutes_with(&q, &act, &seq, convention) {
                Ok(t) => break Ok(t),
                Err(Error::AtPrefix { prefix, source }) if matches!(*source, Error::NotAdmissible(_)) => {
                    summary.truncated += 1;
                    seq = prefix;
                }
                Err(e) => break Err(e),
            }
        };
        match trace {
            Ok(t) => {
                summary.steps_checked += t.steps.len() - 1;
                if let Some(bad) = t.steps.iter().find(|s| !s.equal) {
                    summary
                        .failures
                        .push(format!("instance {n}: prefix {:?} differs", bad.prefix));
                }
            }
            Err(e) => summary.failures.push(format!("instance {n}: {e}")),
        }
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{check_action, potential_invariant};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn random_pairs_are_valid_actions() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let (q, act) = random_admissible_pair(&mut rng, 8, 4);
            assert!(check_action(&q, &act).is_valid());
            assert!(group::is_admissible(&q, &act).is_ok());
        }
        let cfg = PairConfig {
            signed: true,
            admissible: false,
            frozen_arrows: true,
            max_vertices: 6,
            ..PairConfig::default()
        };
        for _ in 0..50 {
            let (q, act) = random_pair(&mut rng, &cfg).unwrap();
            assert!(check_action(&q, &act).is_valid(), "{:?}", check_action(&q, &act));
        }
    }

    #[test]
    fn invariant_potentials_are_invariant() {
        let mut rng = StdRng::seed_from_u64(11);
        let cfg = PairConfig {
            signed: true,
            admissible: false,
            frozen_arrows: true,
            max_vertices: 6,
            ..PairConfig::default()
        };
        for _ in 0..30 {
            let (q, act) = random_pair(&mut rng, &cfg).unwrap();
            let w = random_invariant_potential(&mut rng, &q, &act, 4, 5);
            assert!(potential_invariant(&w, &act));
        }
    }

    #[test]
    fn cycle_enumeration_on_a_triangle() {
        let q = IceQuiver::simple("t", &[1, 2, 3], &[], &[("a", 1, 2), ("b", 2, 3), ("c", 3, 1)]).unwrap();
        let cycles = cycles_up_to(&q, 3);
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0], q.cycle(&["c", "b", "a"]).unwrap());
        assert!(cycles_up_to(&q, 2).is_empty());
    }

    #[test]
    fn small_commutation_run() {
        let mut rng = StdRng::seed_from_u64(3);
        let s = commutation_harness(&mut rng, 40, 8, 4, 6, FoldConvention::Row);
        assert!(s.failures.is_empty(), "{:?}", s.failures);
        assert_eq!(s.instances, 40);
    }
}
