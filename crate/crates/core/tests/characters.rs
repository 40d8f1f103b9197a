use std::collections::BTreeMap;

use icefold::character::{cluster_character, projected_character, ModuleDatum};
use icefold::cluster::{mutate_seed, row_ordered_orbits, Seed};
use icefold::format::{parse_quiver_file, QuiverFile};
use icefold::grassmannian::{count_subrepresentations, dimension_vectors, grassmannian_euler, DEFAULT_BUDGET};
use icefold::quiver::{exchange_matrix, IceQuiver, VertexId};
use icefold::representation::{string_supports, QuiverRepresentation};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn a3() -> QuiverFile {
    parse_quiver_file(include_str!("../../../fixtures/a3.iq")).unwrap()
}

fn thin(q: &IceQuiver, s: &[VertexId]) -> ModuleDatum {
    ModuleDatum::module(q, QuiverRepresentation::thin(q, s).unwrap()).unwrap()
}

#[test]
fn exchange_pair_identity() {
    let f = a3();
    let q = &f.quiver;
    let b = exchange_matrix(q).unwrap();
    let orbits = row_ordered_orbits(q, &f.action().unwrap().unwrap());
    let (x, y, z) = (thin(q, &[2]), thin(q, &[1]), thin(q, &[1, 2]));
    let z2 = ModuleDatum::gamma_summand(q, 3)
        .unwrap()
        .direct_sum(q, &ModuleDatum::gamma_summand(q, 5).unwrap());
    let cc = |d: &ModuleDatum| cluster_character(q, d, &b).unwrap();
    assert_eq!(cc(&x).mul(&cc(&y)), cc(&z).add(&cc(&z2)));
    let p = |d: &ModuleDatum| projected_character(q, d, &b, &orbits).unwrap();
    assert_eq!(p(&x).mul(&p(&y)), p(&z).add(&p(&z2)));
}

#[test]
fn simple_characters_are_one_step_mutations() {
    let f = a3();
    let q = &f.quiver;
    let b = exchange_matrix(q).unwrap();
    let seed = Seed::initial(b.clone());
    for k in q.unfrozen() {
        let expected = mutate_seed(&seed, k).unwrap().variable(k).unwrap();
        assert_eq!(
            cluster_character(q, &thin(q, &[k]), &b).unwrap(),
            expected,
            "vertex {k}"
        );
    }
}

/// Direct sums of thin strings on the unfrozen part plus `Γ` summands. Random
/// integer maps are avoided: their ranks can drop modulo small primes.
fn random_datum(rng: &mut StdRng, q: &IceQuiver) -> ModuleDatum {
    let unfrozen: Vec<Vec<VertexId>> = string_supports(q, 3)
        .into_iter()
        .filter(|s| s.iter().all(|v| !q.is_frozen(*v)))
        .collect();
    let mut gamma = BTreeMap::new();
    for v in q.vertex_ids() {
        if rng.gen_bool(0.3) {
            gamma.insert(v, rng.gen_range(1..=2));
        }
    }
    let mut d = ModuleDatum::new(q, gamma, QuiverRepresentation::zero(q)).unwrap();
    for _ in 0..rng.gen_range(0..=2) {
        d = d.direct_sum(q, &thin(q, &unfrozen[rng.gen_range(0..unfrozen.len())]));
    }
    d
}

#[test]
fn projected_character_is_constant_on_orbits() {
    let f = a3();
    let q = &f.quiver;
    let act = f.action().unwrap().unwrap();
    let b = exchange_matrix(q).unwrap();
    let orbits = row_ordered_orbits(q, &act);
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..50 {
        let d = random_datum(&mut rng, q);
        let p = projected_character(q, &d, &b, &orbits).unwrap();
        for g in act.group().elements() {
            assert_eq!(
                projected_character(q, &d.act(&act, g), &b, &orbits).unwrap(),
                p,
                "{d:?}"
            );
        }
    }
}

#[test]
fn character_is_multiplicative_on_random_sums() {
    let f = a3();
    let q = &f.quiver;
    let b = exchange_matrix(q).unwrap();
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..20 {
        let (x, y) = (random_datum(&mut rng, q), random_datum(&mut rng, q));
        if x.module.total_dim() + y.module.total_dim() > 5 {
            continue;
        }
        let lhs = cluster_character(q, &x.direct_sum(q, &y), &b).unwrap();
        let rhs = cluster_character(q, &x, &b)
            .unwrap()
            .mul(&cluster_character(q, &y, &b).unwrap());
        assert_eq!(lhs, rhs);
    }
}

/// A thin string module has a submodule of dimension `e` exactly when the
/// support of `e` is closed under the arrow maps, and then it is unique.
fn closed_under_maps(q: &IceQuiver, support: &[VertexId], sub: &BTreeMap<VertexId, usize>) -> bool {
    let inside = |v: VertexId| sub.get(&v).copied().unwrap_or(0) == 1;
    q.arrows()
        .iter()
        .filter(|a| support.contains(&a.source) && support.contains(&a.target))
        .all(|a| !inside(a.target) || inside(a.source))
}

#[test]
fn euler_characteristics_of_thin_strings() {
    let q = a3().quiver;
    let supports = string_supports(&q, 5);
    assert!(supports.len() > 10);
    for s in supports {
        let m = QuiverRepresentation::thin(&q, &s).unwrap();
        for e in dimension_vectors(&m) {
            let expected = i64::from(closed_under_maps(&q, &s, &e));
            assert_eq!(grassmannian_euler(&q, &m, &e).unwrap(), expected, "{s:?} {e:?}");
            assert_eq!(
                count_subrepresentations(&q, &m, &e, 2, DEFAULT_BUDGET).unwrap() as i64,
                expected
            );
        }
    }
}
