//! Euler characteristics of quiver Grassmannians by counting points over
//! prime fields and interpolating.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Field, Fp};
use crate::quiver::{rat, IceQuiver, Rational, VertexId};
use crate::representation::QuiverRepresentation;

/// Default cap on enumerated partial subrepresentations per prime.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

pub const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

type Vector = Vec<u64>;

/// Point-count polynomial of `Gr_e(L)` together with its samples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointCount {
    /// Integer coefficients, constant term first.
    pub coefficients: Vec<i64>,
    pub samples: Vec<(u64, u64)>,
}

impl PointCount {
    pub fn euler(&self) -> i64 {
        self.coefficients.iter().sum()
    }

    pub fn eval(&self, q: i64) -> i64 {
        self.coefficients.iter().rev().fold(0, |acc, c| acc * q + c)
    }
}

/// `Σ_v e_v (d_v − e_v)`.
pub fn degree_bound(m: &QuiverRepresentation, e: &BTreeMap<VertexId, usize>) -> usize {
    m.dims.iter().map(|(v, d)| e.get(v).map_or(0, |x| x * (d - x))).sum()
}

/// Number of `e`-dimensional subrepresentations of `m` over `F_p`.
pub fn count_subrepresentations(
    q: &IceQuiver,
    m: &QuiverRepresentation,
    e: &BTreeMap<VertexId, usize>,
    p: u64,
    budget: u64,
) -> Result<u64> {
    m.validate(q)?;
    for (v, x) in e {
        if *x > m.dim(*v) {
            return Err(Error::Validation(format!("dimension {x} at {v} exceeds the module")));
        }
    }
    let f = Fp::new(p);
    let order: Vec<VertexId> = q.vertex_ids().collect();
    let maps: BTreeMap<&str, Vec<Vec<u64>>> = q
        .arrows()
        .iter()
        .map(|a| {
            let mp = m
                .map(&a.id)
                .iter()
                .map(|r| r.iter().map(|x| f.from_i64(*x)).collect())
                .collect();
            (a.id.as_str(), mp)
        })
        .collect();
    let mut ctx = Counter {
        q,
        m,
        e,
        f,
        order,
        maps,
        chosen: BTreeMap::new(),
        work: 0,
        budget,
    };
    ctx.run(0)
}

struct Counter<'a> {
    q: &'a IceQuiver,
    m: &'a QuiverRepresentation,
    e: &'a BTreeMap<VertexId, usize>,
    f: Fp,
    order: Vec<VertexId>,
    maps: BTreeMap<&'a str, Vec<Vec<u64>>>,
    /// Row bases of the chosen subspaces.
    chosen: BTreeMap<VertexId, Vec<Vector>>,
    work: u64,
    budget: u64,
}

impl Counter<'_> {
    fn tick(&mut self) -> Result<()> {
        self.work += 1;
        if self.work > self.budget {
            return Err(Error::Budget(self.budget));
        }
        Ok(())
    }

    fn run(&mut self, k: usize) -> Result<u64> {
        if k == self.order.len() {
            return Ok(1);
        }
        let v = self.order[k];
        let d = self.m.dim(v);
        let ev = self.e.get(&v).copied().unwrap_or(0);
        let (lower, upper) = self.bounds(v);
        let lo = reduced(&self.f, lower);
        let up = reduced(&self.f, upper);
        if lo.len() > ev || up.len() < ev {
            return Ok(0);
        }
        if !lo.is_empty() {
            let mut t = up.clone();
            t.extend(lo.iter().cloned());
            if linalg::rank(&self.f, &t) > up.len() {
                return Ok(0);
            }
        }
        // complement of `lo` inside `up`
        let mut ext = lo.clone();
        let mut comp = Vec::new();
        for u in &up {
            let mut t = ext.clone();
            t.push(u.clone());
            if linalg::rank(&self.f, &t) > ext.len() {
                ext.push(u.clone());
                comp.push(u.clone());
            }
        }
        let later_depends = self.order[k + 1..].iter().any(|w| {
            self.q
                .arrows()
                .iter()
                .any(|a| (a.source == v && a.target == *w) || (a.target == v && a.source == *w))
        });
        let r = ev - lo.len();
        if !later_depends {
            let rest = self.run(k + 1)?;
            return Ok(gaussian_binomial(comp.len() as u64, r as u64, self.f.p) * rest);
        }
        let mut total = 0;
        for coords in subspaces(&self.f, comp.len(), r) {
            self.tick()?;
            let mut basis = lo.clone();
            for row in &coords {
                let mut w = vec![0; d];
                for (c, b) in row.iter().zip(&comp) {
                    for (x, y) in w.iter_mut().zip(b) {
                        *x = self.f.add(x, &self.f.mul(c, y));
                    }
                }
                basis.push(w);
            }
            self.chosen.insert(v, basis);
            total += self.run(k + 1)?;
            self.chosen.remove(&v);
        }
        Ok(total)
    }

    /// `W ⊆ U_v ⊆ K` forced by the already chosen neighbours.
    fn bounds(&self, v: VertexId) -> (Vec<Vector>, Vec<Vector>) {
        let d = self.m.dim(v);
        let f = &self.f;
        let mut lower: Vec<Vector> = Vec::new();
        // equations whose common kernel is K
        let mut eqs: Vec<Vector> = Vec::new();
        for a in self.q.arrows() {
            let mat = &self.maps[a.id.as_str()];
            if a.source == v {
                if let Some(uj) = self.chosen.get(&a.target) {
                    // L_a(U_j) ⊆ U_v
                    for u in uj {
                        lower.push((0..d).map(|r| dot(f, &mat[r], u)).collect());
                    }
                }
            }
            if a.target == v {
                if let Some(ui) = self.chosen.get(&a.source) {
                    // L_a(U_v) ⊆ U_i: annihilators of U_i pulled back along L_a
                    let di = self.m.dim(a.source);
                    for ann in linalg::nullspace(f, ui, di) {
                        eqs.push(
                            (0..d)
                                .map(|c| (0..di).fold(0, |s, r| f.add(&s, &f.mul(&ann[r], &mat[r][c]))))
                                .collect(),
                        );
                    }
                }
            }
        }
        let upper = if eqs.is_empty() {
            (0..d).map(|i| (0..d).map(|j| u64::from(i == j)).collect()).collect()
        } else {
            linalg::nullspace(f, &eqs, d)
        };
        (lower, upper)
    }
}

fn dot(f: &Fp, a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).fold(0, |s, (x, y)| f.add(&s, &f.mul(x, y)))
}

/// A basis of the span of `rows`.
fn reduced(f: &Fp, mut rows: Vec<Vector>) -> Vec<Vector> {
    if rows.is_empty() {
        return rows;
    }
    let piv = linalg::rref(f, &mut rows);
    rows.truncate(piv.len());
    rows
}

/// All `r`-dimensional subspaces of `F_p^t`, as reduced row echelon bases.
pub fn subspaces(f: &Fp, t: usize, r: usize) -> Vec<Vec<Vector>> {
    let mut out = Vec::new();
    if r > t {
        return out;
    }
    for pivots in combinations(t, r) {
        let free: Vec<(usize, usize)> = (0..r)
            .flat_map(|i| {
                let pv = &pivots;
                (pv[i] + 1..t).filter(move |c| !pv.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let total = f.p.pow(free.len() as u32);
        for mut n in 0..total {
            let mut m = vec![vec![0u64; t]; r];
            for (i, &c) in pivots.iter().enumerate() {
                m[i][c] = 1;
            }
            for &(i, c) in &free {
                m[i][c] = n % f.p;
                n /= f.p;
            }
            out.push(m);
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for mut rest in combinations(n, k - 1)
            .into_iter()
            .filter(|r| r.first().is_none_or(|x| *x > first))
        {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Number of `k`-dimensional subspaces of `F_p^n`.
pub fn gaussian_binomial(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let (mut num, mut den) = (1u128, 1u128);
    for i in 0..k {
        num *= u128::from(p).pow((n - i) as u32) - 1;
        den *= u128::from(p).pow((i + 1) as u32) - 1;
    }
    (num / den) as u64
}

/// Interpolates point counts by a polynomial of degree at most `bound`,
/// requiring the extra samples to agree and the coefficients to be integers.
pub fn fit_polynomial(samples: &[(u64, u64)], bound: usize) -> Result<PointCount> {
    let fail = || Error::NonPolynomialCount {
        counts: samples.to_vec(),
        degree_bound: bound,
    };
    if samples.len() < bound + 2 {
        return Err(fail());
    }
    let pts: Vec<(Rational, Rational)> = samples[..=bound]
        .iter()
        .map(|(x, y)| (rat(*x as i64), rat(*y as i64)))
        .collect();
    let coeffs = lagrange(&pts);
    let eval = |x: &Rational| coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c);
    for (x, y) in &samples[bound + 1..] {
        if eval(&rat(*x as i64)) != rat(*y as i64) {
            return Err(fail());
        }
    }
    let mut ints = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        if !c.is_integer() {
            return Err(fail());
        }
        ints.push(i64::try_from(c.to_integer()).map_err(|_| fail())?);
    }
    while ints.len() > 1 && *ints.last().unwrap() == 0 {
        ints.pop();
    }
    Ok(PointCount {
        coefficients: ints,
        samples: samples.to_vec(),
    })
}

/// Monomial coefficients of the interpolating polynomial, constant first.
fn lagrange(pts: &[(Rational, Rational)]) -> Vec<Rational> {
    let n = pts.len();
    let mut out = vec![Rational::zero(); n];
    for (i, (xi, yi)) in pts.iter().enumerate() {
        let mut basis = vec![Rational::one()];
        let mut denom = Rational::one();
        for (j, (xj, _)) in pts.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * xj;
            }
            basis = next;
            denom *= xi - xj;
        }
        let s = yi / denom;
        for (o, b) in out.iter_mut().zip(&basis) {
            *o += b * &s;
        }
    }
    out
}

/// Point-count polynomial of `Gr_e(m)`.
pub fn point_count(
    q: &IceQuiver,
    m: &QuiverRepresentation,
    e: &BTreeMap<VertexId, usize>,
    budget: u64,
) -> Result<PointCount> {
    let bound = degree_bound(m, e);
    let n = (bound + 2).max(5);
    if n > PRIMES.len() {
        return Err(Error::Validation(format!("degree bound {bound} is beyond desk scale")));
    }
    let samples = PRIMES[..n]
        .iter()
        .map(|&p| count_subrepresentations(q, m, e, p, budget).map(|c| (p, c)))
        .collect::<Result<Vec<_>>>()?;
    fit_polynomial(&samples, bound)
}

/// `χ(Gr_e(m))`, the point-count polynomial evaluated at 1.
pub fn grassmannian_euler(q: &IceQuiver, m: &QuiverRepresentation, e: &BTreeMap<VertexId, usize>) -> Result<i64> {
    point_count(q, m, e, DEFAULT_BUDGET).map(|c| c.euler())
}

/// Every dimension vector `0 ≤ e ≤ dim m`.
pub fn dimension_vectors(m: &QuiverRepresentation) -> Vec<BTreeMap<VertexId, usize>> {
    let mut out = vec![BTreeMap::new()];
    for (v, d) in &m.dims {
        out = out
            .into_iter()
            .flat_map(|e| {
                (0..=*d).map(move |x| {
                    let mut e2 = e.clone();
                    e2.insert(*v, x);
                    e2
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::tests::a3;
    use proptest::prelude::*;

    fn e_of(pairs: &[(VertexId, usize)], q: &IceQuiver) -> BTreeMap<VertexId, usize> {
        q.vertex_ids()
            .map(|v| (v, pairs.iter().find(|p| p.0 == v).map_or(0, |p| p.1)))
            .collect()
    }

    // modules over this quiver have their map going from vertex 1 to vertex 2
    fn line() -> IceQuiver {
        IceQuiver::simple("line", &[1, 2], &[], &[("a", 2, 1)]).unwrap()
    }

    fn point() -> IceQuiver {
        IceQuiver::simple("pt", &[1], &[], &[]).unwrap()
    }

    #[test]
    fn string_module_on_a_line() {
        let q = line();
        let m = QuiverRepresentation::thin(&q, &[1, 2]).unwrap();
        // U_1 ≠ 0 forces U_2 ≠ 0
        assert_eq!(grassmannian_euler(&q, &m, &e_of(&[(2, 1)], &q)).unwrap(), 1);
        assert_eq!(grassmannian_euler(&q, &m, &e_of(&[(1, 1)], &q)).unwrap(), 0);
        for p in [2, 3] {
            assert_eq!(
                count_subrepresentations(&q, &m, &e_of(&[(1, 1)], &q), p, 100).unwrap(),
                0
            );
            assert_eq!(
                count_subrepresentations(&q, &m, &e_of(&[(2, 1)], &q), p, 100).unwrap(),
                1
            );
        }
    }

    #[test]
    fn projective_line() {
        let q = point();
        let s = QuiverRepresentation::simple(&q, 1).unwrap();
        let m = s.direct_sum(&q, &s);
        let c = point_count(&q, &m, &e_of(&[(1, 1)], &q), DEFAULT_BUDGET).unwrap();
        assert_eq!(c.coefficients, vec![1, 1]);
        assert_eq!(c.euler(), 2);
    }

    #[test]
    fn extremes_are_points() {
        let (q, _) = a3();
        let m = QuiverRepresentation::projective(&q, 2).unwrap();
        let zero = e_of(&[], &q);
        assert_eq!(grassmannian_euler(&q, &m, &zero).unwrap(), 1);
        assert_eq!(grassmannian_euler(&q, &m, &m.dims).unwrap(), 1);
    }

    #[test]
    fn fit_rejects_inconsistent_counts() {
        let r = fit_polynomial(&[(2, 1), (3, 1), (5, 2), (7, 1), (11, 1)], 0);
        assert!(matches!(r, Err(Error::NonPolynomialCount { degree_bound: 0, .. })));
        let r = fit_polynomial(&[(2, 1), (3, 2), (5, 3), (7, 4), (11, 5)], 3);
        assert!(matches!(r, Err(Error::NonPolynomialCount { .. })));
    }

    #[test]
    fn budget_is_enforced() {
        let q = line();
        let s = QuiverRepresentation::thin(&q, &[1, 2]).unwrap();
        let m = s.direct_sum(&q, &s).direct_sum(&q, &s);
        let e = e_of(&[(1, 1), (2, 1)], &q);
        assert_eq!(count_subrepresentations(&q, &m, &e, 7, 3), Err(Error::Budget(3)));
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(2, 1, 3), 4);
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(subspaces(&Fp::new(2), 4, 2).len(), 35);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        // the full lattice of subrepresentations, summed over e, by brute force
        #[test]
        fn per_e_counts_sum_to_all_subreps(x in -2i64..=2, y in -2i64..=2, z in -2i64..=2, w in -2i64..=2) {
            let q = line();
            let mut dims = BTreeMap::new();
            dims.insert(1, 2);
            dims.insert(2, 2);
            // L_a: L_1 → L_2
            let mut maps = BTreeMap::new();
            maps.insert("a".to_string(), vec![vec![x, y], vec![z, w]]);
            let m = QuiverRepresentation::new(&q, dims, maps).unwrap();
            let f = Fp::new(3);
            let mut all = 0u64;
            for r1 in 0..=2 {
                for r2 in 0..=2 {
                    for u1 in subspaces(&f, 2, r1) {
                        for u2 in subspaces(&f, 2, r2) {
                            let ok = u1.iter().all(|u| {
                                let img: Vec<u64> = (0..2).map(|r| dot(&f, &[f.from_i64(m.maps["a"][r][0]), f.from_i64(m.maps["a"][r][1])], u)).collect();
                                let mut t = u2.clone();
                                t.push(img);
                                linalg::rank(&f, &t) == r2
                            });
                            all += u64::from(ok);
                        }
                    }
                }
            }
            let per_e: u64 = dimension_vectors(&m)
                .iter()
                .map(|e| count_subrepresentations(&q, &m, e, 3, DEFAULT_BUDGET).unwrap())
                .sum();
            prop_assert_eq!(per_e, all);
        }
    }
}
