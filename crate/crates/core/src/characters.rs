//! Character tables with values in `Q(ζ_m)`.

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};

use crate::cyclotomic::{Cyc, Cyclotomic};
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::linalg::Field;
use crate::quiver::{rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    group: FiniteGroup,
    field: Cyclotomic,
    names: Vec<String>,
    /// `values[ρ][g]`.
    values: Vec<Vec<Cyc>>,
}

fn default_names(n: usize) -> Vec<String> {
    match n {
        1 => vec!["k".into()],
        2 => vec!["+".into(), "-".into()],
        _ => (0..n).map(|k| format!("chi{k}")).collect(),
    }
}

impl CharacterTable {
    /// All linear characters of an abelian group, trivial first, with values in
    /// `Q(ζ_m)`; `m` must be a multiple of the exponent.
    pub fn abelian(group: &FiniteGroup, m: usize) -> Result<Self> {
        if !group.is_abelian() {
            return Err(Error::InvalidCharacterTable("group is not abelian".into()));
        }
        if !m.is_multiple_of(group.exponent()) {
            return Err(Error::InvalidCharacterTable(format!(
                "field Q(z{m}) does not contain the values (exponent {})",
                group.exponent()
            )));
        }
        let field = Cyclotomic::new(m);
        // greedy generating set
        let mut gens: Vec<Elem> = Vec::new();
        let mut span = vec![group.identity()];
        for g in group.elements() {
            if span.contains(&g) {
                continue;
            }
            gens.push(g);
            let mut frontier = span.clone();
            while let Some(x) = frontier.pop() {
                for &s in &gens {
                    let y = group.mul(s, x);
                    if !span.contains(&y) {
                        span.push(y);
                        frontier.push(y);
                    }
                }
            }
        }
        let choices: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| {
                let step = m / group.element_order(g);
                (0..m).step_by(step).collect()
            })
            .collect();
        let mut exps: Vec<Vec<usize>> = Vec::new();
        let mut idx = vec![0usize; gens.len()];
        loop {
            let assign: Vec<usize> = idx.iter().zip(&choices).map(|(i, c)| c[*i]).collect();
            if let Some(e) = extend_exponents(group, &gens, &assign, m) {
                if !exps.contains(&e) {
                    exps.push(e);
                }
            }
            // odometer
            let mut k = 0;
            loop {
                if k == idx.len() {
                    break;
                }
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
        exps.sort();
        if exps.len() != group.order() {
            return Err(Error::InvalidCharacterTable(format!(
                "found {} linear characters for a group of order {}",
                exps.len(),
                group.order()
            )));
        }
        let values = exps
            .iter()
            .map(|e| e.iter().map(|k| field.zeta_pow(*k as i64)).collect())
            .collect();
        Ok(CharacterTable {
            group: group.clone(),
            field,
            names: default_names(group.order()),
            values,
        })
    }

    /// A user-supplied table, checked against the orthogonality relations.
    pub fn from_values(group: &FiniteGroup, m: usize, names: Vec<String>, values: Vec<Vec<Cyc>>) -> Result<Self> {
        let field = Cyclotomic::new(m);
        let n = group.order();
        let classes = group.conjugacy_classes();
        if values.len() != classes.len() || names.len() != values.len() {
            return Err(Error::InvalidCharacterTable(format!(
                "{} characters for {} conjugacy classes",
                values.len(),
                classes.len()
            )));
        }
        if values.iter().flatten().any(|v| v.0.len() != field.degree()) || values.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidCharacterTable("value shape mismatch".into()));
        }
        for class in &classes {
            for row in &values {
                if class.iter().any(|g| row[*g] != row[class[0]]) {
                    return Err(Error::InvalidCharacterTable("not a class function".into()));
                }
            }
        }
        let table = CharacterTable {
            group: group.clone(),
            field,
            names,
            values,
        };
        for a in 0..table.len() {
            for b in 0..table.len() {
                let ip = table.inner(&table.values[a], &table.values[b]);
                let expected = if a == b { Rational::one() } else { Rational::zero() };
                if ip != Some(expected) {
                    return Err(Error::InvalidCharacterTable(format!(
                        "orthogonality fails for ({}, {})",
                        table.names[a], table.names[b]
                    )));
                }
            }
        }
        Ok(table)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn field(&self) -> &Cyclotomic {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn value(&self, rho: usize, g: Elem) -> &Cyc {
        &self.values[rho][g]
    }

    pub fn dim(&self, rho: usize) -> usize {
        self.field
            .to_rational(&self.values[rho][self.group.identity()])
            .and_then(|r| r.to_integer().to_usize())
            .unwrap_or(0)
    }

    pub fn is_linear(&self) -> bool {
        (0..self.len()).all(|r| self.dim(r) == 1)
    }

    /// `(1/|G|) Σ_g χ(g) ψ(g^{-1})`, when rational.
    pub fn inner(&self, chi: &[Cyc], psi: &[Cyc]) -> Option<Rational> {
        let k = &self.field;
        let mut acc = k.zero();
        for g in self.group.elements() {
            acc = k.add(&acc, &k.mul(&chi[g], &psi[self.group.inv(g)]));
        }
        k.to_rational(&acc).map(|r| r / rat(self.group.order() as i64))
    }

    /// Multiplicity of each irreducible in a character.
    pub fn decompose(&self, chi: &[Cyc]) -> Result<Vec<Rational>> {
        (0..self.len())
            .map(|r| {
                self.inner(chi, &self.values[r])
                    .ok_or_else(|| Error::InvalidCharacterTable("irrational multiplicity".into()))
            })
            .collect()
    }

    /// Central idempotent `(dim ρ / |G|) Σ_g χ_ρ(g^{-1}) g`, as coefficients per element.
    pub fn idempotent(&self, rho: usize) -> Vec<Cyc> {
        let k = &self.field;
        let c = rat(self.dim(rho) as i64) / rat(self.group.order() as i64);
        self.group
            .elements()
            .map(|g| k.scale(&self.values[rho][self.group.inv(g)], &c))
            .collect()
    }
}

fn extend_exponents(group: &FiniteGroup, gens: &[Elem], assign: &[usize], m: usize) -> Option<Vec<usize>> {
    let mut e: BTreeMap<Elem, usize> = BTreeMap::new();
    e.insert(group.identity(), 0);
    let mut frontier = vec![group.identity()];
    while let Some(x) = frontier.pop() {
        for (s, k) in gens.iter().zip(assign) {
            let y = group.mul(*s, x);
            let v = (e[&x] + k) % m;
            match e.get(&y) {
                None => {
                    e.insert(y, v);
                    frontier.push(y);
                }
                Some(&w) if w != v => return None,
                _ => {}
            }
        }
    }
    (e.len() == group.order()).then(|| e.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
        let (na, nb) = (a.order(), b.order());
        let names = (0..na * nb)
            .map(|k| format!("({},{})", a.name(k / nb), b.name(k % nb)))
            .collect();
        let mul = (0..na * nb)
            .map(|x| {
                (0..na * nb)
                    .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(names, mul).unwrap()
    }

    #[test]
    fn z2_table() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let t = CharacterTable::abelian(&g, 2).unwrap();
        assert_eq!(t.names(), &["+", "-"]);
        let k = t.field();
        assert_eq!(t.value(1, 1), &k.from_int(-1));
        assert_eq!(t.idempotent(0), vec![k.from_rational(rat(1) / rat(2)); 2]);
    }

    #[test]
    fn abelian_tables_are_orthonormal() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let groups = [
            FiniteGroup::cyclic(3).unwrap(),
            FiniteGroup::cyclic(4).unwrap(),
            FiniteGroup::cyclic(6).unwrap(),
            direct_product(&z2, &z2),
            direct_product(&z2, &FiniteGroup::cyclic(4).unwrap()),
        ];
        for g in groups {
            let t = CharacterTable::abelian(&g, g.exponent()).unwrap();
            assert_eq!(t.len(), g.order());
            let names = t.names().to_vec();
            let values: Vec<Vec<Cyc>> = (0..t.len())
                .map(|r| g.elements().map(|x| t.value(r, x).clone()).collect())
                .collect();
            CharacterTable::from_values(&g, g.exponent(), names, values).unwrap();
            // regular representation
            let k = t.field();
            let reg: Vec<Cyc> = g
                .elements()
                .map(|x| {
                    if x == g.identity() {
                        k.from_int(g.order() as i64)
                    } else {
                        k.zero()
                    }
                })
                .collect();
            assert!(t.decompose(&reg).unwrap().iter().all(|m| *m == rat(1)));
        }
    }

    #[test]
    fn bad_user_table_is_rejected() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let k = Cyclotomic::new(2);
        let bad = vec![vec![k.from_int(1), k.from_int(1)], vec![k.from_int(1), k.from_int(1)]];
        assert!(CharacterTable::from_values(&g, 2, vec!["a".into(), "b".into()], bad).is_err());
    }
}
