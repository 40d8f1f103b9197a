//! Laurent polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::quiver::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPolynomial {
    vars: Vec<String>,
    terms: BTreeMap<Vec<i64>, Rational>,
}

impl LaurentPolynomial {
    pub fn zero(vars: &[String]) -> Self {
        LaurentPolynomial {
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[String], c: Rational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn one(vars: &[String]) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn monomial(vars: &[String], exps: Vec<i64>, c: Rational) -> Self {
        assert_eq!(exps.len(), vars.len());
        let mut p = Self::zero(vars);
        p.add_term(exps, c);
        p
    }

    /// The variable at position `k`.
    pub fn var(vars: &[String], k: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[k] = 1;
        Self::monomial(vars, e, Rational::one())
    }

    pub fn named(vars: &[String], name: &str) -> Option<Self> {
        vars.iter().position(|v| v == name).map(|k| Self::var(vars, k))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[i64]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, exps: Vec<i64>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exps).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "Laurent polynomials over different variables");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.vars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            for (f, d) in &other.terms {
                let g = e.iter().zip(f).map(|(x, y)| x + y).collect();
                out.add_term(g, c * d);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(&self.vars), |acc, _| acc.mul(self))
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_exponents(&self) -> Vec<i64> {
        let mut m = vec![i64::MAX; self.vars.len()];
        for e in self.terms.keys() {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        m.iter().map(|x| if *x == i64::MAX { 0 } else { *x }).collect()
    }

    fn shift(&self, by: &[i64]) -> Self {
        LaurentPolynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(by).map(|(x, y)| x + y).collect(), c.clone()))
                .collect(),
        }
    }

    fn leading(&self) -> Option<(&Vec<i64>, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / other`; fails with `NonExactDivision` when the
    /// quotient is not a Laurent polynomial.
    pub fn divide_exact(&self, other: &Self) -> Result<Self> {
        self.check_vars(other);
        if other.is_zero() {
            return Err(Error::NonExactDivision);
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        // strip monomial contents, then divide polynomials (lex order)
        let sn = self.min_exponents();
        let sd = other.min_exponents();
        let neg = |v: &[i64]| v.iter().map(|x| -x).collect::<Vec<_>>();
        let n = self.shift(&neg(&sn));
        let d = other.shift(&neg(&sd));
        let (de, dc) = d.leading().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut r = n;
        let mut q = Self::zero(&self.vars);
        while let Some((re, rc)) = r.leading().map(|(e, c)| (e.clone(), c.clone())) {
            let qe: Vec<i64> = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            if qe.iter().any(|x| *x < 0) {
                return Err(Error::NonExactDivision);
            }
            let t = Self::monomial(&self.vars, qe, rc / &dc);
            r = r.sub(&t.mul(&d));
            q = q.add(&t);
        }
        let shift: Vec<i64> = sn.iter().zip(&sd).map(|(a, b)| a - b).collect();
        Ok(q.shift(&shift))
    }

    /// Renames variables: position `k` of `self` goes to position `map[k]` of `vars`.
    pub fn substitute(&self, vars: &[String], map: &[usize]) -> Self {
        let mut out = Self::zero(vars);
        for (e, c) in &self.terms {
            let mut f = vec![0; vars.len()];
            for (k, x) in e.iter().enumerate() {
                f[map[k]] += x;
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// True when no variable in `vars` appears with a negative exponent.
    pub fn is_polynomial_in(&self, names: &[String]) -> bool {
        let idx: Vec<usize> = names
            .iter()
            .filter_map(|n| self.vars.iter().position(|v| v == n))
            .collect();
        self.terms.keys().all(|e| idx.iter().all(|&k| e[k] >= 0))
    }

    /// Canonical text: terms by descending exponent vector, e.g. `x1^-1*x2 + 2*x3`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(x, _)| **x != 0)
                .map(|(x, v)| if *x == 1 { v.clone() } else { format!("{v}^{x}") })
                .collect();
            let mag = c.abs();
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => format_rational(&mag),
                (false, true) => mono.join("*"),
                (false, false) => format!("{}*{}", format_rational(&mag), mono.join("*")),
            };
            match (n, c.is_negative()) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}
