//! Exact arithmetic in `Q(ζ_m)` on the power basis modulo the cyclotomic
//! polynomial `Φ_m`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::linalg::{self, Field, Q};
use crate::quiver::{format_rational, rat, Rational};

/// Element of `Q(ζ_m)`: coefficients of `1, ζ, …, ζ^{φ(m)-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cyc(pub Vec<Rational>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    m: usize,
    /// Monic `Φ_m`, low degree first.
    modulus: Vec<Rational>,
}

fn poly_trim(p: &mut Vec<Rational>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Quotient and remainder by a monic divisor.
fn poly_divmod(a: &[Rational], d: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dd = d.len() - 1;
    if r.len() <= dd {
        return (vec![Rational::zero()], r);
    }
    let mut q = vec![Rational::zero(); r.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, di) in d.iter().enumerate() {
            r[k + i] -= &c * di;
        }
        q[k] = c;
    }
    r.truncate(dd.max(1));
    poly_trim(&mut r);
    (q, r)
}

/// `Φ_m` as a monic rational polynomial, low degree first.
pub fn cyclotomic_polynomial(m: usize) -> Vec<Rational> {
    assert!(m >= 1);
    let mut num = vec![Rational::zero(); m + 1];
    num[0] = rat(-1);
    num[m] = rat(1);
    let mut den = vec![rat(1)];
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        den = poly_mul(&den, &cyclotomic_polynomial(d));
    }
    let (q, r) = poly_divmod(&num, &den);
    debug_assert!(r.iter().all(|c| c.is_zero()));
    q
}

impl Cyclotomic {
    pub fn new(m: usize) -> Self {
        Cyclotomic {
            m: m.max(1),
            modulus: cyclotomic_polynomial(m.max(1)),
        }
    }

    pub fn order(&self) -> usize {
        self.m
    }

    /// `φ(m)`, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&self, p: Vec<Rational>) -> Cyc {
        let (_, mut r) = poly_divmod(&p, &self.modulus);
        r.resize(self.degree(), Rational::zero());
        Cyc(r)
    }

    pub fn from_rational(&self, r: Rational) -> Cyc {
        let mut v = vec![Rational::zero(); self.degree()];
        v[0] = r;
        Cyc(v)
    }

    pub fn from_int(&self, n: i64) -> Cyc {
        self.from_rational(rat(n))
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(&self, k: i64) -> Cyc {
        let e = k.rem_euclid(self.m as i64) as usize;
        let mut p = vec![Rational::zero(); e + 1];
        p[e] = Rational::one();
        self.reduce(p)
    }

    pub fn to_rational(&self, x: &Cyc) -> Option<Rational> {
        x.0[1..].iter().all(|c| c.is_zero()).then(|| x.0[0].clone())
    }

    /// Complex conjugate (`ζ ↦ ζ^{-1}`).
    pub fn conj(&self, x: &Cyc) -> Cyc {
        let mut acc = self.zero();
        for (k, c) in x.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = self.scale(&self.zeta_pow(-(k as i64)), c);
            acc = self.add(&acc, &term);
        }
        acc
    }

    pub fn scale(&self, x: &Cyc, c: &Rational) -> Cyc {
        Cyc(x.0.iter().map(|v| v * c).collect())
    }

    pub fn format(&self, x: &Cyc) -> String {
        if let Some(r) = self.to_rational(x) {
            return format_rational(&r);
        }
        let mut out = String::new();
        for (k, c) in x.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => format!("z{}", self.m),
                _ => format!("z{}^{k}", self.m),
            };
            let mag = c.abs();
            let body = match (k, mag.is_one()) {
                (0, _) => format_rational(&mag),
                (_, true) => mono,
                (_, false) => format!("{}*{mono}", format_rational(&mag)),
            };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        format!("({out})")
    }
}

impl Field for Cyclotomic {
    type E = Cyc;

    fn zero(&self) -> Cyc {
        Cyc(vec![Rational::zero(); self.degree()])
    }
    fn one(&self) -> Cyc {
        self.from_int(1)
    }
    fn add(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }
    fn mul(&self, a: &Cyc, b: &Cyc) -> Cyc {
        self.reduce(poly_mul(&a.0, &b.0))
    }
    fn neg(&self, a: &Cyc) -> Cyc {
        Cyc(a.0.iter().map(|x| -x).collect())
    }
    fn inv(&self, a: &Cyc) -> Option<Cyc> {
        if self.is_zero(a) {
            return None;
        }
        let n = self.degree();
        // columns: a·ζ^k in the power basis
        let cols: Vec<Cyc> = (0..n).map(|k| self.mul(a, &self.zeta_pow(k as i64))).collect();
        let m: Vec<Vec<Rational>> = (0..n).map(|r| cols.iter().map(|c| c.0[r].clone()).collect()).collect();
        let mut e0 = vec![Rational::zero(); n];
        e0[0] = Rational::one();
        linalg::solve(&Q, &m, &e0).map(Cyc)
    }
    fn is_zero(&self, a: &Cyc) -> bool {
        a.0.iter().all(|x| x.is_zero())
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        let ints = |p: Vec<Rational>| {
            p.into_iter()
                .map(|c| c.to_integer().to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        assert_eq!(ints(cyclotomic_polynomial(1)), "-1,1");
        assert_eq!(ints(cyclotomic_polynomial(2)), "1,1");
        assert_eq!(ints(cyclotomic_polynomial(4)), "1,0,1");
        assert_eq!(ints(cyclotomic_polynomial(6)), "1,-1,1");
        assert_eq!(ints(cyclotomic_polynomial(12)), "1,0,-1,0,1");
    }

    #[test]
    fn roots_of_unity() {
        for m in [1usize, 2, 3, 4, 5, 6, 8, 12] {
            let k = Cyclotomic::new(m);
            assert_eq!(k.zeta_pow(m as i64), k.one());
            let sum = (0..m as i64).fold(k.zero(), |acc, e| k.add(&acc, &k.zeta_pow(e)));
            if m > 1 {
                assert!(k.is_zero(&sum), "m = {m}");
            }
            let z = k.zeta_pow(1);
            assert_eq!(k.mul(&z, &k.conj(&z)), k.one());
        }
    }

    proptest! {
        #[test]
        fn inverses_are_exact(m in 1usize..=12, coeffs in prop::collection::vec(-5i64..=5, 12)) {
            let k = Cyclotomic::new(m);
            let x = Cyc(coeffs[..k.degree()].iter().map(|c| rat(*c)).collect());
            prop_assume!(!k.is_zero(&x));
            let inv = k.inv(&x).unwrap();
            prop_assert_eq!(k.mul(&x, &inv), k.one());
        }
    }
}
