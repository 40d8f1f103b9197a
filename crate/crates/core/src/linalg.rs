//! Exact Gaussian elimination over pluggable fields.

use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::quiver::Rational;

pub trait Field {
    type E: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Option<Self::E>;
    fn is_zero(&self, a: &Self::E) -> bool;

    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.add(a, &self.neg(b))
    }
}

/// The rationals.
#[derive(Clone, Copy, Debug, Default)]
pub struct Q;

impl Field for Q {
    type E = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn inv(&self, a: &Rational) -> Option<Rational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
}

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        Fp { p }
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }
}

impl Field for Fp {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            return None;
        }
        // Fermat
        let mut base = *a % self.p;
        let mut e = self.p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Some(acc)
    }
    fn is_zero(&self, a: &u64) -> bool {
        a.is_multiple_of(self.p)
    }
}

/// Reduces `m` in place to reduced row echelon form; returns pivot columns.
pub fn rref<F: Field>(f: &F, m: &mut [Vec<F::E>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&k| !f.is_zero(&m[k][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = f.inv(&m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for k in 0..rows {
            if k != r && !f.is_zero(&m[k][c]) {
                let factor = m[k][c].clone();
                let pivot = m[r].clone();
                for (x, p) in m[k][c..cols].iter_mut().zip(&pivot[c..cols]) {
                    let t = f.mul(&factor, p);
                    *x = f.sub(x, &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(f: &F, m: &[Vec<F::E>]) -> usize {
    let mut work = m.to_vec();
    rref(f, &mut work).len()
}

/// Some `x` with `a · x = b`, or `None` when inconsistent.
pub fn solve<F: Field>(f: &F, a: &[Vec<F::E>], b: &[F::E]) -> Option<Vec<F::E>> {
    let n = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<F::E>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![f.zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][n].clone();
    }
    Some(x)
}

/// Basis of `{x : a · x = 0}`.
pub fn nullspace<F: Field>(f: &F, a: &[Vec<F::E>], ncols: usize) -> Vec<Vec<F::E>> {
    let mut work = a.to_vec();
    let pivots = rref(f, &mut work);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); ncols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&work[r][fc]);
            }
            v
        })
        .collect()
}

/// Transpose of a rectangular matrix.
pub fn transpose<T: Clone>(m: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    (0..ncols).map(|c| m.iter().map(|r| r[c].clone()).collect()).collect()
}
