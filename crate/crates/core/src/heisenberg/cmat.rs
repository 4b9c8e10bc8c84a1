//! Small dense matrices over cyclotomic numbers, and monomial matrices.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::cyclo::{CycloNum, Phase, RootSum};
use crate::{Error, Result};

/// `x^{-1}`, through `x̄/|x|²` when `|x|²` is rational.
pub fn inverse(x: &CycloNum) -> Result<CycloNum> {
    let n2 = x.abs2();
    match n2.as_rational() {
        Some(r) if !r.is_zero() => Ok(x.conj().scale(r.recip())),
        Some(_) => Err(Error::NotInvertible),
        None => x.inverse(),
    }
}

/// Monomial matrix: `e_j ↦ phase[j]·e_{perm[j]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub perm: Vec<usize>,
    pub phase: Vec<Phase>,
}

impl Monomial {
    pub fn identity(d: usize) -> Self {
        Monomial { perm: (0..d).collect(), phase: vec![Phase::ONE; d] }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// `self · other`.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let d = self.dim();
        let mut perm = vec![0; d];
        let mut phase = vec![Phase::ONE; d];
        for j in 0..d {
            let k = other.perm[j];
            perm[j] = self.perm[k];
            phase[j] = other.phase[j].mul(self.phase[k]);
        }
        Monomial { perm, phase }
    }

    pub fn inv(&self) -> Monomial {
        let d = self.dim();
        let mut perm = vec![0; d];
        let mut phase = vec![Phase::ONE; d];
        for j in 0..d {
            perm[self.perm[j]] = j;
            phase[self.perm[j]] = self.phase[j].inv();
        }
        Monomial { perm, phase }
    }

    /// Entry `(i, j)`, if nonzero.
    pub fn entry(&self, i: usize, j: usize) -> Option<Phase> {
        (self.perm[j] == i).then_some(self.phase[j])
    }

    pub fn trace(&self) -> CycloNum {
        let mut acc = RootSum::new();
        for j in 0..self.dim() {
            if self.perm[j] == j {
                acc.add(self.phase[j], 1);
            }
        }
        acc.to_cyclo()
    }

    pub fn is_scalar(&self, c: Phase) -> bool {
        self.perm.iter().enumerate().all(|(j, &k)| j == k) && self.phase.iter().all(|&x| x == c)
    }

    pub fn to_dense(&self) -> CMat {
        let d = self.dim();
        let mut m = CMat::zero(d);
        for j in 0..d {
            m.set(self.perm[j], j, self.phase[j].to_cyclo());
        }
        m
    }
}

/// Dense square matrix over cyclotomic numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMat {
    d: usize,
    e: Vec<CycloNum>,
}

impl CMat {
    pub fn zero(d: usize) -> Self {
        CMat { d, e: vec![CycloNum::zero(); d * d] }
    }

    pub fn identity(d: usize) -> Self {
        Self::scalar(d, CycloNum::one())
    }

    pub fn scalar(d: usize, c: CycloNum) -> Self {
        let mut m = Self::zero(d);
        for i in 0..d {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloNum {
        &self.e[i * self.d + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycloNum) {
        self.e[i * self.d + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(CycloNum::is_zero)
    }

    pub fn scale(&self, c: &CycloNum) -> CMat {
        CMat { d: self.d, e: self.e.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, o: &CMat) -> CMat {
        let d = self.d;
        let mut out = CMat::zero(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.e[i * d + j] = &out.e[i * d + j] + &(a * b);
                    }
                }
            }
        }
        out
    }

    /// `self · m` for a monomial `m`.
    pub fn mul_monomial(&self, m: &Monomial) -> CMat {
        let d = self.d;
        let mut out = CMat::zero(d);
        for j in 0..d {
            let k = m.perm[j];
            let c = m.phase[j].to_cyclo();
            for i in 0..d {
                out.set(i, j, self.get(i, k) * &c);
            }
        }
        out
    }

    /// `m · self` for a monomial `m`.
    pub fn monomial_mul(m: &Monomial, x: &CMat) -> CMat {
        let d = x.d;
        let mut out = CMat::zero(d);
        for k in 0..d {
            let i = m.perm[k];
            let c = m.phase[k].to_cyclo();
            for j in 0..d {
                out.set(i, j, &c * x.get(k, j));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> CMat {
        let mut acc = CMat::identity(self.d);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    pub fn trace(&self) -> CycloNum {
        (0..self.d).map(|i| self.get(i, i).clone()).sum()
    }

    /// `tr(self · m)` for a monomial `m`.
    pub fn trace_with(&self, m: &Monomial) -> CycloNum {
        let mut acc = CycloNum::zero();
        for j in 0..self.d {
            let x = self.get(j, m.perm[j]);
            if !x.is_zero() {
                acc = &acc + &(x * &m.phase[j].to_cyclo());
            }
        }
        acc
    }

    /// The scalar `c` if `self = c·I`.
    pub fn as_scalar(&self) -> Option<CycloNum> {
        let c = self.get(0, 0).clone();
        for i in 0..self.d {
            for j in 0..self.d {
                let x = self.get(i, j);
                if (i == j && *x != c) || (i != j && !x.is_zero()) {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Determinant by Laplace expansion over column subsets; no division.
    pub fn det(&self) -> CycloNum {
        let d = self.d;
        assert!(d <= 16, "determinant of size {d}");
        // minors[mask] = det of rows 0..popcount(mask) with columns in mask
        let mut minors: Vec<Option<CycloNum>> = vec![None; 1 << d];
        minors[0] = Some(CycloNum::one());
        for mask in 1usize..(1 << d) {
            let row = mask.count_ones() as usize - 1;
            let mut acc = CycloNum::zero();
            for col in 0..d {
                if mask & (1 << col) == 0 {
                    continue;
                }
                let x = self.get(row, col);
                let rest = mask & !(1 << col);
                // sign from the number of chosen columns to the right of col
                let right = (mask >> (col + 1)).count_ones();
                if !x.is_zero() {
                    let m = minors[rest].as_ref().expect("filled");
                    if !m.is_zero() {
                        let term = x * m;
                        acc = if right % 2 == 0 { &acc + &term } else { &acc - &term };
                    }
                }
            }
            minors[mask] = Some(acc);
        }
        minors[(1 << d) - 1].take().expect("filled")
    }
}
