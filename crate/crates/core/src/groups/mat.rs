//! `n × n` matrices (`n ≤ 3`) over a chain ring.

use core::fmt;

use crate::chainring::{ChainRing, RingElem};
use crate::{Error, Result};

pub const MAX_N: usize = 3;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    n: u8,
    e: [RingElem; MAX_N * MAX_N],
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n();
        f.write_str("[")?;
        for i in 0..n {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..n {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{:?}", self.get(i, j))?;
            }
        }
        f.write_str("]")
    }
}

impl Mat {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_N, "matrix size {n} unsupported");
        Mat { n: n as u8, e: [RingElem::default(); MAX_N * MAX_N] }
    }

    pub fn identity(ring: &ChainRing, n: usize) -> Self {
        Self::scalar(ring, n, ring.one())
    }

    pub fn scalar(_ring: &ChainRing, n: usize, c: RingElem) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    /// Matrix unit `E_ij` scaled by `c`.
    pub fn unit(n: usize, i: usize, j: usize, c: RingElem) -> Self {
        let mut m = Self::zero(n);
        m.set(i, j, c);
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> RingElem) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> RingElem {
        self.e[i * MAX_N + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: RingElem) {
        self.e[i * MAX_N + j] = v;
    }

    pub fn map(&self, f: impl Fn(RingElem) -> RingElem) -> Self {
        Self::from_fn(self.n(), |i, j| f(self.get(i, j)))
    }

    pub fn add(&self, ring: &ChainRing, o: &Mat) -> Mat {
        Self::from_fn(self.n(), |i, j| ring.add(self.get(i, j), o.get(i, j)))
    }

    pub fn sub(&self, ring: &ChainRing, o: &Mat) -> Mat {
        Self::from_fn(self.n(), |i, j| ring.sub(self.get(i, j), o.get(i, j)))
    }

    pub fn scale(&self, ring: &ChainRing, c: RingElem) -> Mat {
        self.map(|x| ring.mul(c, x))
    }

    pub fn mul(&self, ring: &ChainRing, o: &Mat) -> Mat {
        let n = self.n();
        let mut m = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ring.zero();
                for k in 0..n {
                    acc = ring.add(acc, ring.mul(self.get(i, k), o.get(k, j)));
                }
                m.set(i, j, acc);
            }
        }
        m
    }

    pub fn pow(&self, ring: &ChainRing, mut e: u64) -> Mat {
        let mut acc = Self::identity(ring, self.n());
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ring, &b);
            }
            b = b.mul(ring, &b);
            e >>= 1;
        }
        acc
    }

    pub fn trace(&self, ring: &ChainRing) -> RingElem {
        (0..self.n()).fold(ring.zero(), |acc, i| ring.add(acc, self.get(i, i)))
    }

    pub fn det(&self, ring: &ChainRing) -> RingElem {
        let m = |i, j| self.get(i, j);
        match self.n() {
            1 => m(0, 0),
            2 => ring.sub(ring.mul(m(0, 0), m(1, 1)), ring.mul(m(0, 1), m(1, 0))),
            _ => {
                let minor = |a: usize, b: usize, c: usize, d: usize| ring.sub(ring.mul(m(1, a), m(2, b)), ring.mul(m(1, c), m(2, d)));
                let t0 = ring.mul(m(0, 0), minor(1, 2, 2, 1));
                let t1 = ring.mul(m(0, 1), minor(0, 2, 2, 0));
                let t2 = ring.mul(m(0, 2), minor(0, 1, 1, 0));
                ring.add(ring.sub(t0, t1), t2)
            }
        }
    }

    pub fn is_invertible(&self, ring: &ChainRing) -> bool {
        ring.is_unit(self.det(ring))
    }

    pub fn inv(&self, ring: &ChainRing) -> Result<Mat> {
        let d = ring.inv(self.det(ring)).map_err(|_| Error::NotInvertible)?;
        let n = self.n();
        let m = |i: usize, j: usize| self.get(i, j);
        let adj = match n {
            1 => Self::scalar(ring, 1, ring.one()),
            2 => Self::from_fn(2, |i, j| match (i, j) {
                (0, 0) => m(1, 1),
                (1, 1) => m(0, 0),
                (0, 1) => ring.neg(m(0, 1)),
                _ => ring.neg(m(1, 0)),
            }),
            _ => Self::from_fn(3, |i, j| {
                // adj[i][j] = (-1)^{i+j} · minor(j, i)
                let rows: [usize; 2] = match j {
                    0 => [1, 2],
                    1 => [0, 2],
                    _ => [0, 1],
                };
                let cols: [usize; 2] = match i {
                    0 => [1, 2],
                    1 => [0, 2],
                    _ => [0, 1],
                };
                let minor = ring.sub(
                    ring.mul(m(rows[0], cols[0]), m(rows[1], cols[1])),
                    ring.mul(m(rows[0], cols[1]), m(rows[1], cols[0])),
                );
                if (i + j) % 2 == 0 {
                    minor
                } else {
                    ring.neg(minor)
                }
            }),
        };
        Ok(adj.scale(ring, d))
    }

    /// `g x g^{-1}` given `g^{-1}`.
    pub fn conj_by(&self, ring: &ChainRing, g: &Mat, g_inv: &Mat) -> Mat {
        g.mul(ring, self).mul(ring, g_inv)
    }

    pub fn is_identity(&self, ring: &ChainRing) -> bool {
        *self == Self::identity(ring, self.n())
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::zero(self.n())
    }

    pub fn is_diagonal(&self, ring: &ChainRing) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| i == j || ring.is_zero(self.get(i, j))))
    }

    pub fn diagonal_part(&self) -> Mat {
        let mut m = Self::zero(self.n());
        for i in 0..self.n() {
            m.set(i, i, self.get(i, i));
        }
        m
    }

    pub fn reduce_level(&self, ring: &ChainRing, i: u32) -> Mat {
        self.map(|x| ring.reduce_level(x, i))
    }

    /// Minimal `π`-adic valuation of the entries.
    pub fn valuation(&self, ring: &ChainRing) -> u32 {
        let n = self.n();
        (0..n * n).map(|k| ring.valuation(self.get(k / n, k % n))).min().unwrap_or(ring.level())
    }

    pub fn mul_pi_pow(&self, ring: &ChainRing, k: u32) -> Mat {
        self.map(|x| ring.mul_pi_pow(x, k))
    }

    pub fn div_pi_pow(&self, ring: &ChainRing, k: u32) -> Mat {
        self.map(|x| ring.div_pi_pow(x, k))
    }

    pub fn frobenius_q(&self, ring: &ChainRing) -> Mat {
        self.map(|x| ring.frobenius_q(x))
    }

    pub fn is_rational(&self, ring: &ChainRing) -> bool {
        let n = self.n();
        (0..n * n).all(|k| ring.is_rational(self.get(k / n, k % n)))
    }

    /// Index among all matrices over `ring` (entries in row-major order, first least significant).
    pub fn index(&self, ring: &ChainRing) -> u64 {
        let n = self.n();
        let s = ring.size();
        (0..n * n).rev().fold(0u64, |acc, k| acc * s + ring.index(self.get(k / n, k % n)))
    }

    pub fn from_index(ring: &ChainRing, n: usize, mut idx: u64) -> Mat {
        let s = ring.size();
        let mut m = Self::zero(n);
        for k in 0..n * n {
            m.set(k / n, k % n, ring.from_index(idx % s));
            idx /= s;
        }
        m
    }
}
