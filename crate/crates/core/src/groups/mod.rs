//! `GL_n(O_r)`, its congruence filtration, maximal tori and Weyl groups.
//!
//! Rational elements are [`Mat`]s over `O_r`; elements over the splitting
//! ring `O_r^{(a)}` use the same type with the larger ring handle, and
//! an `O_r`-matrix is bitwise the same matrix over any extension.

mod mat;
mod torus;

pub use mat::{Mat, MAX_N};
pub use torus::{Torus, TorusPoint, WeylElement};

use alloc::format;
use alloc::vec::Vec;

use crate::chainring::{ChainRing, RingSpec};
use crate::{Error, Guard, Result};

/// `|GL_n(F_q)|`.
pub fn gl_order_fq(n: u32, q: u64) -> u128 {
    let qn = (q as u128).pow(n);
    (0..n).map(|i| qn - (q as u128).pow(i)).product()
}

/// The `p'`-part of `m`.
pub fn p_prime_part(mut m: u128, p: u32) -> u128 {
    while m % p as u128 == 0 {
        m /= p as u128;
    }
    m
}

/// `GL_n(O_r)` together with the rings `O_i` for every level `i ≤ r`.
#[derive(Clone, Debug)]
pub struct GlGroup {
    n: usize,
    ring: ChainRing,
    levels: Vec<ChainRing>,
}

impl GlGroup {
    pub fn new(n: usize, spec: RingSpec) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidSpec(format!("n = {n} is outside 1..={MAX_N}")));
        }
        let spec = spec.with_degree(1);
        let ring = ChainRing::new(spec)?;
        let levels = (1..=spec.r).map(|i| ChainRing::new(spec.with_level(i))).collect::<Result<_>>()?;
        Ok(GlGroup { n, ring, levels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &ChainRing {
        &self.ring
    }

    /// `O_i` for `1 ≤ i ≤ r`.
    pub fn level_ring(&self, i: u32) -> &ChainRing {
        &self.levels[i as usize - 1]
    }

    pub fn r(&self) -> u32 {
        self.ring.level()
    }

    pub fn q(&self) -> u64 {
        self.ring.q()
    }

    pub fn p(&self) -> u32 {
        self.ring.p()
    }

    /// `l = ⌈r/2⌉`.
    pub fn l(&self) -> u32 {
        self.r().div_ceil(2)
    }

    /// `l' = ⌊r/2⌋`.
    pub fn l_prime(&self) -> u32 {
        self.r() / 2
    }

    pub fn identity(&self) -> Mat {
        Mat::identity(&self.ring, self.n)
    }

    pub fn mul(&self, a: &Mat, b: &Mat) -> Mat {
        a.mul(&self.ring, b)
    }

    pub fn inv(&self, a: &Mat) -> Result<Mat> {
        a.inv(&self.ring)
    }

    /// `g x g^{-1}`.
    pub fn conj(&self, g: &Mat, x: &Mat) -> Result<Mat> {
        Ok(x.conj_by(&self.ring, g, &self.inv(g)?))
    }

    pub fn commutator(&self, a: &Mat, b: &Mat) -> Result<Mat> {
        let ai = self.inv(a)?;
        let bi = self.inv(b)?;
        Ok(a.mul(&self.ring, b).mul(&self.ring, &ai).mul(&self.ring, &bi))
    }

    /// Validates a rational element.
    pub fn element(&self, m: Mat) -> Result<Mat> {
        if m.n() != self.n || !m.is_rational(&self.ring) || !m.is_invertible(&self.ring) {
            return Err(Error::NotInvertible);
        }
        Ok(m)
    }

    /// `|GL_n(O_r)| = q^{(r-1)n²}·|GL_n(F_q)|`.
    pub fn order(&self) -> u128 {
        let n = self.n as u32;
        (self.q() as u128).pow((self.r() - 1) * n * n) * gl_order_fq(n, self.q())
    }

    /// `|G^i ∩ G^F| = q^{(r-i)n²}`.
    pub fn kernel_order(&self, i: u32) -> u128 {
        (self.q() as u128).pow((self.r() - i.min(self.r())) * (self.n * self.n) as u32)
    }

    /// Reduction modulo `π^i` (entries keep their coordinates).
    pub fn reduce(&self, g: &Mat, i: u32) -> Mat {
        g.reduce_level(&self.ring, i)
    }

    /// Whether `g ≡ 1 mod π^i`.
    pub fn in_kernel(&self, g: &Mat, i: u32) -> bool {
        g.sub(&self.ring, &self.identity()).valuation(&self.ring) >= i
    }

    /// Number of matrices over `O_r` with entries of valuation at least `i`.
    fn lie_size(&self, i: u32) -> u64 {
        let per_entry = self.q().pow(self.r() - i.min(self.r()));
        per_entry.pow((self.n * self.n) as u32)
    }

    /// `M_n(π^i O_r)` in index order of the quotient digits.
    pub fn lie_elements(&self, i: u32, guard: Guard) -> Result<impl Iterator<Item = Mat> + '_> {
        let count = self.lie_size(i);
        guard.check("Lie lattice", count)?;
        let low = self.level_ring((self.r() - i.min(self.r())).max(1));
        let zero_level = i >= self.r();
        let n = self.n;
        Ok((0..count).map(move |idx| {
            if zero_level {
                return Mat::zero(n);
            }
            Mat::from_index(low, n, idx).mul_pi_pow(&self.ring, i)
        }))
    }

    /// The congruence kernel `G^i`, `1 ≤ i ≤ r`.
    pub fn kernel_elements(&self, i: u32, guard: Guard) -> Result<impl Iterator<Item = Mat> + '_> {
        assert!(i >= 1);
        let id = self.identity();
        Ok(self.lie_elements(i, guard)?.map(move |x| x.add(&self.ring, &id)))
    }

    /// All of `GL_n(O_r)` in index order.
    pub fn elements(&self, guard: Guard) -> Result<impl Iterator<Item = Mat> + '_> {
        let total = self.ring.size().checked_pow((self.n * self.n) as u32).unwrap_or(u64::MAX);
        guard.check("matrix ring", total)?;
        let n = self.n;
        Ok((0..total).map(move |i| Mat::from_index(&self.ring, n, i)).filter(move |m| m.is_invertible(&self.ring)))
    }

    /// `GL_n(O_i)` as rational matrices with entries reduced below `π^i`.
    pub fn level_elements(&self, i: u32, guard: Guard) -> Result<impl Iterator<Item = Mat> + '_> {
        let ring = self.level_ring(i);
        let total = ring.size().checked_pow((self.n * self.n) as u32).unwrap_or(u64::MAX);
        guard.check("matrix ring", total)?;
        let n = self.n;
        Ok((0..total).map(move |k| Mat::from_index(ring, n, k)).filter(move |m| m.is_invertible(ring)))
    }
}

#[cfg(test)]
mod tests;
