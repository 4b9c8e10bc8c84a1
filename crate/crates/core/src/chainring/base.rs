//! The coefficient ring `B = Z/p^r` (mixed characteristic) or `F_p[t]/t^r`
//! (equal characteristic). Both are encoded as integers in `[0, p^r)`; in the
//! equal-characteristic case the base-`p` digits are the coefficients of
//! `1, t, t^2, ...`. Reduction to a lower level, multiplication by the
//! uniformiser and the residue map then coincide for both encodings.

use alloc::vec;
use alloc::vec::Vec;

use super::Characteristic;

#[derive(Clone, Debug)]
pub(crate) struct BaseRing {
    pub p: u32,
    pub r: u32,
    pub kind: Characteristic,
    pub size: u32,
    /// Full multiplication table for small equal-characteristic rings.
    table: Option<Vec<u32>>,
}

impl BaseRing {
    pub fn new(p: u32, r: u32, kind: Characteristic) -> Self {
        let size = p.pow(r);
        let mut base = BaseRing { p, r, kind, size, table: None };
        if kind == Characteristic::Equal && size <= 256 && r > 1 {
            let mut t = vec![0u32; (size * size) as usize];
            for x in 0..size {
                for y in 0..size {
                    t[(x * size + y) as usize] = base.mul_digits(x, y);
                }
            }
            base.table = Some(t);
        }
        base
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        match self.kind {
            Characteristic::Mixed => {
                let s = x + y;
                if s >= self.size { s - self.size } else { s }
            }
            Characteristic::Equal => {
                if self.r == 1 {
                    return (x + y) % self.p;
                }
                let (mut x, mut y, mut out, mut place) = (x, y, 0u32, 1u32);
                while x > 0 || y > 0 {
                    out += ((x % self.p + y % self.p) % self.p) * place;
                    x /= self.p;
                    y /= self.p;
                    place *= self.p;
                }
                out
            }
        }
    }

    #[inline]
    pub fn neg(&self, x: u32) -> u32 {
        match self.kind {
            Characteristic::Mixed => {
                if x == 0 { 0 } else { self.size - x }
            }
            Characteristic::Equal => {
                let (mut x, mut out, mut place) = (x, 0u32, 1u32);
                while x > 0 {
                    out += ((self.p - x % self.p) % self.p) * place;
                    x /= self.p;
                    place *= self.p;
                }
                out
            }
        }
    }

    #[inline]
    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        match self.kind {
            Characteristic::Mixed => ((x as u64 * y as u64) % self.size as u64) as u32,
            Characteristic::Equal => {
                if self.r == 1 {
                    return (x * y) % self.p;
                }
                match &self.table {
                    Some(t) => t[(x * self.size + y) as usize],
                    None => self.mul_digits(x, y),
                }
            }
        }
    }

    fn mul_digits(&self, x: u32, y: u32) -> u32 {
        let r = self.r as usize;
        let p = self.p;
        let mut dx = [0u32; 32];
        let mut dy = [0u32; 32];
        let (mut a, mut b) = (x, y);
        for i in 0..r {
            dx[i] = a % p;
            dy[i] = b % p;
            a /= p;
            b /= p;
        }
        let mut out = 0u32;
        let mut place = 1u32;
        for k in 0..r {
            let mut c = 0u32;
            for i in 0..=k {
                c = (c + dx[i] * dy[k - i]) % p;
            }
            out += c * place;
            place *= p;
        }
        out
    }

    /// Embeds an integer (the image of `Z -> B`).
    pub fn from_int(&self, k: i64) -> u32 {
        match self.kind {
            Characteristic::Mixed => k.rem_euclid(self.size as i64) as u32,
            Characteristic::Equal => k.rem_euclid(self.p as i64) as u32,
        }
    }

    pub fn valuation(&self, x: u32) -> u32 {
        if x == 0 {
            return self.r;
        }
        let mut v = 0;
        let mut x = x;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }
}
