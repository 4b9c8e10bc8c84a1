//! Exact arithmetic in cyclotomic fields `Q(ζ_N)` and duality for finite
//! abelian groups.
//!
//! [`CycloNum`] stores rational coordinates in the power basis
//! `1, ζ_N, …, ζ_N^{φ(N)-1}`, always reduced modulo the cyclotomic polynomial
//! `Φ_N`, so equality at a common conductor is coordinate equality. Mixed
//! operations promote both sides to the lcm conductor.
//!
//! [`Phase`] is a root of unity kept as an exponent in `Q/Z`; [`RootSum`]
//! accumulates integer multiples of roots of unity and is the fast path for
//! traces of monomial matrices.

mod abelian;

pub use abelian::{abelian_structure, class_inner_product, AbelianStructure};

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub type Rational = Ratio<i128>;

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            while m % d == 0 {
                m /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn mobius(n: u64) -> i32 {
    let mut m = n;
    let mut k = 0;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            m /= d;
            if m % d == 0 {
                return 0;
            }
            k += 1;
        }
        d += 1;
    }
    if m > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Integer coefficients of `Φ_N`, low degree first, via `Π_{d|N} (x^d − 1)^{μ(N/d)}`.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    let n = n as u64;
    let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    let mut poly = vec![1i64];
    for &d in &divisors {
        if mobius(n / d) == 1 {
            let mut next = vec![0i64; poly.len() + d as usize];
            for (i, &c) in poly.iter().enumerate() {
                next[i + d as usize] += c;
                next[i] -= c;
            }
            poly = next;
        }
    }
    for &d in &divisors {
        if mobius(n / d) == -1 {
            let d = d as usize;
            let deg = poly.len() - 1 - d;
            let mut quot = vec![0i64; deg + 1];
            for k in (0..=deg).rev() {
                let above = if k + d <= deg { quot[k + d] } else { 0 };
                quot[k] = poly[k + d] + above;
            }
            poly = quot;
        }
    }
    // normalize sign: Φ_N is monic
    if poly.last().copied() == Some(-1) {
        for c in poly.iter_mut() {
            *c = -*c;
        }
    }
    poly
}

/// An element of `Q(ζ_N)`.
#[derive(Clone)]
pub struct CycloNum {
    n: u32,
    coeffs: Vec<Rational>,
}

impl CycloNum {
    pub fn zero() -> Self {
        CycloNum { n: 1, coeffs: vec![Rational::zero()] }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(k: i128) -> Self {
        Self::from_rational(Rational::from_integer(k))
    }

    pub fn from_rational(x: Rational) -> Self {
        CycloNum { n: 1, coeffs: vec![x] }
    }

    /// `ζ_N^k`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let k = k.rem_euclid(n as i64) as usize;
        let mut v = vec![Rational::zero(); n as usize];
        v[k] = Rational::one();
        Self::reduce(n, v)
    }

    /// Builds `Σ c_k ζ_N^k` from coefficients of any length.
    pub fn from_power_coeffs(n: u32, coeffs: &[Rational]) -> Self {
        let mut v = vec![Rational::zero(); n as usize];
        for (k, c) in coeffs.iter().enumerate() {
            v[k % n as usize] += *c;
        }
        Self::reduce(n, v)
    }

    /// Reduces a length-`N` vector over the basis `ζ_N^k` to canonical form.
    fn reduce(n: u32, mut v: Vec<Rational>) -> Self {
        let phi = cyclotomic_polynomial(n);
        let deg = phi.len() - 1;
        for k in (deg..v.len()).rev() {
            let c = v[k];
            if c.is_zero() {
                continue;
            }
            for (t, &pt) in phi.iter().enumerate().take(deg) {
                if pt != 0 {
                    v[k - deg + t] -= c * Rational::from_integer(pt as i128);
                }
            }
            v[k] = Rational::zero();
        }
        v.truncate(deg);
        if v.is_empty() {
            v.push(Rational::zero());
        }
        CycloNum { n, coeffs: v }
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Power-basis coordinates (length `φ(N)`).
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Rewrites at conductor `m`, a multiple of the current one.
    pub fn promote(&self, m: u32) -> Self {
        assert!(m % self.n == 0, "conductor {m} is not a multiple of {}", self.n);
        if m == self.n {
            return self.clone();
        }
        let step = (m / self.n) as usize;
        let mut v = vec![Rational::zero(); m as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[k * step] = *c;
        }
        Self::reduce(m, v)
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.n == other.n {
            return (self.clone(), other.clone());
        }
        let m = self.n.lcm(&other.n);
        (self.promote(m), other.promote(m))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeffs[0])
    }

    pub fn as_integer(&self) -> Result<i128> {
        match self.as_rational() {
            Some(x) if x.is_integer() => Ok(x.to_integer()),
            _ => Err(Error::Invariant(format!("expected an integer, found {self}"))),
        }
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let n = self.n as usize;
        let mut v = vec![Rational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[(n - k) % n] += *c;
        }
        Self::reduce(self.n, v)
    }

    /// `|x|^2 = x · conj(x)`.
    pub fn abs2(&self) -> Self {
        self * &self.conj()
    }

    pub fn scale(&self, k: Rational) -> Self {
        CycloNum { n: self.n, coeffs: self.coeffs.iter().map(|c| *c * k).collect() }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, by solving the linear system of multiplication by `self`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        if let Some(x) = self.as_rational() {
            return Ok(Self::from_rational(x.recip()));
        }
        let d = self.coeffs.len();
        // columns: self · ζ^j in canonical coordinates
        let mut m: Vec<Vec<Rational>> = vec![vec![Rational::zero(); d + 1]; d];
        for j in 0..d {
            let col = self * &Self::root_of_unity(self.n, j as i64);
            for i in 0..d {
                m[i][j] = col.coeffs[i];
            }
        }
        m[0][d] = Rational::one();
        for col in 0..d {
            let piv = (col..d).find(|&r| !m[r][col].is_zero()).ok_or(Error::NotInvertible)?;
            m.swap(col, piv);
            let inv = m[col][col].recip();
            for c in col..=d {
                m[col][c] *= inv;
            }
            for r in 0..d {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col];
                    for c in col..=d {
                        let t = m[col][c] * f;
                        m[r][c] -= t;
                    }
                }
            }
        }
        Ok(CycloNum { n: self.n, coeffs: m.into_iter().map(|row| row[d]).collect() })
    }

    /// Parses `N:[c0,c1,...]` with entries `a` or `a/b`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("cyclotomic number `{s}`"));
        let (n, rest) = s.split_once(':').ok_or_else(bad)?;
        let n: u32 = n.trim().parse().map_err(|_| bad())?;
        let body = rest.trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        let mut coeffs = Vec::new();
        for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let q = match part.split_once('/') {
                Some((a, b)) => Rational::new(a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?),
                None => Rational::from_integer(part.parse().map_err(|_| bad())?),
            };
            coeffs.push(q);
        }
        if n == 0 {
            return Err(bad());
        }
        Ok(Self::from_power_coeffs(n, &coeffs))
    }
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycloNum {}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:[", self.n)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        let (mut a, b) = self.common(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x += *y;
        }
        a
    }
}

impl<'a> Sub<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        self + &(-rhs)
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum { n: self.n, coeffs: self.coeffs.iter().map(|c| -*c).collect() }
    }
}

impl<'a> Mul<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        if let Some(x) = self.as_rational() {
            return rhs.scale(x);
        }
        if let Some(y) = rhs.as_rational() {
            return self.scale(y);
        }
        let (a, b) = self.common(rhs);
        let n = a.n as usize;
        let mut v = vec![Rational::zero(); n];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    v[(i + j) % n] += *x * *y;
                }
            }
        }
        CycloNum::reduce(a.n, v)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: CycloNum) -> CycloNum {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

impl core::iter::Sum for CycloNum {
    fn sum<I: Iterator<Item = CycloNum>>(iter: I) -> Self {
        iter.fold(CycloNum::zero(), |acc, x| &acc + &x)
    }
}

/// A root of unity `exp(2πi·num/den)`, with `0 ≤ num < den` and `gcd = 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase {
    num: u64,
    den: u64,
}

impl Phase {
    pub const ONE: Phase = Phase { num: 0, den: 1 };

    /// `ζ_N^k`.
    pub fn new(k: i64, n: u64) -> Self {
        assert!(n > 0);
        let k = k.rem_euclid(n as i64) as u64;
        let g = k.gcd(&n);
        Phase { num: k / g, den: n / g }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    /// Order of the root of unity.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn mul(self, other: Phase) -> Phase {
        let den = self.den.lcm(&other.den);
        let k = self.num * (den / self.den) + other.num * (den / other.den);
        Phase::new((k % den) as i64, den)
    }

    pub fn inv(self) -> Phase {
        Phase::new(-(self.num as i64), self.den)
    }

    pub fn pow(self, e: i64) -> Phase {
        let k = (self.num as i128 * e as i128).rem_euclid(self.den as i128);
        Phase::new(k as i64, self.den)
    }

    /// Exponent at conductor `n` (a multiple of the order).
    pub fn exponent_at(&self, n: u64) -> u64 {
        debug_assert!(n % self.den == 0);
        self.num * (n / self.den)
    }

    pub fn to_cyclo(&self) -> CycloNum {
        CycloNum::root_of_unity(self.den as u32, self.num as i64)
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ζ[{}/{}]", self.num, self.den)
    }
}

/// Integer combination `Σ m_k ζ_N^k`, with `N` grown to the lcm of all phases added.
#[derive(Clone, Debug, Default)]
pub struct RootSum {
    n: u64,
    counts: Vec<i64>,
}

impl RootSum {
    pub fn new() -> Self {
        RootSum { n: 1, counts: vec![0] }
    }

    pub fn with_conductor(n: u64) -> Self {
        RootSum { n, counts: vec![0; n as usize] }
    }

    fn grow(&mut self, m: u64) {
        let new_n = self.n.lcm(&m);
        if new_n == self.n {
            return;
        }
        let step = (new_n / self.n) as usize;
        let mut counts = vec![0; new_n as usize];
        for (k, &c) in self.counts.iter().enumerate() {
            counts[k * step] = c;
        }
        self.n = new_n;
        self.counts = counts;
    }

    pub fn add(&mut self, phase: Phase, mult: i64) {
        if self.n % phase.den != 0 {
            self.grow(phase.den);
        }
        self.counts[phase.exponent_at(self.n) as usize] += mult;
    }

    pub fn merge(&mut self, other: &RootSum) {
        self.grow(other.n);
        let step = (self.n / other.n) as usize;
        for (k, &c) in other.counts.iter().enumerate() {
            self.counts[k * step] += c;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn to_cyclo(&self) -> CycloNum {
        let v: Vec<Rational> = self.counts.iter().map(|&c| Rational::from_integer(c as i128)).collect();
        CycloNum::reduce(self.n as u32, v)
    }
}

/// Renders a rational as `a` or `a/b`.
pub fn rational_string(x: &Rational) -> String {
    if x.is_integer() {
        format!("{}", x.to_integer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `|x|` for a rational.
pub fn rational_abs(x: &Rational) -> Rational {
    x.abs()
}
