//! Finite chain rings `O_r` and their unramified extensions `O_r^{(a)}`.
//!
//! A ring is built as a two-step tower over the coefficient ring
//! `B = Z/p^r` or `F_p[t]/t^r`:
//!
//! ```text
//! O_r     = B[Y]/h(Y),      deg h = e   (residue field F_q, q = p^e)
//! O_r^(a) = O_r[X]/m(X),    deg m = a   (residue field F_{q^a})
//! ```
//!
//! `h` and `m` are the least irreducible residue polynomials of their degree,
//! lifted so that their roots are Teichmüller elements. Hence `Y` and `X` are
//! Teichmüller, the geometric Frobenius `F` is the `O_r`-algebra map
//! `X ↦ X^q`, and every element of `O_r` is `F`-fixed by construction.

mod base;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Guard, Result};
use base::BaseRing;

/// Maximum number of `B`-coordinates of a ring element (`e·a`).
pub const MAX_COORDS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Characteristic {
    Mixed,
    Equal,
}

/// Parameters of `O_r^{(a)}` with residue field `F_{q^a}`, `q = p^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingSpec {
    pub p: u32,
    pub e: u32,
    pub r: u32,
    pub kind: Characteristic,
    pub a: u32,
}

impl RingSpec {
    pub fn new(kind: Characteristic, p: u32, e: u32, r: u32, a: u32) -> Self {
        RingSpec { p, e, r, kind, a }
    }

    pub fn mixed(p: u32, e: u32, r: u32, a: u32) -> Self {
        Self::new(Characteristic::Mixed, p, e, r, a)
    }

    pub fn equal(p: u32, e: u32, r: u32, a: u32) -> Self {
        Self::new(Characteristic::Equal, p, e, r, a)
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }

    /// Residue field size `q^a`.
    pub fn qa(&self) -> u64 {
        self.q().pow(self.a)
    }

    pub fn size(&self) -> u64 {
        self.qa().pow(self.r)
    }

    pub fn unit_count(&self) -> u64 {
        self.qa().pow(self.r - 1) * (self.qa() - 1)
    }

    pub fn with_level(&self, r: u32) -> Self {
        RingSpec { r, ..*self }
    }

    pub fn with_degree(&self, a: u32) -> Self {
        RingSpec { a, ..*self }
    }

    /// Compact key such as `mixed:p3:e1:r3:a2`.
    pub fn key(&self) -> String {
        let kind = match self.kind {
            Characteristic::Mixed => "mixed",
            Characteristic::Equal => "equal",
        };
        format!("{kind}:p{}:e{}:r{}:a{}", self.p, self.e, self.r, self.a)
    }

    pub fn parse(key: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("ring key `{key}`"));
        let mut parts = key.split(':');
        let kind = match parts.next().ok_or_else(bad)? {
            "mixed" => Characteristic::Mixed,
            "equal" => Characteristic::Equal,
            _ => return Err(bad()),
        };
        let mut field = |tag: char| -> Result<u32> {
            let s = parts.next().ok_or_else(bad)?;
            let rest = s.strip_prefix(tag).ok_or_else(bad)?;
            rest.parse::<u32>().map_err(|_| bad())
        };
        let p = field('p')?;
        let e = field('e')?;
        let r = field('r')?;
        let a = field('a')?;
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(RingSpec { p, e, r, kind, a })
    }

    fn validate(&self) -> Result<()> {
        if self.p < 2 || !is_prime(self.p) {
            return Err(Error::InvalidSpec(format!("p = {} is not prime", self.p)));
        }
        if self.r == 0 || self.e == 0 || self.a == 0 {
            return Err(Error::InvalidSpec("r, e and a must be positive".to_string()));
        }
        if (self.e * self.a) as usize > MAX_COORDS {
            return Err(Error::InvalidSpec(format!(
                "degree e·a = {} exceeds the supported maximum {MAX_COORDS}",
                self.e * self.a
            )));
        }
        match (self.p as u64).checked_pow(self.r) {
            Some(s) if s < (1 << 31) => Ok(()),
            _ => Err(Error::InvalidSpec("p^r does not fit the coefficient encoding".to_string())),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Element of a chain ring: `B`-coordinates of `Σ c_{jk} X^j Y^k`, stored at
/// index `j·e + k`. Elements of `O_r` embed in `O_r^{(a)}` with the same
/// coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RingElem(pub [u32; MAX_COORDS]);

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&c| c != 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.0[..last.max(1)])
    }
}

type Inner = [u32; MAX_COORDS];

/// Immutable ring handle.
#[derive(Clone, Debug)]
pub struct ChainRing {
    spec: RingSpec,
    base: BaseRing,
    e: usize,
    a: usize,
    /// Low coefficients of the monic inner modulus `h` (over `B`).
    inner_mod: Vec<u32>,
    /// Low coefficients of the monic outer modulus `m` (over `O_r`).
    outer_mod: Vec<Inner>,
    /// `F(X^j) = X^{qj}`.
    frob_q: Vec<RingElem>,
    /// `σ(Y^k) = Y^{pk}` inside `O_r`.
    sigma_inner: Vec<Inner>,
    /// `σ(X^j) = X^{pj}`.
    sigma_outer: Vec<RingElem>,
}

impl ChainRing {
    /// Builds the ring for `spec`. The same spec always yields the same moduli.
    pub fn new(spec: RingSpec) -> Result<Self> {
        spec.validate()?;
        let e = spec.e as usize;
        let a = spec.a as usize;
        let base = BaseRing::new(spec.p, spec.r, spec.kind);

        let inner_mod = if e == 1 {
            vec![0]
        } else {
            let residue = least_irreducible_fp(spec.p, e);
            let mut provisional = Self::raw(spec.with_degree(1), base.clone(), residue.clone(), vec![[0; MAX_COORDS]]);
            if spec.kind == Characteristic::Mixed && spec.r > 1 {
                provisional.inner_mod = teichmuller_modulus_inner(&provisional);
            }
            provisional.inner_mod
        };

        let outer_mod = if a == 1 {
            vec![[0; MAX_COORDS]]
        } else {
            let field = Self::raw(spec.with_level(1).with_degree(1), BaseRing::new(spec.p, 1, spec.kind), inner_mod.iter().map(|c| c % spec.p).collect(), vec![[0; MAX_COORDS]]);
            let residue = least_irreducible_over(&field, a);
            let mut provisional = Self::raw(spec, base.clone(), inner_mod.clone(), residue);
            if spec.kind == Characteristic::Mixed && spec.r > 1 {
                provisional.outer_mod = teichmuller_modulus_outer(&provisional);
            }
            provisional.outer_mod
        };

        let mut ring = Self::raw(spec, base, inner_mod, outer_mod);
        ring.precompute();
        Ok(ring)
    }

    fn raw(spec: RingSpec, base: BaseRing, inner_mod: Vec<u32>, outer_mod: Vec<Inner>) -> Self {
        let e = spec.e as usize;
        let a = spec.a as usize;
        let mut ring = ChainRing {
            spec,
            base,
            e,
            a,
            inner_mod,
            outer_mod,
            frob_q: Vec::new(),
            sigma_inner: Vec::new(),
            sigma_outer: Vec::new(),
        };
        ring.precompute();
        ring
    }

    fn precompute(&mut self) {
        let q = self.spec.q();
        let p = self.spec.p as u64;
        let x = self.gen_x();
        let xq = self.pow(x, q);
        let xp = self.pow(x, p);
        let mut fq = Vec::with_capacity(self.a);
        let mut so = Vec::with_capacity(self.a);
        let (mut acc_q, mut acc_p) = (self.one(), self.one());
        for _ in 0..self.a {
            fq.push(acc_q);
            so.push(acc_p);
            acc_q = self.mul(acc_q, xq);
            acc_p = self.mul(acc_p, xp);
        }
        let y = self.gen_y();
        let yp = self.inner_pow(y.0, p);
        let mut si = Vec::with_capacity(self.e);
        let mut acc = self.one().0;
        for _ in 0..self.e {
            si.push(acc);
            acc = self.inner_mul(&acc, &yp);
        }
        self.frob_q = fq;
        self.sigma_outer = so;
        self.sigma_inner = si;
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn level(&self) -> u32 {
        self.spec.r
    }

    pub fn p(&self) -> u32 {
        self.spec.p
    }

    pub fn q(&self) -> u64 {
        self.spec.q()
    }

    pub fn degree(&self) -> u32 {
        self.spec.a
    }

    pub fn size(&self) -> u64 {
        self.spec.size()
    }

    pub fn unit_count(&self) -> u64 {
        self.spec.unit_count()
    }

    fn coords(&self) -> usize {
        self.e * self.a
    }

    /// Low coefficients of the inner modulus `h` over the coefficient ring.
    pub fn inner_modulus(&self) -> &[u32] {
        &self.inner_mod
    }

    /// Low coefficients of the outer modulus `m`, as elements of `O_r`.
    pub fn outer_modulus(&self) -> Vec<RingElem> {
        self.outer_mod.iter().map(|c| RingElem(*c)).collect()
    }

    // ---- constructors ----

    pub fn zero(&self) -> RingElem {
        RingElem([0; MAX_COORDS])
    }

    pub fn one(&self) -> RingElem {
        self.from_int(1)
    }

    pub fn from_int(&self, k: i64) -> RingElem {
        let mut c = [0; MAX_COORDS];
        c[0] = self.base.from_int(k);
        RingElem(c)
    }

    /// The uniformiser `π` (`p` or `t`).
    pub fn pi(&self) -> RingElem {
        if self.spec.r == 1 {
            return self.zero();
        }
        let mut c = [0; MAX_COORDS];
        c[0] = self.spec.p;
        RingElem(c)
    }

    /// `Y`, the Teichmüller generator of `O_r` over the coefficient ring.
    pub fn gen_y(&self) -> RingElem {
        let mut c = [0; MAX_COORDS];
        if self.e > 1 {
            c[1] = 1;
        } else {
            c[0] = self.base.neg(self.inner_mod[0]);
        }
        RingElem(c)
    }

    /// `X`, the Teichmüller generator of `O_r^{(a)}` over `O_r`.
    pub fn gen_x(&self) -> RingElem {
        let mut c = [0; MAX_COORDS];
        if self.a > 1 {
            c[self.e] = 1;
            RingElem(c)
        } else {
            let mut out = [0; MAX_COORDS];
            for k in 0..self.e {
                out[k] = self.base.neg(self.outer_mod[0][k]);
            }
            RingElem(out)
        }
    }

    /// Element with the given `B`-coordinates (coordinates reduced into range).
    pub fn from_coords(&self, coords: &[u32]) -> RingElem {
        let mut c = [0; MAX_COORDS];
        for (i, &v) in coords.iter().enumerate().take(self.coords()) {
            c[i] = v % self.base.size;
        }
        RingElem(c)
    }

    pub fn coords_of<'a>(&self, x: &'a RingElem) -> &'a [u32] {
        &x.0[..self.coords()]
    }

    // ---- inner ring O_r = B[Y]/h ----

    fn inner_add(&self, x: &Inner, y: &Inner) -> Inner {
        let mut out = [0; MAX_COORDS];
        for k in 0..self.e {
            out[k] = self.base.add(x[k], y[k]);
        }
        out
    }

    fn inner_sub(&self, x: &Inner, y: &Inner) -> Inner {
        let mut out = [0; MAX_COORDS];
        for k in 0..self.e {
            out[k] = self.base.sub(x[k], y[k]);
        }
        out
    }

    fn inner_is_zero(&self, x: &Inner) -> bool {
        x[..self.e].iter().all(|&c| c == 0)
    }

    fn inner_mul(&self, x: &Inner, y: &Inner) -> Inner {
        let e = self.e;
        if e == 1 {
            let mut out = [0; MAX_COORDS];
            out[0] = self.base.mul(x[0], y[0]);
            return out;
        }
        let mut prod = [0u32; 2 * MAX_COORDS];
        for i in 0..e {
            if x[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] = self.base.add(prod[i + j], self.base.mul(x[i], y[j]));
            }
        }
        for k in (e..2 * e - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for t in 0..e {
                prod[k - e + t] = self.base.sub(prod[k - e + t], self.base.mul(c, self.inner_mod[t]));
            }
        }
        let mut out = [0; MAX_COORDS];
        out[..e].copy_from_slice(&prod[..e]);
        out
    }

    fn inner_pow(&self, x: Inner, mut n: u64) -> Inner {
        let mut acc = self.one().0;
        let mut b = x;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.inner_mul(&acc, &b);
            }
            b = self.inner_mul(&b, &b);
            n >>= 1;
        }
        acc
    }

    fn get_inner(&self, x: &RingElem, j: usize) -> Inner {
        let mut out = [0; MAX_COORDS];
        out[..self.e].copy_from_slice(&x.0[j * self.e..(j + 1) * self.e]);
        out
    }

    fn set_inner(&self, x: &mut RingElem, j: usize, v: &Inner) {
        x.0[j * self.e..(j + 1) * self.e].copy_from_slice(&v[..self.e]);
    }

    // ---- ring operations ----

    pub fn add(&self, x: RingElem, y: RingElem) -> RingElem {
        let mut out = [0; MAX_COORDS];
        for i in 0..self.coords() {
            out[i] = self.base.add(x.0[i], y.0[i]);
        }
        RingElem(out)
    }

    pub fn neg(&self, x: RingElem) -> RingElem {
        let mut out = [0; MAX_COORDS];
        for i in 0..self.coords() {
            out[i] = self.base.neg(x.0[i]);
        }
        RingElem(out)
    }

    pub fn sub(&self, x: RingElem, y: RingElem) -> RingElem {
        let mut out = [0; MAX_COORDS];
        for i in 0..self.coords() {
            out[i] = self.base.sub(x.0[i], y.0[i]);
        }
        RingElem(out)
    }

    pub fn mul(&self, x: RingElem, y: RingElem) -> RingElem {
        let a = self.a;
        if a == 1 {
            return RingElem(self.inner_mul(&x.0, &y.0));
        }
        let mut prod = [[0u32; MAX_COORDS]; 2 * MAX_COORDS];
        for i in 0..a {
            let xi = self.get_inner(&x, i);
            if self.inner_is_zero(&xi) {
                continue;
            }
            for j in 0..a {
                let yj = self.get_inner(&y, j);
                let t = self.inner_mul(&xi, &yj);
                prod[i + j] = self.inner_add(&prod[i + j], &t);
            }
        }
        for k in (a..2 * a - 1).rev() {
            let c = prod[k];
            if self.inner_is_zero(&c) {
                continue;
            }
            for t in 0..a {
                let s = self.inner_mul(&c, &self.outer_mod[t]);
                prod[k - a + t] = self.inner_sub(&prod[k - a + t], &s);
            }
        }
        let mut out = RingElem::default();
        for j in 0..a {
            self.set_inner(&mut out, j, &prod[j]);
        }
        out
    }

    pub fn pow(&self, x: RingElem, mut n: u64) -> RingElem {
        let mut acc = self.one();
        let mut b = x;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            n >>= 1;
        }
        acc
    }

    /// Multiplies by an element of `O_r` given as integer scalar.
    pub fn scale(&self, x: RingElem, k: i64) -> RingElem {
        self.mul(x, self.from_int(k))
    }

    pub fn is_zero(&self, x: RingElem) -> bool {
        x.0[..self.coords()].iter().all(|&c| c == 0)
    }

    pub fn is_unit(&self, x: RingElem) -> bool {
        !self.is_zero(self.residue_elem(x))
    }

    pub fn inv(&self, x: RingElem) -> Result<RingElem> {
        if !self.is_unit(x) {
            return Err(Error::NotInvertible);
        }
        Ok(self.pow(x, self.unit_count() - 1))
    }

    /// Largest `v ≤ r` with `x ∈ π^v O`.
    pub fn valuation(&self, x: RingElem) -> u32 {
        x.0[..self.coords()].iter().map(|&c| self.base.valuation(c)).min().unwrap_or(self.spec.r)
    }

    pub fn mul_pi(&self, x: RingElem) -> RingElem {
        self.mul_pi_pow(x, 1)
    }

    pub fn mul_pi_pow(&self, x: RingElem, k: u32) -> RingElem {
        if k >= self.spec.r {
            return self.zero();
        }
        let f = self.spec.p.pow(k);
        let mut out = [0; MAX_COORDS];
        for i in 0..self.coords() {
            out[i] = ((x.0[i] as u64 * f as u64) % self.base.size as u64) as u32;
        }
        RingElem(out)
    }

    /// Divides an element of valuation `≥ k` by `π^k`; the top `k` digits of
    /// the result are set to zero.
    pub fn div_pi_pow(&self, x: RingElem, k: u32) -> RingElem {
        debug_assert!(self.valuation(x) >= k);
        let f = self.spec.p.pow(k);
        let mut out = [0; MAX_COORDS];
        for i in 0..self.coords() {
            out[i] = x.0[i] / f;
        }
        RingElem(out)
    }

    /// Reduction modulo `π^i` seen as an element of the level-`i` ring.
    pub fn reduce_level(&self, x: RingElem, i: u32) -> RingElem {
        let m = self.spec.p.pow(i.min(self.spec.r));
        let mut out = [0; MAX_COORDS];
        for c in 0..self.coords() {
            out[c] = x.0[c] % m;
        }
        RingElem(out)
    }

    /// Residue class as an element of the level-1 ring (`F_{q^a}`).
    pub fn residue(&self, x: RingElem) -> RingElem {
        self.reduce_level(x, 1)
    }

    fn residue_elem(&self, x: RingElem) -> RingElem {
        self.reduce_level(x, 1)
    }

    /// Lifts an element of a lower-level ring of the same type, with zero upper digits.
    pub fn lift(&self, x: RingElem) -> RingElem {
        x
    }

    // ---- Frobenius, Teichmüller, trace, norm ----

    /// The geometric Frobenius `F` (`q`-power on Teichmüller elements, identity on `O_r`).
    pub fn frobenius_q(&self, x: RingElem) -> RingElem {
        if self.a == 1 {
            return x;
        }
        let mut out = self.zero();
        for j in 0..self.a {
            let c = self.get_inner(&x, j);
            if self.inner_is_zero(&c) {
                continue;
            }
            let mut cj = RingElem::default();
            self.set_inner(&mut cj, 0, &c);
            out = self.add(out, self.mul(cj, self.frob_q[j]));
        }
        out
    }

    pub fn frobenius_q_pow(&self, x: RingElem, d: u32) -> RingElem {
        (0..d % self.spec.a).fold(x, |acc, _| self.frobenius_q(acc))
    }

    /// The arithmetic `p`-Frobenius `σ` (lifting `u ↦ u^p` on the residue field).
    pub fn frobenius(&self, x: RingElem) -> RingElem {
        let mut out = self.zero();
        for j in 0..self.a {
            let c = self.get_inner(&x, j);
            if self.inner_is_zero(&c) {
                continue;
            }
            let mut sc = [0u32; MAX_COORDS];
            for k in 0..self.e {
                if c[k] == 0 {
                    continue;
                }
                let mut term = [0u32; MAX_COORDS];
                term[0] = c[k];
                let t = self.inner_mul(&term, &self.sigma_inner[k]);
                sc = self.inner_add(&sc, &t);
            }
            let mut cj = RingElem::default();
            self.set_inner(&mut cj, 0, &sc);
            out = self.add(out, self.mul(cj, self.sigma_outer[j]));
        }
        out
    }

    /// Teichmüller representative of the residue class of `x`.
    pub fn teichmuller(&self, x: RingElem) -> RingElem {
        let qa = self.spec.qa();
        let mut t = self.residue_elem(x);
        for _ in 1..self.spec.r {
            t = self.pow(t, qa);
        }
        t
    }

    /// Expansion `x = Σ π^i [t_i]` with Teichmüller digits `t_i`.
    pub fn teichmuller_digits(&self, x: RingElem) -> Vec<RingElem> {
        let r = self.spec.r;
        let mut digits = Vec::with_capacity(r as usize);
        let mut rest = x;
        for i in 0..r {
            let t = self.teichmuller(rest);
            digits.push(t);
            let diff = self.sub(rest, t);
            rest = if i + 1 < r { self.div_pi_pow(diff, 1) } else { diff };
        }
        digits
    }

    pub fn from_teichmuller_digits(&self, digits: &[RingElem]) -> RingElem {
        digits
            .iter()
            .enumerate()
            .fold(self.zero(), |acc, (i, &t)| self.add(acc, self.mul_pi_pow(t, i as u32)))
    }

    /// `F` computed digit-wise on the Teichmüller expansion (`[t] ↦ [t^q]`).
    pub fn frobenius_q_digitwise(&self, x: RingElem) -> RingElem {
        let q = self.spec.q();
        let digits: Vec<RingElem> = self.teichmuller_digits(x).into_iter().map(|t| self.pow(t, q)).collect();
        self.from_teichmuller_digits(&digits)
    }

    /// `Σ_{d<a} F^d(x)`, an element of `O_r`.
    pub fn trace_to_base(&self, x: RingElem) -> RingElem {
        let mut acc = self.zero();
        let mut y = x;
        for _ in 0..self.a {
            acc = self.add(acc, y);
            y = self.frobenius_q(y);
        }
        acc
    }

    /// `x·F(x)···F^{d-1}(x)`.
    pub fn norm_f(&self, x: RingElem, d: u32) -> RingElem {
        let mut acc = self.one();
        let mut y = x;
        for _ in 0..d {
            acc = self.mul(acc, y);
            y = self.frobenius_q(y);
        }
        acc
    }

    /// Whether `x` lies in `O_r` (is `F`-fixed).
    pub fn is_rational(&self, x: RingElem) -> bool {
        x.0[self.e..self.coords()].iter().all(|&c| c == 0)
    }

    // ---- enumeration ----

    pub fn index(&self, x: RingElem) -> u64 {
        let s = self.base.size as u64;
        x.0[..self.coords()].iter().rev().fold(0u64, |acc, &c| acc * s + c as u64)
    }

    pub fn from_index(&self, mut idx: u64) -> RingElem {
        let s = self.base.size as u64;
        let mut out = [0; MAX_COORDS];
        for c in out.iter_mut().take(self.coords()) {
            *c = (idx % s) as u32;
            idx /= s;
        }
        RingElem(out)
    }

    pub fn elements(&self, guard: Guard) -> Result<impl Iterator<Item = RingElem> + '_> {
        guard.check("ring elements", self.size())?;
        Ok((0..self.size()).map(move |i| self.from_index(i)))
    }

    pub fn units(&self, guard: Guard) -> Result<impl Iterator<Item = RingElem> + '_> {
        Ok(self.elements(guard)?.filter(move |&x| self.is_unit(x)))
    }

    /// Elements of `O_r` (the `F`-fixed subring) in index order.
    pub fn base_elements(&self, guard: Guard) -> Result<impl Iterator<Item = RingElem> + '_> {
        let s = (self.base.size as u64).pow(self.e as u32);
        guard.check("base ring elements", s)?;
        Ok((0..s).map(move |i| self.from_index(i)))
    }

    /// Elements of the residue field `F_{q^a}` in index order.
    pub fn residue_elements(&self) -> impl Iterator<Item = RingElem> + '_ {
        let p = self.spec.p as u64;
        let n = self.coords();
        (0..self.spec.qa()).map(move |mut i| {
            let mut out = [0; MAX_COORDS];
            for c in out.iter_mut().take(n) {
                *c = (i % p) as u32;
                i /= p;
            }
            RingElem(out)
        })
    }

    /// Elements of the residue field `F_q` of `O_r`.
    pub fn residue_base_elements(&self) -> impl Iterator<Item = RingElem> + '_ {
        let p = self.spec.p as u64;
        let e = self.e;
        (0..self.spec.q()).map(move |mut i| {
            let mut out = [0; MAX_COORDS];
            for c in out.iter_mut().take(e) {
                *c = (i % p) as u32;
                i /= p;
            }
            RingElem(out)
        })
    }

    /// `F_p`-coordinates of a residue element (length `e·a`).
    pub fn residue_coords(&self, x: RingElem) -> Vec<u32> {
        x.0[..self.coords()].iter().map(|&c| c % self.spec.p).collect()
    }

    /// A generator of the cyclic group `F_{q^a}^×`, as its Teichmüller lift;
    /// the first one in residue enumeration order.
    pub fn primitive_teichmuller(&self) -> RingElem {
        let order = self.spec.qa() - 1;
        let primes = prime_factors(order);
        for u in self.residue_elements().skip(1) {
            if primes.iter().all(|&l| !self.is_one_residue(self.pow(u, order / l))) {
                return self.teichmuller(u);
            }
        }
        self.one()
    }

    fn is_one_residue(&self, x: RingElem) -> bool {
        self.residue_elem(x) == self.residue_elem(self.one())
    }

    /// Additive trace `F_{q^a} → F_p` of the residue of `x`.
    pub fn residue_trace_fp(&self, x: RingElem) -> u32 {
        let f = (self.spec.e * self.spec.a) as usize;
        let mut acc = self.zero();
        let mut y = self.residue_elem(x);
        for _ in 0..f {
            acc = self.add(acc, y);
            y = self.reduce_level(self.pow(y, self.spec.p as u64), 1);
        }
        self.residue_elem(acc).0[0] % self.spec.p
    }

    /// `ψ`-exponent of the primitive additive character of `O_r^{(a)}` used for
    /// duality: returns `k` such that `ψ(x) = ζ_{p^r}^k`.
    ///
    /// Mixed characteristic: `k = Tr_{O/Z_p}(x) mod p^r`. Equal characteristic:
    /// `k = p^{r-1}·Tr_{F_{q^a}/F_p}(coefficient of t^{r-1})`.
    pub fn psi_exponent(&self, x: RingElem) -> u32 {
        let size = self.base.size;
        match self.spec.kind {
            Characteristic::Mixed => {
                // trace over Z/p^r: sum of all σ-conjugates
                let f = (self.spec.e * self.spec.a) as usize;
                let mut acc = self.zero();
                let mut y = x;
                for _ in 0..f {
                    acc = self.add(acc, y);
                    y = self.frobenius(y);
                }
                acc.0[0] % size
            }
            Characteristic::Equal => {
                let top = self.spec.p.pow(self.spec.r - 1);
                let mut c = [0u32; MAX_COORDS];
                for i in 0..self.coords() {
                    c[i] = (x.0[i] / top) % self.spec.p;
                }
                let lead = RingElem(c);
                let tr = self.residue_trace_fp(lead);
                tr * top
            }
        }
    }
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// ---- modulus construction ----

/// Monic polynomial division remainder over a ring given by closures; the divisor is monic.
fn poly_rem_monic<T: Copy>(num: &[T], div: &[T], sub: impl Fn(T, T) -> T, mul: impl Fn(T, T) -> T, zero: T, is_zero: impl Fn(T) -> bool) -> Vec<T> {
    // div includes the leading 1 at the end
    let dl = div.len() - 1;
    let mut r: Vec<T> = num.to_vec();
    if r.len() <= dl {
        return r;
    }
    for k in (dl..r.len()).rev() {
        let c = r[k];
        if is_zero(c) {
            continue;
        }
        for t in 0..=dl {
            r[k - dl + t] = sub(r[k - dl + t], mul(c, div[t]));
        }
    }
    r.truncate(dl);
    let _ = zero;
    r
}

/// Least monic irreducible polynomial of degree `deg` over `F_p`, low coefficients.
fn least_irreducible_fp(p: u32, deg: usize) -> Vec<u32> {
    let add = |x: u32, y: u32| (x + y) % p;
    let sub = |x: u32, y: u32| (x + p - y) % p;
    let mul = |x: u32, y: u32| (x * y) % p;
    let _ = add;
    'outer: for idx in 0..(p as u64).pow(deg as u32) {
        let mut f: Vec<u32> = digits_of(idx, p as u64, deg).into_iter().map(|d| d as u32).collect();
        f.push(1);
        for dd in 1..=deg / 2 {
            for jdx in 0..(p as u64).pow(dd as u32) {
                let mut g: Vec<u32> = digits_of(jdx, p as u64, dd).into_iter().map(|d| d as u32).collect();
                g.push(1);
                let rem = poly_rem_monic(&f, &g, sub, mul, 0, |x| x == 0);
                if rem.iter().all(|&c| c == 0) {
                    continue 'outer;
                }
            }
        }
        f.pop();
        return f;
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn digits_of(mut idx: u64, base: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(idx % base);
        idx /= base;
    }
    out
}

/// Least monic irreducible polynomial of degree `deg` over the residue field of
/// `field` (a level-1 ring with `a = 1`), returned as low coefficients.
fn least_irreducible_over(field: &ChainRing, deg: usize) -> Vec<Inner> {
    let elems: Vec<RingElem> = field.residue_base_elements().collect();
    let q = elems.len() as u64;
    let sub = |x: RingElem, y: RingElem| field.sub(x, y);
    let mul = |x: RingElem, y: RingElem| field.mul(x, y);
    let is_zero = |x: RingElem| field.is_zero(x);
    let poly = |idx: u64, d: usize| -> Vec<RingElem> {
        let mut f: Vec<RingElem> = digits_of(idx, q, d).into_iter().map(|i| elems[i as usize]).collect();
        f.push(field.one());
        f
    };
    'outer: for idx in 0..q.pow(deg as u32) {
        let f = poly(idx, deg);
        for dd in 1..=deg / 2 {
            for jdx in 0..q.pow(dd as u32) {
                let g = poly(jdx, dd);
                let rem = poly_rem_monic(&f, &g, sub, mul, field.zero(), is_zero);
                if rem.iter().all(|&c| field.is_zero(c)) {
                    continue 'outer;
                }
            }
        }
        return f[..deg].iter().map(|c| c.0).collect();
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// `Π_{k<n} (Z - τ^{b^k})` in `ring[Z]`, low coefficients (leading 1 dropped).
fn conjugate_product(ring: &ChainRing, tau: RingElem, b: u64, n: usize) -> Vec<RingElem> {
    let mut poly = vec![ring.one()];
    let mut root = tau;
    for _ in 0..n {
        let mut next = vec![ring.zero(); poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i + 1] = ring.add(next[i + 1], c);
            next[i] = ring.sub(next[i], ring.mul(c, root));
        }
        poly = next;
        root = ring.pow(root, b);
    }
    poly.pop();
    poly
}

fn teichmuller_modulus_inner(provisional: &ChainRing) -> Vec<u32> {
    let y = provisional.gen_y();
    let tau = provisional.teichmuller(y);
    let coeffs = conjugate_product(provisional, tau, provisional.spec.p as u64, provisional.e);
    coeffs
        .iter()
        .map(|c| {
            debug_assert!(c.0[1..].iter().all(|&v| v == 0));
            c.0[0]
        })
        .collect()
}

fn teichmuller_modulus_outer(provisional: &ChainRing) -> Vec<Inner> {
    let x = provisional.gen_x();
    let tau = provisional.teichmuller(x);
    let coeffs = conjugate_product(provisional, tau, provisional.spec.q(), provisional.a);
    coeffs
        .iter()
        .map(|c| {
            debug_assert!(provisional.is_rational(*c));
            let mut inner = [0; MAX_COORDS];
            inner[..provisional.e].copy_from_slice(&c.0[..provisional.e]);
            inner
        })
        .collect()
}
