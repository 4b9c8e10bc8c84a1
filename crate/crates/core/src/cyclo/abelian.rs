//! Structure of finite abelian groups given by enumeration, and their duals.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use super::{CycloNum, Phase, Rational};
use crate::chainring::prime_factors;
use crate::{Error, Guard, Result};

/// Independent generators `g_i` of orders `d_1 | d_2 | …` reversed (largest
/// first), with a dense discrete-log table indexed by an element index.
#[derive(Clone, Debug)]
pub struct AbelianStructure<T> {
    gens: Vec<T>,
    orders: Vec<u64>,
    /// `index(g)` → mixed-radix code of the exponent vector, `u64::MAX` outside.
    logs: Vec<u64>,
    identity: T,
}

impl<T: Copy + Eq> AbelianStructure<T> {
    pub fn generators(&self) -> &[T] {
        &self.gens
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Exponent of the group (lcm of the orders).
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |a, &d| a.lcm(&d))
    }

    pub fn identity(&self) -> T {
        self.identity
    }

    /// Mixed-radix code of an exponent vector (first coordinate least significant).
    pub fn encode(&self, exps: &[u64]) -> u64 {
        exps.iter().zip(&self.orders).rev().fold(0, |acc, (&x, &d)| acc * d + x % d)
    }

    pub fn decode(&self, mut code: u64) -> Vec<u64> {
        self.orders
            .iter()
            .map(|&d| {
                let x = code % d;
                code /= d;
                x
            })
            .collect()
    }

    /// Discrete logarithm of the element with the given index.
    pub fn log_code(&self, index: usize) -> Option<u64> {
        self.logs.get(index).copied().filter(|&c| c != u64::MAX)
    }

    pub fn log(&self, index: usize) -> Option<Vec<u64>> {
        self.log_code(index).map(|c| self.decode(c))
    }

    pub fn element(&self, exps: &[u64], mul: impl Fn(T, T) -> T) -> T {
        let mut acc = self.identity;
        for (&g, &x) in self.gens.iter().zip(exps) {
            for _ in 0..x {
                acc = mul(acc, g);
            }
        }
        acc
    }

    /// Value of the dual character with exponent vector `chi` at the element
    /// with exponent vector `x`: `Π ζ_{d_i}^{chi_i x_i}`.
    pub fn pairing(&self, chi: &[u64], x: &[u64]) -> Phase {
        let e = self.exponent();
        let mut k: u64 = 0;
        for ((&c, &v), &d) in chi.iter().zip(x).zip(&self.orders) {
            k = (k + (c * v % d) * (e / d)) % e;
        }
        Phase::new(k as i64, e)
    }

    pub fn eval(&self, chi: &[u64], index: usize) -> Option<CycloNum> {
        self.log(index).map(|x| self.pairing(chi, &x).to_cyclo())
    }

    /// All exponent vectors of dual characters, in mixed-radix order.
    pub fn dual_characters(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.order()).map(move |c| self.decode(c))
    }
}

/// Computes an independent generating set of a finite abelian group.
///
/// `elements` lists the group; `index` maps each element injectively into
/// `0..index_bound`. Generators are chosen in enumeration order: Sylow bases
/// are built greedily, then coprime factors are merged into invariant factors.
pub fn abelian_structure<T: Copy + Eq>(
    elements: &[T],
    identity: T,
    mul: impl Fn(T, T) -> T,
    index: impl Fn(T) -> usize,
    index_bound: usize,
    guard: Guard,
) -> Result<AbelianStructure<T>> {
    guard.check("abelian group", elements.len() as u64)?;
    guard.check("abelian group index table", index_bound as u64)?;
    let n = elements.len() as u64;
    let step = (elements.len() / 64).max(1);
    for x in elements.iter().step_by(step) {
        for y in elements.iter().step_by(step * 3 + 1) {
            if mul(*x, *y) != mul(*y, *x) {
                return Err(Error::InvalidSpec("group is not abelian".into()));
            }
        }
    }
    let pow = |x: T, mut e: u64| {
        let mut acc = identity;
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };

    // Per prime: a basis of the Sylow subgroup, orders descending.
    let mut sylow_bases: Vec<Vec<(T, u64)>> = Vec::new();
    for l in prime_factors(n) {
        let mut lpart = 1;
        while n % (lpart * l) == 0 {
            lpart *= l;
        }
        let cofactor = n / lpart;
        let sylow: Vec<T> = {
            let mut seen = vec![false; index_bound];
            let mut out = Vec::new();
            for &x in elements {
                let y = pow(x, cofactor);
                if !seen[index(y)] {
                    seen[index(y)] = true;
                    out.push(y);
                }
            }
            out
        };
        // members of the subgroup generated so far, with exponent vectors
        let mut span: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        span.insert(index(identity), Vec::new());
        let mut basis: Vec<(T, u64)> = Vec::new();
        while (span.len() as u64) < lpart {
            // element whose coset has maximal order
            let mut best: Option<(T, u64)> = None;
            for &x in &sylow {
                let mut m = 1;
                let mut y = x;
                while !span.contains_key(&index(y)) {
                    y = pow(y, l);
                    m *= l;
                }
                if best.map_or(true, |(_, bm)| m > bm) {
                    best = Some((x, m));
                }
            }
            let (x, m) = best.expect("nonempty sylow subgroup");
            let coords = span[&index(pow(x, m))].clone();
            let mut g = x;
            for (i, &c) in coords.iter().enumerate() {
                if c % m != 0 {
                    return Err(Error::Invariant(format!("sylow basis adjustment failed for prime {l}")));
                }
                let (b, d) = basis[i];
                g = mul(g, pow(b, (d - c / m % d) % d));
            }
            let mut next = BTreeMap::new();
            for (&k, v) in &span {
                let _ = k;
                let base = elements_from(&basis, v, identity, &mul);
                let mut y = base;
                for j in 0..m {
                    let mut w = v.clone();
                    w.push(j);
                    next.insert(index(y), w);
                    y = mul(y, g);
                }
            }
            span = next;
            basis.push((g, m));
        }
        sylow_bases.push(basis);
    }

    // Merge into invariant factors, largest first.
    let rank = sylow_bases.iter().map(Vec::len).max().unwrap_or(0);
    let mut gens = Vec::with_capacity(rank);
    let mut orders = Vec::with_capacity(rank);
    for k in 0..rank {
        let mut g = identity;
        let mut d = 1;
        for basis in &sylow_bases {
            if let Some(&(b, m)) = basis.get(k) {
                g = mul(g, b);
                d *= m;
            }
        }
        gens.push(g);
        orders.push(d);
    }

    let mut logs = vec![u64::MAX; index_bound];
    let total: u64 = orders.iter().product();
    if total != n {
        return Err(Error::Invariant(format!("generator orders multiply to {total}, group has {n} elements")));
    }
    // walk all exponent vectors in mixed-radix order
    let mut exps = vec![0u64; gens.len()];
    let mut cur = identity;
    for code in 0..total {
        let i = index(cur);
        if logs[i] != u64::MAX {
            return Err(Error::Invariant("generators are not independent".into()));
        }
        logs[i] = code;
        for (j, e) in exps.iter_mut().enumerate() {
            *e += 1;
            cur = mul(cur, gens[j]);
            if *e < orders[j] {
                break;
            }
            *e = 0;
        }
    }
    Ok(AbelianStructure { gens, orders, logs, identity })
}

fn elements_from<T: Copy>(basis: &[(T, u64)], exps: &[u64], identity: T, mul: &impl Fn(T, T) -> T) -> T {
    let mut acc = identity;
    for (&(b, _), &e) in basis.iter().zip(exps) {
        for _ in 0..e {
            acc = mul(acc, b);
        }
    }
    acc
}

/// `(1/|H|) Σ_h f(h)·conj(g(h))`.
pub fn class_inner_product<T>(
    elements: &[T],
    f: impl Fn(&T) -> CycloNum,
    g: impl Fn(&T) -> CycloNum,
    guard: Guard,
) -> Result<CycloNum> {
    guard.check("inner product domain", elements.len() as u64)?;
    let sum: CycloNum = elements.iter().map(|h| &f(h) * &g(h).conj()).sum();
    Ok(sum.scale(Rational::new(1, elements.len() as i128)))
}
