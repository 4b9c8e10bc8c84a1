//! Characteristic polynomials and separability over the residue field.

use alloc::vec;
use alloc::vec::Vec;

use crate::chainring::{ChainRing, RingElem};
use crate::groups::Mat;

/// Monic characteristic polynomial `det(x − m)`, coefficients lowest degree first.
pub fn charpoly(ring: &ChainRing, m: &Mat) -> Vec<RingElem> {
    let g = |i, j| m.get(i, j);
    let one = ring.one();
    match m.n() {
        1 => vec![ring.neg(g(0, 0)), one],
        2 => vec![m.det(ring), ring.neg(m.trace(ring)), one],
        _ => {
            let minor = |a: usize, b: usize| ring.sub(ring.mul(g(a, a), g(b, b)), ring.mul(g(a, b), g(b, a)));
            let c2 = ring.add(ring.add(minor(0, 1), minor(0, 2)), minor(1, 2));
            vec![ring.neg(m.det(ring)), c2, ring.neg(m.trace(ring)), one]
        }
    }
}

fn trim(p: &mut Vec<RingElem>) {
    while p.last().is_some_and(|c| c.0.iter().all(|&x| x == 0)) {
        p.pop();
    }
}

fn rem(field: &ChainRing, a: &[RingElem], b: &[RingElem]) -> Vec<RingElem> {
    let mut a = a.to_vec();
    let lead_inv = field.inv(*b.last().expect("nonzero divisor")).expect("field");
    while a.len() >= b.len() {
        let c = field.mul(*a.last().unwrap(), lead_inv);
        let shift = a.len() - b.len();
        for (k, &bk) in b.iter().enumerate() {
            a[shift + k] = field.sub(a[shift + k], field.mul(c, bk));
        }
        a.pop();
        trim(&mut a);
    }
    a
}

/// `gcd(f, f') = 1` over the field `ring` (level one).
pub fn is_separable(field: &ChainRing, f: &[RingElem]) -> bool {
    let mut a = f.to_vec();
    trim(&mut a);
    let mut b: Vec<RingElem> = a.iter().enumerate().skip(1).map(|(i, &c)| field.mul(field.from_int(i as i64), c)).collect();
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(field, &a, &b);
        a = b;
        b = r;
    }
    a.len() == 1
}

/// Solves `Σ c_i cols[i] = rhs` over the field `field`.
pub fn solve_field(field: &ChainRing, cols: &[Vec<RingElem>], rhs: &[RingElem]) -> Option<Vec<RingElem>> {
    let k = cols.len();
    let rows = rhs.len();
    let zero = field.zero();
    let mut m: Vec<Vec<RingElem>> = (0..rows).map(|i| cols.iter().map(|c| c[i]).chain(core::iter::once(rhs[i])).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..k {
        let Some(pr) = (row..rows).find(|&r| !field.is_zero(m[r][col])) else { continue };
        m.swap(row, pr);
        let inv = field.inv(m[row][col]).ok()?;
        for c in col..=k {
            m[row][c] = field.mul(m[row][c], inv);
        }
        for r in 0..rows {
            if r != row && !field.is_zero(m[r][col]) {
                let f = m[r][col];
                for c in col..=k {
                    let t = field.mul(f, m[row][c]);
                    m[r][c] = field.sub(m[r][c], t);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !field.is_zero(r[k])) {
        return None;
    }
    let mut out = vec![zero; k];
    for (i, &c) in pivots.iter().enumerate() {
        out[c] = m[i][k];
    }
    Some(out)
}

/// Monic minimal polynomial over the field `field`, lowest degree first.
pub fn minimal_polynomial(field: &ChainRing, m: &Mat) -> Vec<RingElem> {
    let n = m.n();
    let flat = |x: &Mat| (0..n * n).map(|k| x.get(k / n, k % n)).collect::<Vec<_>>();
    let mut powers = vec![flat(&Mat::identity(field, n))];
    let mut cur = Mat::identity(field, n);
    loop {
        cur = cur.mul(field, m);
        let v = flat(&cur);
        if let Some(c) = solve_field(field, &powers, &v) {
            let mut poly: Vec<RingElem> = c.iter().map(|&x| field.neg(x)).collect();
            poly.push(field.one());
            return poly;
        }
        powers.push(v);
    }
}
