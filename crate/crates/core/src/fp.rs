//! Small dense linear algebra over `F_p`.

use alloc::vec;
use alloc::vec::Vec;

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<u32>], p: u32) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i][c] % p != 0) else { continue };
        m.swap(r, piv);
        let inv = inv_mod(m[r][c], p) as u64;
        for x in m[r].iter_mut() {
            *x = (*x as u64 * inv % p as u64) as u32;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c] as u64;
                for j in 0..cols {
                    let sub = f * m[r][j] as u64 % p as u64;
                    m[i][j] = ((m[i][j] as u64 + p as u64 - sub) % p as u64) as u32;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<u32>], p: u32) -> usize {
    let mut w = m.to_vec();
    rref(&mut w, p).len()
}

/// Some `x` with `Σ_j x_j·cols[j] = b`, where `cols` are column vectors.
pub fn solve_columns(cols: &[Vec<u32>], b: &[u32], p: u32) -> Option<Vec<u32>> {
    let n = cols.len();
    let m = b.len();
    let mut aug: Vec<Vec<u32>> = (0..m)
        .map(|i| {
            let mut row: Vec<u32> = cols.iter().map(|c| c[i] % p).collect();
            row.push(b[i] % p);
            row
        })
        .collect();
    let pivots = rref(&mut aug, p);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![0u32; n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][n];
    }
    Some(x)
}

/// Basis of the null space `{x : M x = 0}`.
pub fn kernel(m: &[Vec<u32>], p: u32) -> Vec<Vec<u32>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut w = m.to_vec();
    let pivots = rref(&mut w, p);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u32; cols];
        v[free] = 1;
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = (p - w[r][free] % p) % p;
        }
        out.push(v);
    }
    out
}

/// `x^T P y` modulo `p`.
pub fn bilinear(pm: &[Vec<u32>], x: &[u32], y: &[u32], p: u32) -> u32 {
    let mut acc = 0u64;
    for (i, row) in pm.iter().enumerate() {
        if x[i] == 0 {
            continue;
        }
        for (j, &v) in row.iter().enumerate() {
            acc += x[i] as u64 * v as u64 % p as u64 * y[j] as u64;
        }
    }
    (acc % p as u64) as u32
}
