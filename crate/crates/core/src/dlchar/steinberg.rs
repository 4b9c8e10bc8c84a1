use alloc::vec::Vec;

use crate::groups::{Torus, TorusPoint};

/// Root and rank data of a semisimple `s ∈ T_1^F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinbergData {
    /// Roots `(i, j)` with `α(s) = 1`.
    pub phi_s: Vec<(usize, usize)>,
    pub phi_s_pos: usize,
    pub rk_g: usize,
    pub rk_t: usize,
    /// `rk_q C_{G_1}(s)°`: multiplicities summed over Frobenius orbits of eigenvalues.
    pub rk_c: usize,
    pub q: u64,
}

impl SteinbergData {
    pub fn new(torus: &Torus, s: &TorusPoint) -> Self {
        let split = torus.split_ring();
        let d = torus.to_diag(&torus.point(s));
        let n = torus.n();
        let eig: Vec<_> = (0..n).map(|i| split.reduce_level(d.get(i, i), 1)).collect();
        let phi_s: Vec<(usize, usize)> = torus.roots().into_iter().filter(|&(i, j)| eig[i] == eig[j]).collect();
        let phi_s_pos = phi_s.iter().filter(|(i, j)| i < j).count();

        let mut distinct: Vec<_> = Vec::new();
        for &x in &eig {
            if !distinct.contains(&x) {
                distinct.push(x);
            }
        }
        let mult = |x| eig.iter().filter(|&&y| y == x).count();
        let mut seen = Vec::new();
        let mut rk_c = 0;
        for &x in &distinct {
            if seen.contains(&x) {
                continue;
            }
            rk_c += mult(x);
            let mut y = x;
            loop {
                seen.push(y);
                y = split.reduce_level(split.frobenius_q(y), 1);
                if y == x {
                    break;
                }
            }
        }
        SteinbergData { phi_s, phi_s_pos, rk_g: n, rk_t: torus.block_count(), rk_c, q: torus.group().q() }
    }

    pub fn is_regular(&self) -> bool {
        self.phi_s.is_empty()
    }

    /// `(−1)^{rk_q(G_1) + rk_q(C°(s))}`.
    pub fn st_sign(&self) -> i64 {
        if (self.rk_g + self.rk_c) % 2 == 0 { 1 } else { -1 }
    }

    /// `St_{G_1}(s) = (−1)^{rk_q(G_1) + rk_q(C°(s))} q^{#Φ_s^+}`.
    pub fn st_value(&self) -> i128 {
        self.st_sign() as i128 * (self.q as i128).pow(self.phi_s_pos as u32)
    }

    /// `e_θ(s) = (−1)^{rk_q(T_1) + rk_q(C°(s))}`.
    pub fn e_theta(&self) -> i64 {
        if (self.rk_t + self.rk_c) % 2 == 0 { 1 } else { -1 }
    }
}
