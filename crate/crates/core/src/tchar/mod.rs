//! Characters of `T^F`, their dual elements `β ∈ Lie(T)(O_{l'})`, and the
//! genericity conditions: regularity (two ways), general position and the
//! stabiliser condition.
//!
//! A [`ThetaSpace`] precomputes, once per torus, every group-theoretic table
//! the conditions need (torus components of root-lattice points, norm images,
//! Weyl actions, conjugation tables). Classifying a character then only
//! evaluates pairings.

mod poly;

pub use poly::{charpoly, is_separable, minimal_polynomial, solve_field};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::chainring::{ChainRing, RingElem};
use crate::cyclo::{CycloNum, Phase};
use crate::groups::{Mat, Torus, TorusPoint, WeylElement};
use crate::{Error, Guard, Result};

/// A character of `T^F`, as exponents against [`Torus::generators`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusChar {
    pub exps: Vec<u64>,
}

impl TorusChar {
    pub fn new(exps: Vec<u64>) -> Self {
        TorusChar { exps }
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn key(&self) -> String {
        let parts: Vec<String> = self.exps.iter().map(|e| format!("{e}")).collect();
        format!("[{}]", parts.join(","))
    }
}

/// `ψ` on `O_k`: `ψ(x) = ζ_{p^k}^{psi_exponent(x)}`; on `F_q` this is `ζ_p^{Tr(x)}`.
pub fn psi(ring: &ChainRing, x: RingElem) -> Phase {
    let pk = (ring.p() as u64).pow(ring.level());
    Phase::new(ring.psi_exponent(x) as i64, pk)
}

/// Flags of the genericity conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericityReport {
    pub regular_normmap: bool,
    pub regular_beta: bool,
    pub general_position: bool,
    pub stabilizer_condition: bool,
    pub stabilizer_bruteforce: bool,
    pub strongly_generic: bool,
    /// A root on whose norm image `θ` is trivial.
    pub failing_root: Option<(usize, usize)>,
    /// A nontrivial Weyl element fixing `θ`.
    pub fixing_weyl: Option<Vec<usize>>,
}

impl GenericityReport {
    /// `regular ⟺ generic ⟺ strongly generic`, the two regularity tests and
    /// both stabiliser computations agree, and regularity implies general position.
    pub fn consistent(&self) -> bool {
        let reg = self.regular_normmap;
        reg == self.regular_beta
            && reg == self.stabilizer_condition
            && reg == self.stabilizer_bruteforce
            && reg == (reg && self.general_position)
            && reg == self.strongly_generic
    }
}

/// Caches keyed by the data the stabiliser conditions depend on.
#[derive(Default, Debug)]
pub struct StabilizerCache {
    by_beta: BTreeMap<Mat, u64>,
    by_restriction: BTreeMap<Vec<Phase>, u64>,
}

/// Per-torus tables for evaluating and classifying characters of `T^F`.
#[derive(Clone, Debug)]
pub struct ThetaSpace {
    torus: Torus,
    l: u32,
    lp: u32,
    lie_ring: ChainRing,
    lie_elems: Vec<RingElem>,
    /// `lie_logs[i*n+j][c]` = log of `t_component(1 + π^l c E_ij)`.
    lie_logs: Vec<Vec<Vec<u64>>>,
    /// Indices into `lie_elems` of additive generators of `O_{l'}`.
    add_gens: Vec<usize>,
    norm_logs: Vec<((usize, usize), Vec<Vec<u64>>)>,
    weyl: Vec<WeylElement>,
    /// For each Weyl element, logs of `w^{-1} g_k w` for the generators `g_k`.
    weyl_gen_logs: Vec<Vec<Vec<u64>>>,
    /// `GL_n(O_{l'})`, as naive lifts.
    gl_lp: Vec<Mat>,
    /// Logs of `t_component(g x_m g^{-1})` for `g ∈ gl_lp` and `x_m` generators of `G^l`.
    stab_logs: Vec<Vec<Vec<u64>>>,
    /// Logs of `t_component(x_m)`.
    gl_gen_logs: Vec<Vec<u64>>,
    /// `β` of each basis character.
    beta_basis: Vec<Mat>,
}

impl ThetaSpace {
    pub fn new(torus: &Torus, guard: Guard) -> Result<Self> {
        let g = torus.group();
        let r = g.r();
        if r < 2 {
            return Err(Error::InvalidSpec("character genericity needs r ≥ 2".into()));
        }
        let n = g.n();
        let (l, lp) = (g.l(), g.l_prime());
        let ring = g.ring();
        let lie_ring = g.level_ring(lp).clone();
        let lie_elems: Vec<RingElem> = lie_ring.elements(guard)?.collect();
        let e = ring.spec().e;
        let mut add_gens = Vec::new();
        for k in 0..lp {
            for m in 0..e {
                let mut c = [0u32; 8];
                c[m as usize] = 1;
                let x = lie_ring.mul_pi_pow(RingElem(c), k);
                add_gens.push(lie_ring.index(x) as usize);
            }
        }

        let unit = |i: usize, j: usize, c: RingElem| g.identity().add(ring, &Mat::unit(n, i, j, ring.mul_pi_pow(c, l)));
        let mut lie_logs = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut row = Vec::with_capacity(lie_elems.len());
                for &c in &lie_elems {
                    row.push(torus.log(&torus.t_component(&unit(i, j, c))?));
                }
                lie_logs.push(row);
            }
        }

        let mut norm_logs = Vec::new();
        for alpha in torus.roots() {
            let pts = torus.norm_image(alpha)?;
            norm_logs.push((alpha, pts.iter().map(|p| torus.log(p)).collect()));
        }

        let weyl = torus.weyl_elements()?;
        let gens = torus.generators();
        let weyl_gen_logs = weyl.iter().map(|w| gens.iter().map(|t| torus.log(&torus.weyl_act_inv(w, t))).collect()).collect();

        let gl_lp: Vec<Mat> = g.level_elements(lp, guard)?.collect();
        let mut gl_gens = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for &k in &add_gens {
                    gl_gens.push(unit(i, j, lie_elems[k]));
                }
            }
        }
        let gl_gen_logs = gl_gens.iter().map(|x| Ok(torus.log(&torus.t_component(x)?))).collect::<Result<Vec<_>>>()?;
        guard.check("stabiliser table", (gl_lp.len() * gl_gens.len()) as u64)?;
        let mut stab_logs = Vec::with_capacity(gl_lp.len());
        for h in &gl_lp {
            let hi = h.inv(ring)?;
            let row = gl_gens
                .iter()
                .map(|x| Ok(torus.log(&torus.t_component(&x.conj_by(ring, h, &hi))?)))
                .collect::<Result<Vec<_>>>()?;
            stab_logs.push(row);
        }

        let mut space = ThetaSpace {
            torus: torus.clone(),
            l,
            lp,
            lie_ring,
            lie_elems,
            lie_logs,
            add_gens,
            norm_logs,
            weyl,
            weyl_gen_logs,
            gl_lp,
            stab_logs,
            gl_gen_logs,
            beta_basis: Vec::new(),
        };
        let k = torus.generator_orders().len();
        let mut basis = Vec::with_capacity(k);
        for idx in 0..k {
            let mut exps = vec![0u64; k];
            exps[idx] = 1;
            basis.push(space.beta_direct(&TorusChar::new(exps))?);
        }
        space.beta_basis = basis;
        Ok(space)
    }

    pub fn torus(&self) -> &Torus {
        &self.torus
    }

    /// `O_{l'}`, the coefficient ring of `β`.
    pub fn lie_ring(&self) -> &ChainRing {
        &self.lie_ring
    }

    pub fn weyl(&self) -> &[WeylElement] {
        &self.weyl
    }

    /// Number of characters, `|T^F|`.
    pub fn count(&self) -> u64 {
        self.torus.order()
    }

    /// All characters in mixed-radix order of their exponents.
    pub fn characters(&self) -> impl Iterator<Item = TorusChar> + '_ {
        let orders = self.torus.generator_orders();
        (0..self.count()).map(move |mut code| {
            let exps = orders
                .iter()
                .map(|&d| {
                    let x = code % d;
                    code /= d;
                    x
                })
                .collect();
            TorusChar::new(exps)
        })
    }

    fn pair_logs(&self, theta: &TorusChar, x: &[u64]) -> Phase {
        let orders = self.torus.generator_orders();
        let mut acc = Phase::ONE;
        for ((&c, &v), &d) in theta.exps.iter().zip(x).zip(&orders) {
            acc = acc.mul(Phase::new(((c % d) * (v % d) % d) as i64, d));
        }
        acc
    }

    pub fn value(&self, theta: &TorusChar, t: &TorusPoint) -> Phase {
        self.pair_logs(theta, &self.torus.log(t))
    }

    pub fn value_cyclo(&self, theta: &TorusChar, t: &TorusPoint) -> CycloNum {
        self.value(theta, t).to_cyclo()
    }

    /// `θ̃(g) = θ(t_component(g))` on `(TG^l)^F`.
    pub fn theta_tilde(&self, theta: &TorusChar, g: &Mat) -> Result<Phase> {
        Ok(self.value(theta, &self.torus.t_component(g)?))
    }

    /// `β` by matching `c ↦ θ̃(1 + π^l c E_ij)` against `c ↦ ψ(c·b)` for every `b ∈ O_{l'}`.
    pub fn beta_direct(&self, theta: &TorusChar) -> Result<Mat> {
        let n = self.torus.n();
        let o = &self.lie_ring;
        let mut beta = Mat::zero(n);
        for i in 0..n {
            for j in 0..n {
                let vals: Vec<Phase> = self.add_gens.iter().map(|&k| self.pair_logs(theta, &self.lie_logs[i * n + j][k])).collect();
                let found = self.lie_elems.iter().find(|&&b| {
                    self.add_gens.iter().zip(&vals).all(|(&k, v)| psi(o, o.mul(self.lie_elems[k], b)) == *v)
                });
                match found {
                    // Tr(β · c E_ij) = c β_ji
                    Some(&b) => beta.set(j, i, b),
                    None => return Err(Error::Invariant(format!("no dual element for θ = {} at ({i},{j})", theta.key()))),
                }
            }
        }
        Ok(beta)
    }

    /// `β` through linearity in `θ`, from the basis characters.
    pub fn beta(&self, theta: &TorusChar) -> Mat {
        let o = &self.lie_ring;
        let n = self.torus.n();
        let mut beta = Mat::zero(n);
        for (k, &c) in theta.exps.iter().enumerate() {
            if c != 0 {
                beta = beta.add(o, &self.beta_basis[k].scale(o, o.from_int(c as i64)));
            }
        }
        beta
    }

    /// Checks `θ̃(1 + π^l x) = ψ(Tr(β x))` for all `x ∈ M_n(O_{l'})`.
    pub fn verify_beta(&self, theta: &TorusChar, beta: &Mat, guard: Guard) -> Result<bool> {
        let g = self.torus.group();
        let o = &self.lie_ring;
        let ring = g.ring();
        for x in g.lie_elements(g.r() - self.lp, guard)? {
            // x ranges over π^{l} M_n(O_r) ≅ M_n(O_{l'}); recover the O_{l'} matrix
            let small = x.div_pi_pow(ring, self.l).reduce_level(ring, self.lp);
            let lhs = self.theta_tilde(theta, &x.add(ring, &g.identity()))?;
            let rhs = psi(o, beta.mul(o, &small).trace(o));
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `β mod π` as a matrix over `F_q`.
    pub fn beta_residue(&self, theta: &TorusChar) -> Mat {
        self.beta(theta).reduce_level(&self.lie_ring, 1)
    }

    /// `θ` non-trivial on every norm image `N(𝒯^α)`; returns a failing root otherwise.
    pub fn regular_normmap(&self, theta: &TorusChar) -> core::result::Result<(), (usize, usize)> {
        for (alpha, logs) in &self.norm_logs {
            if logs.iter().all(|x| self.pair_logs(theta, x).is_one()) {
                return Err(*alpha);
            }
        }
        Ok(())
    }

    pub fn is_regular_normmap(&self, theta: &TorusChar) -> bool {
        self.regular_normmap(theta).is_ok()
    }

    /// `β mod π` has pairwise distinct eigenvalues over `F̄_q`.
    pub fn is_regular_beta(&self, theta: &TorusChar) -> bool {
        let f = self.torus.group().level_ring(1);
        is_separable(f, &charpoly(f, &self.beta_residue(theta)))
    }

    /// `^wθ = θ` for no nontrivial `w ∈ W(T)^F`; returns a fixing permutation otherwise.
    pub fn general_position(&self, theta: &TorusChar) -> core::result::Result<(), Vec<usize>> {
        let gens = self.torus.generators();
        let n = self.torus.n();
        for (w, logs) in self.weyl.iter().zip(&self.weyl_gen_logs) {
            if (0..n).all(|k| w.perm[k] == k) {
                continue;
            }
            let fixed = gens.iter().zip(logs).all(|(g, x)| self.pair_logs(theta, x) == self.value(theta, g));
            if fixed {
                return Err(w.perm[..n].to_vec());
            }
        }
        Ok(())
    }

    pub fn is_general_position(&self, theta: &TorusChar) -> bool {
        self.general_position(theta).is_ok()
    }

    /// `^wθ(t) = θ(w^{-1} t w)`.
    pub fn w_twist(&self, w: usize, theta: &TorusChar) -> TorusChar {
        let orders = self.torus.generator_orders();
        let exps = self.weyl_gen_logs[w]
            .iter()
            .zip(&orders)
            .map(|(x, &d)| {
                let ph = self.pair_logs(theta, x);
                ph.num() * (d / ph.order())
            })
            .collect();
        TorusChar::new(exps)
    }

    /// `|C_{G_{l'}^F}(β)|` by enumeration.
    pub fn centralizer_order(&self, beta: &Mat) -> u64 {
        let o = &self.lie_ring;
        self.gl_lp.iter().filter(|h| h.mul(o, beta) == beta.mul(o, h)).count() as u64
    }

    /// `C_{G_{l'}^F}(β) = T_{l'}^F` (the torus is always contained in the centraliser).
    pub fn stabilizer_condition(&self, theta: &TorusChar, cache: &mut StabilizerCache) -> bool {
        let beta = self.beta(theta);
        let order = *cache.by_beta.entry(beta).or_insert_with(|| self.centralizer_order(&beta));
        order == self.torus.level_order(self.lp)
    }

    /// `|Stab_{G^F}(θ̃|_{G^l})| / |G^{l'}|`, by testing `θ̃(h x h^{-1}) = θ̃(x)` on generators of `G^l`.
    pub fn stabilizer_count(&self, theta: &TorusChar) -> u64 {
        let base: Vec<Phase> = self.gl_gen_logs.iter().map(|x| self.pair_logs(theta, x)).collect();
        self.stab_logs
            .iter()
            .filter(|row| row.iter().zip(&base).all(|(x, v)| self.pair_logs(theta, x) == *v))
            .count() as u64
    }

    pub fn stabilizer_bruteforce(&self, theta: &TorusChar, cache: &mut StabilizerCache) -> bool {
        let key: Vec<Phase> = self.gl_gen_logs.iter().map(|x| self.pair_logs(theta, x)).collect();
        let count = match cache.by_restriction.get(&key) {
            Some(&c) => c,
            None => {
                let c = self.stabilizer_count(theta);
                cache.by_restriction.insert(key, c);
                c
            }
        };
        count == self.torus.level_order(self.lp)
    }

    pub fn classify(&self, theta: &TorusChar, cache: &mut StabilizerCache) -> GenericityReport {
        let normmap = self.regular_normmap(theta);
        let gp = self.general_position(theta);
        let regular_normmap = normmap.is_ok();
        let general_position = gp.is_ok();
        let stabilizer_condition = self.stabilizer_condition(theta, cache);
        GenericityReport {
            regular_normmap,
            regular_beta: self.is_regular_beta(theta),
            general_position,
            stabilizer_condition,
            stabilizer_bruteforce: self.stabilizer_bruteforce(theta, cache),
            strongly_generic: regular_normmap && general_position && stabilizer_condition,
            failing_root: normmap.err(),
            fixing_weyl: gp.err(),
        }
    }
}

#[cfg(test)]
mod tests;
