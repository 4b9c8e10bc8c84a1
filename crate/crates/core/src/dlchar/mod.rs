//! The induced character `χ = Ind_{(TG^{l'})^F}^{G^F} ρ̂_θ` and its sign `ε`,
//! so that `ε·χ` models `R^θ_{T,U}`; with verifiers for the dimension formula,
//! values at regular semisimple elements, irreducibility and the orbit map.

mod hill;
mod steinberg;

pub use hill::{hill_count, HillCount};
pub use steinberg::SteinbergData;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::chainring::RingElem;
use crate::cyclo::{CycloNum, Rational, RootSum};
use crate::groups::{gl_order_fq, p_prime_part, Mat, Torus, TorusPoint};
use crate::heisenberg::CanonicalRep;
use crate::tchar::{charpoly, is_separable, minimal_polynomial, psi, StabilizerCache, ThetaSpace, TorusChar};
use crate::{Error, Guard, Result};

/// `|G_1^F/T_1^F|_{p'}·q^{(r−1)#Φ^+}`.
pub fn dim_formula(torus: &Torus) -> u128 {
    let g = torus.group();
    let n = g.n() as u32;
    let q = g.q();
    let index = gl_order_fq(n, q) / torus.t1_order() as u128;
    p_prime_part(index, g.p()) * (q as u128).pow((g.r() - 1) * n * (n - 1) / 2)
}

/// `ε = e_θ(1)^r`.
pub fn epsilon(torus: &Torus) -> i64 {
    let st = SteinbergData::new(torus, &torus.identity_point());
    if torus.group().r() % 2 == 0 { 1 } else { st.e_theta() }
}

/// Left coset representatives of `(TG^{l'})^F` in `G^F`: lifted `G_1^F/T_1^F`
/// representatives times off-torus representatives of `G^1/(T^1G^{l'})`.
pub fn transversal(torus: &Torus, guard: Guard) -> Result<Vec<Mat>> {
    let g = torus.group();
    let ring = g.ring();
    let n = g.n();
    let lp = g.l_prime();
    let f = g.level_ring(1);
    let t1: Vec<Mat> = torus.point_reps(0, 1).iter().map(|t| torus.point(t).reduce_level(ring, 1)).collect();
    let mut seen = BTreeSet::new();
    let mut reps = Vec::new();
    for x in g.level_elements(1, guard)? {
        if seen.contains(&x) {
            continue;
        }
        for t in &t1 {
            seen.insert(x.mul(f, t));
        }
        reps.push(x);
    }

    let mut inner = vec![g.identity()];
    if lp > 1 {
        let low = g.level_ring(lp - 1);
        let total = low.size().pow((n * n) as u32);
        guard.check("kernel transversal", total)?;
        let split = torus.split_ring();
        let mut offs = BTreeSet::new();
        for k in 0..total {
            let x = Mat::from_index(low, n, k);
            let mut d = torus.to_diag(&x);
            for i in 0..n {
                d.set(i, i, split.zero());
            }
            offs.insert(torus.from_diag(&d).reduce_level(split, lp - 1));
        }
        inner = offs.iter().map(|y| y.mul_pi_pow(ring, 1).add(ring, &g.identity())).collect();
    }

    let mut out = Vec::with_capacity(reps.len() * inner.len());
    for x in &reps {
        for u in &inner {
            out.push(x.mul(ring, u));
        }
    }
    let expected = g.order() / torus.tg_order(0, lp) as u128;
    if out.len() as u128 != expected {
        return Err(Error::Invariant(format!("transversal has {} elements, index is {expected}", out.len())));
    }
    Ok(out)
}

/// `ε·Ind ρ̂_θ`, evaluated through a transversal.
#[derive(Clone, Debug)]
pub struct AlgebraisedDL {
    rep: CanonicalRep,
    epsilon: i64,
    transversal: Vec<Mat>,
    trans_inv: Vec<Mat>,
}

/// Multiplicities of `ψ_y` in `χ|_{(G^{r−1})^F}`.
#[derive(Clone, Debug)]
pub struct OrbitDescriptor {
    pub support: Vec<Mat>,
    /// Common multiplicity on the support, if constant.
    pub multiplicity: Option<i128>,
    pub single_orbit: bool,
    pub regular: bool,
    pub semisimple: bool,
    pub nilpotent: bool,
    /// Support equals the `G_1^F`-orbit of `β mod π`.
    pub matches_beta: bool,
}

impl OrbitDescriptor {
    pub fn passes(&self) -> bool {
        self.multiplicity.is_some() && self.single_orbit && self.regular && self.semisimple && self.matches_beta
    }
}

impl AlgebraisedDL {
    /// Requires `θ` strongly generic.
    pub fn build(space: &ThetaSpace, theta: &TorusChar, guard: Guard) -> Result<Self> {
        let mut cache = StabilizerCache::default();
        let rep = space.classify(theta, &mut cache);
        if !rep.strongly_generic {
            return Err(Error::Genericity(format!("θ = {} is not strongly generic", theta.key())));
        }
        Self::build_unchecked(space, theta, guard)
    }

    /// Skips the genericity check; at odd `r` the Heisenberg construction still requires it.
    pub fn build_unchecked(space: &ThetaSpace, theta: &TorusChar, guard: Guard) -> Result<Self> {
        let torus = space.torus();
        let rep = CanonicalRep::build(space, theta)?;
        let transversal = transversal(torus, guard)?;
        let ring = torus.group().ring();
        let trans_inv = transversal.iter().map(|x| x.inv(ring)).collect::<Result<Vec<_>>>()?;
        Ok(AlgebraisedDL { rep, epsilon: epsilon(torus), transversal, trans_inv })
    }

    pub fn rep(&self) -> &CanonicalRep {
        &self.rep
    }

    pub fn torus(&self) -> &Torus {
        self.rep.torus()
    }

    pub fn theta(&self) -> &TorusChar {
        self.rep.theta()
    }

    pub fn epsilon(&self) -> i64 {
        self.epsilon
    }

    pub fn transversal(&self) -> &[Mat] {
        &self.transversal
    }

    /// `χ(1) = [G^F : (TG^{l'})^F]·dim ρ̂_θ`.
    pub fn dim(&self) -> u128 {
        self.transversal.len() as u128 * self.rep.dim() as u128
    }

    pub fn dim_check(&self) -> bool {
        self.dim() == dim_formula(self.torus())
    }

    fn in_gamma(&self, y: &Mat) -> bool {
        let lp = self.torus().group().l_prime();
        self.torus().in_tg(y, 0, lp)
    }

    /// `χ(g)` by the induced-character rule over the transversal.
    pub fn value(&self, g: &Mat) -> Result<CycloNum> {
        let ring = self.torus().group().ring();
        let mut acc = CycloNum::zero();
        for (x, xi) in self.transversal.iter().zip(&self.trans_inv) {
            let y = xi.mul(ring, g).mul(ring, x);
            if self.in_gamma(&y) {
                acc = &acc + &self.rep.trace(&y)?;
            }
        }
        Ok(acc)
    }

    /// `ε·χ(g)`.
    pub fn virtual_value(&self, g: &Mat) -> Result<CycloNum> {
        Ok(self.value(g)?.scale(Rational::from_integer(self.epsilon as i128)))
    }

    /// `Σ_{w ∈ W(T)^F} (^wθ)(s)`.
    pub fn weyl_sum(&self, s: &TorusPoint) -> Result<CycloNum> {
        let torus = self.torus();
        let mut acc = RootSum::new();
        for w in torus.weyl_elements()? {
            acc.add(torus.pairing(&self.theta().exps, &torus.weyl_act_inv(&w, s)), 1);
        }
        Ok(acc.to_cyclo())
    }

    /// `(ε·χ(s), Σ_w (^wθ)(s))` for regular `s ∈ T_1^F` (a Teichmüller point).
    pub fn rss_values(&self, s: &TorusPoint) -> Result<(CycloNum, CycloNum)> {
        if !SteinbergData::new(self.torus(), s).is_regular() {
            return Err(Error::InvalidSpec(format!("{s:?} is not regular")));
        }
        Ok((self.virtual_value(&self.torus().point(s))?, self.weyl_sum(s)?))
    }

    pub fn rss_character_check(&self, s: &TorusPoint) -> Result<bool> {
        let (a, b) = self.rss_values(s)?;
        Ok(a == b)
    }

    /// Double coset representatives of `Γ\G^F/Γ`, `Γ = (TG^{l'})^F`, as transversal indices.
    pub fn double_cosets(&self) -> Result<Vec<usize>> {
        let torus = self.torus();
        let g = torus.group();
        let ring = g.ring();
        let gens = gamma_generators(torus);
        let coset_of = |y: &Mat| -> Result<usize> {
            self.trans_inv
                .iter()
                .position(|xi| self.in_gamma(&xi.mul(ring, y)))
                .ok_or(Error::Invariant("element outside all cosets".into()))
        };
        let mut orbit_of = vec![usize::MAX; self.transversal.len()];
        let mut reps = Vec::new();
        for start in 0..self.transversal.len() {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            orbit_of[start] = reps.len();
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for h in &gens {
                    let j = coset_of(&h.mul(ring, &self.transversal[i]))?;
                    if orbit_of[j] == usize::MAX {
                        orbit_of[j] = reps.len();
                        stack.push(j);
                    }
                }
            }
            reps.push(start);
        }
        Ok(reps)
    }

    /// `⟨χ, χ⟩_{G^F}` by the Mackey double-coset rule.
    pub fn inner_product_mackey(&self, guard: Guard) -> Result<CycloNum> {
        let torus = self.torus();
        let lp = torus.group().l_prime();
        let ring = torus.group().ring();
        let gamma = torus.tg_elements(0, lp, guard)?;
        let traces = gamma.iter().map(|y| Ok((*y, self.rep.trace(y)?))).collect::<Result<BTreeMap<Mat, CycloNum>>>()?;
        let mut total = CycloNum::zero();
        for i in self.double_cosets()? {
            let (x, xi) = (&self.transversal[i], &self.trans_inv[i]);
            let mut acc = CycloNum::zero();
            let mut size = 0i128;
            for (y, ty) in &traces {
                let z = xi.mul(ring, y).mul(ring, x);
                if let Some(tz) = traces.get(&z) {
                    acc = &acc + &(ty * &tz.conj());
                    size += 1;
                }
            }
            total = &total + &acc.scale(Rational::new(1, size));
        }
        Ok(total)
    }

    /// `⟨χ, χ⟩_{G^F}` by summation over the whole group.
    pub fn inner_product_full(&self, guard: Guard) -> Result<CycloNum> {
        let g = self.torus().group();
        let mut acc = CycloNum::zero();
        let mut count = 0i128;
        for x in g.elements(guard)? {
            acc = &acc + &self.value(&x)?.abs2();
            count += 1;
        }
        Ok(acc.scale(Rational::new(1, count)))
    }

    /// `χ(1 + π^{r−1}x)` for all `x ∈ M_n(F_q)` in index order.
    pub fn top_level_values(&self, guard: Guard) -> Result<Vec<CycloNum>> {
        let g = self.torus().group();
        let ring = g.ring();
        let f = g.level_ring(1);
        let total = f.size().pow((g.n() * g.n()) as u32);
        guard.check("top-level Lie algebra", total)?;
        (0..total)
            .map(|k| {
                let x = Mat::from_index(f, g.n(), k);
                self.value(&x.mul_pi_pow(ring, g.r() - 1).add(ring, &g.identity()))
            })
            .collect()
    }

    /// `Ω(χ)`: the `ψ_y` occurring in `χ|_{(G^{r−1})^F}`, with `ψ_y(1 + π^{r−1}x) = ψ(Tr(yx))`.
    pub fn omega(&self, space: &ThetaSpace, guard: Guard) -> Result<OrbitDescriptor> {
        let g = self.torus().group();
        let f = g.level_ring(1);
        let n = g.n();
        let values = self.top_level_values(guard)?;
        let total = values.len() as u64;
        let xs: Vec<Mat> = (0..total).map(|k| Mat::from_index(f, n, k)).collect();
        let mut support = Vec::new();
        let mut mults = BTreeSet::new();
        for y in &xs {
            let mut acc = CycloNum::zero();
            for (x, v) in xs.iter().zip(&values) {
                if v.is_zero() {
                    continue;
                }
                let ph = psi(f, y.mul(f, x).trace(f)).inv();
                acc = &acc + &(v * &ph.to_cyclo());
            }
            let m = acc.scale(Rational::new(1, total as i128));
            if !m.is_zero() {
                let k = m.as_integer().map_err(|_| Error::Invariant(format!("non-integral multiplicity {m}")))?;
                mults.insert(k);
                support.push(*y);
            }
        }
        let multiplicity = if mults.len() == 1 { mults.iter().next().copied() } else { None };
        let first = *support.first().ok_or(Error::Invariant("empty support".into()))?;
        let orbit = conjugation_orbit(g.level_elements(1, guard)?, f, &first);
        let support_set: BTreeSet<Mat> = support.iter().copied().collect();
        let beta = space.beta_residue(self.theta());
        let beta_orbit = conjugation_orbit(g.level_elements(1, guard)?, f, &beta);
        let minpoly = minimal_polynomial(f, &first);
        Ok(OrbitDescriptor {
            single_orbit: orbit == support_set,
            regular: is_separable(f, &charpoly(f, &first)),
            semisimple: is_separable(f, &minpoly),
            nilpotent: first.pow(f, n as u64).is_zero(),
            matches_beta: beta_orbit == support_set,
            multiplicity,
            support,
        })
    }
}

/// `{h y h^{-1}}` over the given `h ∈ GL_n(F_q)`.
pub fn conjugation_orbit(elems: impl Iterator<Item = Mat>, f: &crate::chainring::ChainRing, y: &Mat) -> BTreeSet<Mat> {
    let mut out = BTreeSet::new();
    for h in elems {
        let hi = h.inv(f).expect("invertible");
        out.insert(y.conj_by(f, &h, &hi));
    }
    out
}

/// Torus generators and `1 + π^{l'} c E_ij` for `c` over additive generators of `O`.
fn gamma_generators(torus: &Torus) -> Vec<Mat> {
    let g = torus.group();
    let ring = g.ring();
    let n = g.n();
    let lp = g.l_prime();
    let e = ring.spec().e as usize;
    let mut out: Vec<Mat> = torus.generators().iter().map(|t| torus.point(t)).collect();
    for k in lp..g.r() {
        for m in 0..e {
            let mut c = [0u32; 8];
            c[m] = 1;
            let c = ring.mul_pi_pow(RingElem(c), k);
            for i in 0..n {
                for j in 0..n {
                    out.push(Mat::unit(n, i, j, c).add(ring, &g.identity()));
                }
            }
        }
    }
    out
}

/// Characters `χ` keyed by the exact values on a list of elements.
pub(crate) fn value_table(dl: &AlgebraisedDL, elems: &[Mat]) -> Result<Vec<CycloNum>> {
    elems.iter().map(|x| dl.value(x)).collect()
}
