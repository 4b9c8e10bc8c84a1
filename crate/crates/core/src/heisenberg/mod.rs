//! The Heisenberg lift `ρ_θ` of `(T^1G^{l'})^F` and its extension `ρ̂_θ` to
//! `(TG^{l'})^F`.
//!
//! `ρ_θ` is induced from a linear character of the preimage `K_L` of a
//! Lagrangian `L ⊂ V = (T^1G^{l'})^F/(T^1G^l)^F`, so every `ρ_θ(h)` is a
//! monomial matrix. The Teichmüller complement `A ≅ T_1^F` acts through
//! intertwiners `M_a`, normalised to `M_a^{ord a} = 1`, and the result is then
//! twisted by the character `λ` that makes its traces on `A` match the
//! Steinberg-sign formula.

mod cmat;

pub use cmat::{inverse, CMat, Monomial};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::cyclo::{CycloNum, Phase, Rational, RootSum};
use crate::dlchar::SteinbergData;
use crate::fp;
use crate::groups::{Mat, Torus, TorusPoint};
use crate::tchar::{ThetaSpace, TorusChar};
use crate::{Error, Guard, Result};

/// `V = (T^1G^{l'})^F / (T^1G^l)^F` with the commutator pairing of `θ̃`.
#[derive(Clone, Debug)]
pub struct SymplecticSpace {
    torus: Torus,
    theta: TorusChar,
    p: u32,
    /// Basis vectors in the ambient `F_p^{e n²}` coordinates of off-torus matrices.
    basis_vecs: Vec<Vec<u32>>,
    basis_lifts: Vec<Mat>,
    pairing: Vec<Vec<u32>>,
}

impl SymplecticSpace {
    /// Needs `r` odd and `θ` satisfying the stabiliser condition.
    pub fn build(space: &ThetaSpace, theta: &TorusChar) -> Result<Self> {
        let torus = space.torus();
        let g = torus.group();
        let r = g.r();
        if r % 2 == 0 || r < 3 {
            return Err(Error::InvalidSpec(format!("Heisenberg lift needs odd r ≥ 3, got {r}")));
        }
        let mut cache = crate::tchar::StabilizerCache::default();
        if !space.stabilizer_condition(theta, &mut cache) {
            return Err(Error::Genericity(format!("θ = {} fails the stabiliser condition", theta.key())));
        }
        let ring = g.ring();
        let n = g.n();
        let e = ring.spec().e as usize;
        let p = g.p();
        let lp = g.l_prime();

        let mut basis_vecs: Vec<Vec<u32>> = Vec::new();
        let mut basis_lifts = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for m in 0..e {
                    let mut c = [0u32; 8];
                    c[m] = 1;
                    let u = off_part(torus, &Mat::unit(n, i, j, crate::chainring::RingElem(c)));
                    let v = flatten(&u, n, e, p);
                    let mut trial = basis_vecs.clone();
                    trial.push(v.clone());
                    if fp::rank(&trial, p) == trial.len() {
                        basis_vecs.push(v);
                        basis_lifts.push(u.mul_pi_pow(ring, lp).add(ring, &g.identity()));
                    }
                }
            }
        }
        let expected = e * (n * n - n);
        if basis_vecs.len() != expected {
            return Err(Error::Invariant(format!("dim V = {}, expected {expected}", basis_vecs.len())));
        }

        let dim = basis_vecs.len();
        let mut pairing = vec![vec![0u32; dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                let c = g.commutator(&basis_lifts[a], &basis_lifts[b])?;
                let ph = torus.pairing(&theta.exps, &torus.t_component(&c)?);
                if p as u64 % ph.order() != 0 {
                    return Err(Error::Invariant(format!("commutator value of order {}", ph.order())));
                }
                pairing[a][b] = (ph.num() * (p as u64 / ph.order())) as u32;
            }
        }
        let s = SymplecticSpace { torus: torus.clone(), theta: theta.clone(), p, basis_vecs, basis_lifts, pairing };
        for a in 0..dim {
            for b in 0..dim {
                if (s.pairing[a][b] + s.pairing[b][a]) % p != 0 || s.pairing[a][a] != 0 {
                    return Err(Error::Invariant("commutator pairing is not alternating".into()));
                }
            }
        }
        if fp::rank(&s.pairing, p) != dim {
            return Err(Error::Genericity(format!("degenerate pairing for θ = {}", theta.key())));
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.basis_vecs.len()
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn torus(&self) -> &Torus {
        &self.torus
    }

    pub fn theta(&self) -> &TorusChar {
        &self.theta
    }

    pub fn pairing(&self) -> &[Vec<u32>] {
        &self.pairing
    }

    pub fn basis_lifts(&self) -> &[Mat] {
        &self.basis_lifts
    }

    pub fn form(&self, x: &[u32], y: &[u32]) -> u32 {
        fp::bilinear(&self.pairing, x, y, self.p)
    }

    /// All vectors of `V` in mixed-radix order.
    pub fn vectors(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        let dim = self.dim();
        let p = self.p;
        (0..(p as u64).pow(dim as u32)).map(move |mut k| {
            (0..dim)
                .map(|_| {
                    let d = (k % p as u64) as u32;
                    k /= p as u64;
                    d
                })
                .collect()
        })
    }

    /// `Π_i h_i^{c_i}` in basis order.
    pub fn lift(&self, c: &[u32]) -> Mat {
        let g = self.torus.group();
        let mut acc = g.identity();
        for (h, &k) in self.basis_lifts.iter().zip(c) {
            if k != 0 {
                acc = g.mul(&acc, &h.pow(g.ring(), k as u64));
            }
        }
        acc
    }

    /// Image of `h ∈ (T^1G^{l'})^F` in `V`, in basis coordinates.
    pub fn coords(&self, h: &Mat) -> Result<Vec<u32>> {
        let torus = &self.torus;
        let split = torus.split_ring();
        let g = torus.group();
        let (n, lp) = (g.n(), g.l_prime());
        let e = g.ring().spec().e as usize;
        let d = torus.to_diag(h);
        let mut y = Mat::zero(n);
        for i in 0..n {
            let inv = split.inv(d.get(i, i)).map_err(|_| Error::NotMember("(T^1G^{l'})^F"))?;
            for j in 0..n {
                if i != j {
                    y.set(i, j, split.mul(inv, d.get(i, j)));
                }
            }
        }
        if !y.is_zero() && y.valuation(split) < lp {
            return Err(Error::NotMember("(T^1G^{l'})^F"));
        }
        let z = y.div_pi_pow(split, lp).reduce_level(split, 1);
        let x = torus.from_diag(&z).reduce_level(split, 1);
        let v = flatten(&x, n, e, self.p);
        fp::solve_columns(&self.basis_vecs, &v, self.p).ok_or(Error::Invariant("off-torus vector outside V".into()))
    }

    /// A Lagrangian: the greedy isotropic completion over vectors in mixed-radix order.
    pub fn greedy_lagrangian(&self) -> Vec<Vec<u32>> {
        let half = self.dim() / 2;
        let mut lag: Vec<Vec<u32>> = Vec::new();
        for v in self.vectors().skip(1) {
            if lag.len() == half {
                break;
            }
            if lag.iter().any(|w| self.form(&v, w) != 0) {
                continue;
            }
            let mut trial = lag.clone();
            trial.push(v.clone());
            if fp::rank(&trial, self.p) == trial.len() {
                lag.push(v);
            }
        }
        lag
    }

    pub fn is_lagrangian(&self, lag: &[Vec<u32>]) -> bool {
        lag.len() * 2 == self.dim()
            && fp::rank(lag, self.p) == lag.len()
            && lag.iter().all(|x| lag.iter().all(|y| self.form(x, y) == 0))
    }
}

/// `Q^{-1} offdiag(Q x Q^{-1}) Q mod π`.
fn off_part(torus: &Torus, x: &Mat) -> Mat {
    let split = torus.split_ring();
    let mut d = torus.to_diag(x);
    for i in 0..d.n() {
        d.set(i, i, split.zero());
    }
    torus.from_diag(&d).reduce_level(split, 1)
}

fn flatten(x: &Mat, n: usize, e: usize, p: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(n * n * e);
    for i in 0..n {
        for j in 0..n {
            let c = x.get(i, j).0;
            for &k in &c[..e] {
                v.push(k % p);
            }
        }
    }
    v
}

/// `ρ_θ = Ind_{K_L}^{(T^1G^{l'})^F} χ_L`, as monomial matrices.
#[derive(Clone, Debug)]
pub struct HeisenbergRep {
    space: SymplecticSpace,
    lagrangian: Vec<Vec<u32>>,
    complement: Vec<Vec<u32>>,
    /// Columns of the inverse of the basis change `[L | M]`.
    binv: Vec<Vec<u32>>,
    l_pows: Vec<Vec<Mat>>,
    l_chars: Vec<Phase>,
    trans: Vec<Mat>,
    trans_inv: Vec<Mat>,
}

impl HeisenbergRep {
    pub fn build(space: SymplecticSpace) -> Result<Self> {
        let lag = space.greedy_lagrangian();
        Self::with_lagrangian(space, lag)
    }

    pub fn with_lagrangian(space: SymplecticSpace, lagrangian: Vec<Vec<u32>>) -> Result<Self> {
        if !space.is_lagrangian(&lagrangian) {
            return Err(Error::Invariant("not a Lagrangian".into()));
        }
        let p = space.p;
        let dim = space.dim();
        let g = space.torus.group().clone();
        let ring = g.ring();
        let mut complement = Vec::new();
        let mut all = lagrangian.clone();
        for k in 0..dim {
            let mut v = vec![0u32; dim];
            v[k] = 1;
            let mut trial = all.clone();
            trial.push(v.clone());
            if fp::rank(&trial, p) == trial.len() {
                all.push(v.clone());
                complement.push(v);
            }
        }
        let mut binv = Vec::with_capacity(dim);
        for k in 0..dim {
            let mut unit = vec![0u32; dim];
            unit[k] = 1;
            binv.push(fp::solve_columns(&all, &unit, p).ok_or(Error::Invariant("singular basis change".into()))?);
        }
        let pows = |v: &[u32]| {
            let h = space.lift(v);
            let mut out = vec![g.identity()];
            for _ in 1..p {
                out.push(g.mul(out.last().unwrap(), &h));
            }
            out
        };
        let l_pows: Vec<Vec<Mat>> = lagrangian.iter().map(|v| pows(v)).collect();
        let mut l_chars = Vec::with_capacity(l_pows.len());
        for pw in &l_pows {
            let hp = g.mul(&pw[p as usize - 1], &pw[1]);
            let ph = space.torus.pairing(&space.theta.exps, &space.torus.t_component(&hp)?);
            l_chars.push(Phase::new(ph.num() as i64, ph.order() * p as u64));
        }
        let m_pows: Vec<Vec<Mat>> = complement.iter().map(|v| pows(v)).collect();
        let d = (p as u64).pow(complement.len() as u32) as usize;
        let mut trans = Vec::with_capacity(d);
        for mut idx in 0..d {
            let mut acc = g.identity();
            for pw in &m_pows {
                acc = g.mul(&acc, &pw[idx % p as usize]);
                idx /= p as usize;
            }
            trans.push(acc);
        }
        let trans_inv = trans.iter().map(|t| t.inv(ring)).collect::<Result<Vec<_>>>()?;
        Ok(HeisenbergRep { space, lagrangian, complement, binv, l_pows, l_chars, trans, trans_inv })
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn lagrangian(&self) -> &[Vec<u32>] {
        &self.lagrangian
    }

    /// Basis of the chosen complement of `L`, indexing the transversal.
    pub fn complement(&self) -> &[Vec<u32>] {
        &self.complement
    }

    /// `q^{#Φ^+}` for a correct build.
    pub fn dim(&self) -> usize {
        self.trans.len()
    }

    fn split(&self, c: &[u32]) -> (Vec<u32>, usize) {
        let p = self.space.p;
        let dim = c.len();
        let mut lm = vec![0u32; dim];
        for (k, &ck) in c.iter().enumerate() {
            if ck != 0 {
                for i in 0..dim {
                    lm[i] = (lm[i] + ck * self.binv[k][i]) % p;
                }
            }
        }
        let half = self.lagrangian.len();
        let mut idx = 0usize;
        for &b in lm[half..].iter().rev() {
            idx = idx * p as usize + b as usize;
        }
        lm.truncate(half);
        (lm, idx)
    }

    /// `χ_L` on `K_L`.
    pub fn chi_l(&self, k: &Mat) -> Result<Phase> {
        let g = self.space.torus.group();
        let (a, rest) = self.split(&self.space.coords(k)?);
        if rest != 0 {
            return Err(Error::NotMember("K_L"));
        }
        let mut prod = g.identity();
        let mut val = Phase::ONE;
        for (i, &ai) in a.iter().enumerate() {
            prod = g.mul(&prod, &self.l_pows[i][ai as usize]);
            val = val.mul(self.l_chars[i].pow(ai as i64));
        }
        let z = g.mul(&g.inv(&prod)?, k);
        let t = self.space.torus.pairing(&self.space.theta.exps, &self.space.torus.t_component(&z)?);
        Ok(val.mul(t))
    }

    pub fn rho(&self, h: &Mat) -> Result<Monomial> {
        let g = self.space.torus.group();
        let d = self.dim();
        let mut perm = vec![0; d];
        let mut phase = vec![Phase::ONE; d];
        for j in 0..d {
            let x = g.mul(h, &self.trans[j]);
            let (_, s) = self.split(&self.space.coords(&x)?);
            perm[j] = s;
            phase[j] = self.chi_l(&g.mul(&self.trans_inv[s], &x))?;
        }
        Ok(Monomial { perm, phase })
    }

    pub fn trace(&self, h: &Mat) -> Result<CycloNum> {
        Ok(self.rho(h)?.trace())
    }

    /// `θ̃(z)` for `z ∈ (T^1G^l)^F`, zero elsewhere.
    pub fn theta_tilde_dot(&self, z: &Mat) -> Result<Option<Phase>> {
        let torus = &self.space.torus;
        let l = torus.group().l();
        if !torus.in_tg(z, 1, l) {
            return Ok(None);
        }
        Ok(Some(torus.pairing(&self.space.theta.exps, &torus.t_component(z)?)))
    }

    /// `ρ_θ(z) = θ̃(z)·1` on the given elements of `(T^1G^l)^F`.
    pub fn check_central(&self, zs: &[Mat]) -> Result<bool> {
        for z in zs {
            let Some(v) = self.theta_tilde_dot(z)? else { return Err(Error::NotMember("(T^1G^l)^F")) };
            if !self.rho(z)?.is_scalar(v) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `⟨tr ρ_θ, tr ρ_θ⟩` over `(T^1G^{l'})^F`, summing over coset representatives of `V`.
    /// Valid once [`HeisenbergRep::check_central`] holds.
    pub fn norm_by_cosets(&self) -> Result<CycloNum> {
        let mut acc = CycloNum::zero();
        let mut count = 0u64;
        for v in self.space.vectors() {
            let t = self.trace(&self.space.lift(&v))?;
            acc = &acc + &t.abs2();
            count += 1;
        }
        Ok(acc.scale(Rational::new(1, count as i128)))
    }

    /// `⟨tr ρ_θ, tr ρ_θ⟩` by summing over all of `(T^1G^{l'})^F`.
    pub fn norm_exhaustive(&self, guard: Guard) -> Result<CycloNum> {
        let torus = &self.space.torus;
        let lp = torus.group().l_prime();
        let elems = torus.tg_elements(1, lp, guard)?;
        let mut acc = CycloNum::zero();
        for h in &elems {
            acc = &acc + &self.trace(h)?.abs2();
        }
        Ok(acc.scale(Rational::new(1, elems.len() as i128)))
    }

    /// `Ind_{(T^1G^l)^F}^{(T^1G^{l'})^F} θ̃` at `h`, over the coset representatives of `V`.
    pub fn induced_from_center(&self, h: &Mat) -> Result<CycloNum> {
        let g = self.space.torus.group();
        let mut acc = RootSum::new();
        for v in self.space.vectors() {
            let x = self.space.lift(&v);
            let c = g.mul(&g.mul(&g.inv(&x)?, h), &x);
            if let Some(ph) = self.theta_tilde_dot(&c)? {
                acc.add(ph, 1);
            }
        }
        Ok(acc.to_cyclo())
    }
}

/// `ρ_θ` extended to `(TG^{l'})^F = A ⋉ (T^1G^{l'})^F`, with `A` the Teichmüller complement.
#[derive(Clone, Debug)]
pub struct ExtendedRep {
    rho: HeisenbergRep,
    a_gens: Vec<TorusPoint>,
    a_orders: Vec<u64>,
    a_points: Vec<TorusPoint>,
    a_index: BTreeMap<TorusPoint, usize>,
    m_gens: Vec<CMat>,
    m_all: Vec<CMat>,
    /// `λ` at the generators of `A`; all trivial before the canonical correction.
    lambda_gens: Vec<Phase>,
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn pow_signed(x: &CycloNum, k: i64) -> Result<CycloNum> {
    if k >= 0 {
        Ok(x.pow(k as u64))
    } else {
        Ok(inverse(x)?.pow((-k) as u64))
    }
}

impl ExtendedRep {
    /// Some extension `ρ̂′`: intertwiners normalised to `M_a^{ord a} = 1`.
    pub fn extend(rho: HeisenbergRep) -> Result<Self> {
        let torus = rho.space.torus.clone();
        let g = torus.group();
        let ring = g.ring();
        let q = g.q();
        let mut a_gens = Vec::new();
        let mut a_orders = Vec::new();
        let one = torus.identity_point();
        for b in 0..torus.block_count() {
            let mut blocks = one.blocks().to_vec();
            blocks[b] = torus.block_ring(b).primitive_teichmuller();
            a_gens.push(TorusPoint::new(&blocks));
            a_orders.push(q.pow(torus.partition()[b] as u32) - 1);
        }

        let d = rho.dim();
        let mut m_gens = Vec::with_capacity(a_gens.len());
        for (a, &m) in a_gens.iter().zip(&a_orders) {
            let am = torus.point(a);
            let am_inv = am.inv(ring)?;
            let mut found = None;
            for j in 0..d {
                let mut grid = vec![RootSum::new(); d * d];
                for v in rho.space.vectors() {
                    let h = rho.space.lift(&v);
                    let r1 = rho.rho(&h.conj_by(ring, &am, &am_inv))?;
                    let r2 = rho.rho(&h)?;
                    let (x, y) = (r1.perm[0], r2.perm[j]);
                    grid[x * d + y].add(r1.phase[0].mul(r2.phase[j].inv()), 1);
                }
                let mut mm = CMat::zero(d);
                for x in 0..d {
                    for y in 0..d {
                        mm.set(x, y, grid[x * d + y].to_cyclo());
                    }
                }
                if !mm.is_zero() {
                    found = Some(mm);
                    break;
                }
            }
            let mm = found.ok_or(Error::Invariant("no nonzero intertwiner".into()))?;
            let mu = mm.pow(m).as_scalar().ok_or(Error::Invariant("M_a^{ord a} is not scalar".into()))?;
            let det = mm.det();
            let (gg, u, v) = ext_gcd(m as i64, d as i64);
            if gg != 1 {
                return Err(Error::Invariant(format!("ord a = {m} and dim = {d} not coprime")));
            }
            let lam = &pow_signed(&mu, -u)? * &pow_signed(&det, -v)?;
            let mn = mm.scale(&lam);
            if mn.pow(m) != CMat::identity(d) {
                return Err(Error::Invariant("normalised intertwiner has wrong order".into()));
            }
            for h in rho.space.basis_lifts() {
                let lhs = mn.mul_monomial(&rho.rho(h)?);
                let rhs = CMat::monomial_mul(&rho.rho(&h.conj_by(ring, &am, &am_inv))?, &mn);
                if lhs != rhs {
                    return Err(Error::Invariant("intertwiner relation fails".into()));
                }
            }
            m_gens.push(mn);
        }
        for i in 0..m_gens.len() {
            for j in 0..i {
                if m_gens[i].mul(&m_gens[j]) != m_gens[j].mul(&m_gens[i]) {
                    return Err(Error::Invariant("normalised intertwiners do not commute".into()));
                }
            }
        }
        let lambda_gens = vec![Phase::ONE; a_gens.len()];
        let mut ext = ExtendedRep { rho, a_gens, a_orders, a_points: Vec::new(), a_index: BTreeMap::new(), m_gens, m_all: Vec::new(), lambda_gens };
        ext.fill_tables();
        Ok(ext)
    }

    fn fill_tables(&mut self) {
        let torus = &self.rho.space.torus;
        let total: u64 = self.a_orders.iter().product();
        let d = self.rho.dim();
        self.a_points.clear();
        self.a_index.clear();
        self.m_all.clear();
        for code in 0..total {
            let ks = self.decode(code);
            let mut pt = torus.identity_point();
            let mut m = CMat::identity(d);
            for (b, &k) in ks.iter().enumerate() {
                pt = torus.mul_points(&pt, &torus.pow_point(&self.a_gens[b], k));
                m = m.mul(&self.m_gens[b].pow(k));
            }
            self.a_index.insert(pt, code as usize);
            self.a_points.push(pt);
            self.m_all.push(m);
        }
    }

    fn decode(&self, mut code: u64) -> Vec<u64> {
        self.a_orders
            .iter()
            .map(|&m| {
                let k = code % m;
                code /= m;
                k
            })
            .collect()
    }

    pub fn rho(&self) -> &HeisenbergRep {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// Points of `A`, in code order.
    pub fn complement_points(&self) -> &[TorusPoint] {
        &self.a_points
    }

    pub fn complement_generators(&self) -> &[TorusPoint] {
        &self.a_gens
    }

    pub fn intertwiners(&self) -> &[CMat] {
        &self.m_gens
    }

    pub fn lambda(&self) -> &[Phase] {
        &self.lambda_gens
    }

    fn lambda_at(&self, code: usize) -> Phase {
        let ks = self.decode(code as u64);
        ks.iter().zip(&self.lambda_gens).fold(Phase::ONE, |acc, (&k, l)| acc.mul(l.pow(k as i64)))
    }

    /// Multiplies each `M_{a_b}` by `ζ_{ord a_b}^{k_b}`; another valid normalisation.
    pub fn retwisted(&self, ks: &[u64]) -> Self {
        let mut out = self.clone();
        for (b, &k) in ks.iter().enumerate() {
            let z = CycloNum::root_of_unity(self.a_orders[b] as u32, k as i64);
            out.m_gens[b] = out.m_gens[b].scale(&z);
        }
        out.lambda_gens = vec![Phase::ONE; self.a_gens.len()];
        out.fill_tables();
        out
    }

    /// Trace of the current model at `g ∈ (TG^{l'})^F`.
    pub fn trace(&self, g: &Mat) -> Result<CycloNum> {
        let torus = &self.rho.space.torus;
        let grp = torus.group();
        let a = torus.torus_quotient(g)?;
        let code = *self.a_index.get(&a).ok_or(Error::Invariant("torus quotient outside A".into()))?;
        let h = grp.mul(&grp.inv(&torus.point(&a))?, g);
        let mono = self.rho.rho(&h)?;
        let tr = self.m_all[code].trace_with(&mono);
        Ok(&tr * &self.lambda_at(code).to_cyclo())
    }

    /// `tr` on `A` of the current model, in code order.
    pub fn complement_traces(&self) -> Vec<CycloNum> {
        (0..self.a_points.len()).map(|c| &self.m_all[c].trace() * &self.lambda_at(c).to_cyclo()).collect()
    }

    /// Twists by the character `λ` making `tr ρ̂(s) = St(s)·θ(s)` on `A`.
    pub fn canonical_correction(&mut self) -> Result<()> {
        self.lambda_gens = vec![Phase::ONE; self.a_gens.len()];
        let torus = self.rho.space.torus.clone();
        let theta = self.rho.space.theta.clone();
        let mut lambdas = Vec::with_capacity(self.a_points.len());
        for (code, s) in self.a_points.iter().enumerate() {
            let st = SteinbergData::new(&torus, s);
            let tr = self.m_all[code].trace();
            let mag = (st.q as i128).pow(2 * st.phi_s_pos as u32);
            if tr.abs2() != CycloNum::from_int(mag) {
                return Err(Error::Invariant(format!("|tr ρ̂′(s)|² ≠ {mag} at s = {s:?}")));
            }
            let target = torus.pairing(&theta.exps, s).to_cyclo().scale(Rational::from_integer(st.st_value()));
            lambdas.push((&target * &tr.conj()).scale(Rational::new(1, mag)));
        }
        let mut gens = Vec::with_capacity(self.a_gens.len());
        for (b, &m) in self.a_orders.iter().enumerate() {
            let mut ks = vec![0u64; self.a_orders.len()];
            ks[b] = 1 % m;
            let code = self.code_of(&ks);
            let val = &lambdas[code];
            let k = (0..m).find(|&k| CycloNum::root_of_unity(m as u32, k as i64) == *val);
            match k {
                Some(k) => gens.push(Phase::new(k as i64, m)),
                None => return Err(Error::Invariant(format!("λ(a_{b}) = {val} is not an ord(a)-th root of unity"))),
            }
        }
        self.lambda_gens = gens;
        for (code, val) in lambdas.iter().enumerate() {
            if self.lambda_at(code).to_cyclo() != *val {
                return Err(Error::Invariant("λ is not multiplicative".into()));
            }
        }
        Ok(())
    }

    fn code_of(&self, ks: &[u64]) -> usize {
        let mut code = 0u64;
        for (&k, &m) in ks.iter().zip(&self.a_orders).rev() {
            code = code * m + k;
        }
        code as usize
    }
}

/// The canonical `ρ̂_θ` on `(TG^{l'})^F`: `θ̃` for even `r`, the corrected extension for odd `r`.
#[derive(Clone, Debug)]
pub enum CanonicalRep {
    Even { torus: Torus, theta: TorusChar },
    Odd(ExtendedRep),
}

impl CanonicalRep {
    pub fn build(space: &ThetaSpace, theta: &TorusChar) -> Result<Self> {
        let torus = space.torus();
        if torus.group().r() % 2 == 0 {
            return Ok(CanonicalRep::Even { torus: torus.clone(), theta: theta.clone() });
        }
        let v = SymplecticSpace::build(space, theta)?;
        let mut ext = ExtendedRep::extend(HeisenbergRep::build(v)?)?;
        ext.canonical_correction()?;
        Ok(CanonicalRep::Odd(ext))
    }

    pub fn torus(&self) -> &Torus {
        match self {
            CanonicalRep::Even { torus, .. } => torus,
            CanonicalRep::Odd(e) => &e.rho.space.torus,
        }
    }

    pub fn theta(&self) -> &TorusChar {
        match self {
            CanonicalRep::Even { theta, .. } => theta,
            CanonicalRep::Odd(e) => &e.rho.space.theta,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            CanonicalRep::Even { .. } => 1,
            CanonicalRep::Odd(e) => e.dim(),
        }
    }

    pub fn trace(&self, g: &Mat) -> Result<CycloNum> {
        match self {
            CanonicalRep::Even { torus, theta } => Ok(torus.pairing(&theta.exps, &torus.t_component(g)?).to_cyclo()),
            CanonicalRep::Odd(e) => e.trace(g),
        }
    }

    pub fn extended(&self) -> Option<&ExtendedRep> {
        match self {
            CanonicalRep::Even { .. } => None,
            CanonicalRep::Odd(e) => Some(e),
        }
    }
}

#[cfg(test)]
mod tests;
