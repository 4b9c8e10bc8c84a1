//! Maximal tori of `GL_n(O_r)` indexed by partitions of `n`.
//!
//! A block of size `a` carries `O_r^{(a)×}` through its regular representation
//! in the basis `1, X, …, X^{a-1}`. Over the splitting ring `S = O_r^{(A)}`,
//! `A = lcm(a_i)`, the torus is diagonalised by the block Vandermonde matrix
//! `Q` with rows `(z^{q^k})^j`, `z` a Teichmüller root of the block modulus.
//! In these diagonal coordinates `F(y)_{kl} = y_{π(k)π(l)}` for rational
//! matrices, where `π` shifts cyclically inside each block.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use super::{GlGroup, Mat, MAX_N};
use crate::chainring::{ChainRing, Characteristic, RingElem};
use crate::cyclo::{abelian_structure, AbelianStructure, Phase};
use crate::{Error, Guard, Result};

/// A point of `T^F` as a tuple of block units.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TorusPoint {
    k: u8,
    u: [RingElem; MAX_N],
}

impl TorusPoint {
    pub fn new(blocks: &[RingElem]) -> Self {
        let mut u = [RingElem::default(); MAX_N];
        u[..blocks.len()].copy_from_slice(blocks);
        TorusPoint { k: blocks.len() as u8, u }
    }

    pub fn blocks(&self) -> &[RingElem] {
        &self.u[..self.k as usize]
    }
}

/// A Weyl group element: a permutation of diagonal coordinates commuting with
/// `F`, and its rational matrix representative.
#[derive(Clone, Debug)]
pub struct WeylElement {
    pub perm: [usize; MAX_N],
    pub mat: Mat,
    pub mat_inv: Mat,
}

#[derive(Clone, Debug)]
pub struct Torus {
    group: GlGroup,
    partition: Vec<usize>,
    offsets: Vec<usize>,
    blocks: Vec<ChainRing>,
    split: ChainRing,
    q: Mat,
    q_inv: Mat,
    frob: [usize; MAX_N],
    structures: Vec<AbelianStructure<RingElem>>,
}

impl Torus {
    /// Builds the torus of type `partition` (parts are sorted descending).
    pub fn new(group: &GlGroup, partition: &[usize], guard: Guard) -> Result<Self> {
        let mut partition = partition.to_vec();
        partition.sort_unstable_by(|a, b| b.cmp(a));
        if partition.iter().sum::<usize>() != group.n() || partition.contains(&0) {
            return Err(Error::InvalidSpec(format!("{partition:?} is not a partition of {}", group.n())));
        }
        let spec = group.ring().spec();
        let big = partition.iter().fold(1usize, |acc, &a| acc.lcm(&a));
        let split = ChainRing::new(spec.with_degree(big as u32))?;
        let blocks: Vec<ChainRing> = partition.iter().map(|&a| ChainRing::new(spec.with_degree(a as u32))).collect::<Result<_>>()?;
        let mut offsets = Vec::with_capacity(partition.len());
        let mut off = 0;
        for &a in &partition {
            offsets.push(off);
            off += a;
        }

        let n = group.n();
        let mut q = Mat::zero(n);
        let mut frob = [0usize; MAX_N];
        for (b, ring) in blocks.iter().enumerate() {
            let a = partition[b];
            let o = offsets[b];
            let z = teichmuller_root(&split, ring)?;
            let mut conj = z;
            for k in 0..a {
                let mut pw = split.one();
                for j in 0..a {
                    q.set(o + k, o + j, pw);
                    pw = split.mul(pw, conj);
                }
                conj = split.frobenius_q(conj);
                frob[o + k] = o + (k + 1) % a;
            }
        }
        let q_inv = q.inv(&split)?;

        let mut structures = Vec::with_capacity(blocks.len());
        for ring in &blocks {
            let units: Vec<RingElem> = ring.units(guard)?.collect();
            let s = abelian_structure(&units, ring.one(), |x, y| ring.mul(x, y), |x| ring.index(x) as usize, ring.size() as usize, guard)?;
            structures.push(s);
        }

        Ok(Torus { group: group.clone(), partition, offsets, blocks, split, q, q_inv, frob, structures })
    }

    pub fn group(&self) -> &GlGroup {
        &self.group
    }

    pub fn partition(&self) -> &[usize] {
        &self.partition
    }

    pub fn n(&self) -> usize {
        self.group.n()
    }

    pub fn block_ring(&self, b: usize) -> &ChainRing {
        &self.blocks[b]
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_offset(&self, b: usize) -> usize {
        self.offsets[b]
    }

    /// The splitting ring `O_r^{(A)}`.
    pub fn split_ring(&self) -> &ChainRing {
        &self.split
    }

    pub fn conjugator(&self) -> (&Mat, &Mat) {
        (&self.q, &self.q_inv)
    }

    /// Frobenius permutation of diagonal coordinates.
    pub fn frob_perm(&self) -> &[usize] {
        &self.frob[..self.n()]
    }

    pub fn is_split(&self) -> bool {
        self.partition.iter().all(|&a| a == 1)
    }

    /// Report key such as `gl2:r3:q3:torus(2)`; equal characteristic adds `:equal`.
    pub fn key(&self) -> String {
        let g = &self.group;
        let parts: Vec<String> = self.partition.iter().map(|a| format!("{a}")).collect();
        let kind = match g.ring().spec().kind {
            Characteristic::Mixed => "",
            Characteristic::Equal => ":equal",
        };
        format!("gl{}:r{}:q{}{}:torus({})", g.n(), g.r(), g.q(), kind, parts.join(","))
    }

    // ---- torus points ----

    pub fn identity_point(&self) -> TorusPoint {
        TorusPoint::new(&self.blocks.iter().map(|r| r.one()).collect::<Vec<_>>())
    }

    pub fn mul_points(&self, s: &TorusPoint, t: &TorusPoint) -> TorusPoint {
        let v: Vec<RingElem> = self.blocks.iter().enumerate().map(|(b, r)| r.mul(s.u[b], t.u[b])).collect();
        TorusPoint::new(&v)
    }

    pub fn inv_point(&self, t: &TorusPoint) -> Result<TorusPoint> {
        let v: Vec<RingElem> = self.blocks.iter().enumerate().map(|(b, r)| r.inv(t.u[b])).collect::<Result<_>>()?;
        Ok(TorusPoint::new(&v))
    }

    pub fn pow_point(&self, t: &TorusPoint, e: u64) -> TorusPoint {
        let v: Vec<RingElem> = self.blocks.iter().enumerate().map(|(b, r)| r.pow(t.u[b], e)).collect();
        TorusPoint::new(&v)
    }

    /// Block-wise Teichmüller representative of the residue of `t`.
    pub fn teichmuller_point(&self, t: &TorusPoint) -> TorusPoint {
        let v: Vec<RingElem> = self.blocks.iter().enumerate().map(|(b, r)| r.teichmuller(t.u[b])).collect();
        TorusPoint::new(&v)
    }

    /// Reduces block coordinates modulo `π^i` (a representative of the image in `T_i^F`).
    pub fn reduce_point(&self, t: &TorusPoint, i: u32) -> TorusPoint {
        let v: Vec<RingElem> = self.blocks.iter().enumerate().map(|(b, r)| r.reduce_level(t.u[b], i)).collect();
        TorusPoint::new(&v)
    }

    pub fn is_unit_point(&self, t: &TorusPoint) -> bool {
        self.blocks.iter().enumerate().all(|(b, r)| r.is_unit(t.u[b]))
    }

    /// The rational block-diagonal matrix of a torus point.
    pub fn point(&self, t: &TorusPoint) -> Mat {
        let mut m = Mat::zero(self.n());
        let base = self.group.ring();
        let e = base.spec().e as usize;
        for (b, ring) in self.blocks.iter().enumerate() {
            let a = self.partition[b];
            let o = self.offsets[b];
            let mut col = t.u[b];
            let x = ring.gen_x();
            for j in 0..a {
                for k in 0..a {
                    let mut c = [0u32; 8];
                    c[..e].copy_from_slice(&col.0[k * e..(k + 1) * e]);
                    m.set(o + k, o + j, RingElem(c));
                }
                col = ring.mul(col, x);
            }
        }
        m
    }

    /// Block coordinates read off the first column of each diagonal block.
    pub fn coords(&self, g: &Mat) -> TorusPoint {
        let e = self.group.ring().spec().e as usize;
        let v: Vec<RingElem> = (0..self.blocks.len())
            .map(|b| {
                let o = self.offsets[b];
                let mut c = [0u32; 8];
                for k in 0..self.partition[b] {
                    c[k * e..(k + 1) * e].copy_from_slice(&g.get(o + k, o).0[..e]);
                }
                RingElem(c)
            })
            .collect();
        TorusPoint::new(&v)
    }

    /// Whether `g ∈ T^{tl}·G^k`, i.e. `g mod π^k` lies in `T` (and in `T^1` when `tl = 1`).
    pub fn in_tg(&self, g: &Mat, tl: u32, k: u32) -> bool {
        let ring = self.group.ring();
        let t = self.coords(g);
        if !self.is_unit_point(&t) {
            return false;
        }
        if tl >= 1 && !self.group.in_kernel(g, tl.min(k)) {
            return false;
        }
        g.sub(ring, &self.point(&t)).valuation(ring) >= k
    }

    pub fn in_torus(&self, g: &Mat) -> bool {
        self.in_tg(g, 0, self.group.r())
    }

    // ---- orders and structure ----

    /// `|T^F| = Π |O^{(a_i)×}_r|`.
    pub fn order(&self) -> u64 {
        self.blocks.iter().map(|r| r.unit_count()).product()
    }

    /// `|T_1^F| = Π (q^{a_i} − 1)`.
    pub fn t1_order(&self) -> u64 {
        self.blocks.iter().map(|r| r.spec().qa() - 1).product()
    }

    /// `|T_i^F|`, the image of `T^F` modulo `π^i`.
    pub fn level_order(&self, i: u32) -> u64 {
        self.blocks.iter().map(|r| r.spec().with_level(i).unit_count()).product()
    }

    /// `|(T^i)^F| = q^{n(r−i)}`.
    pub fn kernel_order(&self, i: u32) -> u64 {
        self.group.q().pow(self.n() as u32 * (self.group.r() - i.min(self.group.r())))
    }

    pub fn structures(&self) -> &[AbelianStructure<RingElem>] {
        &self.structures
    }

    /// Orders of the concatenated block generators.
    pub fn generator_orders(&self) -> Vec<u64> {
        self.structures.iter().flat_map(|s| s.orders().iter().copied()).collect()
    }

    /// Generators of `T^F` as torus points (block generators embedded one at a time).
    pub fn generators(&self) -> Vec<TorusPoint> {
        let id = self.identity_point();
        let mut out = Vec::new();
        for (b, s) in self.structures.iter().enumerate() {
            for &g in s.generators() {
                let mut t = id;
                t.u[b] = g;
                out.push(t);
            }
        }
        out
    }

    /// Exponent vector of `t` with respect to [`Torus::generators`].
    pub fn log(&self, t: &TorusPoint) -> Vec<u64> {
        let mut out = Vec::new();
        for (b, s) in self.structures.iter().enumerate() {
            let idx = self.blocks[b].index(t.u[b]) as usize;
            out.extend(s.log(idx).expect("torus point is a unit"));
        }
        out
    }

    pub fn from_log(&self, exps: &[u64]) -> TorusPoint {
        let mut v = Vec::with_capacity(self.blocks.len());
        let mut pos = 0;
        for (b, s) in self.structures.iter().enumerate() {
            let k = s.orders().len();
            let ring = &self.blocks[b];
            v.push(s.element(&exps[pos..pos + k], |x, y| ring.mul(x, y)));
            pos += k;
        }
        TorusPoint::new(&v)
    }

    /// Dense index of a torus point in `0..Π |R_i|`.
    pub fn point_index(&self, t: &TorusPoint) -> u64 {
        self.blocks.iter().enumerate().rev().fold(0u64, |acc, (b, r)| acc * r.size() + r.index(t.u[b]))
    }

    pub fn point_index_bound(&self) -> u64 {
        self.blocks.iter().map(|r| r.size()).product()
    }

    /// Value of the character with exponents `chi` at `t`.
    pub fn pairing(&self, chi: &[u64], t: &TorusPoint) -> Phase {
        let mut acc = Phase::ONE;
        let mut pos = 0;
        for (b, s) in self.structures.iter().enumerate() {
            let k = s.orders().len();
            let x = s.log(self.blocks[b].index(t.u[b]) as usize).expect("torus point is a unit");
            acc = acc.mul(s.pairing(&chi[pos..pos + k], &x));
            pos += k;
        }
        acc
    }

    /// Representatives of `(T^{tl})^F / (T^k)^F`: points whose block coordinates are reduced below `π^k`.
    pub fn point_reps(&self, tl: u32, k: u32) -> Vec<TorusPoint> {
        let mut lists: Vec<Vec<RingElem>> = Vec::new();
        for ring in &self.blocks {
            let low = ChainRing::new(ring.spec().with_level(k)).expect("valid level");
            let one = ring.one();
            let list: Vec<RingElem> = (0..low.size())
                .map(|i| low.from_index(i))
                .filter(|&x| ring.is_unit(x) && (tl == 0 || ring.valuation(ring.sub(x, one)) >= tl.min(k)))
                .collect();
            lists.push(list);
        }
        let mut out = vec![TorusPoint::new(&[])];
        for list in &lists {
            let mut next = Vec::with_capacity(out.len() * list.len());
            for &x in list {
                for t in &out {
                    let mut v = t.blocks().to_vec();
                    v.push(x);
                    next.push(TorusPoint::new(&v));
                }
            }
            out = next;
        }
        out
    }

    /// All of `T^F` in deterministic order.
    pub fn points(&self, guard: Guard) -> Result<Vec<TorusPoint>> {
        guard.check("torus", self.order())?;
        Ok(self.point_reps(0, self.group.r()))
    }

    /// Teichmüller points: the complement `A ≅ T_1^F`.
    pub fn teichmuller_points(&self) -> Vec<TorusPoint> {
        self.point_reps(0, 1).iter().map(|t| self.teichmuller_point(t)).collect()
    }

    /// Elements of `(T^{tl} G^k)^F` as `t·x`, `t` over [`Torus::point_reps`], `x ∈ G^k`.
    pub fn tg_elements(&self, tl: u32, k: u32, guard: Guard) -> Result<Vec<Mat>> {
        let reps = self.point_reps(tl, k);
        let count = reps.len() as u64 * self.group.kernel_order(k) as u64;
        guard.check("torus-kernel product", count)?;
        let ring = self.group.ring();
        let kernel: Vec<Mat> = self.group.kernel_elements(k.max(1), guard)?.collect();
        let mut out = Vec::with_capacity(count as usize);
        for t in &reps {
            let tm = self.point(t);
            for x in &kernel {
                out.push(tm.mul(ring, x));
            }
        }
        Ok(out)
    }

    /// `|(T^{tl} G^k)^F|`.
    pub fn tg_order(&self, tl: u32, k: u32) -> u64 {
        let reps = if tl == 0 { self.level_order(k) } else { self.level_order(k) / self.t1_order() };
        reps * self.group.kernel_order(k) as u64
    }

    // ---- diagonal coordinates ----

    /// `Q x Q^{-1}` over the splitting ring.
    pub fn to_diag(&self, x: &Mat) -> Mat {
        x.conj_by(&self.split, &self.q, &self.q_inv)
    }

    /// `Q^{-1} y Q`.
    pub fn from_diag(&self, y: &Mat) -> Mat {
        y.conj_by(&self.split, &self.q_inv, &self.q)
    }

    /// Torus part `Q^{-1} diag(Q x Q^{-1}) Q` of a Lie element.
    pub fn lie_torus_part(&self, x: &Mat) -> Mat {
        self.from_diag(&self.to_diag(x).diagonal_part())
    }

    /// The unique `t ∈ T^F` with `g t^{-1} ∈ U^±`, for `g ∈ (TG^l)^F`.
    pub fn t_component(&self, g: &Mat) -> Result<TorusPoint> {
        let l = self.group.l();
        if !self.in_tg(g, 0, l) {
            return Err(Error::NotMember("(TG^l)^F"));
        }
        let ring = self.group.ring();
        let t0 = self.point(&self.coords(g));
        let t0_inv = t0.inv(ring)?;
        let y = t0_inv.mul(ring, g).sub(ring, &self.group.identity());
        let yt = self.lie_torus_part(&y);
        debug_assert!(yt.is_rational(&self.split));
        let t = t0.mul(ring, &yt.add(ring, &self.group.identity()));
        Ok(self.coords(&t))
    }

    /// Whether `g ∈ U^± = {1 + π^l y : y off-diagonal in diagonal coordinates}`.
    pub fn in_u_pm(&self, g: &Mat) -> bool {
        let l = self.group.l();
        let ring = self.group.ring();
        if !self.group.in_kernel(g, l) {
            return false;
        }
        let y = self.to_diag(&g.sub(ring, &self.group.identity()));
        (0..self.n()).all(|i| self.split.is_zero(y.get(i, i)))
    }

    /// Image of `g ∈ (TG^{l'})^F` in `T_1^F`, as its Teichmüller point.
    pub fn torus_quotient(&self, g: &Mat) -> Result<TorusPoint> {
        let lp = self.group.l_prime().max(1);
        if !self.in_tg(g, 0, lp) {
            return Err(Error::NotMember("(TG^{l'})^F"));
        }
        Ok(self.teichmuller_point(&self.coords(g)))
    }

    // ---- roots and Weyl group ----

    /// Roots `e_i − e_j` in diagonal coordinates.
    pub fn roots(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect()
    }

    /// Positive roots `i < j`.
    pub fn positive_roots(&self) -> Vec<(usize, usize)> {
        self.roots().into_iter().filter(|(i, j)| i < j).collect()
    }

    /// `F(α)`, defined by `F(U_α) = U_{F(α)}`.
    pub fn frob_root(&self, alpha: (usize, usize)) -> (usize, usize) {
        (self.frob[alpha.0], self.frob[alpha.1])
    }

    /// Representatives of `W(T)^F`: coordinate permutations commuting with `F`.
    pub fn weyl_elements(&self) -> Result<Vec<WeylElement>> {
        let n = self.n();
        let mut out = Vec::new();
        for perm in permutations(n) {
            if (0..n).any(|k| perm[self.frob[k]] != self.frob[perm[k]]) {
                continue;
            }
            let mut pm = Mat::zero(n);
            for k in 0..n {
                pm.set(perm[k], k, self.split.one());
            }
            let mat = self.from_diag(&pm);
            if !mat.is_rational(&self.split) {
                return Err(Error::Invariant(format!("Weyl representative {perm:?} is not rational")));
            }
            let mat_inv = mat.inv(self.group.ring())?;
            let mut p = [0usize; MAX_N];
            p[..n].copy_from_slice(&perm);
            out.push(WeylElement { perm: p, mat, mat_inv });
        }
        Ok(out)
    }

    /// `w t w^{-1}`.
    pub fn weyl_act(&self, w: &WeylElement, t: &TorusPoint) -> TorusPoint {
        let ring = self.group.ring();
        self.coords(&self.point(t).conj_by(ring, &w.mat, &w.mat_inv))
    }

    /// `w^{-1} t w`.
    pub fn weyl_act_inv(&self, w: &WeylElement, t: &TorusPoint) -> TorusPoint {
        let ring = self.group.ring();
        self.coords(&self.point(t).conj_by(ring, &w.mat_inv, &w.mat))
    }

    /// Coroot line `𝒯^α = {1 + π^{r−1} c (E_ii − E_jj)}` in diagonal coordinates, `c` over `F_{q^A}`.
    pub fn coroot_line(&self, alpha: (usize, usize)) -> Vec<Mat> {
        let s = &self.split;
        let r = self.group.r();
        let n = self.n();
        s.residue_elements()
            .map(|c| {
                let pc = s.mul_pi_pow(c, r - 1);
                let mut d = Mat::identity(s, n);
                d.set(alpha.0, alpha.0, s.add(s.one(), pc));
                d.set(alpha.1, alpha.1, s.sub(s.one(), pc));
                d
            })
            .collect()
    }

    /// `N^{F^A}_F(𝒯^α)`, as sorted distinct points of `(T^{r−1})^F`.
    pub fn norm_image(&self, alpha: (usize, usize)) -> Result<Vec<TorusPoint>> {
        let s = &self.split;
        let big = s.degree();
        let mut out = Vec::new();
        for d in self.coroot_line(alpha) {
            let x = self.from_diag(&d);
            let mut acc = Mat::identity(s, self.n());
            let mut y = x;
            for _ in 0..big {
                acc = acc.mul(s, &y);
                y = y.frobenius_q(s);
            }
            if !acc.is_rational(s) || !self.in_torus(&acc) {
                return Err(Error::Invariant(format!("norm of coroot point for {alpha:?} is not in T^F")));
            }
            out.push(self.coords(&acc));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// First Teichmüller root in `split` of the outer modulus of `block`.
fn teichmuller_root(split: &ChainRing, block: &ChainRing) -> Result<RingElem> {
    let m = block.outer_modulus();
    for u in split.residue_elements() {
        let z = split.teichmuller(u);
        let mut acc = split.one();
        for c in m.iter().rev() {
            acc = split.add(split.mul(acc, z), *c);
        }
        if split.is_zero(acc) {
            return Ok(z);
        }
    }
    Err(Error::Invariant("block modulus has no root in the splitting ring".into()))
}

/// Permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in permutations(n - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|x| if x >= first { x + 1 } else { x }));
            out.push(p);
        }
    }
    out
}
