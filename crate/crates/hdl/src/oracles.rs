//! Brute-force reimplementations of the optimised paths, compared exactly.

use std::collections::BTreeSet;

use anyhow::{bail, Result};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use hdl_core::chainring::{ChainRing, RingSpec};
use hdl_core::cyclo::{CycloNum, Rational};
use hdl_core::dlchar::AlgebraisedDL;
use hdl_core::fp;
use hdl_core::groups::Mat;
use hdl_core::heisenberg::{HeisenbergRep, SymplecticSpace};
use hdl_core::tchar::{StabilizerCache, ThetaSpace, TorusChar};
use hdl_core::Guard;

/// Outcome of one oracle comparison.
#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    pub oracle: String,
    pub instance: String,
    pub checked: usize,
    pub passed: bool,
    pub detail: String,
}

impl OracleResult {
    fn new(oracle: &str, instance: String, checked: usize, mismatch: Option<String>, ok_detail: String) -> Self {
        OracleResult {
            oracle: oracle.to_string(),
            instance,
            checked,
            passed: mismatch.is_none(),
            detail: mismatch.unwrap_or(ok_detail),
        }
    }
}

/// `χ(g) = |Γ|^{-1} Σ_{x ∈ G^F} [x^{-1}gx ∈ Γ] tr ρ̂(x^{-1}gx)` against the
/// transversal evaluation, on `samples` elements drawn with `seed`.
pub fn induction(dl: &AlgebraisedDL, samples: usize, seed: u64, guard: Guard) -> Result<OracleResult> {
    let torus = dl.torus();
    let g = torus.group();
    let ring = g.ring();
    let lp = g.l_prime();
    let elems: Vec<Mat> = g.elements(guard)?.collect();
    let invs: Vec<Mat> = elems.par_iter().map(|x| x.inv(ring)).collect::<hdl_core::Result<_>>()?;
    let gamma_order = torus.tg_order(0, lp) as i128;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = sample(&mut rng, elems.len(), samples.min(elems.len())).into_vec();
    idx.sort_unstable();
    let mut mismatch = None;
    for &i in &idx {
        let y = &elems[i];
        let parts: Vec<CycloNum> = elems
            .par_iter()
            .zip(&invs)
            .map(|(x, xi)| {
                let z = xi.mul(ring, y).mul(ring, x);
                if torus.in_tg(&z, 0, lp) {
                    dl.rep().trace(&z)
                } else {
                    Ok(CycloNum::zero())
                }
            })
            .collect::<hdl_core::Result<_>>()?;
        let brute = parts.iter().fold(CycloNum::zero(), |a, b| &a + b).scale(Rational::new(1, gamma_order));
        let fast = dl.value(y)?;
        if brute != fast {
            mismatch = Some(format!("g = {y:?}: full sum {brute}, transversal {fast}"));
            break;
        }
    }
    let n = idx.len();
    Ok(OracleResult::new("induction", torus.key(), n, mismatch, format!("{n} elements agree")))
}

/// Every Lagrangian of `V`, found by exhaustive search over tuples of vectors.
pub fn all_lagrangians(space: &SymplecticSpace, guard: Guard) -> Result<Vec<Vec<Vec<u32>>>> {
    let p = space.p();
    let d = space.dim();
    let k = d / 2;
    let vecs: Vec<Vec<u32>> = space.vectors().collect();
    guard.check("lagrangian search", (vecs.len() as u64).saturating_pow(k as u32))?;
    let mut found = BTreeSet::new();
    let mut idx = vec![0usize; k];
    'outer: loop {
        let tuple: Vec<Vec<u32>> = idx.iter().map(|&i| vecs[i].clone()).collect();
        let isotropic = tuple.iter().all(|x| tuple.iter().all(|y| space.form(x, y) == 0));
        if isotropic && fp::rank(&tuple, p) == k {
            let mut m = tuple;
            fp::rref(&mut m, p);
            found.insert(m);
        }
        for pos in 0..k {
            idx[pos] += 1;
            if idx[pos] < vecs.len() {
                continue 'outer;
            }
            idx[pos] = 0;
        }
        break;
    }
    Ok(found.into_iter().collect())
}

/// Number of Lagrangians of a `2k`-dimensional symplectic space over `F_p`.
pub fn lagrangian_count(p: u32, k: usize) -> usize {
    (1..=k as u32).map(|i| p.pow(i) as usize + 1).product()
}

/// The greedy Lagrangian model and every other Lagrangian model give the same trace on `H`.
pub fn lagrangian(space: &ThetaSpace, theta: &TorusChar, guard: Guard) -> Result<OracleResult> {
    let torus = space.torus();
    let v = SymplecticSpace::build(space, theta)?;
    let k = v.dim() / 2;
    let lags = all_lagrangians(&v, guard)?;
    let greedy = HeisenbergRep::build(v.clone())?;
    let h = torus.tg_elements(1, torus.group().l_prime(), guard)?;
    let reference: Vec<CycloNum> = h.iter().map(|x| greedy.trace(x)).collect::<hdl_core::Result<_>>()?;
    let mut mismatch = None;
    if lags.len() != lagrangian_count(v.p(), k) {
        mismatch = Some(format!("found {} Lagrangians, expected {}", lags.len(), lagrangian_count(v.p(), k)));
    }
    for lag in &lags {
        if mismatch.is_some() {
            break;
        }
        if !v.is_lagrangian(lag) {
            mismatch = Some(format!("{lag:?} rejected by is_lagrangian"));
            break;
        }
        let rho = HeisenbergRep::with_lagrangian(v.clone(), lag.clone())?;
        for (x, want) in h.iter().zip(&reference) {
            let got = rho.trace(x)?;
            if &got != want {
                mismatch = Some(format!("L = {lag:?}, h = {x:?}: {got} != {want}"));
                break;
            }
        }
    }
    let detail = format!("{} Lagrangians, traces agree on {} elements", lags.len(), h.len());
    Ok(OracleResult::new("lagrangian", format!("{} θ={}", torus.key(), theta.key()), lags.len(), mismatch, detail))
}

/// `⟨χ, χ⟩` by Mackey's rule against the full-group sum.
pub fn inner_product(dl: &AlgebraisedDL, guard: Guard) -> Result<OracleResult> {
    let mackey = dl.inner_product_mackey(guard)?;
    let full = dl.inner_product_full(guard)?;
    let mismatch = (mackey != full).then(|| format!("Mackey {mackey}, full sum {full}"));
    let detail = format!("both give {full}");
    Ok(OracleResult::new("inner-product", format!("{} θ={}", dl.torus().key(), dl.theta().key()), 1, mismatch, detail))
}

/// Linear-map Frobenius against the Teichmüller digit-wise one, on every element.
pub fn frobenius(spec: RingSpec, guard: Guard) -> Result<OracleResult> {
    let ring = ChainRing::new(spec)?;
    let mut checked = 0;
    let mut mismatch = None;
    for x in ring.elements(guard)? {
        checked += 1;
        let (a, b) = (ring.frobenius_q(x), ring.frobenius_q_digitwise(x));
        if a != b {
            mismatch = Some(format!("x = {x:?}: {a:?} != {b:?}"));
            break;
        }
    }
    Ok(OracleResult::new("frobenius", spec.key(), checked, mismatch, format!("{checked} elements agree")))
}

/// The support of `Ω(χ)` against the `G_1^F`-orbit of `β mod π`, computed by
/// conjugating with every element of `GL_n(F_q)`.
pub fn orbit(space: &ThetaSpace, dl: &AlgebraisedDL, guard: Guard) -> Result<OracleResult> {
    let g = space.torus().group();
    let f = g.level_ring(1);
    let beta = space.beta_residue(dl.theta());
    let mut orbit = BTreeSet::new();
    for h in g.level_elements(1, guard)? {
        let hi = h.inv(f)?;
        orbit.insert(h.mul(f, &beta).mul(f, &hi));
    }
    let om = dl.omega(space, guard)?;
    let support: BTreeSet<Mat> = om.support.iter().copied().collect();
    let mismatch = (support != orbit).then(|| format!("support has {} elements, orbit {}", support.len(), orbit.len()));
    let detail = format!("orbit of size {}", orbit.len());
    Ok(OracleResult::new("orbit", format!("{} θ={}", dl.torus().key(), dl.theta().key()), orbit.len(), mismatch, detail))
}

/// Strongly generic count against residue counting: for a split torus the
/// residue of `β` runs uniformly over diagonal matrices, and θ is regular
/// exactly when the entries are distinct.
pub fn classify_count(space: &ThetaSpace) -> Result<OracleResult> {
    let torus = space.torus();
    if !torus.is_split() {
        bail!("residue counting oracle needs a split torus");
    }
    let all: Vec<TorusChar> = space.characters().collect();
    let generic: usize = all
        .par_iter()
        .map_init(StabilizerCache::default, |c, th| space.classify(th, c).strongly_generic as usize)
        .sum();
    let q = torus.group().q() as u128;
    let n = torus.n();
    let frac = crate::experiments::distinct_tuple_fraction(q as u64, n);
    let predicted = all.len() as u128 * frac.numer() / frac.denom();
    let mismatch = (generic as u128 != predicted).then(|| format!("{generic} strongly generic, residue count predicts {predicted}"));
    Ok(OracleResult::new("classify-count", torus.key(), all.len(), mismatch, format!("{generic} of {} strongly generic", all.len())))
}

pub const NAMES: [&str; 6] = ["induction", "lagrangian", "inner-product", "frobenius", "orbit", "classify-count"];

/// Runs the named oracles (or all of them) on the first `limit` selected
/// strongly generic characters, under the oracle guard.
pub fn run(inst: &crate::Instance, names: &[String], samples: usize, limit: usize) -> Result<Vec<OracleResult>> {
    let guard = Guard(inst.config.oracle_guard);
    let all = names.iter().any(|n| n == "all");
    let wanted = |n: &str| all || names.iter().any(|m| m == n);
    for n in names {
        if n != "all" && !NAMES.contains(&n.as_str()) {
            bail!("unknown oracle `{n}`; known: {}", NAMES.join(", "));
        }
    }
    let space = &inst.space;
    let selected = inst.select_thetas()?;
    let reports = inst.classify_all(&selected);
    let thetas: Vec<TorusChar> =
        selected.into_iter().zip(reports).filter(|(_, r)| r.strongly_generic).map(|(t, _)| t).take(limit).collect();
    let odd = inst.torus().group().r() % 2 == 1;
    let mut out = Vec::new();
    if wanted("frobenius") {
        out.push(frobenius(inst.torus().split_ring().spec(), guard)?);
    }
    if wanted("classify-count") && inst.torus().is_split() {
        out.push(classify_count(space)?);
    }
    for th in &thetas {
        let needs_dl = wanted("induction") || wanted("inner-product") || wanted("orbit");
        let dl = if needs_dl { Some(AlgebraisedDL::build(space, th, inst.guard)?) } else { None };
        if let Some(dl) = &dl {
            if wanted("induction") {
                out.push(induction(dl, samples, inst.config.seed, guard)?);
            }
            if wanted("inner-product") {
                out.push(inner_product(dl, guard)?);
            }
            if wanted("orbit") {
                out.push(orbit(space, dl, guard)?);
            }
        }
        if wanted("lagrangian") && odd {
            out.push(lagrangian(space, th, guard)?);
        }
    }
    Ok(out)
}
