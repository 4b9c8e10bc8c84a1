//! The experiments a config can enable, each producing one report table.

use anyhow::{bail, Result};
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use hdl_core::chainring::RingSpec;
use hdl_core::cyclo::{rational_string, CycloNum};
use hdl_core::dlchar::{dim_formula, hill_count, AlgebraisedDL, SteinbergData};
use hdl_core::groups::{GlGroup, Torus};
use hdl_core::heisenberg::CanonicalRep;
use hdl_core::tchar::{ThetaSpace, TorusChar};
use hdl_core::Guard;

use crate::config::{Experiment, InstanceConfig};
use crate::instance::Instance;
use crate::report::{ExperimentOutput, RunReport};

/// Rationals as `a/b`, other values in the power-basis form `N:[c_0,...]`.
pub fn show(x: &CycloNum) -> String {
    match x.as_rational() {
        Some(r) => rational_string(&r),
        None => x.to_string(),
    }
}

#[derive(Serialize)]
struct ClassifyRow {
    instance: String,
    generators: String,
    theta: String,
    regular_normmap: bool,
    regular_beta: bool,
    general_position: bool,
    stabilizer_condition: bool,
    stabilizer_bruteforce: bool,
    strongly_generic: bool,
    consistent: bool,
    failing_root: String,
}

pub fn classify(inst: &Instance, thetas: &[TorusChar]) -> Result<ExperimentOutput> {
    let reports = inst.classify_all(thetas);
    let (key, gens) = (inst.key(), inst.generators());
    let rows: Vec<ClassifyRow> = thetas
        .iter()
        .zip(&reports)
        .map(|(th, r)| ClassifyRow {
            instance: key.clone(),
            generators: gens.clone(),
            theta: th.key(),
            regular_normmap: r.regular_normmap,
            regular_beta: r.regular_beta,
            general_position: r.general_position,
            stabilizer_condition: r.stabilizer_condition,
            stabilizer_bruteforce: r.stabilizer_bruteforce,
            strongly_generic: r.strongly_generic,
            consistent: r.consistent(),
            failing_root: r.failing_root.map(|(i, j)| format!("e{i}-e{j}")).unwrap_or_default(),
        })
        .collect();
    let generic = rows.iter().filter(|r| r.strongly_generic).count();
    let passed = rows.iter().all(|r| r.consistent);
    ExperimentOutput::new("classify", &rows, passed, format!("{} characters, {generic} strongly generic", rows.len()))
}

#[derive(Serialize)]
struct BuildRow {
    instance: String,
    generators: String,
    theta: String,
    path: &'static str,
    rho_dim: usize,
    expected_dim: u64,
    epsilon: i64,
    rho_norm: String,
    passed: bool,
}

#[derive(Serialize)]
struct DimRow {
    instance: String,
    generators: String,
    theta: String,
    chi_1: u128,
    value_at_one: String,
    formula: u128,
    passed: bool,
}

#[derive(Serialize)]
struct RssRow {
    instance: String,
    generators: String,
    theta: String,
    regular_points: usize,
    mismatches: usize,
    witness: String,
    passed: bool,
}

#[derive(Serialize)]
struct IrredRow {
    instance: String,
    generators: String,
    theta: String,
    double_cosets: usize,
    inner_product: String,
    passed: bool,
}

#[derive(Serialize)]
struct OmegaRow {
    instance: String,
    generators: String,
    theta: String,
    support: usize,
    multiplicity: String,
    single_orbit: bool,
    regular: bool,
    semisimple: bool,
    matches_beta: bool,
    passed: bool,
}

#[derive(Default)]
struct VerifyRows {
    build: Vec<BuildRow>,
    dim: Vec<DimRow>,
    rss: Vec<RssRow>,
    irred: Vec<IrredRow>,
    omega: Vec<OmegaRow>,
}

fn verify_one(inst: &Instance, th: &TorusChar, exps: &[Experiment]) -> Result<VerifyRows> {
    let space = &inst.space;
    let torus = inst.torus();
    let g = torus.group();
    let guard = inst.guard;
    let dl = AlgebraisedDL::build(space, th, guard)?;
    let (instance, generators, theta) = (inst.key(), inst.generators(), th.key());
    let mut out = VerifyRows::default();
    if exps.contains(&Experiment::Build) {
        let n = g.n() as u32;
        let odd = g.r() % 2 == 1;
        let expected = if odd { g.q().pow(n * (n - 1) / 2) } else { 1 };
        let (path, norm) = match dl.rep() {
            CanonicalRep::Odd(ext) => ("heisenberg", ext.rho().norm_by_cosets()?),
            CanonicalRep::Even { .. } => ("inflation", CycloNum::one()),
        };
        out.build.push(BuildRow {
            instance: instance.clone(),
            generators: generators.clone(),
            theta: theta.clone(),
            path,
            rho_dim: dl.rep().dim(),
            expected_dim: expected,
            epsilon: dl.epsilon(),
            passed: dl.rep().dim() as u64 == expected && norm == CycloNum::one(),
            rho_norm: show(&norm),
        });
    }
    if exps.contains(&Experiment::Dim) {
        let v = dl.value(&g.identity())?;
        let formula = dim_formula(torus);
        out.dim.push(DimRow {
            instance: instance.clone(),
            generators: generators.clone(),
            theta: theta.clone(),
            chi_1: dl.dim(),
            passed: dl.dim() == formula && v.as_integer().ok() == Some(formula as i128),
            value_at_one: show(&v),
            formula,
        });
    }
    if exps.contains(&Experiment::Rss) {
        let mut count = 0;
        let mut bad = Vec::new();
        for pt in torus.teichmuller_points() {
            if !SteinbergData::new(torus, &pt).is_regular() {
                continue;
            }
            count += 1;
            let (a, b) = dl.rss_values(&pt)?;
            if a != b {
                bad.push(format!("{pt:?}: {} != {}", show(&a), show(&b)));
            }
        }
        out.rss.push(RssRow {
            instance: instance.clone(),
            generators: generators.clone(),
            theta: theta.clone(),
            regular_points: count,
            mismatches: bad.len(),
            witness: bad.first().cloned().unwrap_or_default(),
            passed: count > 0 && bad.is_empty(),
        });
    }
    if exps.contains(&Experiment::Irred) {
        let ip = dl.inner_product_mackey(guard)?;
        out.irred.push(IrredRow {
            instance: instance.clone(),
            generators: generators.clone(),
            theta: theta.clone(),
            double_cosets: dl.double_cosets()?.len(),
            passed: ip.as_integer().ok() == Some(1),
            inner_product: show(&ip),
        });
    }
    if exps.contains(&Experiment::Omega) {
        let om = dl.omega(space, guard)?;
        out.omega.push(OmegaRow {
            instance,
            generators,
            theta,
            support: om.support.len(),
            multiplicity: om.multiplicity.map(|m| m.to_string()).unwrap_or_default(),
            single_orbit: om.single_orbit,
            regular: om.regular,
            semisimple: om.semisimple,
            matches_beta: om.matches_beta,
            passed: om.passes(),
        });
    }
    Ok(out)
}

/// Builds `ε·Ind ρ̂_θ` for each θ and runs the enabled per-character checks.
pub fn verify(inst: &Instance, thetas: &[TorusChar], exps: &[Experiment]) -> Result<Vec<ExperimentOutput>> {
    let per: Vec<VerifyRows> = thetas.par_iter().map(|th| verify_one(inst, th, exps)).collect::<Result<_>>()?;
    let mut rows = VerifyRows::default();
    for v in per {
        rows.build.extend(v.build);
        rows.dim.extend(v.dim);
        rows.rss.extend(v.rss);
        rows.irred.extend(v.irred);
        rows.omega.extend(v.omega);
    }
    let mut out = Vec::new();
    let summary = |n: usize, ok: usize| format!("{ok}/{n} characters pass");
    macro_rules! emit {
        ($exp:expr, $rows:expr) => {
            if exps.contains(&$exp) {
                let ok = $rows.iter().filter(|r| r.passed).count();
                out.push(ExperimentOutput::new(
                    $exp.name(),
                    &$rows,
                    ok == $rows.len() && !$rows.is_empty(),
                    summary($rows.len(), ok),
                )?);
            }
        };
    }
    emit!(Experiment::Build, rows.build);
    emit!(Experiment::Dim, rows.dim);
    emit!(Experiment::Irred, rows.irred);
    emit!(Experiment::Omega, rows.omega);
    emit!(Experiment::Rss, rows.rss);
    Ok(out)
}

#[derive(Serialize, Clone, Debug)]
pub struct DensityRow {
    pub instance: String,
    pub generators: String,
    pub m: u32,
    pub characters: u64,
    pub regular_normmap: u64,
    pub regular_beta: u64,
    pub fraction: String,
    /// Residue counting: `n`-tuples of distinct elements of `F_{q^m}` over all tuples.
    pub oracle: String,
    pub passed: bool,
}

/// Fraction of distinct-entry `n`-tuples over `F_Q`.
pub fn distinct_tuple_fraction(qm: u64, n: usize) -> Ratio<u128> {
    let mut num = 1u128;
    for i in 0..n as u128 {
        num *= qm as u128 - i.min(qm as u128);
    }
    Ratio::new(num, (qm as u128).pow(n as u32))
}

/// Regular fractions for the split torus over `F_{q^m}`, `m = 1..=max_m`.
pub fn density_rows(config: &InstanceConfig, guard: Guard) -> Result<Vec<DensityRow>> {
    if config.torus.iter().any(|&a| a != 1) {
        bail!("density is defined for the split torus");
    }
    let base = RingSpec::parse(&config.ring)?;
    let mut rows = Vec::new();
    for m in 1..=config.density_max_m {
        let spec = RingSpec::new(base.kind, base.p, base.e * m, base.r, 1);
        let group = GlGroup::new(config.n, spec)?;
        let torus = Torus::new(&group, &config.torus, guard)?;
        let space = ThetaSpace::new(&torus, guard)?;
        let all: Vec<TorusChar> = space.characters().collect();
        let (reg, reg_b) = all
            .par_iter()
            .map(|th| (space.is_regular_normmap(th) as u64, space.is_regular_beta(th) as u64))
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        let frac = Ratio::new(reg as u128, all.len() as u128);
        let oracle = distinct_tuple_fraction(spec.q(), config.n);
        let ring = torus.group().ring();
        rows.push(DensityRow {
            instance: torus.key(),
            generators: format!("h=[{}]", ring.inner_modulus().iter().map(u32::to_string).collect::<Vec<_>>().join(" ")),
            m,
            characters: all.len() as u64,
            regular_normmap: reg,
            regular_beta: reg_b,
            fraction: frac.to_string(),
            oracle: oracle.to_string(),
            passed: reg == reg_b && frac == oracle,
        });
    }
    Ok(rows)
}

/// Whether the fractions increase strictly with `m`.
pub fn density_monotone(rows: &[DensityRow]) -> bool {
    let fr: Vec<Ratio<u128>> = rows.iter().map(|r| Ratio::new(r.regular_normmap as u128, r.characters as u128)).collect();
    fr.windows(2).all(|w| w[0] < w[1]) && fr.iter().all(|f| *f < Ratio::from_integer(1))
}

pub fn density(inst: &Instance) -> Result<ExperimentOutput> {
    let rows = density_rows(&inst.config, inst.guard)?;
    let monotone = density_monotone(&rows);
    let passed = monotone && rows.iter().all(|r| r.passed);
    let fr: Vec<&str> = rows.iter().map(|r| r.fraction.as_str()).collect();
    ExperimentOutput::new("density", &rows, passed, format!("fractions {} (monotone: {monotone})", fr.join(", ")))
}

#[derive(Serialize)]
struct HillRow {
    instance: String,
    generators: String,
    s: String,
    thetas: usize,
    characters: usize,
    /// `|T_{r−1}^F|`, the count the construction predicts.
    level_quotient: u64,
    /// `|(T^{r−1})^F|`.
    level_kernel: u64,
    twists_agree: bool,
    passed: bool,
}

/// Counts distinct characters over the orbit of `β mod π` of the first strongly generic θ.
pub fn hill(inst: &Instance, thetas: &[TorusChar]) -> Result<ExperimentOutput> {
    let reports = inst.classify_all(thetas);
    let picked = thetas.iter().zip(reports).find(|(_, r)| r.strongly_generic).map(|(t, _)| t.clone());
    let th = match picked.or_else(|| inst.strongly_generic().into_iter().next()) {
        Some(t) => t,
        None => bail!("no strongly generic character on {}", inst.key()),
    };
    let s = inst.space.beta_residue(&th);
    let h = hill_count(&inst.space, &s, inst.guard)?;
    let row = HillRow {
        instance: inst.key(),
        generators: inst.generators(),
        s: format!("{s:?}"),
        thetas: h.thetas,
        characters: h.characters,
        level_quotient: h.level_quotient,
        level_kernel: h.level_kernel,
        twists_agree: h.twists_agree,
        passed: h.characters as u64 == h.level_quotient && h.twists_agree,
    };
    let summary = format!("{} distinct characters from {} regular θ", h.characters, h.thetas);
    ExperimentOutput::new("hill", &[row], h.characters as u64 == h.level_quotient && h.twists_agree, summary)
}

/// Runs every enabled experiment of the config on a thread pool of the configured size.
pub fn run(config: &InstanceConfig) -> Result<RunReport> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.threads).build()?;
    pool.install(|| {
        let inst = Instance::new(config.clone())?;
        let thetas = inst.select_thetas()?;
        let mut experiments = Vec::new();
        let exps = &config.experiments;
        if exps.contains(&Experiment::Classify) {
            experiments.push(classify(&inst, &thetas)?);
        }
        let per_theta: Vec<Experiment> = exps
            .iter()
            .copied()
            .filter(|e| matches!(e, Experiment::Build | Experiment::Dim | Experiment::Rss | Experiment::Irred | Experiment::Omega))
            .collect();
        if !per_theta.is_empty() {
            // with `all`, only the strongly generic characters can be built
            let build_set: Vec<TorusChar> = match config.theta {
                crate::config::ThetaSelector::All => {
                    let reports = inst.classify_all(&thetas);
                    thetas.iter().zip(reports).filter(|(_, r)| r.strongly_generic).map(|(t, _)| t.clone()).collect()
                }
                _ => thetas.clone(),
            };
            experiments.extend(verify(&inst, &build_set, &per_theta)?);
        }
        if exps.contains(&Experiment::Density) {
            experiments.push(density(&inst)?);
        }
        if exps.contains(&Experiment::Hill) {
            experiments.push(hill(&inst, &thetas)?);
        }
        Ok(RunReport { instance: inst.key(), generators: inst.generators(), config: config.clone(), experiments })
    })
}
