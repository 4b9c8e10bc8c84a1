//! A configured instance: the group, torus and character space, plus θ selection.

use anyhow::{bail, Result};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use hdl_core::chainring::RingSpec;
use hdl_core::groups::{GlGroup, Torus};
use hdl_core::tchar::{GenericityReport, StabilizerCache, ThetaSpace, TorusChar};
use hdl_core::Guard;

use crate::config::{Experiment, InstanceConfig, ThetaSelector};

pub struct Instance {
    pub config: InstanceConfig,
    pub space: ThetaSpace,
    pub guard: Guard,
}

fn sat(x: u128) -> u64 {
    u64::try_from(x).unwrap_or(u64::MAX)
}

impl Instance {
    pub fn new(config: InstanceConfig) -> Result<Self> {
        let guard = Guard(config.guard);
        let group = GlGroup::new(config.n, RingSpec::parse(&config.ring)?)?;
        let torus = Torus::new(&group, &config.torus, guard)?;
        let inst = Instance { space: ThetaSpace::new(&torus, guard)?, config, guard };
        inst.check_guards()?;
        Ok(inst)
    }

    pub fn torus(&self) -> &Torus {
        self.space.torus()
    }

    pub fn key(&self) -> String {
        self.torus().key()
    }

    /// Generator choices every report row is tied to: the moduli of the base
    /// and splitting rings and the orders of the torus generators.
    pub fn generators(&self) -> String {
        let t = self.torus();
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
        let orders: Vec<String> = t.generator_orders().iter().map(u64::to_string).collect();
        format!(
            "h=[{}];h_split=[{}];orders=[{}]",
            join(t.group().ring().inner_modulus()),
            join(t.split_ring().inner_modulus()),
            orders.join(" ")
        )
    }

    /// Rejects the instance if an enabled experiment would exceed the guard.
    pub fn check_guards(&self) -> Result<()> {
        let t = self.torus();
        let g = t.group();
        let lp = g.l_prime();
        let index = sat(g.order() / t.tg_order(0, lp) as u128);
        let q = g.q();
        let nn = (g.n() * g.n()) as u32;
        for e in &self.config.experiments {
            let (what, size) = match e {
                Experiment::Classify => ("classify: characters", self.space.count()),
                Experiment::Build | Experiment::Dim | Experiment::Rss => ("build: transversal", index),
                Experiment::Irred => ("irred: (TG^l')^F", t.tg_order(0, lp).max(index)),
                Experiment::Omega => ("omega: top-level sum", q.saturating_pow(nn).saturating_mul(index)),
                Experiment::Hill => ("hill: G^F", sat(g.order())),
                Experiment::Density => (
                    "density: GL_n(F_{q^m})",
                    q.saturating_pow(nn * self.config.density_max_m),
                ),
            };
            self.guard.check(what, size)?;
        }
        Ok(())
    }

    pub fn classify_all(&self, thetas: &[TorusChar]) -> Vec<GenericityReport> {
        thetas
            .par_iter()
            .map_init(StabilizerCache::default, |cache, th| self.space.classify(th, cache))
            .collect()
    }

    pub fn strongly_generic(&self) -> Vec<TorusChar> {
        let all: Vec<TorusChar> = self.space.characters().collect();
        let reports = self.classify_all(&all);
        all.into_iter().zip(reports).filter(|(_, r)| r.strongly_generic).map(|(t, _)| t).collect()
    }

    /// The characters selected by the config, in a deterministic order.
    pub fn select_thetas(&self) -> Result<Vec<TorusChar>> {
        Ok(match &self.config.theta {
            ThetaSelector::All => self.space.characters().collect(),
            ThetaSelector::StronglyGeneric => self.strongly_generic(),
            ThetaSelector::Sample(k) => {
                let pool = self.strongly_generic();
                let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
                let mut idx = sample(&mut rng, pool.len(), (*k).min(pool.len())).into_vec();
                idx.sort_unstable();
                idx.into_iter().map(|i| pool[i].clone()).collect()
            }
            ThetaSelector::Explicit(list) => {
                let orders = self.torus().generator_orders();
                for t in list {
                    if t.len() != orders.len() {
                        bail!("theta {t:?} needs {} exponents", orders.len());
                    }
                }
                list.iter()
                    .map(|t| TorusChar::new(t.iter().zip(&orders).map(|(e, o)| e % o).collect()))
                    .collect()
            }
        })
    }
}
