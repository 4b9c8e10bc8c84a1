use alloc::vec::Vec;

use super::{conjugation_orbit, value_table, AlgebraisedDL};
use crate::cyclo::CycloNum;
use crate::groups::Mat;
use crate::tchar::{charpoly, is_separable, ThetaSpace};
use crate::{Error, Guard, Result};

/// Distinct characters `χ` whose orbit is that of a regular `s ∈ M_n(F_q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HillCount {
    /// Regular `θ` with `β mod π` in the orbit of `s`.
    pub thetas: usize,
    /// Distinct characters among them, compared on all of `G^F`.
    pub characters: usize,
    /// `|T_{r−1}^F|`.
    pub level_quotient: u64,
    /// `|(T^{r−1})^F|`.
    pub level_kernel: u64,
    /// Weyl-twisted characters give the same `χ`.
    pub twists_agree: bool,
}

pub fn hill_count(space: &ThetaSpace, s: &Mat, guard: Guard) -> Result<HillCount> {
    let torus = space.torus();
    let g = torus.group();
    let f = g.level_ring(1);
    let r = g.r();
    if !is_separable(f, &charpoly(f, s)) {
        return Err(Error::InvalidSpec("s is not regular".into()));
    }
    let orbit = conjugation_orbit(g.level_elements(1, guard)?, f, s);
    let elems: Vec<Mat> = g.elements(guard)?.collect();
    let thetas: Vec<_> = space.characters().filter(|th| space.is_regular_normmap(th) && orbit.contains(&space.beta_residue(th))).collect();

    let mut tables: Vec<Vec<CycloNum>> = Vec::new();
    let mut keyed = Vec::with_capacity(thetas.len());
    for th in &thetas {
        let dl = AlgebraisedDL::build(space, th, guard)?;
        let table = value_table(&dl, &elems)?;
        let idx = match tables.iter().position(|t| *t == table) {
            Some(i) => i,
            None => {
                tables.push(table);
                tables.len() - 1
            }
        };
        keyed.push((th.clone(), idx));
    }
    let mut twists_agree = true;
    for (th, idx) in &keyed {
        for w in 0..space.weyl().len() {
            let tw = space.w_twist(w, th);
            if let Some((_, j)) = keyed.iter().find(|(t, _)| *t == tw) {
                twists_agree &= j == idx;
            }
        }
    }
    Ok(HillCount {
        thetas: thetas.len(),
        characters: tables.len(),
        level_quotient: torus.level_order(r - 1),
        level_kernel: torus.kernel_order(r - 1),
        twists_agree,
    })
}
