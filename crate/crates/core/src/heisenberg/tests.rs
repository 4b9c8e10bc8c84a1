use super::*;
use crate::chainring::RingSpec;
use crate::groups::GlGroup;
use crate::tchar::StabilizerCache;

fn space(n: usize, key: &str, part: &[usize]) -> ThetaSpace {
    let g = GlGroup::new(n, RingSpec::parse(key).unwrap()).unwrap();
    let t = Torus::new(&g, part, Guard::default()).unwrap();
    ThetaSpace::new(&t, Guard::default()).unwrap()
}

fn generic(s: &ThetaSpace, count: usize, step: usize) -> Vec<TorusChar> {
    let mut cache = StabilizerCache::default();
    s.characters().filter(|th| s.classify(th, &mut cache).strongly_generic).step_by(step).take(count).collect()
}

fn q_int(k: i128) -> CycloNum {
    CycloNum::from_int(k)
}

#[test]
fn symplectic_space_split_q3() {
    let s = space(2, "mixed:p3:e1:r3:a1", &[1, 1]);
    for th in generic(&s, 5, 7) {
        let v = SymplecticSpace::build(&s, &th).unwrap();
        assert_eq!(v.dim(), 2);
        let pm = v.pairing();
        assert_eq!(pm[0][0], 0);
        assert_ne!(pm[0][1], 0);
        assert_eq!((pm[0][1] + pm[1][0]) % 3, 0);
        for (k, h) in v.basis_lifts().iter().enumerate() {
            let mut unit = vec![0; 2];
            unit[k] = 1;
            assert_eq!(v.coords(h).unwrap(), unit);
        }
    }
}

#[test]
fn symplectic_space_q4_has_dim_4() {
    let s = space(2, "mixed:p2:e2:r3:a1", &[1, 1]);
    let th = generic(&s, 1, 1).pop().unwrap();
    let v = SymplecticSpace::build(&s, &th).unwrap();
    assert_eq!(v.dim(), 4);
    assert_eq!(fp::rank(v.pairing(), 2), 4);
    for x in v.vectors() {
        assert_eq!(v.form(&x, &x), 0);
    }
    assert_eq!(v.greedy_lagrangian().len(), 2);
}

#[test]
fn rejects_non_generic_and_even_r() {
    let s = space(2, "mixed:p3:e1:r3:a1", &[1, 1]);
    let triv = TorusChar::new(vec![0; s.torus().generator_orders().len()]);
    assert!(matches!(SymplecticSpace::build(&s, &triv), Err(Error::Genericity(_))));
    let s2 = space(2, "mixed:p3:e1:r2:a1", &[1, 1]);
    let th = generic(&s2, 1, 1).pop().unwrap();
    assert!(SymplecticSpace::build(&s2, &th).is_err());
}

#[test]
fn heisenberg_lift_q3_r3() {
    for part in [[1usize, 1].as_slice(), &[2]] {
        let s = space(2, "mixed:p3:e1:r3:a1", part);
        for th in generic(&s, 2, 11) {
            let rho = HeisenbergRep::build(SymplecticSpace::build(&s, &th).unwrap()).unwrap();
            assert_eq!(rho.dim(), 3);
            let torus = s.torus();
            let z = torus.tg_elements(1, 2, Guard::default()).unwrap();
            assert!(rho.check_central(&z).unwrap());
            assert_eq!(rho.norm_by_cosets().unwrap(), CycloNum::one());
            assert_eq!(rho.norm_exhaustive(Guard::default()).unwrap(), CycloNum::one());
            let h = torus.tg_elements(1, 1, Guard::default()).unwrap();
            let third = Rational::new(1, 3);
            for x in h.iter().step_by(13) {
                assert_eq!(rho.trace(x).unwrap(), rho.induced_from_center(x).unwrap().scale(third));
            }
        }
    }
}

#[test]
fn chi_l_is_a_character() {
    let s = space(2, "mixed:p2:e1:r3:a1", &[2]);
    let th = generic(&s, 1, 1).pop().unwrap();
    let rho = HeisenbergRep::build(SymplecticSpace::build(&s, &th).unwrap()).unwrap();
    let g = s.torus().group();
    let h = s.torus().tg_elements(1, 1, Guard::default()).unwrap();
    let k: Vec<Mat> = h.into_iter().filter(|x| rho.chi_l(x).is_ok()).collect();
    assert_eq!(k.len() as u64 * rho.dim() as u64, s.torus().tg_order(1, 1));
    for a in k.iter().step_by(3) {
        for b in k.iter().step_by(5) {
            let ab = g.mul(a, b);
            assert_eq!(rho.chi_l(&ab).unwrap(), rho.chi_l(a).unwrap().mul(rho.chi_l(b).unwrap()));
        }
    }
}

fn dense(ext: &ExtendedRep, g: &Mat) -> CMat {
    let torus = ext.rho.space.torus();
    let a = torus.torus_quotient(g).unwrap();
    let code = ext.a_index[&a];
    let h = torus.group().mul(&torus.group().inv(&torus.point(&a)).unwrap(), g);
    ext.m_all[code].mul_monomial(&ext.rho.rho(&h).unwrap()).scale(&ext.lambda_at(code).to_cyclo())
}

#[test]
fn extension_is_a_homomorphism_q2_r3() {
    for part in [[1usize, 1].as_slice(), &[2]] {
        let s = space(2, "mixed:p2:e1:r3:a1", part);
        for th in generic(&s, 2, 3) {
            let mut ext = ExtendedRep::extend(HeisenbergRep::build(SymplecticSpace::build(&s, &th).unwrap()).unwrap()).unwrap();
            for (m, &ord) in ext.intertwiners().iter().zip(&ext.a_orders) {
                assert_eq!(m.pow(ord), CMat::identity(ext.dim()));
            }
            ext.canonical_correction().unwrap();
            let gamma = s.torus().tg_elements(0, 1, Guard::default()).unwrap();
            let g = s.torus().group();
            let mats: Vec<CMat> = gamma.iter().map(|x| dense(&ext, x)).collect();
            for (i, x) in gamma.iter().enumerate() {
                for (j, y) in gamma.iter().enumerate().step_by(29) {
                    let xy = g.mul(x, y);
                    assert_eq!(mats[i].mul(&mats[j]), dense(&ext, &xy));
                }
            }
        }
    }
}

#[test]
fn canonical_extension_values() {
    for (key, part) in [("mixed:p3:e1:r3:a1", [1usize, 1].as_slice()), ("mixed:p3:e1:r3:a1", &[2]), ("mixed:p2:e1:r3:a1", &[1, 1]), ("equal:p3:e1:r3:a1", &[2])] {
        let s = space(2, key, part);
        let torus = s.torus();
        let q = torus.group().q() as i128;
        for th in generic(&s, 2, 5) {
            let rep = CanonicalRep::build(&s, &th).unwrap();
            let ext = rep.extended().unwrap();
            let tr = ext.complement_traces();
            for (pt, t) in ext.complement_points().iter().zip(&tr) {
                let st = SteinbergData::new(torus, pt);
                assert_eq!(t.abs2(), q_int(q.pow(2 * st.phi_s_pos as u32)));
                if st.is_regular() {
                    assert_eq!(t.abs2(), CycloNum::one());
                }
            }
            assert_eq!(rep.trace(&torus.group().identity()).unwrap(), q_int(q));
            let twisted = {
                let mut e = ext.retwisted(&vec![1; ext.complement_generators().len()]);
                e.canonical_correction().unwrap();
                e
            };
            for x in torus.tg_elements(0, 1, Guard::default()).unwrap().iter().step_by(101) {
                assert_eq!(twisted.trace(x).unwrap(), rep.trace(x).unwrap());
            }
        }
    }
}

#[test]
fn value_rule_at_p_prime_elements() {
    let s = space(2, "mixed:p3:e1:r3:a1", &[1, 1]);
    let torus = s.torus();
    let g = torus.group();
    let th = generic(&s, 1, 1).pop().unwrap();
    let rep = CanonicalRep::build(&s, &th).unwrap();
    let mut seen = 0;
    for x in torus.tg_elements(0, 1, Guard::default()).unwrap() {
        if !x.pow(g.ring(), 2).is_identity(g.ring()) {
            continue;
        }
        let s0 = torus.torus_quotient(&x).unwrap();
        let st = SteinbergData::new(torus, &s0);
        let target = torus.pairing(&th.exps, &s0).to_cyclo().scale(Rational::from_integer(st.st_value()));
        assert_eq!(rep.trace(&x).unwrap(), target);
        seen += 1;
    }
    assert!(seen > 4);
}
