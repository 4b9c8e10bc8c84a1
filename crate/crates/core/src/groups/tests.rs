use super::*;
use crate::chainring::RingSpec;
use std::collections::HashSet;

fn gl(n: usize, key: &str) -> GlGroup {
    GlGroup::new(n, RingSpec::parse(key).unwrap()).unwrap()
}

fn torus(g: &GlGroup, part: &[usize]) -> Torus {
    Torus::new(g, part, Guard::default()).unwrap()
}

#[test]
fn group_orders() {
    let g = gl(2, "mixed:p2:e1:r2:a1");
    assert_eq!(g.order(), 96);
    assert_eq!(g.elements(Guard::default()).unwrap().count(), 96);
    let g = gl(2, "mixed:p3:e1:r3:a1");
    assert_eq!(g.order(), 314_928);
    assert_eq!(g.elements(Guard::default()).unwrap().count(), 314_928);
    let g = gl(2, "equal:p2:e1:r2:a1");
    assert_eq!(g.elements(Guard::default()).unwrap().count(), 96);
    assert!(g.elements(Guard(10)).is_err());
}

#[test]
fn kernel_orders_and_reduction() {
    for key in ["mixed:p2:e1:r4:a1", "mixed:p3:e1:r3:a1", "equal:p3:e1:r2:a1"] {
        let g = gl(2, key);
        for i in 1..=g.r() {
            let k: Vec<Mat> = g.kernel_elements(i, Guard::default()).unwrap().collect();
            assert_eq!(k.len() as u128, g.kernel_order(i));
            assert!(k.iter().all(|x| g.in_kernel(x, i)));
        }
        assert!(g.reduce(&g.identity(), 1).is_identity(g.level_ring(1)));
    }
    let g = gl(2, "mixed:p3:e1:r2:a1");
    let lo = g.level_ring(1);
    let all: Vec<Mat> = g.elements(Guard::default()).unwrap().step_by(37).collect();
    for a in &all {
        for b in all.iter().step_by(5) {
            let lhs = g.reduce(&g.mul(a, b), 1);
            let rhs = g.reduce(a, 1).mul(lo, &g.reduce(b, 1));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn commutators_raise_level() {
    let g = gl(2, "mixed:p2:e1:r4:a1");
    let g1: Vec<Mat> = g.kernel_elements(1, Guard::default()).unwrap().collect();
    let g2: Vec<Mat> = g.kernel_elements(2, Guard::default()).unwrap().collect();
    for a in &g1 {
        for b in &g2 {
            assert!(g.in_kernel(&g.commutator(a, b).unwrap(), 3));
        }
    }
    for a in g1.iter().step_by(7) {
        for b in g1.iter().step_by(11) {
            assert!(g.in_kernel(&g.commutator(a, b).unwrap(), 2));
        }
    }
}

#[test]
fn torus_orders_and_roundtrip() {
    let g = gl(2, "mixed:p3:e1:r3:a1");
    let split = torus(&g, &[1, 1]);
    assert_eq!((split.order(), split.t1_order()), (324, 4));
    let ell = torus(&g, &[2]);
    assert_eq!((ell.order(), ell.t1_order()), (648, 8));
    assert_eq!(ell.key(), "gl2:r3:q3:torus(2)");
    for key in ["mixed:p2:e1:r2:a1", "equal:p2:e1:r2:a1", "mixed:p2:e2:r2:a1"] {
        let g = gl(2, key);
        for part in [&[1usize, 1][..], &[2][..]] {
            let t = torus(&g, part);
            let pts = t.points(Guard::default()).unwrap();
            assert_eq!(pts.len() as u64, t.order());
            for p in &pts {
                let m = t.point(p);
                assert!(m.is_rational(g.ring()) && m.is_invertible(g.ring()));
                assert!(t.in_torus(&m));
                assert_eq!(t.coords(&m), *p);
                assert!(t.to_diag(&m).is_diagonal(t.split_ring()));
            }
        }
    }
    let g3 = gl(3, "mixed:p2:e1:r2:a1");
    for part in [&[1usize, 1, 1][..], &[2, 1][..], &[3][..]] {
        let t = torus(&g3, part);
        let expected: u64 = part.iter().map(|&a| 2u64.pow(a as u32) - 1).product();
        assert_eq!(t.t1_order(), expected);
        for p in t.points(Guard::default()).unwrap().iter().step_by(3) {
            assert!(t.to_diag(&t.point(p)).is_diagonal(t.split_ring()));
        }
    }
}

#[test]
fn torus_structure_matches_points() {
    let g = gl(2, "mixed:p3:e1:r2:a1");
    for part in [&[1usize, 1][..], &[2][..]] {
        let t = torus(&g, part);
        assert_eq!(t.generator_orders().iter().product::<u64>(), t.order());
        for p in t.points(Guard::default()).unwrap() {
            assert_eq!(t.from_log(&t.log(&p)), p);
        }
    }
}

#[test]
fn frobenius_permutes_root_subgroups() {
    let g = gl(2, "mixed:p3:e1:r3:a1");
    for part in [&[1usize, 1][..], &[2][..]] {
        let t = torus(&g, part);
        let s = t.split_ring();
        for alpha in t.roots() {
            let beta = t.frob_root(alpha);
            let image: HashSet<Mat> = s
                .residue_elements()
                .map(|c| {
                    let u = Mat::identity(s, 2).add(s, &Mat::unit(2, alpha.0, alpha.1, s.mul_pi_pow(c, 2)));
                    t.from_diag(&u).frobenius_q(s)
                })
                .collect();
            let target: HashSet<Mat> = s
                .residue_elements()
                .map(|c| {
                    let u = Mat::identity(s, 2).add(s, &Mat::unit(2, beta.0, beta.1, s.mul_pi_pow(c, 2)));
                    t.from_diag(&u)
                })
                .collect();
            assert_eq!(image, target);
        }
    }
}

#[test]
fn t_component_examples() {
    let g = gl(2, "mixed:p3:e1:r3:a1");
    let t = torus(&g, &[1, 1]);
    let ring = g.ring();
    for p in t.points(Guard::default()).unwrap().iter().step_by(13) {
        assert_eq!(t.t_component(&t.point(p)).unwrap(), *p);
    }
    let u = g.identity().add(ring, &Mat::unit(2, 0, 1, ring.mul_pi_pow(ring.one(), g.l())));
    assert_eq!(t.t_component(&u).unwrap(), t.identity_point());
    assert!(t.in_u_pm(&u));
    let not_member = g.identity().add(ring, &Mat::unit(2, 0, 1, ring.one()));
    assert!(t.t_component(&not_member).is_err());
}

/// Brute-force factorization oracle: the unique `t ∈ T^F` with `g t^{-1} ∈ U^±`.
fn factor_by_search(t: &Torus, pts: &[TorusPoint], g: &Mat) -> Vec<TorusPoint> {
    let ring = t.group().ring();
    pts.iter()
        .filter(|p| {
            let ti = t.point(p).inv(ring).unwrap();
            t.in_u_pm(&g.mul(ring, &ti))
        })
        .copied()
        .collect()
}

#[test]
fn t_component_matches_factorization_oracle() {
    for key in ["mixed:p2:e1:r3:a1", "equal:p2:e1:r3:a1"] {
        let g = gl(2, key);
        for part in [&[1usize, 1][..], &[2][..]] {
            let t = torus(&g, part);
            let pts = t.points(Guard::default()).unwrap();
            let tg = t.tg_elements(0, g.l(), Guard::default()).unwrap();
            assert_eq!(tg.len() as u64, t.tg_order(0, g.l()));
            for x in tg.iter().step_by(5) {
                let found = factor_by_search(&t, &pts, x);
                assert_eq!(found.len(), 1);
                assert_eq!(t.t_component(x).unwrap(), found[0]);
            }
        }
    }
}

#[test]
fn t_component_is_homomorphism_with_kernel_u_pm() {
    let g = gl(2, "mixed:p2:e1:r3:a1");
    let ring = g.ring();
    for part in [&[1usize, 1][..], &[2][..]] {
        let t = torus(&g, part);
        let tg = t.tg_elements(0, g.l(), Guard::default()).unwrap();
        let mut kernel = 0;
        for a in &tg {
            let ta = t.t_component(a).unwrap();
            if ta == t.identity_point() {
                kernel += 1;
                assert!(t.in_u_pm(a));
            }
            for b in tg.iter().step_by(9) {
                let tb = t.t_component(b).unwrap();
                assert_eq!(t.t_component(&a.mul(ring, b)).unwrap(), t.mul_points(&ta, &tb));
            }
        }
        // |U^±| = q^{#Φ · l'}
        assert_eq!(kernel, 2u64.pow(2 * g.l_prime()));
    }
}

#[test]
fn t_component_independent_of_section() {
    // lifting through coordinates reduced mod π^l gives the same answer
    let g = gl(2, "mixed:p3:e1:r3:a1");
    let ring = g.ring();
    let t = torus(&g, &[2]);
    for x in t.tg_elements(0, g.l(), Guard::default()).unwrap().iter().step_by(101) {
        let t0 = t.point(&t.reduce_point(&t.coords(x), g.l()));
        let y = t0.inv(ring).unwrap().mul(ring, x).sub(ring, &g.identity());
        let alt = t0.mul(ring, &t.lie_torus_part(&y).add(ring, &g.identity()));
        assert_eq!(t.coords(&alt), t.t_component(x).unwrap());
    }
}

#[test]
fn weyl_groups() {
    let g = gl(2, "mixed:p3:e1:r2:a1");
    let split = torus(&g, &[1, 1]);
    let ell = torus(&g, &[2]);
    assert_eq!(split.weyl_elements().unwrap().len(), 2);
    let w = ell.weyl_elements().unwrap();
    assert_eq!(w.len(), 2);
    // the nontrivial element acts on GR^× by Frobenius
    let block = ell.block_ring(0);
    for p in ell.points(Guard::default()).unwrap() {
        let img = ell.weyl_act(&w[1], &p);
        assert_eq!(img.blocks()[0], block.frobenius_q(p.blocks()[0]));
        assert_eq!(ell.weyl_act(&w[0], &p), p);
        assert_eq!(ell.weyl_act_inv(&w[1], &img), p);
    }
    let g3 = gl(3, "mixed:p2:e1:r2:a1");
    assert_eq!(torus(&g3, &[1, 1, 1]).weyl_elements().unwrap().len(), 6);
    assert_eq!(torus(&g3, &[2, 1]).weyl_elements().unwrap().len(), 2);
    assert_eq!(torus(&g3, &[3]).weyl_elements().unwrap().len(), 3);
}

#[test]
fn torus_quotient_morphism() {
    let g = gl(2, "mixed:p2:e1:r3:a1");
    let ring = g.ring();
    let lp = g.l_prime();
    for part in [&[1usize, 1][..], &[2][..]] {
        let t = torus(&g, part);
        let big = t.tg_elements(0, lp, Guard::default()).unwrap();
        assert_eq!(big.len() as u64, t.t1_order() * t.tg_order(1, lp));
        let id = t.identity_point();
        let mut kernel = 0;
        for a in &big {
            let qa = t.torus_quotient(a).unwrap();
            if qa == id {
                kernel += 1;
                assert!(t.in_tg(a, 1, lp));
            }
            for b in big.iter().step_by(17) {
                let qb = t.torus_quotient(b).unwrap();
                assert_eq!(t.torus_quotient(&a.mul(ring, b)).unwrap(), t.mul_points(&qa, &qb));
            }
        }
        assert_eq!(kernel, t.tg_order(1, lp));
    }
}

#[test]
fn norm_images() {
    let g = gl(2, "mixed:p3:e1:r3:a1");
    let split = torus(&g, &[1, 1]);
    for alpha in split.roots() {
        assert_eq!(split.norm_image(alpha).unwrap().len(), 3);
    }
    let ell = torus(&g, &[2]);
    for alpha in ell.roots() {
        let img = ell.norm_image(alpha).unwrap();
        assert_eq!(img.len(), 3);
        for p in &img {
            assert!(ell.in_tg(&ell.point(p), g.r() - 1, g.r()));
        }
    }
}
