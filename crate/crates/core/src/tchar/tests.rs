use super::*;
use crate::chainring::RingSpec;
use crate::groups::GlGroup;
use std::collections::BTreeMap as Map;

fn space(n: usize, key: &str, part: &[usize]) -> ThetaSpace {
    let g = GlGroup::new(n, RingSpec::parse(key).unwrap()).unwrap();
    let t = Torus::new(&g, part, Guard::default()).unwrap();
    ThetaSpace::new(&t, Guard::default()).unwrap()
}

#[test]
fn separability() {
    let f = ChainRing::new(RingSpec::parse("mixed:p3:e1:r1:a1").unwrap()).unwrap();
    let c = |k| f.from_int(k);
    // x^2 - 1 separable, x^2 separable no, x^2 + 1 irreducible separable
    assert!(is_separable(&f, &[c(-1), c(0), c(1)]));
    assert!(!is_separable(&f, &[c(0), c(0), c(1)]));
    assert!(is_separable(&f, &[c(1), c(0), c(1)]));
    // (x-1)^3 in characteristic 3
    assert!(!is_separable(&f, &[c(-1), c(3), c(-3), c(1)]));
    let f2 = ChainRing::new(RingSpec::parse("mixed:p2:e1:r1:a1").unwrap()).unwrap();
    let d = |k| f2.from_int(k);
    assert!(is_separable(&f2, &[d(0), d(1), d(1)]));
    assert!(!is_separable(&f2, &[d(1), d(0), d(1)]));
}

#[test]
fn beta_fast_matches_direct_and_defining_identity() {
    for (key, part) in [("mixed:p3:e1:r3:a1", [1usize, 1].as_slice()), ("mixed:p3:e1:r2:a1", &[2]), ("equal:p2:e1:r3:a1", &[2])] {
        let s = space(2, key, part);
        let lie = s.lie_ring();
        for (idx, th) in s.characters().enumerate() {
            let b = s.beta(&th);
            assert_eq!(b, s.beta_direct(&th).unwrap());
            for t in s.torus().generators() {
                let tm = s.torus().point(&t).reduce_level(s.torus().group().ring(), s.lp);
                assert_eq!(tm.mul(lie, &b), b.mul(lie, &tm), "β commutes with T");
            }
            if idx % 17 == 0 {
                assert!(s.verify_beta(&th, &b, Guard::default()).unwrap());
            }
        }
    }
}

#[test]
fn beta_is_a_bijection_onto_lie_torus_quotient() {
    let s = space(2, "mixed:p3:e1:r3:a1", &[1, 1]);
    let mut per_beta: Map<Mat, u64> = Map::new();
    for th in s.characters() {
        *per_beta.entry(s.beta(&th)).or_default() += 1;
    }
    // β ranges over Lie(T)(F_3), 9 values, each hit |T^F|/9 = 36 times
    assert_eq!(per_beta.len(), 9);
    assert!(per_beta.values().all(|&c| c == 36));
}

#[test]
fn split_gl2_q3_r3_counts() {
    let s = space(2, "mixed:p3:e1:r3:a1", &[1, 1]);
    assert_eq!(s.count(), 324);
    let mut cache = StabilizerCache::default();
    let mut sg = 0;
    for th in s.characters() {
        let rep = s.classify(&th, &mut cache);
        assert!(rep.consistent(), "{th:?}: {rep:?}");
        sg += rep.strongly_generic as u32;
    }
    assert_eq!(sg, 216);
}

#[test]
fn flags_agree_on_small_panel() {
    let panel = [
        (2, "mixed:p2:e1:r2:a1", vec![1, 1]),
        (2, "mixed:p2:e1:r2:a1", vec![2]),
        (2, "mixed:p2:e1:r3:a1", vec![1, 1]),
        (2, "mixed:p2:e1:r3:a1", vec![2]),
        (2, "mixed:p3:e1:r2:a1", vec![1, 1]),
        (2, "mixed:p3:e1:r2:a1", vec![2]),
        (2, "mixed:p3:e1:r3:a1", vec![2]),
        (2, "equal:p2:e1:r2:a1", vec![2]),
        (2, "equal:p3:e1:r2:a1", vec![1, 1]),
        (3, "mixed:p2:e1:r2:a1", vec![2, 1]),
        (3, "mixed:p2:e1:r2:a1", vec![3]),
    ];
    for (n, key, part) in panel {
        let s = space(n, key, &part);
        let mut cache = StabilizerCache::default();
        let mut regular = 0u64;
        for th in s.characters() {
            let rep = s.classify(&th, &mut cache);
            assert!(rep.consistent(), "{key} {part:?} {th:?}: {rep:?}");
            regular += rep.regular_normmap as u64;
        }
        assert!(regular > 0 || (n == 3 && part == [1, 1, 1]), "{key} {part:?}");
    }
}

#[test]
fn general_position_is_weaker_than_regularity() {
    // θ = θ1 ⊗ θ2 with θ1 ≠ θ2 but equal on T^{r-1}: general position, not regular
    let s = space(2, "mixed:p3:e1:r2:a1", &[1, 1]);
    let witness = s.characters().find(|th| s.is_general_position(th) && !s.is_regular_normmap(th));
    assert!(witness.is_some());
}

#[test]
fn weyl_twist() {
    for part in [[1usize, 1].as_slice(), &[2]] {
        let s = space(2, "mixed:p3:e1:r2:a1", part);
        let w = s.weyl().iter().position(|w| w.perm[0] != 0).unwrap();
        for th in s.characters() {
            let tw = s.w_twist(w, &th);
            assert_eq!(s.w_twist(w, &tw), th);
            assert_eq!(tw == th, !s.is_general_position(&th));
            for t in s.torus().generators() {
                let wt = s.torus().weyl_act(&s.weyl()[w], &t);
                assert_eq!(s.value(&tw, &wt), s.value(&th, &t));
            }
        }
    }
}

#[test]
fn regular_fraction_split_r2() {
    for (key, frac) in [("mixed:p3:e1:r2:a1", (2u64, 3u64)), ("mixed:p3:e2:r2:a1", (8, 9))] {
        let s = space(2, key, &[1, 1]);
        let total = s.count();
        let reg = s.characters().filter(|th| s.is_regular_normmap(th)).count() as u64;
        let reg_b = s.characters().filter(|th| s.is_regular_beta(th)).count() as u64;
        assert_eq!(reg * frac.1, total * frac.0);
        assert_eq!(reg, reg_b);
    }
}
