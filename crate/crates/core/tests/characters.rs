use std::sync::OnceLock;

use proptest::prelude::*;

use hdl_core::chainring::RingSpec;
use hdl_core::dlchar::AlgebraisedDL;
use hdl_core::groups::{GlGroup, Mat, Torus};
use hdl_core::tchar::{StabilizerCache, ThetaSpace, TorusChar};
use hdl_core::Guard;

fn space(key: &str, part: &[usize]) -> ThetaSpace {
    let g = GlGroup::new(2, RingSpec::parse(key).unwrap()).unwrap();
    ThetaSpace::new(&Torus::new(&g, part, Guard::default()).unwrap(), Guard::default()).unwrap()
}

fn split_q3_r3() -> &'static ThetaSpace {
    static S: OnceLock<ThetaSpace> = OnceLock::new();
    S.get_or_init(|| space("mixed:p3:e1:r3:a1", &[1, 1]))
}

struct Fixture {
    space: ThetaSpace,
    dl: AlgebraisedDL,
    elems: Vec<Mat>,
}

fn q2_r3() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let s = space("mixed:p2:e1:r3:a1", &[2]);
        let mut cache = StabilizerCache::default();
        let th = s.characters().find(|t| s.classify(t, &mut cache).strongly_generic).unwrap();
        let dl = AlgebraisedDL::build(&s, &th, Guard::default()).unwrap();
        let elems = s.torus().group().elements(Guard::default()).unwrap().collect();
        Fixture { space: s, dl, elems }
    })
}

fn theta(s: &ThetaSpace, raw: &[u64]) -> TorusChar {
    let orders = s.torus().generator_orders();
    TorusChar::new(raw.iter().zip(&orders).map(|(e, o)| e % o).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn beta_is_additive(a in prop::collection::vec(0u64..1000, 2), b in prop::collection::vec(0u64..1000, 2)) {
        let s = split_q3_r3();
        let (ta, tb) = (theta(s, &a), theta(s, &b));
        let sum: Vec<u64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let lhs = s.beta(&theta(s, &sum));
        let rhs = s.beta(&ta).add(s.lie_ring(), &s.beta(&tb));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn classification_is_consistent(a in prop::collection::vec(0u64..1000, 2)) {
        let s = split_q3_r3();
        let mut cache = StabilizerCache::default();
        let rep = s.classify(&theta(s, &a), &mut cache);
        prop_assert!(rep.consistent(), "{:?}", rep);
    }

    #[test]
    fn weyl_twist_preserves_genericity(a in prop::collection::vec(0u64..1000, 2)) {
        let s = split_q3_r3();
        let th = theta(s, &a);
        let mut cache = StabilizerCache::default();
        let flag = s.classify(&th, &mut cache).strongly_generic;
        for w in 0..s.weyl().len() {
            prop_assert_eq!(s.classify(&s.w_twist(w, &th), &mut cache).strongly_generic, flag);
        }
    }

    #[test]
    fn induced_character_is_a_class_function(i in 0usize..1536, j in 0usize..1536) {
        let f = q2_r3();
        let g = f.space.torus().group();
        let (x, h) = (&f.elems[i % f.elems.len()], &f.elems[j % f.elems.len()]);
        let conj = g.conj(h, x).unwrap();
        prop_assert_eq!(f.dl.value(x).unwrap(), f.dl.value(&conj).unwrap());
    }
}

#[test]
fn twisted_characters_induce_the_same_character() {
    let f = q2_r3();
    let s = &f.space;
    let tw = s.w_twist(1, f.dl.theta());
    assert_ne!(&tw, f.dl.theta());
    let other = AlgebraisedDL::build(s, &tw, Guard::default()).unwrap();
    for x in f.elems.iter().step_by(7) {
        assert_eq!(f.dl.value(x).unwrap(), other.value(x).unwrap());
    }
}
