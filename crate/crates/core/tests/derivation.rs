use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stratlam::corpus::{identity, self_application};
use stratlam::derivation::json::{load_str, to_json_string};
use stratlam::derivation::*;
use stratlam::inference::{infer_sn, DEFAULT_INFER_FUEL};
use stratlam::names::name;
use stratlam::term::{is_sn, random_closed_term, SnVerdict, DEFAULT_SN_FUEL};
use stratlam::types::{parse_type, type_eq, Type};

fn t(s: &str) -> Type {
    parse_type(s).unwrap()
}

#[test]
fn builders_reject_bad_premises() {
    assert!(ax(name("x"), t("{a}")).is_err());
    let x = ax(name("x"), t("a")).unwrap();
    assert!(weak(x.clone(), name("x"), t("b")).is_err());
    assert!(loll_e(x.clone(), x.clone()).is_err());
    assert!(mux(x.clone(), vec![], name("y")).is_err());
    assert!(strat(vec![]).is_err());
    assert!(loll_i(x.clone(), name("y")).is_err());
}

#[test]
fn self_application_measures() {
    let d = self_application().unwrap();
    check(&d).unwrap();
    assert!(type_eq(d.ty(), &t("{a -o b, a} -o b")));
    assert_eq!(weight_at(&d, 1), 4u32.into());
    assert_eq!(degree(&d), 0);
    assert_eq!(rank(&identity().unwrap()), 1);
    assert_eq!(rank(&d), 2);
}

#[test]
fn stratification_counts_in_degree() {
    let y = ax(name("y"), t("a")).unwrap();
    let z = ax(name("y"), t("b")).unwrap();
    let s = strat(vec![y, z]).unwrap();
    check(&s).unwrap();
    assert!(type_eq(s.ty(), &t("{a, b}")));
    assert!(type_eq(s.ctx().get("y").unwrap(), &t("{a, b}")));
    assert_eq!(degree(&s), 1);
    // size 1 weighted twice at r = 2
    assert_eq!(weight_at(&s, 2), 2u32.into());
}

#[test]
fn loading_rechecks() {
    let d = self_application().unwrap();
    let text = to_json_string(&d);
    let back = load_str(&text).unwrap();
    assert!(back.subject().alpha_eq(d.subject()));
    let tampered = text.replacen("\"LollI\"", "\"W\"", 1);
    assert!(load_str(&tampered).is_err());
    assert!(load_str("{\"system\": \"STR\"}").is_err());
}

#[test]
fn checker_reports_the_outermost_failure() {
    let f = ax(name("f"), t("a -o b")).unwrap();
    let good = loll_e(f, ax(name("x"), t("a")).unwrap()).unwrap();
    let mut bad = good.clone();
    let mut arg = bad.premises[1].as_ref().clone();
    arg.concl.ty = t("c");
    bad.premises[1] = Arc::new(arg);
    let v = check(&bad).unwrap_err();
    assert_eq!((v.path.as_slice(), v.reason), (&[][..], "arg-type-mismatch"));
    // a fault visible only inside the premise
    let mut bad = good.clone();
    let mut arg = bad.premises[1].as_ref().clone();
    arg.meta = Meta::Ax { var: name("x"), ty: t("{a}") };
    bad.premises[1] = Arc::new(arg);
    let v = check(&bad).unwrap_err();
    assert_eq!((v.path.as_slice(), v.reason), (&[1usize][..], "axiom-not-linear"));
}

fn arb_typed() -> impl Strategy<Value = Derivation> {
    (any::<u64>(), 3u64..12).prop_filter_map("not typable", |(seed, size)| {
        let m = random_closed_term(&mut ChaCha8Rng::seed_from_u64(seed), size)?;
        if is_sn(&m, DEFAULT_SN_FUEL) != SnVerdict::Yes {
            return None;
        }
        infer_sn(&m, DEFAULT_INFER_FUEL).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn json_round_trip(d in arb_typed()) {
        let back = load_str(&to_json_string(&d)).unwrap();
        prop_assert!(back.subject().alpha_eq(d.subject()));
        prop_assert!(type_eq(back.ty(), d.ty()));
        prop_assert_eq!(back.node_count(), d.node_count());
        prop_assert_eq!(weight_at(&back, 3), weight_at(&d, 3));
    }

    #[test]
    fn renaming_locals_keeps_the_judgment(d in arb_typed()) {
        let e = freshen_locals(&d).unwrap();
        check(&e).unwrap();
        prop_assert!(e.subject().alpha_eq(d.subject()));
        prop_assert!(type_eq(e.ty(), d.ty()));
        prop_assert_eq!(degree(&e), degree(&d));
    }

    #[test]
    fn measures_are_consistent(d in arb_typed()) {
        let m = measures(&d).unwrap();
        prop_assert_eq!(m.degree, degree(&d));
        prop_assert_eq!(m.rank, rank(&d));
        prop_assert_eq!(weight_at(&d, 1), d.subject().size().into());
        // weight grows with the point
        prop_assert!(weight_at(&d, 2) <= weight_at(&d, 3));
    }
}
