use std::sync::Arc;

use stratlam::derivation::{check, degree, weight_at};
use stratlam::names::name;
use stratlam::numerals::{numeral_derivation, word_type, Bit};
use stratlam::sta::corpus::{sta_corpus, sta_numeral, sta_succ, sta_word_type};
use stratlam::sta::json::{load_str, to_json_string};
use stratlam::sta::*;
use stratlam::types::{parse_type, type_eq};

#[test]
fn bang_translates_to_singleton() {
    let t = parse_sta_type("!(a -o a)").unwrap();
    assert!(type_eq(&translate_type(&t), &parse_type("{a -o a}").unwrap()));
    let t = parse_sta_type("!!a").unwrap();
    assert!(type_eq(&translate_type(&t), &parse_type("{{a}}").unwrap()));
    assert!(type_eq(&translate_type(&sta_word_type(2, 3)), &word_type(2, 3)));
}

#[test]
fn parser_rejects_bang_results_and_sets() {
    assert!(parse_sta_type("a -o !a").is_err());
    assert!(parse_sta_type("{a}").is_err());
    assert_eq!(parse_sta_type("!(a -o a) -o a").unwrap().to_string(), "!(a -o a) -o a");
}

#[test]
fn mux_needs_equal_types() {
    let d = StaDerivation::ax(name("x1"), StaType::var("a"))
        .unwrap()
        .loll_e(StaDerivation::ax(name("x2"), StaType::var("b")).unwrap());
    assert!(d.is_err());
    let f = StaDerivation::ax(name("f"), parse_sta_type("a -o b").unwrap()).unwrap();
    let e = f.loll_e(StaDerivation::ax(name("y"), StaType::var("a")).unwrap()).unwrap();
    let bad = StaDerivation {
        meta: StaMeta::M { domain: vec![name("f"), name("y")], range: name("z") },
        ctx: StaContext::from([(name("z"), StaType::bang(StaType::var("a")))]),
        subject: stratlam::term::parse_term("z z").unwrap(),
        ty: StaType::var("b"),
        premises: vec![Arc::new(e)],
    };
    assert_eq!(check_sta(&bad).unwrap_err().reason, "mux-type-mismatch");
}

#[test]
fn promotion_multiplies_weight() {
    let d = StaDerivation::ax(name("y"), StaType::var("b")).unwrap().weak(name("z"), StaType::var("c")).unwrap();
    assert_eq!(sta_degree(&d), 0);
    let f = StaDerivation::ax(name("f"), parse_sta_type("a -o a").unwrap()).unwrap();
    let app = f.loll_e(StaDerivation::ax(name("x"), StaType::var("a")).unwrap()).unwrap();
    assert_eq!(sta_weight_at(&app, 2), 3u32.into());
    let sp = app.sp().unwrap();
    check_sta(&sp).unwrap();
    assert_eq!(sta_weight_at(&sp, 2), 6u32.into());
    assert_eq!(sta_degree(&sp), 1);
}

#[test]
fn numerals_have_degree_zero_in_both_systems() {
    for v in [0, 6, 9] {
        let d = sta_numeral(v, 1, 1).unwrap();
        check_sta(&d).unwrap();
        assert_eq!(sta_degree(&d), 0);
        let t = translate_derivation(&d).unwrap();
        assert_eq!(degree(&t), 0);
        let direct = numeral_derivation(v, 1, 1).unwrap().derivation;
        assert!(type_eq(t.ty(), direct.ty()));
    }
}

#[test]
fn corpus_translates_faithfully() {
    for (label, d) in sta_corpus().unwrap() {
        check_sta(&d).unwrap_or_else(|e| panic!("{label}: {e}"));
        let t = translate_derivation(&d).unwrap();
        check(&t).unwrap();
        assert!(t.subject().alpha_eq(&d.subject), "{label}");
        assert!(type_eq(t.ty(), &translate_type(&d.ty)), "{label}");
        assert!(t.ctx().equiv(&translate_context(&d.ctx)), "{label}");
        assert_eq!(degree(&t), sta_degree(&d), "{label}");
        for r in [1, 2, 3, 7] {
            assert_eq!(weight_at(&t, r), sta_weight_at(&d, r), "{label} at {r}");
        }
    }
}

#[test]
fn successor_degree_tracks_promotions() {
    let d = sta_succ(Bit::Zero, 3, 1).unwrap();
    assert_eq!(sta_degree(&d), 3);
    let d = sta_succ(Bit::One, 3, 2).unwrap();
    assert_eq!(sta_degree(&d), 3);
}

#[test]
fn json_round_trip() {
    let d = sta_succ(Bit::One, 2, 2).unwrap();
    let back = load_str(&to_json_string(&d)).unwrap();
    assert!(sta_eq(&back.ty, &d.ty));
    assert_eq!(back.node_count(), d.node_count());
    let tampered = to_json_string(&d).replacen("\"Sp\"", "\"W\"", 1);
    assert!(load_str(&tampered).is_err());
}
