use proptest::prelude::*;
use stratlam::derivation::{check, degree};
use stratlam::numerals::*;
use stratlam::term::{reduce_to_nf, Term};
use stratlam::types::type_eq;

fn big_stack<F: FnOnce() + Send + 'static>(f: F) {
    std::thread::Builder::new().stack_size(256 << 20).spawn(f).unwrap().join().unwrap();
}

#[test]
fn numeral_typings_have_degree_zero() {
    for n in [0, 1, 6, 9, 255] {
        for (h, k) in [(1, 1), (2, 3)] {
            let t = numeral_derivation(n, h, k).unwrap();
            check(&t.derivation).unwrap();
            assert_eq!(degree(&t.derivation), 0);
            assert!(t.derivation.subject().alpha_eq(&encode_num(n)));
            assert!(type_eq(t.derivation.ty(), &word_type(h, k)));
            assert!(t.derivation.ctx().is_empty());
        }
    }
}

#[test]
fn word_params_round_trip() {
    assert_eq!(word_params(&word_type(3, 1)), Some((3, 1)));
    assert_eq!(word_params(&stratlam::types::Type::var("a")), None);
}

#[test]
fn successor_typings_check() {
    for bit in [Bit::Zero, Bit::One] {
        for (m, n) in [(1, 1), (2, 1), (1, 3)] {
            let d = succ_derivation(bit, m, n).unwrap();
            check(&d).unwrap();
            let (m2, n2) = succ_params(bit, m, n);
            let want = stratlam::types::Type::arrow(word_type(m, n), word_type(m2, n2)).unwrap();
            assert!(type_eq(d.ty(), &want));
        }
    }
}

#[test]
fn leading_zero_decodes() {
    let t = reduce_to_nf(&Term::app(succ_term(Bit::Zero), encode_num(0)), 1000).unwrap().0;
    assert_eq!(decode_num(&t).unwrap(), 0);
    assert!(decode_num(&Term::var("x")).is_err());
}

#[test]
fn iteration_harness() {
    big_stack(|| {
        let d = iter_succ_derivation(Bit::Zero, 3, 1, 1).unwrap();
        check(&d).unwrap();
        let prog = Term::app(iter_term(3), succ_term(Bit::Zero));
        let r = bound_harness(&prog, &d, &[5]).unwrap();
        assert_eq!(r.output, 40);
        assert!(r.pass, "{r:?}");
    });
}

proptest! {
    #[test]
    fn decode_inverts_encode(n in 0u64..1 << 20) {
        prop_assert_eq!(decode_num(&encode_num(n)).unwrap(), n);
    }

    #[test]
    fn successor_doubles(n in 0u64..300, one in any::<bool>()) {
        let bit = if one { Bit::One } else { Bit::Zero };
        let nf = reduce_to_nf(&Term::app(succ_term(bit), encode_num(n)), 10_000).unwrap().0;
        prop_assert_eq!(decode_num(&nf).unwrap(), 2 * n + one as u64);
    }
}
