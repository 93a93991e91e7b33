use stratlam::derivation::check;
use stratlam::inference::{infer_sn, DEFAULT_INFER_FUEL};
use stratlam::term::{enumerate_closed_terms, is_sn, parse_term, SnVerdict, DEFAULT_SN_FUEL};
use stratlam::types::{parse_type, TyvarNamer};

fn big_stack<F: FnOnce() + Send + 'static>(f: F) {
    std::thread::Builder::new().stack_size(256 << 20).spawn(f).unwrap().join().unwrap();
}

#[test]
fn self_application_gets_a_set_type() {
    big_stack(|| {
        let d = infer_sn(&parse_term("\\x. x x").unwrap(), DEFAULT_INFER_FUEL).unwrap();
        check(&d).unwrap();
        let shown = TyvarNamer::default().rename(d.ty());
        assert_eq!(shown, parse_type("{a1 -o a2, a1} -o a2").unwrap());
    });
}

#[test]
fn sweep_small() {
    big_stack(|| {
        let max: u64 = std::env::var("SWEEP").ok().and_then(|s| s.parse().ok()).unwrap_or(7);
        let (mut n, mut sn) = (0, 0);
        for t in enumerate_closed_terms(max) {
            n += 1;
            let v = is_sn(&t, DEFAULT_SN_FUEL);
            let r = infer_sn(&t, DEFAULT_INFER_FUEL);
            match (v, &r) {
                (SnVerdict::Yes, Ok(d)) => {
                    sn += 1;
                    check(d).unwrap_or_else(|e| panic!("{t}: {e}\n{d}"));
                    assert!(d.subject().alpha_eq(&t));
                }
                (SnVerdict::No, Err(_)) => {}
                _ => panic!("{t}: {v:?} vs {:?}", r.as_ref().map(|d| d.ty().to_string())),
            }
        }
        eprintln!("{n} terms, {sn} sn");
    });
}

#[test]
fn inferred_derivations_normalize_within_bound() {
    use stratlam::derivation::degree;
    use stratlam::term::redex_positions;
    use stratlam::transform::{normalize_typed, subject_reduce, subst_stats, Strategy};
    big_stack(|| {
        let max: u64 = std::env::var("SWEEP").ok().and_then(|s| s.parse().ok()).unwrap_or(7);
        for t in enumerate_closed_terms(max) {
            let Ok(d) = infer_sn(&t, DEFAULT_INFER_FUEL) else { continue };
            for p in redex_positions(d.subject()) {
                let (r, rep) = subject_reduce(&d, &p).unwrap_or_else(|e| panic!("{t} at {p}: {e}"));
                check(&r).unwrap();
                assert!(rep.weight_after < rep.weight_before);
            }
            let n = normalize_typed(&d, Strategy::LeftmostOutermost).unwrap();
            let bound = t.size().pow(degree(&d) as u32 + 1);
            assert!(n.steps <= bound && n.max_size <= bound, "{t}");
        }
        let s = subst_stats();
        eprintln!("{s:?}");
        assert_eq!(s.violations, 0);
    });
}
