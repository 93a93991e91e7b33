use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stratlam::term::*;

/// Nameless terms built independently of the library.
#[derive(Clone, Debug, PartialEq, Eq)]
enum N {
    Free(String),
    Ix(usize),
    Lam(Box<N>),
    Ap(Box<N>, Box<N>),
}

fn nameless(t: &Term, env: &mut Vec<String>) -> N {
    match t {
        Term::Var(x) => match env.iter().rev().position(|y| y.as_str() == x.as_ref() as &str) {
            Some(i) => N::Ix(i),
            None => N::Free(x.to_string()),
        },
        Term::Abs(x, b) => {
            env.push(x.to_string());
            let b = nameless(b, env);
            env.pop();
            N::Lam(Box::new(b))
        }
        Term::App(f, a) => N::Ap(Box::new(nameless(f, env)), Box::new(nameless(a, env))),
    }
}

fn shift(n: &N, by: isize, cutoff: usize) -> N {
    match n {
        N::Ix(i) if *i >= cutoff => N::Ix((*i as isize + by) as usize),
        N::Ix(_) | N::Free(_) => n.clone(),
        N::Lam(b) => N::Lam(Box::new(shift(b, by, cutoff + 1))),
        N::Ap(f, a) => N::Ap(Box::new(shift(f, by, cutoff)), Box::new(shift(a, by, cutoff))),
    }
}

fn subst(n: &N, j: usize, s: &N) -> N {
    match n {
        N::Ix(i) if *i == j => s.clone(),
        N::Ix(_) | N::Free(_) => n.clone(),
        N::Lam(b) => N::Lam(Box::new(subst(b, j + 1, &shift(s, 1, 0)))),
        N::Ap(f, a) => N::Ap(Box::new(subst(f, j, s)), Box::new(subst(a, j, s))),
    }
}

fn beta_root(n: &N) -> Option<N> {
    match n {
        N::Ap(f, a) => match &**f {
            N::Lam(b) => Some(shift(&subst(b, 0, &shift(a, 1, 0)), -1, 0)),
            _ => None,
        },
        _ => None,
    }
}

fn db(t: &Term) -> N {
    nameless(t, &mut Vec::new())
}

fn p(s: &str) -> Term {
    parse_term(s).unwrap()
}

#[test]
fn parse_and_print() {
    let t = p("\\x y. x (y y) z");
    assert_eq!(t.to_string(), "\\x y. x (y y) z");
    assert_eq!(t.size(), 9);
    assert!(parse_term("\\x.").is_err());
    assert!(parse_term("(x").is_err());
}

#[test]
fn alpha_equivalence() {
    assert!(p("\\x. x").alpha_eq(&p("\\y. y")));
    assert!(!p("\\x y. x").alpha_eq(&p("\\x y. y")));
    assert!(!p("\\x. y").alpha_eq(&p("\\x. z")));
}

#[test]
fn substitution_avoids_capture() {
    let m = p("\\y. x y");
    let out = substitute(&m, &[("x".into(), p("y"))]);
    assert_eq!(db(&out), db(&p("\\w. y w")));
}

#[test]
fn enumeration_matches_counts() {
    for size in 1..=9 {
        let listed = enumerate_closed_terms(size).filter(|t| t.size() == size).count() as u128;
        assert_eq!(listed, count_closed_terms(size), "size {size}");
    }
    // hand counts for the smallest sizes
    assert_eq!(count_closed_terms(1), 0);
    assert_eq!(count_closed_terms(2), 1);
    assert_eq!(count_closed_terms(3), 2);
    assert_eq!(count_closed_terms(4), 4);
}

#[test]
fn strong_normalization_oracle() {
    assert_eq!(is_sn(&p("(\\x. x x)(\\x. x x)"), DEFAULT_SN_FUEL), SnVerdict::No);
    assert_eq!(is_sn(&p("(\\x y. y) ((\\x. x x)(\\x. x x))"), DEFAULT_SN_FUEL), SnVerdict::No);
    assert_eq!(is_sn(&p("(\\f x. f (f x)) (\\f x. f (f x))"), DEFAULT_SN_FUEL), SnVerdict::Yes);
}

#[test]
fn fuel_runs_out_on_omega() {
    assert!(reduce_to_nf(&p("(\\x. x x)(\\x. x x)"), 100).is_err());
    let (nf, steps) = reduce_to_nf(&p("(\\x. x) (\\y. y) (\\z. z)"), 100).unwrap();
    assert!(nf.alpha_eq(&p("\\z. z")));
    assert_eq!(steps, 2);
}

fn arb_closed() -> impl Strategy<Value = Term> {
    (any::<u64>(), 2u64..14).prop_filter_map("no term of that size", |(seed, size)| {
        random_closed_term(&mut ChaCha8Rng::seed_from_u64(seed), size)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn beta_agrees_with_nameless_oracle(m in arb_closed()) {
        for at in redex_positions(&m) {
            let out = beta_step(&m, &at).unwrap();
            // rebuild the reduct in the nameless world and compare
            let whole = db(&m);
            let want = replace(&whole, &at.0, &|r| beta_root(r).unwrap());
            prop_assert_eq!(db(&out), want);
        }
    }

    #[test]
    fn alpha_eq_is_nameless_equality(m in arb_closed(), n in arb_closed()) {
        prop_assert_eq!(m.alpha_eq(&n), db(&m) == db(&n));
        prop_assert!(m.alpha_eq(&prettify(&m)));
        prop_assert!(m.alpha_eq(&m.freshen_binders()));
    }

    #[test]
    fn parse_inverts_display(m in arb_closed()) {
        prop_assert!(parse_term(&m.to_string()).unwrap().alpha_eq(&m));
        prop_assert!(m.free_vars().is_empty());
    }
}

fn replace(n: &N, path: &[Dir], f: &dyn Fn(&N) -> N) -> N {
    match (path.split_first(), n) {
        (None, _) => f(n),
        (Some((Dir::Fun, rest)), N::Ap(a, b)) => N::Ap(Box::new(replace(a, rest, f)), b.clone()),
        (Some((Dir::Arg, rest)), N::Ap(a, b)) => N::Ap(a.clone(), Box::new(replace(b, rest, f))),
        (Some((Dir::Body, rest)), N::Lam(b)) => N::Lam(Box::new(replace(b, rest, f))),
        _ => panic!("bad path"),
    }
}
