//! End-to-end acceptance run. One line per criterion is printed; the test
//! fails if any criterion fails. Criteria run in order on one thread since
//! the substitution counters are process wide.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stratlam::corpus::str_corpus;
use stratlam::derivation::{check, degree, rank, weight_at, Derivation, Meta, Rule};
use stratlam::inference::{infer_sn, DEFAULT_INFER_FUEL};
use stratlam::inter::{inter_eq, is_non_degenerate, to_inter};
use stratlam::names::name;
use stratlam::numerals::{bound_harness, decode_num, encode_num, iter_succ_derivation, iter_term, succ_term, Bit};
use stratlam::sta::corpus::sta_corpus;
use stratlam::sta::{sta_degree, sta_weight_at, translate_context, translate_derivation, translate_type};
use stratlam::term::{
    enumerate_closed_terms, is_sn, leftmost_outermost, parse_term, random_closed_term, redex_positions, reduce_to_nf, SnVerdict, Term,
    DEFAULT_SN_FUEL,
};
use stratlam::transform::{normalize_typed, set_weight_checking, subject_reduce, subst_stats, Strategy};
use stratlam::types::{type_eq, Type};

const MIN_MUTANTS: usize = 80;
const MIN_MUTANTS_PER_RULE: usize = 10;
const MUTANT_BUDGET: Duration = Duration::from_secs(5);
const RANDOM_TERMS: usize = 1000;
const ITER_MAX_K: usize = 5;
const ITER_MAX_N: u64 = 10;
const ITER_BUDGET: Duration = Duration::from_secs(60);
const SN_MAX_SIZE: u64 = 9;
const SN_BUDGET: Duration = Duration::from_secs(600);
const WEIGHT_POINTS: [u64; 5] = [1, 2, 3, 5, 8];
const STA_POINTS: [u64; 3] = [1, 2, 3];
const SUCC_MAX: u64 = 256;
const ROUND_TRIP_MAX: u64 = 1 << 16;
const RANDOM_TYPES: usize = 1000;
const SEED: u64 = 0x5eed;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

// ---- mutants ----

fn with_concl(d: &Derivation, f: impl FnOnce(&mut Derivation)) -> Derivation {
    let mut m = d.clone();
    f(&mut m);
    m
}

fn bogus() -> Type {
    Type::var("mutant_t")
}

fn set_of(t: &Type) -> Type {
    Type::Strat(vec![t.clone()].into())
}

type Mutator = fn(&Derivation) -> Option<Derivation>;

fn common_mutators(rule: Rule) -> Vec<(Mutator, &'static str)> {
    let (ty, subj, ctx) = match rule {
        Rule::Ax => ("axiom-type", "axiom-subject", "axiom-context"),
        Rule::W => ("weaken-type", "weaken-subject", "weaken-context"),
        Rule::LollI => ("abs-type", "abs-subject", "abs-context"),
        Rule::LollE => ("app-type", "app-subject", "app-context"),
        Rule::M => ("mux-result-type", "mux-subject", "mux-context"),
        Rule::St => ("st-type", "st-subject", "st-context"),
        Rule::ForallI => ("forall-intro-type", "forall-intro-subject", "forall-intro-context"),
        Rule::ForallE => ("forall-elim-type", "forall-elim-subject", "forall-elim-context"),
    };
    let mut out: Vec<(Mutator, &'static str)> = vec![
        (|d| Some(with_concl(d, |m| m.concl.ty = bogus())), ty),
        (|d| Some(with_concl(d, |m| m.concl.subject = Term::var("mutant_s"))), subj),
        (
            |d| {
                Some(with_concl(d, |m| {
                    m.concl.ctx.insert(name("mutant_c"), Type::var("a"));
                }))
            },
            ctx,
        ),
    ];
    if rule != Rule::St {
        out.push((
            |d| {
                Some(with_concl(d, |m| {
                    let extra = m.premises.first().cloned().unwrap_or_else(|| Arc::new(m.clone()));
                    m.premises.push(extra);
                }))
            },
            "premise-count",
        ));
    }
    out
}

fn specific_mutators(rule: Rule) -> Vec<(Mutator, &'static str)> {
    match rule {
        Rule::Ax => vec![(
            |d| {
                let Meta::Ax { var, ty } = &d.meta else { return None };
                let (var, ty) = (var.clone(), set_of(ty));
                Some(with_concl(d, |m| m.meta = Meta::Ax { var, ty }))
            },
            "axiom-not-linear",
        )],
        Rule::W => vec![
            (
                |d| {
                    let Meta::W { var, ty } = &d.meta else { return None };
                    let (var, ty) = (var.clone(), set_of(ty));
                    Some(with_concl(d, |m| m.meta = Meta::W { var, ty }))
                },
                "weaken-not-linear",
            ),
            (
                |d| {
                    let Meta::W { ty, .. } = &d.meta else { return None };
                    let taken = d.premises[0].ctx().vars().next()?.clone();
                    let ty = ty.clone();
                    Some(with_concl(d, |m| m.meta = Meta::W { var: taken, ty }))
                },
                "weaken-var-present",
            ),
        ],
        Rule::LollI => vec![(
            |d| Some(with_concl(d, |m| m.meta = Meta::LollI { var: name("mutant_v") })),
            "abs-var-missing",
        )],
        Rule::LollE => vec![
            (
                |d| {
                    Some(with_concl(d, |m| {
                        let mut a = (*m.premises[1]).clone();
                        a.concl.ty = bogus();
                        m.premises[1] = Arc::new(a);
                    }))
                },
                "arg-type-mismatch",
            ),
            (
                |d| {
                    Some(with_concl(d, |m| {
                        let mut f = (*m.premises[0]).clone();
                        f.concl.ty = bogus();
                        m.premises[0] = Arc::new(f);
                    }))
                },
                "fun-not-arrow",
            ),
        ],
        Rule::M => vec![
            (
                |d| {
                    let Meta::M { range, .. } = &d.meta else { return None };
                    let range = range.clone();
                    Some(with_concl(d, |m| m.meta = Meta::M { domain: vec![], range }))
                },
                "mux-empty-domain",
            ),
            (
                |d| {
                    let Meta::M { domain, range } = &d.meta else { return None };
                    let mut domain = domain.clone();
                    domain.push(domain[0].clone());
                    let range = range.clone();
                    Some(with_concl(d, |m| m.meta = Meta::M { domain, range }))
                },
                "mux-duplicate-domain",
            ),
            (
                |d| {
                    let Meta::M { domain, range } = &d.meta else { return None };
                    let mut domain = domain.clone();
                    domain.push(name("mutant_m"));
                    let range = range.clone();
                    Some(with_concl(d, |m| m.meta = Meta::M { domain, range }))
                },
                "mux-var-missing",
            ),
            (
                |d| {
                    let Meta::M { range, .. } = &d.meta else { return None };
                    let range = range.clone();
                    Some(with_concl(d, |m| {
                        m.concl.ctx.insert(range, bogus());
                    }))
                },
                "mux-type",
            ),
        ],
        Rule::St => vec![
            (|d| Some(with_concl(d, |m| m.premises.clear())), "st-no-premises"),
            (
                |d| {
                    let stray = stratlam::derivation::ax(name("mutant_p"), Type::var("a")).ok()?;
                    Some(with_concl(d, |m| m.premises.push(Arc::new(stray))))
                },
                "st-subject-mismatch",
            ),
        ],
        Rule::ForallI => vec![(
            |d| {
                let free = d.premises[0].ctx().iter().flat_map(|(_, t)| t.free_tyvars()).next()?;
                Some(with_concl(d, |m| m.meta = Meta::ForallI { tyvar: free }))
            },
            "forall-var-free-in-context",
        )],
        Rule::ForallE => vec![
            (
                |d| {
                    let Meta::ForallE { tyvar, inst } = &d.meta else { return None };
                    let (tyvar, inst) = (tyvar.clone(), set_of(inst));
                    Some(with_concl(d, |m| m.meta = Meta::ForallE { tyvar, inst }))
                },
                "forall-elim-not-linear",
            ),
            (
                |d| {
                    let Meta::ForallE { inst, .. } = &d.meta else { return None };
                    let inst = inst.clone();
                    Some(with_concl(d, |m| m.meta = Meta::ForallE { tyvar: name("mutant_a"), inst }))
                },
                "forall-elim-var",
            ),
        ],
    }
}

/// Sub-derivations of the corpus grouped by their last rule.
fn nodes_by_rule(corpus: &[(String, Derivation)]) -> BTreeMap<Rule, Vec<Derivation>> {
    let mut out: BTreeMap<Rule, Vec<Derivation>> = BTreeMap::new();
    for (_, d) in corpus {
        for (_, n) in d.preorder() {
            out.entry(n.rule()).or_default().push(n.clone());
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let corpus = str_corpus().expect("corpus builds");
    let mut bad = Vec::new();
    for (label, d) in &corpus {
        if let Err(v) = check(d) {
            bad.push(format!("{label}: {v}"));
        }
    }
    const NODES_PER_MUTATOR: usize = 3;
    let mut per_rule: BTreeMap<Rule, usize> = BTreeMap::new();
    let mut total = 0;
    for (rule, nodes) in nodes_by_rule(&corpus) {
        for (mutate, want) in common_mutators(rule).into_iter().chain(specific_mutators(rule)) {
            // spread over distinct nodes
            let step = (nodes.len() / NODES_PER_MUTATOR).max(1);
            let mut used = 0;
            for n in nodes.iter().step_by(step) {
                if used == NODES_PER_MUTATOR {
                    break;
                }
                let Some(m) = mutate(n) else { continue };
                used += 1;
                total += 1;
                *per_rule.entry(rule).or_default() += 1;
                match check(&m) {
                    Ok(()) => bad.push(format!("{rule} mutant accepted, wanted {want}")),
                    Err(v) if v.reason != want || !v.path.is_empty() => {
                        bad.push(format!("{rule} mutant: wanted {want}, got {v}"))
                    }
                    Err(_) => {}
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let thin: Vec<String> = Rule::ALL
        .iter()
        .filter(|r| per_rule.get(r).copied().unwrap_or(0) < MIN_MUTANTS_PER_RULE)
        .map(|r| r.to_string())
        .collect();
    let pass = bad.is_empty() && total >= MIN_MUTANTS && thin.is_empty() && elapsed < MUTANT_BUDGET;
    let counts: Vec<String> = per_rule.iter().map(|(r, n)| format!("{r}={n}")).collect();
    let mut detail = format!(
        "{} corpus derivations accepted, {total} mutants rejected [{}] in {:.2?}",
        corpus.len(),
        counts.join(" "),
        elapsed
    );
    if !bad.is_empty() {
        detail += &format!("; failures: {}", bad.join("; "));
    }
    if !thin.is_empty() {
        detail += &format!("; too few mutants for {}", thin.join(", "));
    }
    outcome(pass, detail)
}

// ---- random typed terms ----

fn random_typed(count: usize, seed: u64) -> Vec<Derivation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let size = rng.gen_range(3..=12);
        let Some(m) = random_closed_term(&mut rng, size) else { continue };
        if is_sn(&m, DEFAULT_SN_FUEL) != SnVerdict::Yes {
            continue;
        }
        if let Ok(d) = infer_sn(&m, DEFAULT_INFER_FUEL) {
            out.push(d);
        }
    }
    out
}

fn criterion_2(corpus: &[(String, Derivation)], random: &[Derivation]) -> Outcome {
    let mut bad = Vec::new();
    let all = corpus.iter().map(|(l, d)| (l.clone(), d)).chain(random.iter().map(|d| (d.subject().to_string(), d)));
    let mut n = 0;
    for (label, d) in all {
        n += 1;
        let size = d.subject().size();
        let deg = degree(d);
        if weight_at(d, 1) != BigUint::from(size) {
            bad.push(format!("{label}: W(1) = {} but |M| = {size}", weight_at(d, 1)));
        }
        if rank(d) > size {
            bad.push(format!("{label}: rank {} > |M| = {size}", rank(d)));
        }
        for r in WEIGHT_POINTS {
            let bound = BigUint::from(r).pow(deg as u32) * size;
            if weight_at(d, r) > bound {
                bad.push(format!("{label}: W({r}) = {} > {bound}", weight_at(d, r)));
            }
        }
    }
    let detail = format!("{n} derivations; {} violations{}", bad.len(), first(&bad));
    outcome(bad.is_empty() && random.len() >= RANDOM_TERMS, detail)
}

fn first(bad: &[String]) -> String {
    bad.first().map(|b| format!("; first: {b}")).unwrap_or_default()
}

fn reduces_strictly(d: &Derivation, at: &stratlam::term::RedexPosition) -> Result<(), String> {
    let (out, report) = subject_reduce(d, at).map_err(|e| format!("at {at}: {e}"))?;
    check(&out).map_err(|v| format!("at {at}: reduct fails check: {v}"))?;
    let r = rank(d);
    if weight_at(&out, r) >= weight_at(d, r) || report.weight_after >= report.weight_before {
        return Err(format!("at {at}: weight {} -> {}", weight_at(d, r), weight_at(&out, r)));
    }
    if !type_eq(out.ty(), d.ty()) || !out.ctx().equiv(d.ctx()) {
        return Err(format!("at {at}: judgment changed"));
    }
    let want = stratlam::term::beta_step(d.subject(), at).map_err(|e| e.to_string())?;
    if !out.subject().alpha_eq(&want) {
        return Err(format!("at {at}: subject is not the beta reduct"));
    }
    Ok(())
}

fn criterion_3(corpus: &[(String, Derivation)], random: &[Derivation]) -> Outcome {
    let mut bad = Vec::new();
    let mut positions = 0;
    for (label, d) in corpus {
        // every position of every derivation along the leftmost sequence
        let mut cur = d.clone();
        while let Some(next) = leftmost_outermost(cur.subject()) {
            for at in redex_positions(cur.subject()) {
                positions += 1;
                if let Err(e) = reduces_strictly(&cur, &at) {
                    bad.push(format!("{label} {e}"));
                }
            }
            match subject_reduce(&cur, &next) {
                Ok((out, _)) => cur = out,
                Err(e) => {
                    bad.push(format!("{label}: {e}"));
                    break;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut random_positions = 0;
    for d in random {
        let ps = redex_positions(d.subject());
        if ps.is_empty() {
            continue;
        }
        random_positions += 1;
        let at = &ps[rng.gen_range(0..ps.len())];
        if let Err(e) = reduces_strictly(d, at) {
            bad.push(format!("{} {e}", d.subject()));
        }
    }
    let detail = format!(
        "{positions} corpus redex positions along normalization, {random_positions} random typed terms; {} failures{}",
        bad.len(),
        first(&bad)
    );
    outcome(bad.is_empty(), detail)
}

fn criterion_4(random: &[Derivation]) -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut runs = 0;
    for k in 1..=ITER_MAX_K {
        let d = iter_succ_derivation(Bit::Zero, k, 1, 1).expect("iteration typing");
        let prog = Term::app(iter_term(k), succ_term(Bit::Zero));
        let mut degrees = Vec::new();
        for n in 0..=ITER_MAX_N {
            runs += 1;
            match bound_harness(&prog, &d, &[n]) {
                Ok(r) => {
                    degrees.push(r.degree);
                    if r.output != n << k || !r.pass {
                        bad.push(format!("k={k} n={n}: {r:?}"));
                    }
                }
                Err(e) => bad.push(format!("k={k} n={n}: {e}")),
            }
        }
        if degrees.windows(2).any(|w| w[0] != w[1]) {
            bad.push(format!("k={k}: degree depends on the input: {degrees:?}"));
        }
    }
    let elapsed = start.elapsed();
    let mut strategies = 0;
    for (i, d) in random.iter().enumerate() {
        let strategy = if i % 2 == 0 { Strategy::LeftmostOutermost } else { Strategy::Random(SEED + i as u64) };
        strategies += 1;
        match normalize_typed(d, strategy) {
            Ok(n) => {
                let bound = BigUint::from(d.subject().size()).pow(degree(d) as u32 + 1);
                if BigUint::from(n.steps) > bound || BigUint::from(n.max_size) > bound {
                    bad.push(format!("{}: {} steps, max size {}, bound {bound}", d.subject(), n.steps, n.max_size));
                }
            }
            Err(e) => bad.push(format!("{}: {e}", d.subject())),
        }
    }
    let detail = format!(
        "{runs} iteration runs in {elapsed:.2?}, {strategies} random normalizations; {} failures{}",
        bad.len(),
        first(&bad)
    );
    outcome(bad.is_empty() && elapsed < ITER_BUDGET, detail)
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let (mut total, mut typed) = (0, 0);
    for m in enumerate_closed_terms(SN_MAX_SIZE) {
        total += 1;
        let sn = is_sn(&m, DEFAULT_SN_FUEL);
        let inferred = infer_sn(&m, DEFAULT_INFER_FUEL);
        if sn == SnVerdict::Unknown {
            bad.push(format!("{m}: oracle undecided"));
        }
        match inferred {
            Ok(d) => {
                typed += 1;
                if sn != SnVerdict::Yes {
                    bad.push(format!("{m}: typed but not SN"));
                }
                if let Err(v) = check(&d) {
                    bad.push(format!("{m}: {v}"));
                }
                if !d.subject().alpha_eq(&m) {
                    bad.push(format!("{m}: subject changed"));
                }
            }
            Err(e) if sn == SnVerdict::Yes => bad.push(format!("{m}: SN but {e}")),
            Err(_) => {}
        }
    }
    for name in ["(\\x. x x) (\\x. x x)", "(\\x. x x x) (\\x. x x x)"] {
        if infer_sn(&parse_term(name).unwrap(), DEFAULT_INFER_FUEL).is_ok() {
            bad.push(format!("{name} was typed"));
        }
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "{total} closed terms up to size {SN_MAX_SIZE}, {typed} typed, in {elapsed:.2?}; {} failures{}",
        bad.len(),
        first(&bad)
    );
    outcome(bad.is_empty() && elapsed < SN_BUDGET, detail)
}

fn criterion_6() -> Outcome {
    let s = subst_stats();
    outcome(s.calls > 0 && s.violations == 0, format!("{} checked substitutions, {} violations", s.calls, s.violations))
}

fn criterion_7() -> Outcome {
    let mut bad = Vec::new();
    let corpus = sta_corpus().expect("modal corpus builds");
    for (label, d) in &corpus {
        let t = match translate_derivation(d) {
            Ok(t) => t,
            Err(e) => {
                bad.push(format!("{label}: {e}"));
                continue;
            }
        };
        if check(&t).is_err() {
            bad.push(format!("{label}: translation fails check"));
        }
        if !t.subject().alpha_eq(&d.subject) || t.subject().to_string() != d.subject.to_string() {
            bad.push(format!("{label}: subject changed"));
        }
        if !type_eq(t.ty(), &translate_type(&d.ty)) || !t.ctx().equiv(&translate_context(&d.ctx)) {
            bad.push(format!("{label}: types not translated pointwise"));
        }
        for r in STA_POINTS {
            if weight_at(&t, r) != sta_weight_at(d, r) {
                bad.push(format!("{label}: weight at {r} differs"));
            }
        }
        if degree(&t) != sta_degree(d) {
            bad.push(format!("{label}: degree {} vs {}", degree(&t), sta_degree(d)));
        }
        if label.starts_with("num") && (degree(&t) != 0 || sta_degree(d) != 0) {
            bad.push(format!("{label}: numeral of nonzero degree"));
        }
    }
    outcome(bad.is_empty(), format!("{} modal derivations; {} failures{}", corpus.len(), bad.len(), first(&bad)))
}

fn criterion_8() -> Outcome {
    let mut bad = Vec::new();
    for n in 0..=SUCC_MAX {
        for (bit, i) in [(Bit::Zero, 0), (Bit::One, 1)] {
            let m = Term::app(succ_term(bit), encode_num(n));
            match reduce_to_nf(&m, 100_000).map(|(nf, _)| decode_num(&nf)) {
                Ok(Ok(v)) if v == 2 * n + i => {}
                other => bad.push(format!("succ{i} {n}: {other:?}")),
            }
        }
    }
    for n in 0..=ROUND_TRIP_MAX {
        if decode_num(&encode_num(n)).ok() != Some(n) {
            bad.push(format!("round trip {n}"));
        }
    }
    outcome(
        bad.is_empty(),
        format!("successors on 0..={SUCC_MAX}, round trip on 0..={ROUND_TRIP_MAX}; {} failures{}", bad.len(), first(&bad)),
    )
}

fn random_type(rng: &mut ChaCha8Rng, depth: u32, linear: bool) -> Type {
    let vars = ["a", "b", "c"];
    let pick = rng.gen_range(0..if depth == 0 { 1 } else if linear { 3 } else { 4 });
    match pick {
        0 => Type::var(vars[rng.gen_range(0..vars.len())]),
        1 => {
            let s = random_type(rng, depth - 1, false);
            Type::Arrow(Arc::new(s), Arc::new(random_type(rng, depth - 1, true)))
        }
        2 => Type::Forall(name(vars[rng.gen_range(0..2)]), Arc::new(random_type(rng, depth - 1, true))),
        _ => {
            let n = rng.gen_range(2..=3);
            Type::Strat((0..n).map(|_| random_type(rng, depth - 1, false)).collect())
        }
    }
}

/// The same type with every set rotated and one element duplicated.
fn variant(t: &Type, rng: &mut ChaCha8Rng) -> Type {
    match t {
        Type::Var(_) => t.clone(),
        Type::Arrow(s, r) => Type::Arrow(Arc::new(variant(s, rng)), Arc::new(variant(r, rng))),
        Type::Forall(a, b) => Type::Forall(a.clone(), Arc::new(variant(b, rng))),
        Type::Strat(cs) => {
            let mut v: Vec<Type> = cs.iter().map(|c| variant(c, rng)).collect();
            let k = rng.gen_range(0..v.len());
            v.rotate_left(k);
            let dup = v[rng.gen_range(0..v.len())].clone();
            v.push(dup);
            Type::Strat(v.into())
        }
    }
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut bad = Vec::new();
    let (mut pairs, mut equal) = (0, 0);
    while pairs < RANDOM_TYPES {
        let s = random_type(&mut rng, 4, false);
        if !is_non_degenerate(&s) {
            continue;
        }
        let t = if rng.gen_bool(0.5) { variant(&s, &mut rng) } else { random_type(&mut rng, 4, false) };
        if !is_non_degenerate(&t) {
            continue;
        }
        pairs += 1;
        let e = type_eq(&s, &t);
        equal += usize::from(e);
        if e != inter_eq(&to_inter(&s), &to_inter(&t)) {
            bad.push(format!("{s} vs {t}"));
        }
    }
    let p = |s: &str| stratlam::types::parse_type(s).unwrap();
    let (nested, flat) = (p("{{a -o a}, b}"), p("{a -o a, b}"));
    if type_eq(&nested, &flat) {
        bad.push("{{A},B} identified with {A,B}".into());
    }
    if !inter_eq(&to_inter(&nested), &to_inter(&flat)) {
        bad.push("singleton collapse did not identify {{A},B} and {A,B}".into());
    }
    if type_eq(&p("{{a, b}, c}"), &p("{a, {b, c}}")) || inter_eq(&to_inter(&p("{{a, b}, c}")), &to_inter(&p("{a, {b, c}}"))) {
        bad.push("associativity identified".into());
    }
    if !inter_eq(&to_inter(&p("{a, b}")), &to_inter(&p("{b, a}"))) || !inter_eq(&to_inter(&p("{a, a, b}")), &to_inter(&p("{a, b}"))) {
        bad.push("commutativity or idempotency lost".into());
    }
    outcome(
        bad.is_empty() && equal > 0 && equal < pairs,
        format!("{pairs} random pairs ({equal} equal); {} failures{}", bad.len(), first(&bad)),
    )
}

fn run() {
    set_weight_checking(true);
    let mut lines = Vec::new();
    let mut record = |n: usize, o: Outcome| {
        let line = format!("criterion {n}: {} - {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        println!("{line}");
        lines.push((o.pass, line));
    };
    record(1, criterion_1());
    let corpus = str_corpus().expect("corpus builds");
    let random = random_typed(RANDOM_TERMS, SEED);
    record(2, criterion_2(&corpus, &random));
    record(3, criterion_3(&corpus, &random));
    record(4, criterion_4(&random));
    record(5, criterion_5());
    record(6, criterion_6());
    record(7, criterion_7());
    record(8, criterion_8());
    record(9, criterion_9());
    let failed: Vec<&String> = lines.iter().filter(|(p, _)| !p).map(|(_, l)| l).collect();
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.iter().map(|s| s.as_str()).collect::<Vec<_>>().join("\n"));
}

#[test]
fn acceptance() {
    std::thread::Builder::new().stack_size(512 << 20).spawn(run).unwrap().join().unwrap();
}
