//! Acceptance suite. Prints one line per criterion and exits non-zero if any
//! criterion fails. Run with `cargo test -p lamcell --test acceptance`.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::Instant;

use lamcell::cellular::{cellularize, is_cellular, is_hereditary_cellular, shrink, shrink_sites, stretch};
use lamcell::kernel::{parse_term, parse_type, print_term, Signature, SimpleType, Term};
use lamcell::model::{Model, Verdict};
use lamcell::oracle::{self, brute_equiv, corpus, enumerate_terms, eval_ground, full_model_eval, BoundedVerdict};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const SEED: u64 = 20_240_611;

fn sig(s: &str) -> Signature {
    Signature::parse(s).unwrap()
}

fn ty(s: &str) -> SimpleType {
    parse_type(s).unwrap()
}

fn term(s: &str, c: &Signature) -> Term {
    parse_term(s, c).unwrap()
}

fn show(t: &Term) -> String {
    print_term(t)
}

struct Corpus {
    /// Inputs with their cellularized forms.
    items: Vec<(Term, Signature, Term)>,
}

fn criterion_1(corpus: &[(Term, Signature)]) -> (Outcome, Option<Corpus>) {
    let mut items = Vec::new();
    let mut non_cellular_inputs = 0;
    for (t, s) in corpus {
        if !is_cellular(t).map_err(|e| e.to_string()).unwrap_or(true) {
            non_cellular_inputs += 1;
        }
        let c = match cellularize(t) {
            Ok(c) => c,
            Err(e) => return (Err(format!("cellularize({}) failed: {e}", show(t))), None),
        };
        match is_cellular(&c) {
            Ok(true) => {}
            other => return (Err(format!("{} is not cellular ({other:?})", show(&c))), None),
        }
        if c.ty() != t.ty() {
            return (Err(format!("type changed for {}", show(t))), None);
        }
        items.push((t.clone(), s.clone(), c));
    }
    let msg = format!(
        "{} terms, {} not cellular on input, all outputs cellular",
        corpus.len(),
        non_cellular_inputs
    );
    (Ok(msg), Some(Corpus { items }))
}

fn criterion_2(model: &Model, c: &Corpus) -> Outcome {
    let mut checked = 0;
    for (t, s, ct) in &c.items {
        if t.ty().order() > 3 {
            continue;
        }
        match model.decide_equiv(t, ct, s) {
            Ok(Verdict::Equivalent) => checked += 1,
            other => return Err(format!("{} vs {}: {other:?}", show(t), show(ct))),
        }
    }
    if checked < 300 {
        return Err(format!("only {checked} order <= 3 terms"));
    }
    Ok(format!("{checked} terms of order <= 3 decided equivalent to their cellular form"))
}

fn criterion_3(model: &Model) -> Outcome {
    let s = sig("a,b");
    let id = Term::identity(&ty("(o->o)->o"));
    let c = cellularize(&id).map_err(|e| e.to_string())?;
    if !is_cellular(&c).map_err(|e| e.to_string())? {
        return Err(format!("{} is not cellular", show(&c)));
    }
    let expected = term("\\y1:(o->o)->o. \\y2:o->o. y1 (\\d:o. y2 (y1 (\\z:o. z)))", &s);
    for (l, r) in [(&c, &expected), (&id, &expected), (&id, &c)] {
        let v = model.decide_equiv(l, r, &s).map_err(|e| e.to_string())?;
        if !v.is_equivalent() {
            return Err(format!("{} vs {}: {v:?}", show(l), show(r)));
        }
    }
    Ok(format!("identity cellularizes to {}", show(&c)))
}

fn criterion_4(model: &Model) -> Outcome {
    // (type, constants, term bound, argument bound) for the oracle quotient.
    let oracle_pairs = [
        ("o", "a,b", 1, 1),
        ("o->o", "a", 4, 1),
        ("o->o", "a,b", 6, 1),
        ("o->o->o", "a,b", 8, 1),
        ("(o->o)->o", "a,b", 10, 4),
        ("(o->o)->o->o", "a,b", 10, 4),
        ("o->(o->o)->o", "a,b", 10, 4),
    ];
    let mut report = Vec::new();
    for (t, c, tb, ab) in oracle_pairs {
        let (t, c) = (ty(t), sig(c));
        let decided = model.count_classes(&t, &c).map_err(|e| format!("{t}: {e}"))?;
        let brute = oracle::quotient_classes(&t, &c, tb, ab).map_err(|e| e.to_string())?.len();
        let larger = oracle::quotient_classes(&t, &c, tb + 2, ab + 2).map_err(|e| e.to_string())?.len();
        if decided != brute || brute != larger {
            return Err(format!("{t} over {{{c}}}: decider {decided}, oracle {brute} then {larger}"));
        }
        report.push(format!("{t}/{}={decided}", c.len()));
    }
    let singletons = [
        "o",
        "o->o",
        "o->o->o",
        "(o->o)->o",
        "(o->o->o)->o",
        "((o->o)->o)->o",
        "(o->o)->(o->o)->o",
        "((o->o)->o)->(o->o)->o",
        "((o->o->o)->o)->o",
    ];
    let one = sig("a");
    let mut orders = Vec::new();
    for t in singletons {
        let t = ty(t);
        let n = model.count_classes(&t, &one).map_err(|e| format!("{t}: {e}"))?;
        if n != 1 {
            return Err(format!("{t} over {{a}} has {n} classes"));
        }
        orders.push(t.order());
    }
    report.push(format!(
        "|C|=1 gives 1 at {} types up to order {}",
        singletons.len(),
        orders.iter().max().unwrap()
    ));
    Ok(report.join(", "))
}

/// `t w..` and `u w..` normalize, through the index-based reducer, to the
/// reported constants and those differ.
fn recheck(t: &Term, u: &Term, witness: &[Term], left: &str, right: &str) -> Result<(), String> {
    let l = eval_ground(t, witness).map_err(|e| e.to_string())?;
    let r = eval_ground(u, witness).map_err(|e| e.to_string())?;
    if &*l != left || &*r != right || l == r {
        return Err(format!(
            "witness {:?} for {} vs {} gives {l}/{r}, reported {left}/{right}",
            witness.iter().map(show).collect::<Vec<_>>(),
            show(t),
            show(u)
        ));
    }
    Ok(())
}

fn criterion_5(model: &Model, c: &Corpus) -> Outcome {
    let mut pools: Vec<(Signature, Vec<Term>)> = Vec::new();
    for (t, s) in [
        ("o->o", "a,b"),
        ("o->o->o", "a,b"),
        ("(o->o)->o", "a,b"),
        ("o->(o->o)->o", "a,b"),
        ("(o->o->o)->o", "a,b"),
    ] {
        pools.push((sig(s), enumerate_terms(&ty(t), &sig(s), 7)));
    }
    let mut by_type: BTreeMap<(SimpleType, Signature), Vec<Term>> = BTreeMap::new();
    for (t, s, ct) in &c.items {
        if t.ty().order() <= 3 {
            let e = by_type.entry((t.ty(), s.clone())).or_default();
            e.push(t.clone());
            e.push(ct.clone());
        }
    }
    for ((_, s), terms) in by_type {
        pools.push((s, terms.into_iter().take(12).collect()));
    }
    let (mut decider, mut brute) = (0, 0);
    for (s, terms) in &pools {
        for (i, t) in terms.iter().enumerate() {
            for u in &terms[i + 1..] {
                if let Verdict::Inequivalent { witness, left, right } =
                    model.decide_equiv(t, u, s).map_err(|e| e.to_string())?
                {
                    recheck(t, u, &witness, &left, &right)?;
                    decider += 1;
                }
                if t.ty().order() <= 2 || terms.len() <= 40 {
                    let bv = match brute_equiv(t, u, s, 4) {
                        Ok(v) => v,
                        Err(oracle::OracleError::Budget { .. }) => continue,
                        Err(e) => return Err(e.to_string()),
                    };
                    if let BoundedVerdict::Inequivalent { witness, left, right } = bv {
                        recheck(t, u, &witness, &left, &right)?;
                        brute += 1;
                    }
                }
            }
        }
    }
    if decider < 100 || brute < 100 {
        return Err(format!("too few inequivalent verdicts: {decider} decider, {brute} brute"));
    }
    Ok(format!("{decider} decider and {brute} brute-force witnesses re-verified"))
}

fn criterion_6(model: &Model, c: &Corpus) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut stretched = Vec::new();
    let mut stretches = 0;
    for (t, s, ct) in &c.items {
        if t.ty().order() > 3 {
            continue;
        }
        for base in [t, ct] {
            let paths: Vec<_> = base.paths().into_iter().filter(|p| !p.is_empty()).collect();
            for p in paths.choose_multiple(&mut rng, 2) {
                let st = stretch(base, p).map_err(|e| e.to_string())?;
                if st.size() > 400 {
                    continue;
                }
                let v = model.decide_equiv(base, &st, s).map_err(|e| e.to_string())?;
                if !v.is_equivalent() {
                    return Err(format!("stretch of {} at {p:?}: {v:?}", show(base)));
                }
                stretches += 1;
                stretched.push((st, s.clone()));
            }
        }
    }
    let mut shrinks = 0;
    let sources = c
        .items
        .iter()
        .filter(|(t, _, _)| t.ty().order() <= 3)
        .map(|(_, s, ct)| (ct.clone(), s.clone()))
        .chain(stretched);
    for (t, s) in sources {
        let sites = shrink_sites(&t);
        for site in sites.iter().take(3) {
            let sh = shrink(&t, &site.outer, &site.inner, site.k).map_err(|e| e.to_string())?;
            let v = model.decide_equiv(&t, &sh, &s).map_err(|e| e.to_string())?;
            if !v.is_equivalent() {
                return Err(format!("shrink of {} at {site:?}: {v:?}", show(&t)));
            }
            shrinks += 1;
        }
    }
    if stretches < 200 || shrinks < 200 {
        return Err(format!("only {stretches} stretches and {shrinks} shrinks"));
    }
    Ok(format!("{stretches} stretches and {shrinks} shrinks decided equivalent"))
}

fn criterion_7(model: &Model) -> Outcome {
    let tables = model.cached_tables();
    let mut entries = 0;
    for table in &tables {
        for e in &table.entries {
            if !is_hereditary_cellular(&e.term).map_err(|e| e.to_string())? {
                return Err(format!(
                    "entry {} of R({}) is not hereditary cellular",
                    show(&e.term),
                    table.for_type
                ));
            }
            entries += 1;
        }
    }
    if tables.len() < 10 {
        return Err(format!("only {} tables were built", tables.len()));
    }
    Ok(format!("{entries} entries across {} tables", tables.len()))
}

fn criterion_8(model: &Model) -> Outcome {
    let s = sig("a,b");
    let mut report = Vec::new();
    // The first two are the required types. At (o->o)->o the full hierarchy
    // has undefinable elements, so equivalent terms may denote differently.
    for (t, bound) in [("o->o", 6), ("o->o->o", 9), ("(o->o)->o", 10)] {
        let terms = enumerate_terms(&ty(t), &s, bound);
        let dens: Vec<_> = terms
            .iter()
            .map(|x| full_model_eval(x, &s))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let (mut same, mut inequivalent, mut loose) = (0, 0, 0);
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                let v = model.decide_equiv(&terms[i], &terms[j], &s).map_err(|e| e.to_string())?;
                let equal = dens[i] == dens[j];
                if equal && !v.is_equivalent() {
                    return Err(format!(
                        "{} and {} denote the same element but {v:?}",
                        show(&terms[i]),
                        show(&terms[j])
                    ));
                }
                match (equal, v.is_equivalent()) {
                    (true, _) => same += 1,
                    (false, false) => inequivalent += 1,
                    (false, true) => loose += 1,
                }
            }
        }
        report.push(format!(
            "{t}: {} terms, {same} equal, {inequivalent} inequivalent, {loose} equivalent but distinct",
            terms.len()
        ));
    }
    Ok(report.join("; "))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_lamcell"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {}: {}", out.status, String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn criterion_9() -> Outcome {
    let base = ["--constants", "a,b", "--format", "structured"];
    let cases: Vec<Vec<&str>> = vec![
        vec!["reps", "--type", "(o->o)->o"],
        vec!["reps", "--type", "o->o->o", "--dedup"],
        vec!["decide", "\\y:o. y", "\\y:o. a"],
        vec!["decide", "\\y:o->o. y a", "\\y:o->o. y (y a)"],
        vec!["canon", "\\y:o->o. y (y (y b))"],
        vec!["cellularize", "\\y1:(o->o)->o. \\y2:o->o. y1 (\\z:o. y2 z)"],
    ];
    for case in &cases {
        let mut args: Vec<&str> = base.to_vec();
        args.extend(case);
        let first = run_cli(&args)?;
        for _ in 0..2 {
            if run_cli(&args)? != first {
                return Err(format!("output of {case:?} differs between runs"));
            }
        }
        let mut sink = Vec::new();
        let mut argv = vec!["lamcell"];
        argv.extend(&args);
        let code = lamcell::cli::run(argv, &mut sink, &mut Vec::new());
        if code != 0 || sink != first {
            return Err(format!("in-process output of {case:?} differs from the binary"));
        }
    }
    Ok(format!("{} commands, 3 process runs plus 1 in-process run each, byte-identical", cases.len()))
}

fn criterion_10(model: &Model, c: &Corpus) -> Outcome {
    let mut checked = 0;
    for (t, s, ct) in &c.items {
        if t.ty().order() > 3 {
            continue;
        }
        let r = model.canonical_rep(t, s).map_err(|e| e.to_string())?;
        let rr = model.canonical_rep(&r, s).map_err(|e| e.to_string())?;
        let rc = model.canonical_rep(ct, s).map_err(|e| e.to_string())?;
        if r != rr {
            return Err(format!("not idempotent on {}: {} then {}", show(t), show(&r), show(&rr)));
        }
        if r != rc {
            return Err(format!("{} and its cellular form select {} and {}", show(t), show(&r), show(&rc)));
        }
        checked += 1;
    }
    Ok(format!("{checked} terms, idempotent and invariant under cellularize"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let model = Model::default();
    let mut results: BTreeMap<usize, (&str, Outcome)> = BTreeMap::new();
    let terms = corpus(SEED, 600, 4, 40);
    let (o1, cells) = criterion_1(&terms);
    results.insert(1, ("cellularization totality", o1));
    let with_corpus = |f: &dyn Fn(&Corpus) -> Outcome| match &cells {
        Some(c) => f(c),
        None => Err("corpus could not be cellularized".to_string()),
    };
    results.insert(2, ("cellularization correctness", with_corpus(&|c| criterion_2(&model, c))));
    results.insert(3, ("identity example", criterion_3(&model)));
    results.insert(4, ("class counts", criterion_4(&model)));
    results.insert(5, ("witness self-certification", with_corpus(&|c| criterion_5(&model, c))));
    results.insert(6, ("stretching and shrinking", with_corpus(&|c| criterion_6(&model, c))));
    results.insert(8, ("full-model bridge", criterion_8(&model)));
    results.insert(9, ("determinism", criterion_9()));
    results.insert(10, ("selector laws", with_corpus(&|c| criterion_10(&model, c))));
    // Last, so that it sees every table the other criteria built.
    results.insert(7, ("hereditary cellular tables", criterion_7(&model)));

    let mut failed = 0;
    for (n, (name, outcome)) in &results {
        match outcome {
            Ok(msg) => println!("criterion {n:>2} {name:<28} PASS  {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2} {name:<28} FAIL  {msg}");
            }
        }
    }
    println!("acceptance: {failed} failed, {:.1}s", start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
