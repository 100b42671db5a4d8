use lamcell::cellular::{
    cellularize, cellularize_semi, factor_cell, is_cellular, is_hereditary_cellular, is_semi_cellular,
    minimal_shell, shrink, shrink_sites, stretch, CellError,
};
use lamcell::kernel::{apply, parse_term, parse_type, print_term, Head, Signature, Term};
use lamcell::model::{decide_equiv, Model};
use lamcell::oracle::{corpus, random_closed_term};
use proptest::prelude::*;

fn sig() -> Signature {
    Signature::parse("a,b").unwrap()
}

fn p(s: &str) -> Term {
    parse_term(s, &sig()).unwrap()
}

const ETA_ID: &str = "\\y1:(o->o)->o. \\y2:o->o. y1 (\\z:o. y2 z)";
const CELLULAR_ID: &str = "\\y1:(o->o)->o. \\y2:o->o. y1 (\\d:o. y2 (y1 (\\z:o. z)))";

#[test]
fn predicate_examples() {
    assert!(!is_cellular(&p(ETA_ID)).unwrap());
    assert!(is_cellular(&p(CELLULAR_ID)).unwrap());
    assert!(is_cellular(&p("\\y1:o->o. \\y2:(o->o)->o. a")).unwrap());
    assert!(is_semi_cellular(&p(CELLULAR_ID)).unwrap());
    assert!(is_semi_cellular(&p(ETA_ID)).unwrap());
    assert!(is_hereditary_cellular(&p("\\y:o->o. a")).unwrap());
    assert!(is_hereditary_cellular(&p(CELLULAR_ID)).unwrap());
}

#[test]
fn predicates_reject_open_terms() {
    let env = lamcell::kernel::TypingEnv::new().with("x", parse_type("o").unwrap());
    let open = lamcell::kernel::parse_term_in("\\y:o->o. y x", &sig(), &env).unwrap();
    assert_eq!(is_cellular(&open), Err(CellError::NotClosed));
    assert_eq!(is_semi_cellular(&open), Err(CellError::NotClosed));
    assert_eq!(is_hereditary_cellular(&open), Err(CellError::NotClosed));
    assert_eq!(cellularize(&open), Err(CellError::NotClosed));
}

#[test]
fn factoring_examples() {
    let t = p(CELLULAR_ID);
    let (cell, fillers) = factor_cell(&t.body(), 2, 2).unwrap();
    assert_eq!(cell.to_string(), "y0 (\\y1:o. []1)");
    assert_eq!(fillers.len(), 1);
    let t = p("\\y:(o->o)->o. y (\\z:o. z)");
    let (cell, fillers) = factor_cell(&t.body(), 1, 1).unwrap();
    assert_eq!(cell.hole_count, 0);
    assert!(fillers.is_empty());
    let (m, subs) = minimal_shell(&p(ETA_ID).body(), 2, 2).unwrap();
    assert_eq!(m.holes, 1);
    assert_eq!(subs.len(), 1);
}

#[test]
fn stretch_and_shrink_examples() {
    let t = p("\\y:o->o. y a");
    assert_eq!(stretch(&t, &[0]).unwrap(), p("\\y:o->o. y (y a)"));
    assert_eq!(stretch(&t, &[]).unwrap(), t);
    assert!(stretch(&t, &[3]).is_err());

    let t = p("\\y:o->o. y (y a)");
    let s = shrink(&t, &[], &[0], 1).unwrap();
    assert_eq!(s, p("\\y:o->o. y a"));
    assert!(decide_equiv(&t, &s, &sig()).unwrap().is_equivalent());

    let t = p("\\y:o->o->o. y a (y b a)");
    let s = shrink(&t, &[], &[1], 2).unwrap();
    assert_eq!(s, p("\\y:o->o->o. y a a"));
    assert!(decide_equiv(&t, &s, &sig()).unwrap().is_equivalent());
    assert!(matches!(shrink(&t, &[], &[1], 3), Err(CellError::HoleOutOfRange { .. })));
    assert_eq!(shrink(&t, &[], &[1], 1), Err(CellError::NotNested));
}

#[test]
fn cellularize_examples() {
    let c = p(CELLULAR_ID);
    assert_eq!(cellularize_semi(&c).unwrap(), c);
    assert_eq!(cellularize(&c).unwrap(), c);
    let k = p("\\y1:o->o. \\y2:o. a");
    assert_eq!(cellularize(&k).unwrap(), k);
    let already = p("\\y:(o->o)->o. y (\\z:o. z)");
    assert_eq!(cellularize_semi(&already).unwrap(), already);

    let out = cellularize(&p(ETA_ID)).unwrap();
    assert!(is_cellular(&out).unwrap());
    assert!(decide_equiv(&out, &p(ETA_ID), &sig()).unwrap().is_equivalent());
    assert!(decide_equiv(&out, &c, &sig()).unwrap().is_equivalent());

    let not_semi = p("\\y1:(o->o)->o. \\y2:o->o. y2 (y1 (\\z:o. y2 (y1 (\\w:o. z))))");
    assert_eq!(cellularize_semi(&not_semi), Err(CellError::NotSemiCellular));
    assert!(is_cellular(&cellularize(&not_semi).unwrap()).unwrap());
}

/// A corpus term of bounded order with its signature.
fn corpus_term(max_order: usize) -> impl Strategy<Value = (Term, Signature)> {
    any::<u64>().prop_map(move |seed| corpus(seed, 1, max_order, 40).remove(0))
}

/// Paths of nodes whose head is one of the outer binders.
fn cell_occurrences(t: &Term) -> Vec<(Vec<usize>, usize)> {
    let n = t.binders().len();
    t.paths()
        .into_iter()
        .filter_map(|path| {
            let (node, depth) = t.node_at(&path).ok()?;
            matches!(node.head(), Head::Var(l) if *l < n).then_some((path, depth))
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cellularize_is_cellular_and_stable((t, _s) in corpus_term(4)) {
        let c = cellularize(&t).unwrap();
        prop_assert!(is_cellular(&c).unwrap());
        prop_assert!(is_semi_cellular(&c).unwrap());
        prop_assert_eq!(c.ty(), t.ty());
        prop_assert_eq!(cellularize(&c).unwrap(), c.clone());
        prop_assert_eq!(cellularize(&t).unwrap(), c);
        if is_cellular(&t).unwrap() {
            prop_assert_eq!(cellularize(&t).unwrap(), t);
        }
    }

    #[test]
    fn cellularize_preserves_equivalence((t, s) in corpus_term(3)) {
        let c = cellularize(&t).unwrap();
        prop_assert!(decide_equiv(&t, &c, &s).unwrap().is_equivalent());
        if is_semi_cellular(&t).unwrap() {
            let c2 = cellularize_semi(&t).unwrap();
            prop_assert!(is_cellular(&c2).unwrap());
            prop_assert!(decide_equiv(&t, &c2, &s).unwrap().is_equivalent());
        }
    }

    #[test]
    fn factoring_round_trips((t, _s) in corpus_term(4)) {
        let c = cellularize(&t).unwrap();
        let n = c.binders().len();
        for (path, depth) in cell_occurrences(&c) {
            let body = c.node_at(&path).unwrap().0.body();
            let (cell, fillers) = factor_cell(&body, depth, n).unwrap();
            let parts: Vec<_> = fillers
                .iter()
                .map(|f| (f.moved_to(n, depth).unwrap(), depth))
                .collect();
            prop_assert_eq!(cell.plug(depth, &parts).unwrap(), body);
            for j in 0..cell.args.len() {
                prop_assert!(cell.context_closure(j).is_closed());
            }
        }
    }

    #[test]
    fn excising_a_cell_keeps_cellularity((t, _s) in corpus_term(4)) {
        let c = cellularize(&t).unwrap();
        let n = c.binders().len();
        for (path, depth) in cell_occurrences(&c) {
            let body = c.node_at(&path).unwrap().0.body();
            let (_, fillers) = factor_cell(&body, depth, n).unwrap();
            for f in &fillers {
                let excised = c.replace_body(&path, f.moved_to(n, depth).unwrap()).unwrap();
                prop_assert!(is_cellular(&excised).unwrap(), "{}", print_term(&excised));
            }
        }
    }

    #[test]
    fn stretch_and_shrink_keep_verdicts((t, s) in corpus_term(3), pick in any::<prop::sample::Index>()) {
        let model = Model::default();
        let partner = random_closed_term(&t.ty(), &s, 7);
        let before = model.decide_equiv(&t, &partner, &s).unwrap().is_equivalent();
        let paths = t.paths();
        let path = pick.get(&paths);
        let st = stretch(&t, path).unwrap();
        prop_assert!(model.decide_equiv(&t, &st, &s).unwrap().is_equivalent());
        prop_assert_eq!(model.decide_equiv(&st, &partner, &s).unwrap().is_equivalent(), before);
        for site in shrink_sites(&st).iter().take(4) {
            let sh = shrink(&st, &site.outer, &site.inner, site.k).unwrap();
            prop_assert!(sh.size() < st.size());
            prop_assert!(model.decide_equiv(&st, &sh, &s).unwrap().is_equivalent());
            prop_assert_eq!(model.decide_equiv(&sh, &partner, &s).unwrap().is_equivalent(), before);
        }
    }

    #[test]
    fn cellular_identity_makes_applications_cellular((t, s) in corpus_term(3)) {
        let ty = t.ty();
        if ty.is_ground() {
            return Ok(());
        }
        let id = cellularize(&Term::identity(&ty)).unwrap();
        let applied = apply(&id, std::slice::from_ref(&t)).unwrap();
        prop_assert!(is_cellular(&applied).unwrap(), "{}", print_term(&applied));
        prop_assert!(decide_equiv(&applied, &t, &s).unwrap().is_equivalent());
    }
}
