"""Smoke test for the lamcell_py extension module.

Build and install it first, for example:
    maturin build --release -m crates/python/Cargo.toml
    pip install target/wheels/lamcell_py-*.whl
then run `python python/smoke_test.py`.
"""

import json

import lamcell_py as lc


def main() -> None:
    sig = lc.Signature("a,b")
    assert sig.names() == ["a", "b"]

    ty = lc.parse_type("((o->o)->o)->((o->o)->o)")
    assert str(ty) == "((o->o)->o)->(o->o)->o"
    assert ty.order == 4 and ty.arity == 2

    ident = lc.parse_term("\\y1:(o->o)->o. \\y2:o->o. y1 (\\z:o. y2 z)", sig)
    assert ident == lc.identity(lc.Type("(o->o)->o"))
    assert not lc.is_cellular(ident)
    assert lc.is_semi_cellular(ident)

    cell = lc.cellularize(ident)
    assert lc.is_cellular(cell) and lc.is_hereditary_cellular(cell)
    expected = lc.Term("\\y1:(o->o)->o. \\y2:o->o. y1 (\\d:o. y2 (y1 (\\z:o. z)))", "a,b")
    assert lc.decide_equiv(cell, expected, sig)
    assert lc.decide_equiv(ident, cell, "a,b").equivalent

    verdict = lc.decide_equiv(lc.Term("\\y:o. y", sig), lc.Term("\\y:o. a", sig), sig)
    assert not verdict
    assert [str(w) for w in verdict.witness] == ["b"]
    assert verdict.results == ("b", "a")
    assert json.loads(verdict.to_json())["verdict"] == "inequivalent"
    assert lc.eval_ground(lc.Term("\\y:o. y", sig), verdict.witness) == "b"

    counts = {t: lc.count_classes(lc.Type(t), sig) for t in ["o", "o->o", "o->o->o", "(o->o)->o"]}
    assert counts == {"o": 2, "o->o": 3, "o->o->o": 4, "(o->o)->o": 4}, counts
    assert lc.count_classes(lc.Type("o->o"), "a") == 1

    twice = lc.Term("\\y:o->o. y (y a)", sig)
    once = lc.Term("\\y:o->o. y a", sig)
    assert lc.canonical_rep(twice, sig) == lc.canonical_rep(once, sig)
    (outer, inner, k), *_ = lc.shrink_sites(twice)
    assert lc.shrink(twice, outer, inner, k) == once
    assert lc.stretch(once, [0]) == twice

    model = lc.Model(strategy="by-class")
    table = json.loads(model.representatives(lc.Type("o->o"), sig))
    assert table["strategy"] == "by-class"
    assert len(model.class_reps(lc.Type("o->o->o"), sig)) == 4

    for bad in ["\\y:o. ", "c", "a a"]:
        try:
            lc.parse_term(bad, sig)
        except lc.InputError:
            pass
        else:
            raise AssertionError(f"{bad!r} was accepted")
    try:
        lc.Model(max_fresh=2).count_classes(lc.Type("o->o->o"), sig)
    except lc.BudgetError:
        pass
    else:
        raise AssertionError("budget was not enforced")
    assert issubclass(lc.BudgetError, lc.LamcellError)

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
