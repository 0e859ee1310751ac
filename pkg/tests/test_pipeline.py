import json
from collections import Counter

import pytest

from conftest import GOLDEN
from restrix import fusion, modular, pipeline
from restrix.pipeline import (BRAUER, EXPLICIT, FILTERS, IRREDUCIBLE, ORDER_BOUND, REDUCIBLE, SubgroupInstance,
                              classify, order_bound_filter)

RUNS = [("2F4p", 0), ("2F4p", 3), ("2F4p", 5), ("2F4p", 13), ("2F4", 0), ("2F4", 13)]
_cache = {}


def run(amb, p, filters=FILTERS):
    key = (amb, p, tuple(filters))
    if key not in _cache:
        _cache[key] = classify(amb, p, filters=filters)
    return _cache[key]


def test_order_bound_examples():
    assert order_bound_filter(SubgroupInstance("2.[2^8].5.4", 10240), 102).status == REDUCIBLE
    assert order_bound_filter(SubgroupInstance("2.[2^8].5.4", 10240), 101) is None
    assert order_bound_filter(SubgroupInstance("A6.2^2", 1440), 38).reason == ORDER_BOUND
    for n in (1, 6, 10240):
        assert order_bound_filter(SubgroupInstance("M", n), 1) is None


@pytest.mark.parametrize("amb,p", RUNS)
def test_golden_reports(amb, p):
    v = run(amb, p)
    assert pipeline.to_tsv(v) == (GOLDEN / f"{amb}_{p}.tsv").read_text()
    assert pipeline.exceptions_text(v) == (GOLDEN / f"{amb}_{p}.exceptions.tsv").read_text()
    assert not pipeline.undecidable(v)


@pytest.mark.parametrize("amb,p", RUNS)
def test_exceptions_match_theorem(amb, p):
    want = json.loads((GOLDEN / "theorem.json").read_text())[amb][str(p)]
    got = {}
    for v in pipeline.exceptions(run(amb, p)):
        if v.subgroup == "2F4(2)'":
            continue
        got.setdefault(v.subgroup, Counter())[str(v.degree)] += 1
    assert {k: dict(c) for k, c in got.items()} == want


@pytest.mark.parametrize("p", [0, 13])
def test_extension_characters(corpus, p):
    """2F4(2)' verdicts agree with: chi is irreducible on the index-2 subgroup
    iff chi does not vanish on every outer class."""
    big, small = corpus["2F4"], corpus["2F4p"]
    image = {j for f in fusion.cached_fusions(small, big) for j in f.map}
    bt = modular.brauer_table(big, p)
    outer = [k for k, c in enumerate(bt.regular_classes) if c not in image]
    assert outer
    seen = 0
    for v in run("2F4", p):
        if v.path != ("2F4(2)'",):
            continue
        phi = bt.character(v.character)
        expect = IRREDUCIBLE if any(phi.values[k] != 0 for k in outer) else REDUCIBLE
        assert v.status == expect, v.character
        seen += 1
    assert seen == sum(1 for phi in bt.irreducibles if phi.degree > 1)


def test_chi6_minus_one_is_77_at_three(corpus):
    g = corpus["2F4p"]
    bt = modular.brauer_table(g, 3)
    d = modular.decompose_brauer(modular.hat(g.character("chi6"), bt), bt)
    phi = next(bt.character(n) for n in d.multiplicities if n != "phi1")
    assert phi.degree == 77 and d.multiplicities == {"phi1": 1, phi.name: 1}


def test_ell_three_l33_degree_26():
    rows = [v for v in run("2F4p", 3) if v.subgroup == "L3(3)" and v.degree == 26]
    assert rows and all(v.status == REDUCIBLE and v.reason == BRAUER for v in rows)


def test_modular_flips():
    def status(amb, p, sub, deg):
        s = {v.status for v in run(amb, p) if v.subgroup == sub and v.degree == deg}
        assert len(s) == 1
        return s.pop()

    for p in (0, 3, 5, 13):
        assert (status("2F4p", p, "L3(3)", 26) == IRREDUCIBLE) == (p != 3)
        assert (status("2F4p", p, "L3(3)", 27) == IRREDUCIBLE) == (p != 13)
        assert (status("2F4p", p, "L2(25)", 26) == IRREDUCIBLE) == (p not in (3, 5))


def test_irreducible_witnesses_single_constituent():
    for amb, p in RUNS:
        for v in pipeline.exceptions(run(amb, p)):
            assert v.reason in (EXPLICIT, BRAUER)
            entries = v.witness["ordinary" if v.reason == EXPLICIT else "brauer"]
            assert entries and all("+" not in e and "*" not in e for e in entries)


def test_descent_is_monotone():
    """A pair irreducible on a subgroup is irreducible on every group above it on the path."""
    for amb, p in RUNS:
        status = {(v.path, v.character): v.status for v in run(amb, p)}
        for (path, ch), st in status.items():
            if st == IRREDUCIBLE and len(path) > 1:
                assert status[(path[:-1], ch)] == IRREDUCIBLE


@pytest.mark.parametrize("amb,p", [("2F4p", 0), ("2F4p", 13), ("2F4", 0)])
def test_reason_soundness_and_monotonicity(amb, p):
    full = {(v.path, v.character): v for v in run(amb, p)}
    for filters in [(EXPLICIT, BRAUER), (pipeline.DIVISIBILITY, EXPLICIT, BRAUER), (ORDER_BOUND, EXPLICIT, BRAUER)]:
        compared = 0
        for v in run(amb, p, filters):
            if v.status == pipeline.UNDECIDABLE:
                continue
            ref = full[(v.path, v.character)]
            assert v.status == ref.status, (v, ref)
            if ref.reason == ORDER_BOUND and v.reason in (EXPLICIT, BRAUER):
                assert v.status == REDUCIBLE
            compared += 1
        assert compared > 20


def test_thirteen_twelve_order_bound():
    rows = [v for v in run("2F4", 0) if v.subgroup == "13:12"]
    assert rows and all(v.reason == ORDER_BOUND and v.degree >= 27 for v in rows)


def test_shape_only_subgroups_decided_cheaply():
    for amb, p in RUNS:
        for v in run(amb, p):
            if v.subgroup in {"2.[2^8].5.4", "2^2.[2^8].S3", "5^2:4A4", "13:12", "2.[2^9].5.4",
                              "2^2.[2^9].S3", "5^2:4S4", "SU3(2):2"}:
                assert v.reason in (ORDER_BOUND, pipeline.SOLVABLE_LIFT, pipeline.DIVISIBILITY)


def test_reports_deterministic_and_empty(tmp_path):
    v = run("2F4p", 3)
    assert pipeline.to_json(v) == pipeline.to_json(classify("2F4p", 3))
    a = pipeline.write_report(v, tmp_path / "a")
    b = pipeline.write_report(v, tmp_path / "b")
    for x, y in zip(a, b):
        if x.suffix != ".png":
            assert x.read_bytes() == y.read_bytes()
    assert any(p.suffix == ".png" for p in a)
    assert pipeline.summary_text([]) == "" and pipeline.exceptions_text([]) == ""
    assert json.loads(pipeline.to_json([])) == {"verdicts": []}
    paths = pipeline.write_report([], tmp_path / "e")
    assert all(p.read_text() in ("", pipeline.to_json([]), pipeline.to_tsv([])) for p in paths)


def test_bad_prime_rejected():
    for p in (2, 4, -3):
        with pytest.raises(ValueError):
            classify("2F4p", p)
    with pytest.raises(KeyError):
        classify("M", 0)


def test_generic_prime_matches_zero():
    def key(vs):
        return [(v.path, v.character, v.status) for v in vs]
    assert key(classify("2F4p", 7)) == key(run("2F4p", 0))


def test_main_theorem():
    t = pipeline.main_theorem(10)
    assert t["ok"]
    assert len(t["reduction"]) == 10 and len(t["parabolic"]) == 7
    assert {v["subgroup"] for v in t["verdicts"]} >= {"P_a", "P_b"}
