import json
import random

import pytest

from restrix import fusion, linalg, modular
from restrix.cyclo import E
from restrix.modular import (BrauerDecomposition, BrauerSolveError, brauer_table, decompose_brauer,
                             divisibility_filter, hat, prime_index_branching, restrict_brauer)
from restrix.restrict import Decomposition, decompose
from restrix.tables import CORPUS, TableFormatError

STORED = [(k, p) for k in CORPUS for p in (3, 5, 13)]


def stored(corpus):
    return [(k, p) for k, p in STORED if corpus[k].group_order % p == 0]


def test_hat_examples(corpus):
    g = corpus["2F4p"]
    b0 = brauer_table(g, 0)
    chi6 = g.character("chi6")
    assert hat(chi6, b0) == chi6.values
    b3 = brauer_table(g, 3)
    regular = [c for c in g.classes if c.element_order % 3]
    assert len(hat(chi6, b3)) == len(regular)
    assert all(x == 1 for x in hat(g.irreducibles[0], b3))


def test_chi6_minus_trivial_at_three(corpus):
    g = corpus["2F4p"]
    b3 = brauer_table(g, 3)
    d = decompose_brauer(hat(g.character("chi6"), b3), b3)
    assert len(d.multiplicities) == 2 and d.multiplicities.get("phi1") == 1
    other = next(n for n in d.multiplicities if n != "phi1")
    assert b3.character(other).degree == 77 and d.multiplicities[other] == 1
    assert sorted(b3.degrees())[:6] == [1, 26, 26, 27, 27, 77]


def test_basis_and_scalar_multiples(corpus):
    b = brauer_table(corpus["L2_25"], 5)
    for phi in b.irreducibles:
        assert decompose_brauer(phi.values, b).multiplicities == {phi.name: 1}
        assert decompose_brauer([2 * x for x in phi.values], b).multiplicities == {phi.name: 2}


def test_restrict_brauer_examples(corpus):
    g = corpus["2F4p"]

    def results(sub, p, name):
        bs, ba = brauer_table(corpus[sub], p), brauer_table(g, p)
        return [restrict_brauer(hat(g.character(name), ba), f, bs, ba)
                for f in fusion.cached_fusions(corpus[sub], g)]

    for d in results("L3_3", 7, "chi2"):
        assert d.is_irreducible() and list(d.degrees.values()) == [26]
    assert all(d.constituents > 1 for d in results("L3_3_2", 3, "chi2"))
    assert all(d.constituents > 1 for d in results("L3_3", 13, "chi4"))


def test_divisibility_examples():
    assert divisibility_filter(27, 10240, solvable=True).excluded
    assert not divisibility_filter(26, 11232).excluded
    assert divisibility_filter(27, 15600, lifts=True).excluded
    assert not divisibility_filter(27, 15600).excluded
    assert divisibility_filter(100, 10 ** 9, index=96).excluded
    assert not divisibility_filter(26, 10 ** 9, index=96).excluded


def test_branching_examples():
    assert prime_index_branching(Decomposition({"chi13": 2}, 4), 2) == modular.FORCES_REDUCIBLE
    assert prime_index_branching(BrauerDecomposition({"t": 1}), 2) == modular.CONSISTENT_IRREDUCIBLE
    assert prime_index_branching(BrauerDecomposition({"t1": 1, "t2": 1}), 2) == modular.CONSISTENT_SPLIT
    assert prime_index_branching(BrauerDecomposition({"t1": 1, "t2": 1}), 3) == modular.FORCES_REDUCIBLE


@pytest.mark.parametrize("sub,amb", [("L3_3", "2F4p"), ("L2_25", "2F4p"), ("A6_2_2", "2F4p"),
                                     ("L2_25_2", "2F4"), ("L3_3", "L3_3_2")])
def test_characteristic_zero_agrees_with_ordinary(corpus, sub, amb):
    s, a = corpus[sub], corpus[amb]
    bs, ba = brauer_table(s, 0), brauer_table(a, 0)
    for f in fusion.cached_fusions(s, a):
        for chi in a.irreducibles:
            assert restrict_brauer(chi.values, f, bs, ba).multiplicities == decompose(chi, f).multiplicities


def test_every_stored_table_validates(corpus):
    for key, p in stored(corpus):
        report = modular.validate_brauer(brauer_table(corpus[key], p))
        assert report.ok, str(report)


@pytest.mark.parametrize("key,p", [("L3_3", 3), ("L3_3", 13), ("L2_25", 5), ("A6_2_2", 3), ("L2_25_2", 13)])
def test_rank_by_direct_elimination(corpus, key, p):
    bt = brauer_table(corpus[key], p)
    assert linalg.rank([list(phi.values) for phi in bt.irreducibles]) == len(bt.irreducibles)
    assert len(bt.irreducibles) == len(bt.regular_classes)


def test_round_trip_random_combinations(corpus):
    rng = random.Random(1234)
    tabs = [brauer_table(corpus[k], p) for k, p in stored(corpus)]
    done = 0
    for _ in range(1000):
        bt = rng.choice(tabs)
        picks = rng.sample(bt.irreducibles, rng.randint(1, min(4, len(bt.irreducibles))))
        mults = {phi.name: rng.randint(1, 4) for phi in picks}
        v = [0] * len(bt.regular_classes)
        for phi in picks:
            v = [x + mults[phi.name] * y for x, y in zip(v, phi.values)]
        assert decompose_brauer(v, bt).multiplicities == {p.name: mults[p.name] for p in bt.irreducibles
                                                          if p.name in mults}
        done += 1
    assert done >= 1000


def test_gram_and_direct_routes_agree(corpus):
    rng = random.Random(99)
    for key, p in [("L3_3", 3), ("L2_25", 5), ("A6_2_2", 5), ("L3_3_2", 13)]:
        bt = brauer_table(corpus[key], p)
        for _ in range(5):
            coeffs = [rng.randint(0, 3) for _ in bt.irreducibles]
            v = [sum((c * phi.values[j] for c, phi in zip(coeffs, bt.irreducibles)), 0 * E(1))
                 for j in range(len(bt.regular_classes))]
            g = modular.solve_brauer(v, bt, "gram")
            d = modular.solve_brauer(v, bt, "direct")
            assert g == d == coeffs


def test_non_galois_stable_vector_uses_direct_route(corpus):
    bt = brauer_table(corpus["L3_3"], 13)
    phi = next(x for x in bt.irreducibles if not all(v.is_rational() for v in x.values))
    v = [E(3) * x for x in phi.values]
    coords = modular.solve_brauer(v, bt)
    assert coords[bt.irreducibles.index(phi)] == E(3)
    with pytest.raises(BrauerSolveError):
        modular.solve_brauer(v, bt, "gram")
    with pytest.raises(BrauerSolveError):
        decompose_brauer(v, bt)


def test_non_integral_and_negative_rejected(corpus):
    bt = brauer_table(corpus["L3_3"], 3)
    a, b = bt.irreducibles[1], bt.irreducibles[2]
    with pytest.raises(BrauerSolveError, match="not the Brauer character"):
        decompose_brauer([x - y for x, y in zip(a.values, b.values)], bt)
    with pytest.raises(BrauerSolveError):
        decompose_brauer([x / 2 for x in a.values], bt)
    with pytest.raises(ValueError):
        decompose_brauer(a.values[:-1], bt)


def test_regular_fusion_closure(corpus):
    for sub, amb in [("L3_3", "2F4p"), ("L3_3_2", "2F4p"), ("L2_25", "2F4p"), ("A6_2_2", "2F4p"),
                     ("2F4p", "2F4"), ("L2_25_2", "2F4")]:
        s, a = corpus[sub], corpus[amb]
        for f in fusion.cached_fusions(s, a):
            for p in (3, 5, 13):
                for i, j in enumerate(f.map):
                    if s.classes[i].element_order % p:
                        assert a.classes[j].element_order % p


def test_synthesize_rejects_dividing_prime(corpus):
    with pytest.raises(ValueError):
        modular.synthesize(corpus["L3_3"], 3)
    assert modular.synthesize(corpus["L3_3"], 5).irreducibles == corpus["L3_3"].irreducibles


def test_loader_cross_checks_regular_classes(tmp_path, corpus):
    src = modular.corpus_dir() / "L3_3.mod3.json"
    data = json.loads(src.read_text())
    data["regular_classes"] = data["regular_classes"][:-1] + [2]
    p = tmp_path / "L3_3.mod3.json"
    p.write_text(json.dumps(data))
    with pytest.raises(TableFormatError, match="regular"):
        modular.load_brauer(p, corpus["L3_3"])


def test_lifts(corpus):
    g = corpus["2F4p"]
    b3 = brauer_table(g, 3)
    lifted = {phi.degree for phi in b3.irreducibles if modular.lifts_to_ordinary(phi, b3)}
    assert {26, 27} <= lifted and 77 not in lifted
