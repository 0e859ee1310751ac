import pytest

from restrix import fusion, restrict
from restrix.cyclo import Cyclotomic
from restrix.restrict import decompose, induce, is_irreducible_restriction, reconstruct, restrict_char
from restrix.tables import inner

PAIRS = [("L3_3", "2F4p"), ("L3_3_2", "2F4p"), ("L2_25", "2F4p"), ("A6_2_2", "2F4p"),
         ("L2_25_2", "2F4"), ("L3_3", "L3_3_2"), ("L2_25", "L2_25_2")]


def fusions(corpus, sub, amb):
    return fusion.cached_fusions(corpus[sub], corpus[amb])


def test_trivial_and_identity(corpus):
    g = corpus["2F4p"]
    for f in fusions(corpus, "L3_3", "2F4p"):
        assert restrict_char(g.irreducibles[0], f) == corpus["L3_3"].irreducibles[0].values
        assert is_irreducible_restriction(g.irreducibles[0], f)
    ident = fusion.identity_fusion(g)
    assert restrict_char(g.character("chi6"), ident) == g.character("chi6").values


def test_case_one(corpus):
    g = corpus["2F4p"]
    for f in fusions(corpus, "L3_3", "2F4p"):
        assert restrict_char(g.character("chi2"), f)[0] == 26
        for name, target in [("chi2", "chi8"), ("chi3", "chi8"), ("chi4", "chi11"), ("chi5", "chi11")]:
            d = decompose(g.character(name), f)
            assert d.multiplicities == {target: 1} and d.norm == 1


def test_degree_52_to_l2_25(corpus):
    g = corpus["2F4"]
    chi = next(c for c in g.irreducibles if c.degree == 52)
    for f in fusions(corpus, "L2_25", "L2_25_2"):
        for h in fusions(corpus, "L2_25_2", "2F4"):
            d = decompose(chi, f.compose(h))
            assert d.multiplicities == {"chi13": 2} and d.norm == 4
            assert not is_irreducible_restriction(chi, f.compose(h))


def test_l2_25_irreducible(corpus):
    g = corpus["2F4p"]
    for f in fusions(corpus, "L2_25", "2F4p"):
        assert is_irreducible_restriction(g.character("chi2"), f)


@pytest.mark.parametrize("sub,amb", PAIRS)
def test_reconstruction_and_degrees(corpus, sub, amb):
    s = corpus[sub]
    for f in fusions(corpus, sub, amb):
        for chi in corpus[amb].irreducibles:
            d = decompose(chi, f)
            assert reconstruct(d, s) == restrict_char(chi, f)
            assert sum(m * s.character(n).degree for n, m in d.multiplicities.items()) == chi.degree
            assert d.norm == sum(m * m for m in d.multiplicities.values())
            assert d.norm == inner(s, restrict_char(chi, f), restrict_char(chi, f))


@pytest.mark.parametrize("sub,amb", [("L3_3", "L3_3_2"), ("L2_25", "L2_25_2"), ("A6_2_2", "2F4p")])
def test_frobenius_reciprocity(corpus, sub, amb):
    s, a = corpus[sub], corpus[amb]
    f = fusions(corpus, sub, amb)[0]
    for theta in s.irreducibles[:6]:
        up = induce(theta, f)
        assert up[0] == theta.degree * (a.group_order // s.group_order)
        for chi in a.irreducibles:
            assert inner(s, restrict_char(chi, f), theta.values) == inner(a, chi.values, up)


def test_wrong_fusion_detected(corpus):
    s, a = corpus["L3_3"], corpus["2F4p"]
    f = fusions(corpus, "L3_3", "2F4p")[0]
    bad = list(f.map)
    bad[s.class_index("4A")] = a.class_index("4A")
    with pytest.raises(restrict.InvalidFusionError):
        for chi in a.irreducibles:
            decompose(chi, fusion.FusionMap(s, a, tuple(bad)))


def test_length_mismatch(corpus):
    f = fusions(corpus, "L3_3", "2F4p")[0]
    with pytest.raises(ValueError):
        restrict_char([Cyclotomic(1)] * 3, f)
