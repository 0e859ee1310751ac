import dataclasses
import json
import random
import zlib

import pytest

from restrix import tables
from restrix.cyclo import Cyclotomic
from restrix.tables import Character, TableFormatError, inner, validate


def test_corpus_validates(corpus):
    for key, t in corpus.items():
        report = validate(t)
        assert report.ok, str(report)


def test_orders(corpus):
    assert corpus["L3_3"].group_order == 5616
    q0 = 2
    ree = q0 ** 12 * (q0 - 1) * (q0 ** 3 + 1) * (q0 ** 4 - 1) * (q0 ** 6 + 1)
    assert corpus["2F4"].group_order == ree
    assert corpus["2F4p"].group_order == ree // 2 == 17971200


def test_quoted_values(corpus):
    g = corpus["2F4p"]
    six_a = g.class_index("6A")
    assert g.character("chi2").values[six_a] == -1
    assert g.character("chi3").values[six_a] == -1
    assert g.character("chi3").values == tuple(v.conj() for v in g.character("chi2").values)
    assert g.degrees()[:6] == [1, 26, 26, 27, 27, 78]


def test_inner_examples(corpus):
    g = corpus["2F4p"]
    one = g.irreducibles[0].values
    chi2, chi3 = g.character("chi2").values, g.character("chi3").values
    assert inner(g, one, one) == 1
    assert inner(g, chi2, chi3) == 0
    s = tuple(a + b for a, b in zip(chi2, chi3))
    assert inner(g, s, s) == 2
    with pytest.raises(ValueError):
        inner(g, chi2[:-1], chi3)


def test_orthonormal_small_tables(corpus):
    for key in ("L3_3", "L2_25", "A6_2_2"):
        t = corpus[key]
        for i, a in enumerate(t.irreducibles):
            for j, b in enumerate(t.irreducibles):
                assert inner(t, a.values, b.values) == (1 if i == j else 0)


def _mutate_value(t, rng):
    i = rng.randrange(1, t.nclasses)
    j = rng.randrange(t.nclasses)
    chars = list(t.irreducibles)
    c = chars[i]
    vals = list(c.values)
    vals[j] = vals[j] + 1
    chars[i] = Character(c.name, tuple(vals))
    return dataclasses.replace(t, irreducibles=tuple(chars))


def _mutate_centralizer(t, rng):
    j = rng.randrange(t.nclasses)
    classes = list(t.classes)
    c = classes[j]
    classes[j] = dataclasses.replace(c, centralizer_order=c.centralizer_order * rng.choice([2, 3]))
    return dataclasses.replace(t, classes=tuple(classes))


def _mutate_power_map(t, rng):
    p = rng.choice(sorted(t.power_maps))
    pm = list(t.power_maps[p])
    j = rng.randrange(1, t.nclasses)
    pm[j] = rng.choice([k for k in range(t.nclasses) if k != pm[j]])
    maps = dict(t.power_maps)
    maps[p] = tuple(pm)
    return dataclasses.replace(t, power_maps=maps)


@pytest.mark.parametrize("key", ["L3_3", "L2_25", "A6_2_2", "L3_3_2"])
@pytest.mark.parametrize("mutate", [_mutate_value, _mutate_centralizer, _mutate_power_map])
def test_single_mutations_detected(corpus, key, mutate):
    rng = random.Random(zlib.crc32(f"{key}:{mutate.__name__}".encode()))
    t = corpus[key]
    for _ in range(15):
        assert not validate(mutate(t, rng)).ok


def test_perturbed_value_names_pair(corpus):
    t = corpus["L2_25"]
    chars = list(t.irreducibles)
    vals = list(chars[3].values)
    vals[2] = vals[2] + 1
    chars[3] = Character(chars[3].name, tuple(vals))
    report = validate(dataclasses.replace(t, irreducibles=tuple(chars)))
    row = next(c for c in report.checks if c.name == "row orthogonality")
    assert not row.passed and chars[3].name in row.witness


def test_load_errors(tmp_path, corpus):
    good = tables.dump(corpus["L3_3"])
    for field, mangle in [("group", lambda d: d.pop("group")),
                          ("classes", lambda d: d.pop("classes")),
                          ("power_maps", lambda d: d["power_maps"].update({"3": [0]})),
                          ("format", lambda d: d.update({"format": 7})),
                          ("solvable", lambda d: d["group"].update({"solvable": "no"}))]:
        data = json.loads(json.dumps(good))
        mangle(data)
        p = tmp_path / f"bad_{field}.json"
        p.write_text(json.dumps(data))
        with pytest.raises(TableFormatError, match=field):
            tables.load(p)
    data = json.loads(json.dumps(good))
    data["irreducibles"][1]["values"][1] = "E(3"
    p = tmp_path / "bad_expr.json"
    p.write_text(json.dumps(data))
    with pytest.raises(TableFormatError, match=r"irreducibles\[1\]\.values\[1\].*malformed E"):
        tables.load(p)


def test_dump_round_trip(tmp_path, corpus):
    t = corpus["A6_2_2"]
    p = tmp_path / "A6_2_2.json"
    p.write_text(json.dumps(tables.dump(t)))
    u = tables.load(p)
    assert u.classes == t.classes and u.irreducibles == t.irreducibles and u.power_maps == t.power_maps


def test_corpus_env(tmp_path, monkeypatch, corpus):
    monkeypatch.setenv(tables.CORPUS_ENV, str(tmp_path))
    assert tables.corpus_dir() == tmp_path
    assert tables.corpus_dir("x") == tables.Path("x")


def test_character_degree():
    c = Character("x", (Cyclotomic(3), Cyclotomic(-1)))
    assert c.degree == 3
