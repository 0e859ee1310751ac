"""Ordinary character tables: data model, JSON loading and exact validation."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .cyclo import Cyclotomic, ExpressionError, parse

FORMAT_VERSION = 1
DATA_DIR = Path(__file__).parent / "data"
CORPUS_ENV = "RESTRIX_CORPUS"

#: corpus keys of the bundled ordinary tables
CORPUS = ("2F4p", "2F4", "L3_3", "L3_3_2", "L2_25", "L2_25_2", "A6_2_2")


class TableFormatError(ValueError):
    """A table file does not follow the JSON schema."""


@dataclass(frozen=True)
class ClassInfo:
    name: str
    element_order: int
    centralizer_order: int


@dataclass(frozen=True)
class Character:
    name: str
    values: tuple[Cyclotomic, ...]

    @property
    def degree(self) -> int:
        return int(self.values[0])

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True, eq=False)
class CharacterTable:
    group_name: str
    group_order: int
    center_order: int
    solvable: bool
    classes: tuple[ClassInfo, ...]
    power_maps: dict[int, tuple[int, ...]]
    irreducibles: tuple[Character, ...]
    key: str = ""
    source: dict = field(default_factory=dict)

    @property
    def nclasses(self) -> int:
        return len(self.classes)

    def class_sizes(self) -> list[int]:
        return [self.group_order // c.centralizer_order for c in self.classes]

    def class_index(self, name: str) -> int:
        for i, c in enumerate(self.classes):
            if c.name == name:
                return i
        raise KeyError(f"{self.group_name} has no class {name!r}")

    def character(self, name: str) -> Character:
        for chi in self.irreducibles:
            if chi.name == name:
                return chi
        raise KeyError(f"{self.group_name} has no character {name!r}")

    def degrees(self) -> list[int]:
        return [chi.degree for chi in self.irreducibles]

    def max_degree(self) -> int:
        return max(self.degrees())

    def __repr__(self):
        return f"CharacterTable({self.group_name!r}, order={self.group_order})"


def corpus_dir(override: str | os.PathLike | None = None) -> Path:
    if override is not None:
        return Path(override)
    env = os.environ.get(CORPUS_ENV)
    return Path(env) if env else DATA_DIR


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise TableFormatError(f"{where}: missing field {key!r}")
    return obj[key]


def _int_field(obj: dict, key: str, where: str) -> int:
    val = _require(obj, key, where)
    if not isinstance(val, int) or isinstance(val, bool) or val <= 0:
        raise TableFormatError(f"{where}: field {key!r} must be a positive integer, got {val!r}")
    return val


def _parse_value(text, where: str) -> Cyclotomic:
    if isinstance(text, int) and not isinstance(text, bool):
        return Cyclotomic(text)
    if not isinstance(text, str):
        raise TableFormatError(f"{where}: value must be a string expression, got {text!r}")
    try:
        return parse(text)
    except ExpressionError as exc:
        raise TableFormatError(f"{where}: {exc}") from exc


def parse_classes(raw, path: str) -> tuple[ClassInfo, ...]:
    if not isinstance(raw, list) or not raw:
        raise TableFormatError(f"{path}: field 'classes' must be a nonempty array")
    out = []
    for i, c in enumerate(raw):
        where = f"{path}: classes[{i}]"
        name = _require(c, "name", where)
        out.append(ClassInfo(str(name), _int_field(c, "element_order", where),
                             _int_field(c, "centralizer_order", where)))
    return tuple(out)


def parse_characters(raw, ncls: int, path: str, field_name: str = "irreducibles") -> tuple[Character, ...]:
    if not isinstance(raw, list):
        raise TableFormatError(f"{path}: field {field_name!r} must be an array")
    out = []
    for i, ch in enumerate(raw):
        where = f"{path}: {field_name}[{i}]"
        name = str(_require(ch, "name", where))
        vals = _require(ch, "values", where)
        if not isinstance(vals, list) or len(vals) != ncls:
            raise TableFormatError(f"{where}: field 'values' must have {ncls} entries")
        out.append(Character(name, tuple(_parse_value(v, f"{where}.values[{j}]")
                                         for j, v in enumerate(vals))))
    return tuple(out)


def read_json(path: str | os.PathLike) -> dict:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise TableFormatError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise TableFormatError(f"{path}: top level must be an object")
    fmt = data.get("format")
    if fmt != FORMAT_VERSION:
        raise TableFormatError(f"{path}: field 'format' must be {FORMAT_VERSION}, got {fmt!r}")
    return data


def load(path: str | os.PathLike) -> CharacterTable:
    """Read an ordinary character table file (no validation)."""
    path = Path(path)
    data = read_json(path)
    where = str(path)
    group = _require(data, "group", where)
    gwhere = f"{where}: group"
    name = str(_require(group, "name", gwhere))
    order = _int_field(group, "order", gwhere)
    center = _int_field(group, "center_order", gwhere)
    solvable = _require(group, "solvable", gwhere)
    if not isinstance(solvable, bool):
        raise TableFormatError(f"{gwhere}: field 'solvable' must be a boolean")
    classes = parse_classes(_require(data, "classes", where), where)
    raw_pm = _require(data, "power_maps", where)
    if not isinstance(raw_pm, dict):
        raise TableFormatError(f"{where}: field 'power_maps' must be an object")
    power_maps = {}
    for p, images in raw_pm.items():
        try:
            prime = int(p)
        except ValueError:
            raise TableFormatError(f"{where}: power_maps key {p!r} is not a prime") from None
        if (not isinstance(images, list) or len(images) != len(classes)
                or not all(isinstance(j, int) and 0 <= j < len(classes) for j in images)):
            raise TableFormatError(f"{where}: power_maps[{p}] must list {len(classes)} class indices")
        power_maps[prime] = tuple(images)
    irr = parse_characters(_require(data, "irreducibles", where), len(classes), where)
    return CharacterTable(name, order, center, solvable, classes, power_maps, irr,
                          key=path.stem, source=data.get("source", {}))


_table_cache: dict[Path, CharacterTable] = {}


def load_table(key: str, directory: str | os.PathLike | None = None) -> CharacterTable:
    """Load a corpus table by key (file stem), caching per path."""
    path = (corpus_dir(directory) / f"{key}.json").resolve()
    if path not in _table_cache:
        _table_cache[path] = load(path)
    return _table_cache[path]


# -- inner products -----------------------------------------------------------

def weighted_sum(weights: Sequence[int], f: Sequence, g: Sequence) -> Cyclotomic:
    """sum_i weights[i] * f[i] * conj(g[i]), exact."""
    rational = Fraction(0)
    irr = Cyclotomic(0)
    for w, a, b in zip(weights, f, g):
        a = a if isinstance(a, Cyclotomic) else Cyclotomic(a)
        b = b if isinstance(b, Cyclotomic) else Cyclotomic(b)
        if not a or not b:
            continue
        if a.is_rational() and b.is_rational():
            rational += w * a.as_fraction() * b.as_fraction()
        else:
            irr = irr + w * a * b.conj()
    return irr + rational


def inner(t: CharacterTable, f: Sequence, g: Sequence) -> Cyclotomic:
    """The standard inner product of two class functions of ``t``."""
    if len(f) != t.nclasses or len(g) != t.nclasses:
        raise ValueError(
            f"class function length mismatch: {len(f)}, {len(g)} vs {t.nclasses} classes")
    return weighted_sum(t.class_sizes(), f, g) / t.group_order


# -- validation ---------------------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool
    witness: str = ""


@dataclass
class ValidationReport:
    group_name: str
    checks: list[Check]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"group": self.group_name, "ok": self.ok,
                "checks": [{"name": c.name, "passed": c.passed, "witness": c.witness}
                           for c in self.checks]}

    def __str__(self):
        lines = [f"{self.group_name}: {'ok' if self.ok else 'FAILED'}"]
        for c in self.checks:
            mark = "pass" if c.passed else "FAIL"
            lines.append(f"  [{mark}] {c.name}" + (f": {c.witness}" if c.witness else ""))
        return "\n".join(lines)


def _prime_divisors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def validate(t: CharacterTable) -> ValidationReport:
    checks: list[Check] = []
    n, order = t.nclasses, t.group_order

    bad = [c.name for c in t.classes if order % c.centralizer_order]
    checks.append(Check("centralizer orders divide |G|", not bad,
                        f"classes {bad}" if bad else ""))
    total = sum(order // c.centralizer_order for c in t.classes) if not bad else None
    checks.append(Check("class sizes sum to |G|", total == order,
                        "" if total == order else f"sum is {total}, |G| = {order}"))
    checks.append(Check("identity class first", t.classes[0].element_order == 1
                        and t.classes[0].centralizer_order == order))

    checks.append(Check("square table", len(t.irreducibles) == n,
                        "" if len(t.irreducibles) == n else f"{len(t.irreducibles)} characters, {n} classes"))

    bad_deg = [chi.name for chi in t.irreducibles
               if not (chi.values[0].is_integer() and int(chi.values[0]) > 0)]
    checks.append(Check("degrees are positive integers", not bad_deg,
                        f"characters {bad_deg}" if bad_deg else ""))
    recorded = t.source.get("degrees")
    if recorded is not None and not bad_deg:
        same = sorted(recorded) == sorted(t.degrees())
        checks.append(Check("degrees match the source record", same,
                            "" if same else f"recorded {sorted(recorded)}"))
    bad_int = [(chi.name, t.classes[j].name) for chi in t.irreducibles
               for j, v in enumerate(chi.values) if v.is_rational() and not v.is_integer()]
    checks.append(Check("rational values are integers", not bad_int,
                        f"{bad_int[0][0]} at {bad_int[0][1]}" if bad_int else ""))

    if not bad_deg:
        s = sum(chi.degree ** 2 for chi in t.irreducibles)
        checks.append(Check("sum of squared degrees equals |G|", s == order,
                            "" if s == order else f"sum is {s}, |G| = {order}"))

    # power maps
    primes = _prime_divisors(order)
    missing = [p for p in primes if p not in t.power_maps]
    checks.append(Check("power map for every prime divisor", not missing,
                        f"missing {missing}" if missing else ""))
    pm_bad = ""
    for p, images in sorted(t.power_maps.items()):
        for i, j in enumerate(images):
            o = t.classes[i].element_order
            if t.classes[j].element_order != o // math.gcd(o, p):
                pm_bad = (f"{p}-th power of {t.classes[i].name} is {t.classes[j].name} "
                          f"(order {t.classes[j].element_order}, expected {o // math.gcd(o, p)})")
                break
        if pm_bad:
            break
    checks.append(Check("power maps respect element orders", not pm_bad, pm_bad))
    pv_bad = ""
    for p, images in sorted(t.power_maps.items()):
        for chi in t.irreducibles:
            for i, j in enumerate(images):
                # chi(g^p) is congruent to the Galois image of chi(g)^p; check the
                # class function identity only for p coprime to the element order
                o = t.classes[i].element_order
                if math.gcd(o, p) == 1 and chi.values[j] != chi.values[i].galois(p):
                    pv_bad = f"{chi.name}: value at {t.classes[j].name} is not the {p}-Galois image of {t.classes[i].name}"
                    break
            if pv_bad:
                break
        if pv_bad:
            break
    checks.append(Check("power maps are Galois-compatible with values", not pv_bad, pv_bad))

    if len(t.irreducibles) == n:
        sizes = t.class_sizes()
        row_bad = ""
        for a, chi in enumerate(t.irreducibles):
            for b in range(a, n):
                val = weighted_sum(sizes, chi.values, t.irreducibles[b].values)
                want = order if a == b else 0
                if val != want:
                    psi = t.irreducibles[b]
                    row_bad = f"<{chi.name}, {psi.name}> = {val / order}, expected {want // order}"
                    break
            if row_bad:
                break
        checks.append(Check("row orthogonality", not row_bad, row_bad))

        col_bad = ""
        for c1 in range(n):
            for c2 in range(c1, n):
                acc = weighted_sum([1] * n, [chi.values[c1] for chi in t.irreducibles],
                                   [chi.values[c2] for chi in t.irreducibles])
                want = t.classes[c1].centralizer_order if c1 == c2 else 0
                if acc != want:
                    col_bad = (f"classes {t.classes[c1].name}, {t.classes[c2].name}: "
                               f"sum is {acc}, expected {want}")
                    break
            if col_bad:
                break
        checks.append(Check("column orthogonality", not col_bad, col_bad))
        if not row_bad:
            checks.append(_adams_check(t))
    return ValidationReport(t.group_name, checks)


def _adams_check(t: CharacterTable) -> Check:
    """chi(g^p) is a virtual character; for p = 2 the symmetric and
    alternating squares are characters.  Catches power-map corruption that
    the element-order test cannot see."""
    sizes = t.class_sizes()
    for p, images in sorted(t.power_maps.items()):
        for chi in t.irreducibles:
            adams = [chi.values[j] for j in images]
            if p == 2:
                sq = [v * v for v in chi.values]
                funcs = {"symmetric square": [(a + b) / 2 for a, b in zip(sq, adams)],
                         "alternating square": [(a - b) / 2 for a, b in zip(sq, adams)]}
            else:
                funcs = {f"Adams {p}": adams}
            for label, f in funcs.items():
                for psi in t.irreducibles:
                    m = weighted_sum(sizes, f, psi.values) / t.group_order
                    if not m.is_integer() or (p == 2 and int(m) < 0):
                        return Check("power maps consistent with characters", False,
                                     f"{label} of {chi.name} has multiplicity {m} at {psi.name}")
    return Check("power maps consistent with characters", True)


def dump(t: CharacterTable) -> dict:
    """Serialize a table back to the file schema."""
    return {
        "format": FORMAT_VERSION,
        "group": {"name": t.group_name, "order": t.group_order,
                  "center_order": t.center_order, "solvable": t.solvable},
        "source": t.source,
        "classes": [{"name": c.name, "element_order": c.element_order,
                     "centralizer_order": c.centralizer_order} for c in t.classes],
        "power_maps": {str(p): list(m) for p, m in sorted(t.power_maps.items())},
        "irreducibles": [{"name": chi.name, "values": [str(v) for v in chi.values]}
                         for chi in t.irreducibles],
    }


def iter_table_files(directory: str | os.PathLike) -> Iterable[Path]:
    """Ordinary table files in a corpus directory (Brauer files excluded)."""
    for p in sorted(Path(directory).glob("*.json")):
        if ".mod" not in p.name and not p.name.startswith("pipeline"):
            yield p
