"""Brauer characters for odd primes and the Clifford-theoretic filters.

Prime 0 stands for characteristic zero; for any prime not dividing the group
order the Brauer table is the ordinary table, so it is synthesized rather
than stored.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from pathlib import Path
from typing import Sequence

from . import linalg
from .cyclo import Cyclotomic
from .fusion import FusionMap
from .restrict import InvalidFusionError
from .tables import (Character, CharacterTable, Check, TableFormatError, ValidationReport,
                     corpus_dir, parse_characters, parse_classes, read_json, weighted_sum)


class BrauerSolveError(ArithmeticError):
    """The Brauer basis is singular or a coordinate is not a non-negative integer."""


@dataclass(frozen=True, eq=False)
class BrauerTable:
    base: CharacterTable
    prime: int
    regular_classes: tuple[int, ...]
    irreducibles: tuple[Character, ...]
    source: dict = field(default_factory=dict)

    @property
    def synthesized(self) -> bool:
        return self.source.get("synthesized", False)

    def regular_sizes(self) -> list[int]:
        sizes = self.base.class_sizes()
        return [sizes[i] for i in self.regular_classes]

    def character(self, name: str) -> Character:
        for phi in self.irreducibles:
            if phi.name == name:
                return phi
        raise KeyError(f"{self.base.group_name} mod {self.prime} has no Brauer character {name!r}")

    def degrees(self) -> list[int]:
        return [phi.degree for phi in self.irreducibles]

    def __repr__(self):
        return f"BrauerTable({self.base.group_name!r}, prime={self.prime})"


@dataclass(frozen=True)
class BrauerDecomposition:
    multiplicities: dict[str, int]
    degrees: dict[str, int] = field(default_factory=dict, compare=False)

    @property
    def constituents(self) -> int:
        return sum(self.multiplicities.values())

    @property
    def norm(self) -> int:
        return sum(m * m for m in self.multiplicities.values())

    def is_irreducible(self) -> bool:
        return self.constituents == 1

    def to_dict(self) -> dict:
        return {"multiplicities": dict(self.multiplicities)}

    def __str__(self):
        if not self.multiplicities:
            return "0"
        return " + ".join(name if m == 1 else f"{m}*{name}" for name, m in self.multiplicities.items())


def is_regular(order: int, prime: int) -> bool:
    return prime == 0 or order % prime != 0


def synthesize(t: CharacterTable, prime: int) -> BrauerTable:
    """The Brauer table for a prime not dividing |G| (or prime 0): Irr itself."""
    if prime and t.group_order % prime == 0:
        raise ValueError(f"{prime} divides |{t.group_name}|; a stored Brauer table is required")
    return BrauerTable(t, prime, tuple(range(t.nclasses)), t.irreducibles,
                       {"synthesized": True})


def load_brauer(path: str | Path, base: CharacterTable) -> BrauerTable:
    path = Path(path)
    data = read_json(path)
    where = str(path)
    prime = data.get("prime")
    if not isinstance(prime, int) or prime < 3:
        raise TableFormatError(f"{where}: field 'prime' must be an odd prime, got {prime!r}")
    group = data.get("group", {})
    if group.get("name") != base.group_name or group.get("order") != base.group_order:
        raise TableFormatError(f"{where}: group does not match base table {base.group_name}")
    regular = data.get("regular_classes")
    if not isinstance(regular, list) or not all(isinstance(i, int) and 0 <= i < base.nclasses
                                                for i in regular):
        raise TableFormatError(f"{where}: field 'regular_classes' must list class indices of the base table")
    expected = [i for i, c in enumerate(base.classes) if is_regular(c.element_order, prime)]
    if regular != expected:
        raise TableFormatError(
            f"{where}: regular_classes {regular} disagree with the {prime}-regular classes {expected}")
    classes = parse_classes(data.get("classes"), where)
    for i, c in zip(regular, classes):
        if c != base.classes[i]:
            raise TableFormatError(f"{where}: class {c.name} does not match base class {base.classes[i].name}")
    irr = parse_characters(data.get("irreducibles"), len(regular), where)
    return BrauerTable(base, prime, tuple(regular), irr, data.get("source", {}))


# keyed by id; the table is stored alongside so the id cannot be recycled
_brauer_cache: dict[tuple[int, int], tuple[CharacterTable, BrauerTable]] = {}


def brauer_table(t: CharacterTable, prime: int, directory=None) -> BrauerTable:
    """Brauer table of a corpus group: stored file, or synthesized when prime is 0
    or coprime to the group order."""
    key = (id(t), prime)
    if key in _brauer_cache:
        return _brauer_cache[key][1]
    if prime == 0 or t.group_order % prime:
        bt = synthesize(t, prime)
    else:
        path = corpus_dir(directory) / f"{t.key}.mod{prime}.json"
        if not path.exists():
            raise FileNotFoundError(f"no {prime}-modular table for {t.group_name} at {path}")
        bt = load_brauer(path, t)
    _brauer_cache[key] = (t, bt)
    return bt


# -- decomposition ------------------------------------------------------------

def hat(chi: Character | Sequence[Cyclotomic], bt: BrauerTable) -> tuple[Cyclotomic, ...]:
    """Restriction of an ordinary class function to the regular classes."""
    values = chi.values if isinstance(chi, Character) else tuple(chi)
    if len(values) != bt.base.nclasses:
        raise ValueError(f"class function does not live on {bt.base.group_name}")
    return tuple(values[i] for i in bt.regular_classes)


_gram_cache: "weakref.WeakKeyDictionary[BrauerTable, list[list[Fraction]] | None]" = weakref.WeakKeyDictionary()


def _gram(bt: BrauerTable) -> list[list[Fraction]] | None:
    """sum over regular classes of |class| phi conj(psi); rational for Galois-stable
    bases, None otherwise."""
    if bt not in _gram_cache:
        sizes = bt.regular_sizes()
        rows = []
        for phi in bt.irreducibles:
            row = []
            for psi in bt.irreducibles:
                g = weighted_sum(sizes, phi.values, psi.values)
                if not g.is_rational():
                    rows = None
                    break
                row.append(g.as_fraction())
            if rows is None:
                break
            rows.append(row)
        _gram_cache[bt] = rows
    return _gram_cache[bt]


def _integer_scaled(rows: list[list[Fraction]], rhs: list[Fraction]):
    den = reduce(math.lcm, (x.denominator for r in rows for x in r), 1)
    den = reduce(math.lcm, (x.denominator for x in rhs), den)
    a = [[int(x * den) for x in r] for r in rows]
    b = [[int(x * den)] for x in rhs]
    return a, b


def solve_brauer(v: Sequence[Cyclotomic], bt: BrauerTable, method: str = "auto") -> list:
    """Coordinates of v in the Brauer basis (exact, not necessarily integral).

    ``gram`` solves the rational normal equations G m = b with
    G = Phi D Phi^*, which is rational because Galois conjugation permutes
    the regular classes; it applies when b is rational.  ``direct`` runs
    fraction-free elimination on Phi^T m = v over the cyclotomic field.
    ``auto`` tries gram first.
    """
    if method not in ("auto", "gram", "direct"):
        raise ValueError(f"unknown method {method!r}")
    if len(v) != len(bt.regular_classes):
        raise ValueError(f"expected {len(bt.regular_classes)} regular-class values, got {len(v)}")
    n = len(bt.irreducibles)
    if n != len(bt.regular_classes):
        raise BrauerSolveError("Brauer table is not square")
    v = [x if isinstance(x, Cyclotomic) else Cyclotomic(x) for x in v]
    coords = None
    gram = _gram(bt) if method != "direct" else None
    if gram is not None:
        sizes = bt.regular_sizes()
        rhs = [weighted_sum(sizes, v, phi.values) for phi in bt.irreducibles]
        if all(r.is_rational() for r in rhs):
            a, b = _integer_scaled(gram, [r.as_fraction() for r in rhs])
            try:
                sol = linalg.solve(a, b)
            except linalg.SingularMatrixError as exc:
                raise BrauerSolveError(f"singular Brauer basis for {bt!r}: {exc}") from exc
            coords = [Cyclotomic(x[0]) for x in sol]
    if coords is None and method == "gram":
        raise BrauerSolveError("normal equations are not rational for this vector")
    if coords is None:
        a = [[phi.values[c] for phi in bt.irreducibles] for c in range(n)]
        try:
            coords = [x[0] for x in linalg.solve(a, [[x] for x in v])]
        except linalg.SingularMatrixError as exc:
            raise BrauerSolveError(f"singular Brauer basis for {bt!r}: {exc}") from exc
    for c in range(n):
        acc = Cyclotomic(0)
        for m, phi in zip(coords, bt.irreducibles):
            if m:
                acc = acc + m * phi.values[c]
        if acc != v[c]:
            raise BrauerSolveError(f"solution does not reproduce the value at regular class {c}")
    return coords


def decompose_brauer(v: Sequence[Cyclotomic], bt: BrauerTable, method: str = "auto") -> BrauerDecomposition:
    coords = solve_brauer(v, bt, method)
    mults: dict[str, int] = {}
    degrees: dict[str, int] = {}
    for m, phi in zip(coords, bt.irreducibles):
        if not m.is_integer() or int(m) < 0:
            raise BrauerSolveError(
                f"coefficient of {phi.name} is {m}; not the Brauer character of a module")
        if int(m):
            mults[phi.name] = int(m)
            degrees[phi.name] = phi.degree
    return BrauerDecomposition(mults, degrees)


def restrict_brauer(chi_hat: Sequence[Cyclotomic], f: FusionMap, bt_sub: BrauerTable,
                    bt_amb: BrauerTable | None = None) -> BrauerDecomposition:
    """Decompose an ambient Brauer character over IBr of the subgroup.

    ``chi_hat`` is indexed by the ambient regular classes (bt_amb), or by all
    ambient classes when bt_amb is omitted.
    """
    if bt_sub.base is not f.sub:
        raise ValueError("Brauer table does not belong to the fusion's subgroup")
    p = bt_sub.prime
    if bt_amb is not None:
        pos = {c: k for k, c in enumerate(bt_amb.regular_classes)}
        lookup = lambda j: chi_hat[pos[j]]  # noqa: E731
    else:
        if len(chi_hat) != f.amb.nclasses:
            raise ValueError("ambient values must cover all classes when no Brauer table is given")
        lookup = lambda j: chi_hat[j]  # noqa: E731
    pulled = []
    for i in bt_sub.regular_classes:
        j = f.map[i]
        if not is_regular(f.amb.classes[j].element_order, p):
            raise InvalidFusionError(f"regular class {f.sub.classes[i].name} fuses to a {p}-singular class")
        pulled.append(lookup(j))
    try:
        return decompose_brauer(pulled, bt_sub)
    except BrauerSolveError as exc:
        raise InvalidFusionError(str(exc)) from exc


def lifts_to_ordinary(phi: Character, bt: BrauerTable) -> Character | None:
    """An ordinary irreducible whose regular restriction equals phi, if any."""
    for chi in bt.base.irreducibles:
        if chi.degree == phi.degree and hat(chi, bt) == phi.values:
            return chi
    return None


# -- validation ---------------------------------------------------------------

def validate_brauer(bt: BrauerTable) -> ValidationReport:
    checks = []
    expected = tuple(i for i, c in enumerate(bt.base.classes) if is_regular(c.element_order, bt.prime))
    checks.append(Check("regular classes are exactly the prime-regular classes",
                        bt.regular_classes == expected))
    n, r = len(bt.irreducibles), len(bt.regular_classes)
    checks.append(Check("one irreducible per regular class", n == r,
                        "" if n == r else f"{n} irreducibles, {r} regular classes"))
    bad = [phi.name for phi in bt.irreducibles
           if not (phi.values[0].is_integer() and int(phi.values[0]) > 0)]
    checks.append(Check("degrees are positive integers", not bad, f"{bad}" if bad else ""))
    recorded = bt.source.get("degrees")
    if recorded is not None and not bad:
        same = sorted(recorded) == sorted(bt.degrees())
        checks.append(Check("degrees match the source record", same,
                            "" if same else f"recorded {sorted(recorded)}"))
    gram = _gram(bt)
    if gram is not None:
        a, _ = _integer_scaled(gram, [])
        rk = linalg.rank(a)
    else:
        rk = linalg.rank([list(phi.values) for phi in bt.irreducibles])
    checks.append(Check("irreducibles are linearly independent", rk == n,
                        "" if rk == n else f"rank {rk} < {n}"))
    dec_bad = ""
    if rk == n == r:
        for chi in bt.base.irreducibles:
            try:
                decompose_brauer(hat(chi, bt), bt)
            except BrauerSolveError as exc:
                dec_bad = f"{chi.name}: {exc}"
                break
    checks.append(Check("ordinary irreducibles decompose with non-negative integer multiplicities",
                        not dec_bad, dec_bad))
    return ValidationReport(f"{bt.base.group_name} mod {bt.prime}", checks)


# -- Clifford-theoretic filters ---------------------------------------------------

EXCLUDED = "excluded"
NOT_EXCLUDED = "not excluded"


@dataclass(frozen=True)
class FilterVerdict:
    status: str
    reason: str = ""

    @property
    def excluded(self) -> bool:
        return self.status == EXCLUDED


def divisibility_filter(chi_deg: int, sub_order: int, index: int | None = None,
                        solvable: bool = False, lifts: bool = False) -> FilterVerdict:
    """Degree conditions an irreducible restriction to a subgroup must satisfy.

    * solvable subgroup (Fong-Swan): the restriction lifts to an ordinary
      irreducible, so its degree divides the subgroup order;
    * ``lifts``: the character is the reduction of an ordinary irreducible,
      whose irreducible restriction must then have degree dividing the order;
    * ``index``: an abelian normal subgroup of this index bounds every
      irreducible degree of the subgroup (Isaacs).
    """
    if index is not None and chi_deg > index:
        return FilterVerdict(EXCLUDED, f"degree {chi_deg} exceeds abelian normal subgroup index {index}")
    if sub_order % chi_deg:
        if solvable:
            return FilterVerdict(EXCLUDED, f"solvable subgroup: degree {chi_deg} does not divide {sub_order}")
        if lifts:
            return FilterVerdict(EXCLUDED, f"lifted degree {chi_deg} does not divide {sub_order}")
    return FilterVerdict(NOT_EXCLUDED)


CONSISTENT_IRREDUCIBLE = "consistent-irreducible"
CONSISTENT_SPLIT = "consistent-split"
FORCES_REDUCIBLE = "forces-reducible-over-K"


def prime_index_branching(dec, p: int) -> str:
    """Branching test for H normal of prime index p in K.

    An irreducible of K restricts to H irreducibly or as p distinct
    irreducibles; anything else shows the K-character was reducible.
    """
    mults = dec.multiplicities
    total = sum(mults.values())
    if total == 1:
        return CONSISTENT_IRREDUCIBLE
    if len(mults) == p and all(m == 1 for m in mults.values()):
        return CONSISTENT_SPLIT
    return FORCES_REDUCIBLE
