"""Restriction of ordinary characters along fusions and decomposition into
subgroup irreducibles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cyclo import Cyclotomic
from .fusion import FusionMap
from .tables import Character, CharacterTable, inner


class InvalidFusionError(ValueError):
    """A restriction has a multiplicity that is not a non-negative integer."""


@dataclass(frozen=True)
class Decomposition:
    multiplicities: dict[str, int]
    norm: int

    @property
    def constituents(self) -> int:
        return sum(self.multiplicities.values())

    def is_irreducible(self) -> bool:
        return self.norm == 1

    def to_dict(self) -> dict:
        return {"multiplicities": dict(self.multiplicities), "norm": self.norm}

    def __str__(self):
        if not self.multiplicities:
            return "0"
        return " + ".join(name if m == 1 else f"{m}*{name}" for name, m in self.multiplicities.items())


def restrict_char(chi: Character | Sequence[Cyclotomic], f: FusionMap) -> tuple[Cyclotomic, ...]:
    values = chi.values if isinstance(chi, Character) else tuple(chi)
    if len(values) != f.amb.nclasses:
        raise ValueError(f"class function does not live on {f.amb.group_name}")
    return tuple(values[j] for j in f.map)


def decompose_class_function(values: Sequence[Cyclotomic], t: CharacterTable) -> Decomposition:
    mults: dict[str, int] = {}
    for theta in t.irreducibles:
        m = inner(t, values, theta.values)
        if not m.is_integer() or int(m) < 0:
            raise InvalidFusionError(
                f"multiplicity of {theta.name} of {t.group_name} is {m}, not a non-negative integer")
        if int(m):
            mults[theta.name] = int(m)
    return Decomposition(mults, sum(m * m for m in mults.values()))


def decompose(chi: Character, f: FusionMap) -> Decomposition:
    return decompose_class_function(restrict_char(chi, f), f.sub)


def is_irreducible_restriction(chi: Character, f: FusionMap) -> bool:
    return decompose(chi, f).norm == 1


def reconstruct(dec: Decomposition, t: CharacterTable) -> tuple[Cyclotomic, ...]:
    """sum of mult * theta as a class function on t."""
    out = [Cyclotomic(0)] * t.nclasses
    for name, m in dec.multiplicities.items():
        theta = t.character(name)
        out = [a + m * b for a, b in zip(out, theta.values)]
    return tuple(out)


def induce(theta: Character | Sequence[Cyclotomic], f: FusionMap) -> tuple[Cyclotomic, ...]:
    """Induced class function by the transpose formula
    theta^G(g) = |C_G(g)| * sum over sub classes h fusing to g of theta(h) / |C_H(h)|."""
    values = theta.values if isinstance(theta, Character) else tuple(theta)
    out = []
    for j, c in enumerate(f.amb.classes):
        acc = Cyclotomic(0)
        for i, img in enumerate(f.map):
            if img == j:
                acc = acc + values[i] / f.sub.classes[i].centralizer_order
        out.append(acc * c.centralizer_order)
    return tuple(out)
