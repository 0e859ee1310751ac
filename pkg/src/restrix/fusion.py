"""Class fusion maps from a subgroup table into an ambient table.

Fusions are inferred, never looked up: candidate images come from element
orders and power maps, and complete assignments are then filtered by
requiring every restricted ambient character to decompose with non-negative
integer multiplicities.  When several fusions survive they are all kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .cyclo import conductor, integral_coords, product_coords
from .tables import Character, CharacterTable


class FusionError(ValueError):
    """The two tables admit no compatible fusion."""


@dataclass(frozen=True)
class FusionMap:
    sub: CharacterTable
    amb: CharacterTable
    map: tuple[int, ...]

    def __post_init__(self):
        if len(self.map) != self.sub.nclasses:
            raise ValueError("fusion map length differs from the number of subgroup classes")

    def compose(self, outer: "FusionMap") -> "FusionMap":
        """The fusion sub -> outer.amb through self.amb."""
        if outer.sub is not self.amb:
            raise ValueError(f"cannot compose {self.amb.group_name} with {outer.sub.group_name}")
        return FusionMap(self.sub, outer.amb, tuple(outer.map[j] for j in self.map))

    def class_names(self) -> list[tuple[str, str]]:
        return [(self.sub.classes[i].name, self.amb.classes[j].name) for i, j in enumerate(self.map)]

    def __repr__(self):
        pairs = ", ".join(f"{a}->{b}" for a, b in self.class_names())
        return f"FusionMap({self.sub.group_name} -> {self.amb.group_name}: {pairs})"


@dataclass(frozen=True)
class FusionCandidates:
    sub: CharacterTable
    amb: CharacterTable
    sets: tuple[frozenset[int], ...]

    def names(self) -> dict[str, list[str]]:
        return {self.sub.classes[i].name: sorted(self.amb.classes[j].name for j in s)
                for i, s in enumerate(self.sets)}

    def product_size(self) -> int:
        return math.prod(len(s) for s in self.sets)


def identity_fusion(t: CharacterTable) -> FusionMap:
    return FusionMap(t, t, tuple(range(t.nclasses)))


def _common_primes(sub: CharacterTable, amb: CharacterTable) -> list[int]:
    return sorted(set(sub.power_maps) & set(amb.power_maps))


def candidates(sub: CharacterTable, amb: CharacterTable, *, centralizers: bool = False) -> FusionCandidates:
    """Per-class candidate images under element-order, identity and power-map constraints.

    With ``centralizers=True`` also require the subgroup centralizer order to
    divide the ambient one (C_H(h) is a subgroup of C_G(h)).
    """
    if amb.group_order % sub.group_order:
        raise FusionError(f"|{sub.group_name}| does not divide |{amb.group_name}|")
    sets: list[set[int]] = []
    for i, c in enumerate(sub.classes):
        if i == 0:
            s = {0}
        else:
            s = {j for j, d in enumerate(amb.classes) if j != 0 and d.element_order == c.element_order}
            if centralizers:
                s = {j for j in s if amb.classes[j].centralizer_order % c.centralizer_order == 0}
        if not s:
            raise FusionError(f"no class of {amb.group_name} can contain {sub.group_name} class {c.name}")
        sets.append(s)

    primes = _common_primes(sub, amb)
    changed = True
    while changed:
        changed = False
        for p in primes:
            spm, apm = sub.power_maps[p], amb.power_maps[p]
            for i, s in enumerate(sets):
                target = sets[spm[i]]
                keep = {j for j in s if apm[j] in target}
                if keep != s:
                    sets[i] = s = keep
                    changed = True
                images = {apm[j] for j in s}
                if not target <= images:
                    sets[spm[i]] = target & images
                    changed = True
        for i, s in enumerate(sets):
            if not s:
                raise FusionError(
                    f"power maps leave no image for {sub.group_name} class {sub.classes[i].name}")
    return FusionCandidates(sub, amb, tuple(frozenset(s) for s in sets))


def _assignments(c: FusionCandidates) -> Iterable[tuple[int, ...]]:
    """All complete assignments from the candidate sets that commute with power maps."""
    sub, amb = c.sub, c.amb
    primes = _common_primes(sub, amb)
    n = sub.nclasses
    # lower element orders first, so p-th powers are usually fixed before their roots
    order = sorted(range(n), key=lambda i: (sub.classes[i].element_order, i))
    roots: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for p in primes:
        for k, img in enumerate(sub.power_maps[p]):
            roots[img].append((p, k))
    assigned = [-1] * n
    cand = [sorted(s) for s in c.sets]

    def ok(i: int, j: int) -> bool:
        for p in primes:
            ip = sub.power_maps[p][i]
            jp = amb.power_maps[p][j]
            if ip == i:
                if jp != j:
                    return False
            elif assigned[ip] >= 0 and assigned[ip] != jp:
                return False
        for p, k in roots[i]:
            if k != i and assigned[k] >= 0 and amb.power_maps[p][assigned[k]] != j:
                return False
        return True

    def rec(pos: int):
        if pos == n:
            yield tuple(assigned)
            return
        i = order[pos]
        for j in cand[i]:
            if ok(i, j):
                assigned[i] = j
                yield from rec(pos + 1)
                assigned[i] = -1

    yield from rec(0)


class _DecompositionKernel:
    """Exact integer test of restriction multiplicities over many assignments.

    For sub class i mapped to ambient class j, the contribution of (chi, theta)
    to |H| * <chi|_H, theta> is |i| * chi(j) * conj(theta(i)); these products
    are precomputed as integer power-basis coordinates in one common field.
    """

    def __init__(self, c: FusionCandidates, chars: Sequence[Character]):
        sub = c.sub
        self.order = sub.group_order
        sizes = sub.class_sizes()
        vals = [chi.values[j] for chi in chars for s in c.sets for j in s]
        vals += [v for th in sub.irreducibles for v in th.values]
        n = conductor(vals)
        self.terms: list[dict[int, np.ndarray]] = []
        for i, s in enumerate(c.sets):
            theta = integral_coords([th.values[i].conj() for th in sub.irreducibles], n)
            per = {}
            for j in s:
                chi = integral_coords([ch.values[j] for ch in chars], n)
                per[j] = product_coords(chi, theta, n) * sizes[i]
            self.terms.append(per)

    def multiplicities(self, assignment: Sequence[int]) -> np.ndarray | None:
        """(len(chars), len(sub irreducibles)) multiplicities, or None if any is
        not a non-negative integer."""
        total = sum(self.terms[i][j] for i, j in enumerate(assignment))
        if np.any(total[..., 1:] != 0):
            return None
        const = total[..., 0]
        if np.any(const % self.order != 0) or np.any(const < 0):
            return None
        return const // self.order


def prune_by_decomposition(c: FusionCandidates, test_chars: Iterable[Character]) -> FusionCandidates:
    """Drop candidates that occur in no completion under which every test
    character restricts to a genuine character."""
    test_chars = list(test_chars)
    if not test_chars:
        return c
    kernel = _DecompositionKernel(c, test_chars)
    seen: list[set[int]] = [set() for _ in c.sets]
    for a in _assignments(c):
        if kernel.multiplicities(a) is not None:
            for i, j in enumerate(a):
                seen[i].add(j)
    if not all(seen):
        raise FusionError(
            f"no fusion {c.sub.group_name} -> {c.amb.group_name} restricts the test characters to characters")
    return FusionCandidates(c.sub, c.amb, tuple(frozenset(s) for s in seen))


def enumerate_fusions(c: FusionCandidates) -> list[FusionMap]:
    """All assignments satisfying the order, power-map and decomposition constraints
    for every ambient irreducible."""
    kernel = _DecompositionKernel(c, c.amb.irreducibles)
    return [FusionMap(c.sub, c.amb, a) for a in _assignments(c)
            if kernel.multiplicities(a) is not None]


def possible_fusions(sub: CharacterTable, amb: CharacterTable) -> list[FusionMap]:
    """candidates + enumerate; empty list when the tables are incompatible."""
    try:
        c = candidates(sub, amb)
    except FusionError:
        return []
    return enumerate_fusions(c)


def check_fusion(f: FusionMap) -> list[str]:
    """Constraint violations of a given map (empty when admissible)."""
    sub, amb = f.sub, f.amb
    problems = []
    if f.map[0] != 0:
        problems.append("identity does not map to identity")
    for i, j in enumerate(f.map):
        if sub.classes[i].element_order != amb.classes[j].element_order:
            problems.append(f"{sub.classes[i].name} -> {amb.classes[j].name} changes element order")
    for p in _common_primes(sub, amb):
        for i, j in enumerate(f.map):
            if f.map[sub.power_maps[p][i]] != amb.power_maps[p][j]:
                problems.append(f"{p}-power map not equivariant at {sub.classes[i].name}")
    return problems


_fusion_cache: dict[tuple[int, int], tuple[CharacterTable, CharacterTable, list[FusionMap]]] = {}


def cached_fusions(sub: CharacterTable, amb: CharacterTable) -> list[FusionMap]:
    key = (id(sub), id(amb))
    if key not in _fusion_cache:
        _fusion_cache[key] = (sub, amb, possible_fusions(sub, amb))
    return _fusion_cache[key][2]
