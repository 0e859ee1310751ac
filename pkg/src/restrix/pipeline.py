"""Classification of irreducible restrictions to proper subgroups.

For each maximal subgroup M of the ambient group and each nonlinear
irreducible (ordinary for prime 0, Brauer otherwise) a fixed sequence of
filters runs, cheapest first, and the first one that decides wins.  Pairs
that stay irreducible are followed into the declared subgroups of M.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import genericq, modular
from .fusion import FusionMap, cached_fusions
from .modular import BrauerSolveError, BrauerTable, brauer_table, divisibility_filter, prime_index_branching
from .restrict import InvalidFusionError, decompose_class_function
from .tables import DATA_DIR, Character, CharacterTable, TableFormatError, corpus_dir, load_table, read_json

IRREDUCIBLE = "irreducible"
REDUCIBLE = "reducible"
UNDECIDABLE = "undecidable"

ORDER_BOUND = "order-bound"
DIVISIBILITY = "divisibility"
SOLVABLE_LIFT = "solvable-lift-degree"
EXPLICIT = "explicit-decomposition"
BRAUER = "brauer-decomposition"
BRANCHING = "prime-index-branching"
EXTERNAL = "external-fact"
NO_FILTER = "none"

# filter order; solvable-lift-degree is the divisibility filter on a solvable subgroup
FILTERS = (ORDER_BOUND, DIVISIBILITY, EXPLICIT, BRAUER, BRANCHING)

PRIMES_ALL = (0, 3, 5, 13)
SUBGROUP_FILE = "pipeline_subgroups.json"


@dataclass(frozen=True)
class SubgroupInstance:
    name: str
    order: int
    table: CharacterTable | None = None
    solvable: bool = False
    normal_in: str | None = None
    index: int | None = None
    max_order_of_proper_subgroups: int | None = None
    note: str = ""
    children: tuple["SubgroupInstance", ...] = ()
    bound_only: bool = False

    @property
    def center_order(self) -> int:
        return self.table.center_order if self.table is not None else 1

    @property
    def is_solvable(self) -> bool:
        return self.table.solvable if self.table is not None else self.solvable

    def descendants(self) -> tuple["SubgroupInstance", ...]:
        """Declared children plus the bound-only family of the remaining proper subgroups."""
        out = list(self.children)
        if self.max_order_of_proper_subgroups is not None:
            others = "" if not self.children else " other than " + ", ".join(c.name for c in self.children)
            out.append(SubgroupInstance(f"proper subgroups of {self.name}{others}",
                                        self.max_order_of_proper_subgroups, bound_only=True))
        return tuple(out)


@dataclass(frozen=True)
class Ambient:
    key: str
    table: CharacterTable
    maximals: tuple[SubgroupInstance, ...]


def _subgroup_file(directory) -> Path:
    p = corpus_dir(directory) / SUBGROUP_FILE
    return p if p.exists() else DATA_DIR / SUBGROUP_FILE


def _instance(raw: dict, ambients: dict, directory, where: str) -> SubgroupInstance:
    name = raw.get("name")
    if not isinstance(name, str):
        raise TableFormatError(f"{where}: subgroup entry without a name")
    table = load_table(raw["table"], directory) if "table" in raw else None
    order = raw.get("order")
    if table is not None:
        if order is not None and order != table.group_order:
            raise TableFormatError(f"{where}: {name} declares order {order}, table has {table.group_order}")
        order = table.group_order
    if not isinstance(order, int) or order < 1:
        raise TableFormatError(f"{where}: {name} needs a positive order")
    if "children_from" in raw:
        children = tuple(_instance(c, ambients, directory, where)
                         for c in ambients[raw["children_from"]]["maximals"])
    else:
        children = tuple(_instance(c, ambients, directory, where) for c in raw.get("children", ()))
    for c in children:
        if c.normal_in is not None and c.normal_in != name:
            raise TableFormatError(f"{where}: {c.name} is declared normal in {c.normal_in}, not {name}")
        if c.index is not None and c.order * c.index != order:
            raise TableFormatError(f"{where}: {c.name} does not have index {c.index} in {name}")
    return SubgroupInstance(name=name, order=order, table=table, solvable=bool(raw.get("solvable", False)),
                            normal_in=raw.get("normal_in"), index=raw.get("index"),
                            max_order_of_proper_subgroups=raw.get("max_order_of_proper_subgroups"),
                            note=raw.get("note", ""), children=children)


def load_ambient(key: str, directory=None) -> Ambient:
    path = _subgroup_file(directory)
    data = read_json(path)
    ambients = data.get("ambients", {})
    if key not in ambients:
        raise KeyError(f"no subgroup data for ambient {key!r} (known: {', '.join(sorted(ambients))})")
    raw = ambients[key]
    table = load_table(raw["table"], directory)
    maximals = tuple(_instance(m, ambients, directory, str(path)) for m in raw["maximals"])
    for m in maximals:
        if table.group_order % m.order:
            raise TableFormatError(f"{path}: |{m.name}| does not divide |{table.group_name}|")
    return Ambient(key, table, maximals)


@dataclass(frozen=True)
class Verdict:
    ambient: str
    prime: int
    path: tuple[str, ...]
    character: str
    degree: int
    lift: str | None
    status: str
    reason: str
    witness: dict = field(default_factory=dict, compare=False)

    @property
    def subgroup(self) -> str:
        return self.path[-1]

    def to_dict(self) -> dict:
        return {"ambient": self.ambient, "prime": self.prime, "subgroup": self.subgroup,
                "path": list(self.path), "character": self.character, "degree": self.degree,
                "lift": self.lift, "status": self.status, "reason": self.reason,
                "witness": self.witness}


def order_bound_filter(sub: SubgroupInstance, deg: int) -> Verdict | None:
    """reducible when deg^2 > |M/Z(M)|; None means the filter passes.

    The returned verdict carries placeholders for the pair fields.
    """
    quotient = sub.order // sub.center_order
    if deg * deg > quotient:
        return Verdict("", 0, (sub.name,), "", deg, None, REDUCIBLE, ORDER_BOUND,
                       {"degree_squared": deg * deg, "order_mod_center": quotient})
    return None


def _dedupe(maps: Iterable[FusionMap]) -> list[FusionMap]:
    seen, out = set(), []
    for f in maps:
        if f.map not in seen:
            seen.add(f.map)
            out.append(f)
    return out


class _Context:
    """Per-run caches: fusions into the ambient table and Brauer tables."""

    def __init__(self, amb: Ambient, prime: int, directory):
        self.amb = amb
        self.prime = prime
        self.directory = directory
        self.bt_amb = brauer_table(amb.table, prime, directory)

    def brauer(self, t: CharacterTable) -> BrauerTable:
        return brauer_table(t, self.prime, self.directory)

    def fusions(self, node: SubgroupInstance, parent_fusions: list[FusionMap] | None,
                parent: SubgroupInstance | None) -> list[FusionMap]:
        if node.table is None:
            return []
        if parent is None or parent_fusions is None:
            return cached_fusions(node.table, self.amb.table)
        inner = cached_fusions(node.table, parent.table)
        return _dedupe(f.compose(g) for f in inner for g in parent_fusions)


def _status_of(results: Sequence[bool]) -> str:
    if all(results):
        return IRREDUCIBLE
    if not any(results):
        return REDUCIBLE
    return UNDECIDABLE


def _ordinary_split(lift: Character, fusions: list[FusionMap], t: CharacterTable):
    decs = [decompose_class_function(tuple(lift.values[j] for j in f.map), t) for f in fusions]
    return decs


def _brauer_split(phi: Character, fusions: list[FusionMap], bt_sub: BrauerTable, bt_amb: BrauerTable):
    return [modular.restrict_brauer(phi.values, f, bt_sub, bt_amb) for f in fusions]


def _decompositions(ctx: _Context, phi: Character, lift: Character | None, fusions, t: CharacterTable):
    if ctx.prime == 0:
        return _ordinary_split(lift, fusions, t)
    return _brauer_split(phi, fusions, ctx.brauer(t), ctx.bt_amb)


def _evaluate(ctx: _Context, node: SubgroupInstance, phi: Character, lift: Character | None,
              fusions: list[FusionMap], filters: Sequence[str]) -> tuple[str, str, dict]:
    deg = phi.degree
    if ORDER_BOUND in filters:
        v = order_bound_filter(node, deg)
        if v is not None:
            return v.status, v.reason, v.witness

    if DIVISIBILITY in filters:
        fv = divisibility_filter(deg, node.order, solvable=node.is_solvable, lifts=lift is not None)
        if fv.excluded:
            reason = SOLVABLE_LIFT if node.is_solvable else DIVISIBILITY
            return REDUCIBLE, reason, {"order": node.order, "detail": fv.reason}

    if node.table is None:
        return UNDECIDABLE, NO_FILTER, {"order": node.order}

    if not fusions:
        return UNDECIDABLE, NO_FILTER, {"detail": "no admissible fusion"}

    witness: dict = {"fusions": len(fusions)}
    if EXPLICIT in filters and lift is not None:
        decs = _ordinary_split(lift, fusions, node.table)
        status = _status_of([d.is_irreducible() for d in decs])
        witness["ordinary"] = sorted({str(d) for d in decs})
        if status == REDUCIBLE or (status == IRREDUCIBLE and ctx.prime == 0):
            return status, EXPLICIT, _with_branching(ctx, node, phi, lift, fusions, witness, status)
        if status == UNDECIDABLE:
            return UNDECIDABLE, EXPLICIT, witness

    if BRAUER in filters and ctx.prime != 0:
        try:
            decs = _brauer_split(phi, fusions, ctx.brauer(node.table), ctx.bt_amb)
        except InvalidFusionError as exc:
            return UNDECIDABLE, BRAUER, dict(witness, error=str(exc))
        status = _status_of([d.is_irreducible() for d in decs])
        witness["brauer"] = sorted({str(d) for d in decs})
        return status, BRAUER, _with_branching(ctx, node, phi, lift, fusions, witness, status)

    if BRANCHING in filters:
        result = _branching(ctx, node, phi, lift, fusions)
        if result is not None:
            witness["branching"] = result
            if all(r[1] == modular.FORCES_REDUCIBLE for r in result):
                return REDUCIBLE, BRANCHING, witness
    return UNDECIDABLE, NO_FILTER, witness


def _branching(ctx, node, phi, lift, fusions):
    """Branching verdicts for each declared normal child of prime index."""
    out = []
    for child in node.children:
        if child.normal_in != node.name or child.table is None or not child.index:
            continue
        if ctx.prime == 0 and lift is None:
            continue
        child_fusions = ctx.fusions(child, fusions, node)
        try:
            decs = _decompositions(ctx, phi, lift, child_fusions, child.table)
        except (InvalidFusionError, BrauerSolveError):
            continue
        verdicts = sorted({prime_index_branching(d, child.index) for d in decs})
        dec_strs = sorted({str(d) for d in decs})
        for v in verdicts:
            out.append((child.name, v, dec_strs))
    return out or None


def _with_branching(ctx, node, phi, lift, fusions, witness, status):
    """Attach the normal-subgroup branching test as corroborating evidence."""
    result = _branching(ctx, node, phi, lift, fusions)
    if result is not None:
        witness["branching"] = [{"normal_subgroup": n, "verdict": v, "restriction": d} for n, v, d in result]
    return witness


def _ambient_characters(ctx: _Context) -> list[tuple[Character, Character | None]]:
    out = []
    for phi in ctx.bt_amb.irreducibles:
        if phi.degree > 1:
            lift = phi if ctx.bt_amb.synthesized else modular.lifts_to_ordinary(phi, ctx.bt_amb)
            out.append((phi, lift))
    return out


def classify(ambient: str, prime: int | str, directory=None,
             filters: Sequence[str] = FILTERS) -> list[Verdict]:
    """Verdicts for every maximal subgroup and nonlinear irreducible.  Normal
    children of prime index are always visited; other declared subgroups only
    for pairs that stayed irreducible.  ``prime`` may be 0, a prime, or "all"
    (0, 3, 5 and 13)."""
    if prime == "all":
        out: list[Verdict] = []
        for p in PRIMES_ALL:
            out.extend(classify(ambient, p, directory, filters))
        return out
    prime = int(prime)
    if prime < 0 or prime == 2 or (prime > 2 and any(prime % d == 0 for d in range(2, int(prime ** 0.5) + 1))):
        raise ValueError(f"prime must be 0 or an odd prime, got {prime}")
    amb = load_ambient(ambient, directory)
    ctx = _Context(amb, prime, directory)
    chars = _ambient_characters(ctx)
    verdicts: list[Verdict] = []

    def visit(node: SubgroupInstance, path: tuple[str, ...], parent, parent_fusions, todo):
        fusions = ctx.fusions(node, parent_fusions, parent)
        survivors = []
        for phi, lift in todo:
            status, reason, witness = _evaluate(ctx, node, phi, lift, fusions, filters)
            verdicts.append(Verdict(amb.table.group_name, prime, path + (node.name,), phi.name,
                                    phi.degree, lift.name if lift is not None else None,
                                    status, reason, witness))
            if status == IRREDUCIBLE:
                survivors.append((phi, lift))
        for child in node.descendants():
            # normal children of prime index see every character; the rest only survivors
            normal = child.normal_in == node.name and child.index is not None
            if normal or survivors:
                visit(child, path + (node.name,), node, fusions, todo if normal else survivors)

    for m in amb.maximals:
        visit(m, (), None, None, chars)
    return verdicts


def undecidable(verdicts: Iterable[Verdict]) -> list[Verdict]:
    return [v for v in verdicts if v.status == UNDECIDABLE]


def exceptions(verdicts: Iterable[Verdict]) -> list[Verdict]:
    return [v for v in verdicts if v.status == IRREDUCIBLE]


# -- reports --------------------------------------------------------------------

def to_json(verdicts: Sequence[Verdict]) -> str:
    return json.dumps({"verdicts": [v.to_dict() for v in verdicts]}, indent=2, sort_keys=True) + "\n"


TSV_COLUMNS = ("ambient", "prime", "subgroup", "path", "character", "lift", "degree", "status", "reason")


def to_tsv(verdicts: Sequence[Verdict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(TSV_COLUMNS)
    for v in verdicts:
        w.writerow([v.ambient, v.prime, v.subgroup, " > ".join(v.path), v.character,
                    v.lift or "", v.degree, v.status, v.reason])
    return buf.getvalue()


def summary_text(verdicts: Sequence[Verdict]) -> str:
    """Grouped by prime and subgroup; irreducible pairs listed by name."""
    if not verdicts:
        return ""
    lines = []
    groups: dict[tuple[str, int], dict[tuple[str, ...], list[Verdict]]] = {}
    for v in verdicts:
        groups.setdefault((v.ambient, v.prime), {}).setdefault(v.path, []).append(v)
    for (amb, p), by_path in groups.items():
        lines.append(f"{amb}  prime {p if p else '0 (characteristic zero / generic)'}")
        for path, vs in by_path.items():
            counts: dict[str, int] = {}
            for v in vs:
                key = f"{v.status}/{v.reason}"
                counts[key] = counts.get(key, 0) + 1
            tally = ", ".join(f"{k} x{n}" for k, n in sorted(counts.items()))
            lines.append(f"  {' > '.join(path)}: {tally}")
            for v in vs:
                if v.status != REDUCIBLE:
                    via = f" (lift {v.lift})" if v.lift and v.lift != v.character else ""
                    lines.append(f"    {v.status}: {v.character}{via} degree {v.degree} [{v.reason}]")
    return "\n".join(lines) + "\n"


def exceptions_text(verdicts: Sequence[Verdict]) -> str:
    """One line per irreducible pair: prime, subgroup, degree, character."""
    rows = []
    for v in exceptions(verdicts):
        name = v.lift if v.lift else v.character
        rows.append(f"{v.prime}\t{v.subgroup}\t{v.degree}\t{name}")
    return "".join(r + "\n" for r in rows)


def write_report(verdicts: Sequence[Verdict], outdir: str | os.PathLike, stem: str = "classify") -> list[Path]:
    from . import plotting

    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    paths = [out / f"{stem}.json", out / f"{stem}.tsv", out / f"{stem}.txt", out / f"{stem}.exceptions.tsv"]
    paths[0].write_text(to_json(verdicts))
    paths[1].write_text(to_tsv(verdicts))
    paths[2].write_text(summary_text(verdicts))
    paths[3].write_text(exceptions_text(verdicts))
    if verdicts:
        paths.append(plotting.verdict_heatmap(verdicts, out / f"{stem}.png"))
    return paths


# -- generic q -------------------------------------------------------------------

def main_theorem(spot_check_n: int = 10) -> dict:
    """Assemble the generic-q argument: every non-parabolic maximal subgroup is
    excluded by the reduction, the short-root parabolic by the u/v values, and
    the long-root parabolic by an external result."""
    reductions = genericq.verify_all(spot_check_n)
    rows = genericq.check_all_parabolic()
    verdicts = [{"subgroup": r.case, "status": REDUCIBLE if r.status == "certified" else UNDECIDABLE,
                 "reason": DIVISIBILITY if c.m_bound_kind == genericq.ABELIAN_NORMAL_INDEX else ORDER_BOUND}
                for c, r in zip(genericq.CASES, reductions)]
    pa = all(r.status == "certified" for r in rows)
    verdicts.append({"subgroup": "P_a", "status": REDUCIBLE if pa else UNDECIDABLE,
                     "reason": "parabolic-values"})
    verdicts.append({"subgroup": "P_b", "status": REDUCIBLE, "reason": EXTERNAL,
                     "detail": genericq.EXTERNAL_FACTS["P_b"]})
    return {"reduction": [r.to_dict() for r in reductions],
            "parabolic": [r.to_dict() for r in rows],
            "verdicts": verdicts,
            "ok": all(v["status"] == REDUCIBLE for v in verdicts)}
