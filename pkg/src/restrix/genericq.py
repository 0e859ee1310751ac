"""Generic-q inequalities for the Ree groups, as exact polynomials in t.

Write q = 2^(2n+1) = 2t^2 with t = 2^n.  Then sqrt(2q) = 2t, sqrt(q/2) = t and
sqrt(2q^3) = 4t^3, so every order, bound and character value below is an
integer polynomial in t and every comparison is exact.  Statements are
certified for all integers t >= t0, which covers t = 2^n a fortiori.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class TPoly:
    """Integer polynomial in t; coefficient i multiplies t^i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[int, ...] = tuple(c)

    @classmethod
    def const(cls, a: int) -> "TPoly":
        return cls([a])

    @classmethod
    def monomial(cls, a: int, k: int) -> "TPoly":
        return cls([0] * k + [a])

    @staticmethod
    def _coerce(other) -> "TPoly":
        if isinstance(other, TPoly):
            return other
        if isinstance(other, int):
            return TPoly([other])
        return NotImplemented

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return TPoly((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return TPoly(-x for x in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return TPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return TPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("TPoly powers must be non-negative integers")
        result, base = TPoly([1]), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, t: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def shift(self, t0: int) -> "TPoly":
        """p(t0 + s) as a polynomial in s (repeated synthetic division)."""
        c = list(self.coeffs)
        n = len(c)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                c[j] += t0 * c[j + 1]
        return TPoly(c)

    def __repr__(self):
        return f"TPoly({list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else str(mag)) + ("t" if k == 1 else f"t^{k}")
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)


T = TPoly([0, 1])
Q = 2 * T ** 2
SQRT_2Q = 2 * T
SQRT_Q_HALF = T
SQRT_2Q3 = 4 * T ** 3


def ree_order() -> TPoly:
    """|2F4(q)| = q^12 (q^6+1)(q^4-1)(q^3+1)(q-1)."""
    return Q ** 12 * (Q ** 6 + 1) * (Q ** 4 - 1) * (Q ** 3 + 1) * (Q - 1)


def degree_lower_bound() -> TPoly:
    """(q^4+q^3+q)(q-1)sqrt(q/2), the cross-characteristic degree bound."""
    return (Q ** 4 + Q ** 3 + Q) * (Q - 1) * SQRT_Q_HALF


def d_bound(n: int) -> int:
    return degree_lower_bound()(2 ** n)


# -- certificates -------------------------------------------------------------

SHIFTED = "shifted-coefficients"
CAUCHY = "cauchy-bound"
FAILED = "failure"


@dataclass(frozen=True)
class Certificate:
    """Proof object for p(t) > 0 on all integers t >= shift_point.

    shifted-coefficients: every coefficient of p(shift_point + s) is >= 0 and
    the constant term is > 0.  cauchy-bound: the leading coefficient is > 0,
    every real root is below ``bound`` and p was evaluated at every integer in
    [shift_point, bound).
    """
    poly: TPoly
    shift_point: int
    kind: str
    bound: int | None = None

    @property
    def ok(self) -> bool:
        return self.kind != FAILED

    def recheck(self) -> bool:
        """Re-verify the certificate from scratch."""
        if self.kind == SHIFTED:
            s = self.poly.shift(self.shift_point).coeffs
            return bool(s) and s[0] > 0 and all(c >= 0 for c in s)
        if self.kind == CAUCHY:
            return (self.poly.leading > 0 and self.bound == cauchy_bound(self.poly)
                    and all(self.poly(t) > 0 for t in range(self.shift_point, self.bound)))
        return False

    def to_dict(self) -> dict:
        return {"certificate_kind": self.kind, "shift_point": self.shift_point,
                "bound": self.bound, "poly": str(self.poly)}


def cauchy_bound(p: TPoly) -> int:
    """An integer B with |r| < B for every complex root r of p."""
    lead = abs(p.leading)
    m = max((abs(c) for c in p.coeffs[:-1]), default=0)
    return 1 + -(-m // lead)


EXHAUSTIVE_LIMIT = 10 ** 6


def positivity_certificate(p: TPoly, t0: int) -> Certificate:
    """Certify p(t) > 0 for every integer t >= t0, or return a failure value.

    Failure means inconclusive, not that p takes a non-positive value.
    """
    if t0 < 1:
        raise ValueError("shift point must be at least 1")
    s = p.shift(t0).coeffs
    if s and s[0] > 0 and all(c >= 0 for c in s):
        return Certificate(p, t0, SHIFTED)
    if p.leading > 0:
        b = cauchy_bound(p)
        if b - t0 <= EXHAUSTIVE_LIMIT and all(p(t) > 0 for t in range(t0, b)):
            return Certificate(p, t0, CAUCHY, b)
    return Certificate(p, t0, FAILED)


def soundness_sample(cert: Certificate, samples: int = 1000, seed: int = 0,
                     span: int = 10 ** 6) -> bool:
    """Random exact evaluations at t >= t0; True when all are positive."""
    rng = random.Random(seed)
    pts = [cert.shift_point] + [cert.shift_point + rng.randrange(span) for _ in range(samples - 1)]
    return all(cert.poly(t) > 0 for t in pts)


# -- reduction cases --------------------------------------------------------------

SQRT_ORDER = "sqrt_order"
ABELIAN_NORMAL_INDEX = "abelian_normal_index"
SUBFIELD = "subfield"


@dataclass(frozen=True)
class SubgroupFamily:
    number: int
    name: str
    order: TPoly | None
    m_bound_kind: str
    index_bound: TPoly | None = None
    min_t: int = 2
    divisibility_cofactor: int = 1

    def applies(self, t: int) -> bool:
        return t >= self.min_t


def _su3() -> TPoly:
    return Q ** 3 * (Q ** 3 + 1) * (Q ** 2 - 1)


def _suz() -> TPoly:
    return Q ** 2 * (Q ** 2 + 1) * (Q - 1)


def _sp4() -> TPoly:
    return Q ** 4 * (Q ** 2 - 1) * (Q ** 4 - 1)


GL2_3 = 48

CASES: tuple[SubgroupFamily, ...] = (
    SubgroupFamily(1, "SU3(q):2", 2 * _su3(), SQRT_ORDER),
    SubgroupFamily(2, "N(T8) = (q+1)^2:GL2(3)", (Q + 1) ** 2 * GL2_3, ABELIAN_NORMAL_INDEX,
                   TPoly.const(GL2_3)),
    SubgroupFamily(3, "N(T6) = (q-sqrt(2q)+1)^2:[96]", (Q - SQRT_2Q + 1) ** 2 * 96,
                   ABELIAN_NORMAL_INDEX, TPoly.const(96), min_t=4),
    SubgroupFamily(4, "N(T7) = (q+sqrt(2q)+1)^2:[96]", (Q + SQRT_2Q + 1) ** 2 * 96,
                   ABELIAN_NORMAL_INDEX, TPoly.const(96)),
    SubgroupFamily(5, "N(T10) = (q^2-sqrt(2q^3)+q-sqrt(2q)+1):12",
                   (Q ** 2 - SQRT_2Q3 + Q - SQRT_2Q + 1) * 12, ABELIAN_NORMAL_INDEX, TPoly.const(12)),
    SubgroupFamily(6, "N(T11) = (q^2+sqrt(2q^3)+q+sqrt(2q)+1):12",
                   (Q ** 2 + SQRT_2Q3 + Q + SQRT_2Q + 1) * 12, ABELIAN_NORMAL_INDEX, TPoly.const(12)),
    SubgroupFamily(7, "PGU3(q):2", 2 * _su3(), SQRT_ORDER),
    SubgroupFamily(8, "Sz(q) wr 2", 2 * _suz() ** 2, SQRT_ORDER),
    SubgroupFamily(9, "Sp4(q):2", 2 * _sp4(), SQRT_ORDER),
    SubgroupFamily(10, "2F4(q0), q = q0^alpha, alpha prime", None, SUBFIELD),
)

# the uniform bound used for cases 2) to 6): max{|GL2(3)|, 96, 12}
UNIFORM_INDEX_BOUND = max(int(c.index_bound(0)) for c in CASES if c.m_bound_kind == ABELIAN_NORMAL_INDEX)

SUBFIELD_SPOT_CHECKS = ((2, 3), (2, 5), (8, 3))


def case(name: str | int) -> SubgroupFamily:
    for c in CASES:
        if str(c.number) == str(name) or c.name == name or c.name.split(" ")[0] == name:
            return c
    raise KeyError(f"unknown reduction case {name!r}")


def ree_order_q(q: int) -> int:
    return q ** 12 * (q ** 6 + 1) * (q ** 4 - 1) * (q ** 3 + 1) * (q - 1)


def reduction_target(c: SubgroupFamily) -> TPoly:
    """The polynomial whose positivity excludes the case."""
    d = degree_lower_bound()
    if c.m_bound_kind == SQRT_ORDER:
        return d ** 2 - c.order
    if c.m_bound_kind == ABELIAN_NORMAL_INDEX:
        return d - c.index_bound
    # m(M) < q^(13/3) < d, cubed: d^3 - q^13 with q^13 = 2^13 t^26
    return d ** 3 - TPoly.monomial(2 ** 13, 26)


def _spot_check(c: SubgroupFamily, t: int) -> bool:
    d = degree_lower_bound()(t)
    if c.m_bound_kind == SQRT_ORDER:
        return c.order(t) < d * d
    if c.m_bound_kind == ABELIAN_NORMAL_INDEX:
        return c.index_bound(t) < d
    q = 2 * t * t
    return d ** 3 > q ** 13


def _subfield_spot_check(q0: int, alpha: int) -> dict:
    q = q0 ** alpha
    t = math.isqrt(q // 2)
    m = ree_order_q(q0)
    d = degree_lower_bound()(t)
    checks = {
        "order below q0^26": m < q0 ** 26,
        "q0^26 at most q^(26/3)": q0 ** 78 <= q ** 26,
        "sqrt|M| below d": m < d * d,
        "q^(13/3) below d": q ** 13 < d ** 3,
    }
    return {"q0": q0, "alpha": alpha, "q": q, "order": m, "d_bound": d,
            "checks": checks, "ok": all(checks.values())}


@dataclass
class ReductionReport:
    case: str
    number: int
    certificate: Certificate
    spot_checks: dict[int, bool] = field(default_factory=dict)
    extra: list[dict] = field(default_factory=list)

    @property
    def status(self) -> str:
        spots = all(self.spot_checks.values()) and all(e["ok"] for e in self.extra)
        return "certified" if self.certificate.ok and spots else "inconclusive"

    def to_dict(self) -> dict:
        out = {"case": self.case, "number": self.number, "status": self.status}
        out.update(self.certificate.to_dict())
        out["spot_checks"] = {str(n): ok for n, ok in sorted(self.spot_checks.items())}
        if self.extra:
            out["subfield_checks"] = [
                {k: (v if not isinstance(v, int) or v.bit_length() < 53 else str(v)) for k, v in e.items()}
                for e in self.extra]
        return out


def verify_reduction(c: SubgroupFamily, spot_check_n: int = 10) -> ReductionReport:
    cert = positivity_certificate(reduction_target(c), max(2, c.min_t))
    spots = {n: _spot_check(c, 2 ** n) for n in range(1, spot_check_n + 1) if c.applies(2 ** n)}
    extra = [_subfield_spot_check(q0, a) for q0, a in SUBFIELD_SPOT_CHECKS] if c.m_bound_kind == SUBFIELD else []
    return ReductionReport(c.name, c.number, cert, spots, extra)


def verify_all(spot_check_n: int = 10) -> list[ReductionReport]:
    return [verify_reduction(c, spot_check_n) for c in CASES]


def family_divides_order(c: SubgroupFamily, n: int) -> bool:
    """Whether cofactor * |M| divides cofactor * |2F4(q)| at t = 2^n.

    The subfield case is checked for every prime alpha dividing 2n+1.
    """
    t = 2 ** n
    if c.order is None:
        m = 2 * n + 1
        alphas = [a for a in range(3, m + 1, 2) if m % a == 0 and all(a % p for p in range(3, a, 2))]
        return all(ree_order_q(2 ** m) % ree_order_q(2 ** (m // a)) == 0 for a in alphas)
    return (ree_order()(t) * c.divisibility_cofactor) % c.order(t) == 0


# -- parabolic values -------------------------------------------------------------

@dataclass(frozen=True)
class ParabolicValueRow:
    name: str
    u_value: TPoly
    v_value: TPoly


_SQRT_Q7_HALF = 8 * T ** 7   # sqrt(q^7/2)
_SQRT_Q5_HALF = 4 * T ** 5   # sqrt(q^5/2)

PARABOLIC_ROWS: tuple[ParabolicValueRow, ...] = (
    ParabolicValueRow("chi34(k)", -_SQRT_Q7_HALF, -(Q - 1) * _SQRT_Q5_HALF),
    ParabolicValueRow("chi35(k)", -_SQRT_Q7_HALF, -(Q - 1) * _SQRT_Q5_HALF),
    ParabolicValueRow("chi36", -(Q - 1) * _SQRT_Q7_HALF, -(Q - 1) ** 2 * _SQRT_Q5_HALF),
    ParabolicValueRow("chi37", -(Q - 1) * _SQRT_Q7_HALF, -(Q - 1) ** 2 * _SQRT_Q5_HALF),
    ParabolicValueRow("chi38(k)", -(Q - 1) * _SQRT_Q7_HALF, -(Q - 1) ** 2 * _SQRT_Q5_HALF),
    ParabolicValueRow("chi39(k)", -(Q - 1) * _SQRT_Q7_HALF, -(Q - 1) ** 2 * _SQRT_Q5_HALF),
    ParabolicValueRow("chi40(k)", -Q ** 4 * (Q - 1), Q ** 3 * (Q - 1)),
)

PARABOLIC_CHECK_Q = (8, 32, 128)

# the long-root parabolic is not recomputed here
EXTERNAL_FACTS = {
    "P_b": "irreducible restrictions to the long-root parabolic P_b are excluded by a "
           "separate published classification; recorded as an external fact",
}


def row(name: str) -> ParabolicValueRow:
    for r in PARABOLIC_ROWS:
        if r.name == name or r.name.split("(")[0] == name:
            return r
    raise KeyError(f"unknown parabolic row {name!r}")


@dataclass
class ParabolicReport:
    row: str
    direction: str
    certificate: Certificate
    evaluations: list[dict]

    @property
    def status(self) -> str:
        ok = self.certificate.ok and all(e["u"] != e["v"] for e in self.evaluations)
        return "certified" if ok else "inconclusive"

    def to_dict(self) -> dict:
        out = {"row": self.row, "status": self.status, "direction": self.direction}
        out.update(self.certificate.to_dict())
        out["evaluations"] = self.evaluations
        return out


def check_parabolic(r: ParabolicValueRow, t0: int = 2) -> ParabolicReport:
    """Certify u != v for all t >= t0 by certifying u - v > 0 or v - u > 0."""
    if r.u_value.is_zero() or r.v_value.is_zero():
        raise ValueError(f"row {r.name} has a zero value")
    diff = r.u_value - r.v_value
    cert = positivity_certificate(diff, t0)
    direction = "u > v"
    if not cert.ok:
        cert = positivity_certificate(-diff, t0)
        direction = "v > u"
    evals = []
    for q in PARABOLIC_CHECK_Q:
        t = math.isqrt(q // 2)
        evals.append({"q": q, "t": t, "u": r.u_value(t), "v": r.v_value(t)})
    return ParabolicReport(r.name, direction if cert.ok else "none", cert, evals)


def check_all_parabolic() -> list[ParabolicReport]:
    return [check_parabolic(r) for r in PARABOLIC_ROWS]


def evaluate_rows(rows: Sequence[ParabolicValueRow], ts: Sequence[int]) -> dict[str, list[tuple[int, int]]]:
    return {r.name: [(r.u_value(t), r.v_value(t)) for t in ts] for r in rows}

