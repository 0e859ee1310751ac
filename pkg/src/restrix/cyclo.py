"""Exact arithmetic in cyclotomic fields Q(zeta_n).

An element is stored as the remainder of a rational polynomial modulo the
n-th cyclotomic polynomial, always at the smallest conductor that contains
it (conductors congruent to 2 mod 4 never occur, since Q(zeta_2m) = Q(zeta_m)
for odd m).  Coefficients are integer numerators over one positive common
denominator.
"""

from __future__ import annotations

import cmath
import math
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from numbers import Rational

import numpy as np

__all__ = [
    "Cyclotomic",
    "ExpressionError",
    "E",
    "parse",
    "cyclotomic_polynomial",
    "conductor",
    "integral_coords",
    "product_coords",
    "phi",
]

_INT64_SAFE = 2**62


class ExpressionError(ValueError):
    """Malformed cyclotomic expression string."""


def _prime_factors(n: int) -> list[int]:
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


def _totient(n: int) -> int:
    r = n
    for p in _prime_factors(n):
        r -= r // p
    return r


def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    fs = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in fs):
            return g
    raise ValueError(p)


def _crt(r1: int, m1: int, r2: int, m2: int) -> int:
    # m1, m2 coprime
    return (r1 + m1 * ((r2 - r1) * pow(m1, -1, m2) % m2)) % (m1 * m2)


_poly_cache: dict[int, tuple[int, ...]] = {}


def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n in _poly_cache:
        return _poly_cache[n]
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            den = cyclotomic_polynomial(d)
            # exact division of num by the monic den
            q = [0] * (len(num) - len(den) + 1)
            rem = list(num)
            for i in range(len(q) - 1, -1, -1):
                c = rem[i + len(den) - 1]
                q[i] = c
                if c:
                    for j, dc in enumerate(den):
                        rem[i + j] -= c * dc
            num = q
    _poly_cache[n] = tuple(num)
    return _poly_cache[n]


@dataclass(frozen=True)
class _Field:
    n: int
    phi: int
    primes: tuple[int, ...]
    red: np.ndarray  # (n, phi) int64: row j holds x^j mod Phi_n
    red_obj: np.ndarray  # same, dtype=object
    red_max: int


_fields: dict[int, _Field] = {}
_subfield_maps: dict[tuple[int, int], tuple[np.ndarray, tuple[int, ...], int]] = {}
_lock = threading.Lock()


def _field(n: int) -> _Field:
    f = _fields.get(n)
    if f is not None:
        return f
    with _lock:
        f = _fields.get(n)
        if f is None:
            f = _build_field(n)
            _fields[n] = f
    return f


def _build_field(n: int) -> _Field:
    phi = _totient(n)
    poly = cyclotomic_polynomial(n)
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(n):
        rows.append(list(cur))
        # multiply by x and reduce by the monic Phi_n
        top = cur[-1] if phi else 0
        cur = [0] + cur[:-1]
        if top:
            for i in range(phi):
                cur[i] -= top * poly[i]
    red_obj = np.array(rows, dtype=object).reshape(n, phi)
    red_max = max((abs(int(v)) for v in red_obj.flat), default=1)
    return _Field(n, phi, tuple(_prime_factors(n)), red_obj.astype(np.int64),
                  red_obj, red_max)


def _reduce(n: int, vec: np.ndarray) -> np.ndarray:
    """Map an exponent vector of length n (coefficient of zeta^j at j) to
    power-basis coordinates modulo Phi_n."""
    f = _field(n)
    if vec.dtype != object:
        bound = int(np.abs(vec).max(initial=0)) * n * f.red_max
        if bound < _INT64_SAFE:
            return vec @ f.red
        vec = vec.astype(object)
    return np.array(vec @ f.red_obj, dtype=object)


def _as_vec(values, dtype) -> np.ndarray:
    return np.array(values, dtype=dtype)


def _best_dtype(*tuples: tuple[int, ...]):
    m = max((abs(v) for t in tuples for v in t), default=0)
    return np.int64 if m < 2**40 else object


def _subfield_map(n: int, m: int) -> tuple[np.ndarray, tuple[int, ...], int]:
    """Left inverse of the embedding Q(zeta_m) -> Q(zeta_n) on chosen rows.

    Returns (L, rows, den) with coords_m = L @ coords_n[rows] / den.
    """
    key = (n, m)
    got = _subfield_maps.get(key)
    if got is not None:
        return got
    from .linalg import inverse

    fn, fm = _field(n), _field(m)
    d = n // m
    emb = [list(map(int, fn.red_obj[(i * d) % n])) for i in range(fm.phi)]
    # emb[i] is column i of the embedding matrix; pick independent rows greedily
    rows: list[int] = []
    for r in range(fn.phi):
        trial = rows + [r]
        sub = [[Fraction(emb[i][rr]) for i in range(fm.phi)] for rr in trial]
        if _rank_fraction(sub) == len(trial):
            rows = trial
        if len(rows) == fm.phi:
            break
    square = [[Fraction(emb[i][r]) for i in range(fm.phi)] for r in rows]
    inv = inverse(square)
    den = reduce(math.lcm, (x.denominator for row in inv for x in row), 1)
    L = np.array([[int(x * den) for x in row] for row in inv], dtype=object)
    got = (L, tuple(rows), den)
    with _lock:
        _subfield_maps[key] = got
    return got


def _rank_fraction(rows: list[list[Fraction]]) -> int:
    from .linalg import rank

    return rank(rows)


def _descent_step(n: int) -> list[tuple[int, int]]:
    """Candidate (subconductor, Galois generator) pairs for conductor n."""
    out = []
    for p in _field(n).primes:
        if p == 2:
            if n % 8 == 0:
                m = n // 2
                k = 1 + n // 2
            else:  # 4 exactly divides n
                m = n // 4
                k = _crt(3, 4, 1, m) if m > 1 else 3
        elif (n // p) % p == 0:
            m = n // p
            k = 1 + n // p
        else:
            m = n // p
            g = _primitive_root(p)
            k = _crt(g, p, 1, m) if m > 1 else g
        out.append((m, k))
    return out


def _galois_vec(n: int, nums: np.ndarray, k: int) -> np.ndarray:
    f = _field(n)
    vec = np.zeros(n, dtype=nums.dtype)
    idx = (np.arange(f.phi) * k) % n
    np.add.at(vec, idx, nums) if nums.dtype != object else _obj_add_at(vec, idx, nums)
    return _reduce(n, vec)


def _obj_add_at(vec, idx, vals):
    for i, v in zip(idx, vals):
        vec[i] += v


def _canonical(n: int, nums: np.ndarray, den: int) -> "Cyclotomic":
    """Build the canonical element from conductor-n coordinates."""
    nums = [int(v) for v in nums]
    while True:
        if not any(nums[1:]):
            return Cyclotomic._make(1, (nums[0],), den)
        arr = _as_vec(nums, _best_dtype(tuple(nums)))
        for m, k in _descent_step(n):
            img = _galois_vec(n, arr, k)
            if all(int(a) == b for a, b in zip(img, nums)):
                L, rows, sden = _subfield_map(n, m)
                sub = L @ np.array([nums[r] for r in rows], dtype=object)
                nums = [int(v) for v in sub]
                den = den * sden
                n = m
                break
        else:
            return Cyclotomic._make(n, tuple(nums), den)


class Cyclotomic:
    """An exact element of a cyclotomic field.

    Construct values with :func:`E`, :func:`parse`, integers or fractions;
    all arithmetic returns canonical instances.
    """

    __slots__ = ("order", "_num", "_den", "_hash")

    order: int
    _num: tuple[int, ...]
    _den: int

    def __init__(self, value: int | Fraction | "Cyclotomic" = 0):
        if isinstance(value, Cyclotomic):
            self.order, self._num, self._den = value.order, value._num, value._den
        else:
            fr = Fraction(value)
            self.order, self._num, self._den = 1, (fr.numerator,), fr.denominator
        self._hash = None

    @classmethod
    def _make(cls, n: int, nums: tuple[int, ...], den: int) -> "Cyclotomic":
        g = reduce(math.gcd, nums, den)
        if den < 0:
            g = -g
        if g not in (0, 1):
            nums = tuple(v // g for v in nums)
            den //= g
        if not any(nums):
            n, nums, den = 1, (0,), 1
        obj = object.__new__(cls)
        obj.order, obj._num, obj._den, obj._hash = n, nums, den, None
        return obj

    @classmethod
    def from_exponents(cls, n: int, coeffs: dict[int, int | Fraction]) -> "Cyclotomic":
        """The element sum(c * zeta_n**e) for e, c in coeffs."""
        n, shift = _normalize_conductor(n)
        fr = {e: Fraction(c) for e, c in coeffs.items() if c}
        den = reduce(math.lcm, (c.denominator for c in fr.values()), 1)
        vec = [0] * n
        for e, c in fr.items():
            e2, sign = shift(e)
            vec[e2 % n] += sign * int(c * den)
        return _canonical(n, _reduce(n, np.array(vec, dtype=object)), den)

    # -- inspection ---------------------------------------------------------
    @property
    def coeffs(self) -> dict[int, Fraction]:
        """Nonzero power-basis coefficients keyed by exponent."""
        return {i: Fraction(v, self._den) for i, v in enumerate(self._num) if v}

    def is_rational(self) -> bool:
        return self.order == 1

    def is_integer(self) -> bool:
        return self.order == 1 and self._den == 1

    def as_fraction(self) -> Fraction:
        if self.order != 1:
            raise ValueError(f"{self} is not rational")
        return Fraction(self._num[0], self._den)

    def __int__(self) -> int:
        fr = self.as_fraction()
        if fr.denominator != 1:
            raise ValueError(f"{self} is not an integer")
        return fr.numerator

    def to_complex(self) -> complex:
        n = self.order
        z = sum(v * cmath.exp(2j * math.pi * i / n) for i, v in enumerate(self._num) if v)
        return complex(z) / self._den

    # -- arithmetic ---------------------------------------------------------
    def _lift(self, n: int) -> np.ndarray:
        """Numerator coordinates in Q(zeta_n), n a multiple of self.order."""
        if n == self.order:
            return _as_vec(self._num, object)
        d = n // self.order
        vec = np.zeros(n, dtype=object)
        for i, v in enumerate(self._num):
            if v:
                vec[(i * d) % n] += v
        return _reduce(n, vec)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.order == 1 and self.order == 1:
            fr = Fraction(self._num[0], self._den) + Fraction(other._num[0], other._den)
            return Cyclotomic(fr)
        n = math.lcm(self.order, other.order)
        den = math.lcm(self._den, other._den)
        vec = self._lift(n) * (den // self._den) + other._lift(n) * (den // other._den)
        return _canonical(n, vec, den)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._make(self.order, tuple(-v for v in self._num), self._den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.order == 1 or self.order == 1:
            if self.order == 1:
                self, other = other, self
            c, d = other._num[0], other._den
            return Cyclotomic._make(self.order, tuple(v * c for v in self._num), self._den * d)
        n = math.lcm(self.order, other.order)
        a, b = self._lift(n), other._lift(n)
        return _canonical(n, _mulvec(n, a, b), self._den * other._den)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = Cyclotomic(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def galois(self, k: int) -> "Cyclotomic":
        """Image under the automorphism zeta_n -> zeta_n**k (gcd(k, n) = 1)."""
        n = self.order
        if n == 1:
            return self
        if math.gcd(k, n) != 1:
            raise ValueError(f"{k} is not a unit modulo {n}")
        vec = np.zeros(n, dtype=object)
        for i, v in enumerate(self._num):
            if v:
                vec[(i * k) % n] += v
        return Cyclotomic._make(n, tuple(int(x) for x in _reduce(n, vec)), self._den)

    def conj(self) -> "Cyclotomic":
        return self.galois(-1 % self.order if self.order > 1 else 1)

    def norm(self) -> Fraction:
        """Field norm from Q(zeta_n) to Q."""
        n = self.order
        prod = Cyclotomic(1)
        for k in range(1, max(n, 2)):
            if math.gcd(k, n) == 1:
                prod = prod * self.galois(k)
        return prod.as_fraction()

    def inverse(self) -> "Cyclotomic":
        if not any(self._num):
            raise ZeroDivisionError("cyclotomic zero")
        n = self.order
        if n == 1:
            return Cyclotomic(1 / self.as_fraction())
        others = Cyclotomic(1)
        for k in range(2, n):
            if math.gcd(k, n) == 1:
                others = others * self.galois(k)
        nrm = (self * others).as_fraction()
        return others * (1 / nrm)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.order == 1:
            fr = other.as_fraction()
            if fr == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / fr)
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    # -- comparison / hashing ------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return (self.order, self._num, self._den) == (other.order, other._num, other._den)

    def __hash__(self):
        if self._hash is None:
            if self.order == 1:
                self._hash = hash(Fraction(self._num[0], self._den))
            else:
                self._hash = hash((self.order, self._num, self._den))
        return self._hash

    def __bool__(self):
        return any(self._num)

    def __repr__(self):
        return f"Cyclotomic({str(self)!r})"

    def __str__(self):
        if self.order == 1:
            return str(Fraction(self._num[0], self._den))
        parts = []
        for i, v in enumerate(self._num):
            if not v:
                continue
            c = Fraction(v, self._den)
            if i == 0:
                term = str(c)
            else:
                base = f"E({self.order})" + (f"^{i}" if i > 1 else "")
                if c == 1:
                    term = base
                elif c == -1:
                    term = "-" + base
                elif c.denominator == 1:
                    term = f"{c}*{base}"
                else:
                    term = f"{c.numerator}*{base}/{c.denominator}"
            parts.append(term)
        s = parts[0]
        for t in parts[1:]:
            s += t if t.startswith("-") else "+" + t
        return s


def _mulvec(n: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    amax = max((abs(int(x)) for x in a), default=0)
    bmax = max((abs(int(x)) for x in b), default=0)
    phi = len(a)
    if amax * bmax * phi * 2 * n * _field(n).red_max < _INT64_SAFE:
        conv = np.convolve(a.astype(np.int64), b.astype(np.int64))
        folded = np.zeros(n, dtype=np.int64)
        np.add.at(folded, np.arange(len(conv)) % n, conv)
        return folded @ _field(n).red
    conv = [0] * (2 * phi - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    conv[i + j] += x * y
    folded = np.zeros(n, dtype=object)
    for i, v in enumerate(conv):
        folded[i % n] += v
    return _reduce(n, folded)


def _normalize_conductor(n: int):
    """Map conductors 2 (mod 4) to the odd half: zeta_2m = -zeta_m^((m+1)/2)."""
    if n <= 0:
        raise ValueError("conductor must be positive")
    if n % 4 == 2:
        m = n // 2
        h = (m + 1) // 2
        if m == 1:
            return 1, lambda e: (0, -1 if e % 2 else 1)
        return m, lambda e: ((e * h) % m, -1 if e % 2 else 1)
    return n, lambda e: (e % n, 1)


def _coerce(x):
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, (int, Fraction, Rational)):
        return Cyclotomic(Fraction(x))
    return NotImplemented


def E(n: int, k: int = 1) -> Cyclotomic:
    """The root of unity zeta_n**k."""
    return Cyclotomic.from_exponents(n, {k % n: 1})


# -- expression grammar -------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(E\(\s*(\d+)\s*\))|(\d+)|([-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            what = "malformed E(n) token" if text[pos:].lstrip().startswith("E") else \
                f"unexpected character {text[pos]!r}"
            raise ExpressionError(f"{what} at offset {pos} in {text!r}")
        if m.group(1):
            n = int(m.group(2))
            if n == 0:
                raise ExpressionError(f"E(0) is not a root of unity in {text!r}")
            out.append(("E", n, m.start(1)))
        elif m.group(3):
            out.append(("INT", int(m.group(3)), m.start(3)))
        else:
            out.append((m.group(4), None, m.start(4)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, kind=None):
        if self.i >= len(self.toks):
            raise ExpressionError(f"unexpected end of expression {self.text!r}")
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ExpressionError(f"expected {kind!r} at offset {tok[2]} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> Cyclotomic:
        if not self.toks:
            raise ExpressionError("empty expression")
        val = self.expr()
        if self.i != len(self.toks):
            raise ExpressionError(f"trailing input at offset {self.toks[self.i][2]} in {self.text!r}")
        return val

    def expr(self):
        val = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()[0]
            rhs = self.unary()
            val = val * rhs if op == "*" else val / rhs
        return val

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            exp = self.take("INT")[1]
            return base ** (sign * exp)
        return base

    def atom(self):
        kind = self.peek()
        if kind == "INT":
            return Cyclotomic(self.take()[1])
        if kind == "E":
            return E(self.take()[1])
        if kind == "(":
            self.take()
            val = self.expr()
            self.take(")")
            return val
        tok = self.toks[self.i] if self.i < len(self.toks) else None
        where = f"offset {tok[2]}" if tok else "end"
        raise ExpressionError(f"expected a number or E(n) at {where} in {self.text!r}")


def parse(text: str) -> Cyclotomic:
    """Parse an expression such as ``"-E(5)-E(5)^4"``."""
    return _Parser(text).parse()


def conductor(values) -> int:
    """Least common conductor of a collection of values."""
    return reduce(math.lcm, (v.order for v in values), 1)


def phi(n: int) -> int:
    return _totient(n)


def integral_coords(values, n: int) -> np.ndarray:
    """Power-basis coordinates in Q(zeta_n) of algebraic-integer values.

    Returns an (len(values), phi(n)) integer array (int64 when the entries
    are small, object otherwise).
    """
    rows = []
    for v in values:
        v = v if isinstance(v, Cyclotomic) else Cyclotomic(v)
        if v._den != 1:
            raise ValueError(f"{v} does not have integral coordinates")
        rows.append([int(x) for x in v._lift(n)])
    width = _field(n).phi
    arr = np.array(rows, dtype=object).reshape(len(rows), width)
    big = max((abs(x) for x in arr.flat), default=0)
    return arr.astype(np.int64) if big < 2**31 else arr


def product_coords(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """Coordinates of all products a[i] * b[j] in Q(zeta_n).

    ``a`` has shape (k, phi(n)), ``b`` shape (m, phi(n)); result (k, m, phi(n)).
    """
    f = _field(n)
    ph = f.phi
    k, m = a.shape[0], b.shape[0]
    amax = int(np.abs(a).max(initial=0)) if a.size else 0
    bmax = int(np.abs(b).max(initial=0)) if b.size else 0
    exact_obj = amax * bmax * ph * 2 * n * f.red_max >= _INT64_SAFE
    dtype = object if exact_obj else np.int64
    a = a.astype(dtype)
    b = b.astype(dtype)
    # folded[i, j, r] = sum_{s + t = r mod n} a[i, s] * b[j, t]
    folded = np.zeros((k, m, n), dtype=dtype)
    for s in range(ph):
        col = a[:, s]
        if not np.any(col != 0):
            continue
        idx = (np.arange(ph) + s) % n
        contrib = col[:, None, None] * b[None, :, :]
        folded[:, :, idx] += contrib
    red = f.red_obj if exact_obj else f.red
    return folded @ red
