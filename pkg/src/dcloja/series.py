"""Exact multivariate polynomials and truncated Taylor series over the rationals.

Multi-indices are tuples of nonnegative ints of length ``n``; coordinates are
numbered from 1 in user-facing text (``x1``, ``x2``) and from 0 in tuples.
No floating point is used anywhere in this module except :func:`log_abs`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import DegreeCapExceeded, DimensionMismatch, InputError, ZeroConstantTerm
from .weights import as_fraction, log_fraction

MultiIndex = tuple[int, ...]

log_abs = log_fraction


@lru_cache(maxsize=None)
def indices_of_degree(n: int, j: int) -> tuple[MultiIndex, ...]:
    """All multi-indices of length ``n`` and total degree ``j``, lexicographically descending."""
    if n == 1:
        return ((j,),)
    out = []
    for first in range(j, -1, -1):
        for rest in indices_of_degree(n - 1, j - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def indices_up_to(n: int, d: int) -> tuple[MultiIndex, ...]:
    """Multi-indices with total degree <= d, graded by degree."""
    return tuple(J for j in range(d + 1) for J in indices_of_degree(n, j))


def factorial_of(J: Sequence[int]) -> int:
    return math.prod(math.factorial(j) for j in J)


def _coerce(c) -> Fraction:
    return c if isinstance(c, Fraction) else as_fraction(c)


class Polynomial:
    """A finitely supported map multi-index -> rational."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Mapping[MultiIndex, object] | None = None):
        if n < 1:
            raise InputError("polynomial dimension must be >= 1")
        self.n = n
        clean = {}
        for K, c in (coeffs or {}).items():
            K = tuple(int(k) for k in K)
            if len(K) != n or min(K) < 0:
                raise InputError(f"bad multi-index {K} for n={n}")
            c = _coerce(c)
            if c:
                clean[K] = clean.get(K, Fraction(0)) + c
        self.coeffs = {K: c for K, c in clean.items() if c}

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c, n: int) -> "Polynomial":
        return cls(n, {(0,) * n: c})

    @classmethod
    def variable(cls, i: int, n: int) -> "Polynomial":
        """The coordinate ``x_i`` (1-based)."""
        if not 1 <= i <= n:
            raise InputError(f"variable x{i} out of range for n={n}")
        K = [0] * n
        K[i - 1] = 1
        return cls(n, {tuple(K): 1})

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Polynomial":
        """Parse text such as ``"x1^2 + x2^4"`` or ``"3/2*x1*x2"``."""
        import sympy
        from sympy.parsing.sympy_parser import (
            convert_xor,
            parse_expr,
            rationalize,
            standard_transformations,
        )

        names = sorted({int(m) for m in re.findall(r"x(\d+)", text)})
        if names and names[0] < 1:
            raise InputError("variables are numbered from x1")
        n = n or (names[-1] if names else 1)
        if names and names[-1] > n:
            raise InputError(f"x{names[-1]} does not exist in dimension {n}")
        syms = sympy.symbols(" ".join(f"x{i}" for i in range(1, n + 1)), seq=True)
        local = {f"x{i + 1}": s for i, s in enumerate(syms)}
        try:
            expr = parse_expr(
                text,
                local_dict=local,
                transformations=standard_transformations + (convert_xor, rationalize),
            )
            poly = sympy.Poly(expr, *syms, domain="QQ")
        except Exception as exc:  # sympy raises a zoo of types
            raise InputError(f"cannot parse polynomial {text!r}: {exc}") from exc
        if set(map(str, expr.free_symbols)) - set(local):
            raise InputError(f"unknown symbols in {text!r}")
        return cls(n, {K: Fraction(int(c.p), int(c.q)) for K, c in poly.terms()})

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other: "Polynomial"):
        if other.n != self.n:
            raise DimensionMismatch(f"dimensions {self.n} and {other.n} differ")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(other, self.n)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.coeffs)
        for K, c in other.coeffs.items():
            out[K] = out.get(K, Fraction(0)) + c
        return Polynomial(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.n, {K: -c for K, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out: dict[MultiIndex, Fraction] = {}
        for I, a in self.coeffs.items():
            for J, b in other.coeffs.items():
                K = tuple(i + j for i, j in zip(I, J))
                out[K] = out.get(K, Fraction(0)) + a * b
        return Polynomial(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise InputError("negative powers are not polynomials")
        result = Polynomial.constant(1, self.n)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, frozenset(self.coeffs.items())))

    # -- queries ------------------------------------------------------------
    @property
    def degree(self) -> int:
        return max((sum(K) for K in self.coeffs), default=-1)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, point: Sequence) -> Fraction:
        if len(point) != self.n:
            raise DimensionMismatch(f"point has {len(point)} coordinates, expected {self.n}")
        pt = [_coerce(a) for a in point]
        total = Fraction(0)
        for K, c in self.coeffs.items():
            term = c
            for a, k in zip(pt, K):
                if k:
                    term *= a**k
            total += term
        return total

    def evaluate_complex(self, point: Sequence[complex]) -> complex:
        total = 0j
        for K, c in self.coeffs.items():
            term = complex(float(c))
            for a, k in zip(point, K):
                if k:
                    term *= a**k
            total += term
        return total

    def substitute(self, axis: int, value) -> "Polynomial":
        """Set ``x_axis`` (1-based) to ``value``; the dimension is kept."""
        i = axis - 1
        v = _coerce(value)
        out: dict[MultiIndex, Fraction] = {}
        for K, c in self.coeffs.items():
            K2 = K[:i] + (0,) + K[i + 1:]
            out[K2] = out.get(K2, Fraction(0)) + c * v ** K[i]
        return Polynomial(self.n, out)

    def divide_by_variable(self, axis: int, power: int = 1) -> "Polynomial | None":
        """Exact quotient by ``x_axis^power`` or ``None`` if it does not divide."""
        i = axis - 1
        if any(K[i] < power for K in self.coeffs):
            return None
        return Polynomial(
            self.n,
            {K[:i] + (K[i] - power,) + K[i + 1:]: c for K, c in self.coeffs.items()},
        )

    # -- text / json --------------------------------------------------------
    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for K in sorted(self.coeffs, key=lambda K: (-sum(K), tuple(-k for k in K))):
            c = self.coeffs[K]
            mono = "*".join(
                f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(K) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Polynomial({self.n}, {str(self)!r})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [[list(K), str(c)] for K, c in sorted(self.coeffs.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Polynomial":
        return cls(int(data["n"]), {tuple(K): Fraction(c) for K, c in data["terms"]})


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TruncatedSeries:
    """Taylor coefficients in the shifted variable ``u = x - a`` up to degree ``cap``.

    Absent indices are zero; every stored index has total degree <= ``cap``.
    """

    n: int
    cap: int
    coeffs: Mapping[MultiIndex, Fraction]

    def __post_init__(self):
        bad = [K for K in self.coeffs if sum(K) > self.cap or len(K) != self.n]
        if bad:
            raise InputError(f"indices {bad[:3]} do not fit n={self.n}, cap={self.cap}")

    def coeff(self, J: MultiIndex) -> Fraction:
        return self.coeffs.get(tuple(J), Fraction(0))

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.n == other.n and self.cap == other.cap and dict(self.coeffs) == dict(other.coeffs)


def series_from_polynomial(p: Polynomial, d: int) -> TruncatedSeries:
    return TruncatedSeries(p.n, d, {K: c for K, c in p.coeffs.items() if sum(K) <= d})


def recenter(p: Polynomial, a: Sequence, d: int) -> TruncatedSeries:
    """Taylor expansion of ``p`` at ``a`` truncated at total degree ``d``."""
    if d < 0:
        raise InputError("degree cap must be >= 0")
    if len(a) != p.n:
        raise DimensionMismatch(f"point has {len(a)} coordinates, expected {p.n}")
    a = [_coerce(x) for x in a]
    out: dict[MultiIndex, Fraction] = {}
    for K, c in p.coeffs.items():
        # (a_i + u_i)^k_i = sum_m C(k_i, m) a_i^(k_i - m) u_i^m
        axes = [
            [(m, math.comb(k, m) * ai ** (k - m)) for m in range(k + 1) if ai or m == k]
            for k, ai in zip(K, a)
        ]
        for combo in product(*axes):
            m = tuple(x[0] for x in combo)
            if sum(m) > d:
                continue
            coef = c
            for _, w in combo:
                coef *= w
            out[m] = out.get(m, Fraction(0)) + coef
    return TruncatedSeries(p.n, d, {K: c for K, c in out.items() if c})


def mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Truncated Cauchy product; the result carries the smaller cap."""
    if f.n != g.n:
        raise DimensionMismatch(f"dimensions {f.n} and {g.n} differ")
    cap = min(f.cap, g.cap)
    out: dict[MultiIndex, Fraction] = {}
    for I, a in f.coeffs.items():
        si = sum(I)
        if si > cap:
            continue
        for J, b in g.coeffs.items():
            if si + sum(J) > cap:
                continue
            K = tuple(i + j for i, j in zip(I, J))
            out[K] = out.get(K, Fraction(0)) + a * b
    return TruncatedSeries(f.n, cap, {K: c for K, c in out.items() if c})


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def reciprocal(f: TruncatedSeries, d: int | None = None) -> TruncatedSeries:
    """Series ``g`` with ``f g = 1`` up to degree ``min(d, f.cap)``.

    Runs the recurrence ``g_J = -(1/f_0) sum_{0<K<=J} f_K g_{J-K}`` on integer
    numerators: with ``F = D f`` integral, ``1/F`` has coefficients
    ``G_J / F_0^(|J|+1)`` where ``G_J = -sum_K F_K G_{J-K} F_0^(|K|-1)``.
    """
    d = f.cap if d is None else min(d, f.cap)
    n = f.n
    zero = (0,) * n
    f0 = f.coeffs.get(zero, Fraction(0))
    if f0 == 0:
        raise ZeroConstantTerm("constant term is zero: expansion point lies on the zero set")
    D = reduce(_lcm, (c.denominator for c in f.coeffs.values()), 1)
    F0 = int(f0 * D)
    support = [
        (K, int(c * D), sum(K))
        for K, c in f.coeffs.items()
        if K != zero and sum(K) <= d
    ]
    pw = [1]
    for _ in range(d + 1):
        pw.append(pw[-1] * F0)
    G: dict[MultiIndex, int] = {zero: 1}
    if n == 1:
        uni = [(K[0], FK, k) for K, FK, k in support]
        for j in range(1, d + 1):
            s = 0
            for k0, FK, k in uni:
                if k0 <= j:
                    g = G.get((j - k0,))
                    if g:
                        s += FK * g * pw[k - 1]
            if s:
                G[(j,)] = -s
    else:
        for J in indices_up_to(n, d)[1:]:
            s = 0
            for K, FK, k in support:
                ok = True
                for kk, jj in zip(K, J):
                    if kk > jj:
                        ok = False
                        break
                if not ok:
                    continue
                g = G.get(tuple(jj - kk for jj, kk in zip(J, K)))
                if g:
                    s += FK * g * pw[k - 1]
            if s:
                G[J] = -s
    coeffs = {J: Fraction(D * g, pw[sum(J) + 1]) for J, g in G.items()}
    return TruncatedSeries(n, d, coeffs)


def derivative_at(f: TruncatedSeries, J: Sequence[int]) -> Fraction:
    """``D^J`` of the expanded function at the expansion point: ``J! * coeff_J``."""
    J = tuple(int(j) for j in J)
    if len(J) != f.n:
        raise DimensionMismatch(f"multi-index {J} has wrong length for n={f.n}")
    if sum(J) > f.cap:
        raise DegreeCapExceeded(f"|J| = {sum(J)} exceeds degree cap {f.cap}")
    return factorial_of(J) * f.coeff(J)


def reciprocal_derivatives(phi: Polynomial, x: Sequence, d: int) -> TruncatedSeries:
    """Taylor series of ``1/phi`` at ``x`` to degree ``d``."""
    return reciprocal(recenter(phi, x, d), d)


def format_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str | int | Fraction) -> Fraction:
    return as_fraction(text)


def parse_point(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(_coerce(v) for v in values)
