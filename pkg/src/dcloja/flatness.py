"""Model flat functions ``f(x) = exp(-x^(-1/alpha))`` and their C_M flatness estimates."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .assoc import hm_eval
from .errors import InputError, IrrationalPowerAtSample, NoFitInLadder
from .series import log_abs
from .weights import WeightSequence, as_fraction

DEFAULT_C_LADDER = tuple(2.0**e for e in range(0, 21))

Poly1 = list[Fraction]  # coefficients in u, index = power


def _step(p: Poly1, alpha: int) -> Poly1:
    """``(1/alpha) u^(alpha+1) (p - p')``: one x-derivative of ``p(u) e^-u``."""
    diff = list(p) + [Fraction(0)]
    for k in range(1, len(p)):
        diff[k - 1] -= k * p[k]
    out = [Fraction(0)] * (alpha + 1) + [c / alpha for c in diff]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def eval_poly(p: Poly1, u: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * u + c
    return acc


def _exact_root(q: Fraction, n: int) -> Fraction | None:
    def iroot(a: int) -> int | None:
        r = round(a ** (1.0 / n)) if a < 2**1000 else _int_nth_root(a, n)
        for c in (r - 1, r, r + 1):
            if c >= 0 and c**n == a:
                return c
        return None

    a, b = iroot(q.numerator), iroot(q.denominator)
    return None if a is None or b is None else Fraction(a, b)


def _int_nth_root(a: int, n: int) -> int:
    lo, hi = 0, 1 << (a.bit_length() // n + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**n <= a:
            lo = mid
        else:
            hi = mid - 1
    return lo


class FlatModel:
    """``f(x) = exp(-x^(-1/alpha))`` for ``x > 0`` (and 0 for ``x <= 0``).

    ``f^(j)(x) = P_j(u) e^-u`` with ``u = x^(-1/alpha)``.  The table of
    ``P_j`` only grows; it is guarded by a lock so it may be shared.
    """

    def __init__(self, alpha: int, seed: Poly1 | None = None):
        if not isinstance(alpha, int) or alpha < 1:
            raise InputError("the exact model needs an integer alpha >= 1")
        self.alpha = alpha
        self._table: list[Poly1] = [list(seed) if seed else [Fraction(1)]]
        self._lock = threading.Lock()

    def poly(self, j: int) -> Poly1:
        if j < 0:
            raise InputError("j must be >= 0")
        with self._lock:
            while len(self._table) <= j:
                self._table.append(_step(self._table[-1], self.alpha))
            return self._table[j]

    def u_of(self, x) -> Fraction:
        x = as_fraction(x)
        if x <= 0:
            raise InputError("samples must satisfy x > 0")
        r = x if self.alpha == 1 else _exact_root(x, self.alpha)
        if r is None:
            raise IrrationalPowerAtSample(f"{x} is not an exact {self.alpha}-th power")
        return 1 / r


def quotient_model(alpha: int) -> FlatModel:
    """Model for ``f(x) / x = u^alpha e^-u``; same recurrence, seed ``u^alpha``."""
    return FlatModel(alpha, [Fraction(0)] * alpha + [Fraction(1)])


def flat_model_derivative(m: FlatModel, j: int, x) -> tuple[float, int]:
    """``(ln|f^(j)(x)|, sign)``; a vanishing value gives ``(-inf, 0)``."""
    u = m.u_of(x)
    v = eval_poly(m.poly(j), u)
    if v == 0:
        return -math.inf, 0
    return log_abs(v) - float(u), 1 if v > 0 else -1


# ---------------------------------------------------------------------------


@dataclass
class Binding:
    x: Fraction
    order: int
    lhs: float
    rhs: float


@dataclass
class FitConstants:
    kind: str
    constants: dict[str, float]
    order_cap: int
    grid_points: int
    worst_margin: float
    bindings: list[Binding] = field(default_factory=list)
    ladder: list[float] = field(default_factory=list)
    trivially_zero: int = 0
    notes: list[str] = field(default_factory=list)


def _smallest_at_least(ladder: Sequence[float], need_log: float) -> float | None:
    for c in ladder:
        if math.log(c) >= need_log - 1e-12 * max(1.0, abs(need_log)):
            return c
    return None


def _log_table(m: FlatModel, xs: Sequence[Fraction], order_cap: int):
    return [[flat_model_derivative(m, i, x)[0] for x in xs] for i in range(order_cap + 1)]


def _fit(
    kind: str,
    lf: list[list[float]],
    xs: Sequence[Fraction],
    M: WeightSequence,
    ladder: Sequence[float],
    names: tuple[str, str, str],
) -> FitConstants:
    """Least ladder triple for ``lf[i][x] <= ln c_amp + i ln c_rate + ln(i! M_i) + ln h_M(c_h x)``.

    "Least" means the smallest product ``c_amp c_rate c_h``, ties broken by
    ``(c_rate, c_h)`` ascending; ``c_amp`` is the least ladder entry that works
    for the chosen pair.
    """
    ladder = sorted(float(c) for c in ladder)
    if not ladder or ladder[0] <= 0:
        raise InputError("ladder must be nonempty and positive")
    order_cap = len(lf) - 1
    norm = [math.lgamma(i + 1) + M.log_m(i) for i in range(order_cap + 1)]
    lh_table = {ch: [hm_eval(M, ch * float(x)).log_value for x in xs] for ch in ladder}
    best = None
    for rate in ladder:
        lr = math.log(rate)
        # worst point per order does not depend on the rate
        for ch in ladder:
            lh = lh_table[ch]
            need = max(
                max(lf[i][k] - lh[k] for k in range(len(xs))) - i * lr - norm[i]
                for i in range(order_cap + 1)
            )
            amp = _smallest_at_least(ladder, need)
            if amp is None:
                continue
            key = (math.log(amp) + lr + math.log(ch), rate, ch)
            if best is None or key < best[0]:
                best = (key, amp, rate, ch)
    if best is None:
        raise NoFitInLadder(f"no ladder constants satisfy the {kind} bound up to order {order_cap}")
    _, amp, rate, ch = best
    la, lr, lh = math.log(amp), math.log(rate), lh_table[ch]
    bindings, worst = [], math.inf
    for i in range(order_cap + 1):
        k = max(range(len(xs)), key=lambda k: lf[i][k] - lh[k])
        rhs = la + i * lr + norm[i] + lh[k]
        bindings.append(Binding(xs[k], i, lf[i][k], rhs))
        worst = min(worst, rhs - lf[i][k])
    a_name, r_name, h_name = names
    return FitConstants(
        kind=kind,
        constants={a_name: amp, r_name: rate, h_name: ch},
        order_cap=order_cap,
        grid_points=len(xs),
        worst_margin=worst,
        bindings=bindings,
        ladder=ladder,
    )


def check_flat_bound(
    m: FlatModel,
    M: WeightSequence,
    x_grid: Sequence,
    i_max: int,
    c_ladder: Sequence[float] = DEFAULT_C_LADDER,
) -> FitConstants:
    """Least ladder ``(c2, c1)`` with ``|f^(i)(x)| <= c1 c2^i i! M_i h_M(c2 x)``.

    Here the flat set is ``Z = (-inf, 0]`` so ``dist(x, Z) = x`` on the grid.
    """
    xs = [as_fraction(x) for x in x_grid]
    if not xs:
        raise InputError("empty x grid")
    lf = _log_table(m, xs, i_max)
    # c2 plays both roles in this bound, so search it on the diagonal
    ladder = sorted(float(c) for c in c_ladder)
    norm = [math.lgamma(i + 1) + M.log_m(i) for i in range(i_max + 1)]
    for c2 in ladder:
        lh = [hm_eval(M, c2 * float(x)).log_value for x in xs]
        l2 = math.log(c2)
        need = max(
            lf[i][k] - i * l2 - norm[i] - lh[k] for i in range(i_max + 1) for k in range(len(xs))
        )
        c1 = _smallest_at_least(ladder, need)
        if c1 is None:
            continue
        la = math.log(c1)
        bindings, worst = [], math.inf
        for i in range(i_max + 1):
            k = max(range(len(xs)), key=lambda k: lf[i][k] - lh[k])
            rhs = la + i * l2 + norm[i] + lh[k]
            bindings.append(Binding(xs[k], i, lf[i][k], rhs))
            worst = min(worst, rhs - lf[i][k])
        return FitConstants("flat", {"c1": c1, "c2": c2}, i_max, len(xs), worst, bindings, ladder)
    raise NoFitInLadder(f"no ladder (c1, c2) covers orders up to {i_max}")


def leibniz_quotient(m: FlatModel, p: int, x) -> Fraction:
    """``e^u D^p(f(x)/x)`` assembled from ``f^(i)`` and ``D^r(1/x) = (-1)^r r! x^-(r+1)``."""
    x = as_fraction(x)
    u = m.u_of(x)
    total = Fraction(0)
    for i in range(p + 1):
        r = p - i
        total += math.comb(p, i) * eval_poly(m.poly(i), u) * (-1) ** r * math.factorial(r) / x ** (r + 1)
    return total


def check_quotient_bound(
    m: FlatModel,
    M: WeightSequence,
    x_grid: Sequence,
    p_max: int,
    ladder: Sequence[float] = DEFAULT_C_LADDER,
) -> FitConstants:
    """Fit ``|D^P(f/phi)(x)| <= c5 c6^p p! M_p h_M(c3 dist(x, X))`` for ``phi = x1``.

    ``f(x1, x2) = g(x1)`` so every ``P`` with a positive ``x2``-order gives 0;
    those are counted, not fitted.  The ``x1``-derivatives come from the
    Leibniz assembly and are checked exactly against the independent
    recurrence seeded with ``u^alpha`` (``g(x)/x = u^alpha e^-u``).
    """
    xs = [as_fraction(x) for x in x_grid]
    if not xs:
        raise InputError("empty x grid")
    q = quotient_model(m.alpha)
    lf = []
    for p in range(p_max + 1):
        row = []
        for x in xs:
            a = leibniz_quotient(m, p, x)
            b = eval_poly(q.poly(p), q.u_of(x))
            if a != b:
                raise AssertionError(f"Leibniz assembly disagrees with the recurrence at p={p}, x={x}")
            row.append(-math.inf if a == 0 else log_abs(a) - float(q.u_of(x)))
        lf.append(row)
    fit = _fit("quotient", lf, xs, M, ladder, ("c5", "c6", "c3"))
    fit.trivially_zero = sum(range(1, p_max + 1)) * len(xs)
    fit.notes.append("D^P(f/phi) vanishes whenever P has a positive x2 order")
    fit.notes.append("Leibniz assembly matched the u^alpha recurrence exactly at every sample")
    return fit
