"""The associated function h_M(t) = inf_j t^j M_j and its structural checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import BracketNotFound, GridTooNarrow, InputError, SequenceExhausted
from .weights import Gevrey, WeightSequence, leq_tol, make_weight_sequence


class HmValue(NamedTuple):
    log_value: float
    minimizer: int


def hm_eval(M: WeightSequence, t: float) -> HmValue:
    """Return ``(ln h_M(t), least minimizing j)``.

    ``j -> j ln t + ln M_j`` is convex, so the least minimizer is the least j
    with ``ratio(j) >= -ln t``; it is located by doubling then bisection.
    ``t = 0`` gives ``(-inf, 1)`` since ``0^j M_j = 0`` first at j = 1.
    """
    t = float(t)
    if not t >= 0 or math.isinf(t):
        raise InputError(f"t must be a finite nonnegative real, got {t!r}")
    if t == 0.0:
        return HmValue(-math.inf, 1)
    lt = math.log(t)
    target = -lt
    if M.ratio(0) >= target:
        return HmValue(0.0, 0)
    last = None if M.max_index is None else M.max_index - 1
    lo, hi = 0, 1
    while True:
        if last is not None and hi > last:
            hi = last
            if M.ratio(hi) < target:
                raise SequenceExhausted(
                    f"h_M({t!r}) needs indices beyond the explicit sequence"
                )
            break
        if M.ratio(hi) >= target:
            break
        lo, hi = hi, 2 * hi
    # invariant: ratio(lo) < target <= ratio(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if M.ratio(mid) >= target:
            hi = mid
        else:
            lo = mid
    return HmValue(hi * lt + M.log_m(hi), hi)


def hm(M: WeightSequence, t: float) -> float:
    return math.exp(hm_eval(M, t).log_value)


def hm_table(M: WeightSequence, ts: Sequence[float]) -> list[tuple[float, float, int]]:
    """Rows ``(t, h_M(t), minimizer)``."""
    rows = []
    for t in ts:
        lv, j = hm_eval(M, t)
        rows.append((float(t), math.exp(lv), j))
    return rows


def geometric_grid(lo: float, hi: float, n: int) -> list[float]:
    if n < 1 or not (0 < lo <= hi):
        raise InputError("geometric grid needs 0 < lo <= hi and n >= 1")
    if n == 1:
        return [float(lo)]
    a, b = math.log(lo), math.log(hi)
    return [math.exp(a + (b - a) * i / (n - 1)) for i in range(n)]


# ---------------------------------------------------------------------------
# recovering M_j from h_M


def _recover_on_grid(M: WeightSequence, j: int, ts: Sequence[float]) -> float:
    vals = [-j * math.log(t) + hm_eval(M, t).log_value for t in ts]
    i = max(range(len(vals)), key=vals.__getitem__)
    best = vals[i]
    if len(vals) >= 2 and i in (0, len(vals) - 1):
        nb = vals[1] if i == 0 else vals[-2]
        if best - nb > 1e-12 * max(1.0, abs(best)):
            raise GridTooNarrow(f"sup of t^-{j} h_M(t) attained at grid endpoint t={ts[i]!r}")
    return math.exp(best)


def recover_mj(
    M: WeightSequence,
    j: int,
    t_grid: Sequence[float] | None = None,
    points_per_decade: int = 40,
) -> float:
    """Approximate ``M_j = sup_t t^-j h_M(t)`` by a maximum over a t-grid.

    With an explicit ``t_grid`` a maximum at an endpoint raises
    :class:`GridTooNarrow`.  Without one, a geometric grid centred on the
    plateau where ``j`` is the minimizer is widened until the sup is interior.
    """
    if j < 0:
        raise InputError("j must be >= 0")
    if t_grid is not None:
        return _recover_on_grid(M, j, list(t_grid))
    if j == 0:
        centre = -M.ratio(0)
    else:
        centre = -(M.ratio(j - 1) + M.ratio(j)) / 2
    half = 3.0
    while True:
        n = int(2 * half * points_per_decade) + 1
        lo = math.exp(centre - half * math.log(10))
        hi = math.exp(centre + half * math.log(10))
        try:
            return _recover_on_grid(M, j, geometric_grid(lo, hi, n))
        except GridTooNarrow:
            if half > 200:
                raise
            half *= 2


# ---------------------------------------------------------------------------
# the doubling property h(t) <= h(rho t)^2

DEFAULT_RHO_LADDER = (1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0, 48.0, 64.0)


@dataclass
class RhoWitness:
    rho: float | None
    max_defect: float
    tolerance: float
    grid: list[float] = field(repr=False)
    defect_table: list[tuple[float, float, float]] = field(default_factory=list)
    verdict: str = "fails"


def rho_defect(M: WeightSequence, ts: Sequence[float], rho: float) -> tuple[float, float]:
    """``max_t ln h(t) - 2 ln h(rho t)`` over ``ts`` and the t attaining it."""
    best, where = -math.inf, ts[0]
    for t in ts:
        d = hm_eval(M, t).log_value - 2 * hm_eval(M, rho * t).log_value
        if d > best:
            best, where = d, t
    return best, where


def find_rho(
    M: WeightSequence,
    t_grid: Sequence[float],
    rho_ladder: Sequence[float] = DEFAULT_RHO_LADDER,
    tolerance: float = 1e-9,
) -> RhoWitness:
    """Least ladder rho with ``h(t) <= h(rho t)^2`` on every grid point.

    The whole defect table is returned either way; no qualifying rho is a
    reported outcome (verdict ``"fails"``), not an error.
    """
    ts = [float(t) for t in t_grid]
    if not ts:
        raise InputError("empty t grid")
    ladder = sorted(float(r) for r in rho_ladder)
    table = []
    chosen = None
    for rho in ladder:
        d, where = rho_defect(M, ts, rho)
        table.append((rho, d, where))
        if chosen is None and d <= tolerance:
            chosen = (rho, d)
    if chosen is None:
        return RhoWitness(None, min(r[1] for r in table), tolerance, ts, table, "fails")
    return RhoWitness(chosen[0], chosen[1], tolerance, ts, table, "holds")


# ---------------------------------------------------------------------------
# comparison with eta(t) = exp(-(t |ln t|^beta)^(-1/alpha))

DEFAULT_ETA_LADDER = tuple(2.0**e for e in range(-12, 13))


def log_eta(alpha: float, beta: float, s: float) -> float:
    if not s > 0 or (beta != 0 and s >= 1):
        raise InputError("eta needs 0 < s (and s < 1 when beta != 0)")
    if beta == 0:
        return -(s ** (-1.0 / alpha))
    return -((s * abs(math.log(s)) ** beta) ** (-1.0 / alpha))


@dataclass
class EtaBracket:
    a: float
    b: float
    alpha: float
    beta: float
    grid: list[float] = field(repr=False)
    lower_margin: float
    upper_margin: float
    note: str = "bracket verified on a finite grid only; evidence for t -> 0, not a proof"


def eta_bracket(
    alpha: float,
    beta: float,
    t_grid: Sequence[float],
    ladder: Sequence[float] = DEFAULT_ETA_LADDER,
) -> EtaBracket:
    """Largest ``a`` and smallest ``b`` in ``ladder`` with
    ``eta(a t) <= h_M(t) <= eta(b t)`` on the grid, M = Gevrey(alpha, beta).

    Only constants keeping ``c * t`` inside the region where eta is increasing
    (``c t < exp(-beta)`` for beta > 0, ``c t < 1`` for beta < 0) are tried.
    """
    M = make_weight_sequence(Gevrey(alpha, beta))
    ts = [float(t) for t in t_grid]
    if not ts or min(ts) <= 0 or max(ts) >= 1:
        raise InputError("eta bracket grid must lie in (0, 1)")
    limit = math.exp(-beta) if beta > 0 else (1.0 if beta < 0 else math.inf)
    tmax = max(ts)
    cands = sorted(c for c in ladder if c > 0 and c * tmax < limit)
    lh = [hm_eval(M, t).log_value for t in ts]

    def lower_margin(c):
        return min(l - log_eta(alpha, beta, c * t) for t, l in zip(ts, lh))

    def upper_margin(c):
        return min(log_eta(alpha, beta, c * t) - l for t, l in zip(ts, lh))

    a = next((c for c in reversed(cands) if all(
        leq_tol(log_eta(alpha, beta, c * t), l) for t, l in zip(ts, lh))), None)
    b = next((c for c in cands if all(
        leq_tol(l, log_eta(alpha, beta, c * t)) for t, l in zip(ts, lh))), None)
    if a is None or b is None:
        raise BracketNotFound(
            f"no ladder bracket for Gevrey({alpha}, {beta}) on the grid "
            f"(lower={'found' if a else 'missing'}, upper={'found' if b else 'missing'}); "
            "try a smaller grid or a wider ladder"
        )
    return EtaBracket(a, b, alpha, beta, ts, lower_margin(a), upper_margin(b))
