"""Weight sequences M = (M_j) and their regularity properties.

Everything is kept in natural-log units: ``log_m(j) = ln M_j`` and
``ratio(j) = ln(M_{j+1} / M_j)``.  Two kinds are supported:

* :class:`Gevrey` -- ``M_j = j!^alpha * ln(j + e)^(beta*j)``, evaluated in closed
  form so that indices in the 10^8 range cost O(1);
* :class:`Explicit` -- a finite list of exact positive rationals, validated
  eagerly (normalization, monotonicity, log-convexity).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

from .errors import (
    InputError,
    NonNormalized,
    NotIncreasing,
    NotLogConvex,
    SequenceExhausted,
)

# Relative slack for comparisons between floating log quantities.
REL_TOL = 1e-9


def log_fraction(q: Fraction | int) -> float:
    """ln|q| for an exact rational of any size (no float overflow)."""
    q = Fraction(q)
    if q == 0:
        return -math.inf
    return math.log(abs(q.numerator)) - math.log(q.denominator)


def as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v.strip())
    if isinstance(v, float):
        if not math.isfinite(v):
            raise InputError(f"non-finite value {v!r}")
        return Fraction(v)
    return Fraction(v)


def leq_tol(a: float, b: float, tol: float = REL_TOL) -> bool:
    """a <= b up to relative slack ``tol`` (identical values always pass)."""
    if a <= b:
        return True
    return a - b <= tol * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class Gevrey:
    alpha: float
    beta: float = 0.0


@dataclass(frozen=True)
class Explicit:
    values: tuple[Fraction, ...]


SequenceSpec = Union[Gevrey, Explicit]


def _lnln(j: int) -> float:
    return math.log(math.log(j + math.e))


def _lnln_step(j: int) -> float:
    # ln ln(j+1+e) - ln ln(j+e) without cancellation
    le = math.log(j + math.e)
    return math.log1p(math.log1p(1.0 / (j + math.e)) / le)


class WeightSequence:
    """A normalized, log-convex weight sequence.

    ``log_m`` and ``ratio`` are pure functions of ``j``; the small tables
    returned by :meth:`log_m_table` / :meth:`ratio_table` are cached and grow
    monotonically under a lock, so a sequence can be shared between threads.
    """

    def __init__(self, kind: SequenceSpec):
        self.kind = kind
        self._lock = threading.Lock()
        self._logm: list[float] = []
        self._ratios: list[float] = []
        if isinstance(kind, Explicit):
            vals = kind.values
            self._explicit_logs = [log_fraction(v) for v in vals]
            self._explicit_ratios = [
                log_fraction(vals[j + 1] / vals[j]) for j in range(len(vals) - 1)
            ]

    # -- identity -----------------------------------------------------------
    def __repr__(self) -> str:
        if isinstance(self.kind, Gevrey):
            return f"WeightSequence(Gevrey({self.kind.alpha!r}, {self.kind.beta!r}))"
        return f"WeightSequence(Explicit(len={len(self.kind.values)}))"

    def __eq__(self, other) -> bool:
        return isinstance(other, WeightSequence) and self.kind == other.kind

    def __hash__(self) -> int:
        return hash(self.kind)

    @property
    def max_index(self) -> int | None:
        """Largest available index, or ``None`` for an infinite sequence."""
        if isinstance(self.kind, Explicit):
            return len(self.kind.values) - 1
        return None

    @property
    def is_gevrey(self) -> bool:
        return isinstance(self.kind, Gevrey)

    # -- values ---------------------------------------------------------------
    def log_m(self, j: int) -> float:
        if j < 0:
            raise IndexError(j)
        k = self.kind
        if isinstance(k, Gevrey):
            val = k.alpha * math.lgamma(j + 1)
            if k.beta and j:
                val += k.beta * j * _lnln(j)
            return val
        if j >= len(k.values):
            raise SequenceExhausted(f"explicit sequence has no index {j}")
        return self._explicit_logs[j]

    def ratio(self, j: int) -> float:
        if j < 0:
            raise IndexError(j)
        k = self.kind
        if isinstance(k, Gevrey):
            val = k.alpha * math.log(j + 1)
            if k.beta:
                val += k.beta * (_lnln(j + 1) + j * _lnln_step(j))
            return val
        if j + 1 >= len(k.values):
            raise SequenceExhausted(f"explicit sequence has no ratio at {j}")
        return self._explicit_ratios[j]

    def value(self, j: int) -> Fraction | float:
        """M_j itself: exact for explicit sequences, a float for Gevrey."""
        if isinstance(self.kind, Explicit):
            if j >= len(self.kind.values):
                raise SequenceExhausted(f"explicit sequence has no index {j}")
            return self.kind.values[j]
        return math.exp(self.log_m(j))

    def log_m_table(self, n: int) -> list[float]:
        with self._lock:
            while len(self._logm) < n:
                self._logm.append(self.log_m(len(self._logm)))
            return self._logm[:n]

    def ratio_table(self, n: int) -> list[float]:
        with self._lock:
            while len(self._ratios) < n:
                self._ratios.append(self.ratio(len(self._ratios)))
            return self._ratios[:n]

    # -- serialization --------------------------------------------------------
    def to_json(self) -> dict:
        k = self.kind
        if isinstance(k, Gevrey):
            return {"kind": "gevrey", "alpha": k.alpha, "beta": k.beta}
        return {
            "kind": "explicit",
            "values": [v.numerator if v.denominator == 1 else str(v) for v in k.values],
        }

    @classmethod
    def from_json(cls, data: dict) -> "WeightSequence":
        kind = data.get("kind")
        if kind == "gevrey":
            return make_weight_sequence(Gevrey(float(data["alpha"]), float(data.get("beta", 0.0))))
        if kind == "explicit":
            return make_weight_sequence(Explicit(tuple(as_fraction(v) for v in data["values"])))
        raise InputError(f"unknown sequence kind {kind!r}")


def make_weight_sequence(spec: SequenceSpec | Iterable) -> WeightSequence:
    """Validate ``spec`` and build a :class:`WeightSequence`.

    A bare iterable is read as an explicit list of values.
    """
    if not isinstance(spec, (Gevrey, Explicit)):
        spec = Explicit(tuple(as_fraction(v) for v in spec))
    if isinstance(spec, Gevrey):
        alpha, beta = float(spec.alpha), float(spec.beta)
        if not (math.isfinite(alpha) and alpha > 0):
            raise InputError(f"Gevrey exponent alpha must be > 0, got {spec.alpha!r}")
        if not math.isfinite(beta):
            raise InputError(f"Gevrey beta must be finite, got {spec.beta!r}")
        return WeightSequence(Gevrey(alpha, beta))

    vals = tuple(as_fraction(v) for v in spec.values)
    if not vals:
        raise InputError("explicit sequence must be nonempty")
    for j, v in enumerate(vals):
        if v <= 0:
            raise InputError(f"explicit sequence value at {j} is not positive")
    if vals[0] != 1:
        raise NonNormalized(f"M_0 = {vals[0]} != 1", index=0)
    for j in range(len(vals) - 1):
        if vals[j + 1] < vals[j]:
            raise NotIncreasing(f"M_{j + 1} < M_{j}", index=j + 1)
    # ratios r_j = M_{j+1}/M_j must be nondecreasing; report j with r_j > r_{j+1}
    for j in range(len(vals) - 2):
        if vals[j + 1] * vals[j + 1] > vals[j] * vals[j + 2]:
            raise NotLogConvex(
                f"ratio M_{j + 2}/M_{j + 1} < M_{j + 1}/M_{j}", index=j
            )
    return WeightSequence(Explicit(vals))


# ---------------------------------------------------------------------------
# regularity


@dataclass
class RegularityReport:
    normalized: bool
    increasing: bool
    log_convex: bool
    logprod_ok: bool
    moderate_growth_A: float | None
    moderate_growth_witness: tuple[int, int] | None
    snqa_A: float | None
    snqa_profile: list[float]
    snqa_truncation: int | None
    snqa_remainder: float | None
    qa_partial_sums: list[float]
    tested_j_max: int
    notes: list[str] = field(default_factory=list)

    @property
    def strongly_regular(self) -> bool:
        return (
            self.normalized
            and self.increasing
            and self.log_convex
            and self.logprod_ok
            and self.moderate_growth_A is not None
            and self.snqa_A is not None
        )


def _gevrey_tail_bound(g: Gevrey, T: int) -> float | None:
    """Upper bound for sum_{j > T} M_j / ((j+1) M_{j+1}), or None if T is too small.

    With b = max(0, -beta): term_j <= e^b (j+1)^(-alpha-1) ln(j+1+e)^b.  For
    beta >= 0 the log factor is dropped and the tail is at most
    (T+1)^-alpha / alpha.  For beta < 0 and ln(T+1+e) > 2b/alpha the log
    factor is dominated by ((j+1)/(T+1))^(alpha/2), giving
    (2/alpha) e^b ln(T+1+e)^b (T+1)^-alpha.
    """
    a = g.alpha
    if g.beta >= 0:
        return (T + 1) ** (-a) / a
    b = -g.beta
    lt = math.log(T + 1 + math.e)
    if lt <= 2 * b / a:
        return None
    return (2 / a) * math.exp(b) * lt**b * (T + 1) ** (-a)


def check_regularity(M: WeightSequence, j_max: int) -> RegularityReport:
    """Check the sequence properties over the index range ``j + k <= j_max``.

    Explicit sequences are compared exactly; Gevrey values are floating logs
    compared with relative slack :data:`REL_TOL`.  Constants are range-limited
    estimates, not proofs.
    """
    if j_max < 2:
        raise InputError("j_max must be >= 2")
    notes = ["constants are estimated over the tested index range only"]
    top = j_max if M.max_index is None else min(j_max, M.max_index)
    if top < j_max:
        notes.append(f"explicit sequence ends at index {M.max_index}; range clipped")

    logs = M.log_m_table(top + 1)
    exact = isinstance(M.kind, Explicit)
    vals = M.kind.values if exact else None

    normalized = (vals[0] == 1) if exact else logs[0] == 0.0
    if exact:
        increasing = all(vals[j + 1] >= vals[j] for j in range(top))
        log_convex = all(
            vals[j + 1] ** 2 <= vals[j] * vals[j + 2] for j in range(top - 1)
        )
        logprod_ok = all(
            vals[j] * vals[k] <= vals[j + k]
            for j in range(top + 1)
            for k in range(top + 1 - j)
        )
    else:
        ratios = M.ratio_table(top + 1)
        increasing = all(leq_tol(logs[j], logs[j + 1]) for j in range(top))
        log_convex = all(leq_tol(ratios[j], ratios[j + 1]) for j in range(top))
        logprod_ok = all(
            leq_tol(logs[j] + logs[k], logs[j + k])
            for j in range(top + 1)
            for k in range(top + 1 - j)
        )

    # moderate growth: least A with M_{j+k} <= A^{j+k} M_j M_k
    best, witness = 0.0, (0, 0)
    for j in range(top + 1):
        for k in range(j, top + 1 - j):
            if j + k == 0:
                continue
            v = (logs[j + k] - logs[j] - logs[k]) / (j + k)
            if v > best:
                best, witness = v, (j, k)
    mg_A = math.exp(best)

    # partial sums of M_j / ((j+1) M_{j+1})
    n_terms = top + 1 if not exact else top
    terms = [math.exp(-M.ratio(j)) / (j + 1) for j in range(n_terms)]
    qa_partial: list[float] = []
    for j in range(n_terms):
        qa_partial.append(math.fsum(terms[: j + 1]))

    snqa_A = snqa_T = snqa_R = None
    snqa_profile: list[float] = []
    if isinstance(M.kind, Gevrey):
        T = max(4 * j_max, 4)
        R = _gevrey_tail_bound(M.kind, T)
        while R is None:
            T *= 2
            R = _gevrey_tail_bound(M.kind, T)
        tail_terms = [math.exp(-M.ratio(j)) / (j + 1) for j in range(T + 1)]
        suffix = [0.0] * (T + 2)
        for j in range(T, -1, -1):
            suffix[j] = suffix[j + 1] + tail_terms[j]
        for k in range(top + 1):
            snqa_profile.append((suffix[k] + R) * math.exp(M.ratio(k)))
        snqa_A, snqa_T, snqa_R = max(snqa_profile), T, R
        notes.append(
            f"strong non-quasianalyticity sums truncated at index {T} "
            f"with remainder bound {R!r}"
        )
    else:
        notes.append("strong non-quasianalyticity tail undetermined for a finite list")

    return RegularityReport(
        normalized=normalized,
        increasing=increasing,
        log_convex=log_convex,
        logprod_ok=logprod_ok,
        moderate_growth_A=mg_A,
        moderate_growth_witness=witness,
        snqa_A=snqa_A,
        snqa_profile=snqa_profile,
        snqa_truncation=snqa_T,
        snqa_remainder=snqa_R,
        qa_partial_sums=qa_partial,
        tested_j_max=top,
        notes=notes,
    )
