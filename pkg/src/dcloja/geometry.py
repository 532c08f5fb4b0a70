"""Zero sets, exact distances and rational sample boxes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence, Union as TUnion

from .errors import DimensionMismatch, InputError
from .series import Polynomial
from .weights import as_fraction

Point = tuple[Fraction, ...]


def _point(x) -> Point:
    return tuple(as_fraction(v) if not isinstance(v, Fraction) else v for v in x)


@dataclass(frozen=True)
class Hyperplane:
    """The coordinate hyperplane ``{x_axis = 0}``; ``axis`` is 1-based."""

    axis: int

    def __post_init__(self):
        if self.axis < 1:
            raise InputError("hyperplane axis is 1-based")


@dataclass(frozen=True)
class PointSet:
    points: tuple[Point, ...]

    def __post_init__(self):
        if not self.points:
            raise InputError("PointSet must be nonempty")
        object.__setattr__(self, "points", tuple(_point(p) for p in self.points))
        if len({len(p) for p in self.points}) != 1:
            raise DimensionMismatch("points of a PointSet must share a dimension")


@dataclass(frozen=True)
class Union:
    parts: tuple["ZeroSet", ...]

    def __post_init__(self):
        if not self.parts:
            raise InputError("Union must be nonempty")
        object.__setattr__(self, "parts", tuple(self.parts))


ZeroSet = TUnion[Hyperplane, PointSet, Union]


def _sqrt_exact(q: Fraction) -> Fraction | None:
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def _check_dim(x: Point, Z: ZeroSet):
    if isinstance(Z, Hyperplane):
        if Z.axis > len(x):
            raise DimensionMismatch(f"hyperplane x{Z.axis} in dimension {len(x)}")
    elif isinstance(Z, PointSet):
        if len(Z.points[0]) != len(x):
            raise DimensionMismatch(
                f"point has {len(x)} coordinates, zero set has {len(Z.points[0])}"
            )
    else:
        for part in Z.parts:
            _check_dim(x, part)


def squared_distance_to_points(x: Point, Z: PointSet) -> Fraction:
    return min(sum((a - b) ** 2 for a, b in zip(x, p)) for p in Z.points)


def distance(x: Sequence, Z: ZeroSet) -> Fraction | float:
    """Euclidean distance from ``x`` to ``Z``.

    Exact (a Fraction) for hyperplanes and whenever the squared distance to a
    point set is a rational square; otherwise the root is taken in floating point.
    """
    x = _point(x)
    _check_dim(x, Z)
    if isinstance(Z, Hyperplane):
        return abs(x[Z.axis - 1])
    if isinstance(Z, PointSet):
        sq = squared_distance_to_points(x, Z)
        root = _sqrt_exact(sq)
        return root if root is not None else math.sqrt(sq)
    return min((distance(x, part) for part in Z.parts), key=float)


def on_zero_set(x: Sequence, Z: ZeroSet) -> bool:
    x = _point(x)
    _check_dim(x, Z)
    if isinstance(Z, Hyperplane):
        return x[Z.axis - 1] == 0
    if isinstance(Z, PointSet):
        return x in Z.points
    return any(on_zero_set(x, part) for part in Z.parts)


def log_distance(x: Sequence, Z: ZeroSet) -> float:
    d = distance(x, Z)
    if isinstance(d, Fraction):
        return -math.inf if d == 0 else math.log(d.numerator) - math.log(d.denominator)
    return math.log(d) if d > 0 else -math.inf


def zero_set_to_json(Z: ZeroSet) -> dict:
    if isinstance(Z, Hyperplane):
        return {"hyperplane": Z.axis}
    if isinstance(Z, PointSet):
        return {"points": [[_fmt(v) for v in p] for p in Z.points]}
    return {"union": [zero_set_to_json(p) for p in Z.parts]}


def _fmt(q: Fraction):
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def zero_set_from_json(data) -> ZeroSet:
    if not isinstance(data, dict) or len(data) != 1:
        raise InputError(f"zero set JSON must have one key, got {data!r}")
    (key, val), = data.items()
    if key == "hyperplane":
        return Hyperplane(int(val))
    if key == "points":
        return PointSet(tuple(_point(p) for p in val))
    if key == "union":
        return Union(tuple(zero_set_from_json(v) for v in val))
    raise InputError(f"unknown zero set kind {key!r}")


def _flatten(Z: ZeroSet) -> tuple[set[int], set[Point]]:
    if isinstance(Z, Hyperplane):
        return {Z.axis}, set()
    if isinstance(Z, PointSet):
        return set(), set(Z.points)
    axes, pts = set(), set()
    for part in Z.parts:
        a, p = _flatten(part)
        axes |= a
        pts |= p
    return axes, pts


# ---------------------------------------------------------------------------
# sample boxes


GEOM_DENOMINATOR = 10**6


@dataclass(frozen=True)
class Axis:
    lo: Fraction
    hi: Fraction
    count: int
    geometric: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))
        if self.lo > self.hi:
            raise InputError(f"empty interval [{self.lo}, {self.hi}]")
        if self.count < 1:
            raise InputError("grid counts must be >= 1")
        if self.geometric and not (self.lo > 0 or self.hi < 0):
            raise InputError("geometric spacing needs an interval of one strict sign")

    def points(self) -> list[Fraction]:
        n = self.count
        if n == 1:
            return [self.lo]
        if not self.geometric:
            return [self.lo + (self.hi - self.lo) * Fraction(i, n - 1) for i in range(n)]
        sign = 1 if self.lo > 0 else -1
        a, b = math.log(abs(self.lo)), math.log(abs(self.hi))
        out = []
        for i in range(n):
            f = Fraction(i, n - 1)
            if f == 0:
                out.append(self.lo)
            elif f == 1:
                out.append(self.hi)
            else:
                # reduced fraction -> identical float on every refinement level;
                # small denominators keep downstream exact arithmetic cheap
                v = Fraction(math.exp(a + (b - a) * float(f))).limit_denominator(GEOM_DENOMINATOR)
                out.append(sign * v)
        return sorted(out)

    def refine(self) -> "Axis":
        return Axis(self.lo, self.hi, 2 * self.count - 1 if self.count > 1 else 1, self.geometric)


@dataclass(frozen=True)
class Box:
    axes: tuple[Axis, ...]

    def __post_init__(self):
        if not self.axes:
            raise InputError("a box needs at least one axis")
        object.__setattr__(self, "axes", tuple(self.axes))

    @property
    def n(self) -> int:
        return len(self.axes)

    def points(self) -> list[Point]:
        return [tuple(p) for p in product(*(ax.points() for ax in self.axes))]

    def refine(self) -> "Box":
        """Nested refinement: each axis count ``c`` becomes ``2c - 1``."""
        return Box(tuple(ax.refine() for ax in self.axes))

    def to_json(self) -> list[dict]:
        return [
            {"lo": _fmt(a.lo), "hi": _fmt(a.hi), "count": a.count, "geometric": a.geometric}
            for a in self.axes
        ]

    @classmethod
    def from_json(cls, data: list[dict]) -> "Box":
        return cls(tuple(
            Axis(as_fraction(d["lo"]), as_fraction(d["hi"]), int(d["count"]), bool(d["geometric"]))
            for d in data
        ))


def parse_grid_specs(specs: Sequence[str], n: int | None = None) -> Box:
    """Parse ``x1:lo:hi:n[,geom]`` strings (one per axis) into a Box."""
    found: dict[int, Axis] = {}
    for spec in specs:
        body, _, flag = spec.partition(",")
        parts = body.split(":")
        if len(parts) != 4 or not parts[0].startswith("x"):
            raise InputError(f"bad grid spec {spec!r}; expected x1:lo:hi:n[,geom]")
        try:
            axis = int(parts[0][1:])
            count = int(parts[3])
        except ValueError as exc:
            raise InputError(f"bad grid spec {spec!r}") from exc
        if flag not in ("", "geom", "lin"):
            raise InputError(f"unknown spacing {flag!r} in {spec!r}")
        found[axis] = Axis(as_fraction(parts[1]), as_fraction(parts[2]), count, flag == "geom")
    n = n or max(found, default=0)
    if sorted(found) != list(range(1, n + 1)):
        raise InputError(f"grid specs must cover x1..x{n} exactly once")
    return Box(tuple(found[i] for i in range(1, n + 1)))


# ---------------------------------------------------------------------------
# zero-set validation


@dataclass
class ZeroSetReport:
    passes: bool
    exact_checks: list[str]
    failures: list[str]
    certified: bool
    certificate: str
    samples: int
    samples_on_set: int
    extra_zeros: list[Point] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


def _sign_certificate(phi: Polynomial) -> tuple[set[int], str | None, bool]:
    """Split ``phi = +-x^m q`` and describe the zero set of ``q`` if it is sign-definite.

    Returns ``(axes with m_i > 0, description, q vanishes at the origin)``;
    description is None when no certificate applies.
    """
    n = phi.n
    if phi.is_zero():
        return set(), None, False
    m = [min(K[i] for K in phi.coeffs) for i in range(n)]
    q = {tuple(k - mi for k, mi in zip(K, m)): c for K, c in phi.coeffs.items()}
    signs = {c > 0 for c in q.values()}
    if len(signs) != 1:
        return set(), None, False
    if any(k % 2 for K in q for k in K):
        return set(), None, False
    axes = {i + 1 for i in range(n) if m[i] > 0}
    zero = (0,) * n
    if zero in q:
        return axes, "q is a sum of even monomials with a nonzero constant term, so q != 0", False
    pure = all(
        any(K[i] > 0 and sum(K) == K[i] for K in q) for i in range(n)
    )
    if pure:
        return axes, "q is a sum of even monomials containing a pure power of each variable, so q = 0 only at the origin", True
    return set(), None, False


def validate_zero_set(phi: Polynomial, Z: ZeroSet, probe: Box | None = None) -> ZeroSetReport:
    """Check that ``Z`` is the real zero set of ``phi``.

    Exact part: ``phi`` vanishes at the listed points and on the listed
    hyperplanes (substitution gives the zero polynomial).  A sign certificate
    proves equality when ``phi = +-x^m q`` with ``q`` a same-sign sum of even
    monomials.  Otherwise sampling the probe box for exact zeros off ``Z`` is
    heuristic evidence only.
    """
    axes, pts = _flatten(Z)
    checks, failures, notes = [], [], []
    for i in sorted(axes):
        if i > phi.n:
            raise DimensionMismatch(f"hyperplane x{i} in dimension {phi.n}")
        if phi.substitute(i, 0).is_zero():
            checks.append(f"phi restricted to x{i} = 0 is the zero polynomial")
        else:
            failures.append(f"phi does not vanish on x{i} = 0")
    for p in sorted(pts):
        if len(p) != phi.n:
            raise DimensionMismatch(f"point {p} has wrong dimension")
        v = phi(p)
        if v == 0:
            checks.append(f"phi({', '.join(map(str, p))}) = 0")
        else:
            failures.append(f"phi({', '.join(map(str, p))}) = {v} != 0")

    cert_axes, desc, origin = _sign_certificate(phi)
    certified = False
    certificate = "none"
    if desc is not None:
        origin_pt = (Fraction(0),) * phi.n
        line = phi.n == 1  # in one variable the hyperplane x1 = 0 is the origin
        # certified set inside the declared one
        inner = all(i in axes or (line and origin_pt in pts) for i in cert_axes)
        inner = inner and ((not origin) or bool(axes) or origin_pt in pts)
        # declared set inside the certified one
        outer = all(i in cert_axes or (line and origin) for i in axes)
        outer = outer and all(
            any(p[i - 1] == 0 for i in cert_axes) or (p == origin_pt and origin) for p in pts
        )
        if inner and outer and not failures:
            certified = True
            certificate = desc
            if cert_axes:
                certificate = f"phi = x^m q with m supported on {sorted(cert_axes)}; " + desc
        else:
            certificate = "sign argument applies but describes a different zero set"
            failures.append(certificate)

    samples = on_set = 0
    extra: list[Point] = []
    if probe is not None:
        if probe.n != phi.n:
            raise DimensionMismatch("probe box dimension differs from phi")
        for x in probe.points():
            if on_zero_set(x, Z):
                on_set += 1
                continue
            samples += 1
            if phi(x) == 0:
                extra.append(x)
        if extra:
            failures.append(f"{len(extra)} sampled zeros of phi lie off the declared set")
        notes.append("sampling is heuristic: it finds exact rational zeros on the probe grid only")
    notes.append("flat points: a nonzero polynomial has none, so none are computed")
    return ZeroSetReport(
        passes=not failures,
        exact_checks=checks,
        failures=failures,
        certified=certified,
        certificate=certificate,
        samples=samples,
        samples_on_set=on_set,
        extra_zeros=extra,
        notes=notes,
    )
