"""Random r-localising sets and weighted fragmentation.

A set ``X`` is r-localising when every component of ``G - X`` sits inside
distance ``< r`` (measured in ``G``) of a single vertex.  The sampler draws a
radius for each vertex from the distribution built by
:func:`build_distribution` and cuts along the resulting spheres.
"""

from __future__ import annotations

import decimal
import functools
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ContractError, StatisticalFailure
from .graph import Graph, bfs_distances, components

PRECISION = 60
SUM_TOLERANCE = Decimal("1e-30")
MAX_RADIUS_SCAN = 10**6
DEFAULT_MAX_DRAWS = 10_000


def _ctx() -> decimal.Context:
    return decimal.Context(prec=PRECISION)


def _dec(x) -> Decimal:
    if isinstance(x, Decimal):
        return x
    if isinstance(x, Fraction):
        return _ctx().divide(Decimal(x.numerator), Decimal(x.denominator))
    if isinstance(x, (int, str)):
        try:
            return Decimal(x)
        except decimal.InvalidOperation as exc:
            raise ContractError(f"not a number: {x!r}") from exc
    return Decimal(repr(float(x)))


@dataclass(frozen=True)
class LocalisingDistribution:
    r: int
    p: Decimal
    q: Decimal
    f: tuple[Decimal, ...]  # f[s] = P[radius = s]
    valid: bool

    @property
    def total(self) -> Decimal:
        return _ctx().create_decimal(sum(self.f, Decimal(0)))

    def float_probabilities(self) -> np.ndarray:
        return np.array([float(x) for x in self.f])

    def to_obj(self) -> dict:
        return {
            "r": self.r,
            "p": str(self.p),
            "q": str(self.q),
            "f": [str(x) for x in self.f],
            "sum": str(self.total),
            "valid": self.valid,
        }


def build_distribution(r: int, p, q) -> LocalisingDistribution:
    """Evaluate ``f(r) = p`` and ``f(s) = min(q S, 1 - S)`` with ``S = f(s+1) + ... + f(r)``.

    Invalid parameter combinations are returned with ``valid=False`` rather
    than raised so callers can probe for the smallest usable radius.
    """
    if r < 1:
        raise ContractError("radius must be at least 1")
    ctx = _ctx()
    p, q = _dec(p), _dec(q)
    if not (0 < p < 1 and 0 < q < 1):
        raise ContractError("p and q must lie strictly between 0 and 1")
    f = [Decimal(0)] * (r + 1)
    f[r] = p
    tail = p
    for s in range(r - 1, -1, -1):
        f[s] = min(ctx.multiply(q, tail), ctx.subtract(Decimal(1), tail))
        tail = ctx.add(tail, f[s])
    valid = abs(ctx.subtract(tail, Decimal(1))) <= SUM_TOLERANCE
    return LocalisingDistribution(r, p, q, tuple(f), valid)


def cor_frac_parameters(r: int, c: int) -> tuple[Decimal, Decimal]:
    """``p = r^(-c-1/2)`` and ``q = r^(-1/2)`` to 60 significant digits."""
    ctx = _ctx()
    ln_r = ctx.ln(Decimal(r))
    p = ctx.exp(ctx.multiply(Decimal(-c) - Decimal("0.5"), ln_r))
    q = ctx.exp(ctx.multiply(Decimal("-0.5"), ln_r))
    return p, q


def radius_condition(r: int, c: int) -> bool:
    """Whether ``p (1+q)^r > 1`` for ``p = r^(-c-1/2)``, ``q = r^(-1/2)``."""
    if r < 2:
        return False  # p = q = 1 at r = 1, outside (0, 1)
    ctx = _ctx()
    p, q = cor_frac_parameters(r, c)
    log_val = ctx.add(ctx.ln(p), ctx.multiply(Decimal(r), ctx.ln(ctx.add(Decimal(1), q))))
    return log_val > 0


def _tail_certified(r: int, c: int) -> bool:
    """``sqrt(r)/2 - (c+1/2) ln r > 0`` and increasing from ``r`` on.

    Since ``ln(1+x) >= x/2`` on ``[0, 1]``, this lower bound on
    ``ln(p (1+q)^r)`` being positive and increasing proves the condition for
    every larger radius.
    """
    ctx = _ctx()
    if r <= (4 * c + 2) ** 2:
        return False
    lower = ctx.subtract(ctx.divide(Decimal(r).sqrt(ctx), Decimal(2)),
                         ctx.multiply(Decimal(c) + Decimal("0.5"), ctx.ln(Decimal(r))))
    return lower > 0


@functools.lru_cache(maxsize=None)
def min_valid_radius(c: int, cap: int = MAX_RADIUS_SCAN) -> int:
    """Smallest ``r0`` such that every ``r >= r0`` satisfies ``p(1+q)^r > 1``.

    Scans upwards until an analytic tail bound certifies all larger radii,
    so the answer is a genuine threshold and not merely the first success
    (the condition is not monotone for tiny ``r``).  The returned radius
    also yields a valid distribution.
    """
    if c < 1:
        raise ContractError("exponent c must be at least 1")
    last_fail = 1
    r = 2
    while not _tail_certified(r, c):
        if r > cap:
            raise ContractError(f"no valid radius found below the scan cap {cap}")
        if not radius_condition(r, c):
            last_fail = r
        r += 1
    r0 = last_fail + 1
    p, q = cor_frac_parameters(r0, c)
    if not build_distribution(r0, p, q).valid:
        raise AssertionError(f"radius {r0} satisfies the growth condition but not the sum condition")
    return r0


def cor_frac_distribution(r: int, c: int) -> LocalisingDistribution:
    p, q = cor_frac_parameters(r, c)
    return build_distribution(r, p, q)


# -- sampling ----------------------------------------------------------------


def truncated_distances(g: Graph, r: int) -> np.ndarray:
    """``D[i, x] = d(v_i, x)`` when at most ``r``, else ``r + 1``."""
    dtype = np.int32 if r < 2**31 - 2 else np.int64
    D = np.full((g.n, g.n), r + 1, dtype=dtype)
    for v in range(g.n):
        for x, d in bfs_distances(g, v, r).items():
            D[v, x] = d
    return D


@dataclass(frozen=True)
class LocalisingSet:
    members: frozenset
    centres: dict  # component (tuple of vertices) -> centre vertex
    radii: tuple[int, ...] = ()

    def to_obj(self) -> dict:
        return {
            "members": sorted(self.members),
            "certificate": [
                {"component": list(comp), "centre": centre}
                for comp, centre in sorted(self.centres.items())
            ],
        }


def localising_violation(g: Graph, members, r: int, centres: dict | None = None) -> str | None:
    """Exact r-localising check by BFS.

    With ``centres`` the given centre of each component is tested; without,
    every vertex of ``G`` is tried as a centre.
    """
    members = set(members)
    for comp in components(g, members):
        if centres is not None:
            key = tuple(comp)
            if key not in centres:
                return f"component starting at {comp[0]} has no certificate"
            dist = bfs_distances(g, centres[key], r - 1)
            if any(u not in dist for u in comp):
                return f"component starting at {comp[0]} leaves the (r-1)-ball of {centres[key]}"
            continue
        if not any(all(u in dist for u in comp)
                   for dist in (bfs_distances(g, v, r - 1) for v in range(g.n))):
            return f"component starting at {comp[0]} fits in no (r-1)-ball"
    return None


class LocalisingSampler:
    """Reusable sampler for one graph and distribution.

    Vertices are enumerated in ascending id order; ``radii[i]`` is drawn with
    ``P[radii[i] = s] = f(s)``, each vertex ``x`` is claimed by the first
    ``v_i`` whose drawn ball contains it, and ``x`` joins the set when it lies
    on that ball's boundary sphere.
    """

    def __init__(self, g: Graph, dist: LocalisingDistribution, distances: np.ndarray | None = None):
        if not dist.valid:
            raise ContractError("distribution does not sum to 1")
        self.g = g
        self.dist = dist
        self.D = truncated_distances(g, dist.r) if distances is None else distances
        cdf = np.cumsum(dist.float_probabilities())
        cdf[-1] = 1.0
        self._cdf = cdf

    def draw_radii(self, rng: np.random.Generator) -> np.ndarray:
        u = rng.random(self.g.n)
        return np.searchsorted(self._cdf, u, side="right").clip(max=self.dist.r)

    def from_radii(self, radii: Sequence[int]) -> LocalisingSet:
        g = self.g
        if g.n == 0:
            return LocalisingSet(frozenset(), {}, ())
        radii = np.asarray(radii)
        inside = self.D <= radii[:, None]
        owner = inside.argmax(axis=0)  # every column has a True on the diagonal
        cols = np.arange(g.n)
        on_sphere = self.D[owner, cols] == radii[owner]
        members = frozenset(int(x) for x in np.flatnonzero(on_sphere))
        centres = {}
        for comp in components(g, members):
            z = min(comp, key=lambda u: (owner[u], u))
            centres[tuple(comp)] = int(owner[z])
        return LocalisingSet(members, centres, tuple(int(x) for x in radii))

    def sample(self, seed: int) -> LocalisingSet:
        return self.from_radii(self.draw_radii(np.random.default_rng(seed)))


def sample_localising(g: Graph, dist: LocalisingDistribution, seed: int = 0) -> LocalisingSet:
    """Draw an r-localising set and verify its certificate exactly."""
    out = LocalisingSampler(g, dist).sample(seed)
    problem = localising_violation(g, out.members, dist.r, out.centres)
    if problem:
        raise AssertionError(f"sampled set failed its certificate: {problem}")
    return out


def inclusion_bound(g: Graph, dist: LocalisingDistribution, v: int) -> float:
    """``p |N^r(v)| + q`` with ``N^r(v)`` the sphere of radius ``r``."""
    sphere = sum(1 for d in bfs_distances(g, v, dist.r).values() if d == dist.r)
    return float(dist.p) * sphere + float(dist.q)


# -- weighted fragmentation --------------------------------------------------


def _exact(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def weight_bound_holds(weight_x, weight_total, r: int) -> bool:
    """Exact test of ``w(X) <= 2 r^(-1/2) w(V)``, i.e. ``r w(X)^2 <= 4 w(V)^2``."""
    wx, wv = _exact(weight_x), _exact(weight_total)
    return r * wx * wx <= 4 * wv * wv


@dataclass(frozen=True)
class Fragmentation:
    members: frozenset
    weight: Fraction
    total_weight: Fraction
    r: int
    growth_value: int
    draws: int
    seed: int
    largest_component: int
    localising: LocalisingSet

    def to_obj(self) -> dict:
        return {
            "members": sorted(self.members),
            "draws": self.draws,
            "seed": self.seed,
            "r": self.r,
            "bounds": {
                "weight": {
                    "lhs": float(self.weight),
                    "rhs": 2 * float(self.total_weight) / self.r**0.5,
                    "holds": weight_bound_holds(self.weight, self.total_weight, self.r),
                },
                "component_size": {
                    "lhs": self.largest_component,
                    "rhs": self.growth_value,
                    "holds": self.largest_component <= self.growth_value,
                },
            },
        }


def weighted_fragment(
    g: Graph,
    weights: Sequence,
    r: int,
    growth_value: int,
    c: int,
    seed: int = 0,
    max_draws: int = DEFAULT_MAX_DRAWS,
    *,
    check_radius: bool = True,
) -> Fragmentation:
    """Find ``X`` with ``w(X) <= 2 r^(-1/2) w(V)`` and components of ``G - X`` of size at most ``g(r)``.

    ``growth_value`` is ``g(r)`` and ``c`` is ``deg(g) + 1``.  Sets are drawn
    from the sampler with ``p = r^(-c-1/2)``, ``q = r^(-1/2)`` under seeds
    ``seed, seed+1, ...`` until the weight bound holds.
    """
    if len(weights) != g.n:
        raise ContractError("need one weight per vertex")
    ws = [_exact(w) for w in weights]
    if any(w < 0 for w in ws):
        raise ContractError("weights must be non-negative")
    if check_radius and r < min_valid_radius(c):
        raise ContractError(f"radius {r} is below the threshold {min_valid_radius(c)} for c={c}")
    D = truncated_distances(g, r)
    ball_sizes = (D <= r).sum(axis=1) if g.n else np.zeros(0, dtype=int)
    if g.n and int(ball_sizes.max()) > growth_value:
        v = int(ball_sizes.argmax())
        raise ContractError(
            f"ball of radius {r} at vertex {v} has {int(ball_sizes[v])} vertices, above g(r)={growth_value}"
        )
    dist = cor_frac_distribution(r, c)
    if not dist.valid:
        raise ContractError(f"distribution for r={r}, c={c} does not sum to 1")
    sampler = LocalisingSampler(g, dist, D)
    total = sum(ws, Fraction(0))
    for draw in range(max_draws):
        loc = sampler.sample(seed + draw)
        wx = sum((ws[v] for v in loc.members), Fraction(0))
        if weight_bound_holds(wx, total, r):
            problem = localising_violation(g, loc.members, r, loc.centres)
            if problem:
                raise AssertionError(f"sampled set failed its certificate: {problem}")
            largest = max((len(c_) for c_ in components(g, loc.members)), default=0)
            if largest > growth_value:
                raise AssertionError("component larger than g(r) despite the ball bound")
            return Fragmentation(loc.members, wx, total, r, growth_value, draw + 1, seed, largest, loc)
    raise StatisticalFailure(f"weight bound not met in {max_draws} draws")
