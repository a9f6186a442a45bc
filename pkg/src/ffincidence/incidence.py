"""Point-sphere incidences, the lift into a Cayley graph, and the mixing bound.

A point p of F_q^d lifts to (0, p) in F_q^(d+1).  A sphere ||x - a|| = t lifts
to (r, a) where r is a square root of t (square radii, cone graph) or of -t
(non-square radii, zero-sphere graph, q = 3 mod 4).  Either way an incidence
becomes an edge of the graph, so incidences are bounded by edges among the
lifted set, which the graph's spectrum controls.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import kernels
from .cyclo import CycInt
from .errors import (
    DimensionMismatch,
    PopulationTooSmall,
    UnsupportedCase,
    UnsupportedRadiusClass,
    ZeroDistance,
)
from .field import FieldCtx
from .geometry import Form, Sphere, VarietySpec, sqsign_table, variety_array


class RadiusClass(str, enum.Enum):
    SQUARE = "square"
    NONSQUARE = "nonsquare"
    ARBITRARY = "arbitrary"


@dataclass(frozen=True)
class PointSet:
    d: int
    points: frozenset[tuple[int, ...]]

    def __post_init__(self):
        pts = frozenset(tuple(int(c) for c in x) for x in self.points)
        if any(len(x) != self.d for x in pts):
            raise DimensionMismatch(f"points must have length {self.d}")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def array(self) -> np.ndarray:
        return _rows(self.points, self.d)


@dataclass(frozen=True)
class SphereSet:
    d: int
    spheres: frozenset[Sphere]
    radius_class: RadiusClass = RadiusClass.ARBITRARY
    allow_zero: bool = False

    def __post_init__(self):
        object.__setattr__(self, "spheres", frozenset(self.spheres))
        object.__setattr__(self, "radius_class", RadiusClass(self.radius_class))
        if any(s.d != self.d for s in self.spheres):
            raise DimensionMismatch(f"spheres must live in dimension {self.d}")

    def __len__(self) -> int:
        return len(self.spheres)

    def validate(self, ctx: FieldCtx) -> None:
        """Raise ValueError if some radius is outside the declared class."""
        for s in self.spheres:
            if s.radius not in radii_for_class(ctx, self.radius_class, self.allow_zero):
                raise UnsupportedRadiusClass(f"radius {s.radius} not in class {self.radius_class.value}")

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        ordered = sorted(self.spheres, key=lambda s: (s.center, s.radius))
        centers = _rows([s.center for s in ordered], self.d)
        radii = np.asarray([s.radius for s in ordered], dtype=np.int32)
        return centers, radii


def _rows(vectors: Iterable[Sequence[int]], k: int) -> np.ndarray:
    rows = sorted(tuple(v) for v in vectors)
    if not rows:
        return np.zeros((0, k), dtype=np.int32)
    return np.asarray(rows, dtype=np.int32)


def radii_for_class(ctx: FieldCtx, radius_class: RadiusClass, allow_zero: bool = False) -> list[int]:
    rc = RadiusClass(radius_class)
    if rc is RadiusClass.ARBITRARY:
        return list(range(ctx.q))
    want = 1 if rc is RadiusClass.SQUARE else -1
    radii = [t for t in range(1, ctx.q) if ctx.eta(t) == want]
    if allow_zero and rc is RadiusClass.SQUARE:
        radii.insert(0, 0)
    return radii


# -- counting ----------------------------------------------------------------------


def count_incidences(P: PointSet, S: SphereSet, ctx: FieldCtx) -> int:
    """``#{(p, s) : p in P, s in S, p on s}``."""
    if P.d != S.d:
        raise DimensionMismatch("points and spheres in different dimensions")
    centers, radii = S.arrays()
    t = ctx.tables
    return kernels.pair_form_match(
        P.array(), centers, radii, t["sub"], sqsign_table(Form.NORM, P.d, ctx), t["add"]
    )


def lift(P: PointSet, S: SphereSet, ctx: FieldCtx) -> tuple[frozenset[tuple[int, ...]], Form]:
    """Embed points and spheres in F_q^(d+1) so incidences become graph edges."""
    if P.d != S.d:
        raise DimensionMismatch("points and spheres in different dimensions")
    rc = S.radius_class
    if rc is RadiusClass.SQUARE:
        # ||p - a|| = r^2  <=>  Q((0, p) - (r, a)) = -r^2 + ||p - a|| = 0
        form, shift = Form.CONE, lambda t: t
    elif rc is RadiusClass.NONSQUARE and ctx.q % 4 == 3:
        # -1 is a non-square, so -t is a square; with r^2 = -t,
        # ||(0, p) - (r, a)|| = ||p - a|| - t vanishes exactly on incidences
        form, shift = Form.NORM, ctx.neg
    else:
        raise UnsupportedRadiusClass(
            f"no lift for {rc.value} radii over GF({ctx.q})"
        )
    W = {(0, *p) for p in P.points}
    for s in S.spheres:
        r = ctx.sqrt(shift(s.radius))
        if r is None:
            raise UnsupportedRadiusClass(f"radius {s.radius} is not in class {rc.value}")
        W.add((r, *s.center))
    return frozenset(W), form


# below this many vertices the pairwise loop always wins
_DIRECT_MAX = 64
# sphere draws use a stream disjoint from the point draws of the same trial
_SPHERE_STREAM = 1_000_003


def _edge_count_array(W: np.ndarray, form: Form, ctx: FieldCtx) -> int:
    n, k = W.shape
    t = ctx.tables
    N = ctx.q**k
    E = variety_array(VarietySpec(form, k), ctx) if n > _DIRECT_MAX else None
    if E is None or (n <= N // 2 and n <= len(E)):
        zeros = np.zeros(n, dtype=np.int32)
        return kernels.pair_form_match(W, W, zeros, t["sub"], sqsign_table(form, k, ctx), t["add"])
    if n > N // 2:
        # complement trick: e(W,W) = |W||E| - |W^c||E| + e(W^c,W^c)
        mask = np.ones(N, dtype=bool)
        mask[ctx.vector_index(W)] = False
        Wc = np.ascontiguousarray(ctx.vector_array(k)[mask])
        return (n - len(Wc)) * len(E) + _edge_count_array(Wc, form, ctx)
    ctx.check_budget(N, "membership mask")
    mask = np.zeros(N, dtype=np.uint8)
    mask[ctx.vector_index(W)] = 1
    return kernels.shift_member_count(W, E, t["sub"], mask, ctx.q)


def edge_count(W, form: Form, ctx: FieldCtx, k: int | None = None) -> int:
    """Ordered pairs (x, y) in W x W with x - y on the variety (coincident pairs count)."""
    arr = W if isinstance(W, np.ndarray) else _rows(W, k or (len(next(iter(W))) if W else 0))
    arr = np.ascontiguousarray(arr, dtype=np.int32)
    if len(arr) == 0:
        return 0
    if k is not None and arr.shape[1] != k:
        raise DimensionMismatch(f"vectors of length {arr.shape[1]} in dimension {k}")
    return _edge_count_array(arr, Form(form), ctx)


def edge_count_spectral(W, form: Form, ctx: FieldCtx) -> int:
    """``q^-k sum_m lambda_m |sum_{x in W} chi(m . x)|^2``, evaluated exactly."""
    from .spectrum import formula_array

    arr = _rows(W, len(next(iter(W))))
    k = arr.shape[1]
    M = ctx.vector_array(k)
    lam = formula_array(form, ctx, k, M)
    hist = kernels.trace_hist(ctx.tables["trmul"], M, arr, ctx.p)
    total = CycInt.from_int(ctx.p, 0)
    for h, l in zip(hist, lam):
        total = total + CycInt.from_powers(ctx.p, h).norm_sq() * int(l)
    value = total.as_integer()
    if value is None or value % ctx.q**k:
        raise ArithmeticError("spectral edge sum is not an integer multiple of q^k")
    return value // ctx.q**k


# -- mixing bound ----------------------------------------------------------------------


def mixing_bound_applies(form: Form, k: int, q: int) -> bool:
    form = Form(form)
    if q % 4 != 3:
        return False
    return (form is Form.CONE and k % 4 == 0) or (form is Form.NORM and k % 4 == 2)


class MixingCheck(NamedTuple):
    edges: int
    bound: Fraction
    passed: bool


def mixing_bound_check(W, form: Form, ctx: FieldCtx, k: int | None = None) -> MixingCheck:
    """``e(W, W) <= |W|^2 / q + q^((k-2)/2) |W|`` in exact arithmetic."""
    if k is None:
        k = W.shape[1] if isinstance(W, np.ndarray) else len(next(iter(W)))
    if not mixing_bound_applies(form, k, ctx.q):
        raise UnsupportedCase(f"mixing bound not available for {Form(form).value}, k={k}, q={ctx.q}")
    n = len(W)
    e = edge_count(W, form, ctx, k)
    bound = Fraction(n * n, ctx.q) + ctx.q ** ((k - 2) // 2) * n
    return MixingCheck(e, bound, ctx.q * e <= n * n + ctx.q ** (k // 2) * n)


# -- reports ---------------------------------------------------------------------------


def _le_sqrt(a: int, c: int, s: int) -> bool:
    """Exact test of ``a <= c * sqrt(s)`` for c, s >= 0."""
    return a <= 0 or a * a <= c * c * s


@dataclass
class IncidenceReport:
    n_points: int
    n_spheres: int
    N: int
    incidences: int
    edges: int | None
    lift_form: str | None
    mixing_bound_applies: bool
    bounds: dict[str, float]
    ratios: dict[str, float]
    assertions: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(a["pass"] for a in self.assertions)


def incidence_report(P: PointSet, S: SphereSet, ctx: FieldCtx) -> IncidenceReport:
    """Count incidences and evaluate every bound; assert the ones with explicit constants."""
    q, d = ctx.q, P.d
    nP, nS = len(P), len(S)
    N = max(nP, nS)
    I = count_incidences(P, S, ctx)
    PS = nP * nS
    assertions = []

    # |I - PS/q| <= q^(d/2) sqrt(PS), squared and cleared of denominators
    dev = q * I - PS
    assertions.append({
        "name": "deviation_bound",
        "lhs": dev * dev,
        "rhs": q ** (d + 2) * PS,
        "pass": dev * dev <= q ** (d + 2) * PS,
    })

    edges = form = None
    applies = False
    if S.radius_class is not RadiusClass.ARBITRARY and (
        S.radius_class is RadiusClass.SQUARE or q % 4 == 3
    ):
        W, form = lift(P, S, ctx)
        edges = edge_count(W, form, ctx, d + 1)
        applies = mixing_bound_applies(form, d + 1, q)
        assertions.append({"name": "incidences_within_edges", "lhs": I, "rhs": edges, "pass": I <= edges})
        # I <= 4N^2/q + 2 q^((d-1)/2) N, times q: qI - 4N^2 <= 2N sqrt(q^(d+1))
        assertions.append({
            "name": "lifted_mixing_bound",
            "lhs": q * I,
            "rhs": _exact_str(4 * N * N, 2 * N, q ** (d + 1)),
            "pass": _le_sqrt(q * I - 4 * N * N, 2 * N, q ** (d + 1)),
            "proven": applies,
        })
        if applies:
            n = len(W)
            k = d + 1
            assertions.append({
                "name": "edge_mixing_bound",
                "lhs": q * edges,
                "rhs": n * n + q ** (k // 2) * n,
                "pass": q * edges <= n * n + q ** (k // 2) * n,
            })

    root_ps = math.sqrt(PS)
    bounds = {
        "deviation_upper": PS / q + q ** (d / 2) * root_ps,
        "deviation_lower": PS / q - q ** (d / 2) * root_ps,
        "lifted_upper": 4 * N * N / q + 2 * q ** ((d - 1) / 2) * N,
        "restriction_upper": PS / q + q ** ((d - 1) / 2) * root_ps,
        "shape_upper": N * N / q + q ** ((d - 1) / 2) * N,
    }
    ratios = {
        "deviation": abs(I - PS / q) / (q ** (d / 2) * root_ps) if PS else 0.0,
        "restriction": abs(I - PS / q) / (q ** ((d - 1) / 2) * root_ps) if PS else 0.0,
        "shape": I / bounds["shape_upper"] if N else 0.0,
    }
    return IncidenceReport(
        n_points=nP,
        n_spheres=nS,
        N=N,
        incidences=I,
        edges=edges,
        lift_form=form.value if form is not None else None,
        mixing_bound_applies=applies,
        bounds=bounds,
        ratios=ratios,
        assertions=assertions,
    )


def _exact_str(a: int, c: int, s: int) -> str:
    """Render ``a + c*sqrt(s)`` exactly, simplifying perfect squares."""
    r = math.isqrt(s)
    if r * r == s:
        return str(a + c * r)
    return f"{a} + {c}*sqrt({s})"


# -- distances ---------------------------------------------------------------------------


def distance_histogram(E: PointSet, ctx: FieldCtx) -> np.ndarray:
    """Ordered-pair counts of ``||x - y|| = t`` for every t (index = code of t)."""
    X = E.array()
    t = ctx.tables
    return kernels.pair_form_hist(X, X, t["sub"], sqsign_table(Form.NORM, E.d, ctx), t["add"])


def distance_count(E: PointSet, t: int, ctx: FieldCtx) -> int:
    """U(t): ordered pairs of E at distance t != 0."""
    if t == 0:
        raise ZeroDistance("distance must be nonzero")
    return int(distance_histogram(E, ctx)[t])


def distance_bound_holds(U: int, n: int, d: int, q: int) -> bool:
    """``U <= n^2/q + 2 q^((d-1)/2) n`` exactly."""
    return _le_sqrt(q * U - n * n, 2 * n, q ** (d + 1))


def distance_report(E: PointSet, ctx: FieldCtx) -> dict:
    hist = distance_histogram(E, ctx)
    n, q, d = len(E), ctx.q, E.d
    violations = [t for t in range(1, q) if not distance_bound_holds(int(hist[t]), n, d, q)]
    return {
        "size": n,
        "counts": [int(c) for c in hist],
        "max_count": int(hist[1:].max()) if q > 1 else 0,
        "upper_bound": n * n / q + 2 * q ** ((d - 1) / 2) * n,
        "violations": violations,
        "pass": not violations,
    }


# -- sampling ------------------------------------------------------------------------------


def _decode(idx: np.ndarray, q: int, d: int) -> np.ndarray:
    cols = [(idx // q ** (d - 1 - j)) % q for j in range(d)]
    return np.stack(cols, axis=1) if len(idx) else np.zeros((0, d), dtype=np.int64)


def _sample(population: int, n: int, seed: int) -> np.ndarray:
    if n > population:
        raise PopulationTooSmall(f"cannot draw {n} from {population}")
    return np.random.default_rng(seed).permutation(population)[:n]


def _point_rows(ctx: FieldCtx, d: int, n: int, seed: int) -> np.ndarray:
    ctx.check_budget(ctx.q**d, "point population")
    idx = np.sort(_sample(ctx.q**d, n, seed))
    return np.ascontiguousarray(_decode(idx, ctx.q, d), dtype=np.int32)


def gen_points(ctx: FieldCtx, d: int, n: int, seed: int) -> PointSet:
    """``n`` distinct uniform points of F_q^d."""
    return PointSet(d, frozenset(map(tuple, _point_rows(ctx, d, n, seed).tolist())))


def gen_spheres(
    ctx: FieldCtx, d: int, n: int, radius_class: RadiusClass, seed: int, allow_zero: bool = False
) -> SphereSet:
    """``n`` distinct spheres, centre uniform in F_q^d and radius uniform in the class."""
    radii = radii_for_class(ctx, radius_class, allow_zero)
    ctx.check_budget(ctx.q**d * len(radii), "sphere population")
    idx = _sample(ctx.q**d * len(radii), n, seed)
    centers = _decode(idx // len(radii), ctx.q, d).tolist()
    spheres = frozenset(
        Sphere(tuple(c), radii[i]) for c, i in zip(centers, (idx % len(radii)).tolist())
    )
    return SphereSet(d, spheres, RadiusClass(radius_class), allow_zero)


# -- randomized suites -----------------------------------------------------------------------


def _run_trials(fn, trials: int, seed: int, workers: int) -> list:
    seeds = [seed + i for i in range(trials)]
    if workers > 1 and trials > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(fn, seeds))
    return [fn(s) for s in seeds]


def mixing_suite(
    form: Form, ctx: FieldCtx, k: int, trials: int, size: int, seed: int = 0, workers: int = 1
) -> list[dict]:
    """Mixing bound on ``trials`` random vertex sets of the given size."""
    def one(s: int) -> dict:
        W = _point_rows(ctx, k, size, s)
        e, bound, ok = mixing_bound_check(W, form, ctx, k)
        return {"seed": s, "size": size, "edges": e, "bound": bound, "pass": ok}

    return _run_trials(one, trials, seed, workers)


def incidence_suite(
    ctx: FieldCtx,
    d: int,
    radius_class: RadiusClass,
    n_points: int,
    n_spheres: int,
    trials: int,
    seed: int = 0,
    workers: int = 1,
) -> list[IncidenceReport]:
    def one(s: int) -> IncidenceReport:
        P = gen_points(ctx, d, n_points, s)
        S = gen_spheres(ctx, d, n_spheres, radius_class, s + _SPHERE_STREAM)
        return incidence_report(P, S, ctx)

    return _run_trials(one, trials, seed, workers)


def distance_suite(
    ctx: FieldCtx, d: int, size: int, trials: int, seed: int = 0, workers: int = 1
) -> list[dict]:
    def one(s: int) -> dict:
        rep = distance_report(gen_points(ctx, d, size, s), ctx)
        rep["seed"] = s
        return rep

    return _run_trials(one, trials, seed, workers)
