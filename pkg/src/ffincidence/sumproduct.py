"""Sumsets, sums of squares, square-sum tuple counts and additive energy.

Scalar sets are Python sets of field codes.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import BudgetExceeded, DimensionMismatch, PopulationTooSmall, UnsupportedCase
from .field import FieldCtx


def sumset(A: set[int], B: set[int], ctx: FieldCtx) -> set[int]:
    return {ctx.add(a, b) for a in A for b in B}


def square_set(A: set[int], ctx: FieldCtx) -> set[int]:
    return {ctx.mul(a, a) for a in A}


def d_a_squared(A: set[int], d: int, ctx: FieldCtx) -> set[int]:
    """``dA^2``: all sums of ``d`` elements of A^2."""
    if d < 1:
        raise DimensionMismatch("d must be >= 1")
    sq = square_set(A, ctx)
    out = sq
    for _ in range(d - 1):
        out = sumset(out, sq, ctx)
    return out


def square_sum_histogram(A: set[int], n: int, ctx: FieldCtx) -> Counter:
    """Multiplicity of each value of ``x_1^2 + ... + x_n^2`` over A^n.

    Built by convolving per-coordinate histograms, so the cost is
    ``n * q * |A|`` rather than ``|A|^n``.
    """
    hist = Counter({0: 1})
    sq = Counter(ctx.mul(a, a) for a in A)
    for _ in range(n):
        nxt: Counter = Counter()
        for s, c in hist.items():
            for v, m in sq.items():
                nxt[ctx.add(s, v)] += c * m
        hist = nxt
    return hist


def square_sum_tuples(A: set[int], d: int, ctx: FieldCtx) -> tuple[int, int, int]:
    """Counts of tuples in A^d whose square sum is a nonzero square, a non-square, zero."""
    counts = {1: 0, -1: 0, 0: 0}
    for value, mult in square_sum_histogram(A, d, ctx).items():
        counts[ctx.eta(value)] += mult
    return counts[1], counts[-1], counts[0]


def square_sum_tuples_direct(A: set[int], d: int, ctx: FieldCtx, budget: int = 1 << 22) -> tuple[int, int, int]:
    """Same classification by visiting every tuple."""
    if len(A) ** d > budget:
        raise BudgetExceeded(f"|A|^d = {len(A) ** d} tuples exceeds budget {budget}")
    counts = {1: 0, -1: 0, 0: 0}
    for xs in itertools.product(sorted(A), repeat=d):
        s = 0
        for x in xs:
            s = ctx.add(s, ctx.mul(x, x))
        counts[ctx.eta(s)] += 1
    return counts[1], counts[-1], counts[0]


def energy_plus(A: set[int], d: int, ctx: FieldCtx) -> int:
    """Additive energy of the multiset of (d-1)-fold square sums: ``sum_b m(b)^2``."""
    if d < 2:
        raise DimensionMismatch("d must be >= 2")
    return sum(m * m for m in square_sum_histogram(A, d - 1, ctx).values())


def energy_plus_direct(A: set[int], d: int, ctx: FieldCtx, budget: int = 1 << 22) -> int:
    """Energy by enumerating all 2(d-1)-tuples."""
    n = d - 1
    if len(A) ** (2 * n) > budget:
        raise BudgetExceeded(f"|A|^{2 * n} exceeds budget {budget}")
    sq = {a: ctx.mul(a, a) for a in A}

    def sqsum(xs):
        s = 0
        for x in xs:
            s = ctx.add(s, sq[x])
        return s

    elems = sorted(A)
    return sum(
        1
        for xs in itertools.product(elems, repeat=n)
        for ys in itertools.product(elems, repeat=n)
        if sqsum(xs) == sqsum(ys)
    )


@dataclass
class SPTrial:
    seed: int
    A: list[int]
    size_A: int
    size_sumset: int
    size_dA2: int
    square_tuples: int
    nonsquare_tuples: int
    zero_tuples: int
    energy: int
    target: float
    ratio: float
    energy_ratio: float
    identity_ok: bool
    debug: dict | None = None


@dataclass
class SPReport:
    q: int
    d: int
    size_A: int
    seed: int
    trials: int
    rows: list[SPTrial] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.identity_ok for r in self.rows)

    def to_dict(self) -> dict:
        return asdict(self)


def _solution_count(A: set[int], d: int, ctx: FieldCtx, sums: set[int], dA2: set[int]) -> dict:
    """Count solutions of ``sum_i (x_i - y_i)^2 = t`` over x in (A+A)^d, y in A^d,
    t a nonzero square in dA^2, grouped by a partition of those radii."""
    radii = sorted(t for t in dA2 if ctx.eta(t) == 1)
    # multiplicity of each value of sum_i (x_i - y_i)^2 over the product sets
    diff_sq = Counter(ctx.mul(ctx.sub(x, y), ctx.sub(x, y)) for x in sums for y in A)
    hist = Counter({0: 1})
    for _ in range(d):
        nxt: Counter = Counter()
        for s, c in hist.items():
            for v, m in diff_sq.items():
                nxt[ctx.add(s, v)] += c * m
        hist = nxt
    chunk = max(1, -(-len(sums) ** d // len(A) ** d))
    parts = [radii[i:i + chunk] for i in range(0, len(radii), chunk)]
    per_part = [sum(hist[t] for t in part) for part in parts]
    return {
        "solutions": sum(per_part),
        "radius_parts": len(parts),
        "per_part": per_part,
    }


def sp_experiment(
    ctx: FieldCtx,
    d: int,
    size_A: int,
    trials: int,
    seed: int = 0,
    *,
    require_q3: bool = True,
    debug: bool = False,
) -> SPReport:
    """Sample A uniformly ``trials`` times and record sumset and square-sum statistics.

    Trial ``i`` draws A with seed ``seed + i``.  Nothing here asserts the
    growth inequality (its constant is unspecified); only the exact tuple
    identity is checked per trial.
    """
    if require_q3 and ctx.q % 4 != 3:
        raise UnsupportedCase("q must be 3 mod 4 (pass require_q3=False to override)")
    if size_A > ctx.q:
        raise PopulationTooSmall(f"|A| = {size_A} exceeds q = {ctx.q}")
    report = SPReport(ctx.q, d, size_A, seed, trials)
    target = size_A**d / ctx.q ** ((d - 1) / 2)
    for i in range(trials):
        s = seed + i
        A = {int(a) for a in np.random.default_rng(s).permutation(ctx.q)[:size_A]}
        sums = sumset(A, A, ctx)
        dA2 = d_a_squared(A, d, ctx)
        sq, nsq, zero = square_sum_tuples(A, d, ctx)
        energy = energy_plus(A, d, ctx)
        row = SPTrial(
            seed=s,
            A=sorted(A),
            size_A=len(A),
            size_sumset=len(sums),
            size_dA2=len(dA2),
            square_tuples=sq,
            nonsquare_tuples=nsq,
            zero_tuples=zero,
            energy=energy,
            target=target,
            ratio=max(len(sums), len(dA2)) / target,
            energy_ratio=energy / len(A) ** (2 * d - 3),
            identity_ok=(sq + nsq + zero == len(A) ** d and energy <= len(A) ** (2 * d - 2)),
        )
        if debug:
            sol = _solution_count(A, d, ctx, sums, dA2)
            # each square-sum tuple a and each y in A^d gives the solution x = y + a
            sol["lower_bound_ok"] = sol["solutions"] >= sq * len(A) ** d
            row.debug = sol
        report.rows.append(row)
    return report
