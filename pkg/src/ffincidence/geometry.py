"""The cone, the zero-sphere and general spheres in F_q^k."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch
from .field import FieldCtx


class Form(str, enum.Enum):
    CONE = "cone"  # -x_1^2 + x_2^2 + ... + x_k^2
    NORM = "norm"  # x_1^2 + ... + x_k^2

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class VarietySpec:
    """Zero set of the diagonal form ``form`` in dimension ``k``."""

    form: Form
    k: int

    def __post_init__(self):
        object.__setattr__(self, "form", Form(self.form))
        if self.k < 2:
            raise DimensionMismatch("dimension k must be >= 2")


@dataclass(frozen=True)
class Sphere:
    """``{x : ||x - center|| = radius}``; ``radius`` is the right-hand side, not its root."""

    center: tuple[int, ...]
    radius: int

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(int(c) for c in self.center))
        if len(self.center) < 2:
            raise DimensionMismatch("sphere dimension must be >= 2")

    @property
    def d(self) -> int:
        return len(self.center)


def sqsign_table(form: Form, k: int, ctx: FieldCtx) -> np.ndarray:
    """(k, q) table whose row j maps t to the j-th signed square of the form."""
    sq = ctx.tables["sq"]
    table = np.tile(sq, (k, 1))
    if Form(form) is Form.CONE:
        table[0] = ctx.tables["neg"][sq]
    return np.ascontiguousarray(table, dtype=np.int32)


def form_values(form: Form, X, ctx: FieldCtx) -> np.ndarray:
    """Evaluate the form on every row of the code array ``X``."""
    X = np.asarray(X, dtype=np.int64)
    if X.ndim == 1:
        X = X[None, :]
    table = sqsign_table(form, X.shape[1], ctx)
    terms = table[np.arange(X.shape[1])[None, :], X]
    return ctx.vsum(terms)


def form_eval(spec: VarietySpec, x: Sequence[int], ctx: FieldCtx) -> int:
    if len(x) != spec.k:
        raise DimensionMismatch(f"vector of length {len(x)} in dimension {spec.k}")
    acc = 0
    for j, xj in enumerate(x):
        term = ctx.mul(xj, xj)
        if spec.form is Form.CONE and j == 0:
            term = ctx.neg(term)
        acc = ctx.add(acc, term)
    return acc


def variety_array(spec: VarietySpec, ctx: FieldCtx) -> np.ndarray:
    """Zero set as an int32 (n, k) array in lexicographic order."""
    allv = ctx.vector_array(spec.k)
    return np.ascontiguousarray(allv[form_values(spec.form, allv, ctx) == 0])


def variety_points(spec: VarietySpec, ctx: FieldCtx) -> frozenset[tuple[int, ...]]:
    return frozenset(map(tuple, variety_array(spec, ctx).tolist()))


def variety_card(spec: VarietySpec, ctx: FieldCtx) -> int:
    return len(variety_array(spec, ctx))


def sphere_array(s: Sphere, ctx: FieldCtx) -> np.ndarray:
    allv = ctx.vector_array(s.d)
    diff = ctx.vsub(allv, np.asarray(s.center, dtype=np.int64)[None, :])
    return np.ascontiguousarray(allv[form_values(Form.NORM, diff, ctx) == s.radius])


def sphere_points(s: Sphere, ctx: FieldCtx) -> frozenset[tuple[int, ...]]:
    return frozenset(map(tuple, sphere_array(s, ctx).tolist()))
