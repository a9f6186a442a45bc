"""Cayley-graph spectra of the cone and zero-sphere graphs.

The graph on F_q^k joins x and y when x - y lies in the variety V (the cone
or the zero-sphere).  Its eigenvalues, indexed by frequencies m, are the
unnormalised character sums ``lambda_m = sum_{x in V} chi(-m . x)``.  This
module evaluates them two ways, by the closed forms and by brute force, and
compares the two exactly.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import kernels
from .cyclo import CycInt, char_sum, chi, gauss_power
from .errors import BudgetExceeded, DimensionMismatch, UnsupportedCase
from .field import FieldCtx
from .geometry import Form, VarietySpec, form_values, variety_array

DEFAULT_CHAR_BUDGET = 1 << 31
_BLOCK_FREQS = 2048


@dataclass(frozen=True)
class EigenvalueCase:
    form: Form
    k_mod4: int
    q_mod4: int
    case: str    # which closed form applies to (form, k, q)
    branch: str  # which row of it applies to m
    is_zero: bool


@dataclass
class SpectrumReport:
    form: str
    p: int
    ell: int
    k: int
    q: int
    case: str
    card: int
    branch_counts: dict[str, int]
    branch_values: dict[str, int]
    mismatches: list[dict]
    trace_sum: int
    trace_sq_sum: int
    trace_ok: bool
    plancherel_ok: bool
    max_nontrivial: int
    positive_structure: bool | None
    elapsed_ms: float = field(default=0.0, compare=False)

    @property
    def passed(self) -> bool:
        return (
            not self.mismatches
            and self.trace_ok
            and self.plancherel_ok
            and self.positive_structure is not False
        )


# -- closed forms ------------------------------------------------------------------


def spectrum_case(form: Form, ctx: FieldCtx, k: int) -> str:
    """Name of the closed form that applies to (form, k, q)."""
    form = Form(form)
    if k < 2:
        raise UnsupportedCase(f"k={k} < 2")
    q4 = ctx.q % 4
    if k % 2:
        return f"{form.value}-odd"
    if form is Form.CONE:
        return "cone-sparse" if (k % 4 == 0 and q4 == 3) else "cone-dense"
    return "norm-sparse" if (k % 4 == 2 and q4 == 3) else "norm-dense"


def branch_values(form: Form, ctx: FieldCtx, k: int) -> dict[str, int]:
    """Eigenvalue for each branch label of the applicable closed form.

    Even k: ``zero`` (m = 0), ``in`` (m != 0 on the variety), ``out``.
    Odd k: ``zero``, then ``eta=0``, ``eta=+1``, ``eta=-1`` by the quadratic
    character of Q(m) for the cone or of -||m|| for the zero-sphere.
    """
    case = spectrum_case(form, ctx, k)
    q = ctx.q
    top = q ** (k - 1)
    if k % 2 == 0:
        half, low = q ** (k // 2), q ** ((k - 2) // 2)
        if case.endswith("sparse"):
            # the one positive nontrivial eigenvalue is q^((k-2)/2)
            return {"zero": top - half + low, "in": -half + low, "out": low}
        return {"zero": top + half - low, "in": half - low, "out": -low}
    g = gauss_power(ctx, k + 1)  # G_1^(k+1) = +-q^((k+1)/2), an integer
    assert g % q == 0
    g //= q
    return {"zero": top, "eta=0": 0, "eta=+1": g, "eta=-1": -g}


def _branch_labels(form: Form, ctx: FieldCtx, k: int, M: np.ndarray) -> np.ndarray:
    vals = form_values(form, M, ctx)
    is_zero = ~np.any(M, axis=1)
    labels = np.empty(len(M), dtype=object)
    if k % 2 == 0:
        labels[:] = np.where(vals == 0, "in", "out")
    else:
        if Form(form) is Form.NORM:
            vals = ctx.vneg(vals)
        eta = ctx.veta(vals)
        labels[:] = np.choose(eta.astype(np.int64) + 1, ["eta=-1", "eta=0", "eta=+1"])
    labels[is_zero] = "zero"
    return labels


def classify(form: Form, ctx: FieldCtx, k: int, m: Sequence[int]) -> EigenvalueCase:
    if len(m) != k:
        raise DimensionMismatch(f"frequency of length {len(m)} in dimension {k}")
    label = _branch_labels(form, ctx, k, np.asarray([m], dtype=np.int64))[0]
    return EigenvalueCase(
        Form(form), k % 4, ctx.q % 4, spectrum_case(form, ctx, k), label, label == "zero"
    )


def eigenvalue_formula(form: Form, ctx: FieldCtx, k: int, m: Sequence[int]) -> int:
    """Closed-form eigenvalue ``lambda_m`` as an exact integer."""
    case = classify(form, ctx, k, m)
    values = branch_values(form, ctx, k)
    if case.branch not in values:
        raise UnsupportedCase(f"no closed form for branch {case.branch}")
    return values[case.branch]


def formula_array(form: Form, ctx: FieldCtx, k: int, M: np.ndarray) -> np.ndarray:
    """Closed-form eigenvalues for every row of ``M`` (int64)."""
    values = branch_values(form, ctx, k)
    labels = _branch_labels(form, ctx, k, M)
    out = np.empty(len(M), dtype=np.int64)
    for name, v in values.items():
        out[labels == name] = v
    return out


# -- brute force ----------------------------------------------------------------


def _as_array(E, k: int | None = None) -> np.ndarray:
    if isinstance(E, np.ndarray):
        return np.ascontiguousarray(E, dtype=np.int32)
    rows = sorted(E)
    if not rows:
        return np.zeros((0, k or 0), dtype=np.int32)
    return np.asarray(rows, dtype=np.int32)


def indicator_fourier(E, m: Sequence[int], ctx: FieldCtx) -> CycInt:
    """``sum_{x in E} chi(-m . x)``, i.e. q^k times the Fourier coefficient of 1_E."""
    X = _as_array(E, len(m))
    if len(X) and X.shape[1] != len(m):
        raise DimensionMismatch("frequency and set live in different dimensions")
    hist = kernels.trace_hist(ctx.tables["trmul"], np.asarray([m]), X, ctx.p)[0]
    return _negated_char_value(ctx.p, hist)


def _negated_char_value(p: int, hist) -> CycInt:
    # hist[t] counts terms with trace t; they contribute zeta^(-t)
    return CycInt.from_powers(p, [hist[(-e) % p] for e in range(p)])


def _oracle_block(ctx: FieldCtx, E: np.ndarray, M: np.ndarray):
    hist = kernels.trace_hist(ctx.tables["trmul"], M, E, ctx.p)
    # sum_t h_t zeta^-t is the integer h_0 - h_1 exactly when h_1 = ... = h_{p-1}
    rational = np.all(hist[:, 1:] == hist[:, 1:2], axis=1)
    return hist, rational, hist[:, 0] - hist[:, 1]


def spectrum_verify(
    form: Form,
    ctx: FieldCtx,
    k: int,
    *,
    workers: int = 1,
    budget: int = DEFAULT_CHAR_BUDGET,
    formula=None,
) -> SpectrumReport:
    """Compare the closed forms with brute force at every frequency in F_q^k.

    ``formula`` overrides the closed-form evaluator (signature of
    :func:`formula_array`); it exists so a deliberately wrong formula can be
    injected in tests.
    """
    t0 = time.perf_counter()
    form = Form(form)
    formula = formula or formula_array
    spec = VarietySpec(form, k)
    E = variety_array(spec, ctx)
    n_freq = ctx.q**k
    cost = n_freq * len(E)
    if cost > budget:
        raise BudgetExceeded(f"{cost} character evaluations exceed budget {budget}")
    M = ctx.vector_array(k)
    blocks = [M[lo:lo + _BLOCK_FREQS] for lo in range(0, n_freq, _BLOCK_FREQS)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda b: _oracle_block(ctx, E, b), blocks))
    else:
        parts = [_oracle_block(ctx, E, b) for b in blocks]
    hist = np.concatenate([h for h, _, _ in parts])
    rational = np.concatenate([r for _, r, _ in parts])
    oracle = np.concatenate([v for _, _, v in parts])

    expected = formula(form, ctx, k, M)
    bad = np.nonzero(~rational | (oracle != expected))[0]
    mismatches = []
    for i in bad:  # already in lexicographic order of m
        value = _negated_char_value(ctx.p, hist[i])
        o = value.as_integer()
        mismatches.append({
            "m": [int(c) for c in M[i]],
            "formula": int(expected[i]),
            "oracle": o if o is not None else list(value.coeffs),
        })

    labels = _branch_labels(form, ctx, k, M)
    names, counts = np.unique(labels.astype(str), return_counts=True)
    branch_counts = {str(n): int(c) for n, c in zip(names, counts)}
    if "zero" in branch_counts:
        # the zero frequency belongs to the on-variety row
        zero_home = "in" if k % 2 == 0 else "eta=0"
        branch_counts[zero_home] = branch_counts.get(zero_home, 0) + branch_counts.pop("zero")

    lam = [int(v) for v in oracle]
    trace_sum = sum(lam)
    trace_sq_sum = sum(v * v for v in lam)
    nontrivial = lam[1:]  # M[0] is the zero vector
    max_nontrivial = max(nontrivial)
    positive_structure = None
    case = spectrum_case(form, ctx, k)
    if case.endswith("sparse"):
        target = ctx.q ** ((k - 2) // 2)
        positive_structure = all(v == target for v in nontrivial if v > 0)

    return SpectrumReport(
        form=form.value,
        p=ctx.p,
        ell=ctx.ell,
        k=k,
        q=ctx.q,
        case=case,
        card=len(E),
        branch_counts=branch_counts,
        branch_values=branch_values(form, ctx, k),
        mismatches=mismatches,
        trace_sum=trace_sum,
        trace_sq_sum=trace_sq_sum,
        trace_ok=trace_sum == n_freq,
        plancherel_ok=trace_sq_sum == n_freq * len(E),
        max_nontrivial=max_nontrivial,
        positive_structure=positive_structure,
        elapsed_ms=(time.perf_counter() - t0) * 1000,
    )


# -- structural identities ------------------------------------------------------------


def plancherel_check(f: Mapping[Sequence[int], CycInt | int], ctx: FieldCtx, k: int | None = None) -> bool:
    """Exact Plancherel identity for a Z[zeta_p]-valued function on F_q^k.

    With ``F(m) = sum_x chi(-m . x) f(x)`` (q^k times the Fourier transform),
    checks ``sum_m |F(m)|^2 == q^k * sum_x |f(x)|^2``.  ``f`` maps vectors to
    values; absent vectors are zero.
    """
    p = ctx.p
    items = [(tuple(x), v if isinstance(v, CycInt) else CycInt.from_int(p, int(v))) for x, v in f.items()]
    items = [(x, v) for x, v in items if v]
    if k is None:
        if not items:
            return True
        k = len(items[0][0])
    rhs = sum((v.norm_sq() for _, v in items), CycInt.from_int(p, 0)) * ctx.q**k
    if not items:
        return rhs == 0
    X = np.asarray([x for x, _ in items], dtype=np.int64)
    coeffs = np.array([list(v.coeffs) + [0] for _, v in items], dtype=object)
    trmul = ctx.tables["trmul"]
    lhs = CycInt.from_int(p, 0)
    for m in ctx.vector_array(k):
        t = trmul[m[None, :], X].sum(axis=1) % p
        full = [0] * p
        for shift in np.unique(t):
            block = coeffs[t == shift].sum(axis=0)
            # f(x) zeta^(-shift): rotate exponents down by `shift`
            for e in range(p):
                full[(e - shift) % p] += block[e]
        F = CycInt.from_powers(p, full)
        lhs = lhs + F.norm_sq()
    return lhs == rhs


def eigenvector_check(
    form: Form, ctx: FieldCtx, k: int, m: Sequence[int], sample_vertices: Iterable[Sequence[int]]
) -> bool:
    """Check ``(A v_m)(x) == lambda_m v_m(x)`` for ``v_m(x) = chi(m . x)`` exactly."""
    E = variety_array(VarietySpec(form, k), ctx).astype(np.int64)
    lam = eigenvalue_formula(form, ctx, k, m)
    m_arr = np.asarray(m, dtype=np.int64)
    for x in sample_vertices:
        diff = ctx.vsub(np.asarray(x, dtype=np.int64)[None, :], E)
        row = char_sum(ctx, ctx.vsum(ctx.vmul(m_arr[None, :], diff)))
        if row != chi(ctx.dot(m, x), ctx) * lam:
            return False
    return True
