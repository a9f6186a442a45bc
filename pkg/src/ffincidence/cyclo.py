"""Exact cyclotomic integers in Z[zeta_p], additive characters and Gauss sums.

Every character sum over a field of characteristic ``p`` is an integer
combination of ``p``-th roots of unity, so it is carried exactly as a
:class:`CycInt`.  Floats appear only in :meth:`CycInt.to_complex` and
:meth:`ExactRadical.to_complex`.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import EvenCharacteristic, NonPrime, RootOrderMismatch, ZeroParameter
from .field import FieldCtx, is_prime


class CycInt:
    """An element of Z[zeta_p] in the basis 1, zeta, ..., zeta^(p-2).

    ``zeta^(p-1)`` is always rewritten as ``-(1 + zeta + ... + zeta^(p-2))``,
    so two values are equal iff their coefficient tuples are equal.
    """

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Sequence[int]):
        if len(coeffs) != p - 1:
            raise ValueError(f"expected {p - 1} coefficients, got {len(coeffs)}")
        self.p = p
        self.coeffs = tuple(int(c) for c in coeffs)

    @classmethod
    def from_powers(cls, p: int, counts: Iterable[int]) -> CycInt:
        """Reduce ``sum(counts[j] * zeta^j)``; exponents are taken mod p."""
        full = [0] * p
        for j, c in enumerate(counts):
            full[j % p] += int(c)
        top = full[p - 1]
        return cls(p, [full[j] - top for j in range(p - 1)])

    @classmethod
    def from_int(cls, p: int, n: int) -> CycInt:
        return cls(p, [n] + [0] * (p - 2))

    @classmethod
    def zeta(cls, p: int, j: int = 1) -> CycInt:
        full = [0] * p
        full[j % p] = 1
        return cls.from_powers(p, full)

    def _coerce(self, other) -> CycInt:
        if isinstance(other, CycInt):
            if other.p != self.p:
                raise RootOrderMismatch(f"zeta_{self.p} vs zeta_{other.p}")
            return other
        if isinstance(other, (int, np.integer)):
            return CycInt.from_int(self.p, int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycInt(self.p, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> CycInt:
        return CycInt(self.p, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycInt(self.p, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            n = int(other)
            return CycInt(self.p, [n * a for a in self.coeffs])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.p
        out = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        out[(i + j) % p] += a * b
        return CycInt.from_powers(p, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> CycInt:
        if e < 0:
            raise ValueError("negative powers are not in Z[zeta]")
        result, base = CycInt.from_int(self.p, 1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> CycInt:
        """Complex conjugate: zeta -> zeta^-1."""
        p = self.p
        full = [0] * p
        for j, c in enumerate(self.coeffs):
            full[(-j) % p] += c
        return CycInt.from_powers(p, full)

    def norm_sq(self) -> CycInt:
        """``x * conj(x)``, i.e. ``|x|^2`` as an element of Z[zeta]."""
        return self * self.conj()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, np.integer)):
            return self.as_integer() == int(other)
        if isinstance(other, CycInt):
            return self.p == other.p and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def as_integer(self) -> int | None:
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.p)
        return sum(c * z**j for j, c in enumerate(self.coeffs))

    def __repr__(self) -> str:
        return f"CycInt({self.p}, {list(self.coeffs)})"


def cyc_ops(op: str, x: CycInt, y: CycInt | None = None):
    """Name-dispatched access to the CycInt operations."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "conj":
        return x.conj()
    if op == "eq":
        if y is not None and x.p != y.p:
            raise RootOrderMismatch(f"zeta_{x.p} vs zeta_{y.p}")
        return x == y
    if op == "to_complex":
        return x.to_complex()
    if op == "as_integer":
        return x.as_integer()
    raise ValueError(f"unknown op {op!r}")


@dataclass(frozen=True)
class ExactRadical:
    """``sign * i**i_power * q**(half_exponent / 2)``, with ``i_power`` in {0, 1}."""

    q: int
    sign: int
    i_power: int
    half_exponent: int

    def __post_init__(self):
        s, ip = self.sign, self.i_power % 4
        if ip >= 2:
            s, ip = -s, ip - 2
        object.__setattr__(self, "sign", 1 if s > 0 else -1)
        object.__setattr__(self, "i_power", ip)

    def __mul__(self, other: ExactRadical) -> ExactRadical:
        if self.q != other.q:
            raise ValueError("radicals over different q")
        return ExactRadical(
            self.q,
            self.sign * other.sign,
            self.i_power + other.i_power,
            self.half_exponent + other.half_exponent,
        )

    def __pow__(self, e: int) -> ExactRadical:
        if e < 0:
            raise ValueError("negative exponent")
        return ExactRadical(
            self.q, self.sign**e, self.i_power * e, self.half_exponent * e
        )

    def conj(self) -> ExactRadical:
        return ExactRadical(self.q, self.sign, -self.i_power, self.half_exponent)

    def as_integer(self) -> int | None:
        if self.i_power:
            return None
        if self.half_exponent % 2 == 0:
            return self.sign * self.q ** (self.half_exponent // 2)
        r = math.isqrt(self.q)
        return self.sign * r**self.half_exponent if r * r == self.q else None

    def to_complex(self) -> complex:
        return self.sign * (1j**self.i_power) * self.q ** (self.half_exponent / 2)

    def __str__(self) -> str:
        s = "-" if self.sign < 0 else "+"
        i = "i*" if self.i_power else ""
        return f"{s}{i}{self.q}^({self.half_exponent}/2)"


# -- characters and Gauss sums -----------------------------------------------------


def char_sum(ctx: FieldCtx, values, weights=None) -> CycInt:
    """``sum_v w_v * chi(v)`` for an array of field codes, exactly."""
    values = np.asarray(values, dtype=np.int64).ravel()
    tr = ctx.vtrace(values)
    if weights is None:
        counts = np.bincount(tr, minlength=ctx.p)
    else:
        counts = np.zeros(ctx.p, dtype=np.int64)
        np.add.at(counts, tr, np.asarray(weights, dtype=np.int64).ravel())
    return CycInt.from_powers(ctx.p, counts)


def chi(a: int, ctx: FieldCtx) -> CycInt:
    """The canonical additive character ``zeta_p ** Tr(a)``."""
    return CycInt.zeta(ctx.p, ctx.trace(a))


def gauss_direct(a: int, ctx: FieldCtx) -> CycInt:
    """``G_a = sum over s != 0 of eta(s) chi(a s)``, summed term by term."""
    if a == 0:
        raise ZeroParameter("Gauss sum parameter must be nonzero")
    if not ctx.has_tables:
        acc = CycInt.from_int(ctx.p, 0)
        for s in range(1, ctx.q):
            acc = acc + chi(ctx.mul(a, s), ctx) * ctx.eta(s)
        return acc
    s = np.arange(1, ctx.q)
    return char_sum(ctx, ctx.vmul(a, s), ctx.veta(s))


def gauss_explicit(p: int, ell: int) -> ExactRadical:
    """Closed form of ``G_1`` over GF(p^ell)."""
    if p == 2:
        raise EvenCharacteristic("p must be odd")
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    sign = -1 if (ell - 1) % 2 else 1
    i_power = 0 if p % 4 == 1 else ell
    return ExactRadical(p**ell, sign, i_power, 1)


def gauss_power(ctx: FieldCtx, e: int) -> int:
    """``G_1 ** e`` for even ``e`` as an exact integer, from the closed form."""
    if e % 2:
        raise ValueError("odd powers of G_1 are not rational")
    value = (gauss_explicit(ctx.p, ctx.ell) ** e).as_integer()
    assert value is not None
    return value


def complete_square_sum(a: int, b: int, ctx: FieldCtx) -> tuple[CycInt, CycInt, bool]:
    """Direct ``sum_s chi(a s^2 + b s)`` against ``eta(a) G_1 chi(b^2 / (-4a))``."""
    if a == 0:
        raise ZeroParameter("quadratic coefficient must be nonzero")
    s = np.arange(ctx.q)
    arg = ctx.vadd(ctx.vmul(a, ctx.vsq(s)), ctx.vmul(b, s))
    lhs = char_sum(ctx, arg)
    four_a = ctx.mul(ctx.from_int(-4), a)
    shift = ctx.div(ctx.mul(b, b), four_a)
    rhs = gauss_direct(1, ctx) * ctx.eta(a) * chi(shift, ctx)
    return lhs, rhs, lhs == rhs


def complete_square_failures(a: int, ctx: FieldCtx) -> list[int]:
    """Every b for which :func:`complete_square_sum` fails, checked for all b at once.

    Both sides are compared as exponent-count vectors reduced to the
    ``1, zeta, ..., zeta^(p-2)`` basis, so the test is exact.
    """
    if a == 0:
        raise ZeroParameter("quadratic coefficient must be nonzero")
    if not ctx.has_tables:
        return [b for b in range(ctx.q) if not complete_square_sum(a, b, ctx)[2]]
    q, p = ctx.q, ctx.p
    s = np.arange(q)
    trmul = ctx.tables["trmul"].astype(np.int64)
    # row b holds Tr(a s^2 + b s) for every s
    T = (ctx.vtrace(ctx.vmul(a, ctx.vsq(s)))[None, :] + trmul) % p
    lhs = np.bincount((s[:, None] * p + T).ravel(), minlength=q * p).reshape(q, p)

    nz = s[1:]
    g = np.zeros(p, dtype=np.int64)
    np.add.at(g, ctx.vtrace(nz), ctx.veta(nz).astype(np.int64))
    shift = ctx.vtrace(ctx.vmul(ctx.vsq(s), ctx.inv(ctx.mul(ctx.from_int(-4), a))))
    rhs = ctx.eta(a) * g[(np.arange(p)[None, :] - shift[:, None]) % p]

    def reduce(v):
        return v[:, : p - 1] - v[:, p - 1 : p]

    bad = np.nonzero((reduce(lhs) != reduce(rhs)).any(axis=1))[0]
    return [int(b) for b in bad]


def orthogonality_sum(beta: Sequence[int], k: int, ctx: FieldCtx) -> CycInt:
    """``sum over alpha in F_q^k of chi(beta . alpha)``."""
    from .kernels import trace_hist

    beta = np.asarray(beta, dtype=np.int32).reshape(1, k)
    hist = trace_hist(ctx.tables["trmul"], beta, ctx.vector_array(k), ctx.p)
    return CycInt.from_powers(ctx.p, hist[0])


def gauss_identities(ctx: FieldCtx, float_tol: float = 1e-9) -> dict:
    """Check every exact Gauss-sum identity over ``ctx``.

    Returns a dict of named booleans plus the closed form, for reporting.
    """
    g1 = gauss_direct(1, ctx)
    eta_m1 = ctx.eta(ctx.neg(1))
    bad_scaling = [
        a for a in range(1, ctx.q) if gauss_direct(a, ctx) != g1 * ctx.eta(a)
    ]
    explicit = gauss_explicit(ctx.p, ctx.ell)
    z = g1.to_complex()
    w = explicit.to_complex()
    rel = abs(z - w) / abs(w)
    return {
        "G1": list(g1.coeffs),
        "explicit": str(explicit),
        "scaling_mismatches": bad_scaling,
        "modulus_sq": g1.norm_sq() == ctx.q,
        "square": g1 * g1 == eta_m1 * ctx.q,
        "square_matches_explicit": g1 * g1 == (explicit**2).as_integer(),
        "fourth_matches_explicit": g1**4 == (explicit**4).as_integer(),
        "phase_rel_error": rel,
        "phase": rel <= float_tol,
    }
