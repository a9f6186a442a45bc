"""Arithmetic in GF(p^ell) for odd p.

Elements are plain ``int`` codes: the element with polynomial-basis
coefficients ``(c_0, ..., c_{ell-1})`` (``c_0`` the constant term) has code
``sum(c_j * p**j)``.  On the prime field the code is the residue itself.
Comparing codes orders elements lexicographically by coefficient vector read
from the highest degree down, which is the order used for canonical choices
(``sqrt``, the default modulus).

Vectors of ``F_q^k`` are tuples of codes.  For fields at or below
``table_threshold`` every operation is backed by lookup tables, and the
``v*`` methods accept numpy arrays of codes.
"""
from __future__ import annotations

import itertools
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    DivisionByZero,
    EvenCharacteristic,
    NonPrime,
    ReducibleModulus,
)

DEFAULT_TABLE_THRESHOLD = 2048
DEFAULT_ENUM_BUDGET = 1 << 24


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over Z_p, coefficient lists low degree first -----------------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_trim(out)


def _poly_rem(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the polynomial ``m`` (any nonzero leading coeff)."""
    a = _poly_trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for j, mj in enumerate(m):
            a[shift + j] = (a[shift + j] - c * mj) % p
        _poly_trim(a)
    return a


def _monic_polys(deg: int, p: int) -> Iterator[list[int]]:
    """Monic polynomials of degree ``deg``, lower coefficients in code order."""
    for code in range(p**deg):
        low = [(code // p**j) % p for j in range(deg)]
        yield low + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Irreducibility over Z_p by exhaustive trial division by monic factors."""
    poly = _poly_trim(list(poly))
    n = len(poly) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    for deg in range(1, n // 2 + 1):
        for f in _monic_polys(deg, p):
            if not _poly_rem(poly, f, p):
                return False
    return True


def first_irreducible(p: int, ell: int) -> tuple[int, ...]:
    for poly in _monic_polys(ell, p):
        if is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # unreachable


class FieldCtx:
    """The finite field GF(p^ell).

    Immutable after construction; all methods are pure.
    """

    def __init__(
        self,
        p: int,
        ell: int = 1,
        modulus: Sequence[int] | None = None,
        *,
        table_threshold: int = DEFAULT_TABLE_THRESHOLD,
        enum_budget: int = DEFAULT_ENUM_BUDGET,
    ):
        if p == 2:
            raise EvenCharacteristic("characteristic 2 is not supported")
        if not is_prime(p):
            raise NonPrime(f"{p} is not prime")
        if ell < 1:
            raise DimensionMismatch("extension degree must be >= 1")
        self.p = p
        self.ell = ell
        self.q = p**ell
        self.enum_budget = enum_budget
        self.table_threshold = table_threshold
        if ell == 1:
            self.modulus = None
        else:
            if modulus is None:
                modulus = first_irreducible(p, ell)
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != ell + 1 or modulus[-1] != 1:
                raise ReducibleModulus("modulus must be monic of degree ell")
            if not is_irreducible(modulus, p):
                raise ReducibleModulus(f"{modulus} is reducible over Z_{p}")
            self.modulus = modulus
        self.zero = 0
        self.one = 1
        self.has_tables = self.q <= table_threshold
        if self.has_tables:
            self._build_tables()

    def __repr__(self) -> str:
        if self.ell == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.ell}, modulus={self.modulus})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldCtx)
            and (self.p, self.ell, self.modulus) == (other.p, other.ell, other.modulus)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.ell, self.modulus))

    # -- representation ------------------------------------------------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        p = self.p
        return tuple((a // p**j) % p for j in range(self.ell))

    def from_coeffs(self, c: Sequence[int]) -> int:
        if len(c) > self.ell:
            raise ValueError("too many coefficients")
        return sum((int(x) % self.p) * self.p**j for j, x in enumerate(c))

    def from_int(self, n: int) -> int:
        """Image of the rational integer ``n`` in the prime subfield."""
        return n % self.p

    # -- scalar arithmetic (slow path, no tables) ----------------------------

    def _pmul(self, a: int, b: int) -> int:
        prod = _poly_mul(self.coeffs(a), self.coeffs(b), self.p)
        return self.from_coeffs(_poly_rem(prod, self.modulus, self.p))

    def _padd(self, a: int, b: int, sign: int = 1) -> int:
        p = self.p
        return self.from_coeffs(
            [(x + sign * y) % p for x, y in zip(self.coeffs(a), self.coeffs(b))]
        )

    def _ppow(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self._pmul(result, base)
            base = self._pmul(base, base)
            e >>= 1
        return result

    # -- public scalar arithmetic ---------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.ell == 1:
            return (a + b) % self.p
        if self.has_tables:
            return int(self._add[a, b])
        return self._padd(a, b)

    def sub(self, a: int, b: int) -> int:
        if self.ell == 1:
            return (a - b) % self.p
        if self.has_tables:
            return int(self._sub[a, b])
        return self._padd(a, b, -1)

    def neg(self, a: int) -> int:
        return self.sub(0, a)

    def mul(self, a: int, b: int) -> int:
        if self.ell == 1:
            return a * b % self.p
        if self.has_tables:
            return int(self._mul[a, b])
        return self._pmul(a, b)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if self.ell == 1:
            return pow(a, e, self.p)
        return self._ppow(a, e)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no inverse")
        if self.ell == 1:
            return pow(a, self.p - 2, self.p)
        if self.has_tables:
            return int(self._inv[a])
        return self._ppow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def arith(self, op: str, a: int, b: int | None = None) -> int:
        """Dispatch by name: add, sub, mul, neg, inv, pow, div."""
        if op in ("neg", "inv"):
            return getattr(self, op)(a)
        if b is None:
            raise TypeError(f"{op} needs two operands")
        return getattr(self, op)(a, b)

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def trace(self, a: int) -> int:
        """Absolute trace to Z_p, returned as a residue in ``[0, p)``."""
        if self.ell == 1:
            return a
        if self.has_tables:
            return int(self._trace[a])
        acc, x = 0, a
        for _ in range(self.ell):
            acc = self.add(acc, x)
            x = self.frobenius(x)
        assert acc < self.p, "trace left the prime subfield"
        return acc

    def eta(self, a: int) -> int:
        """Quadratic character: +1 on nonzero squares, -1 on non-squares, 0 at 0."""
        if a == 0:
            return 0
        if self.has_tables:
            return int(self._eta[a])
        return 1 if self.pow(a, (self.q - 1) // 2) == 1 else -1

    def is_square(self, a: int) -> bool:
        return self.eta(a) >= 0

    def sqrt(self, a: int) -> int | None:
        """Canonical square root (smaller code of the pair), or None."""
        if a == 0:
            return 0
        if self.has_tables:
            r = int(self._sqrt[a])
            return None if r < 0 else r
        if self.eta(a) < 0:
            return None
        for r in range(1, self.q):
            if self.mul(r, r) == a:
                return min(r, self.neg(r))
        raise AssertionError("square without a root")  # unreachable

    # -- tables ---------------------------------------------------------------

    def _build_tables(self) -> None:
        q, p = self.q, self.p
        codes = np.arange(q, dtype=np.int64)
        digits = np.stack([(codes // p**j) % p for j in range(self.ell)], axis=1)
        weights = p ** np.arange(self.ell, dtype=np.int64)
        self._add = (((digits[:, None, :] + digits[None, :, :]) % p) @ weights).astype(np.int32)
        self._sub = (((digits[:, None, :] - digits[None, :, :]) % p) @ weights).astype(np.int32)
        self._neg = self._sub[0].copy()

        if self.ell == 1:
            mul = (codes[:, None] * codes[None, :]) % p
        else:
            g = self._primitive_element()
            exp = np.zeros(q - 1, dtype=np.int64)
            x = 1
            for i in range(q - 1):
                exp[i] = x
                x = self._pmul(x, g)
            log = np.zeros(q, dtype=np.int64)
            log[exp] = np.arange(q - 1)
            mul = exp[(log[:, None] + log[None, :]) % (q - 1)]
            mul[0, :] = 0
            mul[:, 0] = 0
        self._mul = mul.astype(np.int32)

        inv = np.zeros(q, dtype=np.int32)
        rows, cols = np.nonzero(self._mul == 1)
        inv[rows] = cols
        self._inv = inv
        self._sq = np.diagonal(self._mul).astype(np.int32).copy()

        eta = -np.ones(q, dtype=np.int8)
        eta[self._sq] = 1
        eta[0] = 0
        self._eta = eta

        sqrt = -np.ones(q, dtype=np.int32)
        for r in range(q - 1, -1, -1):  # descending so the smaller root wins
            sqrt[self._sq[r]] = r
        self._sqrt = sqrt

        if self.ell == 1:
            self._trace = codes.astype(np.int32)
        else:
            acc = np.zeros(q, dtype=np.int64)
            x = codes.copy()
            for _ in range(self.ell):
                acc = self._add[acc, x]
                # Frobenius by repeated multiplication through the table
                y = np.ones(q, dtype=np.int64)
                for _ in range(p):
                    y = self._mul[y, x]
                x = y
            if np.any(acc >= p):
                raise AssertionError("trace left the prime subfield")
            self._trace = acc.astype(np.int32)
        self._trmul = self._trace[self._mul].astype(np.int32)

    def _primitive_element(self) -> int:
        factors = prime_factors(self.q - 1)
        for g in range(2, self.q):
            if all(self._ppow(g, (self.q - 1) // r) != 1 for r in factors):
                return g
        raise AssertionError("no primitive element")  # unreachable

    def _need_tables(self) -> None:
        if not self.has_tables:
            raise BudgetExceeded(
                f"vectorised arithmetic needs tables; q={self.q} exceeds "
                f"table_threshold={self.table_threshold}"
            )

    @property
    def tables(self) -> dict[str, np.ndarray]:
        """Lookup tables keyed by name (add, sub, mul, neg, inv, sq, eta, sqrt, trace, trmul)."""
        self._need_tables()
        return {
            name: getattr(self, "_" + name)
            for name in ("add", "sub", "mul", "neg", "inv", "sq", "eta", "sqrt", "trace", "trmul")
        }

    # -- vectorised arithmetic over numpy code arrays ----------------------------

    def vadd(self, a, b):
        self._need_tables()
        return self._add[a, b]

    def vsub(self, a, b):
        self._need_tables()
        return self._sub[a, b]

    def vneg(self, a):
        self._need_tables()
        return self._neg[a]

    def vmul(self, a, b):
        self._need_tables()
        return self._mul[a, b]

    def vsq(self, a):
        self._need_tables()
        return self._sq[a]

    def veta(self, a):
        self._need_tables()
        return self._eta[a]

    def vtrace(self, a):
        self._need_tables()
        return self._trace[a]

    def vsum(self, arr, axis: int = -1):
        """Field sum along ``axis`` of a code array."""
        self._need_tables()
        arr = np.moveaxis(np.asarray(arr), axis, -1)
        if self.ell == 1:
            return (arr.astype(np.int64).sum(axis=-1) % self.p).astype(np.int32)
        acc = np.zeros(arr.shape[:-1], dtype=np.int32)
        for j in range(arr.shape[-1]):
            acc = self._add[acc, arr[..., j]]
        return acc

    # -- enumeration ------------------------------------------------------------

    def check_budget(self, count: int, what: str = "enumeration") -> None:
        if count > self.enum_budget:
            raise BudgetExceeded(f"{what} of {count} items exceeds budget {self.enum_budget}")

    def elements(self) -> Iterator[int]:
        return iter(range(self.q))

    def vectors(self, k: int) -> Iterator[tuple[int, ...]]:
        """All q^k vectors in lexicographic order."""
        self.check_budget(self.q**k)
        return itertools.product(range(self.q), repeat=k)

    def vector_array(self, k: int) -> np.ndarray:
        """All q^k vectors as an int32 array of shape (q^k, k), same order as ``vectors``."""
        self.check_budget(self.q**k)
        idx = np.arange(self.q**k, dtype=np.int64)
        cols = [(idx // self.q ** (k - 1 - j)) % self.q for j in range(k)]
        return np.stack(cols, axis=1).astype(np.int32) if k else np.zeros((1, 0), np.int32)

    def vector_index(self, vecs) -> np.ndarray:
        """Position of each vector (rows of ``vecs``) in the lexicographic enumeration."""
        vecs = np.asarray(vecs, dtype=np.int64)
        k = vecs.shape[-1]
        w = self.q ** np.arange(k - 1, -1, -1, dtype=np.int64)
        return vecs @ w

    def dot(self, x: Sequence[int], y: Sequence[int]) -> int:
        acc = 0
        for a, b in zip(x, y):
            acc = self.add(acc, self.mul(a, b))
        return acc


def mk_field(p: int, ell: int = 1, modulus: Sequence[int] | None = None, **kwargs) -> FieldCtx:
    """Construct GF(p^ell); see :class:`FieldCtx`."""
    return FieldCtx(p, ell, modulus, **kwargs)


def enum_field(ctx: FieldCtx) -> Iterator[int]:
    return ctx.elements()


def enum_vectors(ctx: FieldCtx, k: int) -> Iterator[tuple[int, ...]]:
    return ctx.vectors(k)
