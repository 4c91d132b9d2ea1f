"""Truncated arithmetic in Z_q / 2^M, Teichmuller lifts and Gauss sums.

Z_q is modelled as (Z / 2^M)[X] / (F(X)) where F is the field modulus
read with integer coefficients.  Reduction mod 2 is then the identity on
coefficient parities, giving the ring map onto F_{2^n}.
"""
from __future__ import annotations

import hashlib
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import DomainError
from .expsums import dillon_sum, weight_mod
from .field import GF2n


class PadicCtx:
    def __init__(self, field: GF2n, precision: int | None = None):
        self.field = field
        self.n = field.degree
        self.precision = self.n + 4 if precision is None else int(precision)
        if not 1 <= self.precision <= 48:
            raise DomainError("precision must lie in 1..48")
        self.modulus = 1 << self.precision
        # lifted modulus X^n + sum low[i] X^i with 0/1 coefficients
        self.low = [i for i in range(self.n) if (field.modulus >> i) & 1]

    def __repr__(self):
        return f"PadicCtx(n={self.n}, M={self.precision}, modulus={self.field.modulus:#x})"

    def __eq__(self, other):
        return (isinstance(other, PadicCtx) and other.field == self.field
                and other.precision == self.precision)

    def __hash__(self):
        return hash((self.field.modulus, self.precision))

    def lifted_modulus(self) -> list[int]:
        """Coefficients of the lifted modulus, constant term first."""
        return [1 if i in self.low else 0 for i in range(self.n)] + [1]

    def element(self, coeffs) -> "PadicElement":
        return PadicElement(self, coeffs)

    def scalar(self, k: int) -> "PadicElement":
        return PadicElement(self, [k] + [0] * (self.n - 1))

    def lift(self, x: int) -> "PadicElement":
        """The 0/1-coefficient lift of a field element."""
        return PadicElement(self, [(x >> i) & 1 for i in range(self.n)])

    def mul_coeffs(self, x, y) -> tuple[int, ...]:
        n = self.n
        prod = [0] * (2 * n - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    prod[i + j] += xi * yj
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if c:
                prod[k] = 0
                for i in self.low:
                    prod[k - n + i] -= c
        return tuple(p % self.modulus for p in prod[:n])

    def inverse_scalar(self, k: int) -> int:
        if k % 2 == 0:
            raise DomainError(f"{k} is not a unit mod 2^M")
        return pow(k, -1, self.modulus)


class PadicElement:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: PadicCtx, coeffs):
        coeffs = [int(c) % ctx.modulus for c in coeffs]
        if len(coeffs) != ctx.n:
            raise DomainError(f"expected {ctx.n} coefficients")
        self.ctx = ctx
        self.coeffs = tuple(coeffs)

    def _other(self, other) -> tuple[int, ...]:
        if isinstance(other, PadicElement):
            if other.ctx != self.ctx:
                raise ValueError("elements of different rings")
            return other.coeffs
        if isinstance(other, (int, np.integer)):
            return self.ctx.scalar(int(other)).coeffs
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return PadicElement(self.ctx, [x + y for x, y in zip(self.coeffs, o)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return PadicElement(self.ctx, [x - y for x, y in zip(self.coeffs, o)])

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return PadicElement(self.ctx, [-x for x in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return PadicElement(self.ctx, [x * int(other) for x in self.coeffs])
        o = self._other(other)
        if o is NotImplemented:
            return o
        return PadicElement(self.ctx, self.ctx.mul_coeffs(self.coeffs, o))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative powers need a unit inverse")
        r = self.ctx.scalar(1)
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def __eq__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self.coeffs == o

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"PadicElement({list(self.coeffs)}, M={self.ctx.precision})"

    def reduce(self) -> int:
        """Image in F_{2^n} under reduction mod 2."""
        return sum((c & 1) << i for i, c in enumerate(self.coeffs))

    def valuation(self) -> int:
        """Least 2-adic valuation among coordinates; M for zero."""
        best = self.ctx.precision
        for c in self.coeffs:
            if c:
                best = min(best, (c & -c).bit_length() - 1)
        return best

    def congruent(self, other, k: int) -> bool:
        """self = other modulo 2^k (k <= M)."""
        if k > self.ctx.precision:
            raise DomainError("congruence modulus exceeds working precision")
        diff = self - other
        return all(c % (1 << k) == 0 for c in diff.coeffs)


def teichmuller(ctx: PadicCtx, x: int) -> PadicElement:
    """omega(x): the (q-1)-th root of unity reducing to x, by t -> t^q."""
    if x == 0:
        raise DomainError("the Teichmuller character is defined on nonzero elements")
    q = ctx.field.order
    t = ctx.lift(x)
    for _ in range(ctx.precision + 1):
        nxt = t ** q
        if nxt == t:
            break
        t = nxt
    else:
        raise AssertionError("Teichmuller iteration did not converge")
    return t


class GaussData:
    """Teichmuller powers and all Gauss sums for one (field, precision)."""

    def __init__(self, ctx: PadicCtx):
        f = ctx.field
        q1 = f.order - 1
        self.ctx = ctx
        omega_g = teichmuller(ctx, f.primitive)
        powers = np.zeros((q1, ctx.n), dtype=np.int64)
        t = ctx.scalar(1)
        for e in range(q1):
            powers[e] = t.coeffs
            t = t * omega_g
        if t != 1:
            raise AssertionError("omega(g)^(q-1) != 1")
        self.omega_powers = powers  # row e: omega(g)^e
        gs = np.array([f.exp(j) for j in range(q1)], dtype=np.int64)
        self.logs = np.zeros(f.order, dtype=np.int64)
        self.logs[gs] = np.arange(q1)
        self.signs = 1 - 2 * f.trace_vec(gs).astype(np.int64)  # (-1)^Tr(g^j)
        j = np.arange(q1, dtype=np.int64)
        table = np.empty((q1, ctx.n), dtype=np.int64)
        for k in range(q1):
            table[k] = (self.signs @ powers[(-k * j) % q1]) % ctx.modulus
        self.gauss = table

    def omega_pow(self, x: int, k: int) -> PadicElement:
        """omega(x)^k for nonzero x and any integer k."""
        if x == 0:
            raise DomainError("omega is defined on nonzero elements")
        q1 = self.ctx.field.order - 1
        return PadicElement(self.ctx, self.omega_powers[(int(self.logs[x]) * k) % q1])

    def G(self, k: int) -> PadicElement:
        return PadicElement(self.ctx, self.gauss[k % (self.ctx.field.order - 1)])


def _digest(arr: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(arr).tobytes()).hexdigest()


@lru_cache(maxsize=32)
def gauss_data(ctx: PadicCtx) -> GaussData:
    return GaussData(ctx)


def gauss_table(ctx: PadicCtx, cache_dir: str | Path | None = None) -> np.ndarray:
    """All G(k), k = 0..q-2, optionally cached on disk with a content digest."""
    if cache_dir is None:
        return gauss_data(ctx).gauss
    path = Path(cache_dir) / f"gauss_{ctx.field.modulus:x}_M{ctx.precision}.npz"
    if path.exists():
        with np.load(path) as z:
            table = z["table"]
            if str(z["digest"]) == _digest(table):
                return table
    table = gauss_data(ctx).gauss
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savez(path, table=table, digest=np.array(_digest(table)))
    return table


def gauss_sum(ctx: PadicCtx, k: int) -> PadicElement:
    return gauss_data(ctx).G(k)


def gauss_sum_direct(ctx: PadicCtx, k: int) -> PadicElement:
    """G(k) straight from the definition, lifting each x separately."""
    f = ctx.field
    q1 = f.order - 1
    acc = ctx.scalar(0)
    for x in range(1, f.order):
        term = teichmuller(ctx, x) ** ((-k) % q1)
        acc = acc - term if f.trace(x) else acc + term
    return acc


def _half(ctx: PadicCtx) -> int:
    if ctx.n % 2:
        raise DomainError("needs even extension degree")
    return ctx.n // 2


def subfield_gauss_sum(ctx: PadicCtx, i: int) -> PadicElement:
    """Gauss sum over F_{2^m} for the character omega^((2^m + 1) i)."""
    m = _half(ctx)
    data = gauss_data(ctx)
    f = ctx.field
    acc = ctx.scalar(0)
    for x in f.subfield_elements(m)[1:].tolist():
        term = data.omega_pow(x, -((1 << m) + 1) * i)
        acc = acc - term if f.trace_rel(x, m) else acc + term
    return acc


def stickelberger_check(ctx: PadicCtx) -> bool:
    """G(k) = 2^wt(k) mod 2^(wt(k)+1) for every k mod q-1."""
    data = gauss_data(ctx)
    for k in range(ctx.field.order - 1):
        w = weight_mod(k, ctx.n)
        if w + 1 > ctx.precision:
            raise DomainError("precision too small for this weight")
        if not data.G(k).congruent(ctx.scalar(1 << w), w + 1):
            return False
    return True


def interpolation_check(ctx: PadicCtx) -> bool:
    """(-1)^Tr(x) = (q-1)^-1 sum_k G(k) omega^k(x) for every nonzero x."""
    data = gauss_data(ctx)
    f = ctx.field
    q1 = f.order - 1
    inv = ctx.inverse_scalar(q1)
    for x in range(1, f.order):
        acc = ctx.scalar(0)
        for k in range(q1):
            acc = acc + data.G(k) * data.omega_pow(x, k)
        if acc * inv != ctx.scalar(-1 if f.trace(x) else 1):
            return False
    return True


def davenport_hasse_check(ctx: PadicCtx) -> bool:
    """G((2^m + 1) i) = -Gbar(i)^2 for i = 0..2^m - 2."""
    m = _half(ctx)
    data = gauss_data(ctx)
    return all(data.G(((1 << m) + 1) * i) == -(subfield_gauss_sum(ctx, i) ** 2)
               for i in range((1 << m) - 1))


def kloosterman_gauss_check(ctx: PadicCtx) -> bool:
    """Subfield Kloosterman sums from squared subfield Gauss sums, every a."""
    m = _half(ctx)
    data = gauss_data(ctx)
    f = ctx.field
    qm1 = (1 << m) - 1
    inv = ctx.inverse_scalar(qm1)
    gbar_sq = [subfield_gauss_sum(ctx, i) ** 2 for i in range(qm1)]
    sub = f.subfield_elements(m)[1:]
    inv_sub = f.inv_vec(sub)
    for a in sub.tolist():
        lhs = qm1 - 2 * int(f.trace_rel_vec(f.mul_vec(sub, a) ^ inv_sub, m).sum())
        acc = ctx.scalar(0)
        for i in range(qm1):
            acc = acc + gbar_sq[i] * data.omega_pow(a, ((1 << m) + 1) * i)
        if acc * inv != ctx.scalar(lhs):
            return False
    return True


def dillon_gauss_identity_check(ctx: PadicCtx, a: int, c: int) -> bool:
    """B(a, c) = (q-1)^-1 sum_i G(i) G(-(2^m-1) i) omega(a^i c^(-(2^m-1) i))."""
    m = _half(ctx)
    if a == 0 or c == 0:
        raise DomainError("a and c must be nonzero")
    data = gauss_data(ctx)
    q1 = ctx.field.order - 1
    e = (1 << m) - 1
    acc = ctx.scalar(0)
    for i in range(q1):
        acc = acc + data.G(i) * data.G(-e * i) * data.omega_pow(a, i) * data.omega_pow(c, -e * i)
    rhs = acc * ctx.inverse_scalar(q1)
    return rhs == ctx.scalar(dillon_sum(ctx.field, a, c))
