"""Boolean functions on F_{2^n} as truth tables, with exact Walsh spectra."""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import gcd

import numpy as np

from .errors import DomainError
from .field import FieldElement, GF2n


class BooleanFunction:
    """Truth table indexed by the integer encoding of field elements."""

    def __init__(self, ctx: GF2n, table):
        table = np.asarray(table, dtype=np.uint8)
        if table.shape != (ctx.order,):
            raise DomainError(f"table length {table.size} != {ctx.order}")
        if np.any(table > 1):
            raise DomainError("truth table entries must be 0 or 1")
        self.ctx = ctx
        self.table = table

    @classmethod
    def zero(cls, ctx: GF2n) -> "BooleanFunction":
        return cls(ctx, np.zeros(ctx.order, dtype=np.uint8))

    @classmethod
    def from_hex(cls, ctx: GF2n, text: str) -> "BooleanFunction":
        """Parse a little-endian hex dump: bit x of the byte string is f(x)."""
        raw = bytes.fromhex(text.strip().removeprefix("0x"))
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
        if bits.size < ctx.order or np.any(bits[ctx.order:]):
            raise DomainError("hex truth table has the wrong length")
        return cls(ctx, bits[:ctx.order])

    def to_hex(self) -> str:
        return np.packbits(self.table, bitorder="little").tobytes().hex()

    def __call__(self, x) -> int:
        return int(self.table[int(x)])

    def __eq__(self, other):
        return (isinstance(other, BooleanFunction) and other.ctx == self.ctx
                and np.array_equal(other.table, self.table))

    def __repr__(self):
        return f"BooleanFunction(n={self.ctx.degree}, weight={int(self.table.sum())})"

    @property
    def n(self) -> int:
        return self.ctx.degree

    def signs(self) -> np.ndarray:
        return 1 - 2 * self.table.astype(np.int64)


@dataclass
class WalshSpectrum:
    n: int
    values: np.ndarray = dc_field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.int32)

    def __getitem__(self, b):
        return int(self.values[int(b)])

    def histogram(self) -> dict[int, int]:
        vals, counts = np.unique(self.values, return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, counts)}

    def value_set(self) -> set[int]:
        return set(self.histogram())

    def parseval_ok(self) -> bool:
        v = self.values.astype(np.int64)
        return int(np.dot(v, v)) == 1 << (2 * self.n)

    def to_json(self) -> str:
        hist = {str(k): v for k, v in self.histogram().items()}
        return json.dumps({"n": self.n, "values": self.values.tolist(), "histogram": hist})


def fwht(a) -> np.ndarray:
    """Unnormalised Walsh-Hadamard butterfly along the last axis."""
    a = np.array(a, dtype=np.int64)
    lead, size = a.shape[:-1], a.shape[-1]
    h = 1
    while h < size:
        a = a.reshape(lead + (size // (2 * h), 2, h))
        x, y = a[..., 0, :], a[..., 1, :]
        a = np.stack((x + y, x - y), axis=-2)
        h *= 2
    return a.reshape(lead + (size,))


@lru_cache(maxsize=None)
def _trace_dot_map(ctx: GF2n) -> np.ndarray:
    return ctx.trace_dot_map()


def walsh_at(f: BooleanFunction, b) -> int:
    """W_f(b) by direct summation over every x."""
    xs = f.ctx.elements()
    e = f.table ^ f.ctx.trace_vec(f.ctx.mul_vec(xs, int(b)))
    return int(f.ctx.order - 2 * int(e.sum(dtype=np.int64)))


def walsh_transform(f: BooleanFunction) -> WalshSpectrum:
    # Tr(bx) = x . (G b) with G the trace Gram matrix, so W(b) = F(G b).
    coords = fwht(f.signs())
    return WalshSpectrum(f.n, coords[_trace_dot_map(f.ctx)])


def walsh_transform_many(ctx: GF2n, tables) -> np.ndarray:
    """Spectra for a stack of truth tables, shape (k, 2^n)."""
    tables = np.asarray(tables, dtype=np.int64)
    return fwht(1 - 2 * tables)[..., _trace_dot_map(ctx)]


def _half(f: BooleanFunction) -> int:
    if f.n % 2:
        raise DomainError("bentness needs an even number of variables")
    return f.n // 2


def is_bent(f: BooleanFunction, spectrum: WalshSpectrum | None = None) -> bool:
    m = _half(f)
    w = (spectrum or walsh_transform(f)).values
    return bool(np.all(np.abs(w) == 1 << m))


def is_bent_mod(f: BooleanFunction, spectrum: WalshSpectrum | None = None) -> bool:
    """Bentness via W(b) = 2^m mod 2^(m+1) on every nonzero b.

    W(0) is deliberately ignored.
    """
    m = _half(f)
    w = (spectrum or walsh_transform(f)).values[1:].astype(np.int64)
    return bool(np.all(w % (1 << (m + 1)) == 1 << m))


def dual(f: BooleanFunction, spectrum: WalshSpectrum | None = None) -> BooleanFunction:
    m = _half(f)
    w = (spectrum or walsh_transform(f)).values.astype(np.int64)
    if not np.all(np.abs(w) == 1 << m):
        raise DomainError("dual is only defined for bent functions")
    table = (w < 0).astype(np.uint8)
    # Independent reading from the residue modulo 2^(m+2).
    residue = w % (1 << (m + 2))
    if not np.array_equal(table, (residue == 3 << m).astype(np.uint8)):
        raise AssertionError("dual disagrees with its mod 2^(m+2) reading")
    return BooleanFunction(f.ctx, table)


def decimate(f: BooleanFunction, k: int) -> BooleanFunction:
    """g(x) = f(x^k), with g(0) = f(0)."""
    q1 = f.ctx.order - 1
    if gcd(k, q1) != 1:
        raise DomainError(f"gcd({k}, {q1}) != 1")
    idx = f.ctx.pow_vec(f.ctx.elements(), k % q1 or q1)
    idx[0] = 0
    return BooleanFunction(f.ctx, f.table[idx])


def unit_coset_representatives(n: int) -> list[int]:
    """Least element of each 2-cyclotomic coset of units mod 2^n - 1."""
    q1 = (1 << n) - 1
    if q1 == 1:
        return [1]
    seen: set[int] = set()
    reps = []
    for k in range(1, q1):
        if k in seen or gcd(k, q1) != 1:
            continue
        reps.append(k)
        for j in range(n):
            seen.add((k << j) % q1)
    return reps


def hyper_bent_scan(f: BooleanFunction, threads: int = 1) -> list[tuple[int, bool]]:
    """Bentness of f(x^k) for one k per coset, in increasing k."""
    _half(f)
    reps = unit_coset_representatives(f.n)

    def one(k):
        return k, is_bent(decimate(f, k))

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(one, reps))
    return [one(k) for k in reps]


def is_hyper_bent(f: BooleanFunction, threads: int = 1) -> bool:
    _half(f)
    if not is_bent(f):
        return False
    if threads > 1:
        return all(ok for _, ok in hyper_bent_scan(f, threads))
    return all(is_bent(decimate(f, k)) for k in unit_coset_representatives(f.n))


def cube_coset_indicator(x: FieldElement) -> int:
    """0 iff x is zero or a cube in F_{2^n}^*."""
    ctx = x.ctx
    if ctx.degree % 2:
        raise DomainError("needs even degree")
    return ctx.trace_rel(ctx.pow(x.value, (ctx.order - 1) // 3), 2)


def cube_coset_indicator_table(ctx: GF2n) -> np.ndarray:
    if ctx.degree % 2:
        raise DomainError("needs even degree")
    return ctx.trace_rel_vec(ctx.pow_vec(ctx.elements(), (ctx.order - 1) // 3), 2)


@dataclass
class TracePolynomial:
    """f(x) = sum of Tr^d_1(coeff * x^exponent) over (coeff, exponent, d) terms."""

    ctx: GF2n
    terms: list[tuple[int, int, int]]

    def evaluate(self) -> BooleanFunction:
        ctx = self.ctx
        xs = ctx.elements()
        out = np.zeros(ctx.order, dtype=np.uint8)
        for coeff, exponent, d in self.terms:
            y = ctx.mul_vec(ctx.pow_vec(xs, exponent), coeff)
            out ^= ctx.trace_rel_vec(y, d)
        return BooleanFunction(ctx, out)
