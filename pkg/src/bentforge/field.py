"""Arithmetic in binary fields F_{2^n} in a polynomial basis.

Elements are plain integers whose bit i is the coefficient of z^i.  A
:class:`GF2n` context carries the modulus, the trace mask and, for
n <= 16, log/antilog tables.  The carryless multiply-and-reduce path is
always available and serves as the oracle for the table path.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import DomainError

TABLE_LIMIT = 16
MAX_DEGREE = 24

# z^6 + z^4 + z^3 + z + 1, the degree-6 modulus of the worked example.
EXAMPLE_MODULUS_6 = 0b1011011


def clmul(a: int, b: int) -> int:
    """Carryless product of two F_2[z] polynomials."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, f: int) -> int:
    df = f.bit_length() - 1
    while a.bit_length() - 1 >= df:
        a ^= f << (a.bit_length() - 1 - df)
    return a


def poly_mulmod(a: int, b: int, f: int) -> int:
    return poly_mod(clmul(a, b), f)


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def is_irreducible(f: int) -> bool:
    """Irreducibility over F_2: gcd(f, z^(2^k) - z) = 1 for k <= n/2."""
    n = f.bit_length() - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if not f & 1:
        return False
    t = 0b10
    for _ in range(n // 2):
        t = poly_mulmod(t, t, f)
        if poly_gcd(f, t ^ 0b10) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(n: int) -> int:
    for f in range((1 << n) | 1, 1 << (n + 1), 2):
        if is_irreducible(f):
            return f
    raise AssertionError(f"no irreducible polynomial of degree {n}")  # pragma: no cover


def default_modulus(n: int) -> int:
    if n == 6:
        return EXAMPLE_MODULUS_6
    return least_irreducible(n)


def _prime_factors(k: int) -> list[int]:
    out = []
    p = 2
    while p * p <= k:
        if k % p == 0:
            out.append(p)
            while k % p == 0:
                k //= p
        p += 1
    if k > 1:
        out.append(k)
    return out


def _as_u64(x) -> np.ndarray:
    return np.asarray(x, dtype=np.int64)


class GF2n:
    """The field F_2[z]/(modulus).  Immutable after construction."""

    def __init__(self, modulus: int):
        n = modulus.bit_length() - 1
        if n < 1 or n > MAX_DEGREE:
            raise DomainError(f"degree {n} outside 1..{MAX_DEGREE}")
        if not is_irreducible(modulus):
            raise DomainError(f"modulus {modulus:#x} is reducible")
        self.modulus = modulus
        self.degree = n
        self.order = 1 << n
        self._mask = self.order - 1
        self._top = 1 << (n - 1)
        self._low = modulus & self._mask

        # Tr(x) = parity(x & trace_mask) since Tr is F_2-linear.
        mask = 0
        for i in range(n):
            if self._trace_reduce(1 << i):
                mask |= 1 << i
        self.trace_mask = mask

        self.primitive = self._find_primitive()
        self._exp = self._log = None
        if n <= TABLE_LIMIT:
            self._build_tables()

    def __repr__(self):
        return f"GF2n(degree={self.degree}, modulus={self.modulus:#x})"

    def __eq__(self, other):
        return isinstance(other, GF2n) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("GF2n", self.modulus))

    # -- scalar arithmetic ------------------------------------------------

    def mul_reduce(self, x: int, y: int) -> int:
        """Reference multiply: shift-and-add with interleaved reduction."""
        r = 0
        while y:
            if y & 1:
                r ^= x
            y >>= 1
            x = ((x << 1) & self._mask) ^ (self._low if x & self._top else 0)
        return r

    def mul(self, x: int, y: int) -> int:
        if self._exp is None:
            return self.mul_reduce(x, y)
        if x == 0 or y == 0:
            return 0
        return int(self._exp[self._log[x] + self._log[y]])

    def pow(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inv(x), -k
        if x == 0:
            return 1 if k == 0 else 0
        if self._exp is not None:
            return int(self._exp[(int(self._log[x]) * k) % (self.order - 1)])
        r = 1
        while k:
            if k & 1:
                r = self.mul_reduce(r, x)
            x = self.mul_reduce(x, x)
            k >>= 1
        return r

    def pow_reduce(self, x: int, k: int) -> int:
        r = 1
        while k:
            if k & 1:
                r = self.mul_reduce(r, x)
            x = self.mul_reduce(x, x)
            k >>= 1
        return r

    def inv(self, x: int) -> int:
        if x == 0:
            raise DomainError("zero has no inverse")
        if self._exp is not None:
            return int(self._exp[(self.order - 1 - self._log[x]) % (self.order - 1)])
        return self.pow_reduce(x, self.order - 2)

    def log(self, x: int) -> int:
        """Discrete log to the base ``self.primitive``."""
        if x == 0:
            raise DomainError("log of zero")
        if self._log is not None:
            return int(self._log[x])
        raise DomainError("discrete log needs tables (degree <= 16)")

    def exp(self, k: int) -> int:
        return self.pow(self.primitive, k)

    def frobenius(self, x: int, j: int = 1) -> int:
        for _ in range(j % self.degree):
            x = self.mul(x, x)
        return x

    def trace(self, x: int) -> int:
        return (x & self.trace_mask).bit_count() & 1

    def _trace_reduce(self, x: int) -> int:
        acc, t = 0, x
        for _ in range(self.degree):
            acc ^= t
            t = self.mul_reduce(t, t)
        if acc not in (0, 1):
            raise AssertionError("absolute trace left F_2")
        return acc

    def in_subfield(self, x: int, d: int) -> bool:
        """True iff x lies in the subfield of order 2^d (x^(2^d) = x)."""
        if self.degree % d:
            raise DomainError(f"{d} does not divide {self.degree}")
        return self.frobenius(x, d) == x

    def trace_rel(self, x: int, d: int) -> int:
        """Tr^d_1 of an element of the order-2^d subfield."""
        if self.degree % d:
            raise DomainError(f"{d} does not divide {self.degree}")
        acc, t = 0, x
        for _ in range(d):
            acc ^= t
            t = self.mul(t, t)
        if t != x:
            raise DomainError(f"{x:#x} is not in the subfield of degree {d}")
        return acc

    # -- setup ------------------------------------------------------------

    def _find_primitive(self) -> int:
        if self.order == 2:
            return 1
        factors = _prime_factors(self.order - 1)
        for g in range(2, self.order):
            if all(self.pow_reduce(g, (self.order - 1) // p) != 1 for p in factors):
                return g
        raise AssertionError("no primitive element")  # pragma: no cover

    def _build_tables(self):
        q1 = self.order - 1
        exp = np.empty(2 * q1 + 1, dtype=np.int64)
        block = min(q1, 256)
        x = 1
        for i in range(block):
            exp[i] = x
            x = self.mul_reduce(x, self.primitive)
        step = self.pow_reduce(self.primitive, block)
        for start in range(block, q1, block):
            stop = min(start + block, q1)
            exp[start:stop] = self.mul_vec_reduce(exp[start - block:stop - block], step)
        exp[q1:2 * q1] = exp[:q1]
        exp[2 * q1] = exp[0]
        log = np.zeros(self.order, dtype=np.int64)
        log[exp[:q1]] = np.arange(q1)
        if len(set(exp[:q1].tolist())) != q1:
            raise AssertionError("primitive element has wrong order")
        self._exp, self._log = exp, log

    # -- vectorised arithmetic -------------------------------------------

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def mul_vec_reduce(self, x, y) -> np.ndarray:
        x = _as_u64(x).copy()
        y = np.broadcast_to(_as_u64(y), np.broadcast_shapes(x.shape, np.shape(y))).copy()
        x = np.broadcast_to(x, y.shape).copy()
        r = np.zeros_like(x)
        for _ in range(self.degree):
            r ^= np.where(y & 1, x, 0)
            y >>= 1
            hi = (x & self._top) != 0
            x = ((x << 1) & self._mask) ^ np.where(hi, self._low, 0)
        return r

    def mul_vec(self, x, y) -> np.ndarray:
        if self._exp is None:
            return self.mul_vec_reduce(x, y)
        x, y = np.broadcast_arrays(_as_u64(x), _as_u64(y))
        r = self._exp[self._log[x] + self._log[y]]
        return np.where((x == 0) | (y == 0), 0, r)

    def pow_vec(self, x, k: int) -> np.ndarray:
        x = _as_u64(x)
        if k < 0:
            x, k = self.inv_vec(x), -k
        if self._exp is not None:
            r = self._exp[(self._log[x] * (k % (self.order - 1))) % (self.order - 1)]
            if k == 0:
                return np.ones_like(x)
            return np.where(x == 0, 0, r)
        r = np.ones_like(x)
        base = x.copy()
        while k:
            if k & 1:
                r = self.mul_vec_reduce(r, base)
            base = self.mul_vec_reduce(base, base)
            k >>= 1
        return r

    def inv_vec(self, x) -> np.ndarray:
        x = _as_u64(x)
        if np.any(x == 0):
            raise DomainError("zero has no inverse")
        if self._exp is not None:
            return self._exp[(self.order - 1 - self._log[x]) % (self.order - 1)]
        return self.pow_vec(x, self.order - 2)

    def trace_vec(self, x) -> np.ndarray:
        return (np.bitwise_count(_as_u64(x) & self.trace_mask) & 1).astype(np.uint8)

    def trace_rel_vec(self, x, d: int) -> np.ndarray:
        if self.degree % d:
            raise DomainError(f"{d} does not divide {self.degree}")
        x = _as_u64(x)
        acc = np.zeros_like(x)
        t = x
        for _ in range(d):
            acc ^= t
            t = self.mul_vec(t, t)
        if np.any(t != x):
            raise DomainError(f"argument not in the subfield of degree {d}")
        return acc.astype(np.uint8)

    # -- structure --------------------------------------------------------

    def subfield_elements(self, d: int) -> np.ndarray:
        """Sorted elements of the unique subfield of order 2^d."""
        if self.degree % d:
            raise DomainError(f"{d} does not divide {self.degree}")
        step = (self.order - 1) // ((1 << d) - 1)
        g = self.pow(self.primitive, step)
        powers = np.array([self.pow(g, j) for j in range((1 << d) - 1)], dtype=np.int64)
        return np.sort(np.concatenate(([0], powers)))

    def trace_dot_map(self) -> np.ndarray:
        """Array whose entry b is the integer with bit i = Tr(z^i b).

        Equivalently the Gram matrix of the trace form applied to b, so that
        Tr(b x) = parity(x & map[b]) for every x.
        """
        b = self.elements()
        out = np.zeros_like(b)
        for i in range(self.degree):
            out |= self.trace_vec(self.mul_vec(b, 1 << i)).astype(np.int64) << i
        return out

    def gram_matrix(self) -> np.ndarray:
        n = self.degree
        return np.array([[self.trace(self.mul(1 << i, 1 << j)) for j in range(n)]
                         for i in range(n)], dtype=np.uint8)

    def dual_basis(self) -> list[int]:
        """Elements d_j with Tr(z^i d_j) = [i == j]."""
        ginv = gf2_inverse(self.gram_matrix())
        return [sum(int(ginv[i, j]) << i for i in range(self.degree))
                for j in range(self.degree)]

    def element(self, value: int) -> "FieldElement":
        return FieldElement(value, self)


def gf2_inverse(a: np.ndarray) -> np.ndarray:
    """Inverse of a square 0/1 matrix over F_2 by Gauss-Jordan elimination."""
    n = a.shape[0]
    m = np.concatenate([a.astype(np.uint8) & 1, np.eye(n, dtype=np.uint8)], axis=1)
    for col in range(n):
        pivots = np.nonzero(m[col:, col])[0]
        if len(pivots) == 0:
            raise DomainError("matrix is singular over F_2")
        p = col + pivots[0]
        m[[col, p]] = m[[p, col]]
        rows = np.nonzero(m[:, col])[0]
        for r in rows:
            if r != col:
                m[r] ^= m[col]
    return m[:, n:]


class FieldElement:
    __slots__ = ("value", "ctx")

    def __init__(self, value: int, ctx: GF2n):
        value = int(value)
        if not 0 <= value < ctx.order:
            raise DomainError(f"{value:#x} is not an element of {ctx!r}")
        self.value = value
        self.ctx = ctx

    @property
    def bits(self) -> int:
        return self.value

    def _check(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise ValueError("operands belong to different fields")
            return other.value
        if isinstance(other, int) and other in (0, 1):
            return other
        return NotImplemented

    def __add__(self, other):
        v = self._check(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.value ^ v, self.ctx)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        v = self._check(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.ctx.mul(self.value, v), self.ctx)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._check(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.ctx.mul(self.value, self.ctx.inv(v)), self.ctx)

    def __pow__(self, k: int):
        return FieldElement(self.ctx.pow(self.value, k), self.ctx)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.ctx.inv(self.value), self.ctx)

    def trace(self) -> int:
        return self.ctx.trace(self.value)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx == other.ctx and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.ctx.modulus))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FieldElement({self.value:#x}, degree={self.ctx.degree})"


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def inv(x: FieldElement) -> FieldElement:
    return x.inverse()


def trace_abs(x: FieldElement) -> int:
    return x.trace()


def trace_rel(x: FieldElement, d: int) -> int:
    return x.ctx.trace_rel(x.value, d)


class Embedding:
    """Ring homomorphism F_{2^d} -> F_{2^n} fixed by the image of z."""

    def __init__(self, source: GF2n, target: GF2n, image: int):
        if target.degree % source.degree:
            raise DomainError("source degree must divide target degree")
        self.source = source
        self.target = target
        self.image = image
        basis = [1]
        for _ in range(source.degree - 1):
            basis.append(target.mul(basis[-1], image))
        self.basis = basis
        if self._eval_poly(source.modulus) != 0:
            raise DomainError(f"{image:#x} is not a root of the source modulus")
        self._table = None
        self._inverse = None
        if source.degree <= TABLE_LIMIT:
            x = source.elements()
            table = np.zeros_like(x)
            for i, b in enumerate(basis):
                table ^= np.where((x >> i) & 1, b, 0)
            self._table = table

    def _eval_poly(self, f: int) -> int:
        acc = 0
        for i in range(f.bit_length() - 1, -1, -1):
            acc = self.target.mul(acc, self.image) ^ ((f >> i) & 1)
        return acc

    def __call__(self, x):
        if isinstance(x, FieldElement):
            if x.ctx != self.source:
                raise ValueError("element is not in the source field")
            return FieldElement(self(x.value), self.target)
        if self._table is not None:
            out = self._table[x]
            return int(out) if np.ndim(out) == 0 else out
        r = 0
        for i, b in enumerate(self.basis):
            if (x >> i) & 1:
                r ^= b
        return r

    def preimage(self, y: int) -> int:
        if self._inverse is None:
            if self._table is None:
                raise DomainError("preimage needs a tabulated embedding")
            self._inverse = {int(v): i for i, v in enumerate(self._table.tolist())}
        try:
            return self._inverse[int(y)]
        except KeyError:
            raise DomainError(f"{int(y):#x} is not in the embedded subfield") from None

    def compose(self, inner: "Embedding") -> "Embedding":
        """self after inner: inner.source -> self.target."""
        if inner.target != self.source:
            raise ValueError("embeddings do not chain")
        return Embedding(inner.source, self.target, self(inner.image))

    def __repr__(self):
        return (f"Embedding(F_2^{self.source.degree} -> F_2^{self.target.degree}, "
                f"z -> {self.image:#x})")


def subfield_roots(source: GF2n, target: GF2n) -> list[int]:
    """All roots of the source modulus in the target, ascending."""
    if target.degree % source.degree:
        raise DomainError("source degree must divide target degree")
    if source.degree == 1:
        return [1]
    cands = target.subfield_elements(source.degree)
    acc = np.zeros_like(cands)
    f = source.modulus
    for i in range(f.bit_length() - 1, -1, -1):
        acc = target.mul_vec(acc, cands) ^ ((f >> i) & 1)
    return sorted(int(c) for c in cands[acc == 0])


def make_embedding(source: GF2n, target: GF2n) -> Embedding:
    """Embed via the numerically smallest root of the source modulus."""
    roots = subfield_roots(source, target)
    if not roots:
        raise AssertionError(f"no root of {source.modulus:#x} in {target!r}")
    if source.degree == 1:
        return Embedding(source, target, 1)
    return Embedding(source, target, roots[0])


@lru_cache(maxsize=None)
def field_from_modulus(modulus: int) -> GF2n:
    return GF2n(modulus)


def field(n: int, registry: dict[int, int] | None = None) -> GF2n:
    """Cached field of degree n, using ``registry`` over the built-in moduli."""
    if registry and n in registry:
        return field_from_modulus(registry[n])
    return field_from_modulus(default_modulus(n))
