"""The binomial family f_{a,b}(x) = Tr^n_1(a x^(2^m-1)) + Tr^2_1(b x^((2^n-1)/3)).

Bentness is decided by full spectra and compared against the Kloosterman
value K_m(a^(2^m+1)).
"""
from __future__ import annotations

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import gcd

import numpy as np

from . import __version__
from .boolfun import (BooleanFunction, TracePolynomial, decimate, dual, hyper_bent_scan,
                      is_bent, walsh_transform)
from .errors import DomainError
from .expsums import kloosterman, kloosterman_table
from .field import FieldElement, GF2n, field, make_embedding, subfield_roots, Embedding

log = logging.getLogger(__name__)

EXAMPLE_A_EXPONENT = 3
EXAMPLE_DECIMATION = 11
EXAMPLE_DECIMATED_VALUES = {0, 32, -32, 64, -64, 96, -96, 128, -128, 160, -160}
# (power of z, exponent of x, trace degree) for each term of the dual
EXAMPLE_DUAL_TERMS = [
    (48, 357, 12),
    (28, 147, 12),
    (3, 63, 12),
    (62, 21, 12),
    (60, 105, 12),
    (0, 273, 4),
    (0, 1365, 2),
]


def binomial_function(ctx_n: GF2n, a: int, b: int = 1) -> BooleanFunction:
    """f_{a,b} on F_{2^n}; ``b`` is an element of ctx_n lying in F_4^*."""
    n = ctx_n.degree
    if n % 2:
        raise DomainError("n must be even")
    if a == 0:
        raise DomainError("a must be nonzero")
    if b == 0 or not ctx_n.in_subfield(b, 2):
        raise DomainError(f"b = {b:#x} is not in F_4^*")
    m = n // 2
    xs = ctx_n.elements()
    dillon = ctx_n.trace_vec(ctx_n.mul_vec(ctx_n.pow_vec(xs, (1 << m) - 1), a))
    cubic = ctx_n.mul_vec(ctx_n.pow_vec(xs, (ctx_n.order - 1) // 3), b)
    return BooleanFunction(ctx_n, dillon ^ ctx_n.trace_rel_vec(cubic, 2))


class BinomialFamily:
    """Fields, embeddings and tables shared by every f_{a,b} for one m."""

    def __init__(self, m: int, registry: dict[int, int] | None = None):
        if m < 1:
            raise DomainError("m must be positive")
        self.m = m
        self.n = 2 * m
        self.ctx_n = field(self.n, registry)
        self.ctx_m = field(m, registry)
        self.ctx_2 = field(2, registry)
        self.emb_m = make_embedding(self.ctx_m, self.ctx_n)
        self.emb_4 = make_embedding(self.ctx_2, self.ctx_n)
        xs = self.ctx_n.elements()
        self._dillon_pow = self.ctx_n.pow_vec(xs, (1 << m) - 1)
        cube = self.ctx_n.pow_vec(xs, (self.ctx_n.order - 1) // 3)
        self._cubic = {b: self.ctx_n.trace_rel_vec(self.ctx_n.mul_vec(cube, b), 2)
                       for b in self.f4_units()}
        self._k_table = None

    def f4_units(self) -> list[int]:
        return [self.emb_4(v) for v in (1, 2, 3)]

    def table(self, a: int, b: int = 1) -> np.ndarray:
        if a == 0:
            raise DomainError("a must be nonzero")
        if b not in self._cubic:
            raise DomainError(f"b = {b:#x} is not in F_4^*")
        dillon = self.ctx_n.trace_vec(self.ctx_n.mul_vec(self._dillon_pow, a))
        return dillon ^ self._cubic[b]

    def function(self, a: int, b: int = 1) -> BooleanFunction:
        return BooleanFunction(self.ctx_n, self.table(a, b))

    def norm_kloosterman(self, a: int) -> int:
        """K_m(a^(2^m + 1)), looked up over the registered F_{2^m}."""
        if self._k_table is None:
            self._k_table = kloosterman_table(self.ctx_m)
        y = self.ctx_n.pow(a, (1 << self.m) + 1)
        return int(self._k_table[self.emb_m.preimage(y)])


@lru_cache(maxsize=16)
def family(m: int, registry_items: tuple = ()) -> BinomialFamily:
    return BinomialFamily(m, dict(registry_items) or None)


def _family(m: int, registry: dict[int, int] | None) -> BinomialFamily:
    return family(m, tuple(sorted((registry or {}).items())))


@dataclass(frozen=True)
class BinomialSpec:
    m: int
    a: FieldElement
    b: FieldElement

    def __post_init__(self):
        if self.m < 1 or self.m % 2:
            raise DomainError("m must be an even positive integer")
        ctx = self.a.ctx
        if ctx.degree != 2 * self.m or self.b.ctx != ctx:
            raise DomainError("a and b must live in F_{2^(2m)}")
        if not self.a:
            raise DomainError("a must be nonzero")
        if not self.b or not ctx.in_subfield(self.b.value, 2):
            raise DomainError("b must lie in F_4^*")


def build_f(spec: BinomialSpec) -> BooleanFunction:
    return binomial_function(spec.a.ctx, spec.a.value, spec.b.value)


@dataclass
class CharacterizationRow:
    a: int
    kloosterman: int
    bent: bool
    spectrum_summary: dict[int, int] = dc_field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return self.bent == (self.kloosterman == 4)

    def to_dict(self) -> dict:
        return {"a": f"{self.a:#x}", "kloosterman": self.kloosterman, "bent": self.bent,
                "consistent": self.consistent,
                "spectrum": {str(k): v for k, v in self.spectrum_summary.items()}}


def characterize(m: int, threads: int = 1, sample: int | None = None, seed: int = 0,
                 registry: dict[int, int] | None = None) -> list[CharacterizationRow]:
    """One row per a in F_{2^n}^* (exhaustive for n <= 16, else sampled)."""
    if m < 1 or m % 2:
        raise DomainError("m must be an even positive integer")
    fam = _family(m, registry)
    q = fam.ctx_n.order
    if sample is None and fam.n > 16:
        sample = 64
    if sample is None:
        points = list(range(1, q))
    else:
        points = sorted(random.Random(seed).sample(range(1, q), min(sample, q - 1)))

    def row(a: int) -> CharacterizationRow:
        f = fam.function(a)
        spec = walsh_transform(f)
        return CharacterizationRow(a, fam.norm_kloosterman(a), is_bent(f, spec), spec.histogram())

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(row, points))
    return [row(a) for a in points]


def search_bent(m: int, limit: int | None, registry: dict[int, int] | None = None) -> list[FieldElement]:
    """a with K_m(a^(2^m+1)) = 4 in increasing order, each confirmed bent."""
    if m < 1 or m % 2:
        raise DomainError("m must be an even positive integer")
    found: list[FieldElement] = []
    if limit is not None and limit <= 0:
        return found
    fam = _family(m, registry)
    for a in range(1, fam.ctx_n.order):
        if fam.norm_kloosterman(a) != 4:
            continue
        f = fam.function(a)
        if not is_bent(f):
            log.error("K = 4 but f_{a,1} is not bent for a = %#x", a)
            continue
        found.append(FieldElement(a, fam.ctx_n))
        if limit is not None and len(found) >= limit:
            break
    return found


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ExampleReport:
    checks: list[Check]
    manifest: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "manifest": self.manifest,
                "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                           for c in self.checks]}


def example_dual(ctx: GF2n, emb: Embedding) -> TracePolynomial:
    z = emb(0b10)
    return TracePolynomial(ctx, [(ctx.pow(z, k), e, d) for k, e, d in EXAMPLE_DUAL_TERMS])


def _first_difference(f: BooleanFunction, g: BooleanFunction) -> str:
    diff = np.nonzero(f.table != g.table)[0]
    if diff.size == 0:
        return "identical"
    x = int(diff[0])
    return f"{diff.size} differences, first at x = {x:#x} ({f(x)} vs {g(x)})"


def reproduce_example(registry: dict[int, int] | None = None, threads: int = 1) -> ExampleReport:
    """Recompute the m = 6 worked example with a = z^3 over F_2[z]/(z^6+z^4+z^3+z+1)."""
    f64 = field(6, registry)
    f4096 = field(12, registry)
    emb = make_embedding(f64, f4096)
    checks: list[Check] = []

    z3 = f64.pow(0b10, EXAMPLE_A_EXPONENT)
    k = kloosterman(f64, z3)
    checks.append(Check("K_6(z^3) = 4", k == 4, f"K_6 = {k}"))

    a = emb(z3)
    f = binomial_function(f4096, a, 1)
    spec = walsh_transform(f)
    bent = is_bent(f, spec)
    checks.append(Check("f_{a,1} is bent with |W| = 64", bent,
                        f"|W| values: {sorted({abs(v) for v in spec.value_set()})}"))

    matched = None
    detail = "f is not bent"
    if bent:
        f_dual = dual(f, spec)
        # Conjugate embeddings only relabel z; try the canonical one first.
        roots = subfield_roots(f64, f4096)
        roots.remove(emb.image)
        tried = []
        for root in [emb.image] + roots:
            e = Embedding(f64, f4096, root)
            fa = binomial_function(f4096, e(z3), 1)
            target = f_dual if root == emb.image else dual(fa)
            poly = example_dual(f4096, e).evaluate()
            if poly == target:
                matched = root
                break
            tried.append(f"z -> {root:#x}: {_first_difference(target, poly)}")
        detail = (f"matched under z -> {matched:#x}" if matched is not None
                  else "; ".join(tried))
    checks.append(Check("dual equals the seven-term trace polynomial", matched is not None, detail))

    g = decimate(f, EXAMPLE_DECIMATION)
    values = walsh_transform(g).value_set()
    checks.append(Check("spectrum of f_{a,1}(x^11) is {0, +-32, ..., +-160}",
                        values == EXAMPLE_DECIMATED_VALUES, f"values: {sorted(values)}"))

    scan = hyper_bent_scan(f, threads)
    failing = [kk for kk, ok in scan if not ok]
    coprime = gcd(EXAMPLE_DECIMATION, f4096.order - 1) == 1
    checks.append(Check("gcd(11, 4095) = 1 and f_{a,1} is not hyper-bent",
                        coprime and bool(failing),
                        f"{len(failing)} of {len(scan)} coset representatives non-bent"))

    manifest = {
        "tool_version": __version__,
        "moduli": {"6": f"{f64.modulus:#x}", "12": f"{f4096.modulus:#x}"},
        "embedding_F64_to_F4096": f"z -> {emb.image:#x}",
        "a": f"{a:#x}",
    }
    return ExampleReport(checks, manifest)
