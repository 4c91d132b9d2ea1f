"""Exact exponential sums over binary fields and the binary weight function."""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .boolfun import walsh_at
from .errors import DomainError
from .field import GF2n


def kloosterman(ctx: GF2n, a: int) -> int:
    """K(a) = 1 + sum over x != 0 of (-1)^Tr(a x + 1/x)."""
    xs = ctx.elements()[1:]
    arg = ctx.mul_vec(xs, int(a)) ^ ctx.inv_vec(xs)
    ones = int(ctx.trace_vec(arg).sum(dtype=np.int64))
    return 1 + (xs.size - 2 * ones)


@lru_cache(maxsize=None)
def kloosterman_table(ctx: GF2n) -> np.ndarray:
    """K(a) for every a in the field, indexed by a."""
    xs = ctx.elements()[1:]
    inv = ctx.inv_vec(xs)
    out = np.empty(ctx.order, dtype=np.int64)
    for a in range(ctx.order):
        e = ctx.trace_vec(ctx.mul_vec(xs, a) ^ inv)
        out[a] = 1 + xs.size - 2 * int(e.sum(dtype=np.int64))
    out.flags.writeable = False
    return out


def dillon_sum(ctx: GF2n, a: int, c: int) -> int:
    """B = sum over x != 0 of (-1)^Tr(a x^(2^m - 1) + c x), n = 2m."""
    if a == 0 or c == 0:
        raise DomainError("a and c must be nonzero")
    if ctx.degree % 2:
        raise DomainError("needs even degree")
    m = ctx.degree // 2
    xs = ctx.elements()[1:]
    arg = ctx.mul_vec(ctx.pow_vec(xs, (1 << m) - 1), a) ^ ctx.mul_vec(xs, c)
    ones = int(ctx.trace_vec(arg).sum(dtype=np.int64))
    return xs.size - 2 * ones


def weight_mod(k: int, n: int) -> int:
    """Binary digit sum of k reduced modulo 2^n - 1 (0 when 2^n - 1 | k)."""
    if n < 1:
        raise DomainError("n must be positive")
    q1 = (1 << n) - 1
    return (k % q1).bit_count() if q1 > 1 else 0


def weight_mod_vec(k, n: int) -> np.ndarray:
    q1 = (1 << n) - 1
    return np.bitwise_count(np.asarray(k, dtype=np.int64) % q1).astype(np.int64)


def string_inequality_oracle(m: int, u_choice: int, a: int, b: int) -> bool:
    n = 2 * m
    q1 = (1 << n) - 1
    u = q1 // 3 if u_choice == 0 else 2 * (q1 // 3)
    s = (u - a + b) % q1
    t = (u + a - b) % q1
    total = weight_mod(a, n) + weight_mod(b, n) + weight_mod(s, n) + weight_mod(t, n)
    return total >= n


def string_inequality_margins(m: int, u_choice: int) -> np.ndarray:
    """wt(a)+wt(b)+wt(s)+wt(t) - 2m for all residues a, b; shape (q-1, q-1)."""
    n = 2 * m
    q1 = (1 << n) - 1
    u = q1 // 3 if u_choice == 0 else 2 * (q1 // 3)
    r = np.arange(q1, dtype=np.int64)
    w = weight_mod_vec(r, n)
    diff = r[:, None] - r[None, :]
    s = (u - diff) % q1
    t = (u + diff) % q1
    return w[:, None] + w[None, :] + w[s] + w[t] - n


def inverse_of_three(modulus: int) -> int:
    return pow(3, -1, modulus)


def kloosterman_subfield(ctx_n: GF2n, y: int, m: int) -> int:
    """K_m(y) for y in the degree-m subfield, summed inside F_{2^n} itself."""
    if not ctx_n.in_subfield(int(y), m):
        raise DomainError(f"{int(y):#x} is not in the degree-{m} subfield")
    xs = ctx_n.subfield_elements(m)[1:]
    arg = ctx_n.mul_vec(xs, int(y)) ^ ctx_n.inv_vec(xs)
    ones = int(ctx_n.trace_rel_vec(arg, m).sum(dtype=np.int64))
    return 1 + xs.size - 2 * ones


def norm_kloosterman(ctx_n: GF2n, a: int) -> int:
    """K_m(a^(2^m + 1)) for a in F_{2^n}, n = 2m."""
    m = ctx_n.degree // 2
    return kloosterman_subfield(ctx_n, ctx_n.pow(int(a), (1 << m) + 1), m)


def walsh_congruence_check(ctx_n: GF2n, a: int, c: int) -> bool:
    """W_{f_{a,1}}(c) = (4 - K) / 3 + 2^m mod 2^(m+1), with 1/3 taken mod 2^(m+1)."""
    from .mesnager import binomial_function

    if ctx_n.degree % 4:
        raise DomainError("m must be even")
    if a == 0 or c == 0:
        raise DomainError("a and c must be nonzero")
    m = ctx_n.degree // 2
    mod = 1 << (m + 1)
    k = norm_kloosterman(ctx_n, a)
    rhs = ((4 - k) * inverse_of_three(mod) + (1 << m)) % mod
    return walsh_at(binomial_function(ctx_n, a, 1), c) % mod == rhs
