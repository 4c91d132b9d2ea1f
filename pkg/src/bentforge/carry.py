"""Digits and carries for signed sums of binary numbers modulo 2^n - 1.

Given periodic bit sequences a^(i) and nonzero integer coefficients t_i,
the residue s = sum t_i a^(i) mod 2^n - 1 has digits s_j and a unique
carry sequence c_j in [t_minus, t_plus - 1] with

    2 c_j + s_j = sum_i t_i a^(i)_j + c_{j-1}     (indices mod n).
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class PeriodicBitSeq:
    bits: tuple[int, ...]

    @classmethod
    def from_int(cls, value: int, n: int) -> "PeriodicBitSeq":
        """Digits of the representative of value mod 2^n - 1 in [0, 2^n - 2]."""
        r = value % ((1 << n) - 1) if n > 1 else 0
        return cls(tuple((r >> j) & 1 for j in range(n)))

    @property
    def period(self) -> int:
        return len(self.bits)

    def __getitem__(self, j: int) -> int:
        return self.bits[j % len(self.bits)]

    def __iter__(self):
        return iter(self.bits)

    def to_int(self) -> int:
        return sum(b << j for j, b in enumerate(self.bits))

    def weight(self) -> int:
        return sum(self.bits)

    def is_constant(self) -> bool:
        return len(set(self.bits)) <= 1


@dataclass(frozen=True)
class CarrySolution:
    digits: PeriodicBitSeq
    carries: tuple[int, ...]
    t_minus: int
    t_plus: int


def _column_sums(n: int, coeffs, seqs) -> list[int]:
    return [sum(t * s[j] for t, s in zip(coeffs, seqs)) for j in range(n)]


def _propagate(v, s, c_in: int) -> list[int] | None:
    """Carries c_0..c_{n-1} from c_{-1} = c_in, or None if parity fails."""
    out = []
    c = c_in
    for vj, sj in zip(v, s):
        x = vj + c - sj
        if x & 1:
            return None
        c = x >> 1
        out.append(c)
    return out


def closing_carries(v, s, lo: int, hi: int) -> list[list[int]]:
    """Every cyclically consistent carry sequence with entries in [lo, hi]."""
    found = []
    for c_in in range(lo, hi + 1):
        cs = _propagate(v, s, c_in)
        if cs is not None and cs[-1] == c_in and all(lo <= c <= hi for c in cs):
            found.append(cs)
    return found


def solve_carries(n: int, coeffs, seqs) -> CarrySolution:
    coeffs = [int(t) for t in coeffs]
    seqs = [s if isinstance(s, PeriodicBitSeq) else PeriodicBitSeq(tuple(s)) for s in seqs]
    if len(coeffs) != len(seqs) or not coeffs:
        raise DomainError("need one coefficient per sequence")
    if any(t == 0 for t in coeffs):
        raise DomainError("coefficients must be nonzero")
    if any(s.period != n for s in seqs):
        raise DomainError(f"all sequences must have period {n}")
    if all(s.is_constant() for s in seqs):
        raise DomainError("some sequence must be neither all-zero nor all-one")

    t_minus = sum(t for t in coeffs if t < 0)
    t_plus = sum(t for t in coeffs if t > 0)
    v = _column_sums(n, coeffs, seqs)
    total = sum(t * s.to_int() for t, s in zip(coeffs, seqs))
    digits = PeriodicBitSeq.from_int(total, n)

    # End-around add-with-carry, iterated until the wrap carry is stable.
    c = 0
    for _ in range(t_plus - t_minus + 2):
        c_in, local, carries = c, [], []
        for vj in v:
            x = vj + c
            local.append(x & 1)
            c = x >> 1
            carries.append(c)
        if c == c_in:
            break
    else:
        raise AssertionError("carry iteration did not stabilise")

    if tuple(local) != digits.bits:
        # Only the all-ones spelling of 0 differs from the canonical digits.
        if not (all(local) and not any(digits.bits)):
            raise AssertionError("add-and-carry produced a wrong residue")
    sols = closing_carries(v, digits.bits, t_minus, t_plus - 1)
    if len(sols) != 1:
        raise AssertionError(f"expected a unique carry sequence, found {len(sols)}")
    if tuple(local) == digits.bits and sols[0] != carries:
        raise AssertionError("fixed point and re-derivation disagree")
    return CarrySolution(digits, tuple(sols[0]), t_minus, t_plus)


def satisfies_recurrence(coeffs, seqs, sol: CarrySolution) -> bool:
    n = sol.digits.period
    v = _column_sums(n, coeffs, seqs)
    c = sol.carries
    return all(2 * c[j] + sol.digits[j] == v[j] + c[j - 1] for j in range(n))


def carry_sum_identity(coeffs, seqs, sol: CarrySolution) -> bool:
    rhs = sum(t * s.weight() for t, s in zip(coeffs, seqs)) - sol.digits.weight()
    return sum(sol.carries) == rhs


def uniqueness_probe(coeffs, seqs, sol: CarrySolution, start: int) -> bool:
    """Re-derive the carries starting at index ``start`` and compare.

    Rotating the cycle must again leave exactly one bounded solution, and
    it must be the rotation of ``sol.carries``.
    """
    n = sol.digits.period
    v = _column_sums(n, coeffs, seqs)
    rot = lambda xs: [xs[(start + j) % n] for j in range(n)]
    found = closing_carries(rot(v), rot(sol.digits.bits), sol.t_minus, sol.t_plus - 1)
    return len(found) == 1 and found[0] == rot(list(sol.carries))


def u_value(m: int, u_choice: int) -> int:
    base = ((1 << (2 * m)) - 1) // 3
    return base if u_choice == 0 else 2 * base


@dataclass(frozen=True)
class PairedSystems:
    """Both carry systems for s = u - a + b and t = u + a - b."""

    n: int
    u: PeriodicBitSeq
    a: PeriodicBitSeq
    b: PeriodicBitSeq
    s: CarrySolution
    t: CarrySolution

    @property
    def walk_weight(self) -> int:
        return sum(self.a) + sum(self.b) - sum(self.s.carries) - sum(self.t.carries)


def paired_systems(m: int, u_choice: int, a: int, b: int) -> PairedSystems:
    n = 2 * m
    u = PeriodicBitSeq.from_int(u_value(m, u_choice), n)
    aa = PeriodicBitSeq.from_int(a, n)
    bb = PeriodicBitSeq.from_int(b, n)
    s = solve_carries(n, (1, -1, 1), (u, aa, bb))
    t = solve_carries(n, (1, 1, -1), (u, aa, bb))
    return PairedSystems(n, u, aa, bb, s, t)


def weight_identity_check(m: int, u_choice: int, a: int, b: int) -> bool:
    """Sign of sum_j (a_j + b_j - c_j - d_j) from the paired carry systems."""
    p = paired_systems(m, u_choice, a, b)
    total = sum(p.s.carries) + sum(p.t.carries) + p.s.digits.weight() + p.t.digits.weight()
    if total != p.n:
        raise AssertionError(f"carry/digit sum {total} != {p.n}")
    return p.walk_weight >= 0
