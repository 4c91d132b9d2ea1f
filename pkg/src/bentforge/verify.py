"""End-to-end checks behind ``bentforge verify-paper`` and the acceptance tests.

Every check is exact; each returns a :class:`Outcome` with a short detail
string and is paired with a wall-clock budget in seconds.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .boolfun import (BooleanFunction, is_bent, is_bent_mod, walsh_at, walsh_transform,
                      walsh_transform_many)
from .carry import (PeriodicBitSeq, carry_sum_identity, satisfies_recurrence, solve_carries,
                    uniqueness_probe)
from .certigraph import (build_graph, certify_nonnegative, Certificate, scc_decompose,
                         verify_certificate, walk_correspondence_check, weight_histogram)
from .expsums import dillon_sum, norm_kloosterman, string_inequality_margins, walsh_congruence_check
from .field import field
from .mesnager import _family, characterize, reproduce_example
from .padic import (PadicCtx, davenport_hasse_check, dillon_gauss_identity_check, gauss_sum,
                    interpolation_check, kloosterman_gauss_check, stickelberger_check)

EXPECTED_HISTOGRAM = {-1: 8, 0: 32, 1: 80, 2: 32, 3: 8}


@dataclass
class Outcome:
    passed: bool
    detail: str = ""


@dataclass
class Result:
    key: str
    title: str
    passed: bool
    detail: str
    seconds: float
    budget: float

    @property
    def ok(self) -> bool:
        return self.passed and self.seconds < self.budget

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        return f"{tag}  {self.key:<22} {self.seconds:7.2f}s / {self.budget:g}s  {self.detail}"


def check_digraph() -> Outcome:
    g = build_graph()
    degrees = {len(g.out[v]) for v in g.vertices}
    comps = scc_decompose(g)
    sizes = sorted((len(c) for c in comps), reverse=True)
    h = g.subgraph(max(comps, key=len))
    hist = weight_histogram(h)
    cert = certify_nonnegative(h)
    certified = isinstance(cert, Certificate) and verify_certificate(h, cert)
    ok = (len(g) == 72 and degrees == {4} and len(comps) == 33
          and sizes == [40] + [1] * 32 and hist == EXPECTED_HISTOGRAM and certified)
    return Outcome(ok, f"V={len(g)} deg={sorted(degrees)} SCC={len(comps)} "
                       f"H={sizes[0]} hist={hist} certified={certified}")


def check_weight_inequality() -> Outcome:
    worst = {}
    for m in range(1, 6):
        worst[m] = min(int(string_inequality_margins(m, u).min()) for u in (0, 1))
    g = build_graph()
    walks = {m: walk_correspondence_check(m, g) for m in range(1, 5)}
    ok = all(v >= 0 for v in worst.values()) and all(walks.values())
    return Outcome(ok, f"min margin by m={worst} walks={walks}")


def check_example() -> Outcome:
    report = reproduce_example()
    failed = [c.name for c in report.checks if not c.passed]
    return Outcome(report.passed, "all 5 assertions" if not failed else f"failed: {failed}")


def check_characterization() -> Outcome:
    details = []
    ok = True
    for m in (2, 4):
        rows = characterize(m)
        bent = {r.a for r in rows if r.bent}
        k4 = {r.a for r in rows if r.kloosterman == 4}
        ok &= bent == k4
        details.append(f"m={m}: {len(bent)} bent, {len(k4)} with K=4")
    fam = _family(2, None)
    b_inv = all(len({is_bent(fam.function(a, b)) for b in fam.f4_units()}) == 1
                for a in range(1, fam.ctx_n.order))
    details.append(f"b-invariance at m=2: {b_inv}")
    return Outcome(ok and b_inv, "; ".join(details))


def check_stickelberger() -> Outcome:
    res = {}
    for n in (4, 6, 8):
        ctx = PadicCtx(field(n), n + 4)
        res[n] = stickelberger_check(ctx) and gauss_sum(ctx, 0) == -1
    return Outcome(all(res.values()), f"by n: {res}")


def check_identities() -> Outcome:
    res = {}
    res["interp16"] = interpolation_check(PadicCtx(field(4), 12))
    res["interp64"] = interpolation_check(PadicCtx(field(6), 12))
    c2 = PadicCtx(field(4), 16)
    res["dillon_m2"] = all(dillon_gauss_identity_check(c2, a, c)
                           for a in range(1, 16) for c in range(1, 16))
    c3 = PadicCtx(field(6), 16)
    rng = random.Random(3)
    res["dillon_m3"] = all(dillon_gauss_identity_check(c3, rng.randrange(1, 64), rng.randrange(1, 64))
                           for _ in range(20))
    for m, ctx in ((2, c2), (3, c3)):
        res[f"dh_m{m}"] = davenport_hasse_check(ctx)
        res[f"kg_m{m}"] = kloosterman_gauss_check(ctx)
    return Outcome(all(res.values()), " ".join(f"{k}={v}" for k, v in res.items()))


def check_congruences() -> Outcome:
    rng = random.Random(7)
    res = {}
    for m in (2, 3, 4, 5):
        ctx = field(2 * m)
        mod = 1 << (m + 1)
        good = 0
        for _ in range(100):
            a, c = rng.randrange(1, ctx.order), rng.randrange(1, ctx.order)
            k = norm_kloosterman(ctx, a)
            good += (dillon_sum(ctx, a, c) - (k + (1 << m) - 1)) % mod == 0
        res[f"dillon_m{m}"] = good == 100
    f16 = field(4)
    res["walsh_m2"] = all(walsh_congruence_check(f16, a, c) for a in range(1, 16) for c in range(1, 16))
    f256 = field(8)
    res["walsh_m4"] = all(walsh_congruence_check(f256, rng.randrange(1, 256), rng.randrange(1, 256))
                          for _ in range(50))
    return Outcome(all(res.values()), " ".join(f"{k}={v}" for k, v in res.items()))


def random_carry_instance(rng: random.Random):
    n = rng.randint(2, 16)
    r = rng.randint(1, 3)
    coeffs = [rng.choice([-3, -2, -1, 1, 2, 3]) for _ in range(r)]
    while True:
        seqs = [PeriodicBitSeq(tuple(rng.randint(0, 1) for _ in range(n))) for _ in range(r)]
        if not all(s.is_constant() for s in seqs):
            return n, coeffs, seqs


def check_carries(count: int = 10_000, seed: int = 11) -> Outcome:
    rng = random.Random(seed)
    failures = 0
    for _ in range(count):
        n, coeffs, seqs = random_carry_instance(rng)
        sol = solve_carries(n, coeffs, seqs)
        q1 = (1 << n) - 1
        sound = (sol.digits.to_int() - sum(t * s.to_int() for t, s in zip(coeffs, seqs))) % q1 == 0
        bounded = all(sol.t_minus <= c <= sol.t_plus - 1 for c in sol.carries)
        ok = (sound and bounded and satisfies_recurrence(coeffs, seqs, sol)
              and carry_sum_identity(coeffs, seqs, sol)
              and uniqueness_probe(coeffs, seqs, sol, rng.randrange(n)))
        failures += not ok
    return Outcome(failures == 0, f"{count - failures}/{count} instances pass")


def check_spectra(seed: int = 5) -> Outcome:
    rng = np.random.default_rng(seed)
    parseval = agree = True
    for n in (2, 4, 6, 8, 10, 12):
        ctx = field(n)
        for _ in range(100):
            f = BooleanFunction(ctx, rng.integers(0, 2, ctx.order))
            spec = walsh_transform(f)
            parseval &= spec.parseval_ok()
            b = int(rng.integers(0, ctx.order))
            agree &= walsh_at(f, b) == spec[b]
    ctx = field(4)
    tables = rng.integers(0, 2, (10_000, 16))
    spectra = walsh_transform_many(ctx, tables)
    parseval &= bool(np.all((spectra ** 2).sum(axis=1) == 1 << 8))
    bent = np.all(np.abs(spectra) == 4, axis=1)
    bent_mod = np.all(spectra[:, 1:] % 8 == 4, axis=1)
    equiv = bool(np.array_equal(bent, bent_mod))
    spot = all(is_bent(BooleanFunction(ctx, t)) == is_bent_mod(BooleanFunction(ctx, t))
               for t in tables[:200])
    ok = parseval and agree and equiv and spot
    return Outcome(ok, f"parseval={parseval} fast=slow={agree} bent<=>bent_mod={equiv and spot} "
                       f"({int(bent.sum())} bent of 10000)")


CRITERIA: list[tuple[str, str, Callable[[], Outcome], float]] = [
    ("1-digraph", "digraph certification", check_digraph, 1.0),
    ("2-weight-inequality", "binary weight inequality", check_weight_inequality, 60.0),
    ("3-example", "worked example, m = 6", check_example, 120.0),
    ("4-characterization", "bent iff K = 4, m = 2 and 4", check_characterization, 30.0),
    ("5-stickelberger", "Stickelberger congruence", check_stickelberger, 30.0),
    ("6-identities", "Gauss-sum identity suite", check_identities, 60.0),
    ("7-congruences", "Kloosterman congruences", check_congruences, 60.0),
    ("8-carries", "carry theorem properties", check_carries, 10.0),
    ("9-spectra", "spectral properties", check_spectra, 30.0),
]


def run(key: str, title: str, fn: Callable[[], Outcome], budget: float) -> Result:
    t0 = time.perf_counter()
    try:
        out = fn()
    except Exception as exc:  # a crash is a failed check, not a usage error
        out = Outcome(False, f"{type(exc).__name__}: {exc}")
    return Result(key, title, out.passed, out.detail, time.perf_counter() - t0, budget)


def run_all(keys=None) -> list[Result]:
    return [run(*c) for c in CRITERIA if keys is None or c[0] in keys]
