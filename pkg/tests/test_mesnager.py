import numpy as np
import pytest

from bentforge.boolfun import dual, is_bent, walsh_transform
from bentforge.errors import DomainError
from bentforge.field import FieldElement, field
from bentforge.mesnager import (EXAMPLE_DUAL_TERMS, BinomialSpec, _family, binomial_function,
                                build_f, characterize, reproduce_example, search_bent)


def brute_f(ctx, a, b):
    m = ctx.degree // 2
    out = []
    for x in range(ctx.order):
        t1 = ctx.trace(ctx.mul(a, ctx.pow(x, (1 << m) - 1)))
        t2 = ctx.trace_rel(ctx.mul(b, ctx.pow(x, (ctx.order - 1) // 3)), 2)
        out.append(t1 ^ t2)
    return out


@pytest.fixture(scope="module")
def rows_m2():
    return characterize(2)


def test_function_matches_definition():
    ctx = field(4)
    fam = _family(2, None)
    for b in fam.f4_units():
        for a in (1, 6, 15):
            f = binomial_function(ctx, a, b)
            assert f.table.tolist() == brute_f(ctx, a, b)
            assert f == fam.function(a, b)


def test_domain_errors():
    with pytest.raises(DomainError):
        binomial_function(field(5), 1)
    with pytest.raises(DomainError):
        binomial_function(field(4), 0)
    ctx = field(4)
    outside = next(x for x in range(1, 16) if not ctx.in_subfield(x, 2))
    with pytest.raises(DomainError):
        binomial_function(ctx, 1, outside)
    with pytest.raises(DomainError):
        characterize(3)
    with pytest.raises(DomainError):
        search_bent(3, 1)


def test_binomial_spec():
    ctx = field(8)
    spec = BinomialSpec(4, FieldElement(7, ctx), FieldElement(1, ctx))
    assert build_f(spec) == binomial_function(ctx, 7, 1)
    with pytest.raises(DomainError):
        BinomialSpec(4, FieldElement(0, ctx), FieldElement(1, ctx))
    with pytest.raises(DomainError):
        BinomialSpec(2, FieldElement(7, ctx), FieldElement(1, ctx))
    with pytest.raises(DomainError):
        BinomialSpec(4, FieldElement(7, ctx), FieldElement(2, ctx))


def test_characterization_m2(rows_m2):
    assert len(rows_m2) == 15
    assert all(r.consistent for r in rows_m2)
    assert sum(r.bent for r in rows_m2) == 5
    for r in rows_m2:
        assert sum(r.spectrum_summary.values()) == 16
        d = r.to_dict()
        assert d["a"] == f"{r.a:#x}" and d["consistent"]


def test_characterization_threads_deterministic(rows_m2):
    again = characterize(2, threads=3)
    assert [r.to_dict() for r in again] == [r.to_dict() for r in rows_m2]


def test_sampled_characterization():
    rows = characterize(4, sample=10, seed=1)
    assert len(rows) == 10 and rows == sorted(rows, key=lambda r: r.a)
    assert all(r.consistent for r in rows)


def test_frobenius_invariance(rows_m2):
    ctx = field(4)
    bent = {r.a: r.bent for r in rows_m2}
    assert all(bent[a] == bent[ctx.mul(a, a)] for a in bent)


def test_b_invariance_m2():
    fam = _family(2, None)
    for a in range(1, 16):
        assert len({is_bent(fam.function(a, b)) for b in fam.f4_units()}) == 1


def test_search(rows_m2):
    hits = search_bent(2, None)
    assert [int(h) for h in hits] == sorted(r.a for r in rows_m2 if r.bent)
    assert search_bent(2, 0) == []
    assert [int(h) for h in search_bent(2, 2)] == [int(h) for h in hits[:2]]


def test_search_m4_properties():
    m = 4
    for a in search_bent(m, 6):
        f = binomial_function(field(8), int(a), 1)
        w = walsh_transform(f).values.astype(np.int64)
        assert np.all(np.abs(w) == 1 << m)
        assert np.all(w[1:] % (1 << (m + 1)) == 1 << m)
        assert is_bent(dual(f))


def test_example_reproduces():
    report = reproduce_example()
    assert report.passed, report.to_dict()
    assert [c.passed for c in report.checks] == [True] * 5
    assert report.manifest["moduli"] == {"6": "0x5b", "12": "0x1009"}
    assert report.manifest["embedding_F64_to_F4096"] == "z -> 0x21"
    assert len(EXAMPLE_DUAL_TERMS) == 7


def test_example_under_explicit_registry():
    assert reproduce_example(registry={6: 0b1011011}).passed
