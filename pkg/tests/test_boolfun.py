import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bentforge.boolfun import (BooleanFunction, TracePolynomial, WalshSpectrum,
                               cube_coset_indicator, cube_coset_indicator_table, decimate, dual,
                               fwht, hyper_bent_scan, is_bent, is_bent_mod, is_hyper_bent,
                               unit_coset_representatives, walsh_at, walsh_transform,
                               walsh_transform_many)
from bentforge.errors import DomainError
from bentforge.expsums import kloosterman
from bentforge.field import FieldElement, field, make_embedding


def brute_walsh(f: BooleanFunction, b: int) -> int:
    ctx = f.ctx
    return sum((-1) ** (f(x) ^ ctx.trace(ctx.mul(b, x))) for x in range(ctx.order))


def tables(n):
    return st.lists(st.integers(0, 1), min_size=1 << n, max_size=1 << n)


def test_all_functions_on_f4():
    ctx = field(2)
    bent = []
    for bits in itertools.product((0, 1), repeat=4):
        f = BooleanFunction(ctx, bits)
        spec = walsh_transform(f)
        assert spec.values.tolist() == [brute_walsh(f, b) for b in range(4)]
        assert is_bent(f, spec) == is_bent_mod(f, spec)
        bent.append(is_bent(f, spec))
    # Two-variable bent functions are exactly those of odd weight.
    assert sum(bent) == 8
    for bits, b in zip(itertools.product((0, 1), repeat=4), bent):
        assert b == (sum(bits) % 2 == 1)


def test_all_functions_on_f16():
    ctx = field(4)
    all_tables = ((np.arange(1 << 16)[:, None] >> np.arange(16)) & 1).astype(np.uint8)
    spectra = walsh_transform_many(ctx, all_tables)
    assert np.all((spectra.astype(np.int64) ** 2).sum(axis=1) == 256)
    bent = np.all(np.abs(spectra) == 4, axis=1)
    assert int(bent.sum()) == 896
    bent_mod = np.all(spectra[:, 1:] % 8 == 4, axis=1)
    assert np.array_equal(bent, bent_mod)


def test_zero_function_spectrum():
    ctx = field(4)
    spec = walsh_transform(BooleanFunction.zero(ctx))
    assert spec[0] == 16 and spec.histogram() == {0: 15, 16: 1}
    assert not is_bent(BooleanFunction.zero(ctx))


@settings(max_examples=60, deadline=None)
@given(tables(6), st.integers(0, 63))
def test_parseval_and_fast_equals_slow(bits, b):
    f = BooleanFunction(field(6), bits)
    spec = walsh_transform(f)
    assert spec.parseval_ok()
    assert spec[b] == walsh_at(f, b) == brute_walsh(f, b)
    assert all(v % 2 == 0 for v in spec.values.tolist())


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=32, max_size=32))
def test_fwht_is_involution_up_to_scale(xs):
    a = np.array(xs, dtype=np.int64)
    assert np.array_equal(fwht(fwht(a)), 32 * a)


@settings(max_examples=40, deadline=None)
@given(tables(4))
def test_hex_roundtrip(bits):
    ctx = field(4)
    f = BooleanFunction(ctx, bits)
    assert BooleanFunction.from_hex(ctx, f.to_hex()) == f


def test_bad_tables_rejected():
    ctx = field(2)
    with pytest.raises(DomainError):
        BooleanFunction(ctx, [0, 1, 0])
    with pytest.raises(DomainError):
        BooleanFunction(ctx, [0, 1, 2, 0])
    with pytest.raises(DomainError):
        BooleanFunction.from_hex(ctx, "ff")


def test_odd_degree_rejected():
    f = BooleanFunction.zero(field(3))
    with pytest.raises(DomainError):
        is_bent(f)
    with pytest.raises(DomainError):
        is_bent_mod(f)


def test_bent_mod_ignores_w0():
    # Dropping the b = 0 entry is what the residue test is defined on;
    # a spectrum with a bad W(0) but good residues elsewhere still passes.
    ctx = field(2)
    f = BooleanFunction(ctx, [1, 0, 0, 0])
    spec = walsh_transform(f)
    fake = WalshSpectrum(spec.n, np.array([0] + spec.values[1:].tolist(), dtype=np.int32))
    assert is_bent_mod(f, fake) and not is_bent(f, fake)


def _bent_functions(n, count, seed=1):
    rng = np.random.default_rng(seed)
    ctx = field(n)
    out = []
    while len(out) < count:
        f = BooleanFunction(ctx, rng.integers(0, 2, ctx.order))
        if is_bent(f):
            out.append(f)
    return out


def test_dual_is_bent_involution():
    for f in _bent_functions(4, 20):
        g = dual(f)
        assert is_bent(g)
        assert dual(g) == f
        # W_f(b) = 2^m (-1)^{dual(b)}
        assert np.array_equal(walsh_transform(f).values, 4 * (1 - 2 * g.table.astype(np.int32)))


def test_dual_of_non_bent_rejected():
    with pytest.raises(DomainError):
        dual(BooleanFunction.zero(field(4)))


def test_decimation():
    ctx = field(6)
    rng = np.random.default_rng(2)
    f = BooleanFunction(ctx, rng.integers(0, 2, 64))
    assert decimate(f, 1) == f
    # x -> x^2 is linear, so the spectrum multiset is preserved.
    assert walsh_transform(decimate(f, 2)).histogram() == walsh_transform(f).histogram()
    assert decimate(decimate(f, 5), pow(5, -1, 63)) == f
    with pytest.raises(DomainError):
        decimate(f, 3)


def test_unit_coset_representatives():
    assert len(unit_coset_representatives(12)) == 144
    assert unit_coset_representatives(4) == [1, 7]
    assert unit_coset_representatives(1) == [1]


def test_dillon_monomial_hyper_bentness():
    # Tr(a x^(2^m-1)) with a in F_{2^m}^* is hyper-bent iff K_m(a) = 0,
    # using the convention where the sum includes x = 0.
    for m in (2, 3):
        n = 2 * m
        ctx, sub = field(n), field(m)
        emb = make_embedding(sub, ctx)
        for a in range(1, sub.order):
            f = TracePolynomial(ctx, [(emb(a), (1 << m) - 1, n)]).evaluate()
            hb = is_hyper_bent(f)
            assert hb == (kloosterman(sub, a) == 0)
            assert hb == all(ok for _, ok in hyper_bent_scan(f, threads=2))


def test_non_bent_is_not_hyper_bent():
    assert not is_hyper_bent(BooleanFunction.zero(field(4)))


def test_cube_coset_indicator():
    ctx = field(6)
    table = cube_coset_indicator_table(ctx)
    cubes = {ctx.pow(x, 3) for x in range(1, 64)}
    for x in range(64):
        want = 0 if x == 0 or x in cubes else 1
        assert table[x] == want == cube_coset_indicator(FieldElement(x, ctx))
    assert int(table.sum()) == 42
    with pytest.raises(DomainError):
        cube_coset_indicator_table(field(5))


def test_trace_polynomial_linear_term():
    ctx = field(4)
    f = TracePolynomial(ctx, [(3, 1, 4)]).evaluate()
    assert f.table.tolist() == [ctx.trace(ctx.mul(3, x)) for x in range(16)]
    spec = walsh_transform(f)
    assert spec[3] == 16 and spec.histogram() == {0: 15, 16: 1}


def test_spectrum_json():
    import json
    spec = walsh_transform(BooleanFunction(field(2), [1, 0, 0, 0]))
    data = json.loads(spec.to_json())
    assert data["n"] == 2 and len(data["values"]) == 4
