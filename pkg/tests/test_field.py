import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bentforge.errors import DomainError
from bentforge.field import (EXAMPLE_MODULUS_6, GF2n, FieldElement, Embedding, clmul, field,
                             field_from_modulus, gf2_inverse, inv, is_irreducible,
                             least_irreducible, make_embedding, mul, poly_mod, subfield_roots,
                             trace_abs, trace_rel)


def naive_mul(x, y, f):
    """Schoolbook shift-and-add; independent of the library's reduction."""
    n = f.bit_length() - 1
    r = 0
    for i in range(n):
        if (y >> i) & 1:
            r ^= x << i
    for i in range(2 * n - 2, n - 1, -1):
        if (r >> i) & 1:
            r ^= f << (i - n)
    return r


def test_f4_arithmetic():
    f4 = field(2)
    z = 0b10
    assert f4.mul(z, z) == 0b11
    assert f4.inv(z) == 0b11
    assert FieldElement(z, f4) ** 3 == FieldElement(1, f4)


def test_least_irreducibles():
    assert least_irreducible(2) == 0b111
    assert least_irreducible(4) == 0b10011
    assert least_irreducible(12) == 0x1009
    assert field(6).modulus == EXAMPLE_MODULUS_6 == 0b1011011


def test_reducible_rejected():
    assert not is_irreducible(0b101)
    with pytest.raises(DomainError):
        GF2n(0b1000001)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_exhaustive_mul_against_naive(n):
    ctx = field(n)
    q = ctx.order
    xs = ctx.elements()
    for x in range(q):
        got = ctx.mul_vec(np.full(q, x, dtype=xs.dtype), xs)
        want = [naive_mul(x, y, ctx.modulus) for y in range(q)]
        assert got.tolist() == want


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_table_path_matches_reduce_path(n):
    ctx = field(n)
    xs = ctx.elements()
    ys = xs[::-1].copy()
    assert np.array_equal(ctx.mul_vec(xs, ys), ctx.mul_vec_reduce(xs, ys))


@pytest.mark.parametrize("n", [3, 4, 6, 8, 12])
def test_field_axioms_and_trace(n):
    ctx = field(n)
    xs = ctx.elements()[1:]
    assert np.all(ctx.mul_vec(xs, ctx.inv_vec(xs)) == 1)
    tr = ctx.trace_vec(ctx.elements())
    assert set(tr.tolist()) <= {0, 1}
    assert int(tr.sum()) == ctx.order // 2  # trace is balanced
    # Tr(x) = x + x^2 + ... + x^(2^(n-1))
    for x in [1, 2, 3, ctx.order - 1, ctx.primitive]:
        acc, y = 0, x
        for _ in range(n):
            acc ^= y
            y = ctx.mul(y, y)
        assert acc == ctx.trace(x)


def test_large_degree_without_tables():
    ctx = field(20)
    x, y = 0xABCDE, 0x12345
    assert ctx.mul(x, y) == naive_mul(x, y, ctx.modulus)
    assert ctx.mul(x, ctx.inv(x)) == 1
    assert ctx.pow(x, ctx.order - 1) == 1


elements12 = st.integers(min_value=0, max_value=4095)


@settings(max_examples=200, deadline=None)
@given(elements12, elements12, elements12)
def test_ring_laws(x, y, w):
    ctx = field(12)
    assert ctx.mul(x, y) == ctx.mul(y, x)
    assert ctx.mul(x, y ^ w) == ctx.mul(x, y) ^ ctx.mul(x, w)
    assert ctx.mul(ctx.mul(x, y), w) == ctx.mul(x, ctx.mul(y, w))
    assert ctx.frobenius(ctx.mul(x, y)) == ctx.mul(ctx.frobenius(x), ctx.frobenius(y))
    assert ctx.trace(x ^ y) == ctx.trace(x) ^ ctx.trace(y)


@pytest.mark.parametrize("d", [1, 2, 3, 4, 6])
def test_subfield_trace_vs_absolute(d):
    # For x in F_{2^d}: Tr^12_1(x) = (12/d) Tr^d_1(x) over F_2.
    ctx = field(12)
    sub = ctx.subfield_elements(d)
    rel = ctx.trace_rel_vec(sub, d)
    assert rel.tolist() == [ctx.trace_rel(int(x), d) for x in sub]
    assert np.array_equal(ctx.trace_vec(sub), rel * ((12 // d) & 1))
    assert int(rel.sum()) == len(sub) // 2


def test_trace_rel_rejects_outside_subfield():
    ctx = field(8)
    outside = next(x for x in range(ctx.order) if not ctx.in_subfield(x, 2))
    with pytest.raises(DomainError):
        ctx.trace_rel(outside, 2)
    with pytest.raises(DomainError):
        ctx.trace_rel(1, 3)


def test_subfield_elements():
    ctx = field(12)
    for d in (1, 2, 3, 4, 6, 12):
        sub = ctx.subfield_elements(d)
        assert len(sub) == 1 << d
    with pytest.raises(DomainError):
        ctx.subfield_elements(5)


def test_embedding_homomorphism_f64_to_f4096():
    f64, f4096 = field(6), field(12)
    assert subfield_roots(f64, f4096) == [33, 131, 1025, 1155, 2305, 2337]
    emb = make_embedding(f64, f4096)
    assert emb.image == 33
    xs = f64.elements()
    ex = emb(xs)
    assert len(set(ex.tolist())) == 64
    for x in range(64):
        for y in (1, 2, 7, 33, 63):
            assert emb(f64.mul(x, y)) == f4096.mul(emb(x), emb(y))
            assert emb(x ^ y) == emb(x) ^ emb(y)
        assert emb.preimage(emb(x)) == x


def test_embedding_composition():
    f2, f4, f8 = field(2), field(4), field(8)
    inner = make_embedding(f2, f4)
    outer = make_embedding(f4, f8)
    comp = outer.compose(inner)
    for x in range(4):
        assert comp(x) == outer(inner(x))
    with pytest.raises(ValueError):
        inner.compose(inner)


def test_embedding_rejects_non_root():
    with pytest.raises(DomainError):
        Embedding(field(6), field(12), 2)
    with pytest.raises(DomainError):
        make_embedding(field(4), field(6))


def test_field_element_operators():
    ctx = field(4)
    a, b = FieldElement(0b1010, ctx), FieldElement(0b0111, ctx)
    assert (a + b).value == 0b1101
    assert a - b == a + b and -a == a
    assert (a * b) / b == a
    assert mul(a, inv(a)) == FieldElement(1, ctx)
    assert trace_abs(a) == ctx.trace(0b1010)
    w = FieldElement(ctx.subfield_elements(2)[2], ctx)
    assert trace_rel(w, 2) == ctx.trace_rel(w.value, 2)
    assert a.bits == 0b1010
    with pytest.raises(DomainError):
        FieldElement(0, ctx).inverse()
    with pytest.raises(ValueError):
        a + FieldElement(1, field(2))
    with pytest.raises(DomainError):
        FieldElement(16, ctx)


def test_registry_override_changes_representation():
    ctx = field(4, {4: 0b11001})
    assert ctx.modulus == 0b11001
    assert field_from_modulus(0b11001) is ctx


def test_dual_basis_and_gram():
    ctx = field(6)
    g = ctx.gram_matrix()
    ginv = gf2_inverse(g)
    assert np.array_equal((g @ ginv) % 2, np.eye(6, dtype=g.dtype))
    dual = ctx.dual_basis()
    for i in range(6):
        for j in range(6):
            assert ctx.trace(ctx.mul(1 << i, dual[j])) == (i == j)


def test_clmul_and_poly_mod():
    assert clmul(0b11, 0b11) == 0b101
    assert poly_mod(0b10000, 0b10011) == 0b0011
