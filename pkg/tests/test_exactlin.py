import math
import random

import pytest
from hypothesis import given, strategies as st

from normbrauer import checks
from normbrauer.exactlin import (AbHom, FinAb, IllDefinedHom, IntMatrix, cokernel, hom_analyze,
                                 smith_normal_form)
from normbrauer.config import CapError, Caps, set_caps


def snf_diag(rows, ncols=None):
    A = IntMatrix.from_dense(rows, ncols=ncols if ncols is not None else len(rows[0]))
    U, S, V = smith_normal_form(A)
    assert (U @ A) @ V == S
    return S


def test_snf_identity():
    assert snf_diag([[1, 0], [0, 1]]).to_dense() == [[1, 0], [0, 1]]


def test_snf_two_by_two():
    # d1 = gcd of entries, d2 = |det| / d1
    assert snf_diag([[2, 4], [6, 8]]).to_dense() == [[2, 0], [0, 4]]


def test_snf_zero():
    assert snf_diag([[0, 0]] * 3).to_dense() == [[0, 0]] * 3


def test_cokernel_free_part():
    c = cokernel(IntMatrix.from_dense([[2], [0]], ncols=1))
    assert c.group == FinAb((2,), 1)


def test_cokernel_determinant_two():
    c = cokernel(IntMatrix.from_dense([[1, 1], [1, -1]], ncols=2))
    assert c.group == FinAb.cyclic(2)
    # (1, 0) is not in the column span, (1, 1) is
    assert c.project([1, 0]) != (0,)
    assert c.project([1, 1]) == (0,)


def test_cokernel_no_relations():
    c = cokernel(IntMatrix.zeros(3, 0), ambient_rank=3)
    assert c.group == FinAb((), 3)


def test_surjection_z4_z2():
    a = hom_analyze(AbHom(FinAb.cyclic(4), FinAb.cyclic(2), [[1]]))
    assert a.kernel == FinAb.cyclic(2)
    assert a.cokernel.is_trivial()


def test_zero_map_z6():
    a = hom_analyze(AbHom.zero(FinAb.cyclic(6), FinAb.cyclic(6)))
    assert a.kernel == FinAb.cyclic(6)
    assert a.image.is_trivial()


def test_diagonal_character_map():
    # chi -> (chi, chi, 2 chi), brute force: only 0 maps to 0
    src, tgt = FinAb.cyclic(4), FinAb.from_orders([4, 4, 4])
    h = AbHom(src, tgt, [[1], [1], [2]])
    assert [x for x in range(4) if h((x,)) == (0, 0, 0)] == [0]
    a = hom_analyze(h)
    assert a.kernel.is_trivial()
    assert a.image == FinAb.cyclic(4)


def test_ill_defined_hom_has_witness():
    with pytest.raises(IllDefinedHom) as exc:
        AbHom(FinAb.cyclic(2), FinAb.cyclic(4), [[1]])
    assert exc.value.witness[0] == 0


def test_finab_canonical_form():
    assert FinAb.from_orders([2, 3]) == FinAb.cyclic(6)
    assert FinAb.from_orders([4, 6]).invariant_factors == (2, 12)
    assert FinAb.from_orders([1, 0]).free_rank == 1
    with pytest.raises(ValueError):
        FinAb((4, 2))


@pytest.mark.parametrize("text", ["0", "Z/2", "Z/2 x Z/4", "(Z/2)^3", "Z^2", "Z/3 x Z"])
def test_finab_parse_roundtrip(text):
    g = FinAb.parse(text)
    assert FinAb.parse(str(g)) == g


@given(st.lists(st.integers(0, 60), min_size=0, max_size=5), st.integers(0, 2))
def test_finab_str_roundtrip_property(orders, free):
    g = FinAb.from_orders(orders, free)
    assert FinAb.parse(str(g)) == g
    if free or 0 in orders:
        assert g.order() == 0
    else:
        assert g.order() == math.prod(orders)


matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-40, 40), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices)
def test_snf_properties(rows):
    assert checks.check_snf(rows) is None


@given(st.integers(0, 10_000))
def test_hom_index_property(seed):
    assert checks.check_hom_index(checks.random_hom(random.Random(seed))) is None


def test_snf_cell_cap():
    set_caps(Caps(max_cells=10))
    with pytest.raises(CapError) as exc:
        smith_normal_form(IntMatrix.from_dense([[1] * 5] * 5))
    assert "5" in str(exc.value)
