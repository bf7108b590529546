import pytest
from hypothesis import given, strategies as st

from normbrauer import checks
from normbrauer.config import CapError, Caps, set_caps
from normbrauer.groups import (GroupError, GroupSyntaxError, abelian, cosets, cyclic, dihedral, direct,
                               make_group, quotient, subgroup_closure, sym)


def iso_type(G):
    """Sorted element orders: enough to tell the small groups used here apart."""
    return sorted(G.element_order(g) for g in G.elements)


def test_cyclic4():
    G = cyclic(4)
    assert G.order == 4
    assert G.element_order(1) == 4


def test_dihedral3():
    G = dihedral(3)
    assert G.order == 6 and not G.is_abelian()
    H = G.meta["rotations"]
    assert H.order == 3 and H.is_cyclic() and H.is_normal()


def test_klein():
    G = direct(cyclic(2), cyclic(2))
    assert G.order == 4 and G.exponent() == 2


def test_grammar():
    assert make_group("direct(cyclic(2),cyclic(2))").order == 4
    assert make_group("abelian(4, 2)").order == 8
    assert make_group("sym(3)").order == 6
    assert make_group("semidirect(cyclic(3), cyclic(2), inv)").is_abelian() is False


@pytest.mark.parametrize("text", ["cyclic(", "cyclic(2) x", "klein()", "dihedral(a)"])
def test_grammar_errors(text):
    with pytest.raises(GroupError):
        make_group(text)


def test_syntax_error_offset():
    with pytest.raises(GroupSyntaxError) as exc:
        make_group("cyclic(2) junk")
    assert exc.value.offset == 10


def test_closure():
    assert subgroup_closure(cyclic(6), []).order == 1
    G = dihedral(3)
    assert subgroup_closure(G, [G.meta["rotation"]]).order == 3
    assert subgroup_closure(cyclic(6), [2]).order == 3


@pytest.mark.parametrize("G, count", [(cyclic(4), 3), (abelian([2, 2]), 4), (dihedral(3), 5)])
def test_cyclic_subgroup_counts(G, count):
    assert len(G.cyclic_subgroups()) == count
    assert checks.check_cyclic_subgroups(G) is None


def test_quotients():
    G = dihedral(3)
    assert quotient(G, G.whole)[0].order == 1
    Q, _ = quotient(G, G.meta["rotations"])
    assert Q.order == 2
    A = abelian([4, 2])
    Q, proj = quotient(A, A.subgroup([2]))
    assert iso_type(Q) == [1, 2, 2, 2]
    assert checks.check_quotient(A, A.subgroup([2])) is None


def test_quotient_not_normal_witness():
    G = dihedral(3)
    with pytest.raises(GroupError, match="outside"):
        quotient(G, G.subgroup([G.meta["reflection"]]))


def test_cosets():
    G = dihedral(4)
    assert cosets(G, G.whole).size == 1
    assert cosets(G, G.trivial).size == 8
    assert cosets(G, G.subgroup([2])).size == 4
    assert cosets(G, G.subgroup([2])).is_transitive()


def test_group_cap():
    set_caps(Caps(max_group_order=10))
    with pytest.raises(CapError, match="max_group_order"):
        cyclic(12)


def test_sym4_subgroups():
    G = sym(4)
    # S_4 has 30 subgroups
    assert len(G.all_subgroups) == 30
    assert G.derived_subgroup().order == 12


small_groups = st.sampled_from(["cyclic(6)", "dihedral(4)", "abelian(2,4)", "sym(3)", "abelian(2,2,2)",
                                "direct(sym(3),cyclic(2))"])


@given(small_groups, st.data())
def test_subgroup_properties(spec, data):
    G = make_group(spec)
    H = data.draw(st.sampled_from(G.all_subgroups))
    assert G.order % H.order == 0
    assert checks.check_cosets(G, H) is None
    if H.is_normal():
        assert checks.check_quotient(G, H) is None
    else:
        assert H.normality_witness() is not None
