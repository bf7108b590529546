import pytest
from hypothesis import given, strategies as st

from normbrauer import oracles
from normbrauer.oracles import (AbelianPParams, OracleError, SplitCompositeParams, abelian_p_brauer,
                                abelian_p_params, coker_h1_to_c, dihedral_brauer, lemma_checks,
                                perfect_h_formula, res_kernel_delta, schur_abelian, split_composite_brauer,
                                split_polynomial_brauer)
from normbrauer.cohom import qz_cohomology
from normbrauer.exactlin import FinAb
from normbrauer.groups import abelian, cyclic, dihedral, make_group, sym

Z = FinAb.cyclic


@pytest.mark.parametrize("nt, l, want", [(3, 1, Z(3)), (2, 1, FinAb()), (2, 2, Z(2)), (4, 1, Z(4)),
                                         (6, 1, Z(3)), (6, 2, Z(6)), (5, 2, Z(5))])
def test_dihedral_closed_form(nt, l, want):
    assert dihedral_brauer(nt, l) == want


def test_dihedral_params_checked():
    with pytest.raises(OracleError):
        dihedral_brauer(1)


def test_abelian_p_values():
    assert abelian_p_brauer(AbelianPParams(3, 1, 1)) == Z(3)
    assert abelian_p_brauer(AbelianPParams(2, 1, 1)).is_trivial()
    assert abelian_p_brauer(AbelianPParams(2, 2, 0, [], [3])) == Z(4)
    # l even: the odd-prime shape applies to p = 2 as well
    assert abelian_p_brauer(AbelianPParams(2, 1, 1, l=2)) == Z(2)


def test_abelian_p_validation():
    for bad in (dict(p=4, s=1), dict(p=2, s=2, e_list=[2]), dict(p=2, s=2, mu_list=[2]),
                dict(p=3, s=1, h1_order=3)):
        with pytest.raises(OracleError):
            AbelianPParams(**bad)


def test_abelian_p_params_structure():
    G = abelian([4, 2])
    # G/H cyclic of order 2 with H = <(1,0)>: G_1 = <(0,1)>, G_2 = H = Z/4, so mu = [2]
    p = abelian_p_params(G, G.subgroup([1]))
    assert (p.p, p.s, p.r, p.mu_list) == (2, 1, 0, [2])
    assert sorted(p.group_invariants()) == [2, 4]
    with pytest.raises(OracleError):
        abelian_p_params(abelian([2, 2]), abelian([2, 2]).trivial)  # G/H not cyclic
    with pytest.raises(OracleError):
        abelian_p_params(cyclic(6), cyclic(6).trivial)  # order 6 is not a prime power


def test_schur_and_hom():
    assert schur_abelian([2, 2]) == Z(2)
    assert schur_abelian([2, 4, 4]) == FinAb.from_orders([2, 2, 4])
    assert oracles.hom_abelian([4], [2, 6]) == FinAb.from_orders([2, 2])


@pytest.mark.parametrize("inv", [[2, 2], [2, 4], [3, 3], [2, 2, 2], [4, 4]])
def test_schur_matches_cohomology(inv):
    assert schur_abelian(inv) == qz_cohomology(abelian(inv), 2).group


def test_split_composite_first_case():
    assert split_composite_brauer(SplitCompositeParams([2], [2], l=2)) == Z(2)
    # non-cyclic 2-part: first case whatever the parity of l
    assert split_composite_brauer(SplitCompositeParams([2, 2], [2], l=1)) == \
        split_composite_brauer(SplitCompositeParams([2, 2], [2], l=2))


def test_split_composite_second_case():
    assert split_composite_brauer(SplitCompositeParams([2], [2], l=1, rho=1, u1=1)).is_trivial()
    with pytest.raises(OracleError):
        split_composite_brauer(SplitCompositeParams([2], [4], l=1, rho=1, u1=1))


def test_split_polynomial_values():
    G = cyclic(4)
    assert split_polynomial_brauer(G, [1, 3])[0].is_trivial()
    grp, gens = split_polynomial_brauer(G, [1, 1, 2])
    assert grp == Z(2)
    (g,) = gens
    # (psi, -psi, 0) up to the j-image (chi, chi, 2 chi)
    a, b, c = (x[0] for x in g)
    shifted = {((a - k) % 4, (b - k) % 4, (c - 2 * k) % 4) for k in range(4)}
    assert shifted & {(1, 3, 0), (3, 1, 0)}
    assert split_polynomial_brauer(cyclic(1), [1])[0].is_trivial()


def test_split_polynomial_hypotheses():
    with pytest.raises(OracleError):
        split_polynomial_brauer(cyclic(4), [1, 2])  # 4 does not divide 3
    with pytest.raises(OracleError):
        split_polynomial_brauer(cyclic(4), [2, 2])  # gcd 2


@pytest.mark.parametrize("nt", [3, 5, 7])
def test_coker_dihedral_odd(nt):
    G = dihedral(nt)
    assert coker_h1_to_c(G, G.meta["rotations"], 1, 1) == Z(nt)


def test_delta_examples():
    G = cyclic(4)
    delta, h1 = res_kernel_delta(G, G.whole, 1, 1)
    assert delta.is_trivial() and h1.is_trivial()
    K4 = abelian([2, 2])
    delta, h1 = res_kernel_delta(K4, K4.subgroup([1]), 1, 2)
    assert delta.is_trivial()
    assert h1 == Z(2)


def test_perfect_formula():
    assert perfect_h_formula(cyclic(4), cyclic(4).trivial).is_trivial()
    K4 = abelian([2, 2])
    assert perfect_h_formula(K4, K4.trivial) == Z(2)
    with pytest.raises(OracleError, match="perfect"):
        perfect_h_formula(K4, K4.whole)
    S3 = sym(3)
    with pytest.raises(OracleError, match="normal"):
        perfect_h_formula(S3, S3.subgroup([1]))


def test_lemma_checks_dihedral3():
    G = dihedral(3)
    out = lemma_checks(G, G.meta["rotations"])
    assert out["cor"]["status"] == "pass" and out["cor"]["checked"] == 3
    # the reflection acts by -1 on characters of the rotations: map0 does not apply
    assert out["map0"]["status"] == "skip"


def test_lemma_checks_odd_order_vanishing():
    G = cyclic(9)
    out = lemma_checks(G, G.subgroup([3]), 1, 1)["map0"]
    assert out["status"] == "pass"
    # every character of the order-3 subgroup has odd order, so full vanishing is checked for all
    assert out["vanishing_checked"] == out["checked"] > 0


def test_lemma_checks_even_l():
    G = abelian([2, 4])
    for H in G.all_subgroups:
        if H.is_normal() and 1 < H.order < G.order:
            out = lemma_checks(G, H, 2, 1)["map0"]
            assert out["status"] in ("pass", "skip")
            if out["status"] == "pass":
                assert out["vanishing_checked"] == out["checked"]


@given(st.sampled_from(["cyclic(4)", "cyclic(6)", "abelian(2,2)", "cyclic(3)"]), st.data())
def test_split_oracle_invariant_under_permutation(spec, data):
    from normbrauer.families import split_exponent_tuples
    G = make_group(spec)
    t = data.draw(st.sampled_from(split_exponent_tuples(G.order, 3)))
    perm = data.draw(st.permutations(list(t)))
    assert split_polynomial_brauer(G, t)[0] == split_polynomial_brauer(G, perm)[0]


@pytest.mark.parametrize("spec", ["cyclic(8)", "abelian(2,4)", "abelian(3,3)", "dihedral(4)"])
def test_cprime_membership_matches_fractions(spec):
    import itertools
    from fractions import Fraction
    G = make_group(spec)
    for H in G.all_subgroups:
        if not H.is_normal() or H.order in (1, G.order):
            continue
        qc = oracles.QuotientCharacters(G, H)
        for l, e in itertools.product((1, 2, 3), (1, 2, 4)):
            cp = oracles.CPrime(qc, l, e)
            for t in itertools.islice(itertools.product(qc.chars, repeat=qc.Q.order), 300):
                want = all((l * sum((qc.X.value(c, h) for c in t), Fraction(0))).denominator == 1
                           for h in cp.tors)
                assert cp.contains(t) == want
