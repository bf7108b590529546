import pytest

from normbrauer.exactlin import FinAb
from normbrauer.families import dihedral_instance, split_instance
from normbrauer.groups import abelian, cyclic, sym
from normbrauer.normic import (BrauerReport, HypothesisError, ProblemSpec, brauer_report, build_galois_system,
                               build_system, cths_quotient, normalize, psi_characters, restrict_problem,
                               sha_kernel, vertical_part)
from normbrauer.engine import vertical_part as engine_vertical

K4 = abelian([2, 2])


def biquadratic_pair(variant="X"):
    return ProblemSpec(K4, [K4.trivial], [(K4.subgroup([1]), 1), (K4.subgroup([2]), 1)], variant=variant,
                       name="biquadratic pair")


def test_normalize_reduces_exponent():
    G = cyclic(4)
    spec = ProblemSpec(G, [G.trivial], [(G.whole, 5), (G.whole, 3)], variant="X'")
    out, notes = normalize(spec)
    assert [e for _, e in out.factors] == [1, 3]
    assert out.synthetic is None
    assert any("reduced" in x for x in notes)


def test_normalize_appends_t_factor():
    G = cyclic(8)
    spec = ProblemSpec(G, [G.trivial], [(G.subgroup([2]), 1)], variant="X'")
    out, _ = normalize(spec)
    assert out.synthetic == 1
    assert out.factors[1][0] == G.whole and out.factors[1][1] == 6
    assert out.m % out.n == 0


def test_galois_construction_records_delta():
    G = cyclic(8)
    spec = ProblemSpec(G, [G.trivial], [(G.subgroup([2]), 1)], variant="X")
    sys, spec2, notes = build_system(spec)
    assert sys.kind == "galois-bold"
    assert (sys.info["delta"], sys.info["delta'"]) == (6, 1)
    assert spec2.synthetic is None


def test_exponent_divisible_by_n_rejected():
    G = cyclic(4)
    spec = ProblemSpec(G, [G.trivial], [(G.whole, 4), (G.whole, 1)], variant="X'")
    with pytest.raises(HypothesisError, match="absorb"):
        normalize(spec)


def test_spec_validation():
    G = cyclic(4)
    with pytest.raises(HypothesisError):
        ProblemSpec(G, [G.trivial], [], variant="X")
    with pytest.raises(HypothesisError):
        ProblemSpec(G, [G.trivial], [(G.whole, 1)], variant="Y")
    with pytest.raises(HypothesisError):
        ProblemSpec(G, [cyclic(2).trivial], [(G.whole, 1)])
    # variant X needs a Galois field
    S3 = sym(3)
    spec = ProblemSpec(S3, [S3.subgroup([1])], [(S3.whole, 3)], variant="X")
    with pytest.raises(HypothesisError, match="Galois"):
        build_system(spec)


def test_biquadratic_pair_system():
    sys, _, _ = build_system(biquadratic_pair())
    assert sys.kind == "general"
    # P_1 P_2 is separable of degree 4 = [K:k]: no extra S summand beyond Z
    s = sys.summary()
    assert (s["rank_D"], s["rank_ZP"], s["rank_T'"]) == (17, 4, 13)
    assert sys.n == 4 and sys.m == 4


def test_dihedral4_bold_rank():
    sys, _, _ = build_system(dihedral_instance(4, 1))
    # Z[L'/k] (x) Z[K/k] (+) Z[K/k] (+) Z[Omega], Omega the 2-subsets of 8 points
    assert sys.D.rank == 16 + 8 + 28


def test_trivial_field():
    G = cyclic(1)
    spec = ProblemSpec(G, [G.whole], [(G.whole, 1)], variant="X")
    sys, _, _ = build_system(spec)
    assert sys.T.lattice.rank == 0
    rep = brauer_report(spec)
    assert rep.order == 1


def test_biquadratic_pair_report():
    rep = brauer_report(biquadratic_pair())
    assert rep.V.is_trivial() and rep.W.is_trivial()
    assert rep.exact_group == FinAb() and rep.method == "W=0"
    assert rep.cths == FinAb.cyclic(2)


def test_split_z4_generator():
    spec = split_instance(cyclic(4), (1, 1, 2))
    vp = vertical_part(spec)
    assert vp.group == FinAb.cyclic(2)
    sys, _, _ = build_system(spec)
    (row,) = psi_characters(sys, vp.gens)
    chis = {label: (X, chi) for label, X, chi in row}
    assert set(chis) == {"L1", "L2"}
    X, a = chis["L1"]
    _, b = chis["L2"]
    assert X.char_order(a) == 4
    assert X.add(a, b) == X.zero()


def test_split_z4_13_trivial():
    rep = brauer_report(split_instance(cyclic(4), (1, 3)))
    assert rep.order == 1


def test_dihedral3_vertical():
    rep = brauer_report(dihedral_instance(3, 1))
    assert rep.V == FinAb.cyclic(3) and rep.W.is_trivial()
    assert rep.exact_group == FinAb.cyclic(3)
    assert rep.generators and "Cor" in rep.generators[0]


def test_w_vanishes_for_cyclic_groups():
    for n in (2, 3, 4, 6):
        G = cyclic(n)
        for H in G.all_subgroups:
            if H.order < n:
                assert sha_kernel(ProblemSpec(G, [G.trivial], [(H, 1)], variant="X")).group.is_trivial()


def test_unconstrained_characters_when_e_prime_is_one():
    # two rational roots with exponents (1, 4) over Z/5: e' = 1 makes the torsion condition vacuous,
    # so Ker f_* is {(chi, -chi)}, a full copy of the character group, and it equals the j-image
    from normbrauer.cohom import reduced_induced_map
    from normbrauer.exactlin import kernel_subgroup
    spec = split_instance(cyclic(5), (1, 4))
    sys, _, _ = build_system(spec)
    fstar = reduced_induced_map(sys.f, 2)
    ker, _ = kernel_subgroup(fstar.matrix, fstar.source.mods, fstar.target.mods)
    assert ker == FinAb.cyclic(5)
    assert engine_vertical(sys).group.is_trivial()


def test_paths_agree_report_note():
    rep = brauer_report(dihedral_instance(3, 1), path="both")
    assert rep.extra["paths_agree"] is True
    with pytest.raises(ValueError):
        brauer_report(dihedral_instance(3, 1), path="fast")


def test_cths_examples():
    G = cyclic(4)
    assert cths_quotient(ProblemSpec(G, [G.trivial], [(G.subgroup([2]), 1)], variant="X")) == FinAb()
    assert cths_quotient(ProblemSpec(K4, [K4.trivial], [(K4.trivial, 1)], variant="X")) == FinAb.cyclic(2)
    # H^2((Z/2)^2, Q/Z) = Z/2 restricts to zero on a Z/2
    assert cths_quotient(ProblemSpec(K4, [K4.trivial], [(K4.subgroup([1]), 1)], variant="X")) == FinAb.cyclic(2)


def test_cths_rejects_rational_factor_among_several():
    G = cyclic(3)
    spec = ProblemSpec(G, [G.trivial], [(G.whole, 1)] * 3, variant="X")
    with pytest.raises(HypothesisError, match="cap K = k"):
        cths_quotient(spec)


def test_cths_needs_galois_field():
    S3 = sym(3)
    spec = ProblemSpec(S3, [S3.subgroup([1])], [(S3.whole, 1)], variant="X'")
    with pytest.raises(HypothesisError):
        cths_quotient(spec)


def test_restrict_identity():
    spec = biquadratic_pair()
    r = restrict_problem(spec, K4.whole)
    assert r.G.order == 4 and len(r.components) == 1 and len(r.factors) == 2


def test_restrict_to_one_factor():
    spec = biquadratic_pair()
    r = restrict_problem(spec, K4.subgroup([1]))
    # over L_1, K becomes two copies of a quadratic field; P_1 gets two rational roots
    assert r.G.order == 2
    assert [U.index for U in r.components] == [2, 2]
    assert sorted(V.index for V, _ in r.factors) == [1, 1, 2]
    assert r.variant == "X'"


def test_report_json_round_trip():
    rep = brauer_report(dihedral_instance(3, 1))
    back = BrauerReport.from_json(rep.to_json())
    assert back.to_json() == rep.to_json()
    bad = rep.to_json()
    bad["order"] = 7
    with pytest.raises(ValueError):
        BrauerReport.from_json(bad)


def test_honest_and_override_embeddings_agree():
    for nt in (2, 3):
        a = brauer_report(dihedral_instance(nt, 2, "honest"))
        b = brauer_report(dihedral_instance(nt, 2, "override"))
        assert (a.V, a.W) == (b.V, b.W)


def test_bold_and_plain_galois_systems():
    spec = dihedral_instance(3, 2)
    bold = build_galois_system(spec, bold=True)
    plain = build_galois_system(spec, bold=False)
    assert bold.info["l"] == 2 and plain.info["l"] == 1
    assert bold.group.order == 6 and plain.group.order == 12
