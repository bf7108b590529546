import pytest

from normbrauer.config import CapError, Caps, set_caps
from normbrauer.gmod import (Cokernel, LatticeError, LatticeMap, dual_abelianization, norm_torus_character,
                             perm_lattice, subsets_gset, tensor, trivial_lattice)
from normbrauer.groups import GSet, abelian, cosets, cyclic, dihedral, sym
from normbrauer.normic import ProblemSpec, build_general_system


def test_perm_lattices():
    G = dihedral(3)
    assert perm_lattice(GSet.point(G)).rank == 1
    assert perm_lattice(cosets(G, G.trivial)).rank == 6
    L = perm_lattice(cosets(G, G.meta["rotations"]))
    assert L.rank == 2
    s = G.meta["reflection"]
    assert L.apply(s, {0: 1}) == {1: 1}


def test_subsets():
    G = cyclic(4)
    X = cosets(G, G.trivial)
    assert subsets_gset(X, 4).size == 1
    assert subsets_gset(cosets(cyclic(2), cyclic(2).trivial), 1).size == 2
    S = subsets_gset(X, 2)
    assert S.size == 6
    # {0,2} and {1,3} have stabilizer of order 2, the other four points are one regular orbit
    assert sorted(len(o) for o in S.orbits()) == [2, 4]
    with pytest.raises(LatticeError):
        subsets_gset(X, 5)


def test_subsets_cap():
    set_caps(Caps(max_omega=5))
    X = cosets(cyclic(4), cyclic(4).trivial)
    with pytest.raises(CapError, match="6 subsets"):
        subsets_gset(X, 2)


def test_tensor():
    G = sym(3)
    A = perm_lattice(cosets(G, G.subgroup([1])))  # rank 3, transposition stabilizer
    B = perm_lattice(cosets(G, G.derived_subgroup()))  # rank 2
    T = tensor(B, A)
    assert T.rank == 6 and T.is_permutation
    Z = trivial_lattice(G)
    assert tensor(Z, A).rank == A.rank


def test_norm_torus_trivial_field():
    G = cyclic(1)
    _, _, _, c = norm_torus_character(GSet.point(G))
    assert c.lattice.rank == 0


def test_norm_torus_quadratic():
    G = cyclic(2)
    _, _, _, c = norm_torus_character(cosets(G, G.trivial))
    assert c.lattice.rank == 1
    assert c.lattice.apply(1, {0: 1}) == {0: -1}


def test_norm_torus_regular_has_no_invariants():
    G = dihedral(3)
    _, _, _, c = norm_torus_character(cosets(G, G.trivial))
    assert c.lattice.rank == 5
    assert c.lattice.fixed_rank() == 0


def test_cokernel_torsion_rejected():
    G = cyclic(1)
    Z = trivial_lattice(G)
    with pytest.raises(LatticeError, match="torsion"):
        Cokernel(LatticeMap(Z, Z, [{0: 2}], name="x2"))
    with pytest.raises(LatticeError, match="not injective"):
        Cokernel(LatticeMap(Z, Z, [{}], name="zero"))


def test_biquadratic_pair_lattices():
    # Klein four group, K Galois, two quadratic factors with e = (1, 1)
    G = abelian([2, 2])
    spec = ProblemSpec(G, [G.trivial], [(G.subgroup([1]), 1), (G.subgroup([2]), 1)], variant="X")
    sys = build_general_system(spec)
    assert sys.D.rank == 17
    assert sys.ZP.rank == 4
    assert sys.Tp.lattice.rank == 13


def test_dual_abelianization_central():
    G = cyclic(6)
    M = dual_abelianization(G, G.subgroup([2]))
    assert M.module.order() == 3 and M.is_trivial_action()


def test_dual_abelianization_dihedral():
    G = dihedral(3)
    M = dual_abelianization(G, G.meta["rotations"])
    assert M.module.order() == 3
    # the reflection class acts by -1
    assert M.apply(1, (1,)) == (2,)


def test_dual_abelianization_perfect():
    # the trivial subgroup is the only perfect subgroup at this scale
    G = sym(4)
    M = dual_abelianization(G, G.trivial)
    assert M.module.order() == 1
