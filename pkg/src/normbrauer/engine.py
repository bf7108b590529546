"""Evaluation of ``V`` (vertical part) and ``W`` (Sha kernel) for a lattice system.

Two independent routes:

* ``shapiro``: everything on permutation lattices is reduced to
  ``H^n(E, Z)`` of point stabilizers; only ``T`` (rank ``n - 1``) goes
  through the full bar complex.
* ``generic``: bar complexes of ``T`` and ``T'`` directly.  Exponential in
  ``|G|``, used as a cross-check on small groups.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .cohom import (bar_complex, induced_map, kernel_on, reduced_induced_map,
                    sha2_omega, shapiro_reduction, _pointwise)
from .exactlin import (FinAb, SparseElimination, hom_analyze, in_span, kernel_subgroup, subgroup_of,
                       subquotient)


@dataclass
class VerticalPart:
    group: FinAb
    gens: list = field(default_factory=list)  # coordinates in reduced H^2(Z_P)
    path: str = "shapiro"


@dataclass
class ShaKernel:
    group: FinAb
    sha: FinAb
    elements: list = field(default_factory=list)  # Sha elements killed by j (H^2(T) coords)
    path: str = "shapiro"


# ---------------------------------------------------------------------------
# V


def vertical_shapiro(sys) -> VerticalPart:
    """``Ker[H^2(Z_P) -> H^2(D)] / a_* Ker[H^2(Z) -> H^2(Z[K])]``."""
    RP = shapiro_reduction(sys.ZP).cohomology(2)
    RD = shapiro_reduction(sys.D).cohomology(2)
    fstar = reduced_induced_map(sys.f, 2)
    _, kgens = kernel_subgroup(fstar.matrix, RP.group.mods, RD.group.mods)
    dstar = reduced_induced_map(sys.diag, 2)
    astar = reduced_induced_map(sys.a, 2)
    _, zgens = kernel_subgroup(dstar.matrix, dstar.source.mods, dstar.target.mods)
    imgs = [list(astar(z)) for z in zgens]
    grp, gens = subquotient([list(k) for k in kgens], imgs, RP.group.mods)
    gens = [tuple(RP.group.reduce(g)) for g in gens]
    return VerticalPart(grp, gens, "shapiro")


def vertical_generic(sys) -> VerticalPart:
    """``coker(j_*: H^1(T) -> H^1(T'))`` from bar complexes."""
    h = induced_map(sys.j, 1)
    return VerticalPart(hom_analyze(h).cokernel, [], "generic")


# ---------------------------------------------------------------------------
# W


class _JStar:
    """Decides ``j_* x = 0`` in ``H^2(T')`` for cocycles ``x`` of ``T``.

    With ``z~`` a lift of ``z`` to ``Z[K]`` and ``u = j(z~)``, ``d z~ = w`` is
    a 3-cocycle of ``Z`` and ``d u = f(a(w))``.  Then ``j_* [z] = 0`` iff
    ``a(w) = d a0`` is solvable and ``u - f(a0)`` lies in ``f_* H^2(Z_P)``
    modulo coboundaries.
    """

    def __init__(self, sys):
        self.sys = sys
        self.cT = bar_complex(sys.T.lattice)
        self.cX = bar_complex(sys.ZX)
        self.cZ = bar_complex(sys.Z)
        self.cP = bar_complex(sys.ZP)
        self.cD = bar_complex(sys.D)
        self.RP3 = shapiro_reduction(sys.ZP).cohomology(3)
        self.RP2 = shapiro_reduction(sys.ZP).cohomology(2)
        self.RD2 = shapiro_reduction(sys.D).cohomology(2)
        fstar = reduced_induced_map(sys.f, 2)
        self.fimg = [list(fstar(c)) for c in self.RP2.gen_coords]
        self._elim = None

    def kills(self, z: dict) -> bool:
        sys = self.sys
        zl = _pointwise(z, self.cT.r, self.cX.r, sys.T.lift)
        dz = self.cX.apply_d(2, zl)
        w = _pointwise(dz, self.cX.r, 1, lambda v: {0: v.get(0, 0)})
        aw = self.cZ.pushforward(sys.a, w, self.cP)
        if any(self.RP3.classify(aw)):
            return False
        if self._elim is None:
            self._elim = SparseElimination(self.cP.d(2))
        a0 = self._elim.solve(aw)
        if a0 is None:  # cannot happen once the class vanishes
            raise ArithmeticError("coboundary equation has no solution")
        u = self.cX.pushforward(sys.jmap, zl, self.cD)
        fa0 = self.cP.pushforward(sys.f, a0, self.cD)
        for k, v in fa0.items():
            nv = u.get(k, 0) - v
            if nv:
                u[k] = nv
            else:
                u.pop(k, None)
        cls = self.RD2.classify(u)
        return in_span(list(cls), self.fimg, self.RD2.group.mods)


def sha_kernel_shapiro(sys) -> ShaKernel:
    sha = sha2_omega(sys.T.lattice)
    if sha.group.is_trivial():
        return ShaKernel(FinAb(), sha.group, [], "shapiro")
    H2 = sha.ambient
    js = _JStar(sys)
    killed = []
    for x in sha.elements():
        if not any(x) or js.kills(H2.element(x)):
            killed.append(x)
    cols = [list(x) for x in killed]
    X = [[c[i] for c in cols] for i in range(H2.group.ngens)]
    grp, _ = subgroup_of(X, H2.group.mods)
    return ShaKernel(grp, sha.group, [tuple(x) for x in killed if any(x)], "shapiro")


def sha_kernel_generic(sys) -> ShaKernel:
    sha = sha2_omega(sys.T.lattice)
    if sha.group.is_trivial():
        return ShaKernel(FinAb(), sha.group, [], "generic")
    h = induced_map(sys.j, 2)
    ker = kernel_on(sha, h)
    return ShaKernel(ker.group, sha.group, [x for x in ker.elements() if any(x)], "generic")


def vertical_part(sys, path: str = "shapiro") -> VerticalPart:
    if path == "shapiro":
        return vertical_shapiro(sys)
    if path == "generic":
        return vertical_generic(sys)
    raise ValueError(f"unknown path {path!r}")


def sha_kernel(sys, path: str = "shapiro") -> ShaKernel:
    if path == "shapiro":
        return sha_kernel_shapiro(sys)
    if path == "generic":
        return sha_kernel_generic(sys)
    raise ValueError(f"unknown path {path!r}")
