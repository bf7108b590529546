"""Characters ``Hom(H, Q/Z)`` of finite groups, by explicit arithmetic.

Values are :class:`fractions.Fraction` in ``[0, 1)``.  A character is stored
by its coordinates ``c`` against the canonical generators of ``H^ab``:
``chi(x) = sum c_i x_i / d_i``.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from .exactlin import FinAb, IntMatrix, cokernel
from .groups import FiniteGroup, Subgroup


def _mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


class CharacterGroup:
    """Character group of a subgroup ``H`` of ``G`` (``H = G`` by default)."""

    def __init__(self, G: FiniteGroup, H: Subgroup | None = None):
        self.G = G
        self.H = H if H is not None else G.whole
        elems = self.H.elements
        pos = {x: i for i, x in enumerate(elems)}
        # Z^H / <e_a + e_b - e_ab, e_1>
        cols = [{pos[0]: 1}]
        for a in elems:
            for b in elems:
                if a and b and a <= b:
                    c = {}
                    for x, s in ((a, 1), (b, 1), (G.table[a][b], -1)):
                        c[pos[x]] = c.get(pos[x], 0) + s
                    cols.append({k: v for k, v in c.items() if v})
                    if a != b:
                        c2 = {}
                        for x, s in ((a, 1), (b, 1), (G.table[b][a], -1)):
                            c2[pos[x]] = c2.get(pos[x], 0) + s
                        cols.append({k: v for k, v in c2.items() if v})
        data = cokernel(IntMatrix.from_columns(len(elems), cols))
        self.ab: FinAb = data.group
        self._proj = {x: data.project({pos[x]: 1}) for x in elems}
        self.mods = self.ab.invariant_factors
        # an element of H representing each canonical generator
        self.gen_elements = []
        for i in range(len(self.mods)):
            target = tuple(int(i == j) for j in range(len(self.mods)))
            self.gen_elements.append(next(x for x in elems if self._proj[x] == target))

    def __repr__(self):
        return f"CharacterGroup({self.ab})"

    @property
    def group(self) -> FinAb:
        """The character group, abstractly isomorphic to ``H^ab``."""
        return self.ab

    def coords(self, x) -> tuple:
        return self._proj[x]

    def order(self) -> int:
        return self.ab.order()

    def all(self):
        return list(itertools.product(*(range(d) for d in self.mods)))

    def zero(self):
        return tuple(0 for _ in self.mods)

    def value(self, chi, x) -> Fraction:
        cx = self._proj[x]
        return _mod1(sum((Fraction(c * v, d) for c, v, d in zip(chi, cx, self.mods)), Fraction(0)))

    def add(self, a, b):
        return tuple((x + y) % d for x, y, d in zip(a, b, self.mods))

    def neg(self, a):
        return tuple((-x) % d for x, d in zip(a, self.mods))

    def scale(self, k, a):
        return tuple((k * x) % d for x, d in zip(a, self.mods))

    def char_order(self, a) -> int:
        from math import gcd, lcm
        return lcm(*(d // gcd(d, x) for x, d in zip(a, self.mods))) if self.mods else 1

    def from_function(self, f):
        """Character with ``chi(x) = f(x)``; ``f`` must be a homomorphism."""
        chi = tuple(int(_mod1(Fraction(f(g))) * d) for g, d in zip(self.gen_elements, self.mods))
        for x in self.H.elements:
            if self.value(chi, x) != _mod1(Fraction(f(x))):
                raise ValueError("function is not a character")
        return chi

    def conjugate(self, g, chi):
        """``(g chi)(h) = chi(g^-1 h g)`` (needs ``H`` normal)."""
        G = self.G
        gi = G.inverse[g]
        return self.from_function(lambda h: self.value(chi, G.table[G.table[gi][h]][g]))

    def restrict(self, other: "CharacterGroup", chi):
        """Restriction to the subgroup carried by ``other``."""
        return other.from_function(lambda h: self.value(chi, h))

    def kills(self, chi, elements) -> bool:
        return all(self.value(chi, x) == 0 for x in elements)


def transfer(G: FiniteGroup, H: Subgroup):
    """The transfer ``G -> H^ab`` as a function returning an element of ``H``.

    Uses right cosets ``H t_i`` with least-index representatives.  The
    returned product is only meaningful modulo ``[H, H]``.
    """
    reps = H.right_coset_reps()
    where = {}
    for i, t in enumerate(reps):
        for h in H.elements:
            where[G.table[h][t]] = i

    def V(g):
        out = 0
        for t in reps:
            tg = G.table[t][g]
            tj = reps[where[tg]]
            h = G.table[tg][G.inverse[tj]]
            out = G.table[out][h]
        return out

    return V


def corestrict(GH: CharacterGroup, GG: CharacterGroup, chi):
    """``Cor_{H/G}`` on characters: ``Cor(chi)(g) = chi(V(g))``."""
    V = transfer(GG.G, GH.H)
    return GG.from_function(lambda g: GH.value(chi, V(g)))
