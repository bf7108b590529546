"""Cohomology of finite groups with lattice coefficients.

Normalized bar resolution: an n-cochain is a function on n-tuples of
non-identity elements.  Cochains are sparse dicts keyed by
``tuple_index * rank + basis_index``, where tuples are numbered in mixed
radix ``N - 1`` (first entry most significant, element ``g`` as digit
``g - 1``).

For ``n >= 1`` and finitely generated coefficients ``H^n`` is finite, so it
equals the torsion of ``coker d^{n-1}``; only ``d^{n-1}`` is eliminated.

Permutation lattices can also be handled through Shapiro's lemma
(:class:`ShapiroReduction`), which replaces ``C(G, Z[X])`` by the direct sum
of ``C(E_k, Z)`` over the point stabilizers of the orbits of ``X``.
"""
from __future__ import annotations

import itertools

from .exactlin import (AbHom, FinAb, IntMatrix, RawAb, cokernel,
                       kernel_subgroup)
from .groups import FiniteGroup, GSet, Subgroup, quotient
from .gmod import Cokernel, GLattice, LatticeMap, perm_lattice, trivial_lattice, _vadd


class CohomError(ValueError):
    pass


# ---------------------------------------------------------------------------
# bar complex


class BarComplex:
    """``C^*(G, M)`` for a lattice ``M`` (normalized, inhomogeneous)."""

    def __init__(self, M: GLattice):
        self.M = M
        self.G = M.group
        self.N = self.G.order
        self.b = self.N - 1
        self.r = M.rank
        self._d = {}
        self._coh = {}

    def __repr__(self):
        return f"BarComplex({self.G.label}, {self.M!r})"

    def dim(self, n) -> int:
        return self.b ** n * self.r

    def tuple_index(self, tup) -> int:
        i = 0
        for g in tup:
            i = i * self.b + (g - 1)
        return i

    def index_tuple(self, idx, n) -> tuple:
        out = []
        for _ in range(n):
            idx, d = divmod(idx, self.b)
            out.append(d + 1)
        return tuple(reversed(out))

    def tuples(self, n):
        return itertools.product(range(1, self.N), repeat=n)

    def column(self, n, tau, j) -> dict:
        """``d^n`` applied to the basis cochain ``(tau, e_j)``."""
        G, r, b, N = self.G, self.r, self.b, self.N
        t = G.table
        out: dict = {}
        tail = self.tuple_index(tau)
        # first term: rows (g, tau) with value g . e_j
        gej = self.M.act
        shift = b ** n
        for g in range(1, N):
            base = ((g - 1) * shift + tail) * r
            for i, v in gej[g][j].items():
                k = base + i
                nv = out.get(k, 0) + v
                if nv:
                    out[k] = nv
                else:
                    del out[k]
        # merge terms: rows rho with rho_p rho_{p+1} = tau_p
        inv = G.inverse
        for p in range(n):
            sign = -1 if p % 2 == 0 else 1  # (-1)^(p+1)
            tp = tau[p]
            pre, post = tau[:p], tau[p + 1:]
            for a in range(1, N):
                if a == tp:
                    continue
                rho = pre + (a, t[inv[a]][tp]) + post
                k = self.tuple_index(rho) * r + j
                nv = out.get(k, 0) + sign
                if nv:
                    out[k] = nv
                else:
                    del out[k]
        # last term: rows (tau, g)
        sign = -1 if n % 2 == 0 else 1  # (-1)^(n+1)
        for g in range(1, N):
            k = (tail * b + (g - 1)) * r + j
            nv = out.get(k, 0) + sign
            if nv:
                out[k] = nv
            else:
                del out[k]
        return out

    def d(self, n) -> IntMatrix:
        if n not in self._d:
            cols = []
            for tau in self.tuples(n):
                for j in range(self.r):
                    cols.append(self.column(n, tau, j))
            self._d[n] = IntMatrix.from_columns(self.dim(n + 1), cols)
        return self._d[n]

    def apply_d(self, n, f: dict) -> dict:
        out: dict = {}
        r = self.r
        for key, v in f.items():
            ti, j = divmod(key, r)
            _vadd(out, self.column(n, self.index_tuple(ti, n), j), v)
        return out

    # cochains as functions -------------------------------------------------
    def value(self, f: dict, tup) -> dict:
        base = self.tuple_index(tup) * self.r
        return {i: f[base + i] for i in range(self.r) if base + i in f}

    def from_function(self, n, func) -> dict:
        """Cochain with ``f(tup) = func(tup)`` (a sparse vector dict)."""
        out = {}
        for tup in self.tuples(n):
            base = self.tuple_index(tup) * self.r
            for i, v in func(tup).items():
                if v:
                    out[base + i] = v
        return out

    def pushforward(self, phi: LatticeMap, f: dict, target: "BarComplex") -> dict:
        out: dict = {}
        r, rt = self.r, target.r
        for key, v in f.items():
            ti, j = divmod(key, r)
            for i, w in phi.cols[j].items():
                k = ti * rt + i
                nv = out.get(k, 0) + v * w
                if nv:
                    out[k] = nv
                else:
                    del out[k]
        return out

    def cohomology(self, n) -> "CohomGroup":
        if n not in self._coh:
            self._coh[n] = CohomGroup(self, n)
        return self._coh[n]


class CohomGroup:
    """``H^n(G, M)`` with representative cocycles and a classifier."""

    def __init__(self, cx: BarComplex, n: int):
        self.complex = cx
        self.degree = n
        if n == 0:
            from .exactlin import integer_kernel
            d0 = cx.d(0).to_dense()
            ker = integer_kernel(d0, cx.r) if d0 else [[int(i == j) for j in range(cx.r)] for i in range(cx.r)]
            self.group = FinAb((), len(ker))
            self.reps = [{i: v for i, v in enumerate(k) if v} for k in ker]
            self._data = None
            return
        self._data = cokernel(cx.d(n - 1), free_generators=False)
        g = self._data.group
        t = len(g.invariant_factors)
        self.group = FinAb(g.invariant_factors, 0, g.generators[:t] if g.generators else ())
        self.reps = list(g.generators[:t])
        self._t = t

    def __repr__(self):
        return f"H^{self.degree}({self.complex.G.label}, {self.complex.M.name or 'M'}) = {self.group}"

    def classify(self, z: dict) -> tuple:
        """Class of a cocycle in canonical coordinates."""
        if self.degree == 0:
            raise CohomError("classify is not available in degree 0")
        return self._data.project(z)[: self._t]

    def element(self, coords) -> dict:
        out: dict = {}
        for c, rep in zip(coords, self.reps):
            if c:
                _vadd(out, rep, c)
        return out

    def is_cocycle(self, z: dict) -> bool:
        return not self.complex.apply_d(self.degree, z)


_complex_cache: dict = {}


def bar_complex(M: GLattice) -> BarComplex:
    key = id(M)
    hit = _complex_cache.get(key)
    if hit is not None and hit.M is M:
        return hit
    cx = BarComplex(M)
    _complex_cache[key] = cx
    return cx


def clear_cache():
    _complex_cache.clear()
    _restricted.clear()


def cohomology(M: GLattice, n: int) -> CohomGroup:
    return bar_complex(M).cohomology(n)


def trivial_module(G: FiniteGroup) -> GLattice:
    key = ("Z", id(G))
    hit = _restricted.get(key)
    if hit is not None and hit[0] is G:
        return hit[1]
    Z = trivial_lattice(G)
    _restricted[key] = (G, Z)
    return Z


def qz_cohomology(G: FiniteGroup, n: int) -> CohomGroup:
    """``H^n(G, Q/Z)`` computed as ``H^{n+1}(G, Z)``."""
    if n < 1:
        raise CohomError("Q/Z cohomology is provided in degrees >= 1")
    return cohomology(trivial_module(G), n + 1)


# ---------------------------------------------------------------------------
# maps


def induced_map(phi: LatticeMap, n: int) -> AbHom:
    """Map ``H^n(G, source) -> H^n(G, target)`` induced by ``phi``."""
    Hs = cohomology(phi.source, n)
    Ht = cohomology(phi.target, n)
    cs, ct = Hs.complex, Ht.complex
    imgs = [Ht.classify(cs.pushforward(phi, rep, ct)) for rep in Hs.reps]
    return AbHom.from_images(Hs.group, Ht.group, imgs)


_restricted: dict = {}


def restrict_lattice(M: GLattice, H: Subgroup):
    """``M`` as a lattice over ``H`` (a standalone group) plus the embedding."""
    key = (id(M), H.elements)
    hit = _restricted.get(key)
    if hit is not None and hit[0] is M:
        return hit[1], hit[2]
    Hg, emb = H.as_group()
    if M.is_permutation:
        X = GSet(Hg, [M.gset.act[g] for g in emb], M.gset.labels, check=False)
        L = perm_lattice(X, name=M.name)
    else:
        L = GLattice(Hg, [M.act[g] for g in emb], M.labels, name=M.name, check=False)
    _restricted[key] = (M, L, emb)
    return L, emb


def restrict_cochain(cx: BarComplex, f: dict, n: int, sub: BarComplex, emb) -> dict:
    out = {}
    r = cx.r
    for tup in sub.tuples(n):
        gt = tuple(emb[h] for h in tup)
        base_g = cx.tuple_index(gt) * r
        base_h = sub.tuple_index(tup) * r
        for i in range(r):
            v = f.get(base_g + i)
            if v:
                out[base_h + i] = v
    return out


def restriction(M: GLattice, H: Subgroup, n: int) -> AbHom:
    """``Res: H^n(G, M) -> H^n(H, M)``."""
    Hg = cohomology(M, n)
    ML, emb = restrict_lattice(M, H)
    Hh = cohomology(ML, n)
    imgs = [Hh.classify(restrict_cochain(Hg.complex, rep, n, Hh.complex, emb)) for rep in Hg.reps]
    return AbHom.from_images(Hg.group, Hh.group, imgs)


class Transfer:
    """Right cosets ``E t`` with least-index representatives and ``rho(x) = x t(x)^-1``."""

    def __init__(self, G: FiniteGroup, E: Subgroup):
        self.G, self.E = G, E
        self.reps = E.right_coset_reps()
        self.rep_of = [0] * G.order
        for t in self.reps:
            for e in E.elements:
                self.rep_of[G.table[e][t]] = t

    def rho(self, x):
        G = self.G
        return G.table[x][G.inverse[self.rep_of[x]]]


def corestriction_cochain(cx: BarComplex, sub: BarComplex, emb, f: dict, n: int, tr: Transfer,
                          value_map=None) -> dict:
    """``Cor`` of an ``E``-cochain ``f`` to a ``G``-cochain.

    ``value_map(t_inv, vec)`` turns the E-value into a G-lattice vector
    translated by ``t^-1``; by default the coefficient lattice is shared.
    """
    G = cx.G
    t = G.table
    inv = G.inverse
    pos = {g: i for i, g in enumerate(emb)}
    out: dict = {}
    M = cx.M
    r = cx.r
    rs = sub.r
    for tup in cx.tuples(n):
        sig = [0]
        for g in tup:
            sig.append(t[sig[-1]][g])
        acc: dict = {}
        for tt in tr.reps:
            rhos = [tr.rho(t[tt][s]) for s in sig[1:]]
            args, prev = [], 0
            ok = True
            for rr in rhos:
                a = t[inv[prev]][rr]
                if a == 0:
                    ok = False
                    break
                args.append(pos[a])
                prev = rr
            if not ok:
                continue
            base = sub.tuple_index(tuple(args)) * rs
            val = {i: f[base + i] for i in range(rs) if base + i in f}
            if not val:
                continue
            ti = inv[tt]
            if value_map is None:
                _vadd(acc, M.apply(ti, val))
            else:
                _vadd(acc, value_map(ti, val))
        base = cx.tuple_index(tup) * r
        for i, v in acc.items():
            out[base + i] = v
    return out


def corestriction(M: GLattice, H: Subgroup, n: int) -> AbHom:
    """``Cor: H^n(H, M) -> H^n(G, M)`` with least-index right coset representatives."""
    Hg = cohomology(M, n)
    ML, emb = restrict_lattice(M, H)
    Hh = cohomology(ML, n)
    tr = Transfer(M.group, H)
    imgs = [Hg.classify(corestriction_cochain(Hg.complex, Hh.complex, emb, rep, n, tr)) for rep in Hh.reps]
    return AbHom.from_images(Hh.group, Hg.group, imgs)


def inflation(M: GLattice, N: Subgroup, n: int) -> AbHom:
    """``Inf: H^n(G/N, M^N) -> H^n(G, M)`` for ``M`` with trivial ``N``-action."""
    G = M.group
    for h in N.elements:
        if any(M.act[h][j] != {j: 1} for j in range(M.rank)):
            raise CohomError("inflation needs the coefficients to be fixed by the normal subgroup")
    Q, proj = quotient(G, N)
    rep = {}
    for g in G.elements:
        rep.setdefault(proj[g], g)
    MQ = GLattice(Q, [M.act[rep[q]] for q in Q.elements], M.labels, name=M.name)
    Hq = cohomology(MQ, n)
    Hg = cohomology(M, n)
    cq, cg = Hq.complex, Hg.complex
    imgs = []
    for z in Hq.reps:
        def func(tup, z=z):
            if any(proj[g] == 0 for g in tup):
                return {}
            return cq.value(z, tuple(proj[g] for g in tup))
        imgs.append(Hg.classify(cg.from_function(n, func)))
    return AbHom.from_images(Hq.group, Hg.group, imgs)


def connecting(seq: Cokernel, n: int) -> AbHom:
    """``delta: H^n(G, C) -> H^{n+1}(G, A)`` for ``0 -> A -> B -> C -> 0``."""
    A, B, C = seq.f.source, seq.f.target, seq.lattice
    Hc = cohomology(C, n)
    Ha = cohomology(A, n + 1)
    cb = bar_complex(B)
    ca, cc = Ha.complex, Hc.complex
    imgs = []
    for z in Hc.reps:
        imgs.append(Ha.classify(connecting_cochain(seq, z, n, cc, cb, ca)))
    return AbHom.from_images(Hc.group, Ha.group, imgs)


def connecting_cochain(seq: Cokernel, z: dict, n: int, cc: BarComplex, cb: BarComplex, ca: BarComplex) -> dict:
    lifted = _pointwise(z, cc.r, cb.r, seq.lift)
    dz = cb.apply_d(n, lifted)
    return _pointwise(dz, cb.r, ca.r, seq.left_inverse)


def _pointwise(f: dict, r_in: int, r_out: int, func) -> dict:
    by_tuple: dict = {}
    for key, v in f.items():
        ti, j = divmod(key, r_in)
        by_tuple.setdefault(ti, {})[j] = v
    out = {}
    for ti, vec in by_tuple.items():
        for i, v in func(vec).items():
            if v:
                out[ti * r_out + i] = v
    return out


# ---------------------------------------------------------------------------
# Sha^2_omega


class SubgroupOfCohom:
    """A subgroup of some ``H^n`` with generators (coordinates and cocycles)."""

    def __init__(self, ambient: CohomGroup, group: FinAb, gens):
        self.ambient = ambient
        self.group = group
        self.gens = [tuple(g) for g in gens]
        self.reps = [ambient.element(g) for g in self.gens]

    def __repr__(self):
        return f"SubgroupOfCohom({self.group})"

    def elements(self):
        """All elements as ambient coordinate tuples (finite groups only)."""
        amb = self.ambient.group
        seen = set()
        for cs in itertools.product(*(range(d) for d in self.group.invariant_factors)):
            x = [0] * amb.ngens
            for c, g in zip(cs, self.gens):
                x = [a + c * b for a, b in zip(x, g)]
            seen.add(amb.reduce(x))
        return sorted(seen)


def sha2_omega(M: GLattice) -> SubgroupOfCohom:
    """Classes of ``H^2(G, M)`` vanishing on every cyclic subgroup."""
    G = M.group
    H2 = cohomology(M, 2)
    rows, tmods = [], []
    for C in G.cyclic_subgroups():
        if C.order == 1:
            continue
        res = restriction(M, C, 2)
        rows.extend(res.matrix)
        tmods.extend(res.target.mods)
    grp, gens = kernel_subgroup(rows, H2.group.mods, tmods)
    return SubgroupOfCohom(H2, grp, gens)


def kernel_on(sub: SubgroupOfCohom, h: AbHom) -> SubgroupOfCohom:
    """Kernel of ``h`` restricted to ``sub`` (``h`` defined on the ambient group)."""
    # pull the map back to sub's own coordinates
    images = [h(g) for g in sub.gens]
    M = [[img[i] for img in images] for i in range(h.target.ngens)]
    grp, gens = kernel_subgroup(M, sub.group.mods, h.target.mods)
    amb = sub.ambient.group
    amb_gens = []
    for y in gens:
        x = [0] * amb.ngens
        for c, g in zip(y, sub.gens):
            x = [a + c * b for a, b in zip(x, g)]
        amb_gens.append(amb.reduce(x))
    return SubgroupOfCohom(sub.ambient, grp, amb_gens)


# ---------------------------------------------------------------------------
# Shapiro reduction for permutation lattices


class ShapiroReduction:
    """Reduced complex ``R = (+)_k C(E_k, Z)`` for a permutation lattice ``Z[X]``.

    ``sigma`` restricts a G-cochain to ``E_k`` and reads the coefficient of
    the base point ``x_k``; ``tau`` is corestriction from ``E_k`` composed
    with ``1 -> x_k``.  Both are chain maps and ``sigma o tau = id``.
    """

    def __init__(self, L: GLattice):
        if not L.is_permutation:
            raise CohomError("Shapiro reduction needs a permutation lattice")
        self.L = L
        self.G = L.group
        X = L.gset
        self.orbits = X.orbits()
        self.base = [o[0] for o in self.orbits]
        self.stabs = [X.stabilizer(x) for x in self.base]
        self.parts = []
        for E in self.stabs:
            Eg, emb = E.as_group()
            Z = trivial_lattice(Eg)
            self.parts.append((bar_complex(Z), emb, Transfer(self.G, E)))
        self._coh = {}

    def __repr__(self):
        return f"ShapiroReduction(orbits={[len(o) for o in self.orbits]})"

    def cohomology(self, n) -> "ReducedCohom":
        if n not in self._coh:
            self._coh[n] = ReducedCohom(self, n)
        return self._coh[n]

    def sigma(self, f: dict, n: int) -> list:
        cx = bar_complex(self.L)
        out = []
        r = cx.r
        for x, (sub, emb, _) in zip(self.base, self.parts):
            part = {}
            for tup in sub.tuples(n):
                k = cx.tuple_index(tuple(emb[h] for h in tup)) * r + x
                v = f.get(k)
                if v:
                    part[sub.tuple_index(tup)] = v
            out.append(part)
        return out

    def tau(self, parts: list, n: int) -> dict:
        cx = bar_complex(self.L)
        X = self.L.gset
        out: dict = {}
        for x, (sub, emb, tr), f in zip(self.base, self.parts, parts):
            if not f:
                continue

            def vmap(ti, val, x=x):
                return {X.act[ti][x]: val[0]}

            _vadd(out, corestriction_cochain(cx, sub, emb, f, n, tr, value_map=vmap))
        return out


class ReducedCohom:
    """``H^n(G, Z[X]) = (+)_k H^n(E_k, Z)`` in canonical form."""

    def __init__(self, red: ShapiroReduction, n: int):
        self.red = red
        self.degree = n
        self.pieces = [sub.cohomology(n) for sub, _, _ in red.parts]
        mods = []
        for p in self.pieces:
            mods.extend(p.group.mods)
        self.raw = RawAb(mods)
        self.group = self.raw.group
        self.offsets = []
        off = 0
        for p in self.pieces:
            self.offsets.append(off)
            off += p.group.ngens

    def classify_reduced(self, parts) -> tuple:
        raw = []
        for p, f in zip(self.pieces, parts):
            raw.extend(p.classify(f) if f else (0,) * p.group.ngens)
        return self.raw.to_canonical(raw)

    def classify(self, f: dict) -> tuple:
        """Class of a G-cocycle with values in ``Z[X]``."""
        return self.classify_reduced(self.red.sigma(f, self.degree))

    def reduced_element(self, coords) -> list:
        raw = self.raw.from_canonical(coords)
        parts = []
        for p, off in zip(self.pieces, self.offsets):
            parts.append(p.element(raw[off: off + p.group.ngens]))
        return parts

    def element(self, coords) -> dict:
        """A G-cocycle representing the class with these coordinates."""
        return self.red.tau(self.reduced_element(coords), self.degree)

    @property
    def gen_coords(self):
        k = self.group.ngens
        return [tuple(int(i == j) for i in range(k)) for j in range(k)]


_shapiro_cache: dict = {}


def shapiro_reduction(L: GLattice) -> ShapiroReduction:
    hit = _shapiro_cache.get(id(L))
    if hit is not None and hit.L is L:
        return hit
    red = ShapiroReduction(L)
    _shapiro_cache[id(L)] = red
    return red


def reduced_induced_map(phi: LatticeMap, n: int) -> AbHom:
    """``phi_*`` on ``H^n`` of permutation lattices, computed as ``sigma phi tau``."""
    Rs = shapiro_reduction(phi.source).cohomology(n)
    Rt = shapiro_reduction(phi.target).cohomology(n)
    cs, ct = bar_complex(phi.source), bar_complex(phi.target)
    imgs = []
    for c in Rs.gen_coords:
        f = Rs.element(c)
        imgs.append(Rt.classify(cs.pushforward(phi, f, ct)))
    return AbHom.from_images(Rs.group, Rt.group, imgs)


def shapiro(G: FiniteGroup, H: Subgroup, n: int):
    """Explicit ``H^n(G, Z[G/H]) <-> H^n(H, Z)`` as a pair of AbHoms.

    The forward map goes through the generic bar complex of ``Z[G/H]``.
    """
    L = perm_lattice(G.cosets(H), name="Z[G/H]")
    red = shapiro_reduction(L)
    Rn = red.cohomology(n)
    Hg = cohomology(L, n)
    Hh = Rn.pieces[0]
    fwd = [Hh.classify(red.sigma(z, n)[0]) for z in Hg.reps]
    back = [Hg.classify(red.tau([z], n)) for z in Hh.reps]
    return AbHom.from_images(Hg.group, Hh.group, fwd), AbHom.from_images(Hh.group, Hg.group, back)


def character_class(G: FiniteGroup, chi_values) -> dict:
    """2-cocycle in ``C^2(G, Z)`` representing ``delta(chi)`` for ``chi: G -> Q/Z``.

    ``chi_values[g]`` are Fractions in ``[0, 1)``; the cocycle is
    ``(g, h) -> chi(g) + chi(h) - chi(gh)``.
    """
    Z = trivial_module(G)
    cx = bar_complex(Z)

    def func(tup):
        g, h = tup
        v = chi_values[g] + chi_values[h] - chi_values[G.table[g][h]]
        assert v.denominator == 1
        return {0: int(v)}

    return cx.from_function(2, func)
