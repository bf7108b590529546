"""Normic bundles ``P(t) = N_{K/k}(z)``: problem data and divisor lattices.

A :class:`ProblemSpec` encodes the Galois combinatorics over a finite group
``G = Gal(M/k)`` with ``M`` splitting everything:

* ``components``: subgroups ``U_j`` with ``K = prod_j M^{U_j}``;
* ``factors``: pairs ``(V_i, e_i)``, the field ``L_i = M^{V_i}`` of an
  irreducible factor ``p_i`` of ``P`` and its multiplicity.

:func:`build_system` produces the lattices ``Z_P``, ``D``, ``T``, ``T'`` and
the maps ``f``, ``j`` (two shapes: the general one for étale ``K`` and the
one for a Galois field ``K`` with irreducible separable ``P``).  The
cohomological evaluation lives in :mod:`normbrauer.engine`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .config import CapError, get_caps
from .exactlin import FinAb
from .groups import FiniteGroup, GSet, Subgroup, quotient
from .gmod import (Cokernel, GLattice, LatticeError, LatticeMap, direct_sum, induced_quotient_map,
                   norm_torus_character, perm_lattice, subsets_gset, tensor, trivial_lattice)


class HypothesisError(ValueError):
    """Input data violates a hypothesis of the construction."""


@dataclass
class ProblemSpec:
    G: FiniteGroup
    components: list  # Subgroups U_j
    factors: list  # (Subgroup V_i, e_i)
    variant: str = "X'"  # "X" or "X'"
    l_overrides: list | None = None
    name: str = "problem"
    synthetic: int | None = None  # index of an appended t^s factor

    def __post_init__(self):
        if self.variant not in ("X", "X'"):
            raise HypothesisError(f"variant must be X or X', not {self.variant!r}")
        for U in self.components:
            if U.group is not self.G:
                raise HypothesisError("component subgroup belongs to another group")
        for V, e in self.factors:
            if V.group is not self.G:
                raise HypothesisError("factor subgroup belongs to another group")
            if int(e) < 1:
                raise HypothesisError(f"exponent {e} must be positive")
        if not self.components:
            raise HypothesisError("at least one component of K is needed")
        if not self.factors:
            raise HypothesisError("P(t) needs at least one irreducible factor")
        if self.l_overrides is not None and len(self.l_overrides) != len(self.factors):
            raise HypothesisError("l overrides need one entry per factor")

    @property
    def n(self) -> int:
        return sum(U.index for U in self.components)

    @property
    def m(self) -> int:
        return sum(int(e) * V.index for V, e in self.factors)

    def is_galois_field(self) -> bool:
        return len(self.components) == 1 and self.components[0].is_normal()

    def section3_eligible(self) -> bool:
        """Galois field ``K``, one irreducible separable factor, variant X."""
        return (self.variant == "X" and self.is_galois_field() and len(self.factors) == 1
                and int(self.factors[0][1]) == 1 and self.synthetic is None)

    def l_of(self, i: int) -> int:
        base = 1
        if self.l_overrides is not None:
            base = int(self.l_overrides[i])
        return base


def normalize(spec: ProblemSpec, append_synthetic: bool = True):
    """Reduce exponents modulo ``n`` and, if ``n`` does not divide ``m``,
    append the factor ``t^s`` with ``s = -m mod n``.

    Returns ``(spec, notes)``.
    """
    notes = []
    n = spec.n
    factors = []
    for i, (V, e) in enumerate(spec.factors):
        e = int(e)
        if n > 1:
            if e % n == 0:
                raise HypothesisError(
                    f"factor {i + 1} has exponent {e} divisible by n={n}; "
                    "absorb p^e into the norm and drop the factor")
            r = e % n
            if r != e:
                notes.append(f"factor {i + 1}: exponent {e} reduced to {r} mod n={n}")
            e = r
        factors.append((V, e))
    out = replace(spec, factors=factors)
    m = out.m
    if append_synthetic and n > 1 and m % n:
        s = (-m) % n
        factors = factors + [(spec.G.whole, s)]
        lo = None if spec.l_overrides is None else list(spec.l_overrides) + [1]
        out = replace(out, factors=factors, l_overrides=lo, synthetic=len(factors) - 1)
        notes.append(f"n={n} does not divide m={m}: appended factor t^{s} (V = G)")
    return out, notes


# ---------------------------------------------------------------------------
# lattice systems


@dataclass
class FactorBlock:
    index: int  # factor number in the spec (or -1 for the t^s factor)
    subgroup: Subgroup  # stabilizer in the working group
    exponent: int
    offset: int  # offset inside Z_P
    size: int
    label: str


@dataclass
class LatticeSystem:
    """Everything needed to evaluate the exact sequence for one spec."""

    kind: str  # "general" or "galois"
    group: FiniteGroup
    ZK: GSet
    ZX: GLattice
    Z: GLattice
    diag: LatticeMap
    T: Cokernel
    ZP: GLattice
    D: GLattice
    f: LatticeMap
    jmap: LatticeMap
    a: LatticeMap
    Tp: Cokernel
    blocks: list
    n: int
    m: int
    info: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def j(self) -> LatticeMap:
        """The induced map ``T -> T'``."""
        if "_j" not in self.info:
            self.info["_j"] = induced_quotient_map(self.jmap, self.T, self.Tp, name="j")
        return self.info["_j"]

    def summary(self) -> dict:
        return {"kind": self.kind, "order": self.group.order, "n": self.n, "m": self.m,
                "rank_ZP": self.ZP.rank, "rank_D": self.D.rank, "rank_T": self.T.lattice.rank,
                "rank_T'": self.Tp.lattice.rank,
                **{k: v for k, v in self.info.items() if not k.startswith("_")}}


def _zk_gset(G: FiniteGroup, components) -> GSet:
    parts = [G.cosets(U) for U in components]
    if len(parts) == 1:
        return parts[0]
    labels = [f"K{i + 1}:{lab}" for i, p in enumerate(parts) for lab in p.labels]
    return GSet.disjoint_union(parts, labels)


def _omega(X: GSet, sizes):
    """Disjoint union of the size-d subset G-sets, with membership lists."""
    parts = [subsets_gset(X, d) for d in sizes]
    if len(parts) == 1:
        gs = parts[0]
        members = [set(p) for p in gs.subsets]
    else:
        gs = GSet.disjoint_union(parts, [lab for p in parts for lab in p.labels])
        members = [set(p) for part in parts for p in part.subsets]
    return gs, members


def _check_omega_total(total):
    cap = get_caps().max_omega
    if total > cap:
        raise CapError(f"{total} exceptional-divisor subsets exceed max_omega={cap}")


def build_general_system(spec: ProblemSpec) -> LatticeSystem:
    """The divisor lattices for an étale ``K`` (``n`` must divide ``m``).

    ``D = Z_P (x) Z[Z_K] (+) Z (+) S`` with ``S`` the exceptional divisors;
    variant X' uses all subset sizes ``d > 1`` dividing ``e'_i``, variant X
    only ``d = e'_i``.
    """
    G = spec.G
    X = _zk_gset(G, spec.components)
    n, m = X.size, spec.m
    if n > 1 and m % n:
        raise HypothesisError(f"n={n} must divide m={m}; normalize the spec first")
    Z, ZX, diag, T = norm_torus_character(X)
    ZX.name = "Z[K/k]"
    blocks, parts, off = [], [], 0
    for i, (V, e) in enumerate(spec.factors):
        Y = G.cosets(V)
        parts.append(perm_lattice(Y, name=f"Z[L{i + 1}/k]"))
        label = "t" if i == spec.synthetic else f"L{i + 1}"
        blocks.append(FactorBlock(i, V, int(e), off, Y.size, label))
        off += Y.size
    ZP = direct_sum(parts, name="Z_P", tags=[b.label for b in blocks])
    # exceptional divisors
    omegas = []
    total = 0
    for b in blocks:
        ep = math.gcd(b.exponent, n)
        if ep > 1:
            sizes = [d for d in range(2, ep + 1) if ep % d == 0] if spec.variant == "X'" else [ep]
            total += sum(math.comb(n, d) for d in sizes) * b.size
            _check_omega_total(total)
            gs, members = _omega(X, sizes)
            omegas.append((b, ep, gs, members))
    # D = (+)_i Z[Y_i] (x) Z[X]  (+)  Z  (+)  (+)_i Z[Y_i] (x) Z[Omega_i]
    tens = [tensor(p, ZX) for p in parts]
    Sparts = [tensor(parts[b.index], perm_lattice(gs)) for b, _, gs, _ in omegas]
    D = direct_sum(tens + [trivial_lattice(G, name="inf")] + Sparts, name="D",
                   tags=[f"{b.label}⊗K" for b in blocks] + ["inf"] + [f"S{b.label}" for b, *_ in omegas])
    offs = D.summands[0]
    inf_pos = offs[len(tens)]
    s_off = {b.index: offs[len(tens) + 1 + k] for k, (b, *_) in enumerate(omegas)}
    s_info = {b.index: (ep, gs, members) for b, ep, gs, members in omegas}
    # f(tau) = (tau (x) N_K, -1, tau (x) Upsilon_i)
    fcols = []
    for b in blocks:
        for t in range(b.size):
            col = {offs[b.index] + t * n + x: 1 for x in range(n)}
            col[inf_pos] = -1
            if b.index in s_off:
                _, gs, _ = s_info[b.index]
                base = s_off[b.index] + t * gs.size
                for w in range(gs.size):
                    col[base + w] = 1
            fcols.append(col)
    f = LatticeMap(ZP, D, fcols, name="f")
    # j(sigma) = (-sum e_i N_i (x) sigma, m/n, -S_sigma)
    jcols = []
    for x in range(n):
        col = {}
        for b in blocks:
            for t in range(b.size):
                col[offs[b.index] + t * n + x] = -b.exponent
        if m // n:
            col[inf_pos] = m // n
        for b in blocks:
            if b.index not in s_info:
                continue
            ep, gs, members = s_info[b.index]
            for w, mem in enumerate(members):
                if x in mem:
                    coef = -(b.exponent // len(mem))
                    for t in range(b.size):
                        col[s_off[b.index] + t * gs.size + w] = coef
        jcols.append(col)
    jmap = LatticeMap(ZX, D, jcols, name="j")
    a = LatticeMap(Z, ZP, [{b.offset + t: -b.exponent for b in blocks for t in range(b.size)}], name="a")
    Tp = Cokernel(f, name="T'")
    sys = LatticeSystem("general", G, X, ZX, Z, diag, T, ZP, D, f, jmap, a, Tp, blocks, n, m)
    sys.info.update({"variant": spec.variant, "e'": [math.gcd(b.exponent, n) for b in blocks],
                     "omega": [gs.size for _, _, gs, _ in omegas]})
    _check_j(sys)
    return sys


def _check_j(sys: LatticeSystem):
    lhs = sys.jmap(sys.diag.cols[0])
    rhs = sys.f(sys.a.cols[0])
    if lhs != rhs:
        raise LatticeError("j(N_K) is not f(a(1)); the map T -> T' is not well defined")


def galois_data(spec: ProblemSpec):
    """Quotient data for a Galois field ``K``: ``(Gbar, proj, H, l)``.

    ``Gbar = G/U``, ``H`` the image of ``V`` (so ``L' = L cap K`` is fixed by
    ``H``) and ``l = [L : L'] = [VU : V]`` times any override.
    """
    if not spec.is_galois_field():
        raise HypothesisError("K must be a Galois field (one component with normal subgroup)")
    (U,) = spec.components
    (V, _), = spec.factors[:1]
    G = spec.G
    Gb, proj = quotient(G, U)
    H = Subgroup(Gb, {proj[v] for v in V.elements})
    VU = V.join(U)
    l = (VU.order // V.order) * spec.l_of(0)
    return Gb, proj, H, l


def build_galois_system(spec: ProblemSpec, bold: bool = True) -> LatticeSystem:
    """Divisor lattices for a Galois field ``K`` and irreducible separable ``P``.

    ``D = Z_P (x) Z[K/k] (+) S'`` with ``S' = Z[K/k] (+) Z[Omega]`` (``Omega``
    the ``e'``-subsets) when ``n`` does not divide ``m`` and ``S' = Z``
    otherwise.  With ``bold=True`` everything is over ``Gal(K/k)`` with
    ``Z_P`` replaced by ``Z[L'/k]`` and ``f`` scaled by ``l = [L:L']``;
    otherwise the group is ``G`` itself and ``L`` is used directly.
    """
    if len(spec.factors) != 1 or int(spec.factors[0][1]) != 1 or spec.synthetic is not None:
        raise HypothesisError("this construction needs a single irreducible factor with exponent 1")
    if bold:
        Gw, proj, H, l = galois_data(spec)
        X = Gw.cosets(Gw.trivial)
        Vw = H
        m = l * H.index
    else:
        if not spec.is_galois_field():
            raise HypothesisError("K must be a Galois field")
        Gw = spec.G
        X = Gw.cosets(spec.components[0])
        Vw = spec.factors[0][0]
        l = 1
        m = Vw.index
    n = X.size
    ep = math.gcd(n, m)
    delta = (-m) % n
    deltap = (m + delta) // n
    Z, ZX, diag, T = norm_torus_character(X)
    ZX.name = "Z[K/k]"
    Y = Gw.cosets(Vw)
    ZP = perm_lattice(Y, name="Z[L'/k]" if bold else "Z[L/k]")
    ZP.summands = ([0], [ZP])
    blocks = [FactorBlock(0, Vw, 1, 0, Y.size, "L'" if bold else "L")]
    tens = tensor(ZP, ZX)
    divides = m % n == 0
    if divides:
        D = direct_sum([tens, trivial_lattice(Gw, name="1")], name="D'", tags=["L⊗K", "S'"])
        omega = None
    else:
        _check_omega_total(math.comb(n, ep))
        gs, members = _omega(X, [ep])
        omega = (gs, members)
        D = direct_sum([tens, perm_lattice(X, name="Z[K/k]"), perm_lattice(gs, name="Z[Omega]")],
                       name="D'", tags=["L⊗K", "K", "Omega"])
    offs = D.summands[0]
    fcols = []
    for t in range(Y.size):
        col = {offs[0] + t * n + x: 1 for x in range(n)}
        if divides:
            col[offs[1]] = -l
        else:
            for x in range(n):
                col[offs[1] + x] = -l
            for w in range(omega[0].size):
                col[offs[2] + w] = -l
        fcols.append(col)
    f = LatticeMap(ZP, D, fcols, name="f")
    jcols = []
    for x in range(n):
        col = {offs[0] + t * n + x: -1 for t in range(Y.size)}
        if divides:
            col[offs[1]] = m // n
        else:
            for y in range(n):
                v = deltap - (delta if y == x else 0)
                if v:
                    col[offs[1] + y] = v
            for w, mem in enumerate(omega[1]):
                v = deltap - ((delta // ep) if x in mem else 0)
                if v:
                    col[offs[2] + w] = v
        jcols.append(col)
    jmap = LatticeMap(ZX, D, jcols, name="j")
    a = LatticeMap(Z, ZP, [{t: -1 for t in range(Y.size)}], name="a")
    Tp = Cokernel(f, name="T'")
    sys = LatticeSystem("galois-bold" if bold else "galois", Gw, X, ZX, Z, diag, T, ZP, D, f, jmap,
                        a, Tp, blocks, n, m)
    sys.info.update({"l": l, "e'": ep, "delta": delta, "delta'": deltap,
                     "omega": omega[0].size if omega else 0})
    if bold:
        sys.info["_H"] = Vw
    _check_j(sys)
    return sys


def build_system(spec: ProblemSpec):
    """Normalize and build the lattice system used by the engine.

    Specs with a Galois field ``K``, one irreducible factor with exponent 1
    and variant X use the Galois construction over ``Gal(K/k)``; everything
    else uses the general construction over ``G``.  Returns
    ``(system, normalized_spec, notes)``.
    """
    if spec.variant == "X" and not spec.is_galois_field():
        raise HypothesisError("variant X needs K to be a Galois field; use X' for étale K")
    if spec.section3_eligible():
        spec2, notes = normalize(spec, append_synthetic=False)
        sys = build_galois_system(spec2, bold=True)
        if spec2.m % spec2.n:
            dp = sys.info["delta'"]
            notes.append(f"n={spec2.n} does not divide m: delta={sys.info['delta']}, delta'={dp}")
        sys.notes = notes
        return sys, spec2, notes
    spec2, notes = normalize(spec)
    sys = build_general_system(spec2)
    sys.notes = notes
    return sys, spec2, notes


# ---------------------------------------------------------------------------
# base change


def restrict_problem(spec: ProblemSpec, Gp: Subgroup) -> ProblemSpec:
    """The same equation over ``F = M^{G'}``.

    Each component ``M^{U}`` of ``K`` splits along the double cosets
    ``G' g U`` into fields with groups ``G' cap g U g^-1``; factors split the
    same way and keep their exponents.
    """
    G = spec.G
    Hg, emb = Gp.as_group()
    pos = {g: i for i, g in enumerate(emb)}

    def split(S):
        out, seen = [], set()
        for g in G.elements:
            if g in seen:
                continue
            dc = {G.table[G.table[h][g]][u] for h in Gp.elements for u in S.elements}
            seen |= dc
            conj = S.conjugate(g)
            out.append(Subgroup(Hg, [pos[x] for x in conj.elements if x in pos]))
        return out

    comps = [c for U in spec.components for c in split(U)]
    factors, lo = [], []
    for i, (V, e) in enumerate(spec.factors):
        for c in split(V):
            factors.append((c, e))
            lo.append(spec.l_of(i))
    variant = spec.variant
    new = ProblemSpec(Hg, comps, factors, variant="X'" if variant == "X" and len(comps) > 1 else variant,
                      l_overrides=lo if spec.l_overrides is not None else None,
                      name=f"{spec.name}|F")
    return new


# ---------------------------------------------------------------------------
# reports


@dataclass
class BrauerReport:
    name: str
    n: int
    m: int
    variant: str
    V: object  # FinAb
    W: object
    exact_group: object = None  # FinAb or None
    method: str | None = None
    generators: list = field(default_factory=list)
    cths: object = None
    notes: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return self.V.order() * self.W.order()

    def to_json(self) -> dict:
        eg = None
        if self.exact_group is not None:
            eg = {"group": str(self.exact_group), "method": self.method}
        return {"name": self.name, "n": self.n, "m": self.m, "variant": self.variant,
                "V": str(self.V), "W": str(self.W), "order": self.order, "exact_group": eg,
                "generators": list(self.generators),
                "cths": None if self.cths is None else str(self.cths), "notes": list(self.notes)}

    @classmethod
    def from_json(cls, data: dict) -> "BrauerReport":
        eg = data.get("exact_group")
        rep = cls(data["name"], int(data["n"]), int(data["m"]), data["variant"],
                  FinAb.parse(data["V"]), FinAb.parse(data["W"]),
                  None if eg is None else FinAb.parse(eg["group"]), None if eg is None else eg["method"],
                  list(data.get("generators", [])),
                  None if data.get("cths") is None else FinAb.parse(data["cths"]), list(data.get("notes", [])))
        if rep.order != data["order"]:
            raise ValueError(f"order {data['order']} does not match |V||W| = {rep.order}")
        return rep


def vertical_part(spec: ProblemSpec, path: str = "shapiro"):
    from . import engine
    sys, _, _ = build_system(spec)
    return engine.vertical_part(sys, path)


def sha_kernel(spec: ProblemSpec, path: str = "shapiro"):
    from . import engine
    sys, _, _ = build_system(spec)
    return engine.sha_kernel(sys, path)


def _fmt_frac(x):
    return "0" if x == 0 else f"{x.numerator}/{x.denominator}"


def _character_tables(sys):
    """Per Z_P orbit: lookup from H^2(E, Z) coordinates to characters of ``E``."""
    from .characters import CharacterGroup
    from .cohom import character_class, shapiro_reduction
    red = shapiro_reduction(sys.ZP)
    R2 = red.cohomology(2)
    tables = []
    for (sub, emb, _), piece in zip(red.parts, R2.pieces):
        Eg = sub.G
        X = CharacterGroup(Eg)
        look = {}
        for chi in X.all():
            vals = [X.value(chi, g) for g in Eg.elements]
            z = character_class(Eg, vals)
            look[tuple(piece.classify(z)) if piece.group.ngens else ()] = chi
        tables.append((X, look, piece))
    return red, R2, tables


def psi_characters(sys, coords_list):
    """Characters ``(chi_i)`` per factor for classes of reduced ``H^2(Z_P)``.

    Returns one list per class: ``[(block label, CharacterGroup, chi), ...]``
    with trivial characters omitted.
    """
    red, R2, tables = _character_tables(sys)
    out = []
    for coords in coords_list:
        parts = R2.reduced_element(coords)
        row = []
        for blk, part, (X, look, piece) in zip(sys.blocks, parts, tables):
            key = tuple(piece.classify(part)) if piece.group.ngens and part else (0,) * piece.group.ngens
            chi = look[key]
            if any(chi):
                row.append((blk.label, X, chi))
        out.append(row)
    return out


def render_generator(row) -> str:
    terms = []
    for label, X, chi in row:
        vals = ", ".join(f"{X.G.names[g]}->{_fmt_frac(X.value(chi, g))}" for g in X.gen_elements)
        if label == "t":
            terms.append(f"(t, [{vals}])")
        else:
            i = label.lstrip("L").rstrip("'") or "1"
            terms.append(f"Cor_{{{label}/k}}(t-θ{i}, [{vals}])")
    return " + ".join(terms) if terms else "0"


def cths_quotient(spec: ProblemSpec):
    """``Ker[H^2(Gal(K/k), Q/Z) -> prod_i H^2(H_i, Q/Z)]`` with ``H_i = Gal(K/L_i cap K)``.

    Needs ``K`` a Galois field, each ``H_i`` normal and ``Gal(K/k)/[H_i, H_i]``
    abelian.  Several factors are allowed (kernel of the joint restriction).
    """
    from .cohom import restriction, trivial_module, qz_cohomology
    from .exactlin import kernel_subgroup
    if not spec.is_galois_field():
        raise HypothesisError("K must be a Galois field")
    (U,) = spec.components
    Gb, proj = quotient(spec.G, U)
    Hs = []
    for i, (V, _) in enumerate(spec.factors):
        if i == spec.synthetic:
            continue
        H = Subgroup(Gb, {proj[v] for v in V.elements})
        if H.order == Gb.order and len(spec.factors) - (spec.synthetic is not None) > 1:
            # a factor with L_i cap K = k contributes vertical classes the formula misses
            raise HypothesisError(f"factor {i + 1}: L{i + 1} cap K = k with several factors (P not irreducible)")
        if not H.is_normal():
            raise HypothesisError(f"factor {i + 1}: L{i + 1} cap K is not Galois over k")
        Hd = H.as_group()[0].derived_subgroup()
        emb = H.as_group()[1]
        comm = Subgroup(Gb, [emb[x] for x in Hd.elements])
        if not Gb.derived_subgroup() <= comm:
            raise HypothesisError(f"factor {i + 1}: G/[H,H] is not abelian")
        Hs.append(H)
    if Gb.order == 1:
        return FinAb()
    H2 = qz_cohomology(Gb, 2)
    Z = trivial_module(Gb)
    rows, tmods = [], []
    for H in Hs:
        if H.order == 1:
            continue
        res = restriction(Z, H, 3)
        rows.extend(res.matrix)
        tmods.extend(res.target.mods)
    grp, _ = kernel_subgroup(rows, H2.group.mods, tmods)
    return grp


def dihedral_shape(spec: ProblemSpec):
    """``(n_tilde, l)`` if the Galois construction applies with ``Gal(K/k)``
    dihedral and ``H`` its cyclic subgroup of index 2, else ``None``."""
    if not spec.section3_eligible():
        return None
    Gb, _, H, l = galois_data(spec)
    nt = H.order
    if H.index != 2 or not H.is_cyclic() or nt < 2:
        return None
    gens = [h for h in H.elements if Gb.element_order(h) == nt]
    if not gens:
        return None
    h = gens[0]
    for s in Gb.elements:
        if s in H or Gb.element_order(s) != 2:
            continue
        if Gb.conj(s, h) == Gb.inverse[h]:
            return nt, l
    return None


def brauer_report(spec: ProblemSpec, path: str = "shapiro") -> BrauerReport:
    """Evaluate ``Br_un / Br_0`` through ``0 -> V -> Br -> W -> 0``."""
    from . import engine, oracles
    if path not in ("shapiro", "generic", "both"):
        raise ValueError(f"unknown path {path!r}")
    sys, spec2, notes = build_system(spec)
    notes = list(notes)
    vs = engine.vertical_part(sys, "shapiro") if path in ("shapiro", "both") else None
    ws = engine.sha_kernel(sys, "shapiro") if path in ("shapiro", "both") else None
    vg = engine.vertical_part(sys, "generic") if path in ("generic", "both") else None
    wg = engine.sha_kernel(sys, "generic") if path in ("generic", "both") else None
    V = (vs or vg).group
    W = (ws or wg).group
    extra = {"system": sys.summary(), "sha": str((ws or wg).sha)}
    if path == "both":
        agree = vs.group == vg.group and ws.group == wg.group
        extra["paths_agree"] = agree
        notes.append("generic and shapiro paths agree" if agree else
                     f"PATH DISAGREEMENT: shapiro V={vs.group} W={ws.group}, generic V={vg.group} W={wg.group}")
    gens = []
    if vs is None:
        vs = engine.vertical_part(sys, "shapiro")
    if vs.gens:
        gens = [render_generator(r) for r in psi_characters(sys, vs.gens)]
    rep = BrauerReport(spec.name, spec2.n, spec2.m, spec.variant, V, W, generators=gens, notes=notes,
                       extra=extra)
    if W.is_trivial():
        rep.exact_group, rep.method = V, "W=0"
    elif V.is_trivial():
        rep.exact_group, rep.method = W, "V=0"
    shape = dihedral_shape(spec2)
    if shape is not None:
        closed = oracles.dihedral_brauer(*shape)
        extra["closed_form"] = str(closed)
        if closed.order() == rep.order and (rep.exact_group is None or rep.exact_group == closed):
            rep.exact_group, rep.method = closed, rep.method or "closed-form dihedral"
        else:
            notes.append(f"dihedral closed form {closed} (n~={shape[0]}, l={shape[1]}) "
                         f"disagrees with the computed order {rep.order}")
    if rep.exact_group is None:
        notes.append("extension 0 -> V -> Br -> W -> 0 not determined (it need not split)")
    try:
        rep.cths = cths_quotient(spec2)
    except HypothesisError as exc:
        notes.append(f"cths not computed: {exc}")
    return rep
