"""Closed forms and enumeration oracles, independent of the lattice pipeline.

Everything here uses character arithmetic (:mod:`normbrauer.characters`) and,
for ``H^2(A, Q/Z)`` of small abstract groups, the bar complex of the trivial
module.  Nothing here builds ``D``, ``T`` or ``T'``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .characters import CharacterGroup, corestrict
from .exactlin import FinAb, subgroup_of, subquotient
from .groups import FiniteGroup, Subgroup, abelian, quotient


class OracleError(ValueError):
    """Oracle parameters are inconsistent or a hypothesis fails."""


def _v(p, x):
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


def schur_abelian(invariants) -> FinAb:
    """``H^2(A, Q/Z)`` for ``A = prod Z/a_i``: ``prod_{i<j} Z/gcd(a_i, a_j)``."""
    inv = [int(a) for a in invariants]
    return FinAb.from_orders([math.gcd(a, b) for a, b in itertools.combinations(inv, 2)])


def hom_abelian(src, tgt) -> FinAb:
    """``Hom(prod Z/a_i, prod Z/b_j)``."""
    return FinAb.from_orders([math.gcd(a, b) for a in src for b in tgt])


# ---------------------------------------------------------------------------
# closed forms


@dataclass
class DihedralParams:
    n_tilde: int
    l: int = 1

    def __post_init__(self):
        if self.n_tilde < 2 or self.l < 1:
            raise OracleError("need n_tilde >= 2 and l >= 1")


def dihedral_brauer(p: DihedralParams | int, l: int | None = None) -> FinAb:
    """``Z/n`` if ``n`` is odd or ``4 | n l``; ``Z/(n/2)`` otherwise."""
    if not isinstance(p, DihedralParams):
        p = DihedralParams(int(p), 1 if l is None else int(l))
    n = p.n_tilde
    if n % 2 or (n * p.l) % 4 == 0:
        return FinAb.from_orders([n])
    return FinAb.from_orders([n // 2])


@dataclass
class AbelianPParams:
    p: int
    s: int
    r: int = 0
    e_list: list = field(default_factory=list)  # exponents e_i < s
    mu_list: list = field(default_factory=list)  # exponents mu_j > s
    l: int = 1
    s_prime: int | None = None
    h1_order: int = 1

    def __post_init__(self):
        from sympy import isprime
        if not isprime(self.p):
            raise OracleError(f"{self.p} is not prime")
        if self.s < 1 or self.r < 0:
            raise OracleError("need s >= 1 and r >= 0")
        if any(not 1 <= e < self.s for e in self.e_list):
            raise OracleError(f"every e_i must satisfy 1 <= e_i < s={self.s}")
        if any(m <= self.s for m in self.mu_list):
            raise OracleError(f"every mu_j must exceed s={self.s}")
        if self.s_prime is not None and self.s_prime < self.s:
            raise OracleError("s' must be at least s")
        if self.h1_order % self.p == 0:
            raise OracleError("H_1 must have order prime to p")

    def group_invariants(self):
        """Invariants of ``G = G_1 x G_2`` (``G_1 = Z/p^{s'}``)."""
        p = self.p
        inv = [p ** (self.s_prime or self.s)] + [p ** self.s] * self.r
        inv += [p ** e for e in self.e_list] + [p ** m for m in self.mu_list]
        if self.h1_order > 1:
            inv.append(self.h1_order)
        return inv


def abelian_p_params(G: FiniteGroup, H: Subgroup, l: int = 1) -> AbelianPParams:
    """Read off the parameters from abelian ``G`` and ``H = Gal(K/L')``.

    Searches a splitting ``G = G_1 x G_2`` with ``G_1`` cyclic of ``p``-power
    order and ``G_2 <= H``.
    """
    from sympy import factorint
    if not G.is_abelian():
        raise OracleError("G must be abelian")
    q = H.index
    fac = factorint(q)
    if len(fac) != 1:
        raise OracleError(f"G/H has order {q}, not a nontrivial prime power")
    (p, s), = fac.items()
    Q, proj = quotient(G, H)
    if not any(Q.element_order(x) == q for x in Q.elements):
        raise OracleError("G/H is not cyclic")
    cands = [S for S in H.group.all_subgroups if S <= H]
    for g in G.elements:
        og = G.element_order(g)
        if Q.element_order(proj[g]) != q or og != p ** _v(p, og):
            continue
        G1 = G.subgroup([g])
        for G2 in cands:
            if G2.order * G1.order == G.order and G2.intersect(G1).order == 1:
                inv = list(CharacterGroup(G2.as_group()[0]).mods) if G2.order > 1 else []
                r, e_list, mu_list, h1 = 0, [], [], 1
                for d in inv:
                    t = _v(p, d)
                    h1 *= d // p ** t
                    if t == s:
                        r += 1
                    elif 0 < t < s:
                        e_list.append(t)
                    elif t > s:
                        mu_list.append(t)
                s_prime = _v(p, og)
                return AbelianPParams(p, s, r, sorted(e_list), sorted(mu_list), l, s_prime, h1)
    raise OracleError("no splitting G = G_1 x G_2 with G_2 inside H")


def abelian_p_brauer(a: AbelianPParams) -> FinAb:
    p, s = a.p, a.s
    if p % 2 or a.l % 2 == 0:
        orders = [p ** s] * (a.r + len(a.mu_list)) + [p ** e for e in a.e_list]
    else:
        orders = [2 ** (s - 1)] * a.r + [2 ** s] * len(a.mu_list) + [2 ** e for e in a.e_list]
    return FinAb.from_orders(orders)


@dataclass
class SplitCompositeParams:
    """Data for ``K = L'.F`` with ``F cap L = k``; ``H = Gal(F/k)``.

    ``lp`` is ``Gal(L'/k)`` (a FiniteGroup or abelian invariants), ``h_ab``
    the invariants of ``H^ab``.  The second-case decomposition (``s``,
    ``u1``, ``u2``, ``s_list``, ``t_list``) is given explicitly and checked
    against ``h_ab`` and ``lp``.
    """

    lp: object
    h_ab: list
    l: int = 1
    rho: int = 1
    u1: int = 0
    u2: int = 0
    s_list: list = field(default_factory=list)
    t_list: list = field(default_factory=list)

    def lp_group(self) -> FiniteGroup:
        return self.lp if isinstance(self.lp, FiniteGroup) else abelian(list(self.lp))

    def lp_ab(self):
        if isinstance(self.lp, FiniteGroup):
            return list(CharacterGroup(self.lp).mods)
        return [int(x) for x in self.lp if int(x) > 1]


def _two_part(invariants):
    return sorted(2 ** _v(2, a) for a in invariants if a % 2 == 0)


def _odd_part(invariants):
    return [a >> _v(2, a) for a in invariants if a >> _v(2, a) > 1]


def split_composite_brauer(p: SplitCompositeParams) -> FinAb:
    from .cohom import qz_cohomology
    Gp = p.lp_group()
    h2 = qz_cohomology(Gp, 2).group if Gp.order > 1 else FinAb()
    lp_ab = p.lp_ab()
    lp2 = _two_part(lp_ab)
    first = (p.l * p.rho) % 2 == 0 or not lp2 or len(lp2) > 1
    if first:
        return h2 * hom_abelian(lp_ab, p.h_ab)
    s = _v(2, lp2[0])
    if any(not 1 <= x < s for x in p.s_list) or any(t <= s for t in p.t_list):
        raise OracleError("need every s_i < s and every t_j > s")
    expect = sorted([2 ** s] * (p.u1 + p.u2) + [2 ** x for x in p.s_list] + [2 ** t for t in p.t_list])
    if expect != _two_part(p.h_ab):
        raise OracleError(f"decomposition {expect} does not match the 2-part of H^ab {_two_part(p.h_ab)}")
    odd = hom_abelian(_odd_part(lp_ab), _odd_part(p.h_ab))
    orders = [2 ** (s - 1)] * p.u1 + [2 ** s] * (len(p.t_list) + p.u2) + [2 ** x for x in p.s_list]
    return h2 * odd * FinAb.from_orders(orders)


def perfect_h_formula(G: FiniteGroup, H: Subgroup) -> FinAb:
    """``H^3(G/H, Z)`` when ``H^ab = 0``."""
    from .cohom import qz_cohomology
    if not H.is_normal():
        raise OracleError("H must be normal")
    if CharacterGroup(G, H).order() != 1:
        raise OracleError("H is not perfect (H^ab != 0)")
    Q, _ = quotient(G, H)
    if Q.order == 1:
        return FinAb()
    return qz_cohomology(Q, 2).group


# ---------------------------------------------------------------------------
# enumeration oracles


def _subgroup_from_elements(elements, mods):
    if not elements:
        return FinAb()
    X = [[e[i] for e in elements] for i in range(len(mods))]
    return subgroup_of(X, mods)[0]


def split_polynomial_brauer(G: FiniteGroup, e_list, l_list=None):
    """Character-tuple group for ``P = c prod (t - a_i)^{e_i}`` over Galois ``K``.

    Returns ``(group, generators)`` where generators are tuples of
    characters (coordinates in ``CharacterGroup(G)``).
    """
    e_list = [int(e) for e in e_list]
    n = G.order
    if l_list is not None and any(int(x) != 1 for x in l_list):
        raise OracleError("rational roots have l = 1")
    if sum(e_list) % n:
        raise OracleError(f"n={n} must divide sum(e)={sum(e_list)}")
    if math.gcd(n, *e_list) != 1:
        raise OracleError("gcd(e_1, ..., e_s, n) must be 1")
    X = CharacterGroup(G)
    chars = X.all()
    k = len(X.mods)
    s = len(e_list)
    if len(chars) ** max(s - 1, 0) > 200_000:
        raise OracleError("too many character tuples to enumerate")
    eprime = [math.gcd(e, n) for e in e_list]
    torsion = {d: [g for g in G.elements if G.power(g, d) == 0] for d in set(eprime)}
    allowed = [[c for c in chars if X.kills(c, torsion[d])] for d in eprime]
    num = []
    # last entry is forced by the sum condition
    for head in itertools.product(*allowed[:-1]):
        acc = X.zero()
        for c in head:
            acc = X.add(acc, c)
        last = X.neg(acc)
        if last in set(allowed[-1]):
            num.append(head + (last,))
    mods = list(X.mods) * s

    def flat(t):
        return [x for c in t for x in c]

    img = [flat(tuple(X.scale(e, c) for e in e_list)) for c in chars]
    grp, gens = subquotient([flat(t) for t in num], img, mods)
    gens = [tuple(tuple(g[i * k:(i + 1) * k]) for i in range(s)) for g in gens]
    return grp, gens


class QuotientCharacters:
    """``A = Hom(H, Q/Z)`` with the conjugation action of ``Q = G/H``."""

    def __init__(self, G: FiniteGroup, H: Subgroup):
        if not H.is_normal():
            raise OracleError("H must be normal in G")
        self.G, self.H = G, H
        self.X = CharacterGroup(G, H)
        self.Q, self.proj = quotient(G, H)
        self.lift = {}
        for g in G.elements:
            self.lift.setdefault(self.proj[g], g)
        self.chars = self.X.all()
        self.act = {q: {c: self.X.conjugate(self.lift[q], c) for c in self.chars} for q in self.Q.elements}
        self.cprime_cache = {}

    def trivial_action(self) -> bool:
        return all(self.act[q][c] == c for q in self.Q.elements for c in self.chars)

    def crossed_homs(self, module_elems, act, add, zero):
        """All 1-cocycles ``Q -> M`` as tuples indexed by ``Q.elements``."""
        Q = self.Q
        gens = list(Q.canonical_generators)
        out = []
        # breadth-first words in the generators
        for vals in itertools.product(module_elems, repeat=len(gens)):
            c = {0: zero}
            frontier = [0]
            ok = True
            while frontier and ok:
                nxt = []
                for a in frontier:
                    for g, v in zip(gens, vals):
                        b = Q.table[a][g]
                        val = add(c[a], act(a, v))  # c(ag) = c(a) + a c(g)
                        if b in c:
                            if c[b] != val:
                                ok = False
                                break
                        else:
                            c[b] = val
                            nxt.append(b)
                    if not ok:
                        break
                frontier = nxt
            if ok and self._is_cocycle(c, act, add):
                out.append(tuple(c[q] for q in Q.elements))
        return out

    def _is_cocycle(self, c, act, add):
        Q = self.Q
        return all(c[Q.table[a][b]] == add(c[a], act(a, c[b])) for a in Q.elements for b in Q.elements)


def c_group(G: FiniteGroup, H: Subgroup, l: int, e: int):
    """``C = {chi in Hom(H, Q/Z) : l Cor(chi)(g) = 0 whenever g^e = 1}``."""
    XH = CharacterGroup(G, H)
    XG = CharacterGroup(G)
    tors = [g for g in G.elements if G.power(g, e) == 0]
    elems = []
    for chi in XH.all():
        cor = corestrict(XH, XG, chi)
        if all((l * XG.value(cor, g)).denominator == 1 for g in tors):
            elems.append(chi)
    return _subgroup_from_elements(elems, XH.mods), elems, XH


def coker_h1_to_c(G: FiniteGroup, H: Subgroup, l: int, e: int) -> FinAb:
    """Cokernel of restriction ``Hom(G, Q/Z) -> C``."""
    C, elems, XH = c_group(G, H, l, e)
    XG = CharacterGroup(G)
    img = [XG.restrict(XH, chi) for chi in XG.all()]
    grp, _ = subquotient([list(x) for x in elems], [list(x) for x in img], XH.mods)
    return grp


class CPrime:
    """``C' subset Hom(H,Q/Z) (x) Z[G/H]`` as tuples indexed by ``Q.elements``."""

    def __init__(self, qc: QuotientCharacters, l: int, e: int):
        self.qc = qc
        G, H, X = qc.G, qc.H, qc.X
        self.l, self.e = l, e
        self.tors = [h for h in H.elements if G.power(h, e) == 0]
        self.Q = qc.Q
        # integer numerators over the common denominator N; l * tot is integral
        # iff the numerator sum vanishes mod N / gcd(l, N)
        N = math.lcm(*X.mods) if X.mods else 1
        self._num = {c: tuple(int(X.value(c, h) * N) for h in self.tors) for c in qc.chars}
        self._mod = N // math.gcd(l, N)

    def contains(self, t) -> bool:
        if self._mod == 1:
            return True
        nums = [self._num[c] for c in t]
        return all(sum(col) % self._mod == 0 for col in zip(*nums))

    def act(self, q, t):
        """``q . sum chi_s (x) s = sum (q chi_s) (x) q s``."""
        Q = self.Q
        out = [None] * Q.order
        for s, c in zip(Q.elements, t):
            out[Q.table[q][s]] = self.qc.act[q][c]
        return tuple(out)

    def elements(self):
        key = (tuple(self.tors), self._mod)
        hit = self.qc.cprime_cache.get(key)
        if hit is not None:
            return hit
        chars = self.qc.chars
        if len(chars) ** self.Q.order > 500_000:
            raise OracleError("C' too large to enumerate")
        out = [t for t in itertools.product(chars, repeat=self.Q.order) if self.contains(t)]
        self.qc.cprime_cache[key] = out
        return out

    def coboundaries(self):
        """``{q -> q m - m}`` for ``m`` in ``C'``, as tuples of per-slot tuples."""
        key = ("cob", tuple(self.tors), self._mod)
        hit = self.qc.cprime_cache.get(key)
        if hit is not None:
            return hit
        X, Q = self.qc.X, self.Q
        out = set()
        for m in self.elements():
            out.add(tuple(tuple(X.add(a, X.neg(b)) for a, b in zip(self.act(q, m), m)) for q in Q.elements))
        self.qc.cprime_cache[key] = out
        return out


def c_prime_module(G: FiniteGroup, H: Subgroup, l: int, e: int) -> CPrime:
    return CPrime(QuotientCharacters(G, H), l, e)


def _diag(qc, chi):
    return tuple(chi for _ in qc.Q.elements)


def res_kernel_delta(G: FiniteGroup, H: Subgroup, l: int, e: int, qc: QuotientCharacters | None = None):
    """``Delta = Ker[H^1(G/H, Hom(H,Q/Z)) -> H^1(G/H, C')]`` by enumeration.

    Returns ``(Delta, H1)`` as FinAbs.
    """
    qc = qc or QuotientCharacters(G, H)
    X, Q = qc.X, qc.Q
    cp = CPrime(qc, l, e)
    cocycles = qc.crossed_homs(qc.chars, lambda q, v: qc.act[q][v], X.add, X.zero())
    bound_A = {tuple(X.add(qc.act[q][a], X.neg(a)) for q in Q.elements) for a in qc.chars}
    bound_C = cp.coboundaries()
    killed = []
    for c in cocycles:
        img = tuple(_diag(qc, c[i]) for i in range(Q.order))
        if img in bound_C:
            killed.append(c)
    mods = list(X.mods) * Q.order

    def flat(c):
        return [x for a in c for x in a]

    delta, _ = subquotient([flat(c) for c in killed], [flat(b) for b in bound_A], mods)
    h1, _ = subquotient([flat(c) for c in cocycles], [flat(b) for b in bound_A], mods)
    return delta, h1


_qc_cache: dict = {}


def _quotient_characters(G, H):
    key = (id(G), H.elements)
    hit = _qc_cache.get(key)
    if hit is None or hit.G is not G:
        if len(_qc_cache) > 256:
            _qc_cache.clear()
        hit = _qc_cache[key] = QuotientCharacters(G, H)
    return hit


def lemma_checks(G: FiniteGroup, H: Subgroup, l: int = 1, e: int = 1) -> dict:
    """Run the corestriction-vanishing and ``2 Res = 0`` lemmas on every character.

    Returns ``{"cor": {...}, "map0": {...}}`` with ``status`` in
    ``pass``/``fail``/``skip`` and counts or a witness.
    """
    out = {}
    meta = G.meta or {}
    if meta.get("rotations") is not None and meta["rotations"] == H:
        XH, XG = CharacterGroup(G, H), CharacterGroup(G)
        bad = [chi for chi in XH.all() if any(corestrict(XH, XG, chi))]
        out["cor"] = {"status": "fail" if bad else "pass", "checked": XH.order(), "witness": bad[:1]}
    else:
        out["cor"] = {"status": "skip", "reason": "not a dihedral group with its rotation subgroup"}
    try:
        qc = _quotient_characters(G, H)
    except OracleError as exc:
        out["map0"] = {"status": "skip", "reason": str(exc)}
        return out
    if not qc.trivial_action():
        out["map0"] = {"status": "skip", "reason": "G/H acts nontrivially on Hom(H, Q/Z)"}
        return out
    X = qc.X
    cp = CPrime(qc, l, e)
    try:
        bound_C = cp.coboundaries()
    except OracleError as exc:
        out["map0"] = {"status": "skip", "reason": str(exc)}
        return out
    homs = qc.crossed_homs(qc.chars, lambda q, v: v, X.add, X.zero())
    checked, vanish_checked, failures = 0, 0, []
    tors = cp.tors
    for chi in homs:
        r = 1
        for a in chi:
            r = math.lcm(r, X.char_order(a))
        twice = tuple(_diag(qc, X.scale(2, a)) for a in chi)
        checked += 1
        if twice not in bound_C:
            failures.append(("2Res", chi))
            continue
        cond = r % 2 == 1
        if not cond:
            cond = True
            for h in tors:
                ker = sum(1 for a in chi if X.value(a, h) == 0)
                if (l * ker) % 2:
                    cond = False
                    break
        if cond:
            vanish_checked += 1
            once = tuple(_diag(qc, a) for a in chi)
            if once not in bound_C:
                failures.append(("Res", chi))
    out["map0"] = {"status": "fail" if failures else "pass", "checked": checked,
                   "vanishing_checked": vanish_checked, "witness": failures[:1]}
    return out
