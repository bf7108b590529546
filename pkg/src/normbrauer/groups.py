"""Finite groups by multiplication table, subgroups, cosets and G-sets."""
from __future__ import annotations

import itertools
import math
import random
import re
from functools import cached_property

from .config import CapError, get_caps


class GroupError(ValueError):
    pass


class FiniteGroup:
    """A finite group on elements ``0..N-1`` with ``0`` the identity."""

    def __init__(self, table, label: str = "G", meta: dict | None = None, names=None,
                 check: bool = True):
        self.table = [tuple(r) for r in table]
        self.order = len(self.table)
        self.label = label
        self.meta = dict(meta or {})
        self.names = list(names) if names else [str(i) for i in range(self.order)]
        cap = get_caps().max_group_order
        if self.order > cap:
            raise CapError(f"group order {self.order} exceeds max_group_order={cap}")
        if check:
            self._validate()
        e = 0
        self.inverse = [next(b for b in range(self.order) if self.table[a][b] == e)
                        for a in range(self.order)]

    def _validate(self):
        N = self.order
        full = set(range(N))
        if N == 0:
            raise GroupError("empty group")
        for a in range(N):
            if set(self.table[a]) != full:
                raise GroupError(f"row {a} is not a permutation")
            if {self.table[b][a] for b in range(N)} != full:
                raise GroupError(f"column {a} is not a permutation")
            if self.table[0][a] != a or self.table[a][0] != a:
                raise GroupError("element 0 is not the identity")
        t = self.table
        if N <= 64:
            triples = itertools.product(range(N), repeat=3)
        else:
            rng = random.Random(0)
            triples = ((rng.randrange(N), rng.randrange(N), rng.randrange(N)) for _ in range(20000))
        for a, b, c in triples:
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise GroupError(f"associativity fails at ({a},{b},{c})")

    def __repr__(self):
        return f"FiniteGroup({self.label}, order={self.order})"

    def __len__(self):
        return self.order

    @property
    def elements(self):
        return range(self.order)

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self.inverse[a]

    def prod(self, *xs):
        r = 0
        for x in xs:
            r = self.table[r][x]
        return r

    def power(self, a, k):
        if k < 0:
            a, k = self.inverse[a], -k
        r = 0
        for _ in range(k):
            r = self.table[r][a]
        return r

    def conj(self, g, x):
        """``g x g^-1``."""
        return self.table[self.table[g][x]][self.inverse[g]]

    def element_order(self, a) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def exponent(self) -> int:
        return math.lcm(*(self.element_order(a) for a in self.elements))

    # -- subgroups ----------------------------------------------------------
    def subgroup(self, gens=()) -> "Subgroup":
        return subgroup_closure(self, gens)

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, range(self.order))

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, [0])

    @cached_property
    def canonical_generators(self) -> tuple:
        """Greedy generating set: scan elements in index order."""
        gens, cur = [], {0}
        for a in self.elements:
            if a not in cur:
                gens.append(a)
                cur = set(subgroup_closure(self, gens).elements)
            if len(cur) == self.order:
                break
        return tuple(gens)

    def cyclic_subgroups(self) -> list["Subgroup"]:
        return cyclic_subgroups(self)

    @cached_property
    def all_subgroups(self) -> list["Subgroup"]:
        """Every subgroup, by closing joins of cyclic subgroups."""
        cyc = cyclic_subgroups(self)
        seen = {s.elements: s for s in cyc}
        frontier = list(cyc)
        while frontier:
            new = []
            for a in frontier:
                for c in cyc:
                    if set(c.elements) <= set(a.elements):
                        continue
                    j = subgroup_closure(self, a.elements + c.elements)
                    if j.elements not in seen:
                        seen[j.elements] = j
                        new.append(j)
            frontier = new
        return sorted(seen.values(), key=lambda s: (s.order, s.elements))

    def derived_subgroup(self) -> "Subgroup":
        t, inv = self.table, self.inverse
        comms = {t[t[a][b]][t[inv[a]][inv[b]]] for a in self.elements for b in self.elements}
        return subgroup_closure(self, sorted(comms))

    def center(self) -> "Subgroup":
        t = self.table
        return Subgroup(self, [a for a in self.elements
                               if all(t[a][b] == t[b][a] for b in self.elements)])

    def cosets(self, H: "Subgroup") -> "GSet":
        return cosets(self, H)

    def quotient(self, N: "Subgroup"):
        return quotient(self, N)

    @cached_property
    def automorphisms(self) -> list[tuple]:
        """All automorphisms as element-image tuples, identity first."""
        gens = self.canonical_generators
        if not gens:
            return [tuple(self.elements)]
        words = _words_from_generators(self, gens)
        orders = [self.element_order(g) for g in gens]
        cands = [[a for a in self.elements if self.element_order(a) == o] for o in orders]
        out = []
        for imgs in itertools.product(*cands):
            phi = _extend_hom(self, self, gens, imgs, words)
            if phi is not None and len(set(phi)) == self.order:
                out.append(tuple(phi))
        out.sort()
        ident = tuple(self.elements)
        out.remove(ident)
        return [ident] + out

    def is_hom_to(self, other: "FiniteGroup", images) -> bool:
        t, u = self.table, other.table
        return all(images[t[a][b]] == u[images[a]][images[b]]
                   for a in self.elements for b in self.elements)


def _words_from_generators(G: FiniteGroup, gens):
    """BFS: for each element, (parent element, generator index) with x = parent * gen."""
    words = {0: None}
    queue = [0]
    for x in queue:
        for k, g in enumerate(gens):
            y = G.table[x][g]
            if y not in words:
                words[y] = (x, k)
                queue.append(y)
    return words


def _extend_hom(G, T, gens, imgs, words=None):
    """Extend generator images to a homomorphism ``G -> T`` or return ``None``."""
    if words is None:
        words = _words_from_generators(G, gens)
    if len(words) != G.order:
        raise GroupError("elements do not generate the group")
    phi = [None] * G.order
    phi[0] = 0
    order = sorted(words, key=lambda x: _depth(words, x))
    for x in order:
        if x == 0:
            continue
        p, k = words[x]
        phi[x] = T.table[phi[p]][imgs[k]]
    for a in G.elements:
        for k, g in enumerate(gens):
            if phi[G.table[a][g]] != T.table[phi[a]][imgs[k]]:
                return None
    return phi


def _depth(words, x):
    d = 0
    while words[x] is not None:
        x = words[x][0]
        d += 1
    return d


class Subgroup:
    """A subgroup, identified by its sorted element tuple."""

    __slots__ = ("group", "elements", "_set", "__dict__")

    def __init__(self, group: FiniteGroup, elements):
        self.group = group
        self.elements = tuple(sorted(set(elements)))
        self._set = frozenset(self.elements)

    def __contains__(self, x):
        return x in self._set

    def __len__(self):
        return len(self.elements)

    @property
    def order(self):
        return len(self.elements)

    @property
    def index(self):
        return self.group.order // self.order

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.group is other.group and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"Subgroup(order={self.order}, {list(self.elements)})"

    def __le__(self, other):
        return self._set <= other._set

    def intersect(self, other):
        return Subgroup(self.group, self._set & other._set)

    def join(self, other):
        return subgroup_closure(self.group, self.elements + other.elements)

    def conjugate(self, g):
        G = self.group
        return Subgroup(G, [G.conj(g, h) for h in self.elements])

    def normality_witness(self):
        """``(g, h)`` with ``g h g^-1`` outside, or ``None`` if normal."""
        G = self.group
        for g in G.canonical_generators or (0,):
            for h in self.elements:
                if G.conj(g, h) not in self._set:
                    return g, h
        return None

    def is_normal(self):
        return self.normality_witness() is None

    def is_cyclic(self):
        G = self.group
        return any(G.element_order(h) == self.order for h in self.elements)

    def normal_core(self):
        G = self.group
        core = self._set
        for g in G.elements:
            core = core & self.conjugate(g)._set
        return Subgroup(G, core)

    def as_group(self):
        """The subgroup as a standalone group plus the embedding list."""
        idx = {x: i for i, x in enumerate(self.elements)}
        t = self.group.table
        table = [[idx[t[a][b]] for b in self.elements] for a in self.elements]
        names = [self.group.names[x] for x in self.elements]
        return FiniteGroup(table, label=f"sub({self.group.label})", names=names, check=False), list(self.elements)

    def left_coset_reps(self):
        """Least-index representative of each left coset ``gH``, sorted."""
        G = self.group
        seen, reps = set(), []
        for g in G.elements:
            if g in seen:
                continue
            reps.append(g)
            seen.update(G.table[g][h] for h in self.elements)
        return reps

    def right_coset_reps(self):
        """Least-index representative of each right coset ``Hg``, sorted."""
        G = self.group
        seen, reps = set(), []
        for g in G.elements:
            if g in seen:
                continue
            reps.append(g)
            seen.update(G.table[h][g] for h in self.elements)
        return reps


def subgroup_closure(G: FiniteGroup, gens) -> Subgroup:
    elems = {0}
    frontier = [0]
    gens = [g for g in set(gens) if g != 0]
    if any(not 0 <= g < G.order for g in gens):
        raise GroupError(f"generator out of range in {sorted(gens)}")
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = G.table[x][g]
                if y not in elems:
                    elems.add(y)
                    new.append(y)
        frontier = new
    return Subgroup(G, elems)


def cyclic_subgroups(G: FiniteGroup) -> list[Subgroup]:
    seen = {}
    for g in G.elements:
        s = subgroup_closure(G, [g])
        seen.setdefault(s.elements, s)
    return sorted(seen.values(), key=lambda s: (s.order, s.elements))


# ---------------------------------------------------------------------------
# G-sets


class GSet:
    """A finite set with a left action: ``act[g][x]`` is ``g . x``."""

    def __init__(self, group: FiniteGroup, act, labels=None, check: bool = True):
        self.group = group
        self.act = [tuple(r) for r in act]
        self.size = len(self.act[0]) if self.act else 0
        self.labels = list(labels) if labels is not None else list(range(self.size))
        if check:
            self._validate()

    def _validate(self):
        G = self.group
        if self.act[0] != tuple(range(self.size)):
            raise GroupError("identity does not act trivially")
        for a in G.elements:
            if sorted(self.act[a]) != list(range(self.size)):
                raise GroupError(f"element {a} does not act by a permutation")
        for g in G.canonical_generators:
            for a in G.elements:
                ga = G.table[g][a]
                for x in range(self.size):
                    if self.act[ga][x] != self.act[g][self.act[a][x]]:
                        raise GroupError("action is not compatible with multiplication")

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"GSet(size={self.size})"

    def orbits(self) -> list[list[int]]:
        seen, out = set(), []
        for x in range(self.size):
            if x in seen:
                continue
            orb = sorted({self.act[g][x] for g in self.group.elements})
            seen.update(orb)
            out.append(orb)
        return out

    def stabilizer(self, x) -> Subgroup:
        return Subgroup(self.group, [g for g in self.group.elements if self.act[g][x] == x])

    def is_transitive(self) -> bool:
        return len(self.orbits()) <= 1

    def restrict(self, H: Subgroup) -> "GSet":
        """The same set viewed as an ``H``-set (``H`` as a standalone group)."""
        Hg, emb = H.as_group()
        return GSet(Hg, [self.act[g] for g in emb], self.labels, check=False)

    @staticmethod
    def disjoint_union(parts, labels=None) -> "GSet":
        G = parts[0].group
        act = []
        for g in G.elements:
            row, off = [], 0
            for p in parts:
                row.extend(off + y for y in p.act[g])
                off += p.size
            act.append(row)
        if labels is None:
            labels = [(i, lab) for i, p in enumerate(parts) for lab in p.labels]
        return GSet(G, act, labels, check=False)

    @staticmethod
    def point(G) -> "GSet":
        return GSet(G, [[0] for _ in G.elements], ["*"], check=False)


def cosets(G: FiniteGroup, H: Subgroup) -> GSet:
    """Left cosets ``G/H`` with left translation; point 0 is ``H`` itself."""
    reps = H.left_coset_reps()
    where = {}
    for i, r in enumerate(reps):
        for h in H.elements:
            where[G.table[r][h]] = i
    act = [[where[G.table[g][r]] for r in reps] for g in G.elements]
    labels = [G.names[r] + "H" if r else "H" for r in reps]
    gs = GSet(G, act, labels, check=False)
    gs.reps = reps
    gs.subgroup = H
    return gs


def quotient(G: FiniteGroup, N: Subgroup):
    """``G/N`` on least coset representatives, with the projection list."""
    w = N.normality_witness()
    if w is not None:
        g, h = w
        raise GroupError(f"subgroup is not normal: {g} * {h} * {g}^-1 = {G.conj(g, h)} lies outside")
    reps = N.left_coset_reps()
    where = {}
    for i, r in enumerate(reps):
        for h in N.elements:
            where[G.table[r][h]] = i
    table = [[where[G.table[a][b]] for b in reps] for a in reps]
    names = [G.names[r] for r in reps]
    Q = FiniteGroup(table, label=f"{G.label}/N", names=names, check=False)
    proj = [where[g] for g in G.elements]
    return Q, proj


# ---------------------------------------------------------------------------
# families


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic(n) needs n >= 1")
    _cap(n)
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], label=f"cyclic({n})",
                       names=[str(i) for i in range(n)], check=False)


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order ``2n``: element ``r^i s^j`` has index ``i + n*j``.

    ``meta['rotations']`` holds the cyclic subgroup of order ``n``.
    """
    if n < 1:
        raise GroupError("dihedral(n) needs n >= 1")
    _cap(2 * n)

    def mul(a, b):
        i, j = a % n, a // n
        k, m = b % n, b // n
        # r^i s^j r^k s^m = r^(i + (-1)^j k) s^(j+m)
        kk = k if j == 0 else -k
        return (i + kk) % n + n * ((j + m) % 2)

    table = [[mul(a, b) for b in range(2 * n)] for a in range(2 * n)]
    names = [_rs_name(a % n, a // n) for a in range(2 * n)]
    G = FiniteGroup(table, label=f"dihedral({n})", names=names, check=False)
    G.meta["rotations"] = Subgroup(G, range(n))
    G.meta["rotation"] = 1 % (2 * n) if n > 1 else 0
    G.meta["reflection"] = n
    return G


def _rs_name(i, j):
    parts = []
    if i:
        parts.append("r" if i == 1 else f"r^{i}")
    if j:
        parts.append("s")
    return "".join(parts) or "e"


def sym(n: int) -> FiniteGroup:
    if not 1 <= n <= 5:
        raise GroupError("sym(n) supports 1 <= n <= 5")
    perms = sorted(itertools.permutations(range(n)))
    idx = {p: i for i, p in enumerate(perms)}
    # (p*q)(x) = p(q(x))
    table = [[idx[tuple(p[q[x]] for x in range(n))] for q in perms] for p in perms]
    return FiniteGroup(table, label=f"sym({n})", names=["".join(map(str, p)) for p in perms], check=False)


def direct(A: FiniteGroup, B: FiniteGroup) -> FiniteGroup:
    """``A x B``; element ``(a, b)`` has index ``a + |A| b``."""
    na, nb = A.order, B.order
    _cap(na * nb)
    table = [[A.table[x % na][y % na] + na * B.table[x // na][y // na]
              for y in range(na * nb)] for x in range(na * nb)]
    names = [f"({A.names[x % na]},{B.names[x // na]})" for x in range(na * nb)]
    G = FiniteGroup(table, label=f"direct({A.label},{B.label})", names=names, check=False)
    G.meta["factors"] = (A, B)
    return G


def abelian(invariants) -> FiniteGroup:
    invariants = [int(d) for d in invariants if int(d) != 1]
    if not invariants:
        return cyclic(1)
    G = cyclic(invariants[0])
    for d in invariants[1:]:
        G = direct(G, cyclic(d))
    G.label = "abelian(" + ",".join(map(str, invariants)) + ")"
    return G


def semidirect(N: FiniteGroup, Q: FiniteGroup, action) -> FiniteGroup:
    """``N x| Q`` where ``action[k]`` is the automorphism index (in
    ``N.automorphisms``) of the k-th canonical generator of ``Q``; the string
    ``'inv'`` stands for inversion on an abelian ``N``.
    """
    auts = N.automorphisms
    gens = Q.canonical_generators
    if len(action) != len(gens):
        raise GroupError(f"action needs {len(gens)} entries, one per canonical generator of the quotient")
    imgs = []
    for a in action:
        if a == "inv":
            if not N.is_abelian():
                raise GroupError("'inv' needs an abelian normal factor")
            a = auts.index(tuple(N.inverse))
        a = int(a)
        if not 0 <= a < len(auts):
            raise GroupError(f"automorphism index {a} out of range (0..{len(auts) - 1})")
        imgs.append(a)
    # automorphism group as a table, to extend the action to a homomorphism
    aidx = {p: i for i, p in enumerate(auts)}
    atable = [[aidx[tuple(p[q[x]] for x in range(N.order))] for q in auts] for p in auts]
    AutG = FiniteGroup(atable, check=False)
    phi = _extend_hom(Q, AutG, gens, imgs) if gens else [0]
    if phi is None:
        raise GroupError("action does not define a homomorphism into Aut(N)")
    nn, nq = N.order, Q.order
    _cap(nn * nq)

    def mul(x, y):
        n1, q1 = x % nn, x // nn
        n2, q2 = y % nn, y // nn
        return N.table[n1][auts[phi[q1]][n2]] + nn * Q.table[q1][q2]

    table = [[mul(x, y) for y in range(nn * nq)] for x in range(nn * nq)]
    names = [f"({N.names[x % nn]},{Q.names[x // nn]})" for x in range(nn * nq)]
    G = FiniteGroup(table, label=f"semidirect({N.label},{Q.label})", names=names, check=False)
    G.meta["normal"] = Subgroup(G, range(nn))
    return G


def from_table(rows) -> FiniteGroup:
    return FiniteGroup(rows, label="table")


def _cap(order):
    cap = get_caps().max_group_order
    if order > cap:
        raise CapError(f"group order {order} exceeds max_group_order={cap}")


# ---------------------------------------------------------------------------
# grammar: cyclic(n) | dihedral(n) | sym(n) | abelian(a,b,..) | direct(g,g)
#          | semidirect(g,g,[i,..]) | table([[..],..])

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]+)|(.))")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = []
        for m in _TOKEN.finditer(text):
            if m.group(0).strip() == "":
                continue
            kind = "int" if m.group(1) else "name" if m.group(2) else "sym"
            self.toks.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else ("end", "", len(self.text))

    def take(self, kind=None, value=None):
        tok = self.peek()
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            raise GroupSyntaxError(f"expected {want!r}, found {tok[1]!r}", tok[2])
        self.pos += 1
        return tok

    def value(self):
        kind, v, _ = self.peek()
        if kind == "int":
            self.take()
            return int(v)
        if v == "[":
            self.take()
            items = []
            if self.peek()[1] != "]":
                items.append(self.value())
                while self.peek()[1] == ",":
                    self.take()
                    items.append(self.value())
            self.take("sym", "]")
            return items
        if v == "inv":
            self.take()
            return "inv"
        return self.group()

    def group(self):
        _, name, at = self.take("name")
        self.take("sym", "(")
        args = [self.value()]
        while self.peek()[1] == ",":
            self.take()
            args.append(self.value())
        self.take("sym", ")")
        try:
            return _build(name, args)
        except (GroupError, TypeError, ValueError) as exc:
            if isinstance(exc, GroupSyntaxError):
                raise
            raise GroupSyntaxError(str(exc), at) from exc


class GroupSyntaxError(GroupError):
    def __init__(self, msg, offset=0):
        super().__init__(f"{msg} (at column {offset + 1})")
        self.offset = offset


def _build(name, args):
    if name in ("cyclic", "dihedral", "sym"):
        (n,) = args
        return {"cyclic": cyclic, "dihedral": dihedral, "sym": sym}[name](int(n))
    if name == "abelian":
        return abelian(args)
    if name == "direct":
        a, b = args
        return direct(a, b)
    if name == "semidirect":
        a, b, act = args
        if not isinstance(act, list):
            act = [act]
        return semidirect(a, b, act)
    if name == "table":
        (rows,) = args
        return from_table(rows)
    raise GroupError(f"unknown group family {name!r}")


def make_group(spec: str) -> FiniteGroup:
    """Build a group from the family grammar, e.g. ``direct(cyclic(2),cyclic(2))``."""
    p = _Parser(spec)
    G = p.group()
    if p.peek()[0] != "end":
        raise GroupSyntaxError(f"trailing input {p.peek()[1]!r}", p.peek()[2])
    G.spec = spec.strip()
    return G
