"""G-lattices, equivariant maps between them, and finite G-modules.

A lattice stores, for every group element ``g``, the images of the basis
vectors as sparse dicts: ``act[g][j] = g . e_j``.  Permutation lattices also
keep the underlying :class:`GSet`, which the Shapiro path of
:mod:`normbrauer.cohom` exploits.
"""
from __future__ import annotations

import math
from itertools import combinations

from .config import CapError, get_caps
from .exactlin import FinAb, IntMatrix, SparseElimination
from .groups import FiniteGroup, GSet, Subgroup, quotient


class LatticeError(ValueError):
    pass


def _vadd(acc: dict, vec: dict, c: int = 1):
    for k, v in vec.items():
        nv = acc.get(k, 0) + c * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)
    return acc


class GLattice:
    """Free Z-module of rank ``rank`` with a G-action by unimodular matrices."""

    def __init__(self, group: FiniteGroup, act, labels=None, gset: GSet | None = None,
                 name: str = "", check: bool = True):
        self.group = group
        self.act = act
        self.rank = len(act[0]) if act else 0
        self.labels = list(labels) if labels is not None else [f"e{i}" for i in range(self.rank)]
        self.gset = gset
        self.name = name
        self.summands = None  # (offsets, parts) for direct sums
        if check:
            self._validate()

    def __repr__(self):
        kind = "perm" if self.gset is not None else "lattice"
        return f"GLattice({self.name or kind}, rank={self.rank})"

    @property
    def is_permutation(self) -> bool:
        return self.gset is not None

    def apply(self, g, vec: dict) -> dict:
        if self.gset is not None:
            p = self.gset.act[g]
            return {p[j]: v for j, v in vec.items()}
        out: dict = {}
        cols = self.act[g]
        for j, v in vec.items():
            _vadd(out, cols[j], v)
        return out

    def matrix(self, g) -> IntMatrix:
        return IntMatrix.from_columns(self.rank, self.act[g])

    def _validate(self):
        G = self.group
        if any(self.act[0][j] != {j: 1} for j in range(self.rank)):
            raise LatticeError("identity does not act trivially")
        for g in G.canonical_generators:
            for a in G.elements:
                ga = G.table[g][a]
                for j in range(self.rank):
                    if self.act[ga][j] != self.apply(g, self.act[a][j]):
                        raise LatticeError(f"action is not a homomorphism at ({g},{a})")

    def fixed_rank(self) -> int:
        """Rank of the invariant sublattice."""
        from .exactlin import integer_kernel
        rows = []
        for g in self.group.canonical_generators:
            M = self.matrix(g).to_dense()
            rows.extend([[M[i][j] - (i == j) for j in range(self.rank)] for i in range(self.rank)])
        if not rows:
            return self.rank
        return len(integer_kernel(rows, self.rank))


def perm_lattice(X: GSet, name: str = "") -> GLattice:
    act = [[{p[j]: 1} for j in range(X.size)] for p in X.act]
    return GLattice(X.group, act, X.labels, gset=X, name=name, check=False)


def trivial_lattice(G: FiniteGroup, rank: int = 1, labels=None, name: str = "Z") -> GLattice:
    X = GSet(G, [list(range(rank)) for _ in G.elements], labels or ["1"] * rank, check=False)
    return perm_lattice(X, name=name)


def subsets_gset(X: GSet, d: int) -> GSet:
    """Size-``d`` subsets of ``X`` with the induced action, sorted tuples."""
    n = X.size
    if not 1 <= d <= n:
        raise LatticeError(f"subset size {d} outside 1..{n}")
    count = math.comb(n, d)
    cap = get_caps().max_omega
    if count > cap:
        raise CapError(f"{count} subsets of size {d} exceed max_omega={cap}")
    pts = list(combinations(range(n), d))
    idx = {p: i for i, p in enumerate(pts)}
    act = [[idx[tuple(sorted(perm[x] for x in p))] for p in pts] for perm in X.act]
    labels = ["{" + ",".join(str(X.labels[x]) for x in p) + "}" for p in pts]
    gs = GSet(X.group, act, labels, check=False)
    gs.subsets = pts
    return gs


def product_gset(X: GSet, Y: GSet) -> GSet:
    """``X x Y`` with the diagonal action; point ``(x, y)`` has index ``x*|Y| + y``."""
    ny = Y.size
    act = [[px[i // ny] * ny + py[i % ny] for i in range(X.size * ny)]
           for px, py in zip(X.act, Y.act)]
    labels = [f"{a}⊗{b}" for a in X.labels for b in Y.labels]
    return GSet(X.group, act, labels, check=False)


def tensor(L1: GLattice, L2: GLattice, name: str = "") -> GLattice:
    if L1.group is not L2.group:
        raise LatticeError("tensor of lattices over different groups")
    if L1.is_permutation and L2.is_permutation:
        return perm_lattice(product_gset(L1.gset, L2.gset), name=name)
    r2 = L2.rank
    act = []
    for g in L1.group.elements:
        cols = []
        for i in range(L1.rank):
            for j in range(r2):
                out = {}
                for a, u in L1.act[g][i].items():
                    for b, v in L2.act[g][j].items():
                        out[a * r2 + b] = out.get(a * r2 + b, 0) + u * v
                cols.append(out)
        act.append(cols)
    labels = [f"{a}⊗{b}" for a in L1.labels for b in L2.labels]
    return GLattice(L1.group, act, labels, name=name, check=False)


def direct_sum(parts, name: str = "", tags=None) -> GLattice:
    G = parts[0].group
    if any(p.group is not G for p in parts):
        raise LatticeError("direct sum of lattices over different groups")
    offsets, off = [], 0
    for p in parts:
        offsets.append(off)
        off += p.rank
    tags = tags or [str(i) for i in range(len(parts))]
    labels = [f"{t}:{lab}" for t, p in zip(tags, parts) for lab in p.labels]
    if all(p.is_permutation for p in parts):
        X = GSet.disjoint_union([p.gset for p in parts], labels)
        L = perm_lattice(X, name=name)
    else:
        act = []
        for g in G.elements:
            cols = []
            for o, p in zip(offsets, parts):
                for j in range(p.rank):
                    cols.append({o + i: v for i, v in p.act[g][j].items()})
            act.append(cols)
        L = GLattice(G, act, labels, name=name, check=False)
    L.summands = (offsets, list(parts))
    return L


class LatticeMap:
    """Equivariant map; ``cols[j]`` is the image of source basis vector ``j``."""

    def __init__(self, source: GLattice, target: GLattice, cols, name: str = "", check: bool = True):
        self.source = source
        self.target = target
        self.cols = [{k: v for k, v in c.items() if v} for c in cols]
        self.name = name
        if len(self.cols) != source.rank:
            raise LatticeError("column count does not match the source rank")
        if check:
            self.check_equivariant()

    def __repr__(self):
        return f"LatticeMap({self.name}: rank {self.source.rank} -> {self.target.rank})"

    def __call__(self, vec: dict) -> dict:
        out: dict = {}
        for j, v in vec.items():
            _vadd(out, self.cols[j], v)
        return out

    def matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.target.rank, self.cols)

    def check_equivariant(self):
        G = self.source.group
        for g in G.canonical_generators:
            for j in range(self.source.rank):
                lhs = self(self.source.act[g][j])
                rhs = self.target.apply(g, self.cols[j])
                if lhs != rhs:
                    raise LatticeError(f"map {self.name!r} is not equivariant (element {g}, basis {j})")

    def compose(self, first: "LatticeMap") -> "LatticeMap":
        """``self o first``."""
        return LatticeMap(first.source, self.target, [self(c) for c in first.cols],
                          name=f"{self.name}∘{first.name}", check=False)

    def scaled(self, k: int) -> "LatticeMap":
        return LatticeMap(self.source, self.target, [{i: k * v for i, v in c.items()} for c in self.cols],
                          name=f"{k}{self.name}", check=False)

    def is_zero(self) -> bool:
        return not any(self.cols)

    @staticmethod
    def identity(L: GLattice) -> "LatticeMap":
        return LatticeMap(L, L, [{j: 1} for j in range(L.rank)], name="id", check=False)

    @staticmethod
    def zero(S: GLattice, T: GLattice) -> "LatticeMap":
        return LatticeMap(S, T, [{} for _ in range(S.rank)], name="0", check=False)

    @staticmethod
    def from_gset_map(X: GLattice, Y: GLattice, point_map) -> "LatticeMap":
        return LatticeMap(X, Y, [{point_map[j]: 1} for j in range(X.rank)])


class Cokernel:
    """Torsion-free cokernel of an injective lattice map, with splittings.

    ``project`` is the quotient map, ``lift`` a Z-linear section of it, and
    ``preimage`` a Z-linear left inverse of ``f`` (valid on ``im f``).
    """

    def __init__(self, f: LatticeMap, name: str = ""):
        self.f = f
        T = f.target
        el = SparseElimination(f.matrix())
        bad = [abs(p) for _, _, p in el.pivots if abs(p) != 1]
        if el.rank != f.source.rank:
            raise LatticeError(f"map {f.name!r} is not injective (rank {el.rank} < {f.source.rank})")
        if bad:
            raise LatticeError(f"cokernel of {f.name!r} has torsion with invariant factors {sorted(bad)}")
        self.elim = el
        self.free_rows = [i for i in range(T.rank) if i not in el.pivot_rows]
        self.qpos = {r: k for k, r in enumerate(self.free_rows)}
        G = T.group
        act = []
        lifts = [el.apply_Uinv({r: 1}) for r in self.free_rows]
        self._lifts = lifts
        for g in G.elements:
            act.append([self.project(T.apply(g, v)) for v in lifts])
        labels = [f"q{k}" for k in range(len(self.free_rows))]
        self.lattice = GLattice(G, act, labels, name=name, check=True)
        self.projection = LatticeMap(T, self.lattice, [self.project({i: 1}) for i in range(T.rank)],
                                     name="proj", check=False)

    def project(self, vec: dict) -> dict:
        u = self.elim.apply_U(vec)
        return {self.qpos[r]: v for r, v in u.items() if r in self.qpos}

    def lift(self, qvec: dict) -> dict:
        out: dict = {}
        for k, v in qvec.items():
            _vadd(out, self._lifts[k], v)
        return out

    def preimage(self, vec: dict) -> dict:
        x = self.elim.solve(vec)
        if x is None:
            raise LatticeError("vector is not in the image")
        return x

    def left_inverse(self, vec: dict) -> dict:
        """``L(y)`` with ``L(f(x)) = x``; ignores the complement coordinates."""
        u = self.elim.apply_U(vec)
        y = {}
        for r, (c, p) in self.elim.pivot_rows.items():
            if r in u:
                y[c] = u[r] * p  # p = +-1
        return self.elim.apply_V(y)


def cokernel_lattice(f: LatticeMap, name: str = ""):
    """``(T, projection)`` for the torsion-free cokernel of an injective ``f``."""
    c = Cokernel(f, name=name)
    return c.lattice, c.projection


def induced_quotient_map(phi: LatticeMap, src: Cokernel, tgt: Cokernel, name: str = "") -> LatticeMap:
    """The map ``coker(src.f) -> coker(tgt.f)`` induced by ``phi`` on the targets.

    Checks that ``phi`` carries ``im src.f`` into ``im tgt.f``.
    """
    for c in src.f.cols:
        img = phi(c)
        if tgt.project(img):
            raise LatticeError(f"map {name!r} does not descend to the cokernels")
    cols = [tgt.project(phi(src.lift({k: 1}))) for k in range(src.lattice.rank)]
    return LatticeMap(src.lattice, tgt.lattice, cols, name=name)


def norm_torus_character(X: GSet):
    """``0 -> Z -> Z[X] -> T -> 0`` for the diagonal ``1 -> sum of points``."""
    ZX = perm_lattice(X, name="Z[X]")
    Z = trivial_lattice(X.group)
    diag = LatticeMap(Z, ZX, [{i: 1 for i in range(X.size)}], name="diag")
    return Z, ZX, diag, Cokernel(diag, name="T")


# ---------------------------------------------------------------------------
# finite modules


class FinGModule:
    """A finite abelian group with a G-action on canonical coordinates.

    ``action[g]`` is a square matrix; column ``j`` is the image of
    generator ``j``.
    """

    def __init__(self, group: FiniteGroup, module: FinAb, action, name: str = ""):
        self.group = group
        self.module = module
        self.action = [[list(r) for r in m] for m in action]
        self.name = name
        self._validate()

    def apply(self, g, x):
        M = self.action[g]
        n = self.module.ngens
        return self.module.reduce([sum(M[i][j] * x[j] for j in range(n)) for i in range(n)])

    def _validate(self):
        G = self.group
        n = self.module.ngens
        for g in G.elements:
            for j, d in enumerate(self.module.mods):
                col = [self.action[g][i][j] * d for i in range(n)]
                if any(self.module.reduce(col)):
                    raise LatticeError("action does not respect the relations")
        for a in G.canonical_generators:
            for b in G.elements:
                for j in range(n):
                    e = tuple(int(i == j) for i in range(n))
                    if self.apply(G.table[a][b], e) != self.apply(a, self.apply(b, e)):
                        raise LatticeError("action is not a homomorphism")

    def is_trivial_action(self) -> bool:
        n = self.module.ngens
        for g in self.group.elements:
            for j in range(n):
                e = tuple(int(i == j) for i in range(n))
                if self.apply(g, e) != e:
                    return False
        return True


def dual_abelianization(G: FiniteGroup, H: Subgroup) -> FinGModule:
    """``Hom(H^ab, Q/Z)`` as a ``G/H``-module under conjugation.

    Returns a module over the quotient group; ``module.projection`` maps
    elements of ``G`` to elements of ``G/H``.
    """
    from .characters import CharacterGroup

    Q, proj = quotient(G, H)
    C = CharacterGroup(G, H)
    n = len(C.mods)
    # representative in G of each element of Q
    rep = {}
    for g in G.elements:
        rep.setdefault(proj[g], g)
    action = []
    for q in Q.elements:
        g = rep[q]
        cols = [C.conjugate(g, tuple(int(i == j) for i in range(n))) for j in range(n)]
        action.append([[cols[j][i] for j in range(n)] for i in range(n)])
    M = FinGModule(Q, C.ab, action, name="H^1(H,Q/Z)")
    M.projection = proj
    M.characters = C
    return M
