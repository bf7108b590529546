"""Exact integer linear algebra.

Smith normal form (sparse elimination with a dense fallback), cokernels of
integer matrices, finite abelian groups in invariant-factor form and
homomorphisms between them.  Everything is arbitrary precision; no modular
shortcuts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .config import CapError, get_caps

__all__ = [
    "IntMatrix",
    "SparseElimination",
    "smith_normal_form",
    "smith_normal_form_dense",
    "integer_kernel",
    "FinAb",
    "AbHom",
    "HomAnalysis",
    "IllDefinedHom",
    "cokernel",
    "hom_analyze",
    "subgroup_of",
    "RawAb",
    "kernel_subgroup",
    "subquotient",
    "in_span",
    "det",
]


class IllDefinedHom(ValueError):
    """A matrix does not respect the relations of its source group."""

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


# ---------------------------------------------------------------------------
# matrices


class IntMatrix:
    """Integer matrix stored as row dictionaries ``{row: {col: value}}``.

    Zero entries are never stored.  ``to_dense`` gives the list-of-lists view
    used by the dense code path.
    """

    __slots__ = ("nrows", "ncols", "_rows")

    def __init__(self, nrows: int, ncols: int, rows: dict | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self._rows = {}
        if rows:
            for i, r in rows.items():
                rr = {j: v for j, v in r.items() if v}
                if rr:
                    self._rows[i] = rr

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], ncols: int | None = None):
        nrows = len(data)
        if ncols is None:
            ncols = len(data[0]) if nrows else 0
        rows = {i: {j: int(v) for j, v in enumerate(r) if v} for i, r in enumerate(data)}
        return cls(nrows, ncols, rows)

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[dict]):
        rows: dict = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    rows.setdefault(i, {})[j] = v
        m = cls(nrows, len(columns))
        m._rows = rows
        return m

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def zeros(cls, nrows: int, ncols: int):
        return cls(nrows, ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self._rows.get(i, {}).get(j, 0)

    def row(self, i: int) -> dict:
        return dict(self._rows.get(i, {}))

    def rows_dict(self) -> dict:
        return {i: dict(r) for i, r in self._rows.items()}

    def columns(self) -> list[dict]:
        cols: list[dict] = [dict() for _ in range(self.ncols)]
        for i, r in self._rows.items():
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def nnz(self) -> int:
        return sum(len(r) for r in self._rows.values())

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, r in self._rows.items():
            for j, v in r.items():
                out[i][j] = v
        return out

    def transpose(self) -> "IntMatrix":
        rows: dict = {}
        for i, r in self._rows.items():
            for j, v in r.items():
                rows.setdefault(j, {})[i] = v
        m = IntMatrix(self.ncols, self.nrows)
        m._rows = rows
        return m

    def matvec(self, vec) -> list[int]:
        """Multiply by a dense vector (list) or sparse vector (dict)."""
        if isinstance(vec, dict):
            get = vec.get
            return [sum(v * get(j, 0) for j, v in self._rows.get(i, {}).items())
                    for i in range(self.nrows)]
        return [sum(v * vec[j] for j, v in self._rows.get(i, {}).items())
                for i in range(self.nrows)]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        rows: dict = {}
        orows = other._rows
        for i, r in self._rows.items():
            acc: dict = {}
            for k, v in r.items():
                for j, w in orows.get(k, {}).items():
                    acc[j] = acc.get(j, 0) + v * w
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                rows[i] = acc
        m = IntMatrix(self.nrows, other.ncols)
        m._rows = rows
        return m

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and self._rows == other._rows

    def __repr__(self):
        return f"IntMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    def is_diagonal(self) -> bool:
        return all(set(r) <= {i} for i, r in self._rows.items())

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.nrows, self.ncols))]


def det(mat: Sequence[Sequence[int]]) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    a = [list(r) for r in mat]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def _check_cells(nrows: int, ncols: int, what: str = "matrix"):
    caps = get_caps()
    if nrows * ncols > caps.max_cells:
        raise CapError(f"{what} of size {nrows}x{ncols} exceeds max_cells={caps.max_cells}")


# ---------------------------------------------------------------------------
# sparse elimination


class SparseElimination:
    """Fraction-free sparse elimination ``U A V = D`` with logged transforms.

    ``D`` has one nonzero entry per pivot (``self.pivots`` lists
    ``(row, col, value)``); rows and columns without a pivot are zero.
    The row and column operations are logged so that ``U``, ``U^-1`` and
    ``V`` can be applied to vectors without being materialized.

    Pivot rule: least nonzero magnitude, ties broken by (row, col).
    """

    def __init__(self, A: IntMatrix):
        _check_cells(A.nrows, A.ncols)
        self.nrows = A.nrows
        self.ncols = A.ncols
        self.row_ops: list[tuple] = []
        self.col_ops: list[tuple] = []
        self.pivots: list[tuple[int, int, int]] = []
        self._run(A)
        self.pivot_rows = {r: (c, p) for r, c, p in self.pivots}

    # -- core ------------------------------------------------------------
    def _run(self, A: IntMatrix):
        rows = A.rows_dict()
        cols: dict[int, set] = {}
        for i, r in rows.items():
            for j in r:
                cols.setdefault(j, set()).add(i)
        max_bits = get_caps().max_entry_bits
        row_ops = self.row_ops
        col_ops = self.col_ops

        def add_row(a, b, q):
            # row_a += q * row_b
            ra = rows.setdefault(a, {})
            for j, v in rows[b].items():
                nv = ra.get(j, 0) + q * v
                if nv:
                    if j not in ra:
                        cols[j].add(a)
                    ra[j] = nv
                elif j in ra:
                    del ra[j]
                    cols[j].discard(a)
            if not ra:
                del rows[a]
            row_ops.append(("add", a, b, q))

        def mix_rows(a, b, x, y, u, w):
            ra = rows.get(a, {})
            rb = rows.get(b, {})
            new_a, new_b = {}, {}
            for j in set(ra) | set(rb):
                va, vb = ra.get(j, 0), rb.get(j, 0)
                na, nb = x * va + y * vb, u * va + w * vb
                s = cols.setdefault(j, set())
                if na:
                    new_a[j] = na
                    s.add(a)
                else:
                    s.discard(a)
                if nb:
                    new_b[j] = nb
                    s.add(b)
                else:
                    s.discard(b)
            for key, new in ((a, new_a), (b, new_b)):
                if new:
                    rows[key] = new
                else:
                    rows.pop(key, None)
            row_ops.append(("mix", a, b, x, y, u, w))

        def mix_cols(c, j, x, y, u, w):
            # new col_c = x col_c + y col_j ; new col_j = u col_c + w col_j
            rc = cols.get(c, set())
            rj = cols.get(j, set())
            new_c, new_j = set(), set()
            for i in rc | rj:
                r = rows[i]
                vc, vj = r.get(c, 0), r.get(j, 0)
                nc, nj = x * vc + y * vj, u * vc + w * vj
                if nc:
                    r[c] = nc
                    new_c.add(i)
                else:
                    r.pop(c, None)
                if nj:
                    r[j] = nj
                    new_j.add(i)
                else:
                    r.pop(j, None)
                if not r:
                    del rows[i]
            cols[c] = new_c
            cols[j] = new_j
            col_ops.append(("mix", c, j, x, y, u, w))

        # rows containing a unit; scanned in row order for the tie rule
        def find_pivot():
            best = None
            for i in sorted(rows):
                r = rows[i]
                for j, v in r.items():
                    a = abs(v)
                    if a == 1:
                        jj = min(k for k, w in r.items() if abs(w) == 1)
                        return i, jj
                    if best is None or (a, i, j) < best:
                        best = (a, i, j)
            return best[1], best[2]

        steps = 0
        while rows:
            r, c = find_pivot()
            while True:
                # clear column c with row operations
                p = rows[r][c]
                for a in sorted(cols[c] - {r}):
                    v = rows[a][c]
                    p = rows[r][c]
                    if v % p == 0:
                        add_row(a, r, -(v // p))
                    else:
                        g, x, y = _xgcd(p, v)
                        mix_rows(r, a, x, y, -v // g, p // g)
                p = rows[r][c]
                # clear row r with column operations
                dirty = False
                for j in sorted(k for k in rows[r] if k != c):
                    w = rows[r][j]
                    if w % p == 0:
                        # column c has a single entry, so only row r changes
                        del rows[r][j]
                        cols[j].discard(r)
                        col_ops.append(("add", j, c, -(w // p)))
                    else:
                        g, x, y = _xgcd(p, w)
                        mix_cols(c, j, x, y, -w // g, p // g)
                        p = rows[r][c]
                        dirty = True
                        break
                if not dirty:
                    break
            p = rows[r][c]
            if p.bit_length() > max_bits:
                raise CapError(f"entry bit-length {p.bit_length()} exceeds max_entry_bits={max_bits}")
            self.pivots.append((r, c, p))
            del rows[r]
            cols[c].discard(r)
            steps += 1

    # -- transforms on vectors ---------------------------------------------
    def apply_U(self, vec: dict) -> dict:
        v = dict(vec)
        for op in self.row_ops:
            if op[0] == "add":
                _, a, b, q = op
                vb = v.get(b, 0)
                if vb:
                    v[a] = v.get(a, 0) + q * vb
            else:
                _, a, b, x, y, u, w = op
                va, vb = v.get(a, 0), v.get(b, 0)
                if va or vb:
                    v[a], v[b] = x * va + y * vb, u * va + w * vb
        return {k: t for k, t in v.items() if t}

    def apply_Uinv(self, vec: dict) -> dict:
        v = dict(vec)
        for op in reversed(self.row_ops):
            if op[0] == "add":
                _, a, b, q = op
                vb = v.get(b, 0)
                if vb:
                    v[a] = v.get(a, 0) - q * vb
            else:
                _, a, b, x, y, u, w = op
                d = x * w - y * u
                va, vb = v.get(a, 0), v.get(b, 0)
                if va or vb:
                    v[a], v[b] = d * (w * va - y * vb), d * (-u * va + x * vb)
        return {k: t for k, t in v.items() if t}

    def apply_V(self, vec: dict) -> dict:
        v = dict(vec)
        for op in reversed(self.col_ops):
            if op[0] == "add":
                _, j, c, q = op  # col_j += q col_c
                vj = v.get(j, 0)
                if vj:
                    v[c] = v.get(c, 0) + q * vj
            else:
                _, c, j, x, y, u, w = op
                vc, vj = v.get(c, 0), v.get(j, 0)
                if vc or vj:
                    v[c], v[j] = x * vc + u * vj, y * vc + w * vj
        return {k: t for k, t in v.items() if t}

    # -- derived quantities ---------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solve(self, b: dict) -> dict | None:
        """Integer solution of ``A x = b`` or ``None``."""
        ub = self.apply_U(b)
        y = {}
        for i, t in ub.items():
            if i not in self.pivot_rows:
                return None
            c, p = self.pivot_rows[i]
            q, rem = divmod(t, p)
            if rem:
                return None
            y[c] = q
        return self.apply_V(y)


def _chain_fix(diag: list[int]):
    """Turn a diagonal into divisibility-chain form.

    Returns the new diagonal and the 2x2 row/column operations (on diagonal
    positions) that realize it.
    """
    d = list(diag)
    rops: list = []
    cops: list = []
    n = len(d)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = d[i], d[j]
            if a == 0:
                continue
            if b == 0 or b % a == 0:
                continue
            # diag(a, b) -> diag(g, l)
            g, x, y = _xgcd(a, b)
            # [[x, y], [-b/g, a/g]] diag(a,b) [[1, -y*b/g], [1, x*a/g]] = diag(g, ab/g)
            rops.append((i, j, x, y, -b // g, a // g))
            cops.append((i, j, 1, -y * b // g, 1, x * a // g))
            d[i], d[j] = g, a * b // g
    return d, rops, cops


def smith_normal_form(A: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, S, V)`` with ``U A V = S`` in Smith normal form.

    Uses :class:`SparseElimination` and materializes the transforms.
    """
    m, n = A.nrows, A.ncols
    el = SparseElimination(A)
    # U as dense rows: U = apply_U to each unit vector column
    Ucols = [el.apply_U({i: 1}) for i in range(m)]
    U = [[0] * m for _ in range(m)]
    for j, col in enumerate(Ucols):
        for i, v in col.items():
            U[i][j] = v
    Vcols = [el.apply_V({j: 1}) for j in range(n)]
    V = [[0] * n for _ in range(n)]
    for j, col in enumerate(Vcols):
        for i, v in col.items():
            V[i][j] = v
    # permute pivots onto the diagonal
    piv = sorted(el.pivots, key=lambda t: (abs(t[2]), t[0], t[1]))
    prow = [r for r, _, _ in piv] + [i for i in range(m) if i not in el.pivot_rows]
    pcols = {c for _, c, _ in piv}
    pcol = [c for _, c, _ in piv] + [j for j in range(n) if j not in pcols]
    U = [U[i] for i in prow]
    V = [[row[j] for j in pcol] for row in V]
    diag = [p for _, _, p in piv]
    # signs
    for k, p in enumerate(diag):
        if p < 0:
            U[k] = [-x for x in U[k]]
            diag[k] = -p
    diag, rops, cops = _chain_fix(diag)
    for i, j, x, y, u, w in rops:
        U[i], U[j] = ([x * a + y * b for a, b in zip(U[i], U[j])],
                      [u * a + w * b for a, b in zip(U[i], U[j])])
    for i, j, x, y, u, w in cops:
        # right-multiply by [[x, y], [u, w]] acting on columns i, j
        for row in V:
            a, b = row[i], row[j]
            row[i], row[j] = x * a + u * b, y * a + w * b
    S = [[0] * n for _ in range(m)]
    for k, p in enumerate(diag):
        S[k][k] = p
    return IntMatrix.from_dense(U, m), IntMatrix.from_dense(S, n), IntMatrix.from_dense(V, n)


def smith_normal_form_dense(A: Sequence[Sequence[int]]):
    """Dense Smith normal form, returning ``(U, Uinv, S, V)`` as lists.

    ``U A V = S``; ``Uinv`` is the inverse of ``U``.  Textbook algorithm,
    used for small matrices and as the reference path.
    """
    a = [list(map(int, r)) for r in A]
    m = len(a)
    n = len(a[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_comb(i, j, x, y, u, w):
        # rows (i, j) <- [[x, y], [u, w]] (rows i, j); det = +-1
        for M in (a, U):
            M[i], M[j] = ([x * p + y * q for p, q in zip(M[i], M[j])],
                          [u * p + w * q for p, q in zip(M[i], M[j])])
        d = x * w - y * u
        # Ui <- Ui * inverse, acting on columns i, j
        for row in Ui:
            p, q = row[i], row[j]
            row[i], row[j] = d * (w * p - u * q), d * (-y * p + x * q)

    def col_comb(i, j, x, y, u, w):
        # cols (i, j) <- (x col_i + y col_j, u col_i + w col_j)
        for M in (a, V):
            for row in M:
                p, q = row[i], row[j]
                row[i], row[j] = x * p + y * q, u * p + w * q

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = a[i][j]
                if v and (best is None or (abs(v), i, j) < best):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            row_comb(t, pi, 0, 1, 1, 0)
        if pj != t:
            col_comb(t, pj, 0, 1, 1, 0)
        while True:
            changed = False
            for i in range(t + 1, m):
                v = a[i][t]
                if v:
                    p = a[t][t]
                    if v % p == 0:
                        q = v // p
                        for M in (a, U):
                            M[i] = [x - q * y for x, y in zip(M[i], M[t])]
                        for row in Ui:
                            row[t] += q * row[i]
                    else:
                        g, x, y = _xgcd(p, v)
                        row_comb(t, i, x, y, -v // g, p // g)
                        changed = True
            for j in range(t + 1, n):
                v = a[t][j]
                if v:
                    p = a[t][t]
                    if v % p == 0:
                        q = v // p
                        for M in (a, V):
                            for row in M:
                                row[j] -= q * row[t]
                    else:
                        g, x, y = _xgcd(p, v)
                        col_comb(t, j, x, y, -v // g, p // g)
                        changed = True
            if changed:
                continue
            p = a[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_comb(t, bad, 1, 1, 0, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
            for row in Ui:
                row[t] = -row[t]
        t += 1
    return U, Ui, a, V


def integer_kernel(A: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """Basis (as list of vectors) of ``{x in Z^n : A x = 0}``."""
    if ncols is None:
        ncols = len(A[0]) if A else 0
    if not A:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    _, _, S, V = smith_normal_form_dense(A)
    r = sum(1 for k in range(min(len(S), ncols)) if S[k][k])
    return [[V[i][j] for i in range(ncols)] for j in range(r, ncols)]


# ---------------------------------------------------------------------------
# finite abelian groups


def _fmt_factors(factors, free) -> str:
    parts = [f"Z/{d}" for d in factors] + ["Z"] * free
    return " x ".join(parts) if parts else "0"


@dataclass(frozen=True, eq=False)
class FinAb:
    """Finitely generated abelian group ``Z/d_1 x ... x Z/d_r x Z^f``.

    ``generators`` optionally holds representative vectors (in some ambient
    presentation) for the canonical generators, torsion first.
    """

    invariant_factors: tuple = ()
    free_rank: int = 0
    generators: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        fs = tuple(int(d) for d in self.invariant_factors)
        if any(d < 2 for d in fs):
            raise ValueError(f"invariant factors must be >= 2: {fs}")
        for a, b in zip(fs, fs[1:]):
            if b % a:
                raise ValueError(f"divisibility chain violated: {fs}")
        object.__setattr__(self, "invariant_factors", fs)

    @classmethod
    def from_orders(cls, orders: Iterable[int], free_rank: int = 0) -> "FinAb":
        """Canonical form of ``Z/o_1 x Z/o_2 x ...`` (orders may be 1 or 0)."""
        orders = list(orders)
        free_rank += sum(1 for o in orders if o == 0)
        d = [abs(o) for o in orders if o not in (0,)]
        return cls(tuple(_invariants_of_diagonal(d)), free_rank)

    @classmethod
    def cyclic(cls, n: int) -> "FinAb":
        return cls.from_orders([n])

    @classmethod
    def trivial(cls) -> "FinAb":
        return cls()

    @property
    def mods(self) -> tuple:
        """Moduli of the canonical coordinates (0 for free coordinates)."""
        return self.invariant_factors + (0,) * self.free_rank

    @property
    def ngens(self) -> int:
        return len(self.invariant_factors) + self.free_rank

    def order(self) -> int:
        if self.free_rank:
            return 0
        return math.prod(self.invariant_factors)

    def is_trivial(self) -> bool:
        return not self.invariant_factors and not self.free_rank

    def is_cyclic(self) -> bool:
        return len(self.invariant_factors) + self.free_rank <= 1

    def exponent(self) -> int:
        if self.free_rank:
            return 0
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def reduce(self, coords) -> tuple:
        return tuple(c % d if d else c for c, d in zip(coords, self.mods))

    def elements(self):
        """Enumerate all elements (finite groups only)."""
        if self.free_rank:
            raise ValueError("infinite group")
        import itertools
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def primary_part(self, p: int) -> "FinAb":
        out = []
        for d in self.invariant_factors:
            q = 1
            while d % p == 0:
                d //= p
                q *= p
            out.append(q)
        return FinAb.from_orders(out)

    def odd_part(self) -> "FinAb":
        out = []
        for d in self.invariant_factors:
            while d % 2 == 0:
                d //= 2
            out.append(d)
        return FinAb.from_orders(out)

    def __eq__(self, other):
        if not isinstance(other, FinAb):
            return NotImplemented
        return (self.invariant_factors, self.free_rank) == (other.invariant_factors, other.free_rank)

    def __hash__(self):
        return hash((self.invariant_factors, self.free_rank))

    def __str__(self):
        return _fmt_factors(self.invariant_factors, self.free_rank)

    def __repr__(self):
        return f"FinAb({self})"

    def __mul__(self, other: "FinAb") -> "FinAb":
        return FinAb.from_orders(list(self.invariant_factors) + list(other.invariant_factors),
                                 self.free_rank + other.free_rank)

    @classmethod
    def parse(cls, text: str) -> "FinAb":
        text = text.strip()
        if text in ("0", "1", "trivial", ""):
            return cls()
        orders, free = [], 0
        for part in text.replace("×", "x").split(" x "):
            part, _, power = part.strip().partition("^")
            k = int(power) if power else 1
            part = part.strip("() ")
            if part == "Z":
                free += k
            elif part.startswith("Z/"):
                orders.extend([int(part[2:])] * k)
            else:
                raise ValueError(f"cannot parse abelian group {text!r}")
        return cls.from_orders(orders, free)


def _invariants_of_diagonal(d: list[int]) -> list[int]:
    """Invariant factors (>1) of ``Z/d_1 x ... x Z/d_k``."""
    # collect prime powers
    from sympy import factorint

    primes: dict[int, list[int]] = {}
    for x in d:
        if x <= 1:
            continue
        for p, e in factorint(x).items():
            primes.setdefault(p, []).append(p ** e)
    if not primes:
        return []
    length = max(len(v) for v in primes.values())
    out = [1] * length
    for p, pows in primes.items():
        pows.sort()
        for k, q in enumerate(pows):
            out[length - len(pows) + k] *= q
    return [x for x in out if x > 1]


def cokernel(A: IntMatrix, ambient_rank: int | None = None, free_generators: bool = True):
    """``Z^m / colspan(A)`` in invariant-factor form.

    Returns a :class:`CokernelData`; ``project(vec)`` maps an ambient
    vector (dict or list) to canonical coordinates.  Generators of the group
    are ambient representatives (torsion only if ``free_generators`` is off).
    """
    if ambient_rank is None:
        ambient_rank = A.nrows
    if A.nrows != ambient_rank:
        raise ValueError("relation matrix must have ambient_rank rows")
    el = SparseElimination(A)
    return _cokernel_from_elimination(el, ambient_rank, free_generators)


@dataclass
class CokernelData:
    """Canonical coordinates for ``Z^m / colspan(A)`` after elimination."""

    group: FinAb
    elim: SparseElimination
    # transform from the raw (diagonal) coordinates to canonical ones
    raw_rows: list  # pivot rows with s>1, then non-pivot rows
    raw_mods: list
    P: list  # canonical = P @ raw  (dense, small)

    def project(self, vec) -> tuple:
        if not isinstance(vec, dict):
            vec = {i: v for i, v in enumerate(vec) if v}
        u = self.elim.apply_U(vec)
        raw = [u.get(r, 0) for r in self.raw_rows]
        out = []
        for row, d in zip(self.P, self.group.mods):
            s = sum(a * b for a, b in zip(row, raw))
            out.append(s % d if d else s)
        return tuple(out)

    def __call__(self, vec):
        return self.project(vec)


def _cokernel_from_elimination(el: SparseElimination, m: int, free_generators: bool = True) -> CokernelData:
    tors = [(r, abs(p)) for r, c, p in el.pivots if abs(p) != 1]
    free_rows = [i for i in range(m) if i not in el.pivot_rows]
    raw_rows = [r for r, _ in tors] + free_rows
    raw_mods = [p for _, p in tors] + [0] * len(free_rows)
    # small SNF of diag(raw_mods) (free coordinates are already canonical)
    nt = len(tors)
    diag = [[raw_mods[i] if i == j else 0 for j in range(nt)] for i in range(nt)]
    if nt:
        Ud, Udi, Sd, _ = smith_normal_form_dense(diag)
        sd = [Sd[i][i] for i in range(nt)]
    else:
        Ud, Udi, sd = [], [], []
    keep = [i for i in range(nt) if sd[i] != 1]
    P = [[Ud[i][j] for j in range(nt)] + [0] * len(free_rows) for i in keep]
    for t in range(len(free_rows)):
        P.append([0] * nt + [int(t == s) for s in range(len(free_rows))])
    # generators: U^{-1} applied to raw unit combos (columns of Udi)
    gens = []
    for i in keep:
        raw_vec = {raw_rows[t]: Udi[t][i] for t in range(nt) if Udi[t][i]}
        gens.append(el.apply_Uinv(raw_vec))
    if free_generators:
        for r in free_rows:
            gens.append(el.apply_Uinv({r: 1}))
    group = FinAb(tuple(sd[i] for i in keep), len(free_rows), tuple(gens))
    return CokernelData(group, el, raw_rows, raw_mods, P)


# ---------------------------------------------------------------------------
# homomorphisms


def _relation_lattice_of(X: list[list[int]], mods: Sequence[int]) -> list[list[int]]:
    """Relations among the columns of ``X`` inside ``Z^l / diag(mods)``.

    Returns a generating set of ``{y : X y in diag(mods) Z^l}``.
    """
    l = len(mods)
    k = len(X[0]) if X else 0
    if l == 0:
        return [[int(i == j) for j in range(k)] for i in range(k)]
    big = [list(X[i]) + [(-mods[i] if i == t else 0) for t in range(l)] for i in range(l)]
    ker = integer_kernel(big, k + l)
    return [v[:k] for v in ker]


def subgroup_of(X: list[list[int]], mods: Sequence[int]):
    """Subgroup of ``Z^l/diag(mods)`` generated by the columns of ``X``.

    Returns ``(FinAb, gens)`` where ``gens`` are ambient coordinate vectors
    of the canonical generators (reduced modulo ``mods``).
    """
    l = len(mods)
    k = len(X[0]) if (X and X[0]) else 0
    if k == 0:
        return FinAb(), []
    rel = _relation_lattice_of(X, mods)
    # Z^k / rel
    R = [[v[i] for v in rel] for i in range(k)] if rel else [[] for _ in range(k)]
    ncols = len(rel)
    if ncols == 0:
        R = [[0] for _ in range(k)]
    U, Ui, S, _ = smith_normal_form_dense(R)
    sdiag = [S[i][i] if i < len(S[0]) else 0 for i in range(k)]
    gens, orders = [], []
    for i in range(k):
        if sdiag[i] == 1:
            continue
        y = [Ui[t][i] for t in range(k)]
        x = [sum(X[r][t] * y[t] for t in range(k)) for r in range(l)]
        x = [c % d if d else c for c, d in zip(x, mods)]
        gens.append(x)
        orders.append(sdiag[i])
    # orders are already a chain from the SNF; zeros are free
    tors = [(o, g) for o, g in zip(orders, gens) if o]
    free = [g for o, g in zip(orders, gens) if not o]
    grp = FinAb(tuple(o for o, _ in tors), len(free), tuple(g for _, g in tors) + tuple(free))
    return grp, [g for _, g in tors] + free


@dataclass(frozen=True)
class AbHom:
    """Homomorphism between groups in canonical coordinates.

    ``matrix[i][j]`` is coordinate ``i`` of the image of source generator ``j``.
    """

    source: FinAb
    target: FinAb
    matrix: tuple

    def __post_init__(self):
        M = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if len(M) != self.target.ngens or any(len(r) != self.source.ngens for r in M):
            if not (self.target.ngens == 0 or self.source.ngens == 0):
                raise ValueError("matrix shape does not match source/target")
        object.__setattr__(self, "matrix", M)
        self.check()

    def check(self):
        tm = self.target.mods
        for j, d in enumerate(self.source.mods):
            img = [self.matrix[i][j] * d for i in range(self.target.ngens)]
            red = [x % m if m else x for x, m in zip(img, tm)]
            if any(red):
                raise IllDefinedHom(
                    f"generator {j} of order {d} maps to an element of different order",
                    witness=(j, d, red))

    def __call__(self, x) -> tuple:
        out = [sum(self.matrix[i][j] * x[j] for j in range(self.source.ngens))
               for i in range(self.target.ngens)]
        return self.target.reduce(out)

    def compose(self, first: "AbHom") -> "AbHom":
        """``self o first``."""
        k = first.source.ngens
        cols = [self(tuple(first.matrix[i][j] for i in range(first.target.ngens))) for j in range(k)]
        M = [[cols[j][i] for j in range(k)] for i in range(self.target.ngens)]
        return AbHom(first.source, self.target, M)

    @classmethod
    def from_images(cls, source: FinAb, target: FinAb, images) -> "AbHom":
        M = [[target.reduce(images[j])[i] for j in range(source.ngens)] for i in range(target.ngens)]
        return cls(source, target, M)

    @classmethod
    def zero(cls, source, target):
        return cls(source, target, [[0] * source.ngens for _ in range(target.ngens)])

    @classmethod
    def identity(cls, group):
        n = group.ngens
        return cls(group, group, [[int(i == j) for j in range(n)] for i in range(n)])

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.target.reduce([0] * self.target.ngens)) and all(
            all(v == 0 for v in self.target.reduce([self.matrix[i][j] for i in range(self.target.ngens)]))
            for j in range(self.source.ngens))

    def __eq__(self, other):
        if not isinstance(other, AbHom):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        for j in range(self.source.ngens):
            a = self.target.reduce([self.matrix[i][j] for i in range(self.target.ngens)])
            b = self.target.reduce([other.matrix[i][j] for i in range(self.target.ngens)])
            if a != b:
                return False
        return True


@dataclass
class HomAnalysis:
    kernel: FinAb
    image: FinAb
    cokernel: FinAb
    kernel_gens: list  # source coordinates
    image_gens: list  # target coordinates


def hom_analyze(h: AbHom) -> HomAnalysis:
    """Kernel, image and cokernel of ``h`` with generator representatives."""
    h.check()
    src, tgt = h.source, h.target
    k, l = src.ngens, tgt.ngens
    M = [list(r) for r in h.matrix]
    # image
    if k and l:
        img, img_gens = subgroup_of(M, tgt.mods)
    else:
        img, img_gens = FinAb(), []
    # kernel: {x : M x in rel_tgt} / rel_src, as a subgroup of src
    if k == 0:
        ker, ker_gens = FinAb(), []
    else:
        if l:
            lat = _relation_lattice_of(M, tgt.mods)
        else:
            lat = [[int(i == j) for j in range(k)] for i in range(k)]
        if lat:
            X = [[v[i] for v in lat] for i in range(k)]
            ker, ker_gens = subgroup_of(X, src.mods)
        else:
            ker, ker_gens = FinAb(), []
    # cokernel: Z^l / (cols of M + diag(mods))
    if l == 0:
        cok = FinAb()
    else:
        R = [list(M[i]) + [(tgt.mods[i] if i == t else 0) for t in range(l)] for i in range(l)]
        _, _, S, _ = smith_normal_form_dense(R)
        diag = [S[i][i] for i in range(l)]
        cok = FinAb.from_orders([d for d in diag if d != 1])
    return HomAnalysis(ker, img, cok, ker_gens, img_gens)


# ---------------------------------------------------------------------------
# groups given by arbitrary moduli (not necessarily a divisibility chain)


class RawAb:
    """``Z^k / diag(mods)`` for arbitrary moduli, with a canonical form.

    ``to_canonical`` maps raw coordinates to :attr:`group` coordinates and
    ``gens`` holds raw vectors for the canonical generators.
    """

    def __init__(self, mods: Sequence[int]):
        self.mods = tuple(int(m) for m in mods)
        k = len(self.mods)
        if k == 0:
            self.group, self.P, self.gens = FinAb(), [], []
            return
        diag = [[self.mods[i] if i == j else 0 for j in range(k)] for i in range(k)]
        U, Ui, S, _ = smith_normal_form_dense(diag)
        s = [S[i][i] for i in range(k)]
        keep = [i for i in range(k) if s[i] != 1]
        tors = [i for i in keep if s[i]]
        free = [i for i in keep if not s[i]]
        order = tors + free
        self.P = [U[i] for i in order]
        self.gens = [[Ui[t][i] for t in range(k)] for i in order]
        self.group = FinAb(tuple(s[i] for i in tors), len(free), tuple(self.gens))

    def to_canonical(self, raw) -> tuple:
        out = [sum(a * b for a, b in zip(row, raw)) for row in self.P]
        return self.group.reduce(out)

    def from_canonical(self, coords) -> list:
        out = [0] * len(self.mods)
        for c, g in zip(coords, self.gens):
            for i, v in enumerate(g):
                out[i] += c * v
        return [x % m if m else x for x, m in zip(out, self.mods)]


def kernel_subgroup(M, source_mods, target_mods):
    """Kernel of ``x -> M x`` from ``Z^k/diag(source_mods)`` to ``Z^l/diag(target_mods)``.

    Returns ``(FinAb, gens)`` with generators in source coordinates.
    """
    k = len(source_mods)
    if k == 0:
        return FinAb(), []
    if len(target_mods) == 0:
        lat = [[int(i == j) for j in range(k)] for i in range(k)]
    else:
        lat = _relation_lattice_of([list(r) for r in M], target_mods)
    if not lat:
        return FinAb(), []
    X = [[v[i] for v in lat] for i in range(k)]
    return subgroup_of(X, source_mods)


def subquotient(Y, Z, mods):
    """``span(Y) / span(Z)`` inside ``Z^l/diag(mods)``; requires ``span(Z) <= span(Y)``.

    ``Y`` and ``Z`` are lists of column vectors.  Returns ``(FinAb, gens)``
    with generators as ambient vectors.
    """
    l = len(mods)
    ky, kz = len(Y), len(Z)
    if ky == 0:
        return FinAb(), []
    # y in relations iff Y y = Z z + diag(mods) w
    big = [[Y[j][i] for j in range(ky)] + [-Z[j][i] for j in range(kz)]
           + [(-mods[i] if i == t else 0) for t in range(l)] for i in range(l)]
    if l:
        ker = integer_kernel(big, ky + kz + l)
        rel = [v[:ky] for v in ker]
    else:
        rel = [[int(i == j) for j in range(ky)] for i in range(ky)]
    R = [[v[i] for v in rel] for i in range(ky)] if rel else [[0] for _ in range(ky)]
    U, Ui, S, _ = smith_normal_form_dense(R)
    ncols = len(R[0])
    sdiag = [S[i][i] if i < ncols else 0 for i in range(ky)]
    tors, free = [], []
    for i in range(ky):
        if sdiag[i] == 1:
            continue
        y = [Ui[t][i] for t in range(ky)]
        x = [sum(Y[t][r] * y[t] for t in range(ky)) for r in range(l)]
        x = [c % d if d else c for c, d in zip(x, mods)]
        (tors if sdiag[i] else free).append((sdiag[i], x))
    grp = FinAb(tuple(o for o, _ in tors), len(free), tuple(x for _, x in tors + free))
    return grp, [x for _, x in tors + free]


def in_span(x, cols, mods) -> bool:
    """Whether ``x`` lies in the span of ``cols`` inside ``Z^l/diag(mods)``."""
    l = len(mods)
    if l == 0:
        return True
    mat = [[c[i] for c in cols] + [(mods[i] if i == t else 0) for t in range(l)] for i in range(l)]
    ncols = len(mat[0])
    if ncols == 0:
        return not any(x)
    el = SparseElimination(IntMatrix.from_dense(mat, ncols))
    return el.solve({i: v for i, v in enumerate(x) if v}) is not None
