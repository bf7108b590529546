"""Property checks shared by ``selftest`` and the test suite.

Each check returns ``None`` on success or a short failure description.
"""
from __future__ import annotations

import random

from .cohom import (bar_complex, connecting, corestriction, induced_map, restriction, trivial_module)
from .exactlin import (AbHom, FinAb, IntMatrix, hom_analyze, smith_normal_form, smith_normal_form_dense, det)
from .gmod import norm_torus_character, perm_lattice
from .groups import cosets, quotient


def random_matrix(rng: random.Random, max_dim=8, max_entry=1000, density=0.4):
    r, c = rng.randint(1, max_dim), rng.randint(1, max_dim)
    return [[rng.randint(-max_entry, max_entry) if rng.random() < density else 0 for _ in range(c)]
            for _ in range(r)]


def check_snf(rows):
    A = IntMatrix.from_dense(rows, ncols=len(rows[0]))
    U, S, V = smith_normal_form(A)
    if (U @ A) @ V != S:
        return "U A V != S"
    if not S.is_diagonal():
        return "S is not diagonal"
    d = [x for x in S.diagonal() if x]
    if any(x < 0 for x in d) or any(d[i + 1] % d[i] for i in range(len(d) - 1)):
        return f"divisibility chain fails: {d}"
    if max(U.nrows, V.nrows) <= 10:
        if abs(det(U.to_dense())) != 1 or abs(det(V.to_dense())) != 1:
            return "U or V is not unimodular"
    dense = smith_normal_form_dense(rows)[2]
    dd = [dense[i][i] for i in range(min(len(dense), len(dense[0])))]
    if sorted(x for x in dd if x) != sorted(d):
        return f"sparse {d} and dense {dd} disagree"
    return None


def random_hom(rng: random.Random):
    tgt = FinAb.from_orders([rng.choice([2, 3, 4, 6, 8, 9, 12]) for _ in range(rng.randint(1, 3))])
    e = tgt.exponent()
    src = FinAb.from_orders([e * rng.choice([1, 2, 3]) for _ in range(rng.randint(1, 3))])
    M = [[rng.randint(0, 50) for _ in range(src.ngens)] for _ in range(tgt.ngens)]
    return AbHom(src, tgt, M)


def check_hom_index(h: AbHom):
    a = hom_analyze(h)
    if a.kernel.order() * a.image.order() != h.source.order():
        return f"|ker| |im| = {a.kernel.order()} * {a.image.order()} != |source| = {h.source.order()}"
    if a.image.order() * a.cokernel.order() != h.target.order():
        return "|im| |coker| != |target|"
    return None


def check_quotient(G, N):
    Q, proj = quotient(G, N)
    for a in G.elements:
        for b in G.elements:
            if proj[G.mul(a, b)] != Q.mul(proj[a], proj[b]):
                return f"projection is not multiplicative at ({a}, {b})"
    return None


def check_cosets(G, H):
    X = cosets(G, H)
    if not X.is_transitive():
        return "coset G-set is not transitive"
    if X.size * H.order != G.order:
        return "|G/H| |H| != |G|"
    return None


def check_cyclic_subgroups(G):
    subs = {S.elements for S in G.cyclic_subgroups()}
    for g in G.elements:
        if G.subgroup([g]).elements not in subs:
            return f"<{G.names[g]}> missing from cyclic_subgroups"
    return None


def check_dd(M, top=3):
    cx = bar_complex(M)
    for n in range(top):
        if cx.dim(n) and cx.dim(n + 2) and (cx.d(n + 1) @ cx.d(n)).nnz():
            return f"d^{n + 1} d^{n} != 0"
    return None


def check_cor_res(M, H, n):
    res = restriction(M, H, n)
    cor = corestriction(M, H, n)
    comp = cor.compose(res)
    k = H.index
    src = res.source
    mult = AbHom.from_images(src, src, [[k * int(i == j) for i in range(src.ngens)] for j in range(src.ngens)])
    if comp != mult:
        return f"cor o res != [G:H] = {k} in degree {n}"
    return None


def _exact_at(first: AbHom, second: AbHom):
    """``im first = ker second`` (composition zero and equal orders)."""
    if not second.compose(first).is_zero():
        return "composite is nonzero"
    if hom_analyze(first).image.order() != hom_analyze(second).kernel.order():
        return "|im| != |ker|"
    return None


def check_les(seq, n):
    """Exactness of ``H^n(A) -> H^n(B) -> H^n(C) -> H^{n+1}(A) -> H^{n+1}(B)``."""
    i_n = induced_map(seq.f, n)
    p_n = induced_map(seq.projection, n)
    d_n = connecting(seq, n)
    i_n1 = induced_map(seq.f, n + 1)
    for name, a, b in (("at H^n(B)", i_n, p_n), ("at H^n(C)", p_n, d_n), ("at H^{n+1}(A)", d_n, i_n1)):
        err = _exact_at(a, b)
        if err:
            return f"{name}: {err}"
    return None


def norm_sequence(G, H=None):
    """``0 -> Z -> Z[G/H] -> T -> 0`` as a Cokernel."""
    X = cosets(G, H if H is not None else G.trivial)
    return norm_torus_character(X)[3]


def cohom_lattices(G):
    """Small lattices for property sampling: Z, Z[G/H] and norm tori."""
    out = [trivial_module(G)]
    for H in G.all_subgroups[:4]:
        out.append(perm_lattice(cosets(G, H)))
    out.append(norm_sequence(G).lattice)
    return out
