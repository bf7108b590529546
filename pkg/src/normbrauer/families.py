"""Parametrised problem families and engine/oracle sweeps over them."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .config import CapError
from .exactlin import FinAb
from .groups import abelian, cyclic, dihedral, direct, make_group
from .normic import HypothesisError, ProblemSpec, brauer_report
from . import oracles


def dihedral_instance(nt: int, l: int = 1, embedding: str = "honest") -> ProblemSpec:
    """``K/k`` dihedral of degree ``2 nt``, ``L cap K`` the fixed field of the rotations.

    ``l = [L : L cap K]``.  With ``embedding="honest"`` and ``l > 1`` the
    problem lives on ``D_nt x Z/l`` (``L`` picks up a cyclic degree ``l``
    extension disjoint from ``K``); ``"override"`` keeps ``D_nt`` and passes
    ``l`` as a parameter.
    """
    if l == 1 or embedding == "override":
        G = dihedral(nt)
        spec = ProblemSpec(G, [G.trivial], [(G.subgroup([1]), 1)], variant="X",
                           l_overrides=None if l == 1 else [l], name=f"dihedral({nt}) l={l}")
        return spec
    if embedding != "honest":
        raise ValueError(f"unknown embedding {embedding!r}")
    G = direct(dihedral(nt), cyclic(l))
    n2 = 2 * nt
    # (e, 1) generates the Z/l factor, (r, 0) the rotations
    return ProblemSpec(G, [G.subgroup([n2])], [(G.subgroup([1]), 1)], variant="X",
                       name=f"dihedral({nt}) l={l}")


def split_instance(G, e_list) -> ProblemSpec:
    """``K`` Galois with group ``G``, ``P = prod (t - a_i)^{e_i}`` with distinct rational roots."""
    return ProblemSpec(G, [G.trivial], [(G.whole, int(e)) for e in e_list], variant="X",
                       name=f"{getattr(G, 'spec', G.label)} e={tuple(int(e) for e in e_list)}")


def abelian_instance(G, H, l: int = 1) -> ProblemSpec:
    """Abelian ``K/k`` with ``P`` irreducible and ``Gal(K/L cap K) = H``."""
    return ProblemSpec(G, [G.trivial], [(H, 1)], variant="X",
                       l_overrides=None if l == 1 else [l], name=f"H={list(H.elements)} l={l}")


def split_exponent_tuples(n: int, max_len: int = 3):
    """Nondecreasing tuples in ``1..n-1`` with ``n | sum`` and ``gcd(e, n) = 1``."""
    out = []
    for k in range(1, max_len + 1):
        for t in itertools.combinations_with_replacement(range(1, n), k):
            if sum(t) % n == 0 and math.gcd(n, *t) == 1:
                out.append(t)
    return out


@dataclass
class SweepRow:
    params: str
    V: FinAb | None = None
    W: FinAb | None = None
    order: int | None = None
    exact_group: FinAb | None = None
    oracle: FinAb | None = None
    agree: bool | None = None
    status: str = "ok"  # "ok", "skipped (cap)", "error: ..."

    def to_json(self) -> dict:
        s = lambda x: None if x is None else str(x)  # noqa: E731
        return {"params": self.params, "V": s(self.V), "W": s(self.W), "order": self.order,
                "exact_group": s(self.exact_group), "oracle": s(self.oracle), "agree": self.agree,
                "status": self.status}


def _run(params, spec_fn, oracle_fn, compare, path="shapiro"):
    row = SweepRow(params)
    try:
        spec = spec_fn()
        rep = brauer_report(spec, path=path)
    except CapError as exc:
        row.status = f"skipped (cap): {exc}"
        return row
    except HypothesisError as exc:
        row.status = f"error: {exc}"
        return row
    row.V, row.W, row.order, row.exact_group = rep.V, rep.W, rep.order, rep.exact_group
    try:
        row.oracle = oracle_fn()
    except oracles.OracleError as exc:
        row.status = f"no oracle: {exc}"
        return row
    row.agree = compare(rep, row.oracle)
    return row


def _closed_form_agrees(rep, orc):
    if rep.order != orc.order():
        return False
    return rep.exact_group is None or rep.exact_group == orc


def sweep_dihedral(n_range, l_values, embedding="honest", path="shapiro"):
    rows = []
    for nt in n_range:
        for l in l_values:
            rows.append(_run(f"n~={nt} l={l}", lambda: dihedral_instance(nt, l, embedding),
                             lambda: oracles.dihedral_brauer(nt, l), _closed_form_agrees, path))
    return rows


def sweep_split(G, max_len=3, path="shapiro"):
    if isinstance(G, str):
        G = make_group(G)
    rows = []
    for t in split_exponent_tuples(G.order, max_len):
        rows.append(_run(f"e={','.join(map(str, t))}", lambda: split_instance(G, t),
                         lambda: oracles.split_polynomial_brauer(G, t)[0],
                         lambda rep, orc: rep.V == orc and rep.W.is_trivial(), path))
    return rows


def sweep_abelian(invariants, l_values=(1,), path="shapiro"):
    """Every ``H`` with ``G/H`` cyclic of prime-power order."""
    G = abelian(list(invariants))
    rows = []
    for H in G.all_subgroups:
        if H.order == G.order:
            continue
        try:
            oracles.abelian_p_params(G, H, 1)
        except oracles.OracleError:
            continue
        for l in l_values:
            rows.append(_run(f"H={list(H.elements)} l={l}", lambda: abelian_instance(G, H, l),
                             lambda: oracles.abelian_p_brauer(oracles.abelian_p_params(G, H, l)),
                             _closed_form_agrees, path))
    return rows


FAMILIES = ("dihedral", "abelian", "split-polynomial")
