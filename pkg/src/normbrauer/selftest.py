"""Deterministic self-test suites behind ``normbrauer selftest``.

``fast``: linear algebra, groups and cohomology identities.
``full``: adds the lemma checks and engine/oracle sweeps.
``paper``: the golden corpus plus the closed-form values the construction
is expected to reproduce.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from . import checks, families, oracles
from .cohom import trivial_module
from .exactlin import FinAb
from .groups import abelian, cyclic, dihedral, direct, sym
from .normic import brauer_report, cths_quotient

SEED = 20240611


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    total: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    def record(self, label, err):
        self.total += 1
        if err:
            self.failures.append(f"{label}: {err}")
        else:
            self.passed += 1

    @property
    def ok(self):
        return not self.failures


def _groups_small():
    return [cyclic(2), cyclic(3), cyclic(4), cyclic(6), abelian([2, 2]), dihedral(3), dihedral(4),
            abelian([2, 4])]


def suite_exactlin(rng):
    res = SuiteResult("exactlin")
    for k in range(60):
        res.record(f"snf#{k}", checks.check_snf(checks.random_matrix(rng, max_dim=12)))
    for k in range(60):
        res.record(f"hom#{k}", checks.check_hom_index(checks.random_hom(rng)))
    return res


def suite_groups(rng):
    res = SuiteResult("groups")
    for G in _groups_small() + [sym(4)]:
        res.record(f"{G.label} cyclic", checks.check_cyclic_subgroups(G))
        for H in G.all_subgroups:
            res.record(f"{G.label} cosets {H.elements}", checks.check_cosets(G, H))
            if H.is_normal():
                res.record(f"{G.label} quotient {H.elements}", checks.check_quotient(G, H))
    return res


def suite_cohom(rng):
    res = SuiteResult("cohom")
    for G in _groups_small():
        for M in checks.cohom_lattices(G):
            res.record(f"{G.label} dd {M.name}", checks.check_dd(M))
        subs = G.all_subgroups
        for H in rng.sample(subs, min(4, len(subs))):
            for n in (1, 2):
                res.record(f"{G.label} cor.res H={H.elements} n={n}",
                           checks.check_cor_res(trivial_module(G), H, n))
        res.record(f"{G.label} les Z[G]", checks.check_les(checks.norm_sequence(G), 1))
        H = rng.choice(subs)
        if H.order < G.order:
            res.record(f"{G.label} les Z[G/H]", checks.check_les(checks.norm_sequence(G, H), 1))
    return res


def lemma_instances(max_order=16):
    """(G, H) pairs for the lemma suites: normal H with G/H nontrivial."""
    gs = [cyclic(n) for n in range(2, max_order + 1)]
    gs += [dihedral(n) for n in range(2, max_order // 2 + 1)]
    gs += [abelian(x) for x in ([2, 4], [2, 2, 2], [3, 3], [2, 6], [4, 4], [2, 2, 4], [2, 8], [2, 2, 2, 2])]
    gs += [sym(3), direct(sym(3), cyclic(2)), direct(dihedral(4), cyclic(2))]
    for G in gs:
        if G.order > max_order:
            continue
        for H in G.all_subgroups:
            if H.is_normal() and 1 < H.order < G.order:
                yield G, H


def suite_lemmas(rng, max_order=16):
    res = SuiteResult("lemmas")
    for nt in range(2, 7):
        G = dihedral(nt)
        out = oracles.lemma_checks(G, G.meta["rotations"])
        res.record(f"cor dihedral({nt})", None if out["cor"]["status"] == "pass" else out["cor"])
    for G, H in lemma_instances(max_order):
        for l in (1, 2):
            for e in sorted({d for d in range(1, G.order + 1) if G.order % d == 0 and d <= 4}):
                out = oracles.lemma_checks(G, H, l, e)["map0"]
                if out["status"] == "skip":
                    continue
                res.record(f"map0 {G.label} H={H.elements} l={l} e={e}",
                           None if out["status"] == "pass" else out.get("witness"))
    return res


def _sweep_suite(name, rows):
    res = SuiteResult(name)
    for r in rows:
        if r.agree is None:
            continue
        res.record(r.params, None if r.agree else f"engine {r.order} ({r.exact_group}) vs oracle {r.oracle}")
    return res


def suite_sweeps(rng):
    out = [_sweep_suite("sweep dihedral", families.sweep_dihedral([2, 3, 4], [1, 2]))]
    for G in ("cyclic(2)", "cyclic(3)", "cyclic(4)", "abelian(2,2)"):
        out.append(_sweep_suite(f"sweep split {G}", families.sweep_split(G)))
    out.append(_sweep_suite("sweep abelian (4,2)", families.sweep_abelian([4, 2])))
    out.append(_sweep_suite("sweep abelian (3,3)", families.sweep_abelian([3, 3])))
    return out


def suite_golden(rng):
    from .scenario import corpus
    res = SuiteResult("golden corpus")
    for sc in corpus():
        rep = brauer_report(sc.to_spec(), path="shapiro")
        want = sc.expected()
        got = {"V": rep.V, "W": rep.W, "order": rep.order, "exact_group": rep.exact_group,
               "cths": rep.cths}
        bad = [f"{k}: want {want[k]} got {got.get(k)}" for k in want if got.get(k) != want[k]]
        res.record(sc.name, "; ".join(bad))
    return res


def suite_closed_forms(rng):
    """Closed-form values attached to specific inputs."""
    res = SuiteResult("closed-form values")
    from .families import dihedral_instance
    from .scenario import corpus
    sc = {s.name: s for s in corpus()}
    ex = brauer_report(sc["ex31_klein"].to_spec())
    res.record("biquadratic pair: order 1", None if ex.order == 1 else ex.order)
    res.record("biquadratic pair: cths Z/2", None if ex.cths == FinAb.cyclic(2) else ex.cths)
    for nt, l, want in ((2, 1, 1), (2, 2, 2), (3, 1, 3), (4, 1, 4)):
        rep = brauer_report(dihedral_instance(nt, l))
        res.record(f"dihedral n~={nt} l={l}: Z/{want}",
                   None if rep.order == want and _cyclic_or_unknown(rep) else f"got V={rep.V} W={rep.W}")
    rep = brauer_report(dihedral_instance(4, 1))
    res.record("dihedral n~=4 l=1: W = Z/2", None if rep.W == FinAb.cyclic(2) else f"got W={rep.W}")
    rep = brauer_report(dihedral_instance(3, 1))
    res.record("dihedral n~=3 l=1: V = Z/3", None if rep.V == FinAb.cyclic(3) else f"got V={rep.V}")
    for p, s, r, mu, want in ((3, 1, 1, [], 3), (2, 1, 1, [], 1), (2, 2, 0, [3], 4)):
        got = oracles.abelian_p_brauer(oracles.AbelianPParams(p, s, r, [], mu))
        res.record(f"abelian p={p} s={s} r={r} mu={mu}", None if got.order() == want else str(got))
    G = dihedral(3)
    res.record("coker H1 -> C dihedral(3)",
               None if oracles.coker_h1_to_c(G, G.meta["rotations"], 1, 1) == FinAb.cyclic(3) else "mismatch")
    K4 = abelian([2, 2])
    res.record("cths Klein, H trivial",
               None if _cths_klein(K4) == FinAb.cyclic(2) else "mismatch")
    return res


def _cyclic_or_unknown(rep):
    return rep.exact_group is None or rep.exact_group.is_cyclic()


def _cths_klein(K4):
    from .normic import ProblemSpec
    spec = ProblemSpec(K4, [K4.trivial], [(K4.trivial, 1)], variant="X")
    return cths_quotient(spec)


LEVELS = {
    "fast": [suite_exactlin, suite_groups, suite_cohom],
    "full": [suite_exactlin, suite_groups, suite_cohom, suite_lemmas, suite_sweeps],
    "paper": [suite_golden, suite_closed_forms],
}


def run(level="fast", out=print):
    rng = random.Random(SEED)
    results = []
    for fn in LEVELS[level]:
        t0 = time.perf_counter()
        got = fn(rng)
        got = got if isinstance(got, list) else [got]
        for r in got:
            r.seconds = time.perf_counter() - t0
            results.append(r)
            out(f"{r.name:<28} {r.passed:>4}/{r.total:<4} {'ok' if r.ok else 'FAIL'}")
            for f in r.failures:
                out(f"    {f}")
    return results
