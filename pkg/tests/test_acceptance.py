"""Acceptance criteria 1-10, each timed against its limit.

Every criterion collects all mismatches before failing so the summary line
shows the complete picture.  Set NORMBRAUER_ACCEPT_N6=1 to add the optional
dihedral n~=6 rows to criterion 2.
"""
import os
import random
import time

from normbrauer import checks, engine, oracles
from normbrauer.cohom import trivial_module
from normbrauer.exactlin import FinAb
from normbrauer.families import dihedral_instance, split_instance, split_exponent_tuples
from normbrauer.groups import dihedral, make_group
from normbrauer.normic import brauer_report, build_galois_system, build_system, galois_data, normalize
from normbrauer.scenario import corpus
from normbrauer.selftest import lemma_instances

SEED = 20240611
RESULTS = {}


def criterion(k, limit, body):
    t0 = time.perf_counter()
    failures = body()
    dt = time.perf_counter() - t0
    detail = "; ".join(failures[:4]) + (f" (+{len(failures) - 4} more)" if len(failures) > 4 else "")
    if not failures and dt >= limit:
        detail = f"too slow: {dt:.1f}s"
    ok = not failures and dt < limit
    RESULTS[k] = (ok, dt, limit, detail)
    with_line = f"Criterion {k}: {'PASS' if ok else 'FAIL'}"
    print(with_line)
    assert not failures, detail
    assert dt < limit, f"criterion {k} took {dt:.1f}s, limit {limit}s"


def eligible_corpus():
    out = []
    for sc in corpus():
        spec = sc.to_spec()
        if spec.section3_eligible():
            out.append((sc.name, normalize(spec, append_synthetic=False)[0]))
    return out


def test_criterion_1_biquadratic_pair():
    def body():
        sc = {s.name: s for s in corpus()}["ex31_klein"]
        rep = brauer_report(sc.to_spec())
        bad = []
        if rep.order != 1 or rep.exact_group != FinAb():
            bad.append(f"order {rep.order}, exact {rep.exact_group}")
        if rep.cths != FinAb.cyclic(2):
            bad.append(f"cths {rep.cths}")
        return bad
    criterion(1, 10, body)


def test_criterion_2_dihedral_table():
    rows = [(nt, l) for nt in (2, 3, 4) for l in (1, 2)]
    if os.environ.get("NORMBRAUER_ACCEPT_N6"):
        rows += [(6, 1), (6, 2)]

    def body():
        bad = []
        for nt, l in rows:
            rep = brauer_report(dihedral_instance(nt, l))
            want = oracles.dihedral_brauer(nt, l)
            got = rep.exact_group
            if rep.order != want.order() or (got is not None and got != want):
                bad.append(f"n~={nt} l={l}: engine order {rep.order} ({got}) vs closed form {want}")
            if got is not None and not got.is_cyclic():
                bad.append(f"n~={nt} l={l}: {got} is not cyclic")
        return bad
    criterion(2, 600 if len(rows) > 6 else 120, body)


def test_criterion_3_split_family():
    def body():
        bad = []
        for spec in ("cyclic(2)", "cyclic(3)", "cyclic(4)", "abelian(2,2)"):
            G = make_group(spec)
            tuples = split_exponent_tuples(G.order, 3)
            assert tuples
            for t in tuples:
                rep = brauer_report(split_instance(G, t))
                want, _ = oracles.split_polynomial_brauer(G, t)
                if rep.V != want or not rep.W.is_trivial():
                    bad.append(f"{spec} e={t}: V={rep.V} W={rep.W}, oracle {want}")
        return bad
    criterion(3, 120, body)


def test_criterion_4_dihedral_sha_kernel():
    def body():
        rep = brauer_report(dihedral_instance(4, 1))
        return [] if rep.W == FinAb.cyclic(2) else [f"n~=4 l=1: W = {rep.W}, expected Z/2 (V = {rep.V})"]
    criterion(4, 60, body)


def test_criterion_5_lemma_suites():
    def body():
        bad = []
        for nt in range(2, 7):
            G = dihedral(nt)
            out = oracles.lemma_checks(G, G.meta["rotations"])["cor"]
            if out["status"] != "pass":
                bad.append(f"Cor dihedral({nt}): {out['witness']}")
        checked = 0
        for G, H in lemma_instances(16):
            for l in (1, 2, 3, 4):
                for e in (d for d in range(1, G.order + 1) if G.order % d == 0):
                    out = oracles.lemma_checks(G, H, l, e)["map0"]
                    if out["status"] == "skip":
                        continue
                    checked += 1
                    if out["status"] != "pass":
                        bad.append(f"{G.label} H={H.elements} l={l} e'={e}: {out['witness']}")
        if checked < 100:
            bad.append(f"only {checked} instances met the hypotheses")
        return bad
    criterion(5, 120, body)


def test_criterion_6_two_sha_kernels():
    def body():
        bad = []
        cases = eligible_corpus()
        assert cases
        for name, spec in cases:
            bold = engine.sha_kernel(build_galois_system(spec, bold=True)).group
            plain = engine.sha_kernel(build_galois_system(spec, bold=False)).group
            if bold != plain:
                bad.append(f"{name}: {bold} vs {plain}")
        return bad
    criterion(6, 180, body)


def test_criterion_7_vertical_cardinality():
    def body():
        bad = []
        for name, spec in eligible_corpus():
            sys = build_galois_system(spec, bold=True)
            V = engine.vertical_part(sys).group
            Gb, _, H, l = galois_data(spec)
            coker = oracles.coker_h1_to_c(Gb, H, l, sys.info["e'"])
            if V.order() != coker.order():
                bad.append(f"{name}: |V| = {V.order()}, |coker| = {coker.order()}")
        return bad
    criterion(7, 120, body)


def test_criterion_8_cths_comparison():
    def body():
        bad, seen = [], 0
        for sc in corpus():
            rep = brauer_report(sc.to_spec())
            if rep.cths is None:
                continue
            seen += 1
            ratio, rem = divmod(rep.cths.order(), rep.order)
            if rem or ratio & (ratio - 1):
                bad.append(f"{sc.name}: cths {rep.cths} / order {rep.order} is not a power of 2")
            if rep.exact_group is not None and rep.exact_group.odd_part() != rep.cths.odd_part():
                bad.append(f"{sc.name}: odd parts {rep.exact_group.odd_part()} vs {rep.cths.odd_part()}")
        if not seen:
            bad.append("no corpus scenario satisfies the hypotheses")
        return bad
    criterion(8, 120, body)


def test_criterion_9_two_paths():
    def body():
        bad = []
        for sc in corpus():
            spec = sc.to_spec()
            if spec.G.order > 8:
                continue
            sys, _, _ = build_system(spec)
            vs, vg = engine.vertical_part(sys, "shapiro").group, engine.vertical_part(sys, "generic").group
            ws, wg = engine.sha_kernel(sys, "shapiro").group, engine.sha_kernel(sys, "generic").group
            if (vs, ws) != (vg, wg):
                bad.append(f"{sc.name}: shapiro V={vs} W={ws}, generic V={vg} W={wg}")
        return bad
    criterion(9, 300, body)


def test_criterion_10_infrastructure():
    def body():
        rng = random.Random(SEED)
        bad = []
        for k in range(150):
            err = checks.check_snf(checks.random_matrix(rng, max_dim=10))
            if err:
                bad.append(f"snf#{k}: {err}")
        for k in range(100):
            err = checks.check_hom_index(checks.random_hom(rng))
            if err:
                bad.append(f"hom#{k}: {err}")
        for spec in ("cyclic(4)", "cyclic(6)", "abelian(2,2)", "dihedral(3)", "dihedral(4)", "abelian(2,4)"):
            G = make_group(spec)
            for M in checks.cohom_lattices(G):
                err = checks.check_dd(M)
                if err:
                    bad.append(f"{spec} {M.name}: {err}")
            for H in rng.sample(G.all_subgroups, min(4, len(G.all_subgroups))):
                for n in (1, 2):
                    err = checks.check_cor_res(trivial_module(G), H, n)
                    if err:
                        bad.append(f"{spec} H={H.elements}: {err}")
            H = rng.choice([S for S in G.all_subgroups if S.order < G.order])
            for n in (1, 2):
                for seq in (checks.norm_sequence(G), checks.norm_sequence(G, H)):
                    err = checks.check_les(seq, n)
                    if err:
                        bad.append(f"{spec} les n={n}: {err}")
        return bad
    criterion(10, 60, body)
