"""Command line driver.

    normbrauer compute FILE [--json OUT] [--path shapiro|generic|both]
    normbrauer sweep {dihedral,abelian,split-polynomial} [params] [--json OUT] [--figure PNG]
    normbrauer selftest [fast|full|paper]
    normbrauer oracle NAME [params]

Exit codes: 0 success, 2 bad input (parse, hypothesis or cap errors),
1 internal error or, for ``sweep``/``selftest``, any disagreement/failure.
Caps can be raised through ``NORMBRAUER_CAPS`` (see :mod:`normbrauer.config`).
"""
from __future__ import annotations

import argparse
import json
import sys

from .config import CapError, set_caps
from .groups import GroupError, make_group
from .normic import BrauerReport, HypothesisError, brauer_report
from . import families, oracles
from .scenario import ScenarioError, load_scenario, parse_subgroup


class UsageError(ValueError):
    pass


def dumps_report(rep: BrauerReport) -> str:
    return json.dumps(rep.to_json(), indent=2, ensure_ascii=False) + "\n"


def render_report(rep: BrauerReport) -> str:
    d = rep.to_json()
    eg = d["exact_group"]
    lines = [
        f"name:        {d['name']}",
        f"n, m:        {d['n']}, {d['m']}",
        f"variant:     {d['variant']}",
        f"V:           {d['V']}",
        f"W:           {d['W']}",
        f"order:       {d['order']}",
        f"exact_group: {'undetermined' if eg is None else eg['group'] + ' (' + eg['method'] + ')'}",
        f"cths:        {'n/a' if d['cths'] is None else d['cths']}",
    ]
    if d["generators"]:
        lines.append("generators:")
        lines += [f"  {g}" for g in d["generators"]]
    if d["notes"]:
        lines.append("notes:")
        lines += [f"  - {x}" for x in d["notes"]]
    return "\n".join(lines) + "\n"


def _write(text, dest):
    if dest == "-":
        sys.stdout.write(text)
    else:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_compute(args):
    sc = load_scenario(args.file)
    path = args.path or sc.path
    set_caps(sc.effective_caps() if sc.caps else None)
    try:
        rep = brauer_report(sc.to_spec(), path=path)
    finally:
        set_caps(None)
    if args.json != "-":
        sys.stdout.write(render_report(rep))
    if args.json:
        _write(dumps_report(rep), args.json)
    return 0


def _int_range(text):
    """``2..4`` or ``2,3,5`` or ``3``."""
    text = text.strip()
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return list(range(int(a), int(b) + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad integer range {text!r}") from None


def render_rows(rows) -> str:
    head = ("params", "V", "W", "order", "exact_group", "oracle", "agree")
    body = []
    for r in rows:
        if r.status != "ok" and r.agree is None:
            body.append((r.params, "", "", "", "", "", r.status))
            continue
        s = lambda x: "-" if x is None else str(x)  # noqa: E731
        body.append((r.params, s(r.V), s(r.W), s(r.order), s(r.exact_group), s(r.oracle),
                     "yes" if r.agree else "NO"))
    widths = [max(len(h), *(len(b[i]) for b in body)) if body else len(h) for i, h in enumerate(head)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    out = [fmt.format(*head).rstrip(), fmt.format(*("-" * w for w in widths))]
    out += [fmt.format(*b).rstrip() for b in body]
    return "\n".join(out) + "\n"


def cmd_sweep(args):
    if args.family == "dihedral":
        rows = families.sweep_dihedral(_int_range(args.n), _int_range(args.l), args.embedding, args.path)
        title = "dihedral"
    elif args.family == "split-polynomial":
        G = make_group(args.group)
        rows = families.sweep_split(G, args.max_len, args.path)
        title = f"split polynomial over {args.group}"
    elif args.family == "abelian":
        inv = _int_range(args.invariants)
        rows = families.sweep_abelian(inv, _int_range(args.l), args.path)
        title = f"abelian {tuple(inv)}"
    else:  # argparse restricts choices
        raise UsageError(f"unknown family {args.family!r}")
    if args.json != "-":
        sys.stdout.write(render_rows(rows))
    if args.json:
        _write(json.dumps({"family": args.family, "rows": [r.to_json() for r in rows]}, indent=2) + "\n",
               args.json)
    if args.figure:
        from .plotting import sweep_figure
        sweep_figure(rows, args.figure, title)
    return 1 if any(r.agree is False for r in rows) else 0


def cmd_selftest(args):
    from .selftest import run
    results = run(args.level)
    bad = sum(len(r.failures) for r in results)
    total = sum(r.total for r in results)
    print(f"{total - bad}/{total} checks passed")
    return 1 if bad else 0


def _subgroup(G, text, default=None):
    if text is None:
        if default is None:
            raise UsageError("--subgroup is required")
        return default
    return parse_subgroup(G, text)


def cmd_oracle(args):
    name = args.name
    out = {}
    if name == "dihedral":
        out["group"] = str(oracles.dihedral_brauer(args.n, args.l))
    elif name == "abelian-p":
        p = oracles.AbelianPParams(args.p, args.s, args.r, _int_range(args.e_list or ""),
                                   _int_range(args.mu or ""), args.l, args.s_prime, args.h1)
        out["group"] = str(oracles.abelian_p_brauer(p))
    elif name == "split-polynomial":
        G = make_group(args.group)
        grp, gens = oracles.split_polynomial_brauer(G, _int_range(args.e))
        out["group"] = str(grp)
        out["generators"] = [[list(c) for c in g] for g in gens]
    else:
        G = make_group(args.group)
        default = G.meta.get("rotations") if G.meta else None
        H = _subgroup(G, args.subgroup, default)
        if name == "delta":
            delta, h1 = oracles.res_kernel_delta(G, H, args.l, args.e_prime)
            out["delta"], out["h1"] = str(delta), str(h1)
        elif name == "coker-c":
            out["group"] = str(oracles.coker_h1_to_c(G, H, args.l, args.e_prime))
        elif name == "perfect":
            out["group"] = str(oracles.perfect_h_formula(G, H))
        elif name == "lemmas":
            res = oracles.lemma_checks(G, H, args.l, args.e_prime)
            out = json.loads(json.dumps(res, default=str))
        else:
            raise UsageError(f"unknown oracle {name!r}")
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


ORACLES = ("dihedral", "abelian-p", "split-polynomial", "delta", "coker-c", "perfect", "lemmas")


def build_parser():
    ap = argparse.ArgumentParser(prog="normbrauer",
                                 description="Unramified Brauer groups of normic bundles P(t) = N_K/k(z).")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("compute", help="evaluate a scenario file")
    p.add_argument("file")
    p.add_argument("--json", metavar="OUT", help="write the JSON report to OUT ('-' for stdout only)")
    p.add_argument("--path", choices=("shapiro", "generic", "both"), help="cohomology path (default: scenario's)")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", help="engine against closed forms over a family")
    p.add_argument("family", choices=families.FAMILIES)
    p.add_argument("--n", default="2..4", help="dihedral: range of n~ (e.g. 2..4)")
    p.add_argument("--l", default=None, help="l values (e.g. 1,2)")
    p.add_argument("--embedding", choices=("honest", "override"), default="honest",
                   help="dihedral l > 1: product group or l as parameter")
    p.add_argument("--group", default="cyclic(4)", help="split-polynomial: Galois group of K")
    p.add_argument("--max-len", type=int, default=3, help="split-polynomial: longest exponent tuple")
    p.add_argument("--invariants", default="4,2", help="abelian: invariants of Gal(K/k)")
    p.add_argument("--path", choices=("shapiro", "generic"), default="shapiro")
    p.add_argument("--json", metavar="OUT")
    p.add_argument("--figure", metavar="PNG", help="also render a bar chart of the sweep")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("selftest", help="run deterministic self-test suites")
    p.add_argument("level", nargs="?", choices=("fast", "full", "paper"), default="fast")
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("oracle", help="evaluate a closed form or enumeration oracle")
    p.add_argument("name", choices=ORACLES)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--e-list", help="abelian-p: exponents e_i < s")
    p.add_argument("--mu", help="abelian-p: exponents mu_j > s")
    p.add_argument("--s-prime", type=int)
    p.add_argument("--h1", type=int, default=1, help="abelian-p: order of the prime-to-p part")
    p.add_argument("--group", default="dihedral(3)")
    p.add_argument("--e", default="1,1,2", help="split-polynomial: exponents")
    p.add_argument("--subgroup", help="generators of H, e.g. 'r' or '[\"(1,0)\"]'")
    p.add_argument("--e-prime", type=int, default=1)
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "cmd", None) == "sweep" and args.l is None:
        args.l = "1,2" if args.family == "dihedral" else "1"
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 2
    except (HypothesisError, oracles.OracleError) as exc:
        print(f"hypothesis not met: {exc}", file=sys.stderr)
        return 2
    except (GroupError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
