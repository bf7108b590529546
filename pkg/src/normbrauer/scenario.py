"""Scenario files: line-oriented ``key: value`` descriptions of a problem.

Example::

    # two quadratic factors generating a biquadratic K
    name: biquadratic
    group: abelian(2,2)
    component: []
    factor: ["(1,0)"] e=1
    factor: ["(0,1)"] e=1
    variant: X
    expect.order: 1
    expect.cths: Z/2

Subgroups are bracketed generator lists.  A generator is an element index,
a bare element name (``r^2``, ``rs``) or a quoted name (``"(1,0)"``).
``factor`` takes ``e=<int>`` (default 1) and optionally ``l=<int>``.
Repeated ``component``/``factor`` keys accumulate.  ``expect.*`` keys hold
golden values: ``V``, ``W``, ``order``, ``exact_group``, ``cths``, ``sha``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .config import Caps, get_caps
from .exactlin import FinAb
from .groups import GroupSyntaxError, make_group
from .normic import ProblemSpec


class ScenarioError(ValueError):
    def __init__(self, msg, line=None, col=None, source="<scenario>"):
        self.msg, self.line, self.col, self.source = msg, line, col, source
        where = source
        if line is not None:
            where += f":{line}"
            if col is not None:
                where += f":{col}"
        super().__init__(f"{where}: {msg}")


EXPECT_KEYS = ("V", "W", "order", "exact_group", "cths", "sha")
_CAP_NAMES = {f.name for f in fields(Caps)}
_KEYS = {"name", "group", "component", "factor", "variant", "path", "caps", "description"}


@dataclass
class Scenario:
    name: str
    group_spec: str
    components: list  # list of generator lists
    factors: list  # (generators, e, l or None)
    variant: str = "X'"
    path: str = "shapiro"
    caps: dict = field(default_factory=dict)
    expect: dict = field(default_factory=dict)
    description: str = ""
    source: str = "<scenario>"
    _lines: dict = field(default_factory=dict, repr=False)

    def to_spec(self) -> ProblemSpec:
        try:
            G = make_group(self.group_spec)
        except GroupSyntaxError as exc:
            line, col0 = self._lines.get("group", (None, 0))
            col = None if line is None else col0 + exc.offset + 1
            raise ScenarioError(f"group: {exc}", line, col, self.source) from None
        by_name = {nm: i for i, nm in enumerate(G.names)}

        def resolve(items, key, k):
            line, cols = self._lines.get((key, k), (None, []))
            return _resolve(G, by_name, items, line, cols, self.source)

        comps = [resolve(c, "component", k) for k, c in enumerate(self.components)]
        facs, ls = [], []
        for k, (gens, e, l) in enumerate(self.factors):
            facs.append((resolve(gens, "factor", k), e))
            ls.append(l)
        lo = None if all(x is None for x in ls) else [1 if x is None else x for x in ls]
        return ProblemSpec(G, comps, facs, variant=self.variant, l_overrides=lo, name=self.name)

    def effective_caps(self) -> Caps:
        """Process caps tightened (or loosened) by the scenario's ``caps`` line."""
        return replace(get_caps(), **self.caps) if self.caps else get_caps()

    def expected(self) -> dict:
        out = {}
        for k, v in self.expect.items():
            out[k] = int(v) if k == "order" else FinAb.parse(v)
        return out


_TOKEN = re.compile(r'\s*(?:(?P<q>"[^"]*")|(?P<w>[^\s,\[\]"]+)|(?P<p>[\[\],]))')


def _parse_list(text, line, col0, source):
    """``[a, b, "c"]`` -> ``([(tok, quoted)], [cols], rest)``."""
    pos = 0
    m = re.match(r"\s*\[", text)
    if not m:
        raise ScenarioError("expected '['", line, col0 + len(text) - len(text.lstrip()), source)
    pos = m.end()
    items, cols = [], []
    expect_item = True
    while True:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ScenarioError("unterminated list, expected ']'", line, col0 + pos, source)
        col = col0 + m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        pos = m.end()
        if m.group("p") == "]":
            if not expect_item and not items:
                raise ScenarioError("unexpected ']'", line, col, source)
            return items, cols, text[pos:]
        if m.group("p") == ",":
            if expect_item:
                raise ScenarioError("empty list item", line, col, source)
            expect_item = True
            continue
        if m.group("p") == "[":
            raise ScenarioError("nested lists are not allowed", line, col, source)
        if not expect_item:
            raise ScenarioError("expected ',' or ']'", line, col, source)
        tok = m.group("q")[1:-1] if m.group("q") else m.group("w")
        items.append((tok, bool(m.group("q"))))
        cols.append(col)
        expect_item = False


def _parse_options(rest, line, col0, source, allowed):
    opts = {}
    for m in re.finditer(r"\S+", rest):
        tok = m.group(0)
        col = col0 + m.start()
        if "=" not in tok:
            raise ScenarioError(f"expected key=value, got {tok!r}", line, col, source)
        k, v = tok.split("=", 1)
        if k not in allowed:
            raise ScenarioError(f"unknown option {k!r} (allowed: {', '.join(allowed)})", line, col, source)
        if not re.fullmatch(r"\d+", v):
            raise ScenarioError(f"option {k} needs a positive integer, got {v!r}", line, col + len(k) + 1, source)
        opts[k] = int(v)
    return opts


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    data = {"components": [], "factors": [], "expect": {}, "caps": {}}
    lines = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0] if '"' not in raw else _strip_comment(raw)
        if not stripped.strip():
            continue
        m = re.match(r"\s*([A-Za-z_][\w.]*)\s*:", stripped)
        if not m:
            col = len(stripped) - len(stripped.lstrip()) + 1
            raise ScenarioError("expected 'key: value'", lineno, col, source)
        key = m.group(1)
        vcol = m.end() + 1
        value = stripped[m.end():]
        lead = len(value) - len(value.lstrip())
        vcol += lead
        value = value.strip()
        if key.startswith("expect."):
            sub = key[len("expect."):]
            if sub not in EXPECT_KEYS:
                raise ScenarioError(f"unknown expectation {sub!r}", lineno, m.start(1) + 1, source)
            try:
                if sub == "order":
                    int(value)
                else:
                    FinAb.parse(value)
            except ValueError:
                raise ScenarioError(f"bad value {value!r} for {key}", lineno, vcol, source) from None
            data["expect"][sub] = value
            continue
        if key not in _KEYS:
            raise ScenarioError(f"unknown key {key!r}", lineno, m.start(1) + 1, source)
        if key in ("component", "factor"):
            items, cols, rest = _parse_list(value, lineno, vcol, source)
            rest_col = vcol + len(value) - len(rest)
            if key == "component":
                if rest.strip():
                    raise ScenarioError("unexpected text after component list", lineno, rest_col, source)
                lines[("component", len(data["components"]))] = (lineno, cols)
                data["components"].append(items)
            else:
                opts = _parse_options(rest, lineno, rest_col, source, ("e", "l"))
                if opts.get("e", 1) < 1 or opts.get("l", 1) < 1:
                    raise ScenarioError("e and l must be positive", lineno, rest_col, source)
                lines[("factor", len(data["factors"]))] = (lineno, cols)
                data["factors"].append((items, opts.get("e", 1), opts.get("l")))
        elif key == "caps":
            for part in filter(None, (p.strip() for p in value.split(","))):
                if "=" not in part:
                    raise ScenarioError(f"caps entry {part!r} is not key=value", lineno, vcol, source)
                k, v = (x.strip() for x in part.split("=", 1))
                if k not in _CAP_NAMES or not v.isdigit():
                    raise ScenarioError(f"bad caps entry {part!r}", lineno, vcol, source)
                data["caps"][k] = int(v)
        else:
            if key in data:
                raise ScenarioError(f"duplicate key {key!r}", lineno, m.start(1) + 1, source)
            data[key] = value
            lines[key] = (lineno, vcol - 1)
    for req in ("name", "group"):
        if req not in data:
            raise ScenarioError(f"missing required key {req!r}", None, None, source)
    if not data["components"]:
        data["components"] = [[]]
    if not data["factors"]:
        raise ScenarioError("at least one factor is required", None, None, source)
    variant = data.get("variant", "X'")
    if variant not in ("X", "X'"):
        ln = lines.get("variant", (None, None))
        raise ScenarioError(f"variant must be X or X', got {variant!r}", ln[0], ln[1] + 1, source)
    path = data.get("path", "shapiro")
    if path not in ("shapiro", "generic", "both"):
        ln = lines.get("path", (None, None))
        raise ScenarioError(f"path must be shapiro, generic or both, got {path!r}", ln[0], ln[1] + 1, source)
    return Scenario(data["name"], data["group"], data["components"], data["factors"], variant, path,
                    data["caps"], data["expect"], data.get("description", ""), source, lines)


def _strip_comment(raw):
    out, inq = [], False
    for ch in raw:
        if ch == '"':
            inq = not inq
        if ch == "#" and not inq:
            break
        out.append(ch)
    return "".join(out)


def parse_subgroup(G, text: str):
    """Subgroup of ``G`` from a generator list such as ``[r, "(1,0)", 3]``.

    Brackets are optional on the command line: ``r,s`` works too.
    """
    text = text.strip()
    if not text.startswith("["):
        text = f"[{text}]"
    items, cols, rest = _parse_list(text, None, 0, "<subgroup>")
    if rest.strip():
        raise ScenarioError(f"unexpected text {rest.strip()!r} after list", None, None, "<subgroup>")
    by_name = {nm: i for i, nm in enumerate(G.names)}
    return _resolve(G, by_name, items, None, cols, "<subgroup>")


def _resolve(G, by_name, items, line, cols, source):
    out = []
    for (tok, quoted), col in zip(items, cols or [None] * len(items)):
        if not quoted and re.fullmatch(r"-?\d+", tok) and tok not in by_name:
            idx = int(tok)
            if not 0 <= idx < G.order:
                raise ScenarioError(f"element index {idx} out of range 0..{G.order - 1}", line, col, source)
            out.append(idx)
        elif tok in by_name:
            out.append(by_name[tok])
        else:
            raise ScenarioError(f"unknown group element {tok!r}", line, col, source)
    return G.subgroup(out)


def load_scenario(path) -> Scenario:
    p = Path(path)
    return parse_scenario(p.read_text(encoding="utf-8"), source=str(p))


def corpus_dir() -> Path:
    return Path(__file__).with_name("corpus")


def corpus() -> list:
    """All shipped scenarios, sorted by file name."""
    return [load_scenario(p) for p in sorted(corpus_dir().glob("*.scn"))]
