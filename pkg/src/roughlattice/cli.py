"""Scenario files and the ``roughlattice`` command.

A scenario is one line per directive::

    # lexicographic example
    space lex
    net rational (1/n, 1/n)
    conv monotone
    mode verify
    x (0, 0)
    r (1, 0)
    witness net rational (0, 2/n)
    expect accept

Exit status: 0 when every expectation holds, 1 on a mismatch, 2 on parse,
semantic or engine errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .convergence import (
    ConvergenceStructure,
    conv_verify,
    convergence,
    norm_converges,
    pwlin_norm_conv_check,
)
from .errors import RieszError
from .exact import format_rational, parse_rf, rf_limit
from .lattice import LEX, PWLIN, Element, LexVec, PwLin, Space, parse_element
from .nets import (
    EventuallyPeriodic,
    FiniteList,
    Net,
    RationalTerm,
    net_abs,
    net_join,
    net_meet,
    net_neg_part,
    net_pos,
    subseq_arith,
    tail,
)
from .rough import (
    RcCertificate,
    cert_abs,
    cert_from_c,
    cert_join_const,
    cert_meet_const,
    cert_neg,
    cert_pos,
    cert_subnet,
    decide_rc,
    limit_set,
    verify_rc,
)

MODES = ("verify", "decide", "limitset", "oracle")
TRANSFORMS = ("abs", "pos", "neg", "join-const", "meet-const", "subnet", "from-c")
EXIT_OK, EXIT_MISMATCH, EXIT_ERROR = 0, 1, 2


class ScenarioError(RieszError, ValueError):
    """Syntax or semantic problem in a scenario; ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None, field_name: str | None = None):
        where = f"line {line}: " if line is not None else ""
        what = f"{field_name}: " if field_name else ""
        super().__init__(f"{where}{what}{message}")
        self.line = line
        self.field_name = field_name


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _split_top(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside brackets."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    tail_part = "".join(cur).strip()
    if tail_part or parts:
        parts.append(tail_part)
    return parts


def _bracketed(text: str, key: str) -> str | None:
    """Contents of ``key=[...]`` in ``text``."""
    start = text.find(f"{key}=[")
    if start < 0:
        return None
    i = start + len(key) + 2
    depth = 1
    for j in range(i, len(text)):
        if text[j] == "[":
            depth += 1
        elif text[j] == "]":
            depth -= 1
            if depth == 0:
                return text[i:j]
    raise ValueError(f"unclosed bracket after {key}=")


def _keyword(text: str, key: str) -> str | None:
    """Value of ``key=value`` where value runs to the next space outside brackets."""
    start = text.find(f"{key}=")
    if start < 0:
        return None
    i = start + len(key) + 1
    depth, j = 0, i
    while j < len(text) and (depth or not text[j].isspace()):
        if text[j] in "([{":
            depth += 1
        elif text[j] in ")]}":
            depth -= 1
        j += 1
    return text[i:j]


def parse_space(text: str) -> Space:
    words = text.split()
    if words == ["lex"]:
        return LEX
    if words == ["pwlin"]:
        return PWLIN
    if len(words) == 2 and words[0] == "qvec" and words[1].isdigit() and int(words[1]) >= 1:
        return Space("qvec", int(words[1]))
    raise ValueError(f"unknown space {text!r} (expected 'qvec <d>', 'lex' or 'pwlin')")


def parse_value(text: str, space: Space) -> Element:
    """An element of ``space``; tuples read as lex pairs in lex, rationals as constants in pwlin."""
    s = text.strip()
    if space == LEX and s.startswith("("):
        a, b = _split_top(s[1:-1])
        return parse_element(f"lex({a}, {b})", LEX)
    if space == PWLIN and not s.startswith("pwlin"):
        return PwLin.constant(parse_element(s).coords[0])
    return parse_element(s, space)


def parse_net(text: str, space: Space) -> Net:
    s = " ".join(text.split())
    if s.startswith("tail "):
        head, _, rest = s[5:].partition(" of ")
        if not rest or not head.isdigit():
            raise ValueError("expected 'tail <n0> of <net>'")
        return tail(parse_net(rest, space), int(head))
    if s.startswith("periodic"):
        cyc = _bracketed(s, "cycle")
        if cyc is None:
            raise ValueError("periodic net needs cycle=[...]")
        pre = _bracketed(s, "prefix") or ""
        prefix = tuple(parse_value(e, space) for e in _split_top(pre) if e)
        cycle = tuple(parse_value(e, space) for e in _split_top(cyc) if e)
        if not cycle:
            raise ValueError("cycle must be nonempty")
        return EventuallyPeriodic(prefix, cycle)
    if s.startswith("rational"):
        body = s[len("rational"):].strip()
        if not (body.startswith("(") and body.endswith(")")):
            raise ValueError("rational net needs '(expr, ...)'")
        coords = tuple(parse_rf(e) for e in _split_top(body[1:-1]))
        return RationalTerm(space, coords)
    if s.startswith("pwlin-abs-shift"):
        if space != PWLIN:
            raise ValueError("pwlin-abs-shift nets live in pwlin")
        base, shift, horizon = (_keyword(s, k) for k in ("base", "shift", "horizon"))
        if base is None or shift is None or horizon is None or not horizon.isdigit():
            raise ValueError("expected 'pwlin-abs-shift base=<pwlin> shift=<expr> horizon=<N>'")
        f, g = parse_value(base, PWLIN), parse_rf(shift)
        return FiniteList.from_function(lambda n: (f - PwLin.constant(g(n))).abs(), int(horizon))
    raise ValueError(f"unknown net form {s.split()[0]!r}")


@dataclass(frozen=True)
class Scenario:
    space: Space
    net_text: str
    net: Net
    conv: str
    mode: str
    x: Element | None = None
    r: Element | None = None
    witness_text: str | None = None
    witness: Net | None = None
    params: tuple = ()
    expect: str | None = None
    name: str = field(default="", compare=False)

    def param(self, key: str, default=None):
        return dict(self.params).get(key, default)


_KEYS = ("space", "net", "conv", "mode", "x", "r", "witness", "expect", "param")


def parse_scenario(text: str, name: str = "") -> Scenario:
    lines = text.splitlines()
    found: dict[str, tuple[int, str]] = {}
    params: list[tuple[str, str]] = []
    for no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key not in _KEYS:
            raise ScenarioError(f"unknown directive {key!r}", no)
        if not rest:
            raise ScenarioError(f"directive {key!r} needs a value", no)
        if key == "param":
            k, _, v = rest.partition(" ")
            if not v.strip():
                raise ScenarioError("expected 'param <name> <value>'", no)
            params.append((k, v.strip()))
            continue
        if key in found:
            raise ScenarioError(f"duplicate directive {key!r}", no)
        found[key] = (no, rest)
    if not found:
        raise ScenarioError("empty scenario", 1)
    for key in ("space", "net", "mode"):
        if key not in found:
            raise ScenarioError("missing directive", len(lines) or 1, key)

    def convert(key, fn):
        if key not in found:
            return None
        no, value = found[key]
        try:
            return fn(value)
        except RieszError as exc:
            raise ScenarioError(str(exc), no, key) from exc
        except ValueError as exc:
            raise ScenarioError(str(exc), no, key) from exc

    space = convert("space", parse_space)
    net_text = " ".join(found["net"][1].split())
    net = convert("net", lambda v: parse_net(v, space))
    mode = found["mode"][1]
    base_mode = mode.split(":", 1)[0]
    if base_mode == "transform":
        if mode.partition(":")[2] not in TRANSFORMS:
            raise ScenarioError(f"unknown transform (one of {', '.join(TRANSFORMS)})", found["mode"][0], "mode")
    elif mode not in MODES:
        raise ScenarioError(f"unknown mode {mode!r}", found["mode"][0], "mode")
    default_conv = "pwlin-norm" if space == PWLIN else "order"
    conv_name = found.get("conv", (0, default_conv))[1]
    convert("conv", lambda v: convergence(v, space))
    x = convert("x", lambda v: parse_value(v, space))
    r = convert("r", lambda v: parse_value(v, space))
    if r is not None and not space.zero() <= r:
        raise ScenarioError("roughness must be ≥ θ", found["r"][0], "r")
    witness_text = None
    witness = None
    if "witness" in found:
        no, value = found["witness"]
        if not value.startswith("net "):
            raise ScenarioError("expected 'witness net <net>'", no, "witness")
        witness_text = " ".join(value[4:].split())
        witness = convert("witness", lambda v: parse_net(v[4:], space))
    needs = {"decide": ("x", "r"), "limitset": ("r",), "oracle": ("x", "r"), "transform": ("x", "r")}
    for key in needs.get(base_mode, ()):
        if key not in found:
            raise ScenarioError(f"mode {mode} requires it", None, key)
    if base_mode == "verify" and "x" not in found:
        raise ScenarioError("mode verify requires it", None, "x")
    expect = found.get("expect", (0, None))[1]
    return Scenario(
        space, net_text, net, conv_name, mode, x, r, witness_text, witness,
        tuple(params), expect, name,
    )


def _compact(e) -> str:
    return str(e).replace(", ", ",")


def format_scenario(s: Scenario) -> str:
    """Canonical text; parsing it gives back an equal scenario."""
    out = [f"space {s.space}", f"net {s.net_text}", f"conv {s.conv}", f"mode {s.mode}"]
    if s.x is not None:
        out.append(f"x {_value_text(s.x)}")
    if s.r is not None:
        out.append(f"r {_value_text(s.r)}")
    if s.witness_text is not None:
        out.append(f"witness net {s.witness_text}")
    out.extend(f"param {k} {v}" for k, v in s.params)
    if s.expect is not None:
        out.append(f"expect {s.expect}")
    return "\n".join(out) + "\n"


def _value_text(e: Element) -> str:
    if isinstance(e, LexVec):
        return f"({format_rational(e.first)}, {format_rational(e.second)})"
    return str(e)


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Report:
    verdict: str
    details: tuple = ()

    def lines(self) -> list[str]:
        return [self.verdict, *self.details]


def _cert(s: Scenario, c: ConvergenceStructure) -> RcCertificate:
    w = s.witness
    if w is None:
        if s.space.kind != "qvec" or c.name != "order":
            raise ScenarioError("a witness net is required here", None, "witness")
        from .rough import canonical_certificate

        return canonical_certificate(s.net, s.x, s.r)
    evidence = w if c.name == "order" else None
    return RcCertificate(w, evidence, s.r, s.x, c)


def run_scenario(s: Scenario) -> Report:
    c = convergence(s.conv, s.space)
    base = s.mode.split(":", 1)[0]
    details: list[str] = []
    if base == "verify":
        formula = s.param("formula")
        if formula is not None:
            f = parse_rf(formula)
            check = pwlin_norm_conv_check(s.net, s.x, f, s.net.horizon)
            details.append(f"norm distance {formula}: {check}")
            lim = rf_limit(f)
            conv_word = "converges" if norm_converges(f) else "does not converge"
            details.append(f"norm distance tends to {format_rational(lim)}: net {conv_word} in norm")
            if not check:
                return Report(f"reject: norm formula fails at n={check.index}", tuple(details))
        if s.r is None:
            return Report(str(conv_verify(c, s.net, s.x, s.witness)), tuple(details))
        return Report(str(verify_rc(s.net, _cert(s, c))), tuple(details))
    if base == "decide":
        if c.name != "order":
            raise ScenarioError("decide mode needs order convergence", None, "conv")
        return Report("true" if decide_rc(s.net, s.x, s.r) else "false")
    if base == "limitset":
        ls = limit_set(s.net, s.r)
        return Report(_compact(ls), (f"basis: {ls.basis}",))
    if base == "oracle":
        from .oracle import Inconclusive, brute_membership

        horizon = int(s.param("horizon", "100"))
        v = brute_membership(s.net, s.x, s.r, horizon)
        return Report("inconclusive" if v is Inconclusive else ("true" if v else "false"))
    return _run_transform(s, c)


def _run_transform(s: Scenario, c: ConvergenceStructure) -> Report:
    name = s.mode.partition(":")[2]
    if name == "from-c":
        cert = cert_from_c(s.net, s.x, s.r, c, s.witness)
        return Report(str(verify_rc(s.net, cert)), (f"witness |x_n - {_compact(s.x)}|",))
    cert = _cert(s, c)
    base = verify_rc(s.net, cert)
    details = [f"input certificate: {base}"]
    if not base:
        return Report(f"reject: input certificate fails ({base})", tuple(details))
    if name == "abs":
        net, new = net_abs(s.net), cert_abs(cert)
    elif name == "pos":
        net, new = net_pos(s.net), cert_pos(cert)
    elif name == "neg":
        net, new = net_neg_part(s.net), cert_neg(cert)
    elif name in ("join-const", "meet-const"):
        y_text = s.param("y")
        if y_text is None:
            raise ScenarioError("needs 'param y <element>'", None, "param")
        y = parse_value(y_text, s.space)
        if name == "join-const":
            net, new = net_join(s.net, y), cert_join_const(cert, y)
        else:
            net, new = net_meet(s.net, y), cert_meet_const(cert, y)
    else:
        stride, offset = int(s.param("stride", "2")), int(s.param("offset", "0"))
        net, new = subseq_arith(s.net, stride, offset), cert_subnet(cert, stride, offset)
    details.append(f"new target {_compact(new.target)} roughness {_compact(new.roughness)}")
    return Report(str(verify_rc(net, new)), tuple(details))


def check_text(text: str, name: str = "", out=sys.stdout) -> int:
    try:
        s = parse_scenario(text, name)
    except ScenarioError as exc:
        print(f"{name or 'scenario'}: error: {exc}", file=out)
        return EXIT_ERROR
    try:
        report = run_scenario(s)
    except RieszError as exc:
        print(f"{name or 'scenario'}: error: {type(exc).__name__}: {exc}", file=out)
        return EXIT_ERROR
    for line in report.lines():
        print(line, file=out)
    if s.expect is not None and report.verdict != s.expect:
        print(f"{name or 'scenario'}: MISMATCH expected {s.expect!r}", file=out)
        return EXIT_MISMATCH
    return EXIT_OK


# ---------------------------------------------------------------------------
# Bundled scenarios
# ---------------------------------------------------------------------------


def bundled_scenarios() -> list[tuple[str, str]]:
    """``(name, text)`` for every scenario shipped with the package."""
    root = resources.files("roughlattice") / "scenarios"
    items = sorted((p.name, p.read_text(encoding="utf-8")) for p in root.iterdir() if p.name.endswith(".scn"))
    return items


def _description(text: str) -> str:
    for line in text.splitlines():
        if line.startswith("#"):
            return line.lstrip("# ").strip()
    return ""


def reproduce(items, out=sys.stdout) -> int:
    failures = []
    worst = EXIT_OK
    for name, text in items:
        print(f"== {name}: {_description(text)}", file=out)
        code = check_text(text, name, out)
        if code != EXIT_OK:
            failures.append(name)
            worst = max(worst, code)
    if failures:
        print(f"FAILED: {', '.join(failures)}", file=out)
    else:
        print(f"all {len(items)} scenarios reproduced", file=out)
    return worst


def _dir_items(directory: Path) -> list[tuple[str, str]]:
    return sorted((p.name, p.read_text(encoding="utf-8")) for p in directory.glob("*.scn"))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="roughlattice", description="Exact rough convergence checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_check = sub.add_parser("check", help="run one scenario file")
    p_check.add_argument("file", type=Path)
    p_batch = sub.add_parser("batch", help="run every *.scn file in a directory")
    p_batch.add_argument("directory", type=Path)
    p_repro = sub.add_parser("reproduce-paper", help="run the bundled example scenarios")
    p_repro.add_argument("--list", action="store_true", help="list bundled scenarios without running")
    p_repro.add_argument("--scenarios", type=Path, help="use this directory instead of the bundled set")
    args = parser.parse_args(argv)

    if args.command == "check":
        try:
            text = args.file.read_text(encoding="utf-8")
        except OSError as exc:
            print(f"error: {exc}")
            return EXIT_ERROR
        return check_text(text, args.file.name)
    if args.command == "batch":
        if not args.directory.is_dir():
            print(f"error: {args.directory} is not a directory")
            return EXIT_ERROR
        return reproduce(_dir_items(args.directory))
    items = _dir_items(args.scenarios) if args.scenarios else bundled_scenarios()
    if args.list:
        for name, text in items:
            print(f"{name}: {_description(text)}")
        return EXIT_OK
    return reproduce(items)


if __name__ == "__main__":
    sys.exit(main())
