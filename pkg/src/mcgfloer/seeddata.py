"""Line-oriented text format for circles and DA bimodules, and the shipped corpus.

Grammar::

    circle <name> points <n> pairs (a,b)(c,d)...
    bimodule <name> left <circle> right <circle>
    gen <gname> <left-idem> <right-idem> [grade <0|1>]
    act <gname> | <in1>, <in2>, ... -> <out> | <gname>

Element tokens are ``i<k>``, ``r<digits>`` (shorthand: r23 is the chord
[1,3]), ``[a,b]``, ``|(a,b)|`` for the idempotent of a pair and ``|(a->b)|``
for a chord.  An output of ``1`` means the unit, i.e. the left idempotent of
the source.  ``#`` starts a comment.
"""
from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources
from typing import Dict, List, Optional

from .algebra import CircleRegistry, build_circle, z1, z2
from .bimodule import (Action, DABimodule, Generator, GradingAssignment, check_relations,
                       make_identity, solve_gradings)
from .errors import IdempotentMismatch, SeedSyntaxError, UnknownElement, UnknownName

SEED_PACKAGE = "mcgfloer.seeds"
STANDARD_CIRCLES = ("Z1", "Z2")


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def _parse_circle_line(body: str, lineno: int):
    m = re.fullmatch(r"circle\s+(\S+)\s+points\s+(\d+)\s+pairs\s+(.*)", body)
    if not m:
        raise SeedSyntaxError("expected 'circle <name> points <n> pairs (a,b)...'", lineno, 1)
    pairs = re.findall(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)", m[3])
    rest = re.sub(r"\(\s*\d+\s*,\s*\d+\s*\)", "", m[3]).strip()
    if rest or not pairs:
        raise SeedSyntaxError("malformed pair list %r" % m[3], lineno, body.find(m[3]) + 1)
    return build_circle(int(m[2]), [(int(a), int(b)) for a, b in pairs], m[1])


def read_circles(text: str, registry: CircleRegistry) -> None:
    """Register every ``circle`` line of ``text``."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = _strip_comment(raw).strip()
        if body.startswith("circle"):
            registry.add(_parse_circle_line(body, lineno))


def parse_bimodule(text: str, registry: Optional[CircleRegistry] = None) -> DABimodule:
    """Parse one bimodule; ``circle`` lines are registered first."""
    registry = registry if registry is not None else default_registry()
    header = None
    gens: List[Generator] = []
    raw_acts = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = _strip_comment(raw).strip().rstrip(",.").strip()
        if not body:
            continue
        word = body.split()[0]
        if word == "circle":
            registry.add(_parse_circle_line(body, lineno))
        elif word == "bimodule":
            if header is not None:
                raise SeedSyntaxError("second 'bimodule' header in one document", lineno, 1)
            m = re.fullmatch(r"bimodule\s+(\S+)\s+left\s+(\S+)\s+right\s+(\S+)", body)
            if not m:
                raise SeedSyntaxError("expected 'bimodule <name> left <circle> right <circle>'", lineno, 1)
            try:
                header = (m[1], registry.get(m[2]), registry.get(m[3]))
            except UnknownElement as e:
                raise UnknownElement(str(e), lineno) from None
        elif word == "gen":
            if header is None:
                raise SeedSyntaxError("'gen' before 'bimodule' header", lineno, 1)
            m = re.fullmatch(r"gen\s+(\S+)\s+(\S+)\s+(\S+)(?:\s+grade\s+([01]))?", body)
            if not m:
                raise SeedSyntaxError("expected 'gen <name> <left-idem> <right-idem> [grade 0|1]'", lineno, 1)
            left = _element(header[1], m[2], lineno, body)
            right = _element(header[2], m[3], lineno, body)
            if not (left.is_idempotent and right.is_idempotent):
                raise IdempotentMismatch("line %d: generator idempotents must be idempotents: %s" % (lineno, body))
            gens.append(Generator(m[1], left, right, None if m[4] is None else int(m[4])))
        elif word == "act":
            if header is None:
                raise SeedSyntaxError("'act' before 'bimodule' header", lineno, 1)
            raw_acts.append((lineno, body))
        else:
            raise SeedSyntaxError("unknown directive %r" % word, lineno, 1)
    if header is None:
        raise SeedSyntaxError("missing 'bimodule' header", None)
    name, left_c, right_c = header
    by_name: Dict[str, Generator] = {}
    for g in gens:
        if g.name in by_name:
            raise SeedSyntaxError("duplicate generator %r" % g.name)
        by_name[g.name] = g
    shell = DABimodule(left_c, right_c, gens, (), name=name)
    acts = []
    for lineno, body in raw_acts:
        m = re.fullmatch(r"act\s+(\S+)\s*\|(.*)->(.*)\|\s*(\S+)", body)
        if not m:
            raise SeedSyntaxError("expected 'act <gen> | <inputs> -> <output> | <gen>'", lineno, 1)
        src, tgt = m[1], m[4]
        for g in (src, tgt):
            if g not in by_name:
                raise UnknownElement("unknown generator %r" % g, lineno, body.find(g) + 1)
        ins_text = m[2].strip()
        inputs = tuple(_element(right_c, t, lineno, body) for t in _split_inputs(ins_text))
        out_tok = m[3].strip()
        out = by_name[src].left if out_tok == "1" else _element(left_c, out_tok, lineno, body)
        a = Action(src, inputs, out, tgt)
        try:
            shell.check_action(a)
        except IdempotentMismatch as e:
            raise IdempotentMismatch("line %d: %s" % (lineno, e)) from None
        acts.append(a)
    return DABimodule(left_c, right_c, gens, acts, name=name, validate=False)


def _split_inputs(text: str) -> List[str]:
    # commas inside [a,b] or |(a,b)| do not separate inputs
    toks, depth, cur = [], 0, ""
    for ch in text:
        depth += ch in "[("
        depth -= ch in "])"
        if ch == "," and depth == 0:
            toks.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip() or toks:
        toks.append(cur.strip())
    if any(not t for t in toks):
        raise SeedSyntaxError("empty entry in input list %r" % text)
    return toks


def _element(circle, tok, lineno, body):
    tok = tok.strip()
    try:
        return circle.parse_element(tok)
    except UnknownElement as e:
        raise UnknownElement(str(e), lineno, body.find(tok) + 1) from None


def serialize_bimodule(m: DABimodule) -> str:
    """Canonical text: circle lines for non-standard circles, then header, gens, actions."""
    lines = []
    for c in dict.fromkeys([m.left_algebra, m.right_algebra]):
        if c.name not in STANDARD_CIRCLES:
            lines.append(c.describe())
    lines.append("bimodule %s left %s right %s" % (m.name or "unnamed", m.left_algebra.name, m.right_algebra.name))
    for g in m.generators.values():
        s = "gen %s %s %s" % (g.name, g.left.token(), g.right.token())
        if g.grade is not None:
            s += " grade %d" % g.grade
        lines.append(s)
    for a in m.sorted_actions:
        lines.append("act %s | %s -> %s | %s" % (
            a.source, ", ".join(c.token() for c in a.inputs), a.output.token(), a.target))
    return "\n".join(lines) + "\n"


# corpus

CORPUS_NAMES = (
    "N_tauA", "N_tauA_inv", "N_tauB", "N_tauB_inv", "N_tauC", "N_tauC_inv",
    "N_tauD", "N_tauD_inv", "N_tauE", "N_tauE_inv",
    "N_eta", "N_mu1", "N_mu2", "N_mu3", "N_mu4", "N_eta_inv",
    "I_bounded",
)
GENERATED_NAMES = ("I",)


def _seed_text(fname: str) -> str:
    return resources.files(SEED_PACKAGE).joinpath(fname).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def default_registry() -> CircleRegistry:
    reg = CircleRegistry([z1(), z2()])
    read_circles(_seed_text("circles.seed"), reg)
    return reg


def seed_text(name: str) -> str:
    if name not in CORPUS_NAMES:
        raise UnknownName("unknown seed %r; available: %s" % (name, ", ".join(CORPUS_NAMES + GENERATED_NAMES)))
    return _seed_text(name + ".seed")


@lru_cache(maxsize=None)
def builtin(name: str) -> DABimodule:
    """A named bimodule of the shipped corpus (``I`` is the generated identity over Z2)."""
    if name == "I":
        return make_identity(z2()).renamed("I")
    return parse_bimodule(seed_text(name), default_registry())


def available() -> List[str]:
    return list(CORPUS_NAMES + GENERATED_NAMES)


def verify_corpus() -> Dict[str, List[str]]:
    """Run the structure-equation check on every corpus bimodule; map name -> violations."""
    return {name: check_relations(builtin(name)).describe() for name in available()}


@lru_cache(maxsize=None)
def corpus_grading() -> GradingAssignment:
    """One mod-2 grading solved simultaneously for the whole corpus, identity pinned to 0."""
    ms = [builtin(n) for n in CORPUS_NAMES]
    return solve_gradings(ms, normalization=[builtin("I")])


@lru_cache(maxsize=None)
def graded_builtin(name: str) -> DABimodule:
    return corpus_grading().apply(builtin(name))
