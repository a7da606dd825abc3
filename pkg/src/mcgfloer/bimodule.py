"""Type DA bimodules over B(Z), their structure equations, and mod-2 gradings.

An action ``x ⊗ (a1, ..., an) -> b ⊗ y`` is stored as an :class:`Action`
record.  A bimodule holds a *set* of actions: coefficients live in F2, so
inserting an action twice removes it (see :func:`f2_collect`).
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .algebra import AlgebraElement, PointedMatchedCircle
from .errors import ArityTooSmall, IdempotentMismatch, Inconsistent, MCGFloerError


class Generator(NamedTuple):
    name: str
    left: AlgebraElement
    right: AlgebraElement
    grade: Optional[int] = None


class Action(NamedTuple):
    source: str
    inputs: Tuple[AlgebraElement, ...]
    output: AlgebraElement
    target: str

    def sort_key(self):
        return (self.source, tuple(a.index for a in self.inputs), self.output.index, self.target)

    def describe(self) -> str:
        ins = ", ".join(a.token() for a in self.inputs)
        return "%s ⊗ (%s) -> %s ⊗ %s" % (self.source, ins, self.output.token(), self.target)


def f2_collect(actions: Iterable[Action]) -> frozenset:
    """Reduce a list of actions with multiplicity to its mod-2 support."""
    counts = Counter(actions)
    return frozenset(a for a, c in counts.items() if c % 2)


class DABimodule:
    """A finite type DA bimodule with F2 coefficients."""

    def __init__(self, left_algebra: PointedMatchedCircle, right_algebra: PointedMatchedCircle,
                 generators: Iterable[Generator], actions: Iterable[Action] = (),
                 name: str = "", validate: bool = True, mod2: bool = True):
        self.left_algebra = left_algebra
        self.right_algebra = right_algebra
        self.name = name
        gens: Dict[str, Generator] = {}
        for g in generators:
            if g.name in gens:
                raise MCGFloerError("duplicate generator name %r" % g.name)
            gens[g.name] = g
        self.generators: Dict[str, Generator] = {k: gens[k] for k in sorted(gens)}
        self.actions: frozenset = f2_collect(actions) if mod2 else frozenset(actions)
        if validate:
            for g in self.generators.values():
                self._check_generator(g)
            for a in self.actions:
                self.check_action(a)

    def _check_generator(self, g: Generator) -> None:
        if not (g.left.is_idempotent and g.left.circle is self.left_algebra):
            raise IdempotentMismatch("generator %s: left idempotent %r is not an idempotent of %s"
                                     % (g.name, g.left, self.left_algebra.name))
        if not (g.right.is_idempotent and g.right.circle is self.right_algebra):
            raise IdempotentMismatch("generator %s: right idempotent %r is not an idempotent of %s"
                                     % (g.name, g.right, self.right_algebra.name))

    def check_action(self, a: Action) -> None:
        """Raise IdempotentMismatch unless ``a`` satisfies the action invariants."""
        try:
            x = self.generators[a.source]
            y = self.generators[a.target]
        except KeyError as e:
            raise IdempotentMismatch("action %s uses unknown generator %s" % (a.describe(), e)) from None
        cur = x.right
        for c in a.inputs:
            if c.circle is not self.right_algebra or c.is_idempotent:
                raise IdempotentMismatch("action %s: input %r is not a chord of %s"
                                         % (a.describe(), c, self.right_algebra.name))
            if c.left is not cur:
                raise IdempotentMismatch("action %s: input %s does not start at %s"
                                         % (a.describe(), c.token(), cur.token()))
            cur = c.right
        if cur is not y.right:
            raise IdempotentMismatch("action %s: inputs end at %s but target has right idempotent %s"
                                     % (a.describe(), cur.token(), y.right.token()))
        b = a.output
        if b.circle is not self.left_algebra:
            raise IdempotentMismatch("action %s: output is not in %s" % (a.describe(), self.left_algebra.name))
        if b.left is not x.left or b.right is not y.left:
            raise IdempotentMismatch("action %s: output %s does not run from %s to %s"
                                     % (a.describe(), b.token(), x.left.token(), y.left.token()))

    # derived views

    @cached_property
    def actions_from(self) -> Dict[str, List[Action]]:
        d: Dict[str, List[Action]] = defaultdict(list)
        for a in self.sorted_actions:
            d[a.source].append(a)
        return dict(d)

    @cached_property
    def actions_to(self) -> Dict[str, List[Action]]:
        d: Dict[str, List[Action]] = defaultdict(list)
        for a in self.sorted_actions:
            d[a.target].append(a)
        return dict(d)

    @cached_property
    def sorted_actions(self) -> List[Action]:
        return sorted(self.actions, key=Action.sort_key)

    @property
    def max_arity(self) -> int:
        return max((len(a.inputs) for a in self.actions), default=0)

    @property
    def is_graded(self) -> bool:
        return bool(self.generators) and all(g.grade is not None for g in self.generators.values())

    def __len__(self) -> int:
        return len(self.generators)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DABimodule):
            return NotImplemented
        return (self.left_algebra is other.left_algebra and self.right_algebra is other.right_algebra
                and self.generators == other.generators and self.actions == other.actions)

    def __hash__(self):
        return hash((len(self.generators), len(self.actions)))

    def __repr__(self) -> str:
        return "DABimodule(%s: %s -> %s, %d generators, %d actions)" % (
            self.name or "?", self.left_algebra.name, self.right_algebra.name,
            len(self.generators), len(self.actions))

    def renamed(self, name: str) -> "DABimodule":
        return DABimodule(self.left_algebra, self.right_algebra, self.generators.values(),
                          self.actions, name=name, validate=False, mod2=False)

    def without_actions(self, drop: Iterable[Action]) -> "DABimodule":
        drop = set(drop)
        return DABimodule(self.left_algebra, self.right_algebra, self.generators.values(),
                          [a for a in self.actions if a not in drop], name=self.name,
                          validate=False, mod2=False)

    def ungraded(self) -> "DABimodule":
        gens = [g._replace(grade=None) for g in self.generators.values()]
        return DABimodule(self.left_algebra, self.right_algebra, gens, self.actions,
                          name=self.name, validate=False, mod2=False)


def make_identity(algebra: PointedMatchedCircle) -> DABimodule:
    """The identity bimodule: one generator per idempotent, one action per chord."""
    gens = [Generator(e.token(), e, e, 0) for e in algebra.idempotents]
    acts = [Action(a.left.token(), (a,), a, a.right.token()) for a in algebra.chords]
    return DABimodule(algebra, algebra, gens, acts, name="I_" + algebra.name)


# structure equations

@dataclass
class RelationReport:
    violations: List[Tuple[str, Tuple[AlgebraElement, ...], AlgebraElement, str]] = field(default_factory=list)
    terms_checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations

    def describe(self) -> List[str]:
        return ["%s ⊗ (%s) -> %s ⊗ %s" % (x, ", ".join(a.token() for a in seq), b.token(), y)
                for x, seq, b, y in self.violations]


def check_relations(m: DABimodule, max_len: Optional[int] = None) -> RelationReport:
    """Check the DA structure equations of ``m`` mod 2.

    Every term of the equations is generated directly: composites of two
    actions whose outputs multiply to a nonzero element, and single actions
    with one input chord split as a product of two chords.  A key
    ``(x, inputs, output, y)`` with an odd number of terms is a violation.
    Only keys with at most ``max_len`` inputs are considered.
    """
    need = 2 * m.max_arity
    if max_len is None:
        max_len = need
    if max_len < need:
        raise ArityTooSmall("max_len=%d is below twice the maximal arity (%d)" % (max_len, need))
    table = m.left_algebra.table
    counts: Counter = Counter()
    frm = m.actions_from
    for a1 in m.sorted_actions:
        for a2 in frm.get(a1.target, ()):
            prod = table[a1.output.index][a2.output.index]
            if prod is None:
                continue
            seq = a1.inputs + a2.inputs
            if len(seq) <= max_len:
                counts[(a1.source, seq, prod, a2.target)] += 1
    rc = m.right_algebra
    for a in m.sorted_actions:
        ins = a.inputs
        if len(ins) + 1 > max_len:
            continue
        for j, c in enumerate(ins):
            for t in range(c.start + 1, c.end):
                p, q = rc.chord(c.start, t), rc.chord(t, c.end)
                counts[(a.source, ins[:j] + (p, q) + ins[j + 1:], a.output, a.target)] += 1
    bad = [k for k, v in counts.items() if v % 2]
    bad.sort(key=lambda k: (k[0], tuple(e.index for e in k[1]), k[2].index, k[3]))
    return RelationReport(bad, len(counts))


# boundedness

@dataclass
class BoundedReport:
    bounded: bool
    order: List[str] = field(default_factory=list)
    cycle: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.bounded


def is_bounded(m: DABimodule) -> BoundedReport:
    """Acyclicity of the action graph; certificate is a topological order or a cycle."""
    succ: Dict[str, List[str]] = {g: [] for g in m.generators}
    for a in m.sorted_actions:
        succ[a.source].append(a.target)
    state: Dict[str, int] = {}
    order: List[str] = []
    for root in m.generators:
        if root in state:
            continue
        stack = [(root, iter(succ[root]))]
        path = [root]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                path.pop()
                state[node] = 2
                order.append(node)
                continue
            s = state.get(nxt)
            if s == 1:
                cyc = path[path.index(nxt):] + [nxt]
                return BoundedReport(False, cycle=cyc)
            if s is None:
                state[nxt] = 1
                stack.append((nxt, iter(succ[nxt])))
                path.append(nxt)
    order.reverse()
    return BoundedReport(True, order=order)


# gradings

@dataclass
class GradingAssignment:
    """Mod-2 grades for generators and chords.

    ``chord_grades`` maps a circle name to the grades of its short chords
    ``(t, t+1)``; a chord's grade is the sum over the short chords it covers.
    ``generator_grades`` maps a bimodule name to its generator grades.
    """
    generator_grades: Dict[str, Dict[str, int]]
    chord_grades: Dict[str, Tuple[int, ...]]

    def chord_grade(self, e: AlgebraElement) -> int:
        if e.is_idempotent:
            return 0
        shorts = self.chord_grades.get(e.circle.name)
        if shorts is None:
            return 0
        return sum(shorts[e.start:e.end]) % 2

    def apply(self, m: DABimodule) -> DABimodule:
        grades = self.generator_grades[m.name]
        gens = [g._replace(grade=grades[g.name]) for g in m.generators.values()]
        return DABimodule(m.left_algebra, m.right_algebra, gens, m.actions, name=m.name,
                          validate=False, mod2=False)

    def action_defect(self, m: DABimodule, a: Action) -> int:
        """0 when ``a`` satisfies the degree rule under these grades."""
        g = self.generator_grades[m.name]
        lhs = self.chord_grade(a.output) + g[a.target]
        rhs = g[a.source] + sum(self.chord_grade(c) for c in a.inputs) + len(a.inputs) - 1
        return (lhs - rhs) % 2


def action_grade_defect(m: DABimodule, a: Action, chord_grade) -> int:
    """Degree-rule defect of an action in a graded bimodule."""
    g = m.generators
    lhs = chord_grade(a.output) + g[a.target].grade
    rhs = g[a.source].grade + sum(chord_grade(c) for c in a.inputs) + len(a.inputs) - 1
    return (lhs - rhs) % 2


def solve_gradings(ms: Sequence[DABimodule],
                   normalization: Sequence[DABimodule] = ()) -> GradingAssignment:
    """Solve the mod-2 grading system for several bimodules at once.

    Unknowns are the grades of the short chords of every circle involved
    (shared between bimodules) followed by the generator grades, bimodule by
    bimodule in the given order and generators by name.  Each action gives one
    equation from the degree rule; each generator of a normalization bimodule
    is pinned to 0.  Gaussian elimination picks the lowest-numbered remaining
    unknown as pivot; free unknowns are set to 0.  An inconsistent system
    raises :class:`Inconsistent` with the list of equations that sum to 0 = 1.
    """
    ms = list(ms) + [n for n in normalization if all(n is not m for m in ms)]
    names = [m.name for m in ms]
    if len(set(names)) != len(names):
        raise MCGFloerError("bimodules passed to solve_gradings need distinct names")
    circles: Dict[str, PointedMatchedCircle] = {}
    for m in ms:
        for c in (m.left_algebra, m.right_algebra):
            circles.setdefault(c.name, c)
    var: Dict[tuple, int] = {}
    for cname in sorted(circles):
        for t in range(circles[cname].num_points - 1):
            var[("chord", cname, t)] = len(var)
    for m in ms:
        for g in m.generators:
            var[("gen", m.name, g)] = len(var)

    def chord_mask(e: AlgebraElement) -> int:
        mask = 0
        if e.is_chord:
            for t in range(e.start, e.end):
                mask ^= 1 << var[("chord", e.circle.name, t)]
        return mask

    rows: List[Tuple[int, int]] = []
    labels: List[str] = []
    for m in ms:
        for a in m.sorted_actions:
            mask = chord_mask(a.output) ^ (1 << var[("gen", m.name, a.target)])
            mask ^= 1 << var[("gen", m.name, a.source)]
            for c in a.inputs:
                mask ^= chord_mask(c)
            rows.append((mask, (len(a.inputs) - 1) % 2))
            labels.append("%s: %s" % (m.name, a.describe()))
    for n in normalization:
        for g in n.generators:
            rows.append((1 << var[("gen", n.name, g)], 0))
            labels.append("%s: normalize gr(%s)=0" % (n.name, g))

    pivots: Dict[int, Tuple[int, int, int]] = {}  # pivot bit -> (mask, rhs, provenance)
    for i, (mask, rhs) in enumerate(rows):
        prov = 1 << i
        while mask:
            low = mask & -mask
            if low not in pivots:
                pivots[low] = (mask, rhs, prov)
                break
            pm, pr, pp = pivots[low]
            mask ^= pm
            rhs ^= pr
            prov ^= pp
        else:
            if rhs:
                witness = [labels[j] for j in range(len(rows)) if prov >> j & 1]
                raise Inconsistent("grading system is inconsistent (%d equations involved)" % len(witness),
                                   witness)
    # back substitution from the highest pivot down; free unknowns are 0
    value = 0
    for low in sorted(pivots, reverse=True):
        mask, rhs, _ = pivots[low]
        rest = mask ^ low
        bit = rhs ^ (bin(rest & value).count("1") & 1)
        if bit:
            value |= low
    get = lambda k: value >> var[k] & 1
    chord_grades = {c: tuple(get(("chord", c, t)) for t in range(circles[c].num_points - 1))
                    for c in sorted(circles)}
    gen_grades = {m.name: {g: get(("gen", m.name, g)) for g in m.generators} for m in ms}
    return GradingAssignment(gen_grades, chord_grades)
