"""Box tensor product, cancellation and isomorphism testing of DA bimodules."""
from __future__ import annotations

from collections import defaultdict
from typing import Dict, List, Optional, Tuple

from .bimodule import Action, DABimodule, Generator
from .errors import AlgebraMismatch, MCGFloerError


def pair_name(x: str, y: str) -> str:
    return "%s.%s" % (x, y)


def box_tensor(m: DABimodule, n: DABimodule, name: str = "") -> DABimodule:
    """The box tensor product ``m ⊠ n`` of m over (A, B) and n over (B, C).

    Each action of m with k inputs b1..bk is matched against every chain of k
    actions of n whose outputs are exactly b1..bk (blocks of n-inputs may be
    empty), and each action of n with a unit output is carried through
    unchanged on the m side.  Since every chain step consumes one of the k
    required outputs, chains are finite and the product is always defined.
    """
    if m.right_algebra is not n.left_algebra:
        raise AlgebraMismatch("cannot tensor: right algebra %s of %s vs left algebra %s of %s"
                              % (m.right_algebra.name, m.name, n.left_algebra.name, n.name))
    gens: Dict[Tuple[str, str], Generator] = {}
    names = set()
    by_left = defaultdict(list)
    for y in n.generators.values():
        by_left[y.left.index].append(y)
    for x in m.generators.values():
        for y in by_left[x.right.index]:
            gname = pair_name(x.name, y.name)
            if gname in names:
                raise MCGFloerError("generator name collision %r in tensor product" % gname)
            names.add(gname)
            grade = None if x.grade is None or y.grade is None else (x.grade + y.grade) % 2
            gens[(x.name, y.name)] = Generator(gname, x.left, y.right, grade)

    # n-actions indexed by (source, output) for chain search
    n_by = defaultdict(list)
    unit_out = defaultdict(list)
    for a in n.sorted_actions:
        if a.output.is_idempotent:
            unit_out[a.source].append(a)
        else:
            n_by[(a.source, a.output.index)].append(a)

    chain_cache: Dict[tuple, List[Tuple[tuple, str]]] = {}

    def chains(y: str, outs: tuple) -> List[Tuple[tuple, str]]:
        key = (y, outs)
        hit = chain_cache.get(key)
        if hit is not None:
            return hit
        if not outs:
            res = [((), y)]
        else:
            res = []
            for a in n_by.get((y, outs[0].index), ()):
                for rest, end in chains(a.target, outs[1:]):
                    res.append((a.inputs + rest, end))
        chain_cache[key] = res
        return res

    acts: List[Action] = []
    for (xn, yn), g in gens.items():
        for a in m.actions_from.get(xn, ()):
            for ins, yend in chains(yn, a.inputs):
                tgt = gens.get((a.target, yend))
                if tgt is None:
                    continue
                acts.append(Action(g.name, ins, a.output, tgt.name))
        x = m.generators[xn]
        for a in unit_out.get(yn, ()):
            acts.append(Action(g.name, a.inputs, x.left, gens[(xn, a.target)].name))
    return DABimodule(m.left_algebra, n.right_algebra, gens.values(), acts,
                      name=name or "(%s*%s)" % (m.name, n.name), validate=False)


def _cancellable(m_out, x: str, removed) -> Optional[Tuple[Action, str]]:
    """Smallest target y with a unique input-less unit arrow x -> y and no other x -> y arrow."""
    per_target: Dict[str, List[Action]] = defaultdict(list)
    for a in m_out[x]:
        per_target[a.target].append(a)
    for y in sorted(per_target):
        if y == x or y in removed:
            continue
        arrows = per_target[y]
        if len(arrows) == 1 and not arrows[0].inputs and arrows[0].output.is_idempotent:
            return arrows[0], y
    return None


def reduce(m: DABimodule, order: str = "lex") -> DABimodule:
    """Cancel input-less unit arrows until none remain.

    Generators are scanned in lexicographic name order (``order="revlex"``
    scans in reverse, for robustness checks); the first cancellable arrow
    ``x -> y`` found is removed together with x and y and the zig-zag
    actions ``w -> z`` are added.  Scans repeat until a full pass changes
    nothing.
    """
    if order not in ("lex", "revlex"):
        raise ValueError("order must be 'lex' or 'revlex'")
    table = m.left_algebra.table
    out: Dict[str, set] = {g: set() for g in m.generators}
    inn: Dict[str, set] = {g: set() for g in m.generators}
    for a in m.actions:
        out[a.source].add(a)
        inn[a.target].add(a)

    def toggle(a: Action) -> None:
        if a in out[a.source]:
            out[a.source].discard(a)
            inn[a.target].discard(a)
        else:
            out[a.source].add(a)
            inn[a.target].add(a)

    alive = dict(m.generators)
    removed: set = set()
    changed = True
    while changed:
        changed = False
        for x in sorted(alive, reverse=(order == "revlex")):
            if x in removed:
                continue
            found = _cancellable(out, x, removed)
            if found is None:
                continue
            _, y = found
            into_y = [a for a in inn[y] if a.source not in (x, y)]
            from_x = [a for a in out[x] if a.target not in (x, y)]
            new = []
            for a in into_y:
                for b in from_x:
                    p = table[a.output.index][b.output.index]
                    if p is not None:
                        new.append(Action(a.source, a.inputs + b.inputs, p, b.target))
            for g in (x, y):
                for a in list(out[g]) + list(inn[g]):
                    if a in out[a.source]:
                        toggle(a)
            for a in new:
                toggle(a)
            removed.update((x, y))
            del alive[x], alive[y]
            del out[x], out[y], inn[x], inn[y]
            changed = True
    acts = [a for g in alive for a in out[g]]
    if not removed:
        return m
    return DABimodule(m.left_algebra, m.right_algebra, alive.values(), acts, name=m.name,
                      validate=False, mod2=False)


# isomorphism

def _signature_tables(m: DABimodule):
    pair_acts: Dict[Tuple[str, str], frozenset] = defaultdict(set)
    for a in m.actions:
        pair_acts[(a.source, a.target)].add((tuple(c.index for c in a.inputs), a.output.index))
    return {k: frozenset(v) for k, v in pair_acts.items()}


def _refine(ms: List[DABimodule], use_grades: bool) -> List[Dict[str, int]]:
    colors = []
    for m in ms:
        col = {}
        for g in m.generators.values():
            col[g.name] = (g.left.index, g.right.index, g.grade if use_grades else None)
        colors.append(col)
    while True:
        sigs = []
        for m, col in zip(ms, colors):
            out = defaultdict(list)
            inn = defaultdict(list)
            for a in m.actions:
                lab = (tuple(c.index for c in a.inputs), a.output.index)
                out[a.source].append((lab, col[a.target]))
                inn[a.target].append((lab, col[a.source]))
            sigs.append({g: (col[g], tuple(sorted(out[g])), tuple(sorted(inn[g]))) for g in m.generators})
        palette = {s: i for i, s in enumerate(sorted({s for sg in sigs for s in sg.values()}, key=repr))}
        new = [{g: palette[s] for g, s in sg.items()} for sg in sigs]
        n_old = len({c for col in colors for c in col.values()})
        n_new = len(palette)
        colors = new
        if n_new == n_old:
            return colors


def is_isomorphic(m: DABimodule, n: DABimodule) -> Optional[Dict[str, str]]:
    """A generator bijection carrying the actions of m exactly onto those of n, or None."""
    if m.left_algebra is not n.left_algebra or m.right_algebra is not n.right_algebra:
        raise AlgebraMismatch("bimodules live over different algebras")
    if len(m.generators) != len(n.generators) or len(m.actions) != len(n.actions):
        return None
    use_grades = m.is_graded and n.is_graded
    cm, cn = _refine([m, n], use_grades)
    hist = lambda c: sorted(c.values())
    if hist(cm) != hist(cn):
        return None
    pm, pn = _signature_tables(m), _signature_tables(n)
    empty = frozenset()
    classes = defaultdict(list)
    for g, c in cn.items():
        classes[c].append(g)
    order = sorted(m.generators, key=lambda g: (len(classes[cm[g]]), cm[g], g))
    fwd: Dict[str, str] = {}
    used: set = set()

    def consistent(x: str, xi: str) -> bool:
        if pm.get((x, x), empty) != pn.get((xi, xi), empty):
            return False
        for u, ui in fwd.items():
            if pm.get((x, u), empty) != pn.get((xi, ui), empty):
                return False
            if pm.get((u, x), empty) != pn.get((ui, xi), empty):
                return False
        return True

    def search(i: int) -> bool:
        if i == len(order):
            return True
        x = order[i]
        for xi in classes[cm[x]]:
            if xi in used or not consistent(x, xi):
                continue
            fwd[x] = xi
            used.add(xi)
            if search(i + 1):
                return True
            del fwd[x]
            used.discard(xi)
        return False

    import sys
    limit = sys.getrecursionlimit()
    if len(order) + 100 > limit:
        sys.setrecursionlimit(len(order) + 1000)
    try:
        return dict(fwd) if search(0) else None
    finally:
        sys.setrecursionlimit(limit)
