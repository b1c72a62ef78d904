"""Counting and enumerating colorings of Y-oriented diagrams by an MGR.

A coloring assigns an element to every arc so that each crossing satisfies
``C(under_out) = C(under_in) * C(over)`` (sign +1) or
``C(under_in) = C(under_out) * C(over)`` (sign -1), and each vertex has
``C(left) C(right) = C(stem)`` inside a single component.

Which arcs can be solved from which is independent of the colors, so the
search is compiled once into a fixed schedule of branch/derive/check steps
and then run on whole batches of partial colorings with numpy.  Batches that
grow past ``chunk`` rows are split and processed depth first.
"""

from __future__ import annotations

import itertools
from concurrent.futures import Executor
from dataclasses import dataclass

import numpy as np

from .diagram import Diagram, check
from .errors import DiagramError
from .mgr import MultipleGroupRack

CHUNK = 1 << 18


@dataclass(frozen=True)
class Coloring:
    assignment: dict[str, int]

    def __getitem__(self, arc: str) -> int:
        return self.assignment[arc]


def _constraints(D: Diagram):
    pos = D.arc_index()
    cons = []
    for c in D.crossings:
        lo, hi = c.low_high()
        cons.append(("x", pos[lo], pos[c.over], pos[hi]))
    for v in D.vertices:
        cons.append(("v", pos[v.left], pos[v.right], pos[v.stem]))
    return cons


def compile_plan(D: Diagram) -> list[tuple]:
    """Static schedule of steps.

    Steps: ``("branch", arc, hint)`` with ``hint`` an already-known arc in the
    same vertex (or -1); ``("hi"|"lo", lo, over, hi)`` for crossings;
    ``("stem"|"left"|"right", left, right, stem)`` for vertices; and
    ``("check_x", ...)``/``("check_v", ...)`` when all three arcs are known.
    """
    cons = _constraints(D)
    n = len(D.arcs)
    known = [False] * n
    done = [False] * len(cons)
    plan = []
    touching = [[k for k, c in enumerate(cons) if a in c[1:]] for a in range(n)]

    def propagate():
        changed = True
        while changed:
            changed = False
            for k, (kind, p, q, r) in enumerate(cons):
                if done[k]:
                    continue
                kp, kq, kr = known[p], known[q], known[r]
                if kind == "x":
                    lo, over, hi = p, q, r
                    if kp and kq and kr:
                        plan.append(("check_x", lo, over, hi))
                    elif kp and kq:
                        plan.append(("hi", lo, over, hi))
                        known[hi] = True
                    elif kr and kq:
                        plan.append(("lo", lo, over, hi))
                        known[lo] = True
                    else:
                        continue
                else:
                    left, right, stem = p, q, r
                    if kp and kq and kr:
                        plan.append(("check_v", left, right, stem))
                    elif kp and kq:
                        plan.append(("stem", left, right, stem))
                        known[stem] = True
                    elif kp and kr:
                        plan.append(("right", left, right, stem))
                        known[right] = True
                    elif kq and kr:
                        plan.append(("left", left, right, stem))
                        known[left] = True
                    else:
                        continue
                done[k] = True
                changed = True

    propagate()
    while not all(known):
        best, best_score = None, None
        for a in range(n):
            if known[a]:
                continue
            score = sum(1 for k in touching[a] if not done[k]
                        for b in cons[k][1:] if b != a and known[b])
            if best_score is None or score > best_score:
                best, best_score = a, score
        hint = -1
        for k in touching[best]:
            kind, p, q, r = cons[k]
            if kind == "v":
                others = [b for b in (p, q, r) if b != best and known[b]]
                if others:
                    hint = others[0]
                    break
        plan.append(("branch", best, hint))
        known[best] = True
        propagate()
    return plan


def _expand(batch: np.ndarray, arc: int, hint: int, M: MultipleGroupRack) -> np.ndarray:
    if hint < 0:
        out = np.repeat(batch, M.size, axis=0)
        out[:, arc] = np.tile(np.arange(M.size, dtype=batch.dtype), len(batch))
        return out
    comp = M.comp_of[batch[:, hint]]
    counts = M.sizes[comp]
    out = np.repeat(batch, counts, axis=0)
    starts = np.repeat(np.cumsum(counts) - counts, counts)
    local = np.arange(len(out)) - starts
    out[:, arc] = M.offsets[np.repeat(comp, counts)] + local
    return out


def _step(batch: np.ndarray, step: tuple, M: MultipleGroupRack) -> np.ndarray:
    op = step[0]
    star, mul, inv = M.star, M.mul, M.inverse
    if op == "branch":
        return _expand(batch, step[1], step[2], M)
    if op in ("hi", "lo", "check_x"):
        lo, over, hi = step[1:]
        if op == "hi":
            batch[:, hi] = star[batch[:, lo], batch[:, over]]
            return batch
        if op == "lo":
            batch[:, lo] = star[batch[:, hi], inv[batch[:, over]]]
            return batch
        return batch[star[batch[:, lo], batch[:, over]] == batch[:, hi]]
    left, right, stem = step[1:]
    if op == "stem":
        val = mul[batch[:, left], batch[:, right]]
        col = stem
    elif op == "right":
        val = mul[inv[batch[:, left]], batch[:, stem]]
        col = right
    elif op == "left":
        val = mul[batch[:, stem], inv[batch[:, right]]]
        col = left
    else:
        return batch[mul[batch[:, left], batch[:, right]] == batch[:, stem]]
    keep = val >= 0
    batch = batch[keep]
    batch[:, col] = val[keep]
    return batch


def _run(plan, start: int, batch: np.ndarray, M: MultipleGroupRack, sink, chunk: int):
    for i in range(start, len(plan)):
        if len(batch) == 0:
            return
        if plan[i][0] == "branch" and len(batch) * M.size > chunk and len(batch) > 1:
            step = max(1, chunk // M.size)
            for lo in range(0, len(batch), step):
                _run(plan, i, batch[lo:lo + step].copy(), M, sink, chunk)
            return
        batch = _step(batch, plan[i], M)
    sink(batch)


def _first_branch(plan) -> int:
    for i, s in enumerate(plan):
        if s[0] == "branch":
            return i
    return len(plan)


def _dtype(M: MultipleGroupRack):
    return np.int32 if M.size < 2**31 else np.int64


def _seed(D: Diagram, M: MultipleGroupRack, plan):
    """Run up to and including the first branch; the rows are the work items."""
    batch = np.full((1, len(D.arcs)), -1, dtype=_dtype(M))
    stop = _first_branch(plan)
    for i in range(min(stop + 1, len(plan))):
        batch = _step(batch, plan[i], M)
    return batch, min(stop + 1, len(plan))


def _count_task(args) -> int:
    plan, start, rows, M, chunk = args
    total = 0

    def sink(b):
        nonlocal total
        total += len(b)

    _run(plan, start, rows, M, sink, chunk)
    return total


def _rows_task(args) -> np.ndarray:
    plan, start, rows, M, chunk = args
    out = []
    _run(plan, start, rows, M, out.append, chunk)
    return np.concatenate(out) if out else np.empty((0, rows.shape[1]), dtype=rows.dtype)


def _tasks(D, M, chunk, parts):
    check(D)
    plan = compile_plan(D)
    seed, start = _seed(D, M, plan)
    parts = max(1, min(parts, len(seed)))
    bounds = np.linspace(0, len(seed), parts + 1).astype(int)
    return [(plan, start, seed[a:b].copy(), M, chunk) for a, b in zip(bounds[:-1], bounds[1:])]


def count_colorings(D: Diagram, M: MultipleGroupRack, executor: Executor | None = None,
                    parts: int = 1, chunk: int = CHUNK) -> int:
    """Exact number of M-colorings of D.

    With an ``executor`` the rows after the first branch are cut into
    ``parts`` contiguous slices and counted with ``executor.map``.
    """
    tasks = _tasks(D, M, chunk, parts)
    mapper = executor.map if executor is not None else map
    return int(sum(mapper(_count_task, tasks)))


def coloring_rows(D: Diagram, M: MultipleGroupRack, executor: Executor | None = None,
                  parts: int = 1, chunk: int = CHUNK) -> np.ndarray:
    """All colorings as an array of shape (count, #arcs), lexicographically sorted."""
    tasks = _tasks(D, M, chunk, parts)
    mapper = executor.map if executor is not None else map
    rows = [r for r in mapper(_rows_task, tasks) if len(r)]
    if not rows:
        return np.empty((0, len(D.arcs)), dtype=np.int64)
    allrows = np.concatenate(rows).astype(np.int64)
    order = np.lexsort(allrows.T[::-1])
    return allrows[order]


def enumerate_colorings(D: Diagram, M: MultipleGroupRack, limit: int | None = None) -> list[Coloring]:
    rows = coloring_rows(D, M)
    if limit is not None:
        rows = rows[:limit]
    ids = D.arc_ids
    return [Coloring(dict(zip(ids, map(int, r)))) for r in rows]


def is_coloring(D: Diagram, M: MultipleGroupRack, assignment: dict[str, int]) -> bool:
    """Walk every crossing and vertex and check the coloring conditions."""
    if set(assignment) != set(D.arc_ids):
        return False
    C = assignment
    for c in D.crossings:
        if c.sign == 1:
            if M.star[C[c.under_in], C[c.over]] != C[c.under_out]:
                return False
        elif M.star[C[c.under_out], C[c.over]] != C[c.under_in]:
            return False
    for v in D.vertices:
        comps = {int(M.comp_of[C[a]]) for a in (v.left, v.right, v.stem)}
        if len(comps) != 1 or M.mul[C[v.left], C[v.right]] != C[v.stem]:
            return False
    return True


def brute_force_count(D: Diagram, M: MultipleGroupRack) -> int:
    """Count by testing all ``|M| ** #arcs`` assignments (small cases only)."""
    n = len(D.arcs)
    if n == 0:
        return 1
    pos = D.arc_index()
    grid = np.array(list(itertools.product(range(M.size), repeat=n)), dtype=np.int64)
    ok = np.ones(len(grid), dtype=bool)
    for c in D.crossings:
        i, o, t = grid[:, pos[c.under_in]], grid[:, pos[c.over]], grid[:, pos[c.under_out]]
        ok &= (M.star[i, o] == t) if c.sign == 1 else (M.star[t, o] == i)
    for v in D.vertices:
        l, r, s = grid[:, pos[v.left]], grid[:, pos[v.right]], grid[:, pos[v.stem]]
        same = (M.comp_of[l] == M.comp_of[r]) & (M.comp_of[r] == M.comp_of[s])
        ok &= same & (M.mul[l, r] == s)
    return int(ok.sum())


@dataclass(frozen=True)
class StarResult:
    holds: bool
    witness: Coloring | None = None

    def __bool__(self) -> bool:
        return self.holds


def check_property_star(D: Diagram, M: MultipleGroupRack) -> StarResult:
    """Is there a coloring giving the marked arc a non-identity color?

    The witness is the lexicographically first such coloring.
    """
    if D.marked_arc is None:
        raise DiagramError("property (*) needs a diagram with a marked arc")
    rows = coloring_rows(D, M)
    col = D.arc_index()[D.marked_arc]
    marked = rows[:, col]
    bad = np.nonzero(M.identities[M.comp_of[marked]] != marked)[0]
    if not len(bad):
        return StarResult(False)
    return StarResult(True, Coloring(dict(zip(D.arc_ids, map(int, rows[bad[0]])))))


def assert_move_invariance(before: Diagram, after: Diagram, M: MultipleGroupRack) -> bool:
    return count_colorings(before, M) == count_colorings(after, M)
