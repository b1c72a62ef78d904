"""Local rewrites of Y-oriented diagrams at explicitly addressed sites.

Sites name arcs by id and crossings/vertices by their index in the
diagram's lists.  Removed crossings and vertices are deleted, new ones are
appended, and fresh arc ids are derived from a nearby arc's id.  There is no
R1 move: a curl is a full twist of the band and changes the surface.

Supported moves (``MoveSpec.move`` / ``variant``):

``R2_ADD``     site ``{"over", "under"}``; variant ``"+"``/``"-"`` is the sign
               of the first new crossing.  The under arc is pushed under the
               over arc just before its head.
``R2_REMOVE``  site ``{"arc"}``: the middle arc of an R2 bigon.
``R3``         site ``{"arc", "top"}``: ``arc`` is the bottom strand's middle
               segment, ``top`` the strand passing over both others.  An
               optional ``"pivot"`` crossing index picks the top/middle
               crossing when more than one would fit.
``R5``         strand/vertex slides:
               ``under_to_branches`` / ``under_to_stem`` move a strand that
               passes *under* the vertex edges; ``over_to_branches`` /
               ``over_to_stem`` move a strand passing *over* them.
``R6``         ``unwind``: a curl on the stem becomes a full twist of the two
               branches with a curl on each; ``wind`` is the inverse.
``REVERSE``    site ``{"arc"}``: reverse the circle component through ``arc``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import MERGE, SPLIT, Arc, Crossing, Diagram, Vertex, check, validate
from .errors import FormatError, MoveError

MOVES = ("R2_ADD", "R2_REMOVE", "R3", "R5", "R6", "REVERSE")


@dataclass(frozen=True)
class MoveSpec:
    move: str
    site: dict = field(default_factory=dict)
    variant: str | None = None

    def to_dict(self) -> dict:
        return {"move": self.move, "site": dict(self.site), "variant": self.variant}

    @classmethod
    def from_dict(cls, data: dict) -> "MoveSpec":
        unknown = set(data) - {"move", "site", "variant"}
        if unknown:
            raise FormatError(f"move: unknown field(s) {sorted(unknown)}")
        if data.get("move") not in MOVES:
            raise FormatError(f"move must be one of {MOVES}, got {data.get('move')!r}")
        return cls(data["move"], dict(data.get("site") or {}), data.get("variant"))


class _Edit:
    """Mutable working copy of a diagram."""

    def __init__(self, D: Diagram):
        self.arcs = list(D.arcs)
        self.crossings: list[Crossing | None] = list(D.crossings)
        self.vertices: list[Vertex | None] = list(D.vertices)
        self.marked = D.marked_arc
        self.taken = {a.id for a in D.arcs}

    def fresh(self, hint: str) -> str:
        k = 1
        while f"{hint}~{k}" in self.taken:
            k += 1
        name = f"{hint}~{k}"
        self.taken.add(name)
        self.arcs.append(Arc(name))
        return name

    def drop_arc(self, arc: str):
        self.arcs = [a for a in self.arcs if a.id != arc]

    def set_closed(self, arc: str, closed: bool):
        self.arcs = [Arc(a.id, closed) if a.id == arc else a for a in self.arcs]

    def rename(self, old: str, new: str):
        """Replace every occurrence of ``old`` in every slot."""
        self.crossings = [
            None if c is None else Crossing(*(new if s == old else s for s in (c.over, c.under_in, c.under_out)), c.sign)
            for c in self.crossings
        ]
        self.vertices = [
            None if v is None else Vertex(v.kind, *(new if s == old else s for s in (v.left, v.right, v.stem)))
            for v in self.vertices
        ]
        if self.marked == old:
            self.marked = new

    def retarget_head(self, arc: str, new: str):
        """Make ``new`` end where ``arc`` currently ends."""
        for i, c in enumerate(self.crossings):
            if c is not None and c.under_in == arc:
                self.crossings[i] = Crossing(c.over, new, c.under_out, c.sign)
                return
        for i, v in enumerate(self.vertices):
            if v is None:
                continue
            if v.kind == MERGE and arc in (v.left, v.right):
                self.vertices[i] = Vertex(v.kind, new if v.left == arc else v.left,
                                          new if v.right == arc and v.left != arc else v.right, v.stem)
                return
            if v.kind == SPLIT and v.stem == arc:
                self.vertices[i] = Vertex(v.kind, v.left, v.right, new)
                return
        raise MoveError(f"arc {arc!r} has no head")

    def retarget_tail(self, arc: str, new: str):
        """Make ``new`` start where ``arc`` currently starts."""
        for i, c in enumerate(self.crossings):
            if c is not None and c.under_out == arc:
                self.crossings[i] = Crossing(c.over, c.under_in, new, c.sign)
                return
        for i, v in enumerate(self.vertices):
            if v is None:
                continue
            if v.kind == SPLIT and arc in (v.left, v.right):
                self.vertices[i] = Vertex(v.kind, new if v.left == arc else v.left,
                                          new if v.right == arc and v.left != arc else v.right, v.stem)
                return
            if v.kind == MERGE and v.stem == arc:
                self.vertices[i] = Vertex(v.kind, v.left, v.right, new)
                return
        raise MoveError(f"arc {arc!r} has no tail")

    def finish(self) -> Diagram:
        D = Diagram(tuple(self.arcs), tuple(c for c in self.crossings if c is not None),
                    tuple(v for v in self.vertices if v is not None), self.marked)
        report = validate(D)
        if not report.ok:
            raise MoveError(f"move produced an invalid diagram: {report.violation}")
        return D


def _uses(D: Diagram, arc: str) -> int:
    """Number of slots (plus the mark) that mention ``arc``."""
    n = sum((c.over == arc) + (c.under_in == arc) + (c.under_out == arc) for c in D.crossings)
    n += sum((v.left == arc) + (v.right == arc) + (v.stem == arc) for v in D.vertices)
    return n + (D.marked_arc == arc)


def _crossing_with(D: Diagram, **slots) -> int:
    hits = [i for i, c in enumerate(D.crossings) if all(getattr(c, k) == v for k, v in slots.items())]
    if len(hits) != 1:
        desc = ", ".join(f"{k}={v!r}" for k, v in slots.items())
        raise MoveError(f"expected exactly one crossing with {desc}, found {len(hits)}")
    return hits[0]


def _arc_exists(D: Diagram, arc: str):
    if arc not in D.arc_ids:
        raise MoveError(f"unknown arc {arc!r}")


def _vertex(D: Diagram, site: dict) -> tuple[int, Vertex]:
    try:
        vi = int(site["vertex"])
        return vi, D.vertices[vi]
    except (KeyError, IndexError, TypeError, ValueError):
        raise MoveError(f"site must name an existing vertex index, got {site.get('vertex')!r}") from None


def _crossing(D: Diagram, site: dict) -> tuple[int, Crossing]:
    try:
        ci = int(site["crossing"])
        return ci, D.crossings[ci]
    except (KeyError, IndexError, TypeError, ValueError):
        raise MoveError(f"site must name an existing crossing index, got {site.get('crossing')!r}") from None


def _sign(variant) -> int:
    if variant in (None, "+", "+1", 1):
        return 1
    if variant in ("-", "-1", -1):
        return -1
    raise MoveError(f"R2_ADD variant must be '+' or '-', got {variant!r}")


def r2_add(D: Diagram, over: str, under: str, sign: int = 1) -> Diagram:
    _arc_exists(D, over)
    _arc_exists(D, under)
    e = _Edit(D)
    mid = e.fresh(under)
    if D.is_closed(under):
        e.set_closed(under, False)
        e.crossings += [Crossing(over, under, mid, sign), Crossing(over, mid, under, -sign)]
    else:
        rest = e.fresh(under)
        e.retarget_head(under, rest)
        e.crossings += [Crossing(over, under, mid, sign), Crossing(over, mid, rest, -sign)]
    return e.finish()


def r2_remove(D: Diagram, mid: str) -> Diagram:
    _arc_exists(D, mid)
    i1 = _crossing_with(D, under_out=mid)
    i2 = _crossing_with(D, under_in=mid)
    c1, c2 = D.crossings[i1], D.crossings[i2]
    if i1 == i2 or c1.over != c2.over or c1.sign != -c2.sign or _uses(D, mid) != 2:
        raise MoveError(f"R2_REMOVE expects arc {mid!r} to pass under one arc twice with opposite signs "
                        "and appear nowhere else")
    first, last = c1.under_in, c2.under_out
    e = _Edit(D)
    e.crossings[i1] = e.crossings[i2] = None
    e.drop_arc(mid)
    if first == last:
        e.set_closed(first, True)
    else:
        e.rename(last, first)
        e.drop_arc(last)
    return e.finish()


def r3(D: Diagram, mid: str, top: str, pivot: int | None = None) -> Diagram:
    _arc_exists(D, mid)
    _arc_exists(D, top)
    ia = _crossing_with(D, under_out=mid)
    ib = _crossing_with(D, under_in=mid)
    ca, cb = D.crossings[ia], D.crossings[ib]
    if _uses(D, mid) != 2 or ia == ib:
        raise MoveError(f"R3 expects bottom segment {mid!r} to appear only between two crossings")
    if cb.over == top and ca.over != top:
        m_then_t, cm, ct = True, ca, cb
    elif ca.over == top and cb.over != top:
        m_then_t, cm, ct = False, cb, ca
    else:
        raise MoveError(f"R3 expects exactly one of the bottom crossings to lie under {top!r}")
    seg = cm.over
    tops = [i for i, c in enumerate(D.crossings)
            if i not in (ia, ib) and c.over == top and seg in (c.under_in, c.under_out)]
    if pivot is not None:
        tops = [i for i in tops if i == int(pivot)]
    if len(tops) != 1:
        raise MoveError(f"R3 expects one crossing of {top!r} over the middle strand segment {seg!r}, found {len(tops)}")
    c1 = D.crossings[tops[0]]
    same_dir = c1.sign == ct.sign
    # the slide is valid iff (order is M-then-T) xor (segment is before c1) xor (same direction)
    candidates = {c1.under_in, c1.under_out} if c1.under_in == c1.under_out else {seg}
    for s in sorted(candidates):
        before = s == c1.under_in
        if m_then_t ^ before ^ same_dir:
            seg = s
            break
    else:
        raise MoveError("R3 triangle has inconsistent orientations for this slide")
    other = c1.under_out if seg == c1.under_in else c1.under_in
    if m_then_t:
        new_a = Crossing(top, ca.under_in, mid, ct.sign)
        new_b = Crossing(other, mid, cb.under_out, cm.sign)
    else:
        new_a = Crossing(other, ca.under_in, mid, cm.sign)
        new_b = Crossing(top, mid, cb.under_out, ct.sign)
    e = _Edit(D)
    e.crossings[ia] = new_a
    e.crossings[ib] = new_b
    return e.finish()


def _branch_order(v: Vertex, sign: int) -> tuple[str, str]:
    return (v.left, v.right) if sign == 1 else (v.right, v.left)


def r5(D: Diagram, variant: str, site: dict) -> Diagram:
    vi, v = _vertex(D, site)
    e = _Edit(D)
    if variant == "under_to_branches":
        ci, c = _crossing(D, site)
        if c.over != v.stem:
            raise MoveError(f"R5 under_to_branches expects crossing {ci} to pass under the stem {v.stem!r}")
        first, second = _branch_order(v, c.sign)
        mid = e.fresh(c.under_in)
        e.crossings[ci] = Crossing(first, c.under_in, mid, c.sign)
        e.crossings.append(Crossing(second, mid, c.under_out, c.sign))
    elif variant == "under_to_stem":
        mid = site.get("arc")
        _arc_exists(D, mid)
        ia = _crossing_with(D, under_out=mid)
        ib = _crossing_with(D, under_in=mid)
        ca, cb = D.crossings[ia], D.crossings[ib]
        if ca.sign != cb.sign or (ca.over, cb.over) != _branch_order(v, ca.sign) or _uses(D, mid) != 2:
            raise MoveError(f"R5 under_to_stem expects {mid!r} to run between crossings under "
                            f"{_branch_order(v, ca.sign)} with equal signs")
        e.crossings[ia] = Crossing(v.stem, ca.under_in, cb.under_out, ca.sign)
        e.crossings[ib] = None
        e.drop_arc(mid)
    elif variant == "over_to_branches":
        ci, c = _crossing(D, site)
        if _uses(D, v.stem) != 2:
            raise MoveError(f"R5 over_to_branches expects stem {v.stem!r} to touch only the vertex and crossing {ci}")
        if v.kind == MERGE:
            if c.under_in != v.stem:
                raise MoveError(f"R5 over_to_branches expects the stem {v.stem!r} to end at crossing {ci}")
            l2, r2 = e.fresh(v.left), e.fresh(v.right)
            e.vertices[vi] = Vertex(MERGE, l2, r2, c.under_out)
            e.crossings[ci] = Crossing(c.over, v.left, l2, c.sign)
            e.crossings.append(Crossing(c.over, v.right, r2, c.sign))
        else:
            if c.under_out != v.stem:
                raise MoveError(f"R5 over_to_branches expects the stem {v.stem!r} to start at crossing {ci}")
            l2, r2 = e.fresh(v.left), e.fresh(v.right)
            e.vertices[vi] = Vertex(SPLIT, l2, r2, c.under_in)
            e.crossings[ci] = Crossing(c.over, l2, v.left, c.sign)
            e.crossings.append(Crossing(c.over, r2, v.right, c.sign))
        e.drop_arc(v.stem)
    elif variant == "over_to_stem":
        if v.kind == MERGE:
            ia = _crossing_with(D, under_out=v.left)
            ib = _crossing_with(D, under_out=v.right)
        else:
            ia = _crossing_with(D, under_in=v.left)
            ib = _crossing_with(D, under_in=v.right)
        ca, cb = D.crossings[ia], D.crossings[ib]
        if ca.over != cb.over or ca.sign != cb.sign or _uses(D, v.left) != 2 or _uses(D, v.right) != 2:
            raise MoveError("R5 over_to_stem expects both branches to pass under one arc with equal signs "
                            "right next to the vertex")
        if v.kind == MERGE:
            stem = e.fresh(v.stem)
            e.vertices[vi] = Vertex(MERGE, ca.under_in, cb.under_in, stem)
            e.crossings[ia] = Crossing(ca.over, stem, v.stem, ca.sign)
        else:
            stem = e.fresh(v.stem)
            e.vertices[vi] = Vertex(SPLIT, ca.under_out, cb.under_out, stem)
            e.crossings[ia] = Crossing(ca.over, v.stem, stem, ca.sign)
        e.crossings[ib] = None
        e.drop_arc(v.left)
        e.drop_arc(v.right)
    else:
        raise MoveError(f"unknown R5 variant {variant!r}")
    return e.finish()


def _twist_gadget(e: _Edit, a: str, b: str, out_a: str, out_b: str, sign: int) -> list[Crossing]:
    """Full twist of strands a (left) and b (right) with a curl on each, ending in out_a, out_b.

    Colours: for sign +1, ``out_a = (a*b) * (a*b)`` and ``out_b = (b*b) * (a*b)``;
    for -1 the same with inverse operations.  Their product is ``(ab) * (ab)``.
    """
    if sign == 1:
        a1, bc = e.fresh(a), e.fresh(b)
        return [
            Crossing(b, a, a1, 1),
            Crossing(b, b, bc, 1),
            Crossing(a1, bc, out_b, 1),
            Crossing(a1, a1, out_a, 1),
        ]
    a0, b1 = e.fresh(a), e.fresh(b)
    return [
        Crossing(a, a, a0, -1),
        Crossing(a, b, b1, -1),
        Crossing(b1, b1, out_b, -1),
        Crossing(b1, a0, out_a, -1),
    ]


def r6(D: Diagram, variant: str, site: dict) -> Diagram:
    vi, v = _vertex(D, site)
    if variant == "unwind":
        w = v.stem
        pattern = (f"R6 unwind expects stem {w!r} to curl once right after the vertex" if v.kind == MERGE
                   else f"R6 unwind expects stem {w!r} to follow a curl of the incoming arc")
        try:
            ci = _crossing_with(D, over=w, under_in=w) if v.kind == MERGE else _crossing_with(D, under_out=w)
        except MoveError as exc:
            raise MoveError(f"{pattern} ({exc})") from None
        c = D.crossings[ci]
        if v.kind == MERGE:
            if _uses(D, w) != 3 or c.under_out == w:
                raise MoveError(pattern)
            e = _Edit(D)
            e.crossings[ci] = None
            e.drop_arc(w)
            la, lb = e.fresh(v.left), e.fresh(v.right)
            e.vertices[vi] = Vertex(MERGE, la, lb, c.under_out)
            e.crossings += _twist_gadget(e, v.left, v.right, la, lb, c.sign)
        else:
            if c.over != c.under_in or _uses(D, w) != 2 or c.under_in == w:
                raise MoveError(pattern)
            e = _Edit(D)
            e.crossings[ci] = None
            e.drop_arc(w)
            pa, pb = e.fresh(v.left), e.fresh(v.right)
            e.vertices[vi] = Vertex(SPLIT, pa, pb, c.under_in)
            e.crossings += _twist_gadget(e, pa, pb, v.left, v.right, c.sign)
        return e.finish()
    if variant == "wind":
        return _r6_wind(D, vi, v)
    raise MoveError(f"unknown R6 variant {variant!r}")


def _r6_wind(D: Diagram, vi: int, v: Vertex) -> Diagram:
    """Undo ``unwind``: find the twist gadget at vertex ``vi`` and restore the curl.

    The candidate is accepted only if unwinding it reproduces ``D``.
    """
    from .diagram import isomorphic

    for sign in (1, -1):
        try:
            idx, inner, ends = _find_gadget(D, v, sign)
        except MoveError:
            continue
        e = _Edit(D)
        for i in idx:
            e.crossings[i] = None
        for arc in inner:
            e.drop_arc(arc)
        w = e.fresh(v.stem)
        if v.kind == MERGE:
            e.vertices[vi] = Vertex(MERGE, ends[0], ends[1], w)
            e.crossings.append(Crossing(w, w, v.stem, sign))
        else:
            e.vertices[vi] = Vertex(SPLIT, ends[0], ends[1], w)
            e.crossings.append(Crossing(v.stem, v.stem, w, sign))
        try:
            candidate = e.finish()
            if isomorphic(r6(candidate, "unwind", {"vertex": vi}), D):
                return candidate
        except MoveError:
            continue
    raise MoveError(f"R6 wind: vertex {vi} is not attached to a full-twist-with-curls gadget")


def _find_gadget(D: Diagram, v: Vertex, sign: int):
    """Locate the four gadget crossings next to ``v``.

    Returns (crossing indices, internal arcs, (left end, right end)) where the
    ends are the gadget's outer arcs on the far side from the vertex.
    """
    def by(**slots):
        i = _crossing_with(D, **slots)
        if D.crossings[i].sign != sign:
            raise MoveError("sign mismatch")
        return i, D.crossings[i]

    if v.kind == MERGE:
        ia, ca = by(under_out=v.left)
        ib, cb = by(under_out=v.right)
        if sign == 1:
            a1, bc = ca.under_in, cb.under_in
            i1, c1 = by(under_out=a1)
            i4, _ = by(under_out=bc)
            ends, inner = (c1.under_in, c1.over), [v.left, v.right, a1, bc]
        else:
            a0, b1 = ca.under_in, cb.under_in
            i1, c1 = by(under_out=b1)
            i4, c4 = by(under_out=a0)
            ends, inner = (c4.under_in, c1.under_in), [v.left, v.right, a0, b1]
    else:
        if sign == 1:
            i1, c1 = by(under_in=v.left)
            i4, c4 = by(under_in=v.right)
            ia, ca = by(under_in=c1.under_out)
            ib, cb = by(under_in=c4.under_out)
            inner = [v.left, v.right, c1.under_out, c4.under_out]
        else:
            i4, c4 = by(under_in=v.left)
            i1, c1 = by(under_in=v.right)
            ia, ca = by(under_in=c4.under_out)
            ib, cb = by(under_in=c1.under_out)
            inner = [v.left, v.right, c4.under_out, c1.under_out]
        ends = (ca.under_out, cb.under_out)
    idx = [ia, ib, i1, i4]
    if len(set(idx)) != 4:
        raise MoveError("gadget crossings overlap")
    return idx, inner, ends


def circle_component(D: Diagram, arc: str) -> list[str]:
    """Arcs of the vertex-free component through ``arc``, in travel order."""
    _arc_exists(D, arc)
    if D.is_closed(arc):
        return [arc]
    comp = [arc]
    cur = arc
    while True:
        nxt = [c.under_out for c in D.crossings if c.under_in == cur]
        if not nxt:
            raise MoveError(f"arc {arc!r} lies on a component with vertices; only circles can be reversed")
        cur = nxt[0]
        if cur == arc:
            return comp
        comp.append(cur)


def reverse_circle(D: Diagram, arc: str) -> Diagram:
    """Reverse the orientation of the circle component through ``arc``."""
    comp = set(circle_component(D, arc))
    crossings = []
    for c in D.crossings:
        over_in = c.over in comp
        under_in = c.under_in in comp
        if under_in:
            c = Crossing(c.over, c.under_out, c.under_in, -c.sign)
        if over_in:
            c = Crossing(c.over, c.under_in, c.under_out, -c.sign)
        crossings.append(c)
    return check(D.with_(crossings=tuple(crossings)))


def apply_move(D: Diagram, m: MoveSpec) -> Diagram:
    check(D)
    try:
        return _dispatch(D, m)
    except MoveError as exc:
        msg = str(exc)
        if msg.startswith(m.move.split("_")[0]):
            raise
        raise MoveError(f"{m.move} at {m.site}: {msg}") from None


def _dispatch(D: Diagram, m: MoveSpec) -> Diagram:
    site = m.site
    if m.move == "R2_ADD":
        return r2_add(D, site.get("over"), site.get("under"), _sign(m.variant))
    if m.move == "R2_REMOVE":
        return r2_remove(D, site.get("arc"))
    if m.move == "R3":
        return r3(D, site.get("arc"), site.get("top"), site.get("pivot"))
    if m.move == "R5":
        return r5(D, m.variant, site)
    if m.move == "R6":
        return r6(D, m.variant, site)
    if m.move == "REVERSE":
        return reverse_circle(D, site.get("arc"))
    raise MoveError(f"unknown move {m.move!r}")


def connected_sum(D1: Diagram, D2: Diagram, endpoints: tuple[str, str], bridge: str = "alpha") -> Diagram:
    """Join D1 and D2 by a new arc ``bridge`` and mark it.

    Arc ids are prefixed with ``1:`` and ``2:``.  A split vertex is inserted
    at the head of ``endpoints[0]`` (bridge leaves as its right branch) and a
    merge vertex at the head of ``endpoints[1]`` (bridge enters as the right
    branch).
    """
    check(D1)
    check(D2)
    e1, e2 = endpoints
    _arc_exists(D1, e1)
    _arc_exists(D2, e2)

    def prefixed(D: Diagram, p: str) -> Diagram:
        r = lambda s: f"{p}:{s}"
        return Diagram(
            tuple(Arc(r(a.id), a.closed) for a in D.arcs),
            tuple(Crossing(r(c.over), r(c.under_in), r(c.under_out), c.sign) for c in D.crossings),
            tuple(Vertex(v.kind, r(v.left), r(v.right), r(v.stem)) for v in D.vertices),
        )

    A, B = prefixed(D1, "1"), prefixed(D2, "2")
    e = _Edit(Diagram(A.arcs + B.arcs, A.crossings + B.crossings, A.vertices + B.vertices))
    if bridge in e.taken:
        raise MoveError(f"bridge id {bridge!r} collides with an existing arc")
    e.taken.add(bridge)
    e.arcs.append(Arc(bridge))
    a, b = f"1:{e1}", f"2:{e2}"
    if D1.is_closed(e1):
        e.set_closed(a, False)
        e.vertices.append(Vertex(SPLIT, a, bridge, a))
    else:
        rest = e.fresh(a)
        e.retarget_head(a, rest)
        e.vertices.append(Vertex(SPLIT, rest, bridge, a))
    if D2.is_closed(e2):
        e.set_closed(b, False)
        e.vertices.append(Vertex(MERGE, b, bridge, b))
    else:
        rest = e.fresh(b)
        e.retarget_head(b, rest)
        e.vertices.append(Vertex(MERGE, b, bridge, rest))
    e.marked = bridge
    return e.finish()
