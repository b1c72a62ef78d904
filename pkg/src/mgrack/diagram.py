"""Combinatorial Y-oriented spatial trivalent graph diagrams.

An arc runs from a *tail* to a *head*.  Tails are the ``under_out`` slot of a
crossing or an outgoing vertex slot; heads are ``under_in`` or an incoming
vertex slot.  Closed arcs have neither and may only appear as over arcs.

Vertex convention: draw the vertex with its stem pointing down.  A ``merge``
has ``left`` and ``right`` coming in from above and the stem leaving below;
a ``split`` has the stem coming in from above and ``left``/``right`` leaving
below.  Left and right are read off in that position.

Crossing convention: ``sign = +1`` when the under strand passes from the
right-hand side of the over strand (looking along its orientation) to the
left-hand side, ``-1`` otherwise.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, replace
from typing import Iterable

import networkx as nx

from .errors import DiagramError, FormatError

MERGE = "merge"
SPLIT = "split"


@dataclass(frozen=True)
class Arc:
    id: str
    closed: bool = False


@dataclass(frozen=True)
class Crossing:
    over: str
    under_in: str
    under_out: str
    sign: int

    def low_high(self) -> tuple[str, str]:
        """(lo, hi) with ``C(hi) = C(lo) * C(over)``."""
        return (self.under_in, self.under_out) if self.sign == 1 else (self.under_out, self.under_in)


@dataclass(frozen=True)
class Vertex:
    kind: str
    left: str
    right: str
    stem: str

    def incoming(self) -> tuple[str, ...]:
        return (self.left, self.right) if self.kind == MERGE else (self.stem,)

    def outgoing(self) -> tuple[str, ...]:
        return (self.stem,) if self.kind == MERGE else (self.left, self.right)


@dataclass(frozen=True)
class Diagram:
    arcs: tuple[Arc, ...] = ()
    crossings: tuple[Crossing, ...] = ()
    vertices: tuple[Vertex, ...] = ()
    marked_arc: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(self.arcs))
        object.__setattr__(self, "crossings", tuple(self.crossings))
        object.__setattr__(self, "vertices", tuple(self.vertices))

    @property
    def arc_ids(self) -> list[str]:
        return [a.id for a in self.arcs]

    def arc_index(self) -> dict[str, int]:
        return {a.id: i for i, a in enumerate(self.arcs)}

    def is_closed(self, arc: str) -> bool:
        return any(a.id == arc and a.closed for a in self.arcs)

    def with_(self, **changes) -> "Diagram":
        return replace(self, **changes)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violation: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate(D: Diagram) -> ValidationReport:
    """Endpoint consistency and vertex legality; reports the first problem found."""
    ids = D.arc_ids
    dup = [a for a, c in Counter(ids).items() if c > 1]
    if dup:
        return ValidationReport(False, f"duplicate arc id {dup[0]!r}")
    known = set(ids)
    heads: Counter = Counter()
    tails: Counter = Counter()
    for i, c in enumerate(D.crossings):
        for slot in ("over", "under_in", "under_out"):
            if getattr(c, slot) not in known:
                return ValidationReport(False, f"crossing {i}: unknown arc {getattr(c, slot)!r} in {slot}")
        if c.sign not in (1, -1):
            return ValidationReport(False, f"crossing {i}: sign must be +1 or -1")
        heads[c.under_in] += 1
        tails[c.under_out] += 1
    for i, v in enumerate(D.vertices):
        if v.kind not in (MERGE, SPLIT):
            return ValidationReport(False, f"vertex {i}: kind must be merge or split")
        for slot in ("left", "right", "stem"):
            if getattr(v, slot) not in known:
                return ValidationReport(False, f"vertex {i}: unknown arc {getattr(v, slot)!r} in {slot}")
        for a in v.incoming():
            heads[a] += 1
        for a in v.outgoing():
            tails[a] += 1
    for arc in D.arcs:
        h, t = heads[arc.id], tails[arc.id]
        if arc.closed and (h or t):
            return ValidationReport(False, f"closed arc {arc.id!r} used as an under or vertex slot")
        if not arc.closed and (h, t) != (1, 1):
            return ValidationReport(False, f"open arc {arc.id!r} has {h} head(s) and {t} tail(s), expected 1 and 1")
    if D.marked_arc is not None and D.marked_arc not in known:
        return ValidationReport(False, f"marked arc {D.marked_arc!r} does not exist")
    return ValidationReport(True)


def check(D: Diagram) -> Diagram:
    report = validate(D)
    if not report.ok:
        raise DiagramError(report.violation)
    return D


_ARC_KEYS = {"id", "closed"}
_CROSSING_KEYS = {"over", "under_in", "under_out", "sign"}
_VERTEX_KEYS = {"kind", "left", "right", "stem"}
_DIAGRAM_KEYS = {"arcs", "crossings", "vertices", "marked_arc"}


def _strict(obj, keys: set, what: str, optional: Iterable[str] = ()) -> dict:
    if not isinstance(obj, dict):
        raise FormatError(f"{what} must be an object")
    unknown = set(obj) - keys
    if unknown:
        raise FormatError(f"{what}: unknown field(s) {sorted(unknown)}")
    missing = keys - set(obj) - set(optional)
    if missing:
        raise FormatError(f"{what}: missing field(s) {sorted(missing)}")
    return obj


def from_dict(data: dict) -> Diagram:
    _strict(data, _DIAGRAM_KEYS | {"kind", "schema"}, "diagram",
            optional=("crossings", "vertices", "marked_arc", "kind", "schema"))
    arcs = []
    for i, a in enumerate(data["arcs"]):
        _strict(a, _ARC_KEYS, f"arc {i}", optional=("closed",))
        if not isinstance(a["id"], str):
            raise FormatError(f"arc {i}: id must be a string")
        arcs.append(Arc(a["id"], bool(a.get("closed", False))))
    crossings = []
    for i, c in enumerate(data.get("crossings", [])):
        _strict(c, _CROSSING_KEYS, f"crossing {i}")
        if c["sign"] not in (1, -1):
            raise FormatError(f"crossing {i}: sign must be 1 or -1")
        crossings.append(Crossing(c["over"], c["under_in"], c["under_out"], int(c["sign"])))
    vertices = []
    for i, v in enumerate(data.get("vertices", [])):
        _strict(v, _VERTEX_KEYS, f"vertex {i}")
        if v["kind"] not in (MERGE, SPLIT):
            raise FormatError(f"vertex {i}: kind must be 'merge' or 'split', got {v['kind']!r}")
        vertices.append(Vertex(v["kind"], v["left"], v["right"], v["stem"]))
    return Diagram(tuple(arcs), tuple(crossings), tuple(vertices), data.get("marked_arc"))


def to_dict(D: Diagram) -> dict:
    return {
        "arcs": [{"id": a.id, "closed": a.closed} for a in D.arcs],
        "crossings": [
            {"over": c.over, "under_in": c.under_in, "under_out": c.under_out, "sign": c.sign}
            for c in D.crossings
        ],
        "vertices": [{"kind": v.kind, "left": v.left, "right": v.right, "stem": v.stem} for v in D.vertices],
        "marked_arc": D.marked_arc,
    }


def parse(text: str) -> Diagram:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"diagram is not valid JSON: {exc}") from None
    return from_dict(data)


def serialize(D: Diagram) -> str:
    return json.dumps(to_dict(D), indent=2) + "\n"


def _graph(D: Diagram) -> nx.DiGraph:
    g = nx.DiGraph()
    for a in D.arcs:
        g.add_node(("arc", a.id), kind="arc", closed=a.closed, marked=a.id == D.marked_arc)
    roles: dict = {}
    for i, c in enumerate(D.crossings):
        g.add_node(("x", i), kind="crossing", sign=c.sign)
        for slot in ("over", "under_in", "under_out"):
            roles.setdefault((("x", i), ("arc", getattr(c, slot))), []).append(slot)
    for i, v in enumerate(D.vertices):
        g.add_node(("v", i), kind=v.kind)
        for slot in ("left", "right", "stem"):
            roles.setdefault((("v", i), ("arc", getattr(v, slot))), []).append(slot)
    for (u, w), r in roles.items():
        g.add_edge(u, w, roles=tuple(sorted(r)))
    return g


def isomorphic(D1: Diagram, D2: Diagram) -> bool:
    """Equality up to renaming arcs and reordering crossings and vertices."""
    if (len(D1.arcs), len(D1.crossings), len(D1.vertices)) != (len(D2.arcs), len(D2.crossings), len(D2.vertices)):
        return False
    return nx.is_isomorphic(_graph(D1), _graph(D2), node_match=lambda a, b: a == b,
                            edge_match=lambda a, b: a["roles"] == b["roles"])


def circle(name: str = "o") -> Diagram:
    return Diagram((Arc(name, True),))


def theta() -> Diagram:
    return Diagram(
        (Arc("a"), Arc("b"), Arc("c")),
        (),
        (Vertex(MERGE, "a", "b", "c"), Vertex(SPLIT, "a", "b", "c")),
    )
