"""The bundled fixture corpus: move pairs, base diagrams and connected sums.

``build_corpus()`` constructs everything from a handful of hand-written base
diagrams; ``write_corpus(path)`` lays it out on disk as::

    diagrams/<name>.json   plain diagrams
    pairs/<name>.json      {"name", "before", "move", "after"}
    sums/<name>.json       {"name", "diagram", "commutator": bool}

``sums`` entries flagged ``commutator`` are expected to carry a coloring by
the semidirect MGR with a non-identity color on the bridge.
"""

from __future__ import annotations

import json
from pathlib import Path

from .diagram import MERGE, SPLIT, Arc, Crossing, Diagram, Vertex, circle, from_dict, theta, to_dict
from .errors import MoveError
from .moves import MoveSpec, apply_move, connected_sum

BUNDLED = Path(__file__).parent / "fixtures"


def curl(sign: int = 1) -> Diagram:
    """A circle with one kink (an annulus with a full twist)."""
    return Diagram((Arc("k"),), (Crossing("k", "k", "k", sign),))


def hopf() -> Diagram:
    return Diagram((Arc("A"), Arc("B")), (Crossing("B", "A", "A", 1), Crossing("A", "B", "B", 1)))


def two_circles() -> Diagram:
    return Diagram((Arc("o1", True), Arc("o2", True)))


def three_circles() -> Diagram:
    return Diagram((Arc("T", True), Arc("M", True), Arc("B", True)))


def theta_strand_under(sign: int = 1) -> Diagram:
    """Theta graph with a circle passing under its stem."""
    base = theta()
    return Diagram(base.arcs + (Arc("s"),), (Crossing("c", "s", "s", sign),), base.vertices)


def theta_strand_over(sign: int = 1) -> Diagram:
    """Theta graph whose stem passes under a circle."""
    return Diagram(
        (Arc("a"), Arc("b"), Arc("c1"), Arc("c2"), Arc("s", True)),
        (Crossing("s", "c1", "c2", sign),),
        (Vertex(MERGE, "a", "b", "c1"), Vertex(SPLIT, "a", "b", "c2")),
    )


def theta_curl_merge(sign: int = 1) -> Diagram:
    """Theta graph with a kink on the stem just after the merge vertex."""
    return Diagram(
        (Arc("a"), Arc("b"), Arc("w"), Arc("c")),
        (Crossing("w", "w", "c", sign),),
        (Vertex(MERGE, "a", "b", "w"), Vertex(SPLIT, "a", "b", "c")),
    )


def theta_curl_split(sign: int = 1) -> Diagram:
    """Theta graph with a kink on the stem just before the split vertex."""
    return Diagram(
        (Arc("a"), Arc("b"), Arc("c"), Arc("w")),
        (Crossing("c", "c", "w", sign),),
        (Vertex(MERGE, "a", "b", "c"), Vertex(SPLIT, "a", "b", "w")),
    )


def r3_triangle(t_sign: int, m_sign: int) -> tuple[Diagram, MoveSpec]:
    """Three circles pushed into an R3 triangle with R2 moves.

    M and B both dip under T in the same direction; B then dips under M
    just before meeting T.
    """
    D = three_circles()
    t = "+" if t_sign == 1 else "-"
    D = apply_move(D, MoveSpec("R2_ADD", {"over": "T", "under": "M"}, t))
    D = apply_move(D, MoveSpec("R2_ADD", {"over": "T", "under": "B"}, t))
    D = apply_move(D, MoveSpec("R2_ADD", {"over": "M", "under": "B"}, "+" if m_sign == 1 else "-"))
    # B~3 now runs from under M to under T
    return D, _r3_spec(D)


def _r3_spec(D: Diagram) -> MoveSpec:
    """The R3 move on segment B~3 below T, with the first pivot crossing that works."""
    for i, c in enumerate(D.crossings):
        if c.over != "T" or "B~3" in (c.under_in, c.under_out):
            continue
        m = MoveSpec("R3", {"arc": "B~3", "top": "T", "pivot": i})
        try:
            apply_move(D, m)
        except MoveError:
            continue
        return m
    raise MoveError("no R3 pivot fits")


def base_diagrams() -> dict[str, Diagram]:
    return {
        "circle": circle(),
        "two_circles": two_circles(),
        "theta": theta(),
        "hopf": hopf(),
        "curl_pos": curl(1),
        "curl_neg": curl(-1),
        "handcuff": connected_sum(circle(), circle(), ("o", "o")),
        "theta_strand_under": theta_strand_under(),
        "theta_strand_over": theta_strand_over(),
        "theta_curl_merge": theta_curl_merge(),
        "theta_curl_split": theta_curl_split(),
    }


def move_pairs() -> dict[str, tuple[Diagram, MoveSpec]]:
    pairs: dict[str, tuple[Diagram, MoveSpec]] = {}

    def add(name, D, m):
        pairs[name] = (D, m)

    add("r2_add_circles_pos", two_circles(), MoveSpec("R2_ADD", {"over": "o1", "under": "o2"}, "+"))
    add("r2_add_circles_neg", two_circles(), MoveSpec("R2_ADD", {"over": "o1", "under": "o2"}, "-"))
    add("r2_add_theta", theta(), MoveSpec("R2_ADD", {"over": "a", "under": "c"}, "+"))
    add("r2_add_hopf", hopf(), MoveSpec("R2_ADD", {"over": "B", "under": "A"}, "-"))
    add("r2_add_self", curl(1), MoveSpec("R2_ADD", {"over": "k", "under": "k"}, "+"))
    for name in ("r2_add_circles_pos", "r2_add_theta", "r2_add_hopf"):
        D, m = pairs[name]
        after = apply_move(D, m)
        mid = f"{m.site['under']}~1"
        add(name.replace("add", "remove"), after, MoveSpec("R2_REMOVE", {"arc": mid}))

    for t_sign in (1, -1):
        for m_sign in (1, -1):
            D, m = r3_triangle(t_sign, m_sign)
            tag = f"{'p' if t_sign == 1 else 'n'}{'p' if m_sign == 1 else 'n'}"
            add(f"r3_{tag}", D, m)
            after = apply_move(D, m)
            add(f"r3_{tag}_back", after, _r3_spec(after))

    for sign, tag in ((1, "pos"), (-1, "neg")):
        D = theta_strand_under(sign)
        for vi, kind in ((0, "merge"), (1, "split")):
            m = MoveSpec("R5", {"vertex": vi, "crossing": 0}, "under_to_branches")
            add(f"r5_under_{kind}_{tag}", D, m)
            add(f"r5_under_{kind}_{tag}_back", apply_move(D, m),
                MoveSpec("R5", {"vertex": vi, "arc": "s~1"}, "under_to_stem"))
        D = theta_strand_over(sign)
        for vi, kind in ((0, "merge"), (1, "split")):
            m = MoveSpec("R5", {"vertex": vi, "crossing": 0}, "over_to_branches")
            add(f"r5_over_{kind}_{tag}", D, m)
            add(f"r5_over_{kind}_{tag}_back", apply_move(D, m), MoveSpec("R5", {"vertex": vi}, "over_to_stem"))

    for sign, tag in ((1, "pos"), (-1, "neg")):
        for builder, vi, kind in ((theta_curl_merge, 0, "merge"), (theta_curl_split, 1, "split")):
            D = builder(sign)
            m = MoveSpec("R6", {"vertex": vi}, "unwind")
            add(f"r6_{kind}_{tag}", D, m)
            add(f"r6_{kind}_{tag}_back", apply_move(D, m), MoveSpec("R6", {"vertex": vi}, "wind"))

    add("reverse_hopf", hopf(), MoveSpec("REVERSE", {"arc": "A"}))
    add("reverse_curl", curl(1), MoveSpec("REVERSE", {"arc": "k"}))
    add("reverse_circle_over", theta_strand_over(1), MoveSpec("REVERSE", {"arc": "s"}))
    return pairs


def connected_sums() -> dict[str, tuple[Diagram, bool]]:
    return {
        "sum_circles": (connected_sum(circle(), circle(), ("o", "o")), False),
        "sum_curls": (connected_sum(curl(1), curl(1), ("k", "k")), True),
        "sum_curls_mixed": (connected_sum(curl(1), curl(-1), ("k", "k")), True),
        "sum_curl_circle": (connected_sum(curl(1), circle(), ("k", "o")), False),
        "sum_theta_curl": (connected_sum(theta(), curl(-1), ("c", "k")), False),
        "sum_hopf_curl": (connected_sum(hopf(), curl(1), ("A", "k")), True),
    }


def build_corpus() -> dict[str, dict]:
    files: dict[str, dict] = {}
    for name, D in base_diagrams().items():
        files[f"diagrams/{name}.json"] = to_dict(D)
    for name, (D, m) in move_pairs().items():
        files[f"pairs/{name}.json"] = {
            "name": name,
            "before": to_dict(D),
            "move": m.to_dict(),
            "after": to_dict(apply_move(D, m)),
        }
    for name, (D, commutator) in connected_sums().items():
        files[f"sums/{name}.json"] = {"name": name, "diagram": to_dict(D), "commutator": commutator}
    return files


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def write_corpus(root: Path) -> list[Path]:
    root = Path(root)
    written = []
    for rel, obj in build_corpus().items():
        path = root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dumps(obj))
        written.append(path)
    return written


def load_corpus(root: Path):
    """Read a corpus directory into (diagrams, pairs, sums) dictionaries keyed by file stem."""
    root = Path(root)
    diagrams = {p.stem: from_dict(json.loads(p.read_text())) for p in sorted(root.glob("diagrams/*.json"))}
    pairs = {}
    for p in sorted(root.glob("pairs/*.json")):
        data = json.loads(p.read_text())
        pairs[p.stem] = (from_dict(data["before"]), MoveSpec.from_dict(data["move"]), from_dict(data["after"]))
    sums = {}
    for p in sorted(root.glob("sums/*.json")):
        data = json.loads(p.read_text())
        sums[p.stem] = (from_dict(data["diagram"]), bool(data.get("commutator", False)))
    return diagrams, pairs, sums


if __name__ == "__main__":
    for path in write_corpus(BUNDLED):
        print(path)
