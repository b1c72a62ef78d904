"""Command line entry point: ``mgrack <subcommand> ...``.

Every subcommand prints one JSON document on stdout (keys sorted, so output
is byte-stable) and sends human-readable diagnostics to stderr.

Exit codes: 0 success, 1 ``star`` found no non-trivial coloring,
2 usage or format error, 3 a mathematical check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import nullcontext
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .coloring import check_property_star, count_colorings
from .corpus import BUNDLED
from .diagram import from_dict as diagram_from_dict
from .diagram import isomorphic, serialize, to_dict as diagram_to_dict, validate
from .errors import CocycleInvalid, MgrackError
from .finite_group import FiniteGroup, SubgroupWitness, cyclic_group, is_normal_subgroup, s3_presented, verify_group_axioms
from .mgr import (CocycleData, MultipleGroupRack, abelian_extension, associated_mgr, semidirect_mgr,
                  verify_mgr_axioms)
from .moves import MoveSpec, apply_move
from .rack import (GFamilyOfRacks, Rack, example_z3_s3, gfamily_from_rack, gfamily_violation, rack_type,
                   verify_rack_axioms, is_quandle)

SCHEMA_VERSIONS = {"cocycle": 1, "diagram": 1, "gfamily": 1, "group": 1, "mgr": 1, "move": 1, "rack": 1}

OK, FALSE, USAGE, VIOLATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    inputs: dict = field(default_factory=dict)
    out: Path | None = None
    jobs: int = 1


def emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def note(msg: str) -> None:
    print(msg, file=sys.stderr)


def read_json(path) -> dict:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {p}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"{p}: not valid JSON ({exc})") from None


def detect_kind(data) -> str:
    if not isinstance(data, dict):
        raise UsageError("structure file must hold a JSON object")
    if "kind" in data:
        return data["kind"]
    keys = set(data)
    for kind, needed in (("mgr", {"components", "star"}), ("gfamily", {"carrier", "ops"}),
                         ("cocycle", {"target", "f_rack"}), ("rack", {"size", "op"}),
                         ("group", {"order", "table"}), ("diagram", {"arcs"})):
        if needed <= keys:
            return kind
    raise UsageError(f"cannot tell what kind of structure has keys {sorted(keys)}")


LOADERS = {
    "group": FiniteGroup.from_dict,
    "rack": Rack.from_dict,
    "gfamily": GFamilyOfRacks.from_dict,
    "mgr": MultipleGroupRack.from_dict,
    "cocycle": CocycleData.from_dict,
    "diagram": diagram_from_dict,
}


def load(path, expect: str | None = None):
    data = read_json(path)
    if expect == "diagram" and isinstance(data, dict) and isinstance(data.get("diagram"), dict):
        data = data["diagram"]  # a sums/headline fixture wrapping its diagram
    kind = detect_kind(data)
    if kind not in LOADERS:
        raise UsageError(f"{path}: unknown kind {kind!r}")
    if expect is not None and kind != expect:
        raise UsageError(f"{path}: expected a {expect} file, found {kind}")
    return kind, LOADERS[kind](data)


def tagged(kind: str, data: dict) -> dict:
    return {"kind": kind, "schema": SCHEMA_VERSIONS[kind], **data}


def write_out(path: Path | None, text: str) -> None:
    if path is not None:
        Path(path).write_text(text)


# -- verify -------------------------------------------------------------------

def cmd_verify(cfg: RunConfig) -> int:
    kind, obj = load(cfg.inputs["structure"])
    report: dict = {"kind": kind}
    if kind == "group":
        report["ok"] = verify_group_axioms(obj.table, obj.identity)
    elif kind == "rack":
        report["ok"] = verify_rack_axioms(obj)
        report["size"] = obj.size
        if report["ok"]:
            report["quandle"] = is_quandle(obj)
            report["type"] = rack_type(obj)
    elif kind == "gfamily":
        v = gfamily_violation(obj)
        report["ok"] = v is None
        report["violation"] = None if v is None else [str(t) for t in v]
    elif kind == "mgr":
        rep = verify_mgr_axioms(obj)
        report["ok"] = rep.ok
        report["elements"] = obj.size
        report["components"] = [int(s) for s in obj.sizes]
        report["violation"] = None if rep.ok else [str(t) for t in rep.first_violation]
    elif kind == "diagram":
        rep = validate(obj)
        report["ok"] = rep.ok
        report["violation"] = rep.violation
    else:
        raise UsageError(f"verify does not handle {kind} files")
    emit(report)
    if not report["ok"]:
        note(f"verify: {kind} fails its axioms: {report.get('violation')}")
        return VIOLATION
    return OK


# -- build --------------------------------------------------------------------

def _normal(G: FiniteGroup, spec: str) -> SubgroupWitness:
    if spec == "full":
        members = range(G.order)
    elif spec == "trivial":
        members = [G.identity]
    else:
        try:
            members = [int(t) for t in spec.split(",")]
        except ValueError:
            raise UsageError(f"--normal must be full, trivial or comma-separated indices, got {spec!r}") from None
    members = sorted(set(members))
    if not all(0 <= m < G.order for m in members):
        raise UsageError(f"--normal indices must lie in 0..{G.order - 1}")
    if not is_normal_subgroup(G, members):
        raise MgrackError(f"{members} is not a normal subgroup")
    return SubgroupWitness(G, members)


def cmd_build(cfg: RunConfig, args) -> int:
    what = args.what
    if what in ("assoc", "semidirect"):
        if not args.gfamily:
            raise UsageError(f"build {what} needs --gfamily")
        _, F = load(args.gfamily, "gfamily")
        v = gfamily_violation(F)
        if v is not None:
            emit({"kind": "gfamily", "ok": False, "violation": [str(t) for t in v]})
            note("build: input G-family fails its axioms")
            return VIOLATION
        M = associated_mgr(F) if what == "assoc" else semidirect_mgr(F, _normal(F.group, args.normal))
        kind, data = "mgr", M.to_dict()
        summary = {"elements": M.size, "components": [int(s) for s in M.sizes]}
    elif what == "abelext":
        if not (args.structure and args.cocycle):
            raise UsageError("build abelext needs --structure and --cocycle")
        _, M0 = load(args.structure, "mgr")
        _, c = load(args.cocycle, "cocycle")
        try:
            M = abelian_extension(M0, c)
        except CocycleInvalid as exc:
            emit({"kind": "cocycle", "ok": False, "violation": [str(t) for t in (exc.violation or ())]})
            note(f"build: {exc}")
            return VIOLATION
        kind, data = "mgr", M.to_dict()
        summary = {"elements": M.size, "components": [int(s) for s in M.sizes]}
    elif what == "gfamily":
        if args.example == "z3s3":
            F = example_z3_s3()
        elif args.rack:
            _, R = load(args.rack, "rack")
            F = gfamily_from_rack(R)
        else:
            raise UsageError("build gfamily needs --example z3s3 or --rack FILE")
        kind, data = "gfamily", F.to_dict()
        summary = {"carrier": F.carrier_size, "group_order": F.group.order}
    elif what == "group":
        if args.cyclic is not None:
            G = cyclic_group(args.cyclic)
        elif args.s3:
            G = s3_presented()
        else:
            raise UsageError("build group needs --cyclic N or --s3")
        kind, data = "group", G.to_dict()
        summary = {"order": G.order}
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown build target {what}")
    doc = tagged(kind, data)
    if cfg.out is None:
        emit(doc)
    else:
        write_out(cfg.out, json.dumps(doc, sort_keys=True) + "\n")
        emit({"kind": kind, "out": str(cfg.out), **summary})
    return OK


# -- count / star ---------------------------------------------------------------

def _pool(jobs: int):
    return ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else nullcontext(None)


def cmd_count(cfg: RunConfig) -> int:
    _, D = load(cfg.inputs["diagram"], "diagram")
    _, M = load(cfg.inputs["structure"], "mgr")
    with _pool(cfg.jobs) as pool:
        n = count_colorings(D, M, executor=pool, parts=4 * cfg.jobs)
    emit({"count": n, "arcs": len(D.arcs), "crossings": len(D.crossings),
          "vertices": len(D.vertices), "elements": M.size})
    return OK


def cmd_star(cfg: RunConfig) -> int:
    _, D = load(cfg.inputs["diagram"], "diagram")
    _, M = load(cfg.inputs["structure"], "mgr")
    res = check_property_star(D, M)
    report = {"holds": res.holds, "marked_arc": D.marked_arc, "witness": None}
    if res.witness is not None:
        report["witness"] = {a: {"index": u, "label": M.labels[u]} for a, u in res.witness.assignment.items()}
    emit(report)
    return OK if res.holds else FALSE


# -- move -----------------------------------------------------------------------

def cmd_move(cfg: RunConfig, args) -> int:
    _, D = load(cfg.inputs["diagram"], "diagram")
    spec = args.move
    try:
        data = json.loads(Path(spec).read_text()) if Path(spec).is_file() else json.loads(spec)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--move is neither a file nor JSON: {exc}") from None
    E = apply_move(D, MoveSpec.from_dict(data))
    if cfg.out is None:
        emit(diagram_to_dict(E))
    else:
        write_out(cfg.out, serialize(E))
        emit({"out": str(cfg.out), "arcs": len(E.arcs), "crossings": len(E.crossings),
              "vertices": len(E.vertices)})
    return OK


# -- suite ----------------------------------------------------------------------

def suite_structures() -> dict[str, MultipleGroupRack]:
    F = example_z3_s3()
    return {
        "assoc_z3s3": associated_mgr(F),
        "semidirect_z3s3_full": semidirect_mgr(F, SubgroupWitness(F.group, range(F.group.order))),
    }


def associated_structures() -> dict[str, MultipleGroupRack]:
    from .rack import dihedral_quandle

    return {
        "assoc_z3s3": associated_mgr(example_z3_s3()),
        "assoc_dihedral3": associated_mgr(gfamily_from_rack(dihedral_quandle(3))),
    }


def suite(fixture_dir) -> tuple[int, dict]:
    """Run every invariance and property-(*) check over a fixture directory.

    Returns ``(exit_code, report)``.
    """
    root = Path(fixture_dir)
    files = sorted(p for sub in ("pairs", "sums", "headline") for p in root.glob(f"{sub}/*.json"))
    if not files:
        return USAGE, {"ok": False, "error": f"no fixtures under {root}", "failures": []}
    structures = suite_structures()
    assoc = associated_structures()
    failures: list[dict] = []
    checked = 0

    def fail(path, reason):
        failures.append({"fixture": str(path.relative_to(root)), "reason": reason})

    for path in files:
        group = path.parent.name
        try:
            data = json.loads(path.read_text())
            if group == "pairs":
                before = diagram_from_dict(data["before"])
                after = diagram_from_dict(data["after"])
                move = MoveSpec.from_dict(data["move"])
                if not isomorphic(apply_move(before, move), after):
                    fail(path, "after is not the result of applying the move")
                    continue
                for name, M in structures.items():
                    a, b = count_colorings(before, M), count_colorings(after, M)
                    if a != b:
                        fail(path, f"{name}: counts differ ({a} vs {b})")
            elif group == "sums":
                D = diagram_from_dict(data["diagram"])
                for name, M in assoc.items():
                    if check_property_star(D, M).holds:
                        fail(path, f"{name}: marked arc has a non-trivial color")
                if data.get("commutator") and not check_property_star(D, structures["semidirect_z3s3_full"]).holds:
                    fail(path, "semidirect_z3s3_full: no non-trivial color on the marked arc")
            else:
                D = diagram_from_dict(data["diagram"])
                for name, expected in data.get("expected", {}).items():
                    got = count_colorings(D, structures[name])
                    if got != expected:
                        fail(path, f"{name}: expected {expected} colorings, got {got}")
        except (MgrackError, KeyError, TypeError, json.JSONDecodeError) as exc:
            fail(path, f"unreadable or inapplicable fixture: {exc}")
            continue
        checked += 1
    report = {"ok": not failures, "fixtures": len(files), "failures": failures}
    return (OK if not failures else VIOLATION), report


def cmd_suite(cfg: RunConfig) -> int:
    code, report = suite(cfg.inputs["fixture_dir"])
    emit(report)
    for f in report["failures"]:
        note(f"suite: FAIL {f['fixture']}: {f['reason']}")
    if code == USAGE:
        note(f"suite: {report['error']}")
    return code


# -- argument parsing -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mgrack", description="Multiple group racks and diagram colorings.")
    p.add_argument("--version", action="store_true", help="print package and file-format schema versions")
    sub = p.add_subparsers(dest="subcommand")

    v = sub.add_parser("verify", help="check the axioms of a group, rack, G-family, MGR or diagram file")
    v.add_argument("--structure", required=True)

    b = sub.add_parser("build", help="construct a structure and write it as JSON")
    b.add_argument("what", choices=["assoc", "semidirect", "abelext", "gfamily", "group"])
    b.add_argument("--gfamily")
    b.add_argument("--normal", default="full", help="full, trivial, or comma-separated element indices")
    b.add_argument("--structure", help="base MGR for abelext")
    b.add_argument("--cocycle")
    b.add_argument("--example", choices=["z3s3"])
    b.add_argument("--rack")
    b.add_argument("--cyclic", type=int)
    b.add_argument("--s3", action="store_true")
    b.add_argument("--out")

    c = sub.add_parser("count", help="count colorings of a diagram")
    c.add_argument("--diagram", required=True)
    c.add_argument("--structure", required=True)
    c.add_argument("--jobs", type=int, default=1)

    s = sub.add_parser("star", help="look for a coloring with a non-trivial marked arc")
    s.add_argument("--diagram", required=True)
    s.add_argument("--structure", required=True)

    m = sub.add_parser("move", help="apply a move to a diagram")
    m.add_argument("--diagram", required=True)
    m.add_argument("--move", required=True, help="move JSON, inline or as a file path")
    m.add_argument("--out")

    u = sub.add_parser("suite", help="run the fixture corpus checks")
    u.add_argument("fixture_dir", nargs="?", default=str(BUNDLED))
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.version:
        emit({"mgrack": __version__, "schemas": SCHEMA_VERSIONS})
        return OK
    if args.subcommand is None:
        parser.print_usage(sys.stderr)
        return USAGE
    inputs = {k: getattr(args, k) for k in ("structure", "diagram", "fixture_dir") if getattr(args, k, None)}
    jobs = getattr(args, "jobs", 1)
    if jobs < 1:
        note("--jobs must be at least 1")
        return USAGE
    cfg = RunConfig(args.subcommand, inputs, Path(args.out) if getattr(args, "out", None) else None, jobs)
    try:
        for key, path in inputs.items():
            if key != "fixture_dir" and not Path(path).is_file():
                raise UsageError(f"no such file: {path}")
        if cfg.subcommand == "verify":
            return cmd_verify(cfg)
        if cfg.subcommand == "build":
            return cmd_build(cfg, args)
        if cfg.subcommand == "count":
            return cmd_count(cfg)
        if cfg.subcommand == "star":
            return cmd_star(cfg)
        if cfg.subcommand == "move":
            return cmd_move(cfg, args)
        return cmd_suite(cfg)
    except UsageError as exc:
        note(f"error: {exc}")
        return USAGE
    except MgrackError as exc:
        note(f"error: {exc}")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
