"""Finite racks, quandles and G-families of racks."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConstructionError, FormatError
from .finite_group import FiniteGroup, cyclic_group, s3_presented


def _square(op, name="op") -> np.ndarray:
    arr = np.array(op, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise FormatError(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    if arr.min() < 0 or arr.max() >= arr.shape[0]:
        raise FormatError(f"{name} has entries outside 0..{arr.shape[0] - 1}")
    return arr


@dataclass(frozen=True, eq=False)
class Rack:
    """``op[x, y] = x * y``.  Nothing is verified on construction."""

    op: np.ndarray

    def __post_init__(self):
        op = _square(self.op)
        op.setflags(write=False)
        object.__setattr__(self, "op", op)

    @property
    def size(self) -> int:
        return self.op.shape[0]

    def __repr__(self) -> str:
        return f"Rack(size={self.size})"

    def to_dict(self) -> dict:
        return {"size": self.size, "op": self.op.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "Rack":
        unknown = set(data) - {"size", "op", "kind", "schema"}
        if unknown:
            raise FormatError(f"unknown rack fields: {sorted(unknown)}")
        if "op" not in data or "size" not in data:
            raise FormatError("rack file needs 'size' and 'op'")
        rack = cls(data["op"])
        if rack.size != data["size"]:
            raise FormatError(f"size {data['size']} does not match table size {rack.size}")
        return rack


def _columns_bijective(op: np.ndarray) -> bool:
    n = op.shape[0]
    return all(len(np.unique(op[:, y])) == n for y in range(n))


def _self_distributive(op: np.ndarray) -> bool:
    n = op.shape[0]
    x = np.arange(n)[:, None, None]
    y = np.arange(n)[None, :, None]
    z = np.arange(n)[None, None, :]
    return bool(np.array_equal(op[op[x, y], z], op[op[x, z], op[y, z]]))


def verify_rack_axioms(R: Rack) -> bool:
    return _columns_bijective(R.op) and _self_distributive(R.op)


def is_quandle(R: Rack) -> bool:
    return verify_rack_axioms(R) and bool(np.all(np.diag(R.op) == np.arange(R.size)))


def dihedral_quandle(n: int) -> Rack:
    """``x * y = 2y - x (mod n)``."""
    idx = np.arange(n)
    return Rack((2 * idx[None, :] - idx[:, None]) % n)


def trivial_rack(n: int) -> Rack:
    return Rack(np.repeat(np.arange(n)[:, None], n, axis=1))


def _perm_order(perm: np.ndarray) -> int:
    seen = np.zeros(len(perm), dtype=bool)
    order = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length, i = 0, start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
            length += 1
        order = math.lcm(order, length)
    return order


def rack_type(R: Rack) -> int:
    """Least k > 0 with ``S_y^k = id`` for every y: the lcm of the orders of the columns."""
    if not _columns_bijective(R.op):
        raise ConstructionError("rack columns are not permutations")
    return math.lcm(*(_perm_order(R.op[:, y]) for y in range(R.size)))


@dataclass(frozen=True, eq=False)
class GFamilyOfRacks:
    """A set X with operations ``ops[g, x, y] = x *^g y`` indexed by a finite group."""

    group: FiniteGroup
    ops: np.ndarray

    def __post_init__(self):
        ops = np.array(self.ops, dtype=np.int64)
        if ops.ndim != 3 or ops.shape[0] != self.group.order or ops.shape[1] != ops.shape[2]:
            raise FormatError(f"ops must have shape (|G|, n, n), got {ops.shape}")
        if ops.min() < 0 or ops.max() >= ops.shape[1]:
            raise FormatError("ops has entries outside the carrier")
        ops.setflags(write=False)
        object.__setattr__(self, "ops", ops)

    @property
    def carrier_size(self) -> int:
        return self.ops.shape[1]

    def __repr__(self) -> str:
        return f"GFamilyOfRacks(carrier={self.carrier_size}, |G|={self.group.order})"

    def slice(self, g: int) -> Rack:
        return Rack(self.ops[g])

    def to_dict(self) -> dict:
        return {
            "carrier": self.carrier_size,
            "group": self.group.to_dict(),
            "ops": {str(g): self.ops[g].tolist() for g in range(self.group.order)},
        }

    @classmethod
    def from_dict(cls, data: dict, group: FiniteGroup | None = None) -> "GFamilyOfRacks":
        """``group`` overrides the embedded one (used when the file holds a reference)."""
        unknown = set(data) - {"carrier", "group", "ops", "default", "kind", "schema"}
        if unknown:
            raise FormatError(f"unknown gfamily fields: {sorted(unknown)}")
        if "carrier" not in data or "ops" not in data:
            raise FormatError("gfamily file needs 'carrier' and 'ops'")
        if group is None:
            if not isinstance(data.get("group"), dict):
                raise FormatError("gfamily 'group' must be an inline group object")
            group = FiniteGroup.from_dict(data["group"])
        n = data["carrier"]
        given = {}
        for key, table in data["ops"].items():
            try:
                g = int(key)
            except ValueError:
                raise FormatError(f"ops key {key!r} is not a group element index") from None
            if not 0 <= g < group.order:
                raise FormatError(f"ops key {g} outside group of order {group.order}")
            given[g] = _square(table, f"ops[{g}]")
        missing = [g for g in range(group.order) if g not in given]
        if missing:
            if "default" not in data:
                raise FormatError(f"ops missing for elements {missing} and no 'default' table given")
            default = _square(data["default"], "default")
            for g in missing:
                given[g] = default
        ops = np.stack([given[g] for g in range(group.order)])
        if ops.shape[1] != n:
            raise FormatError(f"carrier {n} does not match table size {ops.shape[1]}")
        return cls(group, ops)


def gfamily_violation(F: GFamilyOfRacks):
    """First failing instance of the G-family axioms, or None."""
    G, ops = F.group, F.ops
    n, k = F.carrier_size, G.order
    idx = np.arange(n)
    if not np.array_equal(ops[G.identity], np.repeat(idx[:, None], n, axis=1)):
        x, y = np.argwhere(ops[G.identity] != idx[:, None])[0]
        return ("identity", int(x), int(y))
    # x *^{gh} y == (x *^g y) *^h y over g, h, x, y
    g = np.arange(k)[:, None, None, None]
    h = np.arange(k)[None, :, None, None]
    x = idx[None, None, :, None]
    y = idx[None, None, None, :]
    lhs = ops[G.table[g, h], x, y]
    rhs = ops[h, ops[g, x, y], y]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        return ("exponent",) + tuple(int(v) for v in bad[0])
    # (x *^g y) *^h z == (x *^h z) *^{h^-1 g h} (y *^h z) over g, h, x, y, z
    conj = G.conjugation_table()
    g = g[..., None]
    h = h[..., None]
    x = x[..., None]
    y = y[..., None]
    z = idx[None, None, None, None, :]
    lhs = ops[h, ops[g, x, y], z]
    rhs = ops[conj[g, h], ops[h, x, z], ops[h, y, z]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        return ("exchange",) + tuple(int(v) for v in bad[0])
    return None


def verify_gfamily_axioms(F: GFamilyOfRacks) -> bool:
    return gfamily_violation(F) is None


def example_z3_s3() -> GFamilyOfRacks:
    """X = Z3, G = S3; odd permutations act by ``2b - a``, even ones trivially."""
    G = s3_presented()
    dihedral = dihedral_quandle(3).op
    trivial = trivial_rack(3).op
    odd = {G.index("x"), G.index("ax"), G.index("a2x")}
    return GFamilyOfRacks(G, np.stack([dihedral if g in odd else trivial for g in range(G.order)]))


def gfamily_from_rack(R: Rack) -> GFamilyOfRacks:
    """The Z_n-family ``x *^k y = S_y^k(x)`` with n the rack type."""
    n = rack_type(R)
    m = R.size
    ops = np.empty((n, m, m), dtype=np.int64)
    ops[0] = np.arange(m)[:, None]
    for k in range(1, n):
        ops[k] = R.op[ops[k - 1], np.arange(m)[None, :]]
    return GFamilyOfRacks(cyclic_group(n), ops)


def enumerate_racks(n: int) -> list[Rack]:
    """Every rack structure on {0, ..., n-1} (labelled, not up to isomorphism)."""
    perms = np.array(list(itertools.permutations(range(n))))
    # candidate tables: columns are independent permutations
    choice = np.array(list(itertools.product(range(len(perms)), repeat=n)))
    cols = perms[choice]  # (count, y, x)
    tables = cols.transpose(0, 2, 1)
    x = np.arange(n)[:, None, None]
    y = np.arange(n)[None, :, None]
    z = np.arange(n)[None, None, :]
    ok = np.ones(len(tables), dtype=bool)
    rows = np.arange(len(tables))[:, None, None, None]
    lhs = tables[rows, tables[rows, x, y], z]
    rhs = tables[rows, tables[rows, x, z], tables[rows, y, z]]
    ok &= (lhs == rhs).reshape(len(tables), -1).all(axis=1)
    return [Rack(t) for t in tables[ok]]
