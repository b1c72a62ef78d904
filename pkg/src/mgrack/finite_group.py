"""Finite groups stored as dense Cayley tables.

Products are written left to right: ``table[g, h]`` is ``g * h`` ("first g,
then h").  Conjugation is the right action ``g^h = h^-1 g h`` so that
``(g^h)^k = g^(hk)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ConstructionError, FormatError

MAX_ORDER = 2**15


def _as_table(table) -> np.ndarray:
    arr = np.asarray(table)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise FormatError(f"group table must be a non-empty square matrix, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        raise FormatError("group table entries must be integers")
    return arr.astype(np.int64)


def verify_group_axioms(table, identity: int) -> bool:
    """Exhaustively check closure, associativity, identity and inverses."""
    t = _as_table(table)
    n = t.shape[0]
    if not 0 <= identity < n:
        return False
    if t.min() < 0 or t.max() >= n:
        return False
    idx = np.arange(n)
    if not (np.array_equal(t[identity], idx) and np.array_equal(t[:, identity], idx)):
        return False
    # (gh)k == g(hk) for every triple
    left = t[t[:, :, None], idx[None, None, :]]
    right = t[idx[:, None, None], t[None, :, :]]
    if not np.array_equal(left, right):
        return False
    # every row contains the identity exactly once and its column partner agrees
    has_inv = (t == identity)
    if not np.all(has_inv.sum(axis=1) == 1):
        return False
    inv = has_inv.argmax(axis=1)
    return bool(np.all(t[inv, idx] == identity))


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: np.ndarray
    identity: int
    inverse: np.ndarray
    labels: tuple[str, ...] = field(default=())
    commutative: bool = False

    @classmethod
    def from_table(cls, table, identity: int | None = None, labels: Sequence[str] | None = None,
                   max_order: int = MAX_ORDER, check: bool = True) -> "FiniteGroup":
        t = _as_table(table)
        n = t.shape[0]
        if n > max_order:
            raise ConstructionError(f"group order {n} exceeds cap {max_order}")
        if identity is None:
            idx = np.arange(n)
            cands = [e for e in range(n) if np.array_equal(t[e], idx) and np.array_equal(t[:, e], idx)]
            if not cands:
                raise ConstructionError("table has no two-sided identity")
            identity = cands[0]
        if check and not verify_group_axioms(t, identity):
            raise ConstructionError("table does not satisfy the group axioms")
        inverse = (t == identity).argmax(axis=1)
        if labels is None:
            labels = [str(i) for i in range(n)]
        if len(labels) != n:
            raise FormatError(f"expected {n} labels, got {len(labels)}")
        t.setflags(write=False)
        inverse.setflags(write=False)
        return cls(t, int(identity), inverse, tuple(labels), bool(np.array_equal(t, t.T)))

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"

    def mul(self, g: int, h: int) -> int:
        return int(self.table[g, h])

    def inv(self, g: int) -> int:
        return int(self.inverse[g])

    def prod(self, *elems: int) -> int:
        out = self.identity
        for g in elems:
            out = int(self.table[out, g])
        return out

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def conjugation_table(self) -> np.ndarray:
        """``c[g, h] = h^-1 g h``."""
        t, inv = self.table, self.inverse
        return t[t[inv[None, :], np.arange(self.order)[:, None]], np.arange(self.order)[None, :]]

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "table": self.table.tolist(),
            "identity": self.identity,
            "labels": list(self.labels),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FiniteGroup":
        unknown = set(data) - {"order", "table", "identity", "labels", "kind", "schema"}
        if unknown:
            raise FormatError(f"unknown group fields: {sorted(unknown)}")
        try:
            order, table, identity = data["order"], data["table"], data["identity"]
        except KeyError as exc:
            raise FormatError(f"group file missing field {exc}") from None
        t = _as_table(table)
        if t.shape[0] != order:
            raise FormatError(f"order {order} does not match table size {t.shape[0]}")
        return cls.from_table(t, identity, data.get("labels"), check=False)


@dataclass(frozen=True)
class SubgroupWitness:
    parent: FiniteGroup
    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(set(int(m) for m in self.members))))
        if not is_subgroup(self.parent, self.members):
            raise ConstructionError(f"{list(self.members)} is not a subgroup")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, g: int) -> bool:
        return g in self.members

    def position(self, g: int) -> int:
        return self.members.index(g)


def conjugate(G: FiniteGroup, g: int, h: int) -> int:
    """Right conjugation ``g^h = h^-1 g h``."""
    return G.prod(G.inv(h), g, h)


def commutator(G: FiniteGroup, A: int, B: int) -> int:
    """``[A, B] = A B A^-1 B^-1``."""
    return G.prod(A, B, G.inv(A), G.inv(B))


def is_subgroup(G: FiniteGroup, members: Iterable[int]) -> bool:
    s = set(int(m) for m in members)
    if G.identity not in s or any(not 0 <= m < G.order for m in s):
        return False
    return all(G.mul(a, b) in s for a in s for b in s) and all(G.inv(a) in s for a in s)


def is_normal_subgroup(G: FiniteGroup, members: Iterable[int]) -> bool:
    s = set(int(m) for m in members)
    if not is_subgroup(G, s):
        return False
    return all(conjugate(G, n, g) in s for n in s for g in range(G.order))


def normal_subgroups(G: FiniteGroup) -> list[SubgroupWitness]:
    """All normal subgroups, sorted by size.

    Enumerates unions of conjugacy classes, so only usable for small groups.
    """
    classes = []
    seen = set()
    for g in range(G.order):
        if g in seen:
            continue
        cls = {conjugate(G, g, h) for h in range(G.order)}
        seen |= cls
        classes.append(cls)
    found = []
    for mask in range(1 << len(classes)):
        s = set()
        for i, cls in enumerate(classes):
            if mask >> i & 1:
                s |= cls
        if is_normal_subgroup(G, s):
            found.append(SubgroupWitness(G, tuple(s)))
    found.sort(key=lambda w: (len(w), w.members))
    return found


def semidirect_right_conj(G: FiniteGroup, N: SubgroupWitness) -> FiniteGroup:
    """The group on pairs ``(g, n)`` with ``(g1, n1)(g2, n2) = (g1 g2, n1^g2 n2)``.

    Pair ``(g, n)`` is stored at index ``g * |N| + N.position(n)``.
    """
    if N.parent is not G:
        raise ConstructionError("subgroup witness belongs to a different group")
    if not is_normal_subgroup(G, N.members):
        raise ConstructionError("N is not a normal subgroup of G")
    members = np.array(N.members)
    k = len(members)
    pos = np.full(G.order, -1)
    pos[members] = np.arange(k)
    t, inv = G.table, G.inverse
    g1 = np.repeat(np.arange(G.order), k)
    n1 = np.tile(members, G.order)
    # n1^g2 = g2^-1 n1 g2
    g2, m2 = g1, n1
    first = t[g1[:, None], g2[None, :]]
    conj = t[t[inv[g2][None, :], n1[:, None]], g2[None, :]]
    second = t[conj, m2[None, :]]
    table = first * k + pos[second]
    labels = [f"({G.labels[g]},{G.labels[n]})" for g, n in zip(g1, n1)]
    identity = G.identity * k + int(pos[G.identity])
    return FiniteGroup.from_table(table, identity, labels, check=False)


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    a = np.repeat(np.arange(G.order), H.order)
    b = np.tile(np.arange(H.order), G.order)
    table = G.table[a[:, None], a[None, :]] * H.order + H.table[b[:, None], b[None, :]]
    labels = [f"({G.labels[i]},{H.labels[j]})" for i, j in zip(a, b)]
    return FiniteGroup.from_table(table, G.identity * H.order + H.identity, labels, check=False)


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise ConstructionError("cyclic group order must be positive")
    idx = np.arange(n)
    return FiniteGroup.from_table((idx[:, None] + idx[None, :]) % n, 0, [str(i) for i in range(n)],
                                  check=False)


S3_LABELS = ("e", "a", "a2", "x", "ax", "a2x")


def s3_presented() -> FiniteGroup:
    """S3 as <a, x | a^3 = x^2 = e, xax = a^2>.

    Element ``a^i x^j`` has index ``i + 3j``.  The relation gives
    ``x a^k = a^-k x``, hence ``(a^i x^j)(a^k x^l) = a^(i + (-1)^j k) x^(j+l)``.
    """
    table = np.empty((6, 6), dtype=np.int64)
    for g in range(6):
        i, j = g % 3, g // 3
        for h in range(6):
            k, l = h % 3, h // 3
            table[g, h] = (i + (-1) ** j * k) % 3 + 3 * ((j + l) % 2)
    return FiniteGroup.from_table(table, 0, S3_LABELS, check=False)
