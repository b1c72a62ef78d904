"""Multiple group racks: a disjoint union of finite groups with a global ``*``.

Elements are numbered globally: element ``i`` of component ``lam`` sits at
``offsets[lam] + i``.  The operation is a dense ``star`` table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import numpy as np

from .errors import CocycleInvalid, ConstructionError, FormatError
from .finite_group import FiniteGroup, SubgroupWitness, is_normal_subgroup, semidirect_right_conj
from .rack import GFamilyOfRacks


@dataclass(frozen=True, eq=False)
class MultipleGroupRack:
    components: tuple[FiniteGroup, ...]
    star: np.ndarray
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise FormatError("an MGR needs at least one component")
        sizes = np.array([g.order for g in comps])
        n = int(sizes.sum())
        star = np.array(self.star, dtype=np.int64)
        if star.shape != (n, n):
            raise FormatError(f"star must be {n}x{n}, got {star.shape}")
        if star.min() < 0 or star.max() >= n:
            raise FormatError("star has entries outside the element range")
        star.setflags(write=False)
        offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]])
        comp_of = np.repeat(np.arange(len(comps)), sizes)
        local_of = np.arange(n) - offsets[comp_of]
        inverse = np.empty(n, dtype=np.int64)
        identities = offsets + np.array([g.identity for g in comps])
        # product of two elements in the same component, -1 across components
        mul = np.full((n, n), -1, dtype=np.int64)
        for lam, g in enumerate(comps):
            lo = offsets[lam]
            sl = slice(lo, lo + g.order)
            mul[sl, sl] = g.table + lo
            inverse[sl] = g.inverse + lo
        labels = tuple(self.labels) or tuple(str(i) for i in range(n))
        if len(labels) != n:
            raise FormatError(f"expected {n} labels, got {len(labels)}")
        for arr in (offsets, comp_of, local_of, inverse, identities, mul):
            arr.setflags(write=False)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "star", star)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "comp_of", comp_of)
        object.__setattr__(self, "local_of", local_of)
        object.__setattr__(self, "inverse", inverse)
        object.__setattr__(self, "identities", identities)
        object.__setattr__(self, "mul", mul)

    @property
    def size(self) -> int:
        return self.star.shape[0]

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"MultipleGroupRack(elements={self.size}, components={len(self.components)})"

    def element(self, lam: int, i: int) -> int:
        return int(self.offsets[lam] + i)

    def component(self, lam: int) -> np.ndarray:
        return np.arange(self.offsets[lam], self.offsets[lam] + self.sizes[lam])

    def is_identity(self, u: int) -> bool:
        return int(self.identities[self.comp_of[u]]) == u

    def to_dict(self) -> dict:
        return {
            "components": [g.to_dict() for g in self.components],
            "star": self.star.tolist(),
            "labels": list(self.labels),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MultipleGroupRack":
        unknown = set(data) - {"components", "star", "labels", "kind", "schema"}
        if unknown:
            raise FormatError(f"unknown MGR fields: {sorted(unknown)}")
        if "components" not in data or "star" not in data:
            raise FormatError("MGR file needs 'components' and 'star'")
        comps = [FiniteGroup.from_dict(c) for c in data["components"]]
        return cls(tuple(comps), data["star"], tuple(data.get("labels") or ()))


def star_inverse(M: MultipleGroupRack, z: int, y: int) -> int:
    """The unique x with ``x * y = z``; equals ``z * y^-1``."""
    return int(M.star[z, M.inverse[y]])


@dataclass(frozen=True)
class MGRReport:
    ok: bool
    first_violation: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def _first(mask: np.ndarray):
    bad = np.argwhere(mask)
    return tuple(int(v) for v in bad[0]) if len(bad) else None


def verify_mgr_axioms(M: MultipleGroupRack) -> MGRReport:
    """Exhaustive check of the three MGR axioms.

    Violations are tuples ``(axiom, *indices)``; indices are global elements
    except ``lam`` in the axiom (iii) entries.
    """
    star, mul = M.star, M.mul
    n = M.size
    every = np.arange(n)
    for lam in range(len(M.components)):
        comp = M.component(lam)
        e = int(M.identities[lam])
        bad = np.nonzero(star[:, e] != every)[0]
        if len(bad):
            return MGRReport(False, ("i-identity", int(bad[0]), e))
        # x * (ab) == (x * a) * b
        ab = mul[comp[:, None], comp[None, :]]
        lhs = star[every[:, None, None], ab[None, :, :]]
        rhs = star[star[every[:, None, None], comp[None, :, None]], comp[None, None, :]]
        hit = _first(lhs != rhs)
        if hit:
            x, a, b = hit
            return MGRReport(False, ("i", x, int(comp[a]), int(comp[b])))
    # (x * y) * z == (x * z) * (y * z)
    x = every[:, None, None]
    y = every[None, :, None]
    z = every[None, None, :]
    hit = _first(star[star[x, y], z] != star[star[x, z], star[y, z]])
    if hit:
        return MGRReport(False, ("ii",) + hit)
    for lam in range(len(M.components)):
        comp = M.component(lam)
        images = star[comp, :]  # a * x for a in G_lam, every x
        targets = M.comp_of[images]
        split = np.nonzero((targets != targets[0][None, :]).any(axis=0))[0]
        if len(split):
            xx = int(split[0])
            a = int(np.nonzero(targets[:, xx] != targets[0, xx])[0][0])
            return MGRReport(False, ("iii-component", lam, xx, int(comp[0]), int(comp[a])))
        # (ab) * x == (a * x)(b * x)
        ab = mul[comp[:, None], comp[None, :]]
        lhs = star[ab[:, :, None], every[None, None, :]]
        rhs = mul[images[:, None, :], images[None, :, :]]
        hit = _first(lhs != rhs)
        if hit:
            a, b, xx = hit
            return MGRReport(False, ("iii", lam, xx, int(comp[a]), int(comp[b])))
    return MGRReport(True)


def mcq_violation(M: MultipleGroupRack):
    """First same-component pair with ``a * b != b^-1 a b``, or None."""
    for lam in range(len(M.components)):
        comp = M.component(lam)
        a = comp[:, None]
        b = comp[None, :]
        conj = M.mul[M.mul[M.inverse[b], a], b]
        hit = _first(M.star[a, b] != conj)
        if hit:
            return int(comp[hit[0]]), int(comp[hit[1]])
    return None


def is_mcq(M: MultipleGroupRack) -> bool:
    return mcq_violation(M) is None


def homomorphism_violation(f, M: MultipleGroupRack, M2: MultipleGroupRack):
    f = np.asarray(f, dtype=np.int64)
    if f.shape != (M.size,):
        raise FormatError(f"map must have length {M.size}")
    if f.min() < 0 or f.max() >= M2.size:
        raise FormatError("map sends elements outside the target")
    # f(x * y) == f(x) * f(y)
    hit = _first(f[M.star] != M2.star[f[:, None], f[None, :]])
    if hit:
        return ("star",) + hit
    for lam in range(len(M.components)):
        comp = M.component(lam)
        targets = M2.comp_of[f[comp]]
        if np.any(targets != targets[0]):
            return ("component", lam)
        prod = M2.mul[f[comp][:, None], f[comp][None, :]]
        hit = _first(f[M.mul[comp[:, None], comp[None, :]]] != prod)
        if hit:
            return ("product", int(comp[hit[0]]), int(comp[hit[1]]))
    return None


def is_mgr_homomorphism(f, M: MultipleGroupRack, M2: MultipleGroupRack) -> bool:
    return homomorphism_violation(f, M, M2) is None


def trivial_mgr(G: FiniteGroup) -> MultipleGroupRack:
    """One component with ``x * y = x``."""
    n = G.order
    return MultipleGroupRack((G,), np.repeat(np.arange(n)[:, None], n, axis=1), G.labels)


def conjugation_mgr(G: FiniteGroup) -> MultipleGroupRack:
    """One component with ``a * b = b^-1 a b``."""
    return MultipleGroupRack((G,), G.conjugation_table(), G.labels)


def associated_mgr(F: GFamilyOfRacks) -> MultipleGroupRack:
    """X x G with ``(x, g) * (y, h) = (x *^h y, h^-1 g h)``; element ``(x, g)`` at ``x|G| + g``."""
    G = F.group
    k, n = G.order, F.carrier_size
    x = np.repeat(np.arange(n), k)
    g = np.tile(np.arange(k), n)
    conj = G.conjugation_table()
    star = F.ops[g[None, :], x[:, None], x[None, :]] * k + conj[g[:, None], g[None, :]]
    labels = tuple(f"({xi},{G.labels[gi]})" for xi, gi in zip(x, g))
    return MultipleGroupRack(tuple(G for _ in range(n)), star, labels)


def semidirect_mgr(F: GFamilyOfRacks, N: SubgroupWitness) -> MultipleGroupRack:
    """X x (G |x N) with

    ``(x, (g1, n1)) * (y, (g2, n2)) = (x *^{g2 n2} y, (g1^{g2 n2}, n1^{g2 n2}))``

    and components ``{x} x (G |x N)``.  Element ``(x, (g, n))`` sits at
    ``x |G||N| + g |N| + N.position(n)``.
    """
    G = F.group
    if N.parent is not G:
        raise ConstructionError("normal subgroup must be given in the family's group")
    if not is_normal_subgroup(G, N.members):
        raise ConstructionError("N is not a normal subgroup of G")
    H = semidirect_right_conj(G, N)
    k, m = len(N), H.order
    members = np.array(N.members)
    pos = np.full(G.order, -1)
    pos[members] = np.arange(k)
    n = F.carrier_size
    x = np.repeat(np.arange(n), m)
    loc = np.tile(np.arange(m), n)
    g, nn = loc // k, members[loc % k]
    act = G.table[g, nn]  # g n as an element of G
    conj = G.conjugation_table()
    g1 = conj[g[:, None], act[None, :]]
    n1 = conj[nn[:, None], act[None, :]]
    star = F.ops[act[None, :], x[:, None], x[None, :]] * m + g1 * k + pos[n1]
    labels = tuple(f"({xi},{H.labels[li]})" for xi, li in zip(x, loc))
    return MultipleGroupRack(tuple(H for _ in range(n)), star, labels)


@dataclass(frozen=True, eq=False)
class CocycleData:
    """Values of a candidate 2-cocycle into an abelian group A.

    ``f_rack[u, v]`` is the value on <u><v>; ``f_group[lam][i, j]`` the value
    on <i, j> for local indices of component ``lam``.
    """

    target: FiniteGroup
    f_rack: np.ndarray
    f_group: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not self.target.commutative:
            raise ConstructionError("cocycle target group must be abelian")
        object.__setattr__(self, "f_rack", np.asarray(self.f_rack, dtype=np.int64))
        object.__setattr__(self, "f_group", tuple(np.asarray(t, dtype=np.int64) for t in self.f_group))

    @classmethod
    def zero(cls, M: MultipleGroupRack, target: FiniteGroup) -> "CocycleData":
        e = target.identity
        return cls(target, np.full((M.size, M.size), e),
                   tuple(np.full((g.order, g.order), e) for g in M.components))

    def to_dict(self) -> dict:
        return {
            "target": self.target.to_dict(),
            "f_rack": self.f_rack.tolist(),
            "f_group": [t.tolist() for t in self.f_group],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CocycleData":
        unknown = set(data) - {"target", "f_rack", "f_group", "kind", "schema"}
        if unknown:
            raise FormatError(f"unknown cocycle fields: {sorted(unknown)}")
        try:
            return cls(FiniteGroup.from_dict(data["target"]), data["f_rack"], tuple(data["f_group"]))
        except KeyError as exc:
            raise FormatError(f"cocycle file missing field {exc}") from None


def abelian_extension(M: MultipleGroupRack, c: CocycleData) -> MultipleGroupRack:
    """X x A with twisted operations

    ``(x, a) * (y, b) = (x * y, a + f(<x><y>))`` and
    ``(x1, a)(x2, b) = (x1 x2, a + b + f(<x1, x2>))``.

    Raises CocycleInvalid when the result is not a multiple group rack.
    Element ``(u, a)`` sits at ``offsets[lam] * |A| + local(u) * |A| + a``.
    """
    A = c.target
    q = A.order
    if c.f_rack.shape != (M.size, M.size):
        raise FormatError(f"f_rack must be {M.size}x{M.size}")
    if len(c.f_group) != len(M.components):
        raise FormatError("f_group needs one table per component")
    comps = []
    for lam, (G, f) in enumerate(zip(M.components, c.f_group)):
        if f.shape != (G.order, G.order):
            raise FormatError(f"f_group[{lam}] must be {G.order}x{G.order}")
        i = np.repeat(np.arange(G.order), q)
        a = np.tile(np.arange(q), G.order)
        val = A.table[A.table[a[:, None], a[None, :]], f[i[:, None], i[None, :]]]
        table = G.table[i[:, None], i[None, :]] * q + val
        try:
            comps.append(FiniteGroup.from_table(table, labels=[f"({G.labels[s]},{A.labels[t]})" for s, t in zip(i, a)]))
        except ConstructionError as exc:
            raise CocycleInvalid(f"component {lam} is not a group: {exc}", ("group", lam)) from None
    u = np.repeat(np.arange(M.size), q)
    a = np.tile(np.arange(q), M.size)
    prod = M.star[u[:, None], u[None, :]]
    val = A.table[a[:, None], c.f_rack[u[:, None], u[None, :]]]
    star = prod * q + val
    labels = tuple(f"({M.labels[s]},{A.labels[t]})" for s, t in zip(u, a))
    ext = MultipleGroupRack(tuple(comps), star, labels)
    report = verify_mgr_axioms(ext)
    if not report.ok:
        raise CocycleInvalid(f"extension violates MGR axiom: {report.first_violation}", report.first_violation)
    return ext


def extension_projection(M: MultipleGroupRack, target: FiniteGroup) -> np.ndarray:
    """The map ``(x, a) -> x`` as an index array."""
    return np.repeat(np.arange(M.size), target.order)
