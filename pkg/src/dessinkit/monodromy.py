"""Constellations, the fibred pullback, the xi-product and cover composition."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping

from .perm import (
    Partition,
    Permutation,
    all_permutations,
    canonical_raw,
    class_representative,
    cycle_type,
    genus_of_passport,
    is_transitive_raw,
    orbits_raw,
    partitions,
    permutations_of_type,
)

SLOTS = ("0", "1", "inf")


class NotTransitiveError(ValueError):
    pass


@dataclass(frozen=True)
class PreConstellation:
    """A triple ``(sigma0, sigma1, sigma_inf)`` with ``sigma0*sigma1*sigma_inf == 1``.

    Transitivity is not required; see :class:`Constellation`.
    """

    sigma0: Permutation
    sigma1: Permutation
    sigma_inf: Permutation

    def __post_init__(self):
        n = self.sigma0.degree
        if self.sigma1.degree != n or self.sigma_inf.degree != n:
            raise ValueError("degree mismatch")
        if not (self.sigma0 * self.sigma1 * self.sigma_inf).is_identity():
            raise ValueError("sigma0*sigma1*sigma_inf is not the identity")

    @property
    def n(self) -> int:
        return self.sigma0.degree

    @property
    def gens(self) -> tuple[Permutation, Permutation, Permutation]:
        return (self.sigma0, self.sigma1, self.sigma_inf)

    def slot(self, name: str) -> Permutation:
        return dict(zip(SLOTS, self.gens))[name]

    @property
    def transitive(self) -> bool:
        return is_transitive_raw([self.sigma0.images, self.sigma1.images], self.n)

    def orbits(self) -> list[list[int]]:
        return [[x + 1 for x in o] for o in orbits_raw([self.sigma0.images, self.sigma1.images], self.n)]

    def passport(self) -> tuple[Partition, Partition, Partition]:
        return passport(self)

    def genus(self):
        return genus_of_passport(*passport(self))

    def key(self) -> tuple:
        """Canonical key: equal iff simultaneously conjugate."""
        return canonical_raw([self.sigma0.images, self.sigma1.images], self.n)[0]

    def canonical(self) -> "PreConstellation":
        s0, s1 = self.key()
        return type(self).from_pair(Permutation._raw(s0), Permutation._raw(s1))

    @classmethod
    def from_pair(cls, s0: Permutation, s1: Permutation):
        return cls(s0, s1, (s0 * s1).inverse())

    def relabel(self, rho: Permutation):
        return type(self)(*(g.conjugate(rho) for g in self.gens))

    def __str__(self) -> str:
        return f"[{self.sigma0}, {self.sigma1}, {self.sigma_inf}] (n={self.n})"


@dataclass(frozen=True)
class Constellation(PreConstellation):
    """A transitive :class:`PreConstellation`: the combinatorial Belyi function."""

    def __post_init__(self):
        super().__post_init__()
        if not self.transitive:
            raise NotTransitiveError(f"generated group is intransitive; orbits {self.orbits()}")


@dataclass(frozen=True)
class FourConstellation:
    """Monodromy over ``-1, 0, 1, inf`` with ``sigma_m1*sigma0*sigma1*sigma_inf == 1``."""

    sigma_m1: Permutation
    sigma0: Permutation
    sigma1: Permutation
    sigma_inf: Permutation

    def __post_init__(self):
        if not (self.sigma_m1 * self.sigma0 * self.sigma1 * self.sigma_inf).is_identity():
            raise ValueError("four-term product is not the identity")

    @property
    def n(self) -> int:
        return self.sigma0.degree

    def drop_trivial(self, require_transitive: bool = False) -> PreConstellation:
        """The three-point cover obtained when the slot over -1 is trivial."""
        if not self.sigma_m1.is_identity():
            raise ValueError("monodromy over -1 is not trivial")
        cls = Constellation if require_transitive else PreConstellation
        return cls(self.sigma0, self.sigma1, self.sigma_inf)


def constellation_from_pair(s0: Permutation, s1: Permutation, require_transitive: bool = True) -> PreConstellation:
    if s0.degree != s1.degree:
        raise ValueError("degree mismatch")
    cls = Constellation if require_transitive else PreConstellation
    return cls.from_pair(s0, s1)


def passport(c: PreConstellation) -> tuple[Partition, Partition, Partition]:
    return (cycle_type(c.sigma0), cycle_type(c.sigma1), cycle_type(c.sigma_inf))


def is_isomorphic(a: PreConstellation, b: PreConstellation) -> bool:
    return a.n == b.n and a.key() == b.key()


def sigma_pullback(c: PreConstellation) -> FourConstellation:
    """Monodromy of the base change along ``t = 4f/(f+1)^2``."""
    t0, t1, tinf = c.gens
    t1inv = t1.inverse()
    return FourConstellation(tinf * tinf, t0, t1 * t1, t1inv * t0 * t1)


# --------------------------------------------------------------------------
# xi-product


def xi_pair(mx: Permutation, my: Permutation) -> tuple[Permutation, Permutation]:
    """Product of the pair ``(mx, my)`` with the degree-2 representation xi.

    Point ``(i, b)`` (``b`` in ``{0, 1}``) is stored as ``i + n*b``.  ``x``
    acts on the first coordinate only; ``y`` also swaps the second.
    """
    n = mx.degree
    X = tuple(list(mx.images) + [n + v for v in mx.images])
    Y = tuple([n + v for v in my.images] + list(my.images))
    return Permutation._raw(X), Permutation._raw(Y)


def xi_product(c: PreConstellation, x_slot: str = "inf") -> PreConstellation:
    """Degree-``2n`` product ``m x xi`` with ``m(y) = sigma1``.

    ``x_slot="inf"`` uses the identification ``x -> x_inf, y -> x_1`` so
    that ``m(x) = sigma_inf`` and the result is returned with ``X`` in the
    infinity slot.  ``x_slot="0"`` puts ``m(x) = sigma0`` in the 0 slot,
    which is the monodromy of post-composition with the degree-2 map
    (branched over 1 and infinity).
    """
    if x_slot == "inf":
        X, Y = xi_pair(c.sigma_inf, c.sigma1)
        return PreConstellation((Y * X).inverse(), Y, X)
    if x_slot == "0":
        X, Y = xi_pair(c.sigma0, c.sigma1)
        return PreConstellation.from_pair(X, Y)
    raise ValueError(f"x_slot must be 'inf' or '0', got {x_slot!r}")


# --------------------------------------------------------------------------
# composition of covers


def _bfs_tree(outer: PreConstellation) -> set[tuple[int, int]]:
    """Breadth-first Schreier transversal: tree arcs ``(node, s)``; ``x0`` before ``x1``."""
    n = outer.n
    gens = (outer.sigma0.images, outer.sigma1.images)
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    tree = set()
    while queue:
        x = queue.popleft()
        for s in (0, 1):
            y = gens[s][x]
            if not seen[y]:
                seen[y] = True
                tree.add((x, s))
                queue.append(y)
    return tree


def induce(outer: PreConstellation, arc_value: Callable[[int, int], Permutation], k: int) -> PreConstellation:
    """Induced action of ``<x0, x1>`` on ``{outer points} x {1..k}``.

    ``arc_value(i, s)`` is the inner permutation carried by the lift of
    ``x_s`` starting on sheet ``i`` (0-based); it is the value of the
    Schreier generator ``T(i) x_s T(i x_s)^-1``.  Point ``(i, j)`` is
    stored as ``i*k + j``.
    """
    n = outer.n
    gens = (outer.sigma0.images, outer.sigma1.images)
    out = []
    for s in (0, 1):
        img = [0] * (n * k)
        for i in range(n):
            v = arc_value(i, s).images
            base = gens[s][i] * k
            for j in range(k):
                img[i * k + j] = base + v[j]
        out.append(Permutation._raw(tuple(img)))
    return PreConstellation.from_pair(out[0], out[1])


T_MAP = Constellation.from_pair(Permutation.identity(2), Permutation.from_cycles([[1, 2]], 2))


def compose_with_t(four: FourConstellation) -> PreConstellation:
    """Monodromy of ``t o F`` for ``F`` a cover of the line branched over ``-1, 0, 1, inf``.

    ``t = 4f/(f+1)^2`` has monodromy ``((), (1 2), (1 2))``.  With the
    transversal ``{1, x1}`` the Schreier generators are ``x0``,
    ``x1 x0 x1^-1`` and ``x1^2``; they push forward to loops whose
    monodromy is ``sigma0``, ``sigma1 sigma_inf sigma1^-1`` and ``sigma1``.
    """
    k = four.n
    ident = Permutation.identity(k)
    s1inv = four.sigma1.inverse()
    values = {
        (0, 0): four.sigma0,
        (0, 1): ident,
        (1, 0): four.sigma1 * four.sigma_inf * s1inv,
        (1, 1): four.sigma1,
    }
    return induce(T_MAP, lambda i, s: values[(i, s)], k)


@dataclass(frozen=True)
class _Face:
    kind: str  # "0", "1" or "inf"
    nodes: tuple[int, ...]
    steps: tuple[tuple[tuple[int, int], int], ...]  # ((node, s), +1 | -1)


def _faces(outer: PreConstellation) -> list[_Face]:
    s0inv = outer.sigma0.inverse().images
    s1inv = outer.sigma1.inverse().images
    faces = []
    for kind, g in (("0", outer.sigma0), ("1", outer.sigma1)):
        s = 0 if kind == "0" else 1
        for cyc in g.cycles(include_fixed=True):
            nodes = tuple(x - 1 for x in cyc)
            faces.append(_Face(kind, nodes, tuple(((x, s), 1) for x in nodes)))
    for cyc in outer.sigma_inf.cycles(include_fixed=True):
        nodes = tuple(x - 1 for x in cyc)
        steps = []
        for i in nodes:
            j = s1inv[i]
            l = s0inv[j]
            steps.append(((j, 1), -1))
            steps.append(((l, 0), -1))
        faces.append(_Face("inf", nodes, tuple(steps)))
    return faces


def _holonomy(face: _Face, values: Mapping, k: int) -> Permutation:
    h = Permutation.identity(k)
    for arc, sign in face.steps:
        v = values[arc]
        h = h * (v if sign > 0 else v.inverse())
    return h


def compose_covers(
    outer: PreConstellation,
    inner: PreConstellation,
    marking: Mapping[str, tuple[str, int]],
    root_slot: str = "inf",
    corners: Mapping[str, int] | None = None,
) -> Constellation:
    """Monodromy of ``outer o inner`` when ``inner`` is branched over marked points.

    ``outer`` must have genus 0 so its source is a sphere.  ``marking`` sends
    each inner slot (``"0"``, ``"1"``, ``"inf"``) to a point of one of the
    outer fibres, given as ``(fibre, p)`` meaning the cycle of
    ``sigma_fibre`` through the 1-based point ``p``.  Loops around the
    remaining preimages carry trivial inner monodromy.

    The lift of each base loop is read off the planar graph whose nodes are
    the outer sheets and whose arcs are the lifts of ``x0`` and ``x1``.  In
    the gauge of a breadth-first spanning tree every face of that graph is
    a lasso around one preimage of ``0``, ``1`` or ``infinity``.  Faces are
    solved leaf-first along the dual tree: unmarked faces get trivial
    holonomy and the two marked faces other than ``root_slot`` get the inner
    generators; the root face is then forced by the product relation.
    ``corners`` optionally picks the node (1-based) where a marked lasso
    starts; the result is independent of it up to isomorphism.
    """
    if genus_of_passport(*passport(outer)) != 0:
        raise ValueError("outer cover must have genus 0")
    if not outer.transitive:
        raise ValueError("outer cover must be transitive")
    if set(marking) != set(SLOTS):
        raise ValueError(f"marking must assign every inner slot {SLOTS}, got {sorted(marking)}")
    n, k = outer.n, inner.n
    faces = _faces(outer)
    face_of = {}
    for idx, f in enumerate(faces):
        for x in f.nodes:
            face_of[(f.kind, x)] = idx
    marked: dict[int, str] = {}
    for slot, (fibre, p) in marking.items():
        if fibre not in SLOTS or not 1 <= p <= n:
            raise ValueError(f"bad marking for slot {slot!r}: {(fibre, p)}")
        idx = face_of[(fibre, p - 1)]
        if idx in marked:
            raise ValueError(f"slots {marked[idx]!r} and {slot!r} marked on the same point")
        marked[idx] = slot

    tree = _bfs_tree(outer)
    arc_faces: dict[tuple[int, int], list[int]] = {}
    for idx, f in enumerate(faces):
        for arc, _ in f.steps:
            arc_faces.setdefault(arc, []).append(idx)
    nontree = [a for a in sorted(arc_faces) if a not in tree]
    if len(nontree) != len(faces) - 1:
        raise AssertionError("dual graph is not a tree; outer genus is not 0")

    root = next(idx for idx, s in marked.items() if s == root_slot)
    adj: dict[int, list[tuple[int, tuple[int, int]]]] = {i: [] for i in range(len(faces))}
    for a in nontree:
        f1, f2 = arc_faces[a]
        adj[f1].append((f2, a))
        adj[f2].append((f1, a))
    parent_arc: dict[int, tuple[int, int]] = {}
    order = [root]
    seen = {root}
    dq = deque([root])
    while dq:
        f = dq.popleft()
        for g, a in adj[f]:
            if g not in seen:
                seen.add(g)
                parent_arc[g] = a
                order.append(g)
                dq.append(g)
    if len(order) != len(faces):
        raise AssertionError("dual graph is disconnected")

    ident = Permutation.identity(k)
    values: dict[tuple[int, int], Permutation] = {a: ident for a in tree}
    corners = dict(corners or {})
    for f_idx in reversed(order[1:]):
        face = faces[f_idx]
        slot = marked.get(f_idx)
        target = inner.slot(slot) if slot is not None else ident
        steps = face.steps
        if slot is not None and slot in corners:
            # rotate so the lasso starts at the requested node
            start = corners[slot] - 1
            pos = face.nodes.index(start)
            width = len(steps) // len(face.nodes)
            steps = steps[pos * width :] + steps[: pos * width]
        pa = parent_arc[f_idx]
        pos = next(i for i, (arc, _) in enumerate(steps) if arc == pa)
        before = ident
        for arc, sign in steps[:pos]:
            before = before * (values[arc] if sign > 0 else values[arc].inverse())
        after = ident
        for arc, sign in steps[pos + 1 :]:
            after = after * (values[arc] if sign > 0 else values[arc].inverse())
        v = before.inverse() * target * after.inverse()
        values[pa] = v if steps[pos][1] > 0 else v.inverse()

    root_hol = _holonomy(faces[root], values, k)
    if cycle_type(root_hol) != cycle_type(inner.slot(root_slot)):
        raise AssertionError("root holonomy is not conjugate to the inner generator")
    comp = induce(outer, lambda i, s: values[(i, s)], k).canonical()
    return Constellation(*comp.gens) if comp.transitive else comp


def default_fibre_marking(outer: PreConstellation, fibre: str = "0") -> dict[str, tuple[str, int]]:
    """Mark the three points of a 3-point fibre.

    An unramified point (fixed point) goes to ``inf``; the others take
    ``0`` then ``1`` in order of their least sheet.
    """
    cycs = outer.slot(fibre).cycles(include_fixed=True)
    if len(cycs) != 3:
        raise ValueError(f"fibre over {fibre} has {len(cycs)} points, need 3")
    cycs.sort(key=lambda c: (len(c) == 1, min(c)))
    return {slot: (fibre, min(c)) for slot, c in zip(SLOTS, cycs)}


# --------------------------------------------------------------------------
# enumeration


def iter_constellations(n: int, transitive: bool = True, psi0: Partition | None = None) -> Iterator[PreConstellation]:
    """One representative per simultaneous-conjugacy class of degree-``n`` triples."""
    seen = set()
    types = [psi0] if psi0 is not None else list(partitions(n))
    cls = Constellation if transitive else PreConstellation
    for psi in types:
        s0 = class_representative(psi)
        for s1 in all_permutations(n):
            if transitive and not is_transitive_raw([s0.images, s1.images], n):
                continue
            key = canonical_raw([s0.images, s1.images], n)[0]
            if key in seen:
                continue
            seen.add(key)
            yield cls.from_pair(Permutation._raw(key[0]), Permutation._raw(key[1]))


def find_constellation(
    psi0: Partition, psi1: Partition, psi_inf: Partition, transitive: bool = True
) -> Constellation | None:
    """First triple with the given passport in a fixed deterministic search order."""
    n = sum(psi0)
    s0 = class_representative(psi0)
    for s1 in permutations_of_type(psi1):
        sinf = (s0 * s1).inverse()
        if cycle_type(sinf) != tuple(psi_inf):
            continue
        if transitive and not is_transitive_raw([s0.images, s1.images], n):
            continue
        return (Constellation if transitive else PreConstellation)(s0, s1, sinf)
    return None


def t0_model() -> Constellation:
    """The degree-5 triple of passport ``((2,2,1), (5), (2,2,1))`` found by search."""
    c = find_constellation((2, 2, 1), (5,), (2, 2, 1))
    assert c is not None
    return c
