"""Permutations and partitions.

Points are 1-based at every public boundary (cycle notation, JSON) and
0-based inside ``Permutation.images``.  Permutations act on the right:
``a * b`` means "apply ``a``, then ``b``", so ``(a * b)(i) == b(a(i))``.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from fractions import Fraction
from itertools import permutations as _itperms
from math import gcd, lcm
from typing import Iterable, Iterator, Sequence

Partition = tuple  # non-increasing tuple of positive ints


class Permutation:
    """A permutation of ``{1..n}`` stored as a tuple of 0-based images."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a bijection of 0..{len(images) - 1}: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def _raw(cls, images: tuple) -> "Permutation":
        p = cls.__new__(cls)
        p.images = images
        p._hash = hash(images)
        return p

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._raw(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int | None = None) -> "Permutation":
        """Build from 1-based cycles, e.g. ``[[1, 2], [3, 4]]``."""
        cycles = [list(c) for c in cycles]
        pts = [x for c in cycles for x in c]
        if len(pts) != len(set(pts)):
            raise ValueError(f"cycles are not disjoint: {cycles}")
        if any(x < 1 for x in pts):
            raise ValueError("points are 1-based")
        if n is None:
            n = max(pts, default=0)
        if pts and max(pts) > n:
            raise ValueError(f"point {max(pts)} exceeds degree {n}")
        img = list(range(n))
        for c in cycles:
            for a, b in zip(c, c[1:] + c[:1]):
                img[a - 1] = b - 1
        return cls._raw(tuple(img))

    @classmethod
    def from_images(cls, images: Sequence[int]) -> "Permutation":
        """Build from 1-based one-line notation."""
        return cls(x - 1 for x in images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(other.images) != len(self.images):
            raise ValueError("degree mismatch")
        o = other.images
        return Permutation._raw(tuple(o[x] for x in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, x in enumerate(self.images):
            inv[x] = i
        return Permutation._raw(tuple(inv))

    def __pow__(self, m: int) -> "Permutation":
        if m < 0:
            return self.inverse() ** (-m)
        n = len(self.images)
        img = [0] * n
        for cyc in _cycles0(self.images):
            l = len(cyc)
            s = m % l
            for i, x in enumerate(cyc):
                img[x] = cyc[(i + s) % l]
        return Permutation._raw(tuple(img))

    def conjugate(self, rho: "Permutation") -> "Permutation":
        """Return ``rho^-1 * self * rho`` (relabel every point ``i`` as ``rho(i)``)."""
        r = rho.images
        img = [0] * len(r)
        for i, x in enumerate(self.images):
            img[r[i]] = r[x]
        return Permutation._raw(tuple(img))

    def cycles(self, include_fixed: bool = False) -> list[list[int]]:
        return [[x + 1 for x in c] for c in _cycles0(self.images) if include_fixed or len(c) > 1]

    def cycle_type(self) -> Partition:
        return cycle_type(self)

    def order(self) -> int:
        return lcm(*cycle_type(self)) if self.images else 1

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in _cycles0(self.images)) % 2 == 0

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        cyc = self.cycles()
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"
        return f"Permutation({body}, n={self.degree})"

    def __str__(self) -> str:
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles()) or "()"


def _cycles0(images: Sequence[int]) -> list[list[int]]:
    seen = [False] * len(images)
    out = []
    for start in range(len(images)):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = images[x]
        out.append(cyc)
    return out


def compose_raw(a: tuple, b: tuple) -> tuple:
    """Images of ``a * b`` (apply ``a`` then ``b``) on raw 0-based tuples."""
    return tuple(b[x] for x in a)


def inverse_raw(a: tuple) -> tuple:
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x] = i
    return tuple(inv)


def cycle_type_raw(images: Sequence[int]) -> Partition:
    return tuple(sorted((len(c) for c in _cycles0(images)), reverse=True))


# --------------------------------------------------------------------------
# partitions


def make_partition(parts: Iterable[int]) -> Partition:
    """Validate and sort a partition; raises ``ValueError`` on non-positive parts."""
    parts = tuple(sorted((int(p) for p in parts), reverse=True))
    if any(p < 1 for p in parts):
        raise ValueError(f"partition parts must be positive: {parts}")
    return parts


def parse_partition(text: str) -> Partition:
    """Parse ``"2,2,1"`` into a partition; a bare integer ``"11"`` means the single part 11."""
    text = text.strip()
    if "," in text:
        parts = [int(x) for x in text.split(",") if x.strip()]
        if list(parts) != sorted(parts, reverse=True):
            raise ValueError(f"partition must be listed in descending order: {text!r}")
        return make_partition(parts)
    return make_partition([int(text)])


def partitions(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """All partitions of ``n`` in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def part_counts(mu: Partition) -> dict[int, int]:
    """Map part size ``i`` to the number of parts of that size."""
    return dict(Counter(mu))


def cycle_type(p: Permutation) -> Partition:
    return cycle_type_raw(p.images)


def ram(psi: Partition) -> int:
    """Ramification number: ``n`` minus the number of parts."""
    return sum(psi) - len(psi)


def genus_of_passport(psi0: Partition, psi1: Partition, psi_inf: Partition) -> Fraction:
    """Riemann-Hurwitz genus of a passport, as an exact rational."""
    n = sum(psi0)
    if sum(psi1) != n or sum(psi_inf) != n:
        raise ValueError(f"degree mismatch in passport {psi0}, {psi1}, {psi_inf}")
    return Fraction(ram(psi0) + ram(psi1) + ram(psi_inf), 2) - n + 1


def power_cycle_type(psi: Partition, m: int) -> Partition:
    """Cycle type of ``p**m`` for any ``p`` of type ``psi``."""
    out = []
    for l in psi:
        g = gcd(l, m)
        out.extend([l // g] * g)
    return tuple(sorted(out, reverse=True))


def class_size(psi: Partition) -> int:
    from math import factorial

    z = 1
    for i, c in Counter(psi).items():
        z *= i**c * factorial(c)
    return factorial(sum(psi)) // z


def class_representative(psi: Partition) -> Permutation:
    """The permutation with consecutive cycles ``(1..a)(a+1..a+b)...``."""
    cycles, start = [], 1
    for l in psi:
        cycles.append(list(range(start, start + l)))
        start += l
    return Permutation.from_cycles(cycles, sum(psi))


def all_permutations(n: int) -> Iterator[Permutation]:
    for img in _itperms(range(n)):
        yield Permutation._raw(img)


def permutations_of_type(psi: Partition) -> Iterator[Permutation]:
    """Every permutation of cycle type ``psi``, each exactly once."""
    n = sum(psi)
    img = [None] * n

    def rec(remaining: list[int], counts: Counter):
        if not remaining:
            yield Permutation._raw(tuple(img))
            return
        head, rest = remaining[0], remaining[1:]
        for l in sorted(counts):
            if counts[l] == 0:
                continue
            counts[l] -= 1
            for tail in _itperms(rest, l - 1):
                cyc = (head,) + tail
                for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                    img[a] = b
                left = [x for x in rest if x not in tail]
                yield from rec(left, counts)
            counts[l] += 1

    yield from rec(list(range(n)), Counter(psi))


# --------------------------------------------------------------------------
# square roots


def iter_square_roots(sigma: Permutation) -> Iterator[Permutation]:
    """Yield every ``tau`` with ``tau * tau == sigma``.

    Odd cycles may stay alone (their unique single-cycle root is the
    ``(l+1)/2``-th power); otherwise cycles of equal length are paired and
    each unordered pair of ``l``-cycles has ``l`` interleavings.
    """
    n = sigma.degree
    by_len: dict[int, list[list[int]]] = defaultdict(list)
    for c in _cycles0(sigma.images):
        by_len[len(c)].append(c)

    def matchings(cycs: list, l: int) -> Iterator[list[list[int]]]:
        # each yielded item: list of root cycles (0-based) covering cycs
        if not cycs:
            yield []
            return
        first, rest = cycs[0], cycs[1:]
        if l % 2 == 1:
            h = (l + 1) // 2
            single = [first[(i * h) % l] for i in range(l)]
            for m in matchings(rest, l):
                yield [single] + m
        for j, other in enumerate(rest):
            remaining = rest[:j] + rest[j + 1 :]
            for m in matchings(remaining, l):
                for shift in range(l):
                    root = []
                    for i in range(l):
                        root.append(first[i])
                        root.append(other[(i + shift) % l])
                    yield [root] + m

    groups = sorted(by_len.items())

    def combine(idx: int, acc: list[list[int]]) -> Iterator[Permutation]:
        if idx == len(groups):
            img = [0] * n
            for c in acc:
                for a, b in zip(c, c[1:] + c[:1]):
                    img[a] = b
            yield Permutation._raw(tuple(img))
            return
        l, cycs = groups[idx]
        for m in matchings(cycs, l):
            yield from combine(idx + 1, acc + m)

    yield from combine(0, [])


def square_roots(sigma: Permutation) -> set[Permutation]:
    return set(iter_square_roots(sigma))


# --------------------------------------------------------------------------
# simultaneous conjugacy


def orbits_raw(gens: Sequence[tuple], n: int) -> list[list[int]]:
    """Orbits of the group generated by ``gens`` on ``0..n-1`` (sorted)."""
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        orb, stack = [s], [s]
        while stack:
            x = stack.pop()
            for g in gens:
                y = g[x]
                if not seen[y]:
                    seen[y] = True
                    orb.append(y)
                    stack.append(y)
        out.append(sorted(orb))
    return out


def is_transitive_raw(gens: Sequence[tuple], n: int) -> bool:
    if n == 0:
        return True
    seen = [False] * n
    seen[0] = True
    stack, count = [0], 1
    while stack:
        x = stack.pop()
        for g in gens:
            y = g[x]
            if not seen[y]:
                seen[y] = True
                count += 1
                stack.append(y)
    return count == n


def _canon_transitive(gens: Sequence[tuple], n: int) -> tuple[tuple, list[int]]:
    best = None
    best_lab = None
    for start in range(n):
        lab = [-1] * n
        lab[start] = 0
        order = [start]
        nxt = 1
        qi = 0
        while qi < len(order):
            x = order[qi]
            qi += 1
            for g in gens:
                y = g[x]
                if lab[y] < 0:
                    lab[y] = nxt
                    nxt += 1
                    order.append(y)
        cand = tuple(tuple(lab[g[order[k]]] for k in range(n)) for g in gens)
        if best is None or cand < best:
            best, best_lab = cand, lab
    return best, best_lab


def canonical_raw(gens: Sequence[tuple], n: int) -> tuple[tuple, list[int]]:
    """Canonical form of a generator tuple and the relabelling reaching it.

    Returns ``(canon, lab)`` with ``canon[j][lab[i]] == lab[gens[j][i]]``.
    """
    gens = [tuple(g) for g in gens]
    if n == 0:
        return tuple(() for _ in gens), []
    orbs = orbits_raw(gens, n)
    if len(orbs) == 1:
        return _canon_transitive(gens, n)
    blocks = []
    for orb in orbs:
        local = {x: i for i, x in enumerate(orb)}
        lgens = [tuple(local[g[x]] for x in orb) for g in gens]
        canon, lab = _canon_transitive(lgens, len(orb))
        blocks.append((len(orb), canon, orb, lab))
    blocks.sort(key=lambda b: (b[0], b[1]))
    glab = [0] * n
    images = [[] for _ in gens]
    off = 0
    for size, canon, orb, lab in blocks:
        for i, x in enumerate(orb):
            glab[x] = off + lab[i]
        for j, c in enumerate(canon):
            images[j].extend(off + y for y in c)
        off += size
    return tuple(tuple(im) for im in images), glab


def canonical_key(perms: Sequence[Permutation]) -> tuple:
    """Hashable key equal for two tuples iff they are simultaneously conjugate."""
    if not perms:
        return ()
    return canonical_raw([p.images for p in perms], perms[0].degree)[0]


def canonical_tuple(perms: Sequence[Permutation]) -> tuple[Permutation, ...]:
    return tuple(Permutation._raw(im) for im in canonical_key(perms))


def simultaneously_conjugate(a: Sequence[Permutation], b: Sequence[Permutation]) -> Permutation | None:
    """Return ``rho`` with ``rho^-1 a_i rho == b_i`` for all ``i``, or ``None``."""
    if len(a) != len(b):
        raise ValueError("tuples of different lengths")
    if not a:
        return None
    n = a[0].degree
    if any(p.degree != n for p in list(a) + list(b)):
        raise ValueError("degree mismatch")
    ca, la = canonical_raw([p.images for p in a], n)
    cb, lb = canonical_raw([p.images for p in b], n)
    if ca != cb:
        return None
    # rho = la * lb^-1 as maps i -> la[i] -> lb^-1
    inv_lb = inverse_raw(tuple(lb))
    rho = Permutation._raw(tuple(inv_lb[la[i]] for i in range(n)))
    if any(x.conjugate(rho) != y for x, y in zip(a, b)):
        raise AssertionError("conjugator check failed")
    return rho
