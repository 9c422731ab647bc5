"""Monodromy group classification and rational Nielsen classes."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import factorial, gcd, lcm

from sympy.combinatorics import Permutation as SymPerm
from sympy.combinatorics import PermutationGroup

from .monodromy import PreConstellation
from .perm import (
    Partition,
    Permutation,
    _cycles0,
    canonical_raw,
    class_size,
    compose_raw,
    cycle_type_raw,
    partitions,
    power_cycle_type,
)

DEFAULT_EXACT_BOUND = 12
ENUM_LIMIT = 200_000


@dataclass(frozen=True)
class GroupClassification:
    verdict: str  # "alternating", "symmetric" or "other"
    order: int | None
    certificate: str


def _double_transposition(n: int) -> Partition:
    return (2, 2) + (1,) * (n - 4)


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def jordan_certificate(c: PreConstellation) -> str | None:
    """Certificate text when the prime-degree Jordan criterion applies, else ``None``.

    Needs ``n = p`` prime with ``p > 7``, a visible ``p``-cycle and a visible
    element with a double-transposition power.
    """
    n = c.n
    if not (_is_prime(n) and n > 7):
        return None
    types = [cycle_type_raw(g.images) for g in c.gens]
    if (n,) not in types:
        return None
    target = _double_transposition(n)
    for which, psi in zip(("sigma0", "sigma1", "sigma_inf"), types):
        order = lcm(*psi)
        for m in range(1, order + 1):
            if power_cycle_type(psi, m) == target:
                return (
                    f"Jordan: degree {n} is a prime > 7, the group contains a {n}-cycle "
                    f"and {which}^{m} (type {list(psi)}) is a double transposition"
                )
    return None


def group_order(c: PreConstellation) -> int:
    """Exact order of ``<sigma0, sigma1>`` from a deterministic stabilizer chain."""
    if c.n == 1:
        return 1
    G = PermutationGroup([SymPerm(list(c.sigma0.images)), SymPerm(list(c.sigma1.images))])
    return int(G.order())


def classify_group(c: PreConstellation, exact_bound: int = DEFAULT_EXACT_BOUND) -> GroupClassification:
    n = c.n
    if n == 1:
        return GroupClassification("other", 1, "trivial group on one point")
    even = c.sigma0.is_even() and c.sigma1.is_even()
    cert = jordan_certificate(c) if c.transitive else None
    if cert is not None:
        if even:
            return GroupClassification("alternating", factorial(n) // 2, cert + "; generators even")
        return GroupClassification("symmetric", factorial(n), cert + "; an odd generator")
    if n <= exact_bound:
        order = group_order(c)
        if order == factorial(n):
            return GroupClassification("symmetric", order, f"stabilizer chain: order {order} = {n}!")
        if order == factorial(n) // 2 and n > 2:
            return GroupClassification("alternating", order, f"stabilizer chain: order {order} = {n}!/2")
        return GroupClassification("other", order, f"stabilizer chain: order {order}")
    return GroupClassification("other", None, f"degree {n} above exact bound {exact_bound}; no Jordan certificate")


# --------------------------------------------------------------------------
# class functions on the monodromy group


def _enumerate_group(gens: list[tuple], n: int, limit: int = ENUM_LIMIT) -> list[tuple] | None:
    ident = tuple(range(n))
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = compose_raw(x, g)
            if y not in seen:
                if len(seen) >= limit:
                    return None
                seen.add(y)
                queue.append(y)
    return sorted(seen)


def _conj_raw(x: tuple, g: tuple) -> tuple:
    """``g^-1 x g`` on raw tuples."""
    img = [0] * len(g)
    for i, xi in enumerate(x):
        img[g[i]] = g[xi]
    return tuple(img)


def _parity_raw(x: tuple) -> int:
    return sum(len(c) - 1 for c in _cycles0(x)) % 2


def _splits_in_alternating(psi: Partition) -> bool:
    return all(l % 2 for l in psi) and len(set(psi)) == len(psi)


def _conjugator_to_standard(x: tuple) -> tuple:
    """``rho`` with ``rho^-1 x rho`` equal to the standard representative of its type."""
    cycs = sorted(_cycles0(x), key=lambda c: -len(c))
    rho = [0] * len(x)
    pos = 0
    for cyc in cycs:
        for j, pt in enumerate(cyc):
            rho[pt] = pos + j
        pos += len(cyc)
    return tuple(rho)


class _ClassOracle:
    """Conjugacy-class labels inside the monodromy group of ``c``."""

    def __init__(self, c: PreConstellation, verdict: GroupClassification):
        self.n = c.n
        self.kind = verdict.verdict
        self.order = verdict.order
        self.gens = [c.sigma0.images, c.sigma1.images]
        self.label_of: dict[tuple, int] = {}
        self.class_sizes: dict[int, int] = {}
        self.class_types: dict[int, Partition] = {}
        if self.kind in ("alternating", "symmetric"):
            types = [p for p in partitions(self.n) if self.kind == "symmetric" or _even_type(p)]
            self.exponent = lcm(*(lcm(*p) for p in types))
            self.elements = None
            return
        elements = _enumerate_group(self.gens, self.n)
        if elements is None:
            raise ValueError(f"group too large to enumerate (> {ENUM_LIMIT} elements)")
        self.elements = elements
        self.order = len(elements)
        self.exponent = lcm(*(lcm(*cycle_type_raw(x)) for x in elements))
        label = 0
        for x in elements:
            if x in self.label_of:
                continue
            orbit = {x}
            dq = deque([x])
            while dq:
                y = dq.popleft()
                for g in self.gens:
                    z = _conj_raw(y, g)
                    if z not in orbit:
                        orbit.add(z)
                        dq.append(z)
            for y in orbit:
                self.label_of[y] = label
            self.class_sizes[label] = len(orbit)
            self.class_types[label] = cycle_type_raw(x)
            label += 1

    def key(self, x: tuple):
        """A label for the class of ``x``; comparable only within this group."""
        psi = cycle_type_raw(x)
        if self.elements is None:
            if self.kind == "alternating" and _splits_in_alternating(psi):
                return (psi, _parity_raw(_conjugator_to_standard(x)))
            return (psi, 0)
        return self.label_of[x]

    def invariant(self, x: tuple) -> tuple[Partition, int]:
        """Relabelling-invariant data of the class of ``x``: cycle type and class size."""
        psi = cycle_type_raw(x)
        if self.elements is None:
            size = class_size(psi)
            if self.kind == "alternating" and _splits_in_alternating(psi):
                size //= 2
            return (psi, size)
        return (psi, self.class_sizes[self.label_of[x]])


def _even_type(psi: Partition) -> bool:
    return sum(l - 1 for l in psi) % 2 == 0


def _units(e: int) -> list[int]:
    return [lam for lam in range(1, e + 1) if gcd(lam, e) == 1] if e > 1 else [1]


def _powered_triples(c: PreConstellation, oracle: _ClassOracle, keyfun) -> frozenset:
    out = set()
    for lam in _units(oracle.exponent):
        out.add(tuple(keyfun((g**lam).images) for g in c.gens))
    return frozenset(out)


@dataclass(frozen=True)
class NielsenCertificate:
    order: int
    triples: frozenset = field(repr=False)
    verdict: str = "other"

    def as_json(self) -> dict:
        return {
            "group_order": self.order,
            "group_verdict": self.verdict,
            "powered_class_triples": sorted(
                [[{"type": list(t), "class_size": s} for t, s in trip] for trip in self.triples]
            ),
        }


def nielsen_certificate(c: PreConstellation, exact_bound: int = DEFAULT_EXACT_BOUND) -> NielsenCertificate:
    cls = classify_group(c, exact_bound)
    if cls.order is None:
        raise ValueError("group order unknown; raise the exact bound")
    oracle = _ClassOracle(c, cls)
    return NielsenCertificate(oracle.order, _powered_triples(c, oracle, oracle.invariant), cls.verdict)


@dataclass(frozen=True)
class NielsenComparison:
    equal: bool
    level: str  # "exact" or "certificate-level only"
    detail: str

    def __bool__(self) -> bool:
        return self.equal


def nielsen_compare(a: PreConstellation, b: PreConstellation, exact_bound: int = DEFAULT_EXACT_BOUND) -> NielsenComparison:
    """Compare rational Nielsen classes.

    Exact semantics: some relabelling carries ``G_a`` onto ``G_b`` and the set
    of powered class triples of ``a`` onto that of ``b``.
    """
    if a.n != b.n:
        return NielsenComparison(False, "exact", "degrees differ")
    n = a.n
    if n > exact_bound:
        ca, cb = nielsen_certificate(a, n), nielsen_certificate(b, n)
        return NielsenComparison(ca == cb, "certificate-level only", f"degree {n} exceeds exact bound {exact_bound}")
    ga, gb = classify_group(a, exact_bound), classify_group(b, exact_bound)
    if ga.order != gb.order or ga.verdict != gb.verdict:
        return NielsenComparison(False, "exact", f"group orders {ga.order} and {gb.order}")
    oa, ob = _ClassOracle(a, ga), _ClassOracle(b, gb)
    if ga.verdict in ("alternating", "symmetric"):
        # both groups are literally A_n or S_n; relabellings are all of S_n
        sa = _powered_triples(a, oa, oa.key)
        sb = _powered_triples(b, ob, ob.key)
        if sa == sb:
            return NielsenComparison(True, "exact", "identical class triples")
        if ga.verdict == "alternating":
            swapped = frozenset(tuple((psi, bit ^ 1 if _splits_in_alternating(psi) else bit) for psi, bit in t) for t in sa)
            if swapped == sb:
                return NielsenComparison(True, "exact", "class triples agree after an odd relabelling")
        return NielsenComparison(False, "exact", "class triple sets differ")
    if _powered_triples(a, oa, oa.invariant) != _powered_triples(b, ob, ob.invariant):
        return NielsenComparison(False, "exact", "certificates differ")
    sb = _powered_triples(b, ob, ob.key)
    target = canonical_raw([a.sigma0.images, a.sigma1.images], n)[0]
    t0, t1 = cycle_type_raw(a.sigma0.images), cycle_type_raw(a.sigma1.images)
    reps = {}
    for x in ob.elements:
        if cycle_type_raw(x) == t0:
            reps.setdefault(ob.label_of[x], x)
    for x in reps.values():
        for y in ob.elements:
            if cycle_type_raw(y) != t1:
                continue
            if canonical_raw([x, y], n)[0] != target:
                continue
            # relabelled copy (x, y) of a inside G_b; it generates G_b since orders match
            img = PreConstellation.from_pair(Permutation._raw(x), Permutation._raw(y))
            if _powered_triples(img, ob, ob.key) == sb:
                return NielsenComparison(True, "exact", "relabelling found")
    return NielsenComparison(False, "exact", "no relabelling matches the class triples")


def nielsen_equal(a: PreConstellation, b: PreConstellation, exact_bound: int = DEFAULT_EXACT_BOUND) -> bool:
    return nielsen_compare(a, b, exact_bound).equal
