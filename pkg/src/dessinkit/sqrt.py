"""The square-root class Sqrt(f), its cycle-type multiset Sqct(f), and checks."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .monodromy import PreConstellation, iter_constellations, passport, sigma_pullback, xi_product
from .perm import Partition, Permutation, canonical_raw, cycle_type, genus_of_passport, iter_square_roots

DEFAULT_ORACLE_GUARD = 7


@dataclass(frozen=True)
class SqrtClassElement:
    triple: tuple[Permutation, Permutation, Permutation]
    transitive: bool

    @property
    def passport(self) -> tuple[Partition, Partition, Partition]:
        return tuple(cycle_type(p) for p in self.triple)

    @property
    def genus(self) -> Fraction:
        return genus_of_passport(*self.passport)

    def constellation(self) -> PreConstellation:
        return PreConstellation(*self.triple)


@dataclass(frozen=True)
class SqrtClass:
    """Retained elements plus the ones removed by the transitivity filter."""

    elements: tuple[SqrtClassElement, ...]
    filtered_intransitive: tuple[SqrtClassElement, ...] = ()

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def keys(self) -> set[tuple]:
        return {canonical_raw([e.triple[0].images, e.triple[1].images], len(e.triple[0].images))[0] for e in self.elements}


def sqrt_class(c: PreConstellation, require_transitive: bool = True) -> SqrtClass:
    """Classes of triples ``(sigma0, tau1, tau1^-1 sigma0^-1)`` with ``tau1^2 = sigma1``
    and ``tau1^-1 sigma0 tau1 = sigma_inf``, up to simultaneous conjugation."""
    s0, s1, sinf = c.gens
    if cycle_type(s0) != cycle_type(sinf):
        return SqrtClass(())
    n = c.n
    found: dict[tuple, SqrtClassElement] = {}
    for tau in iter_square_roots(s1):
        if s0.conjugate(tau) != sinf:
            continue
        assert tau * tau == s1
        key, _ = canonical_raw([s0.images, tau.images], n)
        if key in found:
            continue
        a, b = Permutation._raw(key[0]), Permutation._raw(key[1])
        triple = (a, b, (a * b).inverse())
        transitive = PreConstellation(*triple).transitive
        found[key] = SqrtClassElement(triple, transitive)
    kept = tuple(e for k, e in sorted(found.items()) if e.transitive or not require_transitive)
    dropped = tuple(e for k, e in sorted(found.items()) if require_transitive and not e.transitive)
    for e in kept + dropped:
        x, t, y = e.triple
        assert (x * t * y).is_identity()
        assert y == (t.inverse() * x.inverse())
    return SqrtClass(kept, dropped)


@dataclass(frozen=True)
class SqctEntry:
    triple: tuple[Partition, Partition, Partition]
    genus: Fraction
    transitive: bool


@dataclass(frozen=True)
class SqctReport:
    classes: tuple[SqctEntry, ...]
    source_passport: tuple[Partition, Partition, Partition]
    source_genus: Fraction
    filtered_intransitive: int = 0

    def multiset(self) -> Counter:
        return Counter(e.triple for e in self.classes)

    def as_json(self) -> dict:
        grouped = Counter((e.triple, e.genus, e.transitive) for e in self.classes)
        return {
            "source_passport": [list(p) for p in self.source_passport],
            "source_genus": str(self.source_genus),
            "classes": [
                {"triple": [list(p) for p in t], "genus": str(g), "transitive": tr, "multiplicity": m}
                for (t, g, tr), m in sorted(grouped.items(), key=lambda kv: (kv[0][0], kv[0][1]))
            ],
            "size": len(self.classes),
            "filtered_intransitive": self.filtered_intransitive,
        }


def sqct(c: PreConstellation, require_transitive: bool = True) -> SqctReport:
    sq = sqrt_class(c, require_transitive)
    entries = []
    for e in sq:
        g = e.genus
        if e.transitive and g.denominator != 1:
            raise AssertionError(f"non-integral genus {g} for a transitive class")
        entries.append(SqctEntry(e.passport, g, e.transitive))
    return SqctReport(tuple(entries), passport(c), c.genus(), len(sq.filtered_intransitive))


# --------------------------------------------------------------------------
# brute-force oracle


@lru_cache(maxsize=None)
def _pullback_table(n: int) -> dict[tuple, tuple[tuple, ...]]:
    """Canonical key of the trivial-slot pullback -> canonical keys of the sources."""
    table: dict[tuple, list[tuple]] = {}
    for g in iter_constellations(n):
        four = sigma_pullback(g)
        if not four.sigma_m1.is_identity():
            continue
        key = four.drop_trivial().key()
        table.setdefault(key, []).append(g.key())
    return {k: tuple(v) for k, v in table.items()}


def sqrt_oracle(c: PreConstellation, max_degree_guard: int = DEFAULT_ORACLE_GUARD) -> set[PreConstellation]:
    """All constellations ``g`` of the same degree whose pullback is isomorphic to ``c``.

    Independent of :func:`sqrt_class`: scans every degree-``n`` constellation.
    """
    if c.n > max_degree_guard:
        raise ValueError(f"degree {c.n} exceeds oracle guard {max_degree_guard}")
    hits = _pullback_table(c.n).get(c.key(), ())
    return {PreConstellation.from_pair(Permutation._raw(k[0]), Permutation._raw(k[1])) for k in hits}


# --------------------------------------------------------------------------
# theorem checks


def check_uniqueness_hypothesis(mu1: Partition) -> tuple[int, int] | None:
    """Least odd ``k`` occurring an odd number of times in ``mu1`` with no part ``2k``."""
    counts = Counter(mu1)
    for k in sorted(counts):
        if k % 2 == 1 and counts[k] % 2 == 1 and counts.get(2 * k, 0) == 0:
            return (k, counts[k])
    return None


@dataclass
class XiSweep:
    """Outcome of the exhaustive xi-product sweep at one degree."""

    degree: int
    hypothesis_count: int
    intransitive_products: list[PreConstellation]
    counterexamples: list[tuple[PreConstellation, PreConstellation]]


def xi_sweep(n: int) -> XiSweep:
    """Check transitivity and cancellation of ``m x xi`` over all degree-``n`` pairs.

    ``m`` ranges over transitive pairs whose ``m(y)`` meets the odd-count
    hypothesis; ``m'`` ranges over every pair, transitive or not, because
    the cancellation statement places no condition on it.
    """
    by_product: dict[tuple, list[PreConstellation]] = {}
    for c in iter_constellations(n, transitive=False):
        by_product.setdefault(xi_product(c).key(), []).append(c)
    hyp = 0
    bad_transitive = []
    bad_pairs = []
    for group in by_product.values():
        for m in group:
            if not (m.transitive and check_uniqueness_hypothesis(cycle_type(m.sigma1))):
                continue
            hyp += 1
            prod = xi_product(m)
            if not prod.transitive:
                bad_transitive.append(m)
            bad_pairs.extend((m, other) for other in group if other.key() != m.key())
    return XiSweep(n, hyp, bad_transitive, bad_pairs)


@dataclass(frozen=True)
class CheckResult:
    name: str
    applicable: bool
    passed: bool
    detail: str


def theorem_checks(report: SqctReport) -> list[CheckResult]:
    g = report.source_genus
    size = len(report.classes)
    out = []
    if g > 1:
        bound = 84 * (g - 1) - 1
        out.append(CheckResult("a", True, size <= bound, f"{size} classes, bound 84(g-1)-1 = {bound}"))
    else:
        out.append(CheckResult("a", False, True, f"source genus {g} <= 1"))
    trigger = next(
        ((e.triple[1], w) for e in report.classes if (w := check_uniqueness_hypothesis(e.triple[1])) is not None),
        None,
    )
    if trigger is not None:
        mu, (k, cnt) = trigger
        out.append(CheckResult("b", True, size == 1, f"middle type {list(mu)} has {cnt} parts of size {k}; {size} classes"))
    else:
        out.append(CheckResult("b", False, True, "no class meets the odd-count hypothesis"))
    if g > 1:
        zeros = sum(1 for e in report.classes if e.genus == 0)
        out.append(CheckResult("c", True, zeros <= 1, f"{zeros} genus-0 classes"))
    else:
        out.append(CheckResult("c", False, True, f"source genus {g} <= 1"))
    return out
