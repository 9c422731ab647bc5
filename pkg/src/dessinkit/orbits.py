"""Orbit-splitting censuses, the EKS criterion, and the Cl/Cl' constructions.

Conventions fixed here:

* ``ell_0 = n``: the count attached to index 0 is the degree, which is
  the only value that makes ``alpha(u)`` a partition of ``n``.
* The lower bound ``ceil(ell_i / 2) <= u_i`` applies to odd ``i`` and to
  ``i = 0``; nonzero even ``i`` are pinned at ``u_i = ell_i / 2``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm, prod

from sympy import nextprime

from .groups import GroupClassification, classify_group
from .monodromy import Constellation
from .perm import (
    Partition,
    Permutation,
    class_representative,
    class_size,
    cycle_type_raw,
    compose_raw,
    genus_of_passport,
    inverse_raw,
    is_transitive_raw,
    make_partition,
    part_counts,
    permutations_of_type,
    power_cycle_type,
)

DEFAULT_ORACLE_GUARD = 9

CAVEAT_ELL0 = "ell_0 is taken to be n so that alpha(u) partitions n"
CAVEAT_BOUNDS = "the lower bound ell_i/2 <= u_i is applied to odd i and i = 0 only"
CAVEAT_STRICT = (
    "the literal M' definition admits c with ell_2c > 0; strict mode adds ell_2c = 0 "
    "(both counts are reported)"
)


@dataclass(frozen=True, order=True)
class TupleU:
    """Sparse ``u``: ``(i, u_i)`` pairs for ``i = 0`` and every part size of ``mu``."""

    items: tuple[tuple[int, int], ...]

    def __getitem__(self, i: int) -> int:
        return dict(self.items).get(i, 0)

    def total(self) -> int:
        return sum(v for _, v in self.items)

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    def values(self) -> tuple[int, ...]:
        return tuple(v for _, v in self.items)

    def __str__(self) -> str:
        return "(" + ", ".join(f"u{i}={v}" for i, v in self.items) + ")"


def _ranges(n: int, mu: Partition) -> list[tuple[int, range]] | None:
    ell = part_counts(mu)
    out = [(0, range((n + 1) // 2, n + 1))]
    for i in sorted(ell):
        li = ell[i]
        if i % 2 == 0:
            if li % 2:
                return None
            out.append((i, range(li // 2, li // 2 + 1)))
        else:
            out.append((i, range((li + 1) // 2, li + 1)))
    return out


def _iter_u(n: int, mu: Partition):
    ranges = _ranges(n, mu)
    if ranges is None:
        return
    idx = [i for i, _ in ranges]
    for vals in product(*(r for _, r in ranges)):
        yield TupleU(tuple(zip(idx, vals)))


def _check_same_n(psi: Partition, mu: Partition) -> int:
    n = sum(psi)
    if sum(mu) != n:
        raise ValueError(f"psi and mu partition different integers: {sum(psi)} vs {n}")
    return n


def _witness_c(u: TupleU, ell: dict[int, int], strict: bool) -> bool:
    for c, lc in ell.items():
        if c % 2 and lc % 2 and u[c] == lc and (not strict or ell.get(2 * c, 0) == 0):
            return True
    return False


def m_prime(psi: Partition, mu: Partition, strict: bool = False) -> list[TupleU]:
    n = _check_same_n(psi, mu)
    r = len(psi)
    ell = part_counts(mu)
    out = []
    for u in _iter_u(n, mu):
        s = r + u.total() - n
        if s % 2 == 0 and s <= 2 and _witness_c(u, ell, strict):
            out.append(u)
    return out


def m0_prime(psi: Partition, mu: Partition) -> list[TupleU]:
    n = _check_same_n(psi, mu)
    r = len(psi)
    ell = part_counts(mu)
    out = []
    for u in _iter_u(n, mu):
        if r + u.total() != n + 2:
            continue
        if any(i % 2 and 2 * u[i] != ell[i] for i in ell):
            out.append(u)
    return out


def alpha_of(u: TupleU, n: int) -> Partition:
    ones, twos = 2 * u[0] - n, n - u[0]
    if ones < 0 or twos < 0:
        raise ValueError(f"invalid u0 = {u[0]} for n = {n}")
    return (2,) * twos + (1,) * ones


def beta_of(u: TupleU, mu: Partition) -> Partition:
    n = sum(mu)
    ell = part_counts(mu)
    parts = []
    for k in range(1, 2 * n + 1):
        if k % 2:
            cnt = 2 * u[k] - ell.get(k, 0)
        else:
            cnt = ell.get(k // 2, 0) - u[k // 2] + 2 * u[k] - ell.get(k, 0)
        if cnt < 0:
            raise ValueError(f"negative count {cnt} of parts of size {k} for {u}")
        parts.extend([k] * cnt)
    beta = make_partition(parts)
    assert sum(beta) == n, (beta, n)
    return beta


def m_set(psi: Partition, mu: Partition, strict: bool = False) -> list[tuple[Partition, Partition, Partition]]:
    n = sum(psi)
    return [(tuple(psi), beta_of(u, mu), alpha_of(u, n)) for u in m_prime(psi, mu, strict)]


def m0_set(psi: Partition, mu: Partition) -> list[tuple[Partition, Partition, Partition]]:
    n = sum(psi)
    return [(tuple(psi), beta_of(u, mu), alpha_of(u, n)) for u in m0_prime(psi, mu)]


def genus_identity(psi: Partition, u: TupleU) -> Fraction:
    """``1 - (r + sum(u) - n)/2``, the genus predicted by the sum condition."""
    n = sum(psi)
    return 1 - Fraction(len(psi) + u.total() - n, 2)


# --------------------------------------------------------------------------
# existence


def eks_exists(alpha: Partition, beta: Partition) -> bool:
    """Existence of a transitive triple of type ``(alpha, beta, (n))``."""
    n = sum(alpha)
    if sum(beta) != n:
        raise ValueError("alpha and beta partition different integers")
    P = len(alpha) + len(beta)
    return P % 2 == (n + 1) % 2 and P <= n + 1


def _assemble(slots: dict[int, tuple]) -> Constellation:
    return Constellation(*(Permutation._raw(slots[i]) for i in range(3)))


def _third(slots: dict[int, tuple], fixed: int, moving: int) -> tuple[int, tuple]:
    """Fill the remaining slot from ``s0 s1 sinf = 1`` (and its cyclic rotations)."""
    missing = 3 - fixed - moving
    # rotation starting at the missing slot: x_missing * x_next * x_nextnext = 1
    a, b = slots[(missing + 1) % 3], slots[(missing + 2) % 3]
    return missing, inverse_raw(compose_raw(a, b))


def belyi_oracle(
    psi0: Partition, psi1: Partition, psi_inf: Partition, guard: int = DEFAULT_ORACLE_GUARD
) -> Constellation | None:
    """Exhaustive search for a transitive triple with the given passport.

    The slot with the largest conjugacy class is fixed to its standard
    representative; the smallest of the other two classes is scanned and
    the last slot is forced by the product relation.
    """
    types = [make_partition(p) for p in (psi0, psi1, psi_inf)]
    n = sum(types[0])
    if any(sum(p) != n for p in types):
        raise ValueError("passport partitions have different sums")
    if n > guard:
        raise ValueError(f"degree {n} exceeds oracle guard {guard}")
    sizes = [class_size(p) for p in types]
    fixed = max(range(3), key=lambda i: (sizes[i], -i))
    others = [i for i in range(3) if i != fixed]
    moving = min(others, key=lambda i: (sizes[i], i))
    slots = {fixed: class_representative(types[fixed]).images}
    for y in permutations_of_type(types[moving]):
        slots[moving] = y.images
        missing, z = _third(slots, fixed, moving)
        if cycle_type_raw(z) != types[missing]:
            continue
        if not is_transitive_raw([slots[fixed], y.images], n):
            continue
        slots[missing] = z
        return _assemble(slots)
    return None


def random_realization(
    psi0: Partition, psi1: Partition, psi_inf: Partition, tries: int = 200_000, seed: int = 0
) -> Constellation | None:
    """Seeded random search for larger degrees; ``None`` means "not found", not "absent"."""
    types = [make_partition(p) for p in (psi0, psi1, psi_inf)]
    n = sum(types[0])
    rng = random.Random(seed)
    s0 = class_representative(types[0]).images
    base = class_representative(types[1]).images
    pts = list(range(n))
    for _ in range(tries):
        rng.shuffle(pts)
        rho = tuple(pts)
        img = [0] * n
        for i, x in enumerate(base):
            img[rho[i]] = rho[x]
        s1 = tuple(img)
        sinf = inverse_raw(compose_raw(s0, s1))
        if cycle_type_raw(sinf) == types[2] and is_transitive_raw([s0, s1], n):
            return Constellation(Permutation._raw(s0), Permutation._raw(s1), Permutation._raw(sinf))
    return None


# --------------------------------------------------------------------------
# orbit bounds


@dataclass(frozen=True)
class CensusEntry:
    u: TupleU
    alpha: Partition
    beta: Partition
    genus: Fraction
    eks_status: str  # "exists", "absent" or "unknown"

    def as_json(self) -> dict:
        return {
            "u": {str(i): v for i, v in self.u.items},
            "alpha": list(self.alpha),
            "beta": list(self.beta),
            "genus": str(self.genus),
            "eks_status": self.eks_status,
        }


@dataclass(frozen=True)
class OrbitBoundReport:
    psi: Partition
    mu: Partition
    form: str
    census: tuple[CensusEntry, ...]
    lower_bound: int
    caveats: tuple[str, ...] = ()
    strict_count: int | None = None

    def as_json(self) -> dict:
        out = {
            "psi": list(self.psi),
            "mu": list(self.mu),
            "form": self.form,
            "census": [e.as_json() for e in self.census],
            "lower_bound": self.lower_bound,
            "caveats": list(self.caveats),
        }
        if self.strict_count is not None:
            out["strict_lower_bound"] = self.strict_count
        return out


def _status(psi: Partition, beta: Partition, alpha: Partition, guard: int) -> str:
    n = sum(psi)
    if psi == (n,):
        return "exists" if eks_exists(alpha, beta) else "absent"
    if n <= guard:
        return "exists" if belyi_oracle(psi, beta, alpha, guard) is not None else "absent"
    return "unknown"


def orbit_lower_bound(
    psi: Partition, mu: Partition, form: str = "main", guard: int = DEFAULT_ORACLE_GUARD, strict: bool = False
) -> OrbitBoundReport:
    psi, mu = make_partition(psi), make_partition(mu)
    n = _check_same_n(psi, mu)
    caveats = [CAVEAT_ELL0, CAVEAT_BOUNDS]
    if form == "main":
        us = m_prime(psi, mu, strict)
        strict_us = us if strict else m_prime(psi, mu, True)
        if len(strict_us) != len(us) or strict:
            caveats.append(CAVEAT_STRICT)
    elif form == "alternate":
        r, s = len(psi), len(mu)
        if not 2 * r + s < n:
            raise ValueError(f"alternate form needs 2r + s < n, got 2*{r} + {s} >= {n}")
        us, strict_us = m0_prime(psi, mu), None
    else:
        raise ValueError(f"form must be 'main' or 'alternate', got {form!r}")
    entries = []
    for u in us:
        a, b = alpha_of(u, n), beta_of(u, mu)
        st = _status(psi, b, a, guard)
        if st == "unknown":
            caveats.append(f"membership in B undecided for {u} (degree {n} above guard {guard})")
        entries.append(CensusEntry(u, a, b, genus_of_passport(psi, b, a), st))
    bound = sum(1 for e in entries if e.eks_status == "exists")
    strict_bound = None
    if strict_us is not None:
        keep = set(strict_us)
        strict_bound = sum(1 for e in entries if e.u in keep and e.eks_status == "exists")
    return OrbitBoundReport(psi, mu, form, tuple(entries), bound, tuple(caveats), strict_bound)


# --------------------------------------------------------------------------
# Cl, Cl' and the inequalities behind them


def f_t(t: int, k: int) -> int:
    return (4 * t + 2) // (2 * k - 1)


def n0(t: int) -> int:
    return 2 * t + 1 + sum(2 * (2 * k - 1) * (f_t(t, k) - 1) for k in range(1, t + 1))


def n1(t: int) -> int:
    return n0(t) + 4


@dataclass(frozen=True)
class LemmaReport:
    t_max: int
    holds: dict[str, list[int]]
    fails: dict[str, list[int]]

    def as_json(self) -> dict:
        return {
            "t_max": self.t_max,
            "lemmas": {
                name: {
                    "statement": STATEMENTS[name],
                    "holds_at": _ranges_text(self.holds[name]),
                    "fails_at": self.fails[name],
                }
                for name in self.holds
            },
        }


def _ranges_text(ts: list[int]) -> list[str]:
    out: list[str] = []
    for t in ts:
        if out and out[-1][1] == t - 1:
            out[-1] = (out[-1][0], t)
        else:
            out.append((t, t))
    return [f"{a}" if a == b else f"{a}..{b}" for a, b in out]


STATEMENTS = {
    "n0_lower": "4t^2 + 12t + 1 < n0(t)",
    "n0_upper": "n0(t) < 6(t+1)^2 - 4",
    "sum_f": "sum_k (f_t(k) - 1) <= n0(t)/4",
    "prod_f": "prod_k f_t(k) > 2^(2t)",
}

LEMMAS = {
    "n0_lower": lambda t, n, fs: 4 * t * t + 12 * t + 1 < n,
    "n0_upper": lambda t, n, fs: n < 6 * (t + 1) ** 2 - 4,
    "sum_f": lambda t, n, fs: 4 * sum(f - 1 for f in fs) <= n,
    "prod_f": lambda t, n, fs: prod(fs) > 2 ** (2 * t),
}


def verify_lemmata(t_max: int) -> LemmaReport:
    holds = {k: [] for k in LEMMAS}
    fails = {k: [] for k in LEMMAS}
    for t in range(1, t_max + 1):
        fs = [f_t(t, k) for k in range(1, t + 1)]
        n = n0(t)
        for name, check in LEMMAS.items():
            (holds if check(t, n, fs) else fails)[name].append(t)
    return LemmaReport(t_max, holds, fails)


@dataclass(frozen=True)
class ClConstruction:
    t: int
    f_values: tuple[int, ...]
    n0: int
    n: int
    psi: Partition
    mu: Partition
    census_count: int
    lower_bound: int
    product_bound: int
    caveats: tuple[str, ...] = ()
    n1: int | None = None
    epsilon: int | None = None
    power_exponent: int | None = None
    power_type: Partition | None = None
    group: GroupClassification | None = None

    @property
    def shortfall(self) -> bool:
        return self.census_count < self.product_bound

    def as_json(self) -> dict:
        out = {
            "t": self.t,
            "f_values": list(self.f_values),
            "n0": self.n0,
            "n": self.n,
            "psi": list(self.psi),
            "mu": list(self.mu),
            "census_count": self.census_count,
            "lower_bound": self.lower_bound,
            "product_bound": self.product_bound,
            "shortfall": self.shortfall,
            "caveats": list(self.caveats),
        }
        if self.n1 is not None:
            out.update(
                n1=self.n1,
                epsilon=self.epsilon,
                power_exponent=self.power_exponent,
                power_type=list(self.power_type),
                group_verdict=self.group.verdict,
                group_certificate=self.group.certificate,
            )
        return out


def _census(psi: Partition, mu: Partition, count: bool) -> tuple[int, int]:
    if not count:
        return -1, -1
    us = m_prime(psi, mu)
    n = sum(psi)
    ok = sum(1 for u in us if eks_exists(alpha_of(u, n), beta_of(u, mu)))
    return len(us), ok


def cl_construction(t: int, run_census: bool = True) -> ClConstruction:
    fs = tuple(f_t(t, k) for k in range(1, t + 1))
    n = n0(t)
    parts = [2 * t + 1]
    for k, f in enumerate(fs, start=1):
        parts += [2 * k - 1] * (2 * f - 2)
    psi, mu = (n,), make_partition(parts)
    cnt, lb = _census(psi, mu, run_census)
    caveats = [CAVEAT_ELL0, CAVEAT_BOUNDS]
    if run_census and cnt < prod(fs):
        caveats.append(f"census count {cnt} falls short of the product bound {prod(fs)}")
    return ClConstruction(t, fs, n, n, psi, mu, cnt, lb, prod(fs), tuple(caveats))


def cl_prime_construction(t: int, run_census: bool = True) -> ClConstruction:
    """The prime-degree variant with two extra 2-cycles.

    Taken literally, ``f_t(k)`` parts of size ``2k - 1`` do not sum to ``n``; this uses
    ``2 f_t(k) - 2`` parts of size ``2k - 1`` (as in the first construction),
    two parts of size 2, and a single odd part filling up to ``n``.
    """
    fs = tuple(f_t(t, k) for k in range(1, t + 1))
    base, first = n0(t), n1(t)
    n = int(nextprime(first - 1))
    parts = [2, 2, n - base + 2 * t - 3]
    for k, f in enumerate(fs, start=1):
        parts += [2 * k - 1] * (2 * f - 2)
    psi, mu = (n,), make_partition(parts)
    assert sum(mu) == n
    m = lcm(*(p for p in mu if p % 2))
    ptype = power_cycle_type(mu, m)
    c = Constellation.from_pair(class_representative(psi), class_representative(mu))
    group = classify_group(c, exact_bound=0)
    cnt, lb = _census(psi, mu, run_census)
    caveats = [
        CAVEAT_ELL0,
        CAVEAT_BOUNDS,
        "mu uses 2f_t(k)-2 parts of size 2k-1 and one odd filler part so that it partitions n",
        f"double-transposition power uses the lcm {m} of the odd part sizes",
    ]
    if run_census and cnt < prod(fs):
        caveats.append(f"census count {cnt} falls short of the product bound {prod(fs)}")
    return ClConstruction(
        t, fs, base, n, psi, mu, cnt, lb, prod(fs), tuple(caveats),
        n1=first, epsilon=n - first, power_exponent=m, power_type=ptype, group=group,
    )
