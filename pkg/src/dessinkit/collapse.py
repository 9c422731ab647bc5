"""Odd-degree collapse of finite point sets of the line onto ``{0, 1, infinity}``.

A composite is kept as a :class:`CompositionChain` of stages.  Belyi-ness
of the composite follows stage by stage from
``B(f o g) = B(f) | f(B(g))``: the verifier pushes the special points and
each stage's branch values forward and checks that everything ends in
``{0, 1, infinity}``.  Dense expansion happens only for small total degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

from .ratpoly import INF, BranchData, Point, RatMap, RatPoly, branch_data, image_polynomial, is_belyi

DEFAULT_EXPAND_BOUND = 64
# stages of higher degree are kept in closed form
EXPLICIT_DEGREE_LIMIT = 64

# phase 3 refuses to start a collapse at a point whose height exceeds this many bits
HEIGHT_BITS_LIMIT = 2048
# refuse to push a point through a closed-form power map if the result would exceed this many bits;
# such a point could never be collapsed afterwards anyway
POWER_BITS_LIMIT = 16 * HEIGHT_BITS_LIMIT

ZERO, ONE = Fraction(0), Fraction(1)


class CollapseLimitError(ValueError):
    """The next collapse step would need numbers too large to handle."""


class ChainError(AssertionError):
    def __init__(self, stage: int | None, message: str):
        self.stage = stage
        super().__init__(f"stage {stage}: {message}" if stage is not None else message)


# --------------------------------------------------------------------------
# tracked points


@dataclass(frozen=True)
class AlgSet:
    """The roots of a squarefree polynomial without rational roots."""

    poly: RatPoly

    def __post_init__(self):
        if self.poly.degree() < 1:
            raise ValueError("an algebraic set needs a nonconstant polynomial")

    @property
    def size(self) -> int:
        return self.poly.degree()

    def __repr__(self) -> str:
        return f"AlgSet({self.poly.p.as_expr()})"


Tracked = Point | AlgSet


@dataclass(frozen=True)
class Item:
    value: Tracked
    origin: str  # e.g. "input" or "branch of stage 2"


def _key(v: Tracked):
    if v is INF:
        return (1, 0, "")
    if isinstance(v, AlgSet):
        return (2, v.size, str(v.poly.coeffs))
    return (0, v, "")


def normalize(items: list[Item]) -> list[Item]:
    """Deduplicate by value, keeping the earliest origin."""
    seen: dict = {}
    for it in items:
        k = _key(it.value)
        if k not in seen:
            seen[k] = it
    return [seen[k] for k in sorted(seen)]


def algset_items(poly: RatPoly, origin: str) -> list[Item]:
    """Split the roots of ``poly`` into rational points and an irrational remainder."""
    out = [Item(r, origin) for r in sorted(poly.rational_roots())]
    rest = poly.without_rational_roots()
    if rest.degree() > 0:
        out.append(Item(AlgSet(rest), origin))
    return out


def branch_items(bd: BranchData, origin: str) -> list[Item]:
    out = [Item(v, origin) for v in sorted(bd.rational_branch_values)]
    if bd.at_infinity:
        out.append(Item(INF, origin))
    if bd.irrational_part.degree() > 0:
        out.append(Item(AlgSet(bd.irrational_part), origin))
    return out


def _is_special(v: Tracked) -> bool:
    return v is INF or v == ZERO or v == ONE


# --------------------------------------------------------------------------
# stages


class Stage:
    kind = "stage"
    degree: int

    def image(self, v: Tracked) -> list[Tracked]:
        raise NotImplementedError

    def branch(self) -> list[Tracked]:
        raise NotImplementedError

    def ratmap(self) -> RatMap | None:
        return None

    def to_json(self) -> dict:
        raise NotImplementedError


class MapStage(Stage):
    """An explicit rational map."""

    kind = "map"

    def __init__(self, f: RatMap, label: str = ""):
        if f.is_constant():
            raise ValueError("stage map is constant")
        self.f = f
        self.label = label
        self.degree = f.degree
        self._branch: list[Tracked] | None = None

    def image(self, v: Tracked) -> list[Tracked]:
        if not isinstance(v, AlgSet):
            return [self.f(v)]
        out: list[Tracked] = []
        s = v.poly
        g = s.gcd(self.f.den)
        if g.degree() > 0:
            out.append(INF)
            s = s.exquo(g)
        if s.degree() > 0:
            R = image_polynomial(self.f.num, self.f.den, s)
            out += [it.value for it in algset_items(R, "")]
        return out

    def branch(self) -> list[Tracked]:
        if self._branch is None:
            self._branch = [it.value for it in branch_items(branch_data(self.f), "")]
        return self._branch

    def ratmap(self) -> RatMap:
        return self.f

    def to_json(self) -> dict:
        return {"kind": self.kind, "label": self.label, "degree": self.degree, "map": self.f.to_json()}


class PowerStage(Stage):
    """``K x^p (1 - x)^(q - p)`` with ``K = q^q / (p^p (q - p)^(q - p))``, kept in closed form.

    Its critical points are ``0, 1, p/q, infinity`` with values ``0, 0, 1, infinity``.
    """

    kind = "power"

    def __init__(self, p: int, q: int):
        if not 0 < p < q:
            raise ValueError(f"need 0 < p < q, got p={p}, q={q}")
        self.p, self.q = p, q
        self.degree = q
        self.r = Fraction(p, q)
        if self.r.denominator != q:
            raise ValueError("p/q must be in lowest terms")

    def _value(self, x: Fraction) -> Fraction:
        p, q = self.p, self.q
        bits = max(x.numerator.bit_length(), x.denominator.bit_length(), (1 - x).numerator.bit_length()) + 1
        if q * (bits + q.bit_length()) > POWER_BITS_LIMIT:
            raise ChainError(None, f"pushing {x} through a degree-{q} power map is too large")
        K = Fraction(q**q, p**p * (q - p) ** (q - p))
        return K * x**p * (1 - x) ** (q - p)

    def image(self, v: Tracked) -> list[Tracked]:
        if v is INF:
            return [INF]
        if isinstance(v, AlgSet):
            f = self.ratmap()
            if f is None:
                raise ChainError(None, f"cannot push an algebraic set through a degree-{self.q} power map")
            return MapStage(f).image(v)
        if v in (ZERO, ONE):
            return [ZERO]
        if v == self.r:
            return [ONE]
        return [self._value(v)]

    def branch(self) -> list[Tracked]:
        return [ZERO, ONE, INF]

    def ratmap(self) -> RatMap | None:
        if self.q > EXPLICIT_DEGREE_LIMIT:
            return None
        p, q = self.p, self.q
        K = Fraction(q**q, p**p * (q - p) ** (q - p))
        x = RatPoly.x()
        return RatMap(RatPoly.const(K) * x**p * (RatPoly.const(1) - x) ** (q - p))

    def to_json(self) -> dict:
        p, q = self.p, self.q
        if q <= EXPLICIT_DEGREE_LIMIT:
            constant = str(Fraction(q**q, p**p * (q - p) ** (q - p)))
        else:
            constant = f"{q}^{q}/({p}^{p}*{q - p}^{q - p})"
        return {"kind": self.kind, "p": p, "q": q, "degree": self.degree, "constant": constant}


def stage_from_json(obj: dict) -> Stage:
    if obj["kind"] == "power":
        return PowerStage(int(obj["p"]), int(obj["q"]))
    if obj["kind"] == "map":
        return MapStage(RatMap.from_json(obj["map"]), obj.get("label", ""))
    raise ValueError(f"unknown stage kind {obj['kind']!r}")


# --------------------------------------------------------------------------
# chains


@dataclass
class CompositionChain:
    """Stages applied left to right, with the special points the composite must collapse."""

    stages: list[Stage] = field(default_factory=list)
    special: list[Tracked] = field(default_factory=list)
    claims: list[list[Tracked] | None] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def total_degree(self) -> int:
        return prod(s.degree for s in self.stages) if self.stages else 1

    @property
    def degrees(self) -> list[int]:
        return [s.degree for s in self.stages]

    def append(self, stage: Stage, claim: list[Tracked] | None = None) -> None:
        self.stages.append(stage)
        self.claims.append(claim)

    def extend(self, other: "CompositionChain") -> None:
        for s, c in zip(other.stages, other.claims):
            self.append(s, c)
        self.notes.extend(other.notes)

    def expand(self, bound: int = DEFAULT_EXPAND_BOUND) -> RatMap | None:
        """The composite as one map, or ``None`` above ``bound`` or with a closed-form stage."""
        if self.total_degree > bound:
            return None
        f = RatMap(RatPoly.x())
        for s in self.stages:
            g = s.ratmap()
            if g is None:
                return None
            f = g.compose(f)
        return f

    def __call__(self, v: Tracked) -> list[Tracked]:
        vals = [v]
        for s in self.stages:
            vals = [w for u in vals for w in s.image(u)]
        return vals

    def to_json(self) -> dict:
        return {
            "stages": [s.to_json() for s in self.stages],
            "degrees": self.degrees,
            "total_degree": self.total_degree,
            "total_degree_odd": self.total_degree % 2 == 1,
            "special": [_tracked_json(v) for v in self.special],
            "notes": list(self.notes),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CompositionChain":
        stages = [stage_from_json(s) for s in obj["stages"]]
        return cls(stages, [_tracked_from_json(v) for v in obj.get("special", [])], [None] * len(stages), list(obj.get("notes", [])))


def _tracked_json(v: Tracked):
    if v is INF:
        return "inf"
    if isinstance(v, AlgSet):
        return {"roots_of": v.poly.to_pairs()}
    return str(v)


def _tracked_from_json(obj) -> Tracked:
    if obj == "inf":
        return INF
    if isinstance(obj, dict):
        return AlgSet(RatPoly.from_pairs(obj["roots_of"]))
    return Fraction(obj)


# --------------------------------------------------------------------------
# verification


@dataclass
class StageCertificate:
    index: int
    kind: str
    degree: int
    branch: list[str]
    tracked_after: list[str]
    claim_ok: bool | None


@dataclass
class ChainCertificate:
    passed: bool
    total_degree: int
    odd: bool
    stages: list[StageCertificate]
    expanded_check: str

    def as_json(self) -> dict:
        return {
            "passed": self.passed,
            "total_degree": str(self.total_degree),
            "odd": self.odd,
            "expanded_check": self.expanded_check,
            "stages": [
                {
                    "index": s.index,
                    "kind": s.kind,
                    "degree": s.degree,
                    "branch": s.branch,
                    "tracked_after": s.tracked_after,
                    "claim_ok": s.claim_ok,
                }
                for s in self.stages
            ],
        }


def _describe(v: Tracked) -> str:
    return "inf" if v is INF else repr(v) if isinstance(v, AlgSet) else str(v)


def _subset(actual: list[Tracked], claim: list[Tracked]) -> bool:
    keys = {_key(v) for v in claim}
    return all(_key(v) in keys for v in actual)


def verify_chain(chain: CompositionChain, expand_bound: int = DEFAULT_EXPAND_BOUND) -> ChainCertificate:
    """Certify that the composite sends the special points and its branch locus into ``{0,1,inf}``.

    Raises :class:`ChainError` naming the stage at fault.
    """
    items = normalize([Item(v, "input") for v in chain.special])
    certs = []
    for i, stage in enumerate(chain.stages):
        pushed = []
        for it in items:
            try:
                vals = stage.image(it.value)
            except ChainError as exc:
                raise ChainError(i, str(exc)) from None
            pushed += [Item(w, it.origin) for w in vals]
        br = stage.branch()
        items = normalize(pushed + [Item(v, f"branch of stage {i}") for v in br])
        claim = chain.claims[i] if i < len(chain.claims) else None
        ok = None
        if claim is not None:
            ok = _subset([it.value for it in items], claim)
            if not ok:
                extra = [it for it in items if not _subset([it.value], claim)]
                bad = extra[0]
                raise ChainError(
                    i,
                    f"tracked point {_describe(bad.value)} (from {bad.origin}) is outside the claimed set "
                    f"{[_describe(v) for v in claim]}",
                )
        certs.append(
            StageCertificate(i, stage.kind, stage.degree, [_describe(v) for v in br], [_describe(it.value) for it in items], ok)
        )
    stray = [it for it in items if not _is_special(it.value)]
    if stray:
        bad = stray[0]
        origin = bad.origin
        stage = int(origin.rsplit(" ", 1)[1]) if origin.startswith("branch of stage") else len(chain.stages) - 1
        raise ChainError(stage, f"point {_describe(bad.value)} (from {origin}) does not reach {{0, 1, inf}}")
    total = chain.total_degree
    expanded = "skipped"
    f = chain.expand(expand_bound)
    if f is not None and chain.stages:
        if not is_belyi(f):
            raise ChainError(None, "expanded composite is not Belyi although every stage passed")
        for v in chain.special:
            for w in MapStage(f).image(v):
                if not _is_special(w):
                    raise ChainError(None, f"expanded composite sends a special point to {_describe(w)}")
        expanded = f"expanded to degree {f.degree} and re-checked"
    return ChainCertificate(True, total, total % 2 == 1, certs, expanded)


# --------------------------------------------------------------------------
# collapse constructions


def collapse_toward_Q(s: RatPoly) -> tuple[RatPoly, BranchData]:
    """An odd-degree polynomial vanishing on the roots of ``s`` with fewer irrational branch values."""
    if s.degree() < 1:
        raise ValueError("s must be nonconstant")
    if s.squarefree_part().degree() != s.degree():
        raise ValueError("s must be squarefree")
    if s.rational_roots():
        raise ValueError("s must have no rational roots")
    h = s.monic()
    if h.degree() % 2 == 1:
        f = h
    else:
        dh = h.derivative()
        beta = 0
        while dh(beta) == 0:
            beta += 1
        alpha = beta + h(beta) / dh(beta)
        f = h * RatPoly([-alpha, 1])
    bd = branch_data(RatMap(f))
    if bd.irrational_part.degree() >= s.degree():
        raise AssertionError("irrational branch locus did not shrink")
    return f, bd


def _normalizer(r: Fraction) -> RatMap | None:
    """A Mobius map permuting ``{0, 1, inf}`` that sends ``r`` into ``(0, 1)``."""
    if 0 < r < 1:
        return None
    if r < 0:
        return RatMap.mobius(1, 0, 1, -1)  # x / (x - 1)
    return RatMap.mobius(0, 1, 1, 0)  # 1 / x


def degree3_stage(r: Fraction) -> tuple[MapStage, Fraction]:
    """``h = g/(g - 1)`` with ``g = q/(q-p) x^2 (x - r)``, and its extra branch value ``r2``."""
    p, q = r.numerator, r.denominator
    x = RatPoly.x()
    core = x * x * RatPoly([-p, q])  # x^2 (q x - p)
    h = RatMap(core, core - RatPoly.const(q - p))
    r2 = Fraction(p**3, p**3 + 27 * (q // 2) ** 2 * (q - p))
    assert h(Fraction(2 * p, 3 * q)) == r2
    return MapStage(h, f"degree 3 at r={r}"), r2


def collapse_rational(r: Fraction) -> CompositionChain:
    """Odd-degree chain sending ``{0, 1, inf, r}`` and its own branch locus into ``{0, 1, inf}``."""
    r = Fraction(r)
    if r in (ZERO, ONE):
        raise ValueError("r must not be 0 or 1")
    chain = CompositionChain(special=[ZERO, ONE, INF, r])
    theta = _normalizer(r)
    if theta is not None:
        r = theta(r)
        chain.append(MapStage(theta, "normalizer"), [ZERO, ONE, INF, r])
    while True:
        p, q = r.numerator, r.denominator
        if q % 2 == 1:
            chain.append(PowerStage(p, q), [ZERO, ONE, INF])
            return chain
        stage, r2 = degree3_stage(r)
        if q % 4 == 0:
            if r2.denominator % 2 == 0:
                raise AssertionError(f"r2 = {r2} should have odd denominator (q = {q})")
        else:
            if r2.numerator % 2 == 0 or r2.denominator % 4 != 0:
                raise AssertionError(f"r2 = {r2} should have odd numerator and denominator divisible by 4")
            chain.notes.append(f"q = {q} is 2 mod 4: r2 = {r2} has odd numerator and 4 | denominator")
        chain.append(stage, [ZERO, ONE, INF, r2])
        r = r2


def _height(v: Fraction) -> tuple[int, Fraction]:
    return (max(abs(v.numerator), v.denominator), v)


def collapse_full(rational_points, irrational_minpoly: RatPoly | None = None) -> CompositionChain:
    """Odd-degree chain collapsing the given points (and ``0, 1, inf``) and its branch locus."""
    pts: list[Tracked] = [ZERO, ONE, INF]
    for v in rational_points:
        if v is INF or v == "inf":
            continue
        v = Fraction(v)
        if v not in pts:
            pts.append(v)
    special = list(pts)
    if irrational_minpoly is not None and irrational_minpoly.degree() > 0:
        special.append(AlgSet(irrational_minpoly.monic()))
    chain = CompositionChain(special=special)
    items = normalize([Item(v, "input") for v in special])

    def push(stage: Stage) -> None:
        nonlocal items
        try:
            pushed = [Item(w, it.origin) for it in items for w in stage.image(it.value)]
        except ChainError as exc:
            raise CollapseLimitError(f"after {len(chain.stages)} stages: {exc}") from None
        items = normalize(pushed + [Item(v, "branch") for v in stage.branch()])

    # phase 1: polynomials until every tracked point is rational
    while True:
        alg = [it.value for it in items if isinstance(it.value, AlgSet)]
        if not alg:
            break
        s = alg[0].poly
        for extra in alg[1:]:
            s = s * extra.poly
        s = s.squarefree_part()
        f, _ = collapse_toward_Q(s)
        stage = MapStage(RatMap(f), "phase 1")
        chain.append(stage)
        push(stage)

    # phase 2: Mobius stage putting 0, 1, inf inside the tracked set
    values = [it.value for it in items]
    if not all(any(_key(v) == _key(w) for v in values) for w in (ZERO, ONE, INF)):
        ordered = sorted([v for v in values if v is not INF]) + ([INF] if INF in values else [])
        a, b, c = ordered[:3]
        theta = _three_point_map(a, b, c)
        stage = MapStage(theta, "phase 2")
        chain.append(stage)
        push(stage)
        chain.notes.append(f"phase 2 sends {a}, {b}, {_describe(c)} to 0, 1, inf")

    # phase 3: collapse the remaining rationals, smallest height first
    while True:
        rest = [it.value for it in items if not _is_special(it.value)]
        if not rest:
            break
        r = min(rest, key=_height)
        bits = _height(r)[0].bit_length()
        if bits > HEIGHT_BITS_LIMIT:
            raise CollapseLimitError(
                f"after {len(chain.stages)} stages the smallest remaining point has a {bits}-bit height; "
                f"collapsing it needs a stage of degree about 2^{bits} (limit {HEIGHT_BITS_LIMIT} bits)"
            )
        sub = collapse_rational(r)
        for stage in sub.stages:
            chain.append(stage)
            push(stage)
        chain.notes.append(f"phase 3 collapsed {r} in {len(sub.stages)} stages")
    return chain


def _three_point_map(a: Fraction, b: Fraction, c: Point) -> RatMap:
    """The Mobius map sending ``a, b, c`` to ``0, 1, inf``."""
    if c is INF:
        return RatMap.mobius(1, -a, 0, b - a)
    # (x - a)(b - c) / ((x - c)(b - a))
    return RatMap.mobius(b - c, -a * (b - c), b - a, -c * (b - a))
