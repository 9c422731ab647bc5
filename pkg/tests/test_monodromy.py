import pytest

from dessinkit.monodromy import (
    Constellation,
    NotTransitiveError,
    PreConstellation,
    compose_covers,
    compose_with_t,
    default_fibre_marking,
    find_constellation,
    is_isomorphic,
    iter_constellations,
    passport,
    sigma_pullback,
    xi_product,
)
from dessinkit.perm import Permutation, make_partition

# Conjugacy classes of index-n subgroups of the free group of rank 2 (transitive
# pairs) and of all pairs in S_n up to simultaneous conjugation.
TRANSITIVE_COUNTS = [1, 3, 7, 26, 97, 624]
ALL_COUNTS = [1, 4, 11, 43, 161, 901]


@pytest.mark.parametrize("n", range(1, 7))
def test_enumeration_counts(n):
    assert sum(1 for _ in iter_constellations(n)) == TRANSITIVE_COUNTS[n - 1]
    assert sum(1 for _ in iter_constellations(n, transitive=False)) == ALL_COUNTS[n - 1]


def test_product_relation_and_transitivity():
    s0 = Permutation.from_cycles([[1, 2]], 4)
    s1 = Permutation.from_cycles([[3, 4]], 4)
    with pytest.raises(NotTransitiveError):
        Constellation.from_pair(s0, s1)
    pre = PreConstellation.from_pair(s0, s1)
    assert pre.orbits() == [[1, 2], [3, 4]]
    with pytest.raises(ValueError):
        PreConstellation(s0, s1, s0)


def test_t0_model(t0):
    assert passport(t0) == ((2, 2, 1), (5,), (2, 2, 1))
    assert t0.genus() == 0


def test_t0_pullback_has_trivial_minus_one(t0):
    four = sigma_pullback(t0)
    assert four.sigma_m1.is_identity()
    pulled = four.drop_trivial(require_transitive=True)
    assert pulled.sigma1.cycle_type() == (5,)


def test_pullback_formulas():
    for c in iter_constellations(4):
        four = sigma_pullback(c)
        assert four.sigma0 == c.sigma0
        assert four.sigma1 == c.sigma1 * c.sigma1
        assert four.sigma_m1 == c.sigma_inf * c.sigma_inf


def test_xi_product_of_t0(t0):
    prod = xi_product(t0)
    assert prod.n == 10
    assert prod.transitive
    assert prod.sigma1.cycle_type() == (10,)


@pytest.mark.parametrize("n", range(1, 7))
def test_xi_product_transitive_when_sigma1_has_an_odd_cycle(n):
    for c in iter_constellations(n):
        if any(len(cyc) % 2 for cyc in c.sigma1.cycles(include_fixed=True)):
            assert xi_product(c).transitive, c
            assert xi_product(c, x_slot="0").transitive, c


def test_xi_product_intransitive_when_all_cycles_even():
    c = Constellation.from_pair(Permutation.from_cycles([[1, 2]], 2), Permutation.from_cycles([[1, 2]], 2))
    assert not xi_product(c).transitive


@pytest.mark.parametrize("n", range(1, 5))
def test_geometric_xi_product_matches_pullback_composition(n):
    """t o Sigma(c) is the 0-slot xi-product, for every c of degree n."""
    for c in iter_constellations(n, transitive=False):
        geometric = compose_with_t(sigma_pullback(c))
        assert is_isomorphic(geometric, xi_product(c, x_slot="0")), c


def test_inf_slot_xi_product_differs_from_the_geometric_one():
    """The x -> x_inf identification is a different representation in general."""
    mismatches = sum(
        not is_isomorphic(compose_with_t(sigma_pullback(c)), xi_product(c))
        for n in range(1, 5)
        for c in iter_constellations(n, transitive=False)
    )
    assert mismatches > 0


def _predicted_fibre(outer, inner, fibre, marking):
    """Cycle type of the composite over ``fibre``: ramification e times inner parts."""
    parts = []
    by_point = {p: slot for slot, (fb, p) in marking.items() if fb == fibre}
    for cyc in outer.slot(fibre).cycles(include_fixed=True):
        e = len(cyc)
        slot = next((by_point[p] for p in cyc if p in by_point), None)
        lam = inner.slot(slot).cycle_type() if slot else (1,) * inner.n
        parts.extend(e * x for x in lam)
    return make_partition(parts)


@pytest.mark.parametrize("k", range(1, 5))
def test_composition_passport_law(t0, k):
    marking = default_fibre_marking(t0, "0")
    for inner in iter_constellations(k):
        comp = compose_covers(t0, inner, marking)
        assert comp.n == 5 * k
        assert comp.transitive
        for fibre in ("0", "1", "inf"):
            assert comp.slot(fibre).cycle_type() == _predicted_fibre(t0, inner, fibre, marking)


def test_degree_one_inner_returns_outer(t0):
    one = next(iter_constellations(1))
    comp = compose_covers(t0, one, default_fibre_marking(t0))
    assert is_isomorphic(comp, t0)


def test_composition_gauge_independence(t0):
    marking = default_fibre_marking(t0)
    for inner in iter_constellations(3):
        results = [compose_covers(t0, inner, marking, root_slot=s) for s in ("0", "1", "inf")]
        assert all(is_isomorphic(results[0], r) for r in results[1:])


def test_compose_with_genus_one_inner(t0):
    inner = find_constellation((3,), (3,), (3,))
    comp = compose_covers(t0, inner, default_fibre_marking(t0))
    assert comp.sigma1.cycle_type() == (5, 5, 5)
    assert comp.sigma_inf.cycle_type() == (2,) * 6 + (1,) * 3


def test_compose_rejects_positive_genus_outer():
    outer = find_constellation((3,), (3,), (3,))
    inner = next(iter_constellations(1))
    with pytest.raises(ValueError):
        compose_covers(outer, inner, {"0": ("0", 1), "1": ("1", 1), "inf": ("inf", 1)})


def test_default_marking(t0):
    marking = default_fibre_marking(t0, "0")
    fixed = [c for c in t0.sigma0.cycles(include_fixed=True) if len(c) == 1][0]
    assert marking["inf"] == ("0", fixed[0])
    with pytest.raises(ValueError):
        default_fibre_marking(t0, "1")
