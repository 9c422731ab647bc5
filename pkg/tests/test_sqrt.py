import pytest
from hypothesis import given
from hypothesis import strategies as st

from dessinkit.monodromy import PreConstellation, is_isomorphic, iter_constellations, passport, sigma_pullback
from dessinkit.perm import Permutation
from dessinkit.sqrt import check_uniqueness_hypothesis, sqct, sqrt_class, sqrt_oracle, theorem_checks, xi_sweep


def _equal_ends(n):
    return [c for c in iter_constellations(n) if passport(c)[0] == passport(c)[2]]


@pytest.mark.parametrize(
    "mu, expected",
    [
        ((5,), (5, 1)),
        ((2, 2, 1, 1, 1), None),
        ((3, 1, 1), (3, 1)),
        ((3, 3, 1), (1, 1)),
        ((3, 3, 6), None),
        ((4, 4), None),
    ],
)
def test_uniqueness_hypothesis(mu, expected):
    assert check_uniqueness_hypothesis(tuple(sorted(mu, reverse=True))) == expected


def test_t0_pullback_has_a_single_square_root_class(t0):
    pulled = sigma_pullback(t0).drop_trivial(require_transitive=True)
    sq = sqrt_class(pulled)
    assert len(sq) == 1
    assert sq.keys() == {t0.key()}
    report = sqct(pulled)
    assert report.multiset() == {((2, 2, 1), (5,), (2, 2, 1)): 1}
    checks = {ch.name: ch for ch in theorem_checks(report)}
    assert checks["b"].applicable and checks["b"].passed


@pytest.mark.parametrize("n", range(1, 5))
def test_sqrt_class_matches_oracle(n):
    for c in _equal_ends(n):
        assert sqrt_class(c).keys() == {g.key() for g in sqrt_oracle(c)}, c


def test_sqrt_oracle_guard():
    c = next(iter_constellations(8, psi0=(8,)))
    with pytest.raises(ValueError):
        sqrt_oracle(c, max_degree_guard=7)


def test_unequal_end_types_have_no_roots():
    c = PreConstellation.from_pair(Permutation.from_cycles([[1, 2, 3]], 3), Permutation.from_cycles([[1, 2]], 3))
    assert passport(c)[0] != passport(c)[2]
    assert len(sqrt_class(c)) == 0


@given(st.integers(1, 4).flatmap(lambda n: st.sampled_from(list(iter_constellations(n)))))
def test_every_class_element_pulls_back_to_the_source(g):
    """Sigma(g) has trivial -1 slot iff tau_inf^2 = 1; then g is in Sqrt(Sigma(g))."""
    four = sigma_pullback(g)
    if not four.sigma_m1.is_identity():
        return
    f = four.drop_trivial()
    assert g.key() in sqrt_class(f, require_transitive=False).keys()
    for e in sqrt_class(f, require_transitive=False):
        assert is_isomorphic(sigma_pullback(e.constellation()).drop_trivial(), f)


def test_intransitive_roots_are_reported_not_dropped_silently():
    total = kept = 0
    for n in range(1, 6):
        for c in _equal_ends(n):
            strict = sqrt_class(c)
            loose = sqrt_class(c, require_transitive=False)
            assert len(loose) == len(strict) + len(strict.filtered_intransitive)
            total += len(loose)
            kept += len(strict)
    assert kept <= total


@pytest.mark.parametrize("n", range(1, 6))
def test_theorem_checks_small(n):
    for c in _equal_ends(n):
        assert all(ch.passed for ch in theorem_checks(sqct(c))), c


@pytest.mark.parametrize("n", range(1, 6))
def test_xi_cancellation_and_transitivity(n):
    sweep = xi_sweep(n)
    assert sweep.intransitive_products == []
    assert sweep.counterexamples == []
