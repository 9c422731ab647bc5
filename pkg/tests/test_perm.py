from collections import Counter
from itertools import permutations as itperms
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dessinkit.perm import (
    Permutation,
    all_permutations,
    canonical_key,
    class_representative,
    class_size,
    cycle_type,
    genus_of_passport,
    parse_partition,
    partitions,
    permutations_of_type,
    power_cycle_type,
    ram,
    simultaneously_conjugate,
    square_roots,
)


def perms(max_n=7):
    return st.integers(1, max_n).flatmap(lambda n: st.permutations(range(1, n + 1)).map(Permutation.from_images))


def pairs(max_n=6):
    return st.integers(1, max_n).flatmap(
        lambda n: st.tuples(
            st.permutations(range(1, n + 1)).map(Permutation.from_images),
            st.permutations(range(1, n + 1)).map(Permutation.from_images),
            st.permutations(range(1, n + 1)).map(Permutation.from_images),
        )
    )


def test_right_action_convention():
    a = Permutation.from_cycles([[1, 2]], 3)
    b = Permutation.from_cycles([[2, 3]], 3)
    # a first, then b: 1 -> 2 -> 3
    assert (a * b)(0) == 2
    assert (a * b).cycle_type() == (3,)


def test_from_cycles_rejects_bad_input():
    with pytest.raises(ValueError):
        Permutation.from_cycles([[1, 2], [2, 3]], 3)
    with pytest.raises(ValueError):
        Permutation.from_cycles([[0, 1]], 3)


def test_parse_partition():
    assert parse_partition("2,2,1") == (2, 2, 1)
    assert parse_partition("11") == (11,)
    for bad in ("1,2,2", "2,0", "x"):
        with pytest.raises(ValueError):
            parse_partition(bad)


def test_partition_counts():
    assert [sum(1 for _ in partitions(n)) for n in range(1, 11)] == [1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


@pytest.mark.parametrize("n", range(1, 7))
def test_class_sizes_match_brute_force(n):
    counts = Counter(cycle_type(p) for p in all_permutations(n))
    assert sum(counts.values()) == factorial(n)
    for psi in partitions(n):
        assert class_size(psi) == counts[psi]
        assert sum(1 for _ in permutations_of_type(psi)) == counts[psi]
        assert cycle_type(class_representative(psi)) == psi


def test_power_cycle_type_examples():
    assert power_cycle_type((6,), 2) == (3, 3)
    assert power_cycle_type((4, 3), 2) == (3, 2, 2)
    assert power_cycle_type((5,), 5) == (1, 1, 1, 1, 1)


@given(perms(), st.integers(-6, 6))
def test_power_cycle_type_agrees_with_powering(p, m):
    assert power_cycle_type(p.cycle_type(), m) == (p**m).cycle_type()


@pytest.mark.parametrize("n", range(1, 8))
def test_square_roots_exhaustive(n):
    """Every class representative, against the brute-force list of all x with x*x = sigma."""
    everything = list(all_permutations(n))
    squares = {}
    for x in everything:
        squares.setdefault(x * x, set()).add(x)
    for psi in partitions(n):
        sigma = class_representative(psi)
        assert square_roots(sigma) == squares.get(sigma, set())


def test_square_roots_of_double_transposition_are_the_four_cycles():
    sigma = Permutation.from_cycles([[1, 2], [3, 4]], 4)
    roots = square_roots(sigma)
    assert len(roots) == 2
    assert all(r.cycle_type() == (4,) for r in roots)


@given(perms(6), st.data())
def test_root_count_is_a_class_function(p, data):
    rho = data.draw(st.permutations(range(1, p.degree + 1)).map(Permutation.from_images))
    assert len(square_roots(p)) == len(square_roots(p.conjugate(rho)))


@given(pairs())
def test_canonical_key_is_conjugation_invariant(triple):
    a, b, rho = triple
    assert canonical_key([a, b]) == canonical_key([a.conjugate(rho), b.conjugate(rho)])


@given(pairs())
def test_simultaneous_conjugator_is_returned(triple):
    a, b, rho = triple
    target = [a.conjugate(rho), b.conjugate(rho)]
    found = simultaneously_conjugate([a, b], target)
    assert found is not None
    assert [a.conjugate(found), b.conjugate(found)] == target


@pytest.mark.parametrize("n", range(1, 5))
def test_canonical_key_separates_classes(n):
    """Brute-force orbit computation under S_n agrees with the key."""
    everything = list(all_permutations(n))
    seen_keys = {}
    for a in everything:
        for b in everything:
            orbit = frozenset((a.conjugate(r), b.conjugate(r)) for r in everything)
            seen_keys.setdefault(canonical_key([a, b]), set()).add(orbit)
    assert all(len(orbits) == 1 for orbits in seen_keys.values())


def test_conjugate_relabels_points():
    p = Permutation.from_cycles([[1, 2, 3]], 3)
    rho = Permutation.from_cycles([[1, 2]], 3)
    assert p.conjugate(rho) == Permutation.from_cycles([[2, 1, 3]], 3)


@given(pairs())
def test_genus_is_symmetric_in_the_passport(triple):
    a, b, _ = triple
    c = (a * b).inverse()
    types = [a.cycle_type(), b.cycle_type(), c.cycle_type()]
    values = {genus_of_passport(*order) for order in itperms(types)}
    assert len(values) == 1


def test_ram_and_genus():
    assert ram((2, 2, 1)) == 2
    assert genus_of_passport((2, 2, 1), (5,), (2, 2, 1)) == 0
    assert genus_of_passport((3,), (3,), (3,)) == 1
