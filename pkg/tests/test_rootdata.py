from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import POSITIVE_ROOT_COUNT, roots_by_reflection
from qunitary.rootdata import (
    RootSystem,
    build_root_system,
    coxeter_labels,
    dynkin_bipartition,
    freudenthal_character,
    identify_cartan,
    parse_algebra,
    weyl_dimension,
)

ALL_TYPES = ["A1", "A2", "A3", "A5", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "D5", "E6", "E7", "E8", "F4", "G2"]
SMALL_TYPES = ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "D4", "G2"]


@pytest.mark.parametrize("name", ALL_TYPES)
def test_positive_root_count(name):
    rs = parse_algebra(name)
    assert len(rs.positive_roots) == POSITIVE_ROOT_COUNT[rs.series](rs.rank)


@pytest.mark.parametrize("name", ALL_TYPES)
def test_roots_match_weyl_orbit_of_simple_roots(name):
    rs = parse_algebra(name)
    orbit = roots_by_reflection(rs.cartan)
    pos = {r for r in orbit if all(c >= 0 for c in r)}
    assert pos == set(rs.positive_roots)
    assert len(orbit) == 2 * len(pos)


@pytest.mark.parametrize("name", ALL_TYPES)
def test_symmetrizer_and_lengths(name):
    rs = parse_algebra(name)
    r = rs.rank
    for i, j in product(range(r), repeat=2):
        assert rs.d[j] * rs.cartan[i][j] == rs.d[i] * rs.cartan[j][i]
    assert min(rs.d) == 1
    lengths = {rs.root_length(a) for a in rs.positive_roots}
    assert lengths == set(rs.d)


def test_bourbaki_conventions():
    b2 = parse_algebra("B2")
    assert b2.cartan == ((2, -2), (-1, 2))
    assert b2.d == (2, 1)
    g2 = parse_algebra("G2")
    assert g2.d == (1, 3)
    assert parse_algebra("C3").d == (1, 1, 2)


@pytest.mark.parametrize("text", ["B1", "D3", "E9", "X2", "A0", "", "F5", "G3"])
def test_parse_rejects_invalid_types(text):
    with pytest.raises(ValueError):
        parse_algebra(text)


def test_from_cartan_rejects_non_cartan():
    with pytest.raises(ValueError):
        RootSystem.from_cartan([[2, 1], [1, 2]])
    with pytest.raises(ValueError):
        RootSystem.from_cartan([[2, -1], [0, 2]])


@pytest.mark.parametrize("name,labels", [
    ("A3", (1, 1, 1)), ("B3", (1, 2, 2)), ("C3", (2, 2, 1)), ("D5", (1, 2, 2, 1, 1)),
    ("E6", (1, 2, 2, 3, 2, 1)), ("E7", (2, 2, 3, 4, 3, 2, 1)), ("E8", (2, 3, 4, 6, 5, 4, 3, 2)),
    ("F4", (2, 3, 4, 2)), ("G2", (3, 2)),
])
def test_highest_root_coefficients(name, labels):
    assert coxeter_labels(parse_algebra(name)) == labels


@pytest.mark.parametrize("name,lam,dim", [
    ("A1", (4,), 5), ("A2", (1, 1), 8), ("A2", (2, 0), 6), ("B2", (1, 0), 5), ("B2", (0, 1), 4),
    ("C2", (1, 0), 4), ("G2", (1, 0), 7), ("G2", (0, 1), 14), ("G2", (1, 1), 64),
    ("F4", (0, 0, 0, 1), 26), ("E6", (1, 0, 0, 0, 0, 0), 27), ("E7", (0, 0, 0, 0, 0, 0, 1), 56),
    ("E8", (0, 0, 0, 0, 0, 0, 0, 1), 248), ("D4", (0, 1, 0, 0), 28),
])
def test_weyl_dimension_known_values(name, lam, dim):
    assert weyl_dimension(lam, parse_algebra(name)) == dim


@pytest.mark.parametrize("name", SMALL_TYPES)
@given(data=st.data())
def test_freudenthal_sums_to_weyl_dimension(name, data):
    rs = parse_algebra(name)
    lam = tuple(data.draw(st.integers(0, 2)) for _ in range(rs.rank))
    char = freudenthal_character(lam, rs)
    assert sum(char.values()) == weyl_dimension(lam, rs)


@pytest.mark.parametrize("name", SMALL_TYPES)
@given(data=st.data())
def test_freudenthal_is_weyl_invariant(name, data):
    rs = parse_algebra(name)
    lam = tuple(data.draw(st.integers(0, 2)) for _ in range(rs.rank))
    char = freudenthal_character(lam, rs)
    for mu, mult in char.items():
        for i in range(rs.rank):
            assert char.get(rs.reflect(mu, i), 0) == mult


def test_adjoint_zero_weight_multiplicity_is_rank():
    for name in ["A2", "B3", "C3", "G2"]:
        rs = parse_algebra(name)
        theta = rs.root_to_weight(rs.highest_root)
        char = freudenthal_character(theta, rs)
        assert char[tuple(Fraction(0) for _ in range(rs.rank))] == rs.rank


def test_height_cap_truncates_by_depth():
    rs = parse_algebra("A2")
    full = freudenthal_character((2, 1), rs)
    capped = freudenthal_character((2, 1), rs, height_cap=1)
    assert set(capped) < set(full)
    assert all(full[w] == capped[w] for w in capped)


def test_reflection_is_involution_and_rho_pairs_to_one():
    rs = parse_algebra("F4")
    w = (Fraction(1, 3), 2, -1, 5)
    for i in range(rs.rank):
        assert rs.reflect(rs.reflect(w, i), i) == tuple(Fraction(x) for x in w)
        assert rs.coroot_pairing(rs.rho, rs.simple_roots[i]) == 1


@pytest.mark.parametrize("name", ALL_TYPES)
def test_bipartition_is_proper_coloring(name):
    rs = parse_algebra(name)
    colors = dynkin_bipartition(rs)
    assert colors[0] == 0
    for i, j in product(range(rs.rank), repeat=2):
        if i != j and rs.cartan[i][j]:
            assert colors[i] != colors[j]


@pytest.mark.parametrize("name", ALL_TYPES)
def test_identify_own_cartan(name):
    assert identify_cartan(parse_algebra(name).cartan) == name


def test_identify_rank_two_orientation_and_products():
    assert identify_cartan([[2, -1], [-2, 2]]) == "C2"
    assert identify_cartan([[2, -2], [-1, 2]]) == "B2"
    assert identify_cartan([[2, 0], [0, 2]]) == "A1xA1"
    assert identify_cartan([[2, -3], [-1, 2]]) == "G2"
    # nodes permuted
    assert identify_cartan([[2, 0, -1], [0, 2, -1], [-1, -1, 2]]) == "A3"


def test_identify_d4_from_permuted_star():
    A = [[2, -1, -1, -1], [-1, 2, 0, 0], [-1, 0, 2, 0], [-1, 0, 0, 2]]
    assert identify_cartan(A) == "D4"


def test_build_matches_parse():
    assert build_root_system("E", 6) == parse_algebra("E6")
