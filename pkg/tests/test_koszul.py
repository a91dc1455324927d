from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gradedtrim.experiments import trial_rng
from gradedtrim.ideal import GradedIdeal, NotArtinianError, ann, hilbert, trim
from gradedtrim.koszul import (BettiTable, betti, bs_coefficients, compressed_level_strand,
                               even_trim_table, gorenstein_table, hilbert_series_euler,
                               initial_degree, koszul_matrix, maximal_trim_table,
                               theta_matrix, theta_rank, tor_dim_via_theta, vj_table)
from gradedtrim.poly import DualForm, parse_dual, random_form
from conftest import P, pf_ideal

FAMILIES = ([("Hev", s, None) for s in (2, 4, 6)] + [("Hodd", s, None) for s in (3, 5)]
            + [("Vodd", m, None) for m in (2, 3)] + [("Vev", m, None) for m in (1, 2, 3)]
            + [("Vj", m, j) for m in (2, 3, 4) for j in range(1, m + 1)])


def table(rows):
    return BettiTable.from_rows(rows)


def test_maximal_ideal_is_the_koszul_complex():
    assert betti(GradedIdeal.parse(["x", "y", "z"])) == table({0: [1, 3, 3, 1]})


def test_complete_intersection():
    b = betti(GradedIdeal.parse(["x^2", "y^2", "z^2"]))
    assert (b[1, 2], b[2, 4], b[3, 6]) == (3, 3, 1)
    assert b.total(1) == 3 and b.total(2) == 3


def test_even_h_family_table():
    assert betti(pf_ideal("Hev", 4)) == gorenstein_table(4, 0)
    assert betti(pf_ideal("Hev", 4)) == table({0: [1], 3: [0, 5], 4: [0, 0, 5],
                                                7: [0, 0, 0, 1]})


def test_odd_h_family_table():
    assert betti(pf_ideal("Hodd", 3)) == table({0: [1], 2: [0, 4, 1], 3: [0, 1, 4],
                                                5: [0, 0, 0, 1]})


def test_maximal_trim_table_s3():
    t = trim(pf_ideal("Vj", 3, 3), 4)
    assert betti(t) == table({0: [1], 2: [0, 3, 2, 0], 3: [0, 5, 7, 1], 5: [0, 0, 0, 1]})
    assert betti(t) == maximal_trim_table(3)


def test_even_trim_table_s4():
    assert betti(trim(pf_ideal("Hev", 4), 1)) == even_trim_table(4)


@pytest.mark.parametrize("kind,m,j", FAMILIES)
def test_strand_complex_property(kind, m, j):
    k = pf_ideal(kind, m, j)
    for d in range(k.top_degree() + 4):
        for i in (1, 2):
            a, b = koszul_matrix(k, i, d), koszul_matrix(k, i + 1, d)
            if a.size and b.size:
                assert not ((a @ b) % P).any()


@pytest.mark.parametrize("kind,m,j", FAMILIES)
def test_euler_characteristic_matches_hilbert_series(kind, m, j):
    k = pf_ideal(kind, m, j)
    data = hilbert(k)
    b = betti(k)
    for d in range(data.top_degree + 5):
        assert b.euler(d) == hilbert_series_euler(data.hf, d)


@pytest.mark.parametrize("kind,m,j", FAMILIES)
def test_gorenstein_symmetry(kind, m, j):
    k = pf_ideal(kind, m, j)
    c = hilbert(k).top_degree
    b = betti(k)
    for (i, jj), v in b.entries.items():
        assert b[3 - i, c + 3 - jj] == v


@pytest.mark.parametrize("m,j", [(m, j) for m in (2, 3, 4) for j in range(1, m + 1)])
def test_vj_tables(m, j):
    assert betti(pf_ideal("Vj", m, j)) == vj_table(m, j)


@pytest.mark.parametrize("s", [2, 3, 4])
def test_linear_strand_matches_level_formula(s):
    b = betti(pf_ideal("Vj", s, s))
    assert b[1, s] == compressed_level_strand(3, 2 * s - 1, 1, s, 1)


def test_compressed_level_strand_values():
    for s in range(2, 8):
        assert compressed_level_strand(3, 2 * s - 1, 1, s, 1) == s + 1
        assert compressed_level_strand(3, 2 * s - 2, 1, s, 1) == 2 * s + 1
        assert compressed_level_strand(3, 2 * s - 1, 1, s, 2) == 0


def test_bs_coefficients():
    assert bs_coefficients(4, 0) == (0, 1, 0)
    assert bs_coefficients(3, 4)[1] == Fraction(-1, 15)
    assert bs_coefficients(3, 3)[1] == Fraction(3, 15)
    for s in range(2, 7):
        for b in range(0, 2 * s):
            assert (bs_coefficients(s, b)[1] >= 0) == (b <= s)
    with pytest.raises(ValueError):
        bs_coefficients(1, 0)


def test_non_artinian_betti_raises():
    with pytest.raises(NotArtinianError):
        betti(GradedIdeal.parse(["x", "y"]), 6)


# -- Theta -----------------------------------------------------------------------

def test_theta_three_entries_are_signed_coefficients():
    phi = parse_dual("3*X^3 + 5*X*Y*Z - 7*Z^3 + 2*Y^2*Z")
    allowed = {0} | {c % P for c in phi.terms.values()} | {-c % P for c in phi.terms.values()}
    assert set(np.unique(theta_matrix(phi, 3)).tolist()) <= allowed


@settings(deadline=None, max_examples=20)
@given(st.integers(0, 10**6), st.integers(2, P - 1))
def test_theta_rank_is_scale_invariant(seed, c):
    phi = random_form(4, trial_rng(seed), P, DualForm)
    for i in (1, 2, 3):
        assert theta_rank(phi, i) == theta_rank(phi.scale(c), i)


@pytest.mark.parametrize("c", [3, 4, 5, 6, 7])
def test_theta_dims_match_betti(c):
    for k in range(4):
        phi = random_form(c, trial_rng(40, c, k), P, DualForm)
        b = betti(ann(phi))
        t = initial_degree(phi)
        for i in (1, 2, 3):
            assert tor_dim_via_theta(phi, i) == b[i, i + t - 1]


@pytest.mark.parametrize("mono", [(5, 0, 0), (2, 2, 1), (3, 1, 0), (1, 1, 1)])
def test_theta_dims_match_betti_for_monomials(mono):
    phi = DualForm({mono: 1}, P)
    b = betti(ann(phi))
    t = initial_degree(phi)
    for i in (1, 2, 3):
        assert tor_dim_via_theta(phi, i, t) == b[i, i + t - 1]


@pytest.mark.parametrize("s", [2, 3, 4, 5])
def test_theta_generic_second_tor(s):
    phi = random_form(2 * s - 1, trial_rng(50, s), P, DualForm)
    assert initial_degree(phi) == s
    assert tor_dim_via_theta(phi, 2) == s % 2


def test_theta_rejects_bad_index():
    with pytest.raises(ValueError):
        theta_matrix(parse_dual("X^3"), 4)


# -- tables -----------------------------------------------------------------------

def test_text_rendering():
    b = betti(GradedIdeal.parse(["x^2", "y^2", "z^2"]))
    assert b.text().splitlines() == ["       0 1 2 3", "total: 1 3 3 1", "    0: 1 . . .",
                                     "    1: . 3 . .", "    2: . . 3 .", "    3: . . . 1"]


def test_json_roundtrip():
    b = maximal_trim_table(4)
    assert BettiTable.from_json(b.to_json()) == b


def test_table_validation():
    with pytest.raises(ValueError):
        BettiTable({(2, 1): 1})
    with pytest.raises(ValueError):
        BettiTable({(1, 2): -1})
