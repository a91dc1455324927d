import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gradedtrim import linalg
from conftest import naive_rank

P = 32003


def small_matrices(max_rows=7, max_cols=7, p=P):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.sampled_from([0, 0, 1, 2, p - 1, 12345]),
                                        min_size=c, max_size=c),
                               min_size=r, max_size=r)))


@given(small_matrices())
def test_rank_matches_oracle(rows):
    assert linalg.rank(np.array(rows), P) == naive_rank(rows)


@given(small_matrices())
def test_rank_transpose_invariant(rows):
    a = np.array(rows)
    assert linalg.rank(a, P) == linalg.rank(a.T, P)


@given(small_matrices())
def test_nullspace_is_kernel_of_right_size(rows):
    a = np.array(rows)
    ker = linalg.nullspace(a, P)
    assert ker.shape[0] == a.shape[1] - linalg.rank(a, P)
    if ker.size:
        assert not ((a @ ker.T) % P).any()


@given(small_matrices(), st.lists(st.integers(0, P - 1), min_size=7, max_size=7))
def test_solve_recovers_consistent_rhs(rows, coeffs):
    a = np.array(rows)
    x0 = np.array(coeffs[:a.shape[1]])
    b = (a @ x0) % P
    x = linalg.solve(a, b, P)
    assert np.array_equal((a @ x) % P, b)


def test_solve_rejects_inconsistent_system():
    with pytest.raises(ValueError):
        linalg.solve(np.array([[1, 0], [1, 0]]), np.array([0, 1]), P)


def test_rref_is_reduced():
    a = np.array([[2, 4, 6], [1, 2, 4], [0, 0, 5]])
    red, piv = linalg.rref(a, P)
    assert piv == [0, 2]
    assert red[0, 0] == 1 and red[1, 2] == 1 and red[0, 2] == 0


def test_independent_extension_complements_base():
    base = np.array([[1, 0, 0]])
    cand = np.array([[2, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 3]])
    picks = linalg.independent_extension(base, cand, P)
    assert picks == [1, 3]
    assert linalg.in_span(base, np.array([5, 0, 0]), P)
    assert not linalg.in_span(base, np.array([0, 1, 0]), P)


def test_inverse_roundtrip():
    a = np.array([[1, 2], [3, 4]])
    inv = linalg.inverse(a, P)
    assert np.array_equal((a @ inv) % P, np.eye(2, dtype=np.int64))
    with pytest.raises(ValueError):
        linalg.inverse(np.array([[1, 2], [2, 4]]), P)


@settings(deadline=None, max_examples=5)
@given(st.integers(0, 2**32 - 1))
def test_blocked_rank_agrees_with_plain_elimination(seed):
    # large enough to go through the panel path
    gen = np.random.default_rng(seed)
    left = gen.integers(0, P, size=(260, 140))
    right = gen.integers(0, P, size=(140, 230))
    a = linalg._mulmod(left, right, P)
    a[:, 100:] = 0
    expected = len(linalg._eliminate(a.copy(), P, full=False))
    assert linalg.rank(a, P) == expected == 100
