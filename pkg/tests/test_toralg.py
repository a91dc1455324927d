import json

import numpy as np
import pytest

from gradedtrim.experiments import realizing_construction, trial_rng
from gradedtrim.ideal import GradedIdeal, InverseSystem, ann, trim
from gradedtrim.koszul import betti
from gradedtrim.poly import DualForm, random_form
from gradedtrim.toralg import (TorClass, TorInvariants, check_tormins, invariants, multiply,
                               tor_basis, wedge_cycles)
from conftest import P, pf_ideal


def ci():
    return GradedIdeal.parse(["x^2", "y^2", "z^2"])


def zero(c):
    return not (c.coords % P).any()


def neg(c):
    return TorClass(c.i, c.d, (-c.coords) % P)


def same(a, b):
    return a.i == b.i and a.d == b.d and np.array_equal(a.coords % P, b.coords % P)


def test_maximal_ideal_linear_classes():
    tb = tor_basis(GradedIdeal.parse(["x", "y", "z"]))
    assert tb.degrees(1) == [1] and tb.dim(1, 1) == 3
    assert tb.total(2) == 3 and tb.total(3) == 1


def test_complete_intersection_top_class():
    tb = tor_basis(ci())
    assert tb.degrees(3) == [6] and tb.dim(3, 6) == 1
    rep = tb.representative(tb.basis(3)[0])
    # one exterior block of A_3 = k xyz
    assert np.count_nonzero(rep) == 1


@pytest.mark.parametrize("kind,m,j,index", [("Vodd", 2, None, None), ("Hev", 4, None, 1),
                                            ("Vj", 3, 3, 4), ("Vj", 3, 1, 2)])
def test_dims_agree_with_betti(kind, m, j, index):
    k = pf_ideal(kind, m, j)
    if index:
        k = trim(k, index)
    tb, b = tor_basis(k), betti(k)
    for (i, d), v in b.entries.items():
        assert tb.dim(i, d) == v
    assert sum(tb.total(i) for i in range(4)) == sum(b.entries.values())


def test_representatives_are_cycles_and_independent():
    k = trim(pf_ideal("Vj", 3, 3), 4)
    from gradedtrim.koszul import koszul_matrix
    from gradedtrim.linalg import rank
    tb = tor_basis(k)
    for (i, d), piece in tb.pieces.items():
        if i:
            assert not ((koszul_matrix(k, i, d) @ piece.reps.T) % P).any()
        assert rank(piece.reps, P) == piece.reps.shape[0]
        for z in tb.basis(i):
            if z.d == d:
                assert same(tb.project(i, d, tb.representative(z)), z)


def test_skew_commutativity():
    for k in (ci(), trim(pf_ideal("Vj", 3, 3), 4)):
        tb = tor_basis(k)
        t1, t2 = tb.basis(1), tb.basis(2)
        for a in t1:
            for b in t1:
                assert same(multiply(tb, a, b), neg(multiply(tb, b, a)))
            for c in t2:
                assert same(multiply(tb, a, c), multiply(tb, c, a))
            assert zero(multiply(tb, a, a))


def test_associativity_on_the_complete_intersection():
    tb = tor_basis(ci())
    a, b, c = tb.basis(1)
    left = multiply(tb, multiply(tb, a, b), c)
    right = multiply(tb, a, multiply(tb, b, c))
    assert same(left, right)
    assert not zero(left)
    assert invariants(ci()).to_dict() == {"mu": 3, "type": 1, "p": 3, "q": 1, "r": 3,
                                          "class": "other(3,1,3)"}


def test_products_past_top_degree_are_zero():
    tb = tor_basis(ci())
    a, c = tb.basis(1)[0], tb.basis(3)[0]
    assert multiply(tb, a, c).coords.size == 0
    assert wedge_cycles(tb.ideal, 2, 4, np.zeros(9), 2, 4, np.zeros(9)).size == 0


@pytest.mark.parametrize("s", [2, 3, 4, 5])
def test_maximal_trim_class(s):
    inv = invariants(trim(pf_ideal("Vj", s, s), s + 1))
    assert inv.mu == 2 * s + 2
    assert (inv.p, inv.q) == (0, 1)
    assert inv.class_label == ("G(3)" if s == 2 else f"G({2 * s - 1})")


@pytest.mark.parametrize("m", [2, 3])
def test_odd_v_trim_class(m):
    k = pf_ideal("Vodd", m)
    assert str(k.gens[2 * m - 1]).lstrip("-") == f"x^{2 * m - 2}*z"
    assert invariants(trim(k, 2 * m)).class_label == f"G({2 * m})"


@pytest.mark.parametrize("index", [1, 2, 3])
def test_small_even_v_trim_is_not_class_g(index):
    inv = invariants(trim(pf_ideal("Vev", 1), index))
    assert inv.mu == 5
    assert not inv.is_class_g
    assert inv.class_label.startswith("other(")


def test_check_tormins_examples():
    t = trim(pf_ideal("Vj", 3, 3), 4)
    assert check_tormins(t, 3)
    inv = invariants(t)
    assert (inv.mu, inv.class_label) == (8, "G(5)")
    # first family of the realizability list, s = 4 and i = 1
    t = trim(pf_ideal("Vj", 3, 2), 4)
    inv = invariants(t)
    assert (inv.mu, inv.class_label) == (9, "G(6)")
    assert check_tormins(t, 4)
    t = trim(pf_ideal("Hev", 4), 1)
    inv = invariants(t)
    assert (inv.mu, inv.class_label) == (7, "G(4)")
    assert check_tormins(t, 4)


def test_check_tormins_rejects_wrong_socle():
    with pytest.raises(ValueError):
        check_tormins(ci(), 3)


TWO_SOCLE_CASES = ([("construction", s, r) for s in (3, 4, 5) for r in range(s, 2 * s)]
               + [("random", s, k) for s in (3, 4) for k in range(2)])


def two_socle_instance(kind, s, n):
    if kind == "construction":
        return realizing_construction(s, n).ideal()
    forms = [random_form(s, trial_rng(70, s, n), P, DualForm),
             random_form(2 * s - 1, trial_rng(71, s, n), P, DualForm)]
    return ann(InverseSystem(forms))


@pytest.mark.parametrize("kind,s,n", TWO_SOCLE_CASES)
def test_two_socle_instance_bounds(kind, s, n):
    ideal = two_socle_instance(kind, s, n)
    inv = invariants(ideal)
    assert (inv.p, inv.q) == (0, 1)
    assert s <= inv.r <= 2 * s - 1
    assert inv.r == inv.mu - 3
    assert inv.mu <= 2 * s + 2
    assert check_tormins(ideal, s)


def test_label_convention_for_small_r():
    assert TorInvariants(4, 1, 0, 1, 1).class_label == "other(0,1,1)"
    assert TorInvariants(5, 2, 0, 1, 2).class_label == "G(2)"
    assert json.loads(TorInvariants(8, 2, 0, 1, 5).to_json()) == \
        {"mu": 8, "type": 2, "p": 0, "q": 1, "r": 5, "class": "G(5)"}
