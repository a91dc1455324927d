import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from gradedtrim.altpf import (AltMatrix, determinant, family, listed_generators, pfaffian,
                              sub_pfaffians, wedge_power)
from gradedtrim.ideal import GradedIdeal, min_gens, same_ideal
from gradedtrim.poly import Poly, parse_poly, random_form
from conftest import evaluate, naive_det

P = 32003


def mat(rows):
    return AltMatrix.from_rows([[parse_poly(e) for e in r] for r in rows])


def grid(rows):
    return [[str(e) for e in r] for r in rows]


GOLDEN = {
    ("Hev", 2, None): [["0", "x^2", "z^2"], ["-x^2", "0", "y^2"], ["-z^2", "-y^2", "0"]],
    ("Hev", 4, None): [["0", "x^2", "0", "0", "z^2"],
                       ["-x^2", "0", "y^2", "z^2", "0"],
                       ["0", "-y^2", "0", "x^2", "0"],
                       ["0", "-z^2", "-x^2", "0", "y^2"],
                       ["-z^2", "0", "0", "-y^2", "0"]],
    ("Hodd", 1, None): [["0", "x^2", "z"], ["-x^2", "0", "y"], ["-z", "-y", "0"]],
    ("Hodd", 3, None): [["0", "x^2", "0", "0", "z"],
                        ["-x^2", "0", "y^2", "z^2", "0"],
                        ["0", "-y^2", "0", "x^2", "0"],
                        ["0", "-z^2", "-x^2", "0", "y"],
                        ["-z", "0", "0", "-y", "0"]],
    ("Vev", 1, None): [["0", "x^2", "z^2"], ["-x^2", "0", "y^2"], ["-z^2", "-y^2", "0"]],
    ("Vev", 2, None): [["0", "0", "0", "x^2", "z^2"],
                       ["0", "0", "x^2", "z^2", "y^2"],
                       ["0", "-x^2", "0", "y^2", "0"],
                       ["-x^2", "-z^2", "-y^2", "0", "0"],
                       ["-z^2", "-y^2", "0", "0", "0"]],
    ("Vodd", 1, None): [["0", "x^2", "z"], ["-x^2", "0", "y"], ["-z", "-y", "0"]],
    ("Vodd", 2, None): [["0", "0", "0", "x^2", "z"],
                        ["0", "0", "x^2", "z^2", "y"],
                        ["0", "-x^2", "0", "y^2", "0"],
                        ["-x^2", "-z^2", "-y^2", "0", "0"],
                        ["-z", "-y", "0", "0", "0"]],
    ("Uj", 2, 1): [["x^2", "z^2"], ["z", "y"]],
    ("Uj", 3, 1): [["0", "x^2", "z^2"], ["x^2", "z^2", "y^2"], ["z", "y", "0"]],
    ("Uj", 3, 2): [["0", "x^2", "z^2"], ["x", "z", "y"], ["z", "y", "0"]],
}


@pytest.mark.parametrize("key", sorted(GOLDEN, key=str))
def test_family_matches_displayed_matrix(key):
    kind, m, j = key
    built = family(kind, m, j)
    rows = built if isinstance(built, list) else built.rows()
    assert grid(rows) == GOLDEN[key]


def test_vj_with_j_equal_m_has_linear_middle():
    v = family("Vj", 3, 3)
    assert str(v[3, 4]) == "y"
    assert str(v[2, 3]) == "x^2"
    assert str(family("Vj", 3, 2)[3, 4]) == "y^2"


@pytest.mark.parametrize("kind,m,j", [("Hev", s, None) for s in (2, 4, 6)]
                         + [("Hodd", s, None) for s in (1, 3, 5)]
                         + [("Vev", m, None) for m in range(1, 6)]
                         + [("Vodd", m, None) for m in range(1, 6)]
                         + [("Vj", m, j) for m in range(1, 6) for j in range(1, m + 1)])
def test_pfaffians_are_syzygies_of_the_matrix(kind, m, j):
    system = sub_pfaffians(family(kind, m, j))
    assert not any(system.syzygy_defect())
    assert all(system.pf)


def random_alt(n, rnd, p=P):
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rows[i][j] = rnd.randrange(p)
            rows[j][i] = -rows[i][j]
    return rows


@settings(deadline=None, max_examples=40)
@given(st.sampled_from([2, 4, 6, 8]), st.integers(0, 2**31))
def test_pfaffian_squared_is_determinant_numerically(n, seed):
    rows = random_alt(n, random.Random(seed))
    m = AltMatrix.from_rows(rows)
    pf = pfaffian(m).constant_term()
    assert pf * pf % P == naive_det(rows)


def test_pfaffian_squared_is_determinant_symbolically():
    m = family("Vj", 2, 1)
    assert pfaffian(m.principal(range(4))) ** 2 == determinant(m.principal(range(4)).rows())
    assert not pfaffian(m)
    assert not determinant(m.rows())


def test_pfaffian_of_generic_linear_four_by_four():
    gen = __import__("numpy").random.default_rng(5)
    upper = {(i, j): random_form(1, gen) for i in range(4) for j in range(i + 1, 4)}
    m = AltMatrix(4, upper)
    pf = pfaffian(m)
    point = (3, 11, 29)
    num = [[evaluate(m[i, j], point) for j in range(4)] for i in range(4)]
    assert evaluate(pf, point) ** 2 % P == naive_det(num)


@pytest.mark.parametrize("n", [3, 5])
def test_divided_power_coefficients_are_pfaffians(n):
    # the top-minus-one divided power of phi has coefficient Pf of the complementary minor
    gen = __import__("numpy").random.default_rng(n)
    upper = {(i, j): random_form(1, gen) for i in range(n) for j in range(i + 1, n)}
    m = AltMatrix(n, upper)
    k = (n - 1) // 2
    power = wedge_power(m, k)
    system = sub_pfaffians(m)
    for i in range(n):
        rest = tuple(t for t in range(n) if t != i)
        sign = 1 if i % 2 == 0 else -1
        assert power.get(rest, Poly({}, P)) == system.pf[i].scale(sign)


@pytest.mark.parametrize("kind", ["Vev", "Vodd"])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_listed_generators_generate_the_pfaffian_ideal(kind, m):
    pf = GradedIdeal(sub_pfaffians(family(kind, m)).pf)
    listed = GradedIdeal(listed_generators(kind, m))
    assert same_ideal(pf, listed, 4 * m + 2)
    assert min_gens(pf).mu == 2 * m + 1
    assert len(listed_generators(kind, m)) == 2 * m + 1


def test_pfaffians_of_odd_v3_are_frozen():
    pf = [str(f) for f in sub_pfaffians(family("Vodd", 3)).pf]
    assert pf == ["y^5", "-y^4*z", "-x^2*y^3 + y^2*z^3", "x^2*y^2*z + x^2*y*z^2 - z^5",
                  "-x^4*y + x^2*z^3", "-x^4*z", "x^6"]


def test_json_roundtrip_and_validation():
    m = family("Vj", 3, 2)
    assert AltMatrix.from_json(m.to_json()) == m
    bad = {"size": 3, "entries": [{"i": 1, "j": 2, "poly": "x"}, {"i": 2, "j": 1, "poly": "x"}]}
    with pytest.raises(ValueError):
        AltMatrix.from_json(json.dumps(bad))
    with pytest.raises(ValueError):
        mat([["0", "x"], ["x", "0"]])
    with pytest.raises(ValueError):
        sub_pfaffians(AltMatrix(4, {}))


def test_family_errors():
    with pytest.raises(ValueError):
        family("Hev", 3)
    with pytest.raises(ValueError):
        family("Vj", 2, 3)
    with pytest.raises(ValueError):
        family("W", 2)
