import random

import pytest

from gradedtrim.altpf import family, sub_pfaffians
from gradedtrim.ideal import GradedIdeal

P = 32003


def pf_ideal(kind, m, j=None, p=P):
    return GradedIdeal(sub_pfaffians(family(kind, m, j, p)).pf, p)


def naive_rank(rows, p=P):
    """Plain list-based Gaussian elimination, used as an oracle."""
    m = [[int(v) % p for v in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        m[rank] = [v * inv % p for v in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [(a - f * b) % p for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def naive_det(rows, p=P):
    m = [[int(v) % p for v in r] for r in rows]
    n = len(m)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c] % p
        inv = pow(m[c][c], -1, p)
        for r in range(c + 1, n):
            f = m[r][c] * inv % p
            if f:
                m[r] = [(a - f * b) % p for a, b in zip(m[r], m[c])]
    return det % p


def evaluate(f, point, p=P):
    total = 0
    for (a, b, c), v in f.terms.items():
        total += v * pow(point[0], a, p) * pow(point[1], b, p) * pow(point[2], c, p)
    return total % p


@pytest.fixture
def rng():
    return random.Random(20240531)
