"""Graded Betti numbers from Koszul homology of an Artinian quotient A = R/I.

Tor_i(A, k)_j is the homology of the strand

    wedge^{i+1} V (x) A_{j-i-1}  ->  wedge^i V (x) A_{j-i}  ->  wedge^{i-1} V (x) A_{j-i+1}

so every Betti number is a difference of ranks of small dense matrices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import linalg
from .ideal import GradedIdeal, NotArtinianError, ann, binom, phi_map
from .poly import DualForm, UNIT_VECTORS, shift_index, strand_dim

SUBSETS = {i: list(combinations(range(3), i)) for i in range(4)}


@dataclass
class BettiTable:
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        self.entries = {(int(i), int(j)): int(b) for (i, j), b in self.entries.items() if b}
        for (i, j), b in self.entries.items():
            if b < 0 or j < i:
                raise ValueError(f"invalid Betti entry beta[{i},{j}] = {b}")

    @classmethod
    def from_rows(cls, rows: dict) -> "BettiTable":
        """Build from Macaulay2 rows: ``{row: [beta_0, beta_1, ...]}`` with j = row + i."""
        ent = {}
        for r, vals in rows.items():
            for i, b in enumerate(vals):
                if b:
                    ent[(i, r + i)] = b
        return cls(ent)

    def __getitem__(self, key) -> int:
        return self.entries.get(key, 0)

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries

    def total(self, i: int) -> int:
        return sum(b for (k, _), b in self.entries.items() if k == i)

    @property
    def length(self) -> int:
        return max((i for i, _ in self.entries), default=0)

    def rows(self) -> dict:
        out: dict = {}
        n = self.length + 1
        for (i, j), b in self.entries.items():
            out.setdefault(j - i, [0] * n)[i] = b
        return dict(sorted(out.items()))

    def row(self, r: int) -> list:
        return self.rows().get(r, [0] * (self.length + 1))

    def to_json(self) -> str:
        return json.dumps({"entries": [{"i": i, "j": j, "beta": b}
                                       for (i, j), b in sorted(self.entries.items())]})

    @classmethod
    def from_json(cls, text: str) -> "BettiTable":
        data = json.loads(text)
        return cls({(e["i"], e["j"]): e["beta"] for e in data["entries"]})

    def text(self) -> str:
        n = self.length + 1
        rows = self.rows()
        lo, hi = (min(rows), max(rows)) if rows else (0, 0)
        cells = [[str(i) for i in range(n)], [str(self.total(i)) for i in range(n)]]
        for r in range(lo, hi + 1):
            vals = rows.get(r, [0] * n)
            cells.append([str(v) if v else "." for v in vals])
        w = max(len(c) for line in cells for c in line)
        labels = [""] + ["total:"] + [f"{r}:" for r in range(lo, hi + 1)]
        lw = max(len(lb) for lb in labels)
        return "\n".join(f"{lb:>{lw}} " + " ".join(f"{c:>{w}}" for c in line)
                         for lb, line in zip(labels, cells))

    def __str__(self):
        return self.text()

    def euler(self, j: int) -> int:
        return sum((-1) ** i * b for (i, jj), b in self.entries.items() if jj == j)


@dataclass
class KoszulStrand:
    i: int
    d: int
    in_matrix: np.ndarray
    out_matrix: np.ndarray


def _offsets(ideal: GradedIdeal, i: int, d: int):
    """Block offsets of wedge^i V (x) A_{d-i}, one block per subset."""
    q = ideal.quotient(d - i) if d - i >= 0 else None
    size = q.dim if q is not None else 0
    return {S: k * size for k, S in enumerate(SUBSETS[i])}, size


def koszul_matrix(ideal: GradedIdeal, i: int, d: int) -> np.ndarray:
    """Matrix of wedge^i V (x) A_{d-i} -> wedge^{i-1} V (x) A_{d-i+1} (columns = inputs).

    e_S (x) a  ->  sum_k (-1)^k e_{S minus S_k} (x) x_{S_k} a.
    """
    if i < 1 or i > 3:
        raise ValueError("Koszul differential index must be 1, 2 or 3")
    src, ns = _offsets(ideal, i, d)
    tgt, nt = _offsets(ideal, i - 1, d)
    out = np.zeros((nt * len(tgt), ns * len(src)), dtype=np.int64)
    if ns == 0 or nt == 0:
        return out
    p = ideal.p
    for S, c0 in src.items():
        for k, v in enumerate(S):
            T = S[:k] + S[k + 1:]
            r0 = tgt[T]
            block = ideal.mult_matrix(d - i, v)
            out[r0:r0 + nt, c0:c0 + ns] = block if k % 2 == 0 else (-block) % p
    return out


def koszul_strand(ideal: GradedIdeal, i: int, d: int) -> KoszulStrand:
    n_here = len(SUBSETS[i]) * (ideal.quotient(d - i).dim if d - i >= 0 else 0)
    inc = koszul_matrix(ideal, i + 1, d) if i < 3 else np.zeros((n_here, 0), dtype=np.int64)
    outg = koszul_matrix(ideal, i, d) if i > 0 else np.zeros((0, n_here), dtype=np.int64)
    return KoszulStrand(i, d, inc, outg)


def betti(ideal: GradedIdeal, dmax: int | None = None) -> BettiTable:
    """Graded Betti numbers of R/I over R, via Koszul homology of R/I."""
    top = ideal.top_degree(dmax)
    p = ideal.p
    ranks: dict = {}

    def rk(i, d):
        if i < 1 or i > 3:
            return 0
        if (i, d) not in ranks:
            m = koszul_matrix(ideal, i, d)
            ranks[(i, d)] = linalg.rank(m, p) if m.size else 0
        return ranks[(i, d)]

    ent = {}
    for d in range(top + 4):
        for i in range(4):
            if d - i < 0:
                continue
            dim = len(SUBSETS[i]) * ideal.quotient(d - i).dim
            b = dim - rk(i, d) - rk(i + 1, d)
            if b:
                ent[(i, d)] = b
    return BettiTable(ent)


def hilbert_series_euler(hf: dict, j: int) -> int:
    """Coefficient of t^j in HS(R/I) * (1 - t)^3."""
    return sum((-1) ** k * binom(3, k) * hf.get(j - k, 0) for k in range(4))


# -- the Theta maps ------------------------------------------------------------

def initial_degree(phi: DualForm) -> int:
    """Least degree of a nonzero element annihilating phi."""
    c = phi.degree
    for d in range(c + 2):
        if linalg.rank(phi_map(phi, d), phi.p) < strand_dim(d):
            return d
    raise ValueError("annihilator has no element up to degree c + 1")


def theta_matrix(phi: DualForm, i: int, t: int | None = None) -> np.ndarray:
    """Composite wedge^i V (x) S_{t-1} -> wedge^{i-1} V (x) S_t -> wedge^{i-1} V (x) D_{c-t}.

    The first map is the Koszul differential on R, the second applies the
    contraction map of phi in degree t on each exterior coordinate.
    """
    if i not in (1, 2, 3):
        raise ValueError("i must be 1, 2 or 3")
    p = phi.p
    t = initial_degree(phi) if t is None else t
    d_src = t - 1
    n_src = strand_dim(d_src)
    n_mid = strand_dim(t)
    src, tgt = SUBSETS[i], SUBSETS[i - 1]
    kos = np.zeros((len(tgt) * n_mid, len(src) * n_src), dtype=np.int64)
    for a, S in enumerate(src):
        for k, v in enumerate(S):
            b = tgt.index(S[:k] + S[k + 1:])
            sign = 1 if k % 2 == 0 else p - 1
            rows = b * n_mid + shift_index(d_src, UNIT_VECTORS[v])
            cols = a * n_src + np.arange(n_src)
            kos[rows, cols] = (kos[rows, cols] + sign) % p
    phi_t = phi_map(phi, t)
    contr = np.kron(np.eye(len(tgt), dtype=np.int64), phi_t)
    return linalg.asmat(contr @ kos, p) if kos.size else np.zeros((contr.shape[0], 0), dtype=np.int64)


def theta_rank(phi: DualForm, i: int, t: int | None = None) -> int:
    m = theta_matrix(phi, i, t)
    return linalg.rank(m, phi.p) if m.size else 0


def tor_dim_via_theta(phi: DualForm, i: int, t: int | None = None) -> int:
    """dim Tor_i(R/ann(phi), k)_{i+t-1} as a rank deficit of Theta_i."""
    t = initial_degree(phi) if t is None else t
    return binom(t - 1 + i - 1, i - 1) * binom(t - 1 + 3, 3 - i) - theta_rank(phi, i, t)


# -- closed forms ------------------------------------------------------------

def compressed_level_strand(r: int, c: int, m: int, t: int, i: int) -> int:
    return (binom(t - 1 + i - 1, i - 1) * binom(t - 1 + r, r - i)
            - m * binom(c - t + r - i, r - i) * binom(c - t + r, i - 1))


def bs_coefficients(s: int, b: int) -> tuple:
    """Coefficients of the three pure diagrams in the Gorenstein table with parameter b."""
    if s < 2 or b < 0:
        raise ValueError("need s >= 2 and b >= 0")
    n = (s + 1) ** 2
    outer = Fraction(b, 2 * n - 2)
    middle = Fraction(n - 1 - (s + 1) * b, n - 1)
    return outer, middle, outer


def gorenstein_table(s: int, b: int) -> BettiTable:
    """Betti table of a compressed Gorenstein quotient with socle degree 2s-1."""
    return BettiTable.from_rows({0: [1], s - 1: [0, s + 1, b], s: [0, b, s + 1],
                                 2 * s - 1: [0, 0, 0, 1]})


def generic_table(s: int) -> BettiTable:
    return gorenstein_table(s, s % 2)


def even_trim_table(s: int) -> BettiTable:
    """Table of the trimmed ideal obtained from the even H family."""
    return BettiTable.from_rows({0: [1], s - 1: [0, s], s: [0, 3, s + 4, 1],
                                 2 * s - 1: [0, 0, 0, 1]})


def maximal_trim_table(s: int) -> BettiTable:
    """Table of the trim with the maximal number of generators, 2s + 2."""
    return BettiTable.from_rows({0: [1], s - 1: [0, s, s - 1], s: [0, s + 2, s + 4, 1],
                                 2 * s - 1: [0, 0, 0, 1]})


def even_socle_gorenstein_table(s: int) -> BettiTable:
    """Table of a compressed Gorenstein quotient with socle degree 2s-2."""
    return BettiTable.from_rows({0: [1], s - 1: [0, 2 * s + 1, 2 * s + 1],
                                 2 * s - 2: [0, 0, 0, 1]})


def vj_table(m: int, j: int) -> BettiTable:
    """Table of the Pfaffian ideal of the V matrix with parameters (m, j)."""
    return gorenstein_table(2 * m - j, j)


__all__ = ["BettiTable", "KoszulStrand", "koszul_matrix", "koszul_strand", "betti",
           "hilbert_series_euler", "initial_degree", "theta_matrix", "theta_rank",
           "tor_dim_via_theta", "compressed_level_strand", "bs_coefficients",
           "gorenstein_table", "generic_table", "even_trim_table", "maximal_trim_table",
           "even_socle_gorenstein_table", "vj_table", "NotArtinianError", "ann"]
