"""Multiplicative structure of Tor^R(R/I, k), realized on Koszul homology of R/I."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .ideal import GradedIdeal, hilbert, is_compressed
from .koszul import SUBSETS, koszul_matrix
from .poly import strand_basis, strand_index


@dataclass
class TorClass:
    """Element of T_i in internal degree d, given by coordinates in the chosen basis."""

    i: int
    d: int
    coords: np.ndarray


@dataclass
class _Piece:
    reps: np.ndarray  # h x n cycle representatives
    cols: list  # pivot columns of [reps; boundaries]
    proj: np.ndarray  # len(cols) x h, coordinates of a cycle in the reps


@dataclass
class TorBasis:
    ideal: GradedIdeal
    pieces: dict = field(default_factory=dict)

    def dim(self, i: int, d: int) -> int:
        piece = self.pieces.get((i, d))
        return 0 if piece is None else piece.reps.shape[0]

    def degrees(self, i: int) -> list:
        return sorted(d for (k, d) in self.pieces if k == i)

    def total(self, i: int) -> int:
        return sum(self.dim(i, d) for d in self.degrees(i))

    def basis(self, i: int) -> list:
        """All basis classes of T_i, ordered by degree."""
        out = []
        for d in self.degrees(i):
            h = self.dim(i, d)
            for k in range(h):
                e = np.zeros(h, dtype=np.int64)
                e[k] = 1
                out.append(TorClass(i, d, e))
        return out

    def representative(self, z: TorClass) -> np.ndarray:
        piece = self.pieces[(z.i, z.d)]
        return (z.coords @ piece.reps) % self.ideal.p

    def project(self, i: int, d: int, v: np.ndarray) -> TorClass:
        """Homology class of the cycle ``v`` in wedge^i V (x) A_{d-i}."""
        piece = self.pieces.get((i, d))
        if piece is None:
            return TorClass(i, d, np.zeros(0, dtype=np.int64))
        coords = (v[piece.cols] @ piece.proj) % self.ideal.p
        return TorClass(i, d, coords)


def tor_basis(ideal: GradedIdeal, dmax: int | None = None) -> TorBasis:
    top = ideal.top_degree(dmax)
    p = ideal.p
    tb = TorBasis(ideal)
    for d in range(top + 4):
        for i in range(4):
            if d - i < 0 or ideal.quotient(d - i).dim == 0:
                continue
            n = len(SUBSETS[i]) * ideal.quotient(d - i).dim
            if i > 0:
                cycles = linalg.nullspace(koszul_matrix(ideal, i, d), p)
            else:
                cycles = np.eye(n, dtype=np.int64)
            if cycles.shape[0] == 0:
                continue
            if i < 3:
                inc = koszul_matrix(ideal, i + 1, d)
                bnd = linalg.row_space(inc.T, p) if inc.size else np.zeros((0, n), dtype=np.int64)
            else:
                bnd = np.zeros((0, n), dtype=np.int64)
            picks = linalg.independent_extension(bnd, cycles, p)
            if not picks:
                continue
            reps = cycles[picks]
            stacked = np.concatenate([reps, bnd])
            _, cols = linalg.rref(stacked, p)
            inv = linalg.inverse(stacked[:, cols], p)
            tb.pieces[(i, d)] = _Piece(reps, cols, inv[:, :len(picks)])
    return tb


def _product_table(ideal: GradedIdeal, a: int, b: int) -> np.ndarray:
    """Row (k * dim A_b + l) holds the normal form of std_k * std_l in A_{a+b}."""
    cache = ideal.__dict__.setdefault("_tor_tables", {})
    if (a, b) in cache:
        return cache[(a, b)]
    qa, qb, qc = ideal.quotient(a), ideal.quotient(b), ideal.quotient(a + b)
    ba, bb = strand_basis(a), strand_basis(b)
    idx = strand_index(a + b)
    rows = []
    for k in qa.standard:
        for l in qb.standard:
            m = tuple(u + v for u, v in zip(ba[k], bb[l]))
            rows.append(idx[m])
    if qc.dim == 0 or not rows:
        table = np.zeros((len(rows), qc.dim), dtype=np.int64)
    else:
        table = qc.nf[np.array(rows)]
    cache[(a, b)] = table
    return table


def _sort_sign(seq) -> int:
    inv = sum(1 for x in range(len(seq)) for y in range(x + 1, len(seq)) if seq[x] > seq[y])
    return -1 if inv % 2 else 1


def wedge_cycles(ideal: GradedIdeal, i: int, d1: int, u: np.ndarray,
                 j: int, d2: int, v: np.ndarray) -> np.ndarray:
    """Product of Koszul chains in wedge V (x) A; zero vector if i + j > 3."""
    p = ideal.p
    a, b = d1 - i, d2 - j
    k, d = i + j, d1 + d2
    if k > 3:
        return np.zeros(0, dtype=np.int64)
    qa, qb, qc = ideal.quotient(a).dim, ideal.quotient(b).dim, ideal.quotient(d - k).dim
    out = np.zeros(len(SUBSETS[k]) * qc, dtype=np.int64)
    if qc == 0:
        return out
    table = _product_table(ideal, a, b)
    target = {S: n for n, S in enumerate(SUBSETS[k])}
    for s_i, S in enumerate(SUBSETS[i]):
        x = u[s_i * qa:(s_i + 1) * qa]
        if not x.any():
            continue
        for t_i, T in enumerate(SUBSETS[j]):
            if set(S) & set(T):
                continue
            y = v[t_i * qb:(t_i + 1) * qb]
            if not y.any():
                continue
            prod = (np.outer(x, y).ravel() % p) @ table % p
            r0 = target[tuple(sorted(S + T))] * qc
            if _sort_sign(S + T) < 0:
                prod = (-prod) % p
            out[r0:r0 + qc] = (out[r0:r0 + qc] + prod) % p
    return out


def multiply(tb: TorBasis, z1: TorClass, z2: TorClass) -> TorClass:
    k, d = z1.i + z2.i, z1.d + z2.d
    if k > 3:
        return TorClass(k, d, np.zeros(0, dtype=np.int64))
    v = wedge_cycles(tb.ideal, z1.i, z1.d, tb.representative(z1),
                     z2.i, z2.d, tb.representative(z2))
    return tb.project(k, d, v)


@dataclass
class TorInvariants:
    mu: int
    type: int
    p: int
    q: int
    r: int

    @property
    def class_label(self) -> str:
        if self.p == 0 and self.q == 1 and self.r >= 2:
            return f"G({self.r})"
        return f"other({self.p},{self.q},{self.r})"

    @property
    def is_class_g(self) -> bool:
        return self.class_label.startswith("G(")

    def to_dict(self) -> dict:
        return {"mu": self.mu, "type": self.type, "p": self.p, "q": self.q,
                "r": self.r, "class": self.class_label}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _span_rank(products: list, tb: TorBasis, k: int, p: int) -> int:
    """Dimension of the span of classes, summed over internal degrees."""
    total = 0
    for d in tb.degrees(k):
        vecs = [z.coords for z in products if z.d == d and z.coords.size]
        if vecs:
            total += linalg.rank(np.array(vecs), p)
    return total


def invariants(ideal: GradedIdeal, dmax: int | None = None,
               basis: TorBasis | None = None) -> TorInvariants:
    tb = tor_basis(ideal, dmax) if basis is None else basis
    p = ideal.p
    t1, t2 = tb.basis(1), tb.basis(2)
    p_inv = _span_rank([multiply(tb, a, b) for a in t1 for b in t1], tb, 2, p)
    pairs = {(a_i, b_i): multiply(tb, a, b)
             for a_i, a in enumerate(t1) for b_i, b in enumerate(t2)}
    q_inv = _span_rank(list(pairs.values()), tb, 3, p)
    # flat coordinates of T_3 across degrees
    offset, pos = 0, {}
    for d in tb.degrees(3):
        pos[d] = offset
        offset += tb.dim(3, d)
    n3 = offset
    pairing = np.zeros((len(t2), len(t1) * n3), dtype=np.int64)
    for (a_i, b_i), z in pairs.items():
        if z.coords.size:
            c0 = a_i * n3 + pos[z.d]
            pairing[b_i, c0:c0 + z.coords.size] = z.coords
    r_inv = linalg.rank(pairing, p) if pairing.size else 0
    return TorInvariants(tb.total(1), tb.total(3), p_inv, q_inv, r_inv)


def check_tormins(ideal: GradedIdeal, s: int, dmax: int | None = None) -> bool:
    """Whether the class is G(mu - 3) for a compressed quotient with socle k(-s) + k(-2s+1)."""
    data = hilbert(ideal, dmax)
    if data.socle_degrees() != {s: 1, 2 * s - 1: 1}:
        raise ValueError(f"socle is {data.socle_degrees()}, expected k(-{s}) + k(-{2 * s - 1})")
    if not is_compressed(ideal, dmax=dmax):
        raise ValueError("quotient is not compressed")
    inv = invariants(ideal, dmax)
    return inv.class_label == f"G({inv.mu - 3})"
