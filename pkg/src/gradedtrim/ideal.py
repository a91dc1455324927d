"""Homogeneous ideals of k[x, y, z] handled one graded strand at a time.

Everything here is linear algebra on the vector spaces I_d inside S_d; there
are no Groebner bases.  I_d is stored as a reduced row echelon basis in the
monomial basis of ``strand_basis(d)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import linalg
from .linalg import DEFAULT_PRIME
from .poly import (UNIT_VECTORS, DualForm, Poly, parse_poly, shift_index,
                   strand_basis, strand_dim, strand_index)


class NotArtinianError(ValueError):
    """R/I has not become zero within the degree range searched."""


def binom(n: int, k: int) -> int:
    """Binomial coefficient, zero outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


@dataclass
class QuotientStrand:
    """Basis of (R/I)_d by standard monomials, plus the normal-form matrix.

    ``nf`` has one row per monomial of S_d giving its coordinates in A_d.
    """

    degree: int
    standard: list
    nf: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.standard)


@dataclass
class MinimalGenerators:
    counts: dict
    mu: int
    gens: list

    def as_pairs(self) -> list:
        return sorted(self.counts.items())


@dataclass
class HilbertData:
    hf: dict
    socle: dict
    top_degree: int | None

    @property
    def is_artinian(self) -> bool:
        return self.top_degree is not None

    @property
    def socle_type(self) -> int:
        return sum(self.socle.values())

    def socle_degrees(self) -> dict:
        return {d: c for d, c in self.socle.items() if c}

    def to_json(self) -> str:
        return json.dumps({"hf": [self.hf[d] for d in sorted(self.hf)],
                           "socle": {str(d): c for d, c in sorted(self.socle.items()) if c},
                           "top_degree": self.top_degree})

    def text(self) -> str:
        degs = sorted(self.hf)
        w = max(len(str(v)) for v in list(self.hf.values()) + degs) + 1
        lines = ["degree:" + "".join(f"{d:>{w}}" for d in degs),
                 "hf:    " + "".join(f"{self.hf[d]:>{w}}" for d in degs),
                 "socle: " + "".join(f"{self.socle.get(d, 0):>{w}}" for d in degs)]
        return "\n".join(lines)


class GradedIdeal:
    """Ideal generated by homogeneous polynomials, with lazily built strands."""

    def __init__(self, gens, p: int | None = None):
        gens = list(gens)
        if p is None:
            p = gens[0].p if gens else DEFAULT_PRIME
        self.p = p
        for g in gens:
            if g.p != p:
                raise ValueError("generators over different primes")
            if g and not g.is_homogeneous():
                raise ValueError(f"generator {g} is not homogeneous")
        # generator order is kept (zeros included) so that trim indices stay positional
        self.gens = gens
        self._by_degree: dict = {}
        for g in filter(None, gens):
            self._by_degree.setdefault(g.degree, []).append(g)
        self._strands: dict = {}
        self._products: dict = {}
        self._quotients: dict = {}
        self._seed_top: int | None = None

    @classmethod
    def from_strands(cls, strands: dict, gens, p: int) -> "GradedIdeal":
        """Ideal whose strands are known up to a degree where I_d = S_d."""
        ideal = cls(gens, p)
        for d, basis in strands.items():
            ideal._strands[d] = linalg.row_space(basis, p) if len(basis) else \
                np.zeros((0, strand_dim(d)), dtype=np.int64)
        ideal._seed_top = max(strands)
        return ideal

    @classmethod
    def parse(cls, texts, p: int = DEFAULT_PRIME) -> "GradedIdeal":
        return cls([parse_poly(t, p) for t in texts], p)

    def to_json(self) -> str:
        return json.dumps([str(g) for g in self.gens])

    @classmethod
    def from_json(cls, text: str, p: int = DEFAULT_PRIME) -> "GradedIdeal":
        return cls.parse(json.loads(text), p)

    def __repr__(self):
        return f"GradedIdeal({[str(g) for g in self.gens]})"

    @property
    def max_gen_degree(self) -> int:
        return max(self._by_degree) if self._by_degree else 0

    @property
    def min_gen_degree(self) -> int:
        return min(self._by_degree) if self._by_degree else 0

    def default_dmax(self) -> int:
        return 3 * max(self.max_gen_degree, self._seed_top or 0) + 3

    # -- strands ---------------------------------------------------------

    def _shifted(self, rows: np.ndarray, d: int) -> np.ndarray:
        """R_1 * span(rows), rows living in S_d; result rows in S_{d+1}."""
        n = strand_dim(d + 1)
        blocks = []
        for v in UNIT_VECTORS:
            out = np.zeros((rows.shape[0], n), dtype=np.int64)
            out[:, shift_index(d, v)] = rows
            blocks.append(out)
        return np.concatenate(blocks) if blocks else np.zeros((0, n), dtype=np.int64)

    def product_strand(self, d: int) -> np.ndarray:
        """Echelon basis of (R_1 * I_{d-1}) in S_d."""
        if d in self._products:
            return self._products[d]
        if d <= 0:
            out = np.zeros((0, strand_dim(d)), dtype=np.int64)
        else:
            prev = self.strand(d - 1)
            if prev.shape[0] == strand_dim(d - 1):
                out = np.eye(strand_dim(d), dtype=np.int64)
            elif prev.shape[0] == 0:
                out = np.zeros((0, strand_dim(d)), dtype=np.int64)
            else:
                out = linalg.row_space(self._shifted(prev, d - 1), self.p)
        self._products[d] = out
        return out

    def strand(self, d: int) -> np.ndarray:
        """Reduced row echelon basis of I_d (rows in the monomial basis)."""
        if d in self._strands:
            return self._strands[d]
        if d < 0:
            return np.zeros((0, 0), dtype=np.int64)
        if self._seed_top is not None and d > self._seed_top:
            top = self._strands[self._seed_top]
            if top.shape[0] == strand_dim(self._seed_top):
                out = np.eye(strand_dim(d), dtype=np.int64)
                self._strands[d] = out
                return out
        for e in range(d):
            if e not in self._strands:
                self.strand(e)
        prod = self.product_strand(d)
        gens = self._by_degree.get(d, [])
        if prod.shape[0] == strand_dim(d):
            out = prod
        elif gens:
            stack = np.array([g.to_vector(d) for g in gens], dtype=np.int64)
            out = linalg.row_space(np.concatenate([prod, stack]), self.p)
        else:
            out = prod
        self._strands[d] = out
        return out

    def dim(self, d: int) -> int:
        return self.strand(d).shape[0]

    def contains(self, f: Poly) -> bool:
        if not f:
            return True
        return linalg.in_span(self.strand(f.degree), f.to_vector(), self.p)

    def quotient(self, d: int) -> QuotientStrand:
        if d in self._quotients:
            return self._quotients[d]
        basis = self.strand(d)
        n = strand_dim(d)
        pivots = [int(np.flatnonzero(r)[0]) for r in basis]
        pivset = set(pivots)
        standard = [c for c in range(n) if c not in pivset]
        nf = np.zeros((n, len(standard)), dtype=np.int64)
        for k, c in enumerate(standard):
            nf[c, k] = 1
        if standard:
            for r, c in enumerate(pivots):
                nf[c] = (-basis[r, standard]) % self.p
        q = QuotientStrand(d, standard, nf)
        self._quotients[d] = q
        return q

    def mult_matrix(self, d: int, var: int) -> np.ndarray:
        """Multiplication by a variable, A_d -> A_{d+1} (columns = inputs)."""
        q0, q1 = self.quotient(d), self.quotient(d + 1)
        if q0.dim == 0 or q1.dim == 0:
            return np.zeros((q1.dim, q0.dim), dtype=np.int64)
        idx = shift_index(d, UNIT_VECTORS[var])[q0.standard]
        return np.ascontiguousarray(q1.nf[idx].T)

    def hf(self, d: int) -> int:
        return strand_dim(d) - self.dim(d)

    def top_degree(self, dmax: int | None = None) -> int:
        dmax = self.default_dmax() if dmax is None else dmax
        for d in range(dmax + 1):
            if self.hf(d) == 0:
                return d - 1
        raise NotArtinianError(f"R/I is nonzero in every degree up to {dmax}")

    def socle_dim(self, d: int) -> int:
        q = self.quotient(d)
        if q.dim == 0:
            return 0
        stacked = np.concatenate([self.mult_matrix(d, v) for v in range(3)])
        return q.dim - linalg.rank(stacked, self.p)


def hilbert(ideal: GradedIdeal, dmax: int | None = None) -> HilbertData:
    dmax = ideal.default_dmax() if dmax is None else dmax
    hf = {}
    socle = {}
    top = None
    for d in range(dmax + 1):
        h = ideal.hf(d)
        if h == 0:
            top = d - 1
            break
        hf[d] = h
        socle[d] = ideal.socle_dim(d)
    return HilbertData(hf, socle, top)


def compressed_bound(socle: dict, d: int) -> int:
    """min{dim S_d, sum_l c_l * binom(2 + l - d, l - d)} for socle counts c_l."""
    return min(strand_dim(d), sum(c * binom(2 + l - d, l - d) for l, c in socle.items()))


def is_compressed(ideal: GradedIdeal, socle_spec: dict | None = None,
                  dmax: int | None = None) -> bool:
    data = hilbert(ideal, dmax)
    if not data.is_artinian:
        raise NotArtinianError("compressedness is defined for Artinian quotients")
    spec = data.socle_degrees() if socle_spec is None else socle_spec
    return all(data.hf[d] == compressed_bound(spec, d)
               for d in range(data.top_degree + 1))


def min_gens(ideal: GradedIdeal, dmax: int | None = None) -> MinimalGenerators:
    """Minimal generator counts via dim I_d - dim (R_1 I_{d-1})."""
    if dmax is None:
        dmax = max(ideal.max_gen_degree, ideal._seed_top or 0) + 1
    counts: dict = {}
    reps = []
    for d in range(dmax + 1):
        full = ideal.strand(d)
        prod = ideal.product_strand(d)
        k = full.shape[0] - prod.shape[0]
        if k <= 0:
            continue
        counts[d] = k
        prod_piv = {int(np.flatnonzero(r)[0]) for r in prod}
        for r in full:
            if int(np.flatnonzero(r)[0]) not in prod_piv:
                reps.append(Poly.from_vector(r, d, ideal.p))
    return MinimalGenerators(counts, sum(counts.values()), reps)


def trim(ideal: GradedIdeal, i: int) -> GradedIdeal:
    """Replace generator number ``i`` (1-based) by its multiples x*g, y*g, z*g."""
    if not 1 <= i <= len(ideal.gens):
        raise IndexError(f"generator index {i} out of range 1..{len(ideal.gens)}")
    g = ideal.gens[i - 1]
    if not g:
        raise ValueError("cannot trim a zero generator")
    rest = ideal.gens[:i - 1] + ideal.gens[i:]
    return GradedIdeal(rest + [g.shift(v) for v in UNIT_VECTORS], ideal.p)


def same_ideal(a: GradedIdeal, b: GradedIdeal, dmax: int) -> bool:
    for d in range(dmax + 1):
        sa, sb = a.strand(d), b.strand(d)
        if sa.shape != sb.shape or not np.array_equal(sa, sb):
            return False
    return True


def contained_in(a: GradedIdeal, b: GradedIdeal, dmax: int) -> bool:
    for d in range(dmax + 1):
        sa, sb = a.strand(d), b.strand(d)
        if sa.shape[0] and linalg.rank(np.concatenate([sb, sa]), a.p) != sb.shape[0]:
            return False
    return True


def colon_strand(ideal: GradedIdeal, f: Poly, d: int) -> np.ndarray:
    """Basis of (I : f)_d."""
    q = ideal.quotient(d + f.degree)
    if q.dim == 0:
        return np.eye(strand_dim(d), dtype=np.int64)
    image = (q.nf.T @ f.multiplication_matrix(d)) % ideal.p
    return linalg.nullspace(image, ideal.p)


# -- inverse systems ---------------------------------------------------------

@dataclass
class InverseSystem:
    forms: list = field(default_factory=list)

    def __post_init__(self):
        if not self.forms:
            raise ValueError("inverse system needs at least one form")
        p = self.forms[0].p
        by_deg: dict = {}
        for f in self.forms:
            if not f:
                raise ValueError("zero form in inverse system")
            by_deg.setdefault(f.degree, []).append(f.to_vector())
        for d, vecs in by_deg.items():
            if linalg.rank(np.array(vecs), p) < len(vecs):
                raise ValueError(f"forms of degree {d} are linearly dependent")

    @property
    def p(self) -> int:
        return self.forms[0].p

    @property
    def degrees(self) -> list:
        return [f.degree for f in self.forms]


def phi_map(system, d: int) -> np.ndarray:
    """Matrix of S_d -> (+)_j D_{s_j - d}, f -> (f.phi_1, ..., f.phi_k)."""
    if isinstance(system, DualForm):
        system = InverseSystem([system])
    blocks = []
    for phi in system.forms:
        c = phi.degree
        e = c - d
        if e < 0:
            continue
        out = np.zeros((strand_dim(e), strand_dim(d)), dtype=np.int64)
        tgt = strand_index(e)
        for k, (a, b, cc) in enumerate(strand_basis(d)):
            for (a2, b2, c2), v in phi.terms.items():
                if a2 >= a and b2 >= b and c2 >= cc:
                    out[tgt[(a2 - a, b2 - b, c2 - cc)], k] += v
        blocks.append(out % system.p)
    if not blocks:
        return np.zeros((0, strand_dim(d)), dtype=np.int64)
    return np.concatenate(blocks)


def ann(system, dmax: int | None = None) -> GradedIdeal:
    """The annihilator ideal 0 :_R N of the inverse system N."""
    if isinstance(system, DualForm):
        system = InverseSystem([system])
    p = system.p
    top = max(system.degrees) + 1
    strands = {}
    for d in range(top + 1):
        mat = phi_map(system, d)
        strands[d] = linalg.nullspace(mat, p) if mat.shape[0] else np.eye(strand_dim(d), dtype=np.int64)
    ideal = GradedIdeal.from_strands(strands, [], p)
    gens = min_gens(ideal, top).gens
    out = GradedIdeal.from_strands(strands, gens, p)
    return out


def tipping_point(phi: DualForm) -> int:
    if not phi:
        raise ValueError("the zero form has no tipping point")
    c = phi.degree
    for d in range(c + 1):
        if linalg.rank(phi_map(phi, d), phi.p) == strand_dim(c - d):
            return d
    raise ValueError("contraction map never became surjective")


def inverse_system(ideal: GradedIdeal, d: int) -> list:
    """Dual forms of degree d annihilated by I_d, i.e. (I_d)^perp in D_d."""
    basis = ideal.strand(d)
    if basis.shape[0] == 0:
        kernel = np.eye(strand_dim(d), dtype=np.int64)
    else:
        kernel = linalg.nullspace(basis, ideal.p)
    return [DualForm.from_vector(v, d, ideal.p) for v in kernel]


def dual_generator(ideal: GradedIdeal) -> DualForm:
    """The dual generator of a Gorenstein Artinian quotient."""
    data = hilbert(ideal)
    if not data.is_artinian or data.socle_type != 1:
        raise ValueError("dual generator needs a Gorenstein Artinian quotient")
    forms = inverse_system(ideal, data.top_degree)
    return forms[0]
