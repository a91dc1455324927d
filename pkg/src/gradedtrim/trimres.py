"""Explicit length-three resolution of a trimmed Pfaffian ideal.

Start from an odd alternating matrix M whose signed submaximal Pfaffians
pf_0, ..., pf_{N-1} generate a Gorenstein ideal K, and trim generator i0.
Writing U = k^3 with the Koszul map U -> R, e_u -> u for u in (x, y, z), the
complex is

    F3 = R omega (+) wedge^3 U
    F2 = (+)_j R e_j^* (+) wedge^2 U
    F1 = (+)_{k != i0} R e_k (+) U
    F0 = R

with
    d1(e_k) = pf_k,  d1(e_u) = u * pf_{i0}
    d2(e_j^*) = sum_{k != i0} M[j][k] e_k - q(e_j^*),  d2(e_a ^ e_b) = a e_b - b e_a
    d3(omega) = sum_j pf_j e_j^* + B,  d3(e_x ^ e_y ^ e_z) = x e_yz - y e_xz + z e_xy

where q(e_j^*) in U (x) R lifts M[i0][j] through the Koszul map and B in
wedge^2 U (x) R lifts t = sum_j pf_j q(e_j^*).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .altpf import AltMatrix, family, sub_pfaffians
from .ideal import GradedIdeal, colon_strand, hilbert, min_gens, trim
from .koszul import BettiTable
from .poly import Poly, UNIT_VECTORS, random_form, shift_index, strand_dim

U_LABELS = ("e_x", "e_y", "e_z")
W2_LABELS = ("e_x^e_y", "e_x^e_z", "e_y^e_z")
W2_PAIRS = ((0, 1), (0, 2), (1, 2))


@dataclass
class TrimInput:
    matrix: AltMatrix
    index: int  # 1-based position of the trimmed Pfaffian

    def __post_init__(self):
        n = self.matrix.size
        if n % 2 == 0:
            raise ValueError("the matrix must have odd size")
        if not 1 <= self.index <= n:
            raise IndexError(f"index {self.index} out of range 1..{n}")
        for k in range(n):
            if self.matrix[self.i0, k].constant_term():
                raise ValueError("the trimmed row has a unit entry")

    @property
    def i0(self) -> int:
        return self.index - 1

    @property
    def p(self) -> int:
        return self.matrix.p

    @property
    def size(self) -> int:
        return self.matrix.size

    @classmethod
    def from_family(cls, kind: str, m: int, index: int, j: int | None = None,
                    p: int | None = None) -> "TrimInput":
        kwargs = {} if p is None else {"p": p}
        return cls(family(kind, m, j, **kwargs), index)


@dataclass
class KIdeals:
    K: GradedIdeal
    K0: GradedIdeal
    Kprime: GradedIdeal
    trimmed: GradedIdeal


def k_ideals(inp: TrimInput) -> KIdeals:
    pf = sub_pfaffians(inp.matrix).pf
    K = GradedIdeal(pf, inp.p)
    K0 = GradedIdeal([pf[inp.i0]], inp.p)
    Kp = GradedIdeal(pf[:inp.i0] + pf[inp.i0 + 1:], inp.p)
    return KIdeals(K, K0, Kp, trim(K, inp.index))


def colon_in_maximal(ideals: KIdeals) -> bool:
    """Whether (K' : K0) lies in (x, y, z).

    Positive-degree strands always do, so only the constants need checking:
    the colon contains 1 exactly when the trimmed Pfaffian lies in K'.
    """
    return colon_strand(ideals.Kprime, ideals.K0.gens[0], 0).shape[0] == 0


def decompose(inp: TrimInput) -> dict:
    """The row of M at the trimmed index, as {k: entry} over k != i0."""
    return {k: inp.matrix[inp.i0, k] for k in range(inp.size) if k != inp.i0}


def project(inp: TrimInput, v: list) -> list:
    """Drop the trimmed coordinate: v - w0(v) v0."""
    return [c for k, c in enumerate(v) if k != inp.i0]


def lift_through_x(f: Poly) -> tuple:
    """(a, b, c) with f = x a + y b + z c, dividing by x first, then y, then z."""
    if f.constant_term():
        raise ValueError("a polynomial with nonzero constant term is not in (x, y, z)")
    parts: list = [{}, {}, {}]
    for (e0, e1, e2), c in f.terms.items():
        if e0:
            parts[0][(e0 - 1, e1, e2)] = c
        elif e1:
            parts[1][(e0, e1 - 1, e2)] = c
        else:
            parts[2][(e0, e1, e2 - 1)] = c
    return tuple(Poly(t, f.p) for t in parts)


def koszul_u(vec) -> Poly:
    """The Koszul map U (x) R -> R."""
    x, y, z = (Poly.var(k, vec[0].p) for k in range(3))
    return x * vec[0] + y * vec[1] + z * vec[2]


def koszul_w2(b) -> list:
    """wedge^2 U (x) R -> U (x) R on coordinates (b_xy, b_xz, b_yz)."""
    p = b[0].p
    x, y, z = (Poly.var(k, p) for k in range(3))
    bxy, bxz, byz = b
    return [-(y * bxy) - z * bxz, x * bxy - z * byz, x * bxz + y * byz]


def build_q(inp: TrimInput) -> list:
    """q(e_j^*) for j = 0..N-1, each a triple in U (x) R."""
    zero = Poly({}, inp.p)
    out = []
    for j in range(inp.size):
        if j == inp.i0:
            out.append((zero, zero, zero))
        else:
            out.append(lift_through_x(inp.matrix[inp.i0, j]))
    return out


def cycle_t(inp: TrimInput, q: list, pf: list) -> list:
    zero = Poly({}, inp.p)
    t = [zero, zero, zero]
    for j, qj in enumerate(q):
        if pf[j]:
            t = [t[u] + pf[j] * qj[u] for u in range(3)]
    return t


def _w2_strand(e: int, p: int) -> np.ndarray:
    """Matrix of wedge^2 U (x) S_e -> U (x) S_{e+1} in coordinate blocks."""
    n0, n1 = strand_dim(e), strand_dim(e + 1)
    out = np.zeros((3 * n1, 3 * n0), dtype=np.int64)
    cols = np.arange(n0)
    # (row block, column block, variable, sign) from koszul_w2
    for rb, cb, var, sign in ((0, 0, 1, -1), (0, 1, 2, -1), (1, 0, 0, 1), (1, 2, 2, -1),
                              (2, 1, 0, 1), (2, 2, 1, 1)):
        out[rb * n1 + shift_index(e, UNIT_VECTORS[var]), cb * n0 + cols] = sign % p
    return out


def solve_w2(t: list, p: int) -> tuple:
    """A preimage of the Koszul 1-cycle t under wedge^2 U -> U."""
    zero = Poly({}, p)
    if not any(t):
        return (zero, zero, zero)
    degs = {f.degree for f in t if f}
    if len(degs) != 1:
        raise ValueError("t is not homogeneous")
    d = degs.pop()
    if koszul_u(t):
        raise ValueError("t is not a Koszul cycle; the lift q is inconsistent")
    if d == 0:
        raise ValueError("a nonzero constant cycle has no preimage")
    rhs = np.concatenate([f.to_vector(d) for f in t])
    sol = linalg.solve(_w2_strand(d - 1, p), rhs, p)
    n0 = strand_dim(d - 1)
    return tuple(Poly.from_vector(sol[k * n0:(k + 1) * n0], d - 1, p) for k in range(3))


def build_B(inp: TrimInput, q: list, pf: list | None = None) -> tuple:
    pf = sub_pfaffians(inp.matrix).pf if pf is None else pf
    t = cycle_t(inp, q, pf)
    b = solve_w2(t, inp.p)
    if koszul_w2(b) != t:
        raise ValueError("lift of t failed verification")
    return b


@dataclass
class TrimComplex:
    input: TrimInput
    pf: list
    v0_prime: dict
    q: list
    B: tuple
    d1: list
    d2: list
    d3: list
    degrees: list
    labels: list
    checks: dict = field(default_factory=dict)

    @property
    def p(self) -> int:
        return self.input.p

    @property
    def ranks(self) -> list:
        return [len(d) for d in self.degrees]

    def differential(self, k: int) -> list:
        return {1: self.d1, 2: self.d2, 3: self.d3}[k]

    def shifts(self, k: int) -> dict:
        out: dict = {}
        for d in self.degrees[k]:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def shift_text(self) -> str:
        parts = []
        for k in (3, 2, 1, 0):
            terms = []
            for d, c in self.shifts(k).items():
                base = f"R(-{d})" if d else "R"
                terms.append(base + (f"^{c}" if c > 1 else ""))
            parts.append(" + ".join(terms))
        return " -> ".join(parts)

    def to_dict(self) -> dict:
        def mat(rows):
            return [[str(e) for e in r] for r in rows]
        return {
            "size": self.input.size,
            "index": self.input.index,
            "ranks": self.ranks,
            "shifts": [self.degrees[k] for k in range(4)],
            "labels": self.labels,
            "d1": mat(self.d1), "d2": mat(self.d2), "d3": mat(self.d3),
            "q": [[str(e) for e in qj] for qj in self.q],
            "B": [str(e) for e in self.B],
            "checks": self.checks,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def _entry_degrees(inp: TrimInput, pf: list) -> list:
    m = inp.matrix
    a = [f.degree for f in pf]
    if a[inp.i0] is None:
        raise ValueError("the trimmed Pfaffian is zero")
    omega = set()
    dual = []
    for j in range(inp.size):
        cands = set()
        for k in range(inp.size):
            e = m[j, k]
            if e and a[k] is not None:
                cands.add(e.degree + a[k])
        if len(cands) != 1:
            raise ValueError(f"row {j} of the matrix is not homogeneous against the Pfaffians")
        dj = cands.pop()
        dual.append(dj)
        if a[j] is not None:
            omega.add(dj + a[j])
    if len(omega) != 1:
        raise ValueError("inconsistent degree for the top basis element")
    return a, dual, omega.pop()


def build_complex(inp: TrimInput, q: list | None = None, B: tuple | None = None) -> TrimComplex:
    p = inp.p
    m = inp.matrix
    n, i0 = inp.size, inp.i0
    pf = sub_pfaffians(m).pf
    a, dual, omega = _entry_degrees(inp, pf)
    x, y, z = (Poly.var(k, p) for k in range(3))
    zero = Poly({}, p)
    q = build_q(inp) if q is None else q
    B = build_B(inp, q, pf) if B is None else B
    others = [k for k in range(n) if k != i0]
    lin = (x, y, z)

    d1 = [[pf[k] for k in others] + [u * pf[i0] for u in lin]]

    d2 = [[zero] * (n + 3) for _ in range(len(others) + 3)]
    for j in range(n):
        for r, k in enumerate(others):
            d2[r][j] = m[j, k]
        for u in range(3):
            d2[len(others) + u][j] = -q[j][u]
    for c, (ua, ub) in enumerate(W2_PAIRS):
        d2[len(others) + ub][n + c] = lin[ua]
        d2[len(others) + ua][n + c] = -lin[ub]

    d3 = [[zero, zero] for _ in range(n + 3)]
    for j in range(n):
        d3[j][0] = pf[j]
    for c in range(3):
        d3[n + c][0] = B[c]
    d3[n + 0][1] = z   # e_x^e_y
    d3[n + 1][1] = -y  # e_x^e_z
    d3[n + 2][1] = x   # e_y^e_z

    deg1 = [a[k] for k in others] + [a[i0] + 1] * 3
    deg2 = dual + [a[i0] + 2] * 3
    deg3 = [omega, a[i0] + 3]
    labels = [["1"],
              [f"e_{k + 1}" for k in others] + list(U_LABELS),
              [f"e_{j + 1}*" for j in range(n)] + list(W2_LABELS),
              ["omega", "e_x^e_y^e_z"]]
    cx = TrimComplex(inp, pf, decompose(inp), q, tuple(B), d1, d2, d3,
                     [[0], deg1, deg2, deg3], labels)
    check_homogeneous(cx)
    return cx


def check_homogeneous(cx: TrimComplex) -> None:
    for k in (1, 2, 3):
        mat = cx.differential(k)
        for r, row in enumerate(mat):
            for c, e in enumerate(row):
                if e and e.degree != cx.degrees[k][c] - cx.degrees[k - 1][r]:
                    raise ValueError(f"d{k}[{r}][{c}] = {e} has the wrong degree")


def _matmul(a: list, b: list, p: int) -> list:
    zero = Poly({}, p)
    out = []
    for row in a:
        out_row = []
        for c in range(len(b[0])):
            acc = zero
            for k, e in enumerate(row):
                if e and b[k][c]:
                    acc = acc + e * b[k][c]
            out_row.append(acc)
        out.append(out_row)
    return out


def is_complex(cx: TrimComplex) -> bool:
    """d1 d2 = 0 and d2 d3 = 0 as polynomial identities."""
    for left, right in ((cx.d1, cx.d2), (cx.d2, cx.d3)):
        if any(e for row in _matmul(left, right, cx.p) for e in row):
            return False
    return True


def strand_matrix(cx: TrimComplex, k: int, d: int) -> np.ndarray:
    """Matrix of (F_k)_d -> (F_{k-1})_d."""
    src, tgt = cx.degrees[k], cx.degrees[k - 1]
    col_dims = [strand_dim(d - e) for e in src]
    row_dims = [strand_dim(d - e) for e in tgt]
    c_off = np.concatenate([[0], np.cumsum(col_dims)]).astype(int)
    r_off = np.concatenate([[0], np.cumsum(row_dims)]).astype(int)
    out = np.zeros((r_off[-1], c_off[-1]), dtype=np.int64)
    mat = cx.differential(k)
    for r in range(len(tgt)):
        if not row_dims[r]:
            continue
        for c in range(len(src)):
            e = mat[r][c]
            if e and col_dims[c]:
                out[r_off[r]:r_off[r + 1], c_off[c]:c_off[c + 1]] = \
                    e.multiplication_matrix(d - src[c])
    return out


def free_dim(cx: TrimComplex, k: int, d: int) -> int:
    return sum(strand_dim(d - e) for e in cx.degrees[k])


def strand_ranks(cx: TrimComplex, d: int) -> dict:
    return {k: (linalg.rank(mat, cx.p) if mat.size else 0)
            for k in (1, 2, 3) for mat in [strand_matrix(cx, k, d)]}


def verify_exactness(cx: TrimComplex, dmax: int, ideal: GradedIdeal | None = None,
                     report: dict | None = None) -> bool:
    """Homology vanishes in positions 1..3 and H_0 matches R/I, degree by degree."""
    ideal = k_ideals(cx.input).trimmed if ideal is None else ideal
    ok = True
    bad = []
    for d in range(dmax + 1):
        rk = strand_ranks(cx, d)
        dims = [free_dim(cx, k, d) for k in range(4)]
        euler = sum((-1) ** k * dims[k] for k in range(4))
        conds = [
            dims[0] - rk[1] == ideal.hf(d),
            dims[1] - rk[1] == rk[2],
            dims[2] - rk[2] == rk[3],
            dims[3] == rk[3],
            euler == ideal.hf(d),
        ]
        if not all(conds):
            ok = False
            bad.append(d)
    if report is not None:
        report["exact"] = ok
        report["failed_degrees"] = bad
        report["dmax"] = dmax
    return ok


def constant_part(rows: list) -> np.ndarray:
    return np.array([[e.constant_term() for e in row] for row in rows], dtype=np.int64)


def q_constant_rank(q: list, p: int) -> int:
    mat = np.array([[f.constant_term() for f in qj] for qj in q], dtype=np.int64)
    return linalg.rank(mat, p)


def predicted_mu(inp: TrimInput, q: list | None = None) -> int:
    q = build_q(inp) if q is None else q
    mu_k = min_gens(k_ideals(inp).K).mu
    return mu_k + 2 - q_constant_rank(q, inp.p)


def is_minimal(cx: TrimComplex) -> bool:
    return not any(e.constant_term() for k in (1, 2, 3)
                   for row in cx.differential(k) for e in row)


def cancelled_betti(cx: TrimComplex) -> BettiTable:
    """Betti numbers left after cancelling the unit entries of the differentials."""
    p = cx.p
    ranks: dict = {}
    for k in (1, 2, 3):
        const = constant_part(cx.differential(k))
        src, tgt = cx.degrees[k], cx.degrees[k - 1]
        for j in set(src):
            rows = [r for r, e in enumerate(tgt) if e == j]
            cols = [c for c, e in enumerate(src) if e == j]
            if rows and cols:
                ranks[(k, j)] = linalg.rank(const[np.ix_(rows, cols)], p)
    ent = {}
    for k in range(4):
        for j in set(cx.degrees[k]):
            b = cx.degrees[k].count(j) - ranks.get((k, j), 0) - ranks.get((k + 1, j), 0)
            if b:
                ent[(k, j)] = b
    return BettiTable(ent)


def random_lift(inp: TrimInput, rng: np.random.Generator) -> tuple:
    """Another valid pair (q, B): q plus a Koszul boundary, B plus a wedge^3 term."""
    p = inp.p
    q = build_q(inp)
    out = []
    for j, qj in enumerate(q):
        e = inp.matrix[inp.i0, j].degree
        if j == inp.i0 or e is None or e < 2:
            out.append(qj)
            continue
        w = [random_form(e - 2, rng, p) for _ in range(3)]
        bd = koszul_w2(w)
        out.append(tuple(qj[u] + bd[u] for u in range(3)))
    pf = sub_pfaffians(inp.matrix).pf
    B = build_B(inp, out, pf)
    deg = next((f.degree for f in B if f), None)
    if deg is not None and deg >= 1:
        c = random_form(deg - 1, rng, p)
        x, y, z = (Poly.var(k, p) for k in range(3))
        B = (B[0] + z * c, B[1] - y * c, B[2] + x * c)
    return out, B


def resolve(inp: TrimInput, dmax: int | None = None, check: bool = True) -> TrimComplex:
    """Build the complex and, optionally, record the verification report on it."""
    cx = build_complex(inp)
    if check:
        ideals = k_ideals(inp)
        top = hilbert(ideals.trimmed, 3 * max(cx.degrees[1]) + 3).top_degree
        dmax = (top + 3 if top is not None else 3 * max(cx.degrees[1]) + 3) if dmax is None else dmax
        rep: dict = {"complex": is_complex(cx)}
        verify_exactness(cx, dmax, ideals.trimmed, rep)
        rep["minimal"] = is_minimal(cx)
        rep["predicted_mu"] = predicted_mu(inp, cx.q)
        rep["mu"] = min_gens(ideals.trimmed).mu
        rep["colon_in_maximal"] = colon_in_maximal(ideals)
        cx.checks = rep
    return cx
