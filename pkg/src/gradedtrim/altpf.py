"""Alternating matrices over k[x, y, z], Pfaffians and the matrix families.

Indices are 0-based in Python data structures.  Functions that take a
generator position the way the literature writes it (``Pf_i``) say so and
accept 1-based indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from math import factorial

from .linalg import DEFAULT_PRIME
from .poly import Poly, parse_poly, variables


class AltMatrix:
    """Odd- or even-size alternating matrix with polynomial entries.

    Only the strict upper triangle is stored; the diagonal is zero by
    construction and ``M[j, i] == -M[i, j]``.
    """

    __slots__ = ("size", "p", "_upper")

    def __init__(self, size: int, upper: dict | None = None, p: int = DEFAULT_PRIME):
        if size < 1:
            raise ValueError("size must be positive")
        self.size = size
        self.p = p
        self._upper = {}
        for (i, j), f in (upper or {}).items():
            if not 0 <= i < j < size:
                raise ValueError(f"bad upper-triangle position {(i, j)}")
            if f:
                self._upper[(i, j)] = f

    @classmethod
    def from_rows(cls, rows, p: int | None = None) -> "AltMatrix":
        n = len(rows)
        if p is None:
            p = next((f.p for r in rows for f in r if isinstance(f, Poly)), DEFAULT_PRIME)
        rows = [[f if isinstance(f, Poly) else Poly.const(f, p) for f in r] for r in rows]
        for i in range(n):
            if len(rows[i]) != n:
                raise ValueError("matrix is not square")
            if rows[i][i]:
                raise ValueError("alternating matrix needs a zero diagonal")
            for j in range(i + 1, n):
                if rows[i][j] != -rows[j][i]:
                    raise ValueError(f"entries {(i, j)} and {(j, i)} are not opposite")
        return cls(n, {(i, j): rows[i][j] for i in range(n) for j in range(i + 1, n)}, p)

    def __getitem__(self, ij) -> Poly:
        i, j = ij
        if i == j:
            return Poly({}, self.p)
        if i < j:
            return self._upper.get((i, j), Poly({}, self.p))
        return -self._upper.get((j, i), Poly({}, self.p))

    def __eq__(self, other):
        if not isinstance(other, AltMatrix):
            return NotImplemented
        return self.size == other.size and self._upper == other._upper

    def rows(self) -> list:
        return [[self[i, j] for j in range(self.size)] for i in range(self.size)]

    def row(self, i: int) -> list:
        return [self[i, j] for j in range(self.size)]

    def degree_profile(self) -> list:
        return [[self[i, j].degree for j in range(self.size)] for i in range(self.size)]

    def principal(self, keep) -> "AltMatrix":
        keep = list(keep)
        return AltMatrix(len(keep), {(a, b): self[keep[a], keep[b]]
                                     for a in range(len(keep))
                                     for b in range(a + 1, len(keep))}, self.p)

    def to_json(self) -> str:
        entries = [{"i": i + 1, "j": j + 1, "poly": str(f)}
                   for (i, j), f in sorted(self._upper.items())]
        return json.dumps({"size": self.size, "entries": entries}, indent=1)

    @classmethod
    def from_json(cls, text: str, p: int = DEFAULT_PRIME) -> "AltMatrix":
        data = json.loads(text)
        n = int(data["size"])
        seen: dict = {}
        for e in data["entries"]:
            i, j, f = int(e["i"]) - 1, int(e["j"]) - 1, parse_poly(e["poly"], p)
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"entry {(i + 1, j + 1)} outside a {n}x{n} matrix")
            if i == j:
                if f:
                    raise ValueError("nonzero diagonal entry")
                continue
            key, val = ((i, j), f) if i < j else ((j, i), -f)
            if key in seen and seen[key] != val:
                raise ValueError(f"entries at {(i + 1, j + 1)} are not alternating")
            seen[key] = val
        return cls(n, seen, p)

    def __repr__(self):
        return f"AltMatrix(size={self.size}, nonzero={len(self._upper)})"


def _pf(m: AltMatrix, idx: tuple, memo: dict) -> Poly:
    if idx in memo:
        return memo[idx]
    if not idx:
        out = Poly.const(1, m.p)
    else:
        first, rest = idx[0], idx[1:]
        out = Poly({}, m.p)
        for k, j in enumerate(rest):
            a = m[first, j]
            if not a:
                continue
            sub = _pf(m, rest[:k] + rest[k + 1:], memo)
            term = a * sub
            out = out + term if k % 2 == 0 else out - term
    memo[idx] = out
    return out


def pfaffian(m: AltMatrix, memo: dict | None = None) -> Poly:
    """Pfaffian by expansion along the first row, Pf(M)^2 = det(M); zero for odd size."""
    if m.size % 2:
        return Poly({}, m.p)
    return _pf(m, tuple(range(m.size)), {} if memo is None else memo)


def determinant(rows, p: int = DEFAULT_PRIME) -> Poly:
    """Cofactor expansion along successive rows, memoized on column sets."""
    n = len(rows)
    rows = [[f if isinstance(f, Poly) else Poly.const(f, p) for f in r] for r in rows]
    memo: dict = {}

    def det(r: int, cols: tuple) -> Poly:
        if r == n:
            return Poly.const(1, p)
        if cols in memo:
            return memo[cols]
        out = Poly({}, p)
        for k, c in enumerate(cols):
            a = rows[r][c]
            if a:
                term = a * det(r + 1, cols[:k] + cols[k + 1:])
                out = out + term if k % 2 == 0 else out - term
        memo[cols] = out
        return out

    return det(0, tuple(range(n)))


@dataclass
class PfaffianSystem:
    """Signed submaximal Pfaffians of an odd-size alternating matrix.

    ``pf[i]`` is (-1)^i times the Pfaffian of ``source`` with row and column
    ``i`` deleted (0-based), so that ``source @ pf == 0``.
    """

    source: AltMatrix
    pf: list
    phi_n_row: dict = field(default_factory=dict)

    @property
    def degrees(self) -> list:
        return [f.degree for f in self.pf]

    def syzygy_defect(self) -> list:
        """Entries of M @ pf; all zero for a correct system."""
        m = self.source
        out = []
        for i in range(m.size):
            acc = Poly({}, m.p)
            for j in range(m.size):
                a = m[i, j]
                if a and self.pf[j]:
                    acc = acc + a * self.pf[j]
            out.append(acc)
        return out


def sub_pfaffians(m: AltMatrix) -> PfaffianSystem:
    if m.size % 2 == 0:
        raise ValueError("submaximal Pfaffians need an odd-size matrix")
    memo: dict = {}
    full = tuple(range(m.size))
    pf = []
    for i in range(m.size):
        val = _pf(m, full[:i] + full[i + 1:], memo)
        pf.append(val if i % 2 == 0 else -val)
    for f in pf:
        if not f.is_homogeneous():
            raise ValueError("matrix does not have homogeneous Pfaffians")
    return PfaffianSystem(m, pf, {i + 1: f for i, f in enumerate(pf)})


def phi_power_row(m: AltMatrix) -> dict:
    """Values of the divided power phi^(n) on the basis of the dual top-minus-one
    exterior power, keyed by the deleted index (1-based) and signed to agree
    with ``sub_pfaffians``."""
    return sub_pfaffians(m).phi_n_row


def _sort_sign(seq) -> int:
    inv = sum(1 for a, b in combinations(seq, 2) if a > b)
    return -1 if inv % 2 else 1


def wedge(a: dict, b: dict, p: int) -> dict:
    """Product in the exterior algebra; elements are {sorted index tuple: Poly}."""
    out: dict = {}
    for s, f in a.items():
        for t, g in b.items():
            if set(s) & set(t):
                continue
            u = tuple(sorted(s + t))
            term = f * g
            if _sort_sign(s + t) < 0:
                term = -term
            out[u] = out.get(u, Poly({}, p)) + term
    return {k: v for k, v in out.items() if v}


def wedge_power(m: AltMatrix, n: int) -> dict:
    """The divided power phi^n / n! of phi = sum_{i<j} M_ij e_i ^ e_j."""
    p = m.p
    phi = {(i, j): m[i, j] for i in range(m.size) for j in range(i + 1, m.size) if m[i, j]}
    acc: dict = {(): Poly.const(1, p)}
    for _ in range(n):
        acc = wedge(acc, phi, p)
    inv = pow(factorial(n) % p, -1, p)
    return {k: v.scale(inv) for k, v in acc.items()}


# --- matrix families -----------------------------------------------------

def _alt_from_upper(n: int, entries: dict, p: int) -> AltMatrix:
    return AltMatrix(n, {k: v for k, v in entries.items() if v}, p)


def h_even(s: int, p: int = DEFAULT_PRIME) -> AltMatrix:
    """(s+1)x(s+1) matrix for even s: x^2, y^2 alternating on the superdiagonal
    and z^2 on the antidiagonal."""
    if s < 2 or s % 2:
        raise ValueError("h_even needs an even s >= 2")
    return _h_matrix(s + 1, False, p)


def h_odd(s: int, p: int = DEFAULT_PRIME) -> AltMatrix:
    """(s+2)x(s+2) matrix for odd s: as ``h_even`` but the corner entry is z
    and the last superdiagonal entry is y."""
    if s < 1 or s % 2 == 0:
        raise ValueError("h_odd needs an odd s >= 1")
    return _h_matrix(s + 2, True, p)


def _h_matrix(n: int, linear_corners: bool, p: int) -> AltMatrix:
    x, y, z = variables(p)
    e = {}
    for i in range(n - 1):
        e[(i, i + 1)] = x * x if i % 2 == 0 else y * y
    for i in range(n // 2):
        e[(i, n - 1 - i)] = z * z
    if linear_corners:
        e[(0, n - 1)] = z
        e[(n - 2, n - 1)] = y
    return _alt_from_upper(n, e, p)


def _u_matrix(m: int, quad_rows: int, odd_last: bool, p: int) -> list:
    """Square m x m matrix with the x, z, y antidiagonal bands.

    Rows 1..quad_rows (1-based) carry squares, the rest carry the linear
    forms; ``odd_last`` replaces the last row by (z, y, 0, ...).
    """
    x, y, z = variables(p)
    zero = Poly({}, p)
    rows = [[zero] * m for _ in range(m)]
    for i in range(1, m + 1):
        band = (x * x, z * z, y * y) if i <= quad_rows else (x, z, y)
        for off, f in enumerate(band):
            j = m - i + off
            if 1 <= j <= m:
                rows[i - 1][j - 1] = f
    if odd_last:
        rows[m - 1] = [zero] * m
        rows[m - 1][0] = z
        if m >= 2:
            rows[m - 1][1] = y
    return rows


def u_even(m: int, p: int = DEFAULT_PRIME) -> list:
    if m < 0:
        raise ValueError("m must be nonnegative")
    return _u_matrix(m, m, False, p)


def u_odd(m: int, p: int = DEFAULT_PRIME) -> list:
    if m < 1:
        raise ValueError("u_odd needs m >= 1")
    return _u_matrix(m, m - 1, True, p)


def u_j(m: int, j: int, p: int = DEFAULT_PRIME) -> list:
    if not 1 <= j <= m:
        raise ValueError(f"need 1 <= j <= m, got j={j}, m={m}")
    return _u_matrix(m, m - j, False, p)


def _v_matrix(block: list, middle: Poly, p: int) -> AltMatrix:
    x, _, _ = variables(p)
    m = len(block)
    n = 2 * m + 1
    e = {(m - 1, m): x * x, (m, m + 1): middle}
    for i in range(m):
        for j in range(m):
            e[(i, m + 1 + j)] = block[i][j]
    return _alt_from_upper(n, e, p)


def _transpose(rows: list) -> list:
    return [list(r) for r in zip(*rows)]


def v_even(m: int, p: int = DEFAULT_PRIME) -> AltMatrix:
    if m < 1:
        raise ValueError("v_even needs m >= 1")
    _, y, _ = variables(p)
    return _v_matrix(u_even(m, p), y * y, p)


def v_odd(m: int, p: int = DEFAULT_PRIME) -> AltMatrix:
    if m < 1:
        raise ValueError("v_odd needs m >= 1")
    _, y, _ = variables(p)
    # for m = 1 the (z, y) row of the odd block has no room for y, which lands in the middle
    middle = y if m == 1 else y * y
    return _v_matrix(_transpose(u_odd(m, p)), middle, p)


def v_j(m: int, j: int, p: int = DEFAULT_PRIME) -> AltMatrix:
    _, y, _ = variables(p)
    middle = y if j == m else y * y
    return _v_matrix(_transpose(u_j(m, j, p)), middle, p)


def d_even(i: int, p: int = DEFAULT_PRIME) -> Poly:
    return determinant(u_even(i, p), p)


def d_odd(i: int, p: int = DEFAULT_PRIME) -> Poly:
    return determinant(u_odd(i, p), p) if i else Poly.const(1, p)


def listed_generators(kind: str, m: int, p: int = DEFAULT_PRIME) -> list:
    """Closed-form minimal generators of Pf(V_m^ev) or Pf(V_m^odd)."""
    x, y, _ = variables(p)
    if kind == "Vev":
        gens = [x ** (2 * m - 2 * i) * d_even(i, p) for i in range(m)]
        gens += [y ** (2 * m - 2 * i) * d_even(i, p) for i in range(m)]
        return gens + [d_even(m, p)]
    if kind == "Vodd":
        gens = [x ** (2 * m - 2 * i) * d_odd(i, p) for i in range(m)]
        gens.append(y ** (2 * m - 1))
        # i runs over 1..m-1; i = 0 would give the redundant y^(2m)
        gens += [y ** (2 * m - 2 * i) * d_odd(i, p) for i in range(1, m)]
        return gens + [d_odd(m, p)]
    raise ValueError(f"no closed-form generators for {kind!r}")


FAMILIES = {
    "Hev": lambda m, j, p: h_even(m, p),
    "Hodd": lambda m, j, p: h_odd(m, p),
    "Vev": lambda m, j, p: v_even(m, p),
    "Vodd": lambda m, j, p: v_odd(m, p),
    "Vj": lambda m, j, p: v_j(m, _need_j(m, j), p),
    "Uev": lambda m, j, p: u_even(m, p),
    "Uodd": lambda m, j, p: u_odd(m, p),
    "Uj": lambda m, j, p: u_j(m, _need_j(m, j), p),
}


def _need_j(m, j):
    if j is None or not 1 <= j <= m:
        raise ValueError(f"need 1 <= j <= m, got j={j}, m={m}")
    return j


def family(kind: str, m: int, j: int | None = None, p: int = DEFAULT_PRIME):
    """Build a named matrix.

    For ``Hev``/``Hodd`` the parameter ``m`` is the generator degree s; for the
    U and V families it is the block size m.  U kinds return a square list of
    lists, the others an ``AltMatrix``.
    """
    try:
        build = FAMILIES[kind]
    except KeyError:
        raise ValueError(f"unknown family {kind!r}; choose from {sorted(FAMILIES)}") from None
    return build(m, j, p)
