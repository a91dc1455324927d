"""Homogeneous polynomial arithmetic in k[x, y, z] over GF(p).

Monomials are exponent triples ``(a, b, c)`` standing for x^a y^b z^c.  Within
a degree they are ordered by graded reverse lexicographic order; the strand
basis lists them from largest to smallest.

Divided powers (the inverse-system side) use the dual monomial basis X^a Y^b
Z^c, on which a monomial acts by exponent subtraction.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .linalg import DEFAULT_PRIME

Monomial = tuple  # (a, b, c)

VARS = ("x", "y", "z")
DUAL_VARS = ("X", "Y", "Z")
UNIT_VECTORS = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def check_prime(p: int) -> int:
    if p <= 2:
        raise ValueError(f"characteristic must be an odd prime, got {p}")
    if any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not prime")
    return p


def mono_degree(m: Monomial) -> int:
    return m[0] + m[1] + m[2]


def grevlex_key(m: Monomial):
    """Sort key: larger key means larger monomial in grevlex."""
    return (mono_degree(m), -m[2], -m[1])


@lru_cache(maxsize=None)
def strand_basis(d: int) -> tuple:
    """All monomials of degree ``d`` in decreasing grevlex order."""
    if d < 0:
        return ()
    out = [(d - b - c, b, c) for c in range(d + 1) for b in range(d - c + 1)]
    return tuple(out)


@lru_cache(maxsize=None)
def strand_index(d: int) -> dict:
    return {m: k for k, m in enumerate(strand_basis(d))}


def strand_dim(d: int) -> int:
    return (d + 2) * (d + 1) // 2 if d >= 0 else 0


@lru_cache(maxsize=None)
def shift_index(d: int, m: Monomial) -> np.ndarray:
    """Position in S_{d+deg m} of m times each monomial of S_d."""
    idx = strand_index(d + mono_degree(m))
    return np.array([idx[(a + m[0], b + m[1], c + m[2])]
                     for a, b, c in strand_basis(d)], dtype=np.int64)


def _mono_str(m: Monomial, names) -> str:
    parts = []
    for e, v in zip(m, names):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


class _Sparse:
    """Shared machinery for sparse maps Monomial -> GF(p)."""

    __slots__ = ("terms", "p")
    _names = VARS

    def __init__(self, terms: Mapping[Monomial, int] | None = None,
                 p: int = DEFAULT_PRIME):
        self.p = p
        clean = {}
        for m, c in (terms or {}).items():
            c %= p
            if c:
                clean[tuple(m)] = c
        self.terms = clean

    def _new(self, terms):
        return type(self)(terms, self.p)

    def _check(self, other):
        if self.p != other.p:
            raise ValueError("mixing different primes")

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self._new({(0, 0, 0): other}) if other % self.p else self._new({})
        if type(other) is not type(self):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, self.p, frozenset(self.terms.items())))

    def __add__(self, other):
        self._check(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return self._new(t)

    def __neg__(self):
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int):
        return self._new({m: c * v for m, v in self.terms.items()})

    @property
    def degree(self) -> int | None:
        """Degree of a homogeneous element; ``None`` for zero."""
        if not self.terms:
            return None
        degs = {mono_degree(m) for m in self.terms}
        if len(degs) > 1:
            raise ValueError("polynomial is not homogeneous")
        return degs.pop()

    def is_homogeneous(self) -> bool:
        return len({mono_degree(m) for m in self.terms}) <= 1

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: grevlex_key(mc[0]),
                      reverse=True)

    def coefficient(self, m: Monomial) -> int:
        return self.terms.get(tuple(m), 0)

    def to_vector(self, d: int | None = None) -> np.ndarray:
        """Coefficient vector in ``strand_basis(d)``."""
        if d is None:
            d = self.degree or 0
        idx = strand_index(d)
        v = np.zeros(len(idx), dtype=np.int64)
        for m, c in self.terms.items():
            v[idx[m]] = c
        return v

    @classmethod
    def from_vector(cls, v, d: int, p: int = DEFAULT_PRIME):
        basis = strand_basis(d)
        return cls({basis[k]: int(c) for k, c in enumerate(v) if c % p}, p)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        half = self.p // 2
        for m, c in self.sorted_terms():
            sign = "-" if c > half else "+"
            a = self.p - c if c > half else c
            ms = _mono_str(m, self._names)
            if not ms:
                body = str(a)
            elif a == 1:
                body = ms
            else:
                body = f"{a}*{ms}"
            out.append((sign, body))
        first_sign, first = out[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"


class Poly(_Sparse):
    """Sparse polynomial in k[x, y, z] with coefficients in GF(p)."""

    __slots__ = ()

    @classmethod
    def const(cls, c: int, p: int = DEFAULT_PRIME) -> "Poly":
        return cls({(0, 0, 0): c}, p)

    @classmethod
    def var(cls, k: int, p: int = DEFAULT_PRIME) -> "Poly":
        return cls({UNIT_VECTORS[k]: 1}, p)

    @classmethod
    def monomial(cls, m: Monomial, c: int = 1, p: int = DEFAULT_PRIME) -> "Poly":
        return cls({tuple(m): c}, p)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = Poly.const(1, self.p)
        for _ in range(e):
            out = out * self
        return out

    def constant_term(self) -> int:
        return self.terms.get((0, 0, 0), 0)

    def shift(self, m: Monomial) -> "Poly":
        """Multiply by a monomial."""
        return Poly({(a + m[0], b + m[1], c + m[2]): v
                     for (a, b, c), v in self.terms.items()}, self.p)

    def multiplication_matrix(self, d: int) -> np.ndarray:
        """Matrix of S_d -> S_{d + deg}, g -> self * g (columns = inputs)."""
        e = self.degree
        out = np.zeros((strand_dim(d + e), strand_dim(d)), dtype=np.int64)
        cols = np.arange(strand_dim(d))
        for m, c in self.terms.items():
            out[shift_index(d, m), cols] += c
        return out % self.p


class DualForm(_Sparse):
    """Homogeneous element of the divided power algebra, in the dual basis."""

    __slots__ = ()
    _names = DUAL_VARS


def multiply(f: Poly, g: Poly) -> Poly:
    f._check(g)
    out: dict = {}
    for (a, b, c), u in f.terms.items():
        for (a2, b2, c2), v in g.terms.items():
            m = (a + a2, b + b2, c + c2)
            out[m] = out.get(m, 0) + u * v
    return Poly(out, f.p)


def contract(f: Poly, phi: DualForm) -> DualForm:
    """Contraction action f . phi, with x^a . X^b = X^(b-a) (or 0)."""
    f._check(phi)
    fd, cd = f.degree, phi.degree
    if fd is not None and cd is not None and fd > cd:
        raise ValueError(f"cannot contract degree {fd} into degree {cd}")
    out: dict = {}
    for (a, b, c), u in f.terms.items():
        for (a2, b2, c2), v in phi.terms.items():
            if a2 >= a and b2 >= b and c2 >= c:
                m = (a2 - a, b2 - b, c2 - c)
                out[m] = out.get(m, 0) + u * v
    return DualForm(out, f.p)


_TERM = re.compile(r"\s*([+-]?)\s*([^+-]+)")
_FACTOR = re.compile(r"([A-Za-z])(?:\^(\d+))?|(\d+)")


def _parse(text: str, names, p: int) -> dict:
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    terms: dict = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        body = m.group(2)
        coef = 1
        exps = [0, 0, 0]
        k = 0
        for fm in _FACTOR.finditer(body):
            if fm.start() != k:
                raise ValueError(f"cannot parse term {body!r}")
            k = fm.end()
            if k < len(body) and body[k] == "*":
                k += 1
            if fm.group(3):
                coef *= int(fm.group(3))
            else:
                v = fm.group(1)
                if v not in names:
                    raise ValueError(f"unknown variable {v!r} in {text!r}")
                exps[names.index(v)] += int(fm.group(2) or 1)
        if k != len(body):
            raise ValueError(f"cannot parse term {body!r}")
        mono = tuple(exps)
        terms[mono] = terms.get(mono, 0) + sign * coef
        pos = m.end()
    return terms


def parse_poly(text: str, p: int = DEFAULT_PRIME) -> Poly:
    """Parse ``3*x^2*y - z^3 + xyz``-style text.  ``*`` and ``^1`` are optional."""
    return Poly(_parse(text, VARS, p), p)


def parse_dual(text: str, p: int = DEFAULT_PRIME) -> DualForm:
    return DualForm(_parse(text, DUAL_VARS, p), p)


def random_form(d: int, rng: np.random.Generator, p: int = DEFAULT_PRIME,
                cls=Poly):
    """Uniformly random homogeneous element of degree ``d``."""
    coeffs = rng.integers(0, p, size=strand_dim(d))
    return cls.from_vector(coeffs, d, p)


def poly_sum(items: Iterable[Poly], p: int = DEFAULT_PRIME) -> Poly:
    out = Poly({}, p)
    for f in items:
        out = out + f
    return out


def variables(p: int = DEFAULT_PRIME) -> tuple:
    """The generators x, y, z of the polynomial ring."""
    return tuple(Poly.var(k, p) for k in range(3))
