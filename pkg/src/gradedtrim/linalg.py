"""Dense exact linear algebra over a prime field GF(p).

Matrices are ``numpy.int64`` arrays with entries in ``[0, p)``.  Pivoting is
always on the first nonzero entry scanning columns left to right, so every
result (RREF, kernel bases, particular solutions) is deterministic.
"""

from __future__ import annotations

import numpy as np

DEFAULT_PRIME = 32003


def asmat(a, p: int) -> np.ndarray:
    m = np.array(a, dtype=np.int64, copy=True)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    m %= p
    return m


def _eliminate(m: np.ndarray, p: int, full: bool):
    """In-place row reduction.  Returns the list of pivot columns.

    With ``full=False`` only rows below the pivot are cleared (echelon form),
    which is all that rank computations need.
    """
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = m[r:, c]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        inv = pow(int(m[r, c]), -1, p)
        if inv != 1:
            m[r, c:] = (m[r, c:] * inv) % p
        if full:
            targets = np.flatnonzero(m[:, c])
            targets = targets[targets != r]
        else:
            targets = r + 1 + np.flatnonzero(m[r + 1:, c])
        if targets.size:
            f = m[targets, c].reshape(-1, 1)
            m[np.ix_(targets, np.arange(c, cols))] = (
                m[targets, c:] - f * m[r, c:]) % p
        pivots.append(c)
        r += 1
    return pivots


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with zero rows dropped, and pivot columns."""
    m = asmat(a, p)
    if m.size == 0:
        return m[:0], []
    pivots = _eliminate(m, p, full=True)
    return m[:len(pivots)], pivots


_BLOCK = 96


def inverse(a, p: int) -> np.ndarray:
    """Inverse of a square matrix over GF(p); raises ValueError if singular."""
    a = asmat(a, p)
    n = a.shape[0]
    red, pivots = rref(np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1), p)
    if pivots[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return red[:, n:]


def _mulmod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # float64 products stay exact while inner_dim * p**2 < 2**53
    return np.fmod(a.astype(np.float64) @ b.astype(np.float64), p).astype(np.int64)


def _independent_rows(panel: np.ndarray, p: int):
    """First maximal independent set of rows of ``panel`` and its pivot columns."""
    m = panel.copy()
    perm = np.arange(m.shape[0])
    pcol = []
    r = 0
    for c in range(m.shape[1]):
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
            perm[[r, k]] = perm[[k, r]]
        targets = r + 1 + np.flatnonzero(m[r + 1:, c])
        if targets.size:
            f = (m[targets, c] * pow(int(m[r, c]), -1, p)) % p
            m[targets, c:] = (m[targets, c:] - f[:, None] * m[r, c:]) % p
        pcol.append(c)
        r += 1
        if r == m.shape[0]:
            break
    return sorted(perm[:r].tolist()), pcol


def rank(a, p: int) -> int:
    """Rank over GF(p).

    Large matrices are reduced panel by panel: the independent rows of a
    column panel are found by plain elimination and the remaining rows are
    cleared with a single matrix product on the trailing block.
    """
    m = asmat(a, p)
    if m.size == 0:
        return 0
    if m.shape[0] < m.shape[1]:
        m = np.ascontiguousarray(m.T)
    total = 0
    while m.shape[0] and m.shape[1]:
        if m.shape[1] <= _BLOCK or m.shape[0] <= _BLOCK:
            return total + len(_eliminate(m, p, full=False))
        panel = m[:, :_BLOCK]
        prow, pcol = _independent_rows(panel, p)
        if not prow:
            m = m[:, _BLOCK:]
            continue
        top = panel[prow]
        rest = np.ones(m.shape[0], dtype=bool)
        rest[prow] = False
        x = _mulmod(panel[rest][:, pcol], inverse(top[:, pcol], p), p)
        m = (m[rest, _BLOCK:] - _mulmod(x, m[prow, _BLOCK:], p)) % p
        total += len(prow)
    return total


def nullspace(a, p: int) -> np.ndarray:
    """Basis of the right kernel {v : a @ v = 0}, one vector per row."""
    m = asmat(a, p)
    ncols = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    red, pivots = rref(m, p)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = (-red[r, f]) % p
    return basis


def row_space(a, p: int) -> np.ndarray:
    return rref(a, p)[0]


def solve(a, b, p: int) -> np.ndarray:
    """A particular solution X of ``a @ X = b`` (free variables set to zero).

    ``b`` may be a vector or a matrix of right-hand sides.  Raises
    ``ValueError`` if the system is inconsistent.
    """
    a = asmat(a, p)
    b = np.array(b, dtype=np.int64) % p
    vec = b.ndim == 1
    if vec:
        b = b.reshape(-1, 1)
    n = a.shape[1]
    aug = np.concatenate([a, b], axis=1)
    red, pivots = rref(aug, p)
    if any(c >= n for c in pivots):
        raise ValueError("inconsistent linear system")
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = red[r, n:]
    return x[:, 0] if vec else x


def independent_extension(base, candidates, p: int) -> list[int]:
    """Indices of ``candidates`` rows that extend ``span(base)`` greedily.

    The returned rows, together with ``base``, are linearly independent and
    span ``span(base) + span(candidates)``.
    """
    base = np.asarray(base, dtype=np.int64)
    candidates = np.asarray(candidates, dtype=np.int64)
    if candidates.shape[0] == 0:
        return []
    nb = base.shape[0] if base.size else 0
    stacked = candidates if nb == 0 else np.concatenate([base, candidates])
    _, pivots = rref(stacked.T, p)
    return [c - nb for c in pivots if c >= nb]


def in_span(base, v, p: int) -> bool:
    base = np.asarray(base, dtype=np.int64)
    if base.size == 0:
        return not np.any(np.asarray(v) % p)
    r0 = rank(base, p)
    return rank(np.concatenate([base, asmat(v, p)]), p) == r0
