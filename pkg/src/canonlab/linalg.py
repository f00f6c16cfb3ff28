"""Exact linear algebra over the rationals, done fraction-free on integer rows.

Rows may hold ``int`` or ``Fraction`` entries; each row is scaled to a
primitive integer vector before elimination, and every elimination step
``s <- a*s - b*r`` is followed by content removal so coefficients stay small.
Pivoting is deterministic: the first remaining row (in input order) with a
nonzero entry in the leftmost available column.

When the environment variable ``CANONLAB_MODP`` holds a prime, every rank
computed here is recomputed over GF(p) by the kernel in ``_kernels`` and the
pair is recorded in :data:`MODP_AUDIT`.
"""
import os
import threading
from functools import lru_cache
from fractions import Fraction
from math import gcd

import numpy as np

from . import _kernels


def _lcm(a, b):
    return a // gcd(a, b) * b


def integer_row(row):
    """Scale a rational row to a primitive integer row with the same span."""
    den = 1
    for x in row:
        if isinstance(x, Fraction) and x.denominator != 1:
            den = _lcm(den, x.denominator)
    if den == 1:
        ints = [int(x) for x in row]
    else:
        ints = [int(x * den) for x in row]
    return primitive(ints)


def primitive(ints):
    g = 0
    for x in ints:
        if x:
            g = gcd(g, x)
            if g == 1:
                return ints
    if g > 1:
        return [x // g for x in ints]
    return ints


def _leading(row, start=0):
    for j in range(start, len(row)):
        if row[j]:
            return j
    return -1


def _reduce(row, prow, col):
    a = prow[col]
    b = row[col]
    g = gcd(a, b)
    a //= g
    b //= g
    return primitive([a * x - b * y for x, y in zip(row, prow)])


class Echelon:
    """Incrementally built row echelon form (integer, primitive rows).

    ``add`` returns True when the new row enlarged the span.  Use ``rank``
    for the current dimension.
    """

    def __init__(self, ncols):
        self.ncols = ncols
        self.rows = {}  # pivot column -> row

    @property
    def rank(self):
        return len(self.rows)

    def reduce(self, row):
        row = integer_row(row)
        col = _leading(row)
        while col != -1:
            prow = self.rows.get(col)
            if prow is None:
                return row, col
            row = _reduce(row, prow, col)
            col = _leading(row, col + 1)
        return row, -1

    def add(self, row):
        row, col = self.reduce(row)
        if col == -1:
            return False
        if row[col] < 0:
            row = [-x for x in row]
        self.rows[col] = row
        return True

    def contains(self, row):
        return self.reduce(row)[1] == -1


def rank(rows, ncols=None, stop_at=None):
    """Exact rank; stops early once ``stop_at`` (default: ncols) is reached."""
    rows = list(rows)
    if not rows:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    if ncols == 0:
        return 0
    limit = min(ncols, len(rows)) if stop_at is None else stop_at
    ech = Echelon(ncols)
    for row in rows:
        ech.add(row)
        if ech.rank >= limit:
            break
    r = ech.rank
    if stop_at is None:
        audit_rank(rows, ncols, r)
    return r


def rref(rows, ncols):
    """Reduced row echelon form over Q as integer rows plus pivot columns.

    Each returned row is primitive with a positive pivot; entries above and
    below every pivot are zero.
    """
    mat = [integer_row(r) for r in rows]
    mat = [r for r in mat if any(r)]
    pivots = []
    top = 0
    for col in range(ncols):
        piv = -1
        for i in range(top, len(mat)):
            if mat[i][col]:
                piv = i
                break
        if piv == -1:
            continue
        mat[top], mat[piv] = mat[piv], mat[top]
        prow = mat[top]
        if prow[col] < 0:
            prow = [-x for x in prow]
            mat[top] = prow
        for i in range(len(mat)):
            if i != top and mat[i][col]:
                mat[i] = _reduce(mat[i], prow, col)
        pivots.append(col)
        top += 1
        if top == len(mat):
            break
    return mat[:top], pivots


def nullspace(rows, ncols):
    """Integer basis of ``{x : rows . x = 0}`` with one vector per free column.

    The vector for free column ``f`` is zero on every other free column and
    positive on ``f``; the returned list is ordered by ``f``.  Also returns
    the free columns.
    """
    rows = [r for r in rows]
    if not rows:
        free = list(range(ncols))
        basis = []
        for f in free:
            v = [0] * ncols
            v[f] = 1
            basis.append(v)
        return basis, free
    red, pivots = rref(rows, ncols)
    audit_rank(rows, ncols, len(pivots))
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        den = 1
        for r, p in zip(red, pivots):
            if r[f]:
                den = _lcm(den, r[p])
        v = [0] * ncols
        v[f] = den
        for r, p in zip(red, pivots):
            if r[f]:
                v[p] = -r[f] * (den // r[p])
        basis.append(primitive(v))
    return basis, free


def mat_vec(rows, vec):
    return [sum(a * b for a, b in zip(r, vec) if a) for r in rows]


def to_modp(rows, p):
    """Reduce a rational matrix modulo ``p``; None if a denominator vanishes."""
    out = np.zeros((len(rows), len(rows[0]) if rows else 0), dtype=np.int64)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            if not x:
                continue
            if isinstance(x, Fraction):
                den = x.denominator % p
                if den == 0:
                    return None
                out[i, j] = (x.numerator % p) * pow(den, p - 2, p) % p
            else:
                out[i, j] = int(x) % p
    return out


class ModpAudit:
    """Thread-safe tally of exact ranks re-checked over GF(p)."""

    def __init__(self):
        self._lock = threading.Lock()
        self.reset()

    def reset(self):
        with self._lock:
            self.prime = None
            self.checked = 0
            self.mismatches = []
            self.skipped = 0

    def record(self, prime, exact, modular):
        with self._lock:
            self.prime = prime
            if modular is None:
                self.skipped += 1
                return
            self.checked += 1
            if exact != modular:
                self.mismatches.append((exact, modular))

    def summary(self):
        with self._lock:
            return {
                "prime": self.prime,
                "checked": self.checked,
                "skipped": self.skipped,
                "mismatches": len(self.mismatches),
            }


MODP_AUDIT = ModpAudit()


def modp_prime():
    raw = os.environ.get("CANONLAB_MODP", "").strip()
    if not raw:
        return None
    p = int(raw)
    if p < 3 or p >= 2 ** 31 or not _is_prime(p):
        raise ValueError(f"CANONLAB_MODP must be a prime in [3, 2**31), got {raw}")
    return p


@lru_cache(maxsize=8)
def _is_prime(n):
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def audit_rank(rows, ncols, exact):
    """Re-check an exact rank over GF(p) when CANONLAB_MODP is set."""
    p = modp_prime()
    if p is None or not rows or ncols == 0:
        return
    mat = to_modp(rows, p)
    modular = None if mat is None else _kernels.rank_modp(mat, p)
    if modular is not None and modular > exact:
        raise AssertionError(f"rank mod {p} = {modular} exceeds exact rank {exact}")
    MODP_AUDIT.record(p, exact, modular)


class LinearMap:
    """Exact linear map given by the images of the domain basis.

    ``images[i]`` lists the target coordinates of the i-th domain basis
    vector; ``matrix`` is the usual codomain x domain array.
    """

    def __init__(self, domain_dim, codomain_dim, images, provenance, source=None, target=None):
        self.domain_dim = domain_dim
        self.codomain_dim = codomain_dim
        self.images = images
        self.provenance = provenance
        self.source = source
        self.target = target
        self._rank = None

    @property
    def matrix(self):
        return [[img[j] for img in self.images] for j in range(self.codomain_dim)]

    @property
    def rank(self):
        if self._rank is None:
            rows = [r for r in self.images if any(r)]
            self._rank = rank(rows, self.codomain_dim) if rows and self.codomain_dim else 0
        return self._rank

    @property
    def corank(self):
        return self.codomain_dim - self.rank

    @property
    def kernel_dim(self):
        return self.domain_dim - self.rank

    @property
    def is_surjective(self):
        return self.corank == 0

    def summary(self):
        return {
            "provenance": self.provenance,
            "domain_dim": self.domain_dim,
            "codomain_dim": self.codomain_dim,
            "rank": self.rank,
            "corank": self.corank,
            "kernel_dim": self.kernel_dim,
        }
