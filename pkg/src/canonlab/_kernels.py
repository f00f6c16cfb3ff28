"""Integer kernels behind subset enumeration and the modular rank audit.

Every kernel exists twice: a numba ``@njit`` version and a pure-numpy
version with identical results.  The jitted path is used when numba imports
and ``CANONLAB_DISABLE_JIT`` is unset (or ``0``); otherwise the numpy path
runs.  Both are importable directly as ``<name>_jit`` / ``<name>_numpy`` so
tests and the benchmark can compare them.

Conventions: components are numbered ``0..n-1`` and a subset of components is
a bitmask.  A node is the pair ``(ends_a[i], ends_b[i])`` of component
indices; self-nodes have equal ends.
"""
import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False


def jit_enabled():
    flag = os.environ.get("CANONLAB_DISABLE_JIT", "").strip().lower()
    return HAVE_NUMBA and flag in ("", "0", "false", "no")


# ---------------------------------------------------------------- numpy path


def cut_sizes_numpy(ends_a, ends_b, n_comp):
    masks = np.arange(1 << n_comp, dtype=np.int64)
    in_a = (masks[None, :] >> ends_a[:, None]) & 1
    in_b = (masks[None, :] >> ends_b[:, None]) & 1
    return (in_a ^ in_b).sum(axis=0).astype(np.int64)


def subset_stats_numpy(ends_a, ends_b, n_comp):
    """Internal-node count and connectedness for every component subset."""
    n_masks = 1 << n_comp
    masks = np.arange(n_masks, dtype=np.int64)
    in_a = (masks[None, :] >> ends_a[:, None]) & 1
    in_b = (masks[None, :] >> ends_b[:, None]) & 1
    internal_flags = (in_a & in_b).astype(bool)
    internal = internal_flags.sum(axis=0).astype(np.int64)

    member = ((masks[:, None] >> np.arange(n_comp)[None, :]) & 1).astype(bool)
    big = n_comp + 1
    labels = np.where(member, np.arange(n_comp)[None, :], big)
    rows = np.arange(n_masks)
    for _ in range(n_comp):
        changed = False
        for i in range(len(ends_a)):
            a, b = ends_a[i], ends_b[i]
            if a == b:
                continue
            live = internal_flags[i]
            lo = np.minimum(labels[:, a], labels[:, b])
            new_a = np.where(live, lo, labels[:, a])
            new_b = np.where(live, lo, labels[:, b])
            if (new_a != labels[:, a]).any() or (new_b != labels[:, b]).any():
                changed = True
            labels[rows, a] = new_a
            labels[rows, b] = new_b
        if not changed:
            break
    masked = np.where(member, labels, -1)
    top = masked.max(axis=1)
    low = np.where(member, labels, big).min(axis=1)
    connected = (top == low) & (masks != 0)
    return internal, connected


def rank_modp_numpy(mat, p):
    m = np.array(mat, dtype=np.int64, copy=True) % p
    n_rows, n_cols = m.shape
    rank = 0
    for col in range(n_cols):
        if rank == n_rows:
            break
        nz = np.nonzero(m[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        inv = pow(int(m[rank, col]), p - 2, p)
        m[rank] = (m[rank] * inv) % p
        below = m[rank + 1:, col].copy()
        if below.any():
            m[rank + 1:] = (m[rank + 1:] - (below[:, None] * m[rank][None, :]) % p) % p
        rank += 1
    return rank


# ------------------------------------------------------------------ jit path

if HAVE_NUMBA:

    @njit(cache=True)
    def cut_sizes_jit(ends_a, ends_b, n_comp):
        n_masks = 1 << n_comp
        out = np.zeros(n_masks, dtype=np.int64)
        for mask in range(n_masks):
            c = 0
            for i in range(ends_a.shape[0]):
                ia = (mask >> ends_a[i]) & 1
                ib = (mask >> ends_b[i]) & 1
                c += ia ^ ib
            out[mask] = c
        return out

    @njit(cache=True)
    def _find(parent, x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    @njit(cache=True)
    def subset_stats_jit(ends_a, ends_b, n_comp):
        n_masks = 1 << n_comp
        internal = np.zeros(n_masks, dtype=np.int64)
        connected = np.zeros(n_masks, dtype=np.bool_)
        parent = np.empty(n_comp, dtype=np.int64)
        for mask in range(1, n_masks):
            for j in range(n_comp):
                parent[j] = j
            c = 0
            for i in range(ends_a.shape[0]):
                a = ends_a[i]
                b = ends_b[i]
                if ((mask >> a) & 1) and ((mask >> b) & 1):
                    c += 1
                    ra = _find(parent, a)
                    rb = _find(parent, b)
                    if ra != rb:
                        parent[ra] = rb
            internal[mask] = c
            root = -1
            ok = True
            for j in range(n_comp):
                if (mask >> j) & 1:
                    r = _find(parent, j)
                    if root == -1:
                        root = r
                    elif r != root:
                        ok = False
                        break
            connected[mask] = ok
        return internal, connected

    @njit(cache=True)
    def _powmod(a, e, p):
        result = 1
        a = a % p
        while e > 0:
            if e & 1:
                result = (result * a) % p
            a = (a * a) % p
            e >>= 1
        return result

    @njit(cache=True)
    def rank_modp_jit(mat, p):
        m = mat.copy()
        n_rows, n_cols = m.shape
        for i in range(n_rows):
            for j in range(n_cols):
                m[i, j] = m[i, j] % p
        rank = 0
        for col in range(n_cols):
            if rank == n_rows:
                break
            piv = -1
            for r in range(rank, n_rows):
                if m[r, col] != 0:
                    piv = r
                    break
            if piv == -1:
                continue
            if piv != rank:
                for j in range(n_cols):
                    tmp = m[rank, j]
                    m[rank, j] = m[piv, j]
                    m[piv, j] = tmp
            inv = _powmod(m[rank, col], p - 2, p)
            for j in range(col, n_cols):
                m[rank, j] = (m[rank, j] * inv) % p
            for r in range(rank + 1, n_rows):
                f = m[r, col]
                if f != 0:
                    for j in range(col, n_cols):
                        m[r, j] = (m[r, j] - f * m[rank, j]) % p
            rank += 1
        return rank


def _as_ends(ends_a, ends_b):
    return (np.ascontiguousarray(ends_a, dtype=np.int64),
            np.ascontiguousarray(ends_b, dtype=np.int64))


def cut_sizes(ends_a, ends_b, n_comp):
    """Number of nodes with exactly one end in each subset mask."""
    a, b = _as_ends(ends_a, ends_b)
    if jit_enabled():
        return cut_sizes_jit(a, b, n_comp)
    return cut_sizes_numpy(a, b, n_comp)


def subset_stats(ends_a, ends_b, n_comp):
    """``(internal_node_count, is_connected)`` arrays indexed by subset mask."""
    a, b = _as_ends(ends_a, ends_b)
    if jit_enabled():
        return subset_stats_jit(a, b, n_comp)
    return subset_stats_numpy(a, b, n_comp)


def rank_modp(mat, p):
    """Rank of an integer matrix over GF(p); requires ``p < 2**31``."""
    m = np.ascontiguousarray(mat, dtype=np.int64)
    if m.ndim != 2 or m.size == 0:
        return 0
    if jit_enabled():
        return int(rank_modp_jit(m, np.int64(p)))
    return int(rank_modp_numpy(m, p))
