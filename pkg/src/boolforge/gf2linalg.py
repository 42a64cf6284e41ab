"""Word-parallel linear algebra over GF(2) on bit-packed uint64 vectors.

The core object is an XOR basis kept in echelon form by lowest set bit.
Vectors are inserted one at a time; a vector that reduces to zero is a
linear dependency, reported as the combination of inserted vector ids that
produced it.  Inserting columns of a matrix therefore yields its rank and a
basis of its null space, and a new block of columns can be appended without
redoing earlier work.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _ctz(w):
    n = 0
    if (w & np.uint64(0xFFFFFFFF)) == 0:
        n += 32
        w >>= np.uint64(32)
    if (w & np.uint64(0xFFFF)) == 0:
        n += 16
        w >>= np.uint64(16)
    if (w & np.uint64(0xFF)) == 0:
        n += 8
        w >>= np.uint64(8)
    if (w & np.uint64(0xF)) == 0:
        n += 4
        w >>= np.uint64(4)
    if (w & np.uint64(0x3)) == 0:
        n += 2
        w >>= np.uint64(2)
    if (w & np.uint64(0x1)) == 0:
        n += 1
    return n


@njit(cache=True)
def _insert_block(rows, combos, pivot_row, count, vecs, ids, deps, track):
    """Reduce each vec against the basis; append it or record a dependency.

    Returns (new basis count, number of dependencies written to deps).
    """
    nwords = rows.shape[1]
    cwords = combos.shape[1]
    v = np.empty(nwords, dtype=np.uint64)
    c = np.empty(cwords, dtype=np.uint64)
    ndeps = 0
    one = np.uint64(1)
    for t in range(vecs.shape[0]):
        for w in range(nwords):
            v[w] = vecs[t, w]
        if track:
            for w in range(cwords):
                c[w] = 0
            vid = ids[t]
            c[vid >> 6] = one << np.uint64(vid & 63)
        placed = False
        w = 0
        while w < nwords:
            word = v[w]
            if word == 0:
                w += 1
                continue
            bit = (w << 6) + _ctz(word)
            r = pivot_row[bit]
            if r < 0:
                for x in range(nwords):
                    rows[count, x] = v[x]
                if track:
                    for x in range(cwords):
                        combos[count, x] = c[x]
                pivot_row[bit] = count
                count += 1
                placed = True
                break
            # basis row r has lowest bit `bit`, so words before w stay zero
            for x in range(w, nwords):
                v[x] ^= rows[r, x]
            if track:
                for x in range(cwords):
                    c[x] ^= combos[r, x]
        if not placed:
            if track:
                for x in range(cwords):
                    deps[ndeps, x] = c[x]
            ndeps += 1
    return count, ndeps


class XorBasis:
    """Incremental GF(2) span of bit-packed vectors of length ``nbits``.

    ``max_ids`` bounds the number of vectors that may ever be inserted; it
    sizes the combination tracking used to report dependencies.
    """

    def __init__(self, nbits: int, max_ids: int, track: bool = True):
        self.nbits = nbits
        self.nwords = max(1, (nbits + 63) >> 6)
        self.max_ids = max_ids
        self.cwords = max(1, (max_ids + 63) >> 6) if track else 1
        self.track = track
        cap = min(nbits, max_ids)
        self.rows = np.zeros((cap, self.nwords), dtype=np.uint64)
        self.combos = np.zeros((cap if track else 1, self.cwords), dtype=np.uint64)
        self.pivot_row = np.full(self.nwords * 64, -1, dtype=np.int64)
        self.rank = 0
        self.inserted = 0

    def insert(self, vecs: np.ndarray) -> np.ndarray:
        """Insert rows of ``vecs``; return dependency combinations as packed id sets."""
        vecs = np.ascontiguousarray(vecs, dtype=np.uint64).reshape(-1, self.nwords)
        k = vecs.shape[0]
        if self.inserted + k > self.max_ids:
            raise ValueError("more vectors inserted than max_ids allows")
        ids = np.arange(self.inserted, self.inserted + k, dtype=np.int64)
        deps = np.zeros((k if self.track else 1, self.cwords), dtype=np.uint64)
        self.rank, ndeps = _insert_block(self.rows, self.combos, self.pivot_row, self.rank,
                                         vecs, ids, deps, self.track)
        self.inserted += k
        self.last_dependency_count = ndeps
        return deps[:ndeps] if self.track else np.zeros((0, self.cwords), np.uint64)

    @property
    def nullity(self) -> int:
        return self.inserted - self.rank


def ids_of(combo: np.ndarray, limit: int) -> np.ndarray:
    """Indices of set bits in a packed id set."""
    bits = np.unpackbits(np.ascontiguousarray(combo, dtype="<u8").view(np.uint8), bitorder="little")
    return np.flatnonzero(bits[:limit])


def rank(vectors: np.ndarray, nbits: int) -> int:
    """Rank of the packed rows of ``vectors``."""
    vectors = np.ascontiguousarray(vectors, dtype=np.uint64)
    basis = XorBasis(nbits, vectors.shape[0], track=False)
    if vectors.shape[0]:
        basis.insert(vectors)
    return basis.rank
