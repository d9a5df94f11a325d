"""Picard lattices of del Pezzo surfaces.

The lattice of degree ``d`` has rank ``10 - d`` with basis (H, E1, ...,
E_{9-d}), intersection form diag(+1, -1, ..., -1) and canonical class
K = -3H + sum(Ei), stored as the coordinate vector (-3, 1, ..., 1).
All table matching elsewhere goes through basis-independent invariants, so
this basis convention is purely internal.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

import numpy as np


class BadDegreeError(ValueError):
    pass


class DimensionMismatchError(ValueError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PicardLattice:
    """Integer lattice Pic of a del Pezzo surface of the given degree."""

    degree: int
    rank: int
    gram: np.ndarray
    canonical: np.ndarray

    def inner(self, x, y) -> int:
        """Intersection pairing x . y."""
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if x.shape != (self.rank,) or y.shape != (self.rank,):
            raise DimensionMismatchError(
                f"expected vectors of length {self.rank}, got {x.shape} and {y.shape}"
            )
        return int(x @ self.gram @ y)

    def pairing_matrix(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """All pairwise intersection numbers rows[i] . cols[j]."""
        return np.asarray(rows, dtype=np.int64) @ self.gram @ np.asarray(cols, dtype=np.int64).T


def build(degree: int) -> PicardLattice:
    """Picard lattice for a del Pezzo surface of degree 1..8."""
    if not isinstance(degree, int) or not 1 <= degree <= 8:
        raise BadDegreeError(f"degree must be an integer in 1..8, got {degree!r}")
    rank = 10 - degree
    gram = np.diag(np.array([1] + [-1] * (rank - 1), dtype=np.int64))
    k = np.array([-3] + [1] * (rank - 1), dtype=np.int64)
    return PicardLattice(degree=degree, rank=rank, gram=_frozen(gram), canonical=_frozen(k))


def inner(lattice: PicardLattice, x, y) -> int:
    return lattice.inner(x, y)


def _enumerate_classes(rank: int, self_int: int, canon_int: int, slack: int) -> list[tuple[int, ...]]:
    """All integer vectors x with x.x = self_int and x.K = canon_int.

    Writing x = (x0, x1, ..., xm) with m = rank - 1, the two conditions read

        sum(xi) = -3*x0 - canon_int        (from K = (-3, 1, ..., 1))
        sum(xi^2) = x0^2 - self_int

    Cauchy-Schwarz gives (sum xi)^2 <= m * sum(xi^2), i.e.

        (3*x0 + canon_int)^2 <= m * (x0^2 - self_int),

    a quadratic inequality bounding x0 to an explicit interval, and each
    coordinate obeys xi^2 <= sum(xi^2) <= x0^2 - self_int.  ``slack`` widens
    every scan range; the exact per-node feasibility prunes then reject the
    extra values, so a widened search returning the same set certifies the
    bounds (see the enlarged-box tests).
    """
    m = rank - 1
    sols: list[tuple[int, ...]] = []

    # bound x0 by the Cauchy-Schwarz inequality (9 - m) x0^2 + 6 c x0 + (c^2 + m s) <= 0
    a = 9 - m
    c = canon_int
    s = self_int
    disc = 36 * c * c - 4 * a * (c * c + m * s)
    if disc >= 0:
        lo = (-6 * c - isqrt(disc)) // (2 * a) - 1 - slack
        hi = (-6 * c + isqrt(disc)) // (2 * a) + 1 + slack
    elif slack == 0:
        return sols
    else:
        lo = -3 * c // a - 1 - slack
        hi = -3 * c // a + 1 + slack

    buf = [0] * m

    def fill(pos: int, rem_sum: int, rem_sq: int):
        if pos == m:
            if rem_sum == 0 and rem_sq == 0:
                sols.append((x0, *buf))
            return
        k = m - pos
        # exact feasibility of any completion: rem_sum^2 <= k * rem_sq
        if rem_sq < 0 or rem_sum * rem_sum > k * rem_sq:
            return
        bound = isqrt(rem_sq) + slack
        for xi in range(-bound, bound + 1):
            buf[pos] = xi
            fill(pos + 1, rem_sum - xi, rem_sq - xi * xi)

    for x0 in range(lo, hi + 1):
        target_sq = x0 * x0 - s
        if target_sq < 0:
            continue
        fill(0, -3 * x0 - c, target_sq)

    sols.sort()
    return sols


@lru_cache(maxsize=None)
def _classes_cached(degree: int, self_int: int, canon_int: int, slack: int) -> np.ndarray:
    rank = 10 - degree
    sols = _enumerate_classes(rank, self_int, canon_int, slack)
    out = np.array(sols, dtype=np.int64).reshape(len(sols), rank)
    return _frozen(out)


def minus_one_classes(lattice: PicardLattice, slack: int = 0) -> np.ndarray:
    """All classes D with D.D = -1 and D.K = -1, in lexicographic order.

    These are the exceptional curve classes; the list is finite for degree
    <= 7 (16 / 27 / 56 / 240 classes in degrees 4 / 3 / 2 / 1).
    """
    if lattice.degree > 7:
        raise BadDegreeError("exceptional-class census requires degree <= 7")
    return _classes_cached(lattice.degree, -1, -1, slack)


def roots(lattice: PicardLattice, slack: int = 0) -> np.ndarray:
    """All roots: classes a with a.a = -2 and a.K = 0, in lexicographic order.

    Reflections in these generate the full symmetry group of the
    configuration (40 / 72 / 126 / 240 roots in degrees 4 / 3 / 2 / 1).
    """
    if lattice.degree > 7:
        raise BadDegreeError("root census requires degree <= 7")
    return _classes_cached(lattice.degree, -2, 0, slack)


def simple_roots(lattice: PicardLattice) -> np.ndarray:
    """A standard simple system: E1-E2, ..., E_{m-1}-E_m, H-E1-E2-E3.

    For degree <= 6 this is the usual E-type diagram; degree 7 has the single
    root E1-E2.  Every root decomposes over these with integer coefficients
    of one sign (asserted by the Weyl-group layer).
    """
    if lattice.degree > 7:
        raise BadDegreeError("no roots in degree 8")
    r = lattice.rank
    out = []
    for i in range(1, r - 1):
        v = np.zeros(r, dtype=np.int64)
        v[i], v[i + 1] = 1, -1
        out.append(v)
    if r >= 4:
        v = np.zeros(r, dtype=np.int64)
        v[0], v[1], v[2], v[3] = 1, -1, -1, -1
        out.append(v)
    return _frozen(np.array(out, dtype=np.int64))
