"""Minimality of cyclic actions via orbits of exceptional classes.

An invariant set of exceptional curve classes can be blown down over the
base field exactly when its members are pairwise disjoint.  The index of an
action is the maximum total size of a union of contractible orbits that
stays pairwise disjoint across orbits; the action is minimal when the index
is zero.  Computed exactly by branch and bound over contractible orbits.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import lattice as lat


@dataclass(frozen=True)
class OrbitPartition:
    """Orbits of <g> on the exceptional classes, each flagged contractible."""

    degree: int
    orbits: tuple[tuple[int, ...], ...]
    contractible: tuple[bool, ...]

    def contractible_orbits(self) -> list[tuple[int, ...]]:
        return [o for o, c in zip(self.orbits, self.contractible) if c]


@lru_cache(maxsize=None)
def _line_tables(degree: int):
    L = lat.build(degree)
    lines = lat.minus_one_classes(L)
    index = {tuple(int(x) for x in row): i for i, row in enumerate(lines)}
    gram = L.pairing_matrix(lines, lines)
    gram.setflags(write=False)
    return L, lines, index, gram


def line_permutation(degree: int, matrix: np.ndarray) -> np.ndarray:
    """Permutation induced on the exceptional-class list by an isometry."""
    _, lines, index, _ = _line_tables(degree)
    images = lines @ np.asarray(matrix, dtype=np.int64).T
    perm = np.empty(len(lines), dtype=np.int64)
    for i, row in enumerate(images):
        key = tuple(int(x) for x in row)
        if key not in index:
            raise ValueError("matrix does not permute the exceptional classes")
        perm[i] = index[key]
    return perm


def _cycles(perm: np.ndarray) -> list[tuple[int, ...]]:
    n = len(perm)
    seen = np.zeros(n, dtype=bool)
    out = []
    for i in range(n):
        if seen[i]:
            continue
        cyc = [i]
        seen[i] = True
        j = int(perm[i])
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = int(perm[j])
        out.append(tuple(cyc))
    return out


def line_orbits(g) -> OrbitPartition:
    """Orbit decomposition of <g> on exceptional classes with flags.

    An orbit is contractible iff its classes are pairwise disjoint (all inner
    products within the orbit vanish); singletons are vacuously contractible.
    """
    degree = g.degree
    _, _, _, gram = _line_tables(degree)
    perm = line_permutation(degree, g.matrix)
    orbits = _cycles(perm)
    flags = []
    for orb in orbits:
        idx = np.array(orb)
        sub = gram[np.ix_(idx, idx)]
        flags.append(bool((sub[np.triu_indices(len(orb), k=1)] == 0).all()))
    return OrbitPartition(degree=degree, orbits=tuple(orbits), contractible=tuple(flags))


def _max_disjoint_weight(weights: list[int], compat: np.ndarray) -> int:
    """Maximum total weight of a pairwise-compatible set; exact branch and bound."""
    order = sorted(range(len(weights)), key=lambda i: -weights[i])
    w = np.array([weights[i] for i in order], dtype=np.int64)
    comp = compat[np.ix_(order, order)]
    n = len(w)
    best = 0

    def grow(current: int, candidates: np.ndarray):
        nonlocal best
        if current > best:
            best = current
        if not candidates.size:
            return
        remaining = current + int(w[candidates].sum())
        if remaining <= best:
            return
        for pos, i in enumerate(candidates):
            # bound using only candidates not yet tried at this level
            rest = candidates[pos:]
            if current + int(w[rest].sum()) <= best:
                return
            nxt = rest[1:][comp[i, rest[1:]]]
            grow(current + int(w[i]), nxt)

    grow(0, np.arange(n))
    return best


def index(g) -> int:
    """Maximum size of a simultaneously contractible invariant set of classes.

    Zero exactly when the action is minimal.
    """
    part = line_orbits(g)
    cons = part.contractible_orbits()
    if not cons:
        return 0
    _, _, _, gram = _line_tables(g.degree)
    k = len(cons)
    weights = [len(o) for o in cons]
    compat = np.zeros((k, k), dtype=bool)
    for i in range(k):
        for j in range(i + 1, k):
            block = gram[np.ix_(np.array(cons[i]), np.array(cons[j]))]
            ok = bool((block == 0).all())
            compat[i, j] = compat[j, i] = ok
    return _max_disjoint_weight(weights, compat)


def is_minimal(g) -> bool:
    """True iff no nonempty contractible invariant set exists (index zero)."""
    return index(g) == 0
