"""First cohomology of cyclic actions on lattices.

For g of finite order n acting on a lattice L, the group computed here is

    ker(N) / im(g - 1),  N = 1 + g + ... + g^(n-1),

the Tate H^1 of the cyclic group <g> with coefficients in L.  For a
procyclic absolute Galois group acting through a finite cyclic quotient this
agrees with profinite H^1 of the ambient group by inflation-restriction
(H^1 of the kernel acting trivially on torsion-free coefficients vanishes),
so it is the invariant whose nonvanishing at a finite level obstructs stable
rationality.

Two independent routes to ker(N) are provided: the Smith-normal-form route
(used everywhere) and a rational-nullspace-plus-saturation route backed by
sympy, kept as a cross-check oracle.
"""

from __future__ import annotations

from functools import reduce

import numpy as np
import sympy

from .intlinalg import (
    AbelianInvariants,
    TRIVIAL_GROUP,
    as_int_matrix,
    identity_matrix,
    kernel_basis,
    mat_mul,
    matrix_order,
    quotient_invariants,
    saturation,
    shape,
)


def _matrix_of(g) -> list[list[int]]:
    mat = getattr(g, "matrix", g)
    return as_int_matrix(np.asarray(mat))


def _norm_and_delta(m: list[list[int]], order: int) -> tuple[list[list[int]], list[list[int]]]:
    n = len(m)
    ident = identity_matrix(n)
    norm = ident
    power = m
    for _ in range(order - 1):
        norm = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(norm, power)]
        power = mat_mul(power, m)
    delta = [[a - b for a, b in zip(row, erow)] for row, erow in zip(m, ident)]
    return norm, delta


def _quotient_by_image(kernel: list[list[int]], delta: list[list[int]]) -> AbelianInvariants:
    _, kc = shape(kernel)
    if kc == 0:
        return TRIVIAL_GROUP
    return quotient_invariants(kernel, delta)


def h1_cyclic(g, order: int | None = None) -> AbelianInvariants:
    """Invariant factors of ker(N) / im(g - 1) for the cyclic group <g>.

    Accepts a LatticeAut or any integer matrix of finite order.  Every
    invariant factor divides the order of g.
    """
    m = _matrix_of(g)
    n = order if order is not None else matrix_order(m)
    norm, delta = _norm_and_delta(m, n)
    result = _quotient_by_image(kernel_basis(norm), delta)
    assert all(n % d == 0 for d in result.factors), "H^1 not killed by the order"
    return result


def h1_cyclic_rational_route(g, order: int | None = None) -> AbelianInvariants:
    """Independent oracle: rational kernel (sympy) + saturation, then quotient.

    The kernel of N is found as a rational nullspace, cleared to a primitive
    integer basis, and saturated; the final quotient uses the same invariant
    machinery as the main route, so any disagreement points at the kernel
    computation.
    """
    m = _matrix_of(g)
    n = order if order is not None else matrix_order(m)
    norm, delta = _norm_and_delta(m, n)
    dim = len(norm)
    null = sympy.Matrix(norm).nullspace()
    if not null:
        return TRIVIAL_GROUP
    cols = []
    for vec in null:
        denom = reduce(sympy.ilcm, [sympy.fraction(x)[1] for x in vec], 1)
        ints = [int(x * denom) for x in vec]
        content = reduce(sympy.igcd, ints)
        cols.append([x // content for x in ints])
    basis = [[cols[j][i] for j in range(len(cols))] for i in range(dim)]
    return _quotient_by_image(saturation(basis), delta)


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def h1_tower(g) -> dict[int, AbelianInvariants]:
    """H^1 of <g^r> for every divisor r of the order of g.

    Only divisors matter: <g^r> = <g^gcd(r, order)>, so the tower is finite
    and canonical.  The entry at r = order is always trivial.
    """
    m = _matrix_of(g)
    n = matrix_order(m)
    tower: dict[int, AbelianInvariants] = {}
    power = identity_matrix(len(m))
    powers = {0: power}
    for r in range(1, n + 1):
        power = mat_mul(power, m)
        powers[r] = power
    for r in divisors(n):
        tower[r] = h1_cyclic(powers[r], order=n // r)
    return tower


def first_nonvanishing_power(g, tower: dict[int, AbelianInvariants] | None = None) -> int | None:
    """Smallest divisor r of the order with H^1(<g^r>) nontrivial, if any."""
    if tower is None:
        tower = h1_tower(g)
    for r in sorted(tower):
        if not tower[r].is_trivial:
            return r
    return None
