import numpy as np
import pytest

from picweyl.cohomology import (
    divisors,
    first_nonvanishing_power,
    h1_cyclic,
    h1_cyclic_rational_route,
    h1_tower,
)
from picweyl.weyl import LatticeAut, reflection
from picweyl import lattice as lat


def random_perm_matrix(rng, n):
    p = np.zeros((n, n), dtype=np.int64)
    p[np.arange(n), rng.permutation(n)] = 1
    return p


def test_identity_trivial():
    assert h1_cyclic(np.eye(5, dtype=int)).is_trivial


def test_minus_one_on_z():
    assert h1_cyclic([[-1]]).factors == (2,)


def test_swap_on_z2():
    assert h1_cyclic([[0, 1], [1, 0]]).is_trivial


def test_permutation_modules_vanish():
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = int(rng.integers(1, 12))
        assert h1_cyclic(random_perm_matrix(rng, n)).is_trivial


def test_order3_rotation():
    g = np.array([[0, -1], [1, -1]])
    assert h1_cyclic(g).factors == (3,)
    assert h1_cyclic_rational_route(g).factors == (3,)


def test_routes_agree_on_signed_permutations():
    # signed permutation matrices give a mix of trivial and 2-torsion groups
    rng = np.random.default_rng(5)
    for _ in range(60):
        n = int(rng.integers(1, 8))
        m = random_perm_matrix(rng, n) * rng.choice([-1, 1], size=n)
        assert h1_cyclic(m) == h1_cyclic_rational_route(m)


def test_factors_divide_order():
    rng = np.random.default_rng(7)
    L = lat.build(3)
    roots = lat.roots(L)
    g = np.eye(L.rank, dtype=np.int64)
    for i in rng.integers(0, len(roots), size=6):
        g = g @ reflection(L, roots[i]).matrix
    from picweyl.intlinalg import matrix_order

    n = matrix_order(g)
    inv = h1_cyclic(g)
    assert all(n % d == 0 for d in inv.factors)


def test_tower_keys_and_terminal_entry():
    g = np.array([[0, -1], [1, -1]])  # order 3
    t = h1_tower(g)
    assert sorted(t) == [1, 3]
    assert t[3].is_trivial
    assert first_nonvanishing_power(g) == 1
    ident = np.eye(4, dtype=int)
    t = h1_tower(ident)
    assert sorted(t) == [1]
    assert first_nonvanishing_power(ident) is None


def test_tower_depends_only_on_gcd():
    # h1 of g^r depends only on gcd(r, order): test on a Weyl element
    L = lat.build(4)
    roots = lat.roots(L)
    g = reflection(L, roots[0]).compose(reflection(L, roots[7])).compose(
        reflection(L, roots[3])
    )
    from picweyl.intlinalg import matrix_order

    n = matrix_order(g.matrix)
    from math import gcd

    for r in range(1, 2 * n + 1):
        a = h1_cyclic(np.linalg.matrix_power(g.matrix, r))
        b = h1_cyclic(np.linalg.matrix_power(g.matrix, gcd(r, n)))
        assert a == b


def test_conjugation_invariance(inv4):
    rng = np.random.default_rng(3)
    L = lat.build(4)
    roots = lat.roots(L)
    for rec in inv4.records[:8]:
        w = np.eye(L.rank, dtype=np.int64)
        for i in rng.integers(0, len(roots), size=5):
            w = w @ reflection(L, roots[i]).matrix
        winv = L.gram @ w.T @ L.gram  # exact isometry inverse
        assert np.array_equal(w @ winv, np.eye(L.rank, dtype=np.int64))
        conj = w @ rec.representative.matrix @ winv
        assert h1_cyclic(conj) == rec.h1


def test_divisors():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(1) == [1]
