import random

import pytest
from hypothesis import given, settings, strategies as st

from picweyl.intlinalg import (
    AbelianInvariants,
    NotContainedError,
    NotFullRankError,
    as_int_matrix,
    determinant,
    hstack,
    identity_matrix,
    kernel_basis,
    mat_mul,
    matrix_order,
    quotient_invariants,
    saturation,
    shape,
    smith_diagonal,
    smith_normal_form,
    solve_in_basis,
)


def random_matrix(rng, rows, cols, lo=-9, hi=9):
    return [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]


def random_unimodular(rng, n, steps=12):
    """Product of elementary integer row operations: det = +/-1 by construction."""
    m = identity_matrix(n)
    for _ in range(steps):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        q = rng.randint(-3, 3)
        for k in range(n):
            m[i][k] += q * m[j][k]
    if rng.random() < 0.5 and n > 1:
        m[0], m[1] = m[1], m[0]
    return m


def check_snf_contract(m):
    s, u, v = smith_normal_form(m)
    nr, nc = shape(m)
    assert mat_mul(mat_mul(u, as_int_matrix(m)), v) == s
    assert abs(determinant(u)) == 1
    assert abs(determinant(v)) == 1
    diag = [s[i][i] for i in range(min(nr, nc))]
    for i in range(nr):
        for j in range(nc):
            if i != j:
                assert s[i][j] == 0
    for a, b in zip(diag, diag[1:]):
        assert a >= 0 and b >= 0
        if a == 0:
            assert b == 0
        else:
            assert b % a == 0
    return diag


def test_snf_identity():
    s, u, v = smith_normal_form(identity_matrix(3))
    assert s == identity_matrix(3)
    assert u == identity_matrix(3)
    assert v == identity_matrix(3)


def test_snf_diag_2_3():
    diag = check_snf_contract([[2, 0], [0, 3]])
    assert diag == [1, 6]


def test_snf_upper_triangular():
    # d1 = gcd of entries = 2, d1*d2 = |det| = 4
    diag = check_snf_contract([[2, 4], [0, 2]])
    assert diag == [2, 2]


def test_snf_empty_and_zero():
    assert check_snf_contract([]) == []
    assert check_snf_contract([[0, 0], [0, 0]]) == [0, 0]
    assert check_snf_contract([[0], [0], [0]]) == [0]


@settings(max_examples=150, deadline=None)
@given(
    st.integers(1, 6),
    st.integers(1, 6),
    st.lists(st.integers(-40, 40), min_size=36, max_size=36),
    )
def test_snf_random_contract(rows, cols, entries):
    m = [[entries[i * cols + j] for j in range(cols)] for i in range(rows)]
    check_snf_contract(m)


def test_snf_large_entries_exact():
    # entries that would overflow i64 arithmetic if anything truncated
    big = 10**30
    m = [[big, big - 1], [big + 1, big]]
    diag = check_snf_contract(m)
    det = determinant(m)
    assert diag[0] * diag[1] == abs(det)


def test_kernel_zero_matrix():
    k = kernel_basis([[0, 0], [0, 0]])
    assert shape(k) == (2, 2)
    assert abs(determinant(k)) == 1


def test_kernel_identity_empty():
    assert kernel_basis(identity_matrix(3)) == [[], [], []]


def test_kernel_row_vector():
    k = kernel_basis([[1, 1]])
    assert shape(k) == (2, 1)
    col = [k[0][0], k[1][0]]
    assert sorted(col) == [-1, 1]


def test_kernel_is_saturated():
    rng = random.Random(7)
    for _ in range(40):
        m = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        k = kernel_basis(m)
        nr, nc = shape(k)
        if nc == 0:
            continue
        # product must vanish
        assert all(x == 0 for row in mat_mul(as_int_matrix(m), k) for x in row)
        # a saturated basis has all invariant factors equal to 1
        assert all(d == 1 for d in smith_diagonal(k))


def test_quotient_examples():
    assert quotient_invariants([[1]], [[2]]).factors == (2,)
    amb = identity_matrix(2)
    assert quotient_invariants(amb, [[2, 0], [0, 1]]).factors == (2,)
    assert quotient_invariants(amb, [[2, 0], [0, 3]]).factors == (6,)


def test_quotient_not_full_rank():
    with pytest.raises(NotFullRankError):
        quotient_invariants(identity_matrix(2), [[2], [0]])


def test_quotient_not_contained():
    # ambient = 2Z x Z inside Z^2; generator (1,0) is outside
    with pytest.raises(NotContainedError):
        quotient_invariants([[2, 0], [0, 1]], [[1], [0]])


def test_quotient_basis_independence():
    rng = random.Random(21)
    for _ in range(25):
        n = rng.randint(1, 4)
        sub = random_matrix(rng, n, n)
        if determinant(sub) == 0:
            continue
        amb = identity_matrix(n)
        base = quotient_invariants(amb, sub)
        w1 = random_unimodular(rng, n)
        w2 = random_unimodular(rng, n)
        # re-base the ambient and rewrite the generators accordingly
        rebased = quotient_invariants(w1, mat_mul(w1, solve_in_basis(identity_matrix(n), sub)))
        mixed = quotient_invariants(amb, mat_mul(sub, w2))
        assert rebased == base
        assert mixed == base


def test_kernel_plus_complement_reports_no_kernel_torsion():
    # Stack the kernel basis with a random complement.  Replacing the kernel
    # block by its saturation must leave the quotient unchanged: none of the
    # reported torsion is attributable to the kernel side.
    rng = random.Random(3)
    for _ in range(40):
        rows, cols = rng.randint(1, 4), rng.randint(2, 5)
        m = random_matrix(rng, rows, cols)
        k = kernel_basis(m)
        nr, kc = shape(k)
        if kc == 0 or kc == cols:
            continue
        comp = random_matrix(rng, cols, cols - kc)
        full = hstack(k, comp)
        if determinant(full) == 0:
            continue
        inv = quotient_invariants(identity_matrix(cols), full)
        sat_inv = quotient_invariants(identity_matrix(cols), hstack(saturation(k), comp))
        assert inv == sat_inv
        # and the kernel basis already spans its own saturation
        assert quotient_invariants(saturation(k), k).is_trivial


def test_saturation_basic():
    sat = saturation([[2], [0]])
    assert shape(sat) == (2, 1)
    assert [abs(sat[0][0]), abs(sat[1][0])] == [1, 0]


def test_matrix_order():
    assert matrix_order(identity_matrix(4)) == 1
    assert matrix_order([[0, 1], [1, 0]]) == 2
    assert matrix_order([[0, -1], [1, -1]]) == 3


def test_abelian_invariants_contract():
    g = AbelianInvariants((2, 6))
    assert g.order == 12
    assert not g.is_trivial
    assert str(g) == "Z/2 x Z/6"
    assert str(AbelianInvariants(())) == "0"
    with pytest.raises(ValueError):
        AbelianInvariants((4, 6))
    with pytest.raises(ValueError):
        AbelianInvariants((1, 2))
