import numpy as np
import pytest

from picweyl import lattice as lat
from picweyl.weyl import reflection


def test_build_examples():
    L8 = lat.build(8)
    assert L8.rank == 2
    assert np.array_equal(np.diag(L8.gram), [1, -1])
    assert list(L8.canonical) == [-3, 1]
    L4 = lat.build(4)
    assert L4.rank == 6
    assert L4.inner(L4.canonical, L4.canonical) == 4
    L1 = lat.build(1)
    assert L1.rank == 9
    assert L1.inner(L1.canonical, L1.canonical) == 1


def test_build_bad_degree():
    for d in (0, 9, -1, 2.5):
        with pytest.raises(lat.BadDegreeError):
            lat.build(d)


def test_inner_examples():
    L = lat.build(3)
    H = np.array([1, 0, 0, 0, 0, 0, 0])
    E1 = np.array([0, 1, 0, 0, 0, 0, 0])
    E2 = np.array([0, 0, 1, 0, 0, 0, 0])
    assert L.inner(H, H) == 1
    assert L.inner(E1, E2) == 0
    assert L.inner(L.canonical, L.canonical) == 3
    with pytest.raises(lat.DimensionMismatchError):
        L.inner(H, np.array([1, 0]))


@pytest.mark.parametrize(
    "degree,lines,roots",
    [(7, 3, 2), (6, 6, 8), (5, 10, 20), (4, 16, 40), (3, 27, 72), (2, 56, 126), (1, 240, 240)],
)
def test_census_counts(degree, lines, roots):
    L = lat.build(degree)
    assert len(lat.minus_one_classes(L)) == lines
    assert len(lat.roots(L)) == roots


def test_degree7_explicit():
    L = lat.build(7)
    lines = {tuple(v) for v in lat.minus_one_classes(L)}
    assert lines == {(0, 1, 0), (0, 0, 1), (1, -1, -1)}
    roots = {tuple(v) for v in lat.roots(L)}
    assert roots == {(0, 1, -1), (0, -1, 1)}


def test_class_defining_equations():
    for d in (1, 2, 3, 4):
        L = lat.build(d)
        K = L.canonical
        lines = lat.minus_one_classes(L)
        for D in lines:
            assert L.inner(D, D) == -1 and L.inner(D, K) == -1
        roots = lat.roots(L)
        for a in roots:
            assert L.inner(a, a) == -2 and L.inner(a, K) == 0


def test_enlarged_box_finds_nothing_new():
    for d in (1, 2, 3, 4):
        L = lat.build(d)
        assert np.array_equal(lat.minus_one_classes(L, 0), lat.minus_one_classes(L, 1))
        assert np.array_equal(lat.roots(L, 0), lat.roots(L, 1))


def test_lexicographic_order():
    for d in (3, 4):
        L = lat.build(d)
        rows = [tuple(v) for v in lat.minus_one_classes(L)]
        assert rows == sorted(rows)


def test_roots_negation_symmetric_lines_not():
    for d in (2, 3, 4):
        L = lat.build(d)
        roots = {tuple(v) for v in lat.roots(L)}
        assert {tuple(-np.array(v)) for v in roots} == roots
        lines = {tuple(v) for v in lat.minus_one_classes(L)}
        assert all(tuple(-np.array(v)) not in lines for v in lines)


def test_census_closed_under_reflections():
    for d in (2, 3, 4):
        L = lat.build(d)
        lines = {tuple(v) for v in lat.minus_one_classes(L)}
        roots = {tuple(v) for v in lat.roots(L)}
        for alpha in lat.simple_roots(L):
            m = reflection(L, alpha).matrix
            assert {tuple(m @ np.array(v)) for v in lines} == lines
            assert {tuple(m @ np.array(v)) for v in roots} == roots


def test_degree8_out_of_census_contract():
    L = lat.build(8)
    with pytest.raises(lat.BadDegreeError):
        lat.minus_one_classes(L)
    with pytest.raises(lat.BadDegreeError):
        lat.roots(L)
