"""Exact integer matrix algebra: Smith normal form, kernels, finite quotients.

All computations use arbitrary-precision Python integers.  Intermediate
entries of a Smith reduction can overflow 64 bits even for small inputs,
so nothing here ever round-trips through a fixed-width dtype.

Matrices are plain ``list[list[int]]`` (row major, rectangular).  Helpers
accept anything :func:`as_int_matrix` can digest, including numpy integer
arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

IntMatrix = list[list[int]]


class LinalgError(Exception):
    """Base class for exact-linalg failures."""


class NotFullRankError(LinalgError):
    """Sublattice has lower rank than the ambient lattice (quotient infinite)."""


class NotContainedError(LinalgError):
    """Generators do not lie in the integer span of the ambient basis."""


@dataclass(frozen=True)
class AbelianInvariants:
    """A finite abelian group given by its invariant factors d1 | d2 | ...

    Factors of 1 are dropped; the empty tuple is the trivial group.
    """

    factors: tuple[int, ...] = ()

    def __post_init__(self):
        for d in self.factors:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a != 0:
                raise ValueError(f"divisibility chain broken: {a} does not divide {b}")

    @property
    def is_trivial(self) -> bool:
        return not self.factors

    @property
    def order(self) -> int:
        n = 1
        for d in self.factors:
            n *= d
        return n

    def __str__(self) -> str:
        if not self.factors:
            return "0"
        return " x ".join(f"Z/{d}" for d in self.factors)


TRIVIAL_GROUP = AbelianInvariants(())


def as_int_matrix(m) -> IntMatrix:
    """Copy any matrix-like of integers into a list-of-lists of Python ints."""
    rows = [[int(x) for x in row] for row in m]
    if rows:
        w = len(rows[0])
        if any(len(r) != w for r in rows):
            raise ValueError("ragged matrix")
    return rows


def shape(m: IntMatrix) -> tuple[int, int]:
    return (len(m), len(m[0]) if m else 0)


def identity_matrix(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zero_matrix(r: int, c: int) -> IntMatrix:
    return [[0] * c for _ in range(r)]


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ValueError(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    bt = [[b[k][j] for k in range(rb)] for j in range(cb)]
    return [[sum(av * bv for av, bv in zip(row, col)) for col in bt] for row in a]


def transpose(m: IntMatrix) -> IntMatrix:
    r, c = shape(m)
    return [[m[i][j] for i in range(r)] for j in range(c)]


def hstack(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    ra, _ = shape(a)
    rb, _ = shape(b)
    if ra == 0:
        return [list(r) for r in b]
    if rb == 0:
        return [list(r) for r in a]
    if ra != rb:
        raise ValueError("row count mismatch")
    return [list(x) + list(y) for x, y in zip(a, b)]


def determinant(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n, c = shape(m)
    if n != c:
        raise ValueError("determinant of non-square matrix")
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def matrix_order(m, cap: int = 10000) -> int:
    """Least n >= 1 with m**n = identity; raises if no power up to cap works.

    Finite order is automatic for isometries fixing an ample class (the
    orthogonal complement is definite), but the cap guards corrupted input.
    """
    a = as_int_matrix(m)
    n, c = shape(a)
    if n != c:
        raise ValueError("order of non-square matrix")
    ident = identity_matrix(n)
    p = a
    for k in range(1, cap + 1):
        if p == ident:
            return k
        p = mat_mul(p, a)
    raise LinalgError(f"no power up to {cap} equals the identity")


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m, i, j):
    for row in m:
        row[i], row[j] = row[j], row[i]


def _add_row(m, dst, src, q):
    # row[dst] += q * row[src]
    rd, rs = m[dst], m[src]
    for k in range(len(rd)):
        rd[k] += q * rs[k]


def _add_col(m, dst, src, q):
    for row in m:
        row[dst] += q * row[src]


def _negate_row(m, i):
    m[i] = [-x for x in m[i]]


def _negate_col(m, j):
    for row in m:
        row[j] = -row[j]


def _smith_with_inverses(
    m: IntMatrix,
) -> tuple[IntMatrix, IntMatrix, IntMatrix, IntMatrix, IntMatrix]:
    """Return (S, U, V, Uinv, Vinv) with S = U*M*V and U*Uinv = Vinv*V = I.

    Row/column operations always pick the smallest-magnitude pivot available,
    which keeps intermediate entries from exploding on the lattice sizes seen
    here.  Any correct SNF is acceptable; only S and the quotient invariants
    are contractual.
    """
    a = [row[:] for row in m]
    nr, nc = shape(a)
    u = identity_matrix(nr)
    uinv = identity_matrix(nr)
    v = identity_matrix(nc)
    vinv = identity_matrix(nc)

    def row_op(dst, src, q):
        _add_row(a, dst, src, q)
        _add_row(u, dst, src, q)
        _add_col(uinv, src, dst, -q)

    def col_op(dst, src, q):
        _add_col(a, dst, src, q)
        _add_col(v, dst, src, q)
        _add_row(vinv, src, dst, -q)

    def srow(i, j):
        _swap_rows(a, i, j)
        _swap_rows(u, i, j)
        _swap_cols(uinv, i, j)

    def scol(i, j):
        _swap_cols(a, i, j)
        _swap_cols(v, i, j)
        _swap_rows(vinv, i, j)

    t = 0
    limit = min(nr, nc)
    while t < limit:
        # locate smallest nonzero entry in the trailing submatrix
        best = None
        for i in range(t, nr):
            row = a[i]
            for j in range(t, nc):
                x = row[j]
                if x != 0 and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            srow(t, bi)
        if bj != t:
            scol(t, bj)

        while True:
            pivot = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                x = a[i][t]
                if x != 0:
                    q = -round_div(x, pivot)
                    row_op(i, t, q)
                    if a[i][t] != 0:
                        srow(t, i)
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(t + 1, nc):
                x = a[t][j]
                if x != 0:
                    q = -round_div(x, pivot)
                    col_op(j, t, q)
                    if a[t][j] != 0:
                        scol(t, j)
                        dirty = True
                        break
            if dirty:
                continue
            # row t and column t are clear; force pivot to divide the rest
            pivot = a[t][t]
            offender = None
            for i in range(t + 1, nr):
                row = a[i]
                for j in range(t + 1, nc):
                    if row[j] % pivot != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_op(t, offender, 1)
        if a[t][t] < 0:
            _negate_row(a, t)
            _negate_row(u, t)
            _negate_col(uinv, t)
        t += 1

    return a, u, v, uinv, vinv


def round_div(x: int, y: int) -> int:
    """Nearest-integer quotient (ties toward zero)."""
    q, r = divmod(x, y)
    if 2 * abs(r) > abs(y):
        q += 1
    return q


def smith_normal_form(m) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: returns (S, U, V) with S = U*M*V.

    S is diagonal with nonnegative entries satisfying d1 | d2 | ...; U and V
    are unimodular.  Total function: empty and zero matrices are fine.
    """
    a = as_int_matrix(m)
    s, u, v, _, _ = _smith_with_inverses(a)
    return s, u, v


def smith_diagonal(m) -> list[int]:
    s, _, _ = smith_normal_form(m)
    nr, nc = shape(s)
    return [s[i][i] for i in range(min(nr, nc))]


def kernel_basis(m) -> IntMatrix:
    """Basis of the saturated integer kernel {x : M x = 0}, as columns.

    With S = U*M*V diagonal of rank r, the kernel is spanned by the last
    n - r columns of V; that span is automatically saturated because it is
    the V-image of a coordinate subspace.
    """
    a = as_int_matrix(m)
    nr, nc = shape(a)
    if nc == 0:
        return []
    if nr == 0:
        return identity_matrix(nc)
    s, _, v = smith_normal_form(a)
    rank = sum(1 for i in range(min(nr, nc)) if s[i][i] != 0)
    return [[v[i][j] for j in range(rank, nc)] for i in range(nc)]


def solve_in_basis(ambient: IntMatrix, targets: IntMatrix) -> IntMatrix:
    """Solve ambient * X = targets over the integers (columns of targets).

    ``ambient`` must have independent columns.  Raises NotContainedError when
    some target column is outside the integer span.
    """
    a = as_int_matrix(ambient)
    b = as_int_matrix(targets)
    nr, k = shape(a)
    nrb, m = shape(b)
    if nr != nrb:
        raise ValueError("ambient/target row mismatch")
    if k == 0:
        if any(x != 0 for row in b for x in row):
            raise NotContainedError("nonzero target in empty span")
        return [[] for _ in range(0)]
    s, u, v, _, _ = _smith_with_inverses(a)
    diag = [s[i][i] for i in range(min(nr, k))]
    if any(d == 0 for d in diag) or len(diag) < k:
        raise ValueError("ambient columns are not independent")
    c = mat_mul(u, b)
    y = zero_matrix(k, m)
    for i in range(nr):
        for j in range(m):
            if i < k:
                q, r = divmod(c[i][j], diag[i])
                if r != 0:
                    raise NotContainedError(
                        f"target column {j} is not in the integer span"
                    )
                y[i][j] = q
            elif c[i][j] != 0:
                raise NotContainedError(f"target column {j} is not in the span")
    return mat_mul(v, y)


def quotient_invariants(ambient, sub_generators) -> AbelianInvariants:
    """Invariant factors of span(ambient) / span(sub_generators).

    Factors equal to 1 are dropped.  Raises NotFullRankError when the
    sublattice has lower rank (infinite quotient) and NotContainedError when
    a generator falls outside the ambient span.
    """
    a = as_int_matrix(ambient)
    b = as_int_matrix(sub_generators)
    _, k = shape(a)
    if k == 0:
        if any(x != 0 for row in b for x in row):
            raise NotContainedError("nonzero generator in rank-0 ambient")
        return TRIVIAL_GROUP
    coords = solve_in_basis(a, b)
    diag = smith_diagonal(coords)
    rank = sum(1 for d in diag if d != 0)
    if rank < k:
        raise NotFullRankError(
            f"sublattice rank {rank} < ambient rank {k}: quotient is infinite"
        )
    return AbelianInvariants(tuple(d for d in diag if d > 1))


def saturation(columns) -> IntMatrix:
    """Basis of the saturation of the column span: (span ⊗ Q) ∩ Z^n.

    Uses S = U*B*V: the saturated lattice is spanned by the first rank(B)
    columns of U^{-1}.
    """
    b = as_int_matrix(columns)
    nr, nc = shape(b)
    if nc == 0 or nr == 0:
        return [[] for _ in range(nr)]
    s, _, _, uinv, _ = _smith_with_inverses(b)
    rank = sum(1 for i in range(min(nr, nc)) if s[i][i] != 0)
    return [[uinv[i][j] for j in range(rank)] for i in range(nr)]


def lcm(a: int, b: int) -> int:
    return abs(a * b) // gcd(a, b) if a and b else 0
