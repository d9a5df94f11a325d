"""Characteristic symbols and Frame symbols of finite-order lattice isometries.

A characteristic symbol records, for each m, how many eigenvalues are
primitive m-th roots of unity: we store the cyclotomic multiplicity c_m
(the exponent of the m-th cyclotomic polynomial in the characteristic
polynomial) and display n_m = c_m * phi(m), the count of primitive roots,
which is the convention used by the published classification tables.

A Frame symbol is the unique rewriting of the same characteristic
polynomial as a product prod (t^m - 1)^{n_m} with integer exponents.

String grammar (normative for data files and the CLI):

    SYMBOL := TERM ("." TERM)*
    TERM   := M ("^" E)?

with M a positive decimal integer and E a nonzero decimal integer with an
optional leading "-"; no whitespace.  Canonical form: ascending M, with E
omitted when it equals 1.  The parser additionally accepts explicit "^1"
and out-of-order terms and normalizes them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np

from .intlinalg import as_int_matrix, shape


class SymbolError(ValueError):
    pass


class NonCyclotomicFactorError(SymbolError):
    """Characteristic polynomial has a non-cyclotomic factor (corrupt input)."""


class InvalidFrameSymbolError(SymbolError):
    """Exponents whose product (t^m - 1)^{n_m} is not a polynomial."""


class SymbolParseError(SymbolError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


@lru_cache(maxsize=None)
def totient(m: int) -> int:
    n, p, result = m, 2, m
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def _poly_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _poly_divmod(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    # coefficients ascending; b must be monic-ish with unit leading coeff
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    if db < 0 or lb == 0:
        raise ZeroDivisionError("division by zero polynomial")
    q = [0] * max(len(a) - db, 0)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c % lb != 0:
            return tuple(q), tuple(a)  # not divisible; caller checks remainder
        f = c // lb
        q[i - db] = f
        if f:
            for j in range(db + 1):
                a[i - db + j] -= f * b[j]
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return tuple(q), tuple(a)


def _is_zero_poly(p: tuple[int, ...]) -> bool:
    return all(c == 0 for c in p)


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Coefficients (ascending) of the m-th cyclotomic polynomial.

    Standard recursion: Phi_m = (t^m - 1) / prod_{d | m, d < m} Phi_d, with
    exact integer division throughout.
    """
    if m < 1:
        raise ValueError("m must be positive")
    p = tuple([-1] + [0] * (m - 1) + [1])  # t^m - 1
    for d in range(1, m):
        if m % d == 0:
            q, r = _poly_divmod(p, cyclotomic_poly(d))
            assert _is_zero_poly(r)
            p = q
    return p


def charpoly(matrix) -> tuple[int, ...]:
    """Exact characteristic polynomial det(tI - M), ascending coefficients.

    Faddeev-LeVerrier over Python integers; the k-th division is exact.
    """
    m = as_int_matrix(matrix)
    n, c = shape(m)
    if n != c:
        raise ValueError("characteristic polynomial of non-square matrix")
    if n == 0:
        return (1,)
    coeffs = [1]  # leading coefficient of t^n
    a = [row[:] for row in m]
    for k in range(1, n + 1):
        tr = sum(a[i][i] for i in range(n))
        assert tr % k == 0
        ck = -tr // k
        coeffs.append(ck)
        if k < n:
            for i in range(n):
                a[i][i] += ck
            a = [
                [sum(m[i][t] * a[t][j] for t in range(n)) for j in range(n)]
                for i in range(n)
            ]
    return tuple(reversed(coeffs))


@dataclass(frozen=True)
class CharSymbol:
    """Cyclotomic multiplicities of a characteristic polynomial.

    ``mult`` maps m -> c_m >= 1 as a sorted tuple of pairs.  The displayed
    exponent for m is c_m * phi(m).
    """

    mult: tuple[tuple[int, int], ...]

    def __post_init__(self):
        ms = [m for m, _ in self.mult]
        if ms != sorted(set(ms)):
            raise SymbolError("multiplicities must be sorted with distinct m")
        if any(m < 1 or c < 1 for m, c in self.mult):
            raise SymbolError("entries must have m >= 1 and c >= 1")

    @classmethod
    def from_dict(cls, d: dict[int, int]) -> "CharSymbol":
        return cls(tuple(sorted((m, c) for m, c in d.items() if c)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.mult)

    @property
    def degree(self) -> int:
        return sum(c * totient(m) for m, c in self.mult)

    @property
    def order(self) -> int:
        """Multiplicative order of an isometry with these eigenvalues."""
        n = 1
        for m, _ in self.mult:
            n = n * m // gcd(n, m)
        return n

    def displayed(self) -> tuple[tuple[int, int], ...]:
        return tuple((m, c * totient(m)) for m, c in self.mult)

    def multiplicity(self, m: int) -> int:
        return dict(self.mult).get(m, 0)

    def __str__(self) -> str:
        return format_terms(self.displayed())


@dataclass(frozen=True)
class FrameSymbol:
    """Exponents n_m of the factored form prod (t^m - 1)^{n_m}."""

    exps: tuple[tuple[int, int], ...]

    def __post_init__(self):
        ms = [m for m, _ in self.exps]
        if ms != sorted(set(ms)):
            raise SymbolError("exponents must be sorted with distinct m")
        if any(m < 1 or n == 0 for m, n in self.exps):
            raise SymbolError("entries must have m >= 1 and n != 0")
        # the product must expand to an honest polynomial
        for m, c in _expand_frame(self.exps):
            if c < 0:
                raise InvalidFrameSymbolError(
                    f"cyclotomic multiplicity of Phi_{m} is {c} < 0"
                )

    @classmethod
    def from_dict(cls, d: dict[int, int]) -> "FrameSymbol":
        return cls(tuple(sorted((m, n) for m, n in d.items() if n)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.exps)

    @property
    def degree(self) -> int:
        return sum(m * n for m, n in self.exps)

    def __str__(self) -> str:
        return format_terms(self.exps)


def format_terms(terms) -> str:
    parts = []
    for m, e in terms:
        parts.append(str(m) if e == 1 else f"{m}^{e}")
    return ".".join(parts)


def _parse_terms(s: str) -> list[tuple[int, int, int]]:
    """Parse the symbol grammar; returns (m, e, offset-of-term) triples."""
    if not s:
        raise SymbolParseError("empty symbol", 0)
    terms = []
    i, n = 0, len(s)
    while True:
        start = i
        j = i
        while j < n and s[j].isdigit():
            j += 1
        if j == i:
            raise SymbolParseError("expected a positive integer", i)
        m = int(s[i:j])
        if m < 1:
            raise SymbolParseError("base must be positive", i)
        i = j
        e = 1
        if i < n and s[i] == "^":
            i += 1
            estart = i
            if i < n and s[i] == "-":
                i += 1
            j = i
            while j < n and s[j].isdigit():
                j += 1
            if j == i:
                raise SymbolParseError("expected an exponent", estart)
            e = int(s[estart:j])
            if e == 0:
                raise SymbolParseError("exponent must be nonzero", estart)
            i = j
        terms.append((m, e, start))
        if i == n:
            break
        if s[i] != ".":
            raise SymbolParseError(f"unexpected character {s[i]!r}", i)
        i += 1
        if i == n:
            raise SymbolParseError("trailing separator", i - 1)
    seen = {}
    for m, _, off in terms:
        if m in seen:
            raise SymbolParseError(f"duplicate base {m}", off)
        seen[m] = off
    return terms


def parse_frame_symbol(s: str) -> FrameSymbol:
    terms = _parse_terms(s)
    return FrameSymbol(tuple(sorted((m, e) for m, e, _ in terms)))


def parse_char_symbol(s: str) -> CharSymbol:
    """Parse displayed exponents n_m = c_m * phi(m) back to multiplicities."""
    terms = _parse_terms(s)
    mult = []
    for m, e, off in terms:
        if e < 1:
            raise SymbolParseError("characteristic exponents must be positive", off)
        phi = totient(m)
        if e % phi != 0:
            raise SymbolParseError(
                f"exponent {e} for base {m} is not a multiple of phi({m}) = {phi}", off
            )
        mult.append((m, e // phi))
    return CharSymbol(tuple(sorted(mult)))


def char_symbol(g) -> CharSymbol:
    """Cyclotomic factorization of det(tI - g) for a finite-order isometry."""
    mat = getattr(g, "matrix", g)
    p = charpoly(np.asarray(mat))
    deg = len(p) - 1
    mult: dict[int, int] = {}
    # phi(m) <= deg forces m <= 2*deg^2 + 2 (crude but safe: phi(m) >= sqrt(m/2))
    for m in range(1, 2 * deg * deg + 3):
        if len(p) == 1:
            break
        if totient(m) > deg:
            continue
        phi = cyclotomic_poly(m)
        while len(p) >= len(phi):
            q, r = _poly_divmod(p, phi)
            if not _is_zero_poly(r):
                break
            mult[m] = mult.get(m, 0) + 1
            p = q
    if p != (1,):
        raise NonCyclotomicFactorError(
            "characteristic polynomial is not a product of cyclotomics; "
            "the input is not a finite-order isometry"
        )
    return CharSymbol.from_dict(mult)


def _divisor_closure(support) -> list[int]:
    out = set()
    for m in support:
        for d in range(1, m + 1):
            if m % d == 0:
                out.add(d)
    return sorted(out)


def _expand_frame(exps) -> list[tuple[int, int]]:
    """Cyclotomic multiplicities of prod (t^m - 1)^{n_m}: c_d = sum_{d | m} n_m."""
    support = [m for m, _ in exps]
    as_map = dict(exps)
    out = []
    for d in _divisor_closure(support):
        c = sum(n for m, n in as_map.items() if m % d == 0)
        out.append((d, c))
    return out


def char_from_frame(f: FrameSymbol) -> CharSymbol:
    return CharSymbol(tuple((m, c) for m, c in _expand_frame(f.exps) if c))


def frame_from_char(c: CharSymbol) -> FrameSymbol:
    """The unique Frame exponents with the same expansion.

    Over the divisor closure D of the support, computed descending:
    n_m = c_m - sum over proper multiples m' of m inside D of n_{m'}.
    """
    cmap = c.as_dict()
    closure = _divisor_closure(cmap.keys())
    n: dict[int, int] = {}
    for m in reversed(closure):
        n[m] = cmap.get(m, 0) - sum(v for mm, v in n.items() if mm > m and mm % m == 0)
    f = FrameSymbol.from_dict({m: v for m, v in n.items() if v})
    assert char_from_frame(f) == c, "frame/char round trip failed"
    return f


def power_frame(f: FrameSymbol, r: int) -> FrameSymbol:
    """Frame symbol of the r-th power.

    Each factor (t^m - 1)^n becomes (t^w - 1)^(u*n) with u = gcd(r, m) and
    w = m/u; factors with equal new base are combined and zero exponents
    dropped.
    """
    if r < 1:
        raise ValueError("power must be positive")
    out: dict[int, int] = {}
    for m, n in f.exps:
        u = gcd(r, m)
        w = m // u
        out[w] = out.get(w, 0) + u * n
    return FrameSymbol.from_dict({m: n for m, n in out.items() if n})


def power_char(c: CharSymbol, r: int) -> CharSymbol:
    """Characteristic symbol of the r-th power.

    A primitive m-th root maps to a primitive (m / gcd(r, m))-th root; the
    c_m * phi(m) eigenvalues at level m spread evenly over the phi(m') target
    roots.
    """
    if r < 1:
        raise ValueError("power must be positive")
    out: dict[int, int] = {}
    for m, cm in c.mult:
        m2 = m // gcd(r, m)
        out[m2] = out.get(m2, 0) + cm * (totient(m) // totient(m2))
    return CharSymbol.from_dict(out)
