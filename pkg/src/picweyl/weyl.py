"""Weyl groups acting on Picard lattices: generation, classes, conjugacy.

Elements are handled as permutations of the root list (the action on roots
is faithful); matrices are recovered on demand by solving on a simple system
plus the canonical class.  Exhaustive enumeration is a breadth-first walk of
the Cayley graph on simple reflections, levelled by Coxeter length so that
each level only needs deduplication against the previous one.  Conjugacy
classes are then exact orbits under conjugation by the generators, with the
class equation sum(|class|) = |W| as the completeness certificate.

Degree 1 (W(E8), order ~7*10^8) is out of desk-scale budget for exhaustive
work; random mode draws short products of root reflections (every element is
a product of at most rank-many reflections), closes under powers, and
fingerprints what it finds.  Completeness is not claimed there: results are
marked heuristic and coverage is reported, never assumed.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from pathlib import Path

import numpy as np
import sympy

from . import lattice as lat
from . import minimality
from .cohomology import divisors, first_nonvanishing_power, h1_tower
from .intlinalg import AbelianInvariants
from .symbols import CharSymbol, FrameSymbol, char_symbol, frame_from_char, parse_char_symbol, parse_frame_symbol


class WeylError(Exception):
    pass


class NotARootError(WeylError):
    pass


class NotAnIsometryError(WeylError):
    pass


class BudgetExhaustedError(WeylError):
    """Random search hit max_draws before the stabilization criterion fired."""


class ConjugacyUndecidedError(WeylError):
    """Backtracking conjugacy search exceeded its node budget."""


# ---------------------------------------------------------------------------
# lattice automorphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeAut:
    """An integer isometry of the Picard lattice fixing the canonical class."""

    degree: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.int64)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        L = lat.build(self.degree)
        if m.shape != (L.rank, L.rank):
            raise NotAnIsometryError(f"expected a {L.rank}x{L.rank} matrix")
        if not np.array_equal(m.T @ L.gram @ m, L.gram):
            raise NotAnIsometryError("matrix does not preserve the intersection form")
        if not np.array_equal(m @ L.canonical, L.canonical):
            raise NotAnIsometryError("matrix does not fix the canonical class")

    def compose(self, other: "LatticeAut") -> "LatticeAut":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return LatticeAut(self.degree, self.matrix @ other.matrix)

    def inverse(self) -> "LatticeAut":
        # exact inverse of an isometry: g^-1 = G^-1 g^T G with G = diag(+-1)
        g = lat.build(self.degree).gram
        return LatticeAut(self.degree, g @ self.matrix.T @ g)

    def power(self, r: int) -> "LatticeAut":
        return LatticeAut(self.degree, np.linalg.matrix_power(self.matrix, r))

    def __eq__(self, other):
        return (
            isinstance(other, LatticeAut)
            and self.degree == other.degree
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self):
        return hash((self.degree, self.matrix.tobytes()))


def identity_aut(degree: int) -> LatticeAut:
    return LatticeAut(degree, np.eye(10 - degree, dtype=np.int64))


def reflection(lattice: lat.PicardLattice, alpha) -> LatticeAut:
    """Reflection s_a(x) = x + (x.a) a in a root a (valid since a.a = -2)."""
    alpha = np.asarray(alpha, dtype=np.int64)
    if lattice.inner(alpha, alpha) != -2 or lattice.inner(alpha, lattice.canonical) != 0:
        raise NotARootError("reflections require a.a = -2 and a.K = 0")
    m = np.eye(lattice.rank, dtype=np.int64) + np.outer(alpha, lattice.gram @ alpha)
    return LatticeAut(lattice.degree, m)


def element_order(g: LatticeAut) -> int:
    """Least n >= 1 with g^n = 1 (finite: the K-complement is definite)."""
    ident = np.eye(g.matrix.shape[0], dtype=np.int64)
    p = np.array(g.matrix)
    for n in range(1, 10000):
        if np.array_equal(p, ident):
            return n
        p = p @ g.matrix
    raise WeylError("order not found below cap; corrupted input?")


# ---------------------------------------------------------------------------
# per-degree permutation context
# ---------------------------------------------------------------------------

_CODE_RADIX = 64
_CODE_OFFSET = 32


def _encode_vectors(vecs: np.ndarray) -> np.ndarray:
    """Pack small integer vectors into int64 codes for sorted lookup."""
    v = np.asarray(vecs, dtype=np.int64) + _CODE_OFFSET
    if v.min() < 0 or v.max() >= _CODE_RADIX:
        raise ValueError("vector entries out of packing range")
    radix = _CODE_RADIX ** np.arange(v.shape[-1], dtype=np.int64)
    return v @ radix


class _RootContext:
    """Cached per-degree machinery for the faithful action on roots."""

    def __init__(self, degree: int):
        self.degree = degree
        self.lattice = lat.build(degree)
        self.roots = lat.roots(self.lattice)
        self.lines = lat.minus_one_classes(self.lattice)
        self.nroots = len(self.roots)
        simples = lat.simple_roots(self.lattice)
        self.nsimple = len(simples)
        self.simples = simples

        codes = _encode_vectors(self.roots)
        self._root_order = np.argsort(codes)
        self._root_codes_sorted = codes[self._root_order]
        lcodes = _encode_vectors(self.lines)
        self._line_order = np.argsort(lcodes)
        self._line_codes_sorted = lcodes[self._line_order]

        self.simple_idx = self._root_lookup(simples)

        # root coordinates over the simple system (exact; rows of one sign)
        G = self.lattice.gram
        A = sympy.Matrix((simples @ G @ simples.T).tolist())
        rhs = sympy.Matrix((self.roots @ G @ simples.T).tolist())
        coef = rhs * A.inv()
        self.simple_coords = np.array([[int(x) for x in row] for row in coef.tolist()], dtype=np.int64)
        signs_ok = np.all(self.simple_coords >= 0, axis=1) | np.all(self.simple_coords <= 0, axis=1)
        assert signs_ok.all(), "chosen simple system is not simple"

        # basis (simple roots, K) used to rebuild matrices from root images
        basis_cols = np.column_stack([simples.T, self.lattice.canonical])
        B = sympy.Matrix(basis_cols.tolist())
        Binv = B.inv()
        den = sympy.ilcm(*[sympy.fraction(x)[1] for x in Binv])
        self._basis_inv_num = np.array(
            [[int(x * den) for x in row] for row in Binv.tolist()], dtype=np.int64
        )
        self._basis_inv_den = int(den)

        self.simple_refl_perms = np.stack(
            [self.perm_from_matrix(reflection(self.lattice, a).matrix) for a in simples]
        )
        self._key_radix = (self.nroots ** np.arange(self.nsimple)).astype(np.uint64)

    # -- lookups ----------------------------------------------------------

    def _root_lookup(self, vecs: np.ndarray) -> np.ndarray:
        codes = _encode_vectors(vecs)
        pos = np.searchsorted(self._root_codes_sorted, codes)
        if pos.max(initial=0) >= self.nroots or not np.array_equal(
            self._root_codes_sorted[pos], codes
        ):
            raise ValueError("vector is not a root")
        return self._root_order[pos]

    def _line_lookup(self, vecs: np.ndarray) -> np.ndarray:
        codes = _encode_vectors(vecs)
        pos = np.searchsorted(self._line_codes_sorted, codes)
        if pos.max(initial=0) >= len(self.lines) or not np.array_equal(
            self._line_codes_sorted[pos], codes
        ):
            raise ValueError("vector is not an exceptional class")
        return self._line_order[pos]

    # -- conversions -------------------------------------------------------

    def perm_from_matrix(self, matrix: np.ndarray) -> np.ndarray:
        images = self.roots @ np.asarray(matrix, dtype=np.int64).T
        return self._root_lookup(images).astype(np.int16)

    def line_perm_from_matrix(self, matrix: np.ndarray) -> np.ndarray:
        images = self.lines @ np.asarray(matrix, dtype=np.int64).T
        return self._line_lookup(images)

    def pack_keys(self, perms: np.ndarray) -> np.ndarray:
        cols = perms[..., self.simple_idx].astype(np.uint64)
        return cols @ self._key_radix

    def matrices_from_keys(self, keys: np.ndarray) -> np.ndarray:
        """Batch-reconstruct matrices from packed simple-root images."""
        keys = np.asarray(keys, dtype=np.uint64)
        imgs = np.empty((len(keys), self.nsimple), dtype=np.int64)
        rem = keys.copy()
        for j in range(self.nsimple):
            imgs[:, j] = (rem % np.uint64(self.nroots)).astype(np.int64)
            rem //= np.uint64(self.nroots)
        img_coords = self.roots[imgs]  # (B, nsimple, rank)
        k = np.broadcast_to(
            self.lattice.canonical, (len(keys), 1, self.lattice.rank)
        )
        img_cols = np.concatenate([img_coords.transpose(0, 2, 1), k.transpose(0, 2, 1)], axis=2)
        num = img_cols @ self._basis_inv_num
        mats, rem2 = np.divmod(num, self._basis_inv_den)
        assert not rem2.any(), "non-integral matrix from root images"
        return mats

    def perms_from_keys(self, keys: np.ndarray) -> np.ndarray:
        """Batch-reconstruct full root permutations from packed keys."""
        keys = np.asarray(keys, dtype=np.uint64)
        imgs = np.empty((len(keys), self.nsimple), dtype=np.int64)
        rem = keys.copy()
        for j in range(self.nsimple):
            imgs[:, j] = (rem % np.uint64(self.nroots)).astype(np.int64)
            rem //= np.uint64(self.nroots)
        img_coords = self.roots[imgs]  # (B, nsimple, rank)
        # image of every root, by linearity over the simple coordinates
        all_imgs = np.einsum("ns,bsr->bnr", self.simple_coords, img_coords)
        codes = _encode_vectors(all_imgs.reshape(-1, self.lattice.rank))
        pos = np.searchsorted(self._root_codes_sorted, codes)
        assert np.array_equal(self._root_codes_sorted[pos], codes), "image is not a root"
        return self._root_order[pos].reshape(len(keys), self.nroots).astype(np.int16)

    def all_reflection_perms(self) -> np.ndarray:
        out = np.empty((self.nroots, self.nroots), dtype=np.int16)
        G = self.lattice.gram
        for i, alpha in enumerate(self.roots):
            images = self.roots + np.outer(self.roots @ (G @ alpha), alpha)
            out[i] = self._root_lookup(images)
        return out


@lru_cache(maxsize=None)
def _context(degree: int) -> _RootContext:
    return _RootContext(degree)


# ---------------------------------------------------------------------------
# class records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassRecord:
    """Everything the harness needs about one conjugacy class."""

    class_id: str
    degree: int
    order: int
    char_symbol: CharSymbol
    frame_symbol: FrameSymbol
    h1_tower: dict[int, AbelianInvariants]
    index: int
    minimal: bool
    invariant_rank: int
    class_size: int | None
    representative: LatticeAut
    root_cycle_type: tuple[tuple[int, int], ...]
    line_cycle_type: tuple[tuple[int, int], ...]

    @property
    def h1(self) -> AbelianInvariants:
        return self.h1_tower[1]

    @property
    def first_nonvanishing(self) -> int | None:
        return first_nonvanishing_power(None, tower=self.h1_tower)

    def sort_key(self):
        return (
            self.order,
            str(self.char_symbol),
            str(self.frame_symbol),
            self.root_cycle_type,
            self.line_cycle_type,
            self.class_size or 0,
        )


@dataclass(frozen=True)
class ClassInventory:
    """Result of a class enumeration; sequence of ClassRecord."""

    degree: int
    mode: str
    records: tuple[ClassRecord, ...]
    group_order: int | None
    heuristic: bool
    seed: int | None = None
    draws: int | None = None
    findings: tuple[str, ...] = ()

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    def by_id(self, class_id: str) -> ClassRecord:
        for r in self.records:
            if r.class_id == class_id:
                return r
        raise KeyError(class_id)

    def minimal_records(self) -> list[ClassRecord]:
        return [r for r in self.records if r.minimal]


def _cycle_type(perm: np.ndarray) -> tuple[tuple[int, int], ...]:
    n = len(perm)
    seen = np.zeros(n, dtype=bool)
    counts: dict[int, int] = {}
    for i in range(n):
        if seen[i]:
            continue
        length = 1
        seen[i] = True
        j = int(perm[i])
        while j != i:
            seen[j] = True
            length += 1
            j = int(perm[j])
        counts[length] = counts.get(length, 0) + 1
    return tuple(sorted(counts.items()))


def _perm_order(cycle_type) -> int:
    n = 1
    for length, _ in cycle_type:
        n = n * length // gcd(n, length)
    return n


def _build_record(ctx: _RootContext, matrix: np.ndarray, class_size: int | None) -> ClassRecord:
    g = LatticeAut(ctx.degree, matrix)
    perm = ctx.perm_from_matrix(matrix)
    root_ct = _cycle_type(perm)
    line_ct = _cycle_type(ctx.line_perm_from_matrix(matrix))
    # the action on roots is faithful, so the permutation order is the order
    order = _perm_order(root_ct)
    cs = char_symbol(matrix)
    tower = h1_tower(matrix)
    idx = minimality.index(g)
    return ClassRecord(
        class_id="",
        degree=ctx.degree,
        order=order,
        char_symbol=cs,
        frame_symbol=frame_from_char(cs),
        h1_tower=tower,
        index=idx,
        minimal=(idx == 0),
        invariant_rank=cs.multiplicity(1),
        class_size=class_size,
        representative=g,
        root_cycle_type=root_ct,
        line_cycle_type=line_ct,
    )


def _finalize_records(records: list[ClassRecord], degree: int) -> tuple[ClassRecord, ...]:
    records.sort(key=lambda r: r.sort_key())
    out = []
    for i, r in enumerate(records, start=1):
        out.append(
            ClassRecord(
                class_id=f"d{degree}-c{i:02d}",
                degree=r.degree,
                order=r.order,
                char_symbol=r.char_symbol,
                frame_symbol=r.frame_symbol,
                h1_tower=r.h1_tower,
                index=r.index,
                minimal=r.minimal,
                invariant_rank=r.invariant_rank,
                class_size=r.class_size,
                representative=r.representative,
                root_cycle_type=r.root_cycle_type,
                line_cycle_type=r.line_cycle_type,
            )
        )
    return tuple(out)


# ---------------------------------------------------------------------------
# exhaustive enumeration (degrees 2..4)
# ---------------------------------------------------------------------------


def _bfs_all_keys(ctx: _RootContext, generator_order: tuple[int, ...]) -> np.ndarray:
    """All element keys by breadth-first search over the Cayley graph.

    Levels are the Coxeter-length shells: multiplying by a simple reflection
    changes length by exactly one, so a candidate either falls back into the
    previous shell or is new.  Deduplication therefore only ever looks one
    level back.
    """
    gens = ctx.simple_refl_perms[list(generator_order)]
    gen_key_cols = gens[:, ctx.simple_idx]

    ident = np.arange(ctx.nroots, dtype=np.int16)[None, :]
    frontier = ident
    frontier_keys = ctx.pack_keys(frontier)
    prev_keys = np.array([], dtype=np.uint64)
    all_keys = [frontier_keys.copy()]

    while len(frontier):
        cand_keys = []
        for gi in range(len(gens)):
            # keys of w*s read off w at the s-images of the simple roots
            cand_keys.append(
                (frontier[:, gen_key_cols[gi]].astype(np.uint64) @ ctx._key_radix)
            )
        cand_keys = np.concatenate(cand_keys)
        uniq, first_pos = np.unique(cand_keys, return_index=True)
        if len(prev_keys):
            pos = np.minimum(np.searchsorted(prev_keys, uniq), len(prev_keys) - 1)
            fresh = prev_keys[pos] != uniq
        else:
            fresh = np.ones(len(uniq), dtype=bool)
        new_keys = uniq[fresh]
        if not len(new_keys):
            break
        src = first_pos[fresh]
        gen_ids, row_ids = np.divmod(src, len(frontier))
        new_frontier = np.empty((len(new_keys), ctx.nroots), dtype=np.int16)
        for gi in range(len(gens)):
            mask = gen_ids == gi
            if mask.any():
                new_frontier[mask] = frontier[row_ids[mask]][:, gens[gi]]
        assert np.array_equal(ctx.pack_keys(new_frontier), new_keys)
        prev_keys = np.sort(frontier_keys)
        frontier = new_frontier
        frontier_keys = new_keys
        all_keys.append(new_keys.copy())

    keys = np.concatenate(all_keys)
    keys.sort()
    assert len(np.unique(keys)) == len(keys), "BFS produced duplicate elements"
    return keys


def _partition_classes(ctx: _RootContext, all_keys: np.ndarray) -> list[tuple[np.ndarray, int]]:
    """Partition all elements into conjugation orbits under the generators.

    Returns (representative matrix, class size) pairs; the class equation
    is certified by the caller.
    """
    gens = ctx.simple_refl_perms
    assigned = np.zeros(len(all_keys), dtype=bool)
    out = []
    ptr = 0
    while ptr < len(all_keys):
        if assigned[ptr]:
            ptr += 1
            continue
        rep_key = all_keys[ptr : ptr + 1]
        members = rep_key.copy()
        frontier_keys = rep_key
        frontier = ctx.perms_from_keys(frontier_keys)
        while len(frontier):
            cand = []
            for s in gens:
                cand.append(ctx.pack_keys(s[frontier[:, s]]))
            cand = np.unique(np.concatenate(cand))
            pos = np.minimum(np.searchsorted(members, cand), len(members) - 1)
            new = cand[members[pos] != cand]
            if not len(new):
                break
            members = np.union1d(members, new)
            frontier = ctx.perms_from_keys(new)
        pos = np.searchsorted(all_keys, members)
        assert np.array_equal(all_keys[pos], members), "class left the enumerated group"
        assigned[pos] = True
        rep_matrix = ctx.matrices_from_keys(rep_key)[0]
        out.append((rep_matrix, len(members)))
    assert assigned.all()
    return out


# ---------------------------------------------------------------------------
# random-mode enumeration (degree 1 default)
# ---------------------------------------------------------------------------


@dataclass
class SearchBudget:
    """Limits for class enumeration.

    mode "exhaustive" walks the whole group (degrees 2..4).  mode "random"
    draws products of random root reflections and stops once ``stabilization``
    consecutive draws yield no new fingerprint; ``max_draws`` bounds the total
    before BudgetExhaustedError.  ``confirm_repeats`` same-fingerprint
    elements per class are re-checked by the backtracking conjugacy test;
    pairs the test cannot settle within ``conjugacy_nodes`` nodes are kept
    separate and reported, never merged.
    """

    mode: str = "exhaustive"
    seed: int = 0
    stabilization: int = 50_000
    max_draws: int = 2_000_000
    max_word: int = 10
    confirm_repeats: int = 2
    conjugacy_nodes: int = 300_000

    def cache_token(self) -> str:
        if self.mode == "exhaustive":
            return "exhaustive"
        return (
            f"random-s{self.seed}-n{self.stabilization}-m{self.max_draws}"
            f"-w{self.max_word}-c{self.confirm_repeats}"
        )


def default_budget(degree: int) -> SearchBudget:
    return SearchBudget(mode="random" if degree == 1 else "exhaustive")


def _fingerprint(ctx, matrix, perm):
    root_ct = _cycle_type(perm)
    line_ct = _cycle_type(ctx.line_perm_from_matrix(matrix))
    cp = char_symbol(matrix)
    return (_perm_order(root_ct), str(cp), root_ct, line_ct)


def _perm_power(perm: np.ndarray, r: int) -> np.ndarray:
    out = np.arange(len(perm), dtype=perm.dtype)
    base = perm
    while r:
        if r & 1:
            out = out[base]
        base = base[base]
        r >>= 1
    return out


def _random_classes(ctx: _RootContext, budget: SearchBudget):
    rng = np.random.default_rng(budget.seed)
    refl = ctx.all_reflection_perms()
    nroots = ctx.nroots

    seen_elements: set[int] = set()
    classes: dict[tuple, list[dict]] = {}
    findings: list[str] = []
    draws = 0
    quiet = 0

    def matrix_of_perm(perm):
        key = ctx.pack_keys(perm[None, :])
        return ctx.matrices_from_keys(key)[0]

    def consider(perm: np.ndarray) -> bool:
        """Returns True when the element produced a new class."""
        key = int(ctx.pack_keys(perm[None, :])[0])
        if key in seen_elements:
            return False
        seen_elements.add(key)
        matrix = matrix_of_perm(perm)
        fp = _fingerprint(ctx, matrix, perm)
        bucket = classes.get(fp)
        if bucket is None:
            classes[fp] = [dict(matrix=matrix, perm=perm, confirmed=0)]
            close_under_powers(perm, fp)
            return True
        # Same fingerprint.  While any representative still wants
        # confirmation, re-check conjugacy; a provably non-conjugate element
        # becomes a new class under the same fingerprint, and an undecided
        # pair is kept separate and reported rather than merged.
        if all(e["confirmed"] >= budget.confirm_repeats for e in bucket):
            return False
        undecided = False
        for entry in bucket:
            try:
                same = are_conjugate(
                    LatticeAut(ctx.degree, entry["matrix"]),
                    LatticeAut(ctx.degree, matrix),
                    node_budget=budget.conjugacy_nodes,
                )
            except ConjugacyUndecidedError:
                findings.append(
                    f"UNRESOLVED: fingerprint {fp[:2]} pair exceeded the conjugacy "
                    "node budget; keeping both representatives"
                )
                undecided = True
                continue
            if same:
                entry["confirmed"] += 1
                return False
        classes[fp].append(dict(matrix=matrix, perm=perm, confirmed=0))
        if not undecided:
            findings.append(
                f"fingerprint collision resolved as distinct classes: {fp[:2]}"
            )
        close_under_powers(perm, fp)
        return True

    def close_under_powers(perm: np.ndarray, fp) -> None:
        order = fp[0] if isinstance(fp, tuple) else _perm_order(_cycle_type(perm))
        for r in divisors(order):
            if r in (1,):
                continue
            consider(_perm_power(perm, r))

    # deterministic seeds: identity, a reflection, the Coxeter element, and
    # the fixed-K involution acting as -1 on the K-complement when integral
    consider(np.arange(nroots, dtype=np.int16))
    consider(refl[0].astype(np.int16))
    cox = np.arange(nroots, dtype=np.int16)
    for s in ctx.simple_refl_perms:
        cox = cox[s]
    consider(cox)
    L = ctx.lattice
    kk = int(L.canonical @ L.gram @ L.canonical)
    num = 2 * np.outer(L.canonical, L.gram @ L.canonical) - kk * np.eye(L.rank, dtype=np.int64)
    if kk != 0 and not (num % kk).any():
        m = num // kk
        if np.array_equal(m.T @ L.gram @ m, L.gram):
            consider(ctx.perm_from_matrix(m))

    batch = 2048
    while True:
        lengths = rng.integers(1, budget.max_word + 1, size=batch)
        words = rng.integers(0, nroots, size=(batch, budget.max_word))
        perms = refl[words[:, 0]].astype(np.int16)
        for j in range(1, budget.max_word):
            active = lengths > j
            if not active.any():
                break
            perms[active] = np.take_along_axis(
                perms[active], refl[words[active, j]].astype(np.int16), axis=1
            )
        for i in range(batch):
            draws += 1
            if consider(perms[i]):
                quiet = 0
            else:
                quiet += 1
            if quiet >= budget.stabilization:
                reps = [e["matrix"] for bucket in classes.values() for e in bucket]
                return reps, draws, findings
            if draws >= budget.max_draws:
                raise BudgetExhaustedError(
                    f"no stabilization after {draws} draws "
                    f"({len(classes)} fingerprints found)"
                )


# ---------------------------------------------------------------------------
# public enumeration API with on-disk cache
# ---------------------------------------------------------------------------


def _code_hash() -> str:
    import picweyl

    root = Path(picweyl.__file__).parent
    h = hashlib.sha256()
    for name in ("intlinalg.py", "lattice.py", "symbols.py", "cohomology.py", "minimality.py", "weyl.py"):
        h.update((root / name).read_bytes())
    return h.hexdigest()[:12]


def default_cache_dir() -> Path:
    env = os.environ.get("PICWEYL_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "picweyl"


def _record_worker(degree: int, matrix_list: list, class_size: int | None) -> ClassRecord:
    ctx = _context(degree)
    return _build_record(ctx, np.array(matrix_list, dtype=np.int64), class_size)


def _build_records(ctx, pairs, jobs: int | None) -> list[ClassRecord]:
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs <= 1 or len(pairs) < 4:
        return [_build_record(ctx, m, size) for m, size in pairs]
    # per-class work is independent; the canonical sort makes the merge
    # deterministic regardless of completion order
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [
            pool.submit(_record_worker, ctx.degree, m.tolist(), size) for m, size in pairs
        ]
        return [f.result() for f in futures]


def enumerate_classes(
    degree: int,
    budget: SearchBudget | None = None,
    *,
    generator_order: tuple[int, ...] | None = None,
    cache_dir: str | Path | None = None,
    use_cache: bool = True,
    jobs: int | None = 1,
) -> ClassInventory:
    """One ClassRecord per conjugacy class of the Weyl group of the degree.

    Exhaustive mode (degrees 2..4) returns exact class sizes and certifies
    completeness through the class equation.  Random mode returns the classes
    found before stabilization and marks the inventory heuristic.
    """
    if degree not in (1, 2, 3, 4):
        raise lat.BadDegreeError("class enumeration covers degrees 1..4")
    if budget is None:
        budget = default_budget(degree)
    if budget.mode not in ("exhaustive", "random"):
        raise ValueError(f"unknown mode {budget.mode!r}")
    if budget.mode == "exhaustive" and degree == 1:
        raise WeylError(
            "exhaustive enumeration of W(E8) (~7e8 elements) is out of budget; "
            "use random mode for degree 1"
        )
    ctx = _context(degree)
    if generator_order is None:
        generator_order = tuple(range(ctx.nsimple))

    cache_path = None
    if use_cache:
        base = Path(cache_dir) if cache_dir is not None else default_cache_dir()
        key = f"classes-d{degree}-{budget.cache_token()}-g{''.join(map(str, generator_order))}-{_code_hash()}"
        cache_path = base / f"{key}.json"
        if cache_path.exists():
            return _load_inventory(cache_path)

    if budget.mode == "exhaustive":
        keys = _bfs_all_keys(ctx, generator_order)
        group_order = len(keys)
        pairs = _partition_classes(ctx, keys)
        assert sum(size for _, size in pairs) == group_order, "class equation failed"
        records = _build_records(ctx, pairs, jobs)
        inventory = ClassInventory(
            degree=degree,
            mode="exhaustive",
            records=_finalize_records(records, degree),
            group_order=group_order,
            heuristic=False,
        )
    else:
        reps, draws, findings = _random_classes(ctx, budget)
        records = _build_records(ctx, [(m, None) for m in reps], jobs)
        inventory = ClassInventory(
            degree=degree,
            mode="random",
            records=_finalize_records(records, degree),
            group_order=None,
            heuristic=True,
            seed=budget.seed,
            draws=draws,
            findings=tuple(findings),
        )

    if cache_path is not None:
        _save_inventory(inventory, cache_path)
    return inventory


def _save_inventory(inv: ClassInventory, path: Path) -> None:
    payload = {
        "schema": "class-inventory/1",
        "degree": inv.degree,
        "mode": inv.mode,
        "group_order": inv.group_order,
        "heuristic": inv.heuristic,
        "seed": inv.seed,
        "draws": inv.draws,
        "findings": list(inv.findings),
        "records": [
            {
                "class_id": r.class_id,
                "order": r.order,
                "char_symbol": str(r.char_symbol),
                "frame_symbol": str(r.frame_symbol),
                "h1_tower": {str(k): list(v.factors) for k, v in r.h1_tower.items()},
                "index": r.index,
                "minimal": r.minimal,
                "invariant_rank": r.invariant_rank,
                "class_size": r.class_size,
                "matrix": r.representative.matrix.tolist(),
                "root_cycle_type": [list(p) for p in r.root_cycle_type],
                "line_cycle_type": [list(p) for p in r.line_cycle_type],
            }
            for r in inv.records
        ],
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        json.dump(payload, fh, sort_keys=True)
    os.replace(tmp, path)


def _load_inventory(path: Path) -> ClassInventory:
    payload = json.loads(Path(path).read_text())
    if payload.get("schema") != "class-inventory/1":
        raise WeylError(f"unknown cache schema in {path}")
    records = []
    for r in payload["records"]:
        records.append(
            ClassRecord(
                class_id=r["class_id"],
                degree=payload["degree"],
                order=r["order"],
                char_symbol=parse_char_symbol(r["char_symbol"]),
                frame_symbol=parse_frame_symbol(r["frame_symbol"]),
                h1_tower={int(k): AbelianInvariants(tuple(v)) for k, v in r["h1_tower"].items()},
                index=r["index"],
                minimal=r["minimal"],
                invariant_rank=r["invariant_rank"],
                class_size=r["class_size"],
                representative=LatticeAut(payload["degree"], np.array(r["matrix"], dtype=np.int64)),
                root_cycle_type=tuple(tuple(p) for p in r["root_cycle_type"]),
                line_cycle_type=tuple(tuple(p) for p in r["line_cycle_type"]),
            )
        )
    return ClassInventory(
        degree=payload["degree"],
        mode=payload["mode"],
        records=tuple(records),
        group_order=payload["group_order"],
        heuristic=payload["heuristic"],
        seed=payload.get("seed"),
        draws=payload.get("draws"),
        findings=tuple(payload.get("findings", ())),
    )


# ---------------------------------------------------------------------------
# conjugacy test
# ---------------------------------------------------------------------------


def are_conjugate(g: LatticeAut, h: LatticeAut, *, node_budget: int = 300_000) -> bool:
    """Decide whether some w in the Weyl group satisfies w g w^-1 = h.

    Fast class-function filters first (characteristic polynomial, cycle types
    on roots and on exceptional classes); on agreement, a backtracking search
    builds w on the simple roots, propagating the conjugation constraint
    w(g.x) = h.w(x) along g-orbits and checking inner products, integrality
    and the K-fix at the end.  For degrees 1..7 every such isometry lies in
    the Weyl group (the configuration has no extra symmetries), so a hit
    proves conjugacy.  Exceeding the node budget raises
    ConjugacyUndecidedError; callers must treat that pair as unresolved.
    """
    if g.degree != h.degree:
        raise ValueError("degree mismatch")
    ctx = _context(g.degree)
    if char_symbol(g.matrix) != char_symbol(h.matrix):
        return False
    pg = ctx.perm_from_matrix(g.matrix)
    ph = ctx.perm_from_matrix(h.matrix)
    if _cycle_type(pg) != _cycle_type(ph):
        return False
    if _cycle_type(ctx.line_perm_from_matrix(g.matrix)) != _cycle_type(
        ctx.line_perm_from_matrix(h.matrix)
    ):
        return False

    n = ctx.nroots
    gram = (ctx.roots @ ctx.lattice.gram @ ctx.roots.T).astype(np.int8)
    g_orbit_len = np.empty(n, dtype=np.int64)
    for cyc in minimality._cycles(pg):
        for i in cyc:
            g_orbit_len[i] = len(cyc)
    h_orbit_len = np.empty(n, dtype=np.int64)
    for cyc in minimality._cycles(ph):
        for i in cyc:
            h_orbit_len[i] = len(cyc)

    simple_idx = [int(i) for i in ctx.simple_idx]
    nodes = 0

    def search(assignment: dict[int, int], pos: int) -> bool:
        nonlocal nodes
        if pos == len(simple_idx):
            return _verify_conjugator(ctx, assignment, simple_idx, g, h)
        alpha = simple_idx[pos]
        if alpha in assignment:
            return search(assignment, pos + 1)
        for beta in range(n):
            nodes += 1
            if nodes > node_budget:
                raise ConjugacyUndecidedError(
                    f"conjugacy search exceeded {node_budget} nodes"
                )
            if g_orbit_len[alpha] != h_orbit_len[beta]:
                continue
            # force the whole g-orbit of alpha: w(g^k alpha) = h^k beta,
            # checking inner products against everything already assigned
            trial = dict(assignment)
            conflict = False
            a, b = alpha, beta
            while True:
                existing = trial.get(a)
                if existing is not None:
                    if existing != b:
                        conflict = True
                    break
                for src, dst in trial.items():
                    if gram[a, src] != gram[b, dst]:
                        conflict = True
                        break
                if conflict:
                    break
                trial[a] = b
                a, b = int(pg[a]), int(ph[b])
                if a == alpha:
                    break  # orbit closed; lengths already match
            if conflict:
                continue
            if search(trial, pos + 1):
                return True
        return False

    return search({}, 0)


def _verify_conjugator(ctx, assignment, simple_idx, g, h) -> bool:
    imgs = np.array([assignment[i] for i in simple_idx], dtype=np.int64)
    img_coords = ctx.roots[imgs]
    basis_cols = np.column_stack([img_coords.T, ctx.lattice.canonical])
    num = basis_cols @ ctx._basis_inv_num
    w, rem = np.divmod(num, ctx._basis_inv_den)
    if rem.any():
        return False
    L = ctx.lattice
    if not np.array_equal(w.T @ L.gram @ w, L.gram):
        return False
    if not np.array_equal(w @ L.canonical, L.canonical):
        return False
    return np.array_equal(w @ g.matrix, h.matrix @ w)
