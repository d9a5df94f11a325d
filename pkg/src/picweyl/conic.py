"""Residue combinatorics of relatively minimal conic bundles.

A bundle over the projective line is modeled by its closed points of bad
reduction: each carries a degree and the norm (corestriction down to the
base field) of its quadratic residue class, encoded as a vector in F_2^t
for a chosen t-dimensional character space.  The two facts driving every
computation here are the reciprocity relation (the norms sum to zero) and
the kernel description

    H1(M) = ker[ F_2^s -> F_2^t, e_i -> norm_i ],
    H1(Pic) = H1(M) / <(1, ..., 1)>,

where s is the number of bad closed points.  The all-ones vector lies in
the kernel by reciprocity; modeling the Z/2 that maps into H1(M) as that
diagonal vector reproduces the published order computations exactly and is
recorded as a modeling assumption (no other identification is named by the
sources; any general-field configuration where this choice contradicts
quoted sequence orders should be reported, none is known).

Quasi-finite mode is the procyclic model: t = 1 and every norm is the
nontrivial class, because the corestriction H1(Z/2) along any open subgroup
of the procyclic group is the identity (the transfer of a procyclic group
to a finite-index subgroup sends a topological generator sigma to sigma^d,
which again generates, so the nontrivial character pulls back nontrivially).

Base change to the degree-e subextension splits a degree-d point into
gcd(d, e) points of degree d / gcd(d, e); the residue survives exactly when
e / gcd(d, e) is odd, otherwise it is killed and the bundle stops being
relatively minimal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from math import gcd
from pathlib import Path

from .intlinalg import AbelianInvariants, TRIVIAL_GROUP

CONFIG_SCHEMA = "conic-config/1"


class ConicError(Exception):
    pass


class InvalidConfigError(ConicError):
    pass


class OddCountError(ConicError):
    pass


class SchemaMismatchError(ConicError):
    pass


@dataclass(frozen=True)
class BadPoint:
    """A closed point of bad reduction: its degree and residue norm."""

    degree: int
    norm: tuple[int, ...]

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("point degree must be >= 1")
        if any(b not in (0, 1) for b in self.norm):
            raise ValueError("norm must be a 0/1 vector")


@dataclass(frozen=True)
class ConicConfig:
    """Bad-fiber configuration of a conic bundle.

    ``character_dim`` is the dimension t of the modeled character space;
    ``quasi_finite`` pins the procyclic model (t = 1, all norms nontrivial
    while relatively minimal); ``relatively_minimal`` is the caller's claim,
    which base_change may withdraw.
    """

    points: tuple[BadPoint, ...]
    character_dim: int = 1
    quasi_finite: bool = True
    relatively_minimal: bool = True

    def __post_init__(self):
        if self.character_dim < 0:
            raise ValueError("character_dim must be >= 0")
        for p in self.points:
            if len(p.norm) != self.character_dim:
                raise ValueError(
                    f"norm length {len(p.norm)} != character_dim {self.character_dim}"
                )
        if self.quasi_finite and self.character_dim != 1:
            raise ValueError("quasi-finite mode fixes character_dim = 1")

    @property
    def geometric_fibers(self) -> int:
        """Count of degenerate geometric fibers: the sum of point degrees."""
        return sum(p.degree for p in self.points)


def quasi_finite_config(degrees, relatively_minimal: bool = True) -> ConicConfig:
    """Procyclic-model configuration: every residue is the nontrivial class."""
    return ConicConfig(
        points=tuple(BadPoint(int(d), (1,)) for d in degrees),
        character_dim=1,
        quasi_finite=True,
        relatively_minimal=relatively_minimal,
    )


@dataclass(frozen=True)
class Violation:
    kind: str  # "reciprocity" | "minimality"
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...]
    warnings: tuple[str, ...]


def validate(config: ConicConfig) -> ValidationReport:
    """Reciprocity and minimality checks; violations are data, not exceptions.

    Reciprocity: the norms must sum to zero in F_2^t.  When relative
    minimality is claimed, every norm must be nonzero.  A configuration with
    at most 3 degenerate geometric fibers gets a rational-range warning (such
    a surface with a rational point is rational); this is surfaced, not
    enforced.
    """
    violations = []
    t = config.character_dim
    total = [0] * t
    for p in config.points:
        for i, b in enumerate(p.norm):
            total[i] ^= b
    if any(total):
        violations.append(
            Violation(
                "reciprocity",
                f"norms sum to {''.join(map(str, total))} != 0: "
                "no conic bundle produces this configuration",
            )
        )
    if config.relatively_minimal:
        for i, p in enumerate(config.points):
            if not any(p.norm):
                violations.append(
                    Violation(
                        "minimality",
                        f"point {i} (degree {p.degree}) has trivial residue norm "
                        "but the configuration is flagged relatively minimal",
                    )
                )
    warnings = ()
    if config.geometric_fibers <= 3:
        warnings = (
            f"only {config.geometric_fibers} degenerate geometric fibers: "
            "a surface in this range with a rational point is rational",
        )
    return ValidationReport(ok=not violations, violations=tuple(violations), warnings=warnings)


def _f2_kernel_dim(rows: list[tuple[int, ...]], t: int) -> int:
    """Dimension of ker[F_2^s -> F_2^t] for the map e_i -> rows[i]."""
    s = len(rows)
    basis: list[int] = []
    for r in rows:
        v = sum(b << j for j, b in enumerate(r))
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return s - len(basis)


def h1_pic(config: ConicConfig) -> AbelianInvariants:
    """H1 of the Picard module: kernel of the norm map modulo the diagonal.

    Requires a valid configuration.  The result is an elementary 2-group of
    rank dim ker - 1 (the all-ones vector lies in the kernel by reciprocity).
    """
    report = validate(config)
    if not report.ok:
        raise InvalidConfigError(
            "; ".join(v.detail for v in report.violations)
        )
    s = len(config.points)
    if s == 0:
        return TRIVIAL_GROUP
    dim = _f2_kernel_dim([p.norm for p in config.points], config.character_dim)
    return AbelianInvariants((2,) * (dim - 1))


def h1_norm_kernel_order(config: ConicConfig) -> int:
    """Order of H1(M) = ker of the norm map (before dividing by the diagonal)."""
    report = validate(config)
    if not report.ok:
        raise InvalidConfigError("; ".join(v.detail for v in report.violations))
    dim = _f2_kernel_dim([p.norm for p in config.points], config.character_dim)
    return 1 << dim


def base_change(config: ConicConfig, e: int) -> ConicConfig:
    """Configuration over the degree-e subextension (procyclic model only).

    A degree-d point splits into gcd(d, e) points of degree d/gcd(d, e); the
    residue survives iff e/gcd(d, e) is odd.  Killed residues yield zero
    norms and the output drops the relative-minimality claim.
    """
    if not config.quasi_finite:
        raise InvalidConfigError("base_change requires the quasi-finite model")
    if e < 1:
        raise ValueError("extension degree must be >= 1")
    points = []
    still_minimal = config.relatively_minimal
    for p in config.points:
        u = gcd(p.degree, e)
        new_degree = p.degree // u
        survives = ((e // u) % 2 == 1) and any(p.norm)
        if not survives:
            still_minimal = False
        norm = (1,) if survives else (0,)
        points.extend([BadPoint(new_degree, norm)] * u)
    return ConicConfig(
        points=tuple(points),
        character_dim=1,
        quasi_finite=True,
        relatively_minimal=still_minimal,
    )


def minimal_conic_h1_quasifinite(s: int) -> AbelianInvariants:
    """Closed form over a quasi-finite field: (Z/2)^(s-2) for s bad points.

    Reciprocity forces s to be even (all norms are the nontrivial class);
    odd s cannot occur.
    """
    if s % 2 != 0:
        raise OddCountError(
            f"{s} bad points with nontrivial norms violate reciprocity"
        )
    if s < 2:
        raise ValueError("a relatively minimal bundle in this model has s >= 2")
    return AbelianInvariants((2,) * (s - 2))


# ---------------------------------------------------------------------------
# config files
# ---------------------------------------------------------------------------


def config_to_dict(config: ConicConfig) -> dict:
    return {
        "schema": CONFIG_SCHEMA,
        "character_dim": config.character_dim,
        "quasi_finite": config.quasi_finite,
        "relatively_minimal": config.relatively_minimal,
        "points": [
            {"degree": p.degree, "norm": "".join(map(str, p.norm))}
            for p in config.points
        ],
    }


def config_from_dict(data: dict) -> ConicConfig:
    if data.get("schema") != CONFIG_SCHEMA:
        raise SchemaMismatchError(
            f"expected schema {CONFIG_SCHEMA!r}, got {data.get('schema')!r}"
        )
    t = int(data["character_dim"])
    points = []
    for i, p in enumerate(data.get("points", [])):
        norm = str(p["norm"])
        if len(norm) != t or any(c not in "01" for c in norm):
            raise InvalidConfigError(
                f"point {i}: norm must be a 0/1 string of length {t}"
            )
        points.append(BadPoint(int(p["degree"]), tuple(int(c) for c in norm)))
    return ConicConfig(
        points=tuple(points),
        character_dim=t,
        quasi_finite=bool(data.get("quasi_finite", False)),
        relatively_minimal=bool(data.get("relatively_minimal", True)),
    )


def load_config(path) -> ConicConfig:
    return config_from_dict(json.loads(Path(path).read_text()))


def save_config(config: ConicConfig, path) -> None:
    Path(path).write_text(json.dumps(config_to_dict(config), indent=2, sort_keys=True) + "\n")
