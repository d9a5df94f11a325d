"""Cyclic group actions on del Pezzo Picard lattices.

Exact tools for the lattice side of the minimal-surface classification:
Picard lattices with their exceptional classes and root systems, Weyl-group
class enumeration (exhaustive through W(E7), heuristic for W(E8)), first
cohomology of cyclic actions, characteristic and Frame symbols with their
power rules, conic-bundle residue combinatorics, and a harness that audits
transcriptions of the published classification tables.
"""

from .intlinalg import (
    AbelianInvariants,
    NotContainedError,
    NotFullRankError,
    kernel_basis,
    quotient_invariants,
    smith_normal_form,
)
from .lattice import BadDegreeError, PicardLattice, build, inner, minus_one_classes, roots
from .symbols import (
    CharSymbol,
    FrameSymbol,
    NonCyclotomicFactorError,
    SymbolParseError,
    char_symbol,
    frame_from_char,
    char_from_frame,
    parse_char_symbol,
    parse_frame_symbol,
    power_char,
    power_frame,
)
from .cohomology import first_nonvanishing_power, h1_cyclic, h1_tower
from .minimality import OrbitPartition, index, is_minimal, line_orbits
from .weyl import (
    BudgetExhaustedError,
    ClassInventory,
    ClassRecord,
    ConjugacyUndecidedError,
    LatticeAut,
    SearchBudget,
    are_conjugate,
    element_order,
    enumerate_classes,
    reflection,
)
from .conic import (
    BadPoint,
    ConicConfig,
    base_change,
    h1_pic,
    minimal_conic_h1_quasifinite,
    quasi_finite_config,
    validate,
)
from .tables import (
    DescentStep,
    TableEntry,
    audit_tables,
    load_steps,
    load_tables,
    match_entry,
    replay_descent,
    run_scripted_steps,
    verify_theorem,
)

__version__ = "0.1.0"
