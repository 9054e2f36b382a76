"""awarekit: a verification workbench for epistemic logics with awareness.

Three model classes (Kripke lattice, space lattice, awareness structure),
three-valued guarded semantics for the explicit-knowledge language L and its
extension LKA, the four satisfaction-preserving transforms between the
classes, and a harness that checks equivalences, axiom suites, and structural
properties by bounded enumeration.
"""

from .fh import (
    AtomGenerated,
    Explicit,
    FHEvaluator,
    FHModel,
    aware_of,
    check_ka,
    check_pp,
    eval_L_fh,
    eval_LKA_fh,
    validate_fh,
)
from .formula import (
    And,
    Atom,
    Aware,
    ExplicitKnow,
    Formula,
    Know,
    Lang,
    Not,
    ParseError,
    TOP,
    Top,
    atoms_of,
    agents_of,
    depth_of,
    enumerate_formulas,
    expand_defined,
    iff,
    implies,
    in_language,
    land,
    lnot,
    lor,
    parse,
    to_text,
)
from .hms import (
    DenotationEvaluator,
    Event,
    FrameDefect,
    HMSModel,
    UnawarenessFrame,
    defined_atoms,
    denotation,
    eval_L_hms,
    event_and,
    event_aware,
    event_know,
    event_neg,
    valid_over_hms,
    validate_frame,
    validate_model,
)
from .klm import (
    Evaluator,
    KripkeLatticeModel,
    PropertyReport,
    canonicalize,
    check_awareness_properties,
    eval_L,
    eval_LKA,
    induced_pointwise,
    lattice_cap,
    satisfying_states,
    subsets,
    validate_klm,
)
from .kripke import (
    KripkeModel,
    RestrictedModel,
    WorldId,
    information_cell,
    parse_world_id,
    relation_properties,
    restrict,
    validate_kripke,
)
from .modelio import fixture_path, load_fixture, load_model, store_model
from .transforms import (
    StateCorrespondence,
    TransformReport,
    fh_transform,
    h_transform,
    k_transform,
    l_transform,
    transform,
)
from .truth import Truth, truth_of
from .verify import (
    AxiomSuite,
    EquivalenceReport,
    SCHEMA_5,
    Schema,
    ValidityChecker,
    check_axiom_suite,
    check_equiv_fh_klm,
    check_L_equiv_hms_klm,
    check_L_equiv_klm_hms,
    derived_theorem_checks,
    hms_suite,
    lga_suite,
    random_klm,
    random_klm_eq,
    valid_over,
)

__version__ = "0.1.0"
