"""Jaynes-state inference and typical-subspace compression for one-qubit sources."""
from .errors import (
    DegenerateObservable,
    EmptyConstraintSet,
    InconsistentData,
    InconsistentEnsemble,
    InvalidBudget,
    InvalidDelta,
    InvalidMethod,
    NotDensityMatrix,
    NotPure,
    OutOfFamilyRange,
    TooLarge,
)
from .inference import (
    Constraint,
    ConstraintSet,
    ConsistentFamily,
    FamilyKind,
    JaynesSolution,
    check_consistency,
    entropy_scan,
    family_state,
    infer,
    infer_general,
    infer_one,
    infer_two,
)
from .protocol import PureEnsemble, converse_check, decompose_ensemble, simulate
from .qubit import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    EigenFrame2,
    Hermitian2,
    QubitState,
    eig2,
    entropy_bits,
    expectation,
    fidelity,
    state_from_matrix,
)
from .typical import (
    TypicalProjector,
    build_projector,
    error_probability,
    flag_string_overlap,
    log2_dimension,
    overlap_product_pure,
    trace_against_product,
)

__version__ = "0.1.0"
