"""Exact shadows, bicategorical traces and fixed-point invariants over group rings."""

from .bicategory import (
    Bimodule,
    ClassShadow,
    CokernelShadow,
    OrbitShadow,
    RingObject,
    ShadowElement,
    ShadowMap,
    ShadowPresentation,
    TwoCell,
    associator,
    basis_vector,
    cyclic_iso_theta,
    diagonal_bimodule,
    hcompose,
    hcompose_cells,
    identity_shadow_map,
    left_unitor,
    module_bimodule,
    right_unitor,
    shadow,
    shadow_of_twocell,
    substitute,
    theta_element,
    twisted_unit,
    unit_bimodule,
    zero_bimodule,
)
from .duality import (
    DualPairWitness,
    canonical_dual,
    compose_dual_pairs,
    dual_twocell,
    euler_characteristic,
    hattori_stallings_trace,
    trace,
    trace_eps,
    trace_eps_raw,
    trace_eta,
    trace_eta_raw,
    trace_left,
    verify_dual_pair,
)
from .errors import (
    AlgebraError,
    BaseMismatch,
    BoundaryNotZero,
    DimensionMismatch,
    IndexOutOfRange,
    InvalidChainMap,
    LiftNotFound,
    MissingBaseObject,
    NoFreeBasis,
    NotDualizable,
    ObjectMismatch,
    SchemaError,
    ShapeMismatch,
    SquareNotCommuting,
    UnsupportedGroup,
    UnsupportedShadow,
)
from .fixedpoint import (
    EquivariantChainComplex,
    ReidemeisterResult,
    TwistedChainMap,
    circle_self_map,
    fox_derivative,
    lefschetz_via_homology,
    presentation_complex,
    reidemeister_trace,
    torus2_self_map,
)
from .gring import RingElement, RingMatrix
from .groups import (
    FiniteTable,
    FreeAbelian,
    GroupEndo,
    GroupHom,
    GroupModel,
    Presented,
    Word,
    automorphisms,
    cyclic,
    dihedral4,
    direct_product,
    endomorphisms,
    inner_automorphisms,
    klein_four,
    quaternion8,
    symmetric3,
    trivial_group,
)
from .morita import (
    BaseChangeData,
    MoritaWitness,
    RingHom,
    base_change_pair,
    induced_bimodule,
    matrix_morita,
    restriction,
    restriction_transfer_composite,
    transfer,
    twisted_transfer,
    verify_morita,
)
from .nerve import NerveTuple, degeneracy, face, face_appendix, nerve_pi0
from .ringoid import (
    Ringoid,
    RingoidBimodule,
    class_of_endomorphism,
    free_module_skeleton,
    morita_inverse_map,
    ringoid_shadow,
)
from .snf import smith_normal_form
from .twisted import (
    TwistedClassSet,
    conjugacy_classes,
    hochschild_twisted_classes,
    twisted_conjugacy_classes,
)

__version__ = "0.1.0"
