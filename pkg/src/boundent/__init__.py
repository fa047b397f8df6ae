"""Construction, verification and optical simulation of multi-qubit bound-entangled states."""

__version__ = "0.1.0"

from .linalg import (  # noqa: F401
    Bipartition,
    InvalidStateError,
    all_bipartitions,
    check_density,
    hermitian_spectrum,
    overlap,
    partial_trace,
    partial_transpose,
    tensor,
    trace_distance,
)
from .states import (  # noqa: F401
    ABLSParams,
    DurCiracSpec,
    abls,
    chi3,
    dur_cirac,
    dur_state,
    g_state,
    ghz,
    ghz_like,
    llk_state,
    smolin_bell,
    smolin_ghz,
    upb_basis,
    upb_phi_decomposition,
    upb_state,
)
from .diagnostics import (  # noqa: F401
    certify_bound_entangled,
    dc_negativity,
    dc_undistillable,
    depolarize,
    geometric_measure_pure,
    negativity,
    noise_threshold,
    ppt_profile,
    project_to_dc,
    pt_inequality_value,
    upb_unextendible,
)
