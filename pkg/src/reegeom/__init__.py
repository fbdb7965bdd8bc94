"""Two-qubit entanglement geometry: closed-form closest separable states,
relative entropy of entanglement, and the reverse map from separable edge
states to their entangled families."""

from .css import (
    CssResult,
    FamilyKind,
    FamilyTag,
    classify,
    css_auto,
    css_bell_diagonal,
    css_horodecki,
    css_vp,
)
from .errors import (
    DegenerateFrame,
    DegenerateZ,
    InvalidState,
    LeftPhysicalRange,
    NoCrossing,
    NotConverged,
    NotEdgeState,
    NotSolvableFamily,
    OutsideTetrahedron,
    ParallelLines,
    RankDeficient,
    ReegeomError,
)
from .geometry import (
    OCTA_VERTICES,
    TETRA_VERTICES,
    CrossingPoint,
    SurfaceMesh,
    Vertex,
    in_tetrahedron,
    line_surface_crossing,
    nearest_vertex,
    surface_mesh,
)
from .qstate import (
    DiagonalPauliForm,
    LocalUnitary,
    PauliForm,
    bell_diagonal,
    canonicalize,
    concurrence,
    from_diagonal_pauli,
    from_pauli,
    is_ppt,
    partial_trace,
    partial_transpose,
    to_pauli,
    validate_density_matrix,
)
from .ree import (
    OracleConfig,
    ReeReport,
    directional_optimality_check,
    ree_geometric,
    ree_numeric,
    relative_entropy,
)
from .revmap import (
    GMatrix,
    SigmaZParams,
    css_line_sweep,
    family_from_css,
    g_matrix,
    line_crossing,
    pt_kernel,
    recover_horodecki,
    recover_vp,
    z_derivatives,
    z_family,
    z_family_pauli,
)
from .spectra import ZParallelState, eigensystem, min_pt_branch, pt_eigensystem

__version__ = "1.0.0"
