"""thedra: flexible trapezoidal quad-surfaces and their smooth analoga.

Construction of T-hedra from generating data, closed-form one-parameter
isometric deformations, numerical verification oracles, smooth T-surfaces
with their deformations, and a small design workbench (documents, OBJ
export, CLI, HTTP frame service).
"""

from . import errors
from .builders import (
    THedron,
    TranslationalData,
    build_axial,
    build_miura,
    build_molding,
    build_revolution,
    build_thedron,
    build_translational,
    classify,
    lift,
    miura_data,
)
from .design import (
    DesignData,
    DerivedQuantities,
    TNet,
    build_tnet,
    derive,
    design_from_net,
    ground_view,
    recover_signed_lengths,
    validate_tnet,
)
from .documents import (
    DesignDocument,
    document_from_dict,
    document_id,
    export_obj,
    load,
    obj_bytes,
    save,
    sweep,
)
from .kinematics import (
    Blocking,
    DeformationState,
    ParameterRange,
    deform,
    deform_axial,
    deform_molding,
    deform_revolution,
    deform_translational,
    deform_translational_data,
    deformation_state,
    is_parallel,
    miura_flat_parameters,
    parallel_axial,
    parameter_range,
    t_additive_from_exponential,
    t_exponential_from_additive,
    translational_design,
    translational_parameter_range,
)
from .metrology import (
    IsometryReport,
    check_congruent,
    check_isometric,
    dihedral_angles,
    max_dihedral_change,
    planarity,
)
from .smooth import (
    AxialSurface,
    RevolutionSurface,
    SmoothSpec,
    TranslationalSurface,
    axial_to_general,
    deform_axial_surface,
    deform_general_surface,
    deform_molding_surface,
    deform_revolution_surface,
    deform_translational_surface,
    evaluate,
    first_fundamental_form,
    reconstruct_c,
    sample_to_grid,
    smooth_parallel_partner,
    validate_smooth_spec,
)

__version__ = "0.1.0"
