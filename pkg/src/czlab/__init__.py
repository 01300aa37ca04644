"""Numerical workbench for first-order commutators of Calderon-Zygmund type.

Periodic grids with exact discrete calculus, rough homogeneous kernels and
their smooth dyadic and mollified pieces, height-based good/bad function
splitting, directional sector decompositions, and the commutator application
engines, plus a claim-verification harness under :mod:`czlab.harness`.
"""

from .errors import (
    ConfigError,
    CzlabError,
    DomainError,
    ParameterError,
    ResolutionError,
    ScaleError,
    SupportError,
)
from .grid import (
    GridFunction,
    GridSpec,
    convolve,
    dft,
    export_slice_csv,
    idft,
    interp_periodic,
    load_grid,
    load_slice_csv,
    minimal_image_index,
    multiplier_apply,
    norm,
    require_central_support,
    resolvable_scale,
    save_grid,
    superlevel_measure,
)
from .kernels import (
    BumpPair,
    KernelSpec,
    SCutoff,
    angular_modes,
    builtin_kernel,
    dyadic_piece,
    dyadic_ring_profile,
    ell,
    ell_eps,
    grad_l1,
    mollified_piece,
    mollifier_on_grid,
    n_of_eps,
    smooth_step,
    step_down,
)
from .czd import (
    Atom,
    CZDecomposition,
    DyadicCube,
    cz_decompose,
    cube_level_for_scale,
    dilated_cube_mask,
    exceptional_set,
    export_certificate,
    group_by_level,
)
from .microlocal import (
    DirectionNet,
    SectorMultiplier,
    apply_Pm,
    apply_lp,
    build_net,
    lp_kmin,
    lp_lowpass_symbol,
    lp_shell_symbol,
    lp_shell_wide_symbol,
    overlap_count,
    tube_majorant,
    tube_mass_estimate,
)
from .commutator import (
    apply_sparse,
    apply_T,
    apply_T_batch,
    apply_table,
    apply_Tj,
    apply_Tj_nu,
    apply_Tjn,
    apply_Tjn_batch,
    gl_nodes,
    recommended_s_nodes,
    sector_kernel_table,
    theta_nodes,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "CzlabError", "DomainError", "ParameterError", "ScaleError",
    "ResolutionError", "SupportError", "ConfigError",
    # grid
    "GridSpec", "GridFunction", "dft", "idft", "convolve", "multiplier_apply",
    "norm", "superlevel_measure", "minimal_image_index", "interp_periodic",
    "save_grid", "load_grid", "export_slice_csv", "load_slice_csv",
    "require_central_support", "resolvable_scale",
    # kernels
    "smooth_step", "step_down", "BumpPair", "SCutoff", "n_of_eps", "ell",
    "ell_eps", "KernelSpec", "builtin_kernel", "angular_modes",
    "dyadic_ring_profile", "dyadic_piece", "mollifier_on_grid",
    "mollified_piece", "grad_l1",
    # decomposition
    "DyadicCube", "Atom", "CZDecomposition", "cz_decompose", "group_by_level",
    "cube_level_for_scale", "exceptional_set", "dilated_cube_mask",
    "export_certificate",
    # directions
    "DirectionNet", "build_net", "SectorMultiplier", "overlap_count",
    "lp_shell_symbol", "lp_shell_wide_symbol", "lp_lowpass_symbol", "lp_kmin",
    "apply_lp", "apply_Pm", "tube_majorant", "tube_mass_estimate",
    # commutator
    "gl_nodes", "theta_nodes", "recommended_s_nodes", "apply_T",
    "apply_T_batch", "apply_Tj", "apply_Tjn", "apply_Tjn_batch",
    "apply_Tj_nu", "sector_kernel_table", "apply_table", "apply_sparse",
]
