"""Energies of periodic sets under anisotropic perimeter minus a 1-norm power-law interaction."""
from .errors import BracketingError, DomainError, FormatError, PreconditionError, StripesError, ToleranceError
from .gridset import GridSet, format_gridset, parse_gridset, per1, per1_dir, read_gridset, write_gridset
from .kernel import (
    KernelConstants,
    KernelParams,
    complete_monotonicity_report,
    constants,
    kernel_value,
    make_params,
    reduced_kernel,
    tail_integral,
)
from .multidim import (
    CellKernelTable,
    EnergyBreakdown,
    build_kernel_table,
    classify_cubes,
    decomposition_terms,
    fbar_average,
    functional_energy,
    localized_fbar,
    lower_bound_check,
    stability_probe,
)
from .onedim import (
    PeriodicSet1D,
    StripeSpec,
    brute_force_min_1d,
    eta0_threshold,
    eta0_threshold_exact,
    f1d_energy,
    make_stripes_1d,
    optimal_width,
    r_lower_bound,
    r_interval_sum,
    r_lower_bound_exact,
    r_term_1d,
    r_terms_1d,
    minimize_width,
    stripe_energy,
    stripe_energy_slope,
)
from .stripes import (
    Cube,
    StripePattern,
    column_profile,
    cube_at,
    distance_to_stripes,
    distance_to_stripes_dir,
    is_admissible,
    lipschitz_probe,
    rasterize_stripes,
    two_direction_probe,
)
from .verify import CheckReport, SuiteConfig, run_suite

__version__ = "0.1.0"
