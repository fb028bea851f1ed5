"""Two-mode gain/loss optomechanical dynamics: spectra, regimes, closed forms, oracle."""

from .model import (
    HBAR,
    CoherentInit,
    DriveParams,
    MomentState,
    NumberSplit,
    PTPhase,
    RegimeLabel,
    Stability,
    SystemParams,
    make_params,
)
from .spectrum import (
    PhaseDiagramGrid,
    Spectrum,
    classify,
    drift_eigenvalues,
    drift_eigenvalues_dense,
    drift_matrix,
    max_re_lambda,
    phase_diagram,
    supermode_frequencies,
)
from .analytic import (
    displacement,
    finite_time_amplitude,
    first_moments_closed_form,
    numbers_equal_gain,
    numbers_unequal_gain,
    steady_numbers,
)
from .numeric import (
    ConvergenceError,
    FirstMomentSeries,
    SecondMomentSeries,
    WorkingPoint,
    integrate_first_moments,
    integrate_second_moments,
    solve_working_point,
    stimulated_spontaneous_split,
)

__version__ = "0.1.0"

__all__ = [
    "HBAR",
    "CoherentInit",
    "ConvergenceError",
    "DriveParams",
    "FirstMomentSeries",
    "MomentState",
    "NumberSplit",
    "PTPhase",
    "PhaseDiagramGrid",
    "RegimeLabel",
    "SecondMomentSeries",
    "Spectrum",
    "Stability",
    "SystemParams",
    "WorkingPoint",
    "classify",
    "displacement",
    "drift_eigenvalues",
    "drift_eigenvalues_dense",
    "drift_matrix",
    "finite_time_amplitude",
    "first_moments_closed_form",
    "integrate_first_moments",
    "integrate_second_moments",
    "make_params",
    "max_re_lambda",
    "numbers_equal_gain",
    "numbers_unequal_gain",
    "phase_diagram",
    "solve_working_point",
    "steady_numbers",
    "stimulated_spontaneous_split",
    "supermode_frequencies",
]
