"""Non-Markovian decay of a three-level cascade atom in structured reservoirs.

Laplace-domain Fredholm kernels are assembled from reservoir structure
functions, the discretized second-kind equations are solved per node, and a
numerical inverse Laplace transform recovers the population dynamics. The
pipeline is cross-validated against a closed-form two-reservoir solution and
a pseudo-mode Lindblad master equation.
"""

from ._backend import BACKEND_NAME
from .eigen import BiorthogonalSystem, biorthogonality_check, decompose, solve_by_expansion
from .errors import (
    ConfigError,
    InversionError,
    NumericalError,
    RegimeError,
    SingularSystemError,
)
from .inversion import InversionConfig, InversionMethod, invert, validate_method
from .kernel import (
    FrequencyGrid,
    KernelSystem,
    build_A,
    build_kernel_single,
    build_kernel_two,
    build_rhs,
    build_system,
)
from .pipeline import TimeSeries, run_dynamics
from .pseudomode import PseudomodeParams, PseudomodeResult, evolve, lindblad_rhs
from .reservoir import (
    AtomParams,
    LorentzianProfile,
    NumericalProfile,
    ReservoirSpec,
    Topology,
    eval_r,
    lorentzian_pole,
)
from .solver import AmplitudeSolution, b2bar_from_f, solve_complex, solve_real_block
from .twores import Regime, TwoReservoirClosedForm

__version__ = "0.1.0"

__all__ = [
    "AmplitudeSolution",
    "AtomParams",
    "BACKEND_NAME",
    "BiorthogonalSystem",
    "ConfigError",
    "FrequencyGrid",
    "InversionConfig",
    "InversionError",
    "InversionMethod",
    "KernelSystem",
    "LorentzianProfile",
    "NumericalError",
    "NumericalProfile",
    "PseudomodeParams",
    "PseudomodeResult",
    "Regime",
    "RegimeError",
    "ReservoirSpec",
    "SingularSystemError",
    "TimeSeries",
    "Topology",
    "TwoReservoirClosedForm",
    "b2bar_from_f",
    "biorthogonality_check",
    "build_A",
    "build_kernel_single",
    "build_kernel_two",
    "build_rhs",
    "build_system",
    "decompose",
    "eval_r",
    "evolve",
    "invert",
    "lindblad_rhs",
    "lorentzian_pole",
    "run_dynamics",
    "solve_by_expansion",
    "solve_complex",
    "solve_real_block",
    "validate_method",
    "__version__",
]
