"""Geometric phases of spins in rotating fields, computed from energy shifts,
from solid angles, and from direct Schrodinger integration."""

from .errors import ConfigError, OracleError, PerturbativeValidityWarning, PhysicsDomainError
from .evolution import (
    EvolutionConfig,
    OraclePhaseReport,
    dressed_exact_spinhalf,
    extract_geometric_phase,
    integrate_tdse,
)
from .fields import (
    FieldTrajectory,
    RotatingComponent,
    coupling_vector,
    solid_angle_exact,
    solid_angle_small,
    swept_area,
)
from .perturbation import (
    geometric_decompose,
    spin1_efield_shifts,
    spin1_rotB_staticE_shifts,
    spin1_rotE_staticB_shifts,
    spinhalf_geometric_phase,
    spinhalf_shifts,
)
from .regimes import RegimeCase, RegimeParams, classify, limiting_phase
from .systems import ParityDoubletSystem, SpinHalfSystem, static_mix

__version__ = "0.1.0"
