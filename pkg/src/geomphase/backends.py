"""The four routes to a stretched-state geometric phase, behind one signature.

Each backend takes a :class:`ScenarioConfig` and returns a :class:`BackendResult`.

* ``perturbative``: energy-shift slope integrated over the run
* ``geometric``: (m_max - m_min) times the small-tilt solid angle
* ``oracle``: direct Schrodinger integration
* ``dressed``: exact rotating-frame solution (spin-1/2, one component)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .config import ScenarioConfig
from .errors import PhysicsDomainError
from .evolution import dressed_exact_spinhalf, extract_geometric_phase
from .fields import FieldTrajectory, solid_angle_small
from .perturbation import (
    spin1_rotB_staticE_shifts,
    spin1_rotE_staticB_shifts,
    spinhalf_geometric_phase,
)
from .systems import SpinHalfSystem


@dataclass(frozen=True)
class BackendResult:
    backend: str
    phase: float
    extras: dict = field(default_factory=dict)


def _rotating(f: Optional[FieldTrajectory]) -> bool:
    return f is not None and any(c.amplitude > 0 for c in f.components)


def doublet_layout(cfg: ScenarioConfig):
    """(table, rotating field, static Ez, static Bz) for a parity-doublet scenario."""
    e, b = cfg.efield, cfg.bfield
    if _rotating(e) and _rotating(b):
        raise PhysicsDomainError(
            "both electric and magnetic fields rotate; the shift formulas cover one", check="single_rotating_field"
        )
    ez = e.static_z if e is not None else 0.0
    bz = b.static_z if b is not None else 0.0
    if _rotating(b):
        return 2, b, ez, bz
    if e is None:
        raise PhysicsDomainError("no rotating field", check="single_rotating_field")
    return 1, e, ez, bz


def _single(traj: FieldTrajectory):
    comps = [c for c in traj.components if c.amplitude > 0]
    if len(comps) != 1:
        raise PhysicsDomainError(
            f"{len(comps)} rotating components; this route needs exactly one", check="single_component"
        )
    return comps[0]


def perturbative(cfg: ScenarioConfig) -> BackendResult:
    T = cfg.duration
    if isinstance(cfg.system, SpinHalfSystem):
        r = spinhalf_geometric_phase(cfg.system, cfg.bfield, T)
        return BackendResult("perturbative", r.geometric_phase, {"quasi_static_phase": r.quasi_static_phase})
    table, rot, ez, bz = doublet_layout(cfg)
    comp = _single(rot)
    if table == 1:
        shifts = spin1_rotE_staticB_shifts(cfg.system, ez, bz, comp.amplitude, comp.angular_frequency)
    else:
        shifts = spin1_rotB_staticE_shifts(cfg.system, ez, bz, comp.amplitude, comp.angular_frequency)
    r = shifts.difference.phases(T)
    return BackendResult("perturbative", r.geometric_phase, {"quasi_static_phase": r.quasi_static_phase})


def geometric(cfg: ScenarioConfig) -> BackendResult:
    T = cfg.duration
    if isinstance(cfg.system, SpinHalfSystem):
        omega = solid_angle_small(cfg.bfield, T)
        return BackendResult("geometric", omega, {"solid_angle": omega})
    table, rot, ez, bz = doublet_layout(cfg)
    # a plain solid angle only exists when a single field fixes the axis
    if table == 1 and bz == 0:
        omega = solid_angle_small(rot, T)
    elif table == 2 and ez == 0:
        omega = solid_angle_small(rot, T)
    else:
        raise PhysicsDomainError(
            "combined static E and B fields: no simple solid angle in parameter space",
            check="geometric_route",
        )
    return BackendResult("geometric", 2.0 * omega, {"solid_angle": omega})


def oracle(cfg: ScenarioConfig) -> BackendResult:
    rep = extract_geometric_phase(
        cfg.system, cfg.duration, bfield=cfg.bfield, efield=cfg.efield, cfg=cfg.evolution
    )
    return BackendResult(
        "oracle",
        rep.geometric_difference,
        {"adiabaticity": rep.adiabaticity, "unitarity_drift": rep.unitarity_drift, "report": rep},
    )


def dressed(cfg: ScenarioConfig) -> BackendResult:
    if not isinstance(cfg.system, SpinHalfSystem):
        raise PhysicsDomainError("dressed solution covers spin-1/2 only", check="dressed_route")
    comp = _single(cfg.bfield)
    r = dressed_exact_spinhalf(cfg.system, cfg.bfield.static_z, comp.amplitude, comp.angular_frequency, cfg.duration)
    return BackendResult("dressed", r.geometric_phase, {"rotating_splitting": r.rotating_splitting})


RUNNERS = {"perturbative": perturbative, "geometric": geometric, "oracle": oracle, "dressed": dressed}


def run_backends(cfg: ScenarioConfig, backends=None) -> list:
    return [RUNNERS[b](cfg) for b in (backends or cfg.backends)]
