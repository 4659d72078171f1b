"""Limiting-case closed forms for the parity doublet, and a classifier for them.

Two families, by which field rotates:

* table 1: rotating transverse E over static Ez, Bz
* table 2: rotating transverse B over static Ez, Bz

Each case is a chain of strong inequalities between the energy scales
``zeeman = mu0 Bz``, ``stark = d0 Ez``, ``|delta1|`` and ``2B``. A chain
``a << b`` counts as satisfied when ``b / a >= separation_factor``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .perturbation import spin1_rotB_staticE_shifts, spin1_rotE_staticB_shifts
from .systems import ParityDoubletSystem, static_mix

SEPARATION_FACTOR = 30.0


@dataclass(frozen=True)
class RegimeParams:
    """Full parameter set of a doublet scenario with one rotating transverse field."""

    system: ParityDoubletSystem
    Ez: float
    Bz: float
    transverse: float
    omega: float
    table: int

    def __post_init__(self):
        if self.table not in (1, 2):
            raise ValueError("table must be 1 (rotating E) or 2 (rotating B)")
        if self.table == 1 and not self.Ez > 0:
            raise ValueError("rotating-E scenarios need Ez > 0")

    @property
    def zeeman(self) -> float:
        return self.system.mu0 * abs(self.Bz)

    @property
    def stark(self) -> float:
        return self.system.d0 * abs(self.Ez)

    @property
    def delta1(self) -> float:
        return static_mix(self.system, abs(self.Ez), self.Bz).delta1

    @property
    def two_B(self) -> float:
        return 2 * self.system.half_splitting_B

    def scales(self) -> dict:
        return {
            "zeeman": self.zeeman,
            "stark": self.stark,
            "abs_delta1": abs(self.delta1),
            "two_B": self.two_B,
        }


@dataclass(frozen=True)
class RegimeCase:
    table: int
    case_id: str
    ordering: str
    chain: tuple  # pairs (small, large) of scale names
    coefficient: Callable[[RegimeParams], float]  # phase per unit omega*T

    @property
    def name(self) -> str:
        return f"table {self.table} case {self.case_id}"

    def __repr__(self):
        return f"RegimeCase({self.name}: {self.ordering})"


def _t1_i(p):
    return (p.transverse / p.Ez) ** 2


def _t1_ii(p):
    return (p.transverse / p.Ez) ** 2 * (p.delta1 / p.zeeman) ** 2


def _t1_iii(p):
    return (p.transverse / p.Ez) ** 2 * (p.stark / p.two_B) ** 2


def _t1_iv(p):
    return (p.transverse / p.Ez) ** 2 * (p.stark / p.zeeman) ** 2


def _t2_pure(p):
    return (p.transverse / p.Bz) ** 2


def _t2_iii(p):
    return (p.system.mu0 * p.transverse / p.delta1) ** 2


CASES = (
    RegimeCase(1, "I", "mu_z Bz << |Delta1|, d0 Ez",
               (("zeeman", "abs_delta1"), ("zeeman", "stark")), _t1_i),
    RegimeCase(1, "II", "|Delta1| << mu_z Bz << d0 Ez",
               (("abs_delta1", "zeeman"), ("zeeman", "stark")), _t1_ii),
    RegimeCase(1, "III", "d0 Ez << mu_z Bz << 2B",
               (("stark", "zeeman"), ("zeeman", "two_B")), _t1_iii),
    RegimeCase(1, "IV", "d0 Ez, 2B << mu_z Bz",
               (("stark", "zeeman"), ("two_B", "zeeman")), _t1_iv),
    RegimeCase(2, "I", "|Delta1| << 2B << mu_z Bz",
               (("abs_delta1", "two_B"), ("two_B", "zeeman")), _t2_pure),
    RegimeCase(2, "II", "|Delta1| << mu_z Bz << 2B",
               (("abs_delta1", "zeeman"), ("zeeman", "two_B")), _t2_pure),
    RegimeCase(2, "III", "mu_z Bz << |Delta1| << 2B",
               (("zeeman", "abs_delta1"), ("abs_delta1", "two_B")), _t2_iii),
)


def get_case(table: int, case_id: str) -> RegimeCase:
    for c in CASES:
        if c.table == table and c.case_id == case_id:
            return c
    raise KeyError(f"no case {case_id} in table {table}")


def _much_less(a, b, factor):
    if b <= 0:
        return False
    return a == 0 or b / a >= factor


def classify(params: RegimeParams, separation_factor: float = SEPARATION_FACTOR) -> Optional[RegimeCase]:
    """Case whose whole chain holds for these parameters, or None when none does."""
    sc = params.scales()
    for case in CASES:
        if case.table != params.table:
            continue
        if all(_much_less(sc[a], sc[b], separation_factor) for a, b in case.chain):
            return case
    return None


def limiting_phase(case: RegimeCase, params: RegimeParams, T: float) -> float:
    """Closed-form stretched-state phase difference of ``case``, evaluated literally."""
    if case.table != params.table:
        raise ValueError(f"{case.name} does not describe table {params.table} parameters")
    if params.omega == 0:
        return 0.0
    return case.coefficient(params) * params.omega * T


def full_phase(params: RegimeParams, T: float) -> float:
    """First-order-in-omega phase from the complete second-order shift expressions."""
    s = params.system
    if params.table == 1:
        shifts = spin1_rotE_staticB_shifts(s, params.Ez, params.Bz, params.transverse, params.omega)
    else:
        shifts = spin1_rotB_staticE_shifts(s, params.Ez, params.Bz, params.transverse, params.omega)
    return shifts.difference.phases(T).geometric_phase


def relative_deviation(case: RegimeCase, params: RegimeParams, T: float) -> float:
    full = full_phase(params, T)
    return (limiting_phase(case, params, T) - full) / full


# parameter synthesis -------------------------------------------------------


def _ez_for_delta1(B, d1):
    """Stark energy d0 Ez that produces a tensor shift |Delta1| = d1 at splitting 2B."""
    return math.sqrt((B + d1) ** 2 - B * B)


def _split_for_delta1(stark, d1):
    """Half splitting B giving |Delta1| = d1 at Stark energy ``stark`` (needs d1 < stark)."""
    return (stark * stark - d1 * d1) / (2 * d1)


def synthesize(case: RegimeCase, separation: float, transverse_ratio: float = 0.01) -> RegimeParams:
    """Parameters deep inside ``case``: each link of its chain separated by ``separation``.

    Uses d0 = mu0 = 1, a transverse amplitude ``transverse_ratio`` times the
    static field it tilts, and a rotation frequency 1e-3 of the smallest
    energy denominator so the first-order expansion is clean.
    """
    s = float(separation)
    if s <= 1:
        raise ValueError("separation must exceed 1")
    key = (case.table, case.case_id)
    if key == (1, "I"):
        B, stark = 1.0, 1.0
        d1 = abs(static_mix(ParityDoubletSystem(B, 1.0), stark).delta1)
        zeeman = min(d1, stark) / s
    elif key == (1, "II"):
        stark, zeeman, d1 = 1.0, 1.0 / s, 1.0 / s**2
        B = _split_for_delta1(stark, d1)
    elif key == (1, "III"):
        B, zeeman, stark = 0.5, 1.0 / s, 1.0 / s**2
    elif key == (1, "IV"):
        zeeman, stark = 1.0, 1.0 / s
        B = 0.5 / s
    elif key == (2, "I"):
        zeeman = 1.0
        B = 0.5 / s
        stark = _ez_for_delta1(B, 2 * B / s)
    elif key == (2, "II"):
        B, zeeman = 0.5, 1.0 / s
        stark = _ez_for_delta1(B, 1.0 / s**2)
    elif key == (2, "III"):
        B, zeeman = 0.5, 1.0 / s**2
        stark = _ez_for_delta1(B, 1.0 / s)
    else:
        raise KeyError(case.name)
    system = ParityDoubletSystem(B, 1.0, 1.0)
    st = static_mix(system, stark, zeeman)
    smallest = min(abs(st.delta1 + st.zeeman_z), abs(st.delta1 - st.zeeman_z), st.delta0 - st.zeeman_z)
    if case.table == 2 and abs(st.delta1) < 1e-300:
        smallest = zeeman
    omega = 1e-3 * smallest
    transverse = transverse_ratio * (stark if case.table == 1 else zeeman)
    return RegimeParams(system, stark, zeeman, transverse, omega, case.table)


def from_scales(table: int, zeeman: float, abs_delta1: float, stark: float, transverse: float = 0.0,
                omega: float = 0.0) -> RegimeParams:
    """Parameters (d0 = mu0 = 1) reproducing given Zeeman, tensor-Stark and Stark energies."""
    B = _split_for_delta1(stark, abs_delta1)
    if not B > 0:
        raise ValueError("need |Delta1| < d0 Ez")
    return RegimeParams(ParityDoubletSystem(B, 1.0, 1.0), stark, zeeman, transverse, omega, table)
