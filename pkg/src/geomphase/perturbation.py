"""Second-order energy shifts from rotating transverse fields, and the phases they imply.

Every shift between the stretched states is split into a quasi-static part
(what survives as the rotation frequency goes to zero) and a geometric part
linear in the rotation frequency, ``dE_g = slope * w``. The geometric phase
is ``-int dE_g dt`` (hbar = 1).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import PerturbativeValidityWarning, PhysicsDomainError
from .fields import FieldTrajectory, _cos_integral, check_ratio
from .systems import ParityDoubletSystem, SpinHalfSystem, StaticSolution, static_mix

EXPANSION_MARGIN = 10.0


@dataclass(frozen=True)
class OscillatoryTerm:
    """``amplitude * cos(beat_frequency * t + phase)`` contribution to a shift."""

    amplitude: float
    beat_frequency: float
    phase: float
    part: str  # "quasi_static" or "geometric"

    def __call__(self, t):
        return self.amplitude * math.cos(self.beat_frequency * t + self.phase)

    def integral(self, T: float) -> float:
        return self.amplitude * _cos_integral(self.beat_frequency, self.phase, T)


@dataclass(frozen=True)
class ShiftDecomposition:
    """Energy shift split as ``quasi_static + geometric_slope * reference_frequency``
    plus retained cross terms at the beat frequencies.

    ``quasi_static`` and ``geometric_slope`` are None when the first-order
    expansion is not trustworthy; ``exact`` then still carries the full value.
    """

    quasi_static: Optional[float]
    geometric_slope: Optional[float]
    reference_frequency: float
    oscillatory_terms: tuple[OscillatoryTerm, ...] = ()
    exact: Optional[float] = None
    analytic_slope: Optional[float] = None
    slope_residual: Optional[float] = None
    blocked_by: Optional[str] = None  # denominator that prevented the expansion

    @property
    def expanded(self) -> bool:
        return self.quasi_static is not None and self.geometric_slope is not None

    @property
    def geometric_energy(self) -> float:
        self._need_expansion()
        return self.geometric_slope * self.reference_frequency

    def _need_expansion(self):
        if not self.expanded:
            what = self.blocked_by or "an energy denominator"
            raise PhysicsDomainError(
                f"first-order expansion unavailable: {what} is within "
                f"{EXPANSION_MARGIN:g}x the rotation frequency",
                check=self.blocked_by or "expansion",
            )

    def quasi_static_at(self, t: float) -> float:
        self._need_expansion()
        osc = sum(o(t) for o in self.oscillatory_terms if o.part == "quasi_static")
        return self.quasi_static + osc

    def geometric_at(self, t: float) -> float:
        osc = sum(o(t) for o in self.oscillatory_terms if o.part == "geometric")
        return self.geometric_energy + osc

    def phases(self, T: float) -> "PhaseResult":
        """Integrate both parts over [0, T]; phase = -int shift dt."""
        self._need_expansion()
        geo = self.geometric_energy * T
        qs = self.quasi_static * T
        for o in self.oscillatory_terms:
            if o.part == "geometric":
                geo += o.integral(T)
            else:
                qs += o.integral(T)
        return PhaseResult(geometric_phase=-geo, quasi_static_phase=-qs, duration=T)


@dataclass(frozen=True)
class PhaseResult:
    geometric_phase: float
    quasi_static_phase: float
    duration: float


@dataclass(frozen=True)
class LevelShifts:
    """Shifts of the two stretched states and of their difference (plus - minus)."""

    plus: ShiftDecomposition
    minus: ShiftDecomposition
    difference: ShiftDecomposition
    static: Optional[StaticSolution] = None

    @property
    def exact_plus(self):
        return self.plus.exact

    @property
    def exact_minus(self):
        return self.minus.exact


# spin-1/2 ------------------------------------------------------------------


def _spinhalf_checks(system, trajectory):
    if trajectory.static_z == 0:
        raise PhysicsDomainError("static_z = 0: no quantization axis", check="static_z")
    check_ratio(trajectory, "spinhalf_shifts")
    w0 = system.larmor(trajectory.static_z)
    expand = True
    for c in trajectory.components:
        if c.amplitude == 0:
            continue
        w = c.angular_frequency
        if abs(w) >= abs(w0):
            raise PhysicsDomainError(
                f"rotation frequency {w:g} at or beyond Larmor frequency {w0:g}: "
                "perturbation theory invalid",
                check="resonance",
            )
        if abs(w0 - w) < EXPANSION_MARGIN * abs(w) or abs(w0) < EXPANSION_MARGIN * abs(w):
            expand = False
    if not expand:
        warnings.warn(
            "denominator within 10x the rotation frequency; reporting exact shift only",
            PerturbativeValidityWarning,
            stacklevel=3,
        )
    return w0, expand


def spinhalf_shifts(system: SpinHalfSystem, trajectory: FieldTrajectory) -> LevelShifts:
    """Second-order shifts of |+-1/2> from every transverse component and every pair.

    For components j, k with rotation angles th_k = w_k t + p_k the |+1/2>
    shift is 1/4 gamma^2 sum_jk a_j a_k exp(i(th_k - th_j)) / (w_j - w0); its
    real part is reported (the imaginary parts cancel in the difference) and
    the |-1/2> shift is its negative. Each term is expanded to first order in
    the rotation frequencies.
    """
    w0, expand = _spinhalf_checks(system, trajectory)
    g = system.gamma
    bz = trajectory.static_z
    comps = [c for c in trajectory.components if c.amplitude > 0]

    qs = 0.0
    geo = 0.0
    exact = 0.0
    osc_plus = []
    for c in comps:
        qs += -0.25 * g * c.amplitude**2 / bz
        geo += -0.25 * (c.amplitude / bz) ** 2 * c.angular_frequency
        exact += 0.25 * g * g * c.amplitude**2 / (c.angular_frequency - w0)
    for j in range(len(comps)):
        for k in range(j + 1, len(comps)):
            cj, ck = comps[j], comps[k]
            beat = ck.angular_frequency - cj.angular_frequency
            ph = ck.initial_phase - cj.initial_phase
            aa = cj.amplitude * ck.amplitude
            osc_plus.append(OscillatoryTerm(-0.5 * g * aa / bz, beat, ph, "quasi_static"))
            osc_plus.append(
                OscillatoryTerm(
                    -0.25 * aa / bz**2 * (cj.angular_frequency + ck.angular_frequency),
                    beat,
                    ph,
                    "geometric",
                )
            )

    ref, slope_scale = _reference(comps, bz)

    def build(sign):
        if not expand:
            return ShiftDecomposition(None, None, ref, (), exact=sign * exact)
        osc = tuple(
            OscillatoryTerm(sign * o.amplitude, o.beat_frequency, o.phase, o.part)
            for o in osc_plus
        )
        slope = sign * geo / ref if ref else sign * slope_scale
        return ShiftDecomposition(sign * qs, slope, ref, osc, exact=sign * exact)

    plus = build(1.0)
    minus = build(-1.0)
    diff = build(2.0)
    return LevelShifts(plus=plus, minus=minus, difference=diff)


def _reference(comps, bz):
    """Reference frequency for the slope: first component with nonzero frequency."""
    for c in comps:
        if c.angular_frequency != 0:
            return c.angular_frequency, 0.0
    # no rotation at all: the geometric energy is zero, the slope is still defined
    a2 = sum(c.amplitude**2 for c in comps)
    return 0.0, -0.25 * a2 / bz**2


def spinhalf_geometric_phase(system: SpinHalfSystem, trajectory: FieldTrajectory, T: float) -> PhaseResult:
    """Relative phase of |+1/2> versus |-1/2> from the geometric part of the shift."""
    shifts = spinhalf_shifts(system, trajectory)
    return shifts.difference.phases(T)


# parity doublet ------------------------------------------------------------


def _doublet_shifts(
    coupling2: float,
    w0_weight: float,
    w1_weight: float,
    st: StaticSolution,
    omega: float,
    margin: float,
    strict_delta1: bool = False,
) -> LevelShifts:
    """Shared algebra of the three doublet cases.

    ``coupling2`` is the squared transverse matrix element scale (d0 E_perp or
    mu0 B_perp, squared); ``w0_weight``/``w1_weight`` multiply the terms with
    denominators Delta0 and Delta1.
    """
    z = st.zeeman_z
    terms = []
    for name, delta, weight in (("Delta0", st.delta0, w0_weight), ("Delta1", st.delta1, w1_weight)):
        if weight == 0:
            continue
        terms.append((name, delta, weight))

    if strict_delta1 and st.delta1 != 0 and abs(omega) >= abs(st.delta1):
        raise PhysicsDomainError(
            f"rotation frequency {omega:g} reaches |Delta1| = {abs(st.delta1):g}: "
            "virtual level crosses a real one",
            check="Delta1",
        )

    blocked = None
    for name, delta, _ in terms:
        for label, den in (
            (f"{name} + mu_z Bz + w", delta + z + omega),
            (f"{name} - mu_z Bz - w", delta - z - omega),
        ):
            if abs(den) <= margin:
                raise PhysicsDomainError(
                    f"denominator {label} = {den:.3g} within margin {margin:g} of zero",
                    check=label,
                )
        for label, den0 in ((f"{name} + mu_z Bz", delta + z), (f"{name} - mu_z Bz", delta - z)):
            if blocked is None and abs(den0) < EXPANSION_MARGIN * abs(omega):
                blocked = label

    half = 0.5 * coupling2
    plus = half * sum(w / (d + z + omega) for _, d, w in terms)
    minus = half * sum(w / (d - z - omega) for _, d, w in terms)

    if blocked is not None:
        warnings.warn(
            f"{blocked} within {EXPANSION_MARGIN:g}x the rotation frequency; reporting exact shifts only",
            PerturbativeValidityWarning,
            stacklevel=3,
        )
        diff = ShiftDecomposition(None, None, omega, exact=plus - minus, blocked_by=blocked)
        return LevelShifts(
            ShiftDecomposition(None, None, omega, exact=plus, blocked_by=blocked),
            ShiftDecomposition(None, None, omega, exact=minus, blocked_by=blocked),
            diff,
            static=st,
        )

    qs_plus = half * sum(w / (d + z) for _, d, w in terms)
    qs_minus = half * sum(w / (d - z) for _, d, w in terms)
    slope_plus = -half * sum(w / (d + z) ** 2 for _, d, w in terms)
    slope_minus = half * sum(w / (d - z) ** 2 for _, d, w in terms)
    return LevelShifts(
        plus=ShiftDecomposition(qs_plus, slope_plus, omega, exact=plus, analytic_slope=slope_plus),
        minus=ShiftDecomposition(qs_minus, slope_minus, omega, exact=minus, analytic_slope=slope_minus),
        difference=ShiftDecomposition(
            qs_plus - qs_minus,
            slope_plus - slope_minus,
            omega,
            exact=plus - minus,
            analytic_slope=slope_plus - slope_minus,
        ),
        static=st,
    )


def _default_margin(system):
    return 1e-12 * system.half_splitting_B


def spin1_efield_shifts(
    system: ParityDoubletSystem, Ez: float, E_perp: float, omega: float, margin: float = None
) -> LevelShifts:
    """AC Stark shifts of |1,+-1> in a static Ez plus a transverse E rotating at ``omega``.

    To first order the quasi-static difference vanishes and the slope is
    -(E_perp/Ez)^2 whatever B and d0 are.
    """
    if not Ez > 0:
        raise PhysicsDomainError("Ez must be > 0 for the rotating-E shifts", check="Ez")
    st = static_mix(system, Ez, 0.0)
    margin = _default_margin(system) if margin is None else margin
    return _doublet_shifts(
        (system.d0 * E_perp) ** 2, st.cos2_half, st.sin2_half, st, omega, margin, strict_delta1=True
    )


def spin1_rotE_staticB_shifts(
    system: ParityDoubletSystem,
    Ez: float,
    Bz: float,
    E_perp: float,
    omega: float,
    margin: float = None,
) -> LevelShifts:
    """Rotating E with static Ez and Bz; Zeeman energy mu0 Bz enters every denominator."""
    if not Ez > 0:
        raise PhysicsDomainError("Ez must be > 0 for the rotating-E shifts", check="Ez")
    st = static_mix(system, Ez, Bz)
    margin = _default_margin(system) if margin is None else margin
    return _doublet_shifts((system.d0 * E_perp) ** 2, st.cos2_half, st.sin2_half, st, omega, margin)


def spin1_rotB_staticE_shifts(
    system: ParityDoubletSystem,
    Ez: float,
    Bz: float,
    B_perp: float,
    omega: float,
    margin: float = None,
) -> LevelShifts:
    """Rotating B with static Ez and Bz; note the sin^2/cos^2 weights swap
    relative to the rotating-E case because mu couples |1,+-1> to |1,0>."""
    st = static_mix(system, abs(Ez), Bz)
    margin = _default_margin(system) if margin is None else margin
    return _doublet_shifts((system.mu0 * B_perp) ** 2, st.sin2_half, st.cos2_half, st, omega, margin)


# numerical split -----------------------------------------------------------


def geometric_decompose(
    shift_fn: Callable[[float], float],
    omega_eval: float,
    analytic_slope: float = None,
    step: float = None,
    rtol: float = 1e-6,
) -> ShiftDecomposition:
    """Split ``shift_fn(w)`` into its value at w=0 and its slope at w=0.

    The slope is a Richardson-refined central difference. Two refinements
    at steps h and h/2 must agree to ``rtol`` (or to the rounding floor);
    otherwise the input is treated as non-smooth and rejected.
    """
    h = step if step is not None else (0.1 * abs(omega_eval) if omega_eval else 1e-4)
    f0 = float(shift_fn(0.0))

    def central(hh):
        fp, fm = float(shift_fn(hh)), float(shift_fn(-hh))
        return (fp - fm) / (2 * hh), max(abs(fp), abs(fm))

    d1, m1 = central(h)
    d2, m2 = central(h / 2)
    d3, m3 = central(h / 4)
    r1 = (4 * d2 - d1) / 3
    r2 = (4 * d3 - d2) / 3
    scale = max(abs(f0), m1, m2, m3)
    noise = 64 * 2.2e-16 * scale / (h / 4)
    err = abs(r2 - r1)
    if err > max(rtol * abs(r2), noise):
        raise PhysicsDomainError(
            f"finite-difference slope unstable (change {err:.3g}, noise floor {noise:.3g}); "
            "shift function is not smooth near 0",
            check="smoothness",
        )
    residual = None if analytic_slope is None else r2 - analytic_slope
    return ShiftDecomposition(
        quasi_static=f0,
        geometric_slope=r2,
        reference_frequency=omega_eval,
        exact=float(shift_fn(omega_eval)),
        analytic_slope=analytic_slope,
        slope_residual=residual,
    )
