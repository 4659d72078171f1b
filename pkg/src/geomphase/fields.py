"""Field trajectories: a static longitudinal part plus rotating transverse harmonics.

A trajectory is

    F(t) = sum_k a_k (cos(w_k t + p_k), sin(w_k t + p_k), 0) + (0, 0, static_z)

with positive ``w_k`` rotating counter-clockwise about +z. The geometric
quantities here (swept area, solid angle) are the inputs of the
solid-angle route to the geometric phase.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import PerturbativeValidityWarning, PhysicsDomainError

RATIO_WARN = 0.3
RATIO_FAIL = 1.0

# Gauss-Legendre panel rule for the exact solid angle.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)
_PANELS_PER_TURN = 64


@dataclass(frozen=True)
class RotatingComponent:
    amplitude: float
    angular_frequency: float
    initial_phase: float = 0.0

    def __post_init__(self):
        if not self.amplitude >= 0:
            raise ValueError(f"amplitude must be >= 0, got {self.amplitude}")
        object.__setattr__(self, "amplitude", float(self.amplitude))
        object.__setattr__(self, "angular_frequency", float(self.angular_frequency))
        object.__setattr__(self, "initial_phase", float(self.initial_phase) % (2 * math.pi))


@dataclass(frozen=True)
class FieldTrajectory:
    static_z: float
    components: tuple[RotatingComponent, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "static_z", float(self.static_z))
        object.__setattr__(self, "components", tuple(self.components))

    @classmethod
    def circular(cls, static_z, amplitude, angular_frequency, initial_phase=0.0):
        """Single rotating component, the classic cone-shaped loop."""
        return cls(static_z, (RotatingComponent(amplitude, angular_frequency, initial_phase),))

    @property
    def transverse_sum(self) -> float:
        return sum(c.amplitude for c in self.components)

    @property
    def ratio(self) -> float:
        """Worst-case transverse/longitudinal ratio, sum(a_k)/|static_z|."""
        s = self.transverse_sum
        if self.static_z == 0:
            return math.inf if s > 0 else 0.0
        return s / abs(self.static_z)

    @property
    def max_frequency(self) -> float:
        return max((abs(c.angular_frequency) for c in self.components), default=0.0)

    def __call__(self, t):
        return evaluate(self, t)


def check_ratio(trajectory: FieldTrajectory, what="small-angle expansion"):
    """Warn above RATIO_WARN, raise at or above RATIO_FAIL."""
    r = trajectory.ratio
    if r >= RATIO_FAIL:
        raise PhysicsDomainError(
            f"{what}: transverse/longitudinal ratio {r:.3g} >= {RATIO_FAIL}", check="ratio"
        )
    if r > RATIO_WARN:
        warnings.warn(
            f"{what}: transverse/longitudinal ratio {r:.3g} exceeds {RATIO_WARN}",
            PerturbativeValidityWarning,
            stacklevel=3,
        )
    return r


def _angles(trajectory, t):
    t = np.asarray(t, dtype=float)
    if not trajectory.components:
        z = np.zeros((0,) + t.shape)
        return t, z, z, z
    a = np.array([c.amplitude for c in trajectory.components])
    w = np.array([c.angular_frequency for c in trajectory.components])
    p = np.array([c.initial_phase for c in trajectory.components])
    theta = w.reshape((-1,) + (1,) * t.ndim) * t + p.reshape((-1,) + (1,) * t.ndim)
    return t, theta, a.reshape((-1,) + (1,) * t.ndim), w.reshape((-1,) + (1,) * t.ndim)


def evaluate(trajectory: FieldTrajectory, t):
    """Field vector at time(s) ``t``; shape ``t.shape + (3,)``."""
    t, theta, a, _ = _angles(trajectory, t)
    x = np.sum(a * np.cos(theta), axis=0)
    y = np.sum(a * np.sin(theta), axis=0)
    z = np.full(t.shape, trajectory.static_z)
    return np.stack([x, y, z], axis=-1)


def evaluate_derivative(trajectory: FieldTrajectory, t):
    """Time derivative of :func:`evaluate`."""
    t, theta, a, w = _angles(trajectory, t)
    x = np.sum(-a * w * np.sin(theta), axis=0)
    y = np.sum(a * w * np.cos(theta), axis=0)
    return np.stack([x, y, np.zeros(t.shape)], axis=-1)


def coupling_vector(trajectory: FieldTrajectory, t):
    """Field vector as it enters the interaction Hamiltonians.

    The energy-shift formulas in :mod:`geomphase.perturbation` are written for
    the spherical decomposition in which a component turning at +w couples
    through ``S_- exp(-i w t) + S_+ exp(+i w t)``. Expressed as a Cartesian
    vector that is the conjugate phasor, i.e. the y part enters with the
    opposite sign. Building the Hamiltonians from this vector keeps the
    direct integration, the energy shifts and the solid angles on one sign
    convention: a counter-clockwise loop gives a positive phase difference
    between the stretched states.
    """
    v = evaluate(trajectory, t)
    v[..., 1] *= -1.0
    return v


def swept_area(trajectory: FieldTrajectory, T: float) -> float:
    """Signed area swept by the transverse field over [0, T].

    Closed form of 1/2 int_0^T (F_perp x dF_perp/dt) . z dt. Equal
    frequencies take the analytic limit of the cross term.
    """
    if T < 0:
        raise ValueError("T must be >= 0")
    comps = trajectory.components
    total = sum(c.amplitude**2 * c.angular_frequency * T for c in comps)
    for j in range(len(comps)):
        for k in range(j + 1, len(comps)):
            total += cross_term_integral(comps[j], comps[k], T)
    return 0.5 * total


def cross_term_integral(cj: RotatingComponent, ck: RotatingComponent, T: float) -> float:
    """int_0^T a_j a_k (w_j + w_k) cos((w_k - w_j) t + p_k - p_j) dt."""
    dw = ck.angular_frequency - cj.angular_frequency
    dp = ck.initial_phase - cj.initial_phase
    pref = cj.amplitude * ck.amplitude * (cj.angular_frequency + ck.angular_frequency)
    return pref * _cos_integral(dw, dp, T)


def _cos_integral(dw, dp, T):
    """int_0^T cos(dw t + dp) dt, stable as dw -> 0."""
    x = 0.5 * dw * T
    if abs(x) < 1e-4:
        # sin(dwT + dp) - sin(dp) = 2 cos(dp + x) sin(x)
        sinc = 1.0 - x * x / 6.0 + x**4 / 120.0
        return T * math.cos(dp + x) * sinc
    return (math.sin(dw * T + dp) - math.sin(dp)) / dw


def solid_angle_small(trajectory: FieldTrajectory, T: float) -> float:
    """Small-tilt solid angle, swept area / static_z**2."""
    if trajectory.static_z == 0:
        raise PhysicsDomainError("static_z = 0: quantization axis undefined", check="static_z")
    check_ratio(trajectory, "solid_angle_small")
    return swept_area(trajectory, T) / trajectory.static_z**2


def _solid_angle_integrand(trajectory, t):
    f = evaluate(trajectory, t)
    df = evaluate_derivative(trajectory, t)
    perp2 = f[..., 0] ** 2 + f[..., 1] ** 2
    cross = f[..., 0] * df[..., 1] - f[..., 1] * df[..., 0]
    bz = abs(trajectory.static_z)
    mag = np.sqrt(perp2 + bz * bz)
    if np.any(mag == 0):
        raise PhysicsDomainError("total field vanishes on the path", check="zero_field")
    # (1 - cos theta) dphi/dt with theta from the quantization axis;
    # (1 - cos)/perp2 = 1/(|F|(|F| + |Fz|)) has no singularity at perp2 = 0.
    return cross / (mag * (mag + bz))


def solid_angle_exact(trajectory: FieldTrajectory, T: float, rtol: float = 1e-12) -> float:
    """Solid angle int (1 - cos theta) dphi traced by the field direction on [0, T].

    theta is measured from the quantization axis sign(static_z) z, phi about +z,
    so the result is signed by the circulation sense. Composite Gauss-Legendre
    panels are refined by doubling until two successive estimates agree.
    """
    if T < 0:
        raise ValueError("T must be >= 0")
    if T == 0 or not trajectory.components:
        return 0.0
    wmax = trajectory.max_frequency
    panels = max(1, math.ceil(T * wmax * _PANELS_PER_TURN / (2 * math.pi)))
    prev = _panel_quadrature(trajectory, T, panels)
    for _ in range(6):
        panels *= 2
        cur = _panel_quadrature(trajectory, T, panels)
        if abs(cur - prev) <= rtol * max(abs(cur), 1e-300):
            return cur
        prev = cur
    return cur


def _panel_quadrature(trajectory, T, panels, chunk=1 << 16):
    edges = np.linspace(0.0, T, panels + 1)
    total = 0.0
    for s in range(0, panels, chunk):
        e = min(s + chunk, panels)
        lo = edges[s:e]
        hi = edges[s + 1 : e + 1]
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        t = mid[:, None] + half[:, None] * _GL_NODES[None, :]
        vals = _solid_angle_integrand(trajectory, t)
        total += float(np.sum(half * (vals @ _GL_WEIGHTS)))
    return total
