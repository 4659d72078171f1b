"""Level structures: a spin-1/2 moment, and a J=1 level with an opposite-parity J=0 partner.

Basis conventions (fixed everywhere in the package):

* spin-1/2: ``(|+1/2>, |-1/2>)``
* parity doublet: ``(|0,0>, |1,-1>, |1,0>, |1,+1>)`` labelled by ``(J, m_J)``

Units have hbar = 1, so energies and angular frequencies share a unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SPIN_HALF_LABELS = (0.5, -0.5)
DOUBLET_LABELS = ((0, 0), (1, -1), (1, 0), (1, 1))

_SQ2 = math.sqrt(2.0)

SX = np.array([[0, 0.5], [0.5, 0]], dtype=complex)
SY = np.array([[0, -0.5j], [0.5j, 0]], dtype=complex)
SZ = np.array([[0.5, 0], [0, -0.5]], dtype=complex)


def _doublet_angular_momentum():
    # J=1 block at indices 1..3 (m = -1, 0, +1); J=0 state carries none.
    jp = np.zeros((4, 4), dtype=complex)
    jp[2, 1] = _SQ2  # |1,0> <- |1,-1>
    jp[3, 2] = _SQ2  # |1,+1> <- |1,0>
    jm = jp.conj().T
    jx = 0.5 * (jp + jm)
    jy = -0.5j * (jp - jm)
    jz = np.diag([0.0, -1.0, 0.0, 1.0]).astype(complex)
    return jx, jy, jz


JX, JY, JZ = _doublet_angular_momentum()


@dataclass(frozen=True)
class SpinHalfSystem:
    gamma: float

    def __post_init__(self):
        if self.gamma == 0:
            raise ValueError("gamma must be nonzero")

    def larmor(self, bz: float) -> float:
        """Longitudinal Larmor frequency gamma * Bz (signed)."""
        return self.gamma * bz


@dataclass(frozen=True)
class ParityDoubletSystem:
    """J=1 level at +B and a J=0 partner at -B (zero-field separation 2B)."""

    half_splitting_B: float
    d0: float
    mu0: float = 0.0

    def __post_init__(self):
        if not self.half_splitting_B > 0:
            raise ValueError("half_splitting_B must be > 0")
        if not self.d0 > 0:
            raise ValueError("d0 must be > 0")
        if not self.mu0 >= 0:
            raise ValueError("mu0 must be >= 0")


@dataclass(frozen=True)
class StaticSolution:
    """Stark-mixed eigenbasis of the doublet in a longitudinal field."""

    xi: float
    energy_tilde10: float
    energy_tilde00: float
    delta0: float
    delta1: float
    zeeman_z: float
    sin2_half: float
    cos2_half: float

    @property
    def stark_energy(self) -> float:
        """sqrt(B^2 + d0^2 Ez^2)."""
        return self.energy_tilde10


def static_mix(system: ParityDoubletSystem, Ez: float, Bz: float = 0.0) -> StaticSolution:
    """Mixing angle, perturbed energies and the denominators Delta0 > 0 >= Delta1.

    Uses cancellation-free forms, e.g. Delta1 = -(d0 Ez)^2 / (B + R), so the
    weak-field regimes (d0 Ez << B) stay accurate. A negative Ez flips the sign
    of xi; the level energies and sin^2, cos^2 weights are even in Ez.
    """
    B = system.half_splitting_B
    de = system.d0 * Ez
    R = math.hypot(B, de)
    delta0 = B + R
    delta1 = -(de * de) / (B + R)
    sin2 = de * de / (2 * R * (R + B))
    cos2 = (R + B) / (2 * R)
    return StaticSolution(
        xi=math.atan2(de, B),
        energy_tilde10=R,
        energy_tilde00=-R,
        delta0=delta0,
        delta1=delta1,
        zeeman_z=system.mu0 * Bz,
        sin2_half=sin2,
        cos2_half=cos2,
    )


def _hermitize(h):
    # exact symmetry: keep the upper triangle, mirror it
    upper = np.triu(h, 1)
    diag = np.real(np.diagonal(h, axis1=-2, axis2=-1))
    out = upper + np.conj(np.swapaxes(upper, -1, -2))
    idx = np.arange(h.shape[-1])
    out[..., idx, idx] = diag
    return out


def hamiltonian_spinhalf(system: SpinHalfSystem, field) -> np.ndarray:
    """-gamma S.F in the |m_S = +-1/2> basis; ``field`` may carry leading axes."""
    f = np.asarray(field, dtype=float)
    h = -system.gamma * (
        f[..., 0, None, None] * SX + f[..., 1, None, None] * SY + f[..., 2, None, None] * SZ
    )
    return _hermitize(h)


def hamiltonian_doublet(system: ParityDoubletSystem, Efield, Bfield=None) -> np.ndarray:
    """-D.E plus the magnetic coupling, in the basis (|0,0>, |1,-1>, |1,0>, |1,+1>).

    Dipole matrix elements: <1,0|D|0,0> = d0 z, <1,+-1|D|0,0> = -d0 r_-+1 with
    r_+-1 = -+(x +- i y)/sqrt2. The magnetic term is mu0 J.B on the J=1 block,
    which puts |1,m> at B + mu0 Bz m; that is the sign under which the shifts
    in :mod:`geomphase.perturbation` carry ``Delta + mu0 Bz`` for m = +1. The
    transverse magnetic elements obey <1,+-1|mu|1,0> = -mu0 r_-+1.
    """
    E = np.asarray(Efield, dtype=float)
    lead = E.shape[:-1]
    if Bfield is None:
        Bv = np.zeros(lead + (3,))
    else:
        Bv = np.broadcast_to(np.asarray(Bfield, dtype=float), lead + (3,))
    B = system.half_splitting_B
    d0 = system.d0
    h = np.zeros(lead + (4, 4), dtype=complex)
    h[..., 0, 0] = -B
    h[..., 1, 1] = B
    h[..., 2, 2] = B
    h[..., 3, 3] = B
    ex, ey, ez = E[..., 0], E[..., 1], E[..., 2]
    # <J|H|0,0> = -<J|D|0,0>.E, stored in the upper triangle as <0,0|H|J>
    h[..., 0, 2] = -d0 * ez
    h[..., 0, 3] = np.conj(d0 * (ex - 1j * ey) / _SQ2)
    h[..., 0, 1] = np.conj(-d0 * (ex + 1j * ey) / _SQ2)
    if system.mu0:
        h = h + system.mu0 * (
            Bv[..., 0, None, None] * JX + Bv[..., 1, None, None] * JY + Bv[..., 2, None, None] * JZ
        )
    return _hermitize(h)
