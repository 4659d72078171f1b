"""Direct Schrodinger integration: the reference every other route is checked against.

The state is propagated in the fixed basis with classical fixed-step RK4.
Phases are read off against instantaneous eigenvectors carried by parallel
transport, so for each tracked level

    total     = arg <psi(0)|psi(T)>   (accumulated continuously)
    dynamical = -int E_n(t) dt
    geometric = total - dynamical

For a closed loop this is the Berry phase plus non-adiabatic corrections;
for an open path it is the Pancharatnam (noncyclic) geometric phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import OracleError
from .fields import FieldTrajectory, coupling_vector
from .systems import (
    DOUBLET_LABELS,
    JX,
    JY,
    JZ,
    SPIN_HALF_LABELS,
    ParityDoubletSystem,
    SpinHalfSystem,
    hamiltonian_doublet,
    hamiltonian_spinhalf,
)

_CHUNK_STEPS = 1 << 14
_DEGENERACY_RTOL = 1e-9


@dataclass(frozen=True)
class EvolutionConfig:
    steps_per_fastest_period: int = 256
    unitarity_tolerance: float = 1e-9
    max_phase_per_step: float = math.pi / 8

    def __post_init__(self):
        if int(self.steps_per_fastest_period) < 64:
            raise ValueError("steps_per_fastest_period must be >= 64")
        if not self.unitarity_tolerance > 0 or not self.max_phase_per_step > 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class OraclePhaseReport:
    labels: tuple
    total_phase: dict
    dynamical_phase: dict
    geometric_phase: dict
    adiabaticity: float
    unitarity_drift: float
    duration: float
    steps: int
    stretched: tuple = field(default=None)

    @property
    def geometric_difference(self) -> float:
        """phi_g(m = +max) - phi_g(m = -max)."""
        plus, minus = self.stretched
        return self.geometric_phase[plus] - self.geometric_phase[minus]

    @property
    def total_difference(self) -> float:
        plus, minus = self.stretched
        return self.total_phase[plus] - self.total_phase[minus]


@dataclass(frozen=True)
class DressedResult:
    rotating_splitting: float
    lab_splitting: float
    geometric_phase: float


# Hamiltonian sampling ------------------------------------------------------


def _sample(H, t):
    t = np.asarray(t, dtype=float)
    try:
        h = np.asarray(H(t))
    except Exception:
        h = None
    if h is None or h.ndim != 3 or h.shape[0] != t.shape[0]:
        h = np.stack([np.asarray(H(float(tt))) for tt in t])
    return h.astype(complex, copy=False)


def _check_hermitian(h):
    scale = max(1.0, float(np.max(np.abs(h))))
    asym = float(np.max(np.abs(h - np.conj(np.swapaxes(h, -1, -2)))))
    if asym > 1e-12 * scale:
        raise ValueError(f"Hamiltonian is not Hermitian (asymmetry {asym:.3g})")


def _choose_grid(H, psi0, T, cfg, frequencies, offset):
    """Fixed step from the fastest relevant frequency, tightened if needed so the
    predicted RK4 norm loss stays below a quarter of the tolerance."""
    probe_t = np.linspace(0.0, T, 9)
    hp = _sample(H, probe_t)
    _check_hermitian(hp)
    w = np.linalg.eigvalsh(hp)
    spread = float(np.max(w[:, -1] - w[:, 0]))
    rel = float(np.max(np.abs(w - offset)))
    fmax = max([spread, rel] + [abs(f) for f in frequencies])
    if fmax == 0:
        return 1, float(T)
    h = 2 * math.pi / (fmax * cfg.steps_per_fastest_period)

    # RK4: |R(iz)|^2 = 1 - z^6/72 + ..., per eigencomponent of weight p
    w0, v0 = np.linalg.eigh(hp[0])
    p = np.abs(v0.conj().T @ psi0) ** 2
    p = np.maximum(p, 1e-6)
    s6 = float(np.sum(p * np.abs(w0 - offset) ** 6))
    if s6 > 0 and T > 0:
        # capped: a tolerance out of reach should fail fast, not run forever
        h_tol = (18.0 * cfg.unitarity_tolerance / (T * s6)) ** 0.2
        h = max(min(h, h_tol), h / 8)
    n = max(1, math.ceil(T / h))
    return n, T / n


def _refined(n, drift, tol, attempt):
    """Step count for a rerun after a drift failure, or None to give up.

    Local norm loss scales as h^5, so one rescaled rerun usually lands well
    inside the tolerance. Refinements beyond 8x are not attempted.
    """
    if attempt >= 2 or drift <= 0:
        return None
    shrink = (0.5 * tol / drift) ** 0.2
    if shrink < 0.125:
        return None
    return math.ceil(n / shrink)


def _drift_error(drift, tol):
    return OracleError(f"norm drift {drift:.3g} exceeds tolerance {tol:g}; increase steps_per_fastest_period")


def _rk4_maps(A, h):
    """One RK4 step as a matrix, from A = -i(H - c) at t, t + h/2, t + h."""
    A1, A2, A3 = A[0:-1:2], A[1::2], A[2::2]
    d = A.shape[-1]
    eye = np.eye(d)
    K1 = A1
    K2 = A2 @ (eye + 0.5 * h * K1)
    K3 = A2 @ (eye + 0.5 * h * K2)
    K4 = A3 @ (eye + h * K3)
    return eye + (h / 6.0) * (K1 + 2 * K2 + 2 * K3 + K4)


def _scan(M, psi):
    """States after each of the steps M[0], M[1], ... applied to psi.

    Blocked prefix product: cumulative products inside sqrt(n)-sized blocks
    (vectorized across blocks), then a short sequential pass over blocks.
    Same arithmetic as stepping one at a time, up to rounding order.
    """
    n, d, _ = M.shape
    K = max(1, math.isqrt(n))
    nb = -(-n // K)
    pad = nb * K - n
    if pad:
        M = np.concatenate([M, np.broadcast_to(np.eye(d, dtype=complex), (pad, d, d))])
    Mb = M.reshape(nb, K, d, d)
    P = np.empty_like(Mb)
    P[:, 0] = Mb[:, 0]
    for j in range(1, K):
        P[:, j] = Mb[:, j] @ P[:, j - 1]
    starts = np.empty((nb, d), dtype=complex)
    s = psi
    for b in range(nb):
        starts[b] = s
        s = P[b, -1] @ s
    out = np.einsum("bkij,bj->bki", P, starts).reshape(nb * K, d)
    return out[:n]


def _chunks(H, psi0, n_steps, h, offset):
    """Yield (step index of chunk start, times on the half-step grid, H there,
    states at the chunk's step points including its first)."""
    psi = np.asarray(psi0, dtype=complex)
    d = psi.shape[0]
    shift = offset * np.eye(d)
    for k0 in range(0, n_steps, _CHUNK_STEPS):
        k1 = min(n_steps, k0 + _CHUNK_STEPS)
        t = (2 * k0 + np.arange(2 * (k1 - k0) + 1)) * (0.5 * h)
        hg = _sample(H, t)
        A = -1j * (hg - shift)
        states = _scan(_rk4_maps(A, h), psi)
        states = np.concatenate([psi[None, :], states])
        yield k0, t, hg, states
        psi = states[-1]


def integrate_tdse(
    H: Callable,
    psi0,
    T: float,
    cfg: EvolutionConfig = None,
    frequencies: Sequence[float] = (),
    energy_offset: float = None,
):
    """Propagate i dpsi/dt = H(t) psi from 0 to T and return psi(T).

    ``H`` maps an array of times to stacked matrices (a scalar-only callable
    also works, just slower). ``frequencies`` lists drive frequencies that
    also bound the step. A constant energy offset, by default <psi0|H(0)|psi0>,
    is removed during stepping and restored exactly at the end. No
    renormalization is applied; excessive norm drift raises OracleError.
    """
    cfg = cfg or EvolutionConfig()
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1) > 1e-12:
        raise ValueError("psi0 must be normalized")
    if T < 0:
        raise ValueError("T must be >= 0")
    if T == 0:
        return psi0.copy()
    h0 = _sample(H, np.array([0.0]))[0]
    c = float(np.real(np.vdot(psi0, h0 @ psi0))) if energy_offset is None else float(energy_offset)
    n, h = _choose_grid(H, psi0, T, cfg, frequencies, c)
    for attempt in range(3):
        drift = 0.0
        psi = psi0
        for _, _, _, states in _chunks(H, psi0, n, h, c):
            drift = max(drift, float(np.max(np.abs(np.sum(np.abs(states) ** 2, axis=1) - 1))))
            psi = states[-1]
        if drift <= cfg.unitarity_tolerance:
            return psi * np.exp(-1j * c * T)
        n = _refined(n, drift, cfg.unitarity_tolerance, attempt)
        if n is None:
            break
        h = T / n
    raise _drift_error(drift, cfg.unitarity_tolerance)


# phase extraction ----------------------------------------------------------


def _resolve_degeneracy(w, V, tiebreak):
    """Inside (near-)degenerate adjacent pairs, rotate to eigenvectors of the
    tiebreak operator, ordered by its eigenvalue."""
    if tiebreak is None:
        return V
    scale = np.maximum(1.0, np.abs(w).max(axis=1))
    gaps = np.diff(w, axis=1)
    d = w.shape[1]
    for i in range(d - 1):
        mask = gaps[:, i] < _DEGENERACY_RTOL * scale
        if not np.any(mask):
            continue
        P = V[mask][:, :, i : i + 2]
        Tm = tiebreak[mask]
        t2 = np.conj(np.swapaxes(P, -1, -2)) @ Tm @ P
        _, U = np.linalg.eigh(t2)
        V[mask, :, i : i + 2] = P @ U
    return V


def _eigen(hg, tiebreak):
    w, V = np.linalg.eigh(hg)
    V = _resolve_degeneracy(w, V, tiebreak)
    return w, V


class _Tracker:
    """Accumulates phases of one tracked level chunk by chunk."""

    def __init__(self, idx, cfg, h):
        self.idx = idx
        self.cfg = cfg
        self.h = h
        self.prev_v = None  # raw eigenvector at the last step point
        self.theta = 0.0  # accumulated gauge rotation
        self.ref = None  # transported eigenvector at t = 0
        self.alpha = None  # last wrapped arg <n~|psi>
        self.total = 0.0
        self.beta_last = None
        self.beta = 0.0
        self.dyn = 0.0
        self.adiabatic = 0.0
        self.drift = 0.0

    def feed(self, t, hg, states, tiebreak):
        i = self.idx
        ws, Vs = _eigen(hg[::2], tiebreak)
        wm = np.linalg.eigvalsh(hg[1::2])
        h = self.h
        v = Vs[:, :, i]

        # dynamical phase, Simpson on each step
        e = ws[:, i]
        self.dyn -= float(np.sum(h / 6.0 * (e[:-1] + 4 * wm[:, i] + e[1:])))

        # parallel-transport gauge
        prev = v[:1] if self.prev_v is None else self.prev_v[None]
        links = np.einsum("ki,ki->k", np.conj(np.vstack([prev, v[:-1]])), v)
        if np.min(np.abs(links)) < 0.5:
            raise OracleError("eigenvalue crossing along the path: tracked eigenvector jumped")
        theta = self.theta + np.cumsum(np.angle(links))
        nt = v * np.exp(-1j * theta)[:, None]
        if self.ref is None:
            self.ref = nt[0].copy()
        # skip the first point of later chunks: it repeats the previous chunk's last
        first = 0 if self.prev_v is None else 1
        self.prev_v = v[-1].copy()
        self.theta = float(theta[-1])

        ov = np.einsum("ki,ki->k", np.conj(nt), states)
        alpha = np.angle(ov[first:])
        hol = np.angle(np.einsum("i,ki->k", np.conj(self.ref), nt[first:]))
        if self.alpha is None:
            self.alpha, self.beta_last = float(alpha[0]), float(hol[0])
            self.total = float(alpha[0])
            alpha, hol = alpha[1:], hol[1:]
        da = np.diff(np.concatenate([[self.alpha], alpha]))
        da = (da + np.pi) % (2 * np.pi) - np.pi
        if da.size and np.max(np.abs(da)) > self.cfg.max_phase_per_step:
            raise OracleError(
                f"phase increment {np.max(np.abs(da)):.3g} per step exceeds "
                f"max_phase_per_step {self.cfg.max_phase_per_step:.3g}; unwrap unsafe"
            )
        db = np.diff(np.concatenate([[self.beta_last], hol]))
        db = (db + np.pi) % (2 * np.pi) - np.pi
        self.total += float(np.sum(da))
        self.beta += float(np.sum(db))
        if alpha.size:
            self.alpha = float(alpha[-1])
            self.beta_last = float(hol[-1])

        self.drift = max(self.drift, float(np.max(np.abs(np.sum(np.abs(states) ** 2, axis=1) - 1))))
        self._adiabaticity(hg, ws, Vs, i)

    def _adiabaticity(self, hg, ws, Vs, i):
        # dH/dt at step points from the neighbouring half-step samples
        n = hg.shape[0]
        hd = np.empty_like(hg[::2])
        hd[1:-1] = (hg[3::2] - hg[1:-2:2]) / self.h
        hd[0] = (hg[1] - hg[0]) / (0.5 * self.h)
        hd[-1] = (hg[n - 1] - hg[n - 2]) / (0.5 * self.h)
        vn = Vs[:, :, i]
        x = np.einsum("kji,kjl,kl->ki", np.conj(Vs), hd, vn)
        gap = ws - ws[:, i : i + 1]
        mag = np.abs(x)
        floor = 1e-12 * max(1.0, float(np.max(np.abs(hd))))
        scale = np.maximum(1.0, np.abs(ws).max(axis=1, keepdims=True))
        tiny_gap = np.abs(gap) < _DEGENERACY_RTOL * scale
        valid = mag > floor
        valid[:, i] = False
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(valid & ~tiny_gap, mag / np.where(tiny_gap, 1.0, gap) ** 2, 0.0)
        if np.any(valid & tiny_gap):
            self.adiabatic = math.inf
        else:
            self.adiabatic = max(self.adiabatic, float(np.max(np.abs(ratio))))


def _run_level(H, psi0, idx, T, cfg, frequencies, offset, tiebreak_fn):
    n, h = _choose_grid(H, psi0, T, cfg, frequencies, offset)
    for attempt in range(3):
        tr = _Tracker(idx, cfg, h)
        for _, t, hg, states in _chunks(H, psi0, n, h, offset):
            tb = None if tiebreak_fn is None else tiebreak_fn(t[::2])
            tr.feed(t, hg, states, tb)
        if tr.drift <= cfg.unitarity_tolerance:
            break
        n = _refined(n, tr.drift, cfg.unitarity_tolerance, attempt)
        if n is None:
            raise _drift_error(tr.drift, cfg.unitarity_tolerance)
        h = T / n
    else:
        raise _drift_error(tr.drift, cfg.unitarity_tolerance)
    # the offset frame rotates every amplitude by exp(+i c t); undo it
    total = tr.total + tr.beta - offset * T
    return total, tr.dyn, tr.adiabatic, tr.drift, n


def extract_phases(
    H: Callable,
    T: float,
    levels: Sequence[int],
    cfg: EvolutionConfig = None,
    frequencies: Sequence[float] = (),
    tiebreak: Callable = None,
    labels: Sequence = None,
) -> OraclePhaseReport:
    """Total, dynamical and geometric phase of the instantaneous eigenstates
    continuously connected (at t=0) to the given fixed-basis indices."""
    cfg = cfg or EvolutionConfig()
    if T < 0:
        raise ValueError("T must be >= 0")
    labels = tuple(levels if labels is None else labels)
    h0 = _sample(H, np.array([0.0]))
    tb0 = None if tiebreak is None else tiebreak(np.array([0.0]))
    w0, V0 = _eigen(h0, tb0)
    w0, V0 = w0[0], V0[0]
    total, dyn, geo = {}, {}, {}
    adiabatic, drift, steps = 0.0, 0.0, 0
    for basis_index, label in zip(levels, labels):
        idx = int(np.argmax(np.abs(V0[basis_index, :])))
        psi0 = V0[:, idx].copy()
        if T == 0:
            total[label] = dyn[label] = geo[label] = 0.0
            continue
        tot, dy, ad, dr, n = _run_level(H, psi0, idx, T, cfg, frequencies, float(w0[idx]), tiebreak)
        total[label], dyn[label], geo[label] = tot, dy, tot - dy
        adiabatic = max(adiabatic, ad)
        drift = max(drift, dr)
        steps += n
    stretched = (labels[0], labels[-1]) if len(labels) >= 2 else None
    return OraclePhaseReport(labels, total, dyn, geo, adiabatic, drift, T, steps, stretched)


def extract_geometric_phase(
    system,
    T: float,
    bfield: FieldTrajectory = None,
    efield: FieldTrajectory = None,
    levels: Sequence = None,
    cfg: EvolutionConfig = None,
) -> OraclePhaseReport:
    """Oracle phases for a spin-1/2 in ``bfield`` or a parity doublet in ``efield``/``bfield``.

    ``levels`` are basis labels: m_S values for spin-1/2, (J, m_J) tuples for
    the doublet. The default tracks the stretched pair, plus first.
    Fields enter through :func:`geomphase.fields.coupling_vector`.
    """
    if isinstance(system, SpinHalfSystem):
        if bfield is None or efield is not None:
            raise ValueError("spin-1/2 needs a bfield trajectory and no efield")
        basis = SPIN_HALF_LABELS
        levels = tuple(levels) if levels is not None else (0.5, -0.5)

        def H(t):
            return hamiltonian_spinhalf(system, coupling_vector(bfield, t))

        tiebreak = None
        freqs = [c.angular_frequency for c in bfield.components]
    elif isinstance(system, ParityDoubletSystem):
        if bfield is None and efield is None:
            raise ValueError("parity doublet needs an efield and/or bfield trajectory")
        basis = DOUBLET_LABELS
        levels = tuple(levels) if levels is not None else ((1, 1), (1, -1))

        def H(t):
            t = np.asarray(t, dtype=float)
            E = coupling_vector(efield, t) if efield is not None else np.zeros(t.shape + (3,))
            B = coupling_vector(bfield, t) if bfield is not None else None
            return hamiltonian_doublet(system, E, B)

        def tiebreak(t):
            t = np.asarray(t, dtype=float)
            n = coupling_vector(efield, t) if efield is not None else np.zeros(t.shape + (3,))
            if bfield is not None:
                nb = coupling_vector(bfield, t)
                use_b = np.linalg.norm(n, axis=-1) == 0
                n = np.where(use_b[..., None], nb, n)
            n = n / np.maximum(np.linalg.norm(n, axis=-1, keepdims=True), 1e-300)
            return n[..., 0, None, None] * JX + n[..., 1, None, None] * JY + n[..., 2, None, None] * JZ

        freqs = [c.angular_frequency for f in (efield, bfield) if f is not None for c in f.components]
    else:
        raise TypeError(f"unsupported system {type(system).__name__}")
    try:
        idx = [basis.index(lv) for lv in levels]
    except ValueError as exc:
        raise ValueError(f"unknown level label in {levels}; basis is {basis}") from exc
    return extract_phases(H, T, idx, cfg, freqs, tiebreak, labels=levels)


def dressed_exact_spinhalf(system: SpinHalfSystem, Bz: float, B_perp: float, omega: float, T: float) -> DressedResult:
    """Exact stretched-state geometric phase of a spin-1/2 in a single rotating field.

    In the frame turning with the field the Hamiltonian is static,
    -(w0 - w) S_z - gamma B_perp S_x, with splitting
    W = sqrt((w0 - w)^2 + (gamma B_perp)^2). Mapping back to the lab gives
    phi(+1/2) - phi(-1/2) = (w + sign(w0 - w) W) T; removing the static
    dynamical part sign(w0) |gamma| sqrt(Bz^2 + B_perp^2) T leaves the
    geometric phase, valid at any tilt.
    """
    w0 = system.gamma * Bz
    b = system.gamma * B_perp
    W = math.hypot(w0 - omega, b)
    s = math.copysign(1.0, w0 - omega) if w0 != omega else math.copysign(1.0, w0)
    phase = (omega + s * W) * T
    lab = abs(system.gamma) * math.hypot(Bz, B_perp)
    dyn = math.copysign(1.0, w0) * lab * T
    return DressedResult(rotating_splitting=W, lab_splitting=-(omega + s * W), geometric_phase=phase - dyn)
