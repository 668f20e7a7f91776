"""Photon-loss decoherence: fixed-step RK4 integration of
d rho / d(kt) = 2 a rho a^dag - n rho - rho n, with step-halving control.

kappa and t never appear separately; everything is parameterized by the
dimensionless kt.  Pure inputs are promoted to projectors.  The mean photon
number of this channel decays exactly as e^{-2 kt}, which the tests use as a
sharp integrator probe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import (
    DensityMatrix,
    DimensionMismatch,
    SimulationError,
    StateVector,
    annihilator,
)
from .wigner import PhaseSpaceWindow, negativity_of_state, sweep_window


class StepSizeError(SimulationError):
    """The integrator could not hold its accuracy/positivity targets."""


@dataclass(frozen=True)
class LossSchedule:
    """Sorted, strictly increasing kt snapshot points (first may be 0)."""

    kappa_t_points: tuple

    def __post_init__(self):
        pts = tuple(float(t) for t in self.kappa_t_points)
        if not pts:
            raise ValueError("schedule needs at least one kt point")
        if any(t < 0.0 for t in pts):
            raise ValueError("kt points must be non-negative")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("kt points must be strictly increasing")
        object.__setattr__(self, "kappa_t_points", pts)


def _promote(initial) -> DensityMatrix:
    if isinstance(initial, StateVector):
        if initial.modes != 1:
            raise DimensionMismatch("loss evolution is single-mode")
        return DensityMatrix.from_pure(initial)
    if isinstance(initial, DensityMatrix):
        return initial
    raise TypeError(f"expected StateVector or DensityMatrix, got {type(initial)!r}")


def _rhs(rho: np.ndarray, a: np.ndarray, n_diag: np.ndarray) -> np.ndarray:
    lowered = a @ rho @ a.conj().T
    return 2.0 * lowered - n_diag[:, None] * rho - rho * n_diag[None, :]


def _rk4_span(rho: np.ndarray, span: float, steps: int, a: np.ndarray,
              n_diag: np.ndarray) -> np.ndarray:
    h = span / steps
    out = rho
    for _ in range(steps):
        k1 = _rhs(out, a, n_diag)
        k2 = _rhs(out + 0.5 * h * k1, a, n_diag)
        k3 = _rhs(out + 0.5 * h * k2, a, n_diag)
        k4 = _rhs(out + h * k3, a, n_diag)
        out = out + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out = 0.5 * (out + out.conj().T)  # re-Hermitize each step
    return out


def evolve_loss(initial, schedule: LossSchedule,
                trace_tol: float = 1e-9, state_tol: float = 1e-10,
                max_halvings: int = 10) -> list[DensityMatrix]:
    """Density matrices at each scheduled kt.

    Each interval is integrated twice, with n and 2n RK4 steps, halving until
    both the trace drift and the successive-halving state difference settle
    (per unit kt).  The first step count respects the RK4 stability limit for
    the fastest decaying coherence, ~ 2*dim.
    """
    rho0 = _promote(initial)
    dim = rho0.dim
    a = annihilator(rho0.cutoff).elements
    n_diag = np.arange(dim, dtype=np.float64)
    base_trace = float(np.trace(rho0.elements).real)

    snapshots = []
    current = np.array(rho0.elements)
    t_prev = 0.0
    for t in schedule.kappa_t_points:
        span = t - t_prev
        if span == 0.0:
            snapshots.append(rho0)
            continue
        steps = max(8, int(math.ceil(span * dim)))  # h <~ 1/dim for stability
        coarse = _rk4_span(current, span, steps, a, n_diag)
        for _ in range(max_halvings):
            fine = _rk4_span(current, span, 2 * steps, a, n_diag)
            drift = abs(np.trace(fine).real - base_trace) / max(span, 1.0)
            delta = float(np.max(np.abs(fine - coarse)))
            if drift < trace_tol and delta < state_tol * max(span, 1.0):
                coarse = fine
                break
            coarse, steps = fine, 2 * steps
        else:
            raise StepSizeError(
                f"RK4 failed to settle on [{t_prev}, {t}] after {max_halvings} halvings")
        current = coarse
        low = float(np.min(np.linalg.eigvalsh(current)))
        if low < -1e-6:
            raise StepSizeError(
                f"positivity violated at kt={t}: smallest eigenvalue {low:.3e}")
        snapshots.append(DensityMatrix(current, rho0.cutoff))
        t_prev = t
    return snapshots


def negativity_decay_curve(initial, schedule: LossSchedule,
                           window: PhaseSpaceWindow | None = None):
    """Rows (kt, N) along a loss schedule.

    One shared window (sized for the initial state, the widest of the family)
    keeps the quadrature consistent across snapshots.
    """
    rho0 = _promote(initial)
    win = window if window is not None else sweep_window(rho0)
    pts = schedule.kappa_t_points
    rows = []
    if pts[0] != 0.0:
        rows.append((0.0, negativity_of_state(rho0, win)))
    snaps = evolve_loss(rho0, schedule)
    for t, snap in zip(pts, snaps):
        rows.append((float(t), negativity_of_state(snap, win)))
    return rows
