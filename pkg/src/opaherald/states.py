"""Factories for the named states: vacuum, Fock, coherent, squeezed vacuum,
cat states, squeezed cat targets, ad-hoc superpositions and the two-mode
squeezed vacuum.

Sign convention, fixed package-wide: the single-mode squeezer is
S(eta) = exp[(eta* a^2 - eta a^dag^2)/2] with eta = r e^{i theta}, and the
two-mode squeezer S(tau) = exp[tau* ab - tau a^dag b^dag] carries no 1/2.
Consequently S(eta)|0> expands with alternating signs,
c_{2n} ~ (-e^{i theta} tanh r)^n, and every closed form downstream assumes
exactly that operator.

Truncated factories keep the raw truncated amplitudes; the norm deficit is
the honest truncation signal (call .normalized() when a unit vector is
required).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fock import (
    Cutoff,
    FockOperator,
    SimulationError,
    StateVector,
    TruncationWarning,
    annihilator,
    displacement_operator,
    matrix_exponential,
)


def _wrap_angle(theta: float) -> float:
    t = math.fmod(theta, 2.0 * math.pi)
    while t > math.pi:
        t -= 2.0 * math.pi
    while t <= -math.pi:
        t += 2.0 * math.pi
    return t


@dataclass(frozen=True)
class SqueezeParam:
    """Squeezing magnitude r >= 0 and phase theta in (-pi, pi]."""

    r: float
    theta: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.r) or self.r < 0.0:
            raise ValueError(f"squeeze magnitude must be finite and >= 0, got {self.r}")
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "theta", _wrap_angle(float(self.theta)))

    @classmethod
    def from_signed(cls, r: float, theta: float = 0.0) -> "SqueezeParam":
        """Canonicalize a signed real magnitude: r < 0 becomes (|r|, theta+pi)."""
        if r < 0.0:
            return cls(-r, theta + math.pi)
        return cls(r, theta)

    @property
    def as_complex(self) -> complex:
        return self.r * cmath.exp(1j * self.theta)


@dataclass(frozen=True)
class CatSpec:
    """Coherent-superposition cat: N (|alpha> + parity*|-alpha>)."""

    alpha: complex
    parity: str = "even"

    def __post_init__(self):
        if self.parity not in ("even", "odd"):
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        object.__setattr__(self, "alpha", complex(self.alpha))
        if self.parity == "odd" and abs(self.alpha) == 0.0:
            raise ValueError("odd cat is the zero vector at alpha = 0")

    @property
    def norm_const(self) -> float:
        sign = 1.0 if self.parity == "even" else -1.0
        return (2.0 + sign * 2.0 * math.exp(-2.0 * abs(self.alpha) ** 2)) ** -0.5


# ---------------------------------------------------------------------------
# basic factories


def vacuum(cutoff: Cutoff) -> StateVector:
    amps = np.zeros(cutoff.dim, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(amps, cutoff)


def fock_state(n: int, cutoff: Cutoff) -> StateVector:
    if not 0 <= n < cutoff.dim:
        raise ValueError(f"level {n} outside basis of dim {cutoff.dim}")
    amps = np.zeros(cutoff.dim, dtype=np.complex128)
    amps[n] = 1.0
    return StateVector(amps, cutoff)


def coherent(alpha: complex, cutoff: Cutoff) -> StateVector:
    """c_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!), truncated."""
    d = cutoff.dim
    amps = np.zeros(d, dtype=np.complex128)
    amps[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, d):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    state = StateVector(amps, cutoff)
    state.warn_if_truncating(context="coherent state construction")
    return state


def squeezed_vacuum(eta: SqueezeParam, cutoff: Cutoff) -> StateVector:
    """S(eta)|0> in the Fock basis, c_{2n} = sech^{1/2} r (-e^{i theta} tanh r)^n
    sqrt((2n)!)/(2^n n!); raw truncated amplitudes, deficit reported."""
    d = cutoff.dim
    amps = np.zeros(d, dtype=np.complex128)
    amps[0] = 1.0 / math.sqrt(math.cosh(eta.r))
    ratio = -cmath.exp(1j * eta.theta) * math.tanh(eta.r)
    for n in range(1, (d - 1) // 2 + 1):
        # c_{2n} / c_{2n-2} = ratio * sqrt((2n-1)/(2n)) * ... ladder form
        amps[2 * n] = amps[2 * n - 2] * ratio * math.sqrt((2 * n - 1) * 2 * n) / (2 * n)
    state = StateVector(amps, cutoff)
    if state.norm2() < 1.0 - 1e-8:
        warnings.warn(
            f"squeezed vacuum at r={eta.r:.3f} lost {1 - state.norm2():.3e} of its "
            "norm to truncation", TruncationWarning, stacklevel=2)
    else:
        state.warn_if_truncating(context="squeezed vacuum construction")
    return state


def cat(spec: CatSpec, cutoff: Cutoff) -> StateVector:
    """Even cats live on even levels only, odd cats on odd levels only."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        plus = coherent(spec.alpha, cutoff).amplitudes.copy()
        minus = coherent(-spec.alpha, cutoff).amplitudes
    sign = 1.0 if spec.parity == "even" else -1.0
    amps = spec.norm_const * (plus + sign * minus)
    # the sum cancels the off-parity levels exactly in infinite precision;
    # zero them so the parity invariant holds to the bit
    start = 1 if spec.parity == "even" else 0
    amps[start::2] = 0.0
    state = StateVector(amps, cutoff)
    state.warn_if_truncating(context="cat state construction")
    return state


def fock_superposition(coeffs, cutoff: Cutoff) -> StateVector:
    """Normalized sum of Fock levels from (level, coefficient) pairs."""
    items = list(coeffs)
    if not items:
        raise ValueError("fock_superposition requires at least one term")
    amps = np.zeros(cutoff.dim, dtype=np.complex128)
    for level, c in items:
        if not 0 <= level < cutoff.dim:
            raise ValueError(f"level {level} outside basis of dim {cutoff.dim}")
        amps[level] += c
    norm = np.linalg.norm(amps)
    if norm == 0.0:
        raise ValueError("superposition coefficients cancel to the zero vector")
    return StateVector(amps / norm, cutoff)


def tmsv(tau: SqueezeParam, cutoff: Cutoff) -> StateVector:
    """Two-mode squeezed vacuum: (1/cosh rho) sum (-e^{i delta} tanh rho)^n |n,n>."""
    d = cutoff.dim
    mat = np.zeros((d, d), dtype=np.complex128)
    amp = 1.0 / math.cosh(tau.r)
    ratio = -cmath.exp(1j * tau.theta) * math.tanh(tau.r)
    for n in range(d):
        mat[n, n] = amp
        amp *= ratio
    state = StateVector(mat.ravel(), cutoff, modes=2)
    if state.norm2() < 1.0 - 1e-8:
        warnings.warn(
            f"TMSV at rho={tau.r:.3f} lost {1 - state.norm2():.3e} of its norm to "
            "truncation", TruncationWarning, stacklevel=2)
    return state


# ---------------------------------------------------------------------------
# squeezer application


def squeeze_generator(eta: SqueezeParam, cutoff: Cutoff) -> FockOperator:
    """(eta* a^2 - eta a^dag^2)/2, the anti-Hermitian generator of S(eta)."""
    a = annihilator(cutoff).elements
    eta_c = eta.as_complex
    gen = 0.5 * (np.conj(eta_c) * (a @ a) - eta_c * (a.conj().T @ a.conj().T))
    return FockOperator(gen, cutoff)


def squeeze_operator(eta: SqueezeParam, cutoff: Cutoff) -> FockOperator:
    return matrix_exponential(squeeze_generator(eta, cutoff))


@lru_cache(maxsize=64)
def _squeeze_eigensystem(dim: int, theta: float):
    """Eigendecomposition of the unit-r generator; r only scales the spectrum."""
    gen = squeeze_generator(SqueezeParam(1.0, theta), Cutoff(dim)).elements
    evals, vecs = np.linalg.eigh(1j * gen)  # i*gen is Hermitian
    return evals, vecs


def apply_squeeze(eta: SqueezeParam, state: StateVector) -> np.ndarray:
    """S(eta) |state> as raw amplitudes, via a cached eigendecomposition."""
    if state.modes != 1:
        raise SimulationError("apply_squeeze expects a single-mode state")
    if eta.r == 0.0:
        return state.amplitudes.copy()
    evals, vecs = _squeeze_eigensystem(state.dim, eta.theta)
    phases = np.exp(-1j * eta.r * evals)
    return vecs @ (phases * (vecs.conj().T @ state.amplitudes))


def squeezed_fock(eta: SqueezeParam, n: int, cutoff: Cutoff) -> StateVector:
    """S(eta)|n>, normalized; truncation deficit folded into normalization."""
    amps = apply_squeeze(eta, fock_state(n, cutoff))
    return StateVector(amps / np.linalg.norm(amps), cutoff)


def squeezed_cat_target(gamma: SqueezeParam, alpha: float, cutoff: Cutoff,
                        parity: str = "even") -> StateVector:
    """S(gamma) applied to a real-amplitude cat, normalized.

    This is the fit target family behind the gain-sweep tables.
    """
    if alpha == 0.0 and parity == "odd":
        raise ValueError("odd cat target undefined at alpha = 0")
    if alpha == 0.0:
        base = vacuum(cutoff)
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            base = cat(CatSpec(alpha, parity), cutoff)
    amps = apply_squeeze(gamma, base)
    norm = np.linalg.norm(amps)
    return StateVector(amps / norm, cutoff)
