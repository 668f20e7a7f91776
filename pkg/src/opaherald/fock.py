"""Truncated Fock-space linear algebra: states, operators, tensor products,
partial traces and matrix exponentials.

Everything downstream works in the photon-number basis |0>..|dim-1|, one or
two modes.  Two-mode amplitudes are stored signal-major: the flat index of
|n_s, n_i> is ``n_s * dim + n_i``, so projecting the idler onto a fixed level
is a strided gather.

All containers are immutable after construction; the functions here are pure.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

DEFAULT_CAP = 128          # hard cap on Fock levels per mode
TAIL_FRACTION = 0.1        # "tail" means the top 10% of levels
TAIL_WARN_THRESHOLD = 1e-8


class SimulationError(Exception):
    """Base class for numerical/domain failures in this package."""


class DimensionMismatch(SimulationError):
    """Operands built with different cutoffs or mode counts."""


class CutoffCapExceeded(SimulationError):
    """Adaptive cutoff selection ran into the hard per-mode cap."""


class TruncationWarning(UserWarning):
    """Population accumulating near the truncation edge."""


@dataclass(frozen=True)
class Cutoff:
    """Number of Fock levels retained per mode (basis |0>..|dim-1>)."""

    dim: int

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or isinstance(self.dim, bool):
            raise ValueError(f"dim must be an integer, got {self.dim!r}")
        if self.dim < 2:
            raise ValueError(f"dim must be >= 2, got {self.dim}")
        object.__setattr__(self, "dim", int(self.dim))


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=np.complex128)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure state in the truncated basis; one mode or two (signal-major)."""

    amplitudes: np.ndarray
    cutoff: Cutoff
    modes: int = 1

    def __post_init__(self):
        if self.modes not in (1, 2):
            raise ValueError(f"modes must be 1 or 2, got {self.modes}")
        amps = _freeze(np.asarray(self.amplitudes).ravel())
        expected = self.cutoff.dim ** self.modes
        if amps.size != expected:
            raise DimensionMismatch(
                f"amplitude vector has length {amps.size}, expected {expected}"
            )
        n2 = float(np.vdot(amps, amps).real)
        if not np.isfinite(n2) or n2 <= 0.0 or n2 > 1.0 + 1e-12:
            raise ValueError(f"state norm^2 must lie in (0, 1+1e-12], got {n2}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.cutoff.dim

    def norm2(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def tail_population(self, fraction: float = TAIL_FRACTION) -> float:
        """Population in the top ``fraction`` of levels of either mode."""
        edge = self.dim - max(1, int(math.ceil(fraction * self.dim)))
        if self.modes == 1:
            return float(np.sum(np.abs(self.amplitudes[edge:]) ** 2))
        mat = self.as_matrix()
        pops = np.abs(mat) ** 2
        total = pops[edge:, :].sum() + pops[:edge, edge:].sum()
        return float(total)

    def normalized(self) -> "StateVector":
        return StateVector(self.amplitudes / math.sqrt(self.norm2()),
                           self.cutoff, self.modes)

    def as_matrix(self) -> np.ndarray:
        """Two-mode amplitudes reshaped to [n_signal, n_idler]."""
        if self.modes != 2:
            raise DimensionMismatch("as_matrix() requires a two-mode state")
        return self.amplitudes.reshape(self.dim, self.dim)

    def warn_if_truncating(self, threshold: float = TAIL_WARN_THRESHOLD,
                           context: str = "") -> float:
        tail = self.tail_population()
        if tail > threshold:
            where = f" during {context}" if context else ""
            warnings.warn(
                f"tail population {tail:.3e} exceeds {threshold:.1e}{where}; "
                "increase the cutoff for trustworthy amplitudes",
                TruncationWarning, stacklevel=2)
        return tail


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Single-mode mixed state; Hermitian, unit-ish trace, PSD up to slack."""

    elements: np.ndarray
    cutoff: Cutoff

    def __post_init__(self):
        mat = _freeze(np.asarray(self.elements))
        d = self.cutoff.dim
        if mat.shape != (d, d):
            raise DimensionMismatch(f"expected {d}x{d} matrix, got {mat.shape}")
        herm_defect = float(np.max(np.abs(mat - mat.conj().T)))
        if herm_defect > 1e-10:
            raise ValueError(f"matrix not Hermitian: max defect {herm_defect:.3e}")
        tr = complex(np.trace(mat))
        if abs(tr.imag) > 1e-10 or tr.real <= 0.0 or tr.real > 1.0 + 1e-10:
            raise ValueError(f"trace must be real in (0, 1+1e-10], got {tr}")
        lo = float(np.min(scipy.linalg.eigvalsh(mat)))
        if lo < -1e-8:
            raise ValueError(f"matrix not PSD: smallest eigenvalue {lo:.3e}")
        object.__setattr__(self, "elements", mat)

    @property
    def dim(self) -> int:
        return self.cutoff.dim

    def trace(self) -> float:
        return float(np.trace(self.elements).real)

    def purity(self) -> float:
        return float(np.trace(self.elements @ self.elements).real)

    @classmethod
    def from_pure(cls, state: StateVector) -> "DensityMatrix":
        if state.modes != 1:
            raise DimensionMismatch("from_pure requires a single-mode state")
        amps = state.amplitudes
        return cls(np.outer(amps, amps.conj()), state.cutoff)


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Dense operator on the truncated basis (one mode or two)."""

    elements: np.ndarray
    cutoff: Cutoff
    modes: int = 1

    def __post_init__(self):
        mat = _freeze(np.asarray(self.elements))
        size = self.cutoff.dim ** self.modes
        if mat.shape != (size, size):
            raise DimensionMismatch(f"expected {size}x{size} matrix, got {mat.shape}")
        object.__setattr__(self, "elements", mat)

    @property
    def dim(self) -> int:
        return self.cutoff.dim

    def dagger(self) -> "FockOperator":
        return FockOperator(self.elements.conj().T, self.cutoff, self.modes)

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        _check_same_space(self, other)
        return FockOperator(self.elements @ other.elements, self.cutoff, self.modes)

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        """Raw matrix-vector product; the result is not normalized."""
        return self.elements @ np.asarray(amplitudes, dtype=np.complex128)


def _check_same_space(a, b):
    if a.cutoff.dim != b.cutoff.dim or a.modes != b.modes:
        raise DimensionMismatch(
            f"operands live in different spaces: "
            f"(dim={a.cutoff.dim}, modes={a.modes}) vs (dim={b.cutoff.dim}, modes={b.modes})"
        )


# ---------------------------------------------------------------------------
# elementary operators


def annihilator(cutoff: Cutoff) -> FockOperator:
    """Ladder operator with <m|a|n> = sqrt(n) delta_{m,n-1}."""
    d = cutoff.dim
    mat = np.zeros((d, d), dtype=np.complex128)
    ns = np.arange(1, d)
    mat[ns - 1, ns] = np.sqrt(ns)
    return FockOperator(mat, cutoff)


def creator(cutoff: Cutoff) -> FockOperator:
    return annihilator(cutoff).dagger()


def number_operator(cutoff: Cutoff) -> FockOperator:
    return FockOperator(np.diag(np.arange(cutoff.dim, dtype=np.complex128)), cutoff)


def identity_operator(cutoff: Cutoff, modes: int = 1) -> FockOperator:
    return FockOperator(np.eye(cutoff.dim ** modes, dtype=np.complex128), cutoff, modes)


def tensor(op_a: FockOperator, op_b: FockOperator) -> FockOperator:
    """Two-mode operator A (x) B under the signal-major index convention."""
    if op_a.modes != 1 or op_b.modes != 1:
        raise DimensionMismatch("tensor expects two single-mode operators")
    if op_a.cutoff.dim != op_b.cutoff.dim:
        raise DimensionMismatch("tensor expects matching cutoffs")
    return FockOperator(np.kron(op_a.elements, op_b.elements), op_a.cutoff, modes=2)


def matrix_exponential(op: FockOperator) -> FockOperator:
    """exp(M) by scaling-and-squaring (Pade)."""
    if not np.all(np.isfinite(op.elements)):
        raise ValueError("operator has non-finite entries")
    return FockOperator(scipy.linalg.expm(op.elements), op.cutoff, op.modes)


def displacement_operator(alpha: complex, cutoff: Cutoff) -> FockOperator:
    """D(alpha) = exp(alpha a^dag - alpha* a)."""
    a = annihilator(cutoff).elements
    gen = alpha * a.conj().T - np.conj(alpha) * a
    return FockOperator(scipy.linalg.expm(gen), cutoff)


# ---------------------------------------------------------------------------
# contractions


def inner_product(bra: StateVector, ket: StateVector) -> complex:
    """<bra|ket> = sum conj(bra_i) ket_i."""
    if bra.modes != ket.modes or bra.cutoff.dim != ket.cutoff.dim:
        raise DimensionMismatch("inner product requires matching modes and cutoff")
    return complex(np.vdot(bra.amplitudes, ket.amplitudes))


def partial_trace_idler(state: StateVector) -> DensityMatrix:
    """Reduced signal-mode density matrix of a two-mode pure state."""
    if state.modes != 2:
        raise DimensionMismatch("partial trace requires a two-mode state")
    psi = state.as_matrix()
    return DensityMatrix(psi @ psi.conj().T, state.cutoff)


def expectation(op: FockOperator, state: StateVector) -> complex:
    if op.cutoff.dim != state.cutoff.dim or op.modes != state.modes:
        raise DimensionMismatch("operator and state live in different spaces")
    return complex(np.vdot(state.amplitudes, op.apply(state.amplitudes)))


# ---------------------------------------------------------------------------
# exponential action on vectors


def expm_apply(apply_m, vec: np.ndarray, one_norm: float,
               tol: float = 1e-13, max_order: int = 128) -> np.ndarray:
    """w = exp(M) v via scaled truncated Taylor; M given as a callable.

    ``one_norm`` must upper-bound ||M||_1 so the segment count keeps each
    Taylor series inside a fast-converging radius.
    """
    v = np.asarray(vec, dtype=np.complex128)
    segments = max(1, int(math.ceil(one_norm / 6.0)))
    w = v.copy()
    for _ in range(segments):
        term = w
        acc = w.copy()
        for k in range(1, max_order + 1):
            term = apply_m(term) / (segments * k)
            acc += term
            tn = np.linalg.norm(term)
            if tn <= tol * np.linalg.norm(acc):
                break
        else:
            raise SimulationError("expm_apply Taylor series failed to converge")
        w = acc
    return w


# ---------------------------------------------------------------------------
# cutoff selection


_DIM_LADDER = (16, 24, 32, 48, 64, 80, 96, 128, 160, 192, 256)


def auto_cutoff(build, tail_tol: float = 1e-10, cap: int = DEFAULT_CAP,
                pre_squeeze_double: bool = True) -> Cutoff:
    """Smallest ladder dim whose built state has tail population < tail_tol.

    With ``pre_squeeze_double`` the result is doubled once (two-mode squeezing
    pushes population upward).  Exceeding ``cap`` raises instead of silently
    under-resolving; pass an explicit dim in that case.
    """
    chosen = None
    for d in _DIM_LADDER:
        if d > cap:
            break
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            state = build(Cutoff(d))
        if state.tail_population() < tail_tol:
            chosen = d
            break
    if chosen is None:
        raise CutoffCapExceeded(
            f"no dim <= {cap} reaches tail population < {tail_tol:.1e}; "
            "pass an explicit cutoff")
    if pre_squeeze_double:
        chosen *= 2
        if chosen > cap:
            raise CutoffCapExceeded(
                f"doubled dim {chosen} exceeds the cap {cap}; pass an explicit cutoff")
    return Cutoff(chosen)


def compact(state: StateVector, tol: float = 1e-12, min_dim: int = 16) -> StateVector:
    """Shrink a single-mode state to the smallest cutoff with tail mass < tol.

    Used before phase-space evaluation; deterministic, never grows the basis.
    """
    if state.modes != 1:
        raise DimensionMismatch("compact operates on single-mode states")
    pops = np.abs(state.amplitudes) ** 2
    cumtail = np.cumsum(pops[::-1])[::-1]
    d = state.dim
    while d > min_dim and cumtail[d - 1] < tol:
        d -= 1
    if d == state.dim:
        return state
    return StateVector(state.amplitudes[:d], Cutoff(d))
