"""The heralding protocol: evolve signal (x) idler through the two-mode
squeezer of an optical parametric amplifier, project the idler onto the
single-photon level, normalize.

Alongside the brute-force path this module carries the closed-form outputs
for coherent, squeezed-vacuum and cat inputs, and the SU(1,1) disentangling
machinery the squeezed-vacuum form rests on.  Closed forms are evaluated at
the same cutoff as the numeric path so comparisons are apples-to-apples.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .fock import (
    Cutoff,
    DimensionMismatch,
    SimulationError,
    StateVector,
    TruncationWarning,
    annihilator,
)
from .states import CatSpec, SqueezeParam, apply_squeeze, coherent

HERALD_NORM_FLOOR = 1e-14


class HeraldFailed(SimulationError):
    """Projection left numerically nothing to normalize."""


class Su11DomainError(SimulationError):
    """Disentangling coefficients left their convergence domain."""


@dataclass(frozen=True)
class GainParam:
    """Amplitude gain g = cosh(rho) >= 1 and pump phase delta."""

    g: float
    delta: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.g) or self.g < 1.0:
            raise ValueError(f"gain must be finite and >= 1, got {self.g}")
        object.__setattr__(self, "g", float(self.g))
        object.__setattr__(self, "delta", float(self.delta))

    @property
    def rho(self) -> float:
        return math.acosh(self.g)

    @property
    def big_g(self) -> float:
        """G = sqrt(g^2 - 1)/g = tanh(rho), in [0, 1)."""
        return math.sqrt(self.g * self.g - 1.0) / self.g

    @property
    def tau(self) -> SqueezeParam:
        return SqueezeParam(self.rho, self.delta)


@dataclass(frozen=True)
class HeraldOutcome:
    """Normalized output signal state plus the heralding success probability."""

    state: StateVector
    success_probability: float
    raw_norm2: float

    def __post_init__(self):
        if abs(self.success_probability - self.raw_norm2) > 1e-12:
            raise ValueError("success probability must equal the raw norm^2")


@dataclass(frozen=True)
class Su11Coefficients:
    """Disentangling data for exp(-B ln g) with B the squeezed number operator.

    phi_plus = -e^{i varphi} tanh(r_prime) fixes the induced squeeze; lam is
    the scalar prefactor on the factored product.
    """

    theta_prime: float
    alpha_plus: complex
    alpha_minus: complex
    alpha_z: float
    gamma: complex
    phi_plus: complex
    phi_minus: complex
    phi_z: complex
    lam: complex
    r_prime: float
    varphi: float

    @property
    def xi(self) -> SqueezeParam:
        return SqueezeParam(self.r_prime, self.varphi)


@dataclass(frozen=True)
class SvOutputForm:
    """Squeezed zero/two-photon superposition S(xi'')[c0|0> + e^{2i Theta} c2|2>]."""

    c0: complex
    c2: complex
    xi_pp: SqueezeParam
    theta: float

    @property
    def mu(self) -> complex:
        return self.c2 / self.c0

    @property
    def success_probability(self) -> float:
        return abs(self.c0) ** 2 + abs(self.c2) ** 2


# ---------------------------------------------------------------------------
# two-mode squeezer action


def _lower_pair(psi: np.ndarray, sq: np.ndarray) -> np.ndarray:
    """(a (x) b) psi on the [n_s, n_i] layout."""
    out = np.zeros_like(psi)
    out[:-1, :-1] = sq[1:, None] * sq[None, 1:] * psi[1:, 1:]
    return out


def _raise_pair(psi: np.ndarray, sq: np.ndarray) -> np.ndarray:
    """(a^dag (x) b^dag) psi."""
    out = np.zeros_like(psi)
    out[1:, 1:] = sq[1:, None] * sq[None, 1:] * psi[:-1, :-1]
    return out


def two_mode_squeezer_apply(state: StateVector, tau: SqueezeParam) -> StateVector:
    """exp[tau* ab - tau a^dag b^dag] |state> by Taylor-on-vector with scaling.

    The truncated generator is exactly anti-Hermitian, so the norm survives to
    the series tolerance; truncation shows up as tail population instead.
    """
    if state.modes != 2:
        raise DimensionMismatch("two-mode squeezer needs a two-mode state")
    if tau.r == 0.0:
        return state
    d = state.dim
    sq = np.sqrt(np.arange(d, dtype=np.float64))
    tau_c = tau.r * cmath.exp(1j * tau.theta)

    def gen(psi_flat):
        psi = psi_flat.reshape(d, d)
        out = np.conj(tau_c) * _lower_pair(psi, sq) - tau_c * _raise_pair(psi, sq)
        return out.ravel()

    one_norm = 2.0 * tau.r * (d - 1)
    from .fock import expm_apply

    out = expm_apply(gen, state.amplitudes, one_norm)
    result = StateVector(out, state.cutoff, modes=2)
    result.warn_if_truncating(context="two-mode squeezing")
    return result


def two_mode_squeezer_factored_apply(state: StateVector, gain: GainParam) -> StateVector:
    """Same map as the direct squeezer, via the normal-ordered factorization
    (1/g) exp(-G e^{i delta} a^dag b^dag) g^{-(n_a+n_b)} exp(G e^{-i delta} ab).

    The outer ladder series terminate exactly on the truncated basis and the
    middle factor is diagonal, so this route has no series tolerance at all.
    """
    if state.modes != 2:
        raise DimensionMismatch("two-mode squeezer needs a two-mode state")
    if gain.g == 1.0:
        return state
    d = state.dim
    sq = np.sqrt(np.arange(d, dtype=np.float64))
    g = gain.g
    big_g = gain.big_g
    phase = cmath.exp(1j * gain.delta)

    psi = state.amplitudes.reshape(d, d).copy()

    acc = psi.copy()
    term = psi
    k = 1
    while True:
        term = (big_g / phase / k) * _lower_pair(term, sq)
        if not term.any():
            break
        acc += term
        k += 1
    psi = acc

    n_tot = np.arange(d)[:, None] + np.arange(d)[None, :]
    psi *= g ** (-n_tot.astype(np.float64))

    acc = psi.copy()
    term = psi
    k = 1
    while True:
        term = (-big_g * phase / k) * _raise_pair(term, sq)
        if not term.any():
            break
        acc += term
        k += 1
    psi = acc / g

    result = StateVector(psi.ravel(), state.cutoff, modes=2)
    leak = state.norm2() - result.norm2()
    if leak > 1e-9:
        warnings.warn(
            f"factored squeezer clipped {leak:.3e} of the population past the "
            "cutoff", TruncationWarning, stacklevel=2)
    return result


# ---------------------------------------------------------------------------
# heralding


def herald_single_photon(signal_in: StateVector, gain: GainParam) -> HeraldOutcome:
    """Herald on a single idler photon: N Pi S (|signal> (x) |1>), Pi = |1><1|.

    Evolves through the factored squeezer: its ladder factors terminate
    exactly on the truncated basis, so every retained entry of the joint
    state, and in particular the idler-|1> slice, is exact up to input
    truncation.  The direct Taylor exponential would instead reflect
    clipped population back into the interior at large gain.
    """
    if signal_in.modes != 1:
        raise DimensionMismatch("herald expects a single-mode signal input")
    signal_in.warn_if_truncating(context="herald input preparation")
    d = signal_in.dim
    joint = np.zeros((d, d), dtype=np.complex128)
    joint[:, 1] = signal_in.amplitudes
    with warnings.catch_warnings():
        # clipping happens at high idler number, far from the |1> slice
        warnings.simplefilter("ignore", TruncationWarning)
        evolved = two_mode_squeezer_factored_apply(
            StateVector(joint.ravel(), signal_in.cutoff, modes=2), gain)
    slice_raw = evolved.as_matrix()[:, 1].copy()
    return _finalize_herald(slice_raw, signal_in.cutoff)


def _finalize_herald(slice_raw: np.ndarray, cutoff: Cutoff) -> HeraldOutcome:
    raw_norm2 = float(np.vdot(slice_raw, slice_raw).real)
    if raw_norm2 < HERALD_NORM_FLOOR:
        raise HeraldFailed(
            f"heralded slice carries norm^2 {raw_norm2:.3e} < {HERALD_NORM_FLOOR:.1e}; "
            "refusing to normalize noise")
    out = StateVector(slice_raw / math.sqrt(raw_norm2), cutoff)
    return HeraldOutcome(out, raw_norm2, raw_norm2)


# ---------------------------------------------------------------------------
# SU(1,1) closed forms for a squeezed-vacuum input


def su11_disentangle(r: float, theta: float, gain: GainParam) -> Su11Coefficients:
    """Coefficients factoring exp(-B ln g) into exponentials of a^dag^2, n, a^2,
    where B is the number operator conjugated by the input squeezer."""
    theta_prime = -math.log(gain.g)
    alpha_plus = -cmath.exp(1j * theta) * math.sinh(2.0 * r)
    alpha_minus = -cmath.exp(-1j * theta) * math.sinh(2.0 * r)
    alpha_z = 2.0 * math.cosh(2.0 * r)
    gamma = np.sqrt(complex(alpha_z**2 / 4.0 - alpha_plus * alpha_minus))

    if theta_prime == 0.0:
        phi_plus = 0.0 + 0.0j
        phi_minus = 0.0 + 0.0j
        phi_z = 0.0 + 0.0j
    elif abs(gamma) < 1e-14:
        # degenerate direction: sinh(G t)/G -> t
        denom = 1.0 - alpha_z * theta_prime / 2.0
        phi_plus = alpha_plus * theta_prime / denom
        phi_minus = alpha_minus * theta_prime / denom
        phi_z = -2.0 * cmath.log(denom)
    else:
        ch = np.cosh(gamma * theta_prime)
        sh = np.sinh(gamma * theta_prime)
        denom = ch - alpha_z * sh / (2.0 * gamma)
        phi_plus = complex((alpha_plus / gamma) * sh / denom)
        phi_minus = complex((alpha_minus / gamma) * sh / denom)
        phi_z = complex(-2.0 * np.log(denom))

    if abs(phi_plus) >= 1.0:
        raise Su11DomainError(
            f"|phi_plus| = {abs(phi_plus):.6f} >= 1: disentangled squeeze magnitude "
            "left its convergence domain")

    lam = cmath.exp(0.5 * (math.log(gain.g) + phi_z / 2.0))
    r_prime = math.atanh(abs(phi_plus))
    varphi = cmath.phase(-phi_plus) if abs(phi_plus) > 0.0 else 0.0
    return Su11Coefficients(
        theta_prime=theta_prime, alpha_plus=complex(alpha_plus),
        alpha_minus=complex(alpha_minus), alpha_z=alpha_z, gamma=complex(gamma),
        phi_plus=complex(phi_plus), phi_minus=complex(phi_minus),
        phi_z=complex(phi_z), lam=lam, r_prime=r_prime, varphi=varphi)


def sv_output_closed_form(r: float, theta: float, gain: GainParam,
                          cutoff: Cutoff) -> tuple[SvOutputForm, StateVector]:
    """Analytic herald output for a squeezed-vacuum input.

    Returns the symbolic squeezed zero/two-photon form and its realization on
    the truncated basis (normalized).  |c0|^2 + |c2|^2 is the heralding
    success probability of the ideal protocol.
    """
    co = su11_disentangle(r, theta, gain)
    g = gain.g
    big_g2 = gain.big_g ** 2
    ch_rp = math.cosh(co.r_prime)
    sh_rp = math.sinh(co.r_prime)
    e_phi = cmath.exp(1j * co.varphi)
    e_th = cmath.exp(1j * theta)

    u = co.lam * math.sqrt(ch_rp) / g**2
    v = (co.lam * big_g2 / g) * e_th * math.sinh(r) * cmath.exp(co.phi_z / 2.0) \
        * ch_rp ** 1.5

    # composing S(eta) S(xi): Bogoliubov product, a -> A a - B a^dag
    big_a = math.cosh(r) * ch_rp + cmath.exp(1j * (theta - co.varphi)) \
        * math.sinh(r) * sh_rp
    big_b = e_phi * math.cosh(r) * sh_rp + e_th * math.sinh(r) * ch_rp

    c0 = u - v * np.conj(big_b)
    c2 = math.sqrt(2.0) * v * np.conj(big_a)
    theta_rot = cmath.phase(big_a)

    r_pp = math.acosh(max(abs(big_a), 1.0))  # |A| >= 1 up to roundoff
    phi_pp = cmath.phase(big_b * big_a) if abs(big_b) > 1e-300 else 0.0
    xi_pp = SqueezeParam(r_pp, phi_pp)

    form = SvOutputForm(c0=complex(c0), c2=complex(c2), xi_pp=xi_pp,
                        theta=theta_rot)

    base = np.zeros(cutoff.dim, dtype=np.complex128)
    base[0] = form.c0
    base[2] = cmath.exp(2j * form.theta) * form.c2
    nrm = np.linalg.norm(base)
    amps = apply_squeeze(xi_pp, StateVector(base / nrm, cutoff))
    amps /= np.linalg.norm(amps)
    return form, StateVector(amps, cutoff)


# ---------------------------------------------------------------------------
# coherent and cat closed forms


def coherent_output_closed_form(alpha: complex, gain: GainParam,
                                cutoff: Cutoff) -> StateVector:
    """Herald output for a coherent input: (1/g^2 - (G^2/g) alpha a^dag)|alpha/g>."""
    g = gain.g
    att = coherent(alpha / g, cutoff).amplitudes
    adag = annihilator(cutoff).elements.conj().T
    raw = att / g**2 - (gain.big_g**2 / g) * alpha * (adag @ att)
    nrm = np.linalg.norm(raw)
    if nrm < 1e-12:
        raise HeraldFailed("closed-form coherent output vanished")
    return StateVector(raw / nrm, cutoff)


def cat_output_closed_form(spec: CatSpec, gain: GainParam,
                           cutoff: Cutoff) -> StateVector:
    """Herald output for a cat input:
    (1/g^2)(|a/g> +- |-a/g>) - (G^2 a/g) a^dag (|a/g> -+ |-a/g>), normalized."""
    g = gain.g
    alpha = spec.alpha
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        plus = coherent(alpha / g, cutoff).amplitudes
        minus = coherent(-alpha / g, cutoff).amplitudes
    adag = annihilator(cutoff).elements.conj().T
    sign = 1.0 if spec.parity == "even" else -1.0
    raw = (plus + sign * minus) / g**2 \
        - (gain.big_g**2 * alpha / g) * (adag @ (plus - sign * minus))
    nrm = np.linalg.norm(raw)
    if nrm < 1e-12:
        raise HeraldFailed("closed-form cat output vanished")
    return StateVector(raw / nrm, cutoff)


def critical_gain(alpha: complex) -> GainParam:
    """g0 = 1/sqrt(1 - 1/|alpha|^2); the plain-cat term of the output cancels."""
    mod2 = abs(alpha) ** 2
    if mod2 <= 1.0:
        raise SimulationError(
            f"critical gain undefined for |alpha| <= 1 (got |alpha| = {abs(alpha):.4f})")
    return GainParam(1.0 / math.sqrt(1.0 - 1.0 / mod2))


# ---------------------------------------------------------------------------
# photon subtraction


def photon_subtract(state: StateVector, n: int = 1) -> StateVector:
    """Normalized a^n |state>."""
    if state.modes != 1:
        raise DimensionMismatch("photon subtraction expects a single-mode state")
    if n < 1:
        raise ValueError("subtract at least one photon")
    a = annihilator(state.cutoff).elements
    amps = state.amplitudes
    for _ in range(n):
        amps = a @ amps
    nrm2 = float(np.vdot(amps, amps).real)
    if nrm2 <= HERALD_NORM_FLOOR:
        raise HeraldFailed(f"a^{n} annihilated the state (norm^2 = {nrm2:.3e})")
    return StateVector(amps / math.sqrt(nrm2), state.cutoff)
