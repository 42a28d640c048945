"""Kraus factories for depolarizing, (non-)Markovian amplitude-damping, and
random-telegraph-noise channels, plus channel application and regime tests.

Time is dimensionless: all rates multiply t directly. The damping function
lambda(t) and memory kernel Lambda(t) are evaluated on the real branch picked
by the sign of the discriminant; a complex-arithmetic evaluation is exposed
alongside as an independent cross-check.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix
from .states import I2, SIGMA_X, SIGMA_Y, SIGMA_Z

COMPLETENESS_TOL = 1e-10

MARKOVIAN = "markovian"
NON_MARKOVIAN = "non-markovian"

I3 = np.eye(3, dtype=complex)
# spin-1 operators entering the qutrit telegraph-noise channel
S_Z3 = np.diag([1, 0, -1]).astype(complex)
S_DIAG3 = np.diag([0, 1, 0]).astype(complex)  # (Sx Sx + Sy Sy - Sz Sz) / 2


@dataclass(frozen=True)
class AdParams:
    """Amplitude damping: g is the line width (1/reservoir correlation time),
    gamma the coupling strength (1/qubit relaxation time)."""

    g: float
    gamma: float

    def __post_init__(self):
        if self.g <= 0 or self.gamma <= 0:
            raise ValueError("AD parameters must be positive")


@dataclass(frozen=True)
class RtnParams:
    """Random telegraph noise: b couples system and environment, gamma_rtn is
    the fluctuation rate."""

    b: float
    gamma_rtn: float

    def __post_init__(self):
        if self.b <= 0 or self.gamma_rtn <= 0:
            raise ValueError("RTN parameters must be positive")


@dataclass(frozen=True)
class KrausSet:
    dim: int
    operators: tuple
    completeness_residual: float


def _finish_kraus(dim, ops) -> KrausSet:
    acc = np.zeros((dim, dim), dtype=complex)
    for k in ops:
        acc = acc + k.conj().T @ k
    residual = float(np.max(np.abs(acc - np.eye(dim))))
    if residual > COMPLETENESS_TOL:
        raise AssertionError(f"Kraus completeness residual {residual}")
    return KrausSet(dim, tuple(ops), residual)


def ad_lambda(params: AdParams, t: float) -> float:
    """Damping weight lambda(t) = 1 - e^(-g t) ((g/l) sinh(l t/2) + cosh(l t/2))^2
    with l = sqrt(g (g - 2 gamma)); the trigonometric branch is used when the
    radicand is negative. Clamped to [0, 1] against O(1e-12) rounding spill.
    """
    if t < 0:
        raise ValueError("time must be nonnegative")
    g, gamma = params.g, params.gamma
    disc = g * (g - 2 * gamma)
    if disc > 0:
        # exponential split of e^(-gt/2) [(g/l) sinh(lt/2) + cosh(lt/2)]:
        # l < g, so both exponents are nonpositive and nothing overflows
        l = math.sqrt(disc)
        u = 0.5 * ((1 + g / l) * math.exp((l - g) * t / 2)
                   + (1 - g / l) * math.exp(-(l + g) * t / 2))
        lam = 1 - u * u
    elif disc < 0:
        l = math.sqrt(-disc)
        amp = (g / l) * math.sin(l * t / 2) + math.cos(l * t / 2)
        lam = 1 - math.exp(-g * t) * amp * amp
    else:
        u = math.exp(-g * t / 2) * (1 + g * t / 2)
        lam = 1 - u * u
    return min(1.0, max(0.0, lam))


def ad_lambda_complex(params: AdParams, t: float) -> float:
    """lambda(t) by direct complex arithmetic; oracle for the branch logic."""
    g, gamma = params.g, params.gamma
    l = cmath.sqrt(complex(g * (g - 2 * gamma)))
    if abs(l) < 1e-150:
        amp = 1 + g * t / 2
    else:
        amp = (g / l) * cmath.sinh(l * t / 2) + cmath.cosh(l * t / 2)
    return (1 - cmath.exp(-g * t) * amp * amp).real


def rtn_kernel(params: RtnParams, t: float) -> float:
    """Memory kernel Lambda(t) = e^(-gamma t) [cos(zeta gamma t) + sin(zeta gamma t)/zeta]
    with zeta = sqrt((2b/gamma)^2 - 1); hyperbolic branch for (2b/gamma)^2 < 1
    and the limit e^(-gamma t)(1 + gamma t) at the degeneracy. |Lambda| <= 1.
    """
    if t < 0:
        raise ValueError("time must be nonnegative")
    b, gamma = params.b, params.gamma_rtn
    disc = (2 * b / gamma) ** 2 - 1
    x = gamma * t
    if abs(disc) < 1e-14:
        val = math.exp(-x) * (1 + x)
    elif disc > 0:
        z = math.sqrt(disc)
        val = math.exp(-x) * (math.cos(z * x) + math.sin(z * x) / z)
    else:
        # exponential split of e^(-x)[cosh(zx) + sinh(zx)/z]; z < 1 keeps
        # both exponents nonpositive
        z = math.sqrt(-disc)
        val = 0.5 * ((1 + 1 / z) * math.exp((z - 1) * x)
                     + (1 - 1 / z) * math.exp(-(z + 1) * x))
    return min(1.0, max(-1.0, val))


def rtn_kernel_complex(params: RtnParams, t: float) -> float:
    b, gamma = params.b, params.gamma_rtn
    z = cmath.sqrt(complex((2 * b / gamma) ** 2 - 1))
    x = gamma * t
    if abs(z) < 1e-150:
        return math.exp(-x) * (1 + x)
    return (cmath.exp(-x) * (cmath.cos(z * x) + cmath.sin(z * x) / z)).real


@dataclass(frozen=True)
class DepolarizingChannel:
    """Uniform mixing: rho -> (1 - p) rho + p I/2."""

    p: float

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise ValueError("depolarizing probability must lie in [0, 1]")

    def kraus(self, dim: int, t: float = 0.0) -> KrausSet:
        if dim != 2:
            raise ValueError("depolarizing channel is implemented for qubits only")
        # weights chosen so the map equals (1-p) rho + p I/2
        w0 = math.sqrt(1 - 3 * self.p / 4)
        w = math.sqrt(self.p / 4)
        ops = [w0 * I2, w * SIGMA_X, w * SIGMA_Y, w * SIGMA_Z]
        return _finish_kraus(2, ops)

    def regime(self) -> str:
        return MARKOVIAN


@dataclass(frozen=True)
class AdChannel:
    params: AdParams

    def kraus(self, dim: int, t: float) -> KrausSet:
        lam = ad_lambda(self.params, t)
        if dim == 2:
            k0 = np.diag([1, math.sqrt(1 - lam)]).astype(complex)
            k1 = np.zeros((2, 2), dtype=complex)
            k1[0, 1] = math.sqrt(lam)
            return _finish_kraus(2, [k0, k1])
        if dim == 3:
            k0 = np.diag([1, math.sqrt(1 - lam), math.sqrt(1 - lam)]).astype(complex)
            k1 = np.zeros((3, 3), dtype=complex)
            k1[0, 1] = math.sqrt(lam)
            k2 = np.zeros((3, 3), dtype=complex)
            k2[0, 2] = math.sqrt(lam)
            return _finish_kraus(3, [k0, k1, k2])
        raise ValueError(f"amplitude damping supports dimensions 2 and 3, not {dim}")

    def regime(self) -> str:
        return NON_MARKOVIAN if 2 * self.params.gamma > self.params.g else MARKOVIAN


@dataclass(frozen=True)
class RtnChannel:
    params: RtnParams

    def kraus(self, dim: int, t: float) -> KrausSet:
        val = rtn_kernel(self.params, t)
        wp = math.sqrt((1 + val) / 2)
        wm = math.sqrt((1 - val) / 2)
        if dim == 2:
            return _finish_kraus(2, [wp * I2, wm * SIGMA_Z])
        if dim == 3:
            return _finish_kraus(3, [wp * I3, wm * S_Z3, wm * S_DIAG3])
        raise ValueError(f"telegraph noise supports dimensions 2 and 3, not {dim}")

    def regime(self) -> str:
        # tau = 1/(2 gamma), so (4 b tau)^2 = (2b/gamma)^2
        return NON_MARKOVIAN if (2 * self.params.b / self.params.gamma_rtn) ** 2 > 1 else MARKOVIAN


Channel = DepolarizingChannel | AdChannel | RtnChannel


def depolarizing(p: float) -> DepolarizingChannel:
    return DepolarizingChannel(p)


def ad(g: float, gamma: float) -> AdChannel:
    return AdChannel(AdParams(g, gamma))


def rtn(b: float, gamma_rtn: float) -> RtnChannel:
    return RtnChannel(RtnParams(b, gamma_rtn))


def identity_channel_kraus(dim: int) -> KrausSet:
    return KrausSet(dim, (np.eye(dim, dtype=complex), np.zeros((dim, dim), dtype=complex)), 0.0)


def kraus_set(channel: Channel, dim: int, t: float = 0.0) -> KrausSet:
    """Kraus operators of a channel at time t for a qubit or qutrit."""
    return channel.kraus(dim, t)


def regime(channel: Channel) -> str:
    """'markovian' or 'non-markovian' according to the channel's parameters."""
    return channel.regime()


def apply_channel(rho, ks: KrausSet, locality: str = "single") -> np.ndarray:
    """Apply a Kraus set to a state.

    'single' acts on a state of the channel dimension; 'two_local' applies
    K_i (x) K_j to a bipartite state of dimension ks.dim**2.
    """
    rho = as_matrix(rho)
    if locality == "single":
        if rho.shape != (ks.dim, ks.dim):
            raise ValueError(f"state dimension {rho.shape[0]} != channel dimension {ks.dim}")
        out = np.zeros_like(rho)
        for k in ks.operators:
            out += k @ rho @ k.conj().T
        return out
    if locality == "two_local":
        d2 = ks.dim ** 2
        if rho.shape != (d2, d2):
            raise ValueError(f"two_local expects dimension {d2}, got {rho.shape[0]}")
        out = np.zeros_like(rho)
        for ki in ks.operators:
            for kj in ks.operators:
                k = np.kron(ki, kj)
                out += k @ rho @ k.conj().T
        return out
    raise ValueError(f"unknown locality {locality!r}")


def channel_from_spec(spec: dict) -> Channel:
    """Build a channel from its JSON form, e.g. {"type": "ad", "g": 0.01, "gamma": 5.0}."""
    kind = spec.get("type")
    if kind == "ad":
        return ad(float(spec["g"]), float(spec["gamma"]))
    if kind == "rtn":
        return rtn(float(spec["b"]), float(spec["gamma_rtn"]))
    if kind == "depolarizing":
        return depolarizing(float(spec["p"]))
    raise ValueError(f"unknown channel type {kind!r}")


def channel_to_spec(channel: Channel) -> dict:
    if isinstance(channel, AdChannel):
        return {"type": "ad", "g": channel.params.g, "gamma": channel.params.gamma}
    if isinstance(channel, RtnChannel):
        return {"type": "rtn", "b": channel.params.b, "gamma_rtn": channel.params.gamma_rtn}
    if isinstance(channel, DepolarizingChannel):
        return {"type": "depolarizing", "p": channel.p}
    raise TypeError(f"not a channel: {channel!r}")
