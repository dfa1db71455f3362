"""
Non-Markovian noise channels used as coin operators.

Each channel yields, for every vertex ``u`` of a :class:`DirectedWalkGraph`,
one Kraus operator per outgoing arc (the loop included). The operators at a
vertex satisfy ``sum C^H C = I`` on their own, which is what makes the
composite walk trace preserving.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .graph import Arc, DirectedWalkGraph
from .linalg import get_tolerance, identity, weyl


class ChannelError(ValueError):
    """Channel parameters outside their valid domain."""


@dataclass(frozen=True)
class ADC:
    """Non-Markovian amplitude damping.

    gamma : spontaneous emission rate
    g : spectral width of the system-environment coupling
    """

    gamma: float
    g: float

    name = "adc"
    time_dependent = True

    def __post_init__(self):
        if not self.gamma >= 0:
            raise ChannelError(f"ADC gamma must be >= 0, got {self.gamma}")
        if not self.g > 0:
            raise ChannelError(f"ADC g must be > 0, got {self.g}")

    def params(self) -> dict:
        return {"gamma": self.gamma, "g": self.g}


@dataclass(frozen=True)
class NMD:
    """Non-Markovian dephasing with channel parameter ``p`` in [0, 1/2]."""

    p: float
    eta: float
    omega: float

    name = "nmd"
    time_dependent = False

    def __post_init__(self):
        if not 0 <= self.p <= 0.5:
            raise ChannelError(f"NMD p must lie in [0, 1/2], got {self.p}")
        if 1 + self.eta * (1 - 2 * self.p) == 0:
            raise ChannelError("NMD denominator 1 + eta(1 - 2p) vanishes")

    def params(self) -> dict:
        return {"p": self.p, "eta": self.eta, "omega": self.omega}


@dataclass(frozen=True)
class Depol:
    """Non-Markovian depolarizing noise with mixing ``p`` and scale ``alpha``."""

    p: float
    alpha: float

    name = "depol"
    time_dependent = False

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise ChannelError(f"depolarizing p must lie in [0, 1], got {self.p}")
        if not self.alpha >= 0:
            raise ChannelError(f"depolarizing alpha must be >= 0, got {self.alpha}")

    def params(self) -> dict:
        return {"p": self.p, "alpha": self.alpha}


ChannelSpec = Union[ADC, NMD, Depol]

CHANNELS = {"adc": ADC, "nmd": NMD, "depol": Depol}


def lambda_adc(t: float, gamma: float, g: float) -> float:
    """Damping weight of the non-Markovian ADC at time ``t``.

    ``1 - exp(-g t) * Re[(g / l) sinh(l t / 2) + cosh(l t / 2)]^2`` with
    ``l = sqrt(g^2 - 2 gamma g)`` taken in complex arithmetic, so strong
    coupling (imaginary ``l``) gives the oscillating branch.
    """
    if not g > 0:
        raise ChannelError(f"ADC g must be > 0, got {g}")
    if t < 0:
        raise ChannelError(f"time must be >= 0, got {t}")
    if gamma < 0:
        raise ChannelError(f"ADC gamma must be >= 0, got {gamma}")
    l = cmath.sqrt(g * g - 2 * gamma * g)
    half = l * t / 2
    if abs(l) < 1e-300:
        # l -> 0 limit of (g / l) sinh(l t / 2)
        first = g * t / 2
    else:
        first = (g / l) * cmath.sinh(half)
    bracket = first + cmath.cosh(half)
    value = 1 - math.exp(-g * t) * bracket * bracket
    if abs(value.imag) >= 1e-12:
        raise ArithmeticError(f"lambda(t) has imaginary residue {value.imag:.3e}")
    lam = value.real
    if not -1e-9 <= lam <= 1 + 1e-9:
        raise ArithmeticError(f"lambda(t) = {lam!r} escaped [0, 1]")
    return min(1.0, max(0.0, lam))


def kappa_nmd(p: float, eta: float, omega: float) -> float:
    """Effective dephasing strength ``p (1 + eta (1-2p) sin(omega p)) / (1 + eta (1-2p))``."""
    if not 0 <= p <= 0.5:
        raise ChannelError(f"NMD p must lie in [0, 1/2], got {p}")
    den = 1 + eta * (1 - 2 * p)
    if den == 0:
        raise ChannelError("NMD denominator 1 + eta(1 - 2p) vanishes")
    value = p * (1 + eta * (1 - 2 * p) * math.sin(omega * p)) / den
    if not -1e-12 <= value <= 1 + 1e-12:
        raise ChannelError(f"kappa = {value!r} outside [0, 1] for p={p}, eta={eta}, omega={omega}")
    return min(1.0, max(0.0, value))


def depol_coefficients(p: float, alpha: float) -> tuple[float, float]:
    """Return ``(Lambda1, Lambda2) = (-alpha p, alpha (1 - p))``."""
    return -alpha * p, alpha * (1 - p)


@dataclass(frozen=True)
class CoinSet:
    """Coin operator for every arc of a walk graph, loops included."""

    n: int
    coins: dict[Arc, np.ndarray]

    def __getitem__(self, arc: Arc) -> np.ndarray:
        return self.coins[arc]

    def arcs_from(self, u: int) -> list[Arc]:
        return sorted(a for a in self.coins if a[0] == u)

    def vertex_residual(self, u: int) -> float:
        acc = np.zeros((self.n, self.n), dtype=np.complex128)
        for arc in self.arcs_from(u):
            c = self.coins[arc]
            acc += c.conj().T @ c
        return float(np.max(np.abs(acc - np.eye(self.n))))


def build_coins_adc(g: DirectedWalkGraph, lam: float) -> CoinSet:
    if not 0 <= lam <= 1:
        raise ChannelError(f"lambda must lie in [0, 1], got {lam}")
    n = g.n
    keep, move = math.sqrt(1 - lam), math.sqrt(lam)
    coins = {}
    for u in range(n):
        diag = np.ones(n)
        targets = g.out_neighbors(u)
        diag[targets] = keep
        coins[(u, u)] = np.diag(diag).astype(np.complex128)
        for v in targets:
            c = np.zeros((n, n), dtype=np.complex128)
            c[u, v] = move
            coins[(u, v)] = c
    return CoinSet(n, coins)


def build_coins_nmd(g: DirectedWalkGraph, kappa: float) -> CoinSet:
    if not 0 <= kappa <= 1:
        raise ChannelError(f"kappa must lie in [0, 1], got {kappa}")
    n = g.n
    coins = {}
    for u in range(n):
        targets = g.out_neighbors(u)
        d = len(targets)
        if d == 0:
            # an isolated vertex keeps all its weight on the loop
            coins[(u, u)] = identity(n)
            continue
        coins[(u, u)] = math.sqrt(1 - kappa) * identity(n)
        w = math.sqrt(kappa / d)
        for v in targets:
            coins[(u, v)] = w * weyl(n, u, v)
    return CoinSet(n, coins)


def build_coins_depol(g: DirectedWalkGraph, p: float, alpha: float) -> CoinSet:
    lam1, lam2 = depol_coefficients(p, alpha)
    n = g.n
    coins = {}
    for u in range(n):
        targets = g.out_neighbors(u)
        d = len(targets)
        stay = 1 + d * (1 - p) * lam1 / (d + 1)
        go = p * lam2 / (d + 1)
        if stay < 0 or go < 0:
            raise ChannelError(
                f"depolarizing coefficients invalid at vertex {u}: "
                f"loop radicand {stay:.6g}, edge radicand {go:.6g} (p={p}, alpha={alpha})"
            )
        coins[(u, u)] = math.sqrt(stay) * identity(n)
        for v in targets:
            coins[(u, v)] = math.sqrt(go) * weyl(n, u, v)
    return CoinSet(n, coins)


def build_coins(spec: ChannelSpec, g: DirectedWalkGraph, t: float = 0.0) -> CoinSet:
    """Coin set for ``spec`` on ``g``; ``t`` only matters for the ADC."""
    if isinstance(spec, ADC):
        return build_coins_adc(g, lambda_adc(t, spec.gamma, spec.g))
    if isinstance(spec, NMD):
        return build_coins_nmd(g, kappa_nmd(spec.p, spec.eta, spec.omega))
    if isinstance(spec, Depol):
        return build_coins_depol(g, spec.p, spec.alpha)
    raise TypeError(f"unknown channel spec {spec!r}")


def verify_completeness(cs: CoinSet) -> float:
    """Largest entrywise deviation of ``sum C^H C`` from the identity over all vertices."""
    return max(cs.vertex_residual(u) for u in range(cs.n))


def is_complete(cs: CoinSet, tol: float | None = None) -> bool:
    return verify_completeness(cs) <= (get_tolerance() if tol is None else tol)
