"""Block-diagonal walker state and its evolution.

The full walker state is ``sum_u rho_u (x) |u><u|``; only the ``n`` coin
blocks ``rho_u`` are stored, as one ``(n, n, n)`` array indexed
``[vertex, row, col]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channels import ChannelSpec, CoinSet, build_coins
from .graph import DirectedWalkGraph, Graph, to_walk_graph
from .linalg import DimensionError


class StateError(ValueError):
    """A walker state violates the density-matrix invariants."""


@dataclass(frozen=True)
class WalkerState:
    blocks: np.ndarray

    def __post_init__(self):
        b = self.blocks
        if b.ndim != 3 or not (b.shape[0] == b.shape[1] == b.shape[2]):
            raise DimensionError(f"blocks must have shape (n, n, n), got {b.shape}")
        b.setflags(write=False)

    @property
    def n(self) -> int:
        return self.blocks.shape[0]

    def block(self, u: int) -> np.ndarray:
        return self.blocks[u]

    def total_trace(self) -> complex:
        return complex(np.einsum("uii->", self.blocks))


def make_state(blocks) -> WalkerState:
    return WalkerState(np.array(blocks, dtype=np.complex128, copy=True))


def check_state(s: WalkerState, tol: float = 1e-10, psd_tol: float = 1e-9) -> None:
    """Raise :class:`StateError` unless ``s`` is a valid block-diagonal density matrix."""
    tr = s.total_trace()
    if abs(tr.real - 1) > tol or abs(tr.imag) > 1e-12:
        raise StateError(f"total trace {tr} is not 1")
    herm = np.max(np.abs(s.blocks - s.blocks.conj().transpose(0, 2, 1)))
    if herm > tol:
        raise StateError(f"block Hermiticity residual {herm:.3e} exceeds {tol}")
    low = min_block_eigenvalue(s)
    if low < -psd_tol:
        raise StateError(f"block eigenvalue {low:.3e} below -{psd_tol}")


def min_block_eigenvalue(s: WalkerState) -> float:
    h = 0.5 * (s.blocks + s.blocks.conj().transpose(0, 2, 1))
    return float(np.linalg.eigvalsh(h).min())


def initial_state(n: int, start: int = 0) -> WalkerState:
    """Walker at ``start`` with coin in the uniform superposition, block ``J_n / n``."""
    if not 0 <= start < n:
        raise StateError(f"start vertex {start} out of range for n={n}")
    blocks = np.zeros((n, n, n), dtype=np.complex128)
    blocks[start] = 1.0 / n
    return WalkerState(blocks)


def step(s: WalkerState, cs: CoinSet, g: DirectedWalkGraph) -> WalkerState:
    """One application of the walk channel.

    ``rho'_u = sum over arcs (v, u), loop included, of C_(v,u) rho_v C_(v,u)^H``.
    """
    n = s.n
    if cs.n != n or g.n != n:
        raise DimensionError(f"state (n={n}), coins (n={cs.n}) and graph (n={g.n}) disagree")
    out = np.zeros_like(s.blocks)
    for v, u in g.arcs:
        c = cs.coins[(v, u)]
        out[u] += c @ s.blocks[v] @ c.conj().T
    return WalkerState(out)


@dataclass(frozen=True)
class RunConfig:
    graph: Graph
    channel: ChannelSpec
    steps: int = 30
    dt: float = 1.0
    start_vertex: int = 0

    def __post_init__(self):
        if self.steps < 0:
            raise ValueError(f"steps must be >= 0, got {self.steps}")
        if not 0 <= self.start_vertex < self.graph.n:
            raise ValueError(f"start vertex {self.start_vertex} out of range for n={self.graph.n}")
        if not self.dt > 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")


@dataclass
class Trajectory:
    """Snapshots of a run together with the coin set used for each step."""

    config: RunConfig
    walk_graph: DirectedWalkGraph
    states: list[WalkerState] = field(default_factory=list)
    coins: list[CoinSet] = field(default_factory=list)


def coins_for_step(cfg: RunConfig, g: DirectedWalkGraph, k: int) -> CoinSet:
    """Coins for the transition from snapshot ``k`` to ``k + 1``.

    Time-dependent channels are evaluated at ``t = (k + 1) * dt``.
    """
    return build_coins(cfg.channel, g, (k + 1) * cfg.dt)


def trajectory(cfg: RunConfig, check: bool = True) -> Trajectory:
    wg = to_walk_graph(cfg.graph)
    traj = Trajectory(cfg, wg, [initial_state(cfg.graph.n, cfg.start_vertex)])
    fixed = None if cfg.channel.time_dependent else build_coins(cfg.channel, wg)
    for k in range(cfg.steps):
        cs = fixed if fixed is not None else coins_for_step(cfg, wg, k)
        traj.coins.append(cs)
        nxt = step(traj.states[-1], cs, wg)
        if check:
            check_state(nxt)
        traj.states.append(nxt)
    return traj


def run(cfg: RunConfig, check: bool = True) -> list[WalkerState]:
    """Evolve the initial state; returns ``steps + 1`` snapshots.

    With ``check`` every new snapshot is validated by :func:`check_state`.
    """
    return trajectory(cfg, check).states
