"""
Brute-force reference for the walk channel.

Every arc ``(u, v)`` becomes an explicit ``n^2 x n^2`` Kraus operator
``B = C_(u,v) (x) |v><u|`` acting on the composite space with the coin index
major and the position index minor: basis state ``(coin i, vertex u)`` sits
at flat index ``i * n + u``. Memory grows as ``O(n^4)`` per operator, so
this is meant for small graphs only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import CoinSet
from .graph import Arc, DirectedWalkGraph
from .linalg import DimensionError, basis_projector
from .walk import WalkerState, step

MAX_ORACLE_N = 16


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class SuperOp:
    n: int
    kraus: dict[Arc, np.ndarray]

    @property
    def dim(self) -> int:
        return self.n * self.n

    def completeness_residual(self) -> float:
        acc = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for b in self.kraus.values():
            acc += b.conj().T @ b
        return float(np.max(np.abs(acc - np.eye(self.dim))))


def build_superop(g: DirectedWalkGraph, cs: CoinSet) -> SuperOp:
    if g.n != cs.n:
        raise DimensionError(f"graph has n={g.n} but coins have n={cs.n}")
    n = g.n
    if n > MAX_ORACLE_N:
        raise OracleError(f"oracle limited to n <= {MAX_ORACLE_N}, got {n}")
    kraus = {}
    for u, v in g.arcs:
        shift = basis_projector(n, v, u)
        kraus[(u, v)] = np.kron(cs.coins[(u, v)], shift)
    return SuperOp(n, kraus)


def apply(so: SuperOp, rho_full: np.ndarray) -> np.ndarray:
    """Kraus sum ``sum_k B_k rho B_k^H``."""
    rho_full = np.asarray(rho_full, dtype=np.complex128)
    if rho_full.shape != (so.dim, so.dim):
        raise DimensionError(f"expected a {so.dim}x{so.dim} matrix, got {rho_full.shape}")
    out = np.zeros_like(rho_full)
    for b in so.kraus.values():
        out += b @ rho_full @ b.conj().T
    return out


def embed(s: WalkerState) -> np.ndarray:
    """Full composite matrix ``sum_u rho_u (x) |u><u|``."""
    n = s.n
    full = np.zeros((n, n, n, n), dtype=np.complex128)  # [i, u, j, w]
    for u in range(n):
        full[:, u, :, u] = s.blocks[u]
    return full.reshape(n * n, n * n)


def inter_block_magnitude(m: np.ndarray) -> float:
    """Largest entry coupling two different positions."""
    n = int(round(np.sqrt(m.shape[0])))
    t = np.abs(np.asarray(m).reshape(n, n, n, n))
    mask = ~np.eye(n, dtype=bool)[None, :, None, :]
    return float(np.max(np.where(mask, t, 0.0), initial=0.0))


def extract(m: np.ndarray, tol: float = 1e-12) -> WalkerState:
    m = np.asarray(m, dtype=np.complex128)
    n = int(round(np.sqrt(m.shape[0])))
    if m.shape != (n * n, n * n):
        raise DimensionError(f"expected an n^2 x n^2 matrix, got {m.shape}")
    leak = inter_block_magnitude(m)
    if leak > tol:
        raise OracleError(f"matrix is not block diagonal in position (inter-block entry {leak:.3e})")
    t = m.reshape(n, n, n, n)
    blocks = np.stack([t[:, u, :, u] for u in range(n)])
    return WalkerState(blocks)


def step_residual(s: WalkerState, cs: CoinSet, g: DirectedWalkGraph, so: SuperOp | None = None) -> float:
    """Entrywise gap between the blockwise step and the full Kraus sum."""
    so = build_superop(g, cs) if so is None else so
    full = apply(so, embed(s))
    blockwise = embed(step(s, cs, g))
    return float(np.max(np.abs(full - blockwise)))
