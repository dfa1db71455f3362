"""Per-snapshot observables: vertex probabilities, l1 coherence, fidelity.

Coherence and fidelity are taken on the full composite state
``sum_u rho_u (x) |u><u|``. Because that state is block diagonal both reduce
to sums over the coin blocks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import hermitian_eig, psd_sqrt
from .walk import WalkerState

FIDELITY_AGREEMENT = 1e-9
_EPS = np.finfo(float).eps


class MetricError(ValueError):
    pass


def probabilities(s: WalkerState) -> np.ndarray:
    """``Re tr(rho_u)`` for every vertex ``u``."""
    tr = np.einsum("uii->u", s.blocks)
    if np.max(np.abs(tr.imag), initial=0.0) >= 1e-12:
        raise MetricError(f"block traces carry imaginary part {np.max(np.abs(tr.imag)):.3e}")
    return tr.real.copy()


def coherence_l1(s: WalkerState) -> float:
    """Sum of absolute off-diagonal entries of the composite state."""
    off = ~np.eye(s.n, dtype=bool)
    return float(np.abs(s.blocks[:, off]).sum())


def fidelity_blocks(rho: WalkerState, sigma: WalkerState) -> float:
    """Uhlmann fidelity ``(tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`` of two block-diagonal states."""
    if rho.n != sigma.n:
        raise MetricError(f"dimension mismatch: {rho.n} vs {sigma.n}")
    root_fid = 0.0
    for u in range(rho.n):
        a = rho.blocks[u]
        if not np.any(a) or not np.any(sigma.blocks[u]):
            continue
        b = sigma.blocks[u]
        sa = psd_sqrt(a)
        # rounding in sa @ b @ sa is ~ n eps |a| |b|; sqrt would inflate it to ~1e-8
        noise = 16 * a.shape[0] * _EPS * np.linalg.norm(a, 2) * np.linalg.norm(b, 2)
        root_fid += float(np.trace(psd_sqrt(sa @ b @ sa, rank_tol=noise)).real)
    return root_fid**2


def _pure_support(s: WalkerState, tol: float = 1e-12) -> tuple[int, np.ndarray] | None:
    """If ``s`` is a single rank-1 block, return ``(vertex, psi)`` with ``rho_u = |psi><psi|``."""
    live = [u for u in range(s.n) if np.max(np.abs(s.blocks[u])) > tol]
    if len(live) != 1:
        return None
    u = live[0]
    w, v = hermitian_eig(s.blocks[u])
    if w.size > 1 and abs(w[1]) > tol:
        return None
    return u, v[:, 0] * np.sqrt(max(w[0], 0.0))


def fidelity_to_initial(s0: WalkerState, sk: WalkerState) -> float:
    """Fidelity of ``sk`` against the (pure) initial snapshot ``s0``.

    For a pure single-block ``s0 = |psi><psi|`` at vertex ``u`` the fidelity
    is ``<psi| sigma_u |psi>``; that value is returned after checking it
    against the general matrix-square-root evaluation. Other ``s0`` fall back
    to the general route.
    """
    if s0.n != sk.n:
        raise MetricError(f"dimension mismatch: {s0.n} vs {sk.n}")
    general = fidelity_blocks(s0, sk)
    pure = _pure_support(s0)
    if pure is None:
        return general
    u, psi = pure
    shortcut = float(np.vdot(psi, sk.blocks[u] @ psi).real)
    if abs(shortcut - general) > FIDELITY_AGREEMENT:
        raise MetricError(
            f"fidelity routes disagree: rank-1 {shortcut!r} vs square-root {general!r}"
        )
    return shortcut


@dataclass(frozen=True)
class MetricSeries:
    probabilities: np.ndarray  # (steps + 1, n)
    coherence: np.ndarray  # (steps + 1,)
    fidelity: np.ndarray  # (steps + 1,)

    @property
    def steps(self) -> int:
        return len(self.coherence) - 1

    @property
    def n(self) -> int:
        return self.probabilities.shape[1]

    def reported_probabilities(self) -> np.ndarray:
        """Probabilities with rounding-level negatives (above -1e-10) shown as 0."""
        p = self.probabilities.copy()
        p[(p < 0) & (p > -1e-10)] = 0.0
        return p


def compute_series(snapshots: list[WalkerState]) -> MetricSeries:
    if not snapshots:
        raise MetricError("cannot compute metrics of an empty trajectory")
    s0 = snapshots[0]
    return MetricSeries(
        probabilities=np.array([probabilities(s) for s in snapshots]),
        coherence=np.array([coherence_l1(s) for s in snapshots]),
        fidelity=np.array([fidelity_to_initial(s0, s) for s in snapshots]),
    )
