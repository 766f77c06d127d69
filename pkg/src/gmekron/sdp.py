"""First-order splitting solver for the PPT-mixture witness program.

For a normalized n-party state rho the program is

    minimize  tr(W rho)
    subject to, for every bipartition M of the parties:
        W = P_M + Q_M^{T_M},   0 <= P_M <= I,   0 <= Q_M <= I,

where T_M is the partial transpose across M.  A state that is a convex
mixture of per-cut-PPT states satisfies tr(W rho) >= 0 for every feasible
W, so a certified objective below zero proves the state is genuinely
multipartite entangled.  A nonnegative optimum proves nothing.

The solver is Douglas-Rachford splitting with over-relaxation: one proximal
step projects onto the affine subspace tying W to every (P_M, Q_M) pair
(cheap, closed form), the other clips each P_M and Q_M to spectrum [0, 1].
No external solver is involved, so runs are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .partitions import enumerate_bipartitions
from .states import DensityOperator, partial_transpose_matrix

__all__ = ["SDP_TOL", "SDP_MAX_ITER", "SdpSolution", "gme_sdp", "validate_witness"]

# Objective threshold and feasibility budget for a certified witness.
SDP_TOL = 1e-7
SDP_MAX_ITER = 100_000

# The fixed-point residual is driven two orders below the certification
# tolerance so that box-constraint violations cannot fake a negative
# objective on a PPT mixture.
_RESIDUAL_FACTOR = 1e-2
_CHECK_EVERY = 25


@dataclass
class SdpSolution:
    """Witness and per-cut decompositions returned by the solver.

    ``witness`` equals ``P + PT(Q)`` exactly for every cut by construction;
    ``box_violation`` bounds how far any P or Q spectrum leaves [0, 1].
    """

    objective: float
    status: str                      # "converged" | "max_iter"
    iterations: int
    witness: np.ndarray
    cuts: list[tuple[int, ...]]      # 1-based parties on one side of each cut
    cut_p: list[np.ndarray]
    cut_q: list[np.ndarray]
    box_violation: float
    residual: float
    tol: float
    dims: tuple[int, ...] = field(default_factory=tuple)

    @property
    def certifies_gme(self) -> bool:
        """Objective clearly negative and constraints met within tolerance."""
        return (self.objective < -self.tol
                and self.box_violation <= 0.1 * self.tol
                and self.status == "converged")


def _clip_box(mat: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(mat)
    np.clip(w, 0.0, 1.0, out=w)
    return (v * w) @ v.conj().T


def gme_sdp(rho: DensityOperator, tol: float = SDP_TOL,
            max_iter: int = SDP_MAX_ITER, step: float = 1.0,
            over_relax: float = 1.8) -> SdpSolution:
    """Solve the witness program for a state of 3 or more parties.

    The state is normalized internally; the reported objective refers to
    the trace-one version.  Total dimension is capped at 64 (the iteration
    cost is one eigendecomposition per cut matrix).
    """
    n = rho.structure.n
    if n < 3:
        raise ValueError("the witness program needs at least 3 parties; "
                         "use ppt_check for bipartite states")
    d = rho.dim
    if d > 64:
        raise ValueError(f"total dimension {d} exceeds the solver cap 64")
    dims = rho.structure.dims
    target = rho.normalized().matrix
    cuts = [tuple(sorted(c.s)) for c in enumerate_bipartitions(n)]
    axes = [[i - 1 for i in cut] for cut in cuts]
    k = len(cuts)

    def pt(mat, i):
        return partial_transpose_matrix(mat, dims, axes[i])

    z_w = np.zeros((d, d), dtype=complex)
    z_p = [np.zeros((d, d), dtype=complex) for _ in range(k)]
    z_q = [np.zeros((d, d), dtype=complex) for _ in range(k)]

    def prox_affine(w0, ps, qs):
        # prox of <rho, W> restricted to {W = P_M + PT(Q_M) for all M}:
        # gradient step on W, then orthogonal projection (PT is an isometry,
        # so the subspace projection has the closed form below).
        w0 = w0 - step * target
        sums = [ps[i] + pt(qs[i], i) for i in range(k)]
        w = (2.0 * w0 + sum(sums)) / (2.0 + k)
        out_p, out_q = [], []
        for i in range(k):
            delta = 0.5 * (w - sums[i])
            out_p.append(ps[i] + delta)
            out_q.append(qs[i] + pt(delta, i))
        return w, out_p, out_q

    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    residual = np.inf
    status = "max_iter"
    for it in range(1, max_iter + 1):
        x_w, x_p, x_q = prox_affine(z_w, z_p, z_q)
        y_p = [_clip_box(2.0 * x_p[i] - z_p[i]) for i in range(k)]
        y_q = [_clip_box(2.0 * x_q[i] - z_q[i]) for i in range(k)]
        # the reflected step on W has no second constraint, so its update
        # reduces to pulling z_w toward the affine-feasible point
        z_w += over_relax * (x_w - z_w)
        for i in range(k):
            z_p[i] += over_relax * (y_p[i] - x_p[i])
            z_q[i] += over_relax * (y_q[i] - x_q[i])
        if it % _CHECK_EVERY == 0 or it == max_iter:
            residual = max(
                max(np.abs(y_p[i] - x_p[i]).max() for i in range(k)),
                max(np.abs(y_q[i] - x_q[i]).max() for i in range(k)),
            )
            if residual < tol * _RESIDUAL_FACTOR:
                status = "converged"
                break

    objective = float(np.trace(x_w @ target).real)
    violation = 0.0
    for i in range(k):
        wp = np.linalg.eigvalsh(x_p[i])
        wq = np.linalg.eigvalsh(x_q[i])
        violation = max(violation, -wp[0], wp[-1] - 1.0, -wq[0], wq[-1] - 1.0)
    return SdpSolution(
        objective=objective, status=status, iterations=it,
        witness=x_w, cuts=cuts, cut_p=x_p, cut_q=x_q,
        box_violation=float(max(violation, 0.0)),
        residual=float(residual), tol=tol, dims=dims,
    )


def validate_witness(sol: SdpSolution, rho: DensityOperator,
                     tol: float | None = None) -> dict:
    """Re-check a solution by direct matrix arithmetic, from scratch.

    Recomputes, for every cut: the splitting error ||W - P - PT(Q)||_max,
    the spectral bounds of P and Q, and tr(W rho) on the normalized state.
    Returns a dict with the recomputed numbers and an overall ``ok`` flag
    meaning the witness certifies genuine multipartite entanglement.
    """
    if tol is None:
        tol = sol.tol
    dims = rho.structure.dims
    target = rho.normalized().matrix
    split_err = 0.0
    box_err = 0.0
    for cut, p, q in zip(sol.cuts, sol.cut_p, sol.cut_q):
        qt = partial_transpose_matrix(q, dims, [i - 1 for i in cut])
        split_err = max(split_err, float(np.abs(sol.witness - p - qt).max()))
        for mat in (p, q):
            eigs = np.linalg.eigvalsh(mat)
            box_err = max(box_err, -eigs[0], eigs[-1] - 1.0, 0.0)
    value = float(np.trace(sol.witness @ target).real)
    ok = (split_err <= 0.1 * tol and box_err <= 0.1 * tol and value < -tol)
    return {
        "ok": ok,
        "objective": value,
        "split_error": split_err,
        "box_error": float(box_err),
        "cuts": len(sol.cuts),
    }
