"""Exact entanglement structure of pure states.

The central object is the *complete partition* of a pure state: the unique
grouping of parties such that the vector fully factorizes across the groups
while no group factorizes any further.  A pure state is genuinely
multipartite entangled exactly when its complete partition is one block.
"""

from __future__ import annotations

import numpy as np

from .partitions import Partition, enumerate_bipartitions, partition_intersection
from .states import Bipartition, PureState, _as_side

__all__ = [
    "RANK_TOL",
    "schmidt_rank",
    "factorizing_cuts",
    "split_across",
    "complete_partition",
    "is_gme_pure",
    "predict_kron_partition",
]

# Singular values below RANK_TOL * sigma_max count as zero.  Rank decisions
# are the one place floating error could flip a verdict, so inputs are
# normalized before reshaping.
RANK_TOL = 1e-8

# Exhaustive cut searches grow as 2^(n-1); keep them desk-scale.
MAX_CUT_SEARCH_N = 12


def _cut_matrix(psi: PureState, side: frozenset[int]) -> np.ndarray:
    """Reshape the (normalized) vector into a side x complement matrix."""
    dims = psi.structure.dims
    n = psi.n
    s = sorted(side)
    rest = [i for i in range(1, n + 1) if i not in side]
    t = (psi.amplitudes / psi.norm()).reshape(dims)
    t = t.transpose([i - 1 for i in s + rest])
    rows = 1
    for i in s:
        rows *= dims[i - 1]
    return t.reshape(rows, -1)


def schmidt_rank(psi: PureState, s, tol: float = RANK_TOL) -> int:
    """Rank of the vector reshaped along the cut s | complement."""
    side = _as_side(s, psi.n)
    sv = np.linalg.svd(_cut_matrix(psi, side), compute_uv=False)
    return int(np.count_nonzero(sv > tol * sv[0]))


def factorizing_cuts(psi: PureState, tol: float = RANK_TOL) -> list[Bipartition]:
    """All bipartitions across which the vector factorizes (rank one)."""
    n = psi.n
    if n < 2:
        return []
    if n > MAX_CUT_SEARCH_N:
        raise ValueError(f"cut search over {n} parties exceeds the cap "
                         f"{MAX_CUT_SEARCH_N}")
    return [cut for cut in enumerate_bipartitions(n)
            if schmidt_rank(psi, cut, tol) == 1]


def split_across(psi: PureState, s, tol: float = RANK_TOL
                 ) -> tuple[PureState, PureState]:
    """Factor a rank-one cut into its two tensor factors.

    Returns (side, complement) vectors whose tensor product reproduces the
    normalized input; the overall scale sits on the side factor.
    """
    side = _as_side(s, psi.n)
    mat = _cut_matrix(psi, side)
    u, sv, vh = np.linalg.svd(mat, full_matrices=False)
    if sv.size > 1 and sv[1] > tol * sv[0]:
        raise ValueError(f"state does not factorize across {sorted(side)}")
    a = u[:, 0] * sv[0]
    b = vh[0, :]
    rest = [i for i in range(1, psi.n + 1) if i not in side]
    return (PureState(a, psi.structure.subset(side)),
            PureState(b, psi.structure.subset(rest)))


def complete_partition(psi: PureState, tol: float = RANK_TOL,
                       verify: bool = True) -> Partition:
    """Finest grouping of parties across which the vector factorizes.

    Found by recursive splitting: take any factorizing cut, split the
    vector into its two factors and recurse into both sides; a side with no
    factorizing cut becomes a block.  With ``verify`` the output is
    re-checked directly: the state has rank one across every block, and no
    block admits an internal factorizing cut.
    """
    blocks = sorted(_split_blocks(psi, tol), key=min)
    part = Partition(tuple(tuple(sorted(b)) for b in blocks))
    if verify:
        _verify_complete(psi, part, tol)
    return part


def _split_blocks(psi: PureState, tol: float) -> list[list[int]]:
    n = psi.n
    if n == 1:
        return [[1]]
    if n > MAX_CUT_SEARCH_N:
        raise ValueError(f"partition search over {n} parties exceeds the cap "
                         f"{MAX_CUT_SEARCH_N}")
    for cut in enumerate_bipartitions(n):
        if schmidt_rank(psi, cut, tol) == 1:
            left, right = split_across(psi, cut, tol)
            s = sorted(cut.s)
            rest = [i for i in range(1, n + 1) if i not in cut.s]
            out = [[s[i - 1] for i in b] for b in _split_blocks(left, tol)]
            out += [[rest[i - 1] for i in b] for b in _split_blocks(right, tol)]
            return out
    return [list(range(1, n + 1))]


def _verify_complete(psi: PureState, part: Partition, tol: float) -> None:
    n = psi.n
    for block in part.blocks:
        if 0 < len(block) < n and schmidt_rank(psi, block, tol) != 1:
            raise AssertionError(
                f"block {block} does not factor out of the state")
    for block in part.blocks:
        if len(block) < 2:
            continue
        reduced, _ = split_across(psi, block, tol) if len(block) < n \
            else (psi, None)
        if factorizing_cuts(reduced, tol):
            raise AssertionError(
                f"block {block} still factorizes internally")


def is_gme_pure(psi: PureState, tol: float = RANK_TOL) -> bool:
    """True iff the complete partition is a single block."""
    return complete_partition(psi, tol, verify=False).r == 1


def predict_kron_partition(p: Partition, q: Partition) -> Partition:
    """Complete partition of a party-wise merged product, from the factors'.

    ``p`` belongs to the larger (n-party) factor, ``q`` to the m-party one,
    m <= n, with party i of ``q`` identified positionally with party i of
    ``p``; parties above m act as extra singleton blocks of ``q``.

    A merged cut factorizes exactly when both factors factorize across it
    (the reshaped product vector is the Kronecker product of the two
    reshapes, and ranks multiply), so the result is the coarsest common
    refinement-upper-bound of the two partitions: the connected components
    obtained by fusing every pair of overlapping blocks.  Blocks common to
    both partitions survive unchanged; in particular the product is
    genuinely entangled exactly when the component graph is connected,
    which with no common blocks is the generic outcome.
    """
    n, m = p.n, q.n
    if m > n:
        raise ValueError(f"second partition covers 1..{m}, first only 1..{n}; "
                         f"the second operand must not be larger")
    parent = list(range(n + 1))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        parent[find(i)] = find(j)

    for part in (p, q):
        for block in part.blocks:
            for i in block[1:]:
                union(block[0], i)
    components: dict[int, list[int]] = {}
    for i in range(1, n + 1):
        components.setdefault(find(i), []).append(i)
    return Partition(tuple(tuple(c) for c in components.values()))
