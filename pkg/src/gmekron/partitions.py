"""Set partitions of party indices and the block-level intersection.

Partitions serialize as sorted lists of sorted 1-based integer lists,
e.g. ``[[1], [2, 3]]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .states import Bipartition

__all__ = [
    "Partition",
    "enumerate_bipartitions",
    "enumerate_partitions",
    "partition_intersection",
    "MAX_PARTITION_N",
]

# Bell(12) = 4213597; beyond this, exhaustive partition work is pointless.
MAX_PARTITION_N = 12


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty blocks covering parties 1..n, sorted by minimum."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(int(i) for i in b)) for b in self.blocks),
                              key=lambda b: b[0] if b else 0))
        object.__setattr__(self, "blocks", blocks)
        if not blocks or any(not b for b in blocks):
            raise ValueError("blocks must be nonempty")
        flat = sorted(i for b in blocks for i in b)
        if flat != list(range(1, len(flat) + 1)):
            raise ValueError(
                f"blocks must partition 1..n exactly, got union {flat}"
            )

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(tuple((i,) for i in range(1, n + 1)))

    @classmethod
    def whole(cls, n: int) -> "Partition":
        return cls((tuple(range(1, n + 1)),))

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def r(self) -> int:
        return len(self.blocks)

    def block_set(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(b) for b in self.blocks)

    def to_lists(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.blocks)

    def __str__(self) -> str:
        return "[" + ",".join("[" + ",".join(map(str, b)) + "]"
                              for b in self.blocks) + "]"


def enumerate_bipartitions(n: int) -> list[Bipartition]:
    """All 2^(n-1) - 1 bipartitions of 1..n, each once (side containing 1)."""
    if n < 2:
        raise ValueError(f"need at least 2 parties, got {n}")
    out = []
    for mask in range(2 ** (n - 1)):
        s = frozenset([1] + [i for i in range(2, n + 1)
                             if mask & (1 << (i - 2))])
        if len(s) < n:
            out.append(Bipartition(s, n))
    return out


def enumerate_partitions(n: int) -> Iterator[Partition]:
    """All partitions of 1..n in restricted-growth order (Bell(n) of them)."""
    if n < 1:
        raise ValueError(f"need at least 1 party, got {n}")
    if n > MAX_PARTITION_N:
        raise ValueError(f"n = {n} exceeds the enumeration cap {MAX_PARTITION_N}")

    def grow(assignment: list[int], used: int) -> Iterator[list[int]]:
        if len(assignment) == n:
            yield assignment
            return
        for block in range(used + 1):
            yield from grow(assignment + [block], max(used, block + 1))

    for assignment in grow([0], 1):
        blocks: list[list[int]] = [[] for _ in range(max(assignment) + 1)]
        for party, block in enumerate(assignment, start=1):
            blocks[block].append(party)
        yield Partition(tuple(tuple(b) for b in blocks))


def partition_intersection(p: Partition, q: Partition) -> list[tuple[int, ...]]:
    """Blocks appearing, as identical index sets, in both partitions.

    Membership is block-level set equality, not refinement: {2} survives an
    intersection even when some {1,2} on the other side does not.  Both
    partitions must cover the same ground set 1..n; align smaller ground
    sets positionally before calling (see ``predict_kron_partition``).
    """
    if p.n != q.n:
        raise ValueError(
            f"partitions cover different ground sets (1..{p.n} vs 1..{q.n}); "
            f"identify the smaller set positionally and pad before intersecting"
        )
    common = p.block_set() & q.block_set()
    return sorted((tuple(sorted(b)) for b in common), key=lambda b: b[0])


def blocks_to_partition(blocks: Iterable[Iterable[int]]) -> Partition:
    return Partition(tuple(tuple(b) for b in blocks))
