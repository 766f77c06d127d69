"""Multiparty quantum states and the three products used to combine them.

States are kept unnormalized throughout; every operator identity in this
package is stated for raw (trace != 1) matrices, and ``normalized()`` is a
convenience that divides by the trace or vector norm.

Index conventions
-----------------
Parties are numbered 1..n in the public API.  Amplitudes and matrix entries
are stored row-major over the party order: for dims (d1, ..., dn) the basis
ket |i1, ..., in> sits at flat index ``((i1*d2 + i2)*d3 + ...)``.

When two parties are merged into one (``kronecker_product``,
``kc_product``), the index inside the merged party is *first-factor major*:
merging a dim-dA party A with a dim-dB party B gives a party of dim dA*dB
whose basis state |a, b> has index ``a*dB + b``.  Worked 2x2 example: the
merged basis of two qubits is

    index 0 = |0>_A |0>_B,   index 1 = |0>_A |1>_B,
    index 2 = |1>_A |0>_B,   index 3 = |1>_A |1>_B.

So merging (|0>+|1>)_A with |1>_B yields amplitudes (0, 1, 0, 1).

File format
-----------
States serialize to JSON::

    {"parties": [{"label": "A", "dim": 2}, ...],
     "kind": "pure" | "mixed",
     "data": [[re, im], ...]}

``data`` is a flat row-major list of [re, im] pairs: length D for a pure
state, D*D for a density operator (rows concatenated).  Values round-trip
bit-exactly for exactly representable floats.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "HERM_TOL",
    "PSD_TOL",
    "DIM_CAP",
    "PartyStructure",
    "PureState",
    "DensityOperator",
    "Bipartition",
    "tensor_product",
    "kronecker_product",
    "kc_product",
    "partial_trace",
    "partial_transpose",
    "permute_parties",
    "state_to_dict",
    "state_from_dict",
    "save_state",
    "load_state",
    "StateFormatError",
]

# Relative tolerance for accepting/symmetrizing an almost-Hermitian matrix.
HERM_TOL = 1e-10
# Relative tolerance on the most negative eigenvalue of a density operator.
PSD_TOL = 1e-9
# Dense storage only; reject anything larger outright.
DIM_CAP = 4096


class StateFormatError(ValueError):
    """Raised when a state file or state dict violates the frozen format."""


@dataclass(frozen=True)
class PartyStructure:
    """Ordered list of (label, dim) pairs naming every tensor factor."""

    parties: tuple[tuple[str, int], ...]

    def __post_init__(self):
        parties = tuple((str(l), int(d)) for l, d in self.parties)
        object.__setattr__(self, "parties", parties)
        if not parties:
            raise ValueError("a state needs at least one party")
        labels = [l for l, _ in parties]
        if len(set(labels)) != len(labels):
            raise ValueError(f"party labels must be distinct, got {labels}")
        if any(d < 1 for _, d in parties):
            raise ValueError("party dimensions must be >= 1")
        if self.total_dim > DIM_CAP:
            raise ValueError(
                f"total dimension {self.total_dim} exceeds the cap {DIM_CAP}"
            )

    @classmethod
    def of_dims(cls, dims: Sequence[int], prefix: str = "A") -> "PartyStructure":
        """Structure with labels prefix1, prefix2, ... for the given dims."""
        return cls(tuple((f"{prefix}{i + 1}", int(d)) for i, d in enumerate(dims)))

    @classmethod
    def qubits(cls, n: int, prefix: str = "A") -> "PartyStructure":
        return cls.of_dims([2] * n, prefix)

    @property
    def n(self) -> int:
        return len(self.parties)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.parties)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(l for l, _ in self.parties)

    @property
    def total_dim(self) -> int:
        out = 1
        for _, d in self.parties:
            out *= d
        return out

    def subset(self, indices: Iterable[int]) -> "PartyStructure":
        """Sub-structure of the given 1-based parties, in ascending order."""
        idx = _check_indices(indices, self.n)
        return PartyStructure(tuple(self.parties[i - 1] for i in idx))

    def index_of(self, label: str) -> int:
        """1-based position of the party with the given label."""
        for i, (l, _) in enumerate(self.parties):
            if l == label:
                return i + 1
        raise KeyError(f"no party labeled {label!r}")


def _check_indices(indices: Iterable[int], n: int) -> tuple[int, ...]:
    idx = tuple(sorted(set(int(i) for i in indices)))
    if not idx:
        raise ValueError("empty party index set")
    if idx[0] < 1 or idx[-1] > n:
        raise ValueError(f"party indices {idx} out of range 1..{n}")
    return idx


@dataclass(frozen=True)
class Bipartition:
    """One side of a two-block split of parties 1..n; the complement is derived."""

    s: frozenset[int]
    n: int

    def __post_init__(self):
        s = frozenset(int(i) for i in self.s)
        object.__setattr__(self, "s", s)
        if not s or len(s) >= self.n:
            raise ValueError("bipartition side must be a nonempty proper subset")
        if min(s) < 1 or max(s) > self.n:
            raise ValueError(f"party indices {sorted(s)} out of range 1..{self.n}")

    @property
    def complement(self) -> frozenset[int]:
        return frozenset(range(1, self.n + 1)) - self.s

    def canonical(self) -> "Bipartition":
        """The representative whose side contains party 1."""
        return self if 1 in self.s else Bipartition(self.complement, self.n)

    def __str__(self) -> str:
        a = ",".join(map(str, sorted(self.s)))
        b = ",".join(map(str, sorted(self.complement)))
        return f"{{{a}}}|{{{b}}}"


def _as_side(s, n: int) -> frozenset[int]:
    if isinstance(s, Bipartition):
        if s.n != n:
            raise ValueError(f"bipartition is over {s.n} parties, state has {n}")
        return s.s
    return frozenset(_check_indices(s, n))


@dataclass(frozen=True, eq=False)
class PureState:
    """Unnormalized state vector over a party structure."""

    amplitudes: np.ndarray
    structure: PartyStructure

    def __post_init__(self):
        amp = np.ascontiguousarray(self.amplitudes, dtype=complex).reshape(-1)
        if amp.size != self.structure.total_dim:
            raise ValueError(
                f"vector length {amp.size} != total dimension "
                f"{self.structure.total_dim}"
            )
        if not np.any(amp):
            raise ValueError("state vector must be nonzero")
        amp.flags.writeable = False
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def from_terms(cls, structure: PartyStructure,
                   terms: dict[tuple[int, ...], complex]) -> "PureState":
        """Build a vector from {basis-index tuple: amplitude} entries."""
        amp = np.zeros(structure.total_dim, dtype=complex)
        for idx, coeff in terms.items():
            if len(idx) != structure.n:
                raise ValueError(f"basis tuple {idx} needs {structure.n} entries")
            flat = 0
            for i, d in zip(idx, structure.dims):
                if not 0 <= i < d:
                    raise ValueError(f"basis index {idx} out of range for dims "
                                     f"{structure.dims}")
                flat = flat * d + i
            amp[flat] += coeff
        return cls(amp, structure)

    @property
    def n(self) -> int:
        return self.structure.n

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "PureState":
        return PureState(self.amplitudes / self.norm(), self.structure)

    def to_density(self) -> "DensityOperator":
        mat = np.outer(self.amplitudes, self.amplitudes.conj())
        return DensityOperator(mat, self.structure, validate=False)

    def relabeled(self, prefix: str = "A") -> "PureState":
        return PureState(self.amplitudes,
                         PartyStructure.of_dims(self.structure.dims, prefix))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Unnormalized Hermitian PSD operator over a party structure.

    The constructor symmetrizes matrices that are Hermitian within
    ``HERM_TOL`` relative to the largest entry and rejects anything worse;
    the smallest eigenvalue must be >= -PSD_TOL relative to the largest.
    Pass ``validate=False`` for matrices that are PSD by construction.
    """

    matrix: np.ndarray
    structure: PartyStructure
    validate: bool = True

    def __post_init__(self):
        mat = np.ascontiguousarray(self.matrix, dtype=complex)
        d = self.structure.total_dim
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} != ({d}, {d})")
        if self.validate:
            scale = np.abs(mat).max()
            if scale > 0:
                herm_err = np.abs(mat - mat.conj().T).max()
                if herm_err > HERM_TOL * scale:
                    raise ValueError(
                        f"matrix is not Hermitian: |M - M^dag|_max = {herm_err:g} "
                        f"exceeds {HERM_TOL:g} * |M|_max"
                    )
                mat = 0.5 * (mat + mat.conj().T)
                eigs = np.linalg.eigvalsh(mat)
                floor = -PSD_TOL * max(eigs[-1], scale)
                if eigs[0] < floor:
                    raise ValueError(
                        f"matrix is not positive semidefinite: min eigenvalue "
                        f"{eigs[0]:g}, max {eigs[-1]:g}"
                    )
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "validate", True)

    @property
    def n(self) -> int:
        return self.structure.n

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def normalized(self) -> "DensityOperator":
        t = self.trace()
        if t <= 0:
            raise ValueError("cannot normalize an operator with trace <= 0")
        return DensityOperator(self.matrix / t, self.structure, validate=False)

    def rank(self, tol: float = 1e-8) -> int:
        eigs = np.linalg.eigvalsh(self.matrix)
        top = eigs[-1]
        if top <= 0:
            return 0
        return int(np.count_nonzero(eigs > tol * top))

    def range_basis(self, tol: float = 1e-8) -> np.ndarray:
        """Columns spanning the range, ordered by decreasing eigenvalue."""
        eigs, vecs = np.linalg.eigh(self.matrix)
        top = eigs[-1]
        keep = eigs > tol * max(top, 0)
        return vecs[:, keep][:, ::-1]

    def as_pure(self, tol: float = 1e-8) -> PureState:
        """Extract the vector of a rank-one operator."""
        eigs, vecs = np.linalg.eigh(self.matrix)
        if eigs[-1] <= 0 or np.any(eigs[:-1] > tol * eigs[-1]):
            raise ValueError("operator is not rank one")
        return PureState(vecs[:, -1] * np.sqrt(eigs[-1]), self.structure)

    def relabeled(self, prefix: str = "A") -> "DensityOperator":
        return DensityOperator(
            self.matrix, PartyStructure.of_dims(self.structure.dims, prefix),
            validate=False)

    def regrouped(self, groups: Sequence[Sequence[int]]) -> "DensityOperator":
        """Coalesce runs of adjacent parties into single parties.

        ``groups`` must list every party index 1..n exactly once, in order,
        as contiguous ascending runs; merging adjacent parties needs no data
        movement under row-major layout.
        """
        flat = [i for g in groups for i in g]
        if flat != list(range(1, self.n + 1)):
            raise ValueError("groups must partition 1..n into contiguous runs")
        parties = []
        for g in groups:
            label = "".join(self.structure.labels[i - 1] for i in g)
            dim = 1
            for i in g:
                dim *= self.structure.dims[i - 1]
            parties.append((label, dim))
        return DensityOperator(self.matrix, PartyStructure(tuple(parties)),
                               validate=False)


State = PureState | DensityOperator


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------

def _merged_label(la: str, lb: str) -> str:
    return la + lb


def _require_distinct_labels(a: PartyStructure, b: PartyStructure) -> None:
    clash = set(a.labels) & set(b.labels)
    if clash:
        raise ValueError(
            f"party labels {sorted(clash)} appear in both operands; relabel "
            f"one side first (e.g. .relabeled('B'))"
        )


def tensor_product(a: State, b: State) -> State:
    """Tensor product: the parties of ``a`` followed by the parties of ``b``."""
    _require_distinct_labels(a.structure, b.structure)
    structure = PartyStructure(a.structure.parties + b.structure.parties)
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(np.kron(a.amplitudes, b.amplitudes), structure)
    am = a.to_density().matrix if isinstance(a, PureState) else a.matrix
    bm = b.to_density().matrix if isinstance(b, PureState) else b.matrix
    return DensityOperator(np.kron(am, bm), structure, validate=False)


def _rearrange(state: State, fine_dims: Sequence[int], axis_order: Sequence[int],
               parties: Sequence[tuple[str, int]]) -> State:
    """Reindex a state: permute fine-grained axes, then fuse adjacent runs.

    ``fine_dims`` are the current per-axis dims (row-major), ``axis_order``
    the new axis sequence (0-based); consecutive axes fuse into the output
    parties, whose dims must multiply out to the same total.
    """
    structure = PartyStructure(tuple(parties))
    if isinstance(state, PureState):
        t = state.amplitudes.reshape(fine_dims)
        t = t.transpose(axis_order)
        return PureState(t.reshape(-1), structure)
    k = len(fine_dims)
    t = state.matrix.reshape(tuple(fine_dims) * 2)
    full_order = list(axis_order) + [ax + k for ax in axis_order]
    t = t.transpose(full_order)
    d = structure.total_dim
    return DensityOperator(t.reshape(d, d), structure, validate=False)


def kronecker_product(a: State, b: State) -> State:
    """Party-wise merge of ``b`` into the leading parties of ``a``.

    ``b`` must have m <= n parties (permute first if needed).  Party i <= m
    of the result carries both factors, first-factor major (see the module
    docstring); parties m+1..n are taken from ``a`` unchanged.  The entries
    are those of ``tensor_product(a, b)`` under this fixed reindexing, so
    the spectrum is untouched.
    """
    n, m = a.structure.n, b.structure.n
    if m > n:
        raise ValueError(
            f"second operand has {m} parties, first has {n}; "
            f"swap or permute so the second operand is not larger"
        )
    full = tensor_product(a, b)
    dims_a, dims_b = a.structure.dims, b.structure.dims
    axis_order = []
    parties = []
    for i in range(m):
        axis_order += [i, n + i]
        parties.append((_merged_label(a.structure.labels[i],
                                      b.structure.labels[i]),
                        dims_a[i] * dims_b[i]))
    for i in range(m, n):
        axis_order.append(i)
        parties.append(a.structure.parties[i])
    return _rearrange(full, dims_a + dims_b, axis_order, parties)


def _kept_indices(keep, n: int) -> tuple[int, ...]:
    if isinstance(keep, int):
        keep = (keep,)
    idx = tuple(int(i) for i in keep)
    if len(set(idx)) != len(idx):
        raise ValueError("kept party indices must be distinct")
    if any(i < 1 or i > n for i in idx):
        raise ValueError(f"kept party indices {idx} out of range 1..{n}")
    return idx


def kc_product(a: State, b: State, keep_a=1, keep_b=1) -> State:
    """Merge the non-kept parties of two states pairwise, by position.

    ``keep_a`` and ``keep_b`` name (1-based) the parties of each operand
    that stay separate; the remaining parties are matched up in order and
    merged as in ``kronecker_product``.  Both operands must have the same
    number of non-kept parties.  The result's party order is: kept parties
    of ``a``, kept parties of ``b``, merged pairs.

    With no shared parties this degenerates to ``tensor_product``.
    """
    ka = _kept_indices(keep_a, a.structure.n)
    kb = _kept_indices(keep_b, b.structure.n)
    shared_a = [i for i in range(1, a.structure.n + 1) if i not in ka]
    shared_b = [i for i in range(1, b.structure.n + 1) if i not in kb]
    if len(shared_a) != len(shared_b):
        raise ValueError(
            f"operands share {len(shared_a)} vs {len(shared_b)} parties; "
            f"the non-kept lists must have equal length"
        )
    full = tensor_product(a, b)
    n = a.structure.n
    axis_order = [i - 1 for i in ka] + [n + i - 1 for i in kb]
    parties = [a.structure.parties[i - 1] for i in ka]
    parties += [b.structure.parties[i - 1] for i in kb]
    for ia, ib in zip(shared_a, shared_b):
        axis_order += [ia - 1, n + ib - 1]
        la, da = a.structure.parties[ia - 1]
        lb, db = b.structure.parties[ib - 1]
        parties.append((_merged_label(la, lb), da * db))
    return _rearrange(full, a.structure.dims + b.structure.dims, axis_order,
                      parties)


# ---------------------------------------------------------------------------
# reductions and reindexings
# ---------------------------------------------------------------------------

def partial_trace(rho: DensityOperator, keep) -> DensityOperator:
    """Reduced operator on the given (1-based) parties; trace is preserved."""
    keep_idx = _check_indices(keep, rho.n)
    dims = rho.structure.dims
    n = rho.n
    t = rho.matrix.reshape(dims * 2)
    traced = [i for i in range(1, n + 1) if i not in keep_idx]
    # trace highest axes first so earlier axis numbers stay valid
    live = n
    for i in sorted(traced, reverse=True):
        t = np.trace(t, axis1=i - 1, axis2=i - 1 + live)
        live -= 1
    d = 1
    for i in keep_idx:
        d *= dims[i - 1]
    return DensityOperator(t.reshape(d, d), rho.structure.subset(keep_idx),
                           validate=False)


def partial_transpose(rho: DensityOperator, s) -> np.ndarray:
    """Transpose the given parties' indices; returns a plain matrix.

    The result is Hermitian but in general not PSD, so it is returned as a
    raw ndarray.  Applying the same transpose twice gives back the input.
    """
    side = _as_side(s, rho.n)
    return partial_transpose_matrix(rho.matrix, rho.structure.dims,
                                    [i - 1 for i in side])


def partial_transpose_matrix(mat: np.ndarray, dims: Sequence[int],
                             axes: Sequence[int]) -> np.ndarray:
    """Partial transpose of a raw matrix over 0-based party axes."""
    n = len(dims)
    t = mat.reshape(tuple(dims) * 2)
    perm = list(range(2 * n))
    for ax in axes:
        perm[ax], perm[n + ax] = perm[n + ax], perm[ax]
    d = mat.shape[0]
    return np.ascontiguousarray(t.transpose(perm).reshape(d, d))


def permute_parties(state: State, perm: Sequence[int]) -> State:
    """Reorder parties: position i of the result is party ``perm[i]`` (1-based)."""
    n = state.structure.n
    p = tuple(int(i) for i in perm)
    if sorted(p) != list(range(1, n + 1)):
        raise ValueError(f"{perm} is not a permutation of 1..{n}")
    parties = [state.structure.parties[i - 1] for i in p]
    return _rearrange(state, state.structure.dims, [i - 1 for i in p], parties)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def state_to_dict(state: State) -> dict:
    """Frozen JSON form of a state (see the module docstring)."""
    parties = [{"label": l, "dim": d} for l, d in state.structure.parties]
    if isinstance(state, PureState):
        data = state.amplitudes
        kind = "pure"
    else:
        data = state.matrix.reshape(-1)
        kind = "mixed"
    return {
        "parties": parties,
        "kind": kind,
        "data": [[float(z.real), float(z.imag)] for z in data],
    }


def state_from_dict(obj: dict) -> State:
    """Inverse of ``state_to_dict``; raises StateFormatError on bad input."""
    if not isinstance(obj, dict):
        raise StateFormatError("state document must be a JSON object")
    for key in ("parties", "kind", "data"):
        if key not in obj:
            raise StateFormatError(f"missing required key {key!r}")
    try:
        parties = tuple((p["label"], int(p["dim"])) for p in obj["parties"])
    except (TypeError, KeyError) as exc:
        raise StateFormatError(f"bad 'parties' entry: {exc}") from None
    try:
        structure = PartyStructure(parties)
    except ValueError as exc:
        raise StateFormatError(str(exc)) from None
    kind = obj["kind"]
    if kind not in ("pure", "mixed"):
        raise StateFormatError(f"kind must be 'pure' or 'mixed', got {kind!r}")
    raw = obj["data"]
    d = structure.total_dim
    want = d if kind == "pure" else d * d
    if not isinstance(raw, list) or len(raw) != want:
        raise StateFormatError(
            f"data must be a list of {want} [re, im] pairs for kind={kind!r} "
            f"and total dimension {d}"
        )
    try:
        data = np.array([complex(re, im) for re, im in raw], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise StateFormatError(f"bad data entry: {exc}") from None
    try:
        if kind == "pure":
            return PureState(data, structure)
        return DensityOperator(data.reshape(d, d), structure)
    except ValueError as exc:
        raise StateFormatError(str(exc)) from None


def save_state(path: str, state: State) -> None:
    """Write a state file atomically (temp file + rename)."""
    _atomic_write(path, json.dumps(state_to_dict(state)))


def load_state(path: str) -> State:
    """Read a state file; malformed JSON errors name the byte offset."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFormatError(
            f"{path}: malformed state file at offset {exc.pos}: {exc.msg}"
        ) from None
    return state_from_dict(obj)


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
