"""Generators and transformations: Werner states, twirling, local normal
forms, distillation-style projections, and product constructions that turn
small entangled states into genuinely multipartite entangled ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .certify import (
    GME,
    INCONCLUSIVE,
    NOT_SPANNED,
    SPANNED,
    CertificateReport,
    biseparable_span_test,
    certify,
    ppt_check,
)
from .pure import RANK_TOL, is_gme_pure
from .sdp import SDP_MAX_ITER, SDP_TOL, SdpSolution, gme_sdp, validate_witness
from .states import (
    DensityOperator,
    PartyStructure,
    PureState,
    kc_product,
)

__all__ = [
    "WernerParams",
    "SloccTransform",
    "werner",
    "werner_params",
    "swap_operator",
    "werner_twirl",
    "slocc_normal_form",
    "canonical_span_basis",
    "Rank3ProjectionError",
    "rank3_to_two_qubit",
    "rank2_kc_pipeline",
    "mix_identity",
    "compose_pure_gme",
    "kc_instance_check",
    "conjecture_harness",
    "harness_family",
]

SEPARABLE_BAND = "Separable"
NPT_UNDISTILLABLE_BAND = "NptOneCopyUndistillable"
NPT_DISTILLABLE_BAND = "NptOneCopyDistillable"


@dataclass(frozen=True)
class WernerParams:
    """Mixing parameter, local dimension, and distillability band.

    The band boundaries are p = -1/d (separable above, NPT below) and
    p = -1/2 (one-copy distillable strictly below).
    """

    d: int
    p: float
    band: str = field(init=False)

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("local dimension must be at least 2")
        if not -1.0 <= self.p <= 1.0:
            raise ValueError(f"parameter p = {self.p} outside [-1, 1]")
        if self.p >= -1.0 / self.d:
            band = SEPARABLE_BAND
        elif self.p >= -0.5:
            band = NPT_UNDISTILLABLE_BAND
        else:
            band = NPT_DISTILLABLE_BAND
        object.__setattr__(self, "band", band)


def werner_params(d: int, p: float) -> WernerParams:
    return WernerParams(d, p)


def swap_operator(d: int) -> np.ndarray:
    """The operator exchanging the two d-dimensional factors."""
    f = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            f[i * d + j, j * d + i] = 1.0
    return f


def werner(d: int, p: float, labels: tuple[str, str] = ("A", "B")
           ) -> DensityOperator:
    """The trace-one two-party state (I + p * SWAP) / (d^2 + p*d)."""
    WernerParams(d, p)  # validates d and p
    mat = (np.eye(d * d, dtype=complex) + p * swap_operator(d)) / (d * d + p * d)
    structure = PartyStructure(((labels[0], d), (labels[1], d)))
    return DensityOperator(mat, structure, validate=False)


def werner_twirl(rho: DensityOperator) -> WernerParams:
    """Parameters of the local-unitary-averaged version of a two-party state.

    Averaging over U (x) U sends any d x d state to the Werner family member
    with the same swap expectation f = tr(rho * SWAP) / tr(rho); that fixes
    p through f = (1 + p*d) / (d + p).  Computed analytically, so Werner
    states are exact fixed points.
    """
    if rho.n != 2 or rho.structure.dims[0] != rho.structure.dims[1]:
        raise ValueError("twirling needs two parties of equal dimension")
    d = rho.structure.dims[0]
    f = float(np.trace(rho.matrix @ swap_operator(d)).real) / rho.trace()
    p = (f * d - 1.0) / (d - f)
    return WernerParams(d, float(np.clip(p, -1.0, 1.0)))


# ---------------------------------------------------------------------------
# local (SLOCC) transforms and normal forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SloccTransform:
    """One invertible matrix per party, applied as X1 (x) ... (x) Xn."""

    factors: tuple[np.ndarray, ...]

    def __post_init__(self):
        factors = tuple(np.asarray(f, dtype=complex) for f in self.factors)
        object.__setattr__(self, "factors", factors)
        for i, f in enumerate(factors):
            if f.ndim != 2 or f.shape[0] != f.shape[1]:
                raise ValueError(f"factor {i + 1} is not square")
            cond = np.linalg.cond(f)
            if not np.isfinite(cond) or cond > 1e12:
                raise ValueError(f"factor {i + 1} is not invertible "
                                 f"(cond = {cond:.2e})")

    def full_matrix(self) -> np.ndarray:
        out = np.array([[1.0 + 0j]])
        for f in self.factors:
            out = np.kron(out, f)
        return out

    def apply(self, state):
        y = self.full_matrix()
        if isinstance(state, PureState):
            return PureState(y @ state.amplitudes, state.structure)
        return DensityOperator(y @ state.matrix @ y.conj().T, state.structure,
                               validate=False)

    def inverse(self) -> "SloccTransform":
        return SloccTransform(tuple(np.linalg.inv(f) for f in self.factors))


# canonical two-qubit subspaces, keyed by the kets spanning them; "++" is
# (|0>+|1>)(|0>+|1>), "0x"/"x0" are the common-factor spans |0>(x)C^2 and
# C^2(x)|0>
_CANONICAL_SPANS = {
    "00,11": [(1, 0, 0, 0), (0, 0, 0, 1)],
    "00,11,++": [(1, 0, 0, 0), (0, 0, 0, 1), (1, 1, 1, 1)],
    "00,01,10": [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)],
    "0x": [(1, 0, 0, 0), (0, 1, 0, 0)],
    "x0": [(1, 0, 0, 0), (0, 0, 1, 0)],
}


def canonical_span_basis(span_id: str) -> list[np.ndarray]:
    """Basis vectors of a named canonical two-qubit subspace."""
    if span_id not in _CANONICAL_SPANS:
        raise KeyError(f"unknown canonical span {span_id!r}")
    return [np.array(v, dtype=complex) for v in _CANONICAL_SPANS[span_id]]


def _product_factors(vec: np.ndarray, tol: float = 1e-8
                     ) -> tuple[np.ndarray, np.ndarray]:
    """Split a product two-qubit vector into its local factors."""
    m = vec.reshape(2, 2)
    u, sv, vh = np.linalg.svd(m)
    if sv.size > 1 and sv[1] > tol * sv[0]:
        raise ValueError("vector is not a product vector (reshape rank 2)")
    return u[:, 0] * sv[0], vh[0, :]


def _dependent(u: np.ndarray, v: np.ndarray, tol: float = 1e-9) -> bool:
    """Linear dependence of two vectors of any (equal) dimension."""
    sv = np.linalg.svd(np.column_stack([u, v]), compute_uv=False)
    return sv[1] <= tol * sv[0]


def _map_two(a1: np.ndarray, a2: np.ndarray) -> np.ndarray:
    """Invertible X with X a1 = |0> and X a2 = |1> (exactly)."""
    return np.linalg.inv(np.column_stack([a1, a2]))


def _map_one(a: np.ndarray) -> np.ndarray:
    """Invertible X with X a = |0> (second image chosen orthogonal)."""
    perp = np.array([-a[1].conj(), a[0].conj()])
    return np.linalg.inv(np.column_stack([a, perp]))


def slocc_normal_form(vectors) -> tuple[SloccTransform, str]:
    """Local normal form of a span of 2 or 3 two-qubit product vectors.

    Returns a per-party invertible pair (X, Y) mapping the span onto one of
    the canonical subspaces (see ``canonical_span_basis``), plus the
    canonical span id.  For two vectors whose local factors are independent
    on both sides, the image is span{|00>, |11>}.  For three, it is
    span{|00>, |11>, (|0>+|1>)(|0>+|1>)} when the first factors and the
    second factors are each pairwise independent, else
    span{|00>, |01>, |10>}.
    """
    vecs = [np.asarray(v.amplitudes if isinstance(v, PureState) else v,
                       dtype=complex).reshape(-1) for v in vectors]
    if len(vecs) not in (2, 3):
        raise ValueError("expected 2 or 3 vectors")
    if any(v.size != 4 for v in vecs):
        raise ValueError("vectors must live on a two-qubit system")
    if np.linalg.matrix_rank(np.column_stack(vecs), tol=1e-10) != len(vecs):
        raise ValueError("basis vectors are linearly dependent")
    factors = [_product_factors(v) for v in vecs]
    a = [f[0] for f in factors]
    b = [f[1] for f in factors]

    if len(vecs) == 2:
        a_dep = _dependent(a[0], a[1])
        b_dep = _dependent(b[0], b[1])
        if a_dep and b_dep:
            raise ValueError("the two product vectors are parallel")
        if a_dep:
            return (SloccTransform((_map_one(a[0]), _map_two(b[0], b[1]))),
                    "0x")
        if b_dep:
            return (SloccTransform((_map_two(a[0], a[1]), _map_one(b[0]))),
                    "x0")
        return (SloccTransform((_map_two(a[0], a[1]), _map_two(b[0], b[1]))),
                "00,11")

    # three vectors
    a_pairs = [(i, j) for i, j in ((0, 1), (0, 2), (1, 2))
               if _dependent(a[i], a[j])]
    b_pairs = [(i, j) for i, j in ((0, 1), (0, 2), (1, 2))
               if _dependent(b[i], b[j])]
    if not a_pairs and not b_pairs:
        # write the third first factor in terms of the first two and absorb
        # the coefficients so its image is exactly |0> + |1>
        lam, mu = np.linalg.solve(np.column_stack([a[0], a[1]]), a[2])
        x = _map_two(a[0] * lam, a[1] * mu)
        lam_b, mu_b = np.linalg.solve(np.column_stack([b[0], b[1]]), b[2])
        y = _map_two(b[0] * lam_b, b[1] * mu_b)
        return SloccTransform((x, y)), "00,11,++"
    if a_pairs:
        i, j = a_pairs[0]
        k = ({0, 1, 2} - {i, j}).pop()
        # first factors i and j are parallel; send them to |0>, the third
        # to |1>, and the third second-factor to |0>
        x = _map_two(a[i], a[k])
        y = _map_one(b[k])
        return SloccTransform((x, y)), "00,01,10"
    i, j = b_pairs[0]
    k = ({0, 1, 2} - {i, j}).pop()
    x = _map_one(a[k])
    y = _map_two(b[i], b[k])
    return SloccTransform((x, y)), "00,01,10"


# ---------------------------------------------------------------------------
# rank-3 bipartite projection to a two-qubit entangled state
# ---------------------------------------------------------------------------

class Rank3ProjectionError(ValueError):
    """No local projection of the given state came out entangled.

    Carries the transformed matrix of the x-elimination branch (when that
    branch ran) so callers can inspect the intermediate form.
    """

    def __init__(self, message: str, transformed: np.ndarray | None = None,
                 attempts: list | None = None):
        super().__init__(message)
        self.transformed = transformed
        self.attempts = attempts or []


@dataclass
class Rank3Projection:
    """A successful projection to an entangled two-qubit state."""

    two_qubit: DensityOperator
    pre_transform: np.ndarray        # invertible, applied on the first party
    iso_a: np.ndarray                # 2 x dA isometry rows
    iso_b: np.ndarray                # 2 x dB isometry rows
    min_pt_eigenvalue: float
    branch: str                      # "pair" | "x-elimination"


def _project_pair(mat: np.ndarray, dims: tuple[int, int], rows_a: tuple[int, int],
                  b_i: np.ndarray, b_j: np.ndarray):
    """Compress onto two first-party levels and the span of two b-factors."""
    da, db = dims
    iso_a = np.zeros((2, da), dtype=complex)
    iso_a[0, rows_a[0]] = 1.0
    iso_a[1, rows_a[1]] = 1.0
    q, _ = np.linalg.qr(np.column_stack([b_i, b_j]))
    iso_b = q.conj().T
    full = np.kron(iso_a, iso_b)
    return full @ mat @ full.conj().T, iso_a, iso_b


def rank3_to_two_qubit(rho: DensityOperator, product_basis=None,
                       tol: float = RANK_TOL) -> Rank3Projection:
    """Project a rank-3 bipartite state with product-spanned range to an
    entangled two-qubit state.

    ``product_basis`` is a sequence of three product vectors spanning the
    range; for two-qubit inputs it can be found automatically.  After an
    invertible first-party map sends the three first factors to basis
    vectors, each pair of independent second factors offers a two-level
    compression; the first compression whose output fails the partial
    transpose test is returned.  When all second factors are parallel, an
    invertible elimination empties the cross terms first; the state is then
    a product with the common second factor and no entangled projection
    exists, which is reported as an error carrying the transformed matrix.
    """
    if rho.n != 2:
        raise ValueError("expected a bipartite state")
    rhon = rho.normalized()
    if rhon.rank(tol) != 3:
        raise ValueError(f"expected rank 3, got rank {rhon.rank(tol)}")
    dims = rho.structure.dims
    if product_basis is None:
        span = biseparable_span_test(rho, tol)
        if span.verdict != SPANNED or len(span.vectors) < 3:
            raise ValueError(
                "no product basis supplied and none could be computed; "
                "pass three product vectors spanning the range")
        product_basis = span.vectors[:3]
    vecs = [np.asarray(v.amplitudes if isinstance(v, PureState) else v,
                       dtype=complex).reshape(-1) for v in product_basis]
    if len(vecs) != 3:
        raise ValueError("product_basis must hold exactly 3 vectors")
    da, db = dims
    a_fac, b_fac = [], []
    for v in vecs:
        m = v.reshape(da, db)
        u, sv, vh = np.linalg.svd(m)
        if sv[1] > 1e-7 * sv[0]:
            raise ValueError("a basis vector is not a product vector")
        a_fac.append(u[:, 0])
        b_fac.append(vh[0, :].conj())

    a_mat = np.column_stack(a_fac)
    if np.linalg.matrix_rank(a_mat, tol=1e-9) < 3:
        raise ValueError("the three first factors are linearly dependent; "
                         "this construction needs them independent")
    # complete to a basis of the first party and map the factors to levels
    if da > 3:
        q, _ = np.linalg.qr(np.column_stack([a_mat,
                                             np.eye(da, dtype=complex)]))
        basis = np.column_stack([a_mat, q[:, 3:da]])
    else:
        basis = a_mat
    t_a = np.linalg.inv(basis)
    full_t = np.kron(t_a, np.eye(db, dtype=complex))
    work = full_t @ rhon.matrix @ full_t.conj().T

    attempts = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        if _dependent(b_fac[i], b_fac[j]):
            continue
        out, iso_a, iso_b = _project_pair(work, dims, (i, j),
                                          b_fac[i], b_fac[j])
        tr = np.trace(out).real
        if tr <= 1e-12:
            attempts.append(((i, j), "projection annihilated the state"))
            continue
        two_qubit = DensityOperator(out, PartyStructure.qubits(2),
                                    validate=False)
        min_eig, is_ppt = ppt_check(two_qubit)
        if not is_ppt:
            return Rank3Projection(two_qubit, t_a, iso_a, iso_b,
                                   min_eig, "pair")
        attempts.append(((i, j), f"projection PPT (min eig {min_eig:.2e})"))

    if not attempts:
        # all second factors parallel: eliminate the cross terms with an
        # invertible map on the first party, then compress levels 2,3
        tau = np.zeros((3, 3), dtype=complex)
        bb = b_fac[0] / np.linalg.norm(b_fac[0])
        for r in range(3):
            for c in range(3):
                blk = work.reshape(da, db, da, db)[r, :, c, :]
                tau[r, c] = bb.conj() @ blk @ bb
        if abs(tau[0, 0]) <= 1e-14:
            raise Rank3ProjectionError(
                "cannot normalize the elimination: the leading ensemble "
                "weight vanishes; permute the basis vectors")
        x = np.eye(da, dtype=complex)
        x[1, 0] = -tau[1, 0] / tau[0, 0]
        x[2, 0] = -tau[2, 0] / tau[0, 0]
        full_x = np.kron(x, np.eye(db, dtype=complex))
        transformed = full_x @ work @ full_x.conj().T
        out, iso_a, iso_b = _project_pair(transformed, dims, (1, 2),
                                          b_fac[0], _orth_complement(b_fac[0]))
        tr = np.trace(out).real
        if tr > 1e-12:
            two_qubit = DensityOperator(out, PartyStructure.qubits(2),
                                        validate=False)
            min_eig, is_ppt = ppt_check(two_qubit)
            if not is_ppt:
                return Rank3Projection(two_qubit, x @ t_a, iso_a, iso_b,
                                       min_eig, "x-elimination")
        raise Rank3ProjectionError(
            "all second factors are parallel, so the state is a product "
            "with that factor and admits no entangled projection",
            transformed=transformed)
    raise Rank3ProjectionError(
        "every candidate compression came out separable; the input state "
        "appears to be separable", attempts=attempts)


def _orth_complement(b: np.ndarray) -> np.ndarray:
    q, _ = np.linalg.qr(np.column_stack([b, np.eye(b.size, dtype=complex)]))
    return q[:, 1]


# ---------------------------------------------------------------------------
# product constructions
# ---------------------------------------------------------------------------

def _rank2_two_qubit(x: float, prefix: str) -> DensityOperator:
    st = PartyStructure.qubits(2, prefix)
    psi = PureState.from_terms(st, {(0, 0): 1, (1, 1): 1})
    e00 = PureState.from_terms(st, {(0, 0): 1})
    mat = psi.to_density().matrix + x * e00.to_density().matrix
    return DensityOperator(mat, st, validate=False)


@dataclass
class Rank2PipelineReport:
    """Everything the rank-2 pair construction produced and certified."""

    x1: float
    x2: float
    rho: DensityOperator
    sigma: DensityOperator
    sigma_report: CertificateReport
    rho_solution: SdpSolution
    sigma_solution: SdpSolution

    @property
    def certified(self) -> bool:
        return (self.sigma_report.verdict == GME
                and self.rho_solution.certifies_gme
                and self.sigma_solution.certifies_gme)


def rank2_kc_pipeline(x1: float, x2: float, sdp_tol: float = SDP_TOL,
                      max_iter: int = SDP_MAX_ITER) -> Rank2PipelineReport:
    """Build a certified tripartite GME state from two rank-2 two-qubit states.

    The inputs are (|00>+|11>)(<00|+<11|) + x|00><00| with weights x1 and
    x2; keeping each state's first party separate and merging the seconds
    gives a 2x2x4 state rho.  Compressing the merged party onto levels
    {0, 3} leaves sigma = (|000>+|113>)(<000|+<113|) +
    (x1+x2+x1*x2)|000><000|, which the witness program certifies as
    genuinely entangled; rho inherits the verdict because local
    compressions cannot create genuine entanglement.
    """
    if x1 <= 0 or x2 <= 0:
        raise ValueError("both mixing weights must be positive")
    alpha = _rank2_two_qubit(x1, "A")
    beta = _rank2_two_qubit(x2, "B")
    rho = kc_product(alpha, beta, keep_a=1, keep_b=1)
    proj = np.zeros((4, 4), dtype=complex)
    proj[0, 0] = 1.0
    proj[3, 3] = 1.0
    p_full = np.kron(np.eye(4, dtype=complex), proj)
    sigma = DensityOperator(p_full @ rho.matrix @ p_full.conj().T,
                            rho.structure, validate=False)
    sigma_sol = gme_sdp(sigma, tol=sdp_tol, max_iter=max_iter)
    rho_sol = gme_sdp(rho, tol=sdp_tol, max_iter=max_iter)
    sigma_report = certify(sigma, sdp_tol=sdp_tol, max_iter=max_iter)
    return Rank2PipelineReport(x1, x2, rho, sigma, sigma_report,
                               rho_sol, sigma_sol)


def mix_identity(alpha: DensityOperator, x: float) -> DensityOperator:
    """alpha + x * I; full rank for any x > 0."""
    if x < 0:
        raise ValueError("mixing weight must be nonnegative")
    mat = alpha.matrix + x * np.eye(alpha.dim, dtype=complex)
    return DensityOperator(mat, alpha.structure, validate=False)


@dataclass
class CompositionReport:
    verdict: str
    reason: str
    product: DensityOperator
    gamma_grouped_report: CertificateReport
    product_solution: SdpSolution | None = None


def compose_pure_gme(delta: PureState, gamma: DensityOperator, n_shared: int,
                     gamma_report: CertificateReport | None = None,
                     sdp_tol: float = SDP_TOL,
                     max_iter: int = SDP_MAX_ITER) -> CompositionReport:
    """Merge a pure genuinely entangled state with an arbitrary state.

    The trailing ``n_shared`` parties of each operand are merged pairwise;
    the leading parties stay separate.  The product is genuinely entangled
    across all parties if and only if ``gamma`` is genuinely entangled when
    its shared parties are grouped into a single system; the "if" direction
    is certified here (the grouped certificate may be supplied), otherwise
    the report is inconclusive and carries the witness-program evidence on
    the product as a check of both directions.
    """
    k = delta.n - n_shared
    l = gamma.n - n_shared
    if n_shared < 0 or k < 1 or l < 1:
        raise ValueError("need at least one kept party per operand")
    if not is_gme_pure(delta):
        raise ValueError("the pure operand must be genuinely entangled")
    product = kc_product(delta.to_density(), gamma,
                         keep_a=tuple(range(1, k + 1)),
                         keep_b=tuple(range(1, l + 1)))
    if gamma_report is None:
        groups = [[i] for i in range(1, l + 1)]
        groups.append(list(range(l + 1, gamma.n + 1)))
        grouped = gamma.regrouped(groups)
        gamma_report = certify(grouped, sdp_tol=sdp_tol, max_iter=max_iter)
    if gamma_report.verdict == GME:
        return CompositionReport(
            GME, "pure-gme-merge", product, gamma_report)
    sol = None
    if product.dim <= 64:
        sol = gme_sdp(product, tol=sdp_tol, max_iter=max_iter)
        if sol.certifies_gme and validate_witness(sol, product, sdp_tol)["ok"]:
            return CompositionReport(GME, "ppt-mixture-witness", product,
                                     gamma_report, sol)
    return CompositionReport(INCONCLUSIVE, "grouped-factor-not-certified",
                             product, gamma_report, sol)


# ---------------------------------------------------------------------------
# conjecture harness
# ---------------------------------------------------------------------------

@dataclass
class KcInstanceResult:
    """Evidence for one merged-product instance; never a general claim."""

    label: str
    hypothesis_ok: bool
    hypothesis_note: str
    route: str                        # "range" | "sdp" | "skipped"
    verdict: str
    objective: float | None = None
    solver_status: str = ""

    def row(self) -> str:
        obj = "" if self.objective is None else f" objective={self.objective:+.3e}"
        return (f"{self.label}: hypothesis={'ok' if self.hypothesis_ok else 'FAIL'}"
                f" route={self.route} verdict={self.verdict}{obj}"
                f"{' status=' + self.solver_status if self.solver_status else ''}")


def kc_instance_check(alpha: DensityOperator, beta: DensityOperator,
                      label: str = "instance", sdp_tol: float = SDP_TOL,
                      max_iter: int = SDP_MAX_ITER) -> KcInstanceResult:
    """Check one pair: is the kept-party merge genuinely entangled?

    Hypotheses checked first: ``alpha`` entangled (bipartite partial
    transpose or full certification) and ``beta`` entangled between its
    kept party and the rest.  When the range of ``alpha`` is not spanned by
    biseparable vectors the product is genuinely entangled outright;
    otherwise the witness program runs on the product and only the
    per-instance outcome is recorded.
    """
    def entangled_across_kept(state):
        if state.n == 2:
            min_eig, is_ppt = ppt_check(state)
            return (not is_ppt), f"min PT eigenvalue {min_eig:+.3e}"
        groups = [[1], list(range(2, state.n + 1))]
        rep = certify(state.regrouped(groups), sdp_tol=sdp_tol,
                      max_iter=max_iter)
        return rep.verdict == GME, f"grouped verdict {rep.verdict}"

    if alpha.n == 2:
        a_ok, a_note = entangled_across_kept(alpha)
    else:
        rep = certify(alpha, sdp_tol=sdp_tol, max_iter=max_iter)
        a_ok, a_note = rep.verdict == GME, f"verdict {rep.verdict}"
    b_ok, b_note = entangled_across_kept(beta)
    if not (a_ok and b_ok):
        return KcInstanceResult(label, False,
                                f"alpha: {a_note}; beta: {b_note}",
                                "skipped", INCONCLUSIVE)
    span = biseparable_span_test(alpha)
    if span.verdict == NOT_SPANNED:
        return KcInstanceResult(label, True,
                                f"alpha: {a_note}; beta: {b_note}",
                                "range", GME)
    product = kc_product(alpha, beta, keep_a=1, keep_b=1)
    sol = gme_sdp(product, tol=sdp_tol, max_iter=max_iter)
    certified = sol.certifies_gme and validate_witness(sol, product,
                                                       sdp_tol)["ok"]
    return KcInstanceResult(label, True,
                            f"alpha: {a_note}; beta: {b_note}",
                            "sdp", GME if certified else INCONCLUSIVE,
                            sol.objective, sol.status)


def harness_family(family: str, trials: int, eps: float = 1e-3,
                   seed: int = 0) -> list[tuple[str, DensityOperator,
                                                DensityOperator]]:
    """Deterministic instance families for the harness.

    ``werner2``: pairs of d=2 Werner states at p = -1/2 - eps*i/trials,
    sweeping toward the distillability edge from below; the last instance
    sits exactly at offset eps.  ``rank2``: random positive pairs (x1, x2)
    in the rank-2 two-qubit family.  ``pure``: projectors onto random
    entangled two-qubit vectors paired with random NPT two-qubit states.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    out = []
    if family == "werner2":
        for i in range(1, trials + 1):
            p = -0.5 - eps * i / trials
            out.append((f"werner2[p={p:.6f}]",
                        werner(2, p, ("A", "C1")),
                        werner(2, p, ("B", "C2"))))
    elif family == "rank2":
        for i in range(trials):
            x1, x2 = rng.uniform(0.1, 5.0, size=2)
            out.append((f"rank2[x1={x1:.3f},x2={x2:.3f}]",
                        _rank2_two_qubit(x1, "A"),
                        _rank2_two_qubit(x2, "B")))
    elif family == "pure":
        for i in range(trials):
            alpha = _random_entangled_pure_pair(rng, "A")
            beta = _random_entangled_mixed_pair(rng, "B")
            out.append((f"pure[{i}]", alpha, beta))
    else:
        raise ValueError(f"unknown family {family!r}; "
                         f"choose werner2, rank2, or pure")
    return out


def _random_entangled_pure_pair(rng, prefix) -> DensityOperator:
    st = PartyStructure.qubits(2, prefix)
    while True:
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        v /= np.linalg.norm(v)
        if np.linalg.svd(v.reshape(2, 2), compute_uv=False)[1] > 1e-3:
            return PureState(v, st).to_density()


def _random_entangled_mixed_pair(rng, prefix) -> DensityOperator:
    st = PartyStructure.qubits(2, prefix)
    bell = PureState.from_terms(st, {(0, 0): 1, (1, 1): 1}).to_density()
    while True:
        noise = rng.uniform(0.0, 0.3)
        rho = DensityOperator(bell.matrix / 2 + noise * np.eye(4) / 4, st,
                              validate=False)
        if not ppt_check(rho)[1]:
            return rho


def conjecture_harness(instances, sdp_tol: float = SDP_TOL,
                       max_iter: int = SDP_MAX_ITER) -> list[KcInstanceResult]:
    """Run the per-instance check over (label, alpha, beta) triples."""
    return [kc_instance_check(a, b, label, sdp_tol, max_iter)
            for label, a, b in instances]
