"""gmekron: build multiparty quantum states with Kronecker-type products
and certify whether they are fully separable, biseparable, or genuinely
multipartite entangled.
"""

__version__ = "0.1.0"

from .certify import (
    BISEPARABLE,
    FULLY_SEPARABLE,
    GME,
    INCONCLUSIVE,
    NOT_SPANNED,
    SPANNED,
    CertificateReport,
    KronProvenance,
    SpanTestResult,
    biseparable_span_test,
    certify,
    ppt_check,
    product_vectors_in_plane,
)
from .constructions import (
    Rank3ProjectionError,
    SloccTransform,
    WernerParams,
    canonical_span_basis,
    compose_pure_gme,
    conjecture_harness,
    harness_family,
    kc_instance_check,
    mix_identity,
    rank2_kc_pipeline,
    rank3_to_two_qubit,
    slocc_normal_form,
    swap_operator,
    werner,
    werner_params,
    werner_twirl,
)
from .partitions import (
    Partition,
    enumerate_bipartitions,
    enumerate_partitions,
    partition_intersection,
)
from .pure import (
    RANK_TOL,
    complete_partition,
    factorizing_cuts,
    is_gme_pure,
    predict_kron_partition,
    schmidt_rank,
    split_across,
)
from .sdp import SDP_TOL, SdpSolution, gme_sdp, validate_witness
from .states import (
    DIM_CAP,
    HERM_TOL,
    PSD_TOL,
    Bipartition,
    DensityOperator,
    PartyStructure,
    PureState,
    StateFormatError,
    kc_product,
    kronecker_product,
    load_state,
    partial_trace,
    partial_transpose,
    permute_parties,
    save_state,
    state_from_dict,
    state_to_dict,
    tensor_product,
)

__all__ = [name for name in dir() if not name.startswith("_")]
