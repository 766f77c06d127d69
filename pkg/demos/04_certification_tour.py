"""The certification chain, from pure shortcuts to the witness program.

Verdicts are sound but not complete: GME always comes with re-checkable
evidence, and states outside the reach of the implemented tests come back
Inconclusive.
"""

import numpy as np

from gmekron import (
    DensityOperator,
    KronProvenance,
    PartyStructure,
    PureState,
    biseparable_span_test,
    certify,
    gme_sdp,
    kronecker_product,
    validate_witness,
    werner,
)

q3 = PartyStructure.qubits(3)
ghz = PureState.from_terms(q3, {(0, 0, 0): 1, (1, 1, 1): 1})

# Pure states go through the complete partition
print("GHZ:", certify(ghz).verdict)
print("|0>|Bell>:", certify(PureState.from_terms(
    q3, {(0, 0, 0): 1, (0, 1, 1): 1})).verdict)

# Bipartite mixed states go through the partial transpose; the report
# carries a witness that any separable state scores nonnegatively on.
report = certify(werner(2, -0.8))
print("Werner(2, -0.8):", report.verdict, "|", report.reason)

# Multipartite mixed: noisy GHZ is caught by the witness program
noisy = DensityOperator(ghz.to_density().matrix / 2 + 0.05 * np.eye(8), q3,
                        validate=False)
report = certify(noisy)
print("noisy GHZ:", report.verdict, "|", report.reason)
print("  witness value:", report.evidence["witness_value"])

# The witness can be re-validated from scratch by direct arithmetic
sol = gme_sdp(noisy)
print("  re-validation:", validate_witness(sol, noisy))

# Low-rank states are analyzed through their range instead: here the range
# holds exactly two product directions, yet no mixture of them can
# reproduce the state, so it is genuinely entangled without any solver.
st = PartyStructure.of_dims([2, 2, 4])
ent = PureState.from_terms(st, {(0, 0, 0): 1, (1, 1, 3): 1}).to_density()
top = PureState.from_terms(st, {(0, 0, 0): 1}).to_density()
sigma = DensityOperator(ent.matrix + 3 * top.matrix, st, validate=False)
span = biseparable_span_test(sigma)
print("sigma span test:", span.verdict, "with",
      len(span.vectors), "biseparable directions")
report = certify(sigma)
print("sigma:", report.verdict, "|", report.reason)

# Construction provenance unlocks merge shortcuts: merging anything into a
# genuinely entangled factor cannot destroy its entanglement.
sep = DensityOperator(np.eye(8, dtype=complex), PartyStructure.qubits(3, "B"),
                      validate=False)
merged = kronecker_product(ghz.to_density(), sep)
report = certify(merged, provenance=KronProvenance(ghz.to_density(), sep,
                                                   beta_fully_separable=True))
print("GHZ merged with separable noise:", report.verdict, "|", report.reason)

# Honest failure: nothing certifies the maximally mixed state either way
mm = DensityOperator(np.eye(8, dtype=complex), q3, validate=False)
print("maximally mixed:", certify(mm).verdict)
