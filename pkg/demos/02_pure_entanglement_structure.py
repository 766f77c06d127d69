"""Complete partitions of pure states and the merge law.

The complete partition groups parties into the finest blocks across which
the vector factorizes; a single block means genuine multipartite
entanglement.  For the party-wise merge of two pure states the partition
of the product is the join of the factors' partitions, so two biseparable
states can merge into a genuinely entangled one.
"""

import numpy as np

from gmekron import (
    PartyStructure,
    PureState,
    complete_partition,
    factorizing_cuts,
    is_gme_pure,
    kronecker_product,
    predict_kron_partition,
)

q3 = PartyStructure.qubits(3)
q4 = PartyStructure.qubits(4)

# |000> + |011>: party 1 factors out, parties 2,3 form a Bell pair
psi = PureState.from_terms(q3, {(0, 0, 0): 1, (0, 1, 1): 1})
print("psi partition:", complete_partition(psi))
print("psi factorizing cuts:", [str(c) for c in factorizing_cuts(psi)])

# |011> + |101>: parties 1,2 entangled, party 3 factors out
phi = PureState.from_terms(PartyStructure.qubits(3, "B"),
                           {(0, 1, 1): 1, (1, 0, 1): 1})
print("phi partition:", complete_partition(phi))

# Neither state is genuinely entangled, but their party-wise merge is:
# no block survives in both partitions, so everything fuses.
merged = kronecker_product(psi, phi)
print("merged partition:", complete_partition(merged))
print("merged is GME:", is_gme_pure(merged))

# The prediction from the factors' partitions alone agrees with the
# from-scratch analysis of the merged 64-dimensional vector.
pred = predict_kron_partition(complete_partition(psi),
                              complete_partition(phi))
print("predicted:", pred)

# A four-qubit pair where a common singleton block survives the merge.
psi4 = PureState.from_terms(q4, {(0, 0, 1, 0): 1, (0, 0, 0, 1): 1,
                                 (0, 1, 1, 0): 1, (0, 1, 0, 1): 1})
phi4 = PureState.from_terms(PartyStructure.qubits(4, "B"),
                            {(0, 0, 1, 0): 1, (1, 0, 1, 1): 1,
                             (0, 1, 1, 0): -1, (1, 1, 1, 1): -1})
print("psi4:", complete_partition(psi4), " phi4:", complete_partition(phi4))
print("merged4:", complete_partition(kronecker_product(psi4, phi4)),
      "(party 2 stays separable)")

# Caution: an empty block intersection does not by itself force genuine
# entanglement; the remainders can split into independent components.
a = PureState.from_terms(q4, {(0, 0, 0, 0): 1, (0, 0, 1, 1): 1})
b = PureState.from_terms(PartyStructure.qubits(4, "B"),
                         {(0, 0, 0, 0): 1, (1, 1, 0, 0): 1})
print("disconnected case:",
      complete_partition(kronecker_product(a, b)))
