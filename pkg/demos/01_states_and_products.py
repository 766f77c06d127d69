"""States, the three products, and the basic reductions.

Everything is unnormalized unless .normalized() is called; party indices
are 1-based throughout.
"""

import numpy as np

from gmekron import (
    PartyStructure,
    PureState,
    kc_product,
    kronecker_product,
    partial_trace,
    partial_transpose,
    save_state,
    tensor_product,
)

# Two Bell pairs on separately labeled parties
bell_a = PureState.from_terms(PartyStructure.qubits(2, "A"),
                              {(0, 0): 1, (1, 1): 1})
bell_b = PureState.from_terms(PartyStructure.qubits(2, "B"),
                              {(0, 0): 1, (1, 1): 1})

# Plain tensor product: 4 parties
full = tensor_product(bell_a, bell_b)
print("tensor product parties:", full.structure.labels)

# Party-wise merge: 2 parties of dimension 4 each.  The merged vector is
# maximally entangled across the single cut: Schmidt rank 4.
merged = kronecker_product(bell_a, bell_b)
print("merged parties:", merged.structure.parties)
sv = np.linalg.svd(merged.amplitudes.reshape(4, 4), compute_uv=False)
print("singular values across the cut:", np.round(sv, 6))

# Keep one party of each factor separate and merge the rest pairwise:
# a tripartite state on 2 x 2 x 4
rho = kc_product(bell_a.to_density(), bell_b.to_density(),
                 keep_a=1, keep_b=1)
print("kc product parties:", rho.structure.parties)

# Reductions
ghz = PureState.from_terms(PartyStructure.qubits(3),
                           {(0, 0, 0): 1, (1, 1, 1): 1}).to_density()
print("GHZ reduced onto party 1:\n", partial_trace(ghz, {1}).matrix.real)

# The partial transpose is returned as a raw matrix: it need not be PSD,
# and a negative eigenvalue certifies entanglement across the cut.
pt = partial_transpose(bell_a.to_density(), {1})
print("Bell partial-transpose spectrum:", np.linalg.eigvalsh(pt))

# States serialize to a frozen JSON format
save_state("bell.json", bell_a)
print("wrote bell.json")
