"""The Werner family: distillability bands and analytic twirling."""

import numpy as np

from gmekron import mix_identity, ppt_check, werner, werner_params, werner_twirl
from gmekron import PartyStructure, PureState

# Band structure as a function of the mixing parameter
for d in (2, 3):
    print(f"d = {d}: band edges at p = -1/{d} and p = -1/2")
    for p in (-1.0, -0.6, -1 / d + 0.01, 0.0, 1.0):
        params = werner_params(d, p)
        min_eig, is_ppt = ppt_check(werner(d, p))
        print(f"  p = {p:+.3f}: {params.band:26s} "
              f"min PT eigenvalue {min_eig:+.4f} ({'PPT' if is_ppt else 'NPT'})")

# Twirling maps any equal-dimension two-party state onto the family,
# preserving the swap expectation; family members are exact fixed points.
print("twirl fixed point: p =", werner_twirl(werner(3, -0.62)).p)

singlet = PureState.from_terms(PartyStructure.qubits(2),
                               {(0, 1): 1, (1, 0): -1}).to_density()
print("twirled singlet: p =", werner_twirl(singlet).p)

# Mixing a Bell projector with identity noise moves the twirled parameter
# up toward zero and destroys the negative partial transpose at x = 1.
bell = PureState.from_terms(PartyStructure.qubits(2),
                            {(0, 0): 1, (1, 1): 1}).to_density()
for x in (0.0, 0.5, 0.99, 1.01, 2.0):
    noisy = mix_identity(bell, x)
    min_eig, is_ppt = ppt_check(noisy)
    print(f"x = {x:4.2f}: twirled p = {werner_twirl(noisy).p:+.4f}, "
          f"min PT eigenvalue {min_eig:+.4f}")
