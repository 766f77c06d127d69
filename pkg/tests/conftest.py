"""Shared generators and independent oracles for the test suite.

Oracles here deliberately avoid the library's own code paths: partial
traces are einsum-based, product-ness is measured by sampled minimization,
and counts come from closed-form recurrences.
"""

import numpy as np
import pytest

from gmekron import (
    DensityOperator,
    PartyStructure,
    PureState,
    complete_partition,
    permute_parties,
    tensor_product,
)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def rand_vec(rng, d):
    return rng.normal(size=d) + 1j * rng.normal(size=d)


def rand_psd(rng, d, rank=None):
    """Random PSD matrix, full rank by default."""
    r = rank or d
    a = rng.normal(size=(d, r)) + 1j * rng.normal(size=(d, r))
    return a @ a.conj().T


def rand_pure(rng, dims, prefix="A"):
    st = PartyStructure.of_dims(dims, prefix)
    return PureState(rand_vec(rng, st.total_dim), st)


def rand_gme_block(rng, n_qubits, prefix="A"):
    """Random pure state on qubits that is genuinely entangled (verified)."""
    while True:
        psi = rand_pure(rng, [2] * n_qubits, prefix)
        if n_qubits == 1 or complete_partition(psi).r == 1:
            return psi


def random_block_product(rng, n, prefix="A"):
    """Pure n-qubit state assembled as a product of random GME blocks.

    Returns (state, partition_blocks) where the blocks record which parties
    were entangled together by construction.
    """
    parties = list(range(1, n + 1))
    rng.shuffle(parties)
    blocks = []
    while parties:
        size = int(rng.integers(1, min(3, len(parties)) + 1))
        block, parties = parties[:size], parties[size:]
        blocks.append(sorted(block))
    state = None
    order = []
    for i, block in enumerate(blocks):
        factor = rand_gme_block(rng, len(block), f"T{i}x")
        order.extend(block)
        state = factor if state is None else tensor_product(state, factor)
    # order[i] is the party id sitting at position i+1; send it home
    inverse = [0] * n
    for pos, party in enumerate(order, start=1):
        inverse[party - 1] = pos
    state = permute_parties(state, inverse)
    state = PureState(state.amplitudes, PartyStructure.qubits(n, prefix))
    return state, sorted([tuple(b) for b in blocks], key=lambda b: b[0])


def einsum_partial_trace(mat, dims, keep):
    """Independent partial-trace oracle over 0-based subsystem indices."""
    n = len(dims)
    t = mat.reshape(list(dims) * 2)
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:n])
    col = [letters[n + i] if i in keep else letters[i] for i in range(n)]
    out = "".join(letters[i] for i in keep) + "".join(letters[n + i]
                                                      for i in keep)
    expr = "".join(row) + "".join(col) + "->" + out
    reduced = np.einsum(expr, t)
    d = int(np.prod([dims[i] for i in keep]))
    return reduced.reshape(d, d)


def product_distance(vec, dims, side):
    """Sampled-oracle distance of a normalized vector from cut-factorized form.

    Uses the second singular value of the reshaped vector; zero exactly on
    vectors that factor across the cut.
    """
    n = len(dims)
    rest = [i for i in range(n) if i not in side]
    t = vec.reshape(dims).transpose(list(side) + rest)
    rows = int(np.prod([dims[i] for i in side]))
    sv = np.linalg.svd(t.reshape(rows, -1), compute_uv=False)
    return 0.0 if sv.size < 2 else float(sv[1])


def bell_numbers(n_max):
    """Bell numbers by the binomial recurrence B(n+1) = sum C(n,k) B(k)."""
    from math import comb

    out = [1]
    for n in range(n_max):
        out.append(sum(comb(n, k) * out[k] for k in range(n + 1)))
    return out


def random_biseparable_3q(rng, terms=4):
    """Explicit convex mixture of cut-separable 3-qubit states."""
    st = PartyStructure.qubits(3)
    mat = np.zeros((8, 8), dtype=complex)
    for _ in range(terms):
        cut = int(rng.integers(3))  # 0-based party alone on one side
        a = rand_psd(rng, 2)
        b = rand_psd(rng, 4)
        term = np.kron(a, b).reshape([2, 2, 2] * 2)
        if cut == 1:
            term = term.transpose([1, 0, 2, 4, 3, 5])
        elif cut == 2:
            term = term.transpose([1, 2, 0, 4, 5, 3])
        weight = float(rng.uniform(0.2, 1.0))
        mat += weight * term.reshape(8, 8)
    mat /= np.trace(mat).real
    return DensityOperator(mat, st, validate=False)


def random_product_vector(rng, dims):
    vec = np.array([1.0 + 0j])
    for d in dims:
        vec = np.kron(vec, rand_vec(rng, d))
    return vec


def random_invertible(rng, d, max_cond=50.0):
    """Random invertible matrix with bounded condition number."""
    while True:
        m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        if np.linalg.cond(m) <= max_cond:
            return m
