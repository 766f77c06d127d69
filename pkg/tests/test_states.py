"""state representation, the three products, reductions, serialization."""

import json

import numpy as np
import pytest

from gmekron import (
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
from conftest import einsum_partial_trace, rand_psd, rand_pure


def ket(structure, *terms):
    return PureState.from_terms(structure, {idx: 1.0 for idx in terms})


q1 = PartyStructure.qubits(1)
q2 = PartyStructure.qubits(2)
q3 = PartyStructure.qubits(3)


class TestTypes:
    def test_party_structure_invariants(self):
        with pytest.raises(ValueError):
            PartyStructure((("A", 2), ("A", 3)))
        with pytest.raises(ValueError):
            PartyStructure((("A", 0),))
        with pytest.raises(ValueError):
            PartyStructure.of_dims([2] * 13)  # 8192 > cap

    def test_pure_state_invariants(self):
        with pytest.raises(ValueError):
            PureState(np.zeros(4), q2)
        with pytest.raises(ValueError):
            PureState(np.ones(3), q2)

    def test_density_rejects_non_hermitian(self):
        mat = np.array([[1, 1], [0, 1]], dtype=complex)
        with pytest.raises(ValueError, match="Hermitian"):
            DensityOperator(mat, q1)

    def test_density_rejects_negative(self):
        mat = np.diag([1.0, -0.1]).astype(complex)
        with pytest.raises(ValueError, match="positive semidefinite"):
            DensityOperator(mat, q1)

    def test_density_symmetrizes_roundoff(self):
        mat = np.eye(2, dtype=complex)
        mat[0, 1] = 1e-14
        rho = DensityOperator(mat, q1)
        assert np.array_equal(rho.matrix, rho.matrix.conj().T)

    def test_bipartition(self):
        b = Bipartition(frozenset({2}), 3)
        assert b.complement == {1, 3}
        assert b.canonical().s == {1, 3}
        with pytest.raises(ValueError):
            Bipartition(frozenset({1, 2}), 2)


class TestTensorProduct:
    def test_basis_projectors(self):
        a = ket(q1, (0,)).to_density()
        b = ket(PartyStructure.qubits(1, "B"), (1,)).to_density()
        out = tensor_product(a, b)
        expect = np.zeros((4, 4))
        expect[1, 1] = 1.0
        assert np.allclose(out.matrix, expect)

    def test_dimension_bookkeeping(self, rng):
        a = DensityOperator(rand_psd(rng, 4), q2)
        b = DensityOperator(rand_psd(rng, 4), PartyStructure.qubits(2, "B"))
        out = tensor_product(a, b)
        assert out.n == 4
        assert out.dim == 16

    def test_trace_multiplicative(self, rng):
        # oracle: plain float multiplication of the separate traces
        for _ in range(5):
            a = DensityOperator(rand_psd(rng, 4), q2)
            b = DensityOperator(rand_psd(rng, 8), PartyStructure.qubits(3, "B"))
            assert tensor_product(a, b).trace() == pytest.approx(
                a.trace() * b.trace(), rel=1e-12)

    def test_label_collision(self, rng):
        a = DensityOperator(rand_psd(rng, 2), q1)
        with pytest.raises(ValueError, match="relabel"):
            tensor_product(a, a)

    def test_associative_up_to_relabeling(self, rng):
        a = rand_pure(rng, [2], "A")
        b = rand_pure(rng, [3], "B")
        c = rand_pure(rng, [2], "C")
        left = tensor_product(tensor_product(a, b), c)
        right = tensor_product(a, tensor_product(b, c))
        assert np.allclose(left.amplitudes, right.amplitudes)
        assert left.structure.dims == right.structure.dims


class TestKroneckerProduct:
    def test_bell_bell_schmidt_rank_four(self):
        # oracle: reshape the merged vector and count singular values
        bell = ket(q2, (0, 0), (1, 1))
        out = kronecker_product(bell, bell.relabeled("B"))
        assert out.structure.dims == (4, 4)
        sv = np.linalg.svd(out.amplitudes.reshape(4, 4), compute_uv=False)
        assert np.count_nonzero(sv > 1e-10 * sv[0]) == 4

    def test_single_party_second_operand(self, rng):
        a = rand_pure(rng, [2, 3, 2], "A")
        b = rand_pure(rng, [5], "B")
        out = kronecker_product(a, b)
        assert out.structure.dims == (10, 3, 2)
        assert out.structure.labels == ("A1B1", "A2", "A3")

    def test_size_precondition(self, rng):
        a = rand_pure(rng, [2], "A")
        b = rand_pure(rng, [2, 2], "B")
        with pytest.raises(ValueError, match="permute"):
            kronecker_product(a, b)

    def test_entries_permutation_and_spectrum(self, rng):
        a = DensityOperator(rand_psd(rng, 4), q2)
        b = DensityOperator(rand_psd(rng, 4), PartyStructure.qubits(2, "B"))
        full = tensor_product(a, b)
        merged = kronecker_product(a, b)
        assert np.array_equal(np.sort_complex(merged.matrix.ravel()),
                              np.sort_complex(full.matrix.ravel()))
        assert np.allclose(np.linalg.eigvalsh(merged.matrix),
                           np.linalg.eigvalsh(full.matrix), atol=1e-12)

    def test_merged_index_convention(self):
        # (|0>+|1>)_A merged with |1>_B must give amplitudes (0, 1, 0, 1)
        a = PureState(np.array([1.0, 1.0], dtype=complex), q1)
        b = ket(PartyStructure.qubits(1, "B"), (1,))
        out = kronecker_product(a, b)
        assert np.allclose(out.amplitudes, [0, 1, 0, 1])


class TestKcProduct:
    def test_two_qubit_pair_gives_2_2_4(self, rng):
        a = DensityOperator(rand_psd(rng, 4), q2)
        b = DensityOperator(rand_psd(rng, 4), PartyStructure.qubits(2, "B"))
        out = kc_product(a, b)
        assert out.structure.dims == (2, 2, 4)
        assert out.structure.labels == ("A1", "B1", "A2B2")

    def test_no_shared_parties_degenerates_to_tensor(self, rng):
        a = rand_pure(rng, [2], "A")
        b = rand_pure(rng, [3], "B")
        out = kc_product(a, b, keep_a=1, keep_b=1)
        assert np.allclose(out.amplitudes, tensor_product(a, b).amplitudes)

    def test_partial_trace_recovers_first_factor(self, rng):
        # oracle: einsum partial trace on the fine-grained tensor product,
        # tracing the kept party of b and the b-half of every merged party
        a = DensityOperator(rand_psd(rng, 8), PartyStructure.of_dims([2, 2, 2]))
        bmat = rand_psd(rng, 12)
        bmat /= np.trace(bmat).real
        b = DensityOperator(bmat, PartyStructure.of_dims([3, 2, 2], "B"))
        out = kc_product(a, b)
        assert out.structure.dims == (2, 3, 4, 4)
        # fine-grained dims of the merged state: A1, B1, (A2 b2), (A3 b3)
        fine = [2, 3, 2, 2, 2, 2]
        reduced = einsum_partial_trace(out.matrix, fine, keep=[0, 2, 4])
        assert np.allclose(reduced, a.matrix, atol=1e-12)

    def test_mismatched_shared_count(self, rng):
        a = rand_pure(rng, [2, 2, 2], "A")
        b = rand_pure(rng, [2, 2], "B")
        with pytest.raises(ValueError, match="equal length"):
            kc_product(a, b, keep_a=1, keep_b=1)

    def test_entries_permutation_of_tensor(self, rng):
        a = DensityOperator(rand_psd(rng, 4), q2)
        b = DensityOperator(rand_psd(rng, 4), PartyStructure.qubits(2, "B"))
        full = tensor_product(a, b)
        merged = kc_product(a, b)
        assert np.array_equal(np.sort_complex(merged.matrix.ravel()),
                              np.sort_complex(full.matrix.ravel()))
        assert np.allclose(np.linalg.eigvalsh(merged.matrix),
                           np.linalg.eigvalsh(full.matrix), atol=1e-12)


class TestPartialTrace:
    def test_keep_all_identity(self, rng):
        rho = DensityOperator(rand_psd(rng, 8), q3)
        assert np.allclose(partial_trace(rho, {1, 2, 3}).matrix, rho.matrix)

    def test_ghz_single_party(self):
        # oracle: explicit index summation
        ghz = ket(q3, (0, 0, 0), (1, 1, 1)).to_density()
        reduced = partial_trace(ghz, {1})
        expect = np.zeros((2, 2), dtype=complex)
        t = ghz.matrix.reshape([2] * 6)
        for r in range(2):
            for c in range(2):
                expect[r, c] = sum(t[r, i, j, c, i, j]
                                   for i in range(2) for j in range(2))
        assert np.allclose(reduced.matrix, expect)
        assert np.allclose(reduced.matrix, np.eye(2))

    def test_product_state_factor(self, rng):
        a = rand_pure(rng, [2], "A").to_density()
        b = rand_pure(rng, [3], "B").to_density()
        c = rand_pure(rng, [2], "C").to_density()
        rho = tensor_product(tensor_product(a, b), c)
        reduced = partial_trace(rho, {2})
        ratio = reduced.matrix / b.matrix
        assert np.allclose(ratio, ratio.flat[0])

    def test_trace_preserved_random(self, rng):
        rho = DensityOperator(rand_psd(rng, 12), PartyStructure.of_dims([2, 3, 2]))
        for keep in ({1}, {2}, {1, 3}, {2, 3}):
            assert partial_trace(rho, keep).trace() == pytest.approx(
                rho.trace(), rel=1e-12)

    def test_matches_einsum_oracle(self, rng):
        dims = [2, 3, 2]
        rho = DensityOperator(rand_psd(rng, 12), PartyStructure.of_dims(dims))
        for keep in ([1], [2], [3], [1, 2], [1, 3], [2, 3]):
            mine = partial_trace(rho, set(keep)).matrix
            oracle = einsum_partial_trace(rho.matrix, dims,
                                          [i - 1 for i in keep])
            assert np.allclose(mine, oracle, atol=1e-12)

    def test_empty_keep(self, rng):
        rho = DensityOperator(rand_psd(rng, 4), q2)
        with pytest.raises(ValueError):
            partial_trace(rho, set())


class TestPartialTranspose:
    def test_diagonal_unchanged(self):
        rho = DensityOperator(np.diag([0.5, 0.1, 0.2, 0.2]).astype(complex), q2)
        assert np.allclose(partial_transpose(rho, {1}), rho.matrix)

    def test_bell_min_eigenvalue(self):
        # oracle: dense eigensolver on the transposed matrix
        bell = ket(q2, (0, 0), (1, 1)).to_density()
        eigs = np.linalg.eigvalsh(partial_transpose(bell, {1}))
        assert eigs[0] == pytest.approx(-1.0, abs=1e-12)

    def test_involution_and_hermitian(self, rng):
        from gmekron.states import partial_transpose_matrix

        rho = DensityOperator(rand_psd(rng, 12), PartyStructure.of_dims([2, 3, 2]))
        for s in ({1}, {2}, {1, 3}):
            pt = partial_transpose(rho, s)
            assert np.allclose(pt, pt.conj().T)
            assert np.trace(pt).real == pytest.approx(rho.trace())
            axes = [i - 1 for i in s]
            assert np.allclose(
                partial_transpose_matrix(pt, rho.structure.dims, axes),
                rho.matrix)


class TestPermuteParties:
    def test_identity(self, rng):
        rho = DensityOperator(rand_psd(rng, 8), q3)
        assert np.allclose(permute_parties(rho, (1, 2, 3)).matrix, rho.matrix)

    def test_swap_ket(self):
        psi = ket(q2, (0, 1))
        out = permute_parties(psi, (2, 1))
        assert np.allclose(out.amplitudes, [0, 0, 1, 0])

    def test_spectrum_invariant(self, rng):
        rho = DensityOperator(rand_psd(rng, 12), PartyStructure.of_dims([2, 3, 2]))
        for perm in ((2, 1, 3), (3, 2, 1), (2, 3, 1)):
            out = permute_parties(rho, perm)
            assert np.allclose(np.linalg.eigvalsh(out.matrix),
                               np.linalg.eigvalsh(rho.matrix), atol=1e-12)

    def test_invalid_perm(self, rng):
        rho = DensityOperator(rand_psd(rng, 4), q2)
        with pytest.raises(ValueError):
            permute_parties(rho, (1, 1))


class TestPsdPreservation:
    def test_products_stay_psd(self, rng):
        a = DensityOperator(rand_psd(rng, 4), q2)
        b = DensityOperator(rand_psd(rng, 4), PartyStructure.qubits(2, "B"))
        for out in (tensor_product(a, b), kronecker_product(a, b),
                    kc_product(a, b)):
            eigs = np.linalg.eigvalsh(out.matrix)
            assert eigs[0] >= -1e-9 * eigs[-1]
            assert np.abs(out.matrix - out.matrix.conj().T).max() < 1e-12

    def test_partial_trace_stays_psd(self, rng):
        rho = DensityOperator(rand_psd(rng, 8), q3)
        red = partial_trace(rho, {1, 3})
        eigs = np.linalg.eigvalsh(red.matrix)
        assert eigs[0] >= -1e-9 * eigs[-1]


class TestSerialization:
    def test_round_trip_pure_bit_exact(self, rng, tmp_path):
        psi = rand_pure(rng, [2, 3], "A")
        path = tmp_path / "state.json"
        save_state(str(path), psi)
        back = load_state(str(path))
        assert isinstance(back, PureState)
        assert np.array_equal(back.amplitudes, psi.amplitudes)
        assert back.structure == psi.structure

    def test_round_trip_mixed_bit_exact(self, rng, tmp_path):
        rho = DensityOperator(rand_psd(rng, 6), PartyStructure.of_dims([2, 3]))
        path = tmp_path / "state.json"
        save_state(str(path), rho)
        back = load_state(str(path))
        assert np.array_equal(back.matrix, rho.matrix)

    def test_format_shape(self):
        psi = ket(q2, (0, 0))
        doc = state_to_dict(psi)
        assert doc["parties"] == [{"label": "A1", "dim": 2},
                                  {"label": "A2", "dim": 2}]
        assert doc["kind"] == "pure"
        assert doc["data"][0] == [1.0, 0.0]
        assert len(doc["data"]) == 4

    def test_malformed_json_names_offset(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"parties": [')
        with pytest.raises(StateFormatError, match="offset"):
            load_state(str(path))

    def test_schema_errors(self):
        with pytest.raises(StateFormatError, match="missing required key"):
            state_from_dict({"parties": [], "kind": "pure"})
        with pytest.raises(StateFormatError, match="kind"):
            state_from_dict({"parties": [{"label": "A", "dim": 2}],
                             "kind": "dense", "data": []})
        with pytest.raises(StateFormatError, match="pairs"):
            state_from_dict({"parties": [{"label": "A", "dim": 2}],
                             "kind": "pure", "data": [[1.0, 0.0]]})

    def test_json_is_plain_text(self, rng, tmp_path):
        rho = DensityOperator(rand_psd(rng, 2), q1)
        path = tmp_path / "state.json"
        save_state(str(path), rho)
        doc = json.loads(path.read_text())
        assert set(doc) == {"parties", "kind", "data"}
