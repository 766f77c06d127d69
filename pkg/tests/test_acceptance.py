"""Acceptance suite: one test per criterion, each printing a pass line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines and timings.  Budgets are asserted, not just printed.
"""

import time

import numpy as np
import pytest

from gmekron import (
    GME,
    INCONCLUSIVE,
    DensityOperator,
    PartyStructure,
    PureState,
    SloccTransform,
    canonical_span_basis,
    certify,
    complete_partition,
    conjecture_harness,
    gme_sdp,
    harness_family,
    is_gme_pure,
    kronecker_product,
    ppt_check,
    predict_kron_partition,
    rank2_kc_pipeline,
    rank3_to_two_qubit,
    slocc_normal_form,
    validate_witness,
    werner,
    werner_twirl,
)
from conftest import rand_vec, random_biseparable_3q, random_block_product
from test_constructions import rank3_instance


class Budget:
    def __init__(self, number, name, seconds):
        self.number, self.name, self.seconds = number, name, seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, *_):
        elapsed = time.perf_counter() - self.start
        status = "PASS" if exc_type is None else "FAIL"
        print(f"\nACCEPTANCE {self.number} [{self.name}]: {status} "
              f"({elapsed:.2f}s, budget {self.seconds}s)")
        if exc_type is None:
            assert elapsed < self.seconds, (
                f"criterion {self.number} exceeded its {self.seconds}s budget "
                f"({elapsed:.2f}s)")
        return False


def ket(st, terms):
    return PureState.from_terms(st, terms)


def test_criterion_1_worked_complete_partitions():
    with Budget(1, "complete-partition reproduction", 1.0):
        q3 = PartyStructure.qubits(3)
        q4 = PartyStructure.qubits(4)
        psi3 = ket(q3, {(0, 0, 0): 1, (0, 1, 1): 1})
        psi4 = ket(q4, {(0, 0, 1, 0): 1, (0, 0, 0, 1): 1,
                        (0, 1, 1, 0): 1, (0, 1, 0, 1): 1})
        phi4 = ket(q4, {(0, 0, 1, 0): 1, (1, 0, 1, 1): 1,
                        (0, 1, 1, 0): -1, (1, 1, 1, 1): -1})
        assert complete_partition(psi3).to_lists() == [[1], [2, 3]]
        assert complete_partition(psi4).to_lists() == [[1], [2], [3, 4]]
        assert complete_partition(phi4).to_lists() == [[1, 4], [2], [3]]
        phi3 = ket(PartyStructure.qubits(3, "B"), {(0, 1, 1): 1, (1, 0, 1): 1})
        merged = kronecker_product(psi3, phi3)
        report = certify(merged)
        assert report.verdict == GME
        assert report.reason == "pure-complete-partition"


def test_criterion_2_merge_prediction_suite():
    with Budget(2, "pure merge-law property, 500 cases", 60.0):
        rng = np.random.default_rng(1202)
        failures = 0
        for _ in range(500):
            n = int(rng.integers(2, 7))
            m = int(rng.integers(2, n + 1))
            psi, _ = random_block_product(rng, n, "A")
            phi, _ = random_block_product(rng, m, "B")
            predicted = predict_kron_partition(complete_partition(psi),
                                               complete_partition(phi))
            actual = complete_partition(kronecker_product(psi, phi))
            if actual.to_lists() != predicted.to_lists():
                failures += 1
        assert failures == 0


def test_criterion_3_werner_bands():
    with Budget(3, "Werner bands and twirl fixed point", 10.0):
        for d in (2, 3, 4):
            edge = -1.0 / d
            # 1e-3 grid around the threshold
            for k in range(-25, 26):
                p = edge + 1e-3 * k
                if not -1.0 <= p <= 1.0 or abs(p - edge) < 1e-12:
                    continue
                _, is_ppt = ppt_check(werner(d, p))
                assert is_ppt == (p > edge), (d, p)
            # bisect the transition and compare with the exact edge
            lo, hi = edge - 1e-3, edge + 1e-3
            while hi - lo > 1e-7:
                mid = 0.5 * (lo + hi)
                if ppt_check(werner(d, mid))[1]:
                    hi = mid
                else:
                    lo = mid
            assert abs(0.5 * (lo + hi) - edge) <= 1e-6
            # analytic twirl is an exact fixed point
            for p in np.linspace(-1, 1, 21):
                assert abs(werner_twirl(werner(d, float(p))).p - p) <= 1e-12


def test_criterion_4_rank2_pair_pipeline():
    with Budget(4, "rank-2 pair construction end-to-end, 100 cases", 300.0):
        rng = np.random.default_rng(77)
        st = PartyStructure.of_dims([2, 2, 4])
        for _ in range(100):
            x1 = float(10.0 * (1.0 - rng.random()))
            x2 = float(10.0 * (1.0 - rng.random()))
            rep = rank2_kc_pipeline(x1, x2)
            ent = ket(st, {(0, 0, 0): 1, (1, 1, 3): 1}).to_density().matrix
            top = ket(st, {(0, 0, 0): 1}).to_density().matrix
            expect = ent + (x1 + x2 + x1 * x2) * top
            assert np.abs(rep.sigma.matrix - expect).max() <= 1e-12
            for sol, state in ((rep.sigma_solution, rep.sigma),
                               (rep.rho_solution, rep.rho)):
                assert sol.objective < -1e-7
                assert sol.certifies_gme
                assert validate_witness(sol, state)["ok"]
            assert rep.certified
            assert rep.sigma_report.verdict == GME


def test_criterion_5_sdp_soundness_on_biseparable():
    with Budget(5, "no GME verdict on 200 biseparable mixtures", 300.0):
        rng = np.random.default_rng(909)
        for i in range(200):
            terms = int(rng.integers(2, 7))
            rho = random_biseparable_3q(rng, terms)
            report = certify(rho)
            assert report.verdict != GME, f"instance {i}"


def test_criterion_6_normal_forms():
    with Budget(6, "local normal forms, 200 ranges", 30.0):
        rng = np.random.default_rng(4242)

        def rand_product():
            return np.kron(rand_vec(rng, 2), rand_vec(rng, 2))

        checked = 0
        while checked < 200:
            kind = checked % 4
            if kind in (0, 1):
                vecs = [rand_product() for _ in range(2)]
                want = "00,11"
            elif kind == 2:
                vecs = [rand_product() for _ in range(3)]
                want = "00,11,++"
            else:
                a = rand_vec(rng, 2)
                vecs = [np.kron(a, rand_vec(rng, 2)),
                        np.kron(rng.normal() * a, rand_vec(rng, 2)),
                        rand_product()]
                want = "00,01,10"
            if np.linalg.matrix_rank(np.column_stack(vecs),
                                     tol=1e-8) < len(vecs):
                continue
            transform, cid = slocc_normal_form(vecs)
            assert cid == want
            full = transform.full_matrix()
            image = np.column_stack([full @ v for v in vecs])
            canon = np.column_stack(canonical_span_basis(cid))
            k = image.shape[1]
            # both directions: the image spans the canonical space exactly
            assert np.linalg.matrix_rank(image, tol=1e-8) == k
            assert np.linalg.matrix_rank(np.column_stack([image, canon]),
                                         tol=1e-8) == k
            checked += 1


def test_criterion_7_rank3_projection():
    with Budget(7, "rank-3 projection to NPT two-qubit, 100 cases", 60.0):
        rng = np.random.default_rng(31337)
        done = 0
        while done < 100:
            rho, basis = rank3_instance(rng)
            if ppt_check(rho, {1})[1]:
                continue  # the generator must hand over an entangled state
            result = rank3_to_two_qubit(rho, basis)
            assert result.min_pt_eigenvalue < -1e-9
            done += 1


def test_criterion_8_slocc_invariance():
    with Budget(8, "verdicts invariant under 50 local transforms", 120.0):
        rng = np.random.default_rng(60221)
        q3 = PartyStructure.qubits(3)
        sigma = rank2_kc_pipeline(1.0, 1.0).sigma
        instances = [
            (ket(q3, {(0, 0, 0): 1, (1, 1, 1): 1}), GME),
            (ket(q3, {(0, 0, 0): 1, (0, 1, 1): 1}), "Biseparable"),
            (ket(q3, {(0, 1, 0): 1}), "FullySeparable"),
            (sigma, GME),
            (DensityOperator(np.eye(4, dtype=complex),
                             PartyStructure.qubits(2), validate=False),
             "FullySeparable"),
            (werner(2, -0.9), GME),
        ]

        def bounded_invertible(d):
            while True:
                m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
                if np.linalg.cond(m) < 20:
                    return m

        for state, expected in instances:
            dims = state.structure.dims
            assert certify(state).verdict == expected
            for _ in range(50):
                t = SloccTransform(tuple(bounded_invertible(d) for d in dims))
                assert certify(t.apply(state)).verdict == expected


def test_criterion_9_werner_pair_harness_instance():
    with Budget(9, "edge Werner pair instance recorded", 120.0):
        results = conjecture_harness(harness_family("werner2", 1, eps=1e-3))
        assert len(results) == 1
        r = results[0]
        assert r.hypothesis_ok
        assert r.solver_status == "converged"
        assert r.verdict in (GME, INCONCLUSIVE)  # either sign accepted
        assert r.objective is not None
