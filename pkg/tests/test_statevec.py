import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jrsp import bases
from jrsp.bases import TargetParams
from jrsp.statevec import (
    BadPermutation,
    Forced,
    ImpossibleOutcome,
    LabelCollision,
    NotNormalized,
    NotUnitary,
    RegisterMismatch,
    Sample,
    SameQubit,
    StateVector,
    UnknownQubit,
    apply_cnot,
    apply_one_qubit,
    basis_state,
    fidelity,
    ghz,
    measure_pair,
    outcome_probabilities,
    permute,
    tensor,
)

from conftest import random_state, random_unitary, states

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
I2 = np.eye(2)
COMPUTATIONAL = np.eye(4)


class TestStateVector:
    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            StateVector(np.ones(3) / np.sqrt(3), (1, 2))

    def test_rejects_unnormalized(self):
        with pytest.raises(NotNormalized):
            StateVector([1, 1], ("q",))

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            StateVector([np.nan, 0], ("q",))

    def test_rejects_duplicate_labels(self):
        with pytest.raises(LabelCollision):
            StateVector([1, 0, 0, 0], (3, 3))

    def test_immutable(self):
        s = basis_state("01", (3, 6))
        with pytest.raises(ValueError):
            s.amplitudes[0] = 1

    def test_first_label_is_most_significant(self):
        s = basis_state("10", (3, 6))
        assert s.amplitudes[2] == 1
        assert s.amplitude("10") == 1


class TestTensor:
    def test_basis_product(self):
        s = tensor(basis_state("0", (1,)), basis_state("0", (2,)))
        np.testing.assert_array_equal(s.amplitudes, [1, 0, 0, 0])
        assert s.labels == (1, 2)

    def test_two_ghz(self):
        s = tensor(ghz((1, 2, 3)), ghz((4, 5, 6)))
        expected = np.zeros(64)
        expected[[0b000000, 0b000111, 0b111000, 0b111111]] = 0.5
        np.testing.assert_allclose(s.amplitudes, expected, atol=1e-15)
        assert s.labels == (1, 2, 3, 4, 5, 6)

    def test_random_norm(self, rng):
        s = tensor(random_state(rng, ("a",)), random_state(rng, ("b",)))
        assert abs(np.linalg.norm(s.amplitudes) ** 2 - 1) < 1e-12

    def test_label_collision(self):
        with pytest.raises(LabelCollision):
            tensor(basis_state("0", (1,)), basis_state("01", (2, 1)))


class TestApplyOneQubit:
    def test_bit_flip_on_qubit_6(self):
        amps = np.array([0.1, 0.3 + 0.2j, -0.5, 0.4j])
        amps /= np.linalg.norm(amps)
        s = StateVector(amps, (3, 6))
        out = apply_one_qubit(s, 6, X)
        np.testing.assert_allclose(out.amplitudes, amps[[1, 0, 3, 2]])

    def test_zx_restores_row_1_0(self, rng):
        p = TargetParams.normalized(np.abs(rng.standard_normal(4)), rng.uniform(0, 6, 3))
        a, b, c, d = p.phased()
        # b'|00> - a|01> + d'|10> - c'|11>
        s = StateVector([b, -a, d, -c], (3, 6))
        out = apply_one_qubit(apply_one_qubit(s, 6, X), 6, Z)
        # X then Z lands on -|T>, equal up to global phase
        np.testing.assert_allclose(out.amplitudes, -p.phased(), atol=1e-15)
        assert fidelity(out, bases.intermediate_target(p)) == pytest.approx(1, abs=1e-12)

    def test_identity(self, rng):
        s = random_state(rng, (1, 2, 3))
        np.testing.assert_array_equal(apply_one_qubit(s, 2, I2).amplitudes, s.amplitudes)

    def test_unknown_qubit(self):
        with pytest.raises(UnknownQubit):
            apply_one_qubit(basis_state("0", (1,)), 9, X)

    def test_not_unitary(self):
        with pytest.raises(NotUnitary):
            apply_one_qubit(basis_state("0", (1,)), 1, np.array([[1, 1], [0, 1]]))

    @settings(max_examples=50, deadline=None)
    @given(states((1, 2, 3)), st.integers(0, 2), st.integers(0, 2**32 - 1))
    def test_gate_then_adjoint_restores(self, s, pos, seed):
        g = random_unitary(np.random.default_rng(seed), 2)
        q = s.labels[pos]
        back = apply_one_qubit(apply_one_qubit(s, q, g), q, g.conj().T)
        assert np.max(np.abs(back.amplitudes - s.amplitudes)) < 1e-12


class TestApplyCnot:
    def test_control_zero(self):
        s = apply_cnot(basis_state("00", (3, 7)), 3, 7)
        assert s.amplitude("00") == 1

    def test_control_one(self):
        s = apply_cnot(basis_state("10", (3, 7)), 3, 7)
        assert s.amplitude("11") == 1

    def test_expansion_gives_cluster_state(self, rng):
        p = TargetParams.normalized(np.abs(rng.standard_normal(4)), rng.uniform(0, 6, 3))
        s = tensor(bases.intermediate_target(p), basis_state("00", (7, 8)))
        s = apply_cnot(apply_cnot(s, 3, 7), 6, 8)
        s = permute(s, (3, 7, 6, 8))
        a, b, c, d = p.phased()
        for bits, amp in [("0000", a), ("0011", b), ("1100", c), ("1111", d)]:
            assert s.amplitude(bits) == pytest.approx(amp, abs=1e-15)

    def test_same_qubit(self):
        with pytest.raises(SameQubit):
            apply_cnot(basis_state("00", (3, 7)), 3, 3)


class TestMeasurePair:
    def test_alice_one_hot_outcome_zero(self):
        p = TargetParams(1, 0, 0, 0)
        k, prob, post = measure_pair(
            bases.channel_state(), (1, 4), bases.alice_basis(p), Forced(0)
        )
        assert k == 0
        assert prob == pytest.approx(0.25, abs=1e-15)
        assert post.labels == (2, 3, 5, 6)
        assert post.amplitude("0000") == pytest.approx(1)

    def test_computational_basis_probability(self, rng):
        s = random_state(rng, (1, 2, 3, 4))
        amps = s.amplitudes.reshape(2, 2, 2, 2)
        for k in range(4):
            _, prob, _ = measure_pair(s, (2, 4), COMPUTATIONAL, Forced(k))
            expected = np.sum(np.abs(amps[:, k >> 1, :, k & 1]) ** 2)
            assert prob == pytest.approx(expected, abs=1e-14)

    def test_alice_outcomes_uniform(self, rng):
        for _ in range(20):
            p = TargetParams.normalized(rng.standard_normal(4), rng.uniform(0, 6, 3))
            probs = outcome_probabilities(bases.channel_state(), (1, 4), bases.alice_basis(p))
            assert np.max(np.abs(probs - 0.25)) < 1e-12

    def test_impossible_outcome(self):
        s = basis_state("000", (1, 2, 3))
        with pytest.raises(ImpossibleOutcome):
            measure_pair(s, (1, 2), COMPUTATIONAL, Forced(3))

    def test_unknown_label(self):
        with pytest.raises(UnknownQubit):
            measure_pair(bases.channel_state(), (1, 9), COMPUTATIONAL, Forced(0))

    def test_sample_is_seeded(self, rng):
        s = random_state(rng, (1, 2, 3, 4, 5))
        basis = random_unitary(rng, 4)
        runs = [measure_pair(s, (5, 2), basis, Sample(123)) for _ in range(3)]
        assert len({r[0] for r in runs}) == 1
        assert len({r[1] for r in runs}) == 1

    def test_sample_never_picks_zero_probability(self):
        s = basis_state("1010", (1, 2, 3, 4))
        for seed in range(50):
            k, prob, _ = measure_pair(s, (1, 3), COMPUTATIONAL, Sample(seed))
            assert k == 3 and prob == 1

    def test_sample_frequencies_follow_probabilities(self, rng):
        s = random_state(rng, (1, 2, 3))
        basis = random_unitary(rng, 4)
        probs = outcome_probabilities(s, (1, 3), basis)
        draw_rng = np.random.default_rng(5)
        counts = np.bincount(
            [measure_pair(s, (1, 3), basis, Sample(), draw_rng)[0] for _ in range(4000)],
            minlength=4,
        )
        # 5 sigma of a binomial with n = 4000
        assert np.all(np.abs(counts / 4000 - probs) < 5 * np.sqrt(0.25 / 4000))

    @settings(max_examples=40, deadline=None)
    @given(states((1, 2, 3, 4)), st.integers(0, 2**32 - 1))
    def test_probabilities_complete(self, s, seed):
        basis = random_unitary(np.random.default_rng(seed), 4)
        assert abs(outcome_probabilities(s, (4, 1), basis).sum() - 1) < 1e-12

    @settings(max_examples=40, deadline=None)
    @given(states((1, 2, 3, 4)), st.integers(0, 2**32 - 1))
    def test_post_states_reconstruct_input(self, s, seed):
        basis = random_unitary(np.random.default_rng(seed), 4)
        pair = (3, 1)
        recon = np.zeros(16, dtype=complex)
        for k in range(4):
            _, prob, post = measure_pair(s, pair, basis, Forced(k))
            row = StateVector(basis[k], pair)
            term = permute(tensor(row, post), s.labels)
            recon += np.sqrt(prob) * term.amplitudes
        # the residual keeps its phase, so the sum is exact rather than up to phase
        assert np.max(np.abs(recon - s.amplitudes)) < 1e-10


class TestFidelity:
    def test_self(self, rng):
        s = random_state(rng, (1, 2))
        assert fidelity(s, s) == pytest.approx(1, abs=1e-15)

    def test_global_phase(self, rng):
        s = random_state(rng, (1, 2))
        assert fidelity(s, StateVector(-s.amplitudes, s.labels)) == pytest.approx(1, abs=1e-15)
        assert fidelity(s, StateVector(1j * s.amplitudes, s.labels)) == pytest.approx(1, abs=1e-15)

    def test_one_hot_target(self):
        target = bases.target_state(TargetParams(1, 0, 0, 0))
        assert fidelity(basis_state("0000", (3, 7, 6, 8)), target) == 1

    def test_mismatch(self):
        with pytest.raises(RegisterMismatch):
            fidelity(basis_state("00", (3, 6)), basis_state("00", (6, 3)))


class TestPermute:
    def test_swap(self):
        assert permute(basis_state("01", (3, 6)), (6, 3)).amplitude("10") == 1

    def test_identity(self, rng):
        s = random_state(rng, (1, 2, 3))
        np.testing.assert_array_equal(permute(s, s.labels).amplitudes, s.amplitudes)

    def test_round_trip(self, rng):
        s = random_state(rng, (1, 2, 3, 4, 5))
        order = (4, 1, 5, 3, 2)
        back = permute(permute(s, order), s.labels)
        np.testing.assert_array_equal(back.amplitudes, s.amplitudes)

    def test_bad_permutation(self):
        with pytest.raises(BadPermutation):
            permute(basis_state("01", (3, 6)), (3, 7))

    @settings(max_examples=40, deadline=None)
    @given(states((1, 2, 3, 4)), states((1, 2, 3, 4)), st.permutations((1, 2, 3, 4)))
    def test_fidelity_invariant_under_joint_permutation(self, s1, s2, order):
        before = fidelity(s1, s2)
        after = fidelity(permute(s1, order), permute(s2, order))
        assert abs(before - after) < 1e-12
        assert abs(np.linalg.norm(permute(s1, order).amplitudes) - 1) < 1e-12
