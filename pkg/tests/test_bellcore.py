import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from eveinfo.bellcore import (
    BELL_LABELS,
    Basis,
    BellDiagonal,
    BellLabel,
    basis_states,
    bell_diagonal_entropy,
    bell_state,
    joint_outcome_distribution,
    parallel_probability,
)

R = 1 / math.sqrt(2)

angles = st.tuples(st.floats(0, math.pi), st.floats(0, 2 * math.pi, exclude_max=True))
labels = st.sampled_from(BELL_LABELS)


def probability_vectors():
    return st.lists(st.floats(0, 1), min_size=4, max_size=4).filter(lambda v: sum(v) > 1e-3).map(
        lambda v: BellDiagonal(tuple(x / math.fsum(v) for x in v)))


class TestBellLabel:
    def test_bit_pairs_are_a_bijection(self):
        pairs = [label.bit_pair for label in BellLabel]
        assert sorted(pairs) == [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert BellLabel.PHI_PLUS.bit_pair == (0, 0)
        assert BellLabel.PSI_MINUS.bit_pair == (1, 1)
        for label in BellLabel:
            assert BellLabel.from_bits(label.bit_pair) is label

    @pytest.mark.parametrize("text,label", [
        ("PhiPlus", BellLabel.PHI_PLUS),
        ("phi+", BellLabel.PHI_PLUS),
        ("PSI_MINUS", BellLabel.PSI_MINUS),
        ("psi-", BellLabel.PSI_MINUS),
        ("PhiMinus", BellLabel.PHI_MINUS),
        ("psi-plus", BellLabel.PSI_PLUS),
    ])
    def test_parse(self, text, label):
        assert BellLabel.parse(text) is label

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            BellLabel.parse("chi+")


class TestBellState:
    def test_singlet_sign_convention(self):
        np.testing.assert_allclose(bell_state(BellLabel.PSI_MINUS), [0, R, -R, 0], atol=1e-15)

    def test_phi_plus(self):
        np.testing.assert_allclose(bell_state(BellLabel.PHI_PLUS), [R, 0, 0, R], atol=1e-15)

    def test_orthonormal(self):
        gram = np.array([[np.vdot(bell_state(a), bell_state(b)) for b in BellLabel] for a in BellLabel])
        np.testing.assert_allclose(gram, np.eye(4), atol=1e-12)


class TestBasis:
    def test_canonical_angles(self):
        assert (Basis.Z.theta, Basis.Z.phi) == (0.0, 0.0)
        assert (Basis.X.theta, Basis.X.phi) == (math.pi / 2, 0.0)
        assert (Basis.Y.theta, Basis.Y.phi) == (math.pi / 2, math.pi / 2)

    def test_inconsistent_tag_rejected(self):
        with pytest.raises(ValueError):
            Basis(0.3, 0.0, "Z")

    def test_theta_range(self):
        with pytest.raises(ValueError):
            Basis(-0.1)

    def test_z_states(self):
        plus, minus = basis_states(Basis.Z)
        np.testing.assert_allclose(plus, [1, 0], atol=1e-15)
        np.testing.assert_allclose(minus, [0, -1], atol=1e-15)  # |1> up to global phase

    @pytest.mark.parametrize("basis,plus,minus", [
        (Basis.X, [R, R], [R, -R]),
        (Basis.Y, [R, 1j * R], [R, -1j * R]),
    ])
    def test_xy_states(self, basis, plus, minus):
        got_plus, got_minus = basis_states(basis)
        np.testing.assert_allclose(got_plus, plus, atol=1e-15)
        np.testing.assert_allclose(got_minus, minus, atol=1e-15)

    @given(angles)
    def test_states_orthonormal(self, tp):
        plus, minus = basis_states(Basis(*tp))
        gram = np.array([[np.vdot(u, v) for v in (plus, minus)] for u in (plus, minus)])
        np.testing.assert_allclose(gram, np.eye(2), atol=1e-12)

    def test_vector_roundtrip(self):
        b = Basis(1.1, 4.0)
        back = Basis.from_vector(b.vector)
        assert back.theta == pytest.approx(b.theta, abs=1e-12)
        assert back.phi == pytest.approx(b.phi, abs=1e-12)


class TestJointOutcomes:
    @given(labels, angles, angles)
    def test_matches_pauli_projector_oracle(self, label, a, b):
        got = joint_outcome_distribution(label, Basis(*a), Basis(*b))
        np.testing.assert_allclose(got, oracles.joint_distribution(int(label), a, b), atol=1e-12)
        assert got.min() >= -1e-15
        assert abs(got.sum() - 1) < 1e-12

    @given(angles)
    def test_singlet_anticorrelated_in_any_common_basis(self, tp):
        b = Basis(*tp)
        got = joint_outcome_distribution(BellLabel.PSI_MINUS, b, b)
        np.testing.assert_allclose(got, [0, 0.5, 0.5, 0], atol=1e-12)

    def test_phi_plus_zz(self):
        got = joint_outcome_distribution(BellLabel.PHI_PLUS, Basis.Z, Basis.Z)
        np.testing.assert_allclose(got, [0.5, 0, 0, 0.5], atol=1e-12)

    def test_phi_plus_zx_uniform(self):
        got = joint_outcome_distribution(BellLabel.PHI_PLUS, Basis.Z, Basis.X)
        np.testing.assert_allclose(got, [0.25] * 4, atol=1e-12)

    def test_all_labels_all_canonical_pairs_normalized(self):
        bases = [Basis.Z, Basis.X, Basis.Y]
        for label, ba, bb in itertools.product(BellLabel, bases, bases):
            p = joint_outcome_distribution(label, ba, bb)
            assert np.all((p >= 0) & (p <= 1))
            assert abs(p.sum() - 1) < 1e-12


class TestParallelProbability:
    def test_phi_plus_z(self):
        assert parallel_probability(BellLabel.PHI_PLUS, Basis.Z) == pytest.approx(1, abs=1e-12)

    def test_singlet_zero_for_random_bases(self):
        rng = np.random.default_rng(2024)
        for theta, phi in zip(np.arccos(rng.uniform(-1, 1, 1000)), rng.uniform(0, 2 * np.pi, 1000)):
            assert abs(parallel_probability(BellLabel.PSI_MINUS, Basis(theta, phi))) < 1e-12

    @given(angles)
    def test_psi_plus_is_sin_squared_theta(self, tp):
        theta, phi = tp
        assert parallel_probability(BellLabel.PSI_PLUS, Basis(theta, phi)) == pytest.approx(
            oracles.parallel(1, theta, phi), abs=1e-12)
        assert parallel_probability(BellLabel.PSI_PLUS, Basis(theta, phi)) == pytest.approx(
            math.sin(theta) ** 2, abs=1e-12)

    @pytest.mark.parametrize("basis,pair", [
        (Basis.Z, (BellLabel.PHI_PLUS, BellLabel.PHI_MINUS)),
        (Basis.X, (BellLabel.PHI_PLUS, BellLabel.PSI_PLUS)),
        (Basis.Y, (BellLabel.PHI_MINUS, BellLabel.PSI_PLUS)),
    ])
    def test_canonical_projector_identities(self, basis, pair):
        inside = sum(parallel_probability(label, basis) for label in pair)
        assert inside == pytest.approx(2, abs=1e-12)
        for label in set(BellLabel) - set(pair):
            assert parallel_probability(label, basis) == pytest.approx(0, abs=1e-12)

    @given(labels, angles)
    def test_antipodal_flip_invariance(self, label, tp):
        b = Basis(*tp)
        assert parallel_probability(label, b) == pytest.approx(
            parallel_probability(label, b.antipode()), abs=1e-12)

    @given(angles)
    def test_non_singlet_probabilities_sum_to_two(self, tp):
        b = Basis(*tp)
        total = sum(parallel_probability(label, b) for label in BellLabel)
        assert total == pytest.approx(2, abs=1e-12)


class TestEntropy:
    @pytest.mark.parametrize("probs,bits", [
        ((1, 0, 0, 0), 0.0),
        ((0.25, 0.25, 0.25, 0.25), 2.0),
        ((0.5, 0.5, 0, 0), 1.0),
    ])
    def test_values(self, probs, bits):
        assert bell_diagonal_entropy(BellDiagonal(probs)) == pytest.approx(bits, abs=1e-12)

    def test_matches_density_matrix_eigenvalues(self):
        p = (0.1, 0.2, 0.3, 0.4)
        rho = sum(w * np.outer(oracles.BELL[i], oracles.BELL[i]) for i, w in enumerate(p))
        ev = np.linalg.eigvalsh(rho)
        ref = -sum(x * math.log2(x) for x in ev if x > 1e-15)
        assert bell_diagonal_entropy(BellDiagonal(p)) == pytest.approx(ref, abs=1e-12)

    @pytest.mark.parametrize("bad", [(0.5, 0.5, 0.5, 0), (-0.1, 0.5, 0.3, 0.3), (1, 0, 0)])
    def test_rejects_invalid(self, bad):
        with pytest.raises(ValueError):
            bell_diagonal_entropy(bad)

    @settings(max_examples=200)
    @given(probability_vectors(), probability_vectors(), st.floats(0, 1))
    def test_concave(self, p, q, lam):
        mix = BellDiagonal(tuple(lam * x + (1 - lam) * y for x, y in zip(p.probs, q.probs)))
        lhs = bell_diagonal_entropy(mix)
        rhs = lam * bell_diagonal_entropy(p) + (1 - lam) * bell_diagonal_entropy(q)
        assert lhs >= rhs - 1e-10
