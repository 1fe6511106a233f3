import numpy as np
import pytest

from qinstr import qstate
from qinstr.errors import BadTrace, DimensionMismatch, NotPositive
from qinstr.qstate import (
    ClassicalDist,
    DensityMatrix,
    Ensemble,
    a_priori_state,
    ensemble_from_json,
    ensemble_to_json,
    fidelity_like_support_check,
    maximally_mixed,
    pure_state,
    validate_density,
)

KET0 = pure_state([1, 0])
KET1 = pure_state([0, 1])
PLUS = pure_state([1 / np.sqrt(2), 1 / np.sqrt(2)])


class TestValidateDensity:
    def test_accepts_mixed(self):
        dm = validate_density(np.diag([0.5, 0.5]))
        assert dm.dim == 2

    def test_rejects_negative(self):
        with pytest.raises(NotPositive):
            validate_density(np.diag([1.5, -0.5]))

    def test_clamps_tiny_negativity(self):
        dm = validate_density(np.diag([0.7 + 1e-11, 0.3, -1e-11]))
        vals = dm.spectral().eigenvalues
        assert vals[0] >= 0.0
        assert abs(np.trace(dm.mat).real - 1.0) < 1e-12

    def test_rejects_bad_trace(self):
        with pytest.raises(BadTrace):
            validate_density(np.diag([0.6, 0.6]))


class TestAprioriState:
    def test_single_letter(self):
        e = Ensemble(("a",), np.array([1.0]), (PLUS,))
        assert np.allclose(a_priori_state(e).mat, PLUS.mat)

    def test_orthogonal_pair(self):
        e = Ensemble((0, 1), np.array([0.5, 0.5]), (KET0, KET1))
        assert np.allclose(a_priori_state(e).mat, np.eye(2) / 2)

    def test_zero_plus_pair(self):
        e = Ensemble((0, 1), np.array([0.5, 0.5]), (KET0, PLUS))
        expected = np.array([[0.75, 0.25], [0.25, 0.25]])
        assert np.allclose(a_priori_state(e).mat, expected, atol=1e-12)

    def test_affine_in_the_mixing_weight(self):
        rng = np.random.default_rng(0)

        def rand_dm(seed):
            g = np.random.default_rng(seed)
            m = g.standard_normal((2, 2)) + 1j * g.standard_normal((2, 2))
            m = m @ m.conj().T
            return validate_density(m / np.trace(m).real)

        s1, s2, s3 = rand_dm(1), rand_dm(2), rand_dm(3)
        lam = 0.3
        e1 = Ensemble((0, 1), np.array([0.6, 0.4]), (s1, s2))
        e2 = Ensemble((0, 1), np.array([0.2, 0.8]), (s3, s1))
        mixed_probs = lam * e1.probs + (1 - lam) * e2.probs
        # same letters, mixed letter states with matching conditional weights
        states = tuple(
            validate_density(
                (lam * p1 * st1.mat + (1 - lam) * p2 * st2.mat) / (lam * p1 + (1 - lam) * p2)
            )
            for p1, st1, p2, st2 in zip(e1.probs, e1.states, e2.probs, e2.states)
        )
        e_mix = Ensemble((0, 1), mixed_probs, states)
        expect = lam * a_priori_state(e1).mat + (1 - lam) * a_priori_state(e2).mat
        assert np.max(np.abs(a_priori_state(e_mix).mat - expect)) < 1e-10

    def test_zero_probability_letter_rejected(self):
        with pytest.raises(NotPositive):
            Ensemble((0, 1), np.array([1.0, 0.0]), (KET0, KET1))


class TestSupportCheck:
    def test_equal_pure(self):
        assert fidelity_like_support_check(KET0, KET0)

    def test_orthogonal_pure(self):
        assert not fidelity_like_support_check(KET0, KET1)

    def test_full_rank_reference(self):
        assert fidelity_like_support_check(KET0, maximally_mixed(2))

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatch):
            fidelity_like_support_check(KET0, maximally_mixed(3))


class TestClassicalDist:
    def test_lookup(self):
        d = ClassicalDist(("x", "y"), np.array([0.25, 0.75]))
        assert d["y"] == 0.75

    def test_bad_sum(self):
        with pytest.raises(BadTrace):
            ClassicalDist((0, 1), np.array([0.5, 0.6]))


class TestJson:
    def test_ensemble_roundtrip(self):
        e = Ensemble((0, 1), np.array([0.5, 0.5]), (KET0, PLUS))
        e2 = ensemble_from_json(ensemble_to_json(e))
        assert e2.letters == e.letters
        assert np.allclose(e2.probs, e.probs)
        for s1, s2 in zip(e.states, e2.states):
            assert np.allclose(s1.mat, s2.mat)


def test_density_matrix_requires_unit_trace():
    with pytest.raises(BadTrace):
        DensityMatrix(np.eye(2))
