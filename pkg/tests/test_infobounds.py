import math

import numpy as np
import pytest

from qinstr.entropy import chi_quantity, StateFamily, vn_entropy
from qinstr.errors import InfiniteQuantity
from qinstr.infobounds import (
    analyze,
    check_bounds,
    check_identities,
    classical_mutual_info,
    compound_states,
    entropy_panel,
    groenewold_lindblad_check,
    merge_outcomes,
    quantum_info_gain,
    random_density,
    random_ensemble,
    scutaru_chains,
)
from qinstr.instrument import Instrument, KrausMap, random_instrument
from qinstr.qstate import ClassicalDist, Ensemble, maximally_mixed, pure_state

KET0 = pure_state([1, 0])
KET1 = pure_state([0, 1])
PLUS = pure_state([1 / np.sqrt(2), 1 / np.sqrt(2)])


def projective_qubit():
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    return Instrument((0, 1), (KrausMap(2, 2, (p0,)), KrausMap(2, 2, (p1,))))


def zero_plus_ensemble():
    return Ensemble((0, 1), np.array([0.5, 0.5]), (KET0, PLUS))


def orthogonal_ensemble():
    return Ensemble((0, 1), np.array([0.5, 0.5]), (KET0, KET1))


def brute_force_mi(joint):
    p_r = joint.sum(axis=1)
    p_c = joint.sum(axis=0)
    total = 0.0
    for i in range(joint.shape[0]):
        for j in range(joint.shape[1]):
            if joint[i, j] > 0:
                total += joint[i, j] * math.log(joint[i, j] / (p_r[i] * p_c[j]))
    return total


class TestAnalyze:
    def test_joint_table_zero_plus(self):
        ms = analyze(zero_plus_ensemble(), projective_qubit())
        assert np.allclose(ms.joint, [[0.5, 0.0], [0.25, 0.25]], atol=1e-12)
        assert np.allclose(ms.output_marginal.probs, [0.75, 0.25], atol=1e-12)

    def test_conditionals_consistent(self):
        ms = analyze(zero_plus_ensemble(), projective_qubit())
        # joint = P_i * P_{f|i} = P_f * P_{i|f}
        rebuilt1 = ms.input_marginal.probs[:, None] * ms.cond_out_given_in
        rebuilt2 = ms.output_marginal.probs[None, :] * ms.cond_in_given_out
        assert np.allclose(rebuilt1, ms.joint, atol=1e-12)
        assert np.allclose(rebuilt2, ms.joint, atol=1e-12)

    def test_posterior_grid_mixes_to_mean(self):
        rng = np.random.default_rng(0)
        e = random_ensemble(3, 3, rng)
        ins = random_instrument(3, 2, 3, 2, seed=1)
        ms = analyze(e, ins)
        p_f = ms.output_marginal.probs
        for w in range(len(ins.outcomes)):
            if p_f[w] < 1e-12:
                continue
            mix = sum(
                ms.cond_in_given_out[a, w] * ms.posterior_letter_states[a][w].mat
                for a in range(len(e.letters))
            )
            assert np.max(np.abs(mix - ms.posterior_mean_states[w].mat)) < 1e-9

    def test_post_a_priori_is_mean_of_post_letters(self):
        rng = np.random.default_rng(2)
        e = random_ensemble(2, 3, rng)
        ins = random_instrument(2, 3, 2, 2, seed=3)
        ms = analyze(e, ins)
        mix = sum(p * s.mat for p, s in zip(e.probs, ms.post_letter_states))
        assert np.max(np.abs(mix - ms.post_a_priori.mat)) < 1e-10


class TestClassicalMutualInfo:
    def test_zero_plus_frozen_value(self):
        ms = analyze(zero_plus_ensemble(), projective_qubit())
        i_c = classical_mutual_info(ms)
        assert abs(i_c - 0.2157615543388356) < 1e-12
        assert abs(i_c - brute_force_mi(ms.joint)) < 1e-12

    def test_orthogonal_is_log2(self):
        ms = analyze(orthogonal_ensemble(), projective_qubit())
        assert abs(classical_mutual_info(ms) - math.log(2)) < 1e-12

    def test_entropy_combination_crosscheck(self):
        # I_c = H(P_i) + H(P_f) - H(P_if)
        rng = np.random.default_rng(4)
        e = random_ensemble(2, 3, rng)
        ins = random_instrument(2, 2, 4, 2, seed=5)
        ms = analyze(e, ins)

        def shannon(p):
            p = p[p > 1e-15]
            return float(-(p * np.log(p)).sum())

        expected = (
            shannon(ms.input_marginal.probs)
            + shannon(ms.output_marginal.probs)
            - shannon(ms.joint.ravel())
        )
        assert abs(classical_mutual_info(ms) - expected) < 1e-10

    def test_product_joint_gives_zero(self):
        # identity instrument: outcome carries no letter information
        ins = Instrument((0,), (KrausMap(2, 2, (np.eye(2, dtype=complex),)),))
        ms = analyze(zero_plus_ensemble(), ins)
        assert classical_mutual_info(ms) < 1e-12


class TestEntropyPanel:
    def test_zero_plus_values(self):
        ms = analyze(zero_plus_ensemble(), projective_qubit())
        panel = entropy_panel(ms)
        assert abs(panel.chi_initial - 0.4164955306996875) < 1e-10
        assert abs(panel.classical_mi - 0.2157615543388356) < 1e-10
        # projective instrument on a qubit leaves pure posterior states, and
        # every posterior grid state equals the corresponding mean state
        assert abs(panel.mean_chi_given_out) < 1e-10
        assert abs(panel.chi_joint - panel.chi_out) < 1e-10

    def test_orthogonal_panel(self):
        ms = analyze(orthogonal_ensemble(), projective_qubit())
        panel = entropy_panel(ms)
        assert abs(panel.chi_initial - math.log(2)) < 1e-10
        assert abs(panel.classical_mi - math.log(2)) < 1e-10

    def test_chi_initial_matches_chi_quantity(self):
        rng = np.random.default_rng(6)
        e = random_ensemble(3, 3, rng)
        ins = random_instrument(3, 2, 2, 2, seed=7)
        panel = entropy_panel(analyze(e, ins))
        fam = StateFamily(e.prior(), e.states)
        assert abs(panel.chi_initial - chi_quantity(fam)) < 1e-10

    def test_tripartite_sum(self):
        rng = np.random.default_rng(8)
        e = random_ensemble(2, 2, rng)
        ins = random_instrument(2, 2, 3, 1, seed=9)
        panel = entropy_panel(analyze(e, ins))
        assert abs(panel.tripartite - panel.classical_mi - panel.chi_joint) < 1e-12


class TestIdentitiesAndBounds:
    @pytest.mark.parametrize("seed", range(10))
    def test_identities_random(self, seed):
        rng = np.random.default_rng(100 + seed)
        e = random_ensemble(int(rng.integers(2, 4)), int(rng.integers(2, 4)), rng)
        ins = random_instrument(
            e.dim, int(rng.integers(2, 4)), int(rng.integers(2, 4)), int(rng.integers(1, 3)),
            seed=200 + seed,
        )
        panel = entropy_panel(analyze(e, ins))
        report = check_identities(panel)
        assert report.all_pass(), report.to_json()

    @pytest.mark.parametrize("seed", range(10))
    def test_bounds_random(self, seed):
        rng = np.random.default_rng(300 + seed)
        e = random_ensemble(int(rng.integers(2, 4)), int(rng.integers(2, 4)), rng)
        ins = random_instrument(
            e.dim, int(rng.integers(2, 4)), int(rng.integers(2, 4)), int(rng.integers(1, 3)),
            seed=400 + seed,
        )
        panel = entropy_panel(analyze(e, ins))
        report = check_bounds(panel)
        assert report.all_pass(), report.to_json()

    def test_identities_on_desk_example(self):
        panel = entropy_panel(analyze(zero_plus_ensemble(), projective_qubit()))
        report = check_identities(panel)
        assert report.all_pass()
        assert abs(report["idts_out"].slack) < 1e-12

    def test_bounds_on_desk_example(self):
        panel = entropy_panel(analyze(zero_plus_ensemble(), projective_qubit()))
        report = check_bounds(panel)
        assert report.all_pass()
        # Holevo slack chi - I_c frozen from the two oracles above
        assert abs(report["holevo"].slack - (0.4164955306996875 - 0.2157615543388356)) < 1e-10

    def test_infinite_panel_rejected(self):
        panel = entropy_panel(analyze(zero_plus_ensemble(), projective_qubit()))
        bad = type(panel)(**{**panel.to_json(), "chi_joint": math.inf})
        with pytest.raises(InfiniteQuantity):
            check_identities(bad)


class TestQuantumInfoGain:
    def test_projective_on_maximally_mixed(self):
        # entropy log 2 before, pure states after
        gain = quantum_info_gain(projective_qubit(), maximally_mixed(2))
        assert abs(gain - math.log(2)) < 1e-10

    def test_identity_instrument_zero_gain(self):
        ins = Instrument((0,), (KrausMap(2, 2, (np.eye(2, dtype=complex),)),))
        assert abs(quantum_info_gain(ins, maximally_mixed(2))) < 1e-12

    def test_pure_input_zero_entropy(self):
        gain = quantum_info_gain(projective_qubit(), PLUS)
        assert abs(gain) < 1e-10  # 0 - 0

    def test_can_be_negative_for_non_purity_preserving(self):
        # a two-Kraus instrument can increase mean entropy on mixed inputs
        found_negative = False
        for k in range(50):
            ins = random_instrument(2, 2, 2, 2, seed=1000 + k)
            rng = np.random.default_rng(k)
            if quantum_info_gain(ins, random_density(2, rng)) < -1e-6:
                found_negative = True
                break
        assert found_negative


class TestGroenewoldLindblad:
    def test_projective_is_purity_preserving(self):
        pp, report = groenewold_lindblad_check(projective_qubit(), trials=50, seed=0)
        assert pp
        assert report.all_pass()
        assert report["gl_info_gain_nonneg"].slack >= -1e-8

    def test_rank1_random_is_purity_preserving(self):
        ins = random_instrument(2, 3, 3, 1, seed=42)
        pp, report = groenewold_lindblad_check(ins, trials=50, seed=1)
        assert pp
        assert report.all_pass()

    def test_depolarizing_like_is_not(self):
        # two-Kraus single-outcome channel mixes pure inputs
        ins = random_instrument(2, 2, 1, 2, seed=7)
        pp, report = groenewold_lindblad_check(ins, trials=50, seed=2)
        assert not pp
        with pytest.raises(KeyError):
            report["gl_info_gain_nonneg"]
        assert report.all_pass()  # chain inequality still holds

    @pytest.mark.parametrize("seed", range(5))
    def test_chain_inequality_random(self, seed):
        ins = random_instrument(3, 2, 3, 2, seed=500 + seed)
        _, report = groenewold_lindblad_check(ins, trials=20, seed=seed, n_demix=3)
        assert report.all_pass(), report.to_json()


class TestCompoundStates:
    def test_consistency_desk(self):
        ms = analyze(zero_plus_ensemble(), projective_qubit())
        cs = compound_states(ms)
        assert cs.consistency.all_pass()

    def test_dimensions(self):
        rng = np.random.default_rng(20)
        e = random_ensemble(2, 2, rng)
        ins = random_instrument(2, 3, 2, 2, seed=21)
        cs = compound_states(analyze(e, ins))
        assert cs.eps_if[0].dim == 6
        assert cs.eps_i[0].dim == 2
        assert cs.eps_f[0].dim == 3
        assert cs.gamma_if.dim == 6

    @pytest.mark.parametrize("seed", range(5))
    def test_consistency_random(self, seed):
        rng = np.random.default_rng(600 + seed)
        e = random_ensemble(int(rng.integers(2, 4)), int(rng.integers(2, 4)), rng)
        ins = random_instrument(
            e.dim, int(rng.integers(2, 4)), int(rng.integers(2, 4)), 2, seed=700 + seed
        )
        cs = compound_states(analyze(e, ins))
        assert cs.consistency.all_pass(), cs.consistency.to_json()


class TestScutaruChains:
    def test_desk_example(self):
        ms = analyze(zero_plus_ensemble(), projective_qubit())
        report = scutaru_chains(ms)
        assert report.all_pass(), report.to_json()
        # every link sits below I_c
        i_c = classical_mutual_info(ms)
        assert report["scutaru1_ic_ge_chi_eps_if"].rhs == pytest.approx(i_c)

    def test_orthogonal_example(self):
        ms = analyze(orthogonal_ensemble(), projective_qubit())
        report = scutaru_chains(ms)
        assert report.all_pass()
        # perfectly distinguishable: the first-chain bound is tight at log 2
        assert abs(report["scutaru1_ic_ge_chi_eps_if"].rhs - math.log(2)) < 1e-10

    @pytest.mark.parametrize("seed", range(8))
    def test_random(self, seed):
        rng = np.random.default_rng(800 + seed)
        e = random_ensemble(int(rng.integers(2, 4)), int(rng.integers(2, 4)), rng)
        ins = random_instrument(
            e.dim, int(rng.integers(2, 4)), int(rng.integers(2, 4)), int(rng.integers(1, 3)),
            seed=900 + seed,
        )
        report = scutaru_chains(analyze(e, ins))
        assert report.all_pass(), report.to_json()


class TestMergeOutcomes:
    def test_preserves_normalization(self):
        ins = random_instrument(2, 2, 3, 2, seed=30)
        merged = merge_outcomes(ins, ins.outcomes[0], ins.outcomes[1])
        assert len(merged.outcomes) == 2
        total = sum(m.effect() for m in merged.maps)
        assert np.max(np.abs(total - np.eye(2))) < 1e-9

    @pytest.mark.parametrize("seed", range(10))
    def test_coarse_graining_never_increases_ic(self, seed):
        rng = np.random.default_rng(1000 + seed)
        e = random_ensemble(2, 3, rng)
        ins = random_instrument(2, 2, 3, 2, seed=1100 + seed)
        merged = merge_outcomes(ins, ins.outcomes[0], ins.outcomes[1])
        ic_fine = classical_mutual_info(analyze(e, ins))
        ic_coarse = classical_mutual_info(analyze(e, merged))
        assert ic_coarse <= ic_fine + 1e-10
