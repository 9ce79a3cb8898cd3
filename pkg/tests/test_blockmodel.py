"""Two-state block-production model, mining streams, difficulty reports."""

import numpy as np
import pytest

from chainmech.blockmodel import (
    blockchain_machine,
    difficulty_report,
    mining_symbol_stream,
)
from chainmech.powchain import DifficultyTarget, target_for_zeros
from chainmech.symbolic import (
    InferenceConfig,
    infer_causal_states,
    statistical_complexity,
)

# mpmath (dps=60) binary entropy H(p); see tests/test_entropy.py for the oracle
BINARY_ENTROPY_ORACLE = {
    1e-30: 1.01100537887509844e-28,
    1e-20: 6.78812569386362074e-19,
    2.0**-72: 1.55520956086957417e-20,
    1e-6: 2.13742628888653760e-05,
    0.5: 1.0,
}

REFERENCE_DIFFICULTY = 595_921_917_085.42
REFERENCE_TARGET = 45240046586752577394511379272335868016630812999232641228


class TestBlockchainMachine:
    def test_reference_probability(self):
        model = blockchain_machine(2.0**-72)
        c = statistical_complexity(model.machine)
        assert c == pytest.approx(1.56e-20, rel=1e-2)
        assert c == pytest.approx(BINARY_ENTROPY_ORACLE[2.0**-72], rel=1e-9)

    def test_half_matches_tick_tock_value(self):
        assert statistical_complexity(blockchain_machine(0.5).machine) == 1.0

    def test_one_sixteenth(self):
        # direct binary-entropy evaluation: H(1/16) = 4/16 - (15/16)log2(15/16)
        c = statistical_complexity(blockchain_machine(1 / 16).machine)
        assert c == pytest.approx(0.3372900666170139, rel=1e-12)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.2, 1.5])
    def test_domain(self, p):
        with pytest.raises(ValueError):
            blockchain_machine(p)

    def test_state_structure(self):
        p = 0.25
        m = blockchain_machine(p).machine
        assert m.state_probabilities[0] == 1.0 - p
        assert m.state_probabilities[1] == p
        searching = m.state(0)
        assert searching.emission[0] == 1.0 - p and searching.emission[1] == p
        assert searching.successor == {0: 0, 1: 1}
        found = m.state(1)
        assert found.emission[0] == 1.0 and found.successor == {0: 0}

    @pytest.mark.parametrize("p", sorted(BINARY_ENTROPY_ORACLE))
    def test_matches_extended_precision_oracle(self, p):
        c = statistical_complexity(blockchain_machine(p).machine)
        assert c == pytest.approx(BINARY_ENTROPY_ORACLE[p], rel=1e-6)

    def test_strictly_increasing_in_p_up_to_half(self):
        grid = [1e-20, 1e-12, 1e-8, 1e-6, 1e-4, 0.01, 0.1, 0.25, 0.4, 0.5]
        values = [statistical_complexity(blockchain_machine(p).machine) for p in grid]
        assert all(a < b for a, b in zip(values, values[1:]))


class TestMiningSymbolStream:
    def test_accept_everything_gives_all_ones(self):
        s = mining_symbol_stream(DifficultyTarget(1 << 256), attempts=50, seed=1)
        assert s.symbols() == "1" * 50

    def test_success_fraction_at_one_zero(self):
        s = mining_symbol_stream(target_for_zeros(1), attempts=10**6, seed=11)
        assert s.data.mean() == pytest.approx(1 / 16, abs=0.002)

    def test_deterministic(self):
        t = target_for_zeros(1)
        a = mining_symbol_stream(t, attempts=2000, seed=5)
        b = mining_symbol_stream(t, attempts=2000, seed=5)
        assert np.array_equal(a.data, b.data)
        c = mining_symbol_stream(t, attempts=2000, seed=6)
        assert not np.array_equal(a.data, c.data)

    def test_alphabet(self):
        s = mining_symbol_stream(target_for_zeros(1), attempts=200, seed=2)
        assert s.alphabet == "01"

    def test_attempts_validation(self):
        with pytest.raises(ValueError):
            mining_symbol_stream(target_for_zeros(1), attempts=0, seed=0)


class TestDifficultyReport:
    def test_reference_difficulty_honest_route(self):
        rep = difficulty_report(REFERENCE_DIFFICULTY)
        assert rep.target == REFERENCE_TARGET
        assert rep.target_hex == format(REFERENCE_TARGET, "064x")
        # the actual hex rendering of this target has 17 leading zeros,
        # one fewer than the reference analysis assumed
        assert rep.leading_zeros == 17
        assert rep.assumed_zeros == 17
        assert rep.p_exact == pytest.approx(REFERENCE_TARGET / 2.0**256, rel=1e-15)
        # ordering sanity: 16^-(k+1) < p_exact <= 16^-k for the honest count
        assert 16.0 ** -(rep.leading_zeros + 1) < rep.p_exact <= 16.0**-rep.leading_zeros

    def test_reference_difficulty_assumed_zeros_route(self):
        rep = difficulty_report(REFERENCE_DIFFICULTY, assumed_zeros=18)
        assert rep.leading_zeros == 17  # honest count still reported
        assert rep.p_from_zeros == 2.0**-72
        assert rep.state_prob_found == pytest.approx(2.1e-22, rel=1e-2)
        assert rep.state_prob_searching == pytest.approx(1.0, abs=1e-12)
        assert rep.complexity_bits == pytest.approx(1.56e-20, rel=1e-2)

    def test_difficulty_one(self):
        rep = difficulty_report(1.0)
        assert rep.p_exact == 65535 / 2.0**48
        reference = statistical_complexity(blockchain_machine(65535 / 2.0**48).machine)
        assert rep.complexity_bits_exact == pytest.approx(reference, rel=1e-12)
        assert rep.leading_zeros == 8  # 00000000ffff...

    def test_probability_scales_with_difficulty(self):
        rep1, rep16 = difficulty_report(1.0), difficulty_report(16.0)
        assert rep16.p_exact / rep1.p_exact == pytest.approx(1 / 16, rel=1e-9)

    def test_assumed_zeros_validation(self):
        with pytest.raises(ValueError):
            difficulty_report(1.0, assumed_zeros=65)

    def test_both_probability_routes_reported(self):
        rep = difficulty_report(100.0)
        assert 0.0 < rep.p_exact < 1.0
        assert rep.p_from_zeros == 16.0**-rep.leading_zeros
        assert rep.complexity_bits > 0.0 and rep.complexity_bits_exact > 0.0


class TestIIDCollapse:
    def test_inference_collapses_to_one_state(self):
        # The attempt-by-attempt record is i.i.d., so strict reconstruction
        # yields ONE state with zero complexity, while the two-state reading
        # of the same process assigns H(p) > 0: both views, side by side.
        stream = mining_symbol_stream(target_for_zeros(1), attempts=10**6, seed=99)
        m = infer_causal_states(stream, InferenceConfig())
        assert m.n_states == 1
        assert statistical_complexity(m) == 0.0
        two_state = blockchain_machine(1 / 16)
        assert statistical_complexity(two_state.machine) > 0.3
