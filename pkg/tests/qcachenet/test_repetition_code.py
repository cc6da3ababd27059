"""
Tests for repetition code syndromes, decoders and logical error.
"""
import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from src.qcachenet.errors import CapacityError, InvalidConfigError, InvalidInputError, InvalidProbabilityError
from src.qcachenet.repetition_code import (
    CodeConfig,
    RepetitionCode,
    Syndrome,
    build_lut,
    decode_ml,
    decode_mwm,
    decoding_report,
    flip_probability_from_fidelity,
    logical_error_exact,
    logical_error_mc,
    syndrome,
)


def brute_force_error(cfg: CodeConfig, decoder) -> float:
    """Logical error by enumerating all 2^K patterns through a decoder function."""
    total = 0.0
    for pattern in itertools.product((0, 1), repeat=cfg.num_qubits):
        correction = decoder(syndrome(pattern), cfg)
        if all(a ^ b for a, b in zip(pattern, correction)):
            total += math.prod(p if bit else 1 - p for bit, p in zip(pattern, cfg.flip_probabilities))
    return total


class TestSyndrome:
    """Parity checks on neighbouring qubits."""

    @pytest.mark.parametrize(
        "pattern, expected",
        [
            ((0, 0, 0), (0, 0)),
            ((1, 0, 0), (1, 0)),
            ((0, 1, 0), (1, 1)),
            ((0, 0, 1), (0, 1)),
            ((1, 1, 1), (0, 0)),
            ((1, 0, 1, 1, 0), (1, 1, 0, 1)),
        ],
    )
    def test_examples(self, pattern, expected):
        """Test hand-computed syndromes."""
        assert syndrome(pattern).bits == expected

    def test_complement_has_same_syndrome(self):
        """Test that a pattern and its complement are indistinguishable."""
        for pattern in itertools.product((0, 1), repeat=5):
            assert syndrome(pattern) == syndrome(tuple(1 - b for b in pattern))

    def test_length_mismatch(self):
        """Test that a pattern of the wrong length raises."""
        with pytest.raises(InvalidInputError):
            syndrome((0, 1), num_qubits=3)

    def test_bad_bits(self):
        """Test that non-binary bits raise."""
        with pytest.raises(InvalidInputError):
            syndrome((0, 2, 1))
        with pytest.raises(InvalidInputError):
            Syndrome((0, 3))

    def test_int_round_trip(self):
        """Test integer encoding of syndromes."""
        s = Syndrome((1, 0, 1))
        assert s.to_int() == 5
        assert Syndrome.from_int(5, 3) == s


class TestDecoders:
    """Minimum-weight and maximum-likelihood decoding."""

    def test_mwm_examples(self):
        """Test single flips on a 3-qubit code."""
        cfg = CodeConfig.uniform(3, 0.1)
        assert decode_mwm(Syndrome((0, 0)), cfg) == (0, 0, 0)
        assert decode_mwm(Syndrome((1, 0)), cfg) == (1, 0, 0)
        assert decode_mwm(Syndrome((1, 1)), cfg) == (0, 1, 0)
        assert decode_mwm(Syndrome((0, 1)), cfg) == (0, 0, 1)

    def test_syndrome_length_checked(self):
        """Test that a syndrome of the wrong length raises."""
        with pytest.raises(InvalidInputError):
            decode_mwm(Syndrome((0, 0, 0)), CodeConfig.uniform(3, 0.1))

    @pytest.mark.parametrize("k", [3, 5, 7])
    @pytest.mark.parametrize("p", [0.05, 0.3, 0.49])
    def test_mwm_corrects_single_flips(self, k, p):
        """Test that every weight-1 pattern is corrected by MWM."""
        cfg = CodeConfig(k, tuple(p * (i + 1) / k for i in range(k)))
        for i in range(k):
            pattern = tuple(int(j == i) for j in range(k))
            assert decode_mwm(syndrome(pattern), cfg) == pattern

    @pytest.mark.parametrize("k", [3, 5, 7])
    def test_lut_corrects_single_flips_uniform(self, k):
        """Test that the table corrects every weight-1 pattern for uniform p."""
        table = build_lut(CodeConfig.uniform(k, 0.2))
        for i in range(k):
            pattern = tuple(int(j == i) for j in range(k))
            assert table[syndrome(pattern)] == pattern

    def test_lut_prefers_likely_complement(self):
        """Test p = (0.01, 0.49, 0.49): flipping qubits 2 and 3 beats flipping qubit 1."""
        cfg = CodeConfig(3, (0.01, 0.49, 0.49))
        assert decode_ml(Syndrome((1, 0)), cfg) == (0, 1, 1)
        assert decode_mwm(Syndrome((1, 0)), cfg) == (1, 0, 0)

    def test_table_matches_decoder_functions(self):
        """Test that both tables agree with the per-syndrome decoders."""
        cfg = CodeConfig(5, (0.02, 0.3, 0.11, 0.45, 0.07))
        code = RepetitionCode(cfg)
        for decoder, function in (("mwm", decode_mwm), ("lut", decode_ml)):
            table = code.build_table(decoder)
            assert len(table) == 16
            for s, correction in table.items():
                assert correction == function(s, cfg)
                assert syndrome(correction) == s

    def test_unknown_decoder(self):
        """Test that an unknown decoder raises."""
        with pytest.raises(InvalidConfigError):
            logical_error_exact(CodeConfig.uniform(3, 0.1), "bp")

    def test_table_size_guard(self):
        """Test that K above the table limit raises."""
        with pytest.raises(CapacityError):
            build_lut(CodeConfig.uniform(26, 0.1))


class TestLogicalErrorExact:
    """Exact logical error by enumeration."""

    @pytest.mark.parametrize("decoder", ["mwm", "lut"])
    def test_three_qubits(self, decoder):
        """Test 3p^2 - 2p^3 at p = 0.1."""
        assert logical_error_exact(CodeConfig.uniform(3, 0.1), decoder) == pytest.approx(0.028, abs=1e-12)

    @pytest.mark.parametrize("decoder", ["mwm", "lut"])
    def test_five_qubits(self, decoder):
        """Test sum_{j>=3} C(5,j) p^j (1-p)^(5-j) at p = 0.1."""
        assert logical_error_exact(CodeConfig.uniform(5, 0.1), decoder) == pytest.approx(0.00856, abs=1e-12)

    def test_single_qubit(self):
        """Test K = 1: the logical error is the flip probability."""
        assert logical_error_exact(CodeConfig.uniform(1, 0.3)) == pytest.approx(0.3, abs=1e-15)

    @pytest.mark.parametrize("decoder", ["mwm", "lut"])
    def test_noiseless(self, decoder):
        """Test p = 0 gives zero logical error."""
        assert logical_error_exact(CodeConfig.uniform(7, 0.0), decoder) == 0.0

    def test_heterogeneous_example(self):
        """Test p = (0.49, 0.49, 0.01): ML gives 0.01, MWM gives 0.245098."""
        cfg = CodeConfig(3, (0.49, 0.49, 0.01))
        assert logical_error_exact(cfg, "lut") == pytest.approx(0.01, abs=1e-12)
        assert logical_error_exact(cfg, "mwm") == pytest.approx(0.245098, abs=1e-6)

    @pytest.mark.parametrize(
        "probabilities",
        [(0.1, 0.2, 0.3), (0.05, 0.4, 0.25, 0.01, 0.33), (0.2,) * 4],
    )
    def test_matches_brute_force(self, probabilities):
        """Test the class enumeration against all 2^K patterns."""
        cfg = CodeConfig(len(probabilities), probabilities)
        assert logical_error_exact(cfg, "mwm") == pytest.approx(brute_force_error(cfg, decode_mwm), abs=1e-12)
        assert logical_error_exact(cfg, "lut") == pytest.approx(brute_force_error(cfg, decode_ml), abs=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(min_value=0.0, max_value=0.5), min_size=3, max_size=7))
    def test_lut_never_worse(self, probabilities):
        """Test that maximum likelihood never loses to minimum weight."""
        cfg = CodeConfig(len(probabilities), tuple(probabilities))
        assert logical_error_exact(cfg, "lut") <= logical_error_exact(cfg, "mwm") + 1e-12

    @pytest.mark.parametrize("k", [3, 5, 7])
    @pytest.mark.parametrize("p", [0.01, 0.1, 0.3, 0.45])
    def test_decoders_agree_for_uniform_noise(self, k, p):
        """Test that both decoders coincide when every path is equally noisy."""
        cfg = CodeConfig.uniform(k, p)
        assert logical_error_exact(cfg, "lut") == pytest.approx(logical_error_exact(cfg, "mwm"), abs=1e-15)

    @settings(max_examples=30, deadline=None)
    @given(
        st.lists(st.floats(min_value=0.0, max_value=0.5), min_size=3, max_size=3).map(tuple),
        st.integers(min_value=0, max_value=2),
        st.floats(min_value=0.0, max_value=0.5),
    )
    def test_monotone_in_each_probability(self, probabilities, index, raised):
        """Test that raising one p_i within [0, 0.5] never lowers the logical error."""
        higher = list(probabilities)
        higher[index] = max(probabilities[index], raised)
        for decoder in ("mwm", "lut"):
            low = logical_error_exact(CodeConfig(3, probabilities), decoder)
            high = logical_error_exact(CodeConfig(3, tuple(higher)), decoder)
            assert high >= low - 1e-12

    @pytest.mark.parametrize("decoder", ["mwm", "lut"])
    def test_permutation_invariant(self, decoder):
        """Test that reordering the paths leaves the logical error unchanged."""
        probabilities = (0.02, 0.3, 0.11, 0.45, 0.07)
        reference = logical_error_exact(CodeConfig(5, probabilities), decoder)
        for permutation in itertools.permutations(probabilities):
            assert logical_error_exact(CodeConfig(5, permutation), decoder) == pytest.approx(reference, abs=1e-12)

    def test_increasing_in_uniform_p(self):
        """Test growth with p for a uniform code."""
        values = [logical_error_exact(CodeConfig.uniform(5, p)) for p in (0.0, 0.05, 0.1, 0.2, 0.3, 0.5)]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert values[-1] == pytest.approx(0.5, abs=1e-12)


class TestLogicalErrorMonteCarlo:
    """Seeded Monte Carlo estimates."""

    @pytest.mark.parametrize("k", [3, 5, 7])
    @pytest.mark.parametrize("p", [0.05, 0.1, 0.3])
    def test_within_stderr_band(self, k, p):
        """Test the estimate at 10^6 trials against the exact value (four sigma)."""
        report = logical_error_mc(CodeConfig.uniform(k, p), "lut", 1_000_000, seed=100 * k + int(100 * p))
        sigma = math.sqrt(report.logical_error_exact * (1 - report.logical_error_exact) / report.trials)
        assert abs(report.logical_error_mc - report.logical_error_exact) <= 4 * sigma

    def test_heterogeneous_mwm(self):
        """Test a heterogeneous code under MWM at 10^5 trials."""
        report = logical_error_mc(CodeConfig(3, (0.49, 0.49, 0.01)), "mwm", 100_000, seed=4)
        assert abs(report.z_score) < 4

    def test_independent_of_workers(self):
        """Test identical estimates for one and several workers."""
        code = RepetitionCode(CodeConfig.uniform(5, 0.2))
        one = code.logical_error_mc("lut", 50_000, seed=9, max_workers=1, chunk_size=8_192)
        many = code.logical_error_mc("lut", 50_000, seed=9, max_workers=4, chunk_size=8_192)
        assert one == many

    def test_reproducible(self):
        """Test that a seed fixes the estimate."""
        cfg = CodeConfig.uniform(3, 0.1)
        assert decoding_report(cfg, "mwm", 20_000, 5) == decoding_report(cfg, "mwm", 20_000, 5)

    def test_noiseless(self):
        """Test p = 0 gives no failures."""
        report = logical_error_mc(CodeConfig.uniform(5, 0.0), "lut", 10_000, seed=1)
        assert report.logical_error_mc == 0.0
        assert report.mc_stderr == 0.0

    def test_minimum_trials(self):
        """Test that fewer than 10^4 trials is rejected."""
        with pytest.raises(InvalidConfigError):
            logical_error_mc(CodeConfig.uniform(3, 0.1), "lut", 999, seed=1)


class TestCodeConfig:
    """Code configuration and fidelity mapping."""

    def test_length_mismatch(self):
        """Test that K must match the number of probabilities."""
        with pytest.raises(InvalidConfigError):
            CodeConfig(3, (0.1, 0.1))

    def test_bad_probability(self):
        """Test that probabilities outside [0, 1] raise."""
        with pytest.raises(InvalidProbabilityError):
            CodeConfig(2, (0.1, 1.5))

    def test_uniform(self):
        """Test the uniform constructor."""
        cfg = CodeConfig.uniform(4, 0.2)
        assert cfg.flip_probabilities == (0.2, 0.2, 0.2, 0.2)
        assert cfg.is_uniform

    @pytest.mark.parametrize(
        "fidelity, mapping, expected",
        [(1.0, "werner", 0.0), (0.25, "werner", 0.5), (0.85, "werner", 0.1), (0.9, "bitflip", 0.1)],
    )
    def test_flip_mapping(self, fidelity, mapping, expected):
        """Test fidelity to flip probability."""
        assert flip_probability_from_fidelity(fidelity, mapping) == pytest.approx(expected, abs=1e-12)

    def test_unknown_mapping(self):
        """Test that an unknown mapping raises."""
        with pytest.raises(InvalidConfigError):
            flip_probability_from_fidelity(0.9, "amplitude")
