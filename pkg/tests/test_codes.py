"""Code representation, encoding, trellis and section-code tests.

Expected tap vectors, dimensions and weight enumerators were frozen from an
independent tuple-based shift-register implementation (exhaustive
enumeration, no shared code with the package).
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codedetect import (
    ConvCode,
    codes_equivalent,
    encode,
    parse_octal_generators,
    section_code,
    trellis,
    validate_assumptions,
    weight_enumerator,
)
from codedetect.codes import _bits_to_words, _words_to_bits


class TestParse:
    def test_example_pairs(self):
        c = parse_octal_generators(["5", "7"])
        assert c.generators == (((1, 0, 1),), ((1, 1, 1),))
        assert (c.k, c.n, c.m) == (1, 2, 2)
        c = parse_octal_generators(["4", "5"])
        assert c.generators == (((1, 0, 0),), ((1, 0, 1),))

    def test_long_generators(self):
        c = parse_octal_generators(["133", "171"])
        assert c.m == 6
        assert c.generators[0][0] == (1, 0, 1, 1, 0, 1, 1)
        assert c.generators[1][0] == (1, 1, 1, 1, 0, 0, 1)

    def test_left_padding(self):
        # the shorter generator gains high-order (small-delay) zero taps
        c = parse_octal_generators(["11", "5"])
        assert c.generators == (((1, 0, 0, 1),), ((0, 1, 0, 1),))

    @pytest.mark.parametrize("bad", [[], ["5", "8"], ["5", "x"], ["0", "5"], ["5", ""]])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_octal_generators(bad)

    def test_octal_roundtrip(self):
        for octals in (["5", "7"], ["4", "5"], ["133", "171"], ["11", "5"]):
            assert parse_octal_generators(octals).describe() == ",".join(octals)

    def test_m_must_be_tight(self):
        # both expansions end in a zero tap: the true memory is only 1
        with pytest.raises(ValueError, match="tight"):
            parse_octal_generators(["6", "4"])


class TestEncode:
    def test_impulse_response(self, code57):
        assert encode(code57, [1, 0, 0]).tolist() == [1, 1, 0, 1, 1, 1]

    def test_all_zero(self, code57):
        assert not encode(code57, np.zeros(12, dtype=int)).any()

    def test_hand_unrolled(self, code57):
        # frozen from the independent shift-register oracle
        assert encode(code57, [1, 1, 0, 1]).tolist() == [1, 1, 1, 0, 1, 0, 0, 0]

    def test_length_validation(self):
        code = ConvCode.make([[(1, 0), (0, 1)], [(1, 1), (1, 0)], [(0, 1), (1, 1)]], k=2)
        with pytest.raises(ValueError):
            encode(code, [1, 0, 1])

    def test_linearity(self, code57):
        rng = np.random.default_rng(42)
        msgs = rng.integers(0, 2, size=(1000, 2, 24))
        for u, v in msgs:
            assert np.array_equal(encode(code57, u ^ v), encode(code57, u) ^ encode(code57, v))

    def test_impulse_reproduces_taps(self, example_pairs):
        # impulse in, interleaved padded tap vectors out
        for octals in {tuple(o) for pair in example_pairs for o in pair}:
            code = parse_octal_generators(list(octals))
            impulse = np.zeros((code.m + 1), dtype=int)
            impulse[0] = 1
            out = encode(code, impulse).reshape(code.m + 1, code.n)
            for j in range(code.n):
                assert tuple(out[:, j]) == code.generators[j][0]


class TestTrellis:
    def test_branch_example(self, code57):
        tr = trellis(code57)
        assert tr.next_state[0, 1] == 1
        assert tr.output[0, 1] == 0b11
        assert tr.next_state[0, 0] == 0
        assert tr.output[0, 0] == 0

    def test_branch_count(self, code57):
        assert trellis(code57).branch_count == 8

    def test_branch_flow_is_balanced(self, example_pairs):
        # a shift register drops the oldest input: for a fixed input the
        # next-state map is 2^k-to-one onto the states starting with that
        # input, and overall every state keeps in-degree 2^k
        for octals in {tuple(o) for pair in example_pairs for o in pair}:
            code = parse_octal_generators(list(octals))
            tr = trellis(code)
            n_states, n_inputs = tr.next_state.shape
            indeg = np.bincount(tr.next_state.ravel(), minlength=n_states)
            assert (indeg == n_inputs).all()
            for u in range(n_inputs):
                hit = np.bincount(tr.next_state[:, u], minlength=n_states)
                assert set(hit) == {0, n_inputs}
                assert (hit > 0).sum() == n_states // n_inputs


class TestSectionCode:
    def test_dimensions_57(self, code57):
        assert [section_code(code57, i).dimension for i in (1, 2, 3)] == [2, 4, 5]

    def test_dimensions_45(self, code45):
        # [4,5] has identical memory-states, yet all of its 3-step paths stay
        # distinct: the degeneracy shows up in the branch outputs, not here
        assert [section_code(code45, i).dimension for i in (1, 2, 3)] == [2, 4, 5]
        assert len(section_code(code45, 3).codewords) == 32

    def test_zero_codeword(self, code57):
        assert 0 in section_code(code57, 1).codewords

    def test_linear_closure(self, code57, code45):
        for code in (code57, code45):
            cws = section_code(code, 3).codewords
            assert all((a ^ b) in cws for a in cws for b in cws)

    def test_nesting(self, code57, code45):
        # dropping the newest word of D_{i+1} recovers D_i exactly
        for code in (code57, code45):
            for i in (1, 2, 3):
                bigger = section_code(code, i + 1).codewords
                assert {cw >> code.n for cw in bigger} == section_code(code, i).codewords

    def test_enumeration_cap(self, code57):
        with pytest.raises(ValueError, match="enumeration too large"):
            section_code(code57, 3, path_cap=16)


class TestWeightEnumerator:
    def test_d1(self, code57):
        assert weight_enumerator(section_code(code57, 1)).counts == (1, 2, 1)

    def test_d3_tables(self, code57, code45):
        # frozen by exhaustive enumeration
        assert weight_enumerator(section_code(code57, 3)).counts == (1, 1, 10, 10, 5, 5, 0)
        assert weight_enumerator(section_code(code45, 3)).counts == (1, 3, 6, 10, 9, 3, 0)

    def test_zero_codeword_unique_at_three_steps(self, eligible_codes):
        for code in eligible_codes:
            assert weight_enumerator(section_code(code, 3)).counts[0] == 1

    def test_total_matches_size(self, code57):
        sec = section_code(code57, 3)
        assert weight_enumerator(sec).total() == len(sec.codewords)


class TestAssumptions:
    def test_example1(self, code57, code45):
        r = validate_assumptions(code57)
        assert not r.has_identical_memory_states and not r.has_equal_branch_outputs
        assert not r.has_collapsing_window_paths
        assert r.is_analysis_eligible
        r = validate_assumptions(code45)
        assert r.has_identical_memory_states
        assert not r.has_collapsing_window_paths  # its 2-step paths stay distinct
        assert not r.is_analysis_eligible

    def test_collapsing_paths_witness(self):
        # generators share the factor 1+D: distinct 2-step paths emit equal
        # windows although no two memory-states are identical
        r = validate_assumptions(parse_octal_generators(["3", "5"]))
        assert not r.has_identical_memory_states
        assert not r.has_equal_branch_outputs
        assert r.has_collapsing_window_paths
        assert not r.is_analysis_eligible

    def test_equal_branch_witness(self):
        # no generator taps the current input, so both branches emit the same word
        code = ConvCode.make([(0, 1, 1), (0, 1, 0)])
        r = validate_assumptions(code)
        assert r.has_equal_branch_outputs
        assert not r.is_analysis_eligible

    def test_eligibility_needs_m2(self):
        code = parse_octal_generators(["133", "171"])
        assert not validate_assumptions(code).is_analysis_eligible


class TestEquivalence:
    def test_reflexive(self, code57):
        assert codes_equivalent(code57, code57)

    def test_example1_differs(self, code57, code45):
        assert not codes_equivalent(code57, code45)

    def test_swapped_streams(self, code57):
        # frozen by D_3 set comparison: swapping the output lines changes the code
        c75 = parse_octal_generators(["7", "5"])
        assert (section_code(code57, 3).codewords == section_code(c75, 3).codewords) is False
        assert not codes_equivalent(code57, c75)

    def test_parameter_mismatch(self, code57):
        with pytest.raises(ValueError):
            codes_equivalent(code57, parse_octal_generators(["11", "5"]))


class TestConstruction:
    def test_rejects_all_zero_generator(self):
        with pytest.raises(ValueError):
            ConvCode.make([(1, 0, 1), (0, 0, 0)])

    def test_rejects_loose_memory(self):
        with pytest.raises(ValueError, match="tight"):
            ConvCode.make([(1, 1, 0), (1, 0, 0)])

    def test_rejects_rate_one(self):
        with pytest.raises(ValueError):
            ConvCode.make([(1, 0, 1)])


@settings(max_examples=200, deadline=None)
@given(
    n=st.integers(1, 6),
    data=st.data(),
)
def test_word_packing_roundtrip(n, data):
    bits = data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=8 * n))
    bits = np.array(bits[: n * (len(bits) // n)], dtype=np.int8)
    words = _bits_to_words(bits, n)
    assert np.array_equal(_words_to_bits(words, n), bits)
