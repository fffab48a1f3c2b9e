from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crtseq.erasure import (
    PRIMITIVE_POLYS,
    CodeSpec,
    DecodeFailure,
    ErasureCode,
    GF,
    code_dimension,
    session_roundtrip,
)


class TestDimension:
    def test_reference_values(self):
        assert code_dimension(19, 19) == 182
        assert code_dimension(5, 5) == 14

    def test_positive_on_a_grid(self):
        for p in (3, 5, 7, 11, 13, 19):
            for k in range(p, 3 * p):
                assert code_dimension(p, k) > 0

    def test_rejects_k_below_p(self):
        with pytest.raises(ValueError):
            code_dimension(5, 4)

    def test_rejects_composite_p(self):
        with pytest.raises(ValueError):
            code_dimension(9, 9)


class TestField:
    @pytest.mark.parametrize("order", sorted(PRIMITIVE_POLYS))
    def test_tables_are_primitive(self, order):
        GF(order)  # construction itself verifies the multiplicative order

    def test_axioms_sampled(self):
        f = GF(32)
        rng = np.random.default_rng(0)
        for _ in range(200):
            a, b, c = (int(x) for x in rng.integers(0, 32, size=3))
            assert f.mul(a, b) == f.mul(b, a)
            assert f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c)
            assert f.mul(a, b ^ c) == f.mul(a, b) ^ f.mul(a, c)
            if a:
                assert f.mul(a, f.inv(a)) == 1

    def test_zero_has_no_inverse(self):
        with pytest.raises(ZeroDivisionError):
            GF(32).inv(0)

    def test_unsupported_order(self):
        with pytest.raises(ValueError):
            GF(48)


class TestCodeSpec:
    def test_protocol_shapes(self):
        spec = CodeSpec.for_protocol(5, 5)
        assert (spec.n, spec.dim, spec.field_order) == (26, 14, 32)
        assert spec.max_erasures == 12
        big = CodeSpec.for_protocol(19, 19)
        assert (big.n, big.dim, big.field_order) == (362, 182, 512)

    def test_validation(self):
        with pytest.raises(ValueError):
            CodeSpec(40, 10, 32)  # n beyond the field
        with pytest.raises(ValueError):
            CodeSpec(6, 7, 8)


SMALL = ErasureCode(CodeSpec(6, 3, 8))


class TestErasureCode:
    def test_round_trip_without_erasures(self):
        info = np.array([1, 5, 7])
        word = SMALL.encode(info)
        assert np.array_equal(word[:3], info)  # systematic
        assert np.array_equal(SMALL.decode(word, np.zeros(6, bool)), info)

    def test_every_full_weight_erasure_pattern_decodes(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            info = rng.integers(0, 8, size=3)
            word = SMALL.encode(info)
            for pattern in combinations(range(6), 3):
                erased = np.zeros(6, bool)
                erased[list(pattern)] = True
                got = SMALL.decode(np.where(erased, 0, word), erased)
                assert np.array_equal(got, info)

    def test_one_erasure_too_many_fails_loudly(self):
        word = SMALL.encode(np.array([2, 3, 4]))
        erased = np.zeros(6, bool)
        erased[:4] = True
        with pytest.raises(DecodeFailure):
            SMALL.decode(word, erased)

    def test_symbols_must_fit_the_field(self):
        with pytest.raises(ValueError):
            SMALL.encode(np.array([1, 2, 9]))

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_protocol_code_handles_budget_erasures(self, seed):
        code = protocol_code()
        rng = np.random.default_rng(seed)
        info = rng.integers(0, 32, size=14)
        word = code.encode(info)
        erased = np.zeros(26, bool)
        erased[rng.choice(26, size=12, replace=False)] = True
        assert np.array_equal(code.decode(np.where(erased, 0, word), erased), info)

    def test_boundary_patterns(self):
        code = protocol_code()
        info = np.arange(14) % 32
        word = code.encode(info)
        for pattern in (range(12), range(14, 26), range(7, 19)):
            erased = np.zeros(26, bool)
            erased[list(pattern)] = True
            assert np.array_equal(code.decode(np.where(erased, 0, word), erased), info)
        erased = np.zeros(26, bool)
        erased[:13] = True
        with pytest.raises(DecodeFailure):
            code.decode(word, erased)


_PROTOCOL_CODE = None


def protocol_code() -> ErasureCode:
    global _PROTOCOL_CODE
    if _PROTOCOL_CODE is None:
        _PROTOCOL_CODE = ErasureCode(CodeSpec.for_protocol(5, 5))
    return _PROTOCOL_CODE


class TestSessionRoundtrip:
    def test_three_users_recover_everything(self):
        rng = np.random.default_rng(9)
        for trial in range(25):
            offsets = tuple(int(x) for x in rng.integers(0, 130, size=3))
            report = session_roundtrip(5, 5, (1, 2, 3), offsets, seed=trial)
            assert report.all_recovered
            assert report.info_throughput == Fraction(42, 130)
            assert max(report.erasure_counts.values()) <= report.spec.max_erasures

    def test_single_user_sees_no_erasures(self):
        report = session_roundtrip(5, 5, (2,), (17,))
        assert report.all_recovered
        assert report.erasure_counts == {2: 0}

    def test_explicit_payloads_round_trip(self):
        payloads = {1: np.arange(14) % 32, 4: (np.arange(14) * 3) % 32}
        report = session_roundtrip(5, 5, (1, 4), (0, 99), payloads=payloads)
        assert report.all_recovered
        assert np.array_equal(report.recovered[4], payloads[4])

    def test_four_users_hit_the_budget_exactly(self):
        # p=7, k=7: four active users, per-user budget 3*(k+1) = 24 of the
        # 50 packets; random offsets reach the budget and still decode
        spec = CodeSpec.for_protocol(7, 7)
        assert (spec.n, spec.dim, spec.field_order) == (50, 26, 64)
        rng = np.random.default_rng(3)
        worst = 0
        for trial in range(30):
            offsets = tuple(int(x) for x in rng.integers(0, 350, size=4))
            report = session_roundtrip(7, 7, (1, 3, 4, 6), offsets, seed=trial)
            assert report.all_recovered
            assert report.info_throughput == Fraction(52, 175)
            worst = max(worst, max(report.erasure_counts.values()))
        assert worst <= spec.max_erasures

    def test_large_instance_formula_level(self):
        # checked without simulation: dimension, field size and the exact
        # information throughput of ten active users
        spec = CodeSpec.for_protocol(19, 19)
        assert spec.dim == 182 and spec.field_order == 512
        throughput = Fraction(10 * spec.dim, 19 * 362)
        assert throughput == Fraction(1820, 6878)
        assert float(throughput) >= 0.25

    def test_too_many_users_rejected(self):
        with pytest.raises(ValueError):
            session_roundtrip(5, 5, (1, 2, 3, 4), (0, 1, 2, 3))

    def test_mismatched_offsets_rejected(self):
        with pytest.raises(ValueError):
            session_roundtrip(5, 5, (1, 2), (0,))

    def test_generator_zero_rejected(self):
        with pytest.raises(ValueError):
            session_roundtrip(5, 5, (0, 1), (0, 1))
