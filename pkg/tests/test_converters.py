import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stochmem.bitstream import Bitstream, estimate_value
from stochmem.converters import (QuantizerConfig, adc_quantize, asc_generate,
                                 dac_dequantize, dsc_generate, requantize,
                                 sac_integrate, sdc_count)
from stochmem.lfsr import LfsrSpec, LfsrState, lfsr_next, seed_state
from stochmem.rng import RandomSource, SeedSpec, derive_generator

Q10 = QuantizerConfig(10)
Q8 = QuantizerConfig(8)


class TestQuantizers:
    @pytest.mark.parametrize("x,code", [(1.0, 1023), (0.0, 0), (0.3, 307)])
    def test_adc_values(self, x, code):
        assert adc_quantize(x, Q10) == code

    def test_adc_dequantize_roundtrip_value(self):
        assert dac_dequantize(307, Q10) == pytest.approx(0.300097751710655)

    @pytest.mark.parametrize("code,value", [(255, 1.0), (0, 0.0)])
    def test_dac_endpoints(self, code, value):
        assert dac_dequantize(code, Q8) == value

    def test_dac_midscale(self):
        assert dac_dequantize(128, Q8) == pytest.approx(128 / 255)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            adc_quantize(1.2, Q10)
        with pytest.raises(ValueError):
            adc_quantize(-0.1, Q10)
        with pytest.raises(ValueError):
            dac_dequantize(256, Q8)

    @given(st.integers(0, 1023))
    def test_quantize_dequantize_identity_on_codes(self, code):
        assert adc_quantize(dac_dequantize(code, Q10), Q10) == code

    @given(st.floats(0.0, 1.0))
    def test_dequantize_quantize_half_step_bound(self, x):
        back = dac_dequantize(adc_quantize(x, Q10), Q10)
        assert abs(back - x) <= 0.5 / 1023 + 1e-12

    @given(st.integers(0, 1023))
    def test_requantize_range(self, code):
        c8 = requantize(code, Q10, Q8)
        assert 0 <= c8 <= 255


class TestDsc:
    def test_full_scale_code_saturates(self):
        bs = dsc_generate(1023, 200, seed_state(LfsrSpec(), 99))
        assert bs.ones_count == 200

    def test_zero_code_all_zeros(self):
        bs = dsc_generate(0, 200, seed_state(LfsrSpec(), 99))
        assert bs.ones_count == 0

    @pytest.mark.parametrize("code", [1, 37, 512, 800, 1022])
    def test_full_period_ones_equals_code(self, code):
        bs = dsc_generate(code, 1023, seed_state(LfsrSpec(), 5))
        assert bs.ones_count == code

    def test_code_out_of_range(self):
        with pytest.raises(ValueError):
            dsc_generate(1024, 10, seed_state(LfsrSpec(), 5))

    def test_matches_stepwise_comparator(self):
        st0 = seed_state(LfsrSpec(), 777)
        bs = dsc_generate(400, 64, st0)
        cur, bits = st0, []
        for _ in range(64):
            v, cur = lfsr_next(cur)
            bits.append(int(v <= 400))
        assert bs.to_bits().tolist() == bits


class TestSdc:
    def test_counts_ones(self):
        assert sdc_count(Bitstream.ones(1024)) == 1024

    def test_alternating(self):
        assert sdc_count(Bitstream.from_bits([0, 1] * 5)) == 5

    def test_matches_naive_loop_oracle(self):
        rng = np.random.default_rng(13)
        for _ in range(1000):
            bits = (rng.random(rng.integers(1, 200)) < rng.random()).astype(np.uint8)
            bs = Bitstream.from_bits(bits)
            assert sdc_count(bs) == int(sum(int(b) for b in bits))


class TestAsc:
    def test_saturated(self):
        rng = derive_generator(SeedSpec(1))
        assert asc_generate(1.0, 256, rng).ones_count == 256
        assert asc_generate(0.0, 256, rng).ones_count == 0

    def test_binomial_moments(self):
        ones = []
        for k in range(1000):
            rng = derive_generator(SeedSpec(10, k, 0, 0))
            ones.append(asc_generate(0.3, 1024, rng).ones_count)
        ones = np.array(ones, dtype=float)
        assert abs(ones.mean() - 307.2) <= 0.05 * 307.2
        expect_std = np.sqrt(1024 * 0.3 * 0.7)
        assert abs(ones.std() - expect_std) <= 0.05 * expect_std

    def test_domain_error(self):
        with pytest.raises(ValueError):
            asc_generate(1.01, 10, derive_generator(SeedSpec(1)))


class TestSac:
    def test_all_ones(self):
        assert sac_integrate(Bitstream.ones(64)) == 1.0

    def test_half(self):
        bits = np.zeros(1024, dtype=np.uint8)
        bits[::2] = 1
        assert sac_integrate(Bitstream.from_bits(bits)) == 0.5

    @pytest.mark.parametrize("code", [0, 17, 512, 1023])
    def test_sac_of_full_period_dsc_is_exact(self, code):
        bs = dsc_generate(code, 1023, seed_state(LfsrSpec(), 321))
        assert sac_integrate(bs) == code / 1023

    def test_sdc_dsc_roundtrip_full_period(self):
        for code in (3, 99, 640):
            bs = dsc_generate(code, 1023, seed_state(LfsrSpec(), 9))
            assert sdc_count(bs) == code


def test_asc_unbiasedness_bound():
    # |mean - p| <= 4 sqrt(p(1-p)/(N L))
    p, trials, length = 0.42, 400, 512
    total = 0
    for k in range(trials):
        rng = derive_generator(SeedSpec(77, k, 1, 2))
        total += asc_generate(p, length, rng).ones_count
    mean = total / (trials * length)
    assert abs(mean - p) <= 4 * np.sqrt(p * (1 - p) / (trials * length))
