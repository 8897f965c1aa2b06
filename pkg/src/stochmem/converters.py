"""Data converters between analog, digital, and stochastic representations.

Analog values are plain floats on the normalized full scale [0, 1].
The comparator-based digital-to-stochastic converter (DSC) emits a one
when the LFSR value is <= the stored code, so code 2^width-1 saturates
the stream and a full-period run carries exactly ``code`` ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bitstream import Bitstream, Encoding, estimate_value, pack_bits
from .lfsr import LfsrState, lfsr_next
from .rng import RandomSource

ADC_BITS = 10
DAC_BITS = 8


@dataclass(frozen=True)
class QuantizerConfig:
    bits: int = ADC_BITS

    def __post_init__(self):
        if not 1 <= self.bits <= 16:
            raise ValueError(f"quantizer resolution must be 1..16 bits, got {self.bits}")

    @property
    def full_scale(self) -> int:
        return (1 << self.bits) - 1


def _check_unit(x: float, what: str) -> None:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{what} must lie in [0, 1], got {x}")


def adc_quantize(x: float, cfg: QuantizerConfig = QuantizerConfig(ADC_BITS)) -> int:
    """Round-half-up quantization of a full-scale analog value."""
    _check_unit(x, "ADC input")
    return int(math.floor(x * cfg.full_scale + 0.5))


def dac_dequantize(code: int, cfg: QuantizerConfig = QuantizerConfig(DAC_BITS)) -> float:
    if not 0 <= code <= cfg.full_scale:
        raise ValueError(f"code {code} out of range for {cfg.bits}-bit DAC")
    return code / cfg.full_scale


def requantize(code: int, src: QuantizerConfig, dst: QuantizerConfig) -> int:
    """Re-express a code at a different resolution (round-half-up)."""
    if not 0 <= code <= src.full_scale:
        raise ValueError(f"code {code} out of range for {src.bits} bits")
    return int(math.floor(code / src.full_scale * dst.full_scale + 0.5))


def dsc_generate(code: int, length: int, lfsr: LfsrState) -> Bitstream:
    """Comparator stream: bit i is one iff the i-th LFSR value is <= code."""
    if not 0 <= code <= lfsr.spec.period:
        raise ValueError(f"code {code} out of range for width {lfsr.spec.width}")
    if length < 1:
        raise ValueError("stream length must be positive")
    bits = np.empty(length, dtype=np.uint8)
    st = lfsr
    for i in range(length):
        value, st = lfsr_next(st)
        bits[i] = value <= code
    return Bitstream(pack_bits(bits), length)


def sdc_count(bs: Bitstream) -> int:
    """Counter readback: the number of ones in the stream."""
    if bs.length <= 0:
        raise ValueError("cannot count an empty stream")
    return bs.ones_count


def asc_generate(p: float, length: int, rng: RandomSource) -> Bitstream:
    """Bernoulli sampling stream: ones count is Binomial(length, p)."""
    _check_unit(p, "ASC input")
    if length < 1:
        raise ValueError("stream length must be positive")
    return Bitstream(pack_bits(rng.bernoulli_bits(p, length)), length)


def sac_integrate(bs: Bitstream) -> float:
    """Integrator readback: fraction of time the stream stays at logic one."""
    if bs.length <= 0:
        raise ValueError("cannot integrate an empty stream")
    return estimate_value(Bitstream(bs.words, bs.length, Encoding.UNIPOLAR))
