"""Bit-accurate stochastic-computing simulator and hardware cost model."""

from .bitstream import Bitstream, Encoding, estimate_value
from .circuits import (AppInputs, AppKind, AppParams, BernsteinPoly, GateKind,
                       fit_bernstein, frame_diff_eval, gamma_eval, gate_eval,
                       golden_eval, kde_eval, median_eval, robert_eval)
from .converters import (QuantizerConfig, adc_quantize, asc_generate,
                         dac_dequantize, dsc_generate, sac_integrate, sdc_count)
from .costs import (AccessCounts, AccessMultipliers, AppProfile, CostReport,
                    SystemDesign, UnitCost, area_report, default_profile,
                    energy_report, share_breakdown)
from .harness import (ExperimentConfig, ExperimentReport, calibrate_access,
                      calibrate_noise, run_experiment, sweep)
from .images import ImageGray, error_metric, load_pgm, save_pgm
from .lfsr import LfsrSpec, LfsrState, lfsr_next
from .memory import (MemoryInstance, MemoryKind, NoiseModel, mem_read,
                     mem_stats, mem_write)
from .rng import RandomSource, SeedSpec, derive_generator
from .synth import gen_test_inputs

__version__ = "0.1.0"
