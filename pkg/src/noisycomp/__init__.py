"""Finite-alphabet toolkit for noisy computation.

Exact probability and typicality, channel products of functions with noisy
kernels, typical-input capacity, constructive block codes with verified
error/mass guarantees, the encoder/noisy-device/decoder pipeline, and noisy
boolean circuits.
"""

from .probability import (Dist, JointTable, cond_entropy, entropy,
                          info_density, joint_entropy, mutual_info)
from .sources import (ENUMERATION_CAP, Source, TypicalSet, cond_typical_set,
                      extend, is_typical, sample, typical_set)
from .channels import (BlockFn, BlockKernel, Hookup, MemorylessKernel,
                       NoisyComputation, ProductHookup, and_pairs, bsc,
                       cascade, deterministic, hookup, identity_fn,
                       lift_finite_fn, memoryless, or_pairs, per_symbol_fn,
                       product, unpad, xor_pairs)
from .capacity import (CapacityOptions, CapacityReport, RateReport, capacity,
                       channel_capacity, compare_noisy_input,
                       typical_input_rate, typical_input_rate_n)
from .feinstein import (CodeEntry, FeinsteinCode, InputSet, MaximalityReport,
                        VerifyReport, code_from_json, code_to_json,
                        feinstein_rate_size, greedy_construct,
                        maximality_check, verify)
from .reliable import (Codec, ErrorEstimate, ReliableInstance, build_codec,
                       is_compatible, rate_sweep, simulate, wilson_interval)
from .circuits import (BlowupReport, CircuitSpec, Gate, blowup,
                       circuit_from_json, circuit_to_json, circuit_to_kernel,
                       design_error_channel, majority3)
from .errors import (BlockOverflowError, CapacityExceededError, DomainError,
                     EnumerationLimitError, ValidationError)

__version__ = "0.1.0"
