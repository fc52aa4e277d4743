# Copyright 2026 The rnspim Authors
# SPDX-License-Identifier: Apache-2.0
"""RNS polynomial arithmetic, negacyclic NTT, BGV multiplication and a
PIM cost model."""

from ._core import (
    CapacityError,
    ConfigError,
    DomainError,
    ExecutionError,
    ExhaustionError,
    ParseError,
    PlanningError,
    ResidueModulus,
    RnsBase,
    TwiddleTable,
    barrett_reduce,
    bgv_multiply,
    build_base,
    build_twiddles,
    capacity,
    decode_image,
    default_coefficient_bits,
    encode_image,
    execute_image,
    find_ntt_prime,
    hex_dump,
    is_prime,
    mod_mul,
    negacyclic_mul,
    ntt_forward,
    ntt_inverse,
    simulate,
    verify,
)

__version__ = "0.1.0"
