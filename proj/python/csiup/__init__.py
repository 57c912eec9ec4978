# SPDX-License-Identifier: Apache-2.0
"""Downlink CSI upsampling: DFT-domain transforms, masked anti-aliasing and ISTA recovery."""

import json as _json

from ._core import (  # noqa: F401
    DatasetError,
    PilotPattern,
    SystemConfig,
    ad_forward,
    ad_inverse,
    add_estimation_noise,
    aliasing_fold,
    bd_forward,
    bd_inverse,
    build_oracle_mask,
    build_ul_mask,
    circular_shift_augment,
    cluster,
    linear_interp,
    masked_upsample,
    nmse_db,
    nonuniform_pattern,
    pattern_from_indices,
    read_dataset,
    rms_delay_spread_s,
    sample,
    sensing_adjoint,
    sensing_apply,
    synth_channel_pair,
    synth_dataset,
    uniform_pattern,
    write_dataset,
    zero_insert,
)
from ._core import ista_solve as _ista_solve
from ._core import run_benchmark as _run_benchmark

__version__ = "0.1.0"


def ista_solve(y, pattern, **kwargs):
    """Run the fixed-phase solver. Returns (h_hat, trace) with trace a dict."""
    h_hat, trace = _ista_solve(y, pattern, **kwargs)
    return h_hat, _json.loads(trace)


def run_benchmark(cfg, pairs, methods, **kwargs):
    """Score `methods` (comma list, CLI syntax) on (dl, ul, seed) tuples. Returns the report dict."""
    return _json.loads(_run_benchmark(cfg, pairs, methods, **kwargs))
