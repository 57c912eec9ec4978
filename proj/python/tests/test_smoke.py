# SPDX-License-Identifier: Apache-2.0
import math

import numpy as np
import pytest

import csiup


def unitary_dft(n, sign):
    k = np.arange(n)
    return np.exp(sign * 2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)


def test_transforms_match_dense_dft():
    rng = np.random.default_rng(0)
    h = rng.standard_normal((4, 24)) + 1j * rng.standard_normal((4, 24))
    expected = unitary_dft(4, -1) @ h @ unitary_dft(24, +1)
    np.testing.assert_allclose(csiup.bd_forward(h), expected, atol=1e-12)
    np.testing.assert_allclose(csiup.bd_inverse(csiup.bd_forward(h)), h, atol=1e-12)
    np.testing.assert_allclose(csiup.ad_inverse(csiup.ad_forward(h)), h, atol=1e-12)


def test_fold_identity():
    cfg = csiup.SystemConfig(n_ant=2, n_sub=24, pilot_spacing=3)
    pat = csiup.uniform_pattern(cfg)
    assert pat.is_pure_uniform() and len(pat) == 8
    rng = np.random.default_rng(1)
    h = rng.standard_normal((2, 24)) + 1j * rng.standard_normal((2, 24))
    lhs = csiup.bd_forward(csiup.zero_insert(csiup.sample(h, pat), pat))
    rhs = csiup.aliasing_fold(csiup.bd_forward(h), 3)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_masked_upsample_recovers_aliased_path():
    cfg = csiup.SystemConfig(n_ant=1, n_sub=4, pilot_spacing=2)
    pat = csiup.uniform_pattern(cfg)
    h = csiup.bd_inverse(np.array([[0, 0, 0, 1]], dtype=complex))
    mask = csiup.build_oracle_mask(h)
    np.testing.assert_array_equal(mask, [[0, 0, 0, 1]])
    est = csiup.masked_upsample(csiup.sample(h, pat), pat, mask)
    np.testing.assert_allclose(est, h, atol=1e-15)


def test_ul_mask_threshold():
    h = csiup.bd_inverse(np.array([[2, 0, 0, 2]], dtype=complex))
    mask, threshold, degenerate = csiup.build_ul_mask(h, r_level=1.0)
    assert threshold == pytest.approx(math.sqrt(2))
    assert not degenerate
    np.testing.assert_array_equal(mask, [[1, 0, 0, 1]])


def test_ista_and_metrics():
    cfg = csiup.SystemConfig(n_ant=2, n_sub=32, pilot_spacing=4)
    dl, ul = csiup.synth_channel_pair(cfg, n_paths=4, rms_delay_spread_s=200e-9, seed=3)
    full = csiup.pattern_from_indices(32, list(range(32)))
    h_hat, trace = csiup.ista_solve(csiup.sample(dl, full), full, phases=200, theta0_rel=1e-3, decay=0.85, truth=dl)
    assert trace["phases_run"] == 200
    assert csiup.nmse_db(h_hat, dl) <= -100
    assert csiup.nmse_db(0.9 * dl, dl) == pytest.approx(-20)
    assert csiup.cluster(400e-9) == "CL1"
    assert csiup.cluster(500e-9) == "CL2"
    assert csiup.cluster(1500e-9) == "CL3"


def test_dataset_round_trip_and_bench(tmp_path):
    cfg = csiup.SystemConfig(n_ant=4, n_sub=48, pilot_spacing=4)
    pairs = csiup.synth_dataset(cfg, 6, seed=5, n_paths=4, rms_delay_spread_s=400e-9)
    path = tmp_path / "set.csid"
    csiup.write_dataset(path, cfg, pairs)
    cfg_back, back = csiup.read_dataset(path)
    assert cfg_back == cfg
    assert [p[2] for p in back] == [p[2] for p in pairs]
    np.testing.assert_allclose(back[0][0], pairs[0][0], atol=1e-6)

    report = csiup.run_benchmark(cfg_back, back, "interp,ulmask:R=1,ista_ra:K=10", virtual_start=10, virtual_len=8)
    assert set(report) == {"config", "pattern", "methods", "aggregation"}
    assert report["methods"]["interp"]["ALL"]["count"] == 6

    path.write_bytes(b"XXXX" + path.read_bytes()[4:])
    with pytest.raises(csiup.DatasetError):
        csiup.read_dataset(path)


def test_errors_become_value_errors():
    with pytest.raises(ValueError):
        csiup.aliasing_fold(np.zeros((1, 10), dtype=complex), 3)
    with pytest.raises(ValueError):
        csiup.run_benchmark(csiup.SystemConfig(1, 8, 2), [], "bogus")
