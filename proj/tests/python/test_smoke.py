import math

import pytest

import hyperwalk


def test_defaults_and_resolve():
    d = hyperwalk.defaults()
    assert d["backend"] == "free:2"
    resolved = hyperwalk.resolve_config(replicas=7)
    assert resolved["replicas"] == "7"


def test_bad_config_raises():
    with pytest.raises(hyperwalk.ConfigError):
        hyperwalk.resolve_config(replicas=1)
    with pytest.raises(hyperwalk.ConfigError):
        hyperwalk.resolve_config(no_such_key=3)


def test_tree_speed_near_oracle():
    rep = hyperwalk.estimate_speed(backend="free:2", p=1, replicas=50, horizon=500)
    assert rep["quantity"] == "speed"
    assert len(rep["values"]) == 50
    assert abs(rep["estimate"] - hyperwalk.oracles.tree_srw_speed(3)) < 6 * rep["stderr"] + 0.01


def test_entropy_small():
    rep = hyperwalk.estimate_entropy(backend="free:2", p=1, replicas=10, entropy_steps=8)
    assert math.isfinite(rep["estimate"])
    assert 0.3 < rep["estimate"] < 1.1


def test_deterministic():
    a = hyperwalk.estimate_speed(p=0.9, replicas=10, horizon=100, seed=5)
    b = hyperwalk.estimate_speed(p=0.9, replicas=10, horizon=100, seed=5)
    assert a == b


def test_stationarity_runs():
    rep = hyperwalk.stationarity_test(p=0.7, stationarity_replicas=500)
    assert 0.0 <= rep["p_value"] <= 1.0


def test_oracles():
    assert hyperwalk.oracles.tree_srw_speed(3) == pytest.approx(0.5)
    assert hyperwalk.oracles.tree_srw_entropy(3) == pytest.approx(0.5 * math.log(3), rel=1e-9)
    assert hyperwalk.oracles.fuchsian_edge_length(5, 4) > 0


def test_selftest_passes():
    gaps = hyperwalk.selftest()
    assert gaps and all(row["passed"] for row in gaps)
