import math

import pytest

import gwdrought as g


def test_months_and_accumulate():
    assert g.months_between("2012-04", "2016-12") == 56
    acc = g.accumulate([10.0, 20.0, 30.0, 40.0], 3)
    assert math.isnan(acc[0]) and math.isnan(acc[1])
    assert acc[2:] == [60.0, 90.0]


def test_standardize_and_climatology():
    z = g.standardize([-1.0, 1.0])
    assert z[1] == pytest.approx(0.7071067811865476, rel=1e-14)
    anom = g.climatology_anomaly("2000-01", [5.0] + [0.0] * 11 + [7.0] + [0.0] * 11, "2000-01:2001-12")
    assert anom[0] == pytest.approx(-1.0)
    assert anom[12] == pytest.approx(1.0)


def test_correlation():
    assert g.pearson_r([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8, rel=1e-14)
    assert g.corr_p_value(0.8, 4) == pytest.approx(0.2, abs=1e-12)
    x = g.gen_ar1(180, 0.5, 1.0, 1)
    y = g.gen_ar1(180, 0.5, 1.0, 2)
    assert len(g.expanding_median_r(x, y, 60)["window_r"]) == 121
    with pytest.raises(g.Error):
        g.pearson_r([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])


def test_optimal_period_recovers_lag():
    precip = g.gen_precip("2000-01", 24 + 179, 5)
    target = g.gen_lagged_target(precip["start"], precip["values"], 7)
    res = g.optimal_period("2002-01", target["values"][24:], precip["start"], precip["values"], K=24)
    assert res["k_star"] == 7
    assert len(res["profile"]) == 24
    with pytest.raises(g.InsufficientData):
        g.optimal_period("2002-01", target["values"][24:], precip["start"], precip["values"], K=40)


def test_drought():
    assert g.fill_gaps_linear([0.0, float("nan"), float("nan"), 6.0]) == [0.0, 2.0, 4.0, 6.0]
    events = g.detect_events("2002-01", [1.0, -1.0, -2.0, -1.0, 1.0, -1.0, -1.0, -1.0])
    assert [(e["start"], e["end"], e["duration"], e["persistent"]) for e in events] == [
        ("2002-02", "2002-04", 3, False),
        ("2002-06", "2002-08", 3, True),
    ]
    vals = [50.0] * 36 + [0.0] * 108 + [25.0] * 36
    assert g.period_change("2002-01", vals, "2002-01:2004-12", "2014-01:2016-12") == pytest.approx(-50.0)


def test_attribution():
    y = [3.1, 4.0, 2.2, 5.9, 6.1, 4.4, 7.3, 8.0, 5.5, 9.1]
    x1 = [1, 2, 1.5, 3, 3.2, 2.1, 4, 4.4, 2.9, 5.0]
    x2 = [0.5, -0.2, 0.1, 0.9, -0.4, 0.3, 0.2, -0.1, 0.6, 0.0]
    shares = g.lmg_shares(y, [x1, x2])
    assert sum(shares) == pytest.approx(g.ols_r2(y, [x1, x2], [0, 1]), abs=1e-12)
    ri = g.bootstrap_ri(y, [x1, x2], ["PPT", "NDVI"], runs=200, seed=3)
    again = g.bootstrap_ri(y, [x1, x2], ["PPT", "NDVI"], runs=200, seed=3)
    assert ri == again
    for p in ri["predictors"]:
        assert p["ci_low"] <= p["share"] <= p["ci_high"]


def test_seasonal_mean():
    vals = [0.0] * 5 + [0.2, 0.4, 0.6, 0.8] + [0.0] * 3
    out = g.seasonal_mean("2003-01", vals, "kharif")
    assert out["years"] == [2003]
    assert out["values"][0] == pytest.approx(0.5)


def test_oracle_suite_passes():
    checks = g.oracle_suite(cases=20)
    assert {c["op"] for c in checks} >= {"accumulate", "pearson_r", "detect_events", "lmg_shares"}
    assert all(c["passed"] for c in checks)
