# SPDX-License-Identifier: Apache-2.0
import math

import pytest

import parint


def test_schedule_example():
    s = parint.schedule(1024, r=2, d1=1, d2=1)
    assert (s["m"], s["m_tilde"], s["l"]) == (6, 6, 9)
    first = s["levels"][0]
    assert first["n1"] == 129
    assert first["n2"] == 64
    assert first["repetitions"] == 89
    assert s["mode"] == "amplitude"
    assert parint.schedule(1024, mc=True)["mode"] == "classical"


def test_run_charges_the_schedule_total():
    res = parint.run("power", 256, seed=3)
    assert res["metadata"]["total"] == parint.schedule(256)["total"]
    assert res["sup_error"] > 0.0
    assert res["approximation"]["k"] == parint.schedule(256)["l"]
    again = parint.run("power", 256, seed=3)
    assert again["approximation"]["coefficients"] == res["approximation"]["coefficients"]


def test_deterministic_baseline_on_a_constant():
    det = parint.deterministic("const", 1000)
    assert det["queries"] == 289
    assert det["sup_error"] < 1e-14


def test_sweep_and_fit():
    records, failures = parint.sweep([64, 256, 1024, 4096], algorithms=["det"])
    assert failures == []
    assert [r["n"] for r in records] == [64, 256, 1024, 4096]
    fit = parint.fit_slope(records)
    assert fit["points"] == 4
    assert fit["slope"] < 0.0


def test_partial_failures_are_reported():
    records, failures = parint.sweep([4, 1024], algorithms=["det"])
    assert len(records) == 1
    assert failures[0]["n"] == 4


def test_helpers_and_errors():
    assert parint.rho(16, 7, 8) == pytest.approx(4 + math.sqrt(63))
    assert parint.qae_error_bound(64, 0.5) == pytest.approx(math.pi / 64 + math.pi**2 / 64**2)
    assert "lacunary" in parint.test_functions()
    with pytest.raises(ValueError):
        parint.schedule(2)
    with pytest.raises(ValueError):
        parint.run("nope", 256)
