import math

import pytest

import rminmax


def test_distortion_constants():
    assert rminmax.zeta(1.0, 0.0) == 1.0
    assert rminmax.zeta(1.0, -1.0) == pytest.approx(1.0 / math.tanh(1.0), rel=1e-12)
    assert rminmax.delta(0.5, 1.0) == pytest.approx(0.5 / math.tan(0.5), rel=1e-12)
    with pytest.raises(rminmax.GeometryError):
        rminmax.zeta(-1.0, -1.0)
    with pytest.raises(rminmax.GeometryError):
        rminmax.delta(3.15, 1.0)


def test_solve_minimization():
    res = rminmax.solve(
        "problem.name = quadratic\n"
        "problem.dim = 3\n"
        "problem.kappa = 20\n"
        "problem.seed = 4\n"
        "solver.name = prgd\n"
        "solver.epsilon = 1e-9\n"
    )
    assert res["problem"] == "quadratic"
    assert res["solver"] == "prgd"
    assert res["gap"] <= 1e-8
    assert len(res["x"]) == 3
    assert res["y"] == []
    assert res["csv"].startswith("iter,grad_calls,proj_calls,value")
    assert "certificate" in res["summary"]


def test_solve_minmax():
    res = rminmax.solve(
        "problem.name = bilinear\n"
        "problem.dim_x = 2\n"
        "problem.dim_y = 2\n"
        "problem.a = 1.0\n"
        "problem.b = 1.0\n"
        "problem.coupling_scale = 0.3\n"
        "problem.seed = 2\n"
        "solver.name = rceg\n"
        "solver.T = 60\n"
    )
    assert len(res["x"]) == 2
    assert len(res["y"]) == 2
    assert res["gap"] <= 1e-2


def test_determinism():
    cfg = (
        "problem.name = quadratic\n"
        "problem.dim = 2\n"
        "problem.seed = 9\n"
        "solver.name = prgd\n"
        "solver.epsilon = 1e-8\n"
    )
    assert rminmax.solve(cfg)["csv"] == rminmax.solve(cfg)["csv"]


def test_config_error():
    with pytest.raises(rminmax.ConfigError):
        rminmax.solve("problem.name = mystery\nsolver.name = prgd\nsolver.epsilon = 1e-6\n")


def test_geometry_checks():
    res = rminmax.check("geometry")
    assert res["pass"], res["report"]
    assert "PASS" in res["report"]
