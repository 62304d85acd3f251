"""Smoke tests for the compiled extension module."""

import json

import pytest

import dagreserve as dr

GRAPH = {
    "nodes": [
        {"id": 1, "type": "subjob", "exec": 3.0},
        {"id": 2, "type": "subjob", "exec": 1.0},
        {"id": 3, "type": "subjob", "exec": 2.0},
        {"id": 4, "type": "subjob", "exec": 1.0},
        {"id": 5, "type": "subjob", "exec": 2.0},
        {"id": 6, "type": "subjob", "exec": 5.0},
        {"id": 7, "type": "subjob", "exec": 3.0},
        {"id": 8, "type": "condition",
         "branches": [{"p": 0.7, "target": 4}, {"p": 0.3, "target": 3}]},
        {"id": 9, "type": "condition",
         "branches": [{"p": 0.6, "target": 6}, {"p": 0.4, "target": 5}]},
    ],
    "edges": [[1, 2], [1, 8], [2, 3], [2, 9], [3, 9], [4, 9], [5, 7], [6, 7]],
}

TASKSET = {
    "tasks": [
        {
            "name": "fig",
            "dag": GRAPH,
            "deadline": 25.0,
            "period": 25.0,
            "tardiness_bound": 2.0,
            "constraints": [{"k": 2, "theta": 0.05}],
            "omega": 3,
        }
    ]
}


@pytest.fixture
def dag():
    return dr.parse_graph(json.dumps(GRAPH))


@pytest.fixture
def task():
    return dr.parse_taskset(json.dumps(TASKSET))[0]


def test_validate_and_enumerate(dag):
    assert dr.validate(dag) == []
    rs = dr.enumerate_realizations(dag)
    assert [round(r.probability, 12) for r in rs] == [0.42, 0.28, 0.18, 0.12]
    assert [r.volume for r in rs] == [13.0, 10.0, 14.0, 11.0]
    assert rs[0].length == 12.0
    assert rs[2].length == 14.0  # heaviest chain of the 0.18 instance


def test_joint_cdf(dag):
    d = dr.from_realizations(dr.enumerate_realizations(dag))
    assert abs(dr.joint_cdf(d, 13.0, 12.0) - 0.82) < 1e-12
    assert abs(dr.joint_cdf(d, 10.0, 9.0) - 0.28) < 1e-12
    assert dr.joint_cdf(d, -1.0, -1.0) == 0.0


def test_sbf_identity():
    cfg = dr.ReservationConfig(m=2, budget=3.0, period=5.0)
    assert dr.sbf(cfg, 4.0) == 0.0
    assert dr.sbf(cfg, 7.0) == 6.0
    for workload in (0.5, 6.0, 11.25, 40.0):
        assert abs(dr.sbf(cfg, dr.inverse_sbf(cfg, workload)) - workload) < 1e-9
    assert dr.response_time_bound(cfg, 13.0, 12.0, 0.0) == 24.5


def test_analyze(task):
    cfg = dr.ReservationConfig(m=2, budget=3.0, period=5.0)
    rep = dr.analyze(task, cfg)
    assert abs(rep.p_miss_hot - 0.60) < 1e-12
    assert abs(rep.p_miss_cold - 0.18) < 1e-12
    assert rep.stable
    passed, verdicts = dr.check_constraints(task, rep)
    assert not passed  # tight bound 0.108 > theta 0.05
    assert verdicts[0].k == 2


def test_optimize_and_select(task):
    menu = dr.optimize_task(task)
    assert menu
    pick = menu[dr.select_config(menu)]
    assert pick.m == 1
    assert abs(pick.budget - 20.0) < 1e-3
    rep = dr.analyze(task, pick.config())
    assert dr.check_constraints(task, rep, use_tight=False)[0]


def test_simulate_deterministic(task):
    cfg = dr.ReservationConfig(m=2, budget=3.0, period=5.0)
    a = dr.simulate(task, cfg, jobs=500, seed=42, check_lemma=True)
    b = dr.simulate(task, cfg, jobs=500, seed=42, check_lemma=True)
    assert a.miss_count == b.miss_count == 0
    assert a.dominance_violations == 0
    assert a.work_conserving
    assert a.lemma_holds() is True
    assert [j.response for j in a.jobs] == [j.response for j in b.jobs]
    assert [j.atom for j in a.jobs] == [j.atom for j in b.jobs]


def test_parse_errors():
    with pytest.raises(ValueError):
        dr.parse_graph('{"nodes":[],"edges":[],"bogus":1}')
