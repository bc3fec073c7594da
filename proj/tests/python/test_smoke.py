import json
import math

import pytest

import sosround as sr


def test_parse_and_reduce():
    g = sr.parse_graph("p edge 3 3\ne 1 2\ne 2 3\ne 1 3")
    assert g.n == 3
    assert g.edges == [(1, 2), (1, 3), (2, 3)]
    f = sr.parse_cnf("p cnf 2 1\n1 2 0")
    assert f.clauses == [(1, 2)]
    assert sorted(sr.reduce_2cnf(f).arcs) == [(-2, 1), (-1, 2)]
    assert len(sr.reduce_uncut(g).arcs) == 12
    with pytest.raises(ValueError):
        sr.parse_graph("p edge 2 1\ne 1 1")


def test_conditioning_matches_distribution():
    pe = sr.PseudoExpectation.of_points(2, [[1, 1], [1, 1], [1, -1], [-1, -1]])
    assert pe.mean(1) == pytest.approx(0.5)
    cond = sr.condition(pe, 1, 1)
    assert cond.mean(2) == pytest.approx(1.0 / 3.0)
    lhs, rhs = sr.step_gain_identity(pe, 1, 2)
    assert lhs == pytest.approx(rhs)
    with pytest.raises(ArithmeticError):
        sr.condition(sr.PseudoExpectation.of_points(1, [[1]]), 1, -1)


def test_hollowize_copied_bit():
    pe = sr.PseudoExpectation.of_points(8, [[1] * 8, [-1] * 8])
    out, steps = sr.hollowize(pe, 0.1, 0.1, 200)
    assert len(steps) == 1
    assert steps[0][3] == pytest.approx(8.0)
    assert all(abs(out.mean(i)) == pytest.approx(1.0) for i in range(1, 9))
    text = out.serialize()
    assert sr.PseudoExpectation.deserialize(text).mean(3) == out.mean(3)


def test_oracles():
    assert sr.exact_vc(sr.gen.complete(3))[0] == 2
    assert sr.exact_uncut(sr.gen.cycle(4))[0] == 0
    assert sr.exact_bs(sr.gen.two_k4_bridge())[0] == 1
    phi, witness = sr.exact_usc(sr.gen.cycle(6))
    assert phi == pytest.approx(2.0 / 3.0)
    assert len(witness) == 6
    assert sr.compute_degree(8, 4.0, 10) == 4


@pytest.mark.parametrize("problem", ["vc", "bs", "usc", "uncut"])
def test_graph_pipelines(problem):
    g = sr.gen.cycle(6)
    rep = sr.solve(problem, g, sr.Params(oracle=True))
    assert rep.valid
    assert rep.oracle_opt is not None
    assert rep.obj_star <= rep.oracle_opt + 1e-3
    assert len(rep.assignment) == 6
    doc = json.loads(rep.to_json())
    assert doc["problem"] == problem


def test_formula_pipelines():
    f = sr.Formula(3, [(1, 2), (-1, 3), (-2, -3)])
    cache = sr.Cache()
    a = sr.solve("2cnfdel", f, sr.Params(oracle=True, seed=4), cache)
    b = sr.solve("sdc", f, sr.Params(oracle=True, seed=4), cache)
    assert a.valid and b.valid
    assert a.oracle_opt == 0
    assert b.objective == 2 * a.objective
    assert len(cache) > 0


def test_determinism():
    g = sr.gen.gnp(7, 0.5, 3)
    p = sr.Params(seed=9)
    assert sr.solve("usc", g, p).to_json(False) == sr.solve("usc", g, p).to_json(False)


def test_acceptance_subset():
    res = sr.run_acceptance("conditioning-identity")
    assert [r["id"] for r in res] == [1]
    assert res[0]["pass"]
    assert len(sr.acceptance_keys()) == 11
