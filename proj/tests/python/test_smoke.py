from fractions import Fraction
from pathlib import Path

import pytest

import transfinite as tf

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def test_ordinals_order():
    assert tf.Ordinal("w") < tf.Ordinal("w+1") < tf.Ordinal("w^2")
    assert tf.Ordinal("w*2").is_limit
    assert str(tf.Ordinal.omega_power(2, 3)) == "w^2*3"


def test_limit_point_ranks():
    sp = tf.Space("w+1", 4)
    t = tf.Topology(sp)
    f = tf.StepFn(sp, "(stepfn (piece 1 (set (and (eq 1 1) (eq 0 0)))) (piece 0 (set (eq 1 0))))")
    assert f("w") == 1 and f(3) == 0
    assert f.values == [Fraction(0), Fraction(1)]
    assert str(tf.alpha_fn(f, t).value) == "2"
    r = tf.beta(f, t)
    assert str(r.value) == "2"
    assert [str(i) for i, _ in r.stages] == ["0", "1", "2"]


def test_decomposition_sums_back():
    fx = tf.Fixture.load(str(FIXTURES / "tails.fx"))
    g = fx.fn("g")
    fam, certs = tf.decompose(g, fx.topology)
    assert "non-negative" in certs
    for x in ["0", "1", "4", "w", "w+3", "w*5+2"]:
        assert tf.altsum(fam, x) == g(x)


def test_phi_generate_on_tails():
    sp = tf.Space("w^2", 4)
    tails = tf.Family.tails(sp)
    gamma, checks = tf.phi_generate(tails.even_difference_union(), tails, 1, tf.Topology(sp))
    assert gamma == "2"
    assert checks


def test_errors_carry_kind():
    with pytest.raises(tf.TransfiniteError) as e:
        tf.Fixture.parse("(def a (set (all)))")
    assert e.value.kind == "ParseError"
    sp = tf.Space("w+1", 4)
    with pytest.raises(tf.TransfiniteError) as e:
        tf.StepFn(sp, "(stepfn (piece 1 (set (eq 0 0))))")
    assert "PartitionViolation" in str(e.value)


def test_fixture_round_trip():
    fx = tf.Fixture.load(str(FIXTURES / "limit_point.fx"))
    assert tf.Fixture.parse(fx.print()).print() == fx.print()
    assert "f" in fx.names


def test_suite_runs():
    assert "baire1-rank" in tf.suite_names()
    checks = tf.run_suite("baire1-rank")
    assert checks and all(passed for _, _, passed, _ in checks)
