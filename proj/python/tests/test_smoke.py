import pytest

import hlf


def test_valuation_example():
    f = hlf.Field.parse("Qp(3){{t}}")
    x = hlf.Element.parse(f, "3*t^-7 + t^2")
    assert x.rank_valuation(2) == [2, 0]
    assert hlf.run_task("valuation", field=str(f), elem="3*t^-7 + t^2", rank=2)["valuation"] == [2, 0]


def test_arithmetic_and_section():
    f = hlf.Field.parse("Fq(5)((u))((t))")
    x = hlf.Element.parse(f, "u + t")
    y = hlf.Element.parse(f, "u - t")
    assert x * y == hlf.Element.parse(f, "u^2 - t^2")
    assert (x * y).valuation() == [2, 0]
    ybar = hlf.Element.parse(f.residue, "u^-3 + 2")
    assert hlf.lift_h(f, ybar).residue() == ybar


def test_convergence_verdicts():
    higher = hlf.run_task("converge", seq="t^(-1)*u^(n)", limit="0", topology="higher")
    valuation = hlf.run_task("converge", seq="t^(-1)*u^(n)", limit="0", topology="valuation")
    assert higher["verdict"] == "CONVERGES"
    assert valuation["verdict"] == "DIVERGES"
    assert valuation["witness_verified"]


def test_errors_raise():
    f = hlf.Field.parse("Fq(5)((u))((t))")
    with pytest.raises(hlf.HlfError, match="SYNTAX_ERROR"):
        hlf.Element.parse(f, "u^(")
    with pytest.raises(hlf.HlfError, match="INVALID_INPUT"):
        hlf.run_task("no-such-kind")


def test_check_suite_deterministic():
    a = hlf.check("weil", seed=7, battery=20)
    b = hlf.check("weil", seed=7, battery=20)
    assert a == b
    assert a["ok"]
