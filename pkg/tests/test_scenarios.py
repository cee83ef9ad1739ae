import pathlib

import pytest

from seplift.heap import heap
from seplift.hoare import (
    Call,
    Consequence,
    IfCmd,
    LetRead,
    SeqCmd,
    SeqRule,
    Skip,
    Write,
    check_proof,
    conclusion,
    exec_command,
    two_validity_test,
)
from seplift.relations import GenRel
from seplift.scenarios import (
    DEMO_NAMES,
    build_annotated_proof,
    demo,
    counter_scenario,
    goodbad_scenario,
    parse_command,
    parse_proof_lines,
    parse_scenario,
)
from seplift.syntax import ParseError, parse

SCENARIO_DIR = pathlib.Path(__file__).resolve().parent.parent / "scenarios"


def test_parse_command_shapes():
    assert parse_command("skip") == Skip()
    assert parse_command("init; inc") == SeqCmd(Call("init"), Call("inc"))
    cmd = parse_command("let y=[1] in [1] := -y")
    assert isinstance(cmd, LetRead) and isinstance(cmd.body, Write)
    grouped = parse_command("let y=[1] in { [1] := y; [2] := y }")
    assert isinstance(grouped.body, SeqCmd)
    branch = parse_command("if x = 0 { skip } else { [1] := 0 }")
    assert isinstance(branch, IfCmd)
    with pytest.raises(ParseError):
        parse_command("let y=[1]")


def test_annotated_proof_straight_line():
    scenario, _, _ = counter_scenario()
    derivation = scenario.derivation()
    pre, _, post = conclusion(derivation)
    assert pre == parse("1|->_")
    assert post == parse("1|->_")


def test_annotated_proof_consequence_wrapping():
    good, _, _, _ = goodbad_scenario()
    derivation = good.derivation()
    # the reassertion between init and fin lands as a consequence node
    assert isinstance(derivation, SeqRule)
    assert isinstance(derivation.second, Consequence)


def test_annotated_proof_errors():
    scenario, _, _ = counter_scenario()
    with pytest.raises(ValueError):
        build_annotated_proof(
            scenario.gamma,
            parse_proof_lines(["init", "{a}"], scenario.avars),
        )
    with pytest.raises(ValueError):
        build_annotated_proof(
            scenario.gamma,
            parse_proof_lines(["{1|->_}", "init", "{b}"], scenario.avars),
        )


def test_scenario_files_round_trip():
    counter_text = (SCENARIO_DIR / "counter.scn").read_text()
    scenario = parse_scenario(counter_text)
    assert {t.name for t in scenario.gamma} == {"init", "inc", "nxt", "dec", "fin"}
    assert scenario.coupling["a"].arity == 2
    budget_values = (-1, 0, 1)
    from seplift.semantics import SearchBudget, ValueDomain

    verdict = two_validity_test(
        scenario.gamma,
        scenario.modules(),
        scenario.rho(),
        scenario.eta,
        scenario.pre,
        scenario.client,
        scenario.post,
        SearchBudget(max_loc=3, values=budget_values),
        ValueDomain(values=(-2, -1, 0, 1, 2), locations=(1, 2, 3)),
    )
    assert verdict.ok
    proof = check_proof(scenario.gamma, scenario.derivation())
    assert proof.accepted


def test_scenario_files_goodbad():
    bad = parse_scenario((SCENARIO_DIR / "goodbad_bad.scn").read_text())
    assert not check_proof(bad.gamma, bad.derivation()).accepted
    good = parse_scenario((SCENARIO_DIR / "goodbad_good.scn").read_text())
    assert check_proof(good.gamma, good.derivation()).accepted


def test_demo_counter_report():
    report = demo("counter")
    assert report.ok
    assert report.proof_verdicts["client"].accepted
    assert report.validity_verdicts["client"].ok


def test_demo_goodbad_report():
    report = demo("goodbad")
    assert report.ok
    assert report.proof_verdicts["good"].accepted
    assert not report.proof_verdicts["bad"].accepted
    assert report.validity_verdicts["good"].ok
    assert not report.validity_verdicts["bad"].ok
    violation = report.validity_verdicts["bad"].violation
    assert violation.outputs[0] == heap((1, 1))
    assert violation.outputs[1] == heap((1, 2))


def test_demo_unknown_name():
    with pytest.raises(ValueError) as exc:
        demo("nothere")
    for name in DEMO_NAMES:
        assert name in str(exc.value)
