import io
import re

import pytest

from nichols_lift.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_INPUT, EXIT_PASS, run

from conftest import CONFIGS

QPLANE = str(CONFIGS / "qplane.cfg")


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), out=buf)
    return code, buf.getvalue()


def test_liftings_machine_report_is_deterministic():
    code1, out1 = call("liftings", QPLANE, "--format", "machine")
    code2, out2 = call("liftings", QPLANE, "--format", "machine")
    assert code1 == code2 == EXIT_PASS
    assert out1 == out2
    assert "lifting[3].lambda=lambda1=1, lambda2=1, lambda12=0" in out1
    assert out1.count("dimension=64") == 4
    assert out1.rstrip().endswith("verdict=pass")


def test_cold_and_warm_cache_agree(tmp_path):
    args = ["liftings", QPLANE, "--format", "machine", "--cache-dir", str(tmp_path)]
    cold = call(*args)
    assert any(tmp_path.iterdir())
    warm = call(*args)
    assert cold == warm


def test_verify_lifting_and_lambda_parsing():
    code, out = call("verify-lifting", QPLANE, "--lambda", "lambda1=z4,lambda2=1/2", "--format", "machine")
    assert code == EXIT_PASS
    assert "lambda=lambda1=z4, lambda2=1/2, lambda12=0" in out


def test_inadmissible_lambda_is_input_error():
    code, _ = call("verify-lifting", QPLANE, "--lambda", "lambda12=1")
    assert code == EXIT_INPUT
    code, _ = call("verify-lifting", QPLANE, "--lambda", "nope=1")
    assert code == EXIT_INPUT


def test_missing_file_is_input_error(tmp_path):
    code, _ = call("liftings", str(tmp_path / "missing.cfg"))
    assert code == EXIT_INPUT


def test_bad_expression_is_input_error(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text('[group]\ninvariant_factors = [2]\n[generators]\ng = [[1]]\nchi = [[1]]\n[relations]\nr = "x1 +"\n')
    code, _ = call("normal-words", str(cfg))
    assert code == EXIT_INPUT


def test_budget_exhaustion_exit_code(tmp_path):
    # only x1^2 = 0: the quotient is infinite, so no degree bound certifies it
    text = (CONFIGS / "qplane.cfg").read_text().replace('strata = [["x1^2", "x2^2", "x12"]]', 'strata = [["x1^2"]]')
    text = text.replace('lambda2 = "x2^2"\nlambda12 = "x12"\n', "")
    cfg = tmp_path / "open.cfg"
    cfg.write_text(text)
    code, _ = call("check-stratification", str(cfg))
    assert code == EXIT_BUDGET


def test_verification_failure_exit_code(tmp_path):
    text = (CONFIGS / "monomial-fuzz.cfg").read_text() + '\n[stratification]\nstrata = [["m1"]]\n'
    cfg = tmp_path / "strat.cfg"
    cfg.write_text(text)
    code, out = call("check-stratification", str(cfg), "--format", "machine")
    assert code == EXIT_FAIL
    # the witness is printed in the expression grammar
    witness = re.search(r"check.skew_primitive\[0\].m1.witness=(.*)", out).group(1)
    assert "(x)" in witness


def test_monomial_fuzz_oracle():
    code, out = call("normal-words", str(CONFIGS / "monomial-fuzz.cfg"), "--format", "machine")
    assert code == EXIT_PASS
    assert "check.monomial_oracle=pass" in out


def test_primitives_and_central_and_truncation():
    code, out = call("primitives", QPLANE, "--degree", "1", "--level", "0", "--format", "machine")
    assert code == EXIT_PASS and "dimension=2" in out
    code, out = call("central", QPLANE, "--element", "x1^2", "--format", "machine")
    assert code == EXIT_PASS
    code, out = call("truncation", QPLANE, "--element", "x1", "--level", "1", "--direct",
                     "--expect", "truncated_at", "--format", "machine")
    assert code == EXIT_PASS and "N=2" in out


def test_coaction_cocycle_good_module():
    code, out = call("coaction", QPLANE, "--element", "x1^2", "--level", "0", "--lambda", "lambda1=1")
    assert code == EXIT_PASS
    code, out = call("cocycle", QPLANE, "--h", "x1", "--k", "x1", "--lambda", "lambda1=3",
                     "--samples", "30", "--max-degree", "2", "--format", "machine")
    assert code == EXIT_PASS and "sigma(h,k)=3" in out
    code, out = call("good-module", QPLANE)
    assert code == EXIT_PASS


def test_human_format_has_timing():
    code, out = call("check-stratification", QPLANE)
    assert code == EXIT_PASS and "verdict: pass" in out and " s)" in out
