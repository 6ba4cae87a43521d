from polariton_beats.lab.acceptance import CHECKS, verify
import json
import os
import pytest


FAST_CHECKS = [name for name in CHECKS if name != "scaling_law"]


@pytest.mark.parametrize("name", FAST_CHECKS)
def test_check_passes(name):
    result = CHECKS[name]()
    assert result.passed, result


def test_verify_rejects_unknown_check(tmp_path):
    with pytest.raises(KeyError):
        verify(str(tmp_path), names=["nothing"])


def test_verify_writes_report(tmp_path):
    results = verify(str(tmp_path), names=["approximate_count_identity"])
    assert [r.name for r in results] == ["approximate_count_identity"]
    with open(os.path.join(str(tmp_path), "verify.json")) as report_file:
        assert json.load(report_file)["passed"]


def test_model_agreement_reports_gap_per_window():
    result = CHECKS["model_agreement"]()
    gaps = result.detail["gap_up_to"]
    assert list(gaps) == ["500", "800", "1000", "1200", "2000", "3000"]
    assert gaps["500"] < gaps["3000"]
    assert result.detail["early_gap"] == gaps["800"] < 0.05
    assert result.detail["pf_alpha_fit"] == pytest.approx(
        result.detail["dm_alpha_fit"], rel=0.1)
