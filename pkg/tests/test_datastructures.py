import json
import math

import pytest

from curlkit.data_managers.datastructures import FlowSpec, VerificationReport, reports_to_frame, reports_to_table


def _report(residual=1e-12, tolerance=1e-9):
    return VerificationReport.build("killing", "killing-form-vanishing", 7, 10, residual, tolerance,
                                    [{"geometry": "darboux-flat"}], "0.1.0")


def test_pass_flag_is_derived():
    assert _report().passed
    assert _report(tolerance=1e-9, residual=1e-9).passed
    assert not _report(residual=1e-6).passed
    assert not _report(residual=math.inf).passed


def test_to_dict_uses_the_wire_keys():
    obj = _report().to_dict()
    assert set(obj) == {"suite", "theorem", "seed", "n_samples", "max_residual", "tolerance", "pass", "details",
                        "version"}
    assert obj["pass"] is True
    assert obj["details"] == [{"geometry": "darboux-flat"}]


def test_json_is_deterministic():
    assert _report().to_json() == _report().to_json()
    assert json.loads(_report(residual=1.0 / 3.0).to_json())["max_residual"] == float(f"{1.0 / 3.0:.12e}")


def test_infinite_residual_serializes():
    obj = json.loads(_report(residual=math.inf).to_json())
    assert obj["max_residual"] == "inf"
    assert obj["pass"] is False


def test_from_dict():
    report = VerificationReport.from_dict(_report(residual=2e-12).to_dict())
    assert report.suite == "killing"
    assert report.seed == 7
    assert report.max_residual == pytest.approx(2e-12)
    assert report.passed
    assert VerificationReport.from_dict(None) is None
    reports = VerificationReport.list_from_dict([_report().to_dict(), _report(residual=1.0).to_dict()])
    assert [r.passed for r in reports] == [True, False]


def test_frame_and_table():
    reports = [_report(), _report(residual=1.0)]
    frame = reports_to_frame(reports)
    assert list(frame.columns) == ["suite", "theorem", "n_samples", "max_residual", "tolerance", "pass"]
    assert frame["pass"].tolist() == [True, False]
    table = reports_to_table(reports)
    assert "killing-form-vanishing" in table
    assert table.count("\n") == 3


def test_flow_spec():
    spec = FlowSpec.from_dict({"hamiltonian": "z", "time": "0.5", "steps": 10})
    assert spec.ell == 1
    assert spec.step_size == pytest.approx(0.05)
    with pytest.raises(ValueError):
        FlowSpec("z", 0.5, 0)
