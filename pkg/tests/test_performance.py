import pandas as pd

from curlkit.utilities.configuration import Configuration
from curlkit.utilities.performance_handling import Performance


class _Worker:
    @Performance.track("geometry_id")
    def evaluate(self, geometry_id, loud=False):
        if loud:
            print(f"evaluating {geometry_id}")
        return geometry_id.upper()


def test_track_records_named_steps():
    worker = _Worker()
    assert worker.evaluate(geometry_id="s3-round") == "S3-ROUND"
    assert worker.evaluate("ellipsoid-3d") == "ELLIPSOID-3D"
    perf = Performance()
    assert perf.perf["name"].tolist() == ["evaluate for s3-round", "evaluate"]
    assert perf.count == 2


def test_prints_inside_tracked_steps_go_to_stderr(capsys):
    _Worker().evaluate(geometry_id="stm-flat", loud=True)
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "evaluating stm-flat" in captured.err


def test_singleton_is_reset():
    first = Performance()
    second = Performance.set_up_performance(Configuration())
    assert first is not second
    assert Performance() is second


def test_finish_and_save(tmp_path):
    path = tmp_path / "timings.csv"
    perf = Performance.set_up_performance_with_path(str(path))
    _Worker().evaluate(geometry_id="darboux-flat")
    perf.finish_and_save()
    timings = pd.read_csv(path, sep=";", decimal=",")
    assert timings["name"].tolist() == ["evaluate for darboux-flat", "total"]
    assert (timings["duration"] >= 0).all()
