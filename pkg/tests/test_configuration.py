import json
from fractions import Fraction

import pytest

from curlkit.utilities.auxiliary_functions import parse_params, parse_point, parse_rational
from curlkit.utilities.configuration import DEFAULT_SAMPLES, Configuration, SuiteSamples, Tolerances
from curlkit.utilities.errors import ConfigurationError


def test_defaults():
    config = Configuration()
    assert config.seed == 7
    assert config.samples is None
    assert config.flow_steps == 100
    assert config.tolerances.curved == 1e-9
    assert config.tolerances.flow_order == 3.8


def test_from_dict_keeps_unset_defaults():
    config = Configuration.from_dict({"seed": 3, "tolerances": {"curved": 1e-8}})
    assert config.seed == 3
    assert config.samples is None
    assert config.suite_samples == SuiteSamples()
    assert config.tolerances.curved == 1e-8
    assert config.tolerances.exact == 1e-12


@pytest.mark.parametrize("config", [{"seeds": 3}, {"tolerances": {"spread": 1e-8}}, {"suite_samples": {"torsion": 3}},
                                    {"suite_samples": {"stm": 0}}])
def test_invalid_keys_are_rejected(config):
    with pytest.raises(ConfigurationError):
        Configuration.from_dict(config)


def test_yaml_file(tmp_path):
    path = tmp_path / "curlkit.yaml"
    path.write_text("seed: 11\nsamples: 4\ntolerances:\n  stm: 1.0e-7\n", encoding="utf-8")
    config = Configuration.init_conf_with_config_file(path)
    assert (config.seed, config.samples, config.tolerances.stm) == (11, 4, 1e-7)


def test_json_file(tmp_path):
    path = tmp_path / "curlkit.json"
    path.write_text(json.dumps({"flow_time": 0.2, "verbose": True}), encoding="utf-8")
    config = Configuration.init_conf_with_config_file(path)
    assert config.flow_time == 0.2
    assert config.verbose


def test_file_without_mapping(tmp_path):
    path = tmp_path / "curlkit.yaml"
    path.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        Configuration.init_conf_with_config_file(path)


def test_overrides_return_a_copy():
    config = Configuration()
    updated = config.with_overrides(seed=5, samples=None, tolerances={"cocycle": 1e-6})
    assert updated.seed == 5
    assert updated.samples == config.samples
    assert updated.tolerances.cocycle == 1e-6
    assert updated.tolerances.exact == config.tolerances.exact
    assert config.seed == 7
    assert config.tolerances.cocycle == 1e-8
    with pytest.raises(ConfigurationError):
        config.with_overrides(colour="red")


def test_to_dict_reads_back():
    config = Configuration(seed=2, samples=9, tolerances=Tolerances(curved=1e-7))
    assert Configuration.from_dict(config.to_dict()).to_dict() == config.to_dict()


def test_parse_rational():
    assert parse_rational("1/2") == Fraction(1, 2)
    assert parse_rational(" -3 ") == -3
    assert parse_rational(0.25) == Fraction(1, 4)
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("half")


def test_parse_params_and_points():
    assert parse_params("a=2, b=3.5") == {"a": 2.0, "b": 3.5}
    assert parse_params(None) == {}
    assert parse_params("") == {}
    with pytest.raises(ValueError):
        parse_params("a:2")
    assert parse_point("0.1,-2,3e-1") == [0.1, -2.0, 0.3]
    with pytest.raises(ValueError):
        parse_point("0.1,y")


def test_per_suite_sample_counts():
    config = Configuration()
    assert [config.samples_for(name) for name in ("poisson", "killing", "projective", "curl-examples",
                                                  "laplace-441", "subsymbol-welldef", "cocycle", "stm")] \
        == [100, 100, 50, 50, 50, 50, 20, 50]
    assert config.samples_for("eval") == DEFAULT_SAMPLES
    assert config.with_overrides(samples=4).samples_for("poisson") == 4


def test_suite_samples_from_file(tmp_path):
    path = tmp_path / "curlkit.yaml"
    path.write_text("suite_samples:\n  laplace-441: 7\n  cocycle: 5\n", encoding="utf-8")
    config = Configuration.init_conf_with_config_file(path)
    assert (config.samples_for("laplace-441"), config.samples_for("cocycle"), config.samples_for("stm")) == (7, 5, 50)
    updated = config.with_overrides(suite_samples={"stm": 9})
    assert (updated.samples_for("stm"), updated.samples_for("cocycle")) == (9, 5)
