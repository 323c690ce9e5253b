import pytest

from balancing.config import ConfigError, RunConfig


def test_defaults_validate():
    cfg = RunConfig().validate()
    assert cfg.curve == (-1, -30, 81)
    assert cfg.slope_convention == "consistent"


def test_ini_round_trip(tmp_path):
    cfg = RunConfig(precision=80, max_bound=12, slope_convention="published", threads=2)
    path = tmp_path / "run.ini"
    path.write_text(cfg.to_ini())
    assert RunConfig.from_file(path).to_dict() == cfg.to_dict()


def test_partial_file(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text("[constants]\nc4 = 7e161\n[oracle]\nv_max = 500\n")
    cfg = RunConfig.from_file(path)
    assert cfg.c4 == "7e161" and cfg.oracle_v_max == 500 and cfg.precision == 120


@pytest.mark.parametrize("text", [
    "[nope]\na = 1\n",
    "[curve]\na1 = 3\n",
    "[curve]\na2 = x\n",
    "[generators]\np1 = 3\n",
    "[generators]\np1 = 3, y\n",
    "[constants]\nslope = other\n",
    "[precision]\nheights = 5\n",
    "[oracle]\nv_min = 10\nv_max = 1\n",
    "[run]\nformat = xml\n",
    "[run]\nthreads = 0\n",
    "[run]\nmax_bound = 0\n",
    "[constants]\nc4 = big\n",
    "not an ini file",
])
def test_bad_files(tmp_path, text):
    path = tmp_path / "bad.ini"
    path.write_text(text)
    with pytest.raises(ConfigError):
        RunConfig.from_file(path)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        RunConfig.from_file(tmp_path / "absent.ini")
