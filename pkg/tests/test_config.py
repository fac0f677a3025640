import pytest

from fhcurves.config import ConfigError, RunConfig, load_config, override, parse_config


def test_packaged_defaults_match_dataclass():
    cfg = load_config(None)
    assert cfg == RunConfig()
    assert cfg.S_map() == {1: 8, 2: 8, 3: 8}
    assert cfg.direction_table().V == 3


def test_parse_values_and_comments():
    cfg = parse_config("K = 2  # two curves\nS = 3, 4\narea_radii = 1, 2.5\ndirections = 0, pi\n")
    assert cfg.K == 2 and cfg.S_for(2) == 4
    assert cfg.area_radii == (1.0, 2.5)
    assert cfg.directions == ("0", "pi")


@pytest.mark.parametrize("text, fragment", [
    ("colour = red", "unknown key"),
    ("K = 1\nK = 2", "duplicate key"),
    ("K = three", "bad value"),
    ("K", "expected 'key = value'"),
    ("horizon = 0", "horizon must be positive"),
    ("density_n0 = 2000000", "below horizon"),
    ("interval_law = cubic", "interval_law"),
    ("K = 2\nS = 1, 2, 3", "S must be"),
    ("directions = 0, 0", "distinct"),
    ("ladder = 1:2", "ladder"),
    ("j_max = -3", "j_max"),
    ("grid_l_values = 0 4", "grid_l_values"),
])
def test_rejects(text, fragment):
    with pytest.raises(ConfigError, match=fragment):
        parse_config(text, "run.cfg")


def test_error_names_line():
    with pytest.raises(ConfigError, match=r"run.cfg:2:"):
        parse_config("K = 1\nbogus = 1", "run.cfg")


def test_relative_paths_resolve_against_config(tmp_path):
    f = tmp_path / "run.cfg"
    f.write_text("catalogue = curves.txt\nout = results\n")
    cfg = load_config(f)
    assert cfg.catalogue_path() == tmp_path / "curves.txt"
    assert cfg.out_dir() == tmp_path / "results"
    with pytest.raises(OSError, match="curves.txt"):
        cfg.catalogue_text()


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError, match="nope.cfg"):
        load_config(tmp_path / "nope.cfg")


def test_override():
    cfg = RunConfig()
    assert override(cfg, seed=None) is cfg
    assert override(cfg, seed=7).seed == 7
    with pytest.raises(ConfigError):
        override(cfg, ladder="2:1:2")


def test_canonical_text_ignores_out():
    a, b = RunConfig(out="x"), RunConfig(out="y")
    assert a.to_text() == b.to_text()
    assert "seed = 1" in a.to_text()
