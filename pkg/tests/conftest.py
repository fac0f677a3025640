import shutil
from pathlib import Path

import pytest

from fhcurves.config import load_config, override
from fhcurves.exact import Poly
from fhcurves import pipeline


def P(*tokens):
    return Poly.parse(tokens)


@pytest.fixture(scope="session")
def default_cfg():
    return load_config(None)


@pytest.fixture(scope="session")
def default_run(tmp_path_factory, default_cfg):
    """Build and verify the default instance once; tests read the artifacts."""
    out = tmp_path_factory.mktemp("default_run")
    cfg = override(default_cfg, out=str(out))
    pipeline.run_build(cfg)
    report = pipeline.run_verify(cfg)
    return cfg, report


@pytest.fixture
def built_copy(default_run, tmp_path):
    """A private copy of the default build artifacts."""
    cfg, _ = default_run
    dst = tmp_path / "run"
    shutil.copytree(cfg.out_dir(), dst)
    return override(cfg, out=str(dst)), dst


ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
