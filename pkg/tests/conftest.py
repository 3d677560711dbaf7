from __future__ import annotations

import contextlib
import io
import json
from dataclasses import dataclass

import pytest
from hypothesis import HealthCheck, settings

from rbroc.cli import main

# numpy/scipy-heavy property tests overrun the default deadline on cold caches
settings.register_profile(
    "rbroc", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("rbroc")


@dataclass
class CLIResult:
    code: int
    stdout: str
    stderr: str

    @property
    def report(self) -> dict:
        return json.loads(self.stdout)


@pytest.fixture
def run_cli():
    """Invoke the CLI in process, capturing exit code and both streams."""

    def run(*argv: str) -> CLIResult:
        out, err = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            try:
                code = main(list(argv))
            except SystemExit as e:
                # argparse paths (--help, --version, bad flags) exit directly
                code = e.code if isinstance(e.code, int) else 0 if e.code is None else 2
        return CLIResult(code=code, stdout=out.getvalue(), stderr=err.getvalue())

    return run
