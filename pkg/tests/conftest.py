import subprocess
import sys

import pytest

from ppmgpn import kernels
from ppmgpn.phonology import Phonology

STUBS = f"{sys.executable} -m ppmgpn.stubs"


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    """Run the test once per kernel backend, restoring the default after."""
    previous = kernels.BACKEND
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(previous)


@pytest.fixture(scope="session")
def phonology():
    return Phonology()


def run_cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "ppmgpn", *map(str, args)],
                          capture_output=True, text=True, cwd=cwd)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for line in sorted(results, key=lambda s: int(s.split()[1].rstrip("."))):
            terminalreporter.write_line(line)
