import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


@pytest.fixture(scope="session", autouse=True)
def _compiled_kernel():
    # trigger (or load from cache) the compiled integrator once
    from pucci import PucciParams, shoot, space_form_ball

    shoot(space_form_ball(2, 1.0, 0.0), PucciParams(1.0, 1.0), 5.0, N=64)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
