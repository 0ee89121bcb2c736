import os
import sys
from functools import lru_cache
from pathlib import Path

import hypothesis
import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from lagdiff.collocation import build_nodeset  # noqa: E402

hypothesis.settings.register_profile("default", max_examples=40, deadline=None)
hypothesis.settings.register_profile("ci", max_examples=100, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=8, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@lru_cache(maxsize=None)
def cached_nodeset(family: str, npts: int, alpha=None):
    return build_nodeset(family, npts, alpha)


@pytest.fixture
def nodeset():
    return cached_nodeset


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for tag in sorted(results):
            terminalreporter.write_line(results[tag])
