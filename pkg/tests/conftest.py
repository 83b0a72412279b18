import os
from pathlib import Path

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

TIER2 = os.environ.get("HOLONOMY_TIER2") == "1"


def pytest_configure(config):
    config.addinivalue_line("markers", "tier2: hours-long reproduction runs (set HOLONOMY_TIER2=1)")


def pytest_collection_modifyitems(config, items):
    if TIER2:
        return
    skip = pytest.mark.skip(reason="tier 2: set HOLONOMY_TIER2=1 to run")
    for item in items:
        if "tier2" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def tier2_dir():
    from holonomy.lattice.cache import default_cache_dir

    d = Path(os.environ.get("HOLONOMY_TIER2_DIR", default_cache_dir()))
    d.mkdir(parents=True, exist_ok=True)
    return d
