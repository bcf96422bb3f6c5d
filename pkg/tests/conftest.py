import os

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("PRSA_EXTENDED") == "1":
        return
    skip = pytest.mark.skip(reason="full-scale run; set PRSA_EXTENDED=1")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)
