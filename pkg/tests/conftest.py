import os
import time
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
os.environ.setdefault("PICWEYL_CACHE_DIR", str(REPO_ROOT / ".cache" / "picweyl"))

from picweyl import weyl  # noqa: E402  (cache dir must be set first)

# build metadata for the acceptance suite: name -> (seconds, loaded_from_cache)
BUILD_INFO: dict[str, tuple[float, bool]] = {}


def _timed(name: str, degree: int, **kw) -> weyl.ClassInventory:
    cache_dir = Path(os.environ["PICWEYL_CACHE_DIR"])
    before = set(cache_dir.glob("*.json")) if cache_dir.exists() else set()
    t0 = time.perf_counter()
    inv = weyl.enumerate_classes(degree, **kw)
    elapsed = time.perf_counter() - t0
    after = set(cache_dir.glob("*.json")) if cache_dir.exists() else set()
    BUILD_INFO[name] = (elapsed, after == before)
    return inv


@pytest.fixture(scope="session")
def inv4():
    return _timed("inv4", 4)


@pytest.fixture(scope="session")
def inv3():
    return _timed("inv3", 3)


@pytest.fixture(scope="session")
def inv2():
    return _timed("inv2", 2)


@pytest.fixture(scope="session")
def inv2_alt():
    """Independent confirmation run: same group, permuted generator order."""
    ctx = weyl._context(2)
    order = tuple(reversed(range(ctx.nsimple)))
    return _timed("inv2_alt", 2, generator_order=order)


@pytest.fixture(scope="session")
def inv1():
    return _timed("inv1", 1)


@pytest.fixture(scope="session")
def data_dir():
    return REPO_ROOT / "src" / "picweyl" / "data"
