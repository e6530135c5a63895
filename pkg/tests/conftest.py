import os
import tempfile

# Point the artifact cache at a fresh per-session directory so tests exercise
# the cache code without touching (or depending on) user state.
os.environ.setdefault(
    "FLAGFORGE_CACHE_DIR", tempfile.mkdtemp(prefix="flagforge-test-cache-"))

import pytest


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the numba kernels once so timed tests measure the algorithms,
    not JIT compilation (no-op on the pure-Python backend)."""
    from flagforge import _kernels

    _kernels.warmup()
