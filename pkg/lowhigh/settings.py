"""Process-wide flags shared by the library, the bench harness and the CLI.

Read and write these through attribute access (`settings.VERIFY_MODE`),
never `from lowhigh.settings import VERIFY_MODE`: the latter copies the
value into the importing module and misses later reassignments made by
the CLI or by tests.
"""

import os


def _env_int(name, default, minimum=1):
    override = os.getenv(name)
    if override:
        try:
            return max(minimum, int(override))
        except ValueError:
            pass
    return default


DEBUG_MODE = os.getenv("LOWHIGH_DEBUG", "") not in ("", "0")  # --debug; diagnostics on stderr
VERIFY_MODE = False  # per-insertion property checks inside insert_edge

# Largest n for the O(n^3) strong-divergence enumeration in verify mode
STRONG_DIVERGENCE_LIMIT = _env_int("LOWHIGH_STRONG_DIVERGENCE_LIMIT", 25)

# Largest n for the brute-force dominator oracle; networkx above it
BRUTE_FORCE_LIMIT = _env_int("LOWHIGH_BRUTE_FORCE_LIMIT", 64)
