"""Work caps for the exhaustive routines.

Every cap can be overridden per call (``cap=`` keyword) or process-wide
through an environment variable ``HOMGRAPH_CAP_<NAME>``, e.g.
``HOMGRAPH_CAP_BRUTE_WORK=1e9``.
"""

import os

DEFAULTS = {
    "edit_distance_n": 9,
    "canonical_m": 6,
    "atlas_m": 5,
    "tree_decomposition_m": 6,
    "brute_work": 1e8,
    "density_work": 1e8,
    "cut_norm_q": 12,
    "cut_distance_q": 8,
}


def get_cap(name, override=None):
    if override is not None:
        return override
    env = os.environ.get(f"HOMGRAPH_CAP_{name.upper()}")
    if env is not None:
        value = float(env)
        return int(value) if value.is_integer() else value
    return DEFAULTS[name]
