"""Runtime knobs read from the environment (debugging aids only)."""

import os

DEFAULT_TRUNCATION_MARGIN = 2


def truncation_margin() -> int:
    """Extra degrees kept beyond the colength when truncating power series.

    Set CHERNCOUNT_TRUNC to a nonnegative integer to override the default.
    """
    raw = os.environ.get("CHERNCOUNT_TRUNC")
    if raw is None or raw.strip() == "":
        return DEFAULT_TRUNCATION_MARGIN
    value = int(raw)
    if value < 0:
        raise ValueError("CHERNCOUNT_TRUNC must be nonnegative")
    return value
