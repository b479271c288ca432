from __future__ import annotations

import logging
import os

logger = logging.getLogger(__name__)

# 0 leaves numba's own default in place
DEFAULT_THREADS = int(os.environ.get("ARROWHEAD_THREADS", "0") or 0)
DENSE_SPECTRUM_LIMIT = int(os.environ.get("ARROWHEAD_DENSE_LIMIT", "2000") or 2000)
DEBUG = os.environ.get("ARROWHEAD_DEBUG", "").strip().lower() not in ("", "0", "false", "no")


def set_threads(threads: int | None = None) -> int:
    """Apply a numba thread count and return the count in effect.

    ``None`` falls back to ``ARROWHEAD_THREADS``; zero keeps the current setting.
    """
    import numba

    requested = DEFAULT_THREADS if threads is None else int(threads)
    if requested < 0:
        raise ValueError(f"thread count must be non-negative, got {requested}")
    if requested:
        limit = numba.config.NUMBA_NUM_THREADS
        if requested > limit:
            logger.warning("requested %d threads, numba was compiled for %d", requested, limit)
            requested = limit
        numba.set_num_threads(requested)
    return numba.get_num_threads()
