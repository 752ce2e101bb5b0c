"""Worker-count policy shared by FFTs and corpus evaluation."""
import os

from .errors import InvalidParameterError


def threads():
    """Number of workers, from ``LPNS_THREADS`` (default: CPU count)."""
    raw = os.environ.get("LPNS_THREADS")
    if raw is None or raw.strip() == "":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise InvalidParameterError(f"LPNS_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise InvalidParameterError(f"LPNS_THREADS must be >= 1, got {n}")
    return n
