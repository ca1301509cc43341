"""Collects one result line per acceptance criterion for the terminal summary."""
import time
from contextlib import contextmanager

LINES = []


def sort_key(line: str):
    num = line.split()[2].rstrip(":")
    return int(num) if num.isdigit() else 99


@contextmanager
def criterion(number: int, title: str, limit: float = None):
    """Time the block, record PASS/FAIL with the failure reason, then re-raise."""
    start = time.perf_counter()
    try:
        yield
    except AssertionError as exc:
        elapsed = time.perf_counter() - start
        reason = str(exc).splitlines()[0] if str(exc) else "assertion failed"
        LINES.append(f"FAIL criterion {number}: {title} ({elapsed:.2f}s) -- {reason}")
        print(LINES[-1])
        raise
    elapsed = time.perf_counter() - start
    if limit is not None and elapsed > limit:
        LINES.append(f"FAIL criterion {number}: {title} ({elapsed:.2f}s > {limit}s limit)")
        print(LINES[-1])
        raise AssertionError(f"criterion {number} exceeded its time limit: {elapsed:.2f}s > {limit}s")
    LINES.append(f"PASS criterion {number}: {title} ({elapsed:.2f}s)")
    print(LINES[-1])
