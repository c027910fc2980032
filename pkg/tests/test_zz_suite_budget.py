"""Collected last: the whole offline suite has to finish inside its budget."""

from __future__ import annotations

import time

from conftest import SESSION_STARTED

SUITE_BUDGET_SECONDS = 30.0


def test_offline_suite_inside_budget():
    elapsed = time.monotonic() - SESSION_STARTED
    print(f"\noffline suite elapsed: {elapsed:.2f}s (budget {SUITE_BUDGET_SECONDS:.0f}s)")
    assert elapsed < SUITE_BUDGET_SECONDS
