"""
Helpers for the K-M and jackknife tests: sample builders and a brute-force
delete-1 jackknife.
"""

import sys
from pathlib import Path

import numpy as np

# Add src to path for imports
PROJECT_ROOT = Path(__file__).resolve().parents[2]
sys.path.insert(0, str(PROJECT_ROOT / "src"))

from kmjack.km_core import OrderedSample, km_mean


def make_sample(statuses, times=None) -> OrderedSample:
    """Ordered sample with times 1..n unless given."""
    statuses = np.asarray(statuses, dtype=np.int8)
    if times is None:
        times = np.arange(1, statuses.size + 1, dtype=float)
    return OrderedSample(np.asarray(times, dtype=float), statuses)


def brute_force_jackknife_bias(s: OrderedSample) -> float:
    """(n - 1) * (mean of leave-one-out K-M means - full K-M mean)."""
    n = s.n
    keep = ~np.eye(n, dtype=bool)
    leave_one_out = [
        km_mean(OrderedSample(s.times[mask], s.statuses[mask])) for mask in keep
    ]
    return (n - 1) * (float(np.mean(leave_one_out)) - km_mean(s))


def random_sample_with_case(rng: np.random.Generator, n: int, case: tuple[int, int]) -> OrderedSample:
    """A sample of distinct times whose last two indicators equal ``case``."""
    times = np.sort(rng.exponential(1.0, n))
    statuses = rng.integers(0, 2, n).astype(np.int8)
    statuses[-2:] = case
    return OrderedSample(times, statuses)
