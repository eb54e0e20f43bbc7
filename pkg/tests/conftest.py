import numpy as np
import pytest

from rsbeam.model import ChannelSet, PrecoderSet, SystemConfig


def random_partition(rng, n_users):
    """Random ordered partition of 0..n_users-1 into contiguous groups."""
    n_cuts = int(rng.integers(0, n_users))
    cuts = sorted(rng.choice(np.arange(1, n_users), size=n_cuts, replace=False).tolist()) if n_cuts else []
    groups, prev = [], 0
    for cut in cuts + [n_users]:
        groups.append(tuple(range(prev, cut)))
        prev = cut
    return tuple(groups)


def make_instance(seed, n_tx=None, n_users=None, power=None, fill=1.0):
    """Seeded random (config, channels, precoders) triple within the budget."""
    rng = np.random.default_rng(seed)
    n = n_tx or int(rng.integers(1, 5))
    k = n_users or int(rng.integers(1, 7))
    groups = random_partition(rng, k)
    cfg = SystemConfig(
        n_tx=n,
        groups=groups,
        noise_power=float(rng.uniform(0.5, 2.0)),
        power_budget=power if power is not None else float(rng.uniform(1.0, 100.0)),
    )
    ch = ChannelSet((rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n))) / np.sqrt(2))
    raw = rng.standard_normal((len(groups) + 1, n)) + 1j * rng.standard_normal((len(groups) + 1, n))
    raw *= np.sqrt(fill * cfg.power_budget / np.sum(np.abs(raw) ** 2))
    pre = PrecoderSet(raw[0], raw[1:])
    return cfg, ch, pre


@pytest.fixture
def rng():
    return np.random.default_rng(0)
