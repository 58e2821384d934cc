import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mpot import DenseTensor, DiscreteMeasure, MpotInstance


def random_instance(rng, n, m, equal_masses=True, mass_range=(0.5, 3.0),
                    s_fraction=0.5, cost_scale=1.0):
    """Seeded random desk instance; equal masses normalize every total to 1."""
    measures = []
    for _ in range(m):
        w = rng.uniform(0.2, 1.0, size=n)
        if equal_masses:
            w = w / w.sum()
        else:
            w = w / w.sum() * rng.uniform(*mass_range)
        measures.append(DiscreteMeasure(rng.random((n, 2)), w))
    cost = DenseTensor(rng.uniform(0.0, cost_scale, size=(n,) * m))
    s = s_fraction * min(mu.total_mass for mu in measures)
    return MpotInstance(measures, cost, s)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
