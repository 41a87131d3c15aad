import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from elasticae import closedform as cf
from elasticae import curve as cv
from elasticae import elliptic as el


@pytest.fixture(scope="session")
def wavelike_j2():
    """Wavelike member j = 2 of the oscillation family (m = 1/4, A = 2K)."""
    m = 0.25
    amp = 2.0 * el.complete_K(m)
    return cf.ElasticaParams.from_moduli(m, m, amp, beta=0.0)


@pytest.fixture(scope="session")
def wavelike_j2_curve(wavelike_j2):
    return cf.reconstruct_planar(wavelike_j2, 1.0, 4096)


@pytest.fixture(scope="session")
def unit_circle_curve():
    """Unit-radius circle of length 2 pi, N = 4096."""
    params = cf.ElasticaParams.from_moduli(0.0, 1.0, 1.0)
    return cf.reconstruct_planar(params, 2.0 * np.pi, 4096)


@pytest.fixture(scope="session")
def segment_curve():
    x = np.arange(257) / 256
    return cv.DiscreteCurve(np.column_stack([x, np.zeros_like(x)]))
