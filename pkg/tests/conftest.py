import numpy as np
import pytest

from slet import _kernels


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # compile the numba kernel (if active) before anything gets timed
    diag = np.linspace(1.0, 2.0, 64)
    off2 = np.full(63, 0.25)
    _kernels.sturm_counts(diag, off2, np.array([0.5, 1.5]), 1e-300)
