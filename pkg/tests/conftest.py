import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from loccdisc.matrixcore import PartitionedOperator

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)


@pytest.fixture
def worked_pair():
    """U_1 = I and U_2 = diag(1, i, i, -1) on two qubits."""
    return PartitionedOperator(np.eye(4), (2, 2)), PartitionedOperator(np.diag([1, 1j, 1j, -1]), (2, 2))


def reflection(phi, dims):
    phi = np.asarray(phi, dtype=complex)
    phi = phi / np.linalg.norm(phi)
    return PartitionedOperator(np.eye(phi.size) - 2 * np.outer(phi, phi.conj()), dims)


def max_entangled(d):
    v = np.zeros(d * d, dtype=complex)
    v[[k * d + k for k in range(d)]] = 1 / np.sqrt(d)
    return v
