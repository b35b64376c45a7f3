import numpy as np
import pytest

from jordan_domains import classical_domains

DOMAIN_KINDS = {
    'ball:2': ('ball', 2),
    'I:2,2': ('I', 2, 2),
    'I:2,3': ('I', 2, 3),
    'II:4': ('II', 4),
    'III:2': ('III', 2),
    'IV:4': ('IV', 4),
    'bidisc': ('polydisc', 2),
}

@pytest.fixture
def rng():
    return np.random.default_rng(12345)

@pytest.fixture(params=list(DOMAIN_KINDS))
def domain(request):
    return classical_domains.makeDomain(DOMAIN_KINDS[request.param])

def randomUnitary(rng, m):
    Z = rng.standard_normal((m, m)) + 1j*rng.standard_normal((m, m))
    Q, R = np.linalg.qr(Z)
    return Q*(np.diag(R)/np.abs(np.diag(R)))
