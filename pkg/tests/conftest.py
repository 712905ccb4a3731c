import pytest

from hbinv.hopf import build_qcqs
from hbinv.zoo import (builtin_group, group_algebra, quantum_double,
                       kac_b4m, uq_sl2)


def _make(key):
    if key.startswith("k"):
        return group_algebra(builtin_group(key[1:]), name=key)
    if key.startswith("D"):
        return quantum_double(builtin_group(key[1:]), name=key)
    if key.startswith("B"):
        return kac_b4m(int(key[1:]) // 4)
    if key.startswith("uq"):
        return uq_sl2(int(key[2:]))
    raise KeyError(key)


@pytest.fixture(scope="session")
def zoo():
    """zoo("kS3") -> (presentation, expected data, verified bundle)."""
    cache = {}

    def get(key):
        if key not in cache:
            H, E = _make(key)
            cache[key] = (H, E, build_qcqs(H))
        return cache[key]

    return get
