import sys

import pytest
from loguru import logger

from starlike_radii.classbounds import ClassKind, normalize
from starlike_radii.regions import RegionTag

# radii at b = -1 (K1) and b = c = -1 (K2, K3), in catalog order with order(0)
EXTREME_RADII = {
    RegionTag.PARABOLIC: (0.2021347, 0.116675, 0.143270),
    RegionTag.ORDER: (0.346014, 0.216845, 0.253077),
    RegionTag.LEMNISCATE: (0.171573, 0.0977826, 0.121320),
    RegionTag.EXPONENTIAL: (0.244259, 0.144684, 0.174887),
    RegionTag.CARDIOID: (0.254726, 0.151820, 0.182815),
    RegionTag.SINE: (0.296139, 0.185835, 0.219049),
    RegionTag.LUNE: (0.229877, 0.134993, 0.164039),
    RegionTag.RATIONAL: (0.079075, 0.041941, 0.054107),
    RegionTag.NEPHROID: (0.250000, 0.151388, 0.181818),
    RegionTag.SIGMOID: (0.187691, 0.108309, 0.133478),
}


@pytest.fixture
def extreme_radii():
    return EXTREME_RADII


@pytest.fixture
def k1_extreme():
    return normalize(ClassKind.K1, -1.0)


@pytest.fixture
def k2_extreme():
    return normalize(ClassKind.K2, -1.0, -1.0)


@pytest.fixture
def k3_extreme():
    return normalize(ClassKind.K3, -1.0, -1.0)


@pytest.fixture
def restore_logging():
    """Put back the default sink after a test switched logging to a captured stream."""
    yield
    logger.remove()
    logger.add(sys.__stderr__)
