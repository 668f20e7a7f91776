import warnings

import pytest

from opaherald.fock import Cutoff, TruncationWarning
from opaherald.herald import GainParam, herald_single_photon
from opaherald.states import SqueezeParam, squeezed_vacuum


@pytest.fixture(autouse=True)
def _quiet_truncation():
    # most tests drive states near their cutoff on purpose; the warning is
    # exercised explicitly where it is the behavior under test
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        yield


@pytest.fixture(scope="session")
def dim64():
    return Cutoff(64)


@pytest.fixture(scope="session")
def dim96():
    return Cutoff(96)


@pytest.fixture(scope="session")
def sv_r1_96():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        return squeezed_vacuum(SqueezeParam(1.0), Cutoff(96))


@pytest.fixture(scope="session")
def herald_sv_r1_g25(sv_r1_96):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        return herald_single_photon(sv_r1_96, GainParam(2.5))
