import pytest

from safrel.sut import ProgramProfile, ResourceConfig, SensitivityVector, SutInstance, catalog


@pytest.fixture
def programs():
    return {p.name: p for p in catalog()}


def make_instance(sen=(1.0, 0.0, 0.0), cpu=4.0, mem=16.0, disk=100.0, rt_q=1000.0, nominal_rt=500.0, name="prog"):
    profile = ProgramProfile(name, SensitivityVector(*sen))
    return SutInstance(profile, ResourceConfig(cpu, mem, disk), rt_q, nominal_rt)


@pytest.fixture
def pure_cpu():
    return make_instance(sen=(1.0, 0.0, 0.0), cpu=8.0, mem=16.0, disk=100.0)
