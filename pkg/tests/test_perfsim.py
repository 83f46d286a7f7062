import math

import pytest
from hypothesis import given, strategies as st

from safrel.perfsim import measure, response_time, throughput, utilization_improvements
from safrel.sut import ResourceConfig

from conftest import make_instance


def test_initial_config_gives_nominal(programs):
    inst = make_instance(sen=(0.96, 0.04, 0.0))
    assert throughput(inst, inst.initial_resources) == pytest.approx(1 / 500, rel=1e-15)
    assert response_time(inst, inst.initial_resources) == 500.0
    assert measure(inst, inst.initial_resources) == measure(inst, inst.initial_resources)
    m = measure(inst, inst.initial_resources)
    assert (m.response_time, *m.improvements) == (500.0, 1.0, 1.0, 1.0)


def test_build_apache_cpu_halved(programs):
    sen = tuple(programs["Build-apache"].sensitivity)
    inst = make_instance(sen=sen, cpu=4.0)
    granted = ResourceConfig(2.0, 16.0, 100.0)
    # (0.5 * 0.96 + 1 * 0.04) / 1.00 = 0.52
    assert throughput(inst, granted) == pytest.approx(0.52 / 500, abs=1e-15)
    assert response_time(inst, granted) == pytest.approx(500 / 0.52, rel=1e-12)
    m = measure(inst, granted)
    assert m.response_time == pytest.approx(961.538, abs=1e-3)
    assert m.improvements == (2.0, 1.0, 1.0)


def test_pure_cpu_quartered():
    inst = make_instance(sen=(1.0, 0.0, 0.0), cpu=4.0)
    granted = ResourceConfig(1.0, 16.0, 100.0)
    assert throughput(inst, granted) == pytest.approx(0.25 / 500, rel=1e-15)
    assert response_time(inst, granted) == 2000.0


@pytest.mark.parametrize(
    "cpu, expected", [(4.0, (1.0, 1.0, 1.0)), (2.0, (2.0, 1.0, 1.0)), (0.5, (4.0, 1.0, 1.0))]
)
def test_utilization_improvements(cpu, expected):
    inst = make_instance(cpu=4.0)
    assert utilization_improvements(inst, ResourceConfig(cpu, 16.0, 100.0)) == expected


def test_granting_more_than_demanded_is_capped():
    inst = make_instance(sen=(0.5, 0.5, 0.0))
    assert response_time(inst, ResourceConfig(100.0, 100.0, 1000.0)) == 500.0


def test_zero_sensitivity_resource_is_inert(programs):
    inst = make_instance(sen=tuple(programs["n-queens"].sensitivity))
    assert throughput(inst, ResourceConfig(4.0, 16.0, 1.0)) == throughput(inst, inst.initial_resources)


fractions = st.floats(0.01, 1.0)
sens = st.tuples(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1)).filter(lambda t: sum(t) > 1e-3)


@given(sens, fractions, fractions, fractions, fractions, fractions, fractions)
def test_monotone_under_reduction(sen, c1, m1, d1, c2, m2, d2):
    inst = make_instance(sen=sen, cpu=4.0, mem=16.0, disk=100.0)
    hi = ResourceConfig(4.0 * max(c1, c2), 16.0 * max(m1, m2), 100.0 * max(d1, d2))
    lo = ResourceConfig(4.0 * min(c1, c2), 16.0 * min(m1, m2), 100.0 * min(d1, d2))
    assert throughput(inst, lo) <= throughput(inst, hi) * (1 + 1e-12)
    assert response_time(inst, lo) >= response_time(inst, hi) * (1 - 1e-12)
    assert response_time(inst, lo) >= inst.nominal_rt * (1 - 1e-12)


@given(sens, fractions, fractions, fractions)
def test_rt_times_throughput_is_one(sen, c, m, d):
    inst = make_instance(sen=sen)
    g = ResourceConfig(4.0 * c, 16.0 * m, 100.0 * d)
    # reciprocal computed along two float paths; agree to rounding
    assert math.isclose(response_time(inst, g) * throughput(inst, g), 1.0, rel_tol=4e-16, abs_tol=0)
