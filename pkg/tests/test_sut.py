import pytest
from hypothesis import given, strategies as st

from safrel.errors import EmptyCatalog
from safrel.sut import (
    CPU_INTENSIVE,
    ResourceConfig,
    SensitivityVector,
    catalog,
    catalog_hash,
    cpu_intensive,
    generate_instances,
    is_breaking_point,
    load_catalog,
    save_catalog,
)

from conftest import make_instance


def test_catalog_rows():
    cat = catalog()
    assert len(cat) == 12
    assert (cat[0].name, tuple(cat[0].sensitivity)) == ("Build-apache", (0.96, 0.04, 0.00))
    assert (cat[1].name, tuple(cat[1].sensitivity)) == ("n-queens", (0.97, 0.00, 0.00))
    assert (cat[11].name, tuple(cat[11].sensitivity)) == ("Aio-stress", (0.00, 0.30, 0.80))
    assert len({p.name for p in cat}) == 12


def test_cpu_intensive_preset_matches_listed_programs():
    names = {p.name for p in catalog() if cpu_intensive(p)}
    assert names == set(CPU_INTENSIVE)
    assert len(names) == 7
    assert all(p.sensitivity.cpu >= 0.4 for p in catalog() if cpu_intensive(p))


@pytest.mark.parametrize("bad", [(-0.1, 0.5, 0.5), (0.0, 0.0, 0.0), (1.2, 0, 0)])
def test_sensitivity_vector_rejects_invalid(bad):
    with pytest.raises(ValueError):
        SensitivityVector(*bad)


def test_resource_config_must_be_positive():
    with pytest.raises(ValueError):
        ResourceConfig(0.0, 1.0, 1.0)


def test_generate_cpu_intensive():
    suts = generate_instances(50, 3, cpu_intensive)
    assert len(suts) == 50
    assert all(s.profile.name in CPU_INTENSIVE and s.sensitivity.cpu >= 0.4 for s in suts)


def test_generate_is_deterministic():
    assert generate_instances(1, 7) == generate_instances(1, 7)
    assert generate_instances(20, 7) == generate_instances(20, 7)
    assert generate_instances(20, 7) != generate_instances(20, 8)


def test_generate_ranges():
    for s in generate_instances(200, 11):
        r = s.initial_resources
        assert 1 <= r.cpu <= 10 and 1 <= r.mem <= 50 and 100 <= r.disk <= 1000
        assert 500 <= s.rt_requirement <= 3000
        assert s.nominal_rt < s.rt_requirement < s.breaking_rt
        assert s.nominal_rt == 0.5 * s.rt_requirement


def test_generate_ids_are_positions():
    assert [s.sut_id for s in generate_instances(5, 0)] == list(range(5))


def test_generate_empty_filter():
    with pytest.raises(EmptyCatalog):
        generate_instances(3, 0, lambda p: False)


def test_generate_rejects_bad_count():
    with pytest.raises(ValueError):
        generate_instances(0, 0)


@pytest.mark.parametrize(
    "rt, expected", [(1501.0, True), (1500.0, False), (999.0, False), (1e9, True)]
)
def test_breaking_point(rt, expected):
    inst = make_instance(rt_q=1000.0)
    assert is_breaking_point(rt, inst) is expected


@given(st.floats(1.0, 1e6), st.floats(0.0, 1e6))
def test_breaking_point_monotone(rt, extra):
    inst = make_instance(rt_q=1000.0)
    if is_breaking_point(rt, inst):
        assert is_breaking_point(rt + extra, inst)


def test_catalog_file_round_trip(tmp_path):
    path = tmp_path / "cat.csv"
    save_catalog(catalog(), path)
    loaded = load_catalog(path)
    assert loaded == catalog()
    assert catalog_hash(loaded) == catalog_hash(catalog())


def test_catalog_file_with_comments(tmp_path):
    path = tmp_path / "cat.csv"
    path.write_text("# custom\nalpha, 0.5, 0.1, 0\n\nbeta,0,0,1\n")
    cat = load_catalog(path)
    assert [p.name for p in cat] == ["alpha", "beta"]
    assert tuple(cat[0].sensitivity) == (0.5, 0.1, 0.0)


def test_catalog_file_rejects_duplicates(tmp_path):
    path = tmp_path / "cat.csv"
    path.write_text("a,1,0,0\na,0,1,0\n")
    with pytest.raises(ValueError):
        load_catalog(path)
