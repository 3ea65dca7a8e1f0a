from asa_bounds.pipelines import ReportPipeline
from asa_bounds.settings import ENGINE_VERSION, SCHEMA_VERSION


def _item(**kw):
    base = {
        "group": "gl:2",
        "verdict": "ASA_HOLDS",
        "route": "maximal_torus",
        "delta": {"kind": "exact", "value": "1/2", "source": "test"},
        "factors": {"r": 2, "h1": "1", "h2": "2"},
        "bound": "8",
    }
    base.update(kw)
    return base


def test_versions_are_stamped():
    out = ReportPipeline().process_item(_item())
    assert out["schema_version"] == SCHEMA_VERSION
    assert out["engine_version"] == ENGINE_VERSION


def test_bound_consistency():
    p = ReportPipeline()
    assert p.process_item(_item())["bound_is_consistent"]
    assert not p.process_item(_item(bound="4"))["bound_is_consistent"]


def test_exact_cyclotomic_only_needs_bound_at_least_one():
    out = ReportPipeline().process_item(_item(route="exact_cyclotomic", bound="2"))
    assert out["bound_is_consistent"]


def test_sa_needs_exact_delta_and_small_bound():
    p = ReportPipeline()
    sa = _item(verdict="ASA_HOLDS_SA", factors={"r": 1, "h1": "1", "h2": "1"}, bound="5/3",
               delta={"kind": "exact", "value": "3/5"})
    assert p.process_item(sa)["verdict_is_consistent"]
    assert not p.process_item({**sa, "bound": "2"})["verdict_is_consistent"]
    empirical = {**sa, "delta": {"kind": "empirical", "value": 0.6, "interval": [0.55, 0.65]}, "bound": None}
    assert not p.process_item(empirical)["verdict_is_consistent"]


def test_delta_range():
    p = ReportPipeline()
    ok = _item(delta={"kind": "empirical", "value": 0.5, "interval": [0.4, 0.6]}, bound=None)
    bad = _item(delta={"kind": "empirical", "value": 0.5, "interval": [0.4, 1.2]}, bound=None)
    assert p.process_item(ok)["delta_in_range"]
    assert not p.process_item(bad)["delta_in_range"]
    assert not p.process_item(_item(delta={"kind": "exact", "value": "3/2"}))["delta_in_range"]
