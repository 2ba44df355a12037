import pytest

from kbes_chain.model import EWLParams, SpinChainParams
from kbes_chain.validation import Battery, run_battery


def small_battery(**kw):
    return Battery(n_values=(0.0,), j_delta_values=(1.0,), r_values=(1.0,), a2_values=(0.5,),
                   steady_samples=3, cmax_n_values=(0.0,), golden_fields=(0.0,), **kw)


def test_default_battery_passes():
    checks = run_battery()
    names = [c.name for c in checks]
    assert names == ["state_elementwise", "concurrence", "steady_state", "final_concurrence",
                     "c_max", "golden_section_value", "golden_section_argmax"]
    assert all(c.status == "pass" for c in checks), [c.as_dict() for c in checks]
    assert all(c.max_deviation <= c.tolerance for c in checks)


def test_perturbed_oracle_fails():
    checks = run_battery(small_battery(), perturb=1e-3)
    assert all(c.status == "fail" for c in checks)


@pytest.mark.parametrize("p, q", [(SpinChainParams(B=1.0, J=1, Delta=0.5), EWLParams()),
                                  (SpinChainParams(J=1, Delta=0.5), EWLParams(delta=0.4))])
def test_out_of_domain_point_is_skipped(p, q):
    checks = {c.name: c for c in run_battery(small_battery(extra_points=[(p, q)]))}
    point = checks["point_0_trajectory"]
    assert point.status == "skipped" and point.note == "out of oracle domain"
    assert checks["steady_state"].status == "pass"


def test_in_domain_point_is_checked():
    p = SpinChainParams(J=1, Delta=0.3, n=0.1)
    checks = {c.name: c for c in run_battery(small_battery(extra_points=[(p, EWLParams(r=0.6, a=0.4))]))}
    assert checks["point_0_trajectory"].status == "pass"
    assert checks["point_0_trajectory"].cases == 1
