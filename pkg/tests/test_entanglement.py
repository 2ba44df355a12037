import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_density, random_unitary
from kbes_chain.dynamics import propagate
from kbes_chain.entanglement import (
    EsdEvent,
    concurrence,
    concurrence_x,
    esd_events,
    l1_coherence,
    revival_peaks,
)
from kbes_chain.errors import ShapeError, StateError
from kbes_chain.model import EWLParams, Kind, SpinChainParams, ewl_density, model_liouvillian

seeds = st.integers(min_value=0, max_value=2**32 - 1)
S = 1 / math.sqrt(2)


def random_x_state(rng):
    p = rng.dirichlet(np.ones(4))
    rho = np.diag(p).astype(complex)
    rho[0, 3] = math.sqrt(p[0] * p[3]) * rng.uniform() * np.exp(1j * rng.uniform(0, 2 * np.pi))
    rho[1, 2] = math.sqrt(p[1] * p[2]) * rng.uniform() * np.exp(1j * rng.uniform(0, 2 * np.pi))
    rho[3, 0], rho[2, 1] = rho[0, 3].conjugate(), rho[1, 2].conjugate()
    return rho


def brute_force_concurrence(rho):
    yy = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])
    m = rho @ yy @ rho.conj() @ yy
    lam = np.sqrt(np.clip(np.sort(np.linalg.eigvals(m).real)[::-1], 0, None))
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def test_concurrence_examples():
    bell = ewl_density(EWLParams(Kind.PSI, r=1, a=S))
    assert concurrence(bell) == pytest.approx(1.0, abs=1e-12)
    assert concurrence(np.eye(4) / 4) == 0.0
    werner = ewl_density(EWLParams(Kind.PHI, r=0.5, a=S))
    assert concurrence(werner) == pytest.approx(0.25, abs=1e-12)
    assert brute_force_concurrence(werner) == pytest.approx(0.25, abs=1e-12)


def test_concurrence_matches_brute_force(rng):
    for _ in range(50):
        rho = random_density(rng, rank=int(rng.integers(1, 5)))
        assert abs(concurrence(rho) - brute_force_concurrence(rho)) < 1e-7


def test_concurrence_rejects_bad_input():
    with pytest.raises(ShapeError):
        concurrence(np.eye(2) / 2)
    with pytest.raises(StateError):
        concurrence(np.diag([1.2, -0.2, 0, 0]))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_local_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, rank=int(rng.integers(1, 5)))
    u = np.kron(random_unitary(rng), random_unitary(rng))
    assert abs(concurrence(u @ rho @ u.conj().T) - concurrence(rho)) < 1e-9


def test_concurrence_x_examples():
    rho = np.diag([1 / 8, 1 / 8, 1 / 8, 5 / 8]).astype(complex)
    rho[0, 3], rho[3, 0] = -0.25j, 0.25j
    assert concurrence_x(rho) == pytest.approx(0.25, abs=1e-15)
    assert concurrence_x(np.diag([0.1, 0.2, 0.3, 0.4])) == 0.0


def test_concurrence_x_rejects_non_x():
    rho = np.eye(4) / 4
    rho[0, 1] = rho[1, 0] = 0.01
    with pytest.raises(StateError):
        concurrence_x(rho)


def test_concurrence_x_agrees_on_random_x_states(rng):
    for _ in range(100):
        rho = random_x_state(rng)
        assert abs(concurrence_x(rho) - concurrence(rho)) < 1e-10


def test_l1_examples():
    assert l1_coherence(np.diag([0.2, 0.8])) == 0
    bell = ewl_density(EWLParams(Kind.PHI, r=1, a=S))
    assert l1_coherence(bell) == pytest.approx(1.0)
    ss = np.diag([1 / 8, 1 / 8, 1 / 8, 5 / 8]).astype(complex)
    ss[0, 3], ss[3, 0] = -0.25j, 0.25j
    assert l1_coherence(ss) == pytest.approx(0.5)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_measure_ranges(seed):
    rho = random_density(np.random.default_rng(seed))
    assert 0 <= concurrence(rho) <= 1
    assert l1_coherence(rho) >= 0


@pytest.mark.parametrize("kind", list(Kind))
@pytest.mark.parametrize("chain", [dict(J=1.0, Delta=0.5, n=0.0, B=0.0), dict(J=1.5, Delta=-0.4, n=0.1, B=0.7)])
def test_jz_invariance(kind, chain):
    rho0 = ewl_density(EWLParams(kind, r=0.8, a=0.6, delta=0.9))
    times = np.linspace(0, 6, 31)
    series = [
        propagate(model_liouvillian(SpinChainParams(Jz=jz, **chain)), rho0, times).concurrence
        for jz in (-2.0, 0.0, 2.0)
    ]
    assert np.abs(series[0] - series[1]).max() < 1e-10
    assert np.abs(series[2] - series[1]).max() < 1e-10


def test_esd_trivial_series():
    t = np.linspace(0, 1, 11)
    assert esd_events(t, np.zeros(11)) == []
    assert esd_events(t, 0.5 + t) == []


def test_esd_interpolation():
    t = [0.0, 1.0, 2.0, 3.0, 4.0]
    c = [0.4, 0.2, 0.0, 0.0, 0.3]
    (ev,) = esd_events(t, c)
    assert ev.death_time == pytest.approx(2.0 - 1e-9 / 0.2, abs=1e-12)
    assert ev.revival_time == pytest.approx(3.0 + 1e-9 / 0.3, abs=1e-12)


def test_esd_trailing_death_has_no_revival():
    (ev,) = esd_events([0, 1, 2], [1.0, 0.5, 0.0])
    assert ev.revival_time is None


def test_esd_errors():
    with pytest.raises(ShapeError):
        esd_events([0, 1], [0.1])
    with pytest.raises(ValueError):
        EsdEvent(2.0, 1.0)


def test_revival_peaks():
    t = np.arange(9.0)
    c = [0.5, 0.0, 0.3, 0.0, 0.2, 0.1, 0.0, 0.0, 0.05]
    assert revival_peaks(t, c) == [0.3, 0.2, 0.05]


def test_esd_in_the_phi_bell_trajectory():
    p = SpinChainParams(J=2, Delta=0.5)
    times = np.linspace(0, 10, 2001)
    traj = propagate(model_liouvillian(p), ewl_density(EWLParams(Kind.PHI, r=1, a=S)), times)
    events = esd_events(times, traj.concurrence)
    assert events and events[0].revival_time is not None
