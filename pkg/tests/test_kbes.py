import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_density, random_hermitian
from kbes_chain.errors import ShapeError, StateError
from kbes_chain.kbes import (
    DissipationChannel,
    Liouvillian,
    build_liouvillian,
    devectorize,
    left_mult_super,
    right_mult_super,
    sandwich_super,
    vectorize,
)
from kbes_chain.linalg import eig_general
from kbes_chain.model import SIGMA_MINUS, SIGMA_PLUS, SIGMA_Z, on_qubit

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def random_generator(rng, dim, n_channels=3):
    channels = [
        DissipationChannel(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)), rng.uniform(0, 2))
        for _ in range(n_channels)
    ]
    return random_hermitian(rng, dim), channels


def test_vectorize_examples():
    assert np.array_equal(vectorize([[1, 2], [3, 4]]), [1, 2, 3, 4])
    assert np.array_equal(vectorize(np.eye(2)), [1, 0, 0, 1])


def test_devectorize_examples():
    assert np.array_equal(devectorize([1, 0, 0, 0]), [[1, 0], [0, 0]])
    assert np.array_equal(devectorize([0, 1, 0, 0]), [[0, 1], [0, 0]])


def test_round_trips(rng):
    rho = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    v = rng.normal(size=16) + 1j * rng.normal(size=16)
    assert np.array_equal(devectorize(vectorize(rho)), rho)
    assert np.array_equal(vectorize(devectorize(v)), v)


def test_shape_errors():
    with pytest.raises(ShapeError):
        vectorize(np.zeros((2, 3)))
    with pytest.raises(ShapeError):
        devectorize(np.zeros(5))


def test_left_mult_examples(rng):
    assert np.array_equal(left_mult_super(np.eye(2)), np.eye(4))
    assert np.array_equal(left_mult_super(np.diag([1, 2])), np.diag([1, 1, 2, 2]))
    a = on_qubit(SIGMA_PLUS, 1)
    rho = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert np.allclose(devectorize(left_mult_super(a) @ vectorize(rho)), a @ rho, atol=1e-14)


def test_right_mult_examples(rng):
    assert np.array_equal(right_mult_super(np.eye(2)), np.eye(4))
    assert np.array_equal(right_mult_super(np.diag([1, 2])), np.diag([1, 2, 1, 2]))
    b = on_qubit(SIGMA_MINUS, 2)
    rho = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert np.allclose(devectorize(right_mult_super(b) @ vectorize(rho)), rho @ b, atol=1e-14)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_superoperator_actions(seed):
    rng = np.random.default_rng(seed)
    a, b, rho = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(3))
    v = vectorize(rho)
    assert np.allclose(devectorize(left_mult_super(a) @ v), a @ rho, atol=1e-12)
    assert np.allclose(devectorize(right_mult_super(b) @ v), rho @ b, atol=1e-12)
    assert np.allclose(devectorize(sandwich_super(a, b) @ v), a @ rho @ b, atol=1e-12)


def test_identity_transfer(rng):
    # A on the ket mode equals A^dag on the tilde mode (tilde operator kron(I, A^dag)),
    # which in operator language is A I = I A.
    a = rng.normal(size=(4, 4))
    eta = vectorize(np.eye(4))
    ket = left_mult_super(a) @ eta
    assert np.allclose(ket, np.kron(np.eye(4), a.conj().T) @ eta, atol=1e-14)
    assert np.allclose(ket, right_mult_super(a) @ eta, atol=1e-14)


def test_empty_generator_is_zero():
    f = build_liouvillian(np.zeros((2, 2)))
    assert np.array_equal(f.matrix, np.zeros((4, 4)))


def test_single_decay_channel_spectrum():
    f = build_liouvillian(np.zeros((2, 2)), [DissipationChannel(SIGMA_MINUS, 2.0)])
    w = np.sort(eig_general(f.matrix).eigenvalues.real)
    assert np.allclose(w, [-2, -1, -1, 0], atol=1e-12)


def test_commutator_spectrum():
    f = build_liouvillian(SIGMA_Z)
    w = eig_general(f.matrix).eigenvalues
    assert np.allclose(w.real, 0, atol=1e-14)
    assert np.allclose(np.sort(w.imag), [-2, 0, 0, 2], atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_trace_and_hermiticity_preserved(seed):
    rng = np.random.default_rng(seed)
    f = build_liouvillian(*random_generator(rng, 4))
    rho = random_hermitian(rng, 4)
    image = f.apply(rho)
    scale = max(1.0, np.abs(f.matrix).max())
    assert abs(np.trace(image)) <= 1e-12 * scale
    assert np.abs(image - image.conj().T).max() <= 1e-12 * scale


def test_general_bilinear_channel_preserves_trace(rng):
    l1, l2 = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(2))
    f = build_liouvillian(np.zeros((3, 3)), [DissipationChannel(l1, 0.7, co_operator=l2)])
    image = f.apply(random_density(rng, 3))
    assert abs(np.trace(image)) < 1e-12


def test_linear_in_hamiltonian_and_weights(rng):
    h1, h2 = random_hermitian(rng, 4), random_hermitian(rng, 4)
    ops = [rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)) for _ in range(2)]
    w1, w2 = rng.uniform(0, 1, 2), rng.uniform(0, 1, 2)
    c1, c2 = 0.3, 1.7

    def gen(h, w):
        return build_liouvillian(h, [DissipationChannel(o, x) for o, x in zip(ops, w)]).matrix

    combined = gen(c1 * h1 + c2 * h2, c1 * w1 + c2 * w2)
    assert np.abs(combined - (c1 * gen(h1, w1) + c2 * gen(h2, w2))).max() < 1e-12


def test_build_errors():
    with pytest.raises(StateError):
        build_liouvillian(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ShapeError):
        build_liouvillian(np.zeros((2, 2)), [DissipationChannel(np.eye(3), 1.0)])
    with pytest.raises(ValueError):
        DissipationChannel(SIGMA_MINUS, -1.0)


def test_liouvillian_is_immutable():
    f = build_liouvillian(SIGMA_Z)
    assert f.ordering == "row-major" and f.dim_hilbert == 2
    with pytest.raises(ValueError):
        f.matrix[0, 0] = 1
    with pytest.raises(ShapeError):
        Liouvillian(2, np.zeros((3, 3)))
