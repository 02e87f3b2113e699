import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hwent.errors import InputError
from hwent.hw_basis import basis_set, hw_displacement, hw_observable, labels, weyl_displacement

from conftest import SX, SY, SZ


@pytest.mark.parametrize("phase, sign", [("plus", -1), ("minus", 1)])
def test_qubit_basis_is_pauli(phase, sign):
    obs = basis_set(2, phase).observables
    np.testing.assert_allclose(obs[0], SX, atol=1e-15)
    np.testing.assert_allclose(obs[1], SZ, atol=1e-15)
    np.testing.assert_allclose(obs[2], sign * SY, atol=1e-15)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6, 7])
@pytest.mark.parametrize("phase", ["plus", "minus"])
def test_orthogonality(d, phase):
    basis = basis_set(d, phase)
    assert len(basis) == d * d - 1
    np.testing.assert_allclose(basis.gram(), d * np.eye(d * d - 1), atol=1e-12)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_observables_hermitian_and_traceless(d):
    obs = basis_set(d).observables
    np.testing.assert_allclose(obs, obs.conj().transpose(0, 2, 1), atol=1e-14)
    np.testing.assert_allclose(np.trace(obs, axis1=1, axis2=2), 0, atol=1e-13)


def test_labels_order():
    assert labels(3) == [(0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)]


def test_displacement_shift_and_clock():
    d = 4
    # D(0,1) maps |k+1> to |k>, D(1,0) is the clock matrix
    shift = hw_displacement(d, 0, 1)
    for k in range(d):
        e = np.zeros(d)
        e[(k + 1) % d] = 1
        np.testing.assert_allclose(shift @ e, np.eye(d)[k])
    omega = np.exp(2j * np.pi / d)
    np.testing.assert_allclose(hw_displacement(d, 1, 0), np.diag(omega ** np.arange(d)), atol=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9), st.data())
def test_rephased_displacement_has_real_partner_overlap(d, data):
    l = data.draw(st.integers(0, d - 1))
    m = data.draw(st.integers(0, d - 1))
    w = weyl_displacement(d, l, m)
    np.testing.assert_allclose(w @ w.conj().T, np.eye(d), atol=1e-12)
    mask = np.abs(w) > 0.5
    ratio = w[mask] / hw_displacement(d, l, m)[mask]
    np.testing.assert_allclose(ratio, ratio[0], atol=1e-12)
    partner = weyl_displacement(d, (-l) % d, (-m) % d)
    assert abs(np.trace(w @ partner).imag) < 1e-11


@pytest.mark.parametrize("d", [3, 4, 5])
def test_phase_choice_is_signed_permutation(d):
    plus = {lab: q for lab, q in zip(labels(d), basis_set(d, "plus").observables)}
    minus = {lab: q for lab, q in zip(labels(d), basis_set(d, "minus").observables)}
    for l, m in labels(d):
        target = minus[(l, m)]
        partner = plus[((-l) % d, (-m) % d)]
        assert np.allclose(target, partner, atol=1e-12) or np.allclose(target, -partner, atol=1e-12)


@pytest.mark.parametrize("bad", [1, 0, -3, 2.5])
def test_bad_dimension(bad):
    with pytest.raises(InputError):
        basis_set(bad)


def test_bad_phase_and_index():
    with pytest.raises(InputError):
        basis_set(2, "sideways")
    with pytest.raises(InputError):
        hw_observable(3, 3, 0)


def test_observables_read_only():
    obs = basis_set(3).observables
    with pytest.raises(ValueError):
        obs[0, 0, 0] = 1.0


def test_to_dict_roundtrips_observables():
    basis = basis_set(3, "minus")
    dumped = basis.to_dict()
    rebuilt = np.array(dumped["observables"])
    rebuilt = rebuilt[..., 0] + 1j * rebuilt[..., 1]
    np.testing.assert_allclose(rebuilt, basis.observables)
    assert [tuple(lab) for lab in dumped["labels"]] == labels(3)


def test_completeness_expansion():
    d = 3
    rng = np.random.default_rng(5)
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    a = a + a.conj().T
    ops = basis_set(d).with_identity()
    coeffs = np.einsum("kij,ji->k", ops, a) / d
    np.testing.assert_allclose(np.einsum("k,kij->ij", coeffs, ops), a, atol=1e-12)
    assert all(np.isreal(c) or abs(c.imag) < 1e-12 for c in itertools.islice(coeffs, None))
