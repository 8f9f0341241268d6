import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from channelqfi import ChannelParams, GaussianState, ProbeClass, apply_channel, make_probe, mean_photon_number, validate_state
from channelqfi.errors import DomainError, InvalidStateError
from channelqfi.gaussian import (
    phase_rotation,
    standard_form,
    symplectic_eigenvalues,
    tmsv_from_squeezing,
    transform,
)

energies = st.floats(0.0, 20.0)
gammas = st.floats(0.0, 4.0)
nbars = st.floats(0.0, 5.0)
classes = st.sampled_from(list(ProbeClass))


def test_channel_params_validation():
    with pytest.raises(DomainError):
        ChannelParams(-0.1, 0.0)
    with pytest.raises(DomainError):
        ChannelParams(0.1, float("nan"))
    th = ChannelParams(math.log(2), 1.0)
    assert th.z == pytest.approx(1.0, rel=1e-15)
    assert th.eta == pytest.approx(0.5, rel=1e-15)


def test_probe_class_aliases():
    assert ProbeClass.parse("tmsv") is ProbeClass.TWO_MODE_SQUEEZED_VACUUM
    assert ProbeClass.parse("2-m") is ProbeClass.TWO_MODE_SQUEEZED_VACUUM
    assert ProbeClass.parse("SQ") is ProbeClass.SINGLE_MODE_SQUEEZED
    with pytest.raises(DomainError):
        ProbeClass.parse("cat")


def test_probe_energy_domain():
    with pytest.raises(DomainError):
        make_probe("coherent", -1.0)


def test_pure_loss_coherent_output():
    out = apply_channel(make_probe("coherent", 2.0), ChannelParams(math.log(2), 0.0))
    np.testing.assert_allclose(out.mean, [math.sqrt(2), 0.0], rtol=1e-14)
    assert mean_photon_number(out) == pytest.approx(1.0, rel=1e-14)
    np.testing.assert_allclose(out.cov, np.eye(2) / 2, rtol=1e-14)


def test_tmsv_standard_form_example():
    out = apply_channel(make_probe("two-mode", 1.0), ChannelParams(math.log(2), 0.0))
    a, b, c = standard_form(out)
    assert (a, b, c) == pytest.approx((1.0, 1.5, 1.0), rel=1e-14)
    assert validate_state(out).is_valid


def test_invalid_states_detected():
    bad = GaussianState([0, 0], np.eye(2) * 0.4)
    assert not validate_state(bad).is_valid
    with pytest.raises(InvalidStateError):
        apply_channel(bad, ChannelParams(0.1, 0.0))
    with pytest.raises(InvalidStateError):
        GaussianState([0, 0], [[1, 0.2], [0.1, 1]])
    with pytest.raises(InvalidStateError):
        GaussianState([0, 0, 0], np.eye(3))


def test_tmsv_from_squeezing_energy():
    st_ = tmsv_from_squeezing(0.7)
    assert mean_photon_number(st_) == pytest.approx(math.sinh(0.7) ** 2, rel=1e-14)
    assert validate_state(st_).is_pure


@settings(max_examples=200, deadline=None)
@given(classes, energies)
def test_probes_are_pure_with_requested_energy(cls, n):
    st_ = make_probe(cls, n)
    diag = validate_state(st_)
    if cls is ProbeClass.THERMAL:
        assert diag.purity == pytest.approx(1 / (2 * n + 1), rel=1e-12)
    else:
        assert diag.is_pure
    assert mean_photon_number(st_) == pytest.approx(n, rel=1e-12, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(classes, energies, gammas, nbars)
def test_output_energy_relaxes_to_bath(cls, n, g, N):
    th = ChannelParams(g, N)
    out = apply_channel(make_probe(cls, n), th)
    e = math.exp(-g)
    assert mean_photon_number(out) == pytest.approx(e * n + (1 - e) * N, rel=1e-11, abs=1e-12)
    assert validate_state(out).is_valid


@settings(max_examples=100, deadline=None)
@given(classes, energies, gammas, gammas, nbars)
def test_semigroup(cls, n, g1, g2, N):
    st_ = make_probe(cls, n)
    two = apply_channel(apply_channel(st_, ChannelParams(g1, N)), ChannelParams(g2, N))
    one = apply_channel(st_, ChannelParams(g1 + g2, N))
    scale = 1 + np.abs(one.cov).max()
    np.testing.assert_allclose(two.cov, one.cov, atol=1e-12 * scale)
    np.testing.assert_allclose(two.mean, one.mean, atol=1e-12 * scale)


@settings(max_examples=100, deadline=None)
@given(classes, energies, gammas, nbars, st.floats(-math.pi, math.pi))
def test_phase_covariance(cls, n, g, N, phi):
    st_ = make_probe(cls, n)
    s = phase_rotation(st_.num_modes, 0, phi)
    th = ChannelParams(g, N)
    lhs = apply_channel(transform(st_, s), th)
    rhs = transform(apply_channel(st_, th), s)
    scale = 1 + np.abs(lhs.cov).max()
    np.testing.assert_allclose(lhs.cov, rhs.cov, atol=1e-12 * scale)
    np.testing.assert_allclose(lhs.mean, rhs.mean, atol=1e-12 * scale)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.01, 3.0), st.floats(0.0, 3.0))
def test_symplectic_spectrum_of_thermal_block(r, th_n):
    # a squeezed thermal state S (t+1/2) S^T has symplectic eigenvalue t + 1/2
    cov = (th_n + 0.5) * np.diag([math.exp(2 * r), math.exp(-2 * r)])
    assert symplectic_eigenvalues(cov)[0] == pytest.approx(th_n + 0.5, rel=1e-10)
