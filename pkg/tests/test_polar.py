"""Polar-form ring kernels: plain norms, mollification error, guards."""

import numpy as np
import pytest

from czlab import DomainError, ParameterError
from czlab.harness.polar import PolarRing, ring_grad_l1, ring_l1_error
from czlab.kernels import dyadic_ring_profile


def test_ring_guards():
    with pytest.raises(ParameterError):
        PolarRing(modes=(), delta=0.01)
    with pytest.raises(DomainError):
        PolarRing(modes=((1, 1.0, 0.0),), delta=0.3)
    with pytest.raises(DomainError):
        PolarRing(modes=((1, 1.0, 0.0),), delta=0.0)


def test_plain_l1_matches_direct_quadrature():
    # K(x) = ring(|x|) cos(theta) / |x|^2 in the plane; its l1 norm factors as
    # (integral of |cos|) times (radial integral of ring(r)/r)
    ring = PolarRing(modes=((1, 1.0, 0.0),), delta=0.01)
    r = np.linspace(0.4, 1.3, 400001)
    radial = np.trapezoid(dyadic_ring_profile(r, 0) / r, r)
    expect = 4.0 * radial
    assert ring.l1_norm_plain() == pytest.approx(expect, rel=1e-6)


def test_mode_retention_split():
    modes = tuple((1 << l, 1.0, 0.0) for l in range(21))
    ring = PolarRing(modes=modes, delta=0.01)
    kept = {k for k, _, _ in ring.retained()}
    dropped = {k for k, _, _ in ring.tail()}
    assert kept | dropped == {1 << l for l in range(21)}
    assert all(k * 0.01 <= 48.0 for k in kept)
    assert all(k * 0.01 > 48.0 for k in dropped)


def test_l1_error_decreases_with_delta():
    errs = [ring_l1_error("riesz-x1", d) for d in (0.04, 0.02, 0.01)]
    assert all(e > 0 for e in errs)
    assert errs[0] > errs[1] > errs[2]


def test_grad_l1_grows_as_delta_shrinks():
    g_coarse = ring_grad_l1("riesz-x1", 0.04)
    g_fine = ring_grad_l1("riesz-x1", 0.01)
    assert 0 < g_coarse < g_fine


def test_string_and_spec_kernels_agree():
    from czlab import builtin_kernel

    by_name = ring_l1_error("sin3", 0.02)
    by_spec = ring_l1_error(builtin_kernel("sin3", d=2), 0.02)
    assert by_name == pytest.approx(by_spec, rel=1e-12)
