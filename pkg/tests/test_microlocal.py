"""Direction nets, sector multipliers, frequency shells, smoothing, tubes."""

import numpy as np
import pytest

from czlab import (
    DomainError,
    GridFunction,
    GridSpec,
    ParameterError,
    ScaleError,
    build_net,
    norm,
)
from czlab.microlocal import (
    SectorMultiplier,
    apply_Pm,
    apply_lp,
    lp_kmin,
    lp_lowpass_symbol,
    lp_shell_symbol,
    lp_shell_wide_symbol,
    overlap_count,
    tube_majorant,
    tube_mass_estimate,
)


# ---------------------------------------------------------------------------
# direction nets
# ---------------------------------------------------------------------------

def test_net_parameter_guards():
    with pytest.raises(DomainError):
        build_net(1, 0.5, 2)
    with pytest.raises(DomainError):
        build_net(4, 0.05, 2)
    with pytest.raises(DomainError):
        build_net(4, 0.5, 4)


def test_net_scale_ratios():
    net = build_net(4, 0.5, 2)
    assert net.separation == 2.0 ** (-4.0 - 2.0)
    assert net.cap_plateau == 2.0 * net.separation
    assert net.cap_support == 4.0 * net.separation


def test_circle_net_separated_and_maximal():
    net = build_net(5, 0.5, 2)
    delta = net.separation
    # pairwise separation, exact via sorted angles
    ang = np.sort(np.arctan2(net.vectors[:, 1], net.vectors[:, 0]))
    gaps = np.diff(np.concatenate([ang, [ang[0] + 2.0 * np.pi]]))
    min_chord = 2.0 * np.sin(gaps.min() / 2.0)
    assert min_chord >= delta - 1e-12
    # cardinality comparable to the inverse separation
    assert 0.5 * 2.0 * np.pi / delta <= net.card <= 2.0 * 2.0 * np.pi / delta
    # maximality: every direction is within one separation (plus greedy slack)
    rng = np.random.default_rng(0)
    probe = rng.normal(size=(512, 2))
    probe /= np.linalg.norm(probe, axis=1, keepdims=True)
    dist = np.sqrt(((probe[:, None, :] - net.vectors[None, :, :]) ** 2).sum(-1))
    assert dist.min(axis=1).max() < delta + net.maximality_tol


def test_sphere_net_separated_and_maximal():
    net = build_net(2, 0.25, 3)
    delta = net.separation
    sub = net.vectors[:: max(1, net.card // 256)]
    d2 = ((sub[:, None, :] - sub[None, :, :]) ** 2).sum(-1)
    np.fill_diagonal(d2, 1.0)
    assert np.sqrt(d2.min()) >= delta - 1e-12
    rng = np.random.default_rng(1)
    probe = rng.normal(size=(128, 3))
    probe /= np.linalg.norm(probe, axis=1, keepdims=True)
    dist = np.sqrt(((probe[:, None, :] - net.vectors[None, :, :]) ** 2).sum(-1))
    assert dist.min(axis=1).max() < delta + net.maximality_tol


def test_net_memoized():
    assert build_net(4, 0.5, 2) is build_net(4, 0.5, 2)


def test_cap_cutoffs_and_partition():
    net = build_net(4, 0.5, 2)
    # the bump is 1 at its own vector and 0 at the antipode
    assert net.chi_tilde(0, net.vectors[0]) == 1.0
    assert net.chi_tilde(0, -net.vectors[0]) == 0.0
    rng = np.random.default_rng(2)
    xhat = rng.normal(size=(256, 2))
    xhat /= np.linalg.norm(xhat, axis=1, keepdims=True)
    denom = net.partition_denominator(xhat)
    assert denom.min() >= 1.0 - 1e-12
    # normalized sector weights sum to one away from the origin
    x = 0.3 * xhat
    total = sum(net.chi(i, x) for i in range(net.card))
    assert np.max(np.abs(total - 1.0)) < 1e-12
    # and vanish at the origin
    assert net.chi(0, np.zeros((1, 2)))[0] == 0.0


def test_caps_touching_contains_own_cap():
    net = build_net(4, 0.5, 2)
    hits = net.caps_touching(net.vectors[3])
    assert 3 in hits
    # support radius is four separations: at most four neighbours per side
    assert len(hits) <= 9


# ---------------------------------------------------------------------------
# sector multipliers
# ---------------------------------------------------------------------------

def test_sector_multiplier_guards():
    with pytest.raises(ParameterError):
        SectorMultiplier(4, 0.5, (1.0, 0.0), width_power=3)
    with pytest.raises(ParameterError):
        SectorMultiplier(4, 0.5, (2.0, 0.0))


def test_sector_multiplier_symbol(spec2):
    mult = SectorMultiplier(4, 0.5, (1.0, 0.0))
    sym = mult.symbol(spec2)
    assert sym.min() >= 0.0 and sym.max() <= 1.0
    assert sym[0, 0] == 0.0
    # frequencies orthogonal to nu pass, parallel ones are cut
    assert sym[0, 1] == 1.0
    rng = np.random.default_rng(3)
    f = GridFunction(spec2, rng.normal(size=spec2.shape))
    out = mult.apply(f)
    assert norm(out, 2) <= norm(f, 2) + 1e-12


def test_overlap_count_at_least_one():
    net = build_net(4, 0.5, 2)
    assert overlap_count(net, num_samples=256) >= 1.0


# ---------------------------------------------------------------------------
# frequency shells
# ---------------------------------------------------------------------------

def test_shell_telescoping_exact(spec2):
    kmin = lp_kmin(spec2)
    assert np.all(lp_lowpass_symbol(spec2, kmin) == 1.0)
    m = kmin + 6
    total = lp_lowpass_symbol(spec2, m)
    for k in range(kmin, m):
        total = total + lp_shell_symbol(spec2, k)
    assert np.max(np.abs(total - 1.0)) < 1e-14


def test_wide_shell_is_plateau_over_shell(spec2):
    k = lp_kmin(spec2) + 4
    shell = lp_shell_symbol(spec2, k)
    wide = lp_shell_wide_symbol(spec2, k)
    assert np.max(np.abs(wide * shell - shell)) < 1e-14


def test_apply_lp_kinds(spec2, rand2):
    for kind in ("shell", "wide", "lowpass"):
        out = apply_lp(rand2, kind, lp_kmin(spec2) + 3)
        assert out.spec == spec2
    with pytest.raises(ParameterError):
        apply_lp(rand2, "band", 0)


def test_apply_Pm_preserves_mean(rand2):
    sm = apply_Pm(rand2, -4)
    before = rand2.values.sum()
    after = sm.values.sum()
    assert abs(after - before) < 1e-10 * max(abs(before), 1.0)
    # smoothing contracts the sup of rough data
    assert np.abs(sm.values).max() < np.abs(rand2.values).max()


# ---------------------------------------------------------------------------
# tubes
# ---------------------------------------------------------------------------

def test_tube_majorant_geometry():
    spec = GridSpec(d=2, N=256, S=1.0)
    j, n, gamma = -4, 7, 0.125
    nu = np.array([1.0, 0.0])
    tube = tube_majorant(spec, j, n, gamma, nu)
    vals = tube.real_values
    assert set(np.unique(vals)) == {0.0, 2.0 ** (-j * spec.d)}
    # mass within a factor of two of the continuum box volume estimate
    est = tube_mass_estimate(spec.d, j, n, gamma)
    assert est / 2.0 <= norm(tube, 1) <= est * 2.0
    # support box: along nu at most 2^(j+2), across at most 2^(j+2-gamma n)
    x0 = np.broadcast_to(spec.coord_component(0), spec.shape)
    x1 = np.broadcast_to(spec.coord_component(1), spec.shape)
    on = vals > 0
    assert np.abs(x0[on]).max() <= 2.0 ** (j + 2) + 1e-12
    assert np.abs(x1[on]).max() <= 2.0 ** (j + 2 - gamma * n) + 1e-12


def test_tube_majorant_guards(spec2):
    with pytest.raises(ScaleError):
        tube_majorant(spec2, 0, 4, 0.5, np.array([1.0, 0.0]))
    with pytest.raises(ParameterError):
        tube_majorant(spec2, -3, 4, 0.5, np.array([2.0, 0.0]))
    with pytest.raises(ParameterError):
        tube_majorant(spec2, -3, 4, 0.5, np.ones((2, 2)))
