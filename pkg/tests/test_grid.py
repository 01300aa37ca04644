"""Grid layer: lattice geometry, transforms, norms, interpolation, file io."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from czlab import (
    DomainError,
    GridFunction,
    GridSpec,
    ParameterError,
    ResolutionError,
    SupportError,
    convolve,
    dft,
    idft,
    interp_periodic,
    minimal_image_index,
    multiplier_apply,
    norm,
    superlevel_measure,
)
from czlab.grid import (
    export_slice_csv,
    load_grid,
    load_slice_csv,
    require_central_support,
    resolvable_scale,
    save_grid,
)


# ---------------------------------------------------------------------------
# GridSpec
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("bad", [
    dict(d=1, N=32, S=1.0),
    dict(d=4, N=32, S=1.0),
    dict(d=2, N=12, S=1.0),   # not a power of two
    dict(d=2, N=4, S=1.0),    # too small
    dict(d=2, N=32, S=0.0),
    dict(d=2, N=32, S=-1.0),
])
def test_spec_rejects_bad_geometry(bad):
    with pytest.raises(ParameterError):
        GridSpec(**bad)


def test_spec_derived_quantities():
    spec = GridSpec(d=2, N=16, S=2.0)
    assert spec.h == 0.125
    assert spec.shape == (16, 16)
    assert spec.ncells == 256
    coords = spec.axis_coords()
    assert coords[0] == 0.0
    assert coords[1] == spec.h
    # wrap point sits at -S/2, not +S/2
    assert coords[spec.N // 2] == -1.0
    assert coords[-1] == -spec.h


def test_radius_is_minimal_image(spec2):
    r = spec2.radius()
    assert r[0, 0] == 0.0
    assert r.max() <= spec2.S / 2.0 * np.sqrt(2) + 1e-12
    # reflection symmetry through the origin
    assert r[1, 0] == r[-1, 0]
    assert r[3, 7] == r[-3, -7]


def test_freq_axis_nyquist_sign():
    spec = GridSpec(d=2, N=8, S=1.0)
    fx = spec.freq_axis()
    # the Nyquist slot is folded to the positive side
    assert fx[4] == 2.0 * np.pi * 4


# ---------------------------------------------------------------------------
# GridFunction
# ---------------------------------------------------------------------------

def test_function_shape_guard(spec2):
    with pytest.raises(ParameterError):
        GridFunction(spec2, np.zeros((3, 3)))


def test_function_values_read_only(rand2):
    with pytest.raises(ValueError):
        rand2.values[0, 0] = 5.0


def test_is_real_detects_imaginary(spec2):
    f = GridFunction(spec2, np.ones(spec2.shape) * (1 + 1e-6j))
    assert not f.is_real()
    assert GridFunction(spec2, np.ones(spec2.shape)).is_real()


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def test_dft_roundtrip(rand2):
    back = idft(dft(rand2))
    assert np.max(np.abs(back.values - rand2.values)) < 1e-13


def test_parseval(rand2):
    # with the h^d forward weight: ||f||_2^2 = S^-d sum |F_k|^2
    F = dft(rand2)
    lhs = norm(rand2, 2) ** 2
    rhs = float(np.sum(np.abs(F.values) ** 2)) / rand2.spec.S ** rand2.spec.d
    assert abs(lhs - rhs) < 1e-12 * max(lhs, 1.0)


def test_convolve_with_discrete_delta(rand2):
    spec = rand2.spec
    delta = np.zeros(spec.shape)
    delta[0, 0] = 1.0 / spec.h**spec.d
    out = convolve(rand2, GridFunction(spec, delta))
    assert np.max(np.abs(out.values - rand2.values)) < 1e-12


def test_convolve_grid_mismatch(rand2):
    other = GridSpec(d=2, N=64, S=1.0)
    with pytest.raises(ParameterError):
        convolve(rand2, GridFunction(other, np.zeros(other.shape)))


def test_multiplier_identity(rand2):
    out = multiplier_apply(rand2, np.ones(rand2.spec.shape))
    assert np.max(np.abs(out.values - rand2.values)) < 1e-13
    with pytest.raises(ParameterError):
        multiplier_apply(rand2, np.ones((3, 3)))


# ---------------------------------------------------------------------------
# norms and level sets
# ---------------------------------------------------------------------------

def test_norm_constant_field():
    spec = GridSpec(d=2, N=8, S=1.0)
    f = GridFunction(spec, 2.0 * np.ones(spec.shape))
    assert norm(f, 1) == pytest.approx(2.0, abs=1e-14)
    assert norm(f, 2) == pytest.approx(2.0, abs=1e-14)
    assert norm(f, "inf") == 2.0
    assert norm(f, np.inf) == 2.0


def test_norm_rejects_other_exponents(rand2):
    with pytest.raises(DomainError):
        norm(rand2, 3)


def test_superlevel_strict_exceedance():
    spec = GridSpec(d=2, N=8, S=1.0)
    vals = np.zeros(spec.shape)
    vals[0, 0] = 2.0
    vals[0, 1] = 1.0
    f = GridFunction(spec, vals)
    cell = spec.h**2
    assert superlevel_measure(f, 0.5) == pytest.approx(2 * cell)
    # exact equality does not count
    assert superlevel_measure(f, 1.0) == pytest.approx(1 * cell)
    assert superlevel_measure(f, 2.0) == 0.0
    with pytest.raises(DomainError):
        superlevel_measure(f, -0.1)


def test_minimal_image_index_frozen():
    out = minimal_image_index(np.arange(8), 8)
    assert out.tolist() == [0, 1, 2, 3, -4, -3, -2, -1]


# ---------------------------------------------------------------------------
# interpolation
# ---------------------------------------------------------------------------

def test_interp_exact_at_lattice(rand2):
    pts = np.array([[0.0, 0.0], [3.0, 5.0], [31.0, 31.0]])
    out = interp_periodic(rand2.real_values, pts)
    expect = [rand2.real_values[0, 0], rand2.real_values[3, 5], rand2.real_values[31, 31]]
    assert np.allclose(out, expect, atol=1e-14)


def test_interp_wraps_periodically(rand2):
    v = rand2.real_values
    out = interp_periodic(v, np.array([[31.5, 0.0]]))
    assert out[0] == pytest.approx(0.5 * (v[31, 0] + v[0, 0]), abs=1e-14)


def test_interp_component_guard(rand2):
    with pytest.raises(ParameterError):
        interp_periodic(rand2.real_values, np.zeros((4, 3)))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.floats(-100, 100), st.floats(-100, 100)),
                min_size=1, max_size=8))
def test_interp_never_exceeds_range(pts):
    # convex combination of surrounding samples: output stays in [min, max]
    rng = np.random.default_rng(0)
    v = rng.normal(size=(8, 8))
    out = interp_periodic(v, np.asarray(pts))
    assert np.all(out >= v.min() - 1e-12)
    assert np.all(out <= v.max() + 1e-12)


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=-4.0, max_value=4.0, allow_nan=False))
def test_norm_scales_homogeneously(c):
    spec = GridSpec(d=2, N=8, S=1.0)
    rng = np.random.default_rng(1)
    f = GridFunction(spec, rng.normal(size=spec.shape))
    g = GridFunction(spec, c * f.values)
    for p in (1, 2, "inf"):
        assert norm(g, p) == pytest.approx(abs(c) * norm(f, p), rel=1e-12, abs=1e-12)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_save_load_roundtrip_real(tmp_path, rand2):
    path = tmp_path / "field.bin"
    save_grid(rand2, path)
    back = load_grid(path)
    assert back.spec == rand2.spec
    assert np.array_equal(back.values, rand2.values)


def test_save_load_roundtrip_complex(tmp_path, spec2):
    rng = np.random.default_rng(2)
    f = GridFunction(spec2, rng.normal(size=spec2.shape) + 1j * rng.normal(size=spec2.shape))
    path = tmp_path / "field.bin"
    save_grid(f, path)
    back = load_grid(path)
    assert np.array_equal(back.values, f.values)


def test_slice_csv_roundtrip(tmp_path, rand2):
    path = tmp_path / "slice.csv"
    export_slice_csv(rand2, path, axis=0, index=(5,))
    xs, re_, im_ = load_slice_csv(path)
    assert np.array_equal(xs, rand2.spec.axis_coords())
    assert np.array_equal(re_, rand2.real_values[:, 5])
    assert np.all(im_ == 0.0)


def test_slice_csv_guards(tmp_path, rand2):
    with pytest.raises(ParameterError):
        export_slice_csv(rand2, tmp_path / "x.csv", axis=2)
    with pytest.raises(ParameterError):
        export_slice_csv(rand2, tmp_path / "x.csv", axis=0, index=(1, 2))


# ---------------------------------------------------------------------------
# support and resolution guards
# ---------------------------------------------------------------------------

def test_central_support_guard(spec2):
    vals = np.zeros(spec2.shape)
    vals[0, 0] = 1.0
    require_central_support(GridFunction(spec2, vals))  # origin is central
    vals2 = np.zeros(spec2.shape)
    vals2[spec2.N // 2, 0] = 1.0
    with pytest.raises(SupportError):
        require_central_support(GridFunction(spec2, vals2))


def test_resolvable_scale(spec2):
    resolvable_scale(spec2, 2.0 * spec2.h)
    with pytest.raises(ResolutionError):
        resolvable_scale(spec2, 1.5 * spec2.h)
