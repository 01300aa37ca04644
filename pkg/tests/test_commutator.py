"""Commutator engine: quadratures, table/sparse agreement, constant-symbol limit."""

import numpy as np
import pytest

from czlab import (
    DomainError,
    GridFunction,
    GridSpec,
    ParameterError,
    ResolutionError,
    apply_T,
    apply_T_batch,
    apply_Tj,
    apply_Tj_nu,
    apply_Tjn,
    builtin_kernel,
    build_net,
    convolve,
    norm,
)
from czlab.commutator import (
    apply_sparse,
    apply_table,
    gl_nodes,
    recommended_s_nodes,
    sector_kernel_table,
    theta_nodes,
)
from czlab.kernels import SCutoff, dyadic_piece


def _fields(spec, seed=0):
    rng = np.random.default_rng(seed)
    a = GridFunction(spec, rng.uniform(-1.0, 1.0, size=spec.shape))
    f = GridFunction(spec, rng.normal(size=spec.shape))
    return a, f


# ---------------------------------------------------------------------------
# chord quadratures
# ---------------------------------------------------------------------------

def test_gl_nodes_integrate_polynomials_exactly():
    nodes, weights = gl_nodes(4)
    # degree up to 2*4 - 1 on [0, 1]
    for k in range(8):
        assert np.dot(weights, nodes**k) == pytest.approx(1.0 / (k + 1), abs=1e-14)
    with pytest.raises(ParameterError):
        gl_nodes(0)


def test_theta_nodes_weights_match_cutoff():
    n = 4
    num_s = recommended_s_nodes(n)
    nodes, weights = theta_nodes(n, num_s)
    assert len(nodes) == num_s
    assert np.allclose(weights, SCutoff(n)(nodes) / num_s)
    # total weight = 1 - excluded mass of the interior cutoff
    assert weights.sum() == pytest.approx(1.0 - SCutoff(n).excluded_mass(), abs=2e-4)
    with pytest.raises(ParameterError):
        theta_nodes(4, 4)


def test_recommended_s_nodes():
    assert recommended_s_nodes(3) == 64
    assert recommended_s_nodes(8) == 256


# ---------------------------------------------------------------------------
# input validation
# ---------------------------------------------------------------------------

def test_apply_T_guards(spec2):
    kernel = builtin_kernel("riesz-x1", d=2)
    a, f = _fields(spec2)
    with pytest.raises(ParameterError):
        apply_T(kernel, a, f, r=-0.1)
    with pytest.raises(ParameterError):
        apply_T(kernel, a, f, r=0.3)
    other = GridSpec(d=2, N=64, S=1.0)
    with pytest.raises(ParameterError):
        apply_T(kernel, a, GridFunction(other, np.zeros(other.shape)), 0.0)
    cplx = GridFunction(spec2, 1j * np.ones(spec2.shape))
    with pytest.raises(DomainError):
        apply_T(kernel, cplx, f, 0.0)


# ---------------------------------------------------------------------------
# constant symbol reduces to convolution
# ---------------------------------------------------------------------------

def test_constant_symbol_is_truncated_convolution(spec2):
    kernel = builtin_kernel("riesz-x1", d=2)
    rng = np.random.default_rng(4)
    f = GridFunction(spec2, rng.normal(size=spec2.shape))
    c = 0.7
    a = GridFunction(spec2, c * np.ones(spec2.shape))
    out = apply_T(kernel, a, f, r=0.0, num_s=8)
    expect = convolve(kernel.sample(spec2, rmin=0.0), f)
    diff = np.max(np.abs(out.values - c * expect.values))
    assert diff < 1e-12 * np.max(np.abs(expect.values))


# ---------------------------------------------------------------------------
# table vs source-loop engines
# ---------------------------------------------------------------------------

def test_sparse_engine_matches_table(spec2):
    kernel = builtin_kernel("sin3", d=2)
    rng = np.random.default_rng(6)
    a = GridFunction(spec2, rng.uniform(-1, 1, size=spec2.shape))
    vals = np.zeros(spec2.shape)
    cells = rng.choice(spec2.ncells, size=9, replace=False)
    vals.flat[cells] = rng.normal(size=9)
    f = GridFunction(spec2, vals)

    ktab = dyadic_piece(kernel, -3, spec2)
    nodes, weights = gl_nodes(12)
    dense = apply_table(ktab, a, [f], nodes, weights)[0]
    sparse = apply_sparse(ktab, a, f, nodes, weights)
    scale = np.max(np.abs(dense.values)) or 1.0
    assert np.max(np.abs(dense.values - sparse.values)) < 1e-12 * scale


def test_sparse_engine_zero_cases(spec2):
    kernel = builtin_kernel("riesz-x1", d=2)
    a, _ = _fields(spec2)
    ktab = dyadic_piece(kernel, -3, spec2)
    nodes, weights = gl_nodes(4)
    zero = GridFunction(spec2, np.zeros(spec2.shape))
    out = apply_sparse(ktab, a, zero, nodes, weights)
    assert not np.any(out.values)


def test_batch_matches_singles(spec2):
    kernel = builtin_kernel("riesz-x1", d=2)
    a, f1 = _fields(spec2, 7)
    _, f2 = _fields(spec2, 8)
    batch = apply_T_batch(kernel, a, [f1, f2], r=0.0, num_s=6)
    for f, out in zip((f1, f2), batch):
        single = apply_T(kernel, a, f, r=0.0, num_s=6)
        assert np.max(np.abs(out.values - single.values)) < 1e-13
    assert apply_T_batch(kernel, a, [], r=0.0) == []


def test_linearity_in_input(spec2):
    kernel = builtin_kernel("riesz-x1", d=2)
    a, f1 = _fields(spec2, 10)
    _, f2 = _fields(spec2, 11)
    combo = GridFunction(spec2, 2.0 * f1.values - 3.0 * f2.values)
    lhs = apply_Tj(kernel, a, combo, -3, num_s=6)
    rhs = (2.0 * apply_Tj(kernel, a, f1, -3, num_s=6).values
           - 3.0 * apply_Tj(kernel, a, f2, -3, num_s=6).values)
    assert np.max(np.abs(lhs.values - rhs)) < 1e-12 * np.max(np.abs(rhs))


# ---------------------------------------------------------------------------
# mollified and sector pieces
# ---------------------------------------------------------------------------

def test_mollified_piece_strict_propagates(spec2):
    kernel = builtin_kernel("riesz-x1", d=2)
    a, f = _fields(spec2, 12)
    with pytest.raises(ResolutionError):
        apply_Tjn(kernel, a, f, j=-3, n=4)
    out = apply_Tjn(kernel, a, f, j=-3, n=4, strict=False, num_s=64)
    assert np.isfinite(np.abs(out.values)).all()


def test_sector_pieces_sum_to_mollified(spec2):
    kernel = builtin_kernel("riesz-x1", d=2)
    a, f = _fields(spec2, 13)
    j, n = -3, 3
    net = build_net(n, 0.5, 2)
    whole = apply_Tjn(kernel, a, f, j, n, num_s=64, strict=False)
    total = np.zeros(spec2.shape, dtype=np.complex128)
    for nu_idx in range(net.card):
        total += apply_Tj_nu(kernel, a, f, j, n, net, nu_idx,
                             num_s=64, strict=False).values
    scale = np.max(np.abs(whole.values)) or 1.0
    assert np.max(np.abs(total - whole.values)) < 1e-10 * scale


def test_sector_table_guards(spec2):
    kernel = builtin_kernel("riesz-x1", d=2)
    net = build_net(3, 0.5, 2)
    with pytest.raises(ParameterError):
        sector_kernel_table(kernel, -3, 3, net, net.card, spec2, strict=False)
    tab = sector_kernel_table(kernel, -3, 3, net, 0, spec2, strict=False)
    # sector restriction never grows the table support
    full = np.count_nonzero(dyadic_piece(kernel, -3, spec2).real_values)
    assert 0 < np.count_nonzero(tab.real_values) < full


def test_apply_T_three_dimensional(spec3):
    kernel = builtin_kernel("riesz-x3", d=3)
    rng = np.random.default_rng(14)
    a = GridFunction(spec3, rng.uniform(-1, 1, size=spec3.shape))
    f = GridFunction(spec3, rng.normal(size=spec3.shape))
    out = apply_T(kernel, a, f, r=0.0, num_s=4)
    assert out.spec == spec3
    assert norm(out, 2) > 0
