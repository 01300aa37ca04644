"""Application of the first-order commutator and its kernel pieces on the grid.

Every operator here has the shape

    out(x) = h^d * sum_p  k(p) * f(x - p) * avg_s a(x - (1-s) p)

where ``k`` is a kernel table on the grid (a truncated singular kernel, one
dyadic piece, a mollified piece, or a direction-sector piece), ``p`` runs over
the lattice displacements where the table is nonzero, and ``avg_s`` is a
quadrature over the chord parameter ``s`` in [0, 1], optionally damped by the
interior cutoff that removes the endpoints.

Two evaluation orders are provided and agree to rounding: a displacement loop
(`apply_T` and friends, efficient for dense ``f``) and a source loop
(`apply_sparse`, efficient when ``f`` lives on a handful of cells).
"""

from __future__ import annotations

from itertools import product

import numpy as np

from .errors import DomainError, ParameterError
from .grid import GridFunction, GridSpec, interp_periodic, minimal_image_index
from .kernels import KernelSpec, SCutoff, dyadic_piece, mollified_piece
from .microlocal import DirectionNet

__all__ = [
    "gl_nodes",
    "theta_nodes",
    "recommended_s_nodes",
    "sector_kernel_table",
    "apply_T",
    "apply_T_batch",
    "apply_Tj",
    "apply_Tjn",
    "apply_Tjn_batch",
    "apply_Tj_nu",
    "apply_table",
    "apply_sparse",
]


# ---------------------------------------------------------------------------
# chord quadratures
# ---------------------------------------------------------------------------

def gl_nodes(num_s: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights for the plain average over [0, 1]."""
    if num_s < 1:
        raise ParameterError("need at least one chord node")
    x, w = np.polynomial.legendre.leggauss(num_s)
    return (x + 1.0) / 2.0, w / 2.0


def theta_nodes(n: int, num_s: int) -> tuple[np.ndarray, np.ndarray]:
    """Midpoint nodes on [0, 1] with weights damped by the interior cutoff.

    Uniform nodes resolve the cutoff transitions (width ``1/n^2``) as soon as
    ``num_s`` is a few times ``n^2``; see :func:`recommended_s_nodes`.
    """
    if num_s < 8:
        raise ParameterError("need at least 8 chord nodes for the damped average")
    s = (np.arange(num_s) + 0.5) / num_s
    return s, SCutoff(n)(s) / num_s


def recommended_s_nodes(n: int) -> int:
    """Node count that resolves the interior cutoff transitions comfortably."""
    return max(64, 4 * n * n)


# ---------------------------------------------------------------------------
# shared validation
# ---------------------------------------------------------------------------

def _check_inputs(kernel: KernelSpec, a: GridFunction, f: GridFunction) -> np.ndarray:
    if a.spec != f.spec:
        raise ParameterError("symbol and input live on different grids")
    if kernel.d != a.spec.d:
        raise ParameterError("kernel dimension does not match the grid")
    if not a.is_real():
        raise DomainError("the symbol a must be real-valued")
    return a.real_values


def _check_batch(fs: list[GridFunction], spec: GridSpec) -> None:
    for f in fs:
        if f.spec != spec:
            raise ParameterError("all batch inputs must share one grid")


# ---------------------------------------------------------------------------
# core engine
# ---------------------------------------------------------------------------

def _segment_average(a_vals: np.ndarray, delta: np.ndarray, s_nodes: np.ndarray,
                     s_weights: np.ndarray) -> np.ndarray:
    """Grid values of ``sum_i w_i a(x - (1 - s_i) p)`` for ``p = delta * h``.

    The shifted evaluations are periodic bilinear interpolations with a
    constant offset, so each is a weighted sum of 2^d integer rolls of ``a``.
    Nodes whose floor offsets coincide share rolls: the total number of rolls
    is of order ``|delta|_1``, independent of the node count.
    """
    d = a_vals.ndim
    offsets = np.outer(1.0 - s_nodes, np.asarray(delta, dtype=np.float64))
    base = np.floor(offsets).astype(np.int64)
    frac = offsets - base
    coeffs: dict[tuple[int, ...], float] = {}
    for corner in product((0, 1), repeat=d):
        w = np.asarray(s_weights, dtype=np.float64).copy()
        for ax in range(d):
            w = w * (frac[:, ax] if corner[ax] else 1.0 - frac[:, ax])
        shifts = base + np.asarray(corner, dtype=np.int64)
        uniq, inv = np.unique(shifts, axis=0, return_inverse=True)
        sums = np.bincount(inv, weights=w, minlength=len(uniq))
        for row, val in zip(uniq, sums):
            if val != 0.0:
                key = tuple(int(v) for v in row)
                coeffs[key] = coeffs.get(key, 0.0) + float(val)
    out = np.zeros_like(a_vals)
    axes = tuple(range(d))
    for shift, cv in coeffs.items():
        out += cv * np.roll(a_vals, shift=shift, axis=axes)
    return out


def _nonzero_displacements(table: np.ndarray, spec: GridSpec) -> np.ndarray:
    idx = np.argwhere(table != 0)
    return minimal_image_index(idx, spec.N)


def apply_table(ktab: GridFunction, a: GridFunction, fs: list[GridFunction],
                s_nodes: np.ndarray, s_weights: np.ndarray) -> list[GridFunction]:
    """Displacement-loop evaluation against an explicit kernel table.

    The chord average of ``a`` is computed once per displacement and shared
    across the whole batch ``fs``.
    """
    spec = ktab.spec
    if a.spec != spec:
        raise ParameterError("symbol and kernel table live on different grids")
    _check_batch(fs, spec)
    if not a.is_real():
        raise DomainError("the symbol a must be real-valued")
    if not ktab.is_real():
        raise DomainError("kernel tables must be real-valued")
    a_vals = a.real_values
    k_vals = ktab.real_values
    f_vals = [f.values for f in fs]
    outs = [np.zeros(spec.shape, dtype=np.complex128) for _ in fs]
    axes = tuple(range(spec.d))
    for delta in _nonzero_displacements(k_vals, spec):
        kv = k_vals[tuple(delta % spec.N)]
        avg = _segment_average(a_vals, delta, s_nodes, s_weights)
        for t, fv in enumerate(f_vals):
            outs[t] += kv * np.roll(fv, shift=delta, axis=axes) * avg
    hd = spec.h**spec.d
    return [GridFunction(spec, hd * o) for o in outs]


# ---------------------------------------------------------------------------
# public operators
# ---------------------------------------------------------------------------

def apply_T(kernel: KernelSpec, a: GridFunction, f: GridFunction, r: float,
            num_s: int = 32) -> GridFunction:
    """Truncated commutator: displacements with ``r < |p| <= S/4``."""
    return apply_T_batch(kernel, a, [f], r, num_s=num_s)[0]


def apply_T_batch(kernel: KernelSpec, a: GridFunction, fs: list[GridFunction],
                  r: float, num_s: int = 32) -> list[GridFunction]:
    if not fs:
        return []
    _check_inputs(kernel, a, fs[0])
    spec = fs[0].spec
    if r < 0 or r > spec.S / 4.0:
        raise ParameterError(f"truncation radius must lie in [0, S/4], got {r}")
    ktab = kernel.sample(spec, rmin=r)
    nodes, weights = gl_nodes(num_s)
    return apply_table(ktab, a, fs, nodes, weights)


def apply_Tj(kernel: KernelSpec, a: GridFunction, f: GridFunction, j: int,
             num_s: int = 32) -> GridFunction:
    """Commutator piece with the smooth dyadic ring at scale ``2^j``."""
    _check_inputs(kernel, a, f)
    ktab = dyadic_piece(kernel, j, f.spec)
    nodes, weights = gl_nodes(num_s)
    return apply_table(ktab, a, [f], nodes, weights)[0]


def apply_Tjn(kernel: KernelSpec, a: GridFunction, f: GridFunction, j: int,
              n: int, num_s: int | None = None, strict: bool = True) -> GridFunction:
    return apply_Tjn_batch(kernel, a, [f], j, n, num_s=num_s, strict=strict)[0]


def apply_Tjn_batch(kernel: KernelSpec, a: GridFunction, fs: list[GridFunction],
                    j: int, n: int, num_s: int | None = None,
                    strict: bool = True) -> list[GridFunction]:
    """Mollified dyadic piece with endpoint-damped chord average.

    ``strict=False`` lets the kernel mollification degrade to the grid scale
    instead of raising when the smoothing radius falls below two cells.
    """
    if not fs:
        return []
    _check_inputs(kernel, a, fs[0])
    ktab = mollified_piece(kernel, j, n, fs[0].spec, strict=strict)
    nodes, weights = theta_nodes(n, num_s if num_s is not None else recommended_s_nodes(n))
    return apply_table(ktab, a, fs, nodes, weights)


def sector_kernel_table(kernel: KernelSpec, j: int, n: int, net: DirectionNet,
                        nu_idx: int, spec: GridSpec, strict: bool = True) -> GridFunction:
    """Mollified piece restricted to one direction sector of the net."""
    if net.d != spec.d:
        raise ParameterError("direction net dimension does not match the grid")
    if not 0 <= nu_idx < net.card:
        raise ParameterError(f"sector index {nu_idx} out of range for net of size {net.card}")
    ktab = mollified_piece(kernel, j, n, spec, strict=strict)
    vals = ktab.real_values.copy()
    mask = vals != 0
    if np.any(mask):
        pts = np.stack([np.broadcast_to(spec.coord_component(ax), spec.shape)[mask]
                        for ax in range(spec.d)], axis=-1)
        vals[mask] *= net.chi(nu_idx, pts)
    return GridFunction(spec, vals)


def apply_Tj_nu(kernel: KernelSpec, a: GridFunction, f: GridFunction, j: int,
                n: int, net: DirectionNet, nu_idx: int, num_s: int | None = None,
                strict: bool = True) -> GridFunction:
    """Single-sector commutator piece; summing over all sectors recovers
    :func:`apply_Tjn` because the sector weights add to one off the origin."""
    _check_inputs(kernel, a, f)
    ktab = sector_kernel_table(kernel, j, n, net, nu_idx, f.spec, strict=strict)
    if not np.any(ktab.real_values):
        return GridFunction(f.spec, np.zeros(f.spec.shape))
    nodes, weights = theta_nodes(n, num_s if num_s is not None else recommended_s_nodes(n))
    return apply_table(ktab, a, [f], nodes, weights)[0]


# ---------------------------------------------------------------------------
# source-loop evaluation for sparse inputs
# ---------------------------------------------------------------------------

def apply_sparse(ktab: GridFunction, a: GridFunction, f: GridFunction,
                 s_nodes: np.ndarray, s_weights: np.ndarray) -> GridFunction:
    """Source-loop evaluation: loops over the nonzero cells of ``f``.

    For each source cell ``y`` the response is supported where the kernel
    table is, and the symbol is probed along the chords ``y + s (x - y)`` with
    displacements taken in the minimal image.  Agrees with
    :func:`apply_table` to rounding; cost scales with the number of sources
    times the kernel support, not with the grid.
    """
    spec = ktab.spec
    if a.spec != spec or f.spec != spec:
        raise ParameterError("kernel table, symbol and input must share one grid")
    if not a.is_real():
        raise DomainError("the symbol a must be real-valued")
    if not ktab.is_real():
        raise DomainError("kernel tables must be real-valued")
    k_vals = ktab.real_values
    deltas = _nonzero_displacements(k_vals, spec)
    if deltas.size == 0 or not np.any(f.values):
        return GridFunction(spec, np.zeros(spec.shape))
    kv = k_vals[tuple((deltas % spec.N).T)]
    a_vals = a.real_values
    sources = np.argwhere(f.values != 0)
    out = np.zeros(spec.shape, dtype=np.complex128)
    hd = spec.h**spec.d
    nodes = np.asarray(s_nodes, dtype=np.float64)
    weights = np.asarray(s_weights, dtype=np.float64)
    for y in sources:
        mass = f.values[tuple(y)] * hd
        # chord probes y + s * delta for every kernel displacement, in index units
        avg = np.zeros(deltas.shape[0])
        for s, w in zip(nodes, weights):
            if w == 0.0:
                continue
            pts = y[None, :] + s * deltas
            avg += w * interp_periodic(a_vals, pts)
        targets = tuple(((y[None, :] + deltas) % spec.N).T)
        np.add.at(out, targets, mass * kv * avg)
    return GridFunction(spec, out)
