"""Periodic grid model: sampled functions on a torus with quadrature-weighted FFT.

All numerics in this package live on the torus ``[-S/2, S/2)^d`` sampled by an
``N^d`` lattice with spacing ``h = S/N``.  Arrays are stored in FFT order: the
coordinate attached to index ``i`` along an axis is ``i*h`` for ``i < N/2`` and
``(i-N)*h`` otherwise, so index 0 is the origin and test data placed in the
central quarter wraps nowhere.

Transform conventions
---------------------
The forward transform carries the quadrature weight ``h^d``::

    dft(f)[k] = h^d * sum_x f(x) exp(-i <x, xi_k>),   xi_k = (2*pi/S) * k,

with integer frequency vectors ``k`` in centered representatives
``(-N/2, N/2]``.  Under this normalization continuum multiplier formulas
transfer verbatim, ``dft(convolve(f, g)) == dft(f) * dft(g)`` exactly, and
Parseval reads ``norm(f, 2)**2 == S^-d * sum_k |dft(f)[k]|^2``.

Norms use the Riemann weight: ``norm(f, 1) = h^d * sum |f|`` and so on;
``superlevel_measure`` counts cells times ``h^d``.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError, ParameterError, ResolutionError

__all__ = [
    "GridSpec",
    "GridFunction",
    "dft",
    "idft",
    "convolve",
    "norm",
    "superlevel_measure",
    "multiplier_apply",
    "interp_periodic",
    "minimal_image_index",
    "save_grid",
    "load_grid",
    "export_slice_csv",
]


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Geometry of the sampling lattice: dimension, points per axis, side length."""

    d: int
    N: int
    S: float

    def __post_init__(self) -> None:
        if self.d not in (2, 3):
            raise ParameterError(f"GridSpec.d must be 2 or 3, got {self.d}")
        if not isinstance(self.N, int) or self.N < 8 or not _is_power_of_two(self.N):
            raise ParameterError(f"GridSpec.N must be a power of two >= 8, got {self.N}")
        if not (self.S > 0):
            raise ParameterError(f"GridSpec.S must be positive, got {self.S}")

    @property
    def h(self) -> float:
        return self.S / self.N

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.d

    @property
    def ncells(self) -> int:
        return self.N**self.d

    def axis_coords(self) -> np.ndarray:
        """Signed physical coordinates along one axis, FFT order."""
        k = np.arange(self.N)
        k = np.where(k < self.N // 2, k, k - self.N)
        return k * self.h

    def coord_component(self, axis: int) -> np.ndarray:
        """Coordinate ``x_axis`` broadcast over the full lattice."""
        c = self.axis_coords()
        shape = [1] * self.d
        shape[axis] = self.N
        return c.reshape(shape)

    def radius(self) -> np.ndarray:
        """Euclidean norm of the minimal-image coordinate at every cell."""
        r2 = np.zeros(self.shape)
        for ax in range(self.d):
            r2 = r2 + self.coord_component(ax) ** 2
        return np.sqrt(r2)

    def freq_axis(self) -> np.ndarray:
        """Frequency coordinates ``(2*pi/S) * k`` with ``k`` in ``(-N/2, N/2]``."""
        k = np.fft.fftfreq(self.N, d=1.0 / self.N)
        k[self.N // 2] = self.N // 2
        return (2.0 * np.pi / self.S) * k

    def freq_component(self, axis: int) -> np.ndarray:
        c = self.freq_axis()
        shape = [1] * self.d
        shape[axis] = self.N
        return c.reshape(shape)

    def freq_radius(self) -> np.ndarray:
        r2 = np.zeros(self.shape)
        for ax in range(self.d):
            r2 = r2 + self.freq_component(ax) ** 2
        return np.sqrt(r2)


@dataclass(frozen=True)
class GridFunction:
    """A complex-valued sample array bound to its :class:`GridSpec`.

    Values are stored read-only; build modified copies with :meth:`with_values`.
    """

    spec: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != self.spec.shape:
            raise ParameterError(
                f"values shape {v.shape} does not match grid shape {self.spec.shape}"
            )
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def with_values(self, values: np.ndarray) -> "GridFunction":
        return GridFunction(self.spec, values)

    @property
    def real_values(self) -> np.ndarray:
        return self.values.real

    def is_real(self, tol: float = 1e-12) -> bool:
        scale = np.max(np.abs(self.values)) or 1.0
        return bool(np.max(np.abs(self.values.imag)) <= tol * scale)


def dft(f: GridFunction) -> GridFunction:
    """Forward transform with the ``h^d`` quadrature weight (see module docs)."""
    w = f.spec.h**f.spec.d
    return f.with_values(np.fft.fftn(f.values) * w)


def idft(F: GridFunction) -> GridFunction:
    """Inverse of :func:`dft`; round-trips to machine precision."""
    w = F.spec.h**F.spec.d
    return F.with_values(np.fft.ifftn(F.values) / w)


def convolve(f: GridFunction, g: GridFunction) -> GridFunction:
    """Periodic convolution ``(f*g)(x) = h^d sum_y f(y) g(x-y)`` via FFT."""
    if f.spec != g.spec:
        raise ParameterError("convolve: operands live on different grids")
    w = f.spec.h**f.spec.d
    return f.with_values(np.fft.ifftn(np.fft.fftn(f.values) * np.fft.fftn(g.values)) * w)


def multiplier_apply(f: GridFunction, symbol: np.ndarray) -> GridFunction:
    """Apply a Fourier multiplier given by its symbol sampled on the frequency lattice."""
    symbol = np.asarray(symbol)
    if symbol.shape != f.spec.shape:
        raise ParameterError("multiplier symbol shape does not match the grid")
    return f.with_values(np.fft.ifftn(np.fft.fftn(f.values) * symbol))


def norm(f: GridFunction, p: float | str) -> float:
    """Lebesgue norm with Riemann weight; ``p`` in {1, 2, inf} (or the string "inf")."""
    a = np.abs(f.values)
    w = f.spec.h**f.spec.d
    if p == 1:
        return float(w * a.sum())
    if p == 2:
        return float(np.sqrt(w * (a**2).sum()))
    if p == "inf" or p == np.inf or p == float("inf"):
        return float(a.max())
    raise DomainError(f"norm: p must be 1, 2 or inf, got {p}")


def superlevel_measure(f: GridFunction, lam: float) -> float:
    """Measure of ``{|f| > lam}``: ``h^d`` times the strict-exceedance cell count."""
    if lam < 0:
        raise DomainError("superlevel_measure: level must be >= 0")
    w = f.spec.h**f.spec.d
    return float(w * np.count_nonzero(np.abs(f.values) > lam))


def minimal_image_index(delta: np.ndarray, N: int) -> np.ndarray:
    """Map integer index displacements to their centered representatives in [-N/2, N/2)."""
    return (np.asarray(delta) + N // 2) % N - N // 2


def interp_periodic(values: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Periodic multilinear interpolation.

    Parameters
    ----------
    values:
        Sample array of shape ``(N,)*d``.
    pts:
        Evaluation points in index units, shape ``(..., d)``; arbitrary reals,
        wrapped periodically.

    Returns
    -------
    Array of shape ``pts.shape[:-1]``.  The interpolant is a convex combination
    of the ``2^d`` surrounding samples, so the sup norm never grows.
    """
    values = np.asarray(values)
    d = values.ndim
    N = values.shape[0]
    pts = np.asarray(pts, dtype=np.float64)
    if pts.shape[-1] != d:
        raise ParameterError(f"interp_periodic: points must have {d} components")
    base = np.floor(pts)
    frac = pts - base
    base = base.astype(np.int64)
    out = np.zeros(pts.shape[:-1], dtype=values.dtype)
    # accumulate the 2^d corner contributions
    for corner in range(1 << d):
        idx = []
        w = np.ones(pts.shape[:-1])
        for ax in range(d):
            bit = (corner >> ax) & 1
            idx.append((base[..., ax] + bit) % N)
            w = w * (frac[..., ax] if bit else (1.0 - frac[..., ax]))
        out = out + w * values[tuple(idx)]
    return out


# ---------------------------------------------------------------------------
# serialization: JSON header + flat little-endian float64 payload, row-major
# ---------------------------------------------------------------------------

def save_grid(f: GridFunction, path: str | Path) -> None:
    """Write ``path`` (binary payload) and ``path + '.json'`` (header).

    The payload is a flat row-major array of little-endian 64-bit floats; a
    complex function stores interleaved real/imaginary pairs, flagged in the
    header.
    """
    path = Path(path)
    complex_data = not f.is_real()
    header = {
        "d": f.spec.d,
        "N": f.spec.N,
        "S": f.spec.S,
        "complex": complex_data,
    }
    with open(path.with_suffix(path.suffix + ".json"), "w") as fh:
        json.dump(header, fh, sort_keys=True)
        fh.write("\n")
    if complex_data:
        payload = np.ascontiguousarray(f.values, dtype="<c16")
    else:
        payload = np.ascontiguousarray(f.values.real, dtype="<f8")
    path.write_bytes(payload.tobytes())


def load_grid(path: str | Path) -> GridFunction:
    """Inverse of :func:`save_grid`."""
    path = Path(path)
    with open(path.with_suffix(path.suffix + ".json")) as fh:
        header = json.load(fh)
    spec = GridSpec(int(header["d"]), int(header["N"]), float(header["S"]))
    raw = path.read_bytes()
    if header.get("complex", False):
        v = np.frombuffer(raw, dtype="<c16").reshape(spec.shape)
    else:
        v = np.frombuffer(raw, dtype="<f8").reshape(spec.shape).astype(np.complex128)
    return GridFunction(spec, v)


def export_slice_csv(f: GridFunction, path: str | Path, axis: int = 0,
                     index: tuple[int, ...] | None = None) -> None:
    """Dump a 1-d slice along ``axis`` (other indices fixed) as CSV.

    Columns: coordinate, real part, imaginary part.
    """
    spec = f.spec
    if not (0 <= axis < spec.d):
        raise ParameterError(f"export_slice_csv: axis {axis} out of range")
    if index is None:
        index = (0,) * (spec.d - 1)
    if len(index) != spec.d - 1:
        raise ParameterError("export_slice_csv: need one fixed index per remaining axis")
    sel: list = list(index)
    sel.insert(axis, slice(None))
    line = f.values[tuple(sel)]
    coords = spec.axis_coords()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "re", "im"])
        for c, v in zip(coords, line):
            writer.writerow([repr(float(c)), repr(float(v.real)), repr(float(v.imag))])


def load_slice_csv(path: str | Path) -> np.ndarray:
    """Read a slice written by :func:`export_slice_csv`; returns (x, value) columns."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for x, re_, im_ in reader:
            rows.append((float(x), float(re_) + 1j * float(im_)))
    xs = np.array([r[0] for r in rows])
    vs = np.array([r[1] for r in rows])
    return np.stack([xs, vs.real, vs.imag])


def require_central_support(f: GridFunction, tol: float = 1e-13) -> None:
    """Raise unless ``f`` vanishes outside the central quarter (coordinate-wise |x| <= S/4)."""
    from .errors import SupportError

    spec = f.spec
    mask = np.zeros(spec.shape, dtype=bool)
    for ax in range(spec.d):
        mask |= np.abs(spec.coord_component(ax)) > spec.S / 4 + 0.5 * spec.h
    peak = np.max(np.abs(f.values)) or 1.0
    outside = np.max(np.abs(f.values[mask])) if mask.any() else 0.0
    if outside > tol * peak:
        raise SupportError(
            "input is not supported in the central quarter of the torus "
            f"(leakage {outside/peak:.2e} of peak)"
        )


def resolvable_scale(spec: GridSpec, scale: float, cells: float = 2.0) -> None:
    """Guard: ``scale`` must span at least ``cells`` grid cells."""
    if scale < cells * spec.h:
        raise ResolutionError(
            f"scale {scale:g} spans fewer than {cells} cells (h = {spec.h:g})"
        )
