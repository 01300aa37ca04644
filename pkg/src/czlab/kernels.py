"""Homogeneous singular kernels and their dyadic / mollified pieces.

A kernel here is ``K(x) = omega(x/|x|) |x|^-d`` with a bounded, mean-zero
angular profile ``omega``.  The module ships:

* the smooth cutoff toolbox used everywhere (exact plateaus, exponential
  transition profile),
* the integer parameter maps ``n_of_eps``, ``ell``, ``ell_eps`` that tie the
  smoothing scales to the regularity exponent,
* annulus pieces ``K_j`` supported in ``{2^(j-1) <= |x| <= (6/5) 2^j}`` and
  their mollifications ``K_j^n``,
* a registry of concrete profiles, including lacunary ones whose Hoelder
  exponent is genuinely 1 or 1/2 so smoothing-error trends are not vacuous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DomainError, ParameterError, ResolutionError, ScaleError
from .grid import GridFunction, GridSpec, convolve

__all__ = [
    "smooth_step",
    "step_down",
    "BumpPair",
    "SCutoff",
    "n_of_eps",
    "ell",
    "ell_eps",
    "KernelSpec",
    "builtin_kernel",
    "angular_modes",
    "dyadic_ring_profile",
    "dyadic_piece",
    "mollified_piece",
    "mollifier_on_grid",
    "grad_l1",
]

LACUNARY_DEPTH = 21  # modes 2^0 .. 2^20


def smooth_step(t: np.ndarray | float) -> np.ndarray:
    """C-infinity step: exactly 0 for t <= 0, exactly 1 for t >= 1.

    Built from the classical ``exp(-1/t)`` glue, so all derivatives vanish at
    both plateau edges and plateau values are bitwise exact.
    """
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    out[t >= 1.0] = 1.0
    mid = (t > 0.0) & (t < 1.0)
    tm = t[mid]
    a = np.exp(-1.0 / tm)
    b = np.exp(-1.0 / (1.0 - tm))
    out[mid] = a / (a + b)
    return out


def step_down(r: np.ndarray | float, r0: float, r1: float) -> np.ndarray:
    """Smooth descent from 1 (for r <= r0) to 0 (for r >= r1)."""
    if not (r1 > r0):
        raise ParameterError("step_down: need r1 > r0")
    return smooth_step((r1 - np.asarray(r, dtype=np.float64)) / (r1 - r0))


def _bump(rho: np.ndarray) -> np.ndarray:
    # exp(-1/(1-rho^2)) inside the unit ball, exactly zero outside
    rho = np.asarray(rho, dtype=np.float64)
    out = np.zeros_like(rho)
    inside = np.abs(rho) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - rho[inside] ** 2))
    return out


@lru_cache(maxsize=None)
def _bump_mass(d: int) -> float:
    # integral of the unnormalized bump over R^d, via radial quadrature
    from scipy.integrate import quad

    surface = {2: 2.0 * np.pi, 3: 4.0 * np.pi}[d]
    val, _ = quad(lambda r: math.exp(-1.0 / (1.0 - r * r)) * r ** (d - 1), 0.0, 1.0)
    return surface * val


@dataclass(frozen=True)
class BumpPair:
    """The two radial bumps used throughout.

    ``phi`` is the radial cutoff equal to 1 on the unit ball and 0 outside
    radius 6/5; ``moll`` is the unit-mass mollifier profile supported in the
    unit ball.
    """

    d: int

    def __post_init__(self) -> None:
        if self.d not in (2, 3):
            raise ParameterError("BumpPair: d must be 2 or 3")

    def phi(self, r: np.ndarray | float) -> np.ndarray:
        return step_down(r, 1.0, 1.2)

    def moll(self, rho: np.ndarray | float) -> np.ndarray:
        return _bump(rho) / _bump_mass(self.d)


@dataclass(frozen=True)
class SCutoff:
    """Interior cutoff in the averaging variable.

    Supported in ``(n^-2, 1 - n^-2)``, equal to 1 on ``[2 n^-2, 1 - 2 n^-2]``,
    with derivative size growing like ``n^2`` times a fixed profile constant.
    """

    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 2:
            raise DomainError(f"SCutoff: n must be an integer >= 2, got {self.n}")

    def __call__(self, s: np.ndarray | float) -> np.ndarray:
        s = np.asarray(s, dtype=np.float64)
        m = 1.0 / (self.n * self.n)
        return smooth_step((s - m) / m) * smooth_step((1.0 - m - s) / m)

    def excluded_mass(self) -> float:
        """Integral of ``1 - cutoff`` over [0, 1]; lies in ``[2 n^-2, 4 n^-2]``."""
        m = 1.0 / (self.n * self.n)
        # each edge contributes m (hard cut) plus the transition deficit in [m, 2m]
        t = np.linspace(0.0, 1.0, 4001)
        ramp = np.trapezoid(1.0 - smooth_step(t), t)  # deficit of one transition, unit width
        return 2.0 * m + 2.0 * m * float(ramp)


def n_of_eps(eps: float, d: int) -> int:
    """Admissible smoothing index floor for regularity exponent ``eps``."""
    if not (0.0 < eps <= 1.0):
        raise DomainError(f"n_of_eps: eps must lie in (0, 1], got {eps}")
    if d not in (2, 3):
        raise DomainError(f"n_of_eps: d must be 2 or 3, got {d}")
    return int(math.ceil(1.0e10 * d * (1.0 / eps) * math.log2(2.0 / eps)))


def ell(n: int) -> int:
    """Dyadic smoothing exponent ``floor(2 log2 n) + 2``."""
    if not isinstance(n, int) or n < 2:
        raise DomainError(f"ell: n must be an integer >= 2, got {n}")
    return int(math.floor(2.0 * math.log2(n))) + 2


def ell_eps(n: int, eps: float) -> int:
    """Regularity-weighted smoothing exponent ``floor(2 eps^-1 log2 n) + 2``."""
    if not isinstance(n, int) or n < 2:
        raise DomainError(f"ell_eps: n must be an integer >= 2, got {n}")
    if not (0.0 < eps <= 1.0):
        raise DomainError(f"ell_eps: eps must lie in (0, 1], got {eps}")
    return int(math.floor((2.0 / eps) * math.log2(n))) + 2


@dataclass(frozen=True)
class KernelSpec:
    """Homogeneous kernel of critical degree with declared size/regularity constants.

    Fields
    ------
    d:
        Ambient dimension.
    omega:
        Angular profile, vectorized over arrays of unit vectors ``(..., d)``.
        Must be bounded by ``A`` and mean zero on the sphere.
    eps:
        Hoelder exponent in ``(0, 1]`` for the smoothness hypothesis
        ``|K(x+h) - K(x)| <= A |h|^eps |x|^(-d-eps)`` for ``|x| > 2|h|``.
    A:
        Size constant covering both the pointwise bound and the Hoelder bound.
    """

    d: int
    omega: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    eps: float
    A: float
    name: str = "custom"

    def __post_init__(self) -> None:
        if self.d not in (2, 3):
            raise ParameterError("KernelSpec: d must be 2 or 3")
        if not (0.0 < self.eps <= 1.0):
            raise ParameterError("KernelSpec: eps must lie in (0, 1]")
        if not (self.A > 0):
            raise ParameterError("KernelSpec: A must be positive")

    def kernel_at(self, x: np.ndarray) -> np.ndarray:
        """Evaluate ``omega(x/|x|) |x|^-d``; zero at the origin."""
        x = np.asarray(x, dtype=np.float64)
        r = np.sqrt((x**2).sum(axis=-1))
        safe = np.where(r > 0, r, 1.0)
        vals = self.omega(x / safe[..., None]) * safe ** (-self.d)
        return np.where(r > 0, vals, 0.0)

    def sample(self, spec: GridSpec, rmin: float = 0.0,
               rmax: float | None = None) -> GridFunction:
        """Sample on the minimal-image lattice, zeroed outside ``rmin < |x| <= rmax``.

        ``rmax`` defaults to ``S/4`` (the torus truncation radius).
        """
        if spec.d != self.d:
            raise ParameterError("kernel dimension does not match grid dimension")
        if rmax is None:
            rmax = spec.S / 4.0
        if rmax > spec.S / 2.0:
            raise ScaleError("kernel truncation radius exceeds the minimal-image ball")
        r = spec.radius()
        x = np.stack([np.broadcast_to(spec.coord_component(ax), spec.shape)
                      for ax in range(spec.d)], axis=-1)
        vals = self.kernel_at(x)
        vals[(r <= rmin) | (r > rmax)] = 0.0
        return GridFunction(spec, vals)


# ---------------------------------------------------------------------------
# builtin angular profiles
# ---------------------------------------------------------------------------

def _angle2(u: np.ndarray) -> np.ndarray:
    return np.arctan2(u[..., 1], u[..., 0])


def _lacunary(theta: np.ndarray, decay: float) -> np.ndarray:
    amps = np.array([decay**l for l in range(LACUNARY_DEPTH)])
    amps = amps / amps.sum()
    out = np.zeros_like(np.asarray(theta, dtype=np.float64))
    for l in range(LACUNARY_DEPTH):
        out = out + amps[l] * np.cos((1 << l) * theta)
    return out


def _builtin_table(d: int) -> dict[str, tuple[Callable, float, float]]:
    table: dict[str, tuple[Callable, float, float]] = {
        "riesz-x1": (lambda u: u[..., 0], 1.0, float((d + 2) * 2 ** (d + 1))),
        "riesz-x2": (lambda u: u[..., 1], 1.0, float((d + 2) * 2 ** (d + 1))),
    }
    if d == 3:
        table["riesz-x3"] = (lambda u: u[..., 2], 1.0, float((d + 2) * 2 ** (d + 1)))
    if d == 2:
        table["sin3"] = (lambda u: np.sin(3.0 * _angle2(u)), 1.0, 32.0)
        table["lac1"] = (lambda u: _lacunary(_angle2(u), 0.5), 1.0, 128.0)
        table["lac-half"] = (lambda u: _lacunary(_angle2(u), 2.0**-0.5), 0.5, 64.0)
    return table


def builtin_kernel(name: str, d: int = 2) -> KernelSpec:
    """Look up a shipped kernel profile by name."""
    table = _builtin_table(d)
    if name not in table:
        raise ParameterError(
            f"unknown kernel profile {name!r} for d={d}; choices: {sorted(table)}"
        )
    omega, eps, A = table[name]
    return KernelSpec(d=d, omega=omega, eps=eps, A=A, name=name)


def angular_modes(name: str) -> list[tuple[int, float, float]]:
    """Cosine-mode expansion ``omega(theta) = sum amp * cos(k theta + phase)``.

    Only defined for the planar profiles; used by quadrature-based claim
    verifiers that exploit the angular structure.
    """
    if name == "riesz-x1":
        return [(1, 1.0, 0.0)]
    if name == "riesz-x2":
        return [(1, 1.0, -0.5 * np.pi)]
    if name == "sin3":
        return [(3, 1.0, -0.5 * np.pi)]
    if name in ("lac1", "lac-half"):
        decay = 0.5 if name == "lac1" else 2.0**-0.5
        amps = np.array([decay**l for l in range(LACUNARY_DEPTH)])
        amps = amps / amps.sum()
        return [(1 << l, float(amps[l]), 0.0) for l in range(LACUNARY_DEPTH)]
    raise ParameterError(f"no angular mode table for profile {name!r}")


# ---------------------------------------------------------------------------
# dyadic pieces
# ---------------------------------------------------------------------------

def dyadic_ring_profile(r: np.ndarray, j: int, d: int = 2) -> np.ndarray:
    """Radial factor of the annulus piece: cutoff at scale 2^j minus scale 2^(j-1).

    Exactly zero for ``r <= 2^(j-1)`` and ``r >= (6/5) 2^j``.
    """
    bumps = BumpPair(d)
    tj = 2.0**j
    return bumps.phi(np.asarray(r) / tj) - bumps.phi(np.asarray(r) / (0.5 * tj))


def dyadic_piece(kernel: KernelSpec, j: int, spec: GridSpec) -> GridFunction:
    """Annulus piece ``K_j`` sampled on the displacement lattice.

    Supported exactly in ``{2^(j-1) <= |x| <= (6/5) 2^j}``; the annulus must
    fit inside the torus truncation ball of radius ``S/4``.
    """
    if kernel.d != spec.d:
        raise ParameterError("dyadic_piece: kernel dimension does not match grid")
    if 1.2 * 2.0**j > spec.S / 4.0:
        raise ScaleError(
            f"annulus for j={j} (outer radius {1.2 * 2.0**j:g}) does not fit in S/4 = {spec.S/4:g}"
        )
    r = spec.radius()
    ring = dyadic_ring_profile(r, j, spec.d)
    x = np.stack([np.broadcast_to(spec.coord_component(ax), spec.shape)
                  for ax in range(spec.d)], axis=-1)
    vals = kernel.kernel_at(x) * ring
    return GridFunction(spec, vals)


def mollifier_on_grid(spec: GridSpec, scale: float) -> GridFunction:
    """Sampled mollifier at the given physical radius, discrete mass exactly 1.

    Sampling then renormalizing keeps ``h^d * sum == 1`` bitwise at every
    scale, so convolution against it preserves discrete integrals exactly.  At
    scales below the grid spacing the sample degenerates to the discrete
    delta.
    """
    if scale <= 0:
        raise DomainError("mollifier_on_grid: scale must be positive")
    if scale > spec.S / 4.0:
        raise ScaleError("mollifier radius exceeds the torus truncation ball S/4")
    bumps = BumpPair(spec.d)
    vals = bumps.moll(spec.radius() / scale)
    total = vals.sum() * spec.h**spec.d
    if total == 0.0:
        vals = np.zeros(spec.shape)
        vals[(0,) * spec.d] = 1.0 / spec.h**spec.d
        return GridFunction(spec, vals)
    return GridFunction(spec, vals / total)


def mollified_piece(kernel: KernelSpec, j: int, n: int, spec: GridSpec,
                    strict: bool = True) -> GridFunction:
    """Smoothed annulus piece ``K_j^n``: ``K_j`` convolved with a mollifier.

    The mollifier radius is ``2^(j - ell_eps(n, eps))``.  In strict mode
    (default) the radius must span at least two grid cells; with
    ``strict=False`` an under-resolved radius degrades gracefully toward the
    sampled delta, in which case the result coincides with ``K_j``.

    The result is truncated to exact zeros outside ``{2^(j-2) <= |x| <= 2^(j+2)}``,
    and values below 1e-14 of the peak are zeroed everywhere: they are FFT
    roundoff, and keeping them would make every cell a kernel displacement.
    """
    scale = 2.0 ** (j - ell_eps(n, kernel.eps))
    if strict and scale < 2.0 * spec.h:
        raise ResolutionError(
            f"mollifier radius {scale:g} for (j={j}, n={n}) spans fewer than two cells "
            f"(h = {spec.h:g}); pass strict=False to degrade toward the sampled delta"
        )
    piece = dyadic_piece(kernel, j, spec)
    if 2.0 ** (j + 2) > spec.S / 2.0:
        raise ScaleError("smoothed annulus support 2^(j+2) exceeds the minimal-image ball")
    moll = mollifier_on_grid(spec, scale)
    out = convolve(piece, moll).values.real.copy()
    r = spec.radius()
    out[(r < 2.0 ** (j - 2)) | (r > 2.0 ** (j + 2))] = 0.0
    peak = np.abs(out).max()
    if peak > 0:
        out[np.abs(out) <= 1e-14 * peak] = 0.0
    return GridFunction(spec, out)


def grad_l1(f: GridFunction) -> float:
    """l1 norm of the central-difference gradient magnitude."""
    spec = f.spec
    mag2 = np.zeros(spec.shape)
    for ax in range(spec.d):
        diff = (np.roll(f.values, -1, axis=ax) - np.roll(f.values, 1, axis=ax)) / (2.0 * spec.h)
        mag2 = mag2 + np.abs(diff) ** 2
    return float(spec.h**spec.d * np.sqrt(mag2).sum())
