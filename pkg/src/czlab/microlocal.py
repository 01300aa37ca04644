"""Directional decomposition tools: nets of directions, cap cutoffs, sector
multipliers, frequency shells and tube majorants.

The angular scale attached to an index ``n`` and aperture exponent ``gamma``
is ``2^(-4 - n*gamma)``: nets are maximal families separated by that chord
distance, caps plateau at twice it and vanish beyond four times it, and tubes
have width ``2^(j+2-gamma*n)`` at kernel scale ``2^j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ParameterError, ScaleError
from .grid import GridFunction, GridSpec, convolve, multiplier_apply
from .kernels import mollifier_on_grid, smooth_step, step_down

__all__ = [
    "DirectionNet",
    "build_net",
    "SectorMultiplier",
    "overlap_count",
    "lp_shell_symbol",
    "lp_shell_wide_symbol",
    "lp_lowpass_symbol",
    "lp_kmin",
    "apply_lp",
    "apply_Pm",
    "tube_majorant",
    "tube_mass_estimate",
]

NET_CARD_GUARD = 10**6


def _check_net_params(n: int, gamma: float, d: int) -> None:
    if not isinstance(n, int) or n < 2:
        raise DomainError(f"net index n must be an integer >= 2, got {n}")
    if not (0.1 < gamma < 0.9):
        raise DomainError(f"aperture exponent gamma must lie in (1/10, 9/10), got {gamma}")
    if d not in (2, 3):
        raise DomainError(f"d must be 2 or 3, got {d}")


@dataclass(frozen=True)
class DirectionNet:
    """A maximal family of unit vectors with pairwise chord separation ``2^(-4-n*gamma)``."""

    d: int
    n: int
    gamma: float
    vectors: np.ndarray = field(repr=False)
    maximality_tol: float  # candidate spacing of the greedy construction

    def __post_init__(self) -> None:
        v = np.asarray(self.vectors, dtype=np.float64)
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "vectors", v)

    @property
    def separation(self) -> float:
        return 2.0 ** (-4.0 - self.n * self.gamma)

    @property
    def cap_plateau(self) -> float:
        return 2.0 ** (-3.0 - self.n * self.gamma)

    @property
    def cap_support(self) -> float:
        return 2.0 ** (-2.0 - self.n * self.gamma)

    @property
    def card(self) -> int:
        return self.vectors.shape[0]

    # -- cap cutoffs ------------------------------------------------------

    def chi_tilde(self, nu_idx: int, xhat: np.ndarray) -> np.ndarray:
        """Cap bump around net vector ``nu_idx`` evaluated at unit vectors ``xhat``.

        Equals 1 within chord distance ``cap_plateau`` and 0 beyond
        ``cap_support``; distances are chordal, which at these radii agree
        with geodesic ones to third order.
        """
        nu = self.vectors[nu_idx]
        dist = np.sqrt(np.maximum(((np.asarray(xhat) - nu) ** 2).sum(axis=-1), 0.0))
        return step_down(dist, self.cap_plateau, self.cap_support)

    def partition_denominator(self, xhat: np.ndarray, chunk: int = 512) -> np.ndarray:
        """Sum of all cap bumps at the given unit vectors; >= 1 by maximality."""
        xhat = np.asarray(xhat, dtype=np.float64)
        flat = xhat.reshape(-1, self.d)
        out = np.zeros(flat.shape[0])
        for lo in range(0, flat.shape[0], chunk):
            block = flat[lo:lo + chunk]
            d2 = ((block[:, None, :] - self.vectors[None, :, :]) ** 2).sum(axis=-1)
            out[lo:lo + chunk] = step_down(np.sqrt(d2), self.cap_plateau,
                                           self.cap_support).sum(axis=1)
        return out.reshape(xhat.shape[:-1])

    def chi(self, nu_idx: int, x: np.ndarray) -> np.ndarray:
        """Sector weight ``chi_tilde / sum chi_tilde`` at points ``x`` (not
        necessarily unit); homogeneous of degree zero, zero at the origin."""
        x = np.asarray(x, dtype=np.float64)
        r = np.sqrt((x**2).sum(axis=-1))
        safe = np.where(r > 0, r, 1.0)
        xhat = x / safe[..., None]
        num = self.chi_tilde(nu_idx, xhat)
        out = np.zeros_like(num)
        hit = (num > 0) & (r > 0)
        if np.any(hit):
            denom = self.partition_denominator(xhat[hit])
            out[hit] = num[hit] / denom
        return out

    def caps_touching(self, xhat: np.ndarray) -> list[int]:
        """Indices of net vectors whose cap support contains any of the unit vectors."""
        xhat = np.asarray(xhat, dtype=np.float64).reshape(-1, self.d)
        touched: set[int] = set()
        chunk = 512
        for lo in range(0, xhat.shape[0], chunk):
            block = xhat[lo:lo + chunk]
            d2 = ((block[:, None, :] - self.vectors[None, :, :]) ** 2).sum(axis=-1)
            hit = (d2 < self.cap_support**2).any(axis=0)
            touched.update(np.nonzero(hit)[0].tolist())
        return sorted(touched)


def _fibonacci_sphere(m: int) -> np.ndarray:
    # deterministic quasi-uniform candidate stream on S^2
    i = np.arange(m, dtype=np.float64)
    z = 1.0 - (2.0 * i + 1.0) / m
    phi = i * (np.pi * (3.0 - np.sqrt(5.0)))
    rho = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    return np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=-1)


def _greedy_circle(delta: float, oversample: int) -> np.ndarray:
    m = int(math.ceil(oversample * 2.0 * np.pi / delta))
    gap = 2.0 * math.asin(min(delta / 2.0, 1.0))
    angles = 2.0 * np.pi * np.arange(m) / m
    accepted = [0.0]
    for a in angles[1:]:
        if a - accepted[-1] >= gap:
            accepted.append(float(a))
    # close the circle: the last point must also clear the first one
    while len(accepted) > 1 and (2.0 * np.pi - accepted[-1]) + accepted[0] < gap:
        accepted.pop()
    th = np.array(accepted)
    return np.stack([np.cos(th), np.sin(th)], axis=-1)


def _greedy_sphere(delta: float, oversample: int) -> tuple[np.ndarray, float]:
    m = int(math.ceil(oversample * 16.0 / delta**2))
    cand = _fibonacci_sphere(m)
    spacing = 3.1 / math.sqrt(m)

    # vectorized pre-pass: at most one candidate per cell of size delta/2
    # (cell diameter < delta, so cellmates always conflict); keeps the first
    # candidate in stream order
    g = delta / 2.0
    cell = np.floor((cand + 1.0) / g).astype(np.int64)
    nside = int(np.ceil(2.0 / g)) + 2
    key = (cell[:, 0] * nside + cell[:, 1]) * nside + cell[:, 2]
    order = np.argsort(key, kind="stable")
    ks = key[order]
    first = np.ones(len(ks), dtype=bool)
    first[1:] = ks[1:] != ks[:-1]
    survivors = np.sort(order[first])
    cand = cand[survivors]

    # sequential greedy over survivors with a coarse occupancy hash
    gh = delta
    nh = int(np.ceil(2.0 / gh)) + 2
    d2min = delta * delta
    buckets: dict[int, list[int]] = {}
    keep: list[int] = []
    xs, ys, zs = cand[:, 0], cand[:, 1], cand[:, 2]
    neighbor_offsets = [(dx * nh + dy) * nh + dz
                        for dx in (-1, 0, 1) for dy in (-1, 0, 1) for dz in (-1, 0, 1)]
    for i in range(cand.shape[0]):
        x, y, z = float(xs[i]), float(ys[i]), float(zs[i])
        kx = int((x + 1.0) / gh)
        ky = int((y + 1.0) / gh)
        kz = int((z + 1.0) / gh)
        base = (kx * nh + ky) * nh + kz
        ok = True
        for off in neighbor_offsets:
            pts = buckets.get(base + off)
            if not pts:
                continue
            for p in pts:
                dx = x - float(xs[p])
                dy = y - float(ys[p])
                dz = z - float(zs[p])
                if dx * dx + dy * dy + dz * dz < d2min:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            buckets.setdefault(base, []).append(i)
            keep.append(i)
    return cand[keep], spacing


_NET_CACHE: dict[tuple[int, float, int, int], DirectionNet] = {}


def build_net(n: int, gamma: float, d: int, oversample: int = 12) -> DirectionNet:
    """Greedy maximal separated net of unit directions.

    Candidates come from a deterministic quasi-uniform stream (uniform angles
    on the circle, a Fibonacci lattice on the sphere) roughly ``oversample``
    times denser than the target net; maximality therefore holds up to the
    recorded candidate spacing.  Nets are memoized: the construction is
    deterministic and the vectors are immutable, so sharing is safe.
    """
    _check_net_params(n, gamma, d)
    key = (n, float(gamma), d, oversample)
    if key in _NET_CACHE:
        return _NET_CACHE[key]
    delta = 2.0 ** (-4.0 - n * gamma)
    expected = 2.0 * np.pi / delta if d == 2 else 16.0 / delta**2
    if expected > NET_CARD_GUARD:
        raise ScaleError(
            f"direction net for (n={n}, gamma={gamma}, d={d}) would need about "
            f"{expected:.2e} vectors; guard is {NET_CARD_GUARD:.0e}"
        )
    if d == 2:
        vecs = _greedy_circle(delta, max(oversample, 64))
        tol = 2.0 * np.pi / math.ceil(max(oversample, 64) * 2.0 * np.pi / delta)
    else:
        vecs, tol = _greedy_sphere(delta, oversample)
    net = DirectionNet(d=d, n=n, gamma=gamma, vectors=vecs, maximality_tol=tol)
    _NET_CACHE[key] = net
    return net


# ---------------------------------------------------------------------------
# sector multipliers
# ---------------------------------------------------------------------------

def _phi_1d(u: np.ndarray) -> np.ndarray:
    # even cutoff on the line: 1 for |u| <= 1/2, 0 for |u| >= 1
    return step_down(np.abs(u), 0.5, 1.0)


@dataclass(frozen=True)
class SectorMultiplier:
    """Fourier cutoff to a slab of directions around ``nu``.

    The symbol is ``phi(2^(n*gamma) n^(-width_power) <nu, xi/|xi|>)`` with the
    even profile ``phi`` above; ``width_power`` 5 gives the narrow variant and
    2 the wide one.  The symbol is set to 0 at the zero frequency.
    """

    n: int
    gamma: float
    nu: tuple[float, ...]
    width_power: int = 5

    def __post_init__(self) -> None:
        if self.width_power not in (2, 5):
            raise ParameterError("width_power must be 2 or 5")
        _check_net_params(self.n, self.gamma, len(self.nu))
        nrm = math.sqrt(sum(c * c for c in self.nu))
        if abs(nrm - 1.0) > 1e-9:
            raise ParameterError("nu must be a unit vector")

    @property
    def sharpness(self) -> float:
        return 2.0 ** (self.n * self.gamma) * float(self.n) ** (-self.width_power)

    def symbol(self, spec: GridSpec) -> np.ndarray:
        if spec.d != len(self.nu):
            raise ParameterError("nu dimension does not match grid dimension")
        dot = np.zeros(spec.shape)
        for ax in range(spec.d):
            dot = dot + self.nu[ax] * spec.freq_component(ax)
        rad = spec.freq_radius()
        safe = np.where(rad > 0, rad, 1.0)
        sym = _phi_1d(self.sharpness * dot / safe)
        sym[rad == 0] = 0.0
        return sym

    def apply(self, f: GridFunction) -> GridFunction:
        return multiplier_apply(f, self.symbol(f.spec))


def overlap_count(net: DirectionNet, width_power: int = 5,
                  num_samples: int = 4096, seed: int = 0,
                  net_cap: int = 4096) -> float:
    """Largest sampled value of ``sum_nu |slab symbol at xi|`` over unit ``xi``.

    Samples random directions plus net vectors themselves (the natural sup
    candidates); for very large nets only an evenly strided subset of at most
    ``net_cap`` net vectors is added to keep the cost linear in the net size.
    """
    rng = np.random.default_rng(seed)
    samp = rng.normal(size=(num_samples, net.d))
    samp /= np.linalg.norm(samp, axis=1, keepdims=True)
    stride = max(1, -(-net.card // net_cap))
    samp = np.concatenate([samp, net.vectors[::stride]], axis=0)
    sharp = 2.0 ** (net.n * net.gamma) * float(net.n) ** (-width_power)
    best = 0.0
    chunk = max(1, 2**22 // max(net.card, 1))
    for lo in range(0, samp.shape[0], chunk):
        block = samp[lo:lo + chunk]
        dots = block @ net.vectors.T
        vals = _phi_1d(sharp * dots).sum(axis=1)
        best = max(best, float(vals.max()))
    return best


# ---------------------------------------------------------------------------
# frequency shells
# ---------------------------------------------------------------------------

def _phi_rad(rho: np.ndarray) -> np.ndarray:
    return step_down(rho, 1.0, 1.2)


def lp_lowpass_symbol(spec: GridSpec, k: int) -> np.ndarray:
    """Radial low-pass symbol equal to 1 for ``|xi| <= 2^-k``, 0 beyond ``(6/5) 2^-k``."""
    return _phi_rad(2.0**k * spec.freq_radius())


def lp_shell_symbol(spec: GridSpec, k: int) -> np.ndarray:
    """Shell symbol supported in ``{2^(-k-1) <= |xi| <= (6/5) 2^-k}``."""
    r = spec.freq_radius()
    return _phi_rad(2.0**k * r) - _phi_rad(2.0 ** (k + 1) * r)


def lp_shell_wide_symbol(spec: GridSpec, k: int) -> np.ndarray:
    """Fattened shell: 1 on ``{1/2 <= 2^k |xi| <= 6/5}``, 0 off ``{1/3 <= 2^k |xi| <= 3/2}``.

    Multiplying the matching :func:`lp_shell_symbol` leaves it unchanged.
    """
    rho = 2.0**k * spec.freq_radius()
    up = smooth_step((rho - 1.0 / 3.0) / (0.5 - 1.0 / 3.0))
    down = step_down(rho, 1.2, 1.5)
    return up * down


def lp_kmin(spec: GridSpec) -> int:
    """Coarsest shell index needed to cover the full frequency lattice.

    For ``k_min = lp_kmin(spec)`` the telescoping identity
    ``lowpass(m) + sum_{k_min <= k < m} shell(k) == 1`` holds exactly on the
    lattice, because the left-over low-pass at ``k_min`` is 1 everywhere.
    """
    xi_max = (2.0 * np.pi / spec.S) * (spec.N / 2.0) * math.sqrt(spec.d)
    k = -int(math.ceil(math.log2(xi_max)))
    while 2.0**k * xi_max > 1.0:
        k -= 1
    return k


def apply_lp(f: GridFunction, kind: str, k: int) -> GridFunction:
    """Apply one member of the shell family; ``kind`` in {'shell', 'wide', 'lowpass'}."""
    if kind == "shell":
        sym = lp_shell_symbol(f.spec, k)
    elif kind == "wide":
        sym = lp_shell_wide_symbol(f.spec, k)
    elif kind == "lowpass":
        sym = lp_lowpass_symbol(f.spec, k)
    else:
        raise ParameterError(f"unknown shell kind {kind!r}")
    return multiplier_apply(f, sym)


def apply_Pm(f: GridFunction, m: float) -> GridFunction:
    """Physical-space smoothing at radius ``2^m``: convolution with the unit-mass mollifier.

    Preserves constants exactly (the sampled mollifier has discrete mass 1).
    """
    return convolve(f, mollifier_on_grid(f.spec, 2.0**m))


# ---------------------------------------------------------------------------
# tubes
# ---------------------------------------------------------------------------

def tube_majorant(spec: GridSpec, j: int, n: int, gamma: float,
                  nu: np.ndarray) -> GridFunction:
    """Normalized tube indicator: height ``2^-(j d)`` on the slab-tube along ``nu``.

    The tube is ``{ |<x, nu>| <= 2^(j+2),  |x - <x, nu> nu| <= 2^(j+2-gamma n) }``
    in minimal-image coordinates.
    """
    _check_net_params(n, gamma, spec.d)
    nu = np.asarray(nu, dtype=np.float64)
    if nu.shape != (spec.d,):
        raise ParameterError("nu must be a single unit vector")
    if abs(np.linalg.norm(nu) - 1.0) > 1e-9:
        raise ParameterError("nu must be a unit vector")
    half_len = 2.0 ** (j + 2)
    half_wid = 2.0 ** (j + 2 - gamma * n)
    if half_len > spec.S / 2.0 or half_wid > spec.S / 2.0:
        raise ScaleError(
            f"tube for (j={j}, n={n}, gamma={gamma}) does not fit the torus "
            f"(half-extents {half_len:g} x {half_wid:g}, S/2 = {spec.S/2:g})"
        )
    along = np.zeros(spec.shape)
    r2 = np.zeros(spec.shape)
    for ax in range(spec.d):
        c = spec.coord_component(ax)
        along = along + nu[ax] * c
        r2 = r2 + np.broadcast_to(c, spec.shape) ** 2
    perp2 = np.maximum(r2 - along**2, 0.0)
    inside = (np.abs(along) <= half_len) & (perp2 <= half_wid**2)
    vals = np.where(inside, 2.0 ** (-j * spec.d), 0.0)
    return GridFunction(spec, vals)


def tube_mass_estimate(d: int, j: int, n: int, gamma: float) -> float:
    """Continuum l1 mass of the tube majorant: height times box volume."""
    return 2.0 ** (-j * d) * (2.0 * 2.0 ** (j + 2)) * (2.0 * 2.0 ** (j + 2 - gamma * n)) ** (d - 1)
