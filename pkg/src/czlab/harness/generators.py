"""Adversarial input generators: atom families probing the weak-type bound,
planted decompositions with known answers, and rough symbol fields."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..czd import DyadicCube
from ..errors import DomainError, ParameterError, ScaleError
from ..grid import GridFunction, GridSpec, norm

__all__ = [
    "AtomFamily",
    "generate_adversarial",
    "planted_cz",
    "rough_symbol",
]

_GENERATORS = ("bump", "multiscale", "spikes", "signgrid")


@dataclass(frozen=True)
class AtomFamily:
    """Parameters of one adversarial input family.

    ``generator`` picks the shape: a single smooth bump, mean-zero signed
    atoms on disjoint dyadic cubes, near-delta spikes, or a random-sign
    lattice.  ``levels`` are cube levels in cell-exponent units (side
    ``2^level`` cells), cycled across atoms; ``width_cells`` sizes bumps and
    spikes.  Every generated function is normalized to unit l1 mass.
    """

    generator: str
    count: int = 1
    levels: tuple[int, ...] = (2,)
    amplitudes: tuple[float, ...] = (1.0,)
    seed: int = 0
    width_cells: int = 4

    def __post_init__(self) -> None:
        if self.generator not in _GENERATORS:
            raise ParameterError(
                f"unknown generator {self.generator!r}; choose from {_GENERATORS}")
        if self.count < 1:
            raise ParameterError("count must be positive")
        if not self.amplitudes:
            raise ParameterError("need at least one amplitude")


def _free_block(occupied: np.ndarray, side: int, rng: np.random.Generator) -> tuple[int, ...]:
    # rejection-sample an aligned block of `side` cells per axis that does not
    # touch occupied cells; deterministic given the rng state
    N = occupied.shape[0]
    d = occupied.ndim
    slots = N // side
    if slots < 1:
        raise ScaleError(f"block of {side} cells does not fit an axis of {N}")
    for _ in range(4096):
        corner = tuple(int(rng.integers(0, slots)) * side for _ in range(d))
        sl = tuple(slice(c, c + side) for c in corner)
        if not occupied[sl].any():
            occupied[sl] = True
            return corner
    raise ScaleError("could not place disjoint blocks; too many atoms for the grid")


def _gen_bump(family: AtomFamily, spec: GridSpec, rng: np.random.Generator) -> np.ndarray:
    from ..kernels import step_down

    w = family.width_cells
    if w < 2:
        raise ScaleError("bump width must span at least two cells")
    radius = w * spec.h
    if radius > spec.S / 4.0:
        raise ScaleError("bump radius exceeds a quarter period")
    center = rng.integers(0, spec.N, size=spec.d) * spec.h
    r2 = np.zeros(spec.shape)
    for ax in range(spec.d):
        c = spec.coord_component(ax)
        diff = np.remainder(c - center[ax] + spec.S / 2.0, spec.S) - spec.S / 2.0
        r2 = r2 + np.broadcast_to(diff, spec.shape) ** 2
    return step_down(np.sqrt(r2), radius / 2.0, radius)


def _gen_multiscale(family: AtomFamily, spec: GridSpec,
                    rng: np.random.Generator) -> np.ndarray:
    vals = np.zeros(spec.shape)
    occupied = np.zeros(spec.shape, dtype=bool)
    for i in range(family.count):
        level = family.levels[i % len(family.levels)]
        if level < 1:
            raise ScaleError("mean-zero atoms need cubes of at least two cells per side")
        side = 1 << level
        if side > spec.N // 2:
            raise ScaleError(f"atom level {level} does not fit the grid")
        amp = family.amplitudes[i % len(family.amplitudes)]
        corner = _free_block(occupied, side, rng)
        sl = tuple(slice(c, c + side) for c in corner)
        block = rng.normal(size=(side,) * spec.d)
        block -= block.mean()
        peak = np.abs(block).max()
        if peak > 0:
            vals[sl] = amp * block / peak
    return vals


def _gen_spikes(family: AtomFamily, spec: GridSpec, rng: np.random.Generator) -> np.ndarray:
    # spikes anchor to slot corners chosen independently of the width, so
    # families with equal seed and count nest as the width halves
    w = family.width_cells
    s0 = max(spec.N // 8, 1)
    if w < 1 or w > s0:
        raise ScaleError(f"spike width {w} cells must lie in [1, {s0}] on N={spec.N}")
    slots = spec.N // s0
    if family.count > slots**spec.d:
        raise ScaleError("too many spikes for the placement slots")
    picks = rng.choice(slots**spec.d, size=family.count, replace=False)
    signs = rng.integers(0, 2, size=family.count) * 2.0 - 1.0
    vals = np.zeros(spec.shape)
    for i in range(family.count):
        amp = family.amplitudes[i % len(family.amplitudes)]
        corner = np.unravel_index(int(picks[i]), (slots,) * spec.d)
        sl = tuple(slice(c * s0, c * s0 + w) for c in corner)
        vals[sl] = signs[i] * amp
    return vals


def _gen_signgrid(family: AtomFamily, spec: GridSpec, rng: np.random.Generator) -> np.ndarray:
    w = family.width_cells
    if w < 1 or spec.N % w:
        raise ScaleError(f"sign-block width {w} must divide N={spec.N}")
    blocks = rng.integers(0, 2, size=(spec.N // w,) * spec.d) * 2.0 - 1.0
    for ax in range(spec.d):
        blocks = np.repeat(blocks, w, axis=ax)
    return blocks


def generate_adversarial(family: AtomFamily, spec: GridSpec) -> GridFunction:
    """Draw one input from the family on the given grid, with unit l1 mass."""
    rng = np.random.default_rng(family.seed)
    vals = {
        "bump": _gen_bump,
        "multiscale": _gen_multiscale,
        "spikes": _gen_spikes,
        "signgrid": _gen_signgrid,
    }[family.generator](family, spec, rng)
    f = GridFunction(spec, vals)
    mass = norm(f, 1)
    if mass == 0:
        raise DomainError("generated input degenerated to zero")
    return GridFunction(spec, vals / mass)


def planted_cz(spec: GridSpec, level: int, count: int, seed: int = 0,
               ) -> tuple[GridFunction, float, list[DyadicCube]]:
    """An input whose height decomposition is known by construction.

    Places ``count`` disjoint constant blocks of value 1 on cubes of the given
    level (no two sharing a parent), zero elsewhere, and returns the height
    ``1/2``: each planted cube averages 1 > 1/2, while distinct parents force
    every strict ancestor to carry a planted fraction of at most ``2^-d``, so
    the stopping rule must recover exactly the planted cubes.
    """
    if level < 0 or (1 << (level + 1)) > spec.N:
        raise ScaleError(f"planted level {level} does not fit N={spec.N}")
    rng = np.random.default_rng(seed)
    side = 1 << level
    parents = spec.N // (2 * side)
    total = parents**spec.d
    if count > total:
        raise ScaleError(f"cannot plant {count} cubes with distinct parents (room for {total})")
    chosen = rng.choice(total, size=count, replace=False)
    vals = np.zeros(spec.shape)
    cubes = []
    for flat in sorted(int(c) for c in chosen):
        pcorner = []
        rem = flat
        for _ in range(spec.d):
            pcorner.append(rem % parents)
            rem //= parents
        child = tuple(2 * side * pc + side * int(rng.integers(0, 2)) for pc in pcorner)
        sl = tuple(slice(c, c + side) for c in child)
        vals[sl] = 1.0
        cubes.append(DyadicCube(spec, level, child))
    return GridFunction(spec, vals), 0.5, cubes


_SYMBOL_KINDS = ("random-signs", "checkerboard", "planted-sector", "smooth")


def rough_symbol(spec: GridSpec, kind: str, seed: int = 0, amp: float = 1.0,
                 direction: tuple[float, ...] | None = None,
                 stripes: int | None = None, block_cells: int = 1,
                 diagonal: bool = False) -> GridFunction:
    """Bounded symbol fields for the commutator, from rough to smooth.

    ``random-signs`` flips an independent sign per cell; ``checkerboard``
    alternates by parity of ``block_cells``-wide blocks, rotated 45 degrees
    in the first two axes when ``diagonal`` is set (off the dyadic comb);
    ``planted-sector`` is a stripe pattern constant along one direction
    (rough across it); ``smooth`` is a short trigonometric sum.  The sup
    norm equals ``amp`` (at most ``amp`` for ``smooth``).
    """
    if kind not in _SYMBOL_KINDS:
        raise ParameterError(f"unknown symbol kind {kind!r}; choose from {_SYMBOL_KINDS}")
    if not (0 < amp <= 1.0):
        raise DomainError("symbol amplitude must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    if kind == "random-signs":
        vals = (rng.integers(0, 2, size=spec.shape) * 2.0 - 1.0) * amp
    elif kind == "checkerboard":
        if block_cells < 1 or spec.N % block_cells:
            raise ParameterError("checkerboard block width must divide the grid side")
        if diagonal and spec.N % (2 * block_cells):
            raise ParameterError("diagonal checkerboard needs 2*block_cells dividing N")
        axes = [np.arange(spec.N).reshape([spec.N if a == ax else 1 for a in range(spec.d)])
                for ax in range(spec.d)]
        if diagonal:
            terms = [(axes[0] + axes[1]) // block_cells,
                     (axes[0] - axes[1]) // block_cells]
            terms += [axes[i] // block_cells for i in range(2, spec.d)]
        else:
            terms = [ax // block_cells for ax in axes]
        idx = np.zeros(spec.shape)
        for t in terms:
            idx = idx + t
        vals = amp * (-1.0) ** idx
    elif kind == "planted-sector":
        if direction is None:
            theta = 0.3 + 0.1 * rng.random()
            direction = (np.cos(theta), np.sin(theta)) if spec.d == 2 else (
                np.cos(theta), np.sin(theta), 0.0)
        nu = np.asarray(direction, dtype=np.float64)
        nu /= np.linalg.norm(nu)
        q = stripes if stripes is not None else spec.N // 8
        proj = np.zeros(spec.shape)
        for ax in range(spec.d):
            proj = proj + nu[ax] * np.broadcast_to(spec.coord_component(ax), spec.shape)
        vals = amp * np.where(np.cos(2.0 * np.pi * q * proj / spec.S) >= 0, 1.0, -1.0)
    else:
        vals = np.zeros(spec.shape)
        for _ in range(4):
            k = rng.integers(-2, 3, size=spec.d)
            phase = 2.0 * np.pi * rng.random()
            coef = rng.normal()
            arg = np.zeros(spec.shape)
            for ax in range(spec.d):
                arg = arg + k[ax] * np.broadcast_to(spec.coord_component(ax), spec.shape)
            vals = vals + coef * np.cos(2.0 * np.pi * arg / spec.S + phase)
        peak = np.abs(vals).max()
        if peak > 0:
            vals = amp * vals / peak
    return GridFunction(spec, vals)
