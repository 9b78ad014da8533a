"""Driving randomness and the elementary per-step processes.

Everything downstream is built from a seeded stream of Wiener increments
dW ~ N(0, dt) and three sequences derived from it element-wise:

    sign        s[k]   = +1 if dw[k] >= 0 else -1   (so s[k]^2 = 1)
    modulus     |dw[k]|                              (|dw| * s == dw, bitwise)
    unit phase  phi[k] in {1, i}: 1 where s[k] = +1, i where s[k] = -1

The tie-break sign(0) := +1 is fixed so that runs are bit-reproducible; the
event has probability zero for continuous draws anyway.

Reproducibility contract: every path owns a counter-based Philox generator
keyed directly by (master_seed, path_index), and every increment consumes
exactly one uniform draw mapped through the inverse normal CDF.  Streams are
therefore independent across paths and bit-stable across platforms, path
order, and worker counts.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np
from numpy.random import Generator, Philox
from scipy.special import ndtri

__all__ = [
    "RNG_NAME",
    "TimeGrid",
    "SeedSpec",
    "WienerIncrements",
    "WienerEnsemble",
    "make_rng",
    "sample_wiener",
    "sign_of",
    "abs_of",
    "phi_from_bernoulli",
    "phi_half",
    "wiener_ensemble",
]

# Generator algorithm label recorded in run manifests.  Philox (4x64) is
# counter-based, so a (master_seed, path_index) key pins the whole stream.
RNG_NAME = "philox4x64-invnorm"

_UINT64_MAX = 2**64 - 1

# Uniform draws are clipped away from 0 before the inverse CDF so the normal
# draw stays finite (random() can return exactly 0.0 with probability 2^-53).
_U_FLOOR = 2.0**-53


@dataclass(frozen=True)
class TimeGrid:
    """Uniform discretization of [t0, t0 + n_steps*dt]."""

    dt: float
    n_steps: int
    t0: float = 0.0

    def __post_init__(self) -> None:
        if not np.isfinite(self.dt) or self.dt <= 0:
            raise ValueError(f"dt must be positive and finite, got {self.dt}")
        if not isinstance(self.n_steps, (int, np.integer)) or self.n_steps < 1:
            raise ValueError(f"n_steps must be a positive integer, got {self.n_steps}")
        if not np.isfinite(self.t0):
            raise ValueError(f"t0 must be finite, got {self.t0}")

    @property
    def horizon(self) -> float:
        return self.n_steps * self.dt

    def times(self) -> np.ndarray:
        """Grid times t0, t0+dt, ..., t0+N*dt (length n_steps + 1)."""
        return self.t0 + self.dt * np.arange(self.n_steps + 1)


@dataclass(frozen=True)
class SeedSpec:
    """Identifies one reproducible path stream.

    The generator state is a pure function of (master_seed, path_index):
    identical inputs give bit-identical increment streams.
    """

    master_seed: int
    path_index: int = 0

    def __post_init__(self) -> None:
        if not 0 <= int(self.master_seed) <= _UINT64_MAX:
            raise ValueError("master_seed must fit in an unsigned 64-bit integer")
        if not 0 <= int(self.path_index) <= _UINT64_MAX:
            raise ValueError("path_index must fit in an unsigned 64-bit integer")


def make_rng(seed: SeedSpec) -> Generator:
    """Counter-based generator for one path; streams for distinct
    (master_seed, path_index) pairs are independent by construction."""
    key = np.array([seed.master_seed, seed.path_index], dtype=np.uint64)
    return Generator(Philox(key=key))


@dataclass(frozen=True)
class WienerIncrements:
    """One path of Wiener increments dw[k] ~ N(0, dt) on a time grid."""

    grid: TimeGrid
    dw: np.ndarray

    def __post_init__(self) -> None:
        if self.dw.shape != (self.grid.n_steps,):
            raise ValueError(
                f"dw has shape {self.dw.shape}, expected ({self.grid.n_steps},)"
            )

    def cumulative(self) -> np.ndarray:
        """Sampled path W with W(t0) = 0, length n_steps + 1."""
        w = np.empty(self.grid.n_steps + 1)
        w[0] = 0.0
        np.cumsum(self.dw, out=w[1:])
        return w


def _normal_increments(rng: Generator, n_steps: int, dt: float) -> np.ndarray:
    u = rng.random(n_steps)
    return np.sqrt(dt) * ndtri(np.maximum(u, _U_FLOOR))


def sample_wiener(grid: TimeGrid, rng: Generator) -> WienerIncrements:
    """Draw n_steps increments, each centered normal with variance dt.

    One uniform draw per increment (inverse-CDF transform, no rejection
    loop), so the raw stream position after k increments is always k.
    """
    return WienerIncrements(grid, _normal_increments(rng, grid.n_steps, grid.dt))


def sign_of(w: WienerIncrements) -> np.ndarray:
    """Element-wise sign sequence, +1.0 where dw >= 0 and -1.0 otherwise."""
    return np.where(w.dw >= 0, 1.0, -1.0)


def abs_of(w: WienerIncrements) -> np.ndarray:
    """Element-wise modulus |dw|."""
    return np.abs(w.dw)


def phi_from_bernoulli(b: np.ndarray) -> np.ndarray:
    """Map a +-1 Bernoulli sequence b to the two-outcome phase process

        phi = (1 + b)/2 + i (1 - b)/2

    so b = +1 gives exactly 1+0i and b = -1 gives exactly 0+1i, and
    phi**2 == b holds exactly in floating point.
    """
    b = np.asarray(b)
    if not np.all((b == 1) | (b == -1)):
        raise ValueError("Bernoulli sequence must contain only +1 and -1")
    return (1 + b) / 2 + 1j * (1 - b) / 2


def phi_half(w: WienerIncrements) -> np.ndarray:
    """Coin-toss phase sequence of the increments: 1 where dw >= 0, i where
    dw < 0.  Satisfies phi**2 == sign_of(w) exactly."""
    return np.where(w.dw >= 0, 1.0 + 0.0j, 1.0j)


@dataclass(frozen=True)
class WienerEnsemble:
    """n_paths independent Wiener paths; row p is the stream of
    SeedSpec(master_seed, path_index=p)."""

    grid: TimeGrid
    dw: np.ndarray  # shape (n_paths, n_steps)

    def __post_init__(self) -> None:
        if self.dw.ndim != 2 or self.dw.shape[1] != self.grid.n_steps:
            raise ValueError(
                f"dw has shape {self.dw.shape}, expected (n_paths, {self.grid.n_steps})"
            )

    @property
    def n_paths(self) -> int:
        return self.dw.shape[0]

    def values(self) -> np.ndarray:
        """Cumulative paths, shape (n_paths, n_steps + 1), starting at 0."""
        out = np.empty((self.n_paths, self.grid.n_steps + 1))
        out[:, 0] = 0.0
        np.cumsum(self.dw, axis=1, out=out[:, 1:])
        return out


def _wiener_chunk(dt: float, n_steps: int, master_seed: int, start: int, stop: int) -> np.ndarray:
    out = np.empty((stop - start, n_steps))
    for p in range(start, stop):
        rng = make_rng(SeedSpec(master_seed, p))
        out[p - start] = _normal_increments(rng, n_steps, dt)
    return out


def run_path_chunks(chunk_fn, n_paths: int, workers: int) -> list[np.ndarray]:
    """Evaluate chunk_fn(start, stop) over a contiguous partition of the path
    range and return the pieces in path order.

    Because each path owns its own keyed generator, the result is bit-identical
    for any worker count; workers only affect wall time.
    """
    if workers is None or workers <= 1 or n_paths == 1:
        return [chunk_fn(0, n_paths)]
    workers = min(workers, n_paths)
    bounds = np.linspace(0, n_paths, workers + 1).astype(int)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(chunk_fn, bounds[:-1], bounds[1:]))


def wiener_ensemble(
    grid: TimeGrid, n_paths: int, master_seed: int, workers: int = 1
) -> WienerEnsemble:
    """Generate n_paths independent Wiener paths deterministically."""
    if n_paths < 1:
        raise ValueError(f"n_paths must be >= 1, got {n_paths}")
    SeedSpec(master_seed)  # range check
    fn = partial(_wiener_chunk, grid.dt, grid.n_steps, master_seed)
    try:
        chunks = run_path_chunks(fn, n_paths, workers)
        dw = np.concatenate(chunks, axis=0) if len(chunks) > 1 else chunks[0]
    except MemoryError as exc:
        raise MemoryError(
            f"cannot allocate Wiener ensemble of {n_paths} x {grid.n_steps} increments"
        ) from exc
    return WienerEnsemble(grid, dw)
