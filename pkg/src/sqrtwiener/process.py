"""Euler-Maruyama integration of the complex square-root process.

Scalar step at scale mu0 != 0:

    dX = (mu0 + |dw|/(2 mu0) - dt/(8 mu0^3)) * phi

Drifted step, derived at mu0 = 1/2 with drift constant beta:

    dX = (1/2 + |dw| + (-1 + beta*sign(dw)) * dt) * phi

with phi in {1, i} tied to sign(dw) (see paths.phi_half).  At beta = 0 the two
coincide exactly.  The full bracket, including its O(dt) terms, is applied
every step; squaring a scalar step therefore reproduces mu0^2*sign(dw) + dw
only up to O(dt) residuals, while the Clifford-embedded form with the exact
amplitude (clifford module) removes the shift identically.

The generalized multi-direction form integrates, per direction A with
independent driving streams,

    dY_A = (kappa_A + xi_A * dw_A * b_A + zeta_A * dt + i * eta_A * g5) * phi_A

where b_A = sign(dw_A) (the Bernoulli sign is tied to its Wiener stream, not
independent) and g5 is fixed to the unit scalar: at this level the chirality
factor only contributes a phase weight.  The matrix direction factor is
tracked as the position of each ensemble in the returned list, never
multiplied in.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import partial
from typing import Sequence

import numpy as np

from .paths import (
    SeedSpec,
    TimeGrid,
    WienerIncrements,
    make_rng,
    phi_half,
    run_path_chunks,
    sample_wiener,
    sign_of,
)

__all__ = [
    "SqrtParams",
    "ComplexPathEnsemble",
    "DirectionCoeffs",
    "sqrt_step_scalar",
    "sqrt_step_drifted",
    "integrate_sqrt",
    "integrate_general",
    "ensemble_digest",
    "ensemble_to_csv",
    "ensemble_summary",
]


@dataclass(frozen=True)
class SqrtParams:
    """Scale factor mu0 (nonzero) and drift constant beta.

    Defaults are the values under which the drifted step and the reference
    Monte Carlo protocol are stated: mu0 = 1/2, beta = 0.
    """

    mu0: float = 0.5
    beta: float = 0.0

    def __post_init__(self) -> None:
        if self.mu0 == 0 or not np.isfinite(self.mu0):
            raise ValueError(f"mu0 must be nonzero and finite, got {self.mu0}")
        if not np.isfinite(self.beta):
            raise ValueError(f"beta must be finite, got {self.beta}")


def sqrt_step_scalar(dw, dt: float, params: SqrtParams, phi):
    """Undrifted square-root increment(s) at scale mu0.

    phi must be the coin-toss phase of the same dw (1 where dw >= 0, i
    otherwise); the integrators guarantee this pairing.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    mu0 = params.mu0
    dw = np.asarray(dw)
    return (mu0 + np.abs(dw) / (2 * mu0) - dt / (8 * mu0**3)) * phi


def sqrt_step_drifted(dw, dt: float, params: SqrtParams, phi):
    """Drifted square-root increment(s); only derived at mu0 = 1/2.

    Reduces exactly to sqrt_step_scalar at beta = 0.
    """
    if params.mu0 != 0.5:
        raise ValueError(
            f"the drifted step is only derived at mu0 = 1/2 (got mu0 = {params.mu0}); "
            "use sqrt_step_scalar for other scales"
        )
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    dw = np.asarray(dw)
    sgn = np.where(dw >= 0, 1.0, -1.0)
    return (0.5 + np.abs(dw) + (-1.0 + params.beta * sgn) * dt) * phi


@dataclass(frozen=True)
class ComplexPathEnsemble:
    """n_paths complex paths: per-step increments and cumulative values.

    values[:, 0] is 0 and values[:, k+1] - values[:, k] recovers
    increments[:, k] up to one rounding of the running sum (~1 ulp of the
    cumulative value); increments are the primary data and all statistics
    are computed from them.
    """

    grid: TimeGrid
    increments: np.ndarray  # (n_paths, n_steps) complex128
    values: np.ndarray      # (n_paths, n_steps + 1) complex128

    def __post_init__(self) -> None:
        m, n = self.increments.shape
        if n != self.grid.n_steps:
            raise ValueError(
                f"increments have {n} steps, grid has {self.grid.n_steps}"
            )
        if self.values.shape != (m, n + 1):
            raise ValueError(
                f"values have shape {self.values.shape}, expected {(m, n + 1)}"
            )

    @classmethod
    def from_increments(cls, grid: TimeGrid, increments: np.ndarray) -> "ComplexPathEnsemble":
        m = increments.shape[0]
        values = np.empty((m, grid.n_steps + 1), dtype=np.complex128)
        values[:, 0] = 0.0
        np.cumsum(increments, axis=1, out=values[:, 1:])
        return cls(grid, increments, values)

    @property
    def n_paths(self) -> int:
        return self.increments.shape[0]

    @property
    def terminal_values(self) -> np.ndarray:
        return self.values[:, -1]


def _sqrt_chunk(
    dt: float, n_steps: int, mu0: float, beta: float, master_seed: int, start: int, stop: int
) -> np.ndarray:
    grid = TimeGrid(dt, n_steps)
    params = SqrtParams(mu0, beta)
    step = sqrt_step_drifted if mu0 == 0.5 else sqrt_step_scalar
    out = np.empty((stop - start, n_steps), dtype=np.complex128)
    for p in range(start, stop):
        w = sample_wiener(grid, make_rng(SeedSpec(master_seed, p)))
        out[p - start] = step(w.dw, dt, params, phi_half(w))
    return out


def integrate_sqrt(
    grid: TimeGrid,
    n_paths: int,
    params: SqrtParams,
    master_seed: int,
    workers: int = 1,
) -> ComplexPathEnsemble:
    """Integrate the square-root process over an ensemble of paths.

    Path p consumes the Wiener stream of SeedSpec(master_seed, p) -- the same
    stream wiener_ensemble(grid, n_paths, master_seed) row p is built from, so
    paired Wiener/square-root ensembles share their driving noise.  The result
    is a pure function of (grid, n_paths, params, master_seed); workers only
    split the path range.
    """
    if n_paths < 1:
        raise ValueError(f"n_paths must be >= 1, got {n_paths}")
    if params.beta != 0.0 and params.mu0 != 0.5:
        raise ValueError(
            "beta != 0 requires mu0 = 1/2 (the drifted step is only derived there)"
        )
    SeedSpec(master_seed)
    fn = partial(_sqrt_chunk, grid.dt, grid.n_steps, params.mu0, params.beta, master_seed)
    try:
        chunks = run_path_chunks(fn, n_paths, workers)
        inc = np.concatenate(chunks, axis=0) if len(chunks) > 1 else chunks[0]
        return ComplexPathEnsemble.from_increments(grid, inc)
    except MemoryError as exc:
        raise MemoryError(
            f"cannot allocate ensemble of {n_paths} x {grid.n_steps} complex increments"
        ) from exc


@dataclass(frozen=True)
class DirectionCoeffs:
    """Coefficients (kappa, xi, zeta, eta) of one direction of the
    generalized process."""

    kappa: float = 0.0
    xi: float = 0.0
    zeta: float = 0.0
    eta: float = 0.0

    def __post_init__(self) -> None:
        for name in ("kappa", "xi", "zeta", "eta"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


# The chirality factor acts as a pure phase weight at this level; its full
# matrix action is out of scope.
_G5 = 1.0


def _general_chunk(
    dt: float,
    n_steps: int,
    coeff_tuples: tuple,
    master_seed: int,
    start: int,
    stop: int,
) -> np.ndarray:
    grid = TimeGrid(dt, n_steps)
    n_dir = len(coeff_tuples)
    out = np.empty((n_dir, stop - start, n_steps), dtype=np.complex128)
    for p in range(start, stop):
        for a, (kappa, xi, zeta, eta) in enumerate(coeff_tuples):
            # independent stream per (path, direction)
            w = sample_wiener(grid, make_rng(SeedSpec(master_seed, p * n_dir + a)))
            b = sign_of(w)
            bracket = kappa + xi * w.dw * b + zeta * dt + 1j * eta * _G5
            out[a, p - start] = bracket * phi_half(w)
    return out


def integrate_general(
    grid: TimeGrid,
    n_paths: int,
    coeffs: Sequence[DirectionCoeffs],
    master_seed: int,
    workers: int = 1,
) -> list[ComplexPathEnsemble]:
    """Integrate the generalized process; one ensemble per direction.

    Direction A of path p consumes the stream of
    SeedSpec(master_seed, p * n_directions + A), so all (path, direction)
    streams are mutually independent.  With a single direction the streams
    coincide with integrate_sqrt's, which makes the coefficient-match
    reduction (kappa, xi, zeta, eta) = (mu0, 1/(2 mu0), -1/(8 mu0^3), 0)
    exact, path by path.
    """
    if len(coeffs) == 0:
        raise ValueError("at least one direction of coefficients is required")
    if n_paths < 1:
        raise ValueError(f"n_paths must be >= 1, got {n_paths}")
    SeedSpec(master_seed)
    tuples = tuple((c.kappa, c.xi, c.zeta, c.eta) for c in coeffs)
    fn = partial(_general_chunk, grid.dt, grid.n_steps, tuples, master_seed)
    chunks = run_path_chunks(fn, n_paths, workers)
    stacked = np.concatenate(chunks, axis=1) if len(chunks) > 1 else chunks[0]
    return [
        ComplexPathEnsemble.from_increments(grid, stacked[a]) for a in range(len(coeffs))
    ]


def ensemble_digest(ensemble) -> str:
    """SHA-256 digest of the raw increment stream (C-order bytes).

    Accepts a ComplexPathEnsemble or a WienerEnsemble; equal configurations
    give equal digests, which is the regression-pinning contract.
    """
    arr = getattr(ensemble, "increments", None)
    if arr is None:
        arr = ensemble.dw
    return "sha256:" + hashlib.sha256(np.ascontiguousarray(arr).tobytes()).hexdigest()


def ensemble_to_csv(
    ensemble: ComplexPathEnsemble,
    path,
    max_paths: int | None = None,
    header_lines: Sequence[str] = (),
) -> int:
    """Write increments as CSV rows (path_index, step_index, re, im).

    max_paths down-samples to the first paths only.  header_lines are emitted
    as leading '#' comments (used to reference the run manifest).  The writer
    transparently gzips when path ends with '.gz'.  Returns rows written.
    """
    import gzip

    m = ensemble.n_paths if max_paths is None else min(max_paths, ensemble.n_paths)
    n = ensemble.grid.n_steps
    opener = gzip.open if str(path).endswith(".gz") else open
    rows = 0
    with opener(path, "wt", newline="") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write("path_index,step_index,re,im\n")
        for p in range(m):
            row = ensemble.increments[p]
            fh.writelines(
                f"{p},{k},{row[k].real:.17g},{row[k].imag:.17g}\n" for k in range(n)
            )
            rows += n
    return rows


def ensemble_summary(
    ensemble: ComplexPathEnsemble, params: SqrtParams, master_seed: int
) -> dict:
    """Compact JSON-ready summary with the regression digest."""
    return {
        "n_paths": ensemble.n_paths,
        "n_steps": ensemble.grid.n_steps,
        "dt": ensemble.grid.dt,
        "mu0": params.mu0,
        "beta": params.beta,
        "master_seed": master_seed,
        "increment_digest": ensemble_digest(ensemble),
    }
