"""Analytic heat/oscillatory kernels, the Wick rotation, and a
Crank-Nicolson solver for the complex advection-diffusion equation.

The oscillatory (free-propagator) kernel is taken on the principal branch,

    psi(x, t) = (4 pi i t)^(-1/2) exp(i x^2 / (4 t))
              = (4 pi t)^(-1/2) [cos(theta') + i sin(theta')],
    theta'    = x^2/(4 t) - pi/4,

so its modulus is (4 pi t)^(-1/2) independent of x.  The Wick rotation
t -> -i t maps it to the heat kernel (4 pi t)^(-1/2) exp(-x^2/(4 t)).
Evaluated on the expanded form this reads

    K = (4 pi t)^(-1/2) [cos(i theta') + i sin(i theta')] * exp(-pi/4),

where the bracket is cosh(theta') - sinh(theta') = exp(-theta') (real up to
rounding) and the exp(-pi/4) factor compensates the branch phase carried
inside theta'; the identity K == heat kernel is exact.

At sample level the rotation acts on (modulus, phase) pairs as
rho * e^{i theta} -> rho * e^{-theta}.  Producers must supply *unwrapped*
phases with the constant -pi/4 branch offset excluded (the offset belongs to
the rotation factor, not the sample): wrapping into (-pi, pi] would corrupt
the map, since theta enters an exponential, not a phase.

The evolution equation solved by fp_evolve is

    d psi / dt = -mu * d psi / dx + D * d^2 psi / dx^2

with complex mu, D.  Its drift parameter is oriented so that solutions
translate toward +mu t, matching the sign of the measured increment mean of
the square-root process (mu = (1+i)/2 - beta (1-i)/2, D = -i/4).  Note that
for complex D the *modulus* center of a packet is not Re(mu) t: the
imaginary parts of mu and D couple, so run reports carry the measured
displacement rather than a nominal one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import solve_banded

from .process import SqrtParams

__all__ = [
    "KernelSample",
    "FPParams",
    "GridFunction",
    "schrodinger_kernel",
    "heat_kernel",
    "wick_rotate_kernel",
    "wick_rotate_samples",
    "schrodinger_samples",
    "square_samples",
    "fp_params_from_process",
    "fp_analytic_solution",
    "gaussian_packet",
    "fp_evolve",
    "grid_integral",
]

_QUARTER_PI = np.pi / 4


def _check_t(t: float) -> None:
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")


def schrodinger_kernel(x, t: float):
    """Free-propagator kernel (4 pi i t)^(-1/2) exp(i x^2/(4t)), principal
    branch; |result| = (4 pi t)^(-1/2) for all x."""
    _check_t(t)
    x = np.asarray(x, dtype=float)
    theta = x * x / (4 * t) - _QUARTER_PI
    return (4 * np.pi * t) ** -0.5 * (np.cos(theta) + 1j * np.sin(theta))


def heat_kernel(x, t: float):
    """(4 pi t)^(-1/2) exp(-x^2/(4t))."""
    _check_t(t)
    x = np.asarray(x, dtype=float)
    return (4 * np.pi * t) ** -0.5 * np.exp(-x * x / (4 * t))


def wick_rotate_kernel(x, t: float):
    """The rotated oscillatory kernel, evaluated literally on the expanded
    cos/sin form with complex arguments; equals heat_kernel(x, t) up to
    rounding, with vanishing imaginary residual."""
    _check_t(t)
    x = np.asarray(x, dtype=float)
    theta = (x * x / (4 * t) - _QUARTER_PI).astype(complex)
    bracket = np.cos(1j * theta) + 1j * np.sin(1j * theta)
    out = (4 * np.pi * t) ** -0.5 * bracket * np.exp(-_QUARTER_PI)
    return out.real if out.ndim else float(out.real)


@dataclass(frozen=True)
class KernelSample:
    """A complex sample in polar form: modulus rho >= 0 and *unwrapped*
    phase theta (no modular reduction; the Wick map is not periodic)."""

    rho: float
    theta: float

    def __post_init__(self) -> None:
        if self.rho < 0:
            raise ValueError(f"rho must be non-negative, got {self.rho}")


def wick_rotate_samples(samples: Sequence[KernelSample]) -> np.ndarray:
    """Sample-level Wick rotation rho e^{i theta} -> rho e^{-theta}.

    Outputs are real and non-negative by construction.
    """
    rho = np.array([s.rho for s in samples])
    theta = np.array([s.theta for s in samples])
    return rho * np.exp(-theta)


def schrodinger_samples(x, t: float) -> list[KernelSample]:
    """Polar samples of the oscillatory kernel on a grid of positions.

    The recorded phase is the bare quadratic phase x^2/(4t), unwrapped by
    construction; the constant -pi/4 branch offset is excluded (it is
    absorbed by the rotation factor), so rotating these samples reproduces
    heat_kernel exactly.
    """
    _check_t(t)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    rho = (4 * np.pi * t) ** -0.5
    return [KernelSample(rho, float(xi * xi / (4 * t))) for xi in x]


def square_samples(values: np.ndarray) -> list[KernelSample]:
    """Polar samples of the squared process values psi = z^2.

    rho = |z|^2 and theta = 2*arg(z), which is unwrapped as long as each z
    stays in one half-plane (square-root paths accumulate in the first
    quadrant, so their phase lives in [0, pi/2] and the doubled phase in
    [0, pi]).
    """
    z = np.atleast_1d(np.asarray(values, dtype=np.complex128))
    rho = np.abs(z) ** 2
    theta = 2.0 * np.angle(z)
    return [KernelSample(float(r), float(th)) for r, th in zip(rho, theta)]


@dataclass(frozen=True)
class FPParams:
    """Drift and diffusion of the complex advection-diffusion equation."""

    drift: complex
    diffusion: complex
    beta: float = 0.0

    def __post_init__(self) -> None:
        if self.diffusion == 0:
            raise ValueError("diffusion must be nonzero")
        for v in (self.drift, self.diffusion):
            if not np.isfinite(v):
                raise ValueError("drift and diffusion must be finite")


def fp_params_from_process(params: SqrtParams) -> FPParams:
    """Evolution coefficients of the square-root process:
    mu = (1+i)/2 - beta (1-i)/2 and D = -i/4 (derived at mu0 = 1/2)."""
    if params.mu0 != 0.5:
        raise ValueError(
            f"evolution coefficients are derived at mu0 = 1/2, got {params.mu0}"
        )
    beta = params.beta
    drift = (1 + 1j) / 2 - beta * (1 - 1j) / 2
    return FPParams(drift=drift, diffusion=-0.25j, beta=beta)


def fp_analytic_solution(x, t: float, p: FPParams):
    """Fundamental solution (4 pi D t)^(-1/2) exp(-(x - mu t)^2 / (4 D t)),
    principal branch; satisfies d psi/dt = -mu d psi/dx + D d^2 psi/dx^2."""
    _check_t(t)
    x = np.asarray(x, dtype=float)
    mu, dd = p.drift, p.diffusion
    return (4 * np.pi * dd * t) ** -0.5 * np.exp(-((x - mu * t) ** 2) / (4 * dd * t))


def gaussian_packet(x, t: float, sigma0: float, p: FPParams):
    """Closed-form evolution of a unit-mass Gaussian of width sigma0:

        (2 pi s2)^(-1/2) exp(-(x - mu t)^2 / (2 s2)),  s2 = sigma0^2 + 2 D t.

    t = 0 gives the initial profile; this is the analytic reference for
    fp_evolve runs started from a localized packet (a pure fundamental
    solution with complex D has constant modulus and never leaves the
    boundary regime).
    """
    if sigma0 <= 0:
        raise ValueError(f"sigma0 must be positive, got {sigma0}")
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    x = np.asarray(x, dtype=float)
    s2 = sigma0 * sigma0 + 2 * p.diffusion * t
    return (2 * np.pi * s2) ** -0.5 * np.exp(-((x - p.drift * t) ** 2) / (2 * s2))


@dataclass(frozen=True)
class GridFunction:
    """Complex values on a uniform grid over [x_min, x_max]."""

    x_min: float
    x_max: float
    values: np.ndarray

    def __post_init__(self) -> None:
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")
        if len(self.values) < 3:
            raise ValueError("grid needs at least 3 points")

    @property
    def n_points(self) -> int:
        return len(self.values)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)


def grid_integral(g: GridFunction) -> complex:
    """Trapezoid integral of the grid function (the conserved 'mass')."""
    return complex(np.trapezoid(g.values, dx=g.dx))


_BOUNDARY_TOL = 1e-8


def fp_evolve(initial: GridFunction, p: FPParams, dt: float, n_steps: int) -> GridFunction:
    """Advance d psi/dt = -mu d psi/dx + D d^2 psi/dx^2 by n_steps implicit
    time-centered (Crank-Nicolson) steps with boundary values pinned to 0.

    Configuration is validated before stepping: the advective number
    |mu| dt / dx must not exceed 1/2, and the initial profile must be
    negligible at the boundary (|edge| <= 1e-8 * max|psi|), otherwise the
    pinned boundaries are wrong, mass leaks, and the run is refused.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    dx = initial.dx
    advective = abs(p.drift) * dt / dx
    if advective > 0.5:
        raise ValueError(
            f"advective stability bound violated: |drift|*dt/dx = {advective:.4g} > 0.5"
        )
    v = initial.values
    peak = np.abs(v).max()
    edge = max(abs(v[0]), abs(v[-1]))
    if peak == 0 or edge > _BOUNDARY_TOL * peak:
        raise ValueError(
            "domain too narrow: boundary amplitude "
            f"{edge:.3g} exceeds {_BOUNDARY_TOL:g} * peak ({peak:.3g})"
        )

    n = initial.n_points
    adv = p.drift / (2 * dx)
    dif = p.diffusion / (dx * dx)
    lo = dif + adv     # psi[j-1] coefficient of L
    di = -2 * dif      # psi[j]
    up = dif - adv     # psi[j+1]

    # banded LHS of (I - dt/2 L) psi_next = (I + dt/2 L) psi
    ab = np.zeros((3, n), dtype=np.complex128)
    ab[0, 2:] = -0.5 * dt * up
    ab[1, :] = 1.0 - 0.5 * dt * di
    ab[2, :-2] = -0.5 * dt * lo
    ab[1, 0] = ab[1, -1] = 1.0
    ab[0, 1] = 0.0
    ab[2, -2] = 0.0

    psi = v.astype(np.complex128, copy=True)
    for _ in range(n_steps):
        rhs = psi.copy()
        rhs[1:-1] += 0.5 * dt * (lo * psi[:-2] + di * psi[1:-1] + up * psi[2:])
        rhs[0] = rhs[-1] = 0.0
        psi = solve_banded((1, 1), ab, rhs)
    return GridFunction(initial.x_min, initial.x_max, psi)
