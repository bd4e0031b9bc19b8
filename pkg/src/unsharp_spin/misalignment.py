"""Misalignment densities on the unit sphere and spherical quadrature.

A misalignment model describes where the actually-measured direction m
lands when the intended direction is n.  Both models here are axially
symmetric about n: the density depends only on the angle between m and n.
Axial symmetry makes the density rotation covariant by construction,
w_n(R m) = w_{R^-1 n}(m), which the downstream effect algebra relies on;
densities without that symmetry are deliberately not representable.

Integration uses a product rule: Gauss-Legendre in cos(theta) restricted
to the support of the density (restricting to the support removes the
cap-edge discontinuity and restores fast convergence) times a uniform
periodic trapezoid in phi.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spin_core import as_unit_vector, polar_from_unit, rotation_from_euler

# Node count for the 1-D radial quadratures (normalization constants,
# eigenvalue integrals, sampling tables).  Shared so that normalization and
# integration use the same rule and their ratio is exact.
AXIAL_NODES = 256


def cap_area(epsilon: float) -> float:
    """Area in steradians of the spherical cap of half-angle ``epsilon``.

    ``epsilon`` must lie in (0, pi]; the full sphere is the epsilon = pi
    case.
    """
    if not 0.0 < epsilon <= np.pi:
        raise ValueError(f"epsilon must be in (0, pi], got {epsilon}")
    return 2.0 * np.pi * (1.0 - float(np.cos(epsilon)))


def gauss_legendre_nodes(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to the interval [a, b]."""
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return half * x + 0.5 * (a + b), half * w


class UniformCap:
    """Uniform density on the cap of half-angle ``epsilon`` about the axis.

    The density is 1/A inside the cap (A the cap area) and 0 outside.
    """

    def __init__(self, epsilon: float):
        if not 0.0 < epsilon <= np.pi:
            raise ValueError(f"epsilon must be in (0, pi], got {epsilon}")
        self.epsilon = float(epsilon)
        self.area = cap_area(epsilon)
        self._cos_eps = float(np.cos(epsilon))

    def support_u(self) -> tuple[float, float]:
        """Support of the density in u = cos(angle from axis)."""
        return self._cos_eps, 1.0

    def density_polar(self, theta) -> np.ndarray:
        """Density per steradian as a function of the angle from the axis."""
        theta = np.asarray(theta, dtype=float)
        return np.where(np.cos(theta) >= self._cos_eps - 1e-15, 1.0 / self.area, 0.0)

    def density(self, n, m) -> float:
        """Density w_n(m) for intended direction ``n`` at direction ``m``."""
        n = as_unit_vector(n, "n")
        m = as_unit_vector(m, "m")
        return 1.0 / self.area if float(n @ m) >= self._cos_eps - 1e-15 else 0.0

    def sample_polar(self, rng: np.random.Generator, size: int) -> tuple[np.ndarray, np.ndarray]:
        """Draw (cos_theta, phi) pairs about the axis; uniform on the cap."""
        u = self._cos_eps + (1.0 - self._cos_eps) * rng.random(size)
        phi = 2.0 * np.pi * rng.random(size)
        return u, phi

    def describe(self) -> str:
        return f"uniform-cap(epsilon={self.epsilon!r})"


class AxialDensity:
    """Axially symmetric density with a user-supplied radial profile.

    ``profile`` maps the angle theta in [0, epsilon] to a nonnegative
    weight; it is normalized internally by 1-D quadrature so the density
    integrates to 1 over the sphere.  The profile must be nonnegative on
    its support and have positive total mass.
    """

    def __init__(self, epsilon: float, profile):
        if not 0.0 < epsilon <= np.pi:
            raise ValueError(f"epsilon must be in (0, pi], got {epsilon}")
        self.epsilon = float(epsilon)
        self.profile = profile
        u, w = gauss_legendre_nodes(float(np.cos(epsilon)), 1.0, AXIAL_NODES)
        values = np.asarray(profile(np.arccos(np.clip(u, -1.0, 1.0))), dtype=float)
        if values.shape != u.shape:
            raise ValueError("profile must map angle arrays to same-shape arrays")
        if np.any(values < 0.0) or not np.all(np.isfinite(values)):
            raise ValueError("profile must be nonnegative and finite on [0, epsilon]")
        mass = 2.0 * np.pi * float(w @ values)
        if mass <= 0.0:
            raise ValueError("profile has zero total mass on [0, epsilon]")
        self._norm = 1.0 / mass
        self._cos_eps = float(np.cos(epsilon))

    def support_u(self) -> tuple[float, float]:
        return self._cos_eps, 1.0

    def density_polar(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        inside = np.cos(theta) >= self._cos_eps - 1e-15
        values = np.where(inside, np.asarray(self.profile(theta), dtype=float), 0.0)
        return self._norm * values

    def density(self, n, m) -> float:
        n = as_unit_vector(n, "n")
        m = as_unit_vector(m, "m")
        angle = float(np.arccos(np.clip(n @ m, -1.0, 1.0)))
        return float(self.density_polar(angle))

    def sample_polar(self, rng: np.random.Generator, size: int) -> tuple[np.ndarray, np.ndarray]:
        """Inverse-CDF sampling of theta off a dense table, uniform phi."""
        grid = np.linspace(0.0, self.epsilon, 4097)
        pdf = self.density_polar(grid) * np.sin(grid)
        steps = 0.5 * (pdf[1:] + pdf[:-1]) * np.diff(grid)
        cdf = np.concatenate([[0.0], np.cumsum(steps)])
        cdf /= cdf[-1]
        theta = np.interp(rng.random(size), cdf, grid)
        phi = 2.0 * np.pi * rng.random(size)
        return np.cos(theta), phi

    def describe(self) -> str:
        name = getattr(self.profile, "__name__", "profile")
        return f"axial(epsilon={self.epsilon!r}, profile={name})"


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts for the product quadrature: Gauss-Legendre in cos(theta)
    by ``n_theta`` and periodic trapezoid in phi by ``n_phi``."""

    n_theta: int = 64
    n_phi: int = 64

    def __post_init__(self):
        if self.n_theta < 1:
            raise ValueError(f"n_theta must be >= 1, got {self.n_theta}")
        if self.n_phi < 1:
            raise ValueError(f"n_phi must be >= 1, got {self.n_phi}")


DEFAULT_QUADRATURE = QuadratureSpec()


def sphere_grid(
    spec: QuadratureSpec,
    axis=None,
    u_range: tuple[float, float] = (-1.0, 1.0),
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Quadrature nodes on (part of) the sphere.

    Returns ``(points, weights, local_u)`` where ``points`` is (N, 3),
    ``weights`` sums to the area of the u-band, and ``local_u`` is the
    cosine of the angle between each node and ``axis``.  When ``axis`` is
    given the polar grid is re-poled so its symmetry axis is ``axis``;
    otherwise the z-axis is used.
    """
    u, wu = gauss_legendre_nodes(u_range[0], u_range[1], spec.n_theta)
    phi = 2.0 * np.pi * np.arange(spec.n_phi) / spec.n_phi
    wphi = 2.0 * np.pi / spec.n_phi

    uu = np.repeat(u, spec.n_phi)
    pp = np.tile(phi, spec.n_theta)
    st = np.sqrt(np.clip(1.0 - uu * uu, 0.0, None))
    local = np.stack([st * np.cos(pp), st * np.sin(pp), uu], axis=1)
    weights = np.repeat(wu, spec.n_phi) * wphi

    if axis is None:
        points = local
    else:
        theta_a, phi_a = polar_from_unit(axis)
        frame = rotation_from_euler(phi_a, theta_a, 0.0)  # maps z to axis
        points = local @ frame.T
    return points, weights, uu


def sphere_integral_matrix(
    f,
    weight,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    axis=None,
    u_range: tuple[float, float] = (-1.0, 1.0),
) -> np.ndarray:
    """Quadrature approximation of the matrix integral of weight(m) f(m).

    ``f`` maps a unit 3-vector to a 3x3 array and ``weight`` to a
    nonnegative scalar.  The node set is deterministic for a fixed spec,
    and the reduction is an ordered sum, so results are bit-stable.  Pass
    ``axis`` and ``u_range`` to restrict integration to a band around an
    axis (e.g. the support of a cap density).
    """
    points, weights, _ = sphere_grid(spec, axis=axis, u_range=u_range)
    total = np.zeros((3, 3), dtype=complex)
    for point, w in zip(points, weights):
        wv = float(weight(point))
        if wv < 0.0:
            raise ValueError("weight function returned a negative value")
        if wv != 0.0:
            total += (w * wv) * np.asarray(f(point), dtype=complex)
    return total


def density_covariance_witness(model, samples: int, seed: int = 0) -> float:
    """Largest observed violation of w_n(R m) = w_{R^-1 n}(m).

    Samples random rotations and direction pairs; axially symmetric models
    give a witness at rounding level.  Exposed as a diagnostic; the models
    in this module satisfy covariance by construction.
    """
    from .spin_core import random_rotation, random_unit_vector

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        r = random_rotation(rng)
        n = random_unit_vector(rng)
        m = random_unit_vector(rng)
        lhs = model.density(n, r @ m)
        rhs = model.density(r.T @ n, m)
        worst = max(worst, abs(lhs - rhs))
    return worst
