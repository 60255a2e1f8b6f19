"""Finite-dimensional l_p geometry: exponents, norms, duality and unit spheres.

Exponents are plain floats with ``math.inf`` as the explicit max-norm
endpoint (no large-sentinel approximation).  Norms are computed with
max-factoring so that large exponents do not overflow.  Everything here is
pure and reentrant; values can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

INF = math.inf

TWO_PI = 2.0 * math.pi

# |  ||x||_p - 1 |  allowed for a vector claiming to be on the unit sphere.
UNIT_NORM_TOL = 1e-10


def check_exponent(p) -> float:
    """Validate an l_p exponent: a finite real >= 1 or math.inf."""
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise ValueError(f"exponent must be >= 1 or inf; got {p}")
    return p


def dual_exponent(p) -> float:
    """Conjugate exponent: 1/p + 1/p' = 1, with 1 <-> inf at the endpoints."""
    p = check_exponent(p)
    if p == 1.0:
        return INF
    if p == INF:
        return 1.0
    return p / (p - 1.0)


def pnorm(x, p) -> float:
    """(sum |x_i|^p)^(1/p), or max |x_i| for p = inf.

    Computed as m * (sum (|x_i|/m)^p)^(1/p) with m = max|x_i| to avoid
    overflow for large p.  Rejects p < 1 and non-finite entries.
    """
    p = check_exponent(p)
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise ValueError("pnorm of an empty vector")
    if not np.all(np.isfinite(x)):
        raise ValueError("pnorm requires finite entries")
    a = np.abs(x)
    m = float(a.max())
    if m == 0.0:
        return 0.0
    if p == INF:
        return m
    return m * float(np.sum((a / m) ** p)) ** (1.0 / p)


def pnorm_cols(X, p) -> np.ndarray:
    """Column-wise p-norms of a (dim, n) array, overflow-safe."""
    p = check_exponent(p)
    A = np.abs(np.asarray(X, dtype=float))
    m = A.max(axis=0)
    if p == INF:
        return m
    safe = np.where(m > 0.0, m, 1.0)
    s = ((A / safe) ** p).sum(axis=0)
    return np.where(m > 0.0, safe * s ** (1.0 / p), 0.0)


@dataclass(frozen=True)
class SequenceSpace:
    """R^dim with the p-norm."""

    dim: int
    p: float

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dim must be a positive integer; got {self.dim}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "p", check_exponent(self.p))

    def norm(self, x) -> float:
        return pnorm(x, self.p)

    def norm_cols(self, X) -> np.ndarray:
        return pnorm_cols(X, self.p)

    def dual(self) -> "SequenceSpace":
        return SequenceSpace(self.dim, dual_exponent(self.p))

    # 2D only: continuous surjective parametrization of the unit sphere.
    def sphere_point(self, theta: float) -> np.ndarray:
        return self.sphere_grid(np.asarray([float(theta)]))[:, 0]

    def sphere_grid(self, thetas) -> np.ndarray:
        if self.dim != 2:
            raise ValueError("sphere parametrization by angle requires dim = 2")
        return sphere_grid_2d(thetas, self.p)

    def __repr__(self):
        p = "inf" if self.p == INF else f"{self.p:g}"
        return f"l_{p}^{self.dim}"


@dataclass
class UnitVector:
    """A vector certified to lie on the unit sphere of its space."""

    coords: np.ndarray
    space: object

    def __post_init__(self):
        self.coords = np.asarray(self.coords, dtype=float).copy()
        if self.coords.ndim != 1 or self.coords.shape[0] != self.space.dim:
            raise ValueError("coords length must equal space dimension")
        r = self.space.norm(self.coords)
        if abs(r - 1.0) > UNIT_NORM_TOL:
            raise ValueError(f"not a unit vector: norm residual {abs(r - 1.0):.3e}")

    def __repr__(self):
        body = ", ".join(f"{c:.6g}" for c in self.coords)
        return f"UnitVector([{body}], {self.space})"


def unit(coords, space) -> UnitVector:
    """Normalize coords in the space norm and wrap as a UnitVector."""
    coords = np.asarray(coords, dtype=float)
    r = space.norm(coords)
    if r == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return UnitVector(coords / r, space)


def _square_point(s: float) -> tuple[float, float]:
    if s < 1.0:
        return 1.0, s
    if s < 3.0:
        return 2.0 - s, 1.0
    if s < 5.0:
        return -1.0, 4.0 - s
    if s < 7.0:
        return s - 6.0, -1.0
    return 1.0, s - 8.0


def sphere_grid_2d(thetas, p) -> np.ndarray:
    """Images of angles on the unit sphere of l_p^2, as a (2, n) array.

    Finite p uses (sign(cos)|cos|^(2/p), sign(sin)|sin|^(2/p)), which is unit
    because |cos|^2 + |sin|^2 = 1.  p = inf walks the square boundary by arc
    length, with quarter turns landing on the axes as in the circle case.
    """
    p = check_exponent(p)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    if thetas.size == 1:  # scalar fast path for refinement loops
        t = float(thetas[0])
        if p == INF:
            x, y = _square_point((t % TWO_PI) * (8.0 / TWO_PI))
            return np.asarray([[x], [y]])
        c, sn = math.cos(t), math.sin(t)
        e = 2.0 / p
        return np.asarray(
            [[math.copysign(abs(c) ** e, c)], [math.copysign(abs(sn) ** e, sn)]]
        )
    if p == INF:
        s = (thetas % TWO_PI) * (8.0 / TWO_PI)
        x = np.empty_like(s)
        y = np.empty_like(s)
        m = s < 1.0
        x[m] = 1.0
        y[m] = s[m]
        m = (s >= 1.0) & (s < 3.0)
        x[m] = 2.0 - s[m]
        y[m] = 1.0
        m = (s >= 3.0) & (s < 5.0)
        x[m] = -1.0
        y[m] = 4.0 - s[m]
        m = (s >= 5.0) & (s < 7.0)
        x[m] = s[m] - 6.0
        y[m] = -1.0
        m = s >= 7.0
        x[m] = 1.0
        y[m] = s[m] - 8.0
        return np.vstack([x, y])
    c = np.cos(thetas)
    sn = np.sin(thetas)
    e = 2.0 / p
    return np.vstack([np.sign(c) * np.abs(c) ** e, np.sign(sn) * np.abs(sn) ** e])


def sphere_point_2d(theta, p) -> UnitVector:
    """Point of S_{l_p^2} at angle theta; continuous and surjective in theta."""
    space = SequenceSpace(2, p)
    return UnitVector(space.sphere_grid(np.asarray([float(theta)]))[:, 0], space)


def sphere_param_2d(x, p) -> float:
    """Inverse of the sphere parametrization: theta with x(theta) ~ x.

    For finite p the coordinate map is |cos theta|^(2/p), so the parameter is
    atan2 of the (p/2)-power coordinates, not the euclidean angle.
    """
    p = check_exponent(p)
    x1, x2 = float(x[0]), float(x[1])
    if p != INF:
        e = p / 2.0
        return math.atan2(
            math.copysign(abs(x2) ** e, x2), math.copysign(abs(x1) ** e, x1)
        ) % TWO_PI
    ax1, ax2 = abs(x1), abs(x2)
    if ax1 >= ax2:  # right or left edge of the square
        if x1 > 0:
            s = x2 if x2 >= 0.0 else 8.0 + x2
        else:
            s = 4.0 - x2
    else:  # top or bottom edge
        s = 2.0 - x1 if x2 > 0 else 6.0 + x1
    return (s / 8.0) * TWO_PI


def sample_sphere_coords(space, count: int, seed: int) -> np.ndarray:
    """(dim, count) array of unit vectors of `space`, deterministic in seed.

    dim = 2 uses a uniform angle grid; higher dimensions p-normalize draws
    from a rotation-invariant Gaussian generator (all sign orthants reachable).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if space.dim == 2 and hasattr(space, "sphere_grid"):
        thetas = TWO_PI * np.arange(count) / count
        return space.sphere_grid(thetas)
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((space.dim, count))
    norms = space.norm_cols(G)
    while np.any(norms < 1e-12):  # essentially impossible; regenerate degenerates
        bad = norms < 1e-12
        G[:, bad] = rng.standard_normal((space.dim, int(bad.sum())))
        norms = space.norm_cols(G)
    return G / norms


def sphere_sample(space, count: int, seed: int) -> list[UnitVector]:
    """Deterministic list of unit vectors covering the sphere of `space`."""
    X = sample_sphere_coords(space, count, seed)
    return [UnitVector(X[:, j], space) for j in range(X.shape[1])]
