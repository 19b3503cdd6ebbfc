"""Rays, the space of physical states, and superposition spheres.

A physical state is a ray: an equivalence class of nonzero vectors under
complex rescaling.  Rays are represented by a gauge-fixed unit vector so that
equality of states becomes (near) equality of arrays.  Two orthogonal rays
span a two-sphere of superpositions; a complex parameter labels its points in
stereographic fashion, including the point at infinity.

The statistical distance between rays is ``arccos |<a|b>|``; transition
probabilities are ``cos^2`` of it.  The round two-sphere of superpositions
has total area pi in this normalization, which :func:`sphere_area` verifies
by direct quadrature rather than by formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hilbert import as_state

__all__ = [
    "GAUGE_TOL",
    "Ray",
    "RiemannCoordinate",
    "SpannedSphere",
    "project",
    "rays_close",
    "fs_distance",
    "transition_probability",
    "nonlinear_superpose",
    "riemann_coordinate",
    "sphere_membership",
    "sphere_area",
]

#: Modulus below which a leading component is treated as zero by the gauge fix.
GAUGE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Ray:
    """A gauge-fixed representative of a physical state.

    The representative has unit norm and its first component of modulus
    above :data:`GAUGE_TOL` is real and strictly positive.  Construct rays
    with :func:`project`; the constructor validates but does not repair.
    """

    rep: np.ndarray

    def __post_init__(self):
        v = self.rep
        if v.ndim != 1 or v.size == 0:
            raise ValueError("ray representative must be a nonempty vector")
        if abs(float(np.linalg.norm(v)) - 1.0) > 1e-12:
            raise ValueError("ray representative must have unit norm")
        for comp in v:
            if abs(comp) > GAUGE_TOL:
                if not (abs(comp.imag) <= GAUGE_TOL * abs(comp) and comp.real > 0.0):
                    raise ValueError(
                        "ray representative is not gauge fixed: leading "
                        "component must be real and positive"
                    )
                break

    @property
    def dim(self) -> int:
        return self.rep.shape[0]

    def overlap_with(self, other: "Ray") -> complex:
        return complex(np.vdot(self.rep, other.rep))


def project(psi) -> Ray:
    """Project a nonzero vector to its gauge-fixed ray representative.

    Normalizes to unit length, then rotates the global phase so the first
    component of modulus above :data:`GAUGE_TOL` is real and positive.  Any
    two vectors on the same ray map to representatives agreeing to roundoff.
    """
    v = as_state(psi, name="psi")
    nrm = float(np.linalg.norm(v))
    if nrm < GAUGE_TOL:
        raise ValueError("cannot project a (numerically) zero vector")
    v = v / nrm
    for comp in v:
        if abs(comp) > GAUGE_TOL:
            v = v * (comp.conjugate() / abs(comp))
            break
    v = v / float(np.linalg.norm(v))
    # pin the gauge component exactly real: its imaginary part is pure roundoff
    for k in range(v.shape[0]):
        if abs(v[k]) > GAUGE_TOL:
            v[k] = complex(abs(v[k]), 0.0)
            break
    v.setflags(write=False)
    return Ray(rep=v)


def rays_close(a: Ray, b: Ray, tol: float = 1e-12) -> bool:
    """True when two gauge-fixed representatives agree entrywise within tol."""
    if a.dim != b.dim:
        return False
    return bool(np.max(np.abs(a.rep - b.rep)) <= tol)


def _as_ray(x) -> Ray:
    return x if isinstance(x, Ray) else project(x)


def fs_distance(a, b) -> float:
    """Statistical distance ``arccos |<a|b>|`` between two rays.

    Evaluated as ``atan2(sin, cos)`` with ``sin`` the norm of the component
    of one representative orthogonal to the other, which is accurate near
    coincident rays where the plain arccos loses half the digits.  Range is
    ``[0, pi/2]``.
    """
    ra, rb = _as_ray(a), _as_ray(b)
    if ra.dim != rb.dim:
        raise ValueError(f"dimension mismatch: {ra.dim} vs {rb.dim}")
    ov = np.vdot(rb.rep, ra.rep)
    c = abs(ov)
    perp = ra.rep - rb.rep * ov
    s = float(np.linalg.norm(perp))
    return math.atan2(s, min(c, 1.0))


def transition_probability(a, b) -> float:
    """Probability ``|<a|b>|^2`` for rays, equal to ``cos^2`` of the distance.

    Both routes are evaluated and must agree to 1e-12; this cross-check is
    the point of the function, not an optimization.
    """
    ra, rb = _as_ray(a), _as_ray(b)
    if ra.dim != rb.dim:
        raise ValueError(f"dimension mismatch: {ra.dim} vs {rb.dim}")
    direct = float(abs(np.vdot(ra.rep, rb.rep)) ** 2)
    via_distance = math.cos(fs_distance(ra, rb)) ** 2
    assert abs(direct - via_distance) <= 1e-12, (
        f"transition probability routes disagree: {direct!r} vs {via_distance!r}"
    )
    return direct


@dataclass(frozen=True, eq=False)
class RiemannCoordinate:
    """Point of the superposition sphere in homogeneous form ``(w0, w1)``.

    The pair is defined up to common complex scale and normalized so
    ``max(|w0|, |w1|) = 1``; ``w0 = 0`` encodes the point at infinity.
    """

    w0: complex
    w1: complex

    def __post_init__(self):
        m = max(abs(self.w0), abs(self.w1))
        if not math.isfinite(m) or m == 0.0:
            raise ValueError("homogeneous coordinate must be finite and nonzero")
        if abs(m - 1.0) > 1e-9:
            raise ValueError(f"coordinate must be normalized: max modulus {m!r}")

    @classmethod
    def from_pair(cls, w0: complex, w1: complex) -> "RiemannCoordinate":
        m = max(abs(w0), abs(w1))
        if m == 0.0:
            raise ValueError("homogeneous coordinate must be nonzero")
        return cls(w0=complex(w0) / m, w1=complex(w1) / m)

    @classmethod
    def from_z(cls, z: complex) -> "RiemannCoordinate":
        return cls.from_pair(1.0, complex(z))

    @classmethod
    def infinity(cls) -> "RiemannCoordinate":
        return cls(w0=0.0, w1=1.0)

    @property
    def is_infinity(self) -> bool:
        return abs(self.w0) == 0.0

    @property
    def z(self) -> complex:
        """Affine coordinate ``w1/w0``; raises at the point at infinity."""
        if self.is_infinity:
            raise ZeroDivisionError("coordinate is the point at infinity")
        return self.w1 / self.w0

    def chordal_distance(self, other: "RiemannCoordinate") -> float:
        """Scale-free distance ``|w0 w1' - w1 w0'| / (|w| |w'|)`` in [0, 1]."""
        num = abs(self.w0 * other.w1 - self.w1 * other.w0)
        den = math.hypot(abs(self.w0), abs(self.w1)) * math.hypot(abs(other.w0), abs(other.w1))
        return num / den


@dataclass(frozen=True, eq=False)
class SpannedSphere:
    """Two-sphere of superpositions of an orthonormal pair of states.

    The defining data are the actual representative vectors, not just their
    rays: rephasing a representative relabels the sphere's coordinate (the
    coordinate of a fixed point transforms as ``z -> e^{-i lam} z`` when
    ``rep1`` picks up ``e^{i lam}``), so the representatives must be pinned
    down for the chart to be well defined.  Ray views of the two poles are
    available via :attr:`basis0` / :attr:`basis1`.
    """

    rep0: np.ndarray
    rep1: np.ndarray

    def __post_init__(self):
        r0 = as_state(self.rep0, name="rep0")
        r1 = as_state(self.rep1, name="rep1")
        if r0.shape != r1.shape:
            raise ValueError("basis representatives must share a dimension")
        if abs(float(np.linalg.norm(r0)) - 1.0) > 1e-12 or abs(float(np.linalg.norm(r1)) - 1.0) > 1e-12:
            raise ValueError("basis representatives must be unit vectors")
        if abs(np.vdot(r0, r1)) > 1e-10:
            raise ValueError(
                f"basis representatives must be orthogonal: |<0|1>| = "
                f"{abs(np.vdot(r0, r1)):.3e}"
            )
        object.__setattr__(self, "rep0", r0)
        object.__setattr__(self, "rep1", r1)

    @classmethod
    def from_rays(cls, a: Ray, b: Ray) -> "SpannedSphere":
        return cls(rep0=a.rep.copy(), rep1=b.rep.copy())

    @property
    def dim(self) -> int:
        return self.rep0.shape[0]

    @property
    def basis0(self) -> Ray:
        return project(self.rep0)

    @property
    def basis1(self) -> Ray:
        return project(self.rep1)

    def rephased(self, lam0: float = 0.0, lam1: float = 0.0) -> "SpannedSphere":
        """Same sphere with representatives rotated by ``e^{i lam}`` factors."""
        return SpannedSphere(
            rep0=self.rep0 * np.exp(1j * lam0),
            rep1=self.rep1 * np.exp(1j * lam1),
        )

    def point(self, coord: RiemannCoordinate) -> Ray:
        """The ray ``[w0 rep0 + w1 rep1]`` at a coordinate of the sphere."""
        return project(coord.w0 * self.rep0 + coord.w1 * self.rep1)


def nonlinear_superpose(psi, phi, coord) -> Ray:
    """Superposition ray ``[w0 psi + w1 phi]`` labeled by a sphere coordinate.

    ``psi`` and ``phi`` must be orthogonal rays (overlap below 1e-10);
    non-orthogonal inputs are rejected with a pointer at Gram-Schmidt.  The
    coordinate may be a :class:`RiemannCoordinate` or a plain complex ``z``
    (shorthand for ``(1, z)``).
    """
    ra, rb = _as_ray(psi), _as_ray(phi)
    if ra.dim != rb.dim:
        raise ValueError(f"dimension mismatch: {ra.dim} vs {rb.dim}")
    ov = abs(np.vdot(ra.rep, rb.rep))
    if ov > 1e-10:
        raise ValueError(
            f"superposition basis must be orthogonal: |<psi|phi>| = {ov:.3e}; "
            "orthonormalize first (gram_schmidt)"
        )
    if not isinstance(coord, RiemannCoordinate):
        coord = RiemannCoordinate.from_z(coord)
    return SpannedSphere.from_rays(ra, rb).point(coord)


def sphere_membership(x, sphere: SpannedSphere) -> float:
    """Distance from a ray to the sphere: norm of the off-span component.

    Zero (to roundoff) exactly for points on the sphere; invariant under
    rephasing of either basis representative.
    """
    r = _as_ray(x)
    if r.dim != sphere.dim:
        raise ValueError(f"dimension mismatch: {r.dim} vs {sphere.dim}")
    w0 = np.vdot(sphere.rep0, r.rep)
    w1 = np.vdot(sphere.rep1, r.rep)
    residual = r.rep - w0 * sphere.rep0 - w1 * sphere.rep1
    return float(np.linalg.norm(residual))


def riemann_coordinate(x, sphere: SpannedSphere) -> RiemannCoordinate:
    """Coordinate of a ray on a spanned sphere.

    Inverts :func:`nonlinear_superpose` for the sphere's fixed basis
    representatives: ``w_i = <rep_i|x>`` up to common scale.  Rays off the
    sphere (membership residual above 1e-10) are rejected.
    """
    r = _as_ray(x)
    res = sphere_membership(r, sphere)
    if res > 1e-10:
        raise ValueError(f"ray is not on the sphere: membership residual {res:.3e}")
    w0 = complex(np.vdot(sphere.rep0, r.rep))
    w1 = complex(np.vdot(sphere.rep1, r.rep))
    return RiemannCoordinate.from_pair(w0, w1)


def _sphere_point(sphere: SpannedSphere, theta: float, phi: float) -> np.ndarray:
    return math.cos(theta / 2.0) * sphere.rep0 + (
        math.sin(theta / 2.0) * np.exp(1j * phi)
    ) * sphere.rep1


def _area_element(sphere: SpannedSphere, theta, phi, metric_factor: float) -> np.ndarray:
    """sqrt(det) of the pulled-back statistical metric at grid points.

    ``theta``/``phi`` broadcast; tangent vectors are computed analytically
    from the embedding and projected horizontally before taking overlaps, so
    this is the same metric the rest of the package uses, not a closed form.
    """
    theta = np.asarray(theta, dtype=float)[:, None, None]
    phi = np.asarray(phi, dtype=float)[None, :, None]
    r0 = sphere.rep0[None, None, :]
    r1 = sphere.rep1[None, None, :]
    ct, st = np.cos(theta / 2.0), np.sin(theta / 2.0)
    eip = np.exp(1j * phi)
    xi = ct * r0 + st * eip * r1
    d_theta = 0.5 * (-st * r0 + ct * eip * r1)
    d_phi = 1j * st * eip * r1
    # horizontal projection: remove the component along the point itself
    d_theta = d_theta - np.sum(xi.conj() * d_theta, axis=-1, keepdims=True) * xi
    d_phi = d_phi - np.sum(xi.conj() * d_phi, axis=-1, keepdims=True) * xi
    E = metric_factor * np.sum(d_theta.conj() * d_theta, axis=-1).real
    G = metric_factor * np.sum(d_phi.conj() * d_phi, axis=-1).real
    F = metric_factor * np.sum(d_theta.conj() * d_phi, axis=-1).real
    det = E * G - F * F
    return np.sqrt(np.maximum(det, 0.0))


def sphere_area(sphere: SpannedSphere, metric_factor: float = 1.0, tol: float = 1e-6,
                max_level: int = 8) -> float:
    """Total area of a superposition sphere by direct quadrature.

    Integrates the statistical area element over the (theta, phi)
    parametrization, refining a Simpson (in theta) x trapezoid (in phi)
    tensor grid until two successive refinements agree within ``tol/2``.
    ``metric_factor`` scales the metric; the area scales linearly with it.

    Raises
    ------
    RuntimeError
        If refinement stalls; the message carries the best error estimate.
    """
    if metric_factor <= 0.0:
        raise ValueError("metric_factor must be positive")
    prev = None
    estimate = math.inf
    n_theta = 17
    for _ in range(max_level):
        n_phi = n_theta - 1
        thetas = np.linspace(0.0, math.pi, n_theta)
        phis = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
        da = _area_element(sphere, thetas, phis, metric_factor)
        # periodic trapezoid in phi, composite Simpson in theta
        f_theta = da.sum(axis=1) * (2.0 * math.pi / n_phi)
        h = math.pi / (n_theta - 1)
        weights = np.ones(n_theta)
        weights[1:-1:2] = 4.0
        weights[2:-1:2] = 2.0
        area = float(np.dot(weights, f_theta) * h / 3.0)
        if prev is not None:
            estimate = abs(area - prev)
            if estimate < tol / 2.0:
                return area
        prev = area
        n_theta = 2 * n_theta - 1
    raise RuntimeError(
        f"sphere area quadrature did not converge: error estimate {estimate:.3e} "
        f"at {n_theta} theta points (tol {tol:.1e})"
    )
