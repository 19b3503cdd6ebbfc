"""Two-slit interference: wall projectors, screen amplitudes, fringe checks.

The wall is a one-dimensional transverse grid; each slit is a top-hat
projector onto the grid cells it covers, so distinct slits are orthogonal
projectors and the wall acts as their sum.  An incoming wall-plane state is
split into per-slit components ``P_i psi`` and each is propagated to the
screen with the paraxial (Fresnel) quadrature

    phi_i(x) = dy / sqrt(i lam L) * sum_y exp(i pi (x - y)^2 / (lam L)) (P_i psi)(y).

Because propagation is linear, the screen amplitude of the wall-projected
state equals the coherent sum of the per-slit amplitudes; the module
computes both routes and asserts their agreement, then reports the
intensity decomposition ``|sum phi_i|^2 = sum |phi_i|^2 + 2 * cross`` with
``cross = sum_{i<j} Re(phi_i conj(phi_j))`` - the interference term that
survives in no single-slit run.

The propagator is a modeling choice (the projector algebra is independent
of it): the checks that the slit projectors commute - vanishing bracket at
every state - and that a projector mixing the slits does not are pure
ray-space statements with no propagation involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hilbert import Projector, make_projector
from .kahler import poisson_bracket
from .projective import Ray

__all__ = [
    "TwoSlitConfig",
    "SlitWall",
    "InterferencePattern",
    "build_wall",
    "plane_wave_input",
    "gaussian_input",
    "slit_states",
    "propagate_to_screen",
    "fringe_spacing",
    "phase_invariance_check",
    "projector_poisson_check",
    "noncommuting_control",
    "pattern_rows",
]


@dataclass(frozen=True, eq=False)
class SlitWall:
    """Uniform wall grid with disjoint slit supports (half-open index ranges)."""

    grid: np.ndarray
    dy: float
    slit_supports: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "slit_supports",
                           tuple((int(a), int(b)) for a, b in self.slit_supports))
        if not self.slit_supports:
            raise ValueError("need at least one slit")
        seen = np.zeros(self.grid.size, dtype=bool)
        for k, (a, b) in enumerate(self.slit_supports):
            if not 0 <= a < b <= self.grid.size:
                raise ValueError(f"slit {k} support [{a}, {b}) outside the grid")
            if np.any(seen[a:b]):
                raise ValueError(f"slit {k} overlaps an earlier slit")
            seen[a:b] = True

    @property
    def dim(self) -> int:
        return self.grid.size

    @property
    def n_slits(self) -> int:
        return len(self.slit_supports)

    def support_mask(self, i: int) -> np.ndarray:
        a, b = self.slit_supports[i]
        mask = np.zeros(self.dim, dtype=bool)
        mask[a:b] = True
        return mask

    def wall_mask(self) -> np.ndarray:
        mask = np.zeros(self.dim, dtype=bool)
        for a, b in self.slit_supports:
            mask[a:b] = True
        return mask

    def apply_slit(self, i: int, psi: np.ndarray) -> np.ndarray:
        """``P_i psi`` without materializing the projector matrix."""
        out = np.zeros(self.dim, dtype=np.complex128)
        a, b = self.slit_supports[i]
        out[a:b] = psi[a:b]
        return out

    def slit_projector(self, i: int) -> Projector:
        """Dense diagonal projector onto slit ``i`` (for the algebra checks;
        quadratic in the grid size, so prefer coarse grids)."""
        mask = self.support_mask(i)
        return Projector(matrix=np.diag(mask.astype(np.complex128)),
                         rank=int(np.sum(mask)))

    def wall_projector(self) -> Projector:
        """Dense diagonal projector onto the union of the slits."""
        mask = self.wall_mask()
        return Projector(matrix=np.diag(mask.astype(np.complex128)),
                         rank=int(np.sum(mask)))


def build_wall(grid_spec, slit_centers, slit_width: float) -> SlitWall:
    """Discretize the wall and mark top-hat slits.

    Parameters
    ----------
    grid_spec : (halfwidth, n) or array_like
        Either the halfwidth and cell count of a uniform grid of cell
        centers, or the positions themselves (must be uniformly spaced).
    slit_centers : sequence of float
        One center per slit.
    slit_width : float
        Full width; a cell belongs to a slit when its center lies within
        half a width of the slit center.

    Raises
    ------
    ValueError
        For overlapping slits (their projectors would not be orthogonal),
        slits outside the grid, or a grid too coarse to give every slit at
        least one cell.
    """
    if slit_width <= 0.0:
        raise ValueError("slit_width must be positive")
    if isinstance(grid_spec, tuple) and len(grid_spec) == 2:
        halfwidth, n = grid_spec
        if halfwidth <= 0.0 or int(n) < 8:
            raise ValueError("grid needs positive halfwidth and at least 8 cells")
        n = int(n)
        dy = 2.0 * halfwidth / n
        y = -halfwidth + dy * (np.arange(n) + 0.5)
    else:
        y = np.asarray(grid_spec, dtype=float)
        if y.ndim != 1 or y.size < 8:
            raise ValueError("grid must be a 1-d array of at least 8 positions")
        steps = np.diff(y)
        dy = float(steps[0])
        if dy <= 0 or np.max(np.abs(steps - dy)) > 1e-9 * abs(dy):
            raise ValueError("grid positions must be uniformly increasing")

    supports = []
    for k, c in enumerate(slit_centers):
        inside = np.abs(y - float(c)) <= slit_width / 2.0
        idx = np.flatnonzero(inside)
        if idx.size == 0:
            raise ValueError(f"slit {k} covers no grid cell; refine the grid")
        supports.append((int(idx[0]), int(idx[-1]) + 1))
    return SlitWall(grid=y, dy=dy, slit_supports=tuple(supports))


def plane_wave_input(wall: SlitWall) -> np.ndarray:
    """Unit-norm uniform amplitude across the whole wall grid."""
    return np.full(wall.dim, 1.0 / math.sqrt(wall.dim), dtype=np.complex128)


def gaussian_input(wall: SlitWall, waist: float, center: float = 0.0) -> np.ndarray:
    """Unit-norm Gaussian beam ``exp(-(y - center)^2 / waist^2)`` on the grid."""
    if waist <= 0.0:
        raise ValueError("waist must be positive")
    psi = np.exp(-((wall.grid - center) ** 2) / waist**2).astype(np.complex128)
    return psi / np.linalg.norm(psi)


def slit_states(wall: SlitWall) -> list[np.ndarray]:
    """Unit-norm top-hat state for each slit (pairwise orthogonal)."""
    out = []
    for i in range(wall.n_slits):
        psi = wall.support_mask(i).astype(np.complex128)
        out.append(psi / np.linalg.norm(psi))
    return out


@dataclass(frozen=True, eq=False)
class InterferencePattern:
    """Screen-side decomposition of one propagation run.

    ``per_slit_amplitudes[i]`` is the screen amplitude of ``P_i psi``; their
    coherent sum is the full pattern.  ``decomposition_residual`` is the
    measured gap between propagating the wall-projected state in one piece
    and summing the per-slit propagations - a linearity identity, so it
    sits at rounding level.
    """

    screen_positions: np.ndarray
    dx: float
    per_slit_amplitudes: tuple[np.ndarray, ...]
    wavelength: float
    distance: float
    paraxial_ok: bool
    decomposition_residual: float

    @property
    def n_slits(self) -> int:
        return len(self.per_slit_amplitudes)

    @property
    def total_amplitude(self) -> np.ndarray:
        return np.sum(self.per_slit_amplitudes, axis=0)

    @property
    def total_intensity(self) -> np.ndarray:
        return np.abs(self.total_amplitude) ** 2

    @property
    def slit_intensities(self) -> list[np.ndarray]:
        return [np.abs(a) ** 2 for a in self.per_slit_amplitudes]

    @property
    def cross_term(self) -> np.ndarray:
        """Sum over slit pairs of Re(phi_i conj(phi_j)); doubles into the
        intensity: total = sum |phi_i|^2 + 2 * cross."""
        amps = self.per_slit_amplitudes
        cross = np.zeros(self.screen_positions.size)
        for i in range(len(amps)):
            for j in range(i + 1, len(amps)):
                cross += (amps[i] * np.conj(amps[j])).real
        return cross

    @property
    def incoherent_intensity(self) -> np.ndarray:
        """Classical sum of single-slit intensities (cross term removed)."""
        return np.sum(self.slit_intensities, axis=0)

    def intensity_identity_residual(self) -> float:
        """Max |total - (incoherent + 2 cross)|; rounding-level identity."""
        total = self.total_intensity
        return float(np.max(np.abs(
            total - (self.incoherent_intensity + 2.0 * self.cross_term)
        )))

    @property
    def total_screen_probability(self) -> float:
        """Squared norm collected by the (finite) screen: at most the norm
        the wall passed, which is itself at most one."""
        return float(np.sum(self.total_intensity))

    @property
    def normalized_intensity(self) -> np.ndarray:
        """Intensity scaled to unit screen probability - the form invariant
        under rescaling of the input state."""
        return self.total_intensity / self.total_screen_probability


def propagate_to_screen(wall: SlitWall, psi_in, wavelength: float, distance: float,
                        screen_halfwidth: float = 2.5e-2, n_screen: int = 2048,
                        linearity_tol: float = 1e-12) -> InterferencePattern:
    """Project an input state through the wall and Fresnel-propagate it.

    Each slit's component is propagated separately; the whole wall-projected
    state is also propagated in one piece and the two routes are asserted to
    agree within ``linearity_tol`` (times the peak amplitude, floored at 1).

    ``paraxial_ok`` on the result flags whether the geometry is comfortably
    paraxial (propagation distance at least ten times the transverse
    extent); the kernel is still applied when it is not, but the far-field
    fringe oracle should not be trusted there.
    """
    if wavelength <= 0.0 or distance <= 0.0:
        raise ValueError("wavelength and distance must be positive")
    if n_screen < 8 or screen_halfwidth <= 0.0:
        raise ValueError("screen needs positive halfwidth and at least 8 points")
    psi = np.asarray(psi_in, dtype=np.complex128)
    if psi.shape != (wall.dim,):
        raise ValueError(f"input state must have shape ({wall.dim},), got {psi.shape}")

    lamL = wavelength * distance
    x = np.linspace(-screen_halfwidth, screen_halfwidth, n_screen)
    dx = float(x[1] - x[0])
    diff = x[:, None] - wall.grid[None, :]
    kernel = np.exp(1j * math.pi * diff**2 / lamL)
    # maps unit-norm grid states to (sub-)unit-norm screen states: the
    # continuum Fresnel kernel is unitary on L^2, and sqrt(dx dy) converts
    # both sides between L^2 samples and plain square-summable vectors
    pref = np.sqrt(wall.dy * dx / (1j * lamL))

    amps = tuple(pref * (kernel @ wall.apply_slit(i, psi))
                 for i in range(wall.n_slits))
    psi_wall = np.zeros_like(psi)
    for i in range(wall.n_slits):
        psi_wall += wall.apply_slit(i, psi)
    one_piece = pref * (kernel @ psi_wall)
    coherent = np.sum(amps, axis=0)
    scale = max(float(np.max(np.abs(one_piece))), 1.0)
    residual = float(np.max(np.abs(one_piece - coherent)))
    if residual > linearity_tol * scale:
        raise AssertionError(
            f"decomposition identity violated: residual {residual:.3e} exceeds "
            f"{linearity_tol:.1e} x {scale:.3e}"
        )
    extent = float(np.max(np.abs(wall.grid))) + screen_halfwidth
    return InterferencePattern(
        screen_positions=x,
        dx=dx,
        per_slit_amplitudes=amps,
        wavelength=wavelength,
        distance=distance,
        paraxial_ok=bool(distance >= 10.0 * extent),
        decomposition_residual=residual,
    )


def fringe_spacing(pattern: InterferencePattern, window: float | None = None) -> float:
    """Distance between adjacent maxima of the cross term.

    The period is estimated as twice the mean gap between consecutive zero
    crossings of the cross term inside a central window (default 65% of the
    screen).  Crossing positions are envelope-immune - the cross term is a
    positive envelope times an oscillation there, so its zeros are zeros of
    the oscillation alone - whereas the maxima themselves are dragged by
    the envelope slope at the percent level; averaging over a symmetric
    window also cancels the odd part of the residual phase distortion.
    """
    x = pattern.screen_positions
    if window is None:
        window = 0.65 * float(np.max(np.abs(x)))
    sel = np.abs(x) <= window
    xs = x[sel]
    c = pattern.cross_term[sel]
    scale = float(np.max(np.abs(c)))
    if scale == 0.0:
        raise ValueError("cross term vanishes (single slit?); no fringes to measure")
    change = np.where(np.diff(np.signbit(c)))[0]
    if change.size < 4:
        raise ValueError("fewer than four cross-term zeros in the window; "
                         "widen the screen or the window")
    x0, x1 = xs[change], xs[change + 1]
    c0, c1 = c[change], c[change + 1]
    crossings = x0 - c0 * (x1 - x0) / (c1 - c0)
    return 2.0 * float(np.mean(np.diff(crossings)))


def phase_invariance_check(wall: SlitWall, psi_in, wavelength: float,
                           distance: float, lambda_phase: float,
                           **screen_kwargs) -> float:
    """Max intensity change under a global phase on the input state.

    The pattern is a ray-space functional of the input, so the result is
    zero up to rounding for every phase.
    """
    psi = np.asarray(psi_in, dtype=np.complex128)
    base = propagate_to_screen(wall, psi, wavelength, distance, **screen_kwargs)
    rot = propagate_to_screen(wall, np.exp(1j * lambda_phase) * psi,
                              wavelength, distance, **screen_kwargs)
    return float(np.max(np.abs(rot.total_intensity - base.total_intensity)))


def projector_poisson_check(wall: SlitWall, at: Ray) -> float:
    """Max |bracket| over distinct slit-projector pairs at a state.

    The slit projectors commute (disjoint supports), so every bracket
    vanishes identically - the ray-space image of compatible alternatives.
    Requires a wall coarse enough to materialize the projector matrices.
    """
    if at.dim != wall.dim:
        raise ValueError(f"ray dimension {at.dim} does not match wall {wall.dim}")
    mats = [wall.slit_projector(i).matrix for i in range(wall.n_slits)]
    worst = 0.0
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            worst = max(worst, abs(poisson_bracket(mats[i], mats[j], at)))
    return worst


def noncommuting_control(wall: SlitWall, at: Ray) -> float:
    """|bracket| of slit 1 against a rank-one projector mixing slits 1 and 2.

    The negative control for :func:`projector_poisson_check`: the mixing
    projector fails to commute with either slit projector, so a vanishing
    result here would indicate a broken bracket, not commuting operators.
    """
    if wall.n_slits < 2:
        raise ValueError("need two slits for the mixing control")
    s = slit_states(wall)
    mixing = make_projector([s[0] + 1j * s[1]])
    return abs(poisson_bracket(wall.slit_projector(0).matrix, mixing.matrix, at))


def pattern_rows(pattern: InterferencePattern) -> tuple[list[str], list[list[float]]]:
    """Flatten a pattern to CSV-ready header and rows.

    Columns: x, intensity_total, one intensity per slit, cross_term.
    """
    header = ["x", "intensity_total"]
    header += [f"intensity_slit_{i + 1}" for i in range(pattern.n_slits)]
    header += ["cross_term"]
    total = pattern.total_intensity
    singles = pattern.slit_intensities
    cross = pattern.cross_term
    rows = []
    for k in range(pattern.screen_positions.size):
        row = [float(pattern.screen_positions[k]), float(total[k])]
        row += [float(s[k]) for s in singles]
        row.append(float(cross[k]))
        rows.append(row)
    return header, rows


@dataclass(frozen=True)
class TwoSlitConfig:
    """Bundled desk-scale two-slit geometry (SI units) with grid sizes.

    The defaults give the classic fringe spacing
    ``wavelength * distance / separation = 5e-3``.
    """

    wavelength: float = 5e-7
    distance: float = 1.0
    slit_centers: tuple[float, ...] = (-5e-5, +5e-5)
    slit_width: float = 2e-5
    wall_halfwidth: float = 2e-4
    n_wall: int = 2048
    screen_halfwidth: float = 2.5e-2
    n_screen: int = 2048
    input_profile: str = "plane"
    waist: float = 5e-5

    def __post_init__(self):
        if self.input_profile not in ("plane", "gaussian"):
            raise ValueError(
                f"input_profile must be 'plane' or 'gaussian', got {self.input_profile!r}"
            )
        if not self.slit_centers:
            raise ValueError("need at least one slit center")

    @property
    def expected_fringe_spacing(self) -> float:
        """Far-field two-slit spacing wavelength * distance / separation."""
        if len(self.slit_centers) != 2:
            raise ValueError("fringe-spacing oracle applies to exactly two slits")
        d = abs(self.slit_centers[1] - self.slit_centers[0])
        return self.wavelength * self.distance / d

    def make_wall(self) -> SlitWall:
        return build_wall((self.wall_halfwidth, self.n_wall),
                          self.slit_centers, self.slit_width)

    def make_input(self, wall: SlitWall) -> np.ndarray:
        if self.input_profile == "gaussian":
            return gaussian_input(wall, self.waist)
        return plane_wave_input(wall)

    def run(self) -> InterferencePattern:
        wall = self.make_wall()
        return propagate_to_screen(wall, self.make_input(wall), self.wavelength,
                                   self.distance, self.screen_halfwidth,
                                   self.n_screen)
