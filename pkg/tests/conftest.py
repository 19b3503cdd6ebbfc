"""Shared strategies and fixtures for the projqm test suite."""

import numpy as np
import pytest
from hypothesis import strategies as st

DIMS = (2, 3, 4, 5, 8)


@st.composite
def unit_vectors(draw, dim=None, min_dim=2, max_dim=8):
    """A normalized complex vector with entries bounded away from blowup."""
    if dim is None:
        dim = draw(st.integers(min_value=min_dim, max_value=max_dim))
    parts = draw(
        st.lists(
            st.floats(min_value=-1.0, max_value=1.0, allow_nan=False),
            min_size=2 * dim,
            max_size=2 * dim,
        )
    )
    vec = np.asarray(parts[:dim]) + 1j * np.asarray(parts[dim:])
    norm = np.linalg.norm(vec)
    if norm < 1e-3:
        vec = vec + 1.0  # nudge degenerate draws off the origin
        norm = np.linalg.norm(vec)
    return vec / norm


@st.composite
def hermitians(draw, dim=None, min_dim=2, max_dim=8):
    """A Hermitian matrix with unit spectral norm."""
    if dim is None:
        dim = draw(st.integers(min_value=min_dim, max_value=max_dim))
    parts = draw(
        st.lists(
            st.floats(min_value=-1.0, max_value=1.0, allow_nan=False),
            min_size=2 * dim * dim,
            max_size=2 * dim * dim,
        )
    )
    raw = np.asarray(parts[: dim * dim]) + 1j * np.asarray(parts[dim * dim :])
    mat = raw.reshape(dim, dim)
    herm = 0.5 * (mat + mat.conj().T)
    scale = np.linalg.norm(herm, ord=2)
    if scale < 1e-6:
        herm = herm + np.diag(np.arange(1.0, dim + 1.0))
        scale = np.linalg.norm(herm, ord=2)
    return herm / scale


@st.composite
def state_pairs(draw, dim=None, min_dim=2, max_dim=8, min_overlap=1e-3,
                max_overlap=0.999):
    """Two unit vectors whose ray separation avoids both degenerate ends."""
    if dim is None:
        dim = draw(st.integers(min_value=min_dim, max_value=max_dim))
    a = draw(unit_vectors(dim=dim))
    b = draw(unit_vectors(dim=dim))
    c = abs(np.vdot(a, b))
    if not (min_overlap < c < max_overlap):
        # Rebuild b as a fixed mixture so the pair is always usable.
        perp = b - np.vdot(a, b) * a
        pn = np.linalg.norm(perp)
        if pn < 1e-12:
            perp = np.zeros_like(a)
            perp[(int(np.argmax(np.abs(a))) + 1) % dim] = 1.0
            perp = perp - np.vdot(a, perp) * a
            pn = np.linalg.norm(perp)
        b = 0.8 * a + 0.6 * perp / pn
        b = b / np.linalg.norm(b)
    return a, b


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)


def random_unit(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_hermitian(rng, dim):
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = 0.5 * (m + m.conj().T)
    return h / np.linalg.norm(h, ord=2)
