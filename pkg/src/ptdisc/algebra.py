"""Complex 2-vector / 2x2-matrix arithmetic and Bloch-sphere conversions.

State vectors are numpy arrays of shape (2,) and dtype complex128; operator
matrices are numpy arrays of shape (2, 2).  The only admitted notion of state
equality is global-phase equivalence, tested through :func:`fidelity`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .errors import DomainError

IDENTITY = np.eye(2, dtype=complex)

_TWO_PI = 2.0 * math.pi


def _require_finite(arr: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{what} contains NaN or Inf")
    return arr


def as_state(v) -> np.ndarray:
    """Coerce to a finite complex 2-vector."""
    a = np.asarray(v, dtype=complex)
    if a.shape != (2,):
        raise DomainError(f"state vector must have shape (2,), got {a.shape}")
    return _require_finite(a, "state vector")


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.shape != (2, 2):
        raise DomainError(f"operator must have shape (2, 2), got {a.shape}")
    return _require_finite(a, "operator")


@dataclass(frozen=True)
class BlochState:
    """A pure qubit state by polar angle theta and azimuth phi (radians).

    theta must lie in [0, pi]; phi is 2*pi-periodic and stored wrapped into
    [-pi, pi).  At the poles phi carries no physical content and is
    canonicalized to 0.
    """

    theta: float
    phi: float

    def __post_init__(self):
        theta = float(self.theta)
        phi = float(self.phi)
        if not (math.isfinite(theta) and math.isfinite(phi)):
            raise DomainError("Bloch angles must be finite")
        if not 0.0 <= theta <= math.pi:
            raise DomainError(f"theta must lie in [0, pi], got {theta}")
        phi = math.remainder(phi, _TWO_PI)
        if phi >= math.pi:  # remainder() may return +pi exactly
            phi -= _TWO_PI
        if math.sin(theta / 2) < tol.POLE_EPS or math.cos(theta / 2) < tol.POLE_EPS:
            phi = 0.0
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)


def state_from_bloch(b: BlochState) -> np.ndarray:
    """(theta, phi) -> (cos(theta/2), e^{i phi} sin(theta/2))."""
    half = b.theta / 2
    return np.array([math.cos(half), math.sin(half) * np.exp(1j * b.phi)])


def bloch_from_state(v) -> BlochState:
    """Inverse of :func:`state_from_bloch`; the global phase is discarded."""
    a, b = as_state(v)
    if not (abs(a) ** 2 + abs(b) ** 2) > 0.0:
        raise DomainError("cannot take Bloch angles of the zero vector")
    theta = 2 * math.atan2(abs(b), abs(a))
    phi = np.angle(b) - np.angle(a)
    return BlochState(theta, phi)


def hermitian_inner(u, v) -> complex:
    """<u|v>, conjugate-linear in u."""
    return complex(np.vdot(as_state(u), as_state(v)))


def apply(m, v) -> np.ndarray:
    return as_matrix(m) @ as_state(v)


def compose(m2, m1) -> np.ndarray:
    """Matrix of 'first m1, then m2'."""
    return as_matrix(m2) @ as_matrix(m1)


def norm(v) -> float:
    return float(np.linalg.norm(as_state(v)))


def normalized(v) -> np.ndarray:
    a = as_state(v)
    n = np.linalg.norm(a)
    if not n > 0.0:
        raise DomainError("cannot normalize the zero vector")
    return a / n


def fidelity(u, v) -> float:
    """|<u|v>|^2 / (|u|^2 |v|^2); the scale- and phase-free overlap."""
    a, b = as_state(u), as_state(v)
    na, nb = np.vdot(a, a).real, np.vdot(b, b).real
    if not (na > 0.0 and nb > 0.0):
        raise DomainError("fidelity of a zero vector is undefined")
    return float(abs(np.vdot(a, b)) ** 2 / (na * nb))


def states_equal(u, v, atol: float = tol.STATE_FIDELITY_ATOL) -> bool:
    """Equality up to global phase and scale."""
    return fidelity(u, v) >= 1.0 - atol


def bloch_vector(v) -> tuple[float, float, float]:
    """Cartesian Bloch coordinates (x, y, z) of a state vector."""
    a, b = normalized(v)
    cross = np.conj(a) * b
    return (2 * cross.real, 2 * cross.imag, abs(a) ** 2 - abs(b) ** 2)
