"""PT-symmetric Hamiltonians, the C operator, and the CPT inner product.

The two-level Hamiltonian family used throughout is

    H = [[r e^{i theta}, s], [s, r e^{-i theta}]],   r, theta real, s > 0,

which commutes with combined parity P = [[0,1],[1,0]] and time reversal T
(complex conjugation).  In the unbroken phase s^2 > r^2 sin^2(theta) the
spectrum is real, the auxiliary angle alpha with sin(alpha) = (r/s) sin(theta)
is defined, and the C operator

    C = (1/cos alpha) [[i sin alpha, 1], [1, -i sin alpha]]

is an involution commuting with both H and PT.  The CPT inner product
<u|v> = (CPT u)^T . v is then positive definite, and the non-unitary
evolution e^{-iHt} has the closed form implemented below, which preserves
CPT norms while freely changing Hermitian norms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .algebra import as_matrix, as_state
from .errors import DomainError

PARITY = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)

# Fixed probe states for the antilinear/adjointness checks: real-linear and
# complex-linear identities verified on these hold everywhere by linearity.
PROBE_STATES = (
    np.array([1.0, 0.0], dtype=complex),
    np.array([0.0, 1.0], dtype=complex),
    np.array([1.0, 1.0], dtype=complex) / math.sqrt(2),
    np.array([1.0, 1.0j]) / math.sqrt(2),
)


def require_alpha(alpha) -> float:
    """Validate an alpha parameter: finite and strictly inside (-pi/2, pi/2).

    At alpha = +-pi/2 the C operator (and with it the CPT product) is
    singular, so the bound is strict.
    """
    a = float(alpha)
    if not math.isfinite(a):
        raise DomainError("alpha must be finite")
    if not -math.pi / 2 < a < math.pi / 2:
        raise DomainError(f"alpha must lie strictly inside (-pi/2, pi/2), got {a}")
    return a


@dataclass(frozen=True)
class PTHamiltonian:
    """The (r, s, theta) triple of the PT-symmetric family, unbroken phase.

    Requires s > 0 (the closed-form evolution operator is written on the
    omega = s cos(alpha) branch) and s^2 > r^2 sin^2(theta) so that omega is
    real and alpha is defined.
    """

    r: float
    s: float
    theta: float

    def __post_init__(self):
        r, s, theta = float(self.r), float(self.s), float(self.theta)
        if not all(math.isfinite(x) for x in (r, s, theta)):
            raise DomainError("Hamiltonian parameters must be finite")
        if not s > 0.0:
            raise DomainError(f"coupling s must be positive, got {s}")
        if not s * s > (r * math.sin(theta)) ** 2:
            raise DomainError(
                "broken PT phase: need s^2 > r^2 sin^2(theta), "
                f"got s={s}, r={r}, theta={theta}"
            )
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "theta", theta)

    @property
    def alpha(self) -> float:
        """sin(alpha) = (r/s) sin(theta); in (-pi/2, pi/2) in the unbroken phase."""
        return math.asin(self.r / self.s * math.sin(self.theta))

    @property
    def omega(self) -> float:
        """Real eigenvalue splitting sqrt(s^2 - r^2 sin^2 theta) > 0."""
        return math.sqrt(self.s**2 - (self.r * math.sin(self.theta)) ** 2)

    def matrix(self) -> np.ndarray:
        return np.array(
            [
                [self.r * np.exp(1j * self.theta), self.s],
                [self.s, self.r * np.exp(-1j * self.theta)],
            ]
        )


def canonical_hamiltonian(alpha) -> PTHamiltonian:
    """The minimal representative (r = sin alpha, s = 1, theta = pi/2).

    This choice gives omega = cos(alpha) and kills the irrelevant global
    phase e^{-i r cos(theta) t} of the evolution operator (r cos theta = 0).
    """
    a = require_alpha(alpha)
    return PTHamiltonian(math.sin(a), 1.0, math.pi / 2)


def c_operator(alpha) -> np.ndarray:
    """C = (1/cos alpha) [[i sin alpha, 1], [1, -i sin alpha]]; C^2 = 1."""
    a = require_alpha(alpha)
    sa, ca = math.sin(a), math.cos(a)
    return np.array([[1j * sa, 1.0], [1.0, -1j * sa]]) / ca


def cpt_map(v, alpha) -> np.ndarray:
    """Apply the antilinear CPT operation: C . P . conj(v).

    The result is the transposed bra-vector content of the CPT dual of v.
    """
    return c_operator(alpha) @ PARITY @ np.conj(as_state(v))


def cpt_inner(u, v, alpha) -> complex:
    """CPT scalar product (CPT u)^T . v — a plain dot product, with no
    conjugation of the second factor.  Positive definite on the unbroken
    phase: cpt_inner(v, v, alpha) > 0 for every nonzero v.
    """
    return complex(cpt_map(u, alpha) @ as_state(v))


def evolution_operator(h: PTHamiltonian, t) -> np.ndarray:
    """Closed-form e^{-iHt} for the PT-symmetric family.

    U(t) = (e^{-i r cos(theta) t} / cos alpha) *
           [[cos(omega t - alpha), -i sin(omega t)],
            [-i sin(omega t),      cos(omega t + alpha)]]

    U(0) = 1 and U(t) U(-t) = 1 for every alpha, but U is unitary only at
    alpha = 0: for alpha != 0 it deliberately changes Hermitian norms (it is
    an isometry of the CPT product instead).
    """
    t = float(t)
    if not math.isfinite(t):
        raise DomainError("evolution time must be finite")
    a, w = h.alpha, h.omega
    phase = np.exp(-1j * h.r * math.cos(h.theta) * t)
    wt = w * t
    return (phase / math.cos(a)) * np.array(
        [
            [math.cos(wt - a), -1j * math.sin(wt)],
            [-1j * math.sin(wt), math.cos(wt + a)],
        ]
    )


def commutes_with_cpt(m, alpha, atol: float = tol.ATOL) -> bool:
    """Whether m is compatible with the CPT structure at this alpha.

    Compatibility here means self-adjointness under the CPT product,

        cpt_inner(m u, v, alpha) == cpt_inner(u, m v, alpha),

    checked over all pairs from the fixed probe set; that identity on the
    probes extends everywhere by linearity.  This is the condition for m to
    act as an observable when outcome probabilities are computed with the
    CPT product.  Note it is weaker than pointwise operator commutation with
    the antilinear CPT map: the measurement projectors used downstream pass
    this check at every alpha while swapping the two final states under the
    pointwise map.
    """
    mm = as_matrix(m)
    a = require_alpha(alpha)
    for u in PROBE_STATES:
        for v in PROBE_STATES:
            if abs(cpt_inner(mm @ u, v, a) - cpt_inner(u, mm @ v, a)) > atol:
                return False
    return True


def commutes_with_pt(m, atol: float = tol.ATOL) -> bool:
    """Pointwise antilinear commutation with PT: m(PT v) == PT(m v) on probes.

    The C operator itself satisfies this at every alpha ([C, PT] = 0).
    """
    mm = as_matrix(m)
    for v in PROBE_STATES:
        if np.max(np.abs(mm @ (PARITY @ np.conj(v)) - PARITY @ np.conj(mm @ v))) > atol:
            return False
    return True
