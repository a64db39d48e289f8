"""Three-state discrimination pipeline.

Given three pure qubit states with prior probabilities, the plan built here
realizes the elimination strategy:

1. unitary preparation (R1, R2, R3) sends the two leading states to a
   symmetric pair around the -i meridian, separated by the overlap angle
   sigma;
2. non-unitary PT-symmetric evolution for a closed-form time tau makes that
   pair orthogonal in the Hermitian sense (at the price of norm changes,
   recorded as diagnostics);
3. alignment gates (R4, R5, R6) place the pair on the +-y axis of the Bloch
   sphere, where the projective measurement M = P1 - P2 separates them; the
   third state lands at an angle rho whose misidentification weight
   cos^2(kappa_13) vanishes as the measurement-stage alpha approaches -pi/2.

A -1 outcome eliminates the leading state and the same machinery, composed
on the remaining pair, finishes the job — hence at most two measurements.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .algebra import (
    BlochState,
    fidelity,
    hermitian_inner,
    normalized,
    state_from_bloch,
)
from .errors import DomainError, InfeasibleError
from .ptcore import canonical_hamiltonian, evolution_operator, require_alpha

# Measurement-stage default: close enough to the -pi/2 limit to suppress the
# three-state confusion angle to ~1e-6 while keeping the CPT product tame.
DEFAULT_ALPHA_M = -math.pi / 2 + 1e-3

_RHS_GRACE = 1e-12  # float slack when sin^2(omega tau) grazes 0 or 1


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Ensemble:
    """Three distinct pure states with prior probabilities summing to 1."""

    states: tuple[BlochState, BlochState, BlochState]
    priors: tuple[float, float, float]

    def __post_init__(self):
        states = tuple(self.states)
        if len(states) != 3 or not all(isinstance(s, BlochState) for s in states):
            raise DomainError("an ensemble needs exactly three BlochState entries")
        priors = tuple(float(p) for p in self.priors)
        if len(priors) != 3:
            raise DomainError("an ensemble needs exactly three priors")
        if not all(math.isfinite(p) and p >= 0.0 for p in priors):
            raise DomainError(f"priors must be finite and non-negative, got {priors}")
        if abs(sum(priors) - 1.0) > tol.NORM_ATOL:
            raise DomainError(f"priors must sum to 1, got {sum(priors)!r}")
        vecs = [state_from_bloch(s) for s in states]
        for i in range(3):
            for j in range(i + 1, 3):
                if fidelity(vecs[i], vecs[j]) >= 1.0 - tol.DISTINCT_FIDELITY:
                    raise DomainError(f"states {i + 1} and {j + 1} coincide")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "priors", priors)


@dataclass(frozen=True)
class PreparationParams:
    """Closed-form preparation-stage parameters.

    sigma is the overlap angle of the leading pair (cos sigma = |<psi1|psi2>|),
    lam the relative-phase correction applied by R2, and (beta, gamma) the
    amplitudes of the third state after R3 R2 R1, with polar form
    (cos(mu/2), e^{i nu} sin(mu/2)) up to a global phase.
    """

    sigma: float
    lam: float
    beta: complex
    gamma: complex
    mu: float
    nu: float


@dataclass(frozen=True)
class EvolutionParams:
    """Evolution- and alignment-stage parameters.

    tau is the orthogonalizing evolution time at evolution parameter alpha_h;
    delta the R4 rotation returned by the evolved leading state; (kappa_amp,
    zeta_amp) the third state's amplitudes after R4, with polar angle xi and
    relative phase chi; rho = xi + pi/2 is its final polar angle after R6.
    """

    alpha_h: float
    tau: float
    delta: float
    kappa_amp: complex
    zeta_amp: complex
    chi: float
    xi: float
    rho: float


@dataclass(frozen=True)
class AngleReport:
    """Final-state confusion weights under the measurement-stage CPT product."""

    cos2_k12: float
    cos2_k13: float
    cos2_k23: float


@dataclass(frozen=True)
class FeasibleAlphaRange:
    """The alpha_h interval [lo, hi) on which the evolution time exists."""

    lo: float
    hi: float

    @property
    def empty(self) -> bool:
        return not self.lo < self.hi

    def midpoint(self) -> float:
        if self.empty:
            raise InfeasibleError(
                "no feasible evolution alpha: the pair overlap leaves only the "
                "alpha -> pi/2 limit"
            )
        return 0.5 * (self.lo + self.hi)


@dataclass(frozen=True)
class DiscriminationPlan:
    """Everything needed to run and audit the three-state protocol.

    States and priors are stored in plan order (descending prior, ties by
    input position); ``state_order`` maps plan positions to 1-based input
    indices.  ``evolved_norms`` records the Hermitian norms the non-unitary
    evolution handed each state before renormalization.
    """

    ensemble: Ensemble
    state_order: tuple[int, int, int]
    prep: PreparationParams
    evo: EvolutionParams
    alpha_m: float
    r1: np.ndarray
    r2: np.ndarray
    r3: np.ndarray
    r4: np.ndarray
    r5: np.ndarray
    r6: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    measurement: np.ndarray
    angles: AngleReport
    evolved_norms: tuple[float, float, float]

    @property
    def alpha_h(self) -> float:
        return self.evo.alpha_h

    @property
    def tau(self) -> float:
        return self.evo.tau


@dataclass(frozen=True)
class TwoStatePlan:
    """The same machinery composed on a remaining pair.

    The pair plays the roles of states 1 and 2; after evolution and
    alignment its members sit exactly on the +-y axis, so the measurement
    discriminates them with certainty and no third stage exists.
    """

    states: tuple[BlochState, BlochState]
    priors: tuple[float, float]
    sigma: float
    lam: float
    alpha_h: float
    tau: float
    delta: float
    r1: np.ndarray
    r2: np.ndarray
    r3: np.ndarray
    r4: np.ndarray
    r5: np.ndarray
    r6: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    measurement: np.ndarray


@dataclass(frozen=True)
class StageStates:
    """One state's vectors along the pipeline, plus its pre-renormalization norm."""

    input: np.ndarray
    prepared: np.ndarray
    evolved: np.ndarray
    aligned: np.ndarray
    final: np.ndarray
    evolved_norm: float


# ---------------------------------------------------------------------------
# preparation
# ---------------------------------------------------------------------------

def order_by_prior(e: Ensemble) -> tuple[Ensemble, tuple[int, int, int]]:
    """Reorder so the highest prior comes first; ties keep input order.

    Returns the reordered ensemble and the permutation as 1-based input
    indices in plan order.
    """
    perm = sorted(range(3), key=lambda i: (-e.priors[i], i))
    ordered = Ensemble(
        tuple(e.states[i] for i in perm),
        tuple(e.priors[i] for i in perm),
    )
    return ordered, tuple(i + 1 for i in perm)


def _pair_params(s1: BlochState, s2: BlochState) -> tuple[float, float]:
    """(sigma, lam) for a leading pair: overlap angle and R2 phase correction."""
    psi1, psi2 = state_from_bloch(s1), state_from_bloch(s2)
    ov = hermitian_inner(psi1, psi2)
    if abs(ov) ** 2 >= 1.0 - tol.DISTINCT_FIDELITY:
        raise DomainError("the leading pair of states coincides")
    sigma = math.acos(min(1.0, abs(ov)))

    th1, ph1 = s1.theta, s1.phi
    th2, ph2 = s2.theta, s2.phi
    dphi = ph2 - ph1
    # Two-argument angle extraction; the printed arctan ratios are ambiguous
    # by pi and their denominators can vanish for antipodal pairs.
    n1 = math.sin(th1 / 2) * math.cos(th2 / 2) * math.sin(dphi)
    d1 = math.cos(th1 / 2) * math.sin(th2 / 2) - math.sin(th1 / 2) * math.cos(
        th2 / 2
    ) * math.cos(dphi)
    n2 = math.sin(th1 / 2) * math.sin(th2 / 2) * math.sin(dphi)
    d2 = math.cos(th1 / 2) * math.cos(th2 / 2) + math.sin(th1 / 2) * math.sin(
        th2 / 2
    ) * math.cos(dphi)
    lam = math.atan2(n1, d1) - math.atan2(n2, d2)
    return sigma, lam


def preparation_params(
    s1: BlochState, s2: BlochState, s3: BlochState
) -> PreparationParams:
    """Closed-form parameters of the preparation stage.

    Only s1 != s2 is required here; a third state coinciding with either
    leading state still prepares fine (the plan-level ensemble check is
    stricter).
    """
    sigma, lam = _pair_params(s1, s2)

    # Amplitudes of the third state after R3 R2 R1, written pole-free as an
    # explicit sum over the four amplitude products.
    th1, ph1 = s1.theta, s1.phi
    ph2 = s2.phi
    th3, ph3 = s3.theta, s3.phi
    g = (math.pi - 2 * sigma) / 4
    c, s_ = math.cos(g), math.sin(g)
    c1, s1_ = math.cos(th1 / 2), math.sin(th1 / 2)
    c3, s3_ = math.cos(th3 / 2), math.sin(th3 / 2)
    e = cmath.exp
    beta = (
        c1 * c3 * c
        + s1_ * c3 * s_ * e(1j * (ph1 - ph2 - lam))
        + s1_ * s3_ * c * e(1j * (ph3 - ph1))
        - c1 * s3_ * s_ * e(1j * (ph3 - ph2 - lam))
    )
    gamma = -1j * (
        c1 * c3 * s_
        + s1_ * s3_ * s_ * e(1j * (ph3 - ph1))
        + c1 * s3_ * c * e(1j * (ph3 - ph2 - lam))
        - s1_ * c3 * c * e(1j * (ph1 - ph2 - lam))
    )
    mu = 2 * math.acos(min(1.0, abs(beta)))
    nu = cmath.phase(gamma) - cmath.phase(beta)
    return PreparationParams(sigma, lam, beta, gamma, mu, nu)


def gates_r123(
    s1: BlochState, prep: PreparationParams, phi2: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Preparation gates: align psi1 with the pole, fix the relative phase,
    then rotate the pair symmetrically about the -i meridian."""
    th1, ph1 = s1.theta, s1.phi
    c1, s1_ = math.cos(th1 / 2), math.sin(th1 / 2)
    r1 = np.array(
        [
            [c1, s1_ * np.exp(-1j * ph1)],
            [-s1_ * np.exp(1j * ph1), c1],
        ]
    )
    r2 = np.array(
        [
            [1.0, 0.0],
            [0.0, -1j * np.exp(-1j * (prep.lam + phi2))],
        ]
    )
    g = (math.pi - 2 * prep.sigma) / 4
    r3 = np.array(
        [
            [math.cos(g), -1j * math.sin(g)],
            [-1j * math.sin(g), math.cos(g)],
        ]
    )
    return r1, r2, r3


# ---------------------------------------------------------------------------
# evolution
# ---------------------------------------------------------------------------

def feasible_alpha_range(sigma) -> FeasibleAlphaRange:
    """Alpha_h values for which the orthogonalizing time exists.

    The condition cos(sigma) (1 + sin^2 alpha) <= 2 sin(alpha) solves to
    sin(alpha) >= tan(pi/4 - sigma/2), giving [arcsin(...), pi/2).  The
    interval is empty exactly at sigma = 0 (coincident pair), where only the
    alpha -> pi/2 limit would work.
    """
    sg = float(sigma)
    if not math.isfinite(sg) or not 0.0 <= sg <= math.pi / 2:
        raise DomainError(f"sigma must lie in [0, pi/2], got {sigma}")
    if sg == 0.0:  # tan(pi/4) rounds below 1, so force the empty interval
        return FeasibleAlphaRange(math.pi / 2, math.pi / 2)
    lo = math.asin(min(1.0, math.tan(math.pi / 4 - sg / 2)))
    return FeasibleAlphaRange(lo, math.pi / 2)


def evolution_time(alpha_h, sigma) -> float:
    """Smallest non-negative tau with sin^2(omega tau) = RHS(alpha_h, sigma).

    RHS = cos^2(alpha) cos(sigma) / (2 sin(alpha) - 2 sin^2(alpha) cos(sigma));
    outside [0, 1] there is no such time and the offending value is raised.
    """
    a = require_alpha(alpha_h)
    sg = float(sigma)
    if not math.isfinite(sg) or not 0.0 <= sg <= math.pi / 2:
        raise DomainError(f"sigma must lie in [0, pi/2], got {sigma}")
    cs = math.cos(sg)
    if cs < 1e-15:  # already-orthogonal pair: nothing to evolve
        return 0.0
    num = math.cos(a) ** 2 * cs
    den = 2 * math.sin(a) - 2 * math.sin(a) ** 2 * cs
    rhs = math.inf if den == 0.0 else num / den
    if not 0.0 <= rhs <= 1.0 + _RHS_GRACE:
        raise InfeasibleError(
            f"sin^2(omega tau) = {rhs!r} lies outside [0, 1]; "
            f"alpha_h={a!r} is infeasible for sigma={sg!r}",
            rhs=rhs,
        )
    q = math.asin(math.sqrt(min(1.0, rhs)))
    return q / math.cos(a)  # omega = cos(alpha) for the canonical Hamiltonian


def post_evolution_params(
    prep: PreparationParams, alpha_h, tau
) -> EvolutionParams:
    """Closed-form alignment parameters after evolving for tau.

    The evolved leading state is proportional to (A1, -i B1) with real A1,
    B1, fixing the R4 angle delta; pushing the prepared third state through
    the evolution and R4 gives (kappa, zeta), whose polar angle xi and phase
    gap chi fix R5 and the final polar angle rho = xi + pi/2.
    """
    a = require_alpha(alpha_h)
    t = float(tau)
    if not math.isfinite(t) or t < 0.0:
        raise DomainError(f"tau must be finite and non-negative, got {tau}")
    q = math.cos(a) * t  # omega * tau
    g = (math.pi - 2 * prep.sigma) / 4
    c, s_ = math.cos(g), math.sin(g)

    a1 = math.cos(q - a) * c - math.sin(q) * s_
    b1 = math.sin(q) * c + math.cos(q + a) * s_
    delta = 2 * math.atan2(b1, a1)

    cd, sd = math.cos(delta / 2), math.sin(delta / 2)
    cm, sm = math.cos(prep.mu / 2), math.sin(prep.mu / 2)
    phase_nu = cmath.exp(1j * prep.nu)
    kappa = cm * (math.cos(q - a) * cd + math.sin(q) * sd) + 1j * phase_nu * sm * (
        math.cos(q + a) * sd - math.sin(q) * cd
    )
    zeta = 1j * cm * (math.cos(q - a) * sd - math.sin(q) * cd) + phase_nu * sm * (
        math.cos(q + a) * cd + math.sin(q) * sd
    )
    xi = 2 * math.atan2(abs(zeta), abs(kappa))
    chi = cmath.phase(zeta) - cmath.phase(kappa)
    rho = xi + math.pi / 2
    return EvolutionParams(a, t, delta, kappa, zeta, chi, xi, rho)


def gates_r456(evo: EvolutionParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Alignment gates: return the evolved leading state to the pole, strip
    the third state's relative phase, then rotate the pair onto +-y."""
    cd, sd = math.cos(evo.delta / 2), math.sin(evo.delta / 2)
    r4 = np.array([[cd, 1j * sd], [1j * sd, cd]])
    r5 = np.array([[1.0, 0.0], [0.0, 1j * np.exp(-1j * evo.chi)]])
    r6 = np.array([[1.0, 1j], [1j, 1.0]]) / math.sqrt(2)
    return r4, r5, r6


# ---------------------------------------------------------------------------
# measurement geometry
# ---------------------------------------------------------------------------

def kappa_angles(alpha_m, rho) -> AngleReport:
    """Closed-form confusion weights between the three final states.

    cos^2(k12) vanishes identically — the final pair is CPT-orthogonal at
    every admitted alpha_m.  The third state confuses with the pair through

        cos^2(k13) = (1 + sin a)(1 + sin rho) / (2 (1 + sin a sin rho)),
        cos^2(k23) = (1 - sin a)(1 - sin rho) / (2 (1 + sin a sin rho)),

    so k13 -> pi/2 (no confusion) as alpha_m -> -pi/2.
    """
    a = require_alpha(alpha_m)
    r = float(rho)
    if not math.isfinite(r):
        raise DomainError("rho must be finite")
    sa, sr = math.sin(a), math.sin(r)
    den = 2.0 * (1.0 + sa * sr)
    return AngleReport(
        cos2_k12=0.0,
        cos2_k13=(1.0 + sa) * (1.0 + sr) / den,
        cos2_k23=(1.0 - sa) * (1.0 - sr) / den,
    )


def projectors() -> tuple[np.ndarray, np.ndarray]:
    """P1, P2 projecting on the final pair (1, +-i)/sqrt(2); alpha-free."""
    p1 = 0.5 * np.array([[1.0, -1j], [1j, 1.0]])
    p2 = 0.5 * np.array([[1.0, 1j], [-1j, 1.0]])
    return p1, p2


def measurement_operator() -> np.ndarray:
    """M = P1 - P2 with eigenvalues +-1."""
    p1, p2 = projectors()
    return p1 - p2


def decide(outcome: int) -> tuple[int, ...]:
    """Map a measurement outcome to plan-state indices: +1 identifies state 1,
    -1 leaves the pair {2, 3} for the second stage."""
    if outcome == 1:
        return (1,)
    if outcome == -1:
        return (2, 3)
    raise DomainError(f"measurement outcome must be +1 or -1, got {outcome!r}")


# ---------------------------------------------------------------------------
# plan assembly
# ---------------------------------------------------------------------------

def pipeline_stages(plan, b: BlochState) -> StageStates:
    """Run one state through a plan's gate/evolution sequence.

    Works for both plan flavors (they share gate fields, alpha_h and tau).
    """
    psi = state_from_bloch(b)
    prepared = plan.r3 @ plan.r2 @ plan.r1 @ psi
    u = evolution_operator(canonical_hamiltonian(plan.alpha_h), plan.tau)
    raw = u @ prepared
    n = float(np.linalg.norm(raw))
    evolved = normalized(raw)
    aligned = plan.r5 @ plan.r4 @ evolved
    final = plan.r6 @ aligned
    return StageStates(psi, prepared, evolved, aligned, final, n)


def build_plan(
    e: Ensemble, alpha_h="auto", alpha_m=DEFAULT_ALPHA_M
) -> DiscriminationPlan:
    """Assemble the full three-state plan.

    alpha_h may be "auto" (midpoint of the feasible range) or an explicit
    value, for which infeasibility raises with the offending RHS.
    """
    ordered, perm = order_by_prior(e)
    s1, s2, s3 = ordered.states
    prep = preparation_params(s1, s2, s3)
    if isinstance(alpha_h, str):
        if alpha_h != "auto":
            raise DomainError(f"alpha_h must be a number or 'auto', got {alpha_h!r}")
        a_h = feasible_alpha_range(prep.sigma).midpoint()
    elif alpha_h is None:
        a_h = feasible_alpha_range(prep.sigma).midpoint()
    else:
        a_h = require_alpha(alpha_h)
    a_m = require_alpha(alpha_m)

    tau = evolution_time(a_h, prep.sigma)
    evo = post_evolution_params(prep, a_h, tau)
    r1, r2, r3 = gates_r123(s1, prep, s2.phi)
    r4, r5, r6 = gates_r456(evo)
    p1, p2 = projectors()

    u = evolution_operator(canonical_hamiltonian(a_h), tau)
    prepare = r3 @ r2 @ r1
    norms = tuple(
        float(np.linalg.norm(u @ (prepare @ state_from_bloch(s))))
        for s in ordered.states
    )

    return DiscriminationPlan(
        ensemble=ordered,
        state_order=perm,
        prep=prep,
        evo=evo,
        alpha_m=a_m,
        r1=r1,
        r2=r2,
        r3=r3,
        r4=r4,
        r5=r5,
        r6=r6,
        p1=p1,
        p2=p2,
        measurement=measurement_operator(),
        angles=kappa_angles(a_m, evo.rho),
        evolved_norms=norms,
    )


def stage_two_plan(
    s2: BlochState, s3: BlochState, priors: tuple[float, float], alpha_h="auto"
) -> TwoStatePlan:
    """Compose the machinery on the remaining pair (as its states 1 and 2).

    After evolution and R4 the pair sits at the poles, so the R5 phase is
    inert and fixed to chi = 0; R6 then moves the pair onto +-y where M
    decides exactly.
    """
    pr = tuple(float(p) for p in priors)
    if len(pr) != 2 or not all(math.isfinite(p) and p >= 0.0 for p in pr):
        raise DomainError(f"pair priors must be two non-negative reals, got {priors}")
    if abs(sum(pr) - 1.0) > tol.NORM_ATOL:
        raise DomainError(f"pair priors must sum to 1, got {sum(pr)!r}")

    sigma, lam = _pair_params(s2, s3)
    if isinstance(alpha_h, str):
        if alpha_h != "auto":
            raise DomainError(f"alpha_h must be a number or 'auto', got {alpha_h!r}")
        a_h = feasible_alpha_range(sigma).midpoint()
    elif alpha_h is None:
        a_h = feasible_alpha_range(sigma).midpoint()
    else:
        a_h = require_alpha(alpha_h)
    tau = evolution_time(a_h, sigma)

    q = math.cos(a_h) * tau
    g = (math.pi - 2 * sigma) / 4
    a1 = math.cos(q - a_h) * math.cos(g) - math.sin(q) * math.sin(g)
    b1 = math.sin(q) * math.cos(g) + math.cos(q + a_h) * math.sin(g)
    delta = 2 * math.atan2(b1, a1)

    prep_like = PreparationParams(sigma, lam, 1.0 + 0j, 0.0 + 0j, 0.0, 0.0)
    r1, r2, r3 = gates_r123(s2, prep_like, s3.phi)
    cd, sd = math.cos(delta / 2), math.sin(delta / 2)
    r4 = np.array([[cd, 1j * sd], [1j * sd, cd]])
    r5 = np.array([[1.0, 0.0], [0.0, 1j]])  # chi = 0
    r6 = np.array([[1.0, 1j], [1j, 1.0]]) / math.sqrt(2)
    p1, p2 = projectors()

    return TwoStatePlan(
        states=(s2, s3),
        priors=pr,
        sigma=sigma,
        lam=lam,
        alpha_h=a_h,
        tau=tau,
        delta=delta,
        r1=r1,
        r2=r2,
        r3=r3,
        r4=r4,
        r5=r5,
        r6=r6,
        p1=p1,
        p2=p2,
        measurement=measurement_operator(),
    )


def decide_pair(outcome: int) -> int:
    """Stage-two decision: +1 is the pair's first member, -1 its second."""
    if outcome == 1:
        return 1
    if outcome == -1:
        return 2
    raise DomainError(f"measurement outcome must be +1 or -1, got {outcome!r}")
