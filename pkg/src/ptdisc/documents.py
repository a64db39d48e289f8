"""Plan and report documents: JSON-ready dictionaries and their inverses.

Complex numbers are [re, im] pairs, matrices row-major nests of those, all
angles radians.  Values survive the round trip at full double precision
(json floats serialize via repr).
"""
from __future__ import annotations

import hashlib
import json

import numpy as np

from .algebra import BlochState
from .protocol import (
    AngleReport,
    DiscriminationPlan,
    Ensemble,
    EvolutionParams,
    PreparationParams,
)
from .simulate import TrialReport


def _cpair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _cpair_back(doc) -> complex:
    return complex(doc[0], doc[1])


def _matrix(m: np.ndarray) -> list:
    return [[_cpair(m[i, j]) for j in range(2)] for i in range(2)]


def _matrix_back(doc) -> np.ndarray:
    return np.array([[_cpair_back(doc[i][j]) for j in range(2)] for i in range(2)])


def ensemble_document(e: Ensemble) -> dict:
    return {
        "states": [{"theta": s.theta, "phi": s.phi} for s in e.states],
        "priors": list(e.priors),
    }


def ensemble_from_document(doc) -> Ensemble:
    states = tuple(BlochState(s["theta"], s["phi"]) for s in doc["states"])
    return Ensemble(states, tuple(doc["priors"]))


def plan_document(plan: DiscriminationPlan) -> dict:
    prep, evo = plan.prep, plan.evo
    return {
        "state_order": list(plan.state_order),
        "ensemble": ensemble_document(plan.ensemble),
        "alpha_m": plan.alpha_m,
        "preparation": {
            "sigma": prep.sigma,
            "lambda": prep.lam,
            "beta": _cpair(prep.beta),
            "gamma": _cpair(prep.gamma),
            "mu": prep.mu,
            "nu": prep.nu,
        },
        "evolution": {
            "alpha_h": evo.alpha_h,
            "tau": evo.tau,
            "delta": evo.delta,
            "kappa": _cpair(evo.kappa_amp),
            "zeta": _cpair(evo.zeta_amp),
            "chi": evo.chi,
            "xi": evo.xi,
            "rho": evo.rho,
        },
        "angles": {
            "cos2_kappa12": plan.angles.cos2_k12,
            "cos2_kappa13": plan.angles.cos2_k13,
            "cos2_kappa23": plan.angles.cos2_k23,
        },
        "gates": {
            name: _matrix(getattr(plan, name))
            for name in ("r1", "r2", "r3", "r4", "r5", "r6")
        },
        "projectors": {"p1": _matrix(plan.p1), "p2": _matrix(plan.p2)},
        "measurement": _matrix(plan.measurement),
        "evolved_norms": list(plan.evolved_norms),
    }


def plan_from_document(doc) -> DiscriminationPlan:
    prep_doc, evo_doc = doc["preparation"], doc["evolution"]
    prep = PreparationParams(
        sigma=prep_doc["sigma"],
        lam=prep_doc["lambda"],
        beta=_cpair_back(prep_doc["beta"]),
        gamma=_cpair_back(prep_doc["gamma"]),
        mu=prep_doc["mu"],
        nu=prep_doc["nu"],
    )
    evo = EvolutionParams(
        alpha_h=evo_doc["alpha_h"],
        tau=evo_doc["tau"],
        delta=evo_doc["delta"],
        kappa_amp=_cpair_back(evo_doc["kappa"]),
        zeta_amp=_cpair_back(evo_doc["zeta"]),
        chi=evo_doc["chi"],
        xi=evo_doc["xi"],
        rho=evo_doc["rho"],
    )
    a = doc["angles"]
    gates = {name: _matrix_back(doc["gates"][name]) for name in doc["gates"]}
    return DiscriminationPlan(
        ensemble=ensemble_from_document(doc["ensemble"]),
        state_order=tuple(doc["state_order"]),
        prep=prep,
        evo=evo,
        alpha_m=doc["alpha_m"],
        p1=_matrix_back(doc["projectors"]["p1"]),
        p2=_matrix_back(doc["projectors"]["p2"]),
        measurement=_matrix_back(doc["measurement"]),
        angles=AngleReport(a["cos2_kappa12"], a["cos2_kappa13"], a["cos2_kappa23"]),
        evolved_norms=tuple(doc["evolved_norms"]),
        **gates,
    )


def plan_fingerprint(plan: DiscriminationPlan) -> str:
    """Short stable digest of the canonically serialized plan."""
    canonical = json.dumps(plan_document(plan), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def report_document(report: TrialReport, plan: DiscriminationPlan) -> dict:
    return {
        "trials": report.trials,
        "seed": report.seed,
        "avg_measurements": report.avg_measurements,
        "max_measurements": report.max_measurements,
        "error_rate": report.error_rate,
        "confusion": [list(row) for row in report.confusion],
        "plan_fingerprint": plan_fingerprint(plan),
    }
