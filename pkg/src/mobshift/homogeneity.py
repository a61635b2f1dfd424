"""Rational functional calculus on operators and the defect certificates for
conjugation covariance and its infinitesimal forms.

An operator T is homogeneous for a representation R when
``phi_g(T) = R(g)^{-1} T R(g)`` along the cover; differentiating the
conjugation flow kappa(g)T = R(g) T R(g)^{-1} at the identity yields
``kappa(L)T = T^2 - I``, ``kappa(M)T = -i(T^2 + I)``, ``kappa(e)T = -I`` and
``kappa(f)T = T^2`` for such T.  Every certificate here is a named residual
restricted to the window interior.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import ParameterError
from .mobius import MobiusElement
from .numkernel import (
    BILATERAL,
    OperatorMatrix,
    TruncationWindow,
    interior_max,
    interior_norm,
    mat_exp,
    solve,
)
from .repn import Realization, RepnParams, reducible_generator_matrix
from .shifts import ReducibleShiftSpec, reducible_shift

KAPPA_GENERATORS = ("L", "M", "e", "f")

_STEP_MIN = 1e-6
_STEP_MAX = 1e-2
DEFAULT_FD_STEP = 1e-4

DEFAULT_HOMOGENEITY_TOL = 1e-6
DEFAULT_IDENTITY_TOL = 1e-6
DEFAULT_ROUTE_TOL = 1e-7
DEFAULT_REDUCIBLE_TOL = 1e-9


@dataclass(frozen=True)
class DefectReport:
    """Named residual with its tolerance, verdict, and reproducing context."""

    name: str
    value: float
    tolerance: float
    passed: bool
    context: dict = field(default_factory=dict)

    @classmethod
    def build(cls, name: str, value: float, tolerance: float, context: dict | None = None) -> "DefectReport":
        value = float(value)
        tolerance = float(tolerance)
        if not value >= 0.0:
            raise ParameterError(f"defect value must be non-negative, got {value}")
        if not tolerance > 0.0:
            raise ParameterError(f"tolerance must be positive, got {tolerance}")
        return cls(name, value, tolerance, value <= tolerance, dict(context or {}))

    def to_json(self) -> str:
        payload = {
            "name": self.name,
            "value": self.value,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "context": self.context,
        }
        return json.dumps(payload, sort_keys=True)


def mobius_of_operator(phi: MobiusElement, T: OperatorMatrix) -> OperatorMatrix:
    """phi(T) = alpha (T - beta I)(I - conj(beta) T)^{-1}.

    The resolvent solve carries its own condition guard; a near-singular
    I - conj(beta) T means phi is not holomorphic on the truncation's
    numerical spectrum.
    """
    ident = OperatorMatrix.identity(T.window, T.basis)
    denominator = ident - phi.beta.conjugate() * T
    numerator = T - phi.beta * ident
    return phi.alpha * solve(denominator, numerator)


def homogeneity_defect(
    T: OperatorMatrix,
    R: OperatorMatrix,
    phi: MobiusElement,
    w: TruncationWindow,
    tolerance: float = DEFAULT_HOMOGENEITY_TOL,
    name: str = "homogeneity",
    context: dict | None = None,
) -> DefectReport:
    """Interior residual of phi_g(T) = R^{-1} T R for a matching (phi, R) pair.

    The identity is certified in its multiplied-through form
    ``R phi(T) - T R``: phi(T) is banded with geometrically decaying
    coefficients, so this residual reaches the rounding floor on the interior,
    whereas conjugating T by the truncated R would drag boundary error inward
    and bury the signal.  The caller supplies R along some path and phi as the
    projection of the same path.
    """
    value = interior_norm(R @ mobius_of_operator(phi, T) - T @ R, w)
    return DefectReport.build(name, value, tolerance, context)


def _as_realization(p) -> Realization:
    if isinstance(p, Realization):
        return p
    if isinstance(p, RepnParams):
        return Realization.plain(p)
    raise ParameterError("expected RepnParams or a Realization")


def kappa_flow_derivative(
    T: OperatorMatrix,
    X: str,
    p,
    w: TruncationWindow,
    step: float = DEFAULT_FD_STEP,
) -> OperatorMatrix:
    """d/ds at 0 of R(exp sX) T R(exp sX)^{-1} by second-order central differences.

    For e and f the real-flow derivatives combine as (L -/+ iM)/2.  The
    commutator [dR(X), T] (see ``kappa_commutator``) is the algebraic route to
    the same derivative; the two are compared in the verification suites.
    """
    step = float(step)
    if not _STEP_MIN <= step <= _STEP_MAX:
        raise ParameterError(f"step {step} outside [{_STEP_MIN}, {_STEP_MAX}]")
    rel = _as_realization(p)

    def fd_real(gen: str) -> OperatorMatrix:
        a = rel.generator(gen, w)
        forward = mat_exp(step * a)
        backward = mat_exp(-step * a)
        return (forward @ T @ backward - backward @ T @ forward) / (2.0 * step)

    if X == "L" or X == "M":
        return fd_real(X)
    if X == "e":
        return 0.5 * (fd_real("L") - 1j * fd_real("M"))
    if X == "f":
        return 0.5 * (fd_real("L") + 1j * fd_real("M"))
    raise ParameterError(f"unsupported generator {X!r} (expected L, M, e or f)")


def kappa_commutator(T: OperatorMatrix, X: str, p, w: TruncationWindow) -> OperatorMatrix:
    """[dR(X), T]: the exact derivative of the conjugation flow at s = 0."""
    if X not in KAPPA_GENERATORS:
        raise ParameterError(f"unsupported generator {X!r} (expected L, M, e or f)")
    a = _as_realization(p).generator(X, w)
    return a @ T - T @ a


def infinitesimal_targets(T: OperatorMatrix) -> dict:
    """The values kappa(X)T must take when T is homogeneous."""
    ident = OperatorMatrix.identity(T.window, T.basis)
    square = T @ T
    return {
        "L": square - ident,
        "M": -1j * (square + ident),
        "e": -1.0 * ident,
        "f": square,
    }


def infinitesimal_reports(
    T: OperatorMatrix,
    p,
    w: TruncationWindow,
    step: float = DEFAULT_FD_STEP,
    identity_tol: float = DEFAULT_IDENTITY_TOL,
    route_tol: float = DEFAULT_ROUTE_TOL,
    context: dict | None = None,
) -> list:
    """Certify the four infinitesimal relations and the route agreement.

    Identity defects (against T^2 - I, -i(T^2 + I), -I, T^2) use the interior
    Frobenius norm; the flow-vs-commutator route gap is an entrywise interior
    measure, since its floor is the central-difference bias at the given step.
    """
    rel = _as_realization(p)
    targets = infinitesimal_targets(T)
    reports = []
    fd_cache = {gen: kappa_flow_derivative(T, gen, rel, w, step) for gen in ("L", "M")}
    fd_cache["e"] = 0.5 * (fd_cache["L"] - 1j * fd_cache["M"])
    fd_cache["f"] = 0.5 * (fd_cache["L"] + 1j * fd_cache["M"])
    for gen in KAPPA_GENERATORS:
        fd = fd_cache[gen]
        comm = kappa_commutator(T, gen, rel, w)
        ctx = dict(context or {})
        ctx["generator"] = gen
        ctx["step"] = step
        reports.append(
            DefectReport.build(f"kappa_{gen}_identity", interior_norm(fd - targets[gen], w), identity_tol, ctx)
        )
        reports.append(
            DefectReport.build(f"kappa_{gen}_route_gap", interior_max(fd - comm, w), route_tol, ctx)
        )
    return reports


def reducible_lambda_check(
    lam: float,
    r: complex,
    w: TruncationWindow,
    tolerance: float = DEFAULT_REDUCIBLE_TOL,
    context: dict | None = None,
) -> DefectReport:
    """Single-entry witness that the reducible-sum shift forces lam = 1.

    The (g_1, g_{-1}) entry of [dR(f), T] - T^2 equals r (lam - 1) exactly,
    so the reported value is |r| |lam - 1| up to rounding.
    """
    if w.kind != BILATERAL or w.N < 4:
        raise ParameterError("needs a bilateral window with N >= 4")
    spec = ReducibleShiftSpec(lam, r)
    T = reducible_shift(spec, w)
    F = reducible_generator_matrix(spec.lam, "f", w)
    witness = (F @ T - T @ F) - T @ T
    value = abs(witness.entry(1, -1))
    ctx = dict(context or {})
    ctx.setdefault("lam", spec.lam)
    ctx.setdefault("r", [spec.r.real, spec.r.imag])
    return DefectReport.build("reducible_lambda", value, tolerance, ctx)
