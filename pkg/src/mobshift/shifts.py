"""Weighted shift operators: the canonical homogeneous families, their weight
sequences, and conversion between the monomial and orthonormal bases.

A step-m shift maps f_n to a_n f_{n-m}; in the orthonormal basis
x_n = f_n / ||f_n|| its coefficients pick up the norm ratio, which is where
the tabulated weight sequences come from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .errors import ParameterError, PoleError, WindowMismatchError
from .numkernel import (
    BILATERAL,
    MONOMIAL,
    ORTHONORMAL,
    UNILATERAL,
    OperatorMatrix,
    TruncationWindow,
)
from .repn import (
    ANTIHOLO,
    COMPLEMENTARY,
    HOLO,
    PRINCIPAL,
    REDUCIBLE,
    RepnParams,
    SeriesTag,
)

SHIFT_KINDS = ("T1", "T1star", "T2", "T3")
BRANCH_T2 = "T2"
BRANCH_T3 = "T3"

_COUPLING_BOUND = 10.0
_POLE_TOL = 1e-12


def shift_matrix(
    window: TruncationWindow,
    step: int,
    coefficients: Mapping[int, complex],
    basis: str = MONOMIAL,
) -> OperatorMatrix:
    """Matrix of T f_n = a_n f_{n-step}; coefficients keyed by the source index n."""
    data = np.zeros((window.size, window.size), dtype=np.complex128)
    for n, a in coefficients.items():
        if not (window.contains(n) and window.contains(n - step)):
            raise ParameterError(f"coefficient at n={n} targets an index outside the window")
        data[window.pos(n - step), window.pos(n)] = a
    return OperatorMatrix(data, window, basis)


@dataclass(frozen=True, eq=False)
class WeightedShiftSpec:
    """Step-m shift data; indices whose target leaves the window are absent."""

    window: TruncationWindow
    step: int
    coefficients: dict
    basis: str = MONOMIAL

    def __post_init__(self):
        coeffs = {}
        for n, a in dict(self.coefficients).items():
            if not (self.window.contains(n) and self.window.contains(n - self.step)):
                raise ParameterError(f"coefficient at n={n} has no target inside the window")
            a = complex(a)
            if not (math.isfinite(a.real) and math.isfinite(a.imag)):
                raise ParameterError("shift coefficients must be finite")
            coeffs[int(n)] = a
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_function(
        cls,
        window: TruncationWindow,
        step: int,
        fn: Callable[[int], complex],
        basis: str = MONOMIAL,
    ) -> "WeightedShiftSpec":
        coeffs = {
            int(n): complex(fn(int(n)))
            for n in window.indices()
            if window.contains(int(n) - step)
        }
        return cls(window, step, coeffs, basis)

    def matrix(self) -> OperatorMatrix:
        return shift_matrix(self.window, self.step, self.coefficients, self.basis)


def canonical_shift(kind: str, p: RepnParams, w: TruncationWindow) -> OperatorMatrix:
    """One of the four canonical homogeneous shifts, in the monomial basis.

    T1 f_n = f_{n+1} and its adjoint T1star f_n = (n / (lam + n - 1)) f_{n-1}
    live on unilateral windows; T2 f_n = f_{n+1} and
    T3 f_n = ((lam + mu + n) / (n + 1 - mu)) f_{n+1} on bilateral ones.
    """
    if kind not in SHIFT_KINDS:
        raise ParameterError(f"unknown shift kind {kind!r}")
    if w.kind != p.index_set:
        raise WindowMismatchError("window kind does not match params index set")
    lam, mu = p.lam, p.mu
    if kind in ("T1", "T1star"):
        if p.index_set != UNILATERAL or lam <= 0.0:
            raise ParameterError(f"{kind} belongs to the unilateral holomorphic family (lam > 0)")
        if kind == "T1":
            coeffs = {n: 1.0 for n in range(w.lo, w.hi)}
            return shift_matrix(w, -1, coeffs)
        coeffs = {n: n / (lam + n - 1.0) for n in range(1, w.hi + 1)}
        return shift_matrix(w, +1, coeffs)
    if p.index_set != BILATERAL:
        raise ParameterError(f"{kind} belongs to the bilateral families")
    if kind == "T2":
        coeffs = {n: 1.0 for n in range(w.lo, w.hi)}
        return shift_matrix(w, -1, coeffs)
    if mu.imag == 0.0 and float(mu.real).is_integer():
        raise PoleError("T3 needs non-integer mu (pole at n + 1 - mu = 0)")
    coeffs = {n: (lam + mu + n) / (n + 1.0 - mu) for n in range(w.lo, w.hi)}
    return shift_matrix(w, -1, coeffs)


def weight_sequence(series: SeriesTag, p: RepnParams | None, n: int, branch: str = BRANCH_T2) -> complex:
    """One weight of the canonical orthonormal-basis shift of the given family.

    Index domains: n >= 0 for the holomorphic family, n <= 0 for the
    anti-holomorphic one (built on f_{-n}), all of Z otherwise.  The principal
    family has both a T2 branch (weights 1) and a complex T3 branch; the
    complementary family is tabulated on its T2 branch only.
    """
    kind = series.kind
    if kind in (HOLO, ANTIHOLO, PRINCIPAL, COMPLEMENTARY) and p is None:
        raise ParameterError("this family needs representation parameters")
    if kind == HOLO:
        if n < 0:
            raise ParameterError("holomorphic weights live on n >= 0")
        ratio = (1.0 + n) / (p.lam + n)
        if ratio <= 0.0:
            raise ParameterError("weight outside the unitary range (needs lam > 0)")
        return complex(math.sqrt(ratio))
    if kind == ANTIHOLO:
        if n > 0:
            raise ParameterError("anti-holomorphic weights live on n <= 0")
        if n == 0:
            return 0j  # the backward shift annihilates its top basis vector
        ratio = n / (1.0 - p.lam + n)
        if ratio <= 0.0:
            raise ParameterError("weight outside the unitary range (needs lam > 0)")
        return complex(math.sqrt(ratio))
    if kind == PRINCIPAL:
        if branch == BRANCH_T2:
            return 1.0 + 0j
        if branch == BRANCH_T3:
            mu = p.mu
            return (p.lam + mu + n) / (n + 1.0 - mu)
        raise ParameterError(f"unknown branch {branch!r}")
    if kind == COMPLEMENTARY:
        if branch != BRANCH_T2:
            raise ParameterError("only the T2 branch is tabulated for the complementary family")
        m = p.mu.real
        ratio = (1.0 - m + n) / (p.lam + m + n)
        if ratio <= 0.0:
            raise ParameterError("weight outside the unitary range")
        return complex(math.sqrt(ratio))
    if kind == REDUCIBLE:
        if series.lam is None or series.r is None:
            raise ParameterError("reducible weights need the tag's lam and coupling r")
        return series.r if n == -1 else 1.0 + 0j
    raise ParameterError(f"unknown series kind {kind!r}")


def _diagonal_gram(G: OperatorMatrix) -> np.ndarray:
    d = np.diagonal(G.data)
    if np.any(G.data != np.diag(d)):
        raise ParameterError("Gram matrix must be diagonal")
    if np.any(d.imag != 0.0) or np.any(d.real <= 0.0):
        raise ParameterError("non-positive Gram entry")
    return d.real


def to_orthonormal(T: OperatorMatrix, G: OperatorMatrix) -> OperatorMatrix:
    """Conjugate a monomial-basis operator into the orthonormal basis.

    Returns G^{1/2} T G^{-1/2}; a step-(-1) shift with coefficients a_n turns
    into the weighted shift with w_n = a_n ||f_{n+1}|| / ||f_n||.
    """
    if T.basis != MONOMIAL:
        raise ParameterError("input must be in the monomial basis")
    T._require_compatible(G)
    s = np.sqrt(_diagonal_gram(G))
    data = (s[:, None] * T.data) / s[None, :]
    return OperatorMatrix(data, T.window, ORTHONORMAL)


def gram_adjoint(T: OperatorMatrix, G: OperatorMatrix) -> OperatorMatrix:
    """Adjoint with respect to the Gram inner product: G^{-1} T^H G."""
    T._require_compatible(G)
    d = _diagonal_gram(G)
    data = (T.data.conj().T * d[None, :]) / d[:, None]
    return OperatorMatrix(data, T.window, T.basis)


@dataclass(frozen=True)
class ReducibleShiftSpec:
    """Shift on the direct-sum seam basis: free coupling r at the seam."""

    lam: float
    r: complex

    def __post_init__(self):
        lam = float(self.lam)
        r = complex(self.r)
        if not 0.0 < lam < 2.0:
            raise ParameterError("the reducible shift requires lam in (0, 2)")
        if abs(r) > _COUPLING_BOUND:
            raise ParameterError(f"coupling |r| must not exceed {_COUPLING_BOUND}")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "r", r)


def reducible_shift(spec: ReducibleShiftSpec, w: TruncationWindow) -> OperatorMatrix:
    """Step-(-1) shift in the seam basis g_n.

    Coefficients are (1 + n)/(lam + n) below the seam, the coupling r at
    n = -1, and 1 above.
    """
    if w.kind != BILATERAL:
        raise WindowMismatchError("the reducible shift lives on a bilateral window")
    coeffs: dict[int, complex] = {}
    for n in range(w.lo, w.hi):
        if n < -1:
            den = spec.lam + n
            if abs(den) < _POLE_TOL:
                raise PoleError(f"coefficient pole at n={n} for lam={spec.lam}")
            coeffs[n] = (1.0 + n) / den
        elif n == -1:
            coeffs[n] = spec.r
        else:
            coeffs[n] = 1.0
    return shift_matrix(w, -1, coeffs)
