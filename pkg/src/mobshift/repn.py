"""Series taxonomy and finite matrix realizations of the cover representations.

On monomials ``f_n(z) = z^n`` the representation acts by

    (R(g)F)(z) = (phi'_{g^{-1}}(z))^{lam/2} |phi'_{g^{-1}}(z)|^mu F(phi_{g^{-1}}(z)),

which differentiates to the generator actions

    dR(h) f_n = -i (2n + lam) f_n,
    dR(e) f_n = (mu - n) f_{n-1},
    dR(f) f_n = (lam + mu + n) f_{n+1},

with L = e + f and M = i(e - f).  The module realizes R two independent
ways -- exponentials of truncated generator matrices along flow paths, and
direct evaluation on the unit circle followed by Fourier extraction -- so the
two routes can cross-check each other away from the truncation boundary.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import mobius
from .errors import (
    ClassificationError,
    GridSizeError,
    NumericsError,
    ParameterError,
    WindowMismatchError,
)
from .mobius import GroupPath, MobiusElement
from .numkernel import (
    BILATERAL,
    MONOMIAL,
    UNILATERAL,
    OperatorMatrix,
    TruncationWindow,
    circle_fft,
    interior_norm,
    mat_exp,
)
from .specialfn import norm_sq_sequence

HOLO = "holo"
ANTIHOLO = "antiholo"
PRINCIPAL = "principal"
COMPLEMENTARY = "complementary"
REDUCIBLE = "reducible"

GENERATOR_NAMES = ("h", "e", "f", "L", "M")

_PRINCIPAL_RE_TOL = 1e-12
_COUPLING_BOUND = 10.0
_NYQUIST_TAIL_TOL = 1e-9
_NEGATIVE_INDEX_TOL = 1e-10
_ORACLE_BETA_CAP = 0.3


@dataclass(frozen=True)
class RepnParams:
    """(index set, lam, mu) naming one representation of the cover.

    Unilateral families fix mu = 0.
    """

    index_set: str
    lam: float
    mu: complex = 0j

    def __post_init__(self):
        if self.index_set not in (UNILATERAL, BILATERAL):
            raise ParameterError(f"unknown index set {self.index_set!r}")
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "mu", complex(self.mu))
        if self.index_set == UNILATERAL and self.mu != 0:
            raise ParameterError("unilateral families require mu = 0")


@dataclass(frozen=True)
class SeriesTag:
    """Series classification; the reducible sum carries its own lam and coupling r."""

    kind: str
    lam: float | None = None
    r: complex | None = None

    def __post_init__(self):
        if self.kind not in (HOLO, ANTIHOLO, PRINCIPAL, COMPLEMENTARY, REDUCIBLE):
            raise ParameterError(f"unknown series kind {self.kind!r}")

    @classmethod
    def reducible(cls, lam: float, r: complex) -> "SeriesTag":
        lam = float(lam)
        r = complex(r)
        if not 0.0 < lam < 2.0:
            raise ParameterError("reducible sums require lam in (0, 2)")
        if abs(r) > _COUPLING_BOUND:
            raise ParameterError(f"coupling |r| must not exceed {_COUPLING_BOUND}")
        return cls(REDUCIBLE, lam=lam, r=r)


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    """Coefficients against the monomial basis over a window."""

    window: TruncationWindow
    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=np.complex128)
        if arr.shape != (self.window.size,):
            raise WindowMismatchError("coefficient length does not match window size")
        if not np.isfinite(arr).all():
            raise ParameterError("non-finite coefficients")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def basis_vector(cls, window: TruncationWindow, n: int) -> "CoefficientVector":
        arr = np.zeros(window.size, dtype=np.complex128)
        arr[window.pos(n)] = 1.0
        return cls(window, arr)

    def value(self, n: int) -> complex:
        return complex(self.coeffs[self.window.pos(n)])


def classify_series(p: RepnParams) -> SeriesTag:
    """Sort parameters into the unitary series taxonomy, rejecting the rest.

    Unilateral with lam > 0 is the holomorphic family.  Bilateral splits into
    principal (Re mu = (1 - lam)/2 with lam in (-1, 1]) and complementary
    (mu real in (0, 1) and (-lam, 1 - lam), lam in (-1, 1)); an integer mu is
    the reducible direct-sum point and is rejected here.  The
    anti-holomorphic family is reached through the sharp twist of a
    holomorphic one, never by classification.
    """
    if p.index_set == UNILATERAL:
        if p.lam <= 0.0:
            raise ClassificationError("the holomorphic family requires lam > 0")
        return SeriesTag(HOLO)
    mu = p.mu
    if mu.imag == 0.0 and float(mu.real).is_integer():
        raise ClassificationError(
            "bilateral families require non-integer mu (integer mu is the reducible direct-sum point)"
        )
    if abs(mu.real - (1.0 - p.lam) / 2.0) <= _PRINCIPAL_RE_TOL:
        if not -1.0 < p.lam <= 1.0:
            raise ClassificationError("the principal family requires lam in (-1, 1]")
        return SeriesTag(PRINCIPAL)
    if mu.imag == 0.0:
        m = mu.real
        if not -1.0 < p.lam < 1.0:
            raise ClassificationError("the complementary family requires lam in (-1, 1)")
        if not (0.0 < m < 1.0 and -p.lam < m < 1.0 - p.lam):
            raise ClassificationError(
                "the complementary family requires mu in (0, 1) intersected with (-lam, 1 - lam)"
            )
        return SeriesTag(COMPLEMENTARY)
    raise ClassificationError(
        "bilateral parameters match neither the principal nor the complementary family"
    )


def _shift_band(w: TruncationWindow, offset: int, coeff) -> np.ndarray:
    """Matrix with entries coeff(n) at (row n + offset, column n)."""
    size = w.size
    data = np.zeros((size, size), dtype=np.complex128)
    for p in range(size):
        q = p + offset
        if 0 <= q < size:
            data[q, p] = coeff(int(w.lo + p))
    return data


def _plain_raw(p: RepnParams, X: str, w: TruncationWindow) -> np.ndarray:
    lam, mu = p.lam, p.mu
    if X == "h":
        return np.diag(-1j * (2.0 * w.indices() + lam)).astype(np.complex128)
    if X == "e":
        return _shift_band(w, -1, lambda n: mu - n)
    if X == "f":
        return _shift_band(w, +1, lambda n: lam + mu + n)
    if X == "L":
        return _plain_raw(p, "e", w) + _plain_raw(p, "f", w)
    if X == "M":
        return 1j * (_plain_raw(p, "e", w) - _plain_raw(p, "f", w))
    raise ParameterError(f"unknown generator {X!r}")


def generator_matrix(p: RepnParams, X: str, w: TruncationWindow) -> OperatorMatrix:
    """Truncated monomial-basis matrix of the generator action.

    Raising/lowering across the window edge is dropped; for the unilateral
    index set the vanishing of the lowering action on f_0 is genuine, not a
    truncation artifact.
    """
    if w.kind != p.index_set:
        raise WindowMismatchError(
            f"window kind {w.kind!r} does not match params index set {p.index_set!r}"
        )
    return OperatorMatrix(_plain_raw(p, X, w), w, MONOMIAL)


def _reducible_e(lam: float, n: int) -> complex:
    if n < 0:
        return 1.0 - lam - n
    if n == 0:
        return 0.0
    return -float(n)


def _reducible_f(lam: float, n: int) -> complex:
    if n < -1:
        return float(n + 1)
    if n == -1:
        return 0.0
    return lam + n


def _reducible_raw(lam: float, X: str, w: TruncationWindow) -> np.ndarray:
    if X == "h":
        return np.diag(-1j * (2.0 * w.indices() + lam)).astype(np.complex128)
    if X == "e":
        return _shift_band(w, -1, lambda n: _reducible_e(lam, n))
    if X == "f":
        return _shift_band(w, +1, lambda n: _reducible_f(lam, n))
    if X == "L":
        return _reducible_raw(lam, "e", w) + _reducible_raw(lam, "f", w)
    if X == "M":
        return 1j * (_reducible_raw(lam, "e", w) - _reducible_raw(lam, "f", w))
    raise ParameterError(f"unknown generator {X!r}")


def reducible_generator_matrix(lam: float, X: str, w: TruncationWindow) -> OperatorMatrix:
    """Generator matrices of the direct-sum family in its seam basis g_n.

    The lowering action vanishes at n = 0 and the raising action at n = -1,
    the two seam columns of the decomposition.
    """
    lam = float(lam)
    if w.kind != BILATERAL:
        raise WindowMismatchError("the reducible sum lives on a bilateral window")
    if not 0.0 < lam < 2.0:
        raise ParameterError("the reducible sum requires lam in (0, 2)")
    return OperatorMatrix(_reducible_raw(lam, X, w), w, MONOMIAL)


def _path_product(gen_of, path: GroupPath, w: TruncationWindow) -> OperatorMatrix:
    out = OperatorMatrix.identity(w)
    for gen, t in path.segments:
        out = out @ mat_exp(t * gen_of(gen))
    return out


def rep_matrix(p: RepnParams, path: GroupPath, w: TruncationWindow) -> OperatorMatrix:
    """Ordered product of generator-exponential segments.

    Trustworthy on the window interior; boundary rows and columns carry
    truncation error.
    """
    return _path_product(lambda X: generator_matrix(p, X, w), path, w)


def rep_matrix_sharp(p: RepnParams, path: GroupPath, w: TruncationWindow) -> OperatorMatrix:
    """Twisted representation R(path*) realizing the anti-holomorphic family."""
    return rep_matrix(p, mobius.star_path(path), w)


def gram(p: RepnParams, w: TruncationWindow) -> OperatorMatrix:
    """Diagonal matrix of squared basis norms ||f_n||^2."""
    return OperatorMatrix.from_diagonal(norm_sq_sequence(p, w).values, w)


def unitarity_defect(p: RepnParams, path: GroupPath, w: TruncationWindow) -> float:
    """Interior norm of R* G R - G, zero for an exactly unitary action."""
    r = rep_matrix(p, path, w)
    g = gram(p, w)
    return interior_norm(r.H @ g @ r - g, w)


# generator images under the conjugation twist: h and M reverse, hence e <-> f
_SHARP_GEN = {"h": (-1.0, "h"), "L": (1.0, "L"), "M": (-1.0, "M"), "e": (1.0, "f"), "f": (1.0, "e")}


@dataclass(frozen=True)
class Realization:
    """Uniform access to generators and path matrices.

    Covers the plain irreducible families, their sharp twist (the
    anti-holomorphic family), and the reducible direct sum.
    """

    flavor: str
    params: RepnParams | None = None
    lam_reducible: float | None = None

    @classmethod
    def plain(cls, params: RepnParams) -> "Realization":
        return cls("plain", params=params)

    @classmethod
    def sharp(cls, params: RepnParams) -> "Realization":
        return cls("sharp", params=params)

    @classmethod
    def reducible(cls, lam: float) -> "Realization":
        return cls("reducible", lam_reducible=float(lam))

    def generator(self, X: str, w: TruncationWindow) -> OperatorMatrix:
        if self.flavor == "plain":
            return generator_matrix(self.params, X, w)
        if self.flavor == "reducible":
            return reducible_generator_matrix(self.lam_reducible, X, w)
        sign, xs = _SHARP_GEN[X]
        g = generator_matrix(self.params, xs, w)
        return g if sign == 1.0 else -g

    def along_path(self, path: GroupPath, w: TruncationWindow) -> OperatorMatrix:
        if self.flavor == "plain":
            return rep_matrix(self.params, path, w)
        if self.flavor == "sharp":
            return rep_matrix_sharp(self.params, path, w)
        return _path_product(lambda X: reducible_generator_matrix(self.lam_reducible, X, w), path, w)

    def describe(self) -> str:
        if self.flavor == "reducible":
            return f"reducible(lam={self.lam_reducible:g})"
        p = self.params
        return f"{self.flavor}(lam={p.lam:g}, mu={p.mu:g})"


def default_grid_size(w: TruncationWindow) -> int:
    """Smallest power of two at least 8x the window size."""
    target = 8 * w.size
    return 1 << (target - 1).bit_length()


def _circle_factors(phi_inv: MobiusElement, eta_plus: complex, eta_minus: complex, grid: int):
    """Moved points and derivative multiplier on the uniform circle grid.

    The multiplier is exp(eta_plus * log phi' + eta_minus * conj(log phi'))
    with each log taken on its principal branch; with eta_plus = (lam + mu)/2
    and eta_minus = mu/2 this equals (phi')^{lam/2} |phi'|^mu.
    """
    z = np.exp(2j * np.pi * np.arange(grid) / grid)
    beta = phi_inv.beta
    moved = phi_inv.alpha * (z - beta) / (1.0 - beta.conjugate() * z)
    # 1 - conj(beta) z stays in the right half plane because |beta| <= 0.3
    log_deriv = (
        cmath.log(phi_inv.alpha)
        + math.log1p(-abs(beta) ** 2)
        - 2.0 * np.log(1.0 - beta.conjugate() * z)
    )
    multiplier = np.exp(complex(eta_plus) * log_deriv + complex(eta_minus) * np.conj(log_deriv))
    return moved, multiplier


def _signed_frequencies(grid: int) -> np.ndarray:
    k = np.arange(grid)
    k[k > grid // 2] -= grid
    return k


def _check_nyquist_tail(coeff_table: np.ndarray, grid: int) -> None:
    k = _signed_frequencies(grid)
    band = np.abs(k) > grid // 4
    tail = float(np.max(np.abs(coeff_table[band])))
    if tail > _NYQUIST_TAIL_TOL:
        raise GridSizeError(
            f"coefficient magnitude {tail:.3e} near the Nyquist edge; enlarge the sampling grid"
        )


def _check_unilateral_negative(coeff_table: np.ndarray, grid: int) -> None:
    k = _signed_frequencies(grid)
    band = (k < 0) & (np.abs(k) <= grid // 4)
    worst = float(np.max(np.abs(coeff_table[band])))
    if worst > _NEGATIVE_INDEX_TOL:
        raise NumericsError(
            f"negative-index content {worst:.3e} in a unilateral action; branch assumptions violated"
        )


def _monomial_powers(moved: np.ndarray, w: TruncationWindow) -> np.ndarray:
    """Table P[j, p] = moved_j ** (lo + p), built by cumulative products."""
    grid = moved.shape[0]
    table = np.empty((grid, w.size), dtype=np.complex128)
    table[:, w.pos(0)] = 1.0
    for n in range(1, w.hi + 1):
        table[:, w.pos(n)] = table[:, w.pos(n - 1)] * moved
    if w.lo < 0:
        inv = 1.0 / moved
        for n in range(-1, w.lo - 1, -1):
            table[:, w.pos(n)] = table[:, w.pos(n + 1)] * inv
    return table


def circle_rep_oracle(
    p: RepnParams,
    phi_inv: MobiusElement,
    eta_plus: complex,
    eta_minus: complex,
    F: CoefficientVector,
    grid_size: int | None = None,
) -> CoefficientVector:
    """Representation action computed on the unit circle, independent of the
    generator-exponential route.

    Parameters
    ----------
    phi_inv : MobiusElement
        The automorphism phi_{g^{-1}}; must stay near the identity
        (|beta| <= 0.3) so the principal branches are valid.
    eta_plus, eta_minus : complex
        Exponents of the derivative factor, (lam + mu)/2 and mu/2.
    F : CoefficientVector
        Input coefficients over the window.
    grid_size : int, optional
        Power-of-two sample count; defaults to the smallest power of two
        at least 8x the window size.

    Returns
    -------
    CoefficientVector
        Coefficients of R(g)F over the same window.

    Raises
    ------
    GridSizeError
        If the coefficient tail near the Nyquist edge exceeds 1e-9.
    NumericsError
        If a unilateral input produces negative-index content above 1e-10.
    """
    w = F.window
    if w.kind != p.index_set:
        raise WindowMismatchError("coefficient window does not match the params index set")
    grid = default_grid_size(w) if grid_size is None else int(grid_size)
    if grid < 1 or grid & (grid - 1):
        raise ParameterError("grid size must be a power of two")
    if abs(phi_inv.beta) > _ORACLE_BETA_CAP:
        raise ParameterError(
            f"|beta| = {abs(phi_inv.beta):.3f} too far from the identity for principal branches"
        )
    moved, multiplier = _circle_factors(phi_inv, eta_plus, eta_minus, grid)
    powers = _monomial_powers(moved, w)
    samples = multiplier * (powers @ F.coeffs)
    table = circle_fft(samples)
    _check_nyquist_tail(table, grid)
    if w.kind == UNILATERAL:
        _check_unilateral_negative(table, grid)
    out = np.array([table[n % grid] for n in w.indices()], dtype=np.complex128)
    return CoefficientVector(w, out)


def circle_rep_matrix(
    p: RepnParams, path: GroupPath, w: TruncationWindow, grid_size: int | None = None
) -> OperatorMatrix:
    """Whole representation matrix over the circle route, one column per monomial."""
    if w.kind != p.index_set:
        raise WindowMismatchError("window kind does not match params index set")
    grid = default_grid_size(w) if grid_size is None else int(grid_size)
    if grid < 1 or grid & (grid - 1):
        raise ParameterError("grid size must be a power of two")
    phi_inv = mobius.inverse(mobius.path_to_mobius(path))
    if abs(phi_inv.beta) > _ORACLE_BETA_CAP:
        raise ParameterError("path moves too far from the identity for the circle route")
    eta_plus = (p.lam + p.mu) / 2.0
    eta_minus = p.mu / 2.0
    moved, multiplier = _circle_factors(phi_inv, eta_plus, eta_minus, grid)
    powers = _monomial_powers(moved, w)
    samples = multiplier[:, None] * powers
    table = np.fft.fft(samples, axis=0) / grid
    _check_nyquist_tail(table, grid)
    if w.kind == UNILATERAL:
        _check_unilateral_negative(table, grid)
    rows = np.array([n % grid for n in w.indices()])
    return OperatorMatrix(table[rows, :], w, MONOMIAL)
