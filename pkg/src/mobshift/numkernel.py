"""Dense complex linear-algebra kernels shared by every other module.

Matrices live on an explicit truncation window and carry a basis tag, so
bookkeeping mistakes (mixing windows or bases) fail fast instead of producing
plausible-looking numbers.  Everything is desk scale and dense complex128.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyInteriorError,
    OverflowGuardError,
    ParameterError,
    SingularMatrixError,
    WindowMismatchError,
)

UNILATERAL = "unilateral"
BILATERAL = "bilateral"
MONOMIAL = "monomial"
ORTHONORMAL = "orthonormal"

#: refuse to exponentiate anything whose 1-norm exceeds this
EXP_NORM_BOUND = 1.0e3
#: refuse linear solves with a worse 1-norm condition estimate
COND_LIMIT = 1.0e8

_PADE13_THETA = 5.371920351148152
_PADE13_B = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)


@dataclass(frozen=True)
class TruncationWindow:
    """Finite index range standing in for Z or Z+, with an untrusted margin.

    A unilateral window covers 0..N, a bilateral one -N..N.  ``padding``
    marks how many indices at each end are considered polluted by the
    truncation; interior measurements skip them.
    """

    kind: str
    N: int
    padding: int

    def __post_init__(self):
        if self.kind not in (UNILATERAL, BILATERAL):
            raise ParameterError(f"unknown window kind {self.kind!r}")
        if self.N < 1:
            raise ParameterError("window size N must be at least 1")
        if not 0 <= self.padding < self.N:
            raise ParameterError("padding must satisfy 0 <= padding < N")

    @classmethod
    def unilateral(cls, N: int, padding: int | None = None) -> "TruncationWindow":
        return cls(UNILATERAL, N, N // 4 if padding is None else padding)

    @classmethod
    def bilateral(cls, N: int, padding: int | None = None) -> "TruncationWindow":
        return cls(BILATERAL, N, N // 4 if padding is None else padding)

    @property
    def lo(self) -> int:
        return 0 if self.kind == UNILATERAL else -self.N

    @property
    def hi(self) -> int:
        return self.N

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def indices(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    def contains(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def pos(self, n: int) -> int:
        """Array position of the basis index n."""
        if not self.contains(n):
            raise ParameterError(f"index {n} outside window [{self.lo}, {self.hi}]")
        return int(n - self.lo)

    def interior_positions(self) -> np.ndarray:
        """Array positions at distance >= padding from both window ends."""
        return np.arange(self.padding, self.size - self.padding)

    def interior_indices(self) -> np.ndarray:
        return self.interior_positions() + self.lo

    def with_padding(self, padding: int) -> "TruncationWindow":
        return TruncationWindow(self.kind, self.N, padding)

    def same_lattice(self, other: "TruncationWindow") -> bool:
        return self.kind == other.kind and self.N == other.N


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Immutable square matrix over a window's basis indices."""

    data: np.ndarray
    window: TruncationWindow
    basis: str = MONOMIAL

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.complex128)
        if arr.shape != (self.window.size, self.window.size):
            raise WindowMismatchError(
                f"matrix shape {arr.shape} does not match window size {self.window.size}"
            )
        if not np.isfinite(arr).all():
            raise ParameterError("non-finite matrix entries")
        if self.basis not in (MONOMIAL, ORTHONORMAL):
            raise ParameterError(f"unknown basis tag {self.basis!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    # -- constructors ----------------------------------------------------

    @classmethod
    def identity(cls, window: TruncationWindow, basis: str = MONOMIAL) -> "OperatorMatrix":
        return cls(np.eye(window.size, dtype=np.complex128), window, basis)

    @classmethod
    def zeros(cls, window: TruncationWindow, basis: str = MONOMIAL) -> "OperatorMatrix":
        return cls(np.zeros((window.size, window.size), dtype=np.complex128), window, basis)

    @classmethod
    def from_diagonal(cls, values, window: TruncationWindow, basis: str = MONOMIAL) -> "OperatorMatrix":
        vals = np.asarray(values, dtype=np.complex128)
        if vals.shape != (window.size,):
            raise WindowMismatchError("diagonal length does not match window size")
        return cls(np.diag(vals), window, basis)

    # -- bookkeeping -----------------------------------------------------

    def _require_compatible(self, other: "OperatorMatrix") -> None:
        if not self.window.same_lattice(other.window) or self.basis != other.basis:
            raise WindowMismatchError("operands live on different windows or bases")

    def entry(self, row: int, col: int) -> complex:
        """Entry addressed by basis indices (not array positions)."""
        return complex(self.data[self.window.pos(row), self.window.pos(col)])

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._require_compatible(other)
        return OperatorMatrix(self.data + other.data, self.window, self.basis)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._require_compatible(other)
        return OperatorMatrix(self.data - other.data, self.window, self.basis)

    def __neg__(self) -> "OperatorMatrix":
        return OperatorMatrix(-self.data, self.window, self.basis)

    def __mul__(self, scalar) -> "OperatorMatrix":
        return OperatorMatrix(self.data * complex(scalar), self.window, self.basis)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "OperatorMatrix":
        return OperatorMatrix(self.data / complex(scalar), self.window, self.basis)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._require_compatible(other)
        return OperatorMatrix(self.data @ other.data, self.window, self.basis)

    @property
    def H(self) -> "OperatorMatrix":
        """Conjugate transpose."""
        return OperatorMatrix(self.data.conj().T, self.window, self.basis)

    @property
    def norm_fro(self) -> float:
        return float(np.linalg.norm(self.data))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.data)))


def mat_exp(A: OperatorMatrix, *, norm_bound: float = EXP_NORM_BOUND) -> OperatorMatrix:
    """e^A by scaling and squaring around a fixed order-13 diagonal Pade kernel.

    The squaring count comes from the 1-norm; diagonal inputs round-trip to
    machine accuracy.  Inputs with 1-norm beyond ``norm_bound`` are refused.
    """
    a = np.asarray(A.data)
    n1 = float(np.linalg.norm(a, 1))
    if n1 > norm_bound:
        raise OverflowGuardError(
            f"matrix 1-norm {n1:.3e} exceeds the exponential bound {norm_bound:.1e}"
        )
    diag = np.diagonal(a)
    if np.count_nonzero(a - np.diag(diag)) == 0:
        out = np.exp(diag)
        if not np.isfinite(out).all():
            raise OverflowGuardError("overflow in diagonal exponential")
        return OperatorMatrix(np.diag(out), A.window, A.basis)
    squarings = 0
    if n1 > _PADE13_THETA:
        squarings = int(math.ceil(math.log2(n1 / _PADE13_THETA)))
        a = a / (2.0 ** squarings)
    ident = np.eye(a.shape[0], dtype=np.complex128)
    b = _PADE13_B
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a2 @ a4
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident
    f = np.linalg.solve(v - u, v + u)
    for _ in range(squarings):
        f = f @ f
    if not np.isfinite(f).all():
        raise OverflowGuardError("overflow while squaring the exponential")
    return OperatorMatrix(f, A.window, A.basis)


def solve(A: OperatorMatrix, B: OperatorMatrix, *, cond_limit: float = COND_LIMIT) -> OperatorMatrix:
    """X with A X = B, refused when the 1-norm condition estimate is untrustworthy."""
    A._require_compatible(B)
    a = np.asarray(A.data)
    with np.errstate(all="ignore"):
        try:
            inv = np.linalg.inv(a)
        except np.linalg.LinAlgError as exc:
            raise SingularMatrixError(math.inf, "matrix is singular to machine precision") from exc
        estimate = float(np.linalg.norm(a, 1)) * float(np.linalg.norm(inv, 1))
    if not estimate < cond_limit:
        raise SingularMatrixError(estimate)
    x = np.linalg.solve(a, B.data)
    return OperatorMatrix(x, A.window, A.basis)


def _interior_block(A: OperatorMatrix, w: TruncationWindow) -> np.ndarray:
    if not A.window.same_lattice(w):
        raise WindowMismatchError("matrix window does not match the measurement window")
    p = w.interior_positions()
    if p.size == 0:
        raise EmptyInteriorError(f"padding {w.padding} leaves no interior in a size-{w.size} window")
    return A.data[np.ix_(p, p)]


def interior_norm(A: OperatorMatrix, w: TruncationWindow) -> float:
    """Frobenius norm of the sub-block with interior row AND column indices."""
    return float(np.linalg.norm(_interior_block(A, w)))


def interior_max(A: OperatorMatrix, w: TruncationWindow) -> float:
    """Largest entry magnitude over the interior sub-block."""
    return float(np.max(np.abs(_interior_block(A, w))))


def _require_power_of_two(n: int) -> None:
    if n < 1 or n & (n - 1):
        raise ParameterError(f"sample count {n} is not a power of two")


def circle_fft(samples) -> np.ndarray:
    """Fourier coefficients of uniform unit-circle samples.

    Normalized so that sampling e^{ik theta} puts 1 at coefficient k (mod the
    grid length); negative frequencies wrap to the top half of the array.
    """
    s = np.asarray(samples, dtype=np.complex128)
    if s.ndim != 1:
        raise ParameterError("samples must be one-dimensional")
    _require_power_of_two(s.shape[0])
    return np.fft.fft(s) / s.shape[0]


def circle_synthesis(coeffs) -> np.ndarray:
    """Inverse of circle_fft: rebuild the circle samples from coefficients."""
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.ndim != 1:
        raise ParameterError("coefficients must be one-dimensional")
    _require_power_of_two(c.shape[0])
    return np.fft.ifft(c) * c.shape[0]
