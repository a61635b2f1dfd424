"""The disc-automorphism group, its flow-path cover, and pointwise data.

Elements are ``phi_{alpha,beta}(z) = alpha (z - beta) / (1 - conj(beta) z)``
with ``|alpha| = 1`` and ``|beta| < 1``.  Elements of the simply connected
cover are represented as short flow paths in the real generators h, L, M;
fractional powers of derivatives stay on principal branches because every
path starts at the identity and each segment is short.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import ParameterError, RecoveryError

GENERATORS = ("h", "L", "M")
SEGMENT_TIME_CAP = 0.5

_ALPHA_TOL = 1e-12
_BETA_TOL = 1e-12
_RECOVERY_TOL = 1e-10


@dataclass(frozen=True)
class MobiusElement:
    alpha: complex
    beta: complex

    def __post_init__(self):
        a = complex(self.alpha)
        b = complex(self.beta)
        if abs(abs(a) - 1.0) > _ALPHA_TOL:
            raise ParameterError(f"alpha must have unit modulus, got |alpha| = {abs(a)!r}")
        if abs(b) > 1.0 - _BETA_TOL:
            raise ParameterError(f"beta must lie strictly inside the unit disc, got |beta| = {abs(b)!r}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @classmethod
    def identity(cls) -> "MobiusElement":
        return cls(1.0 + 0j, 0j)


def apply(phi: MobiusElement, z: complex) -> complex:
    """phi(z) = alpha (z - beta) / (1 - conj(beta) z)."""
    return phi.alpha * (z - phi.beta) / (1.0 - phi.beta.conjugate() * z)


def derivative(phi: MobiusElement, z: complex) -> complex:
    """phi'(z) = alpha (1 - |beta|^2) / (1 - conj(beta) z)^2."""
    d = 1.0 - phi.beta.conjugate() * z
    return phi.alpha * (1.0 - abs(phi.beta) ** 2) / (d * d)


def inverse(phi: MobiusElement) -> MobiusElement:
    """The element psi with phi(psi(z)) = z, namely (conj(alpha), -alpha beta)."""
    return MobiusElement(phi.alpha.conjugate(), -phi.alpha * phi.beta)


def star(phi: MobiusElement) -> MobiusElement:
    """The twist z -> conj(phi(conj z)), whose parameters are (conj alpha, conj beta)."""
    return MobiusElement(phi.alpha.conjugate(), phi.beta.conjugate())


_PROBES = (0j, 0.5 + 0j, 0.5j)


def compose(phi: MobiusElement, psi: MobiusElement) -> MobiusElement:
    """The element chi with chi(z) = phi(psi(z)).

    beta is recovered as the point chi maps to 0 (through the closed-form
    inverses); alpha from one further evaluation at a probe kept away from
    beta.  A recovered alpha off the unit circle beyond 1e-10 is an error.
    """
    beta = apply(inverse(psi), apply(inverse(phi), 0j))
    z1 = max(_PROBES, key=lambda z: abs(z - beta))
    w = apply(phi, apply(psi, z1))
    alpha = w * (1.0 - beta.conjugate() * z1) / (z1 - beta)
    mod = abs(alpha)
    if abs(mod - 1.0) > _RECOVERY_TOL:
        raise RecoveryError(f"recovered |alpha| = {mod!r} is not unimodular")
    return MobiusElement(alpha / mod, beta)


def flow(gen: str, t: float) -> MobiusElement:
    """One-parameter flows of the generators.

    exp(t h) rotates by e^{2it}; exp(t L) and exp(t M) translate along the
    real and imaginary axes with beta = -tanh t and -i tanh t.
    """
    if gen not in GENERATORS:
        raise ParameterError(f"unknown generator {gen!r}")
    t = float(t)
    if abs(t) > SEGMENT_TIME_CAP:
        raise ParameterError(
            f"|t| = {abs(t)} exceeds the per-segment cap {SEGMENT_TIME_CAP}; split the path"
        )
    if gen == "h":
        return MobiusElement(cmath.exp(2j * t), 0j)
    b = math.tanh(t)
    if gen == "L":
        return MobiusElement(1.0 + 0j, complex(-b))
    return MobiusElement(1.0 + 0j, -1j * b)


@dataclass(frozen=True)
class GroupPath:
    """Cover element as an ordered tuple of (generator, time) flow segments."""

    segments: tuple = ()

    def __post_init__(self):
        segs = []
        for seg in self.segments:
            gen, t = seg
            if gen not in GENERATORS:
                raise ParameterError(f"unknown generator {gen!r} in path")
            t = float(t)
            if not math.isfinite(t) or abs(t) > SEGMENT_TIME_CAP:
                raise ParameterError(f"segment time {t} outside [-{SEGMENT_TIME_CAP}, {SEGMENT_TIME_CAP}]")
            segs.append((gen, t))
        object.__setattr__(self, "segments", tuple(segs))

    @classmethod
    def parse(cls, text: str) -> "GroupPath":
        """Parse comma-separated ``gen:time`` tokens, e.g. ``L:0.1,M:-0.05,h:0.3``.

        Blank text or ``id`` is the empty path.
        """
        text = text.strip()
        if not text or text == "id":
            return cls(())
        segs = []
        for token in text.split(","):
            parts = token.strip().split(":")
            if len(parts) != 2:
                raise ParameterError(f"malformed path segment {token!r}; expected gen:time")
            segs.append((parts[0].strip(), float(parts[1])))
        return cls(tuple(segs))

    def __add__(self, other: "GroupPath") -> "GroupPath":
        return GroupPath(self.segments + other.segments)

    def __len__(self) -> int:
        return len(self.segments)

    def describe(self) -> str:
        if not self.segments:
            return "id"
        return ",".join(f"{g}:{t:g}" for g, t in self.segments)


def path_to_mobius(p: GroupPath) -> MobiusElement:
    """Project a flow path to the automorphism it covers (left-to-right)."""
    out = MobiusElement.identity()
    for gen, t in p.segments:
        out = compose(out, flow(gen, t))
    return out


_STAR_SIGNS = {"h": -1.0, "L": 1.0, "M": -1.0}


def star_path(p: GroupPath) -> GroupPath:
    """Segment-wise lift of the conjugation twist: h and M reverse, L is fixed."""
    return GroupPath(tuple((g, _STAR_SIGNS[g] * t) for g, t in p.segments))
