"""Hamiltonian, flow and Taub plane of the axisymmetric Bianchi IX model.

All functions use plain arithmetic so they accept floats, numpy arrays
(last axis = (A, B, P_A, P_B)) or exact Fractions alike.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import DomainError


@dataclass(frozen=True)
class ModelParams:
    """Cosmological constant and energy level."""

    lam: Fraction
    energy: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lam", Fraction(self.lam))
        object.__setattr__(self, "energy", Fraction(self.energy))

    @property
    def discriminant(self):
        """Discriminant of C1 = 4 lam x^3 - 3x + 2E (needs lam != 0)."""
        lam, E = self.lam, self.energy
        if lam == 0:
            raise DomainError("discriminant undefined for lambda = 0")
        return -27 * (4 * E * E * lam - 1) / (16 * lam ** 3)

    def flags(self):
        """Admissibility for the Galois-side constructions."""
        out = {"lambda_nonzero": self.lam != 0, "energy_nonzero": self.energy != 0}
        out["discriminant_nonzero"] = self.lam != 0 and self.discriminant != 0
        return out


@dataclass(frozen=True)
class ModelState:
    A: float
    B: float
    PA: float
    PB: float

    def as_array(self):
        return np.array([self.A, self.B, self.PA, self.PB], dtype=float)

    @classmethod
    def from_array(cls, v):
        return cls(*(float(c) for c in v))

    def __iter__(self):
        return iter((self.A, self.B, self.PA, self.PB))


def _unpack(state):
    if isinstance(state, ModelState):
        return state.A, state.B, state.PA, state.PB
    if isinstance(state, (tuple, list)):
        return tuple(state)
    s = np.asarray(state)
    return s[..., 0], s[..., 1], s[..., 2], s[..., 3]


def _check_b(B):
    if np.any(np.asarray(B) == 0):
        raise DomainError("B = 0 is outside the domain of the Hamiltonian")


def hamiltonian(state, lam):
    """``P_A P_B/(4B) - A P_A^2/(8B^2) + 2A - A^3/(2B^2) - 2 lam A B^2``."""
    A, B, PA, PB = _unpack(state)
    _check_b(B)
    return PA * PB / (4 * B) - A * PA * PA / (8 * B * B) + 2 * A - A ** 3 / (2 * B * B) - 2 * lam * A * B * B


def vector_field(state, lam):
    """Hamilton's equations; returns (A', B', P_A', P_B')."""
    A, B, PA, PB = _unpack(state)
    _check_b(B)
    B2 = B * B
    B3 = B2 * B
    dA = PB / (4 * B) - A * PA / (4 * B2)
    dB = PA / (4 * B)
    dPA = PA * PA / (8 * B2) - 2 + 3 * A * A / (2 * B2) + 2 * lam * B2
    dPB = PA * PB / (4 * B2) - A * PA * PA / (4 * B3) - A ** 3 / B3 + 4 * lam * A * B
    if isinstance(state, ModelState) or isinstance(state, (tuple, list)):
        return (dA, dB, dPA, dPB)
    return np.stack(np.broadcast_arrays(dA, dB, dPA, dPB), axis=-1)


def jacobian(state, lam):
    """Analytic 4x4 Jacobian of :func:`vector_field`."""
    A, B, PA, PB = (float(v) for v in _unpack(state))
    _check_b(B)
    B2, B3, B4 = B * B, B ** 3, B ** 4
    return np.array([
        [-PA / (4 * B2), -PB / (4 * B2) + A * PA / (2 * B3), -A / (4 * B2), 1 / (4 * B)],
        [0.0, -PA / (4 * B2), 1 / (4 * B), 0.0],
        [3 * A / B2, -PA * PA / (4 * B3) - 3 * A * A / B3 + 4 * lam * B, PA / (4 * B2), 0.0],
        [-PA * PA / (4 * B3) - 3 * A * A / B3 + 4 * lam * B,
         -PA * PB / (2 * B3) + 3 * A * PA * PA / (4 * B4) + 3 * A ** 3 / B4 + 4 * lam * A,
         PB / (4 * B2) - A * PA / (2 * B3), PA / (4 * B2)],
    ])


@dataclass
class Linearization:
    matrix: np.ndarray
    eigenvalues: np.ndarray
    real_pair: float
    imaginary_pair: float
    kind: str


def linearize(state, lam, tol=1e-9):
    """Jacobian and eigenvalue classification (saddle-center detection)."""
    J = jacobian(state, float(lam))
    ev = np.linalg.eigvals(J)
    real = sorted(abs(e.real) for e in ev if abs(e.imag) <= tol * max(1.0, abs(e)) and abs(e.real) > tol)
    imag = sorted(abs(e.imag) for e in ev if abs(e.real) <= tol * max(1.0, abs(e)) and abs(e.imag) > tol)
    if len(real) == 2 and len(imag) == 2:
        kind = "saddle-center"
    elif len(imag) == 4:
        kind = "center-center"
    elif len(real) == 4:
        kind = "saddle-saddle"
    else:
        kind = "other"
    return Linearization(J, ev, real[0] if real else 0.0, imag[0] if imag else 0.0, kind)


def _exact_sqrt(q):
    q = Fraction(q)
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def einstein_point(lam):
    """The equilibrium ``A = B = 1/sqrt(4 lam)``, ``P_A = P_B = 0``.

    Exact Fractions are returned when ``4 lam`` is a rational square.
    """
    if lam <= 0:
        raise DomainError("the Einstein point needs lambda > 0")
    if isinstance(lam, (int, Fraction)):
        s = _exact_sqrt(4 * Fraction(lam))
        if s is not None:
            a = 1 / s
            return ModelState(a, a, Fraction(0), Fraction(0))
    a = 1 / math.sqrt(4 * float(lam))
    return ModelState(a, a, 0.0, 0.0)


# ----------------------------------------------------------------------
# Taub plane A = B, P_B = 2 P_A
# ----------------------------------------------------------------------
def taub_state(x, xdot):
    """Embed (x, x') into phase space."""
    return ModelState(x, x, 4 * x * xdot, 8 * x * xdot)


def taub_energy(x, xdot, lam):
    """``6 x x'^2 + 3x/2 - 2 lam x^3`` (= 3y^2/(8x) + ... with y = 4 x x')."""
    if np.any(np.asarray(x) <= 0):
        raise DomainError("Taub energy needs x > 0")
    half3 = Fraction(3, 2) if _exact(x, xdot, lam) else 1.5
    return 6 * x * xdot * xdot + half3 * x - 2 * lam * x ** 3


def gamma_constraint(x, xdot, lam, energy):
    """Residual of the Taub energy level set."""
    if np.any(np.asarray(x) <= 0):
        raise DomainError("gamma constraint needs x > 0")
    return taub_energy(x, xdot, lam) - energy


def taub_acceleration(x, xdot, lam):
    """``x'' = -1/(8x) + lam x/2 - x'^2/(2x)``."""
    return -1 / (8 * x) + lam * x / 2 - xdot * xdot / (2 * x)


def _exact(*vals):
    return all(isinstance(v, (int, Fraction)) for v in vals)


__all__ = ["ModelParams", "ModelState", "Linearization", "hamiltonian", "vector_field", "jacobian",
           "linearize", "einstein_point", "taub_state", "taub_energy", "gamma_constraint",
           "taub_acceleration"]
