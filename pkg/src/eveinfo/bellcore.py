"""Two-qubit state and measurement arithmetic for Bell states.

States are plain complex numpy vectors in the computational product basis
``|00>, |01>, |10>, |11>`` (first qubit is Alice's). Everything here is exact
projector arithmetic; no sampling.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

SQRT1_2 = 1.0 / math.sqrt(2.0)
NORM_TOL = 1e-12


class BellLabel(enum.IntEnum):
    """The four Bell states, with their two-classical-bit encoding."""

    PHI_PLUS = 0
    PSI_PLUS = 1
    PHI_MINUS = 2
    PSI_MINUS = 3

    @property
    def bit_pair(self) -> tuple[int, int]:
        return _BIT_PAIRS[self]

    @classmethod
    def from_bits(cls, bits: tuple[int, int]) -> BellLabel:
        for label, pair in _BIT_PAIRS.items():
            if pair == tuple(bits):
                return label
        raise ValueError(f"not a bit pair: {bits!r}")

    @classmethod
    def parse(cls, name: str) -> BellLabel:
        """Accept ``PhiPlus``, ``phi+``, ``PHI_PLUS`` and similar spellings."""
        key = name.strip().lower().replace("+", "plus")
        if key.endswith("-"):
            key = key[:-1] + "minus"
        key = key.replace("-", "").replace("_", "").replace(" ", "")
        for label in cls:
            if label.name.lower().replace("_", "") == key:
                return label
        raise ValueError(f"unknown Bell label: {name!r}")


# Phi+ = 00, Psi+ = 01, Phi- = 10, Psi- = 11 (tilde bits).
_BIT_PAIRS = {
    BellLabel.PHI_PLUS: (0, 0),
    BellLabel.PSI_PLUS: (0, 1),
    BellLabel.PHI_MINUS: (1, 0),
    BellLabel.PSI_MINUS: (1, 1),
}

BELL_LABELS: tuple[BellLabel, ...] = tuple(BellLabel)

_BELL_VECTORS = {
    BellLabel.PHI_PLUS: np.array([SQRT1_2, 0, 0, SQRT1_2], dtype=complex),
    BellLabel.PSI_PLUS: np.array([0, SQRT1_2, SQRT1_2, 0], dtype=complex),
    BellLabel.PHI_MINUS: np.array([SQRT1_2, 0, 0, -SQRT1_2], dtype=complex),
    BellLabel.PSI_MINUS: np.array([0, SQRT1_2, -SQRT1_2, 0], dtype=complex),
}

_CANONICAL = {
    "Z": (0.0, 0.0),
    "X": (math.pi / 2, 0.0),
    "Y": (math.pi / 2, math.pi / 2),
}


@dataclass(frozen=True)
class Basis:
    """Measurement direction on the Bloch sphere.

    ``theta`` is the polar angle in [0, pi], ``phi`` the azimuth, reduced to
    [0, 2pi). ``tag`` names one of the canonical bases Z, X, Y and must agree
    with the angles when given.
    """

    theta: float
    phi: float = 0.0
    tag: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta out of [0, pi]: {self.theta}")
        object.__setattr__(self, "phi", float(self.phi) % (2 * math.pi))
        if self.tag is not None:
            if self.tag not in _CANONICAL:
                raise ValueError(f"unknown basis tag: {self.tag!r}")
            theta, phi = _CANONICAL[self.tag]
            if not (math.isclose(self.theta, theta, abs_tol=1e-12)
                    and math.isclose(self.phi, phi, abs_tol=1e-12)):
                raise ValueError(f"angles inconsistent with tag {self.tag}")

    @classmethod
    def canonical(cls, tag: str) -> Basis:
        theta, phi = _CANONICAL[tag]
        return cls(theta, phi, tag)

    @classmethod
    def from_vector(cls, v) -> Basis:
        x, y, z = np.asarray(v, dtype=float) / np.linalg.norm(v)
        return cls(math.acos(max(-1.0, min(1.0, z))), math.atan2(y, x))

    @property
    def vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])

    def antipode(self) -> Basis:
        """Opposite direction; same measurement with the outcomes swapped."""
        return Basis(math.pi - self.theta, self.phi + math.pi)

    def __repr__(self):
        if self.tag:
            return f"Basis.{self.tag}"
        return f"Basis(theta={self.theta!r}, phi={self.phi!r})"


Basis.Z = Basis.canonical("Z")
Basis.X = Basis.canonical("X")
Basis.Y = Basis.canonical("Y")


@dataclass(frozen=True)
class BellDiagonal:
    """Probability vector over the four Bell labels (index order of BellLabel)."""

    probs: tuple[float, float, float, float]

    def __post_init__(self):
        p = tuple(float(x) for x in self.probs)
        if len(p) != 4:
            raise ValueError("a Bell-diagonal state needs exactly 4 probabilities")
        if any(not math.isfinite(x) or x < 0 for x in p):
            raise ValueError(f"probabilities must be finite and nonnegative: {p}")
        if abs(math.fsum(p) - 1.0) > NORM_TOL:
            raise ValueError(f"probabilities sum to {math.fsum(p)!r}, not 1")
        object.__setattr__(self, "probs", p)

    @classmethod
    def pure(cls, label: BellLabel) -> BellDiagonal:
        return cls(tuple(1.0 if i == label else 0.0 for i in range(4)))

    @classmethod
    def uniform(cls) -> BellDiagonal:
        return cls((0.25, 0.25, 0.25, 0.25))

    def __getitem__(self, label: BellLabel) -> float:
        return self.probs[label]

    def as_array(self) -> np.ndarray:
        return np.array(self.probs)


def bell_state(label: BellLabel) -> np.ndarray:
    """Normalized Bell vector, e.g. Psi- = (|01> - |10>)/sqrt(2)."""
    return _BELL_VECTORS[BellLabel(label)].copy()


def basis_states(basis: Basis) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(|n+>, |n->)`` for the direction of ``basis``.

    |n+> = cos(t/2)|0> + e^{i phi} sin(t/2)|1>
    |n-> = sin(t/2)|0> - e^{i phi} cos(t/2)|1>
    """
    c = math.cos(basis.theta / 2)
    s = math.sin(basis.theta / 2)
    ph = complex(math.cos(basis.phi), math.sin(basis.phi))
    return np.array([c, ph * s]), np.array([s, -ph * c])


def joint_outcome_distribution(label: BellLabel, basis_a: Basis, basis_b: Basis) -> np.ndarray:
    """Probabilities of (+,+), (+,-), (-,+), (-,-) for local measurements.

    Computed as <psi| P_a (x) P_b |psi> with rank-one projectors.
    """
    psi = _BELL_VECTORS[BellLabel(label)]
    a_states = basis_states(basis_a)
    b_states = basis_states(basis_b)
    probs = np.empty(4)
    for i, ua in enumerate(a_states):
        for j, ub in enumerate(b_states):
            amp = np.vdot(np.kron(ua, ub), psi)
            probs[2 * i + j] = amp.real ** 2 + amp.imag ** 2
    return probs


def parallel_probability(label: BellLabel, basis: Basis) -> float:
    """Probability that both parties get equal outcomes in the shared ``basis``."""
    p = joint_outcome_distribution(label, basis, basis)
    return float(p[0] + p[3])


def bell_diagonal_entropy(p: BellDiagonal) -> float:
    """Von Neumann entropy in bits of a Bell-diagonal state (Shannon entropy of p)."""
    if not isinstance(p, BellDiagonal):
        p = BellDiagonal(tuple(p))
    return -math.fsum(x * math.log2(x) for x in p.probs if x > 0) + 0.0
