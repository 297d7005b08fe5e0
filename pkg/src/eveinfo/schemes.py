"""Protocol schemes: basis sets, error-detection profiles and basis averages."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from eveinfo.bellcore import (
    BELL_LABELS,
    Basis,
    BellDiagonal,
    BellLabel,
    bell_state,
    parallel_probability,
)
from eveinfo.rng import make_rng

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


class SchemeKind(enum.Enum):
    BB84 = "bb84"
    SIX_STATE = "six-state"
    SPHERE = "sphere"
    PLANE = "plane"
    NPAB_BB84 = "npab-bb84"
    NPAB_SIX_STATE = "npab-six-state"


@dataclass(frozen=True)
class Scheme:
    """A QKD protocol variant.

    ``m`` is the basis count of the multiple-basis variants. ``m=None`` on a
    multiple-basis variant denotes the continuum limit, which has a detection
    profile but cannot be simulated.
    """

    kind: SchemeKind
    m: int | None = None

    def __post_init__(self):
        if self.is_multibasis:
            if self.m is not None and (int(self.m) != self.m or self.m < 2):
                raise ValueError(f"multiple-basis scheme needs m >= 2, got {self.m}")
        elif self.m is not None:
            raise ValueError(f"{self.kind.value} takes no basis count")

    @classmethod
    def parse(cls, text: str) -> Scheme:
        """Parse ``bb84``, ``six-state``, ``npab-bb84``, ``npab-six-state``,
        ``sphere``, ``sphere:12``, ``plane`` or ``plane:4``."""
        name, _, count = text.strip().lower().replace("_", "-").partition(":")
        aliases = {"sixstate": "six-state", "six": "six-state",
                   "npab-sixstate": "npab-six-state", "npab-six": "npab-six-state"}
        try:
            kind = SchemeKind(aliases.get(name, name))
        except ValueError:
            raise ValueError(f"unknown scheme: {text!r}") from None
        return cls(kind, int(count) if count else None)

    def __str__(self):
        return self.kind.value if self.m is None else f"{self.kind.value}:{self.m}"

    @property
    def is_npab(self) -> bool:
        return self.kind in (SchemeKind.NPAB_BB84, SchemeKind.NPAB_SIX_STATE)

    @property
    def is_multibasis(self) -> bool:
        return self.kind in (SchemeKind.SPHERE, SchemeKind.PLANE)

    @property
    def underlying(self) -> Scheme:
        """The announced-basis scheme an NPAB variant is built on (else self)."""
        if self.kind is SchemeKind.NPAB_BB84:
            return BB84
        if self.kind is SchemeKind.NPAB_SIX_STATE:
            return SIX_STATE
        return self

    def bases(self) -> list[Basis]:
        """The finite basis set Alice and Bob choose from uniformly."""
        kind = self.underlying.kind
        if kind is SchemeKind.BB84:
            return [Basis.Z, Basis.X]
        if kind is SchemeKind.SIX_STATE:
            return [Basis.Z, Basis.X, Basis.Y]
        if self.m is None:
            raise ValueError(f"continuum scheme {self} has no finite basis set")
        if kind is SchemeKind.PLANE:
            return plane_bases(self.m)
        return sphere_bases(self.m)


BB84 = Scheme(SchemeKind.BB84)
SIX_STATE = Scheme(SchemeKind.SIX_STATE)
NPAB_BB84 = Scheme(SchemeKind.NPAB_BB84)
NPAB_SIX_STATE = Scheme(SchemeKind.NPAB_SIX_STATE)


def plane_bases(m: int) -> list[Basis]:
    """``m`` equally spaced directions in the z-x plane, theta = k*pi/m."""
    return [Basis(k * math.pi / m, 0.0) for k in range(m)]


def sphere_bases(m: int) -> list[Basis]:
    """``m`` near-uniform directions on the upper hemisphere (Fibonacci lattice).

    Opposite directions define the same measurement, so a hemisphere suffices.
    """
    out = []
    for k in range(m):
        z = 1.0 - (k + 0.5) / m
        out.append(Basis(math.acos(z), k * GOLDEN_ANGLE))
    return out


@dataclass(frozen=True)
class DetectionProfile:
    """Per-Bell-state probability of being flagged as an error (BellLabel order)."""

    q: tuple[float, float, float, float]

    def __post_init__(self):
        q = tuple(float(x) for x in self.q)
        if len(q) != 4 or any(not 0.0 <= x <= 1.0 for x in q):
            raise ValueError(f"detection probabilities must be 4 values in [0, 1]: {q}")
        object.__setattr__(self, "q", q)

    def __getitem__(self, label: BellLabel) -> float:
        return self.q[label]


class EnsembleKind(enum.Enum):
    SPHERE = "sphere"
    PLANE = "plane"
    FINITE = "finite"


@dataclass(frozen=True)
class BasisEnsemble:
    kind: EnsembleKind
    bases: tuple[Basis, ...] = ()

    def __post_init__(self):
        if self.kind is EnsembleKind.FINITE:
            if not self.bases:
                raise ValueError("finite ensemble needs at least one basis")
            object.__setattr__(self, "bases", tuple(self.bases))

    @classmethod
    def finite(cls, bases: Sequence[Basis]) -> BasisEnsemble:
        return cls(EnsembleKind.FINITE, tuple(bases))


SPHERE_UNIFORM = BasisEnsemble(EnsembleKind.SPHERE)
PLANE_UNIFORM_ZX = BasisEnsemble(EnsembleKind.PLANE)

_BB84_PROFILE = DetectionProfile((1.0, 0.5, 0.5, 0.0))
_SIX_STATE_PROFILE = DetectionProfile((2 / 3, 2 / 3, 2 / 3, 0.0))


def detection_profile(scheme: Scheme) -> DetectionProfile:
    """Error-detection probabilities ``(q_Phi+, q_Psi+, q_Phi-, q_Psi-)``.

    BB84 and six-state use the fixed fractions from the Z/X(/Y) projector
    identities; NPAB variants share their base scheme's profile. Multiple-basis
    schemes average the same-basis parallel probability over their basis set,
    or over the continuum ensemble when ``m`` is None.
    """
    kind = scheme.underlying.kind
    if kind is SchemeKind.BB84:
        return _BB84_PROFILE
    if kind is SchemeKind.SIX_STATE:
        return _SIX_STATE_PROFILE
    if scheme.m is None:
        ensemble = SPHERE_UNIFORM if kind is SchemeKind.SPHERE else PLANE_UNIFORM_ZX
    else:
        ensemble = BasisEnsemble.finite(scheme.bases())
    q = [average_parallel_probability(label, ensemble) for label in BELL_LABELS]
    q[BellLabel.PSI_MINUS] = 0.0  # exact: the singlet is anti-parallel in every basis
    return DetectionProfile(tuple(min(1.0, max(0.0, x)) for x in q))


def expected_error_rate(source: BellDiagonal, profile: DetectionProfile) -> float:
    return math.fsum(p * q for p, q in zip(source.probs, profile.q))


def composition_error_rate(counts, profile: DetectionProfile) -> float:
    """Error rate of a label string with Bell-label occupation ``counts``.

    ``counts`` carries ``a, b, c, d`` = numbers of Psi-, Phi-, Psi+, Phi+.
    """
    n = counts.a + counts.b + counts.c + counts.d
    if n <= 0:
        raise ValueError("composition has no pairs")
    q = profile.q
    return (counts.a * q[BellLabel.PSI_MINUS] + counts.b * q[BellLabel.PHI_MINUS]
            + counts.c * q[BellLabel.PSI_PLUS] + counts.d * q[BellLabel.PHI_PLUS]) / n


def sift_probability(scheme: Scheme) -> float:
    """Chance that independently chosen bases match (1 when bases are pre-shared)."""
    if scheme.is_npab:
        return 1.0
    return 1.0 / len(scheme.bases())


class AverageEstimate(NamedTuple):
    value: float
    error: float


def basis_average(label: BellLabel, ensemble: BasisEnsemble, method: str = "quadrature", *,
                  nodes: int = 32, samples: int = 100_000, seed: int = 0) -> AverageEstimate:
    """Ensemble average of the same-basis parallel probability, with an error estimate.

    ``quadrature`` reports ``|Q(nodes) - Q(2*nodes)|`` as its error and returns
    the refined value; ``monte_carlo`` reports the standard error of the mean.
    The sphere measure is dOmega/4pi; the plane measure is uniform theta on
    [0, pi) at phi = 0.
    """
    label = BellLabel(label)
    if method == "quadrature":
        if nodes < 8:
            raise ValueError("quadrature needs at least 8 nodes")
        coarse = _quadrature(label, ensemble, nodes)
        fine = _quadrature(label, ensemble, 2 * nodes)
        return AverageEstimate(fine, abs(fine - coarse))
    if method in ("monte_carlo", "mc"):
        if samples < 1:
            raise ValueError("monte carlo needs at least one sample")
        values = _sample_values(label, ensemble, samples, seed)
        err = float(values.std(ddof=1) / math.sqrt(samples)) if samples > 1 else math.inf
        return AverageEstimate(float(values.mean()), err)
    raise ValueError(f"unknown averaging method: {method!r}")


def average_parallel_probability(label: BellLabel, ensemble: BasisEnsemble,
                                 method: str = "quadrature", **params) -> float:
    return basis_average(label, ensemble, method, **params).value


def _quadrature(label, ensemble, nodes):
    if ensemble.kind is EnsembleKind.FINITE:
        return math.fsum(parallel_probability(label, b) for b in ensemble.bases) / len(ensemble.bases)
    if ensemble.kind is EnsembleKind.PLANE:
        # Equally spaced nodes are exact for trigonometric polynomials of degree < nodes.
        theta = np.arange(nodes) * (math.pi / nodes)
        return float(parallel_probability_grid(label, theta, np.zeros(nodes)).mean())
    # Gauss-Legendre in cos(theta) times the periodic rule in phi.
    u, w = np.polynomial.legendre.leggauss(nodes)
    phi = np.arange(2 * nodes) * (math.pi / nodes)
    uu, pp = np.meshgrid(u, phi, indexing="ij")
    vals = parallel_probability_grid(label, np.arccos(uu.ravel()), pp.ravel()).reshape(uu.shape)
    return float(w @ vals.mean(axis=1) / 2.0)


def _sample_values(label, ensemble, samples, seed):
    rng = make_rng(seed)
    if ensemble.kind is EnsembleKind.FINITE:
        idx = rng.integers(len(ensemble.bases), size=samples)
        table = np.array([parallel_probability(label, b) for b in ensemble.bases])
        return table[idx]
    if ensemble.kind is EnsembleKind.PLANE:
        theta = rng.uniform(0.0, math.pi, samples)
        return parallel_probability_grid(label, theta, np.zeros(samples))
    u = rng.uniform(-1.0, 1.0, samples)
    phi = rng.uniform(0.0, 2 * math.pi, samples)
    return parallel_probability_grid(label, np.arccos(u), phi)


def parallel_probability_grid(label: BellLabel, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Vectorized ``parallel_probability`` over arrays of directions.

    Same projector arithmetic as the scalar version: project the Bell vector
    onto |n+ n+> and |n- n->.
    """
    psi = bell_state(label)
    c = np.cos(np.asarray(theta) / 2)
    s = np.sin(np.asarray(theta) / 2)
    e = np.exp(1j * np.asarray(phi))
    plus = np.stack([c + 0j, e * s], axis=-1)
    minus = np.stack([s + 0j, -e * c], axis=-1)
    total = np.zeros(np.shape(c))
    for u in (plus, minus):
        prod = np.einsum("...i,...j->...ij", u, u).reshape(*u.shape[:-1], 4)
        amp = prod.conj() @ psi
        total += amp.real ** 2 + amp.imag ** 2
    return total
