"""Eve's optimal information on raw bits under coherent attacks.

All logarithms are base 2 and ``0 log 0 = 0``. Per-bit values are the
entropy of the label string divided by ``2N`` (two raw bits per pair).
"""

from __future__ import annotations

import functools
import itertools
import math
import operator
from dataclasses import dataclass

from eveinfo.bellcore import BellLabel
from eveinfo.schemes import (
    DetectionProfile,
    Scheme,
    SchemeKind,
    detection_profile,
)

ENUMERATION_CAP = 512
SIX_STATE_MAX_RATE = 2 / 3
# Slack for comparing float error rates against a window edge.
_RATE_EPS = 1e-12


class NoCompositionInWindow(ValueError):
    """No label composition has an error rate inside the requested window."""


@dataclass(frozen=True)
class CompositionCounts:
    """Occupation numbers of the Bell labels across ``n`` pairs.

    ``a``: Psi-, ``b``: Phi-, ``c``: Psi+, ``d``: Phi+. Counts may be real for
    the continuous relaxation returned by the maximizers.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if min(self.a, self.b, self.c, self.d) < 0:
            raise ValueError(f"counts must be nonnegative: {self}")

    @property
    def n(self):
        return self.a + self.b + self.c + self.d

    def as_tuple(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def by_label(self) -> dict[BellLabel, float]:
        return {BellLabel.PSI_MINUS: self.a, BellLabel.PHI_MINUS: self.b,
                BellLabel.PSI_PLUS: self.c, BellLabel.PHI_PLUS: self.d}


@dataclass(frozen=True)
class BoundResult:
    scheme: Scheme
    d_rate: float
    i_eve_per_bit: float
    i_ab_per_bit: float


def _xlog2x(x: float) -> float:
    return x * math.log2(x) if x > 0 else 0.0


def _check_rate(d_rate: float, upper: float = 1.0) -> float:
    d = float(d_rate)
    if not (0.0 <= d <= upper + _RATE_EPS):
        raise ValueError(f"error rate {d_rate!r} outside [0, {upper:.6g}]")
    return min(d, upper)


def binary_entropy(p: float) -> float:
    return -(_xlog2x(p) + _xlog2x(1.0 - p)) + 0.0


def i_eve_bb84(d_rate: float) -> float:
    """Eve's optimal information per raw bit for BB84: the binary entropy h(D)."""
    return binary_entropy(_check_rate(d_rate))


def i_eve_bb84_expanded(d_rate: float) -> float:
    """Unsimplified BB84 bound: per-pair entropy of the maximizing composition over 2.

    -(1/2)[(1-D)^2 log (1-D)^2 + 2(D-D^2) log (D-D^2) + D^2 log D^2]
    """
    d = _check_rate(d_rate)
    return -0.5 * (_xlog2x((1 - d) ** 2) + 2 * _xlog2x(d - d * d) + _xlog2x(d * d)) + 0.0


def i_eve_six_state(d_rate: float) -> float:
    """Six-state bound, defined for D in [0, 2/3]."""
    d = _check_rate(d_rate, SIX_STATE_MAX_RATE)
    rest = 1.0 - 1.5 * d
    flagged = 1.5 * d * math.log2(d / 2) if d > 0 else 0.0
    return -0.5 * (_xlog2x(rest) + flagged) + 0.0


def i_ab(d_rate: float) -> float:
    """Alice-Bob mutual information per sifted bit, 1 - h(D)."""
    d = _check_rate(d_rate)
    return 1.0 + _xlog2x(d) + _xlog2x(1.0 - d)


def maximizer_bb84(n: float, d_rate: float) -> CompositionCounts:
    """Composition maximizing the multinomial under the BB84 rate constraint (relaxed)."""
    d = _check_rate(d_rate)
    return CompositionCounts(n * (1 - d) ** 2, n * (d - d * d), n * (d - d * d), n * d * d)


def maximizer_six_state(n: float, d_rate: float) -> CompositionCounts:
    d = _check_rate(d_rate, SIX_STATE_MAX_RATE)
    flagged = n * d / 2
    return CompositionCounts(max(0.0, n * (1 - 1.5 * d)), flagged, flagged, flagged)


def bound(scheme: Scheme, d_rate: float) -> BoundResult:
    return BoundResult(scheme, float(d_rate), asymptotic_log_omega_per_bit(scheme, d_rate), i_ab(d_rate))


def asymptotic_log_omega_per_bit(scheme: Scheme, d_rate: float) -> float:
    """Large-N limit of log(Omega)/(2N) for BB84, six-state and their NPAB variants."""
    base = scheme.underlying.kind
    if base is SchemeKind.BB84:
        return i_eve_bb84(d_rate)
    if base is SchemeKind.SIX_STATE:
        return i_eve_six_state(d_rate)
    raise ValueError(
        f"no closed form registered for {scheme}; pass bb84 or six-state explicitly")


@functools.lru_cache(maxsize=8)
def _factorials(n: int) -> tuple[int, ...]:
    return tuple(itertools.accumulate(range(1, n + 1), operator.mul, initial=1))


def multinomial(n: int, counts) -> int:
    """Exact ``n! / prod(k!)``."""
    if sum(counts) != n:
        raise ValueError("counts do not sum to n")
    fact = _factorials(n)
    denom = 1
    for k in counts:
        denom *= fact[k]
    return fact[n] // denom


def log2_int(x: int) -> float:
    """log2 of an arbitrarily large positive integer without float overflow."""
    if x <= 0:
        raise ValueError("log of a non-positive integer")
    shift = max(0, x.bit_length() - 64)
    return shift + math.log2(x >> shift)


def compositions_in_window(n: int, profile: DetectionProfile, d_rate: float, tolerance: float):
    """Yield integer compositions ``(a, b, c, d)`` of n with rate within tolerance of d_rate."""
    q = profile.q
    qa, qb, qc, qd = (q[BellLabel.PSI_MINUS], q[BellLabel.PHI_MINUS],
                      q[BellLabel.PSI_PLUS], q[BellLabel.PHI_PLUS])
    lo = (d_rate - tolerance - _RATE_EPS) * n
    hi = (d_rate + tolerance + _RATE_EPS) * n
    slope = qd - qa
    for b in range(n + 1):
        for c in range(n + 1 - b):
            free = n - b - c
            base = free * qa + b * qb + c * qc  # flagged weight with d = 0
            if slope == 0:
                if lo <= base <= hi:
                    d_range = range(free + 1)
                else:
                    continue
            else:
                x1, x2 = (lo - base) / slope, (hi - base) / slope
                if x1 > x2:
                    x1, x2 = x2, x1
                d_range = range(max(0, math.ceil(x1 - 1e-9)), min(free, math.floor(x2 + 1e-9)) + 1)
            for d in d_range:
                if lo <= base + d * slope <= hi:
                    yield free - d, b, c, d


def log_omega_exact(n: int, profile: DetectionProfile | Scheme, d_rate: float,
                    tolerance: float | None = None) -> float:
    """log2 of the number of label strings whose error rate is within tolerance of d_rate.

    Sums the exact multinomials over the window ``[D - tol, D + tol]``; the
    default tolerance is ``1/(2n)``.

    Raises:
        NoCompositionInWindow: the window contains no composition of ``n``.
    """
    if isinstance(profile, Scheme):
        profile = detection_profile(profile)
    if int(n) != n or not 1 <= n <= ENUMERATION_CAP:
        raise ValueError(f"n must be an integer in [1, {ENUMERATION_CAP}], got {n}")
    n = int(n)
    if tolerance is None:
        tolerance = 1.0 / (2 * n)
    if tolerance < 0:
        raise ValueError("tolerance must be nonnegative")
    total = sum(multinomial(n, comp) for comp in compositions_in_window(n, profile, d_rate, tolerance))
    if total == 0:
        raise NoCompositionInWindow(
            f"no composition of n={n} has error rate within {tolerance:g} of {d_rate:g}")
    return log2_int(total)
