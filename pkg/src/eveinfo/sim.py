"""Sampling simulator of the entanglement-based protocol with an i.i.d. Bell-diagonal source.

Pairs are processed in fixed-size chunks. Chunk ``k`` draws from its own
substream keyed by ``(seed, stream, k)``, so the result does not depend on
how many workers process the chunks.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from eveinfo.bellcore import BELL_LABELS, Basis, BellDiagonal, BellLabel, joint_outcome_distribution
from eveinfo.bounds import SIX_STATE_MAX_RATE, i_eve_bb84, i_eve_six_state
from eveinfo.rng import SEED_MAX, make_rng
from eveinfo.schemes import (
    BB84,
    Scheme,
    SchemeKind,
    detection_profile,
    expected_error_rate,
)

CHUNK_SIZE = 1 << 16
_STREAM_PAIRS = 0
_STREAM_NPAB = 1

CONFIG_FIELDS = ("scheme", "pairs", "source", "seed", "check_fraction")


class DegenerateSample(RuntimeError):
    """No pair survived sifting and checking."""


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SimConfig:
    scheme: Scheme
    pairs: int
    source: BellDiagonal
    seed: int = 0
    check_fraction: float = 1.0

    def __post_init__(self):
        if isinstance(self.scheme, str):
            object.__setattr__(self, "scheme", Scheme.parse(self.scheme))
        if not isinstance(self.source, BellDiagonal):
            object.__setattr__(self, "source", BellDiagonal(tuple(self.source)))
        if isinstance(self.pairs, bool) or int(self.pairs) != self.pairs or self.pairs < 1:
            raise ConfigError(f"pairs must be a positive integer, got {self.pairs!r}")
        if isinstance(self.seed, bool) or int(self.seed) != self.seed or not 0 <= self.seed <= SEED_MAX:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if not 0.0 < self.check_fraction <= 1.0:
            raise ConfigError(f"check_fraction must be in (0, 1], got {self.check_fraction!r}")
        if self.scheme.is_multibasis and self.scheme.m is None:
            raise ConfigError(f"cannot simulate continuum scheme {self.scheme}; give a basis count")

    @classmethod
    def from_dict(cls, data: dict) -> SimConfig:
        """Build from the JSON form.

        ``source`` is either a list of four probabilities in the order
        Phi+, Psi+, Phi-, Psi- or a mapping from label names to probabilities.
        """
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(data) - set(CONFIG_FIELDS)
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        missing = {"scheme", "pairs", "source"} - set(data)
        if missing:
            raise ConfigError(f"missing config fields: {sorted(missing)}")
        source = data["source"]
        try:
            if isinstance(source, dict):
                probs = [0.0] * 4
                for name, p in source.items():
                    probs[BellLabel.parse(name)] = p
                source = probs
            return cls(
                scheme=Scheme.parse(data["scheme"]),
                pairs=data["pairs"],
                source=BellDiagonal(tuple(source)),
                seed=data.get("seed", 0),
                check_fraction=data.get("check_fraction", 1.0),
            )
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, text: str) -> SimConfig:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return {"scheme": str(self.scheme), "pairs": self.pairs, "source": list(self.source.probs),
                "seed": self.seed, "check_fraction": self.check_fraction}


@dataclass(frozen=True)
class SimResult:
    sifted: int
    n_para: int
    n_anti: int
    empirical_d: float
    expected_d: float
    i_eve_bound: float | None
    standard_error: float

    @property
    def checked(self) -> int:
        return self.n_para + self.n_anti

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


def _chunk_bounds(pairs: int):
    for k, start in enumerate(range(0, pairs, CHUNK_SIZE)):
        yield k, min(CHUNK_SIZE, pairs - start)


def _npab_indices(seed: int, chunk: int, size: int, n_bases: int) -> np.ndarray:
    return make_rng(seed, _STREAM_NPAB, chunk).integers(n_bases, size=size)


def npab_basis_sequence(seed: int, length: int, scheme: Scheme) -> list[Basis]:
    """Pre-shared secret basis string for an NPAB scheme, uniform over its bases."""
    if not scheme.is_npab:
        raise ValueError(f"{scheme} announces its bases; no shared basis sequence")
    if length < 1:
        raise ValueError("length must be positive")
    bases = scheme.bases()
    idx = np.concatenate([_npab_indices(seed, k, size, len(bases))
                          for k, size in _chunk_bounds(length)])
    return [bases[i] for i in idx]


def _outcome_cdf(bases: Sequence[Basis]) -> np.ndarray:
    """Cumulative joint-outcome table indexed [label, basis_a, basis_b, outcome]."""
    k = len(bases)
    table = np.empty((4, k, k, 4))
    for label in BELL_LABELS:
        for i, ba in enumerate(bases):
            for j, bb in enumerate(bases):
                table[label, i, j] = joint_outcome_distribution(label, ba, bb)
    cdf = np.cumsum(table, axis=-1)
    cdf[..., -1] = 1.0
    return cdf


def _simulate_chunk(config: SimConfig, cdf: np.ndarray, chunk: int, size: int):
    rng = make_rng(config.seed, _STREAM_PAIRS, chunk)
    n_bases = cdf.shape[1]
    label_cdf = np.cumsum(config.source.probs)
    label_cdf[-1] = 1.0
    labels = np.searchsorted(label_cdf, rng.random(size), side="right")
    if config.scheme.is_npab:
        basis_a = basis_b = _npab_indices(config.seed, chunk, size, n_bases)
    else:
        basis_a = rng.integers(n_bases, size=size)
        basis_b = rng.integers(n_bases, size=size)
    u = rng.random(size)
    checks = rng.random(size) < config.check_fraction

    sifted = basis_a == basis_b
    outcome = (u[:, None] >= cdf[labels, basis_a, basis_b]).sum(axis=1)
    parallel = (outcome == 0) | (outcome == 3)
    checked = sifted & checks
    n_para = int(np.count_nonzero(checked & parallel))
    return int(np.count_nonzero(sifted)), n_para, int(np.count_nonzero(checked)) - n_para


def i_eve_for_scheme(scheme: Scheme, d_rate: float) -> float | None:
    """Per-bit bound matching the scheme family; None when D is outside its domain.

    Sphere schemes share the six-state bound and plane schemes the BB84 bound.
    """
    kind = scheme.underlying.kind
    if kind in (SchemeKind.SIX_STATE, SchemeKind.SPHERE):
        return i_eve_six_state(d_rate) if d_rate <= SIX_STATE_MAX_RATE else None
    return i_eve_bb84(d_rate)


def run_protocol(config: SimConfig, workers: int = 1) -> SimResult:
    """Simulate ``config.pairs`` rounds: source, basis choice, measurement, sifting, checking.

    Raises:
        DegenerateSample: no pair was both sifted and checked.
    """
    cdf = _outcome_cdf(config.scheme.bases())
    chunks = list(_chunk_bounds(config.pairs))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda kc: _simulate_chunk(config, cdf, *kc), chunks))
    else:
        parts = [_simulate_chunk(config, cdf, k, size) for k, size in chunks]
    sifted = sum(p[0] for p in parts)
    n_para = sum(p[1] for p in parts)
    n_anti = sum(p[2] for p in parts)
    checked = n_para + n_anti
    if checked == 0:
        raise DegenerateSample(f"no pairs survived sifting and checking out of {config.pairs}")
    d = n_para / checked
    return SimResult(
        sifted=sifted,
        n_para=n_para,
        n_anti=n_anti,
        empirical_d=d,
        expected_d=expected_error_rate(config.source, detection_profile(config.scheme)),
        i_eve_bound=i_eve_for_scheme(config.scheme, d),
        standard_error=math.sqrt(d * (1.0 - d) / checked),
    )


@dataclass(frozen=True)
class EquivalenceRecord:
    announced: Scheme
    npab: Scheme
    mean_announced: float
    var_announced: float
    mean_npab: float
    var_npab: float
    mean_difference: float
    combined_standard_error: float
    statistic: float
    results_announced: tuple[SimResult, ...]
    results_npab: tuple[SimResult, ...]

    def within(self, n_sigma: float = 4.0) -> bool:
        return self.statistic < n_sigma


def equivalence_trial(source: BellDiagonal, pairs: int, seeds: Sequence[int],
                      scheme: Scheme = BB84, check_fraction: float = 1.0) -> EquivalenceRecord:
    """Compare the empirical error rate of ``scheme`` and its NPAB variant over many seeds.

    ``statistic`` is |mean difference| over the combined standard error of the
    two seed means (0 when both samples are constant and equal).
    """
    if len(seeds) < 30:
        raise ValueError(f"need at least 30 seeds, got {len(seeds)}")
    announced = scheme.underlying
    npab = {SchemeKind.BB84: Scheme(SchemeKind.NPAB_BB84),
            SchemeKind.SIX_STATE: Scheme(SchemeKind.NPAB_SIX_STATE)}.get(announced.kind)
    if npab is None:
        raise ValueError(f"{scheme} has no NPAB counterpart")

    def runs(s):
        return tuple(run_protocol(SimConfig(s, pairs, source, seed, check_fraction)) for seed in seeds)

    res_a, res_n = runs(announced), runs(npab)
    da = np.array([r.empirical_d for r in res_a])
    dn = np.array([r.empirical_d for r in res_n])
    k = len(seeds)
    var_a, var_n = float(da.var(ddof=1)), float(dn.var(ddof=1))
    diff = float(da.mean() - dn.mean())
    se = math.sqrt(var_a / k + var_n / k)
    if se > 0:
        stat = abs(diff) / se
    else:
        stat = 0.0 if diff == 0 else math.inf
    return EquivalenceRecord(announced, npab, float(da.mean()), var_a, float(dn.mean()), var_n,
                             diff, se, stat, res_a, res_n)
