"""Sampling of the i.i.d. random external potential, reproducibly.

The potential value at a lattice site is a pure function of
(master_seed, realization_index, site): each site's uniform variate comes
from a counter-based hash (a splitmix64-style mixing chain over the seed,
the realization index and the site coordinates), which is then pushed
through the inverse CDF of the configured measure.  Consequences:

  * enlarging or reshaping the sampled region never changes the values at
    sites already covered, so two far-apart cubes automatically read
    independent values while overlapping regions agree on the overlap;
  * realizations for different indices can be produced by any number of
    parallel workers with no coordination and bit-identical results.

A sequential-stream generator would make values depend on enumeration
order, which breaks both properties; that is why this module rolls its own
per-site hash instead of drawing from a stateful RNG.

Supported measures are bounded with at least two support points: Bernoulli
on two values, finite discrete, and uniform on an interval.  Unbounded
measures (Gaussian etc.) are deliberately not supported.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .geometry import ConfigPoint

BERNOULLI = "Bernoulli"
FINITE_DISCRETE = "FiniteDiscrete"
UNIFORM = "Uniform"
_KINDS = (BERNOULLI, FINITE_DISCRETE, UNIFORM)

_PROB_TOL = 1e-12

# 64-bit mixing constants (golden-ratio increment and splitmix64 multipliers)
_PHI = np.uint64(0x9E3779B97F4A7C15)
_MX1 = np.uint64(0xBF58476D1CE4E5B9)
_MX2 = np.uint64(0x94D049BB133111EB)


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MX1
    z = (z ^ (z >> np.uint64(27))) * _MX2
    return z ^ (z >> np.uint64(31))


def site_uniforms(
    master_seed: int, realization_index: int, coords: np.ndarray
) -> np.ndarray:
    """Uniform [0,1) variate per site, as a pure function of the arguments.

    coords: integer array of shape (n_sites, d).
    """
    coords = np.asarray(coords, dtype=np.int64)
    if coords.ndim != 2:
        raise ValueError("coords must have shape (n_sites, d)")
    with np.errstate(over="ignore"):  # wraparound is the point of mod-2^64 mixing
        h = _mix64(np.uint64(master_seed & 0xFFFFFFFFFFFFFFFF) + _PHI)
        h = _mix64(h ^ (np.uint64(realization_index) + _PHI))
        state = np.full(coords.shape[0], h, dtype=np.uint64)
        for k in range(coords.shape[1]):
            col = coords[:, k].view(np.uint64)  # two's-complement view of int64
            state = _mix64(state ^ (col + _PHI * np.uint64(k + 1)))
    # top 53 bits -> double in [0, 1)
    return (state >> np.uint64(11)).astype(np.float64) / float(1 << 53)


@dataclass(frozen=True)
class DisorderSpec:
    """Common distribution of the single-site potential, scaled by amplitude."""

    kind: str
    values: tuple[float, ...]
    probabilities: tuple[float, ...] | None = None
    amplitude: float = 1.0

    @classmethod
    def bernoulli(
        cls, a: float = 0.0, b: float = 1.0, q: float = 0.5, amplitude: float = 1.0
    ) -> "DisorderSpec":
        """Two-point measure: value b with probability q, else a."""
        return cls(BERNOULLI, (a, b), (1.0 - q, q), amplitude)

    @classmethod
    def finite_discrete(
        cls,
        values: Iterable[float],
        probabilities: Iterable[float],
        amplitude: float = 1.0,
    ) -> "DisorderSpec":
        return cls(FINITE_DISCRETE, tuple(values), tuple(probabilities), amplitude)

    @classmethod
    def uniform(cls, a: float, b: float, amplitude: float = 1.0) -> "DisorderSpec":
        return cls(UNIFORM, (a, b), None, amplitude)

    # -- validation ---------------------------------------------------------

    def validate(self) -> None:
        """Raise ValueError on specs that cannot be sampled.

        Amplitude 0 is accepted here (it yields the deterministic zero
        potential, useful as a free-operator control); assumption checking
        flags it separately.
        """
        if self.kind not in _KINDS:
            raise ValueError(f"unsupported disorder kind: {self.kind!r}")
        if self.amplitude < 0:
            raise ValueError("amplitude must be nonnegative")
        if self.kind == UNIFORM:
            if len(self.values) != 2 or self.probabilities is not None:
                raise ValueError("uniform spec takes an interval (a, b) and no probabilities")
            a, b = self.values
            if not a < b:
                raise ValueError("uniform support must satisfy a < b")
            return
        if self.probabilities is None:
            raise ValueError(f"{self.kind} spec requires probabilities")
        if len(self.values) != len(self.probabilities):
            raise ValueError("values and probabilities differ in length")
        if self.kind == BERNOULLI and len(self.values) != 2:
            raise ValueError("Bernoulli spec takes exactly two values")
        if any(p < 0 for p in self.probabilities):
            raise ValueError("probabilities must be nonnegative")
        if abs(sum(self.probabilities) - 1.0) > _PROB_TOL:
            raise ValueError("probabilities must sum to 1")
        effective = {v for v, p in zip(self.values, self.probabilities) if p > 0}
        if len(effective) < 2:
            raise ValueError("support concentrated in a single point")

    def support_bound(self) -> float:
        """Smallest M with all potential values in [-M, M] (amplitude included)."""
        return self.amplitude * max(abs(v) for v in self.values)

    def support_contains_zero(self) -> bool:
        if self.kind == UNIFORM:
            a, b = self.values
            return a <= 0.0 <= b
        return any(
            v == 0.0 and p > 0 for v, p in zip(self.values, self.probabilities or ())
        )

    # -- inverse CDF --------------------------------------------------------

    def values_from_uniforms(self, u: np.ndarray) -> np.ndarray:
        """Map uniform [0,1) variates to potential values (amplitude applied)."""
        self.validate()
        if self.kind == UNIFORM:
            a, b = self.values
            return self.amplitude * (a + u * (b - a))
        probs = np.asarray(self.probabilities, dtype=np.float64)
        cum = np.cumsum(probs)
        cum[-1] = 1.0  # guard against round-off at the top bin
        idx = np.searchsorted(cum, u, side="right")
        vals = self.amplitude * np.asarray(self.values, dtype=np.float64)
        return vals[idx]


@dataclass(frozen=True)
class AssumptionReport:
    """Outcome of checking a spec against the disorder-model assumptions."""

    passed: bool
    bound: float
    violations: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()


def validate_assumption_P(spec: DisorderSpec) -> AssumptionReport:
    """Check boundedness and non-degeneracy of the single-site measure.

    Violations make the report fail; a support not containing zero is only
    warned about (the model is translation-covariant in the potential, so we
    flag rather than silently shift).
    """
    violations: list[str] = []
    warnings: list[str] = []
    try:
        spec.validate()
    except ValueError as exc:
        violations.append(str(exc))
    bound = 0.0
    if not violations:
        bound = spec.support_bound()
        if spec.amplitude == 0:
            violations.append("amplitude 0 collapses the scaled support to a single point")
        if not spec.support_contains_zero():
            warnings.append("support does not contain 0; consider shifting the values")
    notes = (
        "support is bounded, so all absolute moments are finite automatically",
    )
    return AssumptionReport(
        passed=not violations,
        bound=bound,
        violations=tuple(violations),
        warnings=tuple(warnings),
        notes=notes,
    )


@dataclass(frozen=True)
class DisorderRealization:
    """One sampled potential: a deterministic map site -> value.

    provenance records (master_seed, realization_index) for sampled
    realizations and is None for synthetic ones (e.g. exact enumeration).
    """

    values: Mapping[tuple[int, ...], float]
    provenance: tuple[int, int] | None = None

    @property
    def region(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self.values.keys())

    def value(self, site: tuple[int, ...]) -> float:
        try:
            return self.values[tuple(site)]
        except KeyError:
            raise KeyError(f"site {tuple(site)} not covered by this realization") from None

    def covers(self, sites: Iterable[tuple[int, ...]]) -> bool:
        return all(tuple(s) in self.values for s in sites)


def sample(
    spec: DisorderSpec,
    region: Iterable[tuple[int, ...]],
    master_seed: int,
    realization_index: int,
) -> DisorderRealization:
    """Draw one potential realization on the given single-particle sites.

    The value at each site is independent of the region's shape and of the
    enumeration order; see the module docstring.
    """
    spec.validate()
    site_list = [(s,) if isinstance(s, int) else tuple(s) for s in region]
    if not site_list:
        raise ValueError("region must be finite and nonempty")
    coords = np.asarray(site_list, dtype=np.int64)
    u = site_uniforms(master_seed, realization_index, coords)
    vals = spec.values_from_uniforms(u)
    return DisorderRealization(
        values=dict(zip(site_list, vals.tolist())),
        provenance=(master_seed, realization_index),
    )


def multi_particle_potential(real: DisorderRealization, x: ConfigPoint) -> float:
    """Total external potential of a configuration: sum of V over the particle
    positions, all read from the same single-particle field."""
    return sum(real.value(x.particle(j)) for j in range(1, x.n + 1))
