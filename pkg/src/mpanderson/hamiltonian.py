"""Finite-volume n-particle Hamiltonians with simple boundary conditions.

The operator is H = -Laplacian + total external potential + h * interaction,
restricted to a finite box by plain truncation: hopping entries to sites
outside the box are dropped while the diagonal keeps its full value 2dn plus
potential terms.  In matrix form, with sites enumerated lexicographically:

    H[x, y] = -1            if |x - y|_1 = 1 and both inside,
    H[x, x] = 2dn + sum_j V(x_j) + h * U(x),
    H[x, y] = 0             otherwise.

The interaction U(x) is a sum over unordered particle pairs of a two-body
kernel that decays sub-exponentially (or is truncated at finite range).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp

from .disorder import DisorderRealization, multi_particle_potential
from .geometry import ConfigPoint, Region, single_particle_sites, sites

SUB_EXPONENTIAL = "SubExponential"
FINITE_RANGE = "FiniteRange"


@dataclass(frozen=True)
class InteractionSpec:
    """Two-body interaction kernel C * exp(-c * r^tau) at inter-particle
    distance r, optionally truncated to zero beyond a finite cutoff.

    For d > 1 the two-body distance is the sup norm of the difference of the
    two d-dimensional particle positions.
    """

    kind: str
    C: float
    c: float
    tau: float
    cutoff: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in (SUB_EXPONENTIAL, FINITE_RANGE):
            raise ValueError(f"unsupported interaction kind: {self.kind!r}")
        if self.C < 0 or self.c <= 0:
            raise ValueError("kernel constants must satisfy C >= 0, c > 0")
        if not 0 < self.tau <= 1:
            raise ValueError("decay power tau must lie in (0, 1]")
        if self.kind == FINITE_RANGE and (self.cutoff is None or self.cutoff < 0):
            raise ValueError("finite-range kernel needs a cutoff >= 0")

    @classmethod
    def sub_exponential(cls, C: float = 1.0, c: float = 1.0, tau: float = 0.5) -> "InteractionSpec":
        return cls(SUB_EXPONENTIAL, C, c, tau)

    @classmethod
    def finite_range(
        cls, C: float = 1.0, c: float = 1.0, tau: float = 0.5, cutoff: int = 1
    ) -> "InteractionSpec":
        return cls(FINITE_RANGE, C, c, tau, cutoff)

    def pair_kernel(self, r: float) -> float:
        """Kernel value at two-body distance r >= 0."""
        if self.kind == FINITE_RANGE and r > self.cutoff:
            return 0.0
        return self.C * math.exp(-self.c * r**self.tau)


def two_body_distance(a: Sequence[int], b: Sequence[int]) -> int:
    return max(abs(p - q) for p, q in zip(a, b))


def interaction_energy(ispec: InteractionSpec | None, x: ConfigPoint) -> float:
    """Sum of the two-body kernel over unordered particle pairs; 0 for n = 1."""
    if ispec is None or x.n == 1:
        return 0.0
    blocks = x.particles()
    total = 0.0
    for i in range(x.n):
        for j in range(i + 1, x.n):
            total += ispec.pair_kernel(two_body_distance(blocks[i], blocks[j]))
    return total


@dataclass(frozen=True)
class InteractionBoundReport:
    """Pointwise check of the kernel against its sub-exponential envelope."""

    passed: bool
    max_ratio: float
    worst_distance: int


def validate_interaction_bound(
    ispec: InteractionSpec, radius: int, envelope: InteractionSpec | None = None
) -> InteractionBoundReport:
    """Check the kernel against the sub-exponential envelope at all two-body
    distances 0..radius; by default the envelope uses the kernel's own
    constants, so the sub-exponential kernel itself has max ratio 1."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    env = envelope or ispec
    max_ratio, worst = 0.0, 0
    for r in range(radius + 1):
        bound = env.C * math.exp(-env.c * r**env.tau)
        value = ispec.pair_kernel(r)
        ratio = 0.0 if bound == 0.0 else value / bound
        if ratio > max_ratio:
            max_ratio, worst = ratio, r
    return InteractionBoundReport(passed=max_ratio <= 1.0 + 1e-15, max_ratio=max_ratio, worst_distance=worst)


# ---------------------------------------------------------------------------
# Matrix assembly
# ---------------------------------------------------------------------------


@dataclass
class HamiltonianMatrix:
    """Symmetric finite-volume operator plus its site <-> row index map.

    Treat instances as immutable after construction; the only mutation is the
    lazily cached dense copy.
    """

    site_list: tuple[ConfigPoint, ...]
    index: dict[ConfigPoint, int]
    matrix: sp.csr_matrix
    n: int
    d: int
    h: float
    region: Region | None = None
    provenance: tuple[int, int] | None = None
    _dense: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.site_list)

    def dense(self) -> np.ndarray:
        if self._dense is None:
            self._dense = self.matrix.toarray()
        return self._dense

    def row_of(self, x: ConfigPoint) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise ValueError(f"site {x.coords} is not in the operator's region") from None

    def apply(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.size,):
            raise ValueError(f"vector length {v.shape} does not match region size {self.size}")
        return self.matrix @ v


def assemble(
    site_list: Sequence[ConfigPoint],
    potential: Callable[[ConfigPoint], float],
    ispec: InteractionSpec | None,
    h: float,
    region: Region | None = None,
    provenance: tuple[int, int] | None = None,
) -> HamiltonianMatrix:
    """Assemble the truncated operator on an explicit ordered site list.

    The lattice structure (hopping -1 between l1-neighbors, diagonal 2dn)
    only depends on the sites given, so arbitrary finite subsets of Z^{nd}
    are accepted; build() is the box-shaped front end.
    """
    if not site_list:
        raise ValueError("empty site list")
    first = site_list[0]
    n, d, nd = first.n, first.d, first.n * first.d
    index = {x: i for i, x in enumerate(site_list)}
    if len(index) != len(site_list):
        raise ValueError("site list contains duplicates")

    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    for i, x in enumerate(site_list):
        diag = 2.0 * d * n + potential(x)
        if h != 0.0:
            diag += h * interaction_energy(ispec, x)
        rows.append(i)
        cols.append(i)
        vals.append(diag)
        coords = x.coords
        for k in range(nd):
            for step in (-1, 1):
                nb_coords = coords[:k] + (coords[k] + step,) + coords[k + 1 :]
                j = index.get(ConfigPoint(nb_coords, n, d))
                if j is not None:
                    rows.append(i)
                    cols.append(j)
                    vals.append(-1.0)

    matrix = sp.csr_matrix(
        (vals, (rows, cols)), shape=(len(site_list), len(site_list)), dtype=np.float64
    )
    return HamiltonianMatrix(
        site_list=tuple(site_list),
        index=index,
        matrix=matrix,
        n=n,
        d=d,
        h=h,
        region=region,
        provenance=provenance,
    )


def build(
    region: Region,
    realization: DisorderRealization,
    ispec: InteractionSpec | None = None,
    h: float = 0.0,
) -> HamiltonianMatrix:
    """Build the Hamiltonian restricted to a cube or rectangle.

    The realization must cover every single-particle site the region
    projects to; the same field is read by all particles.
    """
    needed = single_particle_sites(region)
    missing = [s for s in needed if s not in realization.values]
    if missing:
        raise ValueError(
            f"realization does not cover {len(missing)} required site(s), "
            f"e.g. {sorted(missing)[0]}"
        )
    return assemble(
        sites(region),
        potential=lambda x: multi_particle_potential(realization, x),
        ispec=ispec,
        h=h,
        region=region,
        provenance=realization.provenance,
    )


def apply(hm: HamiltonianMatrix, v: np.ndarray) -> np.ndarray:
    """Matrix-vector product H @ v."""
    return hm.apply(v)


def dump_coo(hm: HamiltonianMatrix) -> str:
    """Stored entries as text lines 'row col value', sorted by (row, col),
    with 17 significant digits."""
    coo = hm.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    lines = [
        f"{coo.row[k]} {coo.col[k]} {coo.data[k]:.17g}" for k in order
    ]
    return "\n".join(lines) + "\n"
