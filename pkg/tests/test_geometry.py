import itertools

import numpy as np
import pytest

from mpanderson.geometry import (
    ConfigPoint,
    Cube,
    Rectangle,
    external_boundary,
    internal_boundary,
    is_J_separable,
    is_separable_pair,
    iter_sites,
    l1_norm,
    single_particle_sites,
    sites,
    sup_norm,
)


def P(*coords, n=1, d=1):
    return ConfigPoint(tuple(coords), n, d)


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------


def test_sup_norm_definition():
    assert sup_norm(P(0, 0, n=2), P(3, -5, n=2)) == 5
    x = P(1, 2, 3, n=3)
    assert sup_norm(x, x) == 0
    shifted = x.translate((0, 0, 7))
    assert sup_norm(x, shifted) == 7


def test_l1_norm_definition():
    assert l1_norm(P(0, 0, n=2), P(3, -5, n=2)) == 8
    x = P(4, n=1)
    assert l1_norm(x, x) == 0
    assert l1_norm(P(0), P(1)) == 1


def test_norm_dimension_mismatch():
    with pytest.raises(ValueError):
        sup_norm(P(0), P(0, 0, n=2))
    with pytest.raises(ValueError):
        l1_norm(P(0, 0, n=2), ConfigPoint((0, 0), 1, 2))


def test_config_point_validation():
    with pytest.raises(ValueError):
        ConfigPoint((1, 2, 3), 2, 2)
    with pytest.raises(ValueError):
        ConfigPoint((1,), 0, 1)
    assert P(1, 2, n=2).particle(2) == (2,)
    with pytest.raises(ValueError):
        P(1, 2, n=2).particle(3)


# ---------------------------------------------------------------------------
# site enumeration
# ---------------------------------------------------------------------------


def test_sites_interval():
    cube = Cube(P(0), 1)
    assert [s.coords for s in sites(cube)] == [(-1,), (0,), (1,)]


def test_sites_two_particle_square():
    cube = Cube(P(0, 0, n=2), 2)
    pts = sites(cube)
    assert len(pts) == 25  # (2L+1)^(nd) with L=2, nd=2
    assert pts[0].coords == (-2, -2)
    assert pts[-1].coords == (2, 2)
    assert pts == sorted(pts, key=lambda s: s.coords)


def test_sites_rectangle_mixed_radii():
    rect = Rectangle(((0,), (5,)), (0, 1))
    assert [s.coords for s in sites(rect)] == [(0, 4), (0, 5), (0, 6)]


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("d", [1, 2])
def test_cube_cardinality_exhaustive(n, d):
    for L in range(0, 6):
        cube = Cube(ConfigPoint.origin(n, d), L)
        expected = (2 * L + 1) ** (n * d)
        assert cube.cardinality() == expected
        assert sum(1 for _ in iter_sites(cube)) == expected


def test_single_particle_sites():
    cube = Cube(P(0, 10, n=2), 1)
    proj = single_particle_sites(cube)
    assert proj == {(-1,), (0,), (1,), (9,), (10,), (11,)}


# ---------------------------------------------------------------------------
# boundaries
# ---------------------------------------------------------------------------


def _boundary_oracle(region):
    """Brute-force both boundaries by scanning an enclosing box."""
    inside = set(sites(region))
    probe = next(iter(inside))
    n, d = probe.n, probe.d
    lo = [min(s.coords[k] for s in inside) - 1 for k in range(n * d)]
    hi = [max(s.coords[k] for s in inside) + 1 for k in range(n * d)]
    box = itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)])
    internal, external = set(), set()
    for coords in box:
        x = ConfigPoint(coords, n, d)
        neighbors = []
        for k in range(n * d):
            for step in (-1, 1):
                nb = coords[:k] + (coords[k] + step,) + coords[k + 1 :]
                neighbors.append(ConfigPoint(nb, n, d))
        if x in inside and any(nb not in inside for nb in neighbors):
            internal.add(x)
        if x not in inside and any(nb in inside for nb in neighbors):
            external.add(x)
    return internal, external


def test_internal_boundary_interval():
    assert {s.coords for s in internal_boundary(Cube(P(0), 2))} == {(-2,), (2,)}


def test_internal_boundary_single_site():
    assert internal_boundary(Cube(P(0), 0)) == {P(0)}


def test_internal_boundary_two_particle_square():
    cube = Cube(P(0, 0, n=2), 1)
    got = internal_boundary(cube)
    oracle, _ = _boundary_oracle(cube)
    assert got == oracle
    assert len(got) == 8  # all of the 3x3 square except the center


def test_external_boundary_interval():
    assert {s.coords for s in external_boundary(Cube(P(0), 2))} == {(-3,), (3,)}
    assert {s.coords for s in external_boundary(Cube(P(0), 0))} == {(-1,), (1,)}


def test_external_boundary_two_particle_square():
    cube = Cube(P(0, 0, n=2), 1)
    got = external_boundary(cube)
    _, oracle = _boundary_oracle(cube)
    assert got == oracle
    assert len(got) == 12


@pytest.mark.parametrize(
    "rect",
    [
        Rectangle(((3,), (-1,)), (2, 0)),
        Rectangle(((0, 0),), (2,)),
        Rectangle(((1, -2), (0, 4)), (1, 2)),
    ],
)
def test_boundaries_match_oracle(rect):
    internal, external = _boundary_oracle(rect)
    assert internal_boundary(rect) == internal
    assert external_boundary(rect) == external
    inside = set(sites(rect))
    assert internal_boundary(rect) <= inside
    assert not (external_boundary(rect) & inside)


# ---------------------------------------------------------------------------
# separability
# ---------------------------------------------------------------------------


def _interval_cube(center, L):
    """Single-particle sup-ball as an explicit site set (d=1 oracle)."""
    return set(range(center - L, center + L + 1))


def _j_separable_oracle(x, y, L, J):
    inside = set()
    for j in J:
        inside |= _interval_cube(x.particle(j)[0], L)
    rest = set()
    for k in range(1, x.n + 1):
        if k not in J:
            rest |= _interval_cube(x.particle(k)[0], L)
    for k in range(1, y.n + 1):
        rest |= _interval_cube(y.particle(k)[0], L)
    return not (inside & rest)


def test_is_J_separable_intervals():
    assert is_J_separable(P(0), P(10), 3, {1})
    assert not is_J_separable(P(0), P(5), 3, {1})


def test_is_J_separable_two_particles():
    # frozen from the brute-force interval oracle below
    x, y = P(0, 100, n=2), P(50, 60, n=2)
    for J in ({1}, {2}):
        assert _j_separable_oracle(x, y, 4, J)
        assert is_J_separable(x, y, 4, J)
    # contrast case: C_4(100) overlaps C_4(97), so J={2} fails
    y2 = P(50, 97, n=2)
    assert _j_separable_oracle(x, y2, 4, {1})
    assert is_J_separable(x, y2, 4, {1})
    assert not _j_separable_oracle(x, y2, 4, {2})
    assert not is_J_separable(x, y2, 4, {2})


def test_is_J_separable_rejects_bad_J():
    with pytest.raises(ValueError):
        is_J_separable(P(0), P(10), 1, set())
    with pytest.raises(ValueError):
        is_J_separable(P(0), P(10), 1, {2})


def test_is_J_separable_translation_invariance():
    # translation means every particle shifts by one common d-vector
    rng = np.random.default_rng(5)
    for _ in range(50):
        xs, ys = rng.integers(-30, 30, size=2), rng.integers(-30, 30, size=2)
        x, y = P(*xs, n=2), P(*ys, n=2)
        L = int(rng.integers(0, 5))
        shift = int(rng.integers(-20, 20))
        t = (shift, shift)
        for J in ({1}, {2}, {1, 2}):
            assert is_J_separable(x, y, L, J) == is_J_separable(
                x.translate(t), y.translate(t), L, J
            )


def test_separable_pair_examples():
    assert is_separable_pair(P(0), P(100), 10, 1)
    # distance gate fails: |x-y| = 100 <= 7*2*10
    assert not is_separable_pair(P(0, 0, n=2), P(100, 100, n=2), 10, 2)
    assert is_separable_pair(P(0, 0, n=2), P(100, 100, n=2), 5, 2)


def test_separable_pair_brute_force_two_particles():
    x, y = P(0, 0, n=2), P(100, 100, n=2)
    L, N = 5, 2
    subsets = [{1}, {2}, {1, 2}]
    oracle = sup_norm(x, y) > 7 * N * L and any(
        _j_separable_oracle(x, y, L, J) or _j_separable_oracle(y, x, L, J)
        for J in subsets
    )
    assert is_separable_pair(x, y, L, N) == oracle is True


def test_separable_pair_symmetry():
    rng = np.random.default_rng(11)
    for _ in range(100):
        x = P(*rng.integers(-60, 60, size=2), n=2)
        y = P(*rng.integers(-60, 60, size=2), n=2)
        L, N = int(rng.integers(0, 4)), 2
        assert is_separable_pair(x, y, L, N) == is_separable_pair(y, x, L, N)


@pytest.mark.parametrize("L,N", [(1, 1), (3, 1), (3, 2), (7, 3)])
def test_single_particle_equivalence(L, N):
    # for n = 1: separable iff sup distance beats both 7NL and 2L
    for dist in range(0, 101):
        x, y = P(0), P(dist)
        expected = dist > max(7 * N * L, 2 * L)
        assert is_separable_pair(x, y, L, N) == expected
