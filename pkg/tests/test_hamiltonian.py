import math

import numpy as np
import pytest

from mpanderson.disorder import DisorderRealization, DisorderSpec, sample
from mpanderson.geometry import Cube, ConfigPoint, Rectangle, sites, single_particle_sites
from mpanderson.hamiltonian import (
    HamiltonianMatrix,
    InteractionSpec,
    apply,
    assemble,
    build,
    dump_coo,
    interaction_energy,
    two_body_distance,
    validate_interaction_bound,
)


def _flat(lo, hi, value=0.0):
    return DisorderRealization({(i,): value for i in range(lo, hi + 1)})


def _free_three_site():
    cube = Cube(ConfigPoint.origin(1, 1), 1)
    return build(cube, _flat(-1, 1))


# ---------------------------------------------------------------------------
# interaction kernel
# ---------------------------------------------------------------------------


def test_interaction_energy_single_particle_is_zero():
    spec = InteractionSpec.sub_exponential(C=3.0, c=2.0, tau=0.5)
    assert interaction_energy(spec, ConfigPoint((7,), 1, 1)) == 0.0


def test_interaction_energy_pair():
    spec = InteractionSpec.sub_exponential(C=1.0, c=1.0, tau=0.5)
    x = ConfigPoint((0, 4), 2, 1)
    assert interaction_energy(spec, x) == pytest.approx(math.exp(-2.0), abs=1e-15)


def test_interaction_energy_three_particles_matches_pair_sum():
    spec = InteractionSpec.sub_exponential(C=1.0, c=1.0, tau=1.0)
    x = ConfigPoint((0, 1, 2), 3, 1)
    # brute-force pair enumeration oracle
    positions = [(0,), (1,), (2,)]
    oracle = sum(
        spec.pair_kernel(two_body_distance(positions[i], positions[j]))
        for i in range(3)
        for j in range(i + 1, 3)
    )
    assert oracle == pytest.approx(math.exp(-1) + math.exp(-2) + math.exp(-1))
    assert interaction_energy(spec, x) == pytest.approx(oracle, abs=1e-15)


def test_finite_range_truncates():
    spec = InteractionSpec.finite_range(C=1.0, c=1.0, tau=1.0, cutoff=2)
    assert spec.pair_kernel(2) == pytest.approx(math.exp(-2))
    assert spec.pair_kernel(3) == 0.0


def test_interaction_spec_validation():
    with pytest.raises(ValueError):
        InteractionSpec("SubExponential", C=1.0, c=0.0, tau=0.5)
    with pytest.raises(ValueError):
        InteractionSpec("SubExponential", C=1.0, c=1.0, tau=1.5)
    with pytest.raises(ValueError):
        InteractionSpec("FiniteRange", C=1.0, c=1.0, tau=0.5, cutoff=None)


def test_validate_interaction_bound():
    spec = InteractionSpec.sub_exponential(C=2.0, c=0.7, tau=0.5)
    report = validate_interaction_bound(spec, radius=30)
    assert report.passed
    assert report.max_ratio == pytest.approx(1.0)

    truncated = InteractionSpec.finite_range(C=2.0, c=0.7, tau=0.5, cutoff=5)
    report = validate_interaction_bound(truncated, radius=30)
    assert report.passed
    assert report.max_ratio <= 1.0

    halved = InteractionSpec.sub_exponential(C=1.0, c=0.7, tau=0.5)
    report = validate_interaction_bound(halved, radius=30, envelope=spec)
    assert report.max_ratio == pytest.approx(0.5)


# ---------------------------------------------------------------------------
# matrix assembly
# ---------------------------------------------------------------------------


def test_free_three_site_matrix():
    hm = _free_three_site()
    expected = np.array([[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]])
    assert np.array_equal(hm.dense(), expected)


def test_single_site_matrix():
    v = 0.37
    cube = Cube(ConfigPoint.origin(1, 1), 0)
    hm = build(cube, DisorderRealization({(0,): v}))
    assert np.array_equal(hm.dense(), np.array([[2.0 + v]]))


def test_two_particle_single_configuration_diagonal():
    v, C = 0.25, 1.7
    cube = Cube(ConfigPoint.origin(2, 1), 0)
    real = DisorderRealization({(0,): v})
    ispec = InteractionSpec.sub_exponential(C=C, c=1.0, tau=0.5)
    hm = build(cube, real, ispec, h=1.0)
    # 2dn = 4, two reads of V(0), kernel at distance 0 equals C
    assert np.array_equal(hm.dense(), np.array([[4.0 + 2 * v + C]]))


def test_build_requires_coverage():
    cube = Cube(ConfigPoint.origin(1, 1), 2)
    with pytest.raises(ValueError, match="cover"):
        build(cube, _flat(-1, 1))


def test_apply_examples():
    hm = _free_three_site()
    assert np.allclose(apply(hm, np.array([0.0, 1.0, 0.0])), [-1.0, 2.0, -1.0])
    assert np.array_equal(apply(hm, np.zeros(3)), np.zeros(3))
    with pytest.raises(ValueError):
        apply(hm, np.zeros(4))


def test_apply_squares_match_dense_oracle():
    rng = np.random.default_rng(3)
    cube = Cube(ConfigPoint.origin(2, 1), 2)
    region = single_particle_sites(cube)
    real = DisorderRealization({s: float(v) for s, v in zip(sorted(region), rng.uniform(-1, 1, len(region)))})
    hm = build(cube, real, InteractionSpec.sub_exponential(), h=0.3)
    v = rng.standard_normal(hm.size)
    twice = apply(hm, apply(hm, v))
    dense = hm.dense()
    assert np.max(np.abs(twice - dense @ dense @ v)) <= 1e-12 * np.max(np.abs(twice))


def _random_instance(seed, n=1, d=1, L=3, h=0.5):
    spec = DisorderSpec.uniform(-1, 1, amplitude=2.0)
    cube = Cube(ConfigPoint.origin(n, d), L)
    real = sample(spec, single_particle_sites(cube), seed, 0)
    ispec = InteractionSpec.sub_exponential(C=1.0, c=1.0, tau=0.5) if n > 1 else None
    return cube, build(cube, real, ispec, h)


@pytest.mark.parametrize("seed,n,d,L", [(0, 1, 1, 5), (1, 2, 1, 2), (2, 1, 2, 2), (3, 2, 2, 1)])
def test_symmetry_exact(seed, n, d, L):
    _, hm = _random_instance(seed, n, d, L)
    dense = hm.dense()
    assert np.max(np.abs(dense - dense.T)) == 0.0


@pytest.mark.parametrize("seed,n,d,L", [(0, 1, 1, 5), (1, 2, 1, 2), (2, 1, 2, 2)])
def test_row_structure(seed, n, d, L):
    cube, hm = _random_instance(seed, n, d, L)
    dense = hm.dense()
    nd = n * d
    boundary_free = Cube(cube.center, cube.radius - 1) if cube.radius > 0 else None
    for i, site in enumerate(hm.site_list):
        off = [dense[i, j] for j in range(hm.size) if j != i and dense[i, j] != 0.0]
        assert all(v == -1.0 for v in off)
        assert len(off) <= 2 * nd
        if boundary_free is not None and boundary_free.contains(site):
            assert len(off) == 2 * nd


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_gershgorin_bound(seed):
    _, hm = _random_instance(seed, n=2, d=1, L=2)
    dense = hm.dense()
    eigs = np.linalg.eigvalsh(dense)
    diag = np.diag(dense)
    nd2 = 2 * hm.n * hm.d
    assert eigs.min() >= diag.min() - nd2 - 1e-12
    assert eigs.max() <= diag.max() + nd2 + 1e-12


def test_assemble_rejects_duplicates_and_empty():
    p = ConfigPoint.origin(1, 1)
    with pytest.raises(ValueError):
        assemble([p, p], lambda x: 0.0, None, 0.0)
    with pytest.raises(ValueError):
        assemble([], lambda x: 0.0, None, 0.0)


def test_assemble_even_length_chain():
    # explicit site lists support boxes a centered cube cannot express
    chain = [ConfigPoint((i,), 1, 1) for i in range(4)]
    hm = assemble(chain, lambda x: 0.0, None, 0.0)
    expected = 2.0 * np.eye(4) - np.eye(4, k=1) - np.eye(4, k=-1)
    assert np.array_equal(hm.dense(), expected)


def test_rectangle_region_build():
    rect = Rectangle(((0,), (5,)), (1, 1))
    spec = DisorderSpec.bernoulli(0, 1, 0.5)
    real = sample(spec, single_particle_sites(rect), 4, 0)
    hm = build(rect, real)
    assert hm.size == 9
    assert hm.site_list == tuple(sites(rect))


def test_dump_coo_format():
    hm = _free_three_site()
    text = dump_coo(hm)
    lines = text.strip().split("\n")
    parsed = [line.split() for line in lines]
    assert all(len(p) == 3 for p in parsed)
    triples = [(int(r), int(c), float(v)) for r, c, v in parsed]
    assert triples == sorted(triples, key=lambda t: (t[0], t[1]))
    dense = np.zeros((3, 3))
    for r, c, v in triples:
        dense[r, c] = v
    assert np.array_equal(dense, hm.dense())
    # 17 significant digits survive a value that needs them
    cube = Cube(ConfigPoint.origin(1, 1), 0)
    hm2 = build(cube, DisorderRealization({(0,): 1 / 3}))
    value = float(dump_coo(hm2).split()[2])
    assert value == 2.0 + 1 / 3
