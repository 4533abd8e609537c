import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.stats import chisquare

from hawkcast.errors import DimensionMismatch, EmptyArchive
from hawkcast.mohho import (
    MohhoConfig,
    ParetoArchive,
    archive_update,
    dominates,
    grid_cells,
    leader_select,
    mohho_optimize,
    non_dominated_filter,
    removal_weight,
    selection_weight,
)

objective_vectors = arrays(float, 3, elements=st.integers(-5, 5).map(float))


def brute_force_front(points):
    return [p for i, p in enumerate(points)
            if not any(dominates(q, p) for j, q in enumerate(points) if j != i)]


def assert_pure(F):
    for i, j in itertools.permutations(range(len(F)), 2):
        assert not dominates(F[i], F[j])


def filled(objs, capacity=100):
    arch = ParetoArchive(capacity=capacity)
    objs = np.asarray(objs, dtype=float)
    return archive_update(arch, objs.copy(), objs, np.random.default_rng(0))


# -- dominance ----------------------------------------------------------------


def test_dominates_examples():
    assert dominates((1, 2), (2, 3))
    assert not dominates((1, 2), (1, 2))
    assert not dominates((1, 3), (2, 2)) and not dominates((2, 2), (1, 3))


def test_dominates_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        dominates((1, 2), (1, 2, 3))


@given(objective_vectors)
def test_dominance_irreflexive(a):
    assert not dominates(a, a)


@given(objective_vectors, objective_vectors)
def test_dominance_antisymmetric(a, b):
    assert not (dominates(a, b) and dominates(b, a))


@given(objective_vectors, objective_vectors, objective_vectors)
def test_dominance_transitive(a, b, c):
    if dominates(a, b) and dominates(b, c):
        assert dominates(a, c)


def test_filter_examples():
    got = non_dominated_filter([(1, 2), (2, 1), (2, 2)])
    assert sorted(map(tuple, got)) == [(1, 2), (2, 1)]
    np.testing.assert_array_equal(non_dominated_filter([(3, 4)]), [[3, 4]])
    same = np.ones((5, 2))
    np.testing.assert_array_equal(non_dominated_filter(same), same)


@given(st.integers(1, 200), st.integers(0, 2**32 - 1))
def test_filter_matches_brute_force(n, seed):
    # integer grid values force ties and duplicates
    pts = np.random.default_rng(seed).integers(0, 12, size=(n, 2)).astype(float)
    expected = brute_force_front(list(pts))
    got = non_dominated_filter(pts)
    assert sorted(map(tuple, got)) == sorted(map(tuple, expected))


# -- archive --------------------------------------------------------------------


def test_archive_dominating_insert():
    arch = filled([(1, 5), (2, 3), (4, 1)])
    archive_update(arch, [[0.0, 0.0]], [(0, 0)], np.random.default_rng(1))
    np.testing.assert_array_equal(arch.objectives, [[0, 0]])


def test_archive_dominated_insert():
    arch = filled([(1, 5), (2, 3), (4, 1)])
    before = arch.objectives.copy()
    archive_update(arch, [[0.0, 0.0]], [(3, 4)], np.random.default_rng(1))
    np.testing.assert_array_equal(arch.objectives, before)


def test_archive_rejects_exact_duplicate():
    arch = filled([(1, 5), (4, 1)])
    archive_update(arch, [[9.0, 9.0]], [(1, 5)], np.random.default_rng(0))
    assert len(arch) == 2


def test_grid_occupancy_consistent():
    arch = filled([(0, 1), (0.01, 0.99), (1, 0), (0.5, 0.5)])
    assert sum(arch.grid_occupancy.values()) == len(arch)
    assert set(arch.cells) == set(arch.grid_occupancy)


@given(st.lists(st.integers(0, 2**32 - 1), min_size=1, max_size=8), st.integers(1, 15))
def test_archive_purity_and_capacity(seeds, capacity):
    arch = ParetoArchive(capacity=capacity)
    for s in seeds:
        rng = np.random.default_rng(s)
        F = rng.random((rng.integers(1, 40), 2))
        archive_update(arch, F.copy(), F, rng)
        assert len(arch) <= capacity
        assert_pure(arch.objectives)
        assert sum(arch.grid_occupancy.values()) == len(arch)


# three mutually non-dominated points; the first two share a grid cell
CROWDED = np.array([(0.0, 1.0), (0.01, 0.99), (1.0, 0.0)])


def test_crowded_fixture_cells():
    cells = grid_cells(CROWDED, 10, 0.1)
    assert cells[0] == cells[1] != cells[2]


def test_removal_weights():
    assert removal_weight(4, 2.0) == 2.0
    assert removal_weight(1, 2.0) == 0.5
    assert removal_weight(4, 2.0) / removal_weight(1, 2.0) == pytest.approx(4.0)
    assert selection_weight(1, 2.0) / selection_weight(4, 2.0) == pytest.approx(4.0)


def eviction_frequencies(trials=10_000, seed=0):
    rng = np.random.default_rng(seed)
    evicted = Counter()
    for _ in range(trials):
        arch = archive_update(ParetoArchive(capacity=2), CROWDED.copy(), CROWDED, rng)
        assert len(arch) == 2
        kept = {tuple(o) for o in arch.objectives}
        (gone,) = [i for i, p in enumerate(map(tuple, CROWDED)) if p not in kept]
        evicted[gone] += 1
    return np.array([evicted[i] for i in range(3)]) / trials


def test_capacity_eviction_prefers_dense_cell():
    freq = eviction_frequencies()
    # weights N/c: 2/2, 2/2, 1/2 -> probabilities 0.4, 0.4, 0.2
    assert freq[2] < min(freq[0], freq[1])
    np.testing.assert_allclose(freq, [0.4, 0.4, 0.2], rtol=0.05)


# four members packed into one cell plus one isolated member
CLUSTER = np.array([(0.0, 1.0), (0.005, 0.995), (0.01, 0.99), (0.015, 0.985), (1.0, 0.0)])


def leader_frequencies(objs, draws=10_000, seed=0):
    arch = filled(objs)
    rng = np.random.default_rng(seed)
    picks = Counter(tuple(leader_select(arch, rng).objectives) for _ in range(draws))
    return arch, np.array([picks[tuple(o)] for o in arch.objectives]) / draws


def test_leader_prefers_sparse_cell():
    arch, freq = leader_frequencies(CLUSTER)
    occ = arch.occupancy()
    assert sorted(occ) == [1, 4, 4, 4, 4]
    sparse = freq[occ == 1][0]
    dense_member = freq[occ == 4].mean()
    assert sparse / dense_member == pytest.approx(4.0, rel=0.05)
    assert sparse == pytest.approx(0.5, rel=0.05)


def test_leader_uniform_when_occupancy_equal():
    line = np.array([(0.0, 1.0), (0.25, 0.75), (0.5, 0.5), (0.75, 0.25), (1.0, 0.0)])
    arch, freq = leader_frequencies(line, seed=5)
    assert set(arch.occupancy()) == {1.0}
    assert chisquare(freq * 10_000).pvalue > 0.01


def test_leader_singleton_and_empty():
    arch = filled([(2.0, 3.0)])
    rng = np.random.default_rng(0)
    assert all(tuple(leader_select(arch, rng).objectives) == (2.0, 3.0) for _ in range(20))
    with pytest.raises(EmptyArchive):
        leader_select(ParetoArchive(), rng)


# -- optimizer ------------------------------------------------------------------


def zdt1_small(x):
    g = 1 + 9 * np.sum(x[1:]) / (len(x) - 1)
    return np.array([x[0], g * (1 - np.sqrt(x[0] / g))])


def _config(seed=0, T=30, D=5, **kw):
    return MohhoConfig(20, T, np.zeros(D), np.ones(D), seed=seed, **kw)


def test_mohho_snapshots_pure_and_bounded():
    res = mohho_optimize(zdt1_small, _config(archive_capacity=25))
    assert len(res.snapshots) == 30
    for F in res.snapshots:
        assert 0 < len(F) <= 25
        assert_pure(F)
    assert all(v > 0 for v in res.strategy_counts.values())


def test_mohho_deterministic():
    a = mohho_optimize(zdt1_small, _config(seed=3))
    b = mohho_optimize(zdt1_small, _config(seed=3))
    assert a.archive.objectives.tobytes() == b.archive.objectives.tobytes()
    assert a.archive.positions.tobytes() == b.archive.positions.tobytes()


def test_mohho_coincident_objectives_collapse():
    def twin(x):
        s = float(np.sum(x**2))
        return np.array([s, s])

    cfg = MohhoConfig(30, 200, np.full(5, -10.0), np.full(5, 10.0), seed=0)
    F = mohho_optimize(twin, cfg, keep_snapshots=False).archive.objectives
    spread = np.max(np.abs(F[:, None, :] - F[None, :, :]))
    assert spread < 1e-2


def test_mohho_positions_in_box():
    res = mohho_optimize(zdt1_small, _config(T=20))
    P = res.archive.positions
    assert np.all(P >= 0) and np.all(P <= 1)


def test_config_requires_c_above_one():
    with pytest.raises(ValueError):
        _config(crowding_constant=1.0)
