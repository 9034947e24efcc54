import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from equipart._cplx import cscale, mul_i
from equipart.errors import (
    BudgetExceeded,
    DegenerateRegion,
    NoConvergence,
    NotEquivariantError,
    NotOddError,
)
from equipart.search import (
    SearchConfig,
    i_odd_zero_search,
    is_odd_prime,
    odd_zero_search,
    orbit_coincidence_search,
    orbit_values,
    sphere_starts,
    weighted_orbit_sums,
)


def test_config_validation():
    for kw in (dict(restarts=0), dict(max_iters=0), dict(tol=0.0), dict(degenerate_guard=1.0), dict(workers=0)):
        with pytest.raises(ValueError):
            SearchConfig(**kw)
    assert SearchConfig().resolved_tol(True) == 1e-3
    assert SearchConfig().resolved_tol(False) == 1e-6
    assert SearchConfig(tol=0.1).resolved_tol(True) == 0.1


def test_sphere_starts_are_unit_and_seeded():
    a = sphere_starts(5, 20, seed=3)
    assert np.array_equal(a[0], np.eye(5)[0])
    assert np.allclose(np.linalg.norm(a, axis=1), 1.0)
    assert np.array_equal(a, sphere_starts(5, 20, seed=3))
    assert not np.array_equal(a, sphere_starts(5, 20, seed=4))


def test_odd_zero_of_linear_map():
    res = odd_zero_search(lambda x: x[:2], 3, tol=1e-10)
    assert res.converged
    assert np.abs(res.witness[:2]).max() <= 1e-10
    assert abs(abs(res.witness[2]) - 1) < 1e-9


def test_zero_map_accepts_first_iterate():
    res = odd_zero_search(lambda x: np.zeros(2), 4)
    assert res.iterations == 1 and res.restarts_used == 1
    assert np.array_equal(res.witness, np.eye(4)[0])


def test_non_odd_map_rejected():
    with pytest.raises(NotOddError):
        odd_zero_search(lambda x: x[:1] ** 2 + 1.0, 3)


def test_odd_budget():
    with pytest.raises(BudgetExceeded):
        odd_zero_search(lambda x: x, 3)


def test_i_odd_example():
    def f(x):
        z1, z2 = complex(x[0], x[1]), complex(x[2], x[3])
        return np.array([(z1 * z1).real, (z1 * z1).imag, (z1 * z2).real])

    res = i_odd_zero_search(f, 4, SearchConfig(tol=1e-12))
    assert abs(complex(res.witness[0], res.witness[1])) <= 1e-5


def test_i_odd_rejects_merely_odd_map():
    with pytest.raises(NotEquivariantError):
        i_odd_zero_search(lambda x: x[:1], 4)
    with pytest.raises(ValueError):
        i_odd_zero_search(lambda x: x[:1], 3)


def test_no_convergence_carries_result():
    def f(x):
        return np.array([x[0] ** 3 - 0.4 * x[0] + 0.05 * x[1]])

    # a zero exists, but not to within 1e-300 after one restart
    with pytest.raises(NoConvergence) as info:
        odd_zero_search(f, 2, SearchConfig(restarts=1, max_iters=1), tol=1e-300)
    assert info.value.result is not None


@pytest.mark.parametrize("q, expected", [(2, False), (3, True), (4, False), (5, True), (9, False),
                                         (11, True), (15, False), (17, True)])
def test_is_odd_prime(q, expected):
    assert is_odd_prime(q) is expected


def test_orbit_constant_first_iterate():
    res = orbit_coincidence_search(lambda u: np.array([1.0]), 3, 1)
    assert res.iterations == 1 and res.restarts_used == 1


def test_orbit_finds_coincidence_of_generic_map():
    def f(u):
        return np.array([u[0] * u[2] + 0.3 * u[3] - 0.2 * u[1] ** 2])

    res = orbit_coincidence_search(f, 3, 1, SearchConfig(tol=1e-10))
    vals = orbit_values(f, res.witness, 3)
    assert np.abs(vals - vals[0]).max() <= 1e-10
    assert np.linalg.norm(res.witness[2:]) >= 0.05
    assert np.abs(res.diagnostics["weighted_sums"]).max() < 1e-9


def test_orbit_rejects_bad_q_and_budget():
    with pytest.raises(ValueError):
        orbit_coincidence_search(lambda u: u[:1], 4, 2)
    with pytest.raises(BudgetExceeded):
        orbit_coincidence_search(lambda u: u[:2], 5, 2)


def test_orbit_degenerate_region_reported():
    cfg = SearchConfig(restarts=4, tol=1e-6, max_iters=300)
    with pytest.raises(DegenerateRegion):
        orbit_coincidence_search(lambda u: np.array([1000.0 * u[2]]), 3, 1, cfg)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.integers(0, 10_000))
def test_weighted_sums_vanish_iff_constant_orbit(q, seed):
    rng = np.random.default_rng(seed)
    const = np.tile(rng.standard_normal(3), (q, 1))
    assert np.abs(weighted_orbit_sums(const, q)).max() < 1e-12
    noisy = const + rng.standard_normal((q, 3))
    assert np.abs(weighted_orbit_sums(noisy, q)).max() > 1e-6


def test_orbit_values_uses_complex_scalar_action():
    u = np.array([1.0, 0.0, 0.0, 1.0])
    vals = orbit_values(lambda v: v, u, 3)
    assert np.allclose(vals[1], cscale(u, np.exp(2j * np.pi / 3)))
    assert np.allclose(orbit_values(lambda v: v, u, 5)[0], u)
    assert np.allclose(mul_i(u), cscale(u, 1j))


@pytest.mark.parametrize("workers", [1, 3])
def test_reproducible_for_fixed_seed_and_workers(workers):
    def f(x):
        return np.array([np.sin(3 * x[0]) + x[1] ** 3, x[2] * x[0] ** 2 + x[1]])

    cfg = SearchConfig(seed=5, workers=workers, tol=1e-9)
    a = odd_zero_search(f, 3, cfg)
    b = odd_zero_search(f, 3, cfg)
    assert np.array_equal(a.witness, b.witness) and a.iterations == b.iterations
