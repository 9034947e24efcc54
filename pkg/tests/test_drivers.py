import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from equipart._cplx import cscale
from equipart.drivers import (
    SolveReport,
    bisect_orthogonal,
    check_bisect_bounds,
    equipartition_fans,
    equipartition_fourfans,
    fan_family,
    fourfan_at,
    load_report,
    near_equipartition_2q,
    sectors2q_masses,
    sectors2q_planes,
    verify_report,
)
from equipart.errors import DimensionTooSmall, KTooLarge, NoConvergence
from equipart.frames import FrameSection
from equipart.measures import MassDistribution, halfspace_measure, sector_measures
from equipart.search import SearchConfig

from conftest import cloud, phase_symmetric


def centrally_symmetric(n, count, seed):
    pts = np.random.default_rng(seed).standard_normal((count, n))
    return MassDistribution(np.vstack([pts, -pts]))


def test_bisect_symmetric_instance_converges_at_first_start():
    mus = [centrally_symmetric(4, 50, 0), centrally_symmetric(4, 50, 1)]
    rep = bisect_orthogonal(mus, 3)
    assert rep.restarts_used == 1 and rep.defect == 0.0
    assert rep.extras["gram_error"] < 1e-12


def test_bisect_every_plane_bisects_first_measure():
    mus = [cloud(3, 80, 2, bandwidth=0.1), cloud(3, 80, 3, bandwidth=0.1, shift=1.0)]
    rep = bisect_orthogonal(mus, 1)
    for h in rep.partitions:
        assert abs(halfspace_measure(mus[0], h) / mus[0].total - 0.5) < 1e-12
    assert rep.defect <= 1e-6


def test_bisect_rejects_beyond_separation_bound():
    with pytest.raises(KTooLarge, match="ball-separation upper bound"):
        bisect_orthogonal([cloud(4, 20, 0), cloud(4, 20, 1)], 4)


def test_report_json_round_trip(tmp_path):
    mus = [cloud(2, 60, 4, bandwidth=0.1), cloud(2, 60, 5, bandwidth=0.1)]
    rep = bisect_orthogonal(mus, 1)
    path = tmp_path / "r.json"
    path.write_text(rep.to_json())
    back = load_report(path)
    assert back.kind == "bisect" and back.converged
    assert np.array_equal(back.witness, rep.witness)
    assert abs(verify_report(back, mus) - rep.defect) <= 1e-12
    d = json.loads(path.read_text())
    assert d["format_version"] == 1
    assert set(d["diagnostics"]) == {"iterations", "restarts_used", "converged"}


def test_report_rejects_unknown_version():
    with pytest.raises(ValueError, match="format_version"):
        SolveReport.from_dict({"format_version": 2})


def test_same_seed_reproduces_report_bitwise():
    mu = cloud(4, 100, 6, bandwidth=0.1)
    cfg = SearchConfig(seed=11)
    first = equipartition_fans([mu], 3, k=1, cfg=cfg).to_json()
    assert equipartition_fans([mu], 3, k=1, cfg=cfg).to_json() == first


def test_no_convergence_carries_report():
    mus = [cloud(2, 50, 7, bandwidth=0.1), cloud(2, 50, 8, bandwidth=0.1, shift=2.0)]
    with pytest.raises(NoConvergence) as info:
        bisect_orthogonal(mus, 1, SearchConfig(restarts=1, max_iters=1, tol=1e-300))
    assert info.value.report is not None and not info.value.report.converged


@pytest.mark.parametrize("section, q, n", [
    (FrameSection("identity"), 3, 4),
    (FrameSection("quaternionic", 2), 3, 4),
    (FrameSection("quaternionic", 2), 5, 8),
    (FrameSection("radon_hurwitz", 4), 3, 8),
])
def test_fan_family_relabeling(section, q, n):
    rng = np.random.default_rng(q * n)
    mu = MassDistribution(rng.standard_normal((120, n)))
    rs = section.exponents(q, n)
    for _ in range(10):
        u = rng.standard_normal(n + 2)
        u /= np.linalg.norm(u)
        base = [sector_measures(mu, f) for f in fan_family(u, section, q)]
        for j in range(1, q):
            moved = fan_family(cscale(u, np.exp(2j * np.pi * j / q)), section, q)
            for i, f in enumerate(moved):
                assert abs(sector_measures(mu, f)[0] - base[i][(j * rs[i]) % q]) < 1e-10 * mu.total


def test_fan_family_undefined_on_degenerate_circle():
    with pytest.raises(ValueError):
        fan_family(np.array([1.0, 0, 0, 0]), FrameSection("identity"), 3)


def test_fans_on_symmetric_cloud_pass_through_centre():
    mu = phase_symmetric(4)
    rep = equipartition_fans([mu], 3, k=2)
    assert rep.defect == 0.0 and rep.iterations == 1
    assert all(abs(f.offset) < 1e-12 for f in rep.partitions)
    assert rep.extras["hermitian_gram_error"] < 1e-12


def test_fans_real_independent_mode_reports_subset():
    mu = cloud(4, 200, 9, bandwidth=0.1)
    rep = equipartition_fans([mu], 3, mode="real_independent", k=2)
    assert rep.defect <= 1e-6
    assert len(rep.extras["independent_fans"]) == 1
    assert rep.extras["gram_error"] < 1e-10


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_fourfan_halves_always_balanced(seed):
    rng = np.random.default_rng(seed)
    mu = MassDistribution(rng.standard_normal((60, 4)), bandwidth=0.2)
    x = rng.standard_normal(4)
    m = sector_measures(mu, fourfan_at(mu, x / np.linalg.norm(x)))
    assert abs(m[0] + m[1] - 0.5 * mu.total) < 1e-9 * mu.total
    assert abs(m[1] + m[2] - 0.5 * mu.total) < 1e-9 * mu.total


def test_fourfans_quarter_smoothed_cloud():
    mu = cloud(4, 150, 10, bandwidth=0.1)
    rep = equipartition_fourfans(mu, k=2)
    assert rep.defect <= 1e-6
    assert np.allclose(rep.masses[0], mu.total / 4, atol=1e-6 * mu.total)


def test_fourfans_single_measure_only():
    with pytest.raises(KTooLarge):
        equipartition_fourfans([cloud(2, 10, 0), cloud(2, 10, 1)])


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_2q_antipodal_pairing_everywhere(seed):
    rng = np.random.default_rng(seed)
    mu = MassDistribution(rng.standard_normal((80, 4)), bandwidth=0.15)
    x = rng.standard_normal(4)
    masses, overlap = sectors2q_masses(mu, sectors2q_planes(mu, x / np.linalg.norm(x), 3))
    assert np.abs(masses[:3] - masses[3:]).max() < 1e-9 * mu.total
    # every point is covered, so total mass counts each overlap once per extra sector
    assert abs(masses.sum() - mu.total - 2 * overlap) < 1e-9 * mu.total


def test_2q_symmetric_instance():
    mu = phase_symmetric(4, base=10)
    rep = near_equipartition_2q(mu, 3)
    assert rep.defect == 0.0
    assert np.allclose(rep.masses, mu.total / 6)
    assert rep.extras["overlap_mass"] == 0.0


def test_2q_dimension_check():
    with pytest.raises(DimensionTooSmall):
        near_equipartition_2q(cloud(4, 10, 0), 5)


def test_check_bisect_bounds_names():
    with pytest.raises(KTooLarge, match="Radon-Hurwitz section bound"):
        check_bisect_bounds(10, 1, 16)
    with pytest.raises(KTooLarge, match="test-map dimension bound"):
        check_bisect_bounds(2, 3, 4)
    check_bisect_bounds(9, 1, 16)


@pytest.mark.parametrize("solve", [
    lambda mus, cfg: bisect_orthogonal(mus, 3, cfg),
    lambda mus, cfg: equipartition_fans(mus[:1], 3, k=2, cfg=cfg),
    lambda mus, cfg: equipartition_fourfans(mus[0], k=2, cfg=cfg),
    lambda mus, cfg: near_equipartition_2q(mus[0], 3, cfg),
], ids=["bisect", "fan", "fourfan", "sectors2q"])
def test_sharp_clouds_reach_one_percent(solve):
    rng = np.random.default_rng(21)
    mus = [MassDistribution(rng.standard_normal((300, 4))), MassDistribution(rng.standard_normal((300, 4)) + 1.0)]
    rep = solve(mus, SearchConfig(tol=1e-2))
    assert rep.defect <= 1e-2
    assert abs(verify_report(rep, mus[: len(rep.totals)]) - rep.defect) <= 1e-12
