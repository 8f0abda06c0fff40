"""End-to-end smoke tests for the Python bindings.

Each test drives one slice of the pipeline through values that are known
exactly or statistically pinned; heavy verification lives in the C++ suites.
"""

import math

import numpy as np
import pytest

import cyclap


def harmonic(n):
    return sum(1.0 / k for k in range(1, n + 1))


def test_solve_hand_checked_matrix():
    m = cyclap.CostMatrix(np.array([[4.0, 1.0, 3.0],
                                    [2.0, 0.0, -5.0],
                                    [-3.0, 2.0, 0.0]]))
    a = cyclap.solve(m)
    assert a.perm.map == [1, 2, 0]
    assert a.cost == pytest.approx(-7.0, abs=1e-12)
    assert cyclap.check_certificate(m, a)
    assert cyclap.assignment_cost(m, a.perm) == pytest.approx(a.cost)


def test_solver_matches_brute_force():
    dist = cyclap.EntryDistribution.uniform01()
    cfg = cyclap.EnsembleConfig(n=6, lambda_=0.6, dist=dist, samples=50,
                                master_seed=11)
    for index in range(50):
        m = cyclap.sample_matrix(cfg, index)
        fast = cyclap.solve(m)
        slow = cyclap.brute_force(m)
        assert fast.cost == pytest.approx(slow.assignment.cost, abs=1e-12)


def test_ensemble_symmetry_through_numpy():
    dist = cyclap.EntryDistribution.exponential1()
    sym = cyclap.sample_matrix(
        cyclap.EnsembleConfig(12, 1.0, dist, 1, 3), 0).to_numpy()
    assert np.array_equal(sym, sym.T)
    anti = cyclap.sample_matrix(
        cyclap.EnsembleConfig(12, -1.0, dist, 1, 3), 0).to_numpy()
    assert np.array_equal(anti, -anti.T)
    assert np.all(anti.diagonal() == 0.0)


def test_permutation_cycles():
    p = cyclap.Permutation([1, 2, 0, 4, 3, 5])
    s = cyclap.decompose(p)
    assert s.counts() == {1: 1, 2: 1, 3: 1}
    assert s.total_cycles() == 3
    assert s.weighted_total() == 6
    assert cyclap.decompose(p.inverse()).counts() == s.counts()
    with pytest.raises(ValueError):
        cyclap.Permutation([0, 0, 1])


def test_series_predictions():
    uniform = cyclap.QPair(1.0, 1.0)
    for k in (1, 2, 5, 12):
        assert cyclap.predicted_pk(uniform, 12, k) == pytest.approx(1.0 / k)
    assert cyclap.omega_limit(cyclap.QPair(0.0, 0.0)) == pytest.approx(
        math.exp(-1.5))
    long = cyclap.predicted_long_cycles(cyclap.QPair(0.0, 0.0), 200)
    assert long.asymptotic[0] == pytest.approx(math.exp(1.5))
    assert cyclap.nu_nk(10, 4) == math.factorial(10) // 4
    table = cyclap.SeriesTable(cyclap.QPair(1.0, 1.0), 8)
    assert table.s(8) == pytest.approx(1.0)
    assert cyclap.parisi_sum(3) == pytest.approx(1.0 + 0.25 + 1.0 / 9)


def test_theta_endpoints_and_slope():
    dist = cyclap.EntryDistribution.uniform01()
    assert cyclap.slope_alpha(dist) == pytest.approx(0.25)
    assert cyclap.slope_alpha(
        cyclap.EntryDistribution.exponential1()) == pytest.approx(0.5)
    t = cyclap.theta(-1.0, dist, 2000, seed=5)
    assert t.value == pytest.approx(0.5)


def test_run_cell_statistics_and_fit():
    dist = cyclap.EntryDistribution.uniform01()
    cell = cyclap.run_cell(n=10, lambda_=0.0, dist=dist, samples=2000,
                           seed=cyclap.cell_seed(1, 10, 0.0, dist))
    assert cell.error == ""
    assert cell.est.samples == 2000
    # Independent entries make every k*P_k equal 1 and <n_c> harmonic.
    assert abs(cell.est.mean_nc - harmonic(10)) < 5 * cell.est.stderr_nc
    assert cell.fit_plain is not None
    assert cell.fit_plain.q.q1 == pytest.approx(1.0, abs=0.2)
    total = sum(k * pk for k, pk in enumerate(cell.est.mean_pk))
    assert total == pytest.approx(10.0, abs=1e-9)


def test_run_cell_worker_invariance():
    dist = cyclap.EntryDistribution.exponential1()
    one = cyclap.run_cell(8, 0.5, dist, 600, seed=99, workers=1)
    two = cyclap.run_cell(8, 0.5, dist, 600, seed=99, workers=2)
    assert one.est.mean_pk == two.est.mean_pk
    assert one.est.mean_cost == two.est.mean_cost


def test_sweep_persistence_and_figures(tmp_path):
    out = tmp_path / "sweep"
    spec = cyclap.SweepSpec(n_list=[12], lambda_grid=[-0.5, 0.0, 0.5],
                            dist="uniform", samples=300, master_seed=7,
                            out_dir=str(out))
    cells = cyclap.run_sweep(spec)
    assert len(cells) == 3
    assert (out / "summary.csv").exists()
    reloaded = cyclap.load_results(str(out))
    assert len(reloaded) == 3
    by_lambda = {c.est.lambda_: c for c in reloaded}
    assert by_lambda[0.5].est.mean_pk == cells[2].est.mean_pk
    path = cyclap.emit_figure_data(reloaded, "p1", str(tmp_path))
    header = open(path).read().splitlines()
    assert header[0].startswith("# figure: p1")
    with pytest.raises(cyclap.FigureError):
        cyclap.emit_figure_data([], "p1", str(tmp_path))


def test_fit_round_trip():
    # Feed the model spectrum itself: the fit must return the weights.
    q = cyclap.QPair(0.7, 1.3)
    n = 40
    est = cyclap.SpectrumEstimate()
    est.n = n
    est.lambda_ = 0.0
    est.dist = "model"
    est.samples = 1000
    est.mean_pk = [0.0] + [cyclap.predicted_pk(q, n, k)
                           for k in range(1, n + 1)]
    est.stderr_pk = [0.0] + [1.0] * n
    fit = cyclap.fit_uncorrected(est)
    assert fit.q.q1 == pytest.approx(0.7, abs=1e-6)
    assert fit.q.q2 == pytest.approx(1.3, abs=1e-6)
    with pytest.raises(ValueError):
        bad = cyclap.SpectrumEstimate()
        bad.n = n
        bad.mean_pk = [0.0] + [float("nan")] * n
        bad.stderr_pk = [0.0] + [1.0] * n
        cyclap.fit_uncorrected(bad)


def test_validate_solver_exponential():
    report = cyclap.validate_solver(cyclap.EntryDistribution.exponential1(),
                                    [6], samples=4000, seed=13)
    assert report.has_parisi
    row = report.rows[0]
    assert row.parisi == pytest.approx(cyclap.parisi_sum(6))
    assert abs(row.z_parisi) < 5.0
