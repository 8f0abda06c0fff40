#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <map>
#include <optional>
#include <utility>

#include "cyclap/analytic.hpp"
#include "cyclap/cycles.hpp"
#include "cyclap/distribution.hpp"
#include "cyclap/ensemble.hpp"
#include "cyclap/fitting.hpp"
#include "cyclap/harness.hpp"
#include "cyclap/lap.hpp"
#include "cyclap/permutation.hpp"
#include "cyclap/rng.hpp"

namespace py = pybind11;
using namespace cyclap;

namespace {

// Matrices cross the boundary by copy in both directions: views into
// std::vector storage would dangle once the owner moves.
py::array_t<double> matrix_to_numpy(const CostMatrix& m) {
  const auto n = static_cast<py::ssize_t>(m.n());
  py::array_t<double> out({n, n});
  std::memcpy(out.mutable_data(), m.data(),
              sizeof(double) * static_cast<std::size_t>(n) * n);
  return out;
}

CostMatrix matrix_from_numpy(const py::array_t<double, py::array::c_style |
                                                           py::array::forcecast>& a,
                             double lambda) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1) || a.shape(0) < 1)
    throw std::invalid_argument("cost matrix must be square and nonempty");
  const int n = static_cast<int>(a.shape(0));
  CostMatrix m(n, lambda);
  std::memcpy(m.data(), a.data(),
              sizeof(double) * static_cast<std::size_t>(n) * n);
  return m;
}

std::map<int, int> spectrum_counts(const CycleSpectrum& s) {
  std::map<int, int> out;
  s.for_each([&](int k, int c) { out[k] = c; });
  return out;
}

EntryDistribution dist_by_name(const std::string& name) {
  if (name == "uniform") return EntryDistribution::uniform01();
  if (name == "exp") return EntryDistribution::exponential1();
  throw std::invalid_argument("unknown distribution: " + name +
                              " (expected 'uniform' or 'exp')");
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() =
      "Assignment problems on the matrix family d = R + lambda*R^T: "
      "exact solver, cycle statistics, series predictions, weight fits, "
      "and the Monte Carlo harness.";

  py::register_exception<FitError>(mod, "FitError");
  py::register_exception<FigureError>(mod, "FigureError");

  py::class_<rng::RandomStream>(mod, "RandomStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"),
           py::arg("stream") = 0)
      .def("uniform01", &rng::RandomStream::uniform01);

  py::class_<EntryDistribution>(mod, "EntryDistribution")
      .def_static("uniform01", &EntryDistribution::uniform01)
      .def_static("exponential1", &EntryDistribution::exponential1)
      .def_property_readonly("id", &EntryDistribution::id)
      .def_property_readonly("support_lo", &EntryDistribution::support_lo)
      .def_property_readonly("support_hi", &EntryDistribution::support_hi)
      .def("density", &EntryDistribution::density, py::arg("x"))
      .def("sample", &EntryDistribution::sample, py::arg("stream"))
      .def("linear_coefficient_at_min",
           &EntryDistribution::linear_coefficient_at_min)
      .def("__repr__", [](const EntryDistribution& d) {
        return "EntryDistribution('" + d.id() + "')";
      });

  py::class_<Permutation>(mod, "Permutation")
      .def(py::init([](std::vector<int> m) {
             return Permutation::checked(std::move(m));
           }),
           py::arg("map"))
      .def_static("identity", &Permutation::identity, py::arg("n"))
      .def_readonly("map", &Permutation::map)
      .def("inverse", &Permutation::inverse)
      .def("__len__", &Permutation::size)
      .def("__call__", &Permutation::operator(), py::arg("i"))
      .def("__repr__", [](const Permutation& p) {
        std::string s = "Permutation([";
        for (int i = 0; i < p.size(); ++i)
          s += (i ? ", " : "") + std::to_string(p.map[i]);
        return s + "])";
      });

  py::class_<CycleSpectrum>(mod, "CycleSpectrum")
      .def_property_readonly("n", &CycleSpectrum::n)
      .def("count", &CycleSpectrum::count, py::arg("k"))
      .def("total_cycles", &CycleSpectrum::total_cycles)
      .def("weighted_total", &CycleSpectrum::weighted_total)
      .def("counts", &spectrum_counts,
           "Nonzero cycle counts as {length: count}.");

  mod.def("decompose", &decompose, py::arg("perm"),
          "Cycle spectrum of a permutation.");

  py::class_<CostMatrix>(mod, "CostMatrix")
      .def(py::init(&matrix_from_numpy), py::arg("entries"),
           py::arg("lambda_") = 0.0,
           "Copy a square numpy array; lambda_ is provenance metadata.")
      .def_property_readonly("n", &CostMatrix::n)
      .def_property_readonly("lambda_", &CostMatrix::lambda)
      .def("to_numpy", &matrix_to_numpy)
      .def("at", [](const CostMatrix& m, int i, int j) {
        if (i < 0 || j < 0 || i >= m.n() || j >= m.n())
          throw py::index_error("matrix index out of range");
        return m.at(i, j);
      });

  py::class_<EnsembleConfig>(mod, "EnsembleConfig")
      .def(py::init<int, double, EntryDistribution, long, std::uint64_t>(),
           py::arg("n"), py::arg("lambda_"), py::arg("dist"),
           py::arg("samples"), py::arg("master_seed"))
      .def_readonly("n", &EnsembleConfig::n)
      .def_readonly("lambda_", &EnsembleConfig::lambda)
      .def_readonly("samples", &EnsembleConfig::samples)
      .def_readonly("master_seed", &EnsembleConfig::master_seed);

  mod.def("sample_matrix", &sample_matrix, py::arg("config"), py::arg("index"),
          py::call_guard<py::gil_scoped_release>(),
          "The index-th matrix of the config's reproducible stream.");
  mod.def("transform_equivalence", &transform_equivalence, py::arg("m"),
          py::arg("alpha"), py::arg("c"), py::arg("pi"), py::arg("transpose"));

  py::class_<Assignment>(mod, "Assignment")
      .def_readonly("perm", &Assignment::perm)
      .def_readonly("cost", &Assignment::cost)
      .def_readonly("dual_u", &Assignment::dual_u)
      .def_readonly("dual_v", &Assignment::dual_v);

  py::class_<BruteForceResult>(mod, "BruteForceResult")
      .def_readonly("assignment", &BruteForceResult::assignment)
      .def_readonly("tie", &BruteForceResult::tie);

  mod.def("solve", py::overload_cast<const CostMatrix&>(&solve), py::arg("m"),
          py::call_guard<py::gil_scoped_release>(),
          "Exact minimum-cost assignment with dual certificate.");
  mod.def("brute_force", &brute_force, py::arg("m"),
          py::call_guard<py::gil_scoped_release>(),
          "Exhaustive oracle, n <= 10.");
  mod.def("assignment_cost", &assignment_cost, py::arg("m"), py::arg("perm"));
  mod.def("check_certificate", &check_certificate, py::arg("m"), py::arg("a"));

  py::class_<QPair>(mod, "QPair")
      .def(py::init([](double q1, double q2) {
             return QPair{q1, q2};
           }),
           py::arg("q1") = 1.0, py::arg("q2") = 1.0)
      .def_readwrite("q1", &QPair::q1)
      .def_readwrite("q2", &QPair::q2)
      .def("__repr__", [](const QPair& q) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "QPair(q1=%g, q2=%g)", q.q1, q.q2);
        return std::string(buf);
      });

  py::class_<SeriesTable>(mod, "SeriesTable")
      .def(py::init<QPair, int>(), py::arg("q"), py::arg("n_max"))
      .def_property_readonly("q", &SeriesTable::q)
      .def_property_readonly("n_max", &SeriesTable::n_max)
      .def("a", [](const SeriesTable& t, int m) {
        if (m < 0 || m > t.n_max()) throw py::index_error("m out of range");
        return static_cast<double>(t.a(m));
      })
      .def("s", [](const SeriesTable& t, int m) {
        if (m < 0 || m > t.n_max()) throw py::index_error("m out of range");
        return static_cast<double>(t.s(m));
      });

  mod.def("omega_limit", &omega_limit, py::arg("q"));
  mod.def("predicted_pk",
          py::overload_cast<QPair, int, int>(&predicted_pk), py::arg("q"),
          py::arg("n"), py::arg("k"),
          "Model expectation of the k-cycle count in dimension n.");

  py::class_<LongCyclePrediction>(mod, "LongCyclePrediction")
      .def_property_readonly("k",
                             [](const LongCyclePrediction& p) {
                               return std::vector<int>(p.k.begin(), p.k.end());
                             })
      .def_property_readonly("asymptotic",
                             [](const LongCyclePrediction& p) {
                               return std::vector<double>(p.asymptotic.begin(),
                                                          p.asymptotic.end());
                             })
      .def_property_readonly("exact", [](const LongCyclePrediction& p) {
        return std::vector<double>(p.exact.begin(), p.exact.end());
      });

  mod.def("predicted_long_cycles", &predicted_long_cycles, py::arg("q"),
          py::arg("n"), "k*P_k for the four longest cycle lengths.");
  mod.def("nu_nk", &nu_nk, py::arg("n"), py::arg("k"),
          "Number of k-cycles over all of S_n, exactly n!/k.");
  mod.def("slope_alpha", &slope_alpha, py::arg("dist"),
          py::call_guard<py::gil_scoped_release>());

  py::class_<ThetaEstimate>(mod, "ThetaEstimate")
      .def_readonly("value", &ThetaEstimate::value)
      .def_readonly("stderr_value", &ThetaEstimate::stderr_value)
      .def_readonly("samples", &ThetaEstimate::samples);

  mod.def("theta", &theta, py::arg("lambda_"), py::arg("dist"),
          py::arg("samples"), py::arg("seed"),
          py::call_guard<py::gil_scoped_release>(),
          "Monte Carlo Theta(lambda); -dTheta/dlambda at 0 is slope_alpha.");

  // Writable plain-data bag so spectra computed outside run_cell can still
  // be fitted from Python.
  py::class_<SpectrumEstimate>(mod, "SpectrumEstimate")
      .def(py::init<>())
      .def_readwrite("n", &SpectrumEstimate::n)
      .def_readwrite("lambda_", &SpectrumEstimate::lambda)
      .def_readwrite("dist", &SpectrumEstimate::dist)
      .def_readwrite("samples", &SpectrumEstimate::samples)
      .def_readwrite("mean_pk", &SpectrumEstimate::mean_pk)
      .def_readwrite("stderr_pk", &SpectrumEstimate::stderr_pk)
      .def_readwrite("mean_nc", &SpectrumEstimate::mean_nc)
      .def_readwrite("stderr_nc", &SpectrumEstimate::stderr_nc)
      .def_readwrite("mean_cost", &SpectrumEstimate::mean_cost)
      .def_readwrite("stderr_cost", &SpectrumEstimate::stderr_cost);

  py::class_<FitResult>(mod, "FitResult")
      .def_readonly("q", &FitResult::q)
      .def_readonly("iterations", &FitResult::iterations)
      .def_readonly("residual", &FitResult::residual)
      .def_readonly("corrected", &FitResult::corrected)
      .def_readonly("p2_correction", &FitResult::p2_correction)
      .def_readonly("correction_clamped", &FitResult::correction_clamped)
      .def_readonly("q1_err", &FitResult::q1_err)
      .def_readonly("q2_err", &FitResult::q2_err);

  mod.def("fit_uncorrected", &fit_uncorrected, py::arg("est"),
          "Invert (P1, P2) for the cycle weights.");
  mod.def("fit_corrected", &fit_corrected, py::arg("est"),
          "Weight fit with the broken-even-cycle correction.");

  py::class_<FitPoint>(mod, "FitPoint")
      .def(py::init([](double lambda, int n, FitResult fit) {
             return FitPoint{lambda, n, std::move(fit)};
           }),
           py::arg("lambda_"), py::arg("n"), py::arg("fit"))
      .def_readonly("lambda_", &FitPoint::lambda)
      .def_readonly("n", &FitPoint::n)
      .def_readonly("fit", &FitPoint::fit);

  py::class_<RelationRow>(mod, "RelationRow")
      .def_readonly("lambda_", &RelationRow::lambda)
      .def_readonly("q1", &RelationRow::q1)
      .def_readonly("q2", &RelationRow::q2)
      .def_readonly("model_q2", &RelationRow::model_q2)
      .def_readonly("abs_dev", &RelationRow::abs_dev)
      .def_readonly("rel_dev", &RelationRow::rel_dev);

  py::class_<RelationReport>(mod, "RelationReport")
      .def_readonly("negative", &RelationReport::negative)
      .def_readonly("positive", &RelationReport::positive)
      .def_readonly("max_rel_dev_negative",
                    &RelationReport::max_rel_dev_negative)
      .def_readonly("max_rel_dev_positive",
                    &RelationReport::max_rel_dev_positive);

  mod.def("relation_check", &relation_check, py::arg("fits"),
          "Tabulate the q2 ~ q1 relations on both signs of lambda.");

  py::class_<ScalingRow>(mod, "ScalingRow")
      .def_readonly("a", &ScalingRow::a)
      .def_readonly("b", &ScalingRow::b)
      .def_readonly("diff", &ScalingRow::diff)
      .def_readonly("combined_err", &ScalingRow::combined_err)
      .def_readonly("z", &ScalingRow::z);

  py::class_<CollapsePoint>(mod, "CollapsePoint")
      .def_readonly("lambda_n", &CollapsePoint::lambda_n)
      .def_readonly("q1", &CollapsePoint::q1)
      .def_readonly("q1_err", &CollapsePoint::q1_err);

  py::class_<ScalingReport>(mod, "ScalingReport")
      .def_readonly("pairs", &ScalingReport::pairs)
      .def_readonly("collapse", &ScalingReport::collapse);

  mod.def("scaling_check", &scaling_check, py::arg("pairs"),
          "Check q1(lambda, n) = q1(mu*lambda, n/mu) on matched products.");

  py::class_<CellResult>(mod, "CellResult")
      .def_readonly("est", &CellResult::est)
      .def_readonly("seed", &CellResult::seed)
      .def_readonly("fit_plain", &CellResult::fit_plain)
      .def_readonly("fit_corrected", &CellResult::fit_corrected)
      .def_readonly("wall_seconds", &CellResult::wall_seconds)
      .def_readonly("error", &CellResult::error);

  mod.def("cell_seed", &cell_seed, py::arg("master_seed"), py::arg("n"),
          py::arg("lambda_"), py::arg("dist"));
  mod.def("run_cell", &run_cell, py::arg("n"), py::arg("lambda_"),
          py::arg("dist"), py::arg("samples"), py::arg("seed"),
          py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>(),
          "Monte Carlo one (n, lambda) cell: sample, solve, decompose, fit.");

  py::class_<SweepSpec>(mod, "SweepSpec")
      .def(py::init([](std::vector<int> n_list, std::vector<double> lambda_grid,
                       const std::string& dist, long samples,
                       std::uint64_t master_seed, int workers,
                       std::string out_dir) {
             SweepSpec s;
             s.n_list = std::move(n_list);
             s.lambda_grid = std::move(lambda_grid);
             s.dist = dist_by_name(dist);
             s.samples = samples;
             s.master_seed = master_seed;
             s.workers = workers;
             s.out_dir = std::move(out_dir);
             return s;
           }),
           py::arg("n_list"), py::arg("lambda_grid"),
           py::arg("dist") = "uniform", py::arg("samples") = 10000,
           py::arg("master_seed") = 1, py::arg("workers") = 1,
           py::arg("out_dir") = std::string());

  mod.def("run_sweep", &run_sweep, py::arg("spec"),
          py::call_guard<py::gil_scoped_release>(),
          "Run (or resume) a persisted sweep over the (n, lambda) grid.");
  mod.def("load_results", &load_results, py::arg("dir"),
          py::call_guard<py::gil_scoped_release>());

  mod.def("all_figure_ids", [] {
    std::vector<std::string> out;
    for (const auto id : all_figure_ids()) out.emplace_back(to_string(id));
    return out;
  });
  mod.def(
      "emit_figure_data",
      [](const std::vector<CellResult>& cells, const std::string& id,
         const std::string& out_dir) {
        const auto fid = figure_id_from_string(id);
        if (!fid) throw std::invalid_argument("unknown figure id: " + id);
        return emit_figure_data(cells, *fid, out_dir);
      },
      py::arg("cells"), py::arg("figure"), py::arg("out_dir"),
      "Write fig_<id>.csv from sweep cells; returns the path.");

  py::class_<ValidationRow>(mod, "ValidationRow")
      .def_readonly("n", &ValidationRow::n)
      .def_readonly("mean_cost", &ValidationRow::mean_cost)
      .def_readonly("stderr_cost", &ValidationRow::stderr_cost)
      .def_readonly("parisi", &ValidationRow::parisi)
      .def_readonly("z_parisi", &ValidationRow::z_parisi)
      .def_readonly("expansion", &ValidationRow::expansion)
      .def_readonly("z_expansion", &ValidationRow::z_expansion);

  py::class_<ValidationReport>(mod, "ValidationReport")
      .def_readonly("dist", &ValidationReport::dist)
      .def_readonly("samples", &ValidationReport::samples)
      .def_readonly("seed", &ValidationReport::seed)
      .def_readonly("has_parisi", &ValidationReport::has_parisi)
      .def_readonly("a", &ValidationReport::a)
      .def_readonly("rows", &ValidationReport::rows);

  mod.def("validate_solver", &validate_solver, py::arg("dist"),
          py::arg("n_list"), py::arg("samples"), py::arg("seed"),
          py::call_guard<py::gil_scoped_release>(),
          "Mean optimal cost against the exact series and 1/n expansion.");
  mod.def("parisi_sum", &parisi_sum, py::arg("n"));
  mod.def("cost_expansion", &cost_expansion, py::arg("n"), py::arg("a"));
}
