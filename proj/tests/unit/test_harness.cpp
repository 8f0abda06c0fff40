#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclap/harness.hpp"
#include "doctest.h"

using namespace cyclap;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("cyclap_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cell seeds separate cells and respect the master seed") {
  const auto u = EntryDistribution::uniform01();
  const auto e = EntryDistribution::exponential1();
  const auto base = cell_seed(1, 40, 0.5, u);
  CHECK(cell_seed(1, 40, 0.5, u) == base);
  CHECK(cell_seed(2, 40, 0.5, u) != base);
  CHECK(cell_seed(1, 41, 0.5, u) != base);
  CHECK(cell_seed(1, 40, 0.25, u) != base);
  CHECK(cell_seed(1, 40, 0.5, e) != base);
  // 0.0 and -0.0 hash alike so resumed grids match either spelling.
  CHECK(cell_seed(1, 40, 0.0, u) == cell_seed(1, 40, -0.0, u));
}

TEST_CASE("run_cell statistics are reproducible and worker-invariant") {
  const auto dist = EntryDistribution::uniform01();
  const auto a = run_cell(15, 0.3, dist, 600, 99, 1);
  REQUIRE(a.error.empty());
  CHECK(a.est.samples == 600);
  CHECK(a.est.n == 15);

  const auto b = run_cell(15, 0.3, dist, 600, 99, 2);
  const auto c = run_cell(15, 0.3, dist, 600, 99, 3);
  REQUIRE(b.error.empty());
  REQUIRE(c.error.empty());
  for (int k = 1; k <= 15; ++k) {
    CHECK(a.est.mean_pk[k] == b.est.mean_pk[k]);
    CHECK(a.est.mean_pk[k] == c.est.mean_pk[k]);
    CHECK(a.est.stderr_pk[k] == b.est.stderr_pk[k]);
  }
  CHECK(a.est.mean_cost == b.est.mean_cost);
  CHECK(a.est.mean_nc == c.est.mean_nc);

  // Partition identity carries over to the means.
  double sum = 0.0;
  for (int k = 1; k <= 15; ++k) sum += k * a.est.mean_pk[k];
  CHECK(sum == doctest::Approx(15.0).epsilon(1e-12));
}

TEST_CASE("run_cell fits are attached when the spectra support them") {
  const auto cell = run_cell(30, 0.0, EntryDistribution::exponential1(), 400,
                             7, 2);
  REQUIRE(cell.error.empty());
  REQUIRE(cell.fit_plain.has_value());
  // Independent entries sit near the uniform measure on permutations.
  CHECK(cell.fit_plain->q.q1 == doctest::Approx(1.0).epsilon(0.35));
  CHECK(cell.seed == 7);  // run_cell records the seed it was handed
}

TEST_CASE("exact cost facts") {
  CHECK(parisi_sum(1) == doctest::Approx(1.0));
  CHECK(parisi_sum(2) == doctest::Approx(1.25));
  CHECK(parisi_sum(10) == doctest::Approx(1.549767731166541).epsilon(1e-15));
  CHECK(parisi_sum(50) == doctest::Approx(1.625132733621529).epsilon(1e-15));
  CHECK(parisi_sum(100) == doctest::Approx(1.634983900184893).epsilon(1e-15));

  // The 1/n expansion lands on the same values to its own accuracy.
  const double z2 = 1.6449340668482264;
  const double z3 = 1.2020569031595943;
  CHECK(cost_expansion(100, 1.0) == doctest::Approx(z2 - 1.0 / 100.0));
  CHECK(cost_expansion(50, 0.0) ==
        doctest::Approx(z2 - (2.0 * z3 + 1.0) / 50.0));
  CHECK(std::abs(cost_expansion(100, 1.0) - parisi_sum(100)) < 2e-4);
}

TEST_CASE("validate_solver scores the exponential cost against both facts") {
  const auto report = validate_solver(EntryDistribution::exponential1(),
                                      {8, 16}, 800, 5);
  CHECK(report.has_parisi);
  CHECK(report.a == doctest::Approx(1.0));
  REQUIRE(report.rows.size() == 2);
  for (const auto& row : report.rows) {
    CHECK(row.stderr_cost > 0.0);
    CHECK(std::abs(row.z_parisi) < 4.0);
    CHECK(row.parisi == doctest::Approx(parisi_sum(row.n)));
  }
}

TEST_CASE("sweep writes resumable artifacts") {
  TempDir dir;
  SweepSpec spec;
  spec.n_list = {10, 14};
  spec.lambda_grid = {-0.5, 0.0};
  spec.dist = EntryDistribution::uniform01();
  spec.samples = 300;
  spec.master_seed = 2024;
  spec.workers = 2;
  spec.out_dir = dir.str();

  const auto cells = run_sweep(spec);
  REQUIRE(cells.size() == 4);
  for (const auto& c : cells) CHECK(c.error.empty());
  CHECK(fs::exists(dir.path / "spectra.csv"));
  CHECK(fs::exists(dir.path / "summary.csv"));
  CHECK(fs::exists(dir.path / "manifest.txt"));

  // A rerun recomputes nothing: every cell is marked loaded in the manifest
  // and the statistics survive the CSV round-trip bit for bit.
  const auto again = run_sweep(spec);
  REQUIRE(again.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(again[i].est.n == cells[i].est.n);
    CHECK(again[i].est.lambda == cells[i].est.lambda);
    for (int k = 1; k <= cells[i].est.n; ++k)
      CHECK(again[i].est.mean_pk[k] == cells[i].est.mean_pk[k]);
    CHECK(again[i].est.mean_nc == cells[i].est.mean_nc);
    CHECK(again[i].est.mean_cost == cells[i].est.mean_cost);
    CHECK(again[i].wall_seconds == 0.0);  // loaded, not recomputed
  }

  // Extending the grid keeps the old cells and adds the new one.
  spec.n_list = {10, 14, 18};
  const auto extended = run_sweep(spec);
  CHECK(extended.size() == 6);

  // A different campaign cannot reuse the directory.
  auto conflicting = spec;
  conflicting.master_seed = 9;
  CHECK_THROWS_AS(run_sweep(conflicting), std::invalid_argument);
  auto wrong_samples = spec;
  wrong_samples.samples = 500;
  CHECK_THROWS_AS(run_sweep(wrong_samples), std::invalid_argument);
  auto wrong_dist = spec;
  wrong_dist.dist = EntryDistribution::exponential1();
  CHECK_THROWS_AS(run_sweep(wrong_dist), std::invalid_argument);
}

TEST_CASE("load_results reproduces what run_sweep computed") {
  TempDir dir;
  SweepSpec spec;
  spec.n_list = {12};
  spec.lambda_grid = {0.0, 0.4};
  spec.dist = EntryDistribution::exponential1();
  spec.samples = 400;
  spec.master_seed = 31;
  spec.workers = 1;
  spec.out_dir = dir.str();
  const auto computed = run_sweep(spec);

  const auto loaded = load_results(dir.str());
  REQUIRE(loaded.size() == computed.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    CHECK(loaded[i].est.n == computed[i].est.n);
    CHECK(loaded[i].est.lambda == computed[i].est.lambda);
    CHECK(loaded[i].est.samples == computed[i].est.samples);
    CHECK(loaded[i].seed == computed[i].seed);
    for (int k = 1; k <= 12; ++k) {
      CHECK(loaded[i].est.mean_pk[k] == computed[i].est.mean_pk[k]);
      CHECK(loaded[i].est.stderr_pk[k] == computed[i].est.stderr_pk[k]);
    }
    CHECK(loaded[i].est.mean_nc == computed[i].est.mean_nc);
    CHECK(loaded[i].est.mean_cost == computed[i].est.mean_cost);
    REQUIRE(loaded[i].fit_plain.has_value());
    CHECK(loaded[i].fit_plain->q.q1 == computed[i].fit_plain->q.q1);
    CHECK(loaded[i].fit_plain->q.q2 == computed[i].fit_plain->q.q2);
  }

  CHECK_THROWS_AS(load_results((dir.path / "missing").string()),
                  std::runtime_error);
}

TEST_CASE("figure names round-trip") {
  for (const auto id : all_figure_ids()) {
    const std::string name = to_string(id);
    const auto back = figure_id_from_string(name);
    REQUIRE(back.has_value());
    CHECK(*back == id);
  }
  CHECK_FALSE(figure_id_from_string("nope").has_value());
}

TEST_CASE("figures are emitted from sweep cells with coverage comments") {
  TempDir dir;
  SweepSpec spec;
  spec.n_list = {12};
  spec.lambda_grid = {-1.0, -0.5, 0.0, 0.5, 1.0};
  spec.dist = EntryDistribution::uniform01();
  spec.samples = 250;
  spec.master_seed = 8;
  spec.workers = 2;
  spec.out_dir = dir.str();
  const auto cells = run_sweep(spec);

  for (const FigureId id : {FigureId::nc, FigureId::p1, FigureId::p2,
                            FigureId::p3, FigureId::p4}) {
    const auto path = emit_figure_data(cells, id, dir.str());
    CHECK(fs::exists(path));
    const auto text = slurp(path);
    CHECK(text.find("# cell: n=12") != std::string::npos);
    CHECK(text.rfind("# figure:", 0) == 0);  // leading comment block
  }

  // The long-cycle overlays need fits; they exist for this grid too.
  const auto pn_path = emit_figure_data(cells, FigureId::pn, dir.str());
  CHECK(slurp(pn_path).find("lambda") != std::string::npos);

  // Figures whose inputs are missing fail loudly and name the requirement.
  CHECK_THROWS_AS(emit_figure_data({}, FigureId::nc, dir.str()), FigureError);
  auto aborted = cells;
  for (auto& c : aborted) c.error = "solver failure";
  CHECK_THROWS_WITH_AS(
      emit_figure_data(aborted, FigureId::nc, dir.str()),
      doctest::Contains("none of the"), FigureError);
}
