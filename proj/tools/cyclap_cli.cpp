#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cyclap/fitting.hpp"
#include "cyclap/harness.hpp"

namespace {

using namespace cyclap;

EntryDistribution dist_from_name(const std::string& name) {
  if (name == "uniform") return EntryDistribution::uniform01();
  if (name == "exp") return EntryDistribution::exponential1();
  throw std::invalid_argument("unknown distribution: " + name);
}

/// Accepts either a comma list ("-1,-0.5,0") or a range "lo:hi:step"
/// (inclusive endpoints, step > 0).
std::vector<double> parse_lambda_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    double lo = 0, hi = 0, step = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 ||
        step <= 0)
      throw std::invalid_argument("bad lambda range, want lo:hi:step");
    for (int i = 0;; ++i) {
      const double v = lo + i * step;
      if (v > hi + step * 1e-9) break;
      grid.push_back(std::min(v, hi));
    }
  } else {
    std::string field;
    std::istringstream ss(text);
    while (std::getline(ss, field, ','))
      grid.push_back(std::stod(field));
  }
  if (grid.empty()) throw std::invalid_argument("empty lambda grid");
  return grid;
}

void print_cell_table(const std::vector<CellResult>& cells) {
  std::printf("%6s %8s %10s %12s %10s %10s %10s %10s\n", "n", "lambda",
              "samples", "cost", "nc", "q1", "q2", "wall_s");
  for (const CellResult& cell : cells) {
    if (!cell.error.empty()) {
      std::printf("%6d %8.4g  cell failed: %s\n", cell.est.n, cell.est.lambda,
                  cell.error.c_str());
      continue;
    }
    const double q1 =
        cell.fit_plain ? cell.fit_plain->q.q1 : std::nan("");
    const double q2 =
        cell.fit_plain ? cell.fit_plain->q.q2 : std::nan("");
    std::printf("%6d %8.4g %10ld %12.6f %10.4f %10.4f %10.4f %10.2f\n",
                cell.est.n, cell.est.lambda, cell.est.samples,
                cell.est.mean_cost, cell.est.mean_nc, q1, q2,
                cell.wall_seconds);
  }
}

int cmd_sweep(const SweepSpec& spec) {
  const std::vector<CellResult> cells = run_sweep(spec);
  print_cell_table(cells);
  std::printf("results in %s\n", spec.out_dir.c_str());
  for (const CellResult& cell : cells)
    if (!cell.error.empty()) return 3;
  return 0;
}

int cmd_figures(const std::string& figure, const std::string& in_dir,
                const std::string& out_dir) {
  const std::vector<CellResult> cells = load_results(in_dir);
  if (figure == "all") {
    int written = 0;
    for (FigureId id : all_figure_ids()) {
      try {
        std::printf("%s\n", emit_figure_data(cells, id, out_dir).c_str());
        ++written;
      } catch (const FigureError& e) {
        std::fprintf(stderr, "skipped: %s\n", e.what());
      }
    }
    if (written == 0) {
      std::fprintf(stderr, "no figure could be emitted from %s\n",
                   in_dir.c_str());
      return 1;
    }
    return 0;
  }
  const std::optional<FigureId> id = figure_id_from_string(figure);
  if (!id) throw std::invalid_argument("unknown figure id: " + figure);
  std::printf("%s\n", emit_figure_data(cells, *id, out_dir).c_str());
  return 0;
}

int cmd_validate(const std::string& dist_name, const std::vector<int>& n_list,
                 long samples, std::uint64_t seed) {
  const EntryDistribution dist = dist_from_name(dist_name);
  const ValidationReport report = validate_solver(dist, n_list, samples, seed);
  std::printf("dist=%s samples=%ld seed=%" PRIu64 " a=%g\n",
              report.dist.c_str(), report.samples, report.seed, report.a);
  std::printf("%6s %12s %12s %12s %8s %12s %8s\n", "n", "mean_cost", "stderr",
              "exact", "z", "expansion", "z");
  bool ok = true;
  for (const ValidationRow& row : report.rows) {
    std::printf("%6d %12.6f %12.6f %12.6f %8.2f %12.6f %8.2f\n", row.n,
                row.mean_cost, row.stderr_cost, row.parisi, row.z_parisi,
                row.expansion, row.z_expansion);
    // The 1/n expansion carries an O(n^-2) bias, so it gates large n only.
    if (report.has_parisi && std::abs(row.z_parisi) > 3.0) ok = false;
    if (!report.has_parisi && row.n >= 50 && std::abs(row.z_expansion) > 3.0)
      ok = false;
  }
  std::printf(ok ? "validation passed\n" : "validation FAILED\n");
  return ok ? 0 : 1;
}

int cmd_fit(const std::string& in_dir, bool corrected,
            const std::string& out_file) {
  const std::vector<CellResult> cells = load_results(in_dir);
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_file.empty()) {
    file.open(out_file);
    if (!file) throw std::ios_base::failure("cannot write " + out_file);
    out = &file;
  }
  *out << "n,lambda,dist,samples,q1,q2,q1_err,q2_err,iterations,residual,"
          "corrected,p2_correction\n";
  char buf[320];
  for (const CellResult& cell : cells) {
    if (!cell.error.empty()) continue;
    const FitResult fit =
        corrected ? fit_corrected(cell.est) : fit_uncorrected(cell.est);
    std::snprintf(buf, sizeof buf,
                  "%d,%.17g,%s,%ld,%.17g,%.17g,%.17g,%.17g,%d,%.17g,%d,%.17g",
                  cell.est.n, cell.est.lambda, cell.est.dist.c_str(),
                  cell.est.samples, fit.q.q1, fit.q.q2, fit.q1_err, fit.q2_err,
                  fit.iterations, fit.residual, fit.corrected ? 1 : 0,
                  fit.p2_correction);
    *out << buf << "\n";
  }
  out->flush();
  if (!*out) throw std::ios_base::failure("short write");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle statistics of optimal assignments on random matrices "
               "d = R + lambda*R^T"};
  app.require_subcommand(1);

  SweepSpec spec;
  std::string lambda_text = "-1:1:0.1";
  std::string dist_name = "uniform";
  spec.n_list = {40, 100, 200};
  CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo over (n, lambda)");
  sweep->add_option("--lambda-grid", lambda_text,
                    "comma list or lo:hi:step (default -1:1:0.1)");
  sweep->add_option("--n", spec.n_list, "matrix sizes")->delimiter(',');
  sweep->add_option("--dist", dist_name, "entry distribution")
      ->check(CLI::IsMember({"uniform", "exp"}));
  sweep->add_option("--samples", spec.samples, "samples per cell");
  sweep->add_option("--seed", spec.master_seed, "master seed");
  sweep->add_option("--workers", spec.workers, "worker threads");
  sweep->add_option("--out", spec.out_dir, "output directory")->required();

  std::string figure = "all";
  std::string fig_in, fig_out;
  CLI::App* figures =
      app.add_subcommand("figures", "Export figure CSVs from sweep results");
  figures->add_option("--figure", figure, "figure id or 'all'");
  figures->add_option("--in", fig_in, "sweep output directory")->required();
  figures->add_option("--out", fig_out, "figure directory")->required();

  std::string val_dist = "exp";
  std::vector<int> val_n = {10, 50, 100};
  long val_samples = 10000;
  std::uint64_t val_seed = 1;
  CLI::App* validate =
      app.add_subcommand("validate", "Check mean cost against exact results");
  validate->add_option("--dist", val_dist, "entry distribution")
      ->check(CLI::IsMember({"uniform", "exp"}));
  validate->add_option("--n", val_n, "matrix sizes")->delimiter(',');
  validate->add_option("--samples", val_samples, "samples per size");
  validate->add_option("--seed", val_seed, "master seed");

  std::string fit_in, fit_out;
  bool fit_corrected_flag = false;
  CLI::App* fit = app.add_subcommand("fit", "Fit cycle weights from results");
  fit->add_option("--in", fit_in, "sweep output directory")->required();
  fit->add_flag("--corrected", fit_corrected_flag,
                "apply the broken-even-cycle correction");
  fit->add_option("--out", fit_out, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
    if (sweep->parsed()) {
      spec.lambda_grid = parse_lambda_grid(lambda_text);
      spec.dist = dist_from_name(dist_name);
      return cmd_sweep(spec);
    }
    if (figures->parsed()) return cmd_figures(figure, fig_in, fig_out);
    if (validate->parsed())
      return cmd_validate(val_dist, val_n, val_samples, val_seed);
    if (fit->parsed()) return cmd_fit(fit_in, fit_corrected_flag, fit_out);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const FigureError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::ios_base::failure& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 3;
  }
}
