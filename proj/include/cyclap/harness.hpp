#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclap/cycles.hpp"
#include "cyclap/distribution.hpp"
#include "cyclap/fitting.hpp"

namespace cyclap {

/// One Monte Carlo campaign: the (n, lambda) product grid, sample count per
/// cell, and where the CSVs go.
struct SweepSpec {
  std::vector<int> n_list;
  std::vector<double> lambda_grid;
  EntryDistribution dist = EntryDistribution::uniform01();
  long samples = 10000;
  std::uint64_t master_seed = 1;
  int workers = 1;
  std::string out_dir;
};

/// Statistics of one (n, lambda) cell plus the fitted weights. A nonempty
/// error string marks an aborted cell whose statistics must be ignored.
struct CellResult {
  SpectrumEstimate est;
  std::uint64_t seed = 0;
  std::optional<FitResult> fit_plain;
  std::optional<FitResult> fit_corrected;
  double wall_seconds = 0.0;
  std::string error;
};

/// Seed for one cell, derived so that distinct cells never share variates.
std::uint64_t cell_seed(std::uint64_t master_seed, int n, double lambda,
                        const EntryDistribution& dist);

/// Monte Carlo for one cell: sample -> solve -> decompose -> accumulate.
/// Samples are processed in fixed-size chunks whose accumulators merge in
/// chunk order, so the statistics are bit-identical for any worker count.
/// No I/O. A solver failure aborts the cell (error field set).
CellResult run_cell(int n, double lambda, const EntryDistribution& dist,
                    long samples, std::uint64_t seed, int workers = 1);

/// Runs the grid with persistence under spec.out_dir: spectra.csv (long
/// form), summary.csv, manifest.txt. Cells already recorded in summary.csv
/// are loaded, not recomputed, so interrupted sweeps resume exactly; the
/// manifest must agree on (master_seed, dist, samples) or the call throws
/// std::invalid_argument. Returns all cells, loaded and fresh.
std::vector<CellResult> run_sweep(const SweepSpec& spec);

/// Reads spectra.csv + summary.csv back into cell results (fits carry the
/// stored weights only). Throws std::runtime_error on unreadable files.
std::vector<CellResult> load_results(const std::string& dir);

/// The exported figure datasets. Names follow the observable plotted:
/// cycle-count curves, small-k and long-k spectra, weight relations on both
/// signs of lambda, the scaling collapse, and the corrected-fit overlays.
enum class FigureId {
  nc,
  p1,
  p2,
  p3,
  p4,
  pk_mid,
  pnm1,
  pn,
  q1q2_neg,
  q1_scaling,
  p3_fit,
  kpk_fit,
  q1q2_pos,
};

std::vector<FigureId> all_figure_ids();
const char* to_string(FigureId id);
std::optional<FigureId> figure_id_from_string(const std::string& name);

/// Raised when the available cells cannot populate a figure; the message
/// names what is missing.
class FigureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes <out_dir>/fig_<id>.csv (error columns premultiplied by 3, comment
/// lines document columns and the consumed cells) and returns its path.
std::string emit_figure_data(const std::vector<CellResult>& cells,
                             FigureId id, const std::string& out_dir);

struct ValidationRow {
  int n = 0;
  double mean_cost = 0.0;
  double stderr_cost = 0.0;
  double parisi = 0.0;  // exact expected cost, exponential entries only
  double z_parisi = 0.0;
  double expansion = 0.0;  // 1/n cost expansion for this density
  double z_expansion = 0.0;
};

struct ValidationReport {
  std::string dist;
  long samples = 0;
  std::uint64_t seed = 0;
  bool has_parisi = false;  // dist is Exponential1
  double a = 0.0;           // linear density coefficient at the minimum
  std::vector<ValidationRow> rows;
};

/// Compares mean optimal cost at lambda = 0 against the exact exponential
/// formula and the general 1/n expansion; reports z-scores.
ValidationReport validate_solver(const EntryDistribution& dist,
                                 const std::vector<int>& n_list, long samples,
                                 std::uint64_t seed);

/// sum_{m<=n} 1/m^2: exact mean optimal cost for exponential entries.
double parisi_sum(int n);

/// zeta(2) - (2(1-a)zeta(3) + 1)/n for densities rho(r) = 1 - a*r + O(r^2).
double cost_expansion(int n, double a);

}  // namespace cyclap
