#include "cyclap/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <utility>

#include "cyclap/analytic.hpp"
#include "cyclap/ensemble.hpp"
#include "cyclap/lap.hpp"
#include "cyclap/rng.hpp"

namespace fs = std::filesystem;

namespace cyclap {

namespace {

constexpr long kChunkSize = 256;
constexpr const char* kCodeVersion = "0.1.0";
constexpr const char* kSpectraFile = "spectra.csv";
constexpr const char* kSummaryFile = "summary.csv";
constexpr const char* kManifestFile = "manifest.txt";
constexpr const char* kSpectraHeader = "n,lambda,dist,samples,seed,k,P_k,stderr_Pk";
constexpr const char* kSummaryHeader =
    "n,lambda,nc_mean,nc_err3,cost_mean,cost_err3,q1,q2,q1_corr,q2_corr";

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::ios_base::failure io_error(const std::string& what) {
  return std::ios_base::failure(what);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& ctx) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw io_error("bad number '" + s + "' in " + ctx);
  return v;
}

long parse_long(const std::string& s, const std::string& ctx) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str()) throw io_error("bad integer '" + s + "' in " + ctx);
  return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& ctx) {
  char* end = nullptr;
  const std::uint64_t v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str()) throw io_error("bad integer '" + s + "' in " + ctx);
  return v;
}

/// Cells keyed by (n, lambda bit pattern); doubles round-trip through
/// %.17g, so resumed runs rebuild identical keys.
using CellKey = std::pair<int, std::uint64_t>;

CellKey key_of(int n, double lambda) {
  // +0.0 collapses the two signed zeros onto one key.
  return {n, std::bit_cast<std::uint64_t>(lambda + 0.0)};
}

bool fit_usable(const std::optional<FitResult>& fit) {
  return fit && std::isfinite(fit->q.q1) && std::isfinite(fit->q.q2);
}

/// Loaded fits carry only the stored weights (iterations == 0); refit from
/// the spectrum when error bars or model curves are needed.
FitResult full_fit(const CellResult& cell, bool corrected) {
  const auto& stored = corrected ? cell.fit_corrected : cell.fit_plain;
  if (stored && stored->iterations > 0) return *stored;
  return corrected ? fit_corrected(cell.est) : fit_uncorrected(cell.est);
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t master_seed, int n, double lambda,
                        const EntryDistribution& dist) {
  return rng::derive_key(master_seed, static_cast<std::uint64_t>(n),
                         std::bit_cast<std::uint64_t>(lambda + 0.0),
                         fnv1a(dist.id()));
}

CellResult run_cell(int n, double lambda, const EntryDistribution& dist,
                    long samples, std::uint64_t seed, int workers) {
  const auto t0 = std::chrono::steady_clock::now();
  CellResult cell;
  cell.seed = seed;
  const EnsembleConfig config(n, lambda, dist, samples, seed);
  const long n_chunks = (samples + kChunkSize - 1) / kChunkSize;
  std::vector<std::optional<SpectrumAccumulator>> chunks(n_chunks);
  std::atomic<long> next_chunk{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::string error_text;

  auto work = [&] {
    LapWorkspace ws;
    try {
      for (;;) {
        if (failed.load(std::memory_order_relaxed)) return;
        const long c = next_chunk.fetch_add(1);
        if (c >= n_chunks) return;
        SpectrumAccumulator acc(n);
        const long lo = c * kChunkSize;
        const long hi = std::min(samples, lo + kChunkSize);
        for (long i = lo; i < hi; ++i) {
          const CostMatrix m = sample_matrix(config, i);
          const Assignment a = solve(m, ws);
          acc.add(decompose(a.perm), a.cost);
        }
        chunks[c].emplace(std::move(acc));
      }
    } catch (const std::exception& e) {
      failed.store(true);
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (error_text.empty()) error_text = e.what();
    }
  };

  const int n_workers = std::max(1, workers);
  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  if (failed.load()) {
    cell.est.n = n;
    cell.est.lambda = lambda;
    cell.est.dist = dist.id();
    cell.error = "solver failure: " + error_text;
    return cell;
  }

  SpectrumAccumulator total(n);
  for (auto& c : chunks) total.merge(*c);
  cell.est = total.finalize(lambda, dist.id());
  try {
    cell.fit_plain = fit_uncorrected(cell.est);
  } catch (const std::exception&) {
  }
  try {
    cell.fit_corrected = fit_corrected(cell.est);
  } catch (const std::exception&) {
  }
  cell.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return cell;
}

namespace {

void write_spectra(const std::string& dir,
                   const std::vector<CellResult>& cells) {
  const fs::path tmp = fs::path(dir) / (std::string(kSpectraFile) + ".tmp");
  std::ofstream out(tmp);
  if (!out) throw io_error("cannot write " + tmp.string());
  out << kSpectraHeader << "\n";
  for (const CellResult& cell : cells) {
    if (!cell.error.empty()) continue;
    const SpectrumEstimate& est = cell.est;
    for (int k = 1; k <= est.n; ++k)
      out << est.n << ',' << fmt(est.lambda) << ',' << est.dist << ','
          << est.samples << ',' << cell.seed << ',' << k << ','
          << fmt(est.mean_pk[k]) << ',' << fmt(est.stderr_pk[k]) << "\n";
  }
  out.flush();
  if (!out) throw io_error("short write to " + tmp.string());
  out.close();
  fs::rename(tmp, fs::path(dir) / kSpectraFile);
}

void write_summary(const std::string& dir,
                   const std::vector<CellResult>& cells) {
  const fs::path tmp = fs::path(dir) / (std::string(kSummaryFile) + ".tmp");
  std::ofstream out(tmp);
  if (!out) throw io_error("cannot write " + tmp.string());
  const double nan = std::nan("");
  out << kSummaryHeader << "\n";
  for (const CellResult& cell : cells) {
    if (!cell.error.empty()) continue;
    const SpectrumEstimate& est = cell.est;
    const double q1 = fit_usable(cell.fit_plain) ? cell.fit_plain->q.q1 : nan;
    const double q2 = fit_usable(cell.fit_plain) ? cell.fit_plain->q.q2 : nan;
    const double q1c =
        fit_usable(cell.fit_corrected) ? cell.fit_corrected->q.q1 : nan;
    const double q2c =
        fit_usable(cell.fit_corrected) ? cell.fit_corrected->q.q2 : nan;
    out << est.n << ',' << fmt(est.lambda) << ',' << fmt(est.mean_nc) << ','
        << fmt(3.0 * est.stderr_nc) << ',' << fmt(est.mean_cost) << ','
        << fmt(3.0 * est.stderr_cost) << ',' << fmt(q1) << ',' << fmt(q2)
        << ',' << fmt(q1c) << ',' << fmt(q2c) << "\n";
  }
  out.flush();
  if (!out) throw io_error("short write to " + tmp.string());
  out.close();
  fs::rename(tmp, fs::path(dir) / kSummaryFile);
}

std::string utc_now() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const std::string& dir, const SweepSpec& spec,
                    const std::vector<CellResult>& cells) {
  const fs::path tmp = fs::path(dir) / (std::string(kManifestFile) + ".tmp");
  std::ofstream out(tmp);
  if (!out) throw io_error("cannot write " + tmp.string());
  out << "format_version 1\n";
  out << "code_version " << kCodeVersion << "\n";
  out << "written " << utc_now() << "\n";
  out << "master_seed " << spec.master_seed << "\n";
  out << "dist " << spec.dist.id() << "\n";
  out << "samples " << spec.samples << "\n";
  out << "workers " << spec.workers << "\n";
  out << "n_list";
  for (int n : spec.n_list) out << ' ' << n;
  out << "\nlambda_grid";
  for (double l : spec.lambda_grid) out << ' ' << fmt(l);
  out << "\n";
  for (const CellResult& cell : cells) {
    out << "cell n=" << cell.est.n << " lambda=" << fmt(cell.est.lambda)
        << " seed=" << cell.seed << " samples=" << cell.est.samples
        << " wall=" << fmt(cell.wall_seconds);
    if (cell.error.empty())
      out << " status=ok\n";
    else
      out << " status=error msg=\"" << cell.error << "\"\n";
  }
  out.flush();
  if (!out) throw io_error("short write to " + tmp.string());
  out.close();
  fs::rename(tmp, fs::path(dir) / kManifestFile);
}

/// Returns the manifest's (master_seed, dist, samples) triple.
struct ManifestHead {
  std::uint64_t master_seed = 0;
  std::string dist;
  long samples = 0;
};

ManifestHead read_manifest_head(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot read " + path.string());
  ManifestHead head;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string keyword;
    ss >> keyword;
    if (keyword == "master_seed")
      ss >> head.master_seed;
    else if (keyword == "dist")
      ss >> head.dist;
    else if (keyword == "samples")
      ss >> head.samples;
  }
  return head;
}

}  // namespace

std::vector<CellResult> load_results(const std::string& dir) {
  const fs::path spectra_path = fs::path(dir) / kSpectraFile;
  const fs::path summary_path = fs::path(dir) / kSummaryFile;
  std::ifstream spectra(spectra_path);
  if (!spectra) throw io_error("cannot read " + spectra_path.string());
  std::ifstream summary(summary_path);
  if (!summary) throw io_error("cannot read " + summary_path.string());

  std::string line;
  if (!std::getline(spectra, line) || line != kSpectraHeader)
    throw io_error("unexpected header in " + spectra_path.string());

  std::map<CellKey, CellResult> by_key;
  std::vector<CellKey> order;
  while (std::getline(spectra, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto f = split(line, ',');
    if (f.size() != 8)
      throw io_error("malformed row in " + spectra_path.string());
    const std::string ctx = spectra_path.string();
    const int n = static_cast<int>(parse_long(f[0], ctx));
    const double lambda = parse_double(f[1], ctx);
    const CellKey key = key_of(n, lambda);
    auto [it, fresh] = by_key.try_emplace(key);
    CellResult& cell = it->second;
    if (fresh) {
      order.push_back(key);
      cell.est.n = n;
      cell.est.lambda = lambda;
      cell.est.dist = f[2];
      cell.est.samples = parse_long(f[3], ctx);
      cell.seed = parse_u64(f[4], ctx);
      cell.est.mean_pk.assign(n + 1, 0.0);
      cell.est.stderr_pk.assign(n + 1, 0.0);
    }
    const int k = static_cast<int>(parse_long(f[5], ctx));
    if (k < 1 || k > n) throw io_error("cycle index out of range in " + ctx);
    cell.est.mean_pk[k] = parse_double(f[6], ctx);
    cell.est.stderr_pk[k] = parse_double(f[7], ctx);
  }

  if (!std::getline(summary, line) || line != kSummaryHeader)
    throw io_error("unexpected header in " + summary_path.string());
  while (std::getline(summary, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto f = split(line, ',');
    if (f.size() != 10)
      throw io_error("malformed row in " + summary_path.string());
    const std::string ctx = summary_path.string();
    const int n = static_cast<int>(parse_long(f[0], ctx));
    const double lambda = parse_double(f[1], ctx);
    const auto it = by_key.find(key_of(n, lambda));
    if (it == by_key.end())
      throw io_error("summary row without spectra in " + ctx);
    CellResult& cell = it->second;
    cell.est.mean_nc = parse_double(f[2], ctx);
    cell.est.stderr_nc = parse_double(f[3], ctx) / 3.0;
    cell.est.mean_cost = parse_double(f[4], ctx);
    cell.est.stderr_cost = parse_double(f[5], ctx) / 3.0;
    const double q1 = parse_double(f[6], ctx);
    const double q2 = parse_double(f[7], ctx);
    const double q1c = parse_double(f[8], ctx);
    const double q2c = parse_double(f[9], ctx);
    if (std::isfinite(q1) && std::isfinite(q2)) {
      FitResult fit;
      fit.q = {q1, q2};
      cell.fit_plain = fit;
    }
    if (std::isfinite(q1c) && std::isfinite(q2c)) {
      FitResult fit;
      fit.q = {q1c, q2c};
      fit.corrected = true;
      cell.fit_corrected = fit;
    }
  }

  std::vector<CellResult> cells;
  cells.reserve(order.size());
  for (const CellKey& key : order) cells.push_back(std::move(by_key[key]));
  return cells;
}

std::vector<CellResult> run_sweep(const SweepSpec& spec) {
  if (spec.out_dir.empty()) throw std::invalid_argument("empty output dir");
  if (spec.n_list.empty() || spec.lambda_grid.empty())
    throw std::invalid_argument("empty sweep grid");
  for (double l : spec.lambda_grid)
    if (!(l >= -1.0 && l <= 1.0))
      throw std::invalid_argument("lambda outside [-1, 1]");
  if (spec.samples < 1) throw std::invalid_argument("samples must be >= 1");

  fs::create_directories(spec.out_dir);
  const fs::path manifest_path = fs::path(spec.out_dir) / kManifestFile;
  std::map<CellKey, CellResult> done;
  std::vector<CellResult> all;
  if (fs::exists(manifest_path)) {
    const ManifestHead head = read_manifest_head(manifest_path);
    if (head.master_seed != spec.master_seed || head.dist != spec.dist.id() ||
        head.samples != spec.samples)
      throw std::invalid_argument(
          "output dir holds a sweep with different seed/dist/samples; "
          "refusing to mix");
    if (fs::exists(fs::path(spec.out_dir) / kSummaryFile))
      for (CellResult& cell : load_results(spec.out_dir)) {
        const CellKey key = key_of(cell.est.n, cell.est.lambda);
        all.push_back(cell);
        done.emplace(key, std::move(cell));
      }
  }

  std::vector<CellResult> requested;
  for (int n : spec.n_list) {
    for (double lambda : spec.lambda_grid) {
      const CellKey key = key_of(n, lambda);
      const auto it = done.find(key);
      if (it != done.end()) {
        requested.push_back(it->second);
        continue;
      }
      CellResult cell =
          run_cell(n, lambda, spec.dist, spec.samples,
                   cell_seed(spec.master_seed, n, lambda, spec.dist),
                   spec.workers);
      requested.push_back(cell);
      all.push_back(std::move(cell));
      write_spectra(spec.out_dir, all);
      write_summary(spec.out_dir, all);
      write_manifest(spec.out_dir, spec, all);
    }
  }
  return requested;
}

std::vector<FigureId> all_figure_ids() {
  return {FigureId::nc,     FigureId::p1,         FigureId::p2,
          FigureId::p3,     FigureId::p4,         FigureId::pk_mid,
          FigureId::pnm1,   FigureId::pn,         FigureId::q1q2_neg,
          FigureId::q1_scaling, FigureId::p3_fit, FigureId::kpk_fit,
          FigureId::q1q2_pos};
}

const char* to_string(FigureId id) {
  switch (id) {
    case FigureId::nc: return "nc";
    case FigureId::p1: return "p1";
    case FigureId::p2: return "p2";
    case FigureId::p3: return "p3";
    case FigureId::p4: return "p4";
    case FigureId::pk_mid: return "pk_mid";
    case FigureId::pnm1: return "pnm1";
    case FigureId::pn: return "pn";
    case FigureId::q1q2_neg: return "q1q2_neg";
    case FigureId::q1_scaling: return "q1_scaling";
    case FigureId::p3_fit: return "p3_fit";
    case FigureId::kpk_fit: return "kpk_fit";
    case FigureId::q1q2_pos: return "q1q2_pos";
  }
  return "?";
}

std::optional<FigureId> figure_id_from_string(const std::string& name) {
  for (FigureId id : all_figure_ids())
    if (name == to_string(id)) return id;
  return std::nullopt;
}

namespace {

/// Shared figure-writing scaffold: coverage comments, then header, then the
/// per-cell rows produced by `emit` (which returns false to skip a cell).
template <typename EmitFn>
std::string write_figure(const std::vector<CellResult>& cells, FigureId id,
                         const std::string& out_dir,
                         const std::string& description,
                         const std::string& header,
                         const std::string& requirement, EmitFn&& emit) {
  std::vector<const CellResult*> used;
  std::ostringstream body;
  for (const CellResult& cell : cells) {
    if (!cell.error.empty()) continue;
    if (emit(cell, body)) used.push_back(&cell);
  }
  if (used.empty())
    throw FigureError(std::string("figure ") + to_string(id) +
                      ": none of the " + std::to_string(cells.size()) +
                      " cells qualify; needs " + requirement);
  fs::create_directories(out_dir);
  const fs::path path =
      fs::path(out_dir) / ("fig_" + std::string(to_string(id)) + ".csv");
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path.string());
  out << "# figure: " << to_string(id) << "\n";
  out << "# " << description << "\n";
  out << "# errors are three standard deviations of the mean\n";
  for (const CellResult* cell : used)
    out << "# cell: n=" << cell->est.n << " lambda=" << fmt(cell->est.lambda)
        << " dist=" << cell->est.dist << " samples=" << cell->est.samples
        << " seed=" << cell->seed << "\n";
  out << header << "\n" << body.str();
  out.flush();
  if (!out) throw io_error("short write to " + path.string());
  out.close();
  return path.string();
}

void cell_prefix(const CellResult& cell, std::ostream& out) {
  out << cell.est.n << ',' << fmt(cell.est.lambda) << ',' << cell.est.dist
      << ',' << cell.est.samples << ',';
}

/// k*P_k row for a single fixed k per cell (longest-cycle figures).
std::string emit_kpk_at(const std::vector<CellResult>& cells, FigureId id,
                        const std::string& out_dir, int offset,
                        const std::string& what) {
  return write_figure(
      cells, id, out_dir, what, "n,lambda,dist,samples,k,k_pk,k_pk_err3",
      "cells with n > " + std::to_string(offset),
      [offset](const CellResult& cell, std::ostream& out) {
        const int k = cell.est.n - offset;
        if (k < 1) return false;
        cell_prefix(cell, out);
        out << k << ',' << fmt(k * cell.est.mean_pk[k]) << ','
            << fmt(3.0 * k * cell.est.stderr_pk[k]) << "\n";
        return true;
      });
}

double tangent_slope(const std::string& dist_id) {
  if (dist_id == "uniform") return 0.25;
  if (dist_id == "exp") return 0.5;
  return std::nan("");
}

}  // namespace

std::string emit_figure_data(const std::vector<CellResult>& cells,
                             FigureId id, const std::string& out_dir) {
  switch (id) {
    case FigureId::nc:
      return write_figure(
          cells, id, out_dir, "mean cycle count of the optimal permutation",
          "n,lambda,dist,samples,nc,nc_err3", "any completed cell",
          [](const CellResult& cell, std::ostream& out) {
            cell_prefix(cell, out);
            out << fmt(cell.est.mean_nc) << ',' << fmt(3.0 * cell.est.stderr_nc)
                << "\n";
            return true;
          });
    case FigureId::p1:
      return write_figure(
          cells, id, out_dir,
          "mean one-cycle count, raw and scaled by sqrt(n)",
          "n,lambda,dist,samples,p1,p1_err3,p1_over_sqrt_n,"
          "p1_over_sqrt_n_err3",
          "any completed cell",
          [](const CellResult& cell, std::ostream& out) {
            const double rt = std::sqrt(static_cast<double>(cell.est.n));
            cell_prefix(cell, out);
            out << fmt(cell.est.mean_pk[1]) << ','
                << fmt(3.0 * cell.est.stderr_pk[1]) << ','
                << fmt(cell.est.mean_pk[1] / rt) << ','
                << fmt(3.0 * cell.est.stderr_pk[1] / rt) << "\n";
            return true;
          });
    case FigureId::p2:
      return write_figure(
          cells, id, out_dir,
          "mean two-cycle count times two, and scaled by n",
          "n,lambda,dist,samples,two_p2,two_p2_err3,p2_over_n,p2_over_n_err3",
          "cells with n >= 2",
          [](const CellResult& cell, std::ostream& out) {
            if (cell.est.n < 2) return false;
            cell_prefix(cell, out);
            out << fmt(2.0 * cell.est.mean_pk[2]) << ','
                << fmt(6.0 * cell.est.stderr_pk[2]) << ','
                << fmt(cell.est.mean_pk[2] / cell.est.n) << ','
                << fmt(3.0 * cell.est.stderr_pk[2] / cell.est.n) << "\n";
            return true;
          });
    case FigureId::p3:
      return write_figure(
          cells, id, out_dir, "mean three-cycle count times three",
          "n,lambda,dist,samples,three_p3,three_p3_err3", "cells with n >= 3",
          [](const CellResult& cell, std::ostream& out) {
            if (cell.est.n < 3) return false;
            cell_prefix(cell, out);
            out << fmt(3.0 * cell.est.mean_pk[3]) << ','
                << fmt(9.0 * cell.est.stderr_pk[3]) << "\n";
            return true;
          });
    case FigureId::p4:
      return write_figure(
          cells, id, out_dir, "mean four-cycle count times four",
          "n,lambda,dist,samples,four_p4,four_p4_err3", "cells with n >= 4",
          [](const CellResult& cell, std::ostream& out) {
            if (cell.est.n < 4) return false;
            cell_prefix(cell, out);
            out << fmt(4.0 * cell.est.mean_pk[4]) << ','
                << fmt(12.0 * cell.est.stderr_pk[4]) << "\n";
            return true;
          });
    case FigureId::pk_mid:
      return write_figure(
          cells, id, out_dir, "k*P_k for k up to 12",
          "n,lambda,dist,samples,k,k_pk,k_pk_err3", "any completed cell",
          [](const CellResult& cell, std::ostream& out) {
            const int k_max = std::min(12, cell.est.n);
            for (int k = 1; k <= k_max; ++k) {
              cell_prefix(cell, out);
              out << k << ',' << fmt(k * cell.est.mean_pk[k]) << ','
                  << fmt(3.0 * k * cell.est.stderr_pk[k]) << "\n";
            }
            return true;
          });
    case FigureId::pnm1:
      return emit_kpk_at(cells, id, out_dir, 1,
                         "(n-1)*P_{n-1}: next-to-longest cycles");
    case FigureId::pn:
      return emit_kpk_at(cells, id, out_dir, 0, "n*P_n: full-length cycles");
    case FigureId::q1q2_neg:
      return write_figure(
          cells, id, out_dir,
          "fitted weights against the relation q2 = q1^2 (lambda < 0)",
          "n,lambda,dist,samples,q1,q2,q1_squared",
          "cells with lambda < 0 and a converged fit",
          [](const CellResult& cell, std::ostream& out) {
            if (!(cell.est.lambda < 0.0) || !fit_usable(cell.fit_plain))
              return false;
            const QPair q = cell.fit_plain->q;
            cell_prefix(cell, out);
            out << fmt(q.q1) << ',' << fmt(q.q2) << ',' << fmt(q.q1 * q.q1)
                << "\n";
            return true;
          });
    case FigureId::q1_scaling:
      return write_figure(
          cells, id, out_dir,
          "q1 against lambda*n with the tangent-line prediction at 0",
          "n,lambda,dist,samples,lambda_n,q1,q1_err3,tangent",
          "cells with a converged fit",
          [](const CellResult& cell, std::ostream& out) {
            if (!fit_usable(cell.fit_plain)) return false;
            FitResult fit = *cell.fit_plain;
            try {
              fit = full_fit(cell, false);
            } catch (const std::exception&) {
            }
            const double ln = cell.est.lambda * cell.est.n;
            cell_prefix(cell, out);
            out << fmt(ln) << ',' << fmt(fit.q.q1) << ','
                << fmt(3.0 * fit.q1_err) << ','
                << fmt(1.0 + tangent_slope(cell.est.dist) * ln) << "\n";
            return true;
          });
    case FigureId::p3_fit:
      return write_figure(
          cells, id, out_dir,
          "measured 3*P_3 against the model from corrected and uncorrected "
          "weights",
          "n,lambda,dist,samples,three_p3,three_p3_err3,model_corrected,"
          "model_uncorrected",
          "cells with n >= 3 and both fits",
          [](const CellResult& cell, std::ostream& out) {
            if (cell.est.n < 3 || !fit_usable(cell.fit_plain) ||
                !fit_usable(cell.fit_corrected))
              return false;
            const double plain =
                3.0 * predicted_pk(cell.fit_plain->q, cell.est.n, 3);
            const double corr =
                3.0 * predicted_pk(cell.fit_corrected->q, cell.est.n, 3);
            cell_prefix(cell, out);
            out << fmt(3.0 * cell.est.mean_pk[3]) << ','
                << fmt(9.0 * cell.est.stderr_pk[3]) << ',' << fmt(corr) << ','
                << fmt(plain) << "\n";
            return true;
          });
    case FigureId::kpk_fit:
      return write_figure(
          cells, id, out_dir,
          "k*P_k for k in 3..12 at lambda > 0 with the corrected-weight model",
          "n,lambda,dist,samples,k,k_pk,k_pk_err3,k_pk_model",
          "cells with lambda > 0 and a corrected fit",
          [](const CellResult& cell, std::ostream& out) {
            if (!(cell.est.lambda > 0.0) || !fit_usable(cell.fit_corrected))
              return false;
            const SeriesTable table(cell.fit_corrected->q, cell.est.n);
            const int k_max = std::min(12, cell.est.n);
            for (int k = 3; k <= k_max; ++k) {
              cell_prefix(cell, out);
              out << k << ',' << fmt(k * cell.est.mean_pk[k]) << ','
                  << fmt(3.0 * k * cell.est.stderr_pk[k]) << ','
                  << fmt(k * predicted_pk(table, k)) << "\n";
            }
            return k_max >= 3;
          });
    case FigureId::q1q2_pos:
      return write_figure(
          cells, id, out_dir,
          "corrected weights against q2 = e^lambda*q1*(q1-lambda) "
          "(lambda > 0)",
          "n,lambda,dist,samples,q1,q2,f_q1",
          "cells with lambda > 0 and a corrected fit",
          [](const CellResult& cell, std::ostream& out) {
            if (!(cell.est.lambda > 0.0) || !fit_usable(cell.fit_corrected))
              return false;
            const QPair q = cell.fit_corrected->q;
            const double l = cell.est.lambda;
            cell_prefix(cell, out);
            out << fmt(q.q1) << ',' << fmt(q.q2) << ','
                << fmt(std::exp(l) * q.q1 * (q.q1 - l)) << "\n";
            return true;
          });
  }
  throw std::invalid_argument("unknown figure id");
}

double parisi_sum(int n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  double sum = 0.0;
  for (int m = n; m >= 1; --m) {
    const double md = m;
    sum += 1.0 / (md * md);
  }
  return sum;
}

double cost_expansion(int n, double a) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  constexpr double kZeta2 = 1.6449340668482264365;
  constexpr double kZeta3 = 1.2020569031595942854;
  return kZeta2 - (2.0 * (1.0 - a) * kZeta3 + 1.0) / n;
}

ValidationReport validate_solver(const EntryDistribution& dist,
                                 const std::vector<int>& n_list, long samples,
                                 std::uint64_t seed) {
  ValidationReport report;
  report.dist = dist.id();
  report.samples = samples;
  report.seed = seed;
  report.has_parisi = dist.kind() == DistKind::Exponential1;
  report.a = dist.linear_coefficient_at_min();
  auto z_score = [](double diff, double err) {
    if (err > 0.0) return diff / err;
    return diff == 0.0 ? 0.0 : std::copysign(HUGE_VAL, diff);
  };
  for (int n : n_list) {
    const CellResult cell = run_cell(
        n, 0.0, dist, samples, cell_seed(seed, n, 0.0, dist), 1);
    if (!cell.error.empty()) throw std::runtime_error(cell.error);
    ValidationRow row;
    row.n = n;
    row.mean_cost = cell.est.mean_cost;
    row.stderr_cost = cell.est.stderr_cost;
    row.parisi = report.has_parisi ? parisi_sum(n) : std::nan("");
    row.z_parisi = report.has_parisi
                       ? z_score(row.mean_cost - row.parisi, row.stderr_cost)
                       : std::nan("");
    row.expansion = cost_expansion(n, report.a);
    row.z_expansion =
        z_score(row.mean_cost - row.expansion, row.stderr_cost);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace cyclap
