#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cyclap/permutation.hpp"

namespace cyclap {

/// Cycle counts p_k of one permutation. Counts up to k = 64 sit in a dense
/// array; longer cycles (at most n/64 of them) go to a sorted map.
/// The partition identity sum_k k*p_k = n holds by construction.
class CycleSpectrum {
 public:
  explicit CycleSpectrum(int n) : n_(n) { dense_.fill(0); }

  int n() const { return n_; }
  int count(int k) const;
  void add_cycle(int k);
  int total_cycles() const;
  long weighted_total() const;  // sum_k k*p_k

  template <typename F>
  void for_each(F&& f) const {  // f(k, count) over nonzero counts
    for (int k = 1; k <= kDense && k <= n_; ++k)
      if (dense_[k]) f(k, dense_[k]);
    for (const auto& [k, c] : sparse_) f(k, c);
  }

 private:
  static constexpr int kDense = 64;
  int n_;
  std::array<int, kDense + 1> dense_;
  std::map<int, int> sparse_;
};

/// Orbit decomposition; each element visited once. Throws on malformed maps.
CycleSpectrum decompose(const Permutation& perm);

/// Monte Carlo means with standard errors for one (n, lambda, dist) cell.
struct SpectrumEstimate {
  int n = 0;
  double lambda = 0.0;
  std::string dist;
  long samples = 0;
  std::vector<double> mean_pk;    // index k, 1..n; [0] unused
  std::vector<double> stderr_pk;  // standard error of the mean, 0 if samples=1
  double mean_nc = 0.0, stderr_nc = 0.0;
  double mean_cost = 0.0, stderr_cost = 0.0;
};

/// Single-pass Welford accumulator over cycle spectra and costs.
/// Single-writer; parallel reductions keep one accumulator per worker and
/// merge() at the end. merge is associative up to float reassociation.
class SpectrumAccumulator {
 public:
  explicit SpectrumAccumulator(int n);

  void add(const CycleSpectrum& spectrum, double cost);
  void merge(const SpectrumAccumulator& other);
  long count() const { return count_; }
  int n() const { return n_; }

  /// Throws std::logic_error on an empty accumulator.
  SpectrumEstimate finalize(double lambda, const std::string& dist) const;

 private:
  int n_;
  long count_ = 0;
  std::vector<double> mean_;  // index k
  std::vector<double> m2_;
  double mean_nc_ = 0.0, m2_nc_ = 0.0;
  double mean_cost_ = 0.0, m2_cost_ = 0.0;
};

}  // namespace cyclap
