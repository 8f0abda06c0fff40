#pragma once

#include <cstdint>
#include <vector>

#include "cyclap/distribution.hpp"
#include "cyclap/permutation.hpp"

namespace cyclap {

/// Dense n x n cost matrix d_ij = R_ij + lambda*R_ji, row-major.
/// lambda is carried as provenance metadata only.
class CostMatrix {
 public:
  CostMatrix(int n, double lambda)
      : n_(n), lambda_(lambda), entries_(static_cast<std::size_t>(n) * n) {}

  int n() const { return n_; }
  double lambda() const { return lambda_; }
  double at(int i, int j) const { return entries_[idx(i, j)]; }
  double& at(int i, int j) { return entries_[idx(i, j)]; }
  const double* data() const { return entries_.data(); }
  double* data() { return entries_.data(); }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * n_ + j;
  }
  int n_;
  double lambda_;
  std::vector<double> entries_;
};

struct EnsembleConfig {
  int n;
  double lambda;
  EntryDistribution dist;
  long samples;
  std::uint64_t master_seed;

  /// Throws std::invalid_argument unless n >= 1, samples >= 1,
  /// lambda in [-1, 1] and samples fits the stream budget.
  EnsembleConfig(int n_, double lambda_, EntryDistribution dist_,
                 long samples_, std::uint64_t master_seed_);
};

/// The index-th matrix of the config's stream. Pure function of
/// (master_seed, n, lambda, dist, index): draws exactly n^2 base variates
/// R_ij from a per-index substream and forms d_ij = R_ij + lambda*R_ji.
/// R is materialized in full first, so d_ij and d_ji are built from the
/// same two base samples and the matrix is bitwise symmetric at lambda=1
/// and bitwise antisymmetric (zero diagonal) at lambda=-1.
CostMatrix sample_matrix(const EnsembleConfig& config, long index);

/// alpha*d_{pi(i)pi(j)} + c, optionally transposed afterwards. Rejects
/// alpha <= 0 and a pi of the wrong size. Conjugacy-class invariance helper
/// for solver tests.
CostMatrix transform_equivalence(const CostMatrix& m, double alpha, double c,
                                 const Permutation& pi, bool transpose);

}  // namespace cyclap
