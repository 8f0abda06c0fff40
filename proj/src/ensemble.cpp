#include "cyclap/ensemble.hpp"

#include <cmath>
#include <stdexcept>

namespace cyclap {

EnsembleConfig::EnsembleConfig(int n_, double lambda_, EntryDistribution dist_,
                               long samples_, std::uint64_t master_seed_)
    : n(n_),
      lambda(lambda_),
      dist(std::move(dist_)),
      samples(samples_),
      master_seed(master_seed_) {
  if (n < 1) throw std::invalid_argument("EnsembleConfig: n must be >= 1");
  if (samples < 1)
    throw std::invalid_argument("EnsembleConfig: samples must be >= 1");
  if (!(lambda >= -1.0 && lambda <= 1.0))
    throw std::invalid_argument("EnsembleConfig: lambda must lie in [-1, 1]");
  if (static_cast<std::uint64_t>(samples) >= rng::RandomStream::kMaxStreams)
    throw std::invalid_argument("EnsembleConfig: samples exceed stream budget");
  const std::uint64_t draws = static_cast<std::uint64_t>(n) * n;
  if (draws >= rng::RandomStream::kDrawsPerStream)
    throw std::invalid_argument("EnsembleConfig: n^2 exceeds draw budget");
}

CostMatrix sample_matrix(const EnsembleConfig& config, long index) {
  if (index < 0 || index >= config.samples)
    throw std::out_of_range("sample_matrix: index outside [0, samples)");
  const int n = config.n;
  const double lambda = config.lambda;
  rng::RandomStream stream(config.master_seed,
                           static_cast<std::uint64_t>(index));
  std::vector<double> base(static_cast<std::size_t>(n) * n);
  for (double& r : base) r = config.dist.sample(stream);

  CostMatrix m(n, lambda);
  if (lambda == 0.0) {
    for (std::size_t k = 0; k < base.size(); ++k) m.data()[k] = base[k];
    return m;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double rij = base[static_cast<std::size_t>(i) * n + j];
      const double rji = base[static_cast<std::size_t>(j) * n + i];
      // lambda = -1 must give an exact zero diagonal and d_ij == -d_ji;
      // lambda = 1 an exactly symmetric matrix. IEEE addition/subtraction of
      // the same two operands guarantees both, given the shared base draws.
      m.at(i, j) = (lambda == -1.0)  ? rij - rji
                   : (lambda == 1.0) ? rij + rji
                                     : rij + lambda * rji;
    }
  }
  if (lambda == -1.0)
    for (int i = 0; i < n; ++i) m.at(i, i) = 0.0;
  return m;
}

CostMatrix transform_equivalence(const CostMatrix& m, double alpha, double c,
                                 const Permutation& pi, bool transpose) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("transform_equivalence: alpha must be > 0");
  if (pi.size() != m.n() || !pi.is_valid())
    throw std::invalid_argument("transform_equivalence: bad permutation");
  const int n = m.n();
  CostMatrix out(n, m.lambda());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double v = alpha * m.at(pi(i), pi(j)) + c;
      if (transpose)
        out.at(j, i) = v;
      else
        out.at(i, j) = v;
    }
  return out;
}

}  // namespace cyclap
