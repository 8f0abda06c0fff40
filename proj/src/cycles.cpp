#include "cyclap/cycles.hpp"

#include <cmath>
#include <stdexcept>

namespace cyclap {

int CycleSpectrum::count(int k) const {
  if (k < 1 || k > n_) return 0;
  if (k <= kDense) return dense_[k];
  auto it = sparse_.find(k);
  return it == sparse_.end() ? 0 : it->second;
}

void CycleSpectrum::add_cycle(int k) {
  if (k < 1 || k > n_) throw std::out_of_range("cycle length out of range");
  if (k <= kDense)
    ++dense_[k];
  else
    ++sparse_[k];
}

int CycleSpectrum::total_cycles() const {
  int total = 0;
  for_each([&](int, int c) { total += c; });
  return total;
}

long CycleSpectrum::weighted_total() const {
  long total = 0;
  for_each([&](int k, int c) { total += static_cast<long>(k) * c; });
  return total;
}

CycleSpectrum decompose(const Permutation& perm) {
  const int n = perm.size();
  CycleSpectrum spectrum(n);
  std::vector<bool> visited(n, false);
  for (int start = 0; start < n; ++start) {
    if (visited[start]) continue;
    int length = 0;
    int i = start;
    do {
      if (i < 0 || i >= n || visited[i])
        throw std::invalid_argument("not a permutation");
      visited[i] = true;
      ++length;
      i = perm.map[i];
    } while (i != start);
    spectrum.add_cycle(length);
  }
  return spectrum;
}

SpectrumAccumulator::SpectrumAccumulator(int n)
    : n_(n), mean_(n + 1, 0.0), m2_(n + 1, 0.0) {
  if (n < 1) throw std::invalid_argument("n must be positive");
}

void SpectrumAccumulator::add(const CycleSpectrum& spectrum, double cost) {
  if (spectrum.n() != n_) throw std::invalid_argument("size mismatch");
  ++count_;
  const double inv = 1.0 / static_cast<double>(count_);
  for (int k = 1; k <= n_; ++k) {
    const double x = spectrum.count(k);
    const double delta = x - mean_[k];
    mean_[k] += delta * inv;
    m2_[k] += delta * (x - mean_[k]);
  }
  double delta = spectrum.total_cycles() - mean_nc_;
  mean_nc_ += delta * inv;
  m2_nc_ += delta * (spectrum.total_cycles() - mean_nc_);
  delta = cost - mean_cost_;
  mean_cost_ += delta * inv;
  m2_cost_ += delta * (cost - mean_cost_);
}

void SpectrumAccumulator::merge(const SpectrumAccumulator& other) {
  if (other.n_ != n_) throw std::invalid_argument("size mismatch");
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double ca = static_cast<double>(count_);
  const double cb = static_cast<double>(other.count_);
  const double m = ca + cb;
  auto combine = [&](double& mean, double& m2, double mean_b, double m2_b) {
    const double delta = mean_b - mean;
    mean += delta * cb / m;
    m2 += m2_b + delta * delta * ca * cb / m;
  };
  for (int k = 1; k <= n_; ++k)
    combine(mean_[k], m2_[k], other.mean_[k], other.m2_[k]);
  combine(mean_nc_, m2_nc_, other.mean_nc_, other.m2_nc_);
  combine(mean_cost_, m2_cost_, other.mean_cost_, other.m2_cost_);
  count_ += other.count_;
}

SpectrumEstimate SpectrumAccumulator::finalize(double lambda,
                                               const std::string& dist) const {
  if (count_ == 0) throw std::logic_error("empty accumulator");
  SpectrumEstimate est;
  est.n = n_;
  est.lambda = lambda;
  est.dist = dist;
  est.samples = count_;
  est.mean_pk.assign(n_ + 1, 0.0);
  est.stderr_pk.assign(n_ + 1, 0.0);
  const double c = static_cast<double>(count_);
  const double var_scale = count_ > 1 ? 1.0 / (c * (c - 1.0)) : 0.0;
  for (int k = 1; k <= n_; ++k) {
    est.mean_pk[k] = mean_[k];
    est.stderr_pk[k] = std::sqrt(std::max(0.0, m2_[k] * var_scale));
  }
  est.mean_nc = mean_nc_;
  est.stderr_nc = std::sqrt(std::max(0.0, m2_nc_ * var_scale));
  est.mean_cost = mean_cost_;
  est.stderr_cost = std::sqrt(std::max(0.0, m2_cost_ * var_scale));
  return est;
}

}  // namespace cyclap
