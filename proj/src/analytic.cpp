#include "cyclap/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cyclap/quadrature.hpp"
#include "cyclap/rng.hpp"

namespace cyclap {

namespace {

void require_weights(QPair q) {
  if (!(q.q1 >= 0.0) || !(q.q2 >= 0.0))
    throw std::invalid_argument("cycle weights must be nonnegative");
}

long double series_sum_or_throw(const SeriesTable& table, int m) {
  const long double s = table.s(m);
  if (!(s > 0.0L))
    throw std::domain_error("degenerate cycle weights: zero total measure");
  return s;
}

}  // namespace

SeriesTable::SeriesTable(QPair q, int n_max) : q_(q), n_max_(n_max) {
  require_weights(q);
  if (n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
  a_.resize(n_max + 1);
  s_.resize(n_max + 1);
  const long double u = static_cast<long double>(q.q1) - 1.0L;
  const long double w = static_cast<long double>(q.q2) - 1.0L;
  a_[0] = 1.0L;
  s_[0] = 1.0L;
  for (int m = 1; m <= n_max; ++m) {
    long double am = u * a_[m - 1];
    if (m >= 2) am += w * a_[m - 2];
    a_[m] = am / m;
    s_[m] = s_[m - 1] + a_[m];
  }
}

double omega_limit(QPair q) {
  require_weights(q);
  return std::exp(q.q1 + 0.5 * q.q2 - 1.5);
}

double predicted_pk(const SeriesTable& table, int k) {
  const int n = table.n_max();
  if (k < 1 || k > n) throw std::out_of_range("cycle length out of range");
  const long double sn = series_sum_or_throw(table, n);
  const long double ratio = table.s(n - k) / sn;
  const QPair q = table.q();
  if (k == 1) return static_cast<double>(q.q1 * ratio);
  if (k == 2) return static_cast<double>(0.5L * q.q2 * ratio);
  return static_cast<double>(ratio / k);
}

double predicted_pk(QPair q, int n, int k) {
  return predicted_pk(SeriesTable(q, n), k);
}

LongCyclePrediction predicted_long_cycles(QPair q, int n) {
  require_weights(q);
  if (n < 7) throw std::invalid_argument("need n >= 7");
  const SeriesTable table(q, n);
  const long double sn = series_sum_or_throw(table, n);
  const double q1 = q.q1;
  const double q2 = q.q2;
  const double tail_const = std::exp(1.5 - q1 - 0.5 * q2);
  LongCyclePrediction out;
  out.k = {n, n - 1, n - 2, n - 3};
  out.asymptotic = {tail_const, q1 * tail_const,
                    (0.5 * q2 + 0.5 * q1 * q1) * tail_const,
                    (1.0 / 3.0 + 0.5 * q1 * q2 + q1 * q1 * q1 / 6.0) *
                        tail_const};
  for (int i = 0; i < 4; ++i)
    out.exact[i] = static_cast<double>(table.s(i) / sn);
  return out;
}

std::uint64_t nu_nk(int n, int k) {
  if (n < 1 || n > 20 || k < 1 || k > n)
    throw std::out_of_range("need 1 <= k <= n <= 20");
  // nu[j] holds the count of j-cycles over S_m, built up from m = 1.
  std::vector<std::uint64_t> nu(n + 1, 0);
  nu[1] = 1;
  for (int m = 2; m <= n; ++m)
    for (int j = std::min(m, n); j >= 1; --j)
      nu[j] = (m - j + (j == 1 ? 1 : 0)) * nu[j] +
              (j >= 2 ? (j - 1) * nu[j - 1] : 0);
  std::uint64_t factorial = 1;
  for (int m = 2; m <= n; ++m) factorial *= m;
  if (nu[k] != factorial / k)
    throw std::logic_error("cycle-count recursion disagrees with n!/k");
  return nu[k];
}

double slope_alpha(const EntryDistribution& dist) {
  switch (dist.kind()) {
    case DistKind::Uniform01:
      return 0.25;
    case DistKind::Exponential1:
      return 0.5;
    case DistKind::Custom:
      break;
  }
  const double lo = dist.support_lo();
  const double hi = dist.support_hi();
  auto rho = [&](double x) { return dist.density(x); };
  auto survivor = [&](double x) {
    return integrate(rho, x, hi, 1e-9, 1e-13);
  };
  auto excess = [&](double x) {
    return integrate([&](double z) { return (z - x) * rho(z); }, x, hi, 1e-9,
                     1e-13);
  };
  auto integrand = [&](double x) {
    const double r = rho(x);
    return 2.0 * r * r * survivor(x) * excess(x);
  };
  return integrate(integrand, lo, hi, 1e-8, 1e-12);
}

ThetaEstimate theta(double lambda, const EntryDistribution& dist, long samples,
                    std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be positive");
  rng::RandomStream stream(seed, 0);
  long hits = 0;
  for (long i = 0; i < samples; ++i) {
    const double rij = dist.sample(stream);
    const double rji = dist.sample(stream);
    const double rii = dist.sample(stream);
    const double rjj = dist.sample(stream);
    const double xi_e = std::min(rij + lambda * rji, rji + lambda * rij);
    const double xi_d = (1.0 + lambda) * std::min(rii, rjj);
    if (xi_d > xi_e) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  ThetaEstimate est;
  est.value = 0.5 * p;
  est.stderr_value =
      0.5 * std::sqrt(std::max(0.0, p * (1.0 - p) /
                                        static_cast<double>(samples)));
  est.samples = samples;
  return est;
}

}  // namespace cyclap
