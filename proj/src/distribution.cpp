#include "cyclap/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cyclap/quadrature.hpp"

namespace cyclap {

EntryDistribution EntryDistribution::uniform01() {
  EntryDistribution d;
  d.kind_ = DistKind::Uniform01;
  d.id_ = "uniform";
  d.lo_ = 0.0;
  d.hi_ = 1.0;
  return d;
}

EntryDistribution EntryDistribution::exponential1() {
  EntryDistribution d;
  d.kind_ = DistKind::Exponential1;
  d.id_ = "exp";
  d.lo_ = 0.0;
  d.hi_ = std::numeric_limits<double>::infinity();
  return d;
}

EntryDistribution EntryDistribution::custom(std::string name, Density density,
                                            Sampler sampler, double support_lo,
                                            double support_hi) {
  if (!density || !sampler)
    throw std::invalid_argument("custom distribution needs density + sampler");
  if (!(support_lo < support_hi))
    throw std::invalid_argument("custom distribution: empty support");
  const double mass =
      integrate([&density](double x) { return density(x); }, support_lo,
                support_hi, 1e-9, 1e-12);
  if (std::abs(mass - 1.0) > 1e-6)
    throw std::invalid_argument("custom density does not integrate to 1 (got " +
                                std::to_string(mass) + ")");
  EntryDistribution d;
  d.kind_ = DistKind::Custom;
  d.id_ = std::move(name);
  d.lo_ = support_lo;
  d.hi_ = support_hi;
  d.density_ = std::move(density);
  d.sampler_ = std::move(sampler);
  // Probe the density limit at the support minimum by linear extrapolation
  // from two interior points; a limit far below the local scale flags a
  // vanishing minimum.
  const double span = std::isinf(support_hi) ? 1.0 : (support_hi - support_lo);
  const double h = 1e-4 * span;
  const double f1 = d.density_(support_lo + h);
  const double f2 = d.density_(support_lo + 2.0 * h);
  const double limit = 2.0 * f1 - f2;
  const double scale = std::max({f1, f2, 1e-300});
  d.min_density_vanishes_ = !(limit > 1e-6 * scale);
  return d;
}

double EntryDistribution::density(double x) const {
  switch (kind_) {
    case DistKind::Uniform01:
      return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
    case DistKind::Exponential1:
      return x >= 0.0 ? std::exp(-x) : 0.0;
    case DistKind::Custom:
      return (x >= lo_ && x <= hi_) ? density_(x) : 0.0;
  }
  return 0.0;
}

double EntryDistribution::sample(rng::RandomStream& s) const {
  switch (kind_) {
    case DistKind::Uniform01:
      return s.uniform01();
    case DistKind::Exponential1:
      return -std::log1p(-s.uniform01());
    case DistKind::Custom:
      return sampler_(s);
  }
  return 0.0;
}

double EntryDistribution::linear_coefficient_at_min() const {
  switch (kind_) {
    case DistKind::Uniform01:
      return 0.0;
    case DistKind::Exponential1:
      return 1.0;
    case DistKind::Custom: {
      const double span = std::isinf(hi_) ? 1.0 : (hi_ - lo_);
      const double h = 1e-5 * span;
      return -(density_(lo_ + 2.0 * h) - density_(lo_ + h)) / h;
    }
  }
  return 0.0;
}

}  // namespace cyclap
