#pragma once

#include <functional>
#include <string>

#include "cyclap/rng.hpp"

namespace cyclap {

enum class DistKind { Uniform01, Exponential1, Custom };

/// Entry distribution for the base matrix R: a sampler plus its density.
/// The built-in kinds sample inline; Custom carries user callables and the
/// support bounds its density lives on (upper bound may be +infinity).
///
/// Custom densities are checked at construction: the density must integrate
/// to 1 within 1e-6. A density that vanishes at the minimum of its support
/// is accepted but flagged through min_density_vanishes(), since most of the
/// model's distribution-independent results assume a nonzero limit there.
class EntryDistribution {
 public:
  using Density = std::function<double(double)>;
  using Sampler = std::function<double(rng::RandomStream&)>;

  static EntryDistribution uniform01();
  static EntryDistribution exponential1();
  static EntryDistribution custom(std::string name, Density density,
                                  Sampler sampler, double support_lo,
                                  double support_hi);

  DistKind kind() const { return kind_; }
  const std::string& id() const { return id_; }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  bool min_density_vanishes() const { return min_density_vanishes_; }

  double density(double x) const;
  double sample(rng::RandomStream& s) const;

  /// Leading linear coefficient a of the density near the support minimum,
  /// rho(lo + r) = rho(lo) - a*r + O(r^2); exact for the built-ins, a
  /// central-difference estimate for Custom.
  double linear_coefficient_at_min() const;

 private:
  EntryDistribution() = default;

  DistKind kind_ = DistKind::Uniform01;
  std::string id_ = "uniform";
  double lo_ = 0.0;
  double hi_ = 1.0;
  bool min_density_vanishes_ = false;
  Density density_;
  Sampler sampler_;
};

}  // namespace cyclap
