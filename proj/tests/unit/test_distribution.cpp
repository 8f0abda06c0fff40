#include <cmath>
#include <stdexcept>

#include "cyclap/distribution.hpp"
#include "cyclap/rng.hpp"
#include "doctest.h"

using cyclap::DistKind;
using cyclap::EntryDistribution;
using cyclap::rng::RandomStream;

namespace {

double sample_mean(const EntryDistribution& dist, int n) {
  RandomStream s(123, 0);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += dist.sample(s);
  return sum / n;
}

}  // namespace

TEST_CASE("built-in densities and ids") {
  const auto u = EntryDistribution::uniform01();
  CHECK(u.kind() == DistKind::Uniform01);
  CHECK(u.id() == "uniform");
  CHECK(u.density(0.5) == 1.0);
  CHECK(u.density(1.5) == 0.0);
  CHECK(u.linear_coefficient_at_min() == 0.0);

  const auto e = EntryDistribution::exponential1();
  CHECK(e.id() == "exp");
  CHECK(e.density(0.0) == 1.0);
  CHECK(e.density(2.0) == doctest::Approx(std::exp(-2.0)));
  CHECK(e.support_hi() == std::numeric_limits<double>::infinity());
  CHECK(e.linear_coefficient_at_min() == 1.0);
}

TEST_CASE("sample means match the first moments") {
  CHECK(sample_mean(EntryDistribution::uniform01(), 200000) ==
        doctest::Approx(0.5).epsilon(0.005));
  CHECK(sample_mean(EntryDistribution::exponential1(), 200000) ==
        doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("exponential samples are nonnegative and finite") {
  const auto e = EntryDistribution::exponential1();
  RandomStream s(7, 0);
  for (int i = 0; i < 100000; ++i) {
    const double x = e.sample(s);
    REQUIRE(x >= 0.0);
    REQUIRE(std::isfinite(x));
  }
}

TEST_CASE("custom distributions validate their density") {
  auto half_density = [](double) { return 0.5; };
  auto sampler = [](RandomStream& s) { return s.uniform01(); };
  CHECK_THROWS_AS(EntryDistribution::custom("bad", half_density, sampler, 0.0,
                                            1.0),
                  std::invalid_argument);

  const auto ok = EntryDistribution::custom(
      "unit", [](double) { return 1.0; }, sampler, 0.0, 1.0);
  CHECK(ok.kind() == DistKind::Custom);
  CHECK(ok.id() == "unit");
  CHECK_FALSE(ok.min_density_vanishes());
}

TEST_CASE("a density vanishing at the support minimum is flagged") {
  auto rising = [](double x) { return 2.0 * x; };
  auto sampler = [](RandomStream& s) { return std::sqrt(s.uniform01()); };
  const auto dist =
      EntryDistribution::custom("rising", rising, sampler, 0.0, 1.0);
  CHECK(dist.min_density_vanishes());
}

TEST_CASE("custom linear coefficient is recovered numerically") {
  auto density = [](double x) { return std::exp(-x); };
  auto sampler = [](RandomStream& s) { return -std::log1p(-s.uniform01()); };
  const auto dist = EntryDistribution::custom(
      "exp_copy", density, sampler, 0.0,
      std::numeric_limits<double>::infinity());
  CHECK(dist.linear_coefficient_at_min() == doctest::Approx(1.0).epsilon(1e-4));
}
