#include <cmath>

#include "cyclap/quadrature.hpp"
#include "doctest.h"

using cyclap::integrate;
using cyclap::QuadratureError;

TEST_CASE("polynomials integrate exactly") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(integrate([](double x) { return 3.0 * x * x - 2.0 * x + 1.0; }, 0.0,
                  2.0) == doctest::Approx(6.0).epsilon(1e-13));
}

TEST_CASE("a shifted interval and a sign change are handled") {
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::sin(x); }, -1.0, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("infinite upper bound folds correctly") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, inf) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(integrate([](double x) { return x * std::exp(-x); }, 0.0, inf) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(integrate([](double x) { return std::exp(-x); }, 2.0, inf) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
}

TEST_CASE("integrable endpoint singularity converges") {
  CHECK(integrate([](double x) { return std::log(x); }, 0.0, 1.0, 1e-8,
                  1e-12) == doctest::Approx(-1.0).epsilon(1e-7));
}

TEST_CASE("a divergent integrand raises an error") {
  CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0),
                  QuadratureError);
}
