#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace cyclap {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b].
/// b may be +infinity; the tail is then folded through t -> a + t/(1-t).
/// Stops when the local error estimate is below max(abs_tol, rel_tol*|I|)
/// per subinterval share; throws QuadratureError if the interval stack
/// exceeds max_depth without converging.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 1e-14,
                 int max_depth = 60);

}  // namespace cyclap
