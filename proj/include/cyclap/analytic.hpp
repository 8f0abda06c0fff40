#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cyclap/distribution.hpp"

namespace cyclap {

/// Cycle weights of the permutation-measure ansatz: the law of the optimal
/// permutation is taken proportional to q1^{p1} * q2^{p2} on S_n, where p1
/// and p2 count fixed points and two-cycles. (1,1) is the uniform measure.
struct QPair {
  double q1 = 1.0;
  double q2 = 1.0;
};

/// Taylor coefficients a_m of exp((q1-1)x + (q2-1)x^2/2) together with the
/// partial sums S_m = sum_{j<=m} a_j. S_n equals the total ansatz weight over
/// S_n divided by n!, so every downstream quantity is factorial-free. Stored
/// in long double: at large q2 the mid-range coefficients reach e^{q2/2}.
class SeriesTable {
 public:
  SeriesTable(QPair q, int n_max);

  QPair q() const { return q_; }
  int n_max() const { return n_max_; }
  long double a(int m) const { return a_[m]; }
  long double s(int m) const { return s_[m]; }

 private:
  QPair q_;
  int n_max_;
  std::vector<long double> a_;
  std::vector<long double> s_;
};

/// Limit of S_m for m -> infinity: e^{q1 + q2/2 - 3/2}.
double omega_limit(QPair q);

/// Exact model expectation of the k-cycle count in dimension n:
///   P_1 = q1 * S_{n-1}/S_n,  P_2 = (q2/2) * S_{n-2}/S_n,
///   P_k = (1/k) * S_{n-k}/S_n  for k >= 3.
/// Throws std::out_of_range unless 1 <= k <= n.
double predicted_pk(QPair q, int n, int k);

/// Same, reusing a precomputed table with n = table.n_max().
double predicted_pk(const SeriesTable& table, int k);

/// k*P_k for the four longest cycle lengths, exact and in the closed
/// asymptotic forms that replace S_n by its limit:
///   n*P_n       ~ E,                    E = e^{3/2 - q1 - q2/2}
///   (n-1)P_{n-1} ~ q1 * E
///   (n-2)P_{n-2} ~ (q2/2 + q1^2/2) * E
///   (n-3)P_{n-3} ~ (1/3 + q1*q2/2 + q1^3/6) * E
struct LongCyclePrediction {
  std::array<int, 4> k;            // n, n-1, n-2, n-3
  std::array<double, 4> asymptotic;  // k*P_k, closed forms
  std::array<double, 4> exact;       // k*P_k = S_{n-k}/S_n
};

/// Requires n >= 7 so all four lengths are above two.
LongCyclePrediction predicted_long_cycles(QPair q, int n);

/// Total number of k-cycles over all permutations of S_n, exactly n!/k.
/// Computed by the recursion
///   nu_n(k) = (n - k + [k==1]) * nu_{n-1}(k) + (k-1) * nu_{n-1}(k-1)
/// in 64-bit integers; requires 1 <= k <= n <= 20.
std::uint64_t nu_nk(int n, int k);

/// Slope coefficient of q1 at the independent point: q1 ≈ 1 + alpha*n*lambda
/// for small |lambda|*n, with
///   alpha = 2 * int rho(x)^2 * A(x) * B(x) dx,
///   A(x) = int_x^inf rho,  B(x) = int_x^inf (z-x) rho(z) dz.
/// Closed form for the built-in distributions (1/4 uniform, 1/2 exponential);
/// nested adaptive quadrature for Custom (relative error <= 1e-6), which
/// throws QuadratureError on non-convergence.
double slope_alpha(const EntryDistribution& dist);

struct ThetaEstimate {
  double value = 0.0;
  double stderr_value = 0.0;
  long samples = 0;
};

/// Monte Carlo estimate of Theta(lambda) = (1/2) P(xi_D > xi_E), where for a
/// 2x2 block with base entries R_ij, R_ji, R_ii, R_jj (drawn in that order)
/// xi_E = min(d_ij, d_ji) and xi_D = min(d_ii, d_jj) under d = R + lambda R^T.
/// Theta(0) = 1/4 for any continuous distribution and Theta(-1) = 1/2;
/// -dTheta/dlambda at 0 equals slope_alpha.
ThetaEstimate theta(double lambda, const EntryDistribution& dist, long samples,
                    std::uint64_t seed);

}  // namespace cyclap
