#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cyclap/analytic.hpp"
#include "cyclap/cycles.hpp"

namespace cyclap {

/// Weights recovered from one measured spectrum. q1_err/q2_err are the
/// measurement standard errors pushed through the inversion (the correction
/// term is treated as deterministic). p2_correction is the two-cycle excess
/// attributed to broken even cycles; zero for the uncorrected fit.
struct FitResult {
  QPair q;
  int iterations = 0;
  double residual = 0.0;
  bool corrected = false;
  double p2_correction = 0.0;
  bool correction_clamped = false;  // raw correction was negative
  double q1_err = 0.0;
  double q2_err = 0.0;
};

/// Non-convergence or oscillation; carries the last iterate(s).
class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, FitResult last_iterate)
      : std::runtime_error(what), last(std::move(last_iterate)) {}
  FitResult last;
};

/// Solves q1*S_{n-1}/S_n = P1, (q2/2)*S_{n-2}/S_n = P2 for the measured
/// means by damped fixed-point iteration (damping 0.5, seed (P1, 2*P2)).
/// Converged when max(|P1_model - P1|, |2P2_model - 2P2|) <= 1e-9; throws
/// FitError after 200 iterations.
FitResult fit_uncorrected(const SpectrumEstimate& est);

/// Outer iteration for spectra where even cycles above length two are
/// depleted: each missing even 2L-cycle is counted as L extra measured
/// two-cycles, so the fit inverts (P1, P2') with
///   P2' = P2 - sum_{even k>=4} (k/2) * (Pk_model - Pk_measured),
/// the sum truncated once model terms drop below 1e-12. Repeats until the
/// weights move less than 1e-9 or 100 iterations; a period-2 oscillation
/// raises FitError naming both iterates.
FitResult fit_corrected(const SpectrumEstimate& est);

/// One fitted point on a lambda grid.
struct FitPoint {
  double lambda = 0.0;
  int n = 0;
  FitResult fit;
};

struct RelationRow {
  double lambda = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
  double model_q2 = 0.0;  // q1^2 (lambda<0) or e^lambda*q1*(q1-lambda)
  double abs_dev = 0.0;
  double rel_dev = 0.0;
};

struct RelationReport {
  std::vector<RelationRow> negative;  // lambda <= 0, model q2 = q1^2
  std::vector<RelationRow> positive;  // lambda >= 0, model e^l*q1*(q1-l)
  double max_rel_dev_negative = 0.0;
  double max_rel_dev_positive = 0.0;
};

/// Tabulates both empirical weight relations over a fitted grid; a data
/// product, no pass/fail. lambda = 0 points land in both halves.
RelationReport relation_check(const std::vector<FitPoint>& fits);

struct ScalingRow {
  FitPoint a, b;
  double diff = 0.0;          // q1(a) - q1(b)
  double combined_err = 0.0;  // sqrt(q1_err_a^2 + q1_err_b^2)
  double z = 0.0;             // diff / combined_err, 0 when err is 0
};

struct CollapsePoint {
  double lambda_n = 0.0;  // lambda * n
  double q1 = 0.0;
  double q1_err = 0.0;
};

struct ScalingReport {
  std::vector<ScalingRow> pairs;
  std::vector<CollapsePoint> collapse;
};

/// Checks the rescaling symmetry q1(lambda, n) = q1(mu*lambda, n/mu): every
/// input pair must share the product lambda*n (relative tolerance 1e-9,
/// else std::invalid_argument). Also emits q1 against lambda*n for collapse
/// plots.
ScalingReport scaling_check(
    const std::vector<std::pair<FitPoint, FitPoint>>& pairs);

}  // namespace cyclap
