#include "cyclap/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace cyclap {

namespace {

constexpr double kResidualTol = 1e-9;
constexpr double kTermCutoff = 1e-12;
constexpr int kInnerMaxIters = 200;
constexpr int kOuterMaxIters = 100;

struct Ratios {
  double r1, r2;  // S_{n-1}/S_n and S_{n-2}/S_n
};

Ratios ratios_at(QPair q, int n) {
  const SeriesTable table(q, n);
  const long double sn = table.s(n);
  if (!(sn > 0.0L)) throw FitError("total measure vanished", {.q = q});
  Ratios r{static_cast<double>(table.s(n - 1) / sn),
           static_cast<double>(table.s(n - 2) / sn)};
  if (!(r.r1 > 0.0) || !(r.r2 > 0.0) || !std::isfinite(r.r1) ||
      !std::isfinite(r.r2))
    throw FitError("singular sum ratio", {.q = q});
  return r;
}

/// One Aitken delta-squared extrapolation; falls back to c when the second
/// difference underflows or the extrapolant leaves the domain.
double aitken(double a, double b, double c) {
  const double denom = c - 2.0 * b + a;
  if (!(std::abs(denom) > 1e-300)) return c;
  const double candidate = c - (c - b) * (c - b) / denom;
  return std::isfinite(candidate) ? std::max(0.0, candidate) : c;
}

/// Inverts (P1, 2*P2) at fixed n. target2 is 2*P2. Damped (0.5) fixed-point
/// steps; every third step is extrapolated componentwise, which removes the
/// slow geometric tail near lambda = 1 where the plain map contracts by
/// only ~0.94 per step.
FitResult invert(int n, double target1, double target2, double stderr_p1,
                 double stderr_p2) {
  QPair q{std::max(0.0, target1), std::max(0.0, target2)};
  FitResult out;
  std::vector<QPair> window;
  for (int it = 1; it <= kInnerMaxIters; ++it) {
    const Ratios r = ratios_at(q, n);
    const double p1_model = q.q1 * r.r1;
    const double p2x2_model = q.q2 * r.r2;
    out.q = q;
    out.iterations = it;
    out.residual = std::max(std::abs(p1_model - target1),
                            std::abs(p2x2_model - target2));
    if (out.residual <= kResidualTol) {
      out.q1_err = stderr_p1 / r.r1;
      out.q2_err = 2.0 * stderr_p2 / r.r2;
      return out;
    }
    QPair next{0.5 * q.q1 + 0.5 * std::max(0.0, target1 / r.r1),
               0.5 * q.q2 + 0.5 * std::max(0.0, target2 / r.r2)};
    window.push_back(next);
    if (window.size() == 3) {
      next.q1 = aitken(window[0].q1, window[1].q1, window[2].q1);
      next.q2 = aitken(window[0].q2, window[1].q2, window[2].q2);
      window.clear();
    }
    q = next;
  }
  throw FitError("no convergence after 200 iterations", out);
}

double pk_mean(const SpectrumEstimate& est, int k) { return est.mean_pk[k]; }

void require_small_cycles(const SpectrumEstimate& est) {
  if (est.n < 2 || static_cast<int>(est.mean_pk.size()) <= est.n)
    throw std::invalid_argument("estimate lacks one- and two-cycle means");
  if (!std::isfinite(est.mean_pk[1]) || !std::isfinite(est.mean_pk[2]))
    throw std::invalid_argument("cycle means must be finite");
}

/// Two-cycle excess implied by weights q: sum over even k >= 4 of
/// (k/2) * (Pk_model - Pk_measured), truncated with the model terms.
double even_cycle_correction(const SpectrumEstimate& est, QPair q) {
  if (est.n < 4) return 0.0;
  const SeriesTable table(q, est.n);
  double correction = 0.0;
  for (int k = 4; k <= est.n; k += 2) {
    const double model = predicted_pk(table, k);
    if (model < kTermCutoff) break;
    correction += 0.5 * k * (model - pk_mean(est, k));
  }
  return correction;
}

}  // namespace

FitResult fit_uncorrected(const SpectrumEstimate& est) {
  require_small_cycles(est);
  FitResult out = invert(est.n, pk_mean(est, 1), 2.0 * pk_mean(est, 2),
                         est.stderr_pk[1], est.stderr_pk[2]);
  out.corrected = false;
  return out;
}

FitResult fit_corrected(const SpectrumEstimate& est) {
  require_small_cycles(est);
  const double p1 = pk_mean(est, 1);
  const double p2 = pk_mean(est, 2);
  double correction = 0.0;
  bool clamped = false;
  FitResult prev1, prev2;
  FitResult out;
  for (int it = 1; it <= kOuterMaxIters; ++it) {
    out = invert(est.n, p1, 2.0 * (p2 - correction), est.stderr_pk[1],
                 est.stderr_pk[2]);
    out.corrected = true;
    out.iterations = it;
    out.p2_correction = correction;
    out.correction_clamped = clamped;
    if (it >= 2) {
      const double step = std::max(std::abs(out.q.q1 - prev1.q.q1),
                                   std::abs(out.q.q2 - prev1.q.q2));
      if (step < kResidualTol) return out;
      if (it >= 3) {
        const double back2 = std::max(std::abs(out.q.q1 - prev2.q.q1),
                                      std::abs(out.q.q2 - prev2.q.q2));
        if (back2 < 1e-12 && step > kResidualTol) {
          char buf[160];
          std::snprintf(buf, sizeof buf,
                        "period-2 oscillation between q=(%.12g, %.12g) and "
                        "q=(%.12g, %.12g)",
                        prev1.q.q1, prev1.q.q2, out.q.q1, out.q.q2);
          throw FitError(buf, out);
        }
      }
    }
    prev2 = prev1;
    prev1 = out;
    const double raw = even_cycle_correction(est, out.q);
    clamped = raw < 0.0;
    correction = std::max(0.0, raw);
  }
  throw FitError("correction loop did not settle in 100 iterations", out);
}

RelationReport relation_check(const std::vector<FitPoint>& fits) {
  RelationReport report;
  auto push = [](std::vector<RelationRow>& rows, double& max_rel,
                 const FitPoint& p, double model) {
    RelationRow row;
    row.lambda = p.lambda;
    row.q1 = p.fit.q.q1;
    row.q2 = p.fit.q.q2;
    row.model_q2 = model;
    row.abs_dev = std::abs(row.q2 - model);
    const double scale = std::max({std::abs(row.q2), std::abs(model), 1e-12});
    row.rel_dev = row.abs_dev / scale;
    max_rel = std::max(max_rel, row.rel_dev);
    rows.push_back(row);
  };
  for (const FitPoint& p : fits) {
    const double q1 = p.fit.q.q1;
    if (p.lambda <= 0.0)
      push(report.negative, report.max_rel_dev_negative, p, q1 * q1);
    if (p.lambda >= 0.0)
      push(report.positive, report.max_rel_dev_positive, p,
           std::exp(p.lambda) * q1 * (q1 - p.lambda));
  }
  return report;
}

ScalingReport scaling_check(
    const std::vector<std::pair<FitPoint, FitPoint>>& pairs) {
  ScalingReport report;
  for (const auto& [a, b] : pairs) {
    const double prod_a = a.lambda * a.n;
    const double prod_b = b.lambda * b.n;
    const double scale = std::max({std::abs(prod_a), std::abs(prod_b), 1.0});
    if (std::abs(prod_a - prod_b) > 1e-9 * scale)
      throw std::invalid_argument("pair is not related by a rescaling");
    ScalingRow row;
    row.a = a;
    row.b = b;
    row.diff = a.fit.q.q1 - b.fit.q.q1;
    row.combined_err = std::hypot(a.fit.q1_err, b.fit.q1_err);
    row.z = row.combined_err > 0.0 ? row.diff / row.combined_err : 0.0;
    report.pairs.push_back(row);
    report.collapse.push_back({prod_a, a.fit.q.q1, a.fit.q1_err});
    report.collapse.push_back({prod_b, b.fit.q.q1, b.fit.q1_err});
  }
  return report;
}

}  // namespace cyclap
