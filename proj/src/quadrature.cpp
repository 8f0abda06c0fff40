#include "cyclap/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

namespace cyclap {
namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Estimate {
  double integral;
  double error;
};

Estimate gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double res_g = fc * kWg[3];
  double res_k = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double fsum = f(c - x) + f(c + x);
    res_k += kWgk[j] * fsum;
    if (j % 2 == 1) res_g += kWg[j / 2] * fsum;
  }
  res_g *= h;
  res_k *= h;
  return {res_k, std::abs(res_k - res_g)};
}

double integrate_finite(const std::function<double(double)>& f, double a,
                        double b, double rel_tol, double abs_tol,
                        int max_depth) {
  struct Segment {
    double a, b;
    Estimate est;
    int depth;
  };
  std::vector<Segment> stack;
  stack.push_back({a, b, gk15(f, a, b), 0});
  double total = stack.back().est.integral;
  double err = stack.back().est.error;
  // Bisect the worst segment until the summed error estimate is acceptable.
  while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
    std::size_t worst = 0;
    for (std::size_t i = 1; i < stack.size(); ++i)
      if (stack[i].est.error > stack[worst].est.error) worst = i;
    Segment seg = stack[worst];
    if (seg.depth >= max_depth) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "quadrature did not converge: interval [%g, %g], local "
                    "error %.3e, total %.3e",
                    seg.a, seg.b, seg.est.error, total);
      throw QuadratureError(buf);
    }
    const double mid = 0.5 * (seg.a + seg.b);
    Segment left{seg.a, mid, gk15(f, seg.a, mid), seg.depth + 1};
    Segment right{mid, seg.b, gk15(f, mid, seg.b), seg.depth + 1};
    stack[worst] = left;
    stack.push_back(right);
    total += left.est.integral + right.est.integral - seg.est.integral;
    err += left.est.error + right.est.error - seg.est.error;
    if (stack.size() > 100000)
      throw QuadratureError("quadrature interval stack exploded");
  }
  double sum = 0.0;
  for (const auto& s : stack) sum += s.est.integral;
  return sum;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_tol, int max_depth) {
  if (!(a <= b)) throw QuadratureError("integrate: requires a <= b");
  if (a == b) return 0.0;
  if (std::isinf(b)) {
    // x = a + t/(1-t), dx = dt/(1-t)^2, t in [0, 1).
    auto g = [&f, a](double t) {
      const double om = 1.0 - t;
      const double x = a + t / om;
      return f(x) / (om * om);
    };
    return integrate_finite(g, 0.0, 1.0 - 1e-14, rel_tol, abs_tol, max_depth);
  }
  return integrate_finite(f, a, b, rel_tol, abs_tol, max_depth);
}

}  // namespace cyclap
