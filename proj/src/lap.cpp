#include "cyclap/lap.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cyclap {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void LapWorkspace::resize(int n) {
  cost_.resize(static_cast<std::size_t>(n) * n);
  v_.resize(n);
  dist_.resize(n);
  rowsol_.resize(n);
  colsol_.resize(n);
  free_rows_.resize(n);
  collist_.resize(n);
  pred_.resize(n);
  matches_.resize(n);
}

double assignment_cost(const CostMatrix& m, const Permutation& perm) {
  const int n = m.n();
  long double acc = 0.0L;
  for (int i = 0; i < n; ++i) acc += m.at(i, perm(i));
  return static_cast<double>(acc);
}

Assignment solve(const CostMatrix& m, LapWorkspace& ws) {
  const int n = m.n();
  if (n < 1) throw std::invalid_argument("solve: empty matrix");
  ws.resize(n);

  // Shift by the matrix minimum (equivalence under d -> d + c) so the
  // working costs are nonnegative; reject non-finite input in the same pass.
  const double* src = m.data();
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  double shift = src[0];
  for (std::size_t k = 0; k < nn; ++k) {
    if (!std::isfinite(src[k]))
      throw std::invalid_argument("solve: non-finite cost entry");
    shift = std::min(shift, src[k]);
  }
  double* c = ws.cost_.data();
  for (std::size_t k = 0; k < nn; ++k) c[k] = src[k] - shift;

  double* v = ws.v_.data();
  double* d = ws.dist_.data();
  int* rowsol = ws.rowsol_.data();
  int* colsol = ws.colsol_.data();
  int* free_rows = ws.free_rows_.data();
  int* collist = ws.collist_.data();
  int* pred = ws.pred_.data();
  int* matches = ws.matches_.data();

  std::fill_n(matches, n, 0);
  std::fill_n(rowsol, n, -1);

  // Column reduction, reverse column order.
  for (int j = n - 1; j >= 0; --j) {
    double lo = c[j];
    int imin = 0;
    for (int i = 1; i < n; ++i) {
      const double h = c[static_cast<std::size_t>(i) * n + j];
      if (h < lo) {
        lo = h;
        imin = i;
      }
    }
    v[j] = lo;
    if (matches[imin]++ == 0) {
      rowsol[imin] = j;
      colsol[j] = imin;
    } else {
      colsol[j] = -1;
    }
  }

  // Reduction transfer from rows assigned exactly once.
  int numfree = 0;
  for (int i = 0; i < n; ++i) {
    if (matches[i] == 0) {
      free_rows[numfree++] = i;
    } else if (matches[i] == 1 && n > 1) {
      const int j1 = rowsol[i];
      const double* row = c + static_cast<std::size_t>(i) * n;
      double lo = kInf;
      for (int j = 0; j < n; ++j)
        if (j != j1) lo = std::min(lo, row[j] - v[j]);
      v[j1] -= lo;
    }
  }

  // Augmenting row reduction, two passes.
  for (int pass = 0; pass < 2; ++pass) {
    int k = 0;
    const int prvnumfree = numfree;
    numfree = 0;
    while (k < prvnumfree) {
      const int i = free_rows[k++];
      const double* row = c + static_cast<std::size_t>(i) * n;

      double umin = row[0] - v[0];
      int j1 = 0;
      double usubmin = kInf;
      int j2 = -1;
      for (int j = 1; j < n; ++j) {
        const double h = row[j] - v[j];
        if (h < usubmin) {
          if (h >= umin) {
            usubmin = h;
            j2 = j;
          } else {
            usubmin = umin;
            umin = h;
            j2 = j1;
            j1 = j;
          }
        }
      }

      // A winning margin too small to change v[j1] cannot make progress:
      // rescanning the displaced row would revisit this exact state forever,
      // so such near-ties defer to the next pass like exact ones.
      const bool progress =
          umin < usubmin && v[j1] - (usubmin - umin) != v[j1];
      int i0 = colsol[j1];
      if (progress) {
        v[j1] -= usubmin - umin;
      } else if (i0 >= 0 && j2 >= 0) {
        j1 = j2;
        i0 = colsol[j2];
      }
      rowsol[i] = j1;
      colsol[j1] = i;
      if (i0 >= 0) {
        if (progress)
          free_rows[--k] = i0;
        else
          free_rows[numfree++] = i0;
      }
    }
  }

  // Augment each remaining free row along a shortest alternating path.
  for (int f = 0; f < numfree; ++f) {
    const int freerow = free_rows[f];
    const double* frow = c + static_cast<std::size_t>(freerow) * n;
    for (int j = 0; j < n; ++j) {
      d[j] = frow[j] - v[j];
      pred[j] = freerow;
      collist[j] = j;
    }

    int low = 0, up = 0, last = -1, endofpath = -1;
    double minv = 0.0;
    bool found = false;
    do {
      if (up == low) {
        // Gather all columns attaining the current minimum distance.
        last = low - 1;
        minv = d[collist[up++]];
        for (int k = up; k < n; ++k) {
          const int j = collist[k];
          const double h = d[j];
          if (h <= minv) {
            if (h < minv) {
              up = low;
              minv = h;
            }
            collist[k] = collist[up];
            collist[up++] = j;
          }
        }
        for (int k = low; k < up; ++k) {
          if (colsol[collist[k]] < 0) {
            endofpath = collist[k];
            found = true;
            break;
          }
        }
      }
      if (!found) {
        const int j1 = collist[low++];
        const int i = colsol[j1];
        const double* row = c + static_cast<std::size_t>(i) * n;
        const double h = row[j1] - v[j1] - minv;
        for (int k = up; k < n; ++k) {
          const int j = collist[k];
          const double v2 = row[j] - v[j] - h;
          if (v2 < d[j]) {
            pred[j] = i;
            if (v2 == minv) {
              if (colsol[j] < 0) {
                endofpath = j;
                found = true;
                break;
              }
              collist[k] = collist[up];
              collist[up++] = j;
            }
            d[j] = v2;
          }
        }
      }
    } while (!found);

    for (int k = 0; k <= last; ++k) {
      const int j1 = collist[k];
      v[j1] += d[j1] - minv;
    }

    int i;
    int j = endofpath;
    do {
      i = pred[j];
      colsol[j] = i;
      const int jnext = rowsol[i];
      rowsol[i] = j;
      j = jnext;
    } while (i != freerow);
  }

  Assignment out;
  out.perm.map.assign(rowsol, rowsol + n);
  out.cost = assignment_cost(m, out.perm);
  out.dual_u.resize(n);
  out.dual_v.assign(v, v + n);
  for (int i = 0; i < n; ++i) {
    const int j = rowsol[i];
    out.dual_u[i] = c[static_cast<std::size_t>(i) * n + j] - v[j] + shift;
  }
  assert(check_certificate(m, out));
  return out;
}

Assignment solve(const CostMatrix& m) {
  LapWorkspace ws;
  return solve(m, ws);
}

BruteForceResult brute_force(const CostMatrix& m) {
  const int n = m.n();
  if (n > 10)
    throw std::invalid_argument("brute_force: n > 10 exceeds the size limit");
  for (int k = 0; k < n * n; ++k)
    if (!std::isfinite(m.data()[k]))
      throw std::invalid_argument("brute_force: non-finite cost entry");
  BruteForceResult out;
  Permutation p = Permutation::identity(n);
  out.assignment.perm = p;
  out.assignment.cost = assignment_cost(m, p);
  while (std::next_permutation(p.map.begin(), p.map.end())) {
    const double cost = assignment_cost(m, p);
    if (cost < out.assignment.cost) {
      out.assignment.cost = cost;
      out.assignment.perm = p;
      out.tie = false;
    } else if (cost == out.assignment.cost) {
      out.tie = true;
    }
  }
  return out;
}

bool check_certificate(const CostMatrix& m, const Assignment& a) {
  const int n = m.n();
  if (a.perm.size() != n || !a.perm.is_valid()) return false;
  if (static_cast<int>(a.dual_u.size()) != n ||
      static_cast<int>(a.dual_v.size()) != n)
    return false;
  double scale = 0.0;
  for (std::size_t k = 0; k < static_cast<std::size_t>(n) * n; ++k)
    scale = std::max(scale, std::abs(m.data()[k]));
  const double tol = 1e-9 * std::max(1.0, scale);
  for (int i = 0; i < n; ++i) {
    const double ui = a.dual_u[i];
    for (int j = 0; j < n; ++j)
      if (ui + a.dual_v[j] > m.at(i, j) + tol) return false;
    const int j = a.perm(i);
    if (std::abs(ui + a.dual_v[j] - m.at(i, j)) > tol) return false;
  }
  return true;
}

}  // namespace cyclap
