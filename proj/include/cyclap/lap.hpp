#pragma once

#include <vector>

#include "cyclap/ensemble.hpp"
#include "cyclap/permutation.hpp"

namespace cyclap {

/// Optimal assignment with its dual certificate: u[i] + v[j] <= d[i][j]
/// everywhere, tight on assigned pairs. brute_force() leaves the dual
/// arrays empty (the enumeration oracle proves optimality by exhaustion).
struct Assignment {
  Permutation perm;
  double cost = 0.0;
  std::vector<double> dual_u;
  std::vector<double> dual_v;
};

struct BruteForceResult {
  Assignment assignment;
  bool tie = false;  // another permutation attained exactly the same cost
};

/// Reusable scratch buffers for solve(). One workspace serves one caller
/// at a time.
class LapWorkspace {
 public:
  void resize(int n);

 private:
  friend Assignment solve(const CostMatrix&, LapWorkspace&);
  std::vector<double> cost_, v_, dist_;
  std::vector<int> rowsol_, colsol_, free_rows_, collist_, pred_, matches_;
};

/// Jonker-Volgenant shortest augmenting path solver for the dense square
/// assignment problem. Entries may be negative: the solver shifts by the
/// matrix minimum internally and restores true costs on output. Deterministic
/// scan order; rejects non-finite entries with std::invalid_argument.
Assignment solve(const CostMatrix& m);
Assignment solve(const CostMatrix& m, LapWorkspace& ws);

/// Exhaustive oracle over all n! permutations, n <= 10. Enumerates in
/// lexicographic order, so on exact cost ties the lexicographically smallest
/// permutation is returned and the tie flag is set.
BruteForceResult brute_force(const CostMatrix& m);

/// Sum of d[i][perm(i)] accumulated in long double, ascending i. Both
/// solve() and brute_force() report costs through this one routine.
double assignment_cost(const CostMatrix& m, const Permutation& perm);

/// Dual feasibility + complementary slackness at tolerance scaled by
/// 1e-9 * max|d|.
bool check_certificate(const CostMatrix& m, const Assignment& a);

}  // namespace cyclap
