#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cyclap/cycles.hpp"
#include "cyclap/permutation.hpp"
#include "cyclap/rng.hpp"
#include "doctest.h"

using namespace cyclap;
using cyclap::rng::RandomStream;

namespace {

// Fisher-Yates shuffle driven by our own stream, so tests stay deterministic.
Permutation random_permutation(int n, RandomStream& rng) {
  std::vector<int> m(n);
  std::iota(m.begin(), m.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_u64() % static_cast<uint64_t>(i + 1));
    std::swap(m[i], m[j]);
  }
  return Permutation(std::move(m));
}

}  // namespace

TEST_CASE("identity permutation maps every element to itself") {
  const auto p = Permutation::identity(5);
  REQUIRE(p.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(p(i) == i);
  CHECK(p.is_valid());
}

TEST_CASE("inverse composes to the identity") {
  const Permutation p(std::vector<int>{2, 0, 3, 1});
  const auto inv = p.inverse();
  for (int i = 0; i < p.size(); ++i) {
    CHECK(inv(p(i)) == i);
    CHECK(p(inv(i)) == i);
  }
}

TEST_CASE("checked construction rejects non-bijections") {
  CHECK_THROWS_AS(Permutation::checked({0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation::checked({0, 1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation::checked({-1, 1, 0}), std::invalid_argument);
  CHECK_NOTHROW(Permutation::checked({1, 2, 0}));
}

TEST_CASE("identity decomposes into n fixed points") {
  const auto spec = decompose(Permutation::identity(7));
  CHECK(spec.count(1) == 7);
  CHECK(spec.total_cycles() == 7);
  CHECK(spec.weighted_total() == 7);
}

TEST_CASE("a single n-cycle is recognized") {
  std::vector<int> m{1, 2, 3, 4, 0};
  const auto spec = decompose(Permutation(std::move(m)));
  CHECK(spec.count(5) == 1);
  CHECK(spec.total_cycles() == 1);
  CHECK(spec.count(1) == 0);
}

TEST_CASE("mixed cycle structure is counted exactly") {
  // (0 1)(2 3 4)(5): one 2-cycle, one 3-cycle, one fixed point.
  const Permutation p(std::vector<int>{1, 0, 3, 4, 2, 5});
  const auto spec = decompose(p);
  CHECK(spec.count(1) == 1);
  CHECK(spec.count(2) == 1);
  CHECK(spec.count(3) == 1);
  CHECK(spec.total_cycles() == 3);
  CHECK(spec.weighted_total() == 6);
}

TEST_CASE("decompose rejects malformed maps") {
  CHECK_THROWS_AS(decompose(Permutation(std::vector<int>{0, 0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(decompose(Permutation(std::vector<int>{2, 1})),
                  std::invalid_argument);
}

TEST_CASE("partition identity holds over random permutations") {
  RandomStream rng(99, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 300);
    const auto p = random_permutation(n, rng);
    const auto spec = decompose(p);
    CHECK(spec.weighted_total() == n);
    // A permutation and its inverse share a cycle type.
    const auto inv_spec = decompose(p.inverse());
    spec.for_each([&](int k, int c) { CHECK(inv_spec.count(k) == c); });
    CHECK(inv_spec.total_cycles() == spec.total_cycles());
  }
}

TEST_CASE("cycle lengths across the dense/sparse boundary") {
  // 64 sits in the dense array, 65 in the sparse overflow map.
  auto single_cycle = [](int n) {
    std::vector<int> m(n);
    for (int i = 0; i < n; ++i) m[i] = (i + 1) % n;
    return decompose(Permutation(std::move(m)));
  };
  const auto dense = single_cycle(64);
  CHECK(dense.count(64) == 1);
  CHECK(dense.weighted_total() == 64);
  const auto sparse = single_cycle(65);
  CHECK(sparse.count(65) == 1);
  CHECK(sparse.weighted_total() == 65);
  int seen_k = 0;
  sparse.for_each([&](int k, int c) {
    seen_k = k;
    CHECK(c == 1);
  });
  CHECK(seen_k == 65);
}

TEST_CASE("accumulator means match direct averages") {
  RandomStream rng(7, 1);
  const int n = 12;
  SpectrumAccumulator acc(n);
  std::vector<double> direct_p1;
  std::vector<double> direct_cost;
  for (int s = 0; s < 200; ++s) {
    const auto p = random_permutation(n, rng);
    const auto spec = decompose(p);
    const double cost = rng.uniform01();
    acc.add(spec, cost);
    direct_p1.push_back(spec.count(1));
    direct_cost.push_back(cost);
  }
  const auto est = acc.finalize(0.0, "uniform");
  const double mean_p1 =
      std::accumulate(direct_p1.begin(), direct_p1.end(), 0.0) / 200.0;
  const double mean_cost =
      std::accumulate(direct_cost.begin(), direct_cost.end(), 0.0) / 200.0;
  CHECK(est.samples == 200);
  CHECK(est.mean_pk[1] == doctest::Approx(mean_p1).epsilon(1e-12));
  CHECK(est.mean_cost == doctest::Approx(mean_cost).epsilon(1e-12));
  // Standard error agrees with the textbook two-pass formula.
  double ss = 0.0;
  for (double v : direct_p1) ss += (v - mean_p1) * (v - mean_p1);
  const double se = std::sqrt(ss / (200.0 * 199.0));
  CHECK(est.stderr_pk[1] == doctest::Approx(se).epsilon(1e-10));
}

TEST_CASE("merged accumulators agree with sequential accumulation") {
  RandomStream rng(13, 2);
  const int n = 20;
  std::vector<CycleSpectrum> specs;
  std::vector<double> costs;
  for (int s = 0; s < 300; ++s) {
    specs.push_back(decompose(random_permutation(n, rng)));
    costs.push_back(rng.uniform01() * 10.0);
  }

  SpectrumAccumulator sequential(n);
  for (int s = 0; s < 300; ++s) sequential.add(specs[s], costs[s]);

  // Uneven three-way split, merged pairwise.
  SpectrumAccumulator a(n), b(n), c(n);
  for (int s = 0; s < 37; ++s) a.add(specs[s], costs[s]);
  for (int s = 37; s < 211; ++s) b.add(specs[s], costs[s]);
  for (int s = 211; s < 300; ++s) c.add(specs[s], costs[s]);
  a.merge(b);
  a.merge(c);

  const auto ref = sequential.finalize(0.5, "exp");
  const auto got = a.finalize(0.5, "exp");
  CHECK(got.samples == ref.samples);
  for (int k = 1; k <= n; ++k) {
    CHECK(got.mean_pk[k] == doctest::Approx(ref.mean_pk[k]).epsilon(1e-10));
    CHECK(got.stderr_pk[k] ==
          doctest::Approx(ref.stderr_pk[k]).epsilon(1e-8).scale(1e-12));
  }
  CHECK(got.mean_nc == doctest::Approx(ref.mean_nc).epsilon(1e-10));
  CHECK(got.mean_cost == doctest::Approx(ref.mean_cost).epsilon(1e-10));
  CHECK(got.stderr_cost == doctest::Approx(ref.stderr_cost).epsilon(1e-8));
}

TEST_CASE("merging an empty accumulator is a no-op") {
  const int n = 6;
  SpectrumAccumulator acc(n);
  acc.add(decompose(Permutation::identity(n)), 1.0);
  SpectrumAccumulator empty(n);
  acc.merge(empty);
  const auto est = acc.finalize(0.0, "uniform");
  CHECK(est.samples == 1);
  CHECK(est.mean_pk[1] == doctest::Approx(6.0));

  // Merging into an empty accumulator adopts the other side.
  SpectrumAccumulator fresh(n);
  fresh.merge(acc);
  CHECK(fresh.count() == 1);
}

TEST_CASE("finalize on an empty accumulator throws") {
  SpectrumAccumulator acc(4);
  CHECK_THROWS_AS(acc.finalize(0.0, "uniform"), std::logic_error);
}
