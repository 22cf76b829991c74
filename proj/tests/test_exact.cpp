#include <gtest/gtest.h>

#include <drsa/exact.hpp>
#include <drsa/io.hpp>
#include <drsa/oracle.hpp>

#include "support.hpp"

using namespace drsa;

namespace {

int count_topologies(const std::vector<int>& d) {
  int n = 0;
  enumerate_topologies(d, [&](const Topology&) {
    ++n;
    return true;
  });
  return n;
}

// Number of labelled unordered binary trees with n leaves: (2n-3)!!
long double_factorial(int k) {
  long r = 1;
  for (int i = k; i > 1; i -= 2) r *= i;
  return r;
}

TEST(Enumerate, Examples) {
  EXPECT_EQ(count_topologies({1, 2, 2}), 1);
  EXPECT_EQ(count_topologies({1, 1}), 1);
  EXPECT_EQ(enumerate_topologies({2, 2, 2}, [](const Topology&) { return true; }), Status::infeasible);
  EXPECT_EQ(count_topologies({0}), 1);
  // four leaves at depth 2: the three pairings
  EXPECT_EQ(count_topologies({2, 2, 2, 2}), 3);
  // {1,2,3,3}: a caterpillar, but the depth-1 and depth-2 leaves are fixed
  EXPECT_EQ(count_topologies({1, 2, 3, 3}), 1);
  EXPECT_EQ(count_topologies({3, 3, 3, 3, 3, 3, 3, 3}), 315);
}

// Summing over depth profiles recovers every labelled tree exactly once.
TEST(Enumerate, AllShapesCounted) {
  for (int n = 2; n <= 6; ++n) {
    long total = 0;
    std::vector<int> d(n);
    std::function<void(int)> rec = [&](int i) {
      if (i == n) {
        if (support::kraft_equal(d)) {
          total += count_topologies(d);
        }
        return;
      }
      for (int x = 1; x < n; ++x) {
        d[i] = x;
        rec(i + 1);
      }
    };
    rec(0);
    EXPECT_EQ(total, double_factorial(2 * n - 3)) << "n=" << n;
  }
}

TEST(Enumerate, LeafDepthsMatch) {
  std::vector<int> d{1, 3, 3, 3, 4, 4};
  auto want = d;
  std::sort(want.begin(), want.end());
  int n = 0;
  enumerate_topologies(d, [&](const Topology& t) {
    EXPECT_EQ(support::leaf_depths(t), want);
    auto dep = t.depths();
    for (std::size_t v = 0; v < t.nodes.size(); ++v) {
      if (t.nodes[v].label >= 0) {
        EXPECT_EQ(dep[v], d[t.nodes[v].label]);
      }
    }
    ++n;
    return true;
  });
  EXPECT_EQ(n, 3);  // pairings of the four items at depth 3
}

TEST(Enumerate, EarlyStop) {
  int n = 0;
  enumerate_topologies({3, 3, 3, 3, 3, 3, 3, 3}, [&](const Topology&) { return ++n < 10; });
  EXPECT_EQ(n, 10);
}

TEST(SolveExact, Examples) {
  EXPECT_EQ(solve_exact({{{{2, 0}, 1}, {{0, 2}, 1}}}).value.length, 4);
  EXPECT_EQ(solve_exact({{{{2, 2}, 2}, {{2, 0}, 2}, {{0, 2}, 1}}}).value.length, 6);
  EXPECT_EQ(solve_exact({{{{3, 5}, 0}}}).value.length, 8);
  auto bad = solve_exact({{{{1, 1}, 2}, {{1, 2}, 2}, {{2, 1}, 2}}});
  EXPECT_EQ(bad.status, Status::infeasible);
}

TEST(SolveExact, Budget) {
  Instance inst;
  for (int i = 0; i < 8; ++i) inst.terminals.push_back({{i, 7 - i}, 3});
  auto r = solve_exact(inst, {100, 1});
  EXPECT_EQ(r.status, Status::budget_exceeded);
  EXPECT_TRUE(solve_exact(inst, {315, 1}));
}

TEST(SolveExact, MatchesOracle) {
  std::mt19937_64 rng(21);
  for (int it = 0; it < 200; ++it) {
    auto inst = support::random_instance(rng, 1 + it % 4, 5);
    auto r = solve_exact(inst);
    ASSERT_TRUE(r);
    auto want = bruteforce_min_length(inst);
    ASSERT_TRUE(want);
    EXPECT_EQ(r.value.length, *want) << to_text(inst);
    EXPECT_TRUE(verify_solution(inst, r.value).ok);
  }
}

TEST(SolveExact, NoBetterThanAnyPlacement) {
  // the oracle places Steiner points freely; the solver must never beat it
  std::mt19937_64 rng(4);
  for (int it = 0; it < 40; ++it) {
    auto inst = support::random_instance(rng, 5, 6);
    auto r = solve_exact(inst);
    ASSERT_TRUE(r);
    EXPECT_EQ(r.value.length, bruteforce_min_length(inst).value());
  }
}

TEST(SolveExact, SameAcrossThreadCounts) {
  std::mt19937_64 rng(8);
  for (int it = 0; it < 30; ++it) {
    auto inst = support::random_instance(rng, 6 + it % 3, 30);
    auto a = solve_exact(inst, {SolveOptions{}.budget, 1});
    auto b = solve_exact(inst, {SolveOptions{}.budget, 4});
    ASSERT_TRUE(a && b);
    EXPECT_EQ(to_text(a.value), to_text(b.value));
  }
}

TEST(SolveExact, RejectsInvalidInstance) {
  EXPECT_THROW(solve_exact({{{{-1, 3}, 2}}}), Error);
}

}  // namespace
