#pragma once

// Hand-rolled property-test helpers: a seeded generator and a runner that
// reports the failing case index and seed.

#include <gtest/gtest.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace tgk_test {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(integer(0, static_cast<int>(v.size()) - 1))];
  }

  std::vector<double> vector(int n, double lo, double hi) {
    std::vector<double> out(n);
    for (double& x : out) x = uniform(lo, hi);
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

// Runs `prop(gen)` for `cases` generated inputs; each case gets its own seed
// so a failure can be replayed in isolation.
template <class Prop>
void for_all(int cases, std::uint64_t seed, Prop&& prop) {
  for (int i = 0; i < cases; ++i) {
    const std::uint64_t s = seed * 1000003ULL + static_cast<std::uint64_t>(i);
    Gen g(s);
    SCOPED_TRACE("property case " + std::to_string(i) + ", seed " + std::to_string(s));
    prop(g);
    if (::testing::Test::HasFatalFailure()) return;
  }
}

}  // namespace tgk_test
