#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include <doctest.h>

#include "dysa/rng.hpp"
#include "dysa/stats.hpp"

using dysa::RngStream;

TEST_CASE("same seed replays the identical sequence") {
  RngStream a(42);
  RngStream b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream c = dysa::make_stream(42, {3, 1, 4});
  RngStream d = dysa::make_stream(42, {3, 1, 4});
  for (int i = 0; i < 100; ++i) CHECK(c.normal() == d.normal());
}

TEST_CASE("path constructor equals chained child calls") {
  RngStream a = dysa::make_stream(7, {2, 5});
  RngStream b = RngStream(7).child(2).child(5);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("sibling streams diverge and do not collide") {
  RngStream root(123);
  RngStream a = root.child(0);
  RngStream b = root.child(1);
  int same = 0;
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t va = a.next_u64();
    const std::uint64_t vb = b.next_u64();
    if (va == vb) ++same;
    seen.insert(va);
    seen.insert(vb);
  }
  CHECK(same == 0);
  CHECK(seen.size() == 2000);
}

TEST_CASE("child draws are uncorrelated with the parent") {
  // Sample correlation between sibling gaussian streams stays tiny.
  RngStream root(2024);
  RngStream a = root.child(10);
  RngStream b = root.child(11);
  const int n = 200000;
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (int i = 0; i < n; ++i) {
    const double x = a.normal();
    const double y = b.normal();
    sa += x;
    sb += y;
    saa += x * x;
    sbb += y * y;
    sab += x * y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  const double va = saa / n - (sa / n) * (sa / n);
  const double vb = sbb / n - (sb / n) * (sb / n);
  const double r = cov / std::sqrt(va * vb);
  CHECK(std::abs(r) < 0.01);
}

TEST_CASE("uniform01 lies in (0, 1]") {
  RngStream s(9);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform01();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("uniform(lo, hi) respects the interval") {
  RngStream s(17);
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform(-2.0, 3.0);
    CHECK(u >= -2.0);
    CHECK(u <= 3.0);
  }
}

TEST_CASE("normal moments match the standard gaussian") {
  RngStream s(321);
  const int n = 100000;
  dysa::MomentAccumulator acc;
  for (int i = 0; i < n; ++i) acc.add(s.normal());
  CHECK(std::abs(acc.mean()) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(acc.variance_sample() > 0.95);
  CHECK(acc.variance_sample() < 1.05);
}

TEST_CASE("next_below stays in range and rejects n = 0") {
  RngStream s(5);
  for (int i = 0; i < 10000; ++i) CHECK(s.next_below(7) < 7);
  CHECK_THROWS_AS(s.next_below(0), std::invalid_argument);
}

TEST_CASE("gaussian_vector with zero stddev returns the mean exactly") {
  RngStream s(88);
  const dysa::Vector mean = {1.5, -2.25, 0.0};
  const dysa::Vector out = dysa::gaussian_vector(s, 3, mean, 0.0);
  CHECK(out == mean);
  // no draws were consumed
  RngStream fresh(88);
  CHECK(s.next_u64() == fresh.next_u64());
}

TEST_CASE("gaussian_vector validates arguments") {
  RngStream s(88);
  const dysa::Vector mean = {1.0, 2.0};
  CHECK_THROWS_AS(dysa::gaussian_vector(s, 3, mean, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(dysa::gaussian_vector(s, 2, mean, -0.5), std::invalid_argument);
}

TEST_CASE("gaussian_vector coordinate moments") {
  RngStream s(777);
  const std::size_t d = 4;
  const dysa::Vector mean = {1.0, -1.0, 0.5, 2.0};
  const int n = 100000;
  std::vector<dysa::MomentAccumulator> acc(d);
  for (int i = 0; i < n; ++i) {
    const dysa::Vector v = dysa::gaussian_vector(s, d, mean, 0.5);
    for (std::size_t j = 0; j < d; ++j) acc[j].add(v[j]);
  }
  for (std::size_t j = 0; j < d; ++j) {
    CHECK(std::abs(acc[j].mean() - mean[j]) < 4.0 * 0.5 / std::sqrt(static_cast<double>(n)));
    CHECK(acc[j].variance_sample() > 0.95 * 0.25);
    CHECK(acc[j].variance_sample() < 1.05 * 0.25);
  }
}
