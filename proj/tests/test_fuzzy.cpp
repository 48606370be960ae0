#include <doctest.h>

#include <algorithm>
#include <random>

#include "heartcbr/fuzzy.hpp"

using namespace heartcbr::fuzzy;

TEST_CASE("triangular membership") {
  const Triangular<double> t(0.0, 1.0, 2.0);
  CHECK(membership(1.0, t) == 1.0);
  CHECK(membership(0.0, t) == 0.0);
  CHECK(membership(-3.0, t) == 0.0);
  CHECK(membership(2.0, t) == 0.0);
  CHECK(membership(5.0, t) == 0.0);
  CHECK(membership(0.5, t) == 0.5);
  CHECK(membership(1.5, t) == 0.5);
  CHECK(triangular_membership(0.25, 0.0, 1.0, 2.0) == 0.25);
  CHECK(triangular_membership(3.0f, 2.0f, 4.0f, 8.0f) == 0.5f);
  CHECK_THROWS_AS(Triangular<double>(1.0, 1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(Triangular<double>(0.0, 2.0, 2.0), std::invalid_argument);
}

TEST_CASE("trapezoidal membership") {
  const Trapezoidal<double> t(0.0, 1.0, 2.0, 4.0);
  for (double x : {1.0, 1.25, 1.5, 2.0}) CHECK(membership(x, t) == 1.0);
  CHECK(membership(-0.5, t) == 0.0);
  CHECK(membership(4.5, t) == 0.0);
  CHECK(membership(0.0, t) == 0.0);
  CHECK(membership(4.0, t) == 0.0);
  CHECK(membership(3.0, t) == 0.5);
  CHECK(membership(0.5, t) == 0.5);
  CHECK(trapezoidal_membership(3.0, 0.0, 1.0, 2.0, 4.0) == 0.5);
  CHECK_THROWS_AS(Trapezoidal<double>(0.0, 2.0, 1.0, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(Trapezoidal<double>(1.0, 1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("vertical shoulders") {
  const Trapezoidal<double> left(0.0, 0.0, 2.0, 3.0);
  CHECK(membership(0.0, left) == 1.0);
  CHECK(membership(-1e-9, left) == 0.0);
  const Trapezoidal<double> right(0.0, 1.0, 3.0, 3.0);
  CHECK(membership(3.0, right) == 1.0);
  CHECK(membership(3.0 + 1e-9, right) == 0.0);
}

TEST_CASE("property: memberships stay in [0,1] and are unimodal") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 500; ++trial) {
    double p[4] = {u(gen), u(gen), u(gen), u(gen)};
    std::sort(p, p + 4);
    if (!(p[0] < p[1] && p[1] < p[2])) continue;
    const Triangular<double> tri(p[0], p[1], p[2]);
    const Trapezoidal<double> trap(p[0], p[1], p[2], p[3]);
    double prev_tri = 0.0;
    double prev_trap = 0.0;
    for (double x = p[0] - 1.0; x <= p[1]; x += 0.01) {
      const double mt = membership(x, tri);
      const double mz = membership(x, trap);
      CHECK(mt >= prev_tri - 1e-15);
      CHECK(mz >= prev_trap - 1e-15);
      CHECK(mt >= 0.0);
      CHECK(mt <= 1.0);
      prev_tri = mt;
      prev_trap = mz;
    }
  }
}
