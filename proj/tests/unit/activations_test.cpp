#include <doctest.h>

#include <cmath>

#include "interpnet/activations.hpp"
#include "interpnet/errors.hpp"

using namespace interpnet;

namespace {

bool close(double got, double want, double rel = 1e-10) { return std::abs(got - want) <= rel * std::abs(want); }

}  // namespace

// Reference values below were evaluated independently at 30 digits.
TEST_CASE("sigmoid reference values") {
  CHECK(close(sigmoid(5.0), 0.993307149075715));
  CHECK(close(sigmoid(-5.0), 0.00669285092428486));
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(-800.0) >= 0.0);
  CHECK(sigmoid(800.0) == 1.0);
}

TEST_CASE("dsa reference values with default parameters") {
  const DsaParams p;
  CHECK(close(selective_pi(std::sqrt(0.2), p.a1), 0.00497512437810945));
  CHECK(close(super_gaussian(std::sqrt(0.2), p.a2), 0.663915763335));
  CHECK(close(dsa(std::sqrt(0.2), p), 0.334445443857));
  CHECK(close(dsa(std::sqrt(8.84), p), 5.65546883837e-5));
  CHECK(close(dsa(std::sqrt(8.0), p), 6.24921884764e-5));
  CHECK(close(dsa(99.0 * std::sqrt(2.0), p), 2.55076e-8, 1e-5));
}

TEST_CASE("dsa peaks at one and is even") {
  const DsaParams p;
  CHECK(dsa(0.0, p) == 1.0);
  for (double x : {0.001, 0.1, 0.7, 3.0}) {
    CHECK(dsa(x, p) == dsa(-x, p));
    CHECK(dsa(x, p) < 1.0);
  }
}

TEST_CASE("dsa is strictly decreasing in |x|") {
  for (const DsaParams p : {DsaParams{}, DsaParams{1.0, 1.0, 0.5}, DsaParams{0.01, 0.3, 0.9}}) {
    double prev = dsa(0.0, p);
    for (int i = 1; i <= 4000; ++i) {
      const double v = dsa(i * 0.001, p);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("default dsa bands: strong below 0.0158, weak beyond 0.5314") {
  const DsaParams p;
  // Roots of dsa = 0.9 and dsa = 0.1, found by high-precision bisection.
  constexpr double strong_edge = 0.0158113883;
  constexpr double weak_edge = 0.5313754482;
  CHECK(dsa(strong_edge - 1e-8, p) > 0.9);
  CHECK(dsa(strong_edge + 1e-8, p) < 0.9);
  CHECK(dsa(weak_edge - 1e-8, p) > 0.1);
  CHECK(dsa(weak_edge + 1e-8, p) < 0.1);
}

TEST_CASE("dsa parameter validation") {
  CHECK_NOTHROW(DsaParams{}.validate());
  CHECK_THROWS_AS((DsaParams{0.0, 0.5, 0.5}.validate()), InvalidArgument);
  CHECK_THROWS_AS((DsaParams{0.001, -1.0, 0.5}.validate()), InvalidArgument);
  CHECK_THROWS_AS((DsaParams{0.001, 0.5, 1.5}.validate()), InvalidArgument);
}
