#include <doctest.h>

#include <cmath>
#include <random>

#include "polar/interval.hpp"
#include "polar/matrix.hpp"
#include "rational.hpp"

using polar::Interval;

TEST_SUITE("interval") {
  TEST_CASE("addition examples") {
    CHECK(Interval(1, 2) + Interval(3, 4) == Interval(4, 6));
    const Interval s = Interval(-0.1, 0.1) + Interval(-0.2, 0.2);
    CHECK(oracle::contains(s, oracle::QInterval{oracle::q(-0.1) + oracle::q(-0.2), oracle::q(0.1) + oracle::q(0.2)}));
    CHECK(s.width() <= 0.6 + 1e-15);
    CHECK(Interval(0, 0) + Interval(-3.5, 7) == Interval(-3.5, 7));
  }

  TEST_CASE("multiplication examples") {
    CHECK(Interval(-1, 2) * Interval(3, 4) == Interval(-4, 8));
    CHECK(Interval(0, 0) * Interval(-2, 5) == Interval(0, 0));
    CHECK(Interval(1, 1) * Interval(-2, 5) == Interval(-2, 5));
  }

  TEST_CASE("scaling examples") {
    CHECK(scale(Interval(1, 3), 2) == Interval(2, 6));
    CHECK(scale(Interval(1, 3), -1) == Interval(-3, -1));
    CHECK(scale(Interval(-5, 7), 0) == Interval(0, 0));
  }

  TEST_CASE("powers") {
    CHECK(pow(Interval(-2, 1), 2) == Interval(0, 4));
    CHECK(pow(Interval(-2, 1), 3) == Interval(-8, 1));
    CHECK(pow(Interval(-2, 1), 0) == Interval(1, 1));
    CHECK(pow(Interval(-3, -2), 2) == Interval(4, 9));
  }

  TEST_CASE("set operations") {
    CHECK(hull(Interval(0, 1), Interval(2, 3)) == Interval(0, 3));
    CHECK(Interval(1, 2).subset_of(Interval(0, 3)));
    CHECK_FALSE(Interval(0, 3).subset_of(Interval(1, 2)));
    CHECK(Interval(-0.3, 0.3).width() == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(Interval(0, 1).intersects(Interval(1, 2)));
    CHECK_FALSE(Interval(0, 1).intersects(Interval(1.5, 2)));
    CHECK_THROWS_AS(Interval(2, 1), std::invalid_argument);
    CHECK_THROWS_AS(Interval(NAN, 1), std::invalid_argument);
  }

  TEST_CASE("widen keeps the original and centres the growth") {
    const Interval a(1, 3);
    const Interval w = widen(a, 2);
    CHECK(a.subset_of(w));
    CHECK(w.lo() <= 0);
    CHECK(w.hi() >= 4);
  }

  TEST_CASE("directed rounding brackets the exact result") {
    using namespace polar::rounding;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-1e3, 1e3);
    for (int i = 0; i < 2000; ++i) {
      const double a = d(rng), b = d(rng) + 1e-7;
      const oracle::Q qa = oracle::q(a), qb = oracle::q(b);
      CHECK(oracle::q(add_down(a, b)) <= qa + qb);
      CHECK(oracle::q(add_up(a, b)) >= qa + qb);
      CHECK(oracle::q(sub_down(a, b)) <= qa - qb);
      CHECK(oracle::q(sub_up(a, b)) >= qa - qb);
      CHECK(oracle::q(mul_down(a, b)) <= qa * qb);
      CHECK(oracle::q(mul_up(a, b)) >= qa * qb);
      CHECK(oracle::q(div_down(a, b)) <= qa / qb);
      CHECK(oracle::q(div_up(a, b)) >= qa / qb);
      // Never more than one ulp away from round-to-nearest.
      CHECK(mul_up(a, b) <= next_up(a * b));
      CHECK(mul_down(a, b) >= next_down(a * b));
    }
  }

  TEST_CASE("soundness: results contain every exact combination of members") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-10, 10);
    std::uniform_real_distribution<double> u(0, 1);
    auto random_interval = [&] {
      double a = d(rng), b = d(rng);
      if (a > b) std::swap(a, b);
      return Interval(a, b);
    };
    auto member = [&](const Interval& x) {
      const double v = x.lo() + u(rng) * (x.hi() - x.lo());
      return std::clamp(v, x.lo(), x.hi());
    };
    for (int i = 0; i < 500; ++i) {
      const Interval a = random_interval(), b = random_interval();
      const unsigned n = static_cast<unsigned>(i % 6);
      const Interval sum = a + b, diff = a - b, prod = a * b, pw = pow(a, n);
      for (int j = 0; j < 10; ++j) {
        const oracle::Q x = oracle::q(member(a)), y = oracle::q(member(b));
        CHECK(oracle::contains(sum, x + y));
        CHECK(oracle::contains(diff, x - y));
        CHECK(oracle::contains(prod, x * y));
        oracle::Q xn = 1;
        for (unsigned e = 0; e < n; ++e) xn *= x;
        CHECK(oracle::contains(pw, xn));
      }
      // Endpoints are members too.
      CHECK(oracle::contains(prod, oracle::q(a.lo()) * oracle::q(b.hi())));
      CHECK(oracle::contains(prod, oracle::q(a.hi()) * oracle::q(b.lo())));
    }
  }

  TEST_CASE("inclusion monotonicity") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(-4, 4);
    for (int i = 0; i < 300; ++i) {
      double a = d(rng), b = d(rng), c = d(rng), e = d(rng);
      if (a > b) std::swap(a, b);
      if (c > e) std::swap(c, e);
      const Interval outer(a, b), other(c, e);
      const Interval inner(a + 0.25 * (b - a), b - 0.25 * (b - a));
      CHECK((inner + other).subset_of(outer + other));
      CHECK((inner * other).subset_of(outer * other));
      CHECK(pow(inner, 3).subset_of(pow(outer, 3)));
      CHECK(pow(inner, 4).subset_of(pow(outer, 4)));
    }
  }

  TEST_CASE("interval matrix products enclose point products") {
    polar::Matrix a(2, 3), b(3, 2);
    double v = 0.1;
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 3; ++c) a(r, c) = (v += 0.37);
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 2; ++c) b(r, c) = (v -= 0.71);
    const polar::IntervalMatrix p = polar::multiply(polar::to_interval(a), polar::to_interval(b));
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c) {
        oracle::Q exact = 0;
        for (std::size_t k = 0; k < 3; ++k) exact += oracle::q(a(r, k)) * oracle::q(b(k, c));
        CHECK(oracle::contains(p(r, c), exact));
      }
    CHECK_THROWS(polar::multiply(polar::to_interval(a), polar::to_interval(a)));
  }
}
