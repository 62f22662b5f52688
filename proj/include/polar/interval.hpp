#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

namespace polar {

// Directed rounding without touching the FPU rounding mode. Each helper
// computes the round-to-nearest result and an error-free residual (TwoSum or
// fma), then steps one ulp in the requested direction only when the rounded
// value lies on the wrong side of the exact result.
namespace rounding {

double add_down(double a, double b) noexcept;
double add_up(double a, double b) noexcept;
double sub_down(double a, double b) noexcept;
double sub_up(double a, double b) noexcept;
double mul_down(double a, double b) noexcept;
double mul_up(double a, double b) noexcept;
double div_down(double a, double b) noexcept;
double div_up(double a, double b) noexcept;

inline double next_down(double x) noexcept { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double next_up(double x) noexcept { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

}  // namespace rounding

/// Closed real interval [lo, hi] with lo <= hi. Arithmetic is outward-rounded,
/// so every result contains the exact real result set.
class Interval {
 public:
  constexpr Interval() noexcept = default;
  constexpr Interval(double point) noexcept : lo_(point), hi_(point) {}  // NOLINT(google-explicit-constructor)
  /// Throws std::invalid_argument when lo > hi or either endpoint is NaN.
  Interval(double lo, double hi);

  static Interval symmetric(double radius);
  static Interval entire() noexcept;

  constexpr double lo() const noexcept { return lo_; }
  constexpr double hi() const noexcept { return hi_; }

  /// Upper bound on hi - lo.
  double width() const noexcept;
  double mid() const noexcept;
  /// Upper bound on the half-width, measured from mid().
  double rad() const noexcept;
  /// max(|lo|, |hi|).
  double mag() const noexcept { return std::fmax(std::fabs(lo_), std::fabs(hi_)); }

  bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
  bool subset_of(const Interval& outer) const noexcept { return outer.lo_ <= lo_ && hi_ <= outer.hi_; }
  bool intersects(const Interval& other) const noexcept { return lo_ <= other.hi_ && other.lo_ <= hi_; }
  bool is_point() const noexcept { return lo_ == hi_; }

  Interval operator-() const noexcept { return from_sorted(-hi_, -lo_); }
  Interval& operator+=(const Interval& rhs) noexcept;
  Interval& operator-=(const Interval& rhs) noexcept;
  Interval& operator*=(const Interval& rhs) noexcept;

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  static constexpr Interval from_sorted(double lo, double hi) noexcept {
    Interval r;
    r.lo_ = lo;
    r.hi_ = hi;
    return r;
  }
  friend Interval operator+(const Interval&, const Interval&) noexcept;
  friend Interval operator-(const Interval&, const Interval&) noexcept;
  friend Interval operator*(const Interval&, const Interval&) noexcept;
  friend Interval scale(const Interval&, double) noexcept;
  friend Interval pow(const Interval&, unsigned) noexcept;
  friend Interval hull(const Interval&, const Interval&) noexcept;
  friend Interval widen(const Interval&, double) noexcept;

  double lo_ = 0.0;
  double hi_ = 0.0;
};

Interval operator+(const Interval& a, const Interval& b) noexcept;
Interval operator-(const Interval& a, const Interval& b) noexcept;
Interval operator*(const Interval& a, const Interval& b) noexcept;

/// Encloses {c*x | x in a}.
Interval scale(const Interval& a, double c) noexcept;

/// Encloses {x^n | x in a}. Even powers of an interval straddling zero start
/// at 0, which is tighter than repeated multiplication.
Interval pow(const Interval& a, unsigned n) noexcept;

Interval hull(const Interval& a, const Interval& b) noexcept;

/// [mid - factor*rad, mid + factor*rad]. For factor >= 1 the result is
/// hulled with a, so it always contains a.
Interval widen(const Interval& a, double factor) noexcept;

inline Interval operator+(const Interval& a, double b) noexcept { return a + Interval(b); }
inline Interval operator*(double c, const Interval& a) noexcept { return scale(a, c); }

std::ostream& operator<<(std::ostream& os, const Interval& iv);

using IntervalVector = std::vector<Interval>;

bool subset_of(std::span<const Interval> inner, std::span<const Interval> outer);
bool intersects(std::span<const Interval> a, std::span<const Interval> b);

}  // namespace polar
