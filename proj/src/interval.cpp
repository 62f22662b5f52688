#include "polar/interval.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace polar {

namespace rounding {
namespace {

// Below this magnitude an fma residual may itself be rounded (gradual
// underflow), so the product is widened unconditionally.
constexpr double kTiny = 0x1p-960;

// Knuth TwoSum residual: (a + b) - fl(a + b), exact for finite inputs.
inline double two_sum_err(double a, double b, double s) noexcept {
  const double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}

}  // namespace

double add_down(double a, double b) noexcept {
  const double s = a + b;
  if (!std::isfinite(s)) return s;
  return two_sum_err(a, b, s) < 0.0 ? next_down(s) : s;
}

double add_up(double a, double b) noexcept {
  const double s = a + b;
  if (!std::isfinite(s)) return s;
  return two_sum_err(a, b, s) > 0.0 ? next_up(s) : s;
}

double sub_down(double a, double b) noexcept { return add_down(a, -b); }
double sub_up(double a, double b) noexcept { return add_up(a, -b); }

double mul_down(double a, double b) noexcept {
  const double p = a * b;
  if (!std::isfinite(p) || a == 0.0 || b == 0.0) return p;
  if (std::fabs(p) < kTiny) return next_down(p);
  return std::fma(a, b, -p) < 0.0 ? next_down(p) : p;
}

double mul_up(double a, double b) noexcept {
  const double p = a * b;
  if (!std::isfinite(p) || a == 0.0 || b == 0.0) return p;
  if (std::fabs(p) < kTiny) return next_up(p);
  return std::fma(a, b, -p) > 0.0 ? next_up(p) : p;
}

double div_down(double a, double b) noexcept {
  const double q = a / b;
  if (!std::isfinite(q) || a == 0.0) return q;
  if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return next_down(q);
  const double r = std::fma(-q, b, a);  // a - q*b, exact
  return (r < 0.0) != (b < 0.0) && r != 0.0 ? next_down(q) : q;
}

double div_up(double a, double b) noexcept {
  const double q = a / b;
  if (!std::isfinite(q) || a == 0.0) return q;
  if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return next_up(q);
  const double r = std::fma(-q, b, a);
  return (r > 0.0) == (b > 0.0) && r != 0.0 ? next_up(q) : q;
}

}  // namespace rounding

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(lo <= hi)) throw std::invalid_argument("interval lower endpoint exceeds upper endpoint");
}

Interval Interval::symmetric(double radius) {
  const double r = std::fabs(radius);
  return Interval(-r, r);
}

Interval Interval::entire() noexcept {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return from_sorted(-inf, inf);
}

double Interval::width() const noexcept { return rounding::sub_up(hi_, lo_); }

double Interval::mid() const noexcept {
  if (lo_ == -hi_) return 0.0;
  const double m = 0.5 * lo_ + 0.5 * hi_;
  return std::clamp(m, lo_, hi_);
}

double Interval::rad() const noexcept {
  const double m = mid();
  return std::fmax(rounding::sub_up(m, lo_), rounding::sub_up(hi_, m));
}

Interval& Interval::operator+=(const Interval& rhs) noexcept { return *this = *this + rhs; }
Interval& Interval::operator-=(const Interval& rhs) noexcept { return *this = *this - rhs; }
Interval& Interval::operator*=(const Interval& rhs) noexcept { return *this = *this * rhs; }

Interval operator+(const Interval& a, const Interval& b) noexcept {
  return Interval::from_sorted(rounding::add_down(a.lo_, b.lo_), rounding::add_up(a.hi_, b.hi_));
}

Interval operator-(const Interval& a, const Interval& b) noexcept {
  return Interval::from_sorted(rounding::sub_down(a.lo_, b.hi_), rounding::sub_up(a.hi_, b.lo_));
}

Interval operator*(const Interval& a, const Interval& b) noexcept {
  using namespace rounding;
  if (a.lo_ == 0.0 && a.hi_ == 0.0) return Interval();
  if (b.lo_ == 0.0 && b.hi_ == 0.0) return Interval();
  const double lo = std::min({mul_down(a.lo_, b.lo_), mul_down(a.lo_, b.hi_), mul_down(a.hi_, b.lo_),
                              mul_down(a.hi_, b.hi_)});
  const double hi = std::max({mul_up(a.lo_, b.lo_), mul_up(a.lo_, b.hi_), mul_up(a.hi_, b.lo_),
                              mul_up(a.hi_, b.hi_)});
  return Interval::from_sorted(lo, hi);
}

Interval scale(const Interval& a, double c) noexcept {
  using namespace rounding;
  if (c == 0.0) return Interval();
  if (c > 0.0) return Interval::from_sorted(mul_down(a.lo_, c), mul_up(a.hi_, c));
  return Interval::from_sorted(mul_down(a.hi_, c), mul_up(a.lo_, c));
}

namespace {

// Enclosure of x^n for x >= 0 given as a bound pair.
Interval pow_nonneg(double lo, double hi, unsigned n) noexcept {
  double plo = 1.0;
  double phi = 1.0;
  for (unsigned i = 0; i < n; ++i) {
    plo = rounding::mul_down(plo, lo);
    phi = rounding::mul_up(phi, hi);
  }
  return Interval(plo, phi);
}

}  // namespace

Interval pow(const Interval& a, unsigned n) noexcept {
  if (n == 0) return Interval(1.0);
  if (n == 1) return a;
  if (a.lo_ >= 0.0) return pow_nonneg(a.lo_, a.hi_, n);
  if (a.hi_ <= 0.0) {
    const Interval p = pow_nonneg(-a.hi_, -a.lo_, n);
    return n % 2 == 0 ? p : -p;
  }
  // Straddles zero.
  if (n % 2 == 0) {
    const Interval p = pow_nonneg(0.0, std::fmax(-a.lo_, a.hi_), n);
    return Interval::from_sorted(0.0, p.hi_);
  }
  const Interval neg = pow_nonneg(0.0, -a.lo_, n);
  const Interval pos = pow_nonneg(0.0, a.hi_, n);
  return Interval::from_sorted(-neg.hi_, pos.hi_);
}

Interval hull(const Interval& a, const Interval& b) noexcept {
  return Interval::from_sorted(std::min(a.lo_, b.lo_), std::max(a.hi_, b.hi_));
}

Interval widen(const Interval& a, double factor) noexcept {
  const double m = a.mid();
  const double r = rounding::mul_up(a.rad(), std::fabs(factor));
  const Interval scaled = Interval::from_sorted(rounding::sub_down(m, r), rounding::add_up(m, r));
  return factor >= 1.0 ? hull(a, scaled) : scaled;
}

std::ostream& operator<<(std::ostream& os, const Interval& iv) {
  return os << '[' << iv.lo() << ", " << iv.hi() << ']';
}

bool subset_of(std::span<const Interval> inner, std::span<const Interval> outer) {
  if (inner.size() != outer.size()) return false;
  for (std::size_t i = 0; i < inner.size(); ++i)
    if (!inner[i].subset_of(outer[i])) return false;
  return true;
}

bool intersects(std::span<const Interval> a, std::span<const Interval> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].intersects(b[i])) return false;
  return true;
}

}  // namespace polar
