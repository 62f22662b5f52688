#pragma once
// Exact rational arithmetic used as an independent oracle for floating-point
// and interval results. Every finite double converts to a rational exactly.

#include <algorithm>
#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "polar/interval.hpp"

namespace oracle {

using Q = boost::multiprecision::cpp_rational;

inline Q q(double x) { return Q(x); }

inline bool contains(const polar::Interval& iv, const Q& x) { return q(iv.lo()) <= x && x <= q(iv.hi()); }

struct QInterval {
  Q lo;
  Q hi;
};

inline QInterval qi(const polar::Interval& iv) { return {q(iv.lo()), q(iv.hi())}; }

inline bool contains(const polar::Interval& outer, const QInterval& inner) {
  return q(outer.lo()) <= inner.lo && inner.hi <= q(outer.hi());
}

inline QInterval operator+(const QInterval& a, const QInterval& b) { return {a.lo + b.lo, a.hi + b.hi}; }

inline QInterval operator*(const QInterval& a, const QInterval& b) {
  const Q p[] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(std::begin(p), std::end(p)), *std::max_element(std::begin(p), std::end(p))};
}

inline QInterval scale(const QInterval& a, const Q& c) {
  return c >= 0 ? QInterval{a.lo * c, a.hi * c} : QInterval{a.hi * c, a.lo * c};
}

/// Exact range of x^n for x in [lo, hi].
inline QInterval power(const QInterval& a, unsigned n) {
  if (n == 0) return {Q(1), Q(1)};
  Q l = 1, h = 1;
  for (unsigned i = 0; i < n; ++i) {
    l *= a.lo;
    h *= a.hi;
  }
  if (n % 2 == 1) return {l, h};
  if (a.lo >= 0) return {l, h};
  if (a.hi <= 0) return {h, l};
  return {Q(0), std::max(l, h)};
}

/// Dense univariate polynomial, index = exponent.
using QPoly = std::vector<Q>;

inline QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly out(a.size() + b.size() - 1, Q(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

/// Monomial-wise interval bound of a univariate polynomial over a box.
inline QInterval bound(const QPoly& p, const QInterval& box) {
  QInterval acc{Q(0), Q(0)};
  for (std::size_t e = 0; e < p.size(); ++e)
    if (p[e] != 0) acc = acc + scale(power(box, static_cast<unsigned>(e)), p[e]);
  return acc;
}

}  // namespace oracle
