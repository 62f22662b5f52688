#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "polar/interval.hpp"
#include "polar/matrix.hpp"
#include "polar/polynomial.hpp"

namespace polar {

/// Taylor model (p, I): the set {p(z) + r | z in domain, r in I}. A TM
/// over-approximates a function f point-wise when f(z) - p(z) lies in I for
/// every z in the domain.
///
/// Coefficients are plain doubles. Every operation bounds the rounding error
/// it commits on coefficients and adds that bound to the remainder, so the
/// point-wise containment survives floating-point evaluation.
class TaylorModel {
 public:
  TaylorModel() = default;
  /// Throws DimensionError when the polynomial's variable count differs from
  /// the domain dimension or its degree exceeds the order.
  TaylorModel(Polynomial poly, Interval rem, Domain domain, unsigned order);

  static TaylorModel constant(double c, const Domain& domain, unsigned order);
  static TaylorModel variable(std::size_t var, const Domain& domain, unsigned order);

  const Polynomial& poly() const noexcept { return poly_; }
  const Interval& rem() const noexcept { return rem_; }
  const Domain& domain() const noexcept { return domain_; }
  unsigned order() const noexcept { return order_; }
  std::size_t num_vars() const noexcept { return poly_.num_vars(); }

  /// Range enclosure: bound(poly) + rem.
  Interval range() const;
  /// Enclosure of the represented set at one parameter point, given as a
  /// (possibly thin) box.
  Interval at(std::span<const Interval> point) const;

  TaylorModel with_remainder(const Interval& rem) const;
  TaylorModel add_remainder(const Interval& extra) const;

 private:
  Polynomial poly_;
  Interval rem_;
  Domain domain_;
  unsigned order_ = 0;
};

TaylorModel operator+(const TaylorModel& a, const TaylorModel& b);
TaylorModel operator-(const TaylorModel& a, const TaylorModel& b);
TaylorModel operator-(const TaylorModel& a);

/// Order-k product: (trunc_k(pa*pb), Ia*B(pb) + B(pa)*Ib + Ia*Ib + B(r_k)).
/// Uses the order of the operands, which must agree.
TaylorModel operator*(const TaylorModel& a, const TaylorModel& b);

TaylorModel scale(const TaylorModel& a, double c);
TaylorModel add_constant(const TaylorModel& a, double c);

/// Coefficients of p(y0 + s) as a polynomial in s, each enclosed in an
/// interval so the shift itself is exact.
std::vector<Interval> shift_univariate(const Polynomial& p, double y0);

/// Horner evaluation of sum_k coeffs[k] * s^k with TM arithmetic.
TaylorModel horner(std::span<const double> coeffs, const TaylorModel& s);

/// p(t) + I with p univariate. The substitution is centred at the midpoint y0
/// of t's range: p is re-expanded around y0 and evaluated by Horner on
/// t - y0, which keeps the monomial coefficients well conditioned.
TaylorModel compose_univariate(const Polynomial& p, const Interval& extra_rem, const TaylorModel& t);

/// Vector of TMs sharing one domain and order.
class TMVector {
 public:
  TMVector() = default;
  /// Throws DimensionError when components disagree on domain or order.
  explicit TMVector(std::vector<TaylorModel> components);

  /// Identity parameterisation of a box: component i = mid_i + rad_i * z_i
  /// over z in [-1, 1]^n.
  static TMVector from_box(std::span<const Interval> box, unsigned order);

  std::size_t size() const noexcept { return components_.size(); }
  bool empty() const noexcept { return components_.empty(); }
  const TaylorModel& operator[](std::size_t i) const noexcept { return components_[i]; }
  const std::vector<TaylorModel>& components() const noexcept { return components_; }
  const Domain& domain() const;
  unsigned order() const;

  IntervalVector ranges() const;
  IntervalVector remainders() const;
  /// Point-wise enclosure of every component at one parameter point.
  IntervalVector at(std::span<const Interval> point) const;

  /// Concatenation; both vectors must share domain and order.
  TMVector concat(const TMVector& tail) const;
  TMVector head(std::size_t n) const;

 private:
  std::vector<TaylorModel> components_;
};

/// Component j = sum_l W(j,l) * v[l] + b[j].
TMVector linear_map(const Matrix& W, const TMVector& v, std::span<const double> b);

/// Appends a local-time variable with the given range to every component.
TMVector lift_time(const TMVector& v, const Interval& time_box);

/// Substitutes the last variable (local time) with t_value and drops it.
/// Throws DimensionError when t_value lies outside the time box.
TMVector eval_time(const TMVector& v, double t_value);

}  // namespace polar
