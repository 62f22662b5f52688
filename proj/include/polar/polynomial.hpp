#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "polar/interval.hpp"

namespace polar {

/// Upper limit on the number of polynomial variables. Flowpipe TMs use one
/// variable per state plus local time; ODE right-hand sides use one per state
/// and per control input.
inline constexpr std::size_t kMaxVars = 24;

/// Exponent vector of a monomial. Ordered graded-lexicographically: total
/// degree first, then exponents compared left to right.
class Monomial {
 public:
  constexpr Monomial() noexcept = default;

  static Monomial unit(std::size_t var, unsigned exponent = 1);

  unsigned operator[](std::size_t var) const noexcept { return exps_[var]; }
  unsigned degree() const noexcept { return degree_; }
  void set(std::size_t var, unsigned exponent);

  /// Exponent-wise sum. Throws DimensionError when an exponent exceeds 255.
  Monomial operator*(const Monomial& other) const;

  /// Copy with variable `var` removed; later variables shift down by one.
  Monomial without(std::size_t var) const noexcept;

  friend bool operator==(const Monomial& a, const Monomial& b) noexcept {
    return a.degree_ == b.degree_ && a.exps_ == b.exps_;
  }
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) noexcept;

 private:
  std::array<std::uint8_t, kMaxVars> exps_{};
  std::uint16_t degree_ = 0;
};

struct Term {
  Monomial monomial;
  double coef = 0.0;
};

/// Box domain of the polynomial variables, one interval per variable.
/// Immutable; copies share storage. Caches powers of each component.
class Domain {
 public:
  Domain();
  explicit Domain(std::vector<Interval> boxes);

  static Domain unit_box(std::size_t n);

  std::size_t size() const noexcept;
  const Interval& operator[](std::size_t i) const noexcept;
  std::span<const Interval> boxes() const noexcept;

  /// Enclosure of box[var]^exponent.
  Interval power(std::size_t var, unsigned exponent) const;
  /// Exact range enclosure of a monomial over the box.
  Interval monomial_range(const Monomial& m) const;
  /// Upper bound on |z^m| over the box.
  double monomial_mag(const Monomial& m) const;

  Domain appended(const Interval& box) const;
  Domain without_last() const;

  friend bool operator==(const Domain& a, const Domain& b) noexcept;

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

/// Sparse multivariate polynomial with double coefficients. Terms are kept in
/// canonical form: sorted by monomial, no duplicates, no zero coefficients.
class Polynomial {
 public:
  explicit Polynomial(std::size_t num_vars = 0);

  static Polynomial constant(std::size_t num_vars, double c);
  static Polynomial variable(std::size_t num_vars, std::size_t var);
  /// Builds from arbitrary terms: sorts, merges duplicates, drops zeros.
  static Polynomial from_terms(std::size_t num_vars, std::vector<Term> terms);
  /// Adopts terms that are already canonical (sorted, unique, nonzero).
  static Polynomial from_canonical_terms(std::size_t num_vars, std::vector<Term> terms);
  /// Univariate polynomial sum_i coeffs[i] * y^i.
  static Polynomial univariate(std::span<const double> coeffs);

  std::size_t num_vars() const noexcept { return num_vars_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Total degree; 0 for the zero polynomial.
  unsigned degree() const noexcept;

  double coefficient(const Monomial& m) const noexcept;
  double constant_term() const noexcept;

  /// Dense coefficient list of a univariate polynomial, index = exponent.
  std::vector<double> univariate_coefficients() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) noexcept {
    if (a.num_vars_ != b.num_vars_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (!(a.terms_[i].monomial == b.terms_[i].monomial) || a.terms_[i].coef != b.terms_[i].coef) return false;
    return true;
  }

 private:
  std::size_t num_vars_;
  std::vector<Term> terms_;
};

Polynomial operator+(const Polynomial& f, const Polynomial& g);
Polynomial operator-(const Polynomial& f, const Polynomial& g);
Polynomial operator-(const Polynomial& f);
Polynomial operator*(const Polynomial& f, const Polynomial& g);
Polynomial scale(const Polynomial& f, double c);

struct Truncation {
  Polynomial low;   ///< terms of total degree <= order
  Polynomial high;  ///< everything else
};

Truncation truncate(const Polynomial& f, unsigned order);

/// Interval enclosure of the range of f over the domain, by monomial-wise
/// interval evaluation.
Interval bound(const Polynomial& f, const Domain& domain);

/// Interval evaluation at a box given directly as intervals.
Interval bound(const Polynomial& f, std::span<const Interval> box);

/// Sum over terms of |coef| * max|z^m| on the domain; an upper bound on |f|.
double abs_bound(const Polynomial& f, const Domain& domain);

double evaluate(const Polynomial& f, std::span<const double> point);

/// Formal derivative of a univariate polynomial.
Polynomial derivative_1d(const Polynomial& f);

/// Antiderivative in `var` with zero constant of integration.
Polynomial integrate(const Polynomial& f, std::size_t var);

struct Composition {
  Polynomial poly;
  Interval truncated;  ///< bound on all terms dropped above the order
};

/// Horner substitution of `inner` into the univariate `outer`, truncating at
/// `order` after every multiplication. Dropped terms are bounded over
/// `domain` and accumulated in `truncated`.
Composition compose(const Polynomial& outer, const Polynomial& inner, unsigned order, const Domain& domain);

/// Same polynomial over more variables (new ones appended with exponent 0).
Polynomial extend_vars(const Polynomial& f, std::size_t num_vars);

/// Polynomial coefficients with interval enclosures, used where substitution
/// must be exact: mid-point polynomial plus a radius per term.
struct IntervalTerm {
  Monomial monomial;
  Interval coef;
};

/// Splits interval-coefficient terms into a point polynomial and a bound on
/// the discarded radii over the domain.
std::pair<Polynomial, Interval> split_interval_terms(std::size_t num_vars, std::vector<IntervalTerm> terms,
                                                     const Domain& domain);

/// Substitutes variable `var` = value (given as an interval) and removes the
/// variable from the layout. Returns the point polynomial and an enclosure of
/// the coefficient rounding error over the remaining domain.
std::pair<Polynomial, Interval> substitute_and_drop(const Polynomial& f, std::size_t var, const Interval& value,
                                                    const Domain& reduced_domain);

}  // namespace polar
