#include "polar/taylor_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polar/errors.hpp"

namespace polar {

namespace {

constexpr double kUnitRoundoff = 0x1p-53;

// Above this many dropped term pairs, the truncated part of a product is
// bounded by homogeneous degree blocks instead of term by term.
constexpr std::size_t kExactTruncationPairs = 2048;

// gamma_n = n*u / (1 - n*u), the classic bound on the relative error of an
// n-operation floating-point sum or dot product.
double gamma(std::size_t n) {
  const double nu = static_cast<double>(n) * kUnitRoundoff;
  return rounding::div_up(nu, rounding::sub_down(1.0, nu));
}

Interval padding(double bound) {
  if (bound == 0.0) return Interval();
  // Slack for the rounding inside the bound computation itself.
  return Interval::symmetric(rounding::mul_up(bound, 1.0 + 8 * kUnitRoundoff));
}

bool is_power_of_two(double c) {
  int exp = 0;
  return std::frexp(std::fabs(c), &exp) == 0.5;
}

void require_compatible(const TaylorModel& a, const TaylorModel& b) {
  if (a.num_vars() != b.num_vars()) throw DimensionError("Taylor model variable counts differ");
  if (!(a.domain() == b.domain())) throw DimensionError("Taylor model domains differ");
  if (a.order() != b.order())
    throw DimensionError("Taylor model orders differ: " + std::to_string(a.order()) + " vs " + std::to_string(b.order()));
}

double binomial(unsigned n, unsigned k) {
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

}  // namespace

// ---------------------------------------------------------------------------
// TaylorModel

TaylorModel::TaylorModel(Polynomial poly, Interval rem, Domain domain, unsigned order)
    : poly_(std::move(poly)), rem_(rem), domain_(std::move(domain)), order_(order) {
  if (poly_.num_vars() != domain_.size())
    throw DimensionError("Taylor model polynomial has " + std::to_string(poly_.num_vars()) +
                         " variables but the domain has " + std::to_string(domain_.size()));
  if (poly_.degree() > order_)
    throw DimensionError("Taylor model polynomial degree " + std::to_string(poly_.degree()) + " exceeds order " +
                         std::to_string(order_));
}

TaylorModel TaylorModel::constant(double c, const Domain& domain, unsigned order) {
  return TaylorModel(Polynomial::constant(domain.size(), c), Interval(), domain, order);
}

TaylorModel TaylorModel::variable(std::size_t var, const Domain& domain, unsigned order) {
  return TaylorModel(Polynomial::variable(domain.size(), var), Interval(), domain, std::max(order, 1u));
}

Interval TaylorModel::range() const { return bound(poly_, domain_) + rem_; }

Interval TaylorModel::at(std::span<const Interval> point) const { return bound(poly_, point) + rem_; }

TaylorModel TaylorModel::with_remainder(const Interval& rem) const {
  TaylorModel r = *this;
  r.rem_ = rem;
  return r;
}

TaylorModel TaylorModel::add_remainder(const Interval& extra) const { return with_remainder(rem_ + extra); }

// ---------------------------------------------------------------------------
// Arithmetic

TaylorModel operator+(const TaylorModel& a, const TaylorModel& b) {
  require_compatible(a, b);
  const Domain& dom = a.domain();
  const auto& ta = a.poly().terms();
  const auto& tb = b.poly().terms();
  std::vector<Term> out;
  out.reserve(ta.size() + tb.size());
  double pad = 0.0;
  auto ia = ta.begin();
  auto ib = tb.begin();
  while (ia != ta.end() || ib != tb.end()) {
    if (ib == tb.end() || (ia != ta.end() && ia->monomial < ib->monomial)) {
      out.push_back(*ia++);
    } else if (ia == ta.end() || ib->monomial < ia->monomial) {
      out.push_back(*ib++);
    } else {
      const double c = ia->coef + ib->coef;
      const double mag = dom.monomial_mag(ia->monomial);
      pad = rounding::add_up(pad, rounding::mul_up(kUnitRoundoff * (std::fabs(ia->coef) + std::fabs(ib->coef)), mag));
      if (c != 0.0) out.push_back({ia->monomial, c});
      ++ia;
      ++ib;
    }
  }
  return TaylorModel(Polynomial::from_canonical_terms(a.num_vars(), std::move(out)), a.rem() + b.rem() + padding(pad),
                     dom, a.order());
}

TaylorModel operator-(const TaylorModel& a) {
  return TaylorModel(-a.poly(), -a.rem(), a.domain(), a.order());
}

TaylorModel operator-(const TaylorModel& a, const TaylorModel& b) { return a + (-b); }

TaylorModel scale(const TaylorModel& a, double c) {
  const Polynomial p = scale(a.poly(), c);
  Interval rem = scale(a.rem(), c);
  if (c != 0.0 && !is_power_of_two(c))
    rem += padding(rounding::mul_up(kUnitRoundoff, abs_bound(p, a.domain())));
  return TaylorModel(p, rem, a.domain(), a.order());
}

TaylorModel add_constant(const TaylorModel& a, double c) {
  if (c == 0.0) return a;
  const double c0 = a.poly().constant_term();
  Interval rem = a.rem();
  if (c0 != 0.0) rem += padding(rounding::mul_up(kUnitRoundoff, std::fabs(c0) + std::fabs(c)));
  Polynomial p = a.poly() + Polynomial::constant(a.num_vars(), c);
  return TaylorModel(std::move(p), rem, a.domain(), a.order());
}

TaylorModel operator*(const TaylorModel& a, const TaylorModel& b) {
  require_compatible(a, b);
  const unsigned k = a.order();
  const Domain& dom = a.domain();
  const auto& ta = a.poly().terms();
  const auto& tb = b.poly().terms();

  std::vector<Term> low;
  std::size_t low_pairs = 0;
  for (const Term& x : ta) {
    const unsigned dx = x.monomial.degree();
    if (dx > k) break;
    for (const Term& y : tb) {
      if (dx + y.monomial.degree() > k) break;
      low.push_back({x.monomial * y.monomial, x.coef * y.coef});
      ++low_pairs;
    }
  }
  Polynomial low_poly = Polynomial::from_terms(a.num_vars(), std::move(low));

  // Bound the dropped part r_k.
  const std::size_t high_pairs = ta.size() * tb.size() - low_pairs;
  Interval truncated;
  if (high_pairs > 0 && high_pairs <= kExactTruncationPairs) {
    std::vector<Term> high;
    high.reserve(high_pairs);
    for (const Term& x : ta)
      for (const Term& y : tb)
        if (x.monomial.degree() + y.monomial.degree() > k) high.push_back({x.monomial * y.monomial, x.coef * y.coef});
    truncated = bound(Polynomial::from_terms(a.num_vars(), std::move(high)), dom);
  } else if (high_pairs > 0) {
    const unsigned da = a.poly().degree();
    const unsigned db = b.poly().degree();
    std::vector<Interval> ba(da + 1);
    std::vector<Interval> bb(db + 1);
    for (const Term& x : ta) ba[x.monomial.degree()] += scale(dom.monomial_range(x.monomial), x.coef);
    for (const Term& y : tb) bb[y.monomial.degree()] += scale(dom.monomial_range(y.monomial), y.coef);
    for (unsigned d = 0; d <= da; ++d)
      for (unsigned e = (d > k ? 0 : k - d + 1); e <= db; ++e) truncated += ba[d] * bb[e];
  }

  // Every coefficient of the full product is a sum of at most min(|a|,|b|)
  // rounded products.
  const double pad = rounding::mul_up(gamma(std::min(ta.size(), tb.size()) + 1),
                                      rounding::mul_up(abs_bound(a.poly(), dom), abs_bound(b.poly(), dom)));

  Interval rem = truncated + padding(pad);
  if (!(a.rem() == Interval())) rem += a.rem() * bound(b.poly(), dom);
  if (!(b.rem() == Interval())) rem += bound(a.poly(), dom) * b.rem();
  rem += a.rem() * b.rem();
  return TaylorModel(std::move(low_poly), rem, dom, k);
}

std::vector<Interval> shift_univariate(const Polynomial& p, double y0) {
  const std::vector<double> c = p.univariate_coefficients();
  const std::size_t n = c.size();
  std::vector<Interval> out(n);
  std::vector<Interval> y0_pow(n, Interval(1.0));
  for (std::size_t e = 1; e < n; ++e) y0_pow[e] = pow(Interval(y0), static_cast<unsigned>(e));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = k; j < n; ++j) {
      if (c[j] == 0.0) continue;
      const double binom = binomial(static_cast<unsigned>(j), static_cast<unsigned>(k));
      out[k] += scale(scale(y0_pow[j - k], binom), c[j]);
    }
  return out;
}

TaylorModel horner(std::span<const double> coeffs, const TaylorModel& s) {
  if (coeffs.empty()) return TaylorModel::constant(0.0, s.domain(), s.order());
  TaylorModel acc = TaylorModel::constant(coeffs.back(), s.domain(), s.order());
  for (std::size_t i = coeffs.size() - 1; i-- > 0;) acc = add_constant(acc * s, coeffs[i]);
  return acc;
}

TaylorModel compose_univariate(const Polynomial& p, const Interval& extra_rem, const TaylorModel& t) {
  if (p.num_vars() != 1) throw DimensionError("compose_univariate expects a univariate outer polynomial");
  if (p.degree() == 0) return TaylorModel::constant(p.constant_term(), t.domain(), t.order()).add_remainder(extra_rem);

  const double y0 = t.range().mid();
  const std::vector<Interval> shifted = shift_univariate(p, y0);
  const TaylorModel s = add_constant(t, -y0);
  const Interval s_range = s.range();

  std::vector<double> coeffs(shifted.size());
  Interval shift_err;
  for (std::size_t k = 0; k < shifted.size(); ++k) {
    coeffs[k] = shifted[k].mid();
    shift_err += (shifted[k] - Interval(coeffs[k])) * pow(s_range, static_cast<unsigned>(k));
  }
  return horner(coeffs, s).add_remainder(shift_err + extra_rem);
}

// ---------------------------------------------------------------------------
// TMVector

TMVector::TMVector(std::vector<TaylorModel> components) : components_(std::move(components)) {
  for (std::size_t i = 1; i < components_.size(); ++i) {
    if (!(components_[i].domain() == components_[0].domain()))
      throw DimensionError("TM vector components have different domains");
    if (components_[i].order() != components_[0].order())
      throw DimensionError("TM vector components have different orders");
  }
}

TMVector TMVector::from_box(std::span<const Interval> box, unsigned order) {
  const Domain dom = Domain::unit_box(box.size());
  std::vector<TaylorModel> comps;
  comps.reserve(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    const double m = box[i].mid();
    const double r = box[i].rad();
    std::vector<Term> terms;
    if (m != 0.0) terms.push_back({Monomial{}, m});
    if (r != 0.0) terms.push_back({Monomial::unit(i), r});
    // rad() is rounded up, so the image of [-1, 1] covers the box.
    comps.emplace_back(Polynomial::from_terms(box.size(), std::move(terms)), Interval(), dom, std::max(order, 1u));
  }
  return TMVector(std::move(comps));
}

const Domain& TMVector::domain() const {
  if (components_.empty()) throw DimensionError("empty TM vector has no domain");
  return components_.front().domain();
}

unsigned TMVector::order() const {
  if (components_.empty()) throw DimensionError("empty TM vector has no order");
  return components_.front().order();
}

IntervalVector TMVector::ranges() const {
  IntervalVector r;
  r.reserve(size());
  for (const auto& c : components_) r.push_back(c.range());
  return r;
}

IntervalVector TMVector::remainders() const {
  IntervalVector r;
  r.reserve(size());
  for (const auto& c : components_) r.push_back(c.rem());
  return r;
}

IntervalVector TMVector::at(std::span<const Interval> point) const {
  IntervalVector r;
  r.reserve(size());
  for (const auto& c : components_) r.push_back(c.at(point));
  return r;
}

TMVector TMVector::concat(const TMVector& tail) const {
  std::vector<TaylorModel> comps = components_;
  comps.insert(comps.end(), tail.components_.begin(), tail.components_.end());
  return TMVector(std::move(comps));
}

TMVector TMVector::head(std::size_t n) const {
  if (n > size()) throw DimensionError("TM vector head longer than the vector");
  return TMVector(std::vector<TaylorModel>(components_.begin(), components_.begin() + static_cast<std::ptrdiff_t>(n)));
}

TMVector linear_map(const Matrix& W, const TMVector& v, std::span<const double> b) {
  if (W.cols() != v.size())
    throw DimensionError("linear map expects " + std::to_string(W.cols()) + " inputs, got " + std::to_string(v.size()));
  if (b.size() != W.rows()) throw DimensionError("bias length does not match the number of rows");
  if (v.empty()) throw DimensionError("linear map of an empty TM vector");

  const Domain& dom = v.domain();
  const unsigned order = v.order();
  std::vector<double> abs_v(v.size());
  for (std::size_t l = 0; l < v.size(); ++l) abs_v[l] = abs_bound(v[l].poly(), dom);

  std::vector<TaylorModel> out;
  out.reserve(W.rows());
  const double g = gamma(W.cols() + 2);
  for (std::size_t j = 0; j < W.rows(); ++j) {
    std::vector<Term> terms;
    Interval rem;
    double abs_sum = std::fabs(b[j]);
    for (std::size_t l = 0; l < W.cols(); ++l) {
      const double w = W(j, l);
      if (w == 0.0) continue;
      for (const Term& t : v[l].poly().terms()) terms.push_back({t.monomial, w * t.coef});
      rem += scale(v[l].rem(), w);
      abs_sum = rounding::add_up(abs_sum, rounding::mul_up(std::fabs(w), abs_v[l]));
    }
    if (b[j] != 0.0) terms.push_back({Monomial{}, b[j]});
    rem += padding(rounding::mul_up(g, abs_sum));
    out.emplace_back(Polynomial::from_terms(dom.size(), std::move(terms)), rem, dom, order);
  }
  return TMVector(std::move(out));
}

TMVector lift_time(const TMVector& v, const Interval& time_box) {
  if (v.empty()) return v;
  const Domain dom = v.domain().appended(time_box);
  std::vector<TaylorModel> out;
  out.reserve(v.size());
  for (const auto& c : v.components())
    out.emplace_back(extend_vars(c.poly(), dom.size()), c.rem(), dom, c.order());
  return TMVector(std::move(out));
}

TMVector eval_time(const TMVector& v, double t_value) {
  if (v.empty()) return v;
  const Domain& dom = v.domain();
  if (dom.size() == 0) throw DimensionError("TM vector has no time variable");
  const Interval& tbox = dom[dom.size() - 1];
  if (!tbox.contains(t_value)) throw DimensionError("time value outside the flowpipe time range");
  const Domain reduced = dom.without_last();
  std::vector<TaylorModel> out;
  out.reserve(v.size());
  for (const auto& c : v.components()) {
    auto [poly, err] = substitute_and_drop(c.poly(), dom.size() - 1, Interval(t_value), reduced);
    out.emplace_back(std::move(poly), c.rem() + err, reduced, c.order());
  }
  return TMVector(std::move(out));
}

}  // namespace polar
