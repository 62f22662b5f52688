#include "polar/polynomial.hpp"

#include <algorithm>
#include <cstring>
#include <string>

#include "polar/errors.hpp"

namespace polar {

namespace {

void check_var(std::size_t var) {
  if (var >= kMaxVars) throw DimensionError("variable index " + std::to_string(var) + " exceeds the supported maximum");
}

void check_same_vars(const Polynomial& f, const Polynomial& g) {
  if (f.num_vars() != g.num_vars())
    throw DimensionError("polynomial variable counts differ: " + std::to_string(f.num_vars()) + " vs " +
                         std::to_string(g.num_vars()));
}

// Sorts, merges equal monomials and drops zero coefficients in place.
void canonicalize(std::vector<Term>& terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.monomial < b.monomial; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    Term acc = terms[i];
    std::size_t j = i + 1;
    for (; j < terms.size() && terms[j].monomial == acc.monomial; ++j) acc.coef += terms[j].coef;
    if (acc.coef != 0.0) terms[out++] = acc;
    i = j;
  }
  terms.resize(out);
}

constexpr unsigned kPowCache = 33;

}  // namespace

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::unit(std::size_t var, unsigned exponent) {
  Monomial m;
  m.set(var, exponent);
  return m;
}

void Monomial::set(std::size_t var, unsigned exponent) {
  check_var(var);
  if (exponent > 255) throw DimensionError("monomial exponent exceeds 255");
  degree_ = static_cast<std::uint16_t>(degree_ - exps_[var] + exponent);
  exps_[var] = static_cast<std::uint8_t>(exponent);
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial r;
  unsigned overflow = 0;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    const unsigned e = unsigned{exps_[i]} + other.exps_[i];
    overflow |= e;
    r.exps_[i] = static_cast<std::uint8_t>(e);
  }
  if (overflow > 255) throw DimensionError("monomial exponent exceeds 255");
  r.degree_ = static_cast<std::uint16_t>(degree_ + other.degree_);
  return r;
}

Monomial Monomial::without(std::size_t var) const noexcept {
  Monomial r = *this;
  r.degree_ = static_cast<std::uint16_t>(degree_ - exps_[var]);
  for (std::size_t i = var; i + 1 < kMaxVars; ++i) r.exps_[i] = exps_[i + 1];
  r.exps_[kMaxVars - 1] = 0;
  return r;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) noexcept {
  if (a.degree_ != b.degree_) return a.degree_ <=> b.degree_;
  // Higher exponent in an earlier variable sorts first within a degree.
  const int c = std::memcmp(b.exps_.data(), a.exps_.data(), kMaxVars);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// Domain

struct Domain::Data {
  std::vector<Interval> boxes;
  std::vector<std::array<Interval, kPowCache>> powers;
  std::vector<std::array<double, kPowCache>> mags;
};

Domain::Domain() : Domain(std::vector<Interval>{}) {}

Domain::Domain(std::vector<Interval> boxes) {
  if (boxes.size() > kMaxVars) throw DimensionError("domain has more components than supported variables");
  auto data = std::make_shared<Data>();
  data->powers.resize(boxes.size());
  data->mags.resize(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const double mag = boxes[i].mag();
    double m = 1.0;
    for (unsigned e = 0; e < kPowCache; ++e) {
      data->powers[i][e] = pow(boxes[i], e);
      data->mags[i][e] = m;
      m = rounding::mul_up(m, mag);
    }
  }
  data->boxes = std::move(boxes);
  data_ = std::move(data);
}

Domain Domain::unit_box(std::size_t n) { return Domain(std::vector<Interval>(n, Interval(-1.0, 1.0))); }

std::size_t Domain::size() const noexcept { return data_->boxes.size(); }
const Interval& Domain::operator[](std::size_t i) const noexcept { return data_->boxes[i]; }
std::span<const Interval> Domain::boxes() const noexcept { return data_->boxes; }

Interval Domain::power(std::size_t var, unsigned exponent) const {
  if (exponent < kPowCache) return data_->powers[var][exponent];
  return pow(data_->boxes[var], exponent);
}

Interval Domain::monomial_range(const Monomial& m) const {
  Interval r(1.0);
  if (m.degree() == 0) return r;
  unsigned remaining = m.degree();
  for (std::size_t i = 0; i < size() && remaining > 0; ++i) {
    const unsigned e = m[i];
    if (e == 0) continue;
    r *= power(i, e);
    remaining -= e;
  }
  return r;
}

double Domain::monomial_mag(const Monomial& m) const {
  double r = 1.0;
  unsigned remaining = m.degree();
  for (std::size_t i = 0; i < size() && remaining > 0; ++i) {
    const unsigned e = m[i];
    if (e == 0) continue;
    r = rounding::mul_up(r, e < kPowCache ? data_->mags[i][e] : pow(Interval(data_->boxes[i].mag()), e).hi());
    remaining -= e;
  }
  return r;
}

Domain Domain::appended(const Interval& box) const {
  std::vector<Interval> boxes = data_->boxes;
  boxes.push_back(box);
  return Domain(std::move(boxes));
}

Domain Domain::without_last() const {
  if (size() == 0) throw DimensionError("cannot drop a component of an empty domain");
  std::vector<Interval> boxes(data_->boxes.begin(), data_->boxes.end() - 1);
  return Domain(std::move(boxes));
}

bool operator==(const Domain& a, const Domain& b) noexcept {
  return a.data_ == b.data_ || a.data_->boxes == b.data_->boxes;
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::size_t num_vars) : num_vars_(num_vars) {
  if (num_vars > kMaxVars) throw DimensionError("too many polynomial variables: " + std::to_string(num_vars));
}

Polynomial Polynomial::constant(std::size_t num_vars, double c) {
  Polynomial p(num_vars);
  if (c != 0.0) p.terms_.push_back({Monomial{}, c});
  return p;
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t var) {
  if (var >= num_vars) throw DimensionError("variable index out of range");
  Polynomial p(num_vars);
  p.terms_.push_back({Monomial::unit(var), 1.0});
  return p;
}

Polynomial Polynomial::from_terms(std::size_t num_vars, std::vector<Term> terms) {
  Polynomial p(num_vars);
  for (const Term& t : terms) {
    for (std::size_t v = num_vars; v < kMaxVars; ++v)
      if (t.monomial[v] != 0) throw DimensionError("term uses a variable outside the polynomial's layout");
  }
  canonicalize(terms);
  p.terms_ = std::move(terms);
  return p;
}

Polynomial Polynomial::from_canonical_terms(std::size_t num_vars, std::vector<Term> terms) {
  Polynomial p(num_vars);
  p.terms_ = std::move(terms);
  return p;
}

Polynomial Polynomial::univariate(std::span<const double> coeffs) {
  std::vector<Term> terms;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0.0) terms.push_back({Monomial::unit(0, static_cast<unsigned>(i)), coeffs[i]});
  return from_terms(1, std::move(terms));
}

unsigned Polynomial::degree() const noexcept { return terms_.empty() ? 0 : terms_.back().monomial.degree(); }

double Polynomial::coefficient(const Monomial& m) const noexcept {
  const auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const Term& t, const Monomial& key) { return t.monomial < key; });
  return it != terms_.end() && it->monomial == m ? it->coef : 0.0;
}

double Polynomial::constant_term() const noexcept {
  return !terms_.empty() && terms_.front().monomial.degree() == 0 ? terms_.front().coef : 0.0;
}

std::vector<double> Polynomial::univariate_coefficients() const {
  if (num_vars_ != 1) throw DimensionError("univariate coefficients requested from a multivariate polynomial");
  std::vector<double> c(degree() + 1, 0.0);
  for (const Term& t : terms_) c[t.monomial[0]] = t.coef;
  return c;
}

Polynomial operator+(const Polynomial& f, const Polynomial& g) {
  check_same_vars(f, g);
  std::vector<Term> out;
  out.reserve(f.size() + g.size());
  auto a = f.terms().begin();
  auto b = g.terms().begin();
  while (a != f.terms().end() || b != g.terms().end()) {
    if (b == g.terms().end() || (a != f.terms().end() && a->monomial < b->monomial)) {
      out.push_back(*a++);
    } else if (a == f.terms().end() || b->monomial < a->monomial) {
      out.push_back(*b++);
    } else {
      const double c = a->coef + b->coef;
      if (c != 0.0) out.push_back({a->monomial, c});
      ++a;
      ++b;
    }
  }
  return Polynomial::from_canonical_terms(f.num_vars(), std::move(out));
}

Polynomial operator-(const Polynomial& f) { return scale(f, -1.0); }

Polynomial operator-(const Polynomial& f, const Polynomial& g) { return f + (-g); }

Polynomial scale(const Polynomial& f, double c) {
  std::vector<Term> out;
  if (c != 0.0) {
    out.reserve(f.size());
    for (const Term& t : f.terms()) {
      const double v = t.coef * c;
      if (v != 0.0) out.push_back({t.monomial, v});
    }
  }
  return Polynomial::from_canonical_terms(f.num_vars(), std::move(out));
}

Polynomial operator*(const Polynomial& f, const Polynomial& g) {
  check_same_vars(f, g);
  std::vector<Term> out;
  out.reserve(f.size() * g.size());
  for (const Term& a : f.terms())
    for (const Term& b : g.terms()) out.push_back({a.monomial * b.monomial, a.coef * b.coef});
  return Polynomial::from_terms(f.num_vars(), std::move(out));
}

Truncation truncate(const Polynomial& f, unsigned order) {
  std::vector<Term> low;
  std::vector<Term> high;
  for (const Term& t : f.terms()) (t.monomial.degree() <= order ? low : high).push_back(t);
  return {Polynomial::from_canonical_terms(f.num_vars(), std::move(low)),
          Polynomial::from_canonical_terms(f.num_vars(), std::move(high))};
}

Interval bound(const Polynomial& f, const Domain& domain) {
  if (domain.size() != f.num_vars())
    throw DimensionError("domain dimension " + std::to_string(domain.size()) + " does not match polynomial with " +
                         std::to_string(f.num_vars()) + " variables");
  Interval r;
  for (const Term& t : f.terms()) r += scale(domain.monomial_range(t.monomial), t.coef);
  return r;
}

Interval bound(const Polynomial& f, std::span<const Interval> box) {
  if (box.size() != f.num_vars()) throw DimensionError("evaluation box dimension mismatch");
  Interval r;
  for (const Term& t : f.terms()) {
    Interval m(1.0);
    for (std::size_t i = 0; i < box.size(); ++i)
      if (t.monomial[i] != 0) m *= pow(box[i], t.monomial[i]);
    r += scale(m, t.coef);
  }
  return r;
}

double abs_bound(const Polynomial& f, const Domain& domain) {
  double r = 0.0;
  for (const Term& t : f.terms()) r = rounding::add_up(r, rounding::mul_up(std::fabs(t.coef), domain.monomial_mag(t.monomial)));
  return r;
}

double evaluate(const Polynomial& f, std::span<const double> point) {
  if (point.size() != f.num_vars()) throw DimensionError("evaluation point dimension mismatch");
  double r = 0.0;
  for (const Term& t : f.terms()) {
    double m = t.coef;
    for (std::size_t i = 0; i < point.size(); ++i)
      for (unsigned e = 0; e < t.monomial[i]; ++e) m *= point[i];
    r += m;
  }
  return r;
}

Polynomial derivative_1d(const Polynomial& f) {
  if (f.num_vars() != 1) throw DimensionError("derivative_1d requires a univariate polynomial");
  std::vector<Term> out;
  for (const Term& t : f.terms()) {
    const unsigned e = t.monomial[0];
    if (e == 0) continue;
    out.push_back({Monomial::unit(0, e - 1), t.coef * e});
  }
  return Polynomial::from_terms(1, std::move(out));
}

Polynomial integrate(const Polynomial& f, std::size_t var) {
  if (var >= f.num_vars()) throw DimensionError("integration variable index out of range");
  std::vector<Term> out;
  out.reserve(f.size());
  for (const Term& t : f.terms()) {
    Monomial m = t.monomial;
    const unsigned e = m[var] + 1;
    m.set(var, e);
    out.push_back({m, t.coef / e});
  }
  return Polynomial::from_terms(f.num_vars(), std::move(out));
}

Composition compose(const Polynomial& outer, const Polynomial& inner, unsigned order, const Domain& domain) {
  const std::vector<double> c = outer.univariate_coefficients();
  const std::size_t n = inner.num_vars();
  const Interval inner_range = bound(inner, domain);
  Polynomial acc = Polynomial::constant(n, c.back());
  Interval dropped;
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    Truncation split = truncate(acc * inner, order);
    dropped = dropped * inner_range + bound(split.high, domain);
    acc = split.low + Polynomial::constant(n, c[i]);
  }
  return {std::move(acc), dropped};
}

Polynomial extend_vars(const Polynomial& f, std::size_t num_vars) {
  if (num_vars < f.num_vars()) throw DimensionError("extend_vars cannot reduce the variable count");
  return Polynomial::from_terms(num_vars, f.terms());
}

std::pair<Polynomial, Interval> split_interval_terms(std::size_t num_vars, std::vector<IntervalTerm> terms,
                                                     const Domain& domain) {
  std::sort(terms.begin(), terms.end(),
            [](const IntervalTerm& a, const IntervalTerm& b) { return a.monomial < b.monomial; });
  std::vector<Term> point;
  Interval err;
  for (std::size_t i = 0; i < terms.size();) {
    Interval c = terms[i].coef;
    std::size_t j = i + 1;
    for (; j < terms.size() && terms[j].monomial == terms[i].monomial; ++j) c += terms[j].coef;
    const double m = c.mid();
    if (m != 0.0) point.push_back({terms[i].monomial, m});
    if (!c.is_point() || c.lo() != m) err += (c - Interval(m)) * domain.monomial_range(terms[i].monomial);
    i = j;
  }
  return {Polynomial::from_terms(num_vars, std::move(point)), err};
}

std::pair<Polynomial, Interval> substitute_and_drop(const Polynomial& f, std::size_t var, const Interval& value,
                                                    const Domain& reduced_domain) {
  if (var >= f.num_vars()) throw DimensionError("substitution variable index out of range");
  if (reduced_domain.size() + 1 != f.num_vars()) throw DimensionError("reduced domain dimension mismatch");
  std::vector<IntervalTerm> terms;
  terms.reserve(f.size());
  for (const Term& t : f.terms()) {
    const unsigned e = t.monomial[var];
    const Interval c = e == 0 ? Interval(t.coef) : scale(pow(value, e), t.coef);
    terms.push_back({t.monomial.without(var), c});
  }
  return split_interval_terms(f.num_vars() - 1, std::move(terms), reduced_domain);
}

}  // namespace polar
