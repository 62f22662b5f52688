#include "polar/nn_abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "polar/errors.hpp"

namespace polar {

namespace {

constexpr double kUnitRoundoff = 0x1p-53;

double binomial(unsigned n, unsigned k) {
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

Polynomial power(const Polynomial& f, unsigned e) {
  Polynomial r = Polynomial::constant(f.num_vars(), 1.0);
  for (unsigned i = 0; i < e; ++i) r = r * f;
  return r;
}

// Affine cases where the interpolant is the activation itself.
std::optional<Polynomial> affine_on(Activation act, const Interval& Y) {
  const bool linear = act == Activation::identity || (act == Activation::relu && Y.lo() >= 0.0);
  if (linear) return Polynomial::variable(1, 0);
  if (act == Activation::relu && Y.hi() <= 0.0) return Polynomial(1);
  return std::nullopt;
}

void require_input(const NeuralNetwork& net, const TMVector& input) {
  if (net.num_layers() == 0) throw DimensionError("network has no layers");
  if (input.size() != net.input_dim())
    throw DimensionError("network expects " + std::to_string(net.input_dim()) + " inputs, got a TM vector of size " +
                         std::to_string(input.size()));
}

IntervalVector add(const IntervalVector& a, const IntervalVector& b) {
  IntervalVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

bool narrow(const Interval& Y) { return Y.width() <= 1e-12 * std::max(1.0, Y.mag()); }

// Interpolant in s = y - center with center the midpoint of Y. The basis
// factors (y - a)/w and (b - y)/w become s/w + (center - a)/w and
// (b - center)/w - s/w.
Polynomial centered_interpolant(Activation act, const Interval& Y, unsigned k, double center) {
  const double a = Y.lo();
  const double b = Y.hi();
  const double w = b - a;
  const double up_c[2] = {(center - a) / w, 1.0 / w};
  const double down_c[2] = {(b - center) / w, -1.0 / w};
  const Polynomial up = Polynomial::univariate(up_c);
  const Polynomial down = Polynomial::univariate(down_c);

  Polynomial p(1);
  for (unsigned s = 0; s <= k; ++s) {
    const double node = s == k ? b : a + s * (w / k);
    const double c = activation_eval(act, node) * binomial(k, s);
    if (c == 0.0) continue;
    p = p + scale(power(up, s) * power(down, k - s), c);
  }
  return p;
}

// Remainder of p(y - center) against the activation on Y.
Interval remainder_about(Activation act, const Polynomial& p, double center, const Interval& Y, unsigned m,
                         RemainderMode mode) {
  if (m == 0) throw std::invalid_argument("sample count must be at least 1");
  if (p.num_vars() != 1) throw DimensionError("Bernstein remainder expects a univariate polynomial");
  const double w = Y.width();
  const double step = w / m;

  double err = 0.0;
  for (unsigned i = 1; i <= m; ++i) {
    const double c = std::clamp(Y.lo() + (i - 0.5) * step, Y.lo(), Y.hi());
    if (mode == RemainderMode::sampled) {
      const double pt[1] = {c - center};
      err = std::max(err, std::fabs(evaluate(p, pt) - activation_eval(act, c)));
    } else {
      const Interval si[1] = {Interval(c) - Interval(center)};
      err = std::max(err, (bound(p, si) - activation_range(act, Interval(c))).mag());
    }
  }

  if (mode == RemainderMode::sampled) return Interval::symmetric(err + step);

  // Every y in Y lies within w/(2m) of a sample, up to the rounding of the
  // sample points themselves.
  const Interval S = Y - Interval(center);
  const double lip = rounding::add_up(activation_lipschitz(act, Y), bound(derivative_1d(p), std::span<const Interval>(&S, 1)).mag());
  const double spacing_err = 4 * kUnitRoundoff * Y.mag();
  const double half_gap = rounding::add_up(rounding::div_up(w, 2.0 * m), spacing_err);
  return Interval::symmetric(rounding::add_up(err, rounding::mul_up(lip, half_gap)));
}

}  // namespace

Polynomial bernstein_interpolate(Activation act, const Interval& Y, unsigned k) {
  if (k == 0) throw std::invalid_argument("Bernstein order must be at least 1");
  if (Y.is_point()) return Polynomial::constant(1, activation_eval(act, Y.lo()));
  if (auto p = affine_on(act, Y)) return *p;
  return centered_interpolant(act, Y, k, 0.0);
}

Interval bernstein_remainder(Activation act, const Polynomial& p, const Interval& Y, unsigned m, RemainderMode mode) {
  return remainder_about(act, p, 0.0, Y, m, mode);
}

BernsteinApprox bernstein_approx(Activation act, const Interval& Y, unsigned k, unsigned m, RemainderMode mode) {
  if (k == 0) throw std::invalid_argument("Bernstein order must be at least 1");
  const double center = Y.mid();
  BernsteinApprox r{Polynomial(1), center, Interval(), Y, false};
  if (auto p = affine_on(act, Y)) {
    // p(y) = y becomes center + s; the zero polynomial stays zero.
    if (!p->is_zero()) {
      const double c[2] = {center, 1.0};
      r.poly = Polynomial::univariate(c);
    }
    r.exact = true;
    return r;
  }
  if (narrow(Y)) {
    const double v = activation_eval(act, center);
    r.poly = Polynomial::constant(1, v);
    r.rem = activation_range(act, Y) - Interval(v);
    r.exact = Y.is_point() && (act == Activation::identity || act == Activation::relu);
    return r;
  }
  r.poly = centered_interpolant(act, Y, k, center);
  r.rem = remainder_about(act, r.poly, center, Y, m, mode);
  return r;
}

TMVector nn_output_tm(const NeuralNetwork& net, const TMVector& input, const AbstractionConfig& cfg,
                      OpCounters* counters) {
  require_input(net, input);
  TMVector cur = input;
  for (const Layer& layer : net.layers()) {
    const TMVector t = linear_map(layer.weights, cur, layer.bias);
    if (counters) ++counters->linear_maps;
    std::vector<TaylorModel> out;
    out.reserve(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
      const BernsteinApprox ap = bernstein_approx(layer.activation, t[j].range(), cfg.bernstein_order, cfg.samples, cfg.mode);
      if (ap.exact && ap.poly.degree() == 1)
        out.push_back(t[j]);
      else
        out.push_back(compose_univariate(ap.poly, ap.rem, add_constant(t[j], -ap.center)));
    }
    cur = TMVector(std::move(out));
  }
  return cur;
}

TMVector nn_output_tm_symbolic(const NeuralNetwork& net, const TMVector& input, const AbstractionConfig& cfg,
                               OpCounters* counters) {
  require_input(net, input);
  const Domain& dom = input.domain();
  const unsigned order = input.order();
  const IntervalVector input_rem = input.remainders();

  // Polynomial part p_r of the current layer output, remainders stripped.
  std::vector<TaylorModel> polys;
  for (const auto& c : input.components()) polys.push_back(c.with_remainder(Interval()));

  std::vector<IntervalMatrix> Qs;  // Qs[j] = Q_i * ... * Q_{j+1} after layer i
  std::vector<IntervalVector> Js;  // Js[j] = J_{j+1}
  IntervalVector J_acc;            // sum_j Qs[j+1] * Js[j] plus the newest J

  auto current_remainder = [&]() {
    if (Qs.empty()) return input_rem;
    if (counters) ++counters->matrix_vector;
    return add(multiply(Qs.front(), input_rem), J_acc);
  };

  for (const Layer& layer : net.layers()) {
    const Matrix& W = layer.weights;
    const std::size_t rows = W.rows();
    const std::size_t cols = W.cols();

    std::vector<TaylorModel> boxed;
    const IntervalVector rem = current_remainder();
    for (std::size_t l = 0; l < polys.size(); ++l) boxed.push_back(polys[l].with_remainder(rem[l]));
    const TMVector t = linear_map(W, TMVector(boxed), layer.bias);
    if (counters) ++counters->linear_maps;

    Matrix Q_pt(rows, cols);
    IntervalMatrix Q(rows, cols);
    std::vector<TaylorModel> residual;
    IntervalVector J(rows);
    for (std::size_t j = 0; j < rows; ++j) {
      const Interval Y = t[j].range();
      const BernsteinApprox ap = bernstein_approx(layer.activation, Y, cfg.bernstein_order, cfg.samples, cfg.mode);
      const double y0 = ap.center;
      std::vector<double> coeffs = ap.poly.univariate_coefficients();
      const double a1 = coeffs.size() > 1 ? coeffs[1] : 0.0;
      for (std::size_t l = 0; l < cols; ++l) {
        Q_pt(j, l) = a1 * W(j, l);
        Q(j, l) = Interval(a1) * Interval(W(j, l));
      }

      // Nonlinear residual h(t - y0): the polynomial in s without a1 * s.
      const TaylorModel s = add_constant(t[j], -y0);
      if (coeffs.size() > 1) coeffs[1] = 0.0;
      TaylorModel h = horner(coeffs, s);
      // a1 * (b_j - y0) completes a1 * (t_j - y0) = Q_j * p + Q_j * R + a1 * (b_j - y0).
      const Interval c_exact = Interval(a1) * (Interval(layer.bias[j]) - Interval(y0));
      h = add_constant(h, c_exact.mid());
      J[j] = h.rem() + (c_exact - Interval(c_exact.mid())) + ap.rem;
      residual.push_back(h.with_remainder(Interval()));
    }

    // Q_pt * p plus the gap between Q_pt and the exact products a1 * W.
    const TMVector lin = linear_map(Q_pt, TMVector(polys), std::vector<double>(rows, 0.0));
    if (counters) ++counters->linear_maps;
    std::vector<Interval> p_ranges;
    for (const auto& p : polys) p_ranges.push_back(p.range());
    std::vector<TaylorModel> next;
    next.reserve(rows);
    for (std::size_t j = 0; j < rows; ++j) {
      Interval gap;
      for (std::size_t l = 0; l < cols; ++l) gap += (Q(j, l) - Interval(Q_pt(j, l))) * p_ranges[l];
      const TaylorModel sum = lin[j] + residual[j];
      J[j] += sum.rem() + gap;
      next.push_back(sum.with_remainder(Interval()));
    }
    polys = std::move(next);

    for (auto& q : Qs) {
      q = multiply(Q, q);
      if (counters) ++counters->matrix_products;
    }
    Qs.push_back(std::move(Q));
    Js.push_back(J);

    J_acc = J;
    for (std::size_t j = 1; j < Qs.size(); ++j) {
      J_acc = add(J_acc, multiply(Qs[j], Js[j - 1]));
      if (counters) ++counters->matrix_vector;
    }
  }

  const IntervalVector rem = current_remainder();
  std::vector<TaylorModel> out;
  out.reserve(polys.size());
  for (std::size_t j = 0; j < polys.size(); ++j)
    out.emplace_back(polys[j].poly(), rem[j], dom, order);
  return TMVector(std::move(out));
}

}  // namespace polar
