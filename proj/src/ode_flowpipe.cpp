#include "polar/ode_flowpipe.hpp"

#include <map>
#include <stdexcept>
#include <string>

#include "polar/errors.hpp"

namespace polar {

namespace {

constexpr double kUnitRoundoff = 0x1p-53;

class MonomialCache {
 public:
  explicit MonomialCache(const TMVector& g) : g_(g) {}

  const TaylorModel& get(const Monomial& m) {
    if (auto it = cache_.find(m); it != cache_.end()) return it->second;
    std::size_t v = g_.size();
    while (v-- > 0)
      if (m[v] > 0) break;
    Monomial rest = m;
    rest.set(v, m[v] - 1);
    TaylorModel prod = rest.degree() == 0 ? g_[v] : get(rest) * g_[v];
    return cache_.emplace(m, std::move(prod)).first->second;
  }

 private:
  const TMVector& g_;
  std::map<Monomial, TaylorModel> cache_;
};

// f(g) component-wise, with TM arithmetic at g's order.
std::vector<TaylorModel> eval_rhs(const PolynomialODE& f, const TMVector& g) {
  MonomialCache cache(g);
  std::vector<TaylorModel> out;
  out.reserve(f.dim());
  for (const Polynomial& p : f.rhs) {
    TaylorModel acc = TaylorModel::constant(0.0, g.domain(), g.order());
    for (const Term& t : p.terms()) {
      if (t.monomial.degree() == 0)
        acc = add_constant(acc, t.coef);
      else
        acc = acc + scale(cache.get(t.monomial), t.coef);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

}  // namespace

PolynomialODE::PolynomialODE(std::vector<Polynomial> r) : rhs(std::move(r)) {
  for (std::size_t i = 0; i < rhs.size(); ++i)
    if (rhs[i].num_vars() != rhs.size())
      throw DimensionError("right-hand side " + std::to_string(i + 1) + " has " + std::to_string(rhs[i].num_vars()) +
                           " variables, expected " + std::to_string(rhs.size()));
}

PolynomialODE PolynomialODE::with_static_inputs(std::vector<Polynomial> state_rhs, std::size_t count) {
  const std::size_t n = state_rhs.size() + count;
  for (std::size_t i = 0; i < count; ++i) state_rhs.emplace_back(n);
  return PolynomialODE(std::move(state_rhs));
}

TMVector picard_apply(const PolynomialODE& f, const TMVector& g, const TMVector& x0, unsigned k) {
  if (g.size() != f.dim() || x0.size() != f.dim())
    throw DimensionError("Picard operator expects " + std::to_string(f.dim()) + " components");
  const Domain& dom = g.domain();
  if (dom.size() != x0.domain().size() + 1) throw DimensionError("Picard iterate must have exactly one more variable (time) than the initial set");
  const std::size_t tvar = dom.size() - 1;
  const Interval& tbox = dom[tvar];

  const std::vector<TaylorModel> fg = eval_rhs(f, g);
  const TMVector x0t = lift_time(x0, tbox);
  std::vector<TaylorModel> out;
  out.reserve(f.dim());
  for (std::size_t i = 0; i < f.dim(); ++i) {
    const Polynomial integral = integrate(fg[i].poly(), tvar);
    Truncation tr = truncate(integral, k);
    // Each coefficient was divided once; one rounding per term.
    const double pad = rounding::mul_up(kUnitRoundoff, abs_bound(integral, dom));
    Interval rem = bound(tr.high, dom) + tbox * fg[i].rem() + Interval::symmetric(rounding::mul_up(pad, 1.0 + 8 * kUnitRoundoff));
    out.push_back(x0t[i] + TaylorModel(std::move(tr.low), rem, dom, k));
  }
  return TMVector(std::move(out));
}

TMVector solution_expansion(const PolynomialODE& f, const TMVector& x_local, double delta, unsigned k) {
  if (!(delta > 0.0)) throw std::invalid_argument("flowpipe step must be positive");
  std::vector<TaylorModel> start;
  for (const auto& c : x_local.components()) start.emplace_back(c.poly(), Interval(), c.domain(), k);
  const TMVector x0(std::move(start));
  TMVector g = lift_time(x0, Interval(0.0, delta));
  for (unsigned it = 0; it <= k; ++it) {
    const TMVector next = picard_apply(f, g, x0, k);
    std::vector<TaylorModel> polys;
    for (const auto& c : next.components()) polys.push_back(c.with_remainder(Interval()));
    g = TMVector(std::move(polys));
  }
  return g;
}

IntervalVector remainder_certify(const PolynomialODE& f, const TMVector& phi, const TMVector& x_local, unsigned k,
                                 const CertifyConfig& cfg) {
  const std::size_t n = phi.size();
  auto with_rem = [&](const IntervalVector& R) {
    std::vector<TaylorModel> c;
    for (std::size_t i = 0; i < n; ++i) c.push_back(phi[i].with_remainder(R[i]));
    return TMVector(std::move(c));
  };
  auto image = [&](const IntervalVector& R) {
    const TMVector p = picard_apply(f, with_rem(R), x_local, k);
    IntervalVector out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = (p[i] - phi[i]).range();
    return out;
  };

  IntervalVector R = image(IntervalVector(n));
  for (auto& r : R) r = Interval::symmetric(rounding::mul_up(2.0, r.mag()));

  for (unsigned attempt = 0;; ++attempt) {
    const IntervalVector next = image(R);
    std::size_t bad = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!next[i].subset_of(R[i])) {
        bad = i;
        break;
      }
    if (bad == n) {
      R = next;
      break;
    }
    if (attempt == cfg.max_inflations) throw ContractionFailure(bad, R[bad].width());
    // Only the components that escaped are widened. Widening the others too
    // feeds growth back through the coupling terms and the loop never closes.
    for (std::size_t i = 0; i < n; ++i) {
      if (next[i].subset_of(R[i])) continue;
      R[i] = Interval::symmetric(rounding::mul_up(2.0, hull(R[i], next[i]).mag()));
    }
  }
  for (unsigned i = 0; i < cfg.refinements; ++i) R = image(R);
  return R;
}

ControlStepResult integrate_control_step(const PolynomialODE& f, const TMVector& x, const TMVector& u, double delta_c,
                                         unsigned N, unsigned k, const CertifyConfig& cfg) {
  if (N == 0) throw std::invalid_argument("number of flowpipe steps must be at least 1");
  if (!(delta_c > 0.0)) throw std::invalid_argument("control step must be positive");
  TMVector state = u.empty() ? x : x.concat(u);
  if (state.size() != f.dim())
    throw DimensionError("ODE has " + std::to_string(f.dim()) + " variables but states and controls give " +
                         std::to_string(state.size()));

  const double delta = delta_c / N;
  ControlStepResult out;
  for (unsigned i = 0; i < N; ++i) {
    const TMVector phi = solution_expansion(f, state, delta, k);
    IntervalVector R;
    try {
      R = remainder_certify(f, phi, state, k, cfg);
    } catch (const ContractionFailure& e) {
      throw e.at_flow_step(i);
    }
    std::vector<TaylorModel> comps;
    for (std::size_t j = 0; j < phi.size(); ++j) comps.push_back(phi[j].with_remainder(R[j]));
    const TMVector pipe(std::move(comps));
    out.flowpipes.push_back(Flowpipe{pipe.head(x.size()), i, i * delta, delta});
    state = eval_time(pipe, delta);
  }
  out.next = state.head(x.size());
  return out;
}

}  // namespace polar
