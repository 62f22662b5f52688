#include "polar/nncs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "polar/errors.hpp"

namespace polar {

namespace {

// Re-labels a TM vector with another order, moving terms above it into the
// remainders.
TMVector with_order(const TMVector& v, unsigned order) {
  if (v.empty() || v.order() == order) return v;
  std::vector<TaylorModel> out;
  for (const auto& c : v.components()) {
    Truncation tr = truncate(c.poly(), order);
    out.emplace_back(std::move(tr.low), c.rem() + bound(tr.high, c.domain()), c.domain(), order);
  }
  return TMVector(std::move(out));
}

IntervalVector hull(const IntervalVector& a, const IntervalVector& b) {
  IntervalVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = polar::hull(a[i], b[i]);
  return r;
}

bool subset(std::span<const Interval> a, std::span<const Interval> b) { return subset_of(a, b); }

void require_box_dim(std::span<const Interval> box, std::size_t n) {
  if (box.size() != n)
    throw DimensionError("property box has " + std::to_string(box.size()) + " components, expected " + std::to_string(n));
}

}  // namespace

void NNCSModel::validate() const {
  const std::size_t nx = num_states();
  const std::size_t nu = num_controls();
  if (nx == 0) throw DimensionError("model has no state variables");
  if (ode.dim() != nx + nu)
    throw DimensionError("ODE has " + std::to_string(ode.dim()) + " variables, expected " + std::to_string(nx + nu));
  for (std::size_t i = nx; i < nx + nu; ++i)
    if (!ode.rhs[i].is_zero()) throw DimensionError("control variable '" + control_names[i - nx] + "' must be static");
  if (net.input_dim() != nx)
    throw DimensionError("network takes " + std::to_string(net.input_dim()) + " inputs but the model has " +
                         std::to_string(nx) + " states");
  if (net.output_dim() != nu)
    throw DimensionError("network produces " + std::to_string(net.output_dim()) + " outputs but the model has " +
                         std::to_string(nu) + " controls");
  if (!(control_step > 0.0) || !std::isfinite(control_step)) throw std::invalid_argument("control step must be positive");
  if (init.size() != nx)
    throw DimensionError("initial box has " + std::to_string(init.size()) + " components, expected " + std::to_string(nx));
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::proved: return "proved";
    case Verdict::disproved: return "disproved";
    case Verdict::unknown: return "unknown";
  }
  return "unknown";
}

IntervalVector flowpipe_box(const Flowpipe& f) { return f.tm.ranges(); }

ReachResult run_reachability(const NNCSModel& model, unsigned K, const ReachConfig& cfg,
                             const std::optional<TargetSpec>& property) {
  model.validate();
  if (K == 0) throw std::invalid_argument("number of control steps must be at least 1");
  if (cfg.order == 0 || cfg.bernstein_order == 0 || cfg.samples == 0 || cfg.flowsteps == 0)
    throw std::invalid_argument("orders, samples and flowpipe steps must be at least 1");
  if (property) require_box_dim(property->box, model.num_states());

  const auto start = std::chrono::steady_clock::now();
  const AbstractionConfig abs{cfg.bernstein_order, cfg.samples, cfg.remainder_mode};
  const unsigned nn_order = cfg.nn_order.value_or(cfg.order);

  ReachResult res;
  res.init = model.init;
  res.control_step = model.control_step;
  res.flowsteps = cfg.flowsteps;

  TMVector x = TMVector::from_box(model.init, cfg.order);
  for (unsigned step = 0; step < K; ++step) {
    const TMVector x_nn = with_order(x, nn_order);
    TMVector u = cfg.symbolic ? nn_output_tm_symbolic(model.net, x_nn, abs) : nn_output_tm(model.net, x_nn, abs);
    u = with_order(u, cfg.order);

    ControlStepResult cs;
    try {
      cs = integrate_control_step(model.ode, x, u, model.control_step, cfg.flowsteps, cfg.order, cfg.certify);
    } catch (const ContractionFailure& e) {
      throw e.at_control_step(step);
    }

    IntervalVector range;
    for (auto& fp : cs.flowpipes) {
      const IntervalVector box = flowpipe_box(fp);
      range = range.empty() ? box : hull(range, box);
      res.flowpipes.push_back(StepFlowpipe{step, std::move(fp)});
    }
    res.step_ranges.push_back(std::move(range));
    res.stats.push_back(StepStats{u.remainders(), cs.next.remainders()});
    x = std::move(cs.next);
  }

  if (property) res.verdict = check_property(res, *property);
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

Verdict reach_verdict(std::span<const Interval> final_range, std::span<const Interval> target) {
  require_box_dim(target, final_range.size());
  if (subset(final_range, target)) return Verdict::proved;
  if (!intersects(final_range, target)) return Verdict::disproved;
  return Verdict::unknown;
}

Verdict check_property(const ReachResult& result, const TargetSpec& spec) {
  if (result.step_ranges.empty()) return Verdict::unknown;
  const std::size_t last = result.step_ranges.size() - 1;
  const bool all = spec.effective_check_at() == CheckAt::all_steps;

  if (spec.kind == PropertyKind::reach) {
    if (!all) return reach_verdict(result.step_ranges.back(), spec.box);
    // Reached at some control step by every trajectory, or never touched.
    bool touched = false;
    for (const auto& r : result.step_ranges) {
      require_box_dim(spec.box, r.size());
      if (subset(r, spec.box)) return Verdict::proved;
    }
    for (const auto& fp : result.flowpipes)
      if (intersects(flowpipe_box(fp.pipe), spec.box)) touched = true;
    return touched ? Verdict::unknown : Verdict::disproved;
  }

  bool any_hit = false;
  for (const auto& fp : result.flowpipes) {
    if (!all && fp.control_step != last) continue;
    const IntervalVector box = flowpipe_box(fp.pipe);
    require_box_dim(spec.box, box.size());
    if (subset(box, spec.box)) return Verdict::disproved;
    if (intersects(box, spec.box)) any_hit = true;
  }
  return any_hit ? Verdict::unknown : Verdict::proved;
}

Trajectory simulate(const NNCSModel& model, std::span<const double> x0, unsigned K, double fine_dt) {
  model.validate();
  const std::size_t nx = model.num_states();
  if (x0.size() != nx) throw DimensionError("initial state has the wrong dimension");
  if (!(fine_dt > 0.0)) throw std::invalid_argument("simulation step must be positive");
  const double ratio = model.control_step / fine_dt;
  const long substeps = std::lround(ratio);
  if (substeps < 1 || std::fabs(ratio - static_cast<double>(substeps)) > 1e-9 * ratio)
    throw std::invalid_argument("simulation step must divide the control step");
  const double h = model.control_step / static_cast<double>(substeps);

  const std::size_t n = model.ode.dim();
  std::vector<double> s(n);
  std::copy(x0.begin(), x0.end(), s.begin());

  auto deriv = [&](const std::vector<double>& y) {
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = evaluate(model.ode.rhs[i], y);
    return d;
  };
  auto axpy = [&](const std::vector<double>& y, const std::vector<double>& k, double a) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = y[i] + a * k[i];
    return r;
  };

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.emplace_back(x0.begin(), x0.end());
  for (unsigned step = 0; step < K; ++step) {
    const std::vector<double> u = model.net.forward(std::span<const double>(s.data(), nx));
    std::copy(u.begin(), u.end(), s.begin() + static_cast<std::ptrdiff_t>(nx));
    for (long j = 0; j < substeps; ++j) {
      const auto k1 = deriv(s);
      const auto k2 = deriv(axpy(s, k1, h / 2));
      const auto k3 = deriv(axpy(s, k2, h / 2));
      const auto k4 = deriv(axpy(s, k3, h));
      for (std::size_t i = 0; i < nx; ++i) {
        s[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        if (!std::isfinite(s[i])) throw SimulationError("simulation diverged at t = " + std::to_string(step * model.control_step + (j + 1) * h));
      }
      traj.times.push_back(step * model.control_step + static_cast<double>(j + 1) * h);
      traj.states.emplace_back(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(nx));
    }
  }
  return traj;
}

std::vector<std::vector<double>> sample_box(std::span<const Interval> box, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> out(count, std::vector<double>(box.size()));
  for (auto& p : out)
    for (std::size_t i = 0; i < box.size(); ++i)
      p[i] = box[i].is_point() ? box[i].lo() : std::uniform_real_distribution<double>(box[i].lo(), box[i].hi())(rng);
  return out;
}

std::vector<Violation> containment_check(const ReachResult& result, const Trajectory& traj, double tol) {
  if (traj.states.empty()) return {};
  const std::size_t K = result.num_control_steps();
  const unsigned N = result.flowsteps;
  const double dc = result.control_step;
  const std::vector<double>& x0 = traj.states.front();
  if (x0.size() != result.init.size()) throw DimensionError("trajectory dimension does not match the result");

  // Parameter point of the initial state: z = (x0 - mid) / rad.
  std::vector<Interval> point;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    const Interval& b = result.init[i];
    const double m = b.mid();
    const double r = b.rad();
    if (r == 0.0) {
      point.emplace_back(0.0);
      continue;
    }
    const double lo = std::max(-1.0, rounding::div_down(rounding::sub_down(x0[i], m), r));
    const double hi = std::min(1.0, rounding::div_up(rounding::sub_up(x0[i], m), r));
    if (lo > hi) throw DimensionError("trajectory does not start in the initial box");
    point.emplace_back(lo, hi);
  }
  point.emplace_back(0.0);

  std::vector<Violation> out;
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    const double t = traj.times[s];
    if (t < 0.0 || t > K * dc * (1 + 1e-12)) throw std::out_of_range("trajectory time outside the analysed horizon");
    const std::size_t c = std::min<std::size_t>(static_cast<std::size_t>(t / dc), K - 1);
    const double local = t - c * dc;
    const Flowpipe& first = result.flowpipes[c * N].pipe;
    const std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(std::max(0.0, local / first.delta)), N - 1);
    const Flowpipe& fp = result.flowpipes[c * N + idx].pipe;
    point.back() = Interval(std::clamp(local - fp.t_offset, 0.0, fp.delta));
    const IntervalVector enc = fp.tm.at(point);
    for (std::size_t i = 0; i < enc.size(); ++i) {
      const double v = traj.states[s][i];
      const double slack = tol * (1.0 + std::fabs(v));
      if (v < enc[i].lo() - slack || v > enc[i].hi() + slack) out.push_back(Violation{t, i, v, enc[i]});
    }
  }
  return out;
}

}  // namespace polar
