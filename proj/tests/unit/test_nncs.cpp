#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "polar/errors.hpp"
#include "polar/model_file.hpp"
#include "polar/nncs.hpp"

using polar::Interval;
using polar::IntervalVector;
using polar::ReachConfig;
using polar::ReachResult;
using polar::Verdict;

namespace {

const std::string kData = POLAR_TEST_DATA_DIR;
const std::string kModels = POLAR_MODELS_DIR;

polar::LoadedModel load(const std::string& path) { return polar::load_model(path); }

// Recomputes the per-step hulls after remainders were changed.
void refresh_ranges(ReachResult& r) {
  for (auto& step : r.step_ranges) step.clear();
  for (const auto& fp : r.flowpipes) {
    const IntervalVector box = polar::flowpipe_box(fp.pipe);
    auto& s = r.step_ranges[fp.control_step];
    if (s.empty())
      s = box;
    else
      for (std::size_t i = 0; i < box.size(); ++i) s[i] = hull(s[i], box[i]);
  }
}

ReachResult scale_remainders(ReachResult r, double factor) {
  for (auto& fp : r.flowpipes) {
    std::vector<polar::TaylorModel> comps;
    for (const auto& c : fp.pipe.tm.components()) comps.push_back(c.with_remainder(scale(c.rem(), factor)));
    fp.pipe.tm = polar::TMVector(std::move(comps));
  }
  refresh_ranges(r);
  return r;
}

std::size_t violations(const polar::NNCSModel& m, const ReachResult& r, unsigned K, std::size_t count) {
  std::size_t v = 0;
  for (const auto& x0 : polar::sample_box(m.init, count, 99))
    v += polar::containment_check(r, polar::simulate(m, x0, K, m.control_step / 100)).size();
  return v;
}

}  // namespace

TEST_SUITE("nncs_verifier") {
  TEST_CASE("final-step reach verdicts") {
    const IntervalVector range{Interval(0, 1), Interval(0, 1)};
    CHECK(polar::reach_verdict(range, IntervalVector{Interval(-2, 2), Interval(-2, 2)}) == Verdict::proved);
    CHECK(polar::reach_verdict(range, IntervalVector{Interval(5, 6), Interval(5, 6)}) == Verdict::disproved);
    CHECK(polar::reach_verdict(range, IntervalVector{Interval(0.5, 2), Interval(-2, 2)}) == Verdict::unknown);
    CHECK_THROWS_AS(polar::reach_verdict(range, IntervalVector{Interval(0, 1)}), polar::DimensionError);
  }

  TEST_CASE("a model that does not move") {
    const auto m = load(kData + "/still.model");
    const ReachResult r = polar::run_reachability(m.model, 3, ReachConfig{}, m.file.property);
    CHECK(r.flowpipes.size() == 3 * 10);
    for (const auto& fp : r.flowpipes) {
      const IntervalVector box = polar::flowpipe_box(fp.pipe);
      for (std::size_t i = 0; i < 2; ++i) {
        CHECK(box[i].lo() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(box[i].hi() == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
    CHECK(r.verdict == Verdict::disproved);

    polar::TargetSpec unsafe{IntervalVector{Interval(-1, 2), Interval(-1, 2)}, polar::PropertyKind::avoid, {}};
    CHECK(polar::check_property(r, unsafe) == Verdict::disproved);
    unsafe.box = {Interval(3, 4), Interval(3, 4)};
    CHECK(polar::check_property(r, unsafe) == Verdict::proved);
    unsafe.box = {Interval(0.5, 4), Interval(-3, 4)};
    CHECK(polar::check_property(r, unsafe) == Verdict::unknown);

    for (const auto& x0 : polar::sample_box(m.model.init, 10, 1)) {
      const auto tr = polar::simulate(m.model, x0, 3, 0.01);
      CHECK(tr.states.back() == x0);
      CHECK(polar::containment_check(r, tr).empty());
    }
  }

  TEST_CASE("reach over all steps") {
    const auto m = load(kModels + "/linear_feedback.model");
    const ReachResult r = polar::run_reachability(m.model, 10, ReachConfig{});
    polar::TargetSpec spec{IntervalVector{Interval(0.7, 1.0)}, polar::PropertyKind::reach, polar::CheckAt::all_steps};
    CHECK(polar::check_property(r, spec) == Verdict::proved);
    spec.box = {Interval(-3, -2)};
    CHECK(polar::check_property(r, spec) == Verdict::disproved);
    spec.check_at = polar::CheckAt::final_step;
    spec.box = {Interval(0.7, 1.0)};
    CHECK(polar::check_property(r, spec) == Verdict::disproved);
  }

  TEST_CASE("linear feedback contracts by 0.9 per step") {
    const auto m = load(kModels + "/linear_feedback.model");
    ReachConfig cfg;
    cfg.remainder_mode = polar::RemainderMode::rigorous;
    const ReachResult r = polar::run_reachability(m.model, 10, cfg, m.file.property);
    // x' = -x0 over one step of 0.1 gives x1 = 0.9 x0 exactly.
    const double lo = 0.9 * std::pow(0.9, 10), hi = 1.1 * std::pow(0.9, 10);
    const polar::TMVector last = eval_time(r.flowpipes.back().pipe.tm, r.flowpipes.back().pipe.delta);
    const Interval fin = last[0].range();
    CHECK(fin.lo() <= lo);
    CHECK(fin.hi() >= hi);
    CHECK(fin.lo() >= lo - 1e-6);
    CHECK(fin.hi() <= hi + 1e-6);
    CHECK(r.verdict == Verdict::proved);
    CHECK(violations(m.model, r, 10, 100) == 0);
  }

  TEST_CASE("simulation accuracy") {
    const auto m = load(kModels + "/decay.model");
    const std::vector<double> x0{1.0};
    const auto tr = polar::simulate(m.model, x0, 2, 1e-3);
    REQUIRE(tr.times.size() == 1001);
    double worst = 0;
    for (std::size_t i = 0; i < tr.times.size(); ++i)
      worst = std::max(worst, std::fabs(tr.states[i][0] - std::exp(-tr.times[i])));
    CHECK(worst < 1e-8);
    CHECK(tr.times.back() == doctest::Approx(1.0));
  }

  TEST_CASE("simulation divergence is reported") {
    auto m = load(kModels + "/decay.model");
    m.model.ode = polar::PolynomialODE::with_static_inputs(
        {polar::Polynomial::from_terms(2, {{polar::Monomial::unit(0, 3), 1.0}})}, 1);
    const std::vector<double> x0{1e3};
    CHECK_THROWS_AS(polar::simulate(m.model, x0, 2, 0.05), polar::SimulationError);
  }

  TEST_CASE("containment detects shrunken remainders") {
    auto m = load(kModels + "/decay.model");
    ReachConfig cfg;
    cfg.order = 2;
    cfg.flowsteps = 1;
    const ReachResult r = polar::run_reachability(m.model, 2, cfg);
    CHECK(violations(m.model, r, 2, 20) == 0);
    // The order-2 truncation error near t = 0.5 is about 0.02, above a tenth of either remainder.
    CHECK(violations(m.model, scale_remainders(r, 0.1), 2, 20) > 0);
  }

  TEST_CASE("containment rejects times outside the horizon") {
    const auto m = load(kData + "/still.model");
    const ReachResult r = polar::run_reachability(m.model, 1, ReachConfig{});
    const auto tr = polar::simulate(m.model, std::vector<double>{0.5, 0.5}, 2, 0.01);
    CHECK_THROWS_AS(polar::containment_check(r, tr), std::out_of_range);
  }

  TEST_CASE("enlarging remainders never flips a verdict") {
    const auto m = load(kModels + "/linear_feedback.model");
    const ReachResult r = polar::run_reachability(m.model, 10, ReachConfig{});
    const std::vector<polar::TargetSpec> specs{
        {{Interval(0.2, 0.5)}, polar::PropertyKind::reach, {}},
        {{Interval(2, 3)}, polar::PropertyKind::reach, {}},
        {{Interval(0.3131, 0.5)}, polar::PropertyKind::reach, {}},
        {{Interval(-1, 0.3)}, polar::PropertyKind::avoid, {}},
        {{Interval(0.95, 1.05)}, polar::PropertyKind::avoid, {}},
        {{Interval(0.4, 0.45)}, polar::PropertyKind::avoid, {}},
        {{Interval(0.6, 0.7)}, polar::PropertyKind::reach, polar::CheckAt::all_steps}};
    for (const auto& spec : specs) {
      const Verdict base = polar::check_property(r, spec);
      for (double f : {2.0, 1e3, 1e6}) {
        const Verdict v = polar::check_property(scale_remainders(r, f), spec);
        CHECK((v == base || v == Verdict::unknown));
      }
    }
  }

  TEST_CASE("symbolic propagation does not widen control remainders") {
    for (const std::string name : {"linear_feedback", "decay", "attitude"}) {
      const auto m = load(kModels + "/" + name + ".model");
      const unsigned K = name == "attitude" ? 2 : 5;
      ReachConfig plain, sym;
      sym.symbolic = true;
      const ReachResult a = polar::run_reachability(m.model, K, plain);
      const ReachResult b = polar::run_reachability(m.model, K, sym);
      for (std::size_t s = 0; s < K; ++s)
        for (std::size_t j = 0; j < a.stats[s].control_remainder.size(); ++j)
          CHECK(b.stats[s].control_remainder[j].width() <= a.stats[s].control_remainder[j].width() + 1e-12);
    }
  }

  TEST_CASE("initial-box sampling") {
    const IntervalVector box{Interval(0, 1), Interval(-5, -4), Interval(2, 2)};
    const auto a = polar::sample_box(box, 50, 7);
    const auto b = polar::sample_box(box, 50, 7);
    CHECK(a == b);
    CHECK(a != polar::sample_box(box, 50, 8));
    for (const auto& x : a)
      for (std::size_t i = 0; i < 3; ++i) CHECK(box[i].contains(x[i]));
  }

  TEST_CASE("configuration errors") {
    const auto m = load(kModels + "/decay.model");
    CHECK_THROWS(polar::run_reachability(m.model, 0, ReachConfig{}));
    ReachConfig bad;
    bad.order = 0;
    CHECK_THROWS(polar::run_reachability(m.model, 1, bad));
  }
}
