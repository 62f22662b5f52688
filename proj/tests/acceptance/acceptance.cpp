// Acceptance checks AC1 to AC8. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "polar/model_file.hpp"
#include "polar/nn_abstraction.hpp"
#include "polar/nncs.hpp"
#include "polar/ode_flowpipe.hpp"
#include "polar/taylor_model.hpp"
#include "rational.hpp"

using polar::Activation;
using polar::Domain;
using polar::Interval;
using polar::Polynomial;
using polar::RemainderMode;
using polar::TaylorModel;
using polar::TMVector;

namespace {

const std::string kData = POLAR_TEST_DATA_DIR;
const std::string kModels = POLAR_MODELS_DIR;
const std::string kCli = POLAR_REACH_BIN;
const std::string kOut = POLAR_TEST_OUT_DIR;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

TaylorModel tm1(std::vector<double> c, Interval rem, unsigned order = 4) {
  return TaylorModel(Polynomial::univariate(c), rem, Domain::unit_box(1), order);
}

// AC1: the order-4 sum example.
Outcome ac1() {
  const TaylorModel s = tm1({1, 0, -0.5}, Interval(-0.1, 0.1)) + tm1({0, 1, 0, 0, 0.1}, Interval(-0.2, 0.2));
  const bool poly = s.poly() == Polynomial::univariate(std::vector<double>{1, 1, -0.5, 0, 0.1});
  const Interval r = s.rem();
  const bool rem = r.lo() <= -0.3 && r.hi() >= 0.3 && r.lo() >= -0.3 - 1e-10 && r.hi() <= 0.3 + 1e-10;
  return {poly && rem, fmt("poly %s, remainder [%.17g, %.17g]", poly ? "exact" : "WRONG", r.lo(), r.hi())};
}

// AC2: products of random univariate TMs against exact rational arithmetic.
// Truncated terms go to the remainder through their monomial-wise bound.
Outcome ac2() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> num(-64, 64), ord(1, 4), deg(0, 4), rad(0, 16);
  int poly_fail = 0, rem_fail = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const unsigned order = ord(rng);
    auto rand_tm = [&](oracle::QPoly& exact) {
      const int d = std::min<int>(deg(rng), order);
      std::vector<double> c(d + 1);
      exact.assign(d + 1, oracle::Q(0));
      for (int i = 0; i <= d; ++i) {
        c[i] = num(rng) / 32.0;
        exact[i] = oracle::q(c[i]);
      }
      const double r = rad(rng) / 64.0;
      return std::make_pair(tm1(c, Interval(-r, r), order), oracle::QInterval{oracle::q(-r), oracle::q(r)});
    };
    oracle::QPoly pa, pb;
    const auto [a, ra] = rand_tm(pa);
    const auto [b, rb] = rand_tm(pb);
    const TaylorModel prod = a * b;

    const oracle::QPoly full = oracle::mul(pa, pb);
    oracle::QPoly low(std::min<std::size_t>(full.size(), order + 1)), high(full.size(), oracle::Q(0));
    for (std::size_t e = 0; e < full.size(); ++e) (e <= order ? low[e] : high[e]) = full[e];
    const oracle::QInterval box{oracle::Q(-1), oracle::Q(1)};
    // I = B(high) + B(pa) Rb + Ra B(pb) + Ra Rb.
    const oracle::QInterval rem = oracle::bound(high, box) + oracle::bound(pa, box) * rb + ra * oracle::bound(pb, box) + ra * rb;

    std::vector<double> low_d;
    for (const auto& c : low) low_d.push_back(static_cast<double>(c));
    bool same = prod.poly() == Polynomial::univariate(low_d);
    for (std::size_t e = 0; e < low.size(); ++e) same = same && oracle::q(low_d[e]) == low[e];
    poly_fail += !same;
    rem_fail += !oracle::contains(prod.rem(), rem);
  }
  return {poly_fail == 0 && rem_fail == 0,
          fmt("100 pairs: %d polynomial mismatches, %d remainders missing the exact interval", poly_fail, rem_fail)};
}

// AC3: x' = -x from [0.9, 1.1], order 4, 50 steps of 0.02.
Outcome ac3() {
  const TMVector x = TMVector::from_box(std::vector<Interval>{Interval(0.9, 1.1)}, 4);
  const polar::PolynomialODE f({Polynomial::univariate(std::vector<double>{0, -1})});
  const auto r = polar::integrate_control_step(f, x, TMVector(), 1.0, 50, 4);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> zs(-1, 1), ts(0, 1);
  int miss = 0;
  for (int i = 0; i < 1000; ++i) {
    const double z = zs(rng);
    const double t = ts(rng);
    const std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(t / 0.02), 49);
    const auto& fp = r.flowpipes[idx];
    const double local = std::clamp(t - fp.t_offset, 0.0, fp.delta);
    const Interval enc = fp.tm[0].at(std::vector<Interval>{Interval(z), Interval(local)});
    // x0 = 1 + 0.1 z, evaluated at the same local time the enclosure used.
    const long double exact = (1.0L + 0.1L * z) * std::exp(-(static_cast<long double>(fp.t_offset) + local));
    const long double slack = 1e-15L;
    if (exact < enc.lo() - slack || exact > enc.hi() + slack) ++miss;
  }
  const double width = r.next[0].range().width();
  const double exact_width = 0.2 * std::exp(-1.0);
  const bool ok = miss == 0 && width <= 1.05 * exact_width;
  return {ok, fmt("%d of 1000 samples outside, final width %.6g vs 1.05 x %.6g", miss, width, exact_width)};
}

long double act_ld(Activation a, long double y) {
  switch (a) {
    case Activation::relu: return y > 0 ? y : 0;
    case Activation::sigmoid: return 1.0L / (1.0L + std::exp(-y));
    case Activation::tanh: return std::tanh(y);
    default: return y;
  }
}

// Largest |p(y - center) - act(y)| on a grid, in extended precision.
long double grid_error(Activation a, const polar::BernsteinApprox& ap, int n) {
  const std::vector<double> c = ap.poly.univariate_coefficients();
  const Interval& Y = ap.input_range;
  long double e = 0;
  for (int i = 0; i <= n; ++i) {
    // Grid points are doubles, as real activation inputs are, so y - center is exact here.
    const double y = Y.lo() + (Y.hi() - Y.lo()) * i / n;
    const long double s = static_cast<long double>(y) - ap.center;
    long double p = 0;
    for (std::size_t k = c.size(); k-- > 0;) p = p * s + c[k];
    e = std::max(e, std::fabs(p - act_ld(a, y)));
  }
  return e;
}

// AC4: Bernstein remainders against a dense grid.
Outcome ac4() {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> centre(-6, 6), lw(-3, 1);
  int rigorous_fail = 0, sampled_viol = 0, cases = 0;
  long double worst_excess = 0;
  for (Activation a : {Activation::relu, Activation::sigmoid, Activation::tanh})
    for (int i = 0; i < 200; ++i) {
      const double w = std::pow(10.0, lw(rng));
      const double lo = centre(rng) - w / 2;
      const Interval Y(lo, lo + w);
      for (unsigned k = 1; k <= 4; ++k) {
        ++cases;
        const auto rig = polar::bernstein_approx(a, Y, k, 100, RemainderMode::rigorous);
        if (grid_error(a, rig, 10000) > rig.rem.hi()) ++rigorous_fail;
        const auto smp = polar::bernstein_approx(a, Y, k, 100, RemainderMode::sampled);
        const long double excess = grid_error(a, smp, 10000) - smp.rem.hi();
        if (excess > 0) {
          ++sampled_viol;
          worst_excess = std::max(worst_excess, excess);
        }
      }
    }
  return {rigorous_fail == 0,
          fmt("%d cases: %d rigorous violations; sampled mode violated %d (%.2f%%), worst excess %.3Lg",
              cases, rigorous_fail, sampled_viol, 100.0 * sampled_viol / cases, worst_excess)};
}

// AC5: rigorous reachability and simulated containment.
Outcome ac5() {
  std::string detail;
  bool ok = true;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& [name, K] : std::vector<std::pair<std::string, unsigned>>{{"linear_feedback", 10}, {"attitude", 5}}) {
    const auto m = polar::load_model(kModels + "/" + name + ".model");
    polar::ReachConfig cfg;
    cfg.remainder_mode = RemainderMode::rigorous;
    cfg.symbolic = true;
    const auto r = polar::run_reachability(m.model, K, cfg);
    std::size_t v = 0;
    for (const auto& x0 : polar::sample_box(m.model.init, 100, 5))
      v += polar::containment_check(r, polar::simulate(m.model, x0, K, m.model.control_step / 100)).size();
    ok = ok && v == 0;
    detail += fmt("%s K=%u: %zu violations over 100 runs; ", name.c_str(), K, v);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ok = ok && secs < 300;
  return {ok, detail + fmt("%.1f s total", secs)};
}

// AC6: symbolic remainders against layer-by-layer ones.
Outcome ac6() {
  std::mt19937_64 rng(66);
  std::uniform_int_distribution<int> hidden(1, 3);
  const std::vector<Activation> acts{Activation::relu, Activation::sigmoid, Activation::tanh, Activation::identity};
  int worse = 0;
  double worst = -1e300;
  for (int i = 0; i < 50; ++i) {
    const auto net = fixtures::random_network(rng, 3, 2, hidden(rng), 10, 64, acts);
    const TMVector in = fixtures::random_input(rng, 3, 3, 0.05);
    const TMVector plain = polar::nn_output_tm(net, in, {});
    const TMVector sym = polar::nn_output_tm_symbolic(net, in, {});
    for (std::size_t j = 0; j < 2; ++j) {
      const double d = sym[j].rem().width() - plain[j].rem().width();
      worst = std::max(worst, d);
      if (d > 1e-12) ++worse;
    }
  }

  const auto chain = fixtures::rotation_chain(10, 0.3);
  const TMVector z = TMVector::from_box(std::vector<Interval>{Interval(0), Interval(0)}, 2);
  const TMVector in({z[0].with_remainder(Interval(-1, 1)), z[1].with_remainder(Interval(-1, 1))});
  const TMVector sym = polar::nn_output_tm_symbolic(chain, in, {});
  const TMVector plain = polar::nn_output_tm(chain, in, {});
  double ratio = 1e300;
  for (std::size_t j = 0; j < 2; ++j) ratio = std::min(ratio, plain[j].rem().width() / sym[j].rem().width());
  return {worse == 0 && ratio >= 1.5,
          fmt("50 nets: %d components wider (max excess %.3g); rotation chain plain/symbolic %.3g", worse, worst, ratio)};
}

// AC7: operation counts against M(M-1)/2 and M.
Outcome ac7() {
  std::mt19937_64 rng(77);
  const TMVector in = fixtures::random_input(rng, 2, 2, 0.01);
  const std::vector<std::size_t> depths{2, 4, 8, 16};
  std::vector<double> quad, lin;
  bool ok = true;
  std::string detail;
  for (std::size_t M : depths) {
    std::vector<polar::Layer> layers;
    for (std::size_t i = 0; i < M; ++i) layers.push_back(fixtures::random_layer(rng, 2, 2, Activation::sigmoid));
    const polar::NeuralNetwork net(std::move(layers));
    polar::OpCounters plain, sym;
    polar::nn_output_tm(net, in, {}, &plain);
    polar::nn_output_tm_symbolic(net, in, {}, &sym);
    const double q_ratio = sym.matrix_products / (M * (M - 1) / 2.0);
    const double l_ratio = plain.linear_maps / static_cast<double>(M);
    ok = ok && std::fabs(q_ratio - 1) <= 0.2 && std::fabs(l_ratio - 1) <= 0.2;
    quad.push_back(sym.matrix_products);
    lin.push_back(plain.linear_maps);
    detail += fmt("M=%zu: %zu products, %zu maps; ", M, sym.matrix_products, plain.linear_maps);
  }
  // Log-log slopes between the two largest depths.
  const double qs = std::log2(quad[3] / quad[2]);
  const double ls = std::log2(lin[3] / lin[2]);
  ok = ok && std::fabs(qs - 2) <= 0.4 && std::fabs(ls - 1) <= 0.2;
  return {ok, detail + fmt("slopes %.3g and %.3g", qs, ls)};
}

int run_cli(const std::string& model) {
  const std::filesystem::path dir = std::filesystem::path(kOut) / "acceptance_cli";
  std::filesystem::create_directories(dir);
  const std::string cmd = "\"" + kCli + "\" verify \"" + model + "\" --steps 10 --out \"" + dir.string() + "\" > \"" +
                          (dir / "log.txt").string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// AC8: three-valued verdicts through the command-line exit code.
Outcome ac8() {
  const int a = run_cli(kData + "/reach_contained.model");
  const int b = run_cli(kData + "/reach_disjoint.model");
  const int c = run_cli(kData + "/reach_straddling.model");
  return {a == 0 && b == 1 && c == 2, fmt("exit codes contained %d, disjoint %d, straddling %d", a, b, c)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},
      {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}};
  int failed = 0;
  for (const auto& [name, fn] : checks) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s %s (%.2f s)\n", name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
