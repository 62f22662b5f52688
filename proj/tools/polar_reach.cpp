// polar-reach: command-line front end over the C interface.
//
// Exit codes: 0 proved, 1 disproved, 2 unknown or no property, 3 error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polar/polar.h"

namespace {

constexpr int kExitError = 3;

struct ModelDeleter {
  void operator()(polar_model* m) const { polar_model_free(m); }
};
struct ConfigDeleter {
  void operator()(polar_config* c) const { polar_config_free(c); }
};
struct ResultDeleter {
  void operator()(polar_result* r) const { polar_result_free(r); }
};
struct SimDeleter {
  void operator()(polar_simulation* s) const { polar_simulation_free(s); }
};

int report(polar_status s, const std::string& context) {
  std::cerr << "polar-reach: " << context << ": " << polar_last_error() << " (" << polar_status_string(s) << ")\n";
  return kExitError;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

std::string file_safe(std::string s) {
  for (char& c : s)
    if (c == ':') c = '_';
  return s;
}

struct Options {
  std::string model;
  unsigned steps = 10;
  unsigned order = 4;
  unsigned bernstein_order = 2;
  unsigned samples = 100;
  unsigned flowsteps = 10;
  bool symbolic = false;
  std::string remainder = "sampled";
  unsigned simulate = 0;
  std::string out = "polar-out";
  std::string format = "csv";
  std::uint64_t seed = 1;
  std::string project;
};

int verify(const Options& o) {
  polar_model* raw_model = nullptr;
  if (polar_status s = polar_model_load(o.model.c_str(), &raw_model); s != POLAR_OK) return report(s, "loading model");
  std::unique_ptr<polar_model, ModelDeleter> model(raw_model);

  std::unique_ptr<polar_config, ConfigDeleter> cfg(polar_config_new());
  if (!cfg) return report(POLAR_ERR_INTERNAL, "allocating configuration");
  const polar_remainder_mode mode = o.remainder == "rigorous" ? POLAR_REMAINDER_RIGOROUS : POLAR_REMAINDER_SAMPLED;
  for (polar_status s : {polar_config_set_order(cfg.get(), o.order), polar_config_set_bernstein_order(cfg.get(), o.bernstein_order),
                         polar_config_set_samples(cfg.get(), o.samples), polar_config_set_flowsteps(cfg.get(), o.flowsteps),
                         polar_config_set_symbolic(cfg.get(), o.symbolic ? 1 : 0),
                         polar_config_set_remainder_mode(cfg.get(), mode)})
    if (s != POLAR_OK) return report(s, "configuration");

  polar_result* raw_result = nullptr;
  if (polar_status s = polar_run(model.get(), o.steps, cfg.get(), &raw_result); s != POLAR_OK)
    return report(s, "reachability analysis");
  std::unique_ptr<polar_result, ResultDeleter> result(raw_result);

  const std::size_t n = polar_model_num_states(model.get());
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.emplace_back(polar_model_state_name(model.get(), i));

  std::cout << "model: " << o.model << "\n";
  std::cout << "control steps: " << o.steps << ", flowpipes: " << polar_result_num_flowpipes(result.get()) << "\n";
  for (std::size_t k = 0; k < polar_result_num_steps(result.get()); ++k) {
    std::cout << "step " << k + 1 << ":";
    for (std::size_t i = 0; i < n; ++i) {
      double lo = 0, hi = 0;
      polar_result_step_range(result.get(), k, i, &lo, &hi);
      char buf[96];
      std::snprintf(buf, sizeof buf, " %s in [%.6g, %.6g]", names[i].c_str(), lo, hi);
      std::cout << buf;
    }
    std::cout << "\n";
  }

  std::unique_ptr<polar_simulation, SimDeleter> sims;
  if (o.simulate > 0) {
    polar_simulation* raw = nullptr;
    if (polar_status s = polar_simulate(model.get(), result.get(), o.simulate, o.seed, &raw); s != POLAR_OK)
      return report(s, "simulation");
    sims.reset(raw);
  }

  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec) {
    std::cerr << "polar-reach: cannot create output directory '" << o.out << "': " << ec.message() << "\n";
    return kExitError;
  }
  const std::filesystem::path out_dir(o.out);

  std::vector<std::string> projections;
  if (o.project.empty())
    for (const auto& name : names) projections.push_back("t:" + name);
  else
    projections = split(o.project, ',');
  const std::string joined = [&] {
    std::string s;
    for (std::size_t i = 0; i < projections.size(); ++i) s += (i ? "," : "") + projections[i];
    return s;
  }();

  if (o.format == "svg") {
    for (const auto& p : projections) {
      const auto path = (out_dir / ("flowpipes_" + file_safe(p) + ".svg")).string();
      if (polar_status s = polar_result_write(result.get(), model.get(), path.c_str(), POLAR_FORMAT_SVG, p.c_str(), sims.get());
          s != POLAR_OK)
        return report(s, "writing " + path);
    }
  } else {
    const bool json = o.format == "json";
    const auto path = (out_dir / (json ? "flowpipes.json" : "flowpipes.csv")).string();
    if (polar_status s = polar_result_write(result.get(), model.get(), path.c_str(), json ? POLAR_FORMAT_JSON : POLAR_FORMAT_CSV,
                                            joined.c_str(), sims.get());
        s != POLAR_OK)
      return report(s, "writing " + path);
  }

  if (sims) {
    const auto path = (out_dir / "trajectories.csv").string();
    if (polar_status s = polar_simulation_write_csv(sims.get(), model.get(), path.c_str()); s != POLAR_OK)
      return report(s, "writing " + path);
    const std::size_t v = polar_simulation_violations(sims.get());
    std::ofstream rep(out_dir / "containment.txt");
    rep << "trajectories: " << polar_simulation_count(sims.get()) << "\nviolations: " << v << "\n";
    std::cout << "simulation: " << polar_simulation_count(sims.get()) << " trajectories, " << v
              << " containment violations\n";
    if (v > 0) std::cerr << "polar-reach: warning: simulated states escaped the flowpipes\n";
  }

  std::cout << "outputs: " << out_dir.string() << "\n";
  std::printf("time: %.3f s\n", polar_result_wall_seconds(result.get()));

  if (!polar_model_has_property(model.get())) {
    std::cout << "verdict: unknown (no property given)\n";
    return POLAR_UNKNOWN;
  }
  const polar_verdict v = polar_result_verdict(result.get());
  std::cout << "verdict: " << (v == POLAR_PROVED ? "proved" : v == POLAR_DISPROVED ? "disproved" : "unknown") << "\n";
  return static_cast<int>(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reachability analysis of neural-network controlled systems"};
  app.require_subcommand(1);
  Options o;
  CLI::App* v = app.add_subcommand("verify", "Compute flowpipes and check the model's property");
  v->add_option("model", o.model, "Model file")->required();
  v->add_option("--steps", o.steps, "Control steps K")->check(CLI::PositiveNumber);
  v->add_option("--order", o.order, "Taylor model order")->check(CLI::PositiveNumber);
  v->add_option("--bernstein-order", o.bernstein_order, "Bernstein polynomial degree")->check(CLI::PositiveNumber);
  v->add_option("--samples", o.samples, "Samples for the Bernstein remainder")->check(CLI::PositiveNumber);
  v->add_option("--flowsteps", o.flowsteps, "Flowpipes per control step")->check(CLI::PositiveNumber);
  v->add_flag("--symbolic", o.symbolic, "Propagate remainders symbolically through the network");
  v->add_option("--remainder", o.remainder, "Bernstein remainder mode")->check(CLI::IsMember({"sampled", "rigorous"}));
  v->add_option("--simulate", o.simulate, "Simulate this many trajectories and check containment");
  v->add_option("--out", o.out, "Output directory");
  v->add_option("--format", o.format, "Flowpipe output format")->check(CLI::IsMember({"csv", "json", "svg"}));
  v->add_option("--seed", o.seed, "Seed for sampling initial states");
  v->add_option("--project", o.project, "Projections such as t:x1,x1:x2 (default: t against each state)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }
  return verify(o);
}
