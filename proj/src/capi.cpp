#include "polar/polar.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "polar/errors.hpp"
#include "polar/model_file.hpp"
#include "polar/nncs.hpp"
#include "polar/output.hpp"

struct polar_model {
  polar::LoadedModel loaded;
};

struct polar_config {
  polar::ReachConfig cfg;
};

struct polar_result {
  polar::ReachResult result;
  unsigned steps = 0;
};

struct polar_simulation {
  polar::SimulationSet sims;
};

namespace {

thread_local std::string g_last_error;

polar_status fail(polar_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Maps exceptions from the core onto status codes.
template <typename F>
polar_status guarded(F&& f) {
  try {
    f();
    return POLAR_OK;
  } catch (const polar::ParseError& e) {
    return fail(POLAR_ERR_PARSE, e.what());
  } catch (const polar::IoError& e) {
    return fail(POLAR_ERR_IO, e.what());
  } catch (const polar::DimensionError& e) {
    return fail(POLAR_ERR_DIMENSION, e.what());
  } catch (const polar::ContractionFailure& e) {
    return fail(POLAR_ERR_CONTRACTION, "remainder certification failed at control step " +
                                           std::to_string(e.control_step() + 1) + ", flowpipe step " +
                                           std::to_string(e.flow_step() + 1) + ", component " +
                                           std::to_string(e.component() + 1) + "; reduce the step size");
  } catch (const polar::SimulationError& e) {
    return fail(POLAR_ERR_SIMULATION, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(POLAR_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(POLAR_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(POLAR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(POLAR_ERR_INTERNAL, e.what());
  }
}

polar_status null_arg(const char* name) { return fail(POLAR_ERR_INVALID_ARGUMENT, std::string(name) + " is NULL"); }

polar_status set_positive(polar_config* cfg, unsigned v, unsigned polar::ReachConfig::*field, const char* what) {
  if (!cfg) return null_arg("config");
  if (v == 0) return fail(POLAR_ERR_INVALID_ARGUMENT, std::string(what) + " must be at least 1");
  cfg->cfg.*field = v;
  return POLAR_OK;
}

}  // namespace

extern "C" {

const char* polar_version(void) { return "1.0.0"; }

const char* polar_last_error(void) { return g_last_error.c_str(); }

const char* polar_status_string(polar_status s) {
  switch (s) {
    case POLAR_OK: return "ok";
    case POLAR_ERR_INVALID_ARGUMENT: return "invalid argument";
    case POLAR_ERR_IO: return "i/o error";
    case POLAR_ERR_PARSE: return "parse error";
    case POLAR_ERR_DIMENSION: return "dimension mismatch";
    case POLAR_ERR_CONTRACTION: return "contraction failure";
    case POLAR_ERR_SIMULATION: return "simulation error";
    case POLAR_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

polar_status polar_model_load(const char* path, polar_model** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto m = std::make_unique<polar_model>();
    m->loaded = polar::load_model(path);
    *out = m.release();
  });
}

void polar_model_free(polar_model* model) { delete model; }

size_t polar_model_num_states(const polar_model* model) { return model ? model->loaded.model.num_states() : 0; }

size_t polar_model_num_controls(const polar_model* model) { return model ? model->loaded.model.num_controls() : 0; }

const char* polar_model_state_name(const polar_model* model, size_t index) {
  if (!model || index >= model->loaded.model.num_states()) return nullptr;
  return model->loaded.model.state_names[index].c_str();
}

int polar_model_has_property(const polar_model* model) { return model && model->loaded.file.property ? 1 : 0; }

polar_status polar_model_print(const polar_model* model, char* buf, size_t cap, size_t* needed) {
  if (!model) return null_arg("model");
  return guarded([&] {
    const std::string text = polar::print_model(model->loaded.file);
    if (needed) *needed = text.size() + 1;
    if (buf && cap > 0) {
      const size_t n = std::min(cap - 1, text.size());
      std::memcpy(buf, text.data(), n);
      buf[n] = '\0';
    }
  });
}

polar_config* polar_config_new(void) { return new (std::nothrow) polar_config(); }

void polar_config_free(polar_config* cfg) { delete cfg; }

polar_status polar_config_set_order(polar_config* cfg, unsigned order) {
  return set_positive(cfg, order, &polar::ReachConfig::order, "order");
}

polar_status polar_config_set_bernstein_order(polar_config* cfg, unsigned order) {
  return set_positive(cfg, order, &polar::ReachConfig::bernstein_order, "Bernstein order");
}

polar_status polar_config_set_samples(polar_config* cfg, unsigned samples) {
  return set_positive(cfg, samples, &polar::ReachConfig::samples, "sample count");
}

polar_status polar_config_set_flowsteps(polar_config* cfg, unsigned steps) {
  return set_positive(cfg, steps, &polar::ReachConfig::flowsteps, "flowpipe step count");
}

polar_status polar_config_set_symbolic(polar_config* cfg, int enabled) {
  if (!cfg) return null_arg("config");
  cfg->cfg.symbolic = enabled != 0;
  return POLAR_OK;
}

polar_status polar_config_set_remainder_mode(polar_config* cfg, polar_remainder_mode mode) {
  if (!cfg) return null_arg("config");
  if (mode != POLAR_REMAINDER_SAMPLED && mode != POLAR_REMAINDER_RIGOROUS)
    return fail(POLAR_ERR_INVALID_ARGUMENT, "unknown remainder mode");
  cfg->cfg.remainder_mode = mode == POLAR_REMAINDER_RIGOROUS ? polar::RemainderMode::rigorous : polar::RemainderMode::sampled;
  return POLAR_OK;
}

polar_status polar_run(const polar_model* model, unsigned steps, const polar_config* cfg, polar_result** out) {
  if (!model) return null_arg("model");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<polar_result>();
    const polar::ReachConfig c = cfg ? cfg->cfg : polar::ReachConfig{};
    r->result = polar::run_reachability(model->loaded.model, steps, c, model->loaded.file.property);
    r->steps = steps;
    *out = r.release();
  });
}

void polar_result_free(polar_result* result) { delete result; }

polar_verdict polar_result_verdict(const polar_result* result) {
  if (!result) return POLAR_UNKNOWN;
  switch (result->result.verdict) {
    case polar::Verdict::proved: return POLAR_PROVED;
    case polar::Verdict::disproved: return POLAR_DISPROVED;
    case polar::Verdict::unknown: return POLAR_UNKNOWN;
  }
  return POLAR_UNKNOWN;
}

size_t polar_result_num_steps(const polar_result* result) { return result ? result->result.num_control_steps() : 0; }

size_t polar_result_num_flowpipes(const polar_result* result) { return result ? result->result.flowpipes.size() : 0; }

double polar_result_wall_seconds(const polar_result* result) { return result ? result->result.wall_seconds : NAN; }

polar_status polar_result_step_range(const polar_result* result, size_t step, size_t var, double* lo, double* hi) {
  if (!result) return null_arg("result");
  if (!lo || !hi) return null_arg("output pointer");
  const auto& ranges = result->result.step_ranges;
  if (step >= ranges.size() || var >= ranges[step].size())
    return fail(POLAR_ERR_INVALID_ARGUMENT, "step or variable index out of range");
  *lo = ranges[step][var].lo();
  *hi = ranges[step][var].hi();
  return POLAR_OK;
}

polar_status polar_result_write(const polar_result* result, const polar_model* model, const char* path,
                                polar_format format, const char* projections, const polar_simulation* sims) {
  if (!result) return null_arg("result");
  if (!model) return null_arg("model");
  if (!path) return null_arg("path");
  return guarded([&] {
    const auto& m = model->loaded.model;
    const auto proj = projections ? polar::parse_projections(projections, m.state_names)
                                  : polar::default_projections(m.num_states());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw polar::IoError(std::string("cannot write '") + path + "'");
    const polar::SimulationSet* s = sims ? &sims->sims : nullptr;
    switch (format) {
      case POLAR_FORMAT_CSV: polar::write_csv(f, m, result->result, proj); break;
      case POLAR_FORMAT_JSON: polar::write_json(f, m, result->result, proj, s); break;
      case POLAR_FORMAT_SVG: polar::write_svg(f, m, result->result, proj.front(), s); break;
      default: throw std::invalid_argument("unknown output format");
    }
    if (!f) throw polar::IoError(std::string("failed writing '") + path + "'");
  });
}

polar_status polar_simulate(const polar_model* model, const polar_result* result, size_t count, uint64_t seed,
                            polar_simulation** out) {
  if (!model) return null_arg("model");
  if (!result) return null_arg("result");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const auto& m = model->loaded.model;
    auto s = std::make_unique<polar_simulation>();
    // About 1e-3 s of simulated time per RK4 step, dividing the control step.
    const double substeps = std::max(1.0, std::round(m.control_step / 1e-3));
    const double dt = m.control_step / substeps;
    for (const auto& x0 : polar::sample_box(m.init, count, seed)) {
      polar::Trajectory tr = polar::simulate(m, x0, result->steps, dt);
      s->sims.violations += polar::containment_check(result->result, tr).size();
      s->sims.trajectories.push_back(std::move(tr));
    }
    *out = s.release();
  });
}

void polar_simulation_free(polar_simulation* sims) { delete sims; }

size_t polar_simulation_count(const polar_simulation* sims) { return sims ? sims->sims.trajectories.size() : 0; }

size_t polar_simulation_violations(const polar_simulation* sims) { return sims ? sims->sims.violations : 0; }

polar_status polar_simulation_write_csv(const polar_simulation* sims, const polar_model* model, const char* path) {
  if (!sims) return null_arg("simulation");
  if (!model) return null_arg("model");
  if (!path) return null_arg("path");
  return guarded([&] {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw polar::IoError(std::string("cannot write '") + path + "'");
    polar::write_trajectories_csv(f, model->loaded.model, sims->sims);
  });
}

}  // extern "C"
