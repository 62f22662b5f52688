#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polar/interval.hpp"
#include "polar/neural_network.hpp"
#include "polar/nn_abstraction.hpp"
#include "polar/ode_flowpipe.hpp"
#include "polar/taylor_model.hpp"

namespace polar {

/// Plant ODE over (states, controls), controller and initial box.
struct NNCSModel {
  std::vector<std::string> state_names;
  std::vector<std::string> control_names;
  PolynomialODE ode;  ///< dim = states + controls; control rhs are zero
  NeuralNetwork net;
  double control_step = 0.0;
  IntervalVector init;  ///< one interval per state

  std::size_t num_states() const noexcept { return state_names.size(); }
  std::size_t num_controls() const noexcept { return control_names.size(); }

  /// Throws DimensionError (or std::invalid_argument for a bad step) when
  /// the pieces do not fit together.
  void validate() const;
};

enum class PropertyKind {
  reach,  ///< the box is a target that must be reached
  avoid,  ///< the box is an unsafe set
};

enum class CheckAt { final_step, all_steps };

struct TargetSpec {
  IntervalVector box;
  PropertyKind kind = PropertyKind::avoid;
  /// Reach properties default to the final step, avoid properties to all steps.
  std::optional<CheckAt> check_at;

  CheckAt effective_check_at() const noexcept {
    return check_at.value_or(kind == PropertyKind::reach ? CheckAt::final_step : CheckAt::all_steps);
  }
};

enum class Verdict { proved, disproved, unknown };

const char* to_string(Verdict v) noexcept;

struct ReachConfig {
  unsigned order = 4;
  std::optional<unsigned> nn_order;  ///< TM order for the controller abstraction
  unsigned bernstein_order = 2;
  unsigned samples = 100;
  unsigned flowsteps = 10;
  bool symbolic = false;
  RemainderMode remainder_mode = RemainderMode::sampled;
  CertifyConfig certify;
};

struct StepFlowpipe {
  std::size_t control_step = 0;
  Flowpipe pipe;

  /// Start time of the flowpipe from time zero.
  double start_time(double control_step_len) const noexcept {
    return static_cast<double>(control_step) * control_step_len + pipe.t_offset;
  }
};

struct StepStats {
  IntervalVector control_remainder;  ///< remainders of the controller output TM
  IntervalVector state_remainder;    ///< remainders of the state TM after the step
};

struct ReachResult {
  std::vector<StepFlowpipe> flowpipes;
  std::vector<IntervalVector> step_ranges;  ///< hull of the flowpipe boxes per control step
  std::vector<StepStats> stats;
  IntervalVector init;
  double control_step = 0.0;
  unsigned flowsteps = 0;
  Verdict verdict = Verdict::unknown;
  double wall_seconds = 0.0;

  std::size_t num_control_steps() const noexcept { return step_ranges.size(); }
};

/// Axis-aligned box of a flowpipe over its whole parameter and time domain.
IntervalVector flowpipe_box(const Flowpipe& f);

/// K control steps of alternating controller abstraction and flowpipe
/// construction. Sets the verdict when a property is given.
/// Throws ContractionFailure tagged with control and flowpipe step.
ReachResult run_reachability(const NNCSModel& model, unsigned K, const ReachConfig& cfg,
                             const std::optional<TargetSpec>& property = std::nullopt);

/// Three-valued verdict from flowpipe boxes.
Verdict check_property(const ReachResult& result, const TargetSpec& spec);

/// Verdict of a reach property from the final-step range alone.
Verdict reach_verdict(std::span<const Interval> final_range, std::span<const Interval> target);

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;  ///< states[0] is the initial state
};

/// RK4 with the control recomputed by the network at every control step and
/// held constant in between. fine_dt must divide the control step.
Trajectory simulate(const NNCSModel& model, std::span<const double> x0, unsigned K, double fine_dt);

/// Uniform samples from a box, deterministic in the seed.
std::vector<std::vector<double>> sample_box(std::span<const Interval> box, std::size_t count, std::uint64_t seed);

struct Violation {
  double time = 0.0;
  std::size_t var = 0;
  double value = 0.0;
  Interval enclosure;
};

/// Evaluates the covering flowpipe at the trajectory's own parameter point
/// and local time. Values may exceed the enclosure by tol * (1 + |value|) to
/// allow for simulator error.
std::vector<Violation> containment_check(const ReachResult& result, const Trajectory& traj, double tol = 1e-9);

}  // namespace polar
